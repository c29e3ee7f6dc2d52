import { ApiClient } from './api';
import { Store } from './state';
import { TimelineBucket } from './types';

const BAR_GAP = 1;

/**
 * Date histogram with a click-drag brush. Brushing a span writes date bounds
 * into the store, so subsequent map/search/qa requests carry them; clicking
 * without dragging clears the bounds.
 *
 * The histogram always shows the non-date parts of the active filter, so the
 * brush never filters its own x axis away.
 */
export class TimelineBrush {
  private buckets: TimelineBucket[] = [];
  private dragStart: number | null = null;
  private dragEnd: number | null = null;

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private readonly api: ApiClient,
    private readonly store: Store,
    private readonly bucket: 'day' | 'week' | 'month' = 'week',
  ) {
    this.canvas.addEventListener('mousedown', (e) => this.onDown(e));
    this.canvas.addEventListener('mousemove', (e) => this.onMove(e));
    this.canvas.addEventListener('mouseup', (e) => this.onUp(e));
    this.store.subscribe(() => {
      void this.refresh();
    });
  }

  async refresh(): Promise<void> {
    const filter = { ...this.store.activeFilter() };
    delete filter.date_from;
    delete filter.date_to;
    const response = await this.api.timeline(this.bucket, filter);
    this.buckets = response.buckets;
    this.render();
  }

  render(): void {
    const ctx = this.canvas.getContext('2d');
    if (!ctx) return;
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
    if (this.buckets.length === 0) return;
    const maxCount = Math.max(...this.buckets.map((b) => b.count), 1);
    const barWidth = this.canvas.width / this.buckets.length;
    const { dateFrom, dateTo } = this.store.getState();
    this.buckets.forEach((bucket, i) => {
      const height = (bucket.count / maxCount) * (this.canvas.height - 4);
      const inRange =
        (!dateFrom || bucket.start >= dateFrom) && (!dateTo || bucket.start <= dateTo);
      ctx.fillStyle = inRange ? '#4e79a7' : '#c8d3de';
      ctx.fillRect(
        i * barWidth,
        this.canvas.height - height,
        Math.max(barWidth - BAR_GAP, 1),
        height,
      );
    });
  }

  /** Bucket index for a canvas-space x position, clamped to the data. */
  bucketAt(px: number): number {
    if (this.buckets.length === 0) return 0;
    const i = Math.floor((px / this.canvas.width) * this.buckets.length);
    return Math.min(Math.max(i, 0), this.buckets.length - 1);
  }

  /** Apply a brush spanning two bucket indices (either order). */
  brushRange(a: number, b: number): void {
    if (this.buckets.length === 0) return;
    const lo = Math.min(a, b);
    const hi = Math.max(a, b);
    const from = this.buckets[lo].start;
    const last = this.buckets[hi];
    const next = this.buckets[hi + 1];
    // half-open: end just before the next bucket starts, or open-ended at the tail
    const to = next ? addDays(next.start, -1) : addDays(last.start, 366);
    this.store.setDateRange(from, to);
  }

  clearBrush(): void {
    this.store.setDateRange(null, null);
  }

  private localX(event: MouseEvent): number {
    return event.clientX - this.canvas.getBoundingClientRect().left;
  }

  private onDown(event: MouseEvent): void {
    this.dragStart = this.bucketAt(this.localX(event));
    this.dragEnd = this.dragStart;
  }

  private onMove(event: MouseEvent): void {
    if (this.dragStart === null) return;
    this.dragEnd = this.bucketAt(this.localX(event));
  }

  private onUp(event: MouseEvent): void {
    if (this.dragStart === null) return;
    const end = this.bucketAt(this.localX(event));
    if (end === this.dragStart && this.dragEnd === this.dragStart) {
      this.clearBrush();
    } else {
      this.brushRange(this.dragStart, end);
    }
    this.dragStart = null;
    this.dragEnd = null;
  }
}

function addDays(iso: string, days: number): string {
  const date = new Date(iso + 'T00:00:00Z');
  date.setUTCDate(date.getUTCDate() + days);
  return date.toISOString().slice(0, 10);
}
