import { ApiClient } from './api';
import { Store } from './state';
import { MapResponse, TopicNode } from './types';

const POINT_RADIUS = 2;
const TOPIC_HIT_RADIUS = 14;
const PALETTE = [
  '#4e79a7', '#f28e2b', '#e15759', '#76b7b2', '#59a14f',
  '#edc948', '#b07aa1', '#ff9da7', '#9c755f', '#bab0ac',
];

interface Viewport {
  minX: number;
  maxX: number;
  minY: number;
  maxY: number;
}

/**
 * Canvas scatter of the corpus: one dot per document, one labelled marker per
 * leaf topic. Clicking a topic marker toggles it in the shared selection,
 * which every panel picks up through the store's active filter.
 */
export class ClusterMap {
  private data: MapResponse | null = null;
  private viewport: Viewport = { minX: 0, maxX: 1, minY: 0, maxY: 1 };

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private readonly api: ApiClient,
    private readonly store: Store,
  ) {
    this.canvas.addEventListener('click', (event) => this.onClick(event));
    this.store.subscribe(() => {
      void this.refresh();
    });
  }

  async refresh(): Promise<void> {
    this.data = await this.api.map(this.store.activeFilter());
    this.fitViewport();
    this.render();
  }

  /** Leaf topics currently drawn as clickable markers. */
  visibleTopics(): TopicNode[] {
    if (!this.data) return [];
    const parents = new Set(
      this.data.topics.map((t) => t.parent_id).filter((p) => p !== null),
    );
    return this.data.topics.filter((t) => t.level === 0 || !parents.has(t.topic_id));
  }

  private fitViewport(): void {
    if (!this.data || this.data.points.length === 0) return;
    const xs = this.data.points.map((p) => p.x);
    const ys = this.data.points.map((p) => p.y);
    const minX = Math.min(...xs);
    const maxX = Math.max(...xs);
    const minY = Math.min(...ys);
    const maxY = Math.max(...ys);
    const padX = (maxX - minX || 1) * 0.05;
    const padY = (maxY - minY || 1) * 0.05;
    this.viewport = {
      minX: minX - padX,
      maxX: maxX + padX,
      minY: minY - padY,
      maxY: maxY + padY,
    };
  }

  toScreen(x: number, y: number): [number, number] {
    const { minX, maxX, minY, maxY } = this.viewport;
    const sx = ((x - minX) / (maxX - minX)) * this.canvas.width;
    const sy = (1 - (y - minY) / (maxY - minY)) * this.canvas.height;
    return [sx, sy];
  }

  private colorFor(topicId: string): string {
    let h = 0;
    for (let i = 0; i < topicId.length; i++) {
      h = (h * 31 + topicId.charCodeAt(i)) >>> 0;
    }
    return PALETTE[h % PALETTE.length];
  }

  render(): void {
    const ctx = this.canvas.getContext('2d');
    if (!ctx || !this.data) return;
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
    const selected = new Set(this.store.getState().selectedTopicIds);
    for (const point of this.data.points) {
      const [sx, sy] = this.toScreen(point.x, point.y);
      ctx.globalAlpha =
        selected.size === 0 || selected.has(point.topic_id) ? 0.8 : 0.15;
      ctx.fillStyle = this.colorFor(point.topic_id);
      ctx.beginPath();
      ctx.arc(sx, sy, POINT_RADIUS, 0, Math.PI * 2);
      ctx.fill();
    }
    ctx.globalAlpha = 1;
    ctx.font = '12px sans-serif';
    for (const topic of this.visibleTopics()) {
      const [sx, sy] = this.toScreen(topic.x, topic.y);
      ctx.fillStyle = selected.has(topic.topic_id) ? '#000' : '#444';
      ctx.beginPath();
      ctx.arc(sx, sy, 5, 0, Math.PI * 2);
      ctx.fill();
      ctx.fillText(topic.label, sx + 8, sy + 4);
    }
  }

  /** Topic marker under a canvas-space position, if any. */
  hitTest(px: number, py: number): TopicNode | null {
    let best: TopicNode | null = null;
    let bestDist = TOPIC_HIT_RADIUS;
    for (const topic of this.visibleTopics()) {
      const [sx, sy] = this.toScreen(topic.x, topic.y);
      const dist = Math.hypot(sx - px, sy - py);
      if (dist < bestDist) {
        best = topic;
        bestDist = dist;
      }
    }
    return best;
  }

  private onClick(event: MouseEvent): void {
    const rect = this.canvas.getBoundingClientRect();
    const topic = this.hitTest(event.clientX - rect.left, event.clientY - rect.top);
    if (topic) {
      this.store.toggleTopic(topic.topic_id);
    } else {
      this.store.clearTopics();
    }
  }
}
