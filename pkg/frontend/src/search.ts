import { ApiClient } from './api';
import { Store } from './state';
import { SearchHit } from './types';

/**
 * Search box with lexical/semantic toggle. Results render as a plain list;
 * every query carries the store's active filter so the map selection and
 * timeline brush constrain the hits.
 */
export class SearchPanel {
  private hits: SearchHit[] = [];
  private lastQuery = '';
  private mode: 'lexical' | 'semantic' = 'lexical';

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly store: Store,
  ) {
    this.store.subscribe(() => {
      if (this.lastQuery) void this.run(this.lastQuery);
    });
  }

  setMode(mode: 'lexical' | 'semantic'): void {
    this.mode = mode;
  }

  async run(query: string): Promise<SearchHit[]> {
    this.lastQuery = query;
    try {
      const response = await this.api.search({
        query,
        mode: this.mode,
        k: 20,
        filter: this.store.activeFilter(),
      });
      this.hits = response.hits;
    } catch {
      this.hits = [];
    }
    this.render();
    return this.hits;
  }

  render(): void {
    this.root.textContent = '';
    const list = this.root.ownerDocument.createElement('ol');
    for (const hit of this.hits) {
      const item = this.root.ownerDocument.createElement('li');
      item.dataset.docId = hit.doc_id;
      item.textContent = `${hit.title} (${hit.pub_date}) · ${hit.score.toFixed(3)}`;
      list.appendChild(item);
    }
    this.root.appendChild(list);
  }
}
