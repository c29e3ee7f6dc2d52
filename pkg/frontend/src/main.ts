import { ApiClient } from './api';
import { ChatPanel } from './chat';
import { ClusterMap } from './map';
import { SearchPanel } from './search';
import { Store } from './state';
import { TimelineBrush } from './timeline';

function must<T extends Element>(selector: string): T {
  const el = document.querySelector<T>(selector);
  if (!el) throw new Error(`missing element ${selector}`);
  return el;
}

async function boot(): Promise<void> {
  const api = new ApiClient('');
  const store = new Store();

  const map = new ClusterMap(must<HTMLCanvasElement>('#map'), api, store);
  const timeline = new TimelineBrush(must<HTMLCanvasElement>('#timeline'), api, store);
  const search = new SearchPanel(must<HTMLElement>('#results'), api, store);
  const chat = new ChatPanel(must<HTMLElement>('#chat-log'), api, store);

  const searchInput = must<HTMLInputElement>('#search-input');
  searchInput.addEventListener('keydown', (e) => {
    if (e.key === 'Enter' && searchInput.value.trim()) {
      void search.run(searchInput.value.trim());
    }
  });
  must<HTMLSelectElement>('#search-mode').addEventListener('change', (e) => {
    search.setMode((e.target as HTMLSelectElement).value as 'lexical' | 'semantic');
  });

  const chatInput = must<HTMLInputElement>('#chat-input');
  chatInput.addEventListener('keydown', (e) => {
    if (e.key === 'Enter' && chatInput.value.trim()) {
      void chat.ask(chatInput.value.trim());
      chatInput.value = '';
    }
  });
  must<HTMLSelectElement>('#qa-mode').addEventListener('change', (e) => {
    chat.setMode((e.target as HTMLSelectElement).value as 'corpus' | 'document');
  });
  must<HTMLButtonElement>('#clear-filters').addEventListener('click', () => {
    store.reset();
  });

  const health = await api.health();
  must<HTMLElement>('#status').textContent =
    `${health.doc_count} documents · snapshot ${health.snapshot_id ?? 'n/a'}`;
  await Promise.all([map.refresh(), timeline.refresh()]);
}

void boot();
