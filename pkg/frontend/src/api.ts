import {
  CorpusFilter,
  HealthResponse,
  MapResponse,
  QaMode,
  QaResponse,
  SearchResponse,
  TimelineResponse,
} from './types';

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiRequestError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = 'ApiRequestError';
  }
}

export interface SearchParams {
  query: string;
  mode?: 'lexical' | 'semantic';
  field?: 'body' | 'title';
  k?: number;
  offset?: number;
  filter?: CorpusFilter;
}

export interface QaParams {
  mode: QaMode;
  query: string;
  filter?: CorpusFilter;
  topicIds?: string[];
}

function isEmptyFilter(filter?: CorpusFilter): boolean {
  if (!filter) return true;
  return (
    filter.date_from === undefined &&
    filter.date_to === undefined &&
    filter.title_keyword === undefined &&
    (filter.topic_ids === undefined || filter.topic_ids.length === 0)
  );
}

/**
 * Thin typed client over the gateway. The fetch implementation is injectable
 * so tests can intercept requests without a server.
 */
export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const body = await response.json();
    if (!response.ok) {
      throw new ApiRequestError(
        response.status,
        typeof body.code === 'string' ? body.code : 'unknown',
        typeof body.message === 'string' ? body.message : response.statusText,
      );
    }
    return body as T;
  }

  private withFilter(params: URLSearchParams, filter?: CorpusFilter): void {
    if (!isEmptyFilter(filter)) {
      params.set('filter', JSON.stringify(filter));
    }
  }

  health(): Promise<HealthResponse> {
    return this.request<HealthResponse>('/health');
  }

  map(filter?: CorpusFilter): Promise<MapResponse> {
    const params = new URLSearchParams();
    this.withFilter(params, filter);
    const qs = params.toString();
    return this.request<MapResponse>(qs ? `/map?${qs}` : '/map');
  }

  search(p: SearchParams): Promise<SearchResponse> {
    const params = new URLSearchParams({ q: p.query });
    if (p.mode) params.set('mode', p.mode);
    if (p.field) params.set('field', p.field);
    if (p.k !== undefined) params.set('k', String(p.k));
    if (p.offset !== undefined) params.set('offset', String(p.offset));
    this.withFilter(params, p.filter);
    return this.request<SearchResponse>(`/search?${params.toString()}`);
  }

  timeline(bucket: 'day' | 'week' | 'month', filter?: CorpusFilter): Promise<TimelineResponse> {
    const params = new URLSearchParams({ bucket });
    this.withFilter(params, filter);
    return this.request<TimelineResponse>(`/timeline?${params.toString()}`);
  }

  qa(p: QaParams): Promise<QaResponse> {
    const payload: Record<string, unknown> = { mode: p.mode, query: p.query };
    if (!isEmptyFilter(p.filter)) payload.filter = p.filter;
    if (p.topicIds && p.topicIds.length > 0) payload.topic_ids = p.topicIds;
    return this.request<QaResponse>('/qa', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(payload),
    });
  }
}
