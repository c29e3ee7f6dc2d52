/** Wire types for the corpusatlas HTTP API. */

export interface MapPoint {
  doc_id: string;
  x: number;
  y: number;
  topic_id: string;
}

export interface TopicNode {
  topic_id: string;
  label: string;
  x: number;
  y: number;
  size: number;
  parent_id: string | null;
  level: number;
}

export interface MapResponse {
  points: MapPoint[];
  topics: TopicNode[];
  truncated: boolean;
  total: number;
}

export interface SearchHit {
  doc_id: string;
  title: string;
  pub_date: string;
  journal: string | null;
  authors: string[];
  score: number;
  rank: number;
  matched_field: string;
}

export interface SearchResponse {
  hits: SearchHit[];
}

export interface TimelineBucket {
  start: string;
  count: number;
}

export interface TimelineResponse {
  buckets: TimelineBucket[];
}

export type QaMode = 'corpus' | 'document';

export interface QaResponse {
  text: string;
  mode: QaMode;
  /** Topic ids in corpus mode, doc ids in document mode. */
  citations: string[];
  contexts: [string, string, number][];
  degraded: boolean;
}

export interface HealthResponse {
  status: string;
  snapshot_id: string | null;
  doc_count: number;
}

/** Conjunctive filter; omitted fields do not constrain. */
export interface CorpusFilter {
  date_from?: string;
  date_to?: string;
  topic_ids?: string[];
  title_keyword?: string;
}

export interface ApiError {
  code: string;
  message: string;
  detail: unknown;
}
