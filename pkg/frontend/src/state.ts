import { CorpusFilter, QaMode } from './types';

export interface ViewState {
  selectedTopicIds: string[];
  dateFrom: string | null;
  dateTo: string | null;
  titleKeyword: string | null;
  qaMode: QaMode;
}

export type StateListener = (state: ViewState) => void;

const INITIAL: ViewState = {
  selectedTopicIds: [],
  dateFrom: null,
  dateTo: null,
  titleKeyword: null,
  qaMode: 'corpus',
};

/**
 * Single source of truth for what the user is looking at. Components write
 * through the mutators and re-query the API when notified; the active filter
 * sent with every request is derived here so all panels stay consistent.
 */
export class Store {
  private state: ViewState = { ...INITIAL };
  private listeners: StateListener[] = [];

  getState(): ViewState {
    return { ...this.state, selectedTopicIds: [...this.state.selectedTopicIds] };
  }

  subscribe(listener: StateListener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    const snapshot = this.getState();
    for (const listener of this.listeners) listener(snapshot);
  }

  /** Toggle one topic in or out of the selection. */
  toggleTopic(topicId: string): void {
    const current = this.state.selectedTopicIds;
    this.state.selectedTopicIds = current.includes(topicId)
      ? current.filter((t) => t !== topicId)
      : [...current, topicId];
    this.emit();
  }

  clearTopics(): void {
    if (this.state.selectedTopicIds.length === 0) return;
    this.state.selectedTopicIds = [];
    this.emit();
  }

  /** Set the date window from a timeline brush; null clears a bound. */
  setDateRange(from: string | null, to: string | null): void {
    this.state.dateFrom = from;
    this.state.dateTo = to;
    this.emit();
  }

  setTitleKeyword(keyword: string | null): void {
    this.state.titleKeyword = keyword && keyword.trim() ? keyword.trim() : null;
    this.emit();
  }

  setQaMode(mode: QaMode): void {
    if (this.state.qaMode === mode) return;
    this.state.qaMode = mode;
    this.emit();
  }

  reset(): void {
    this.state = { ...INITIAL };
    this.emit();
  }

  /** The conjunctive filter implied by the current view. */
  activeFilter(): CorpusFilter {
    const filter: CorpusFilter = {};
    if (this.state.selectedTopicIds.length > 0) {
      filter.topic_ids = [...this.state.selectedTopicIds].sort();
    }
    if (this.state.dateFrom) filter.date_from = this.state.dateFrom;
    if (this.state.dateTo) filter.date_to = this.state.dateTo;
    if (this.state.titleKeyword) filter.title_keyword = this.state.titleKeyword;
    return filter;
  }
}
