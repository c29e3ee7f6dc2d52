import { ApiClient } from './api';
import { Store } from './state';
import { QaResponse } from './types';

export interface ChatTurn {
  question: string;
  response: QaResponse | null;
  error: string | null;
}

/**
 * Chat panel over the QA endpoint. The corpus/document toggle writes the
 * store's qaMode; each question is sent in the current mode with the active
 * filter attached (document mode only, since corpus routing works on labels).
 * Citations render as chips: topic chips select the topic on the map, doc
 * chips are inert references.
 */
export class ChatPanel {
  private turns: ChatTurn[] = [];

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly store: Store,
  ) {}

  setMode(mode: 'corpus' | 'document'): void {
    this.store.setQaMode(mode);
  }

  async ask(question: string): Promise<ChatTurn> {
    const mode = this.store.getState().qaMode;
    const selected = this.store.getState().selectedTopicIds;
    const turn: ChatTurn = { question, response: null, error: null };
    try {
      turn.response = await this.api.qa({
        mode,
        query: question,
        filter: mode === 'document' ? this.store.activeFilter() : undefined,
        topicIds: mode === 'corpus' && selected.length > 0 ? selected : undefined,
      });
    } catch (err) {
      turn.error = err instanceof Error ? err.message : String(err);
    }
    this.turns.push(turn);
    this.render();
    return turn;
  }

  getTurns(): ChatTurn[] {
    return [...this.turns];
  }

  render(): void {
    const doc = this.root.ownerDocument;
    this.root.textContent = '';
    for (const turn of this.turns) {
      const block = doc.createElement('div');
      block.className = 'chat-turn';

      const question = doc.createElement('p');
      question.className = 'chat-question';
      question.textContent = turn.question;
      block.appendChild(question);

      const answer = doc.createElement('p');
      answer.className = 'chat-answer';
      answer.textContent = turn.error
        ? `Error: ${turn.error}`
        : turn.response?.text ?? '';
      block.appendChild(answer);

      if (turn.response) {
        if (turn.response.degraded) {
          const note = doc.createElement('p');
          note.className = 'chat-degraded';
          note.textContent = 'Offline fallback answer.';
          block.appendChild(note);
        }
        const chips = doc.createElement('div');
        chips.className = 'chat-citations';
        for (const citation of turn.response.citations) {
          const chip = doc.createElement('button');
          chip.className = 'citation-chip';
          chip.dataset.citation = citation;
          chip.dataset.kind = turn.response.mode === 'corpus' ? 'topic' : 'doc';
          chip.textContent = citation;
          if (turn.response.mode === 'corpus') {
            chip.addEventListener('click', () => this.store.toggleTopic(citation));
          }
          chips.appendChild(chip);
        }
        block.appendChild(chips);
      }
      this.root.appendChild(block);
    }
  }
}
