// Live transcript rendering: one card per entry, idempotent by sequence
// number, tool_call/tool_result pairs visually linked via data-call-id.

import type { SessionStore } from './store.js';
import type { TranscriptEntry } from './types.js';

const KIND_LABELS: Record<string, string> = {
  message: '',
  tool_call: 'tool call',
  tool_result: 'tool result',
  human_intervention: 'human steering',
  termination: 'session terminated',
};

export class TranscriptView {
  private rendered = new Set<number>();

  constructor(
    private container: HTMLElement,
    private store: SessionStore,
  ) {
    store.onChange(() => this.render());
  }

  render(): void {
    for (const entry of this.store.entries) {
      if (this.rendered.has(entry.seq)) continue;
      this.rendered.add(entry.seq);
      this.container.appendChild(this.card(entry));
    }
    this.renderPending();
  }

  private card(entry: TranscriptEntry): HTMLElement {
    const card = document.createElement('article');
    card.className = `entry entry-${entry.kind}`;
    card.dataset.seq = String(entry.seq);
    if (entry.call_id) card.dataset.callId = entry.call_id;

    const header = document.createElement('header');
    const author = document.createElement('strong');
    author.textContent = entry.author;
    header.appendChild(author);
    const kind = KIND_LABELS[entry.kind];
    if (kind) {
      const badge = document.createElement('span');
      badge.className = 'kind-badge';
      badge.textContent = kind;
      header.appendChild(badge);
    }
    card.appendChild(header);

    const body = document.createElement('pre');
    body.textContent = entry.content;
    card.appendChild(body);
    return card;
  }

  private renderPending(): void {
    const stale = this.container.querySelectorAll('[data-pending]');
    stale.forEach((node) => node.remove());
    for (const pending of this.store.visiblePending()) {
      const card = document.createElement('article');
      card.className = `entry entry-pending entry-pending-${pending.state}`;
      card.dataset.pending = String(pending.localId);
      const body = document.createElement('pre');
      body.textContent =
        pending.state === 'failed'
          ? `${pending.text}\n(failed: ${pending.reason ?? 'rejected'})`
          : `${pending.text}\n(sending...)`;
      card.appendChild(body);
      this.container.appendChild(card);
    }
  }

  renderedCount(): number {
    return this.rendered.size;
  }
}
