// Session state derived purely from the event stream plus REST reads.
// Rendering the same event log always produces the same state: entries are
// keyed and ordered by sequence number, duplicates are dropped, and no
// client-only state affects ordering.

import type {
  SessionEvent,
  SessionStatus,
  TranscriptEntry,
} from './types.js';

export interface PendingIntervention {
  localId: number;
  text: string;
  state: 'pending' | 'confirmed' | 'failed';
  reason?: string;
}

export class SessionStore {
  status: SessionStatus = 'running';
  entries: TranscriptEntry[] = [];
  pending: PendingIntervention[] = [];
  private seen = new Set<number>();
  private entrySeqs = new Set<number>();
  private nextLocalId = 1;
  private listeners: Array<() => void> = [];

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  /** Apply one stream event; duplicates (by event seq) are no-ops. */
  apply(event: SessionEvent): void {
    if (this.seen.has(event.seq)) return;
    this.seen.add(event.seq);
    if (event.type === 'status') {
      this.status = (event.payload as { status: SessionStatus }).status;
      this.emit();
      return;
    }
    const entry = event.payload as TranscriptEntry;
    if (this.entrySeqs.has(entry.seq)) return;
    this.entrySeqs.add(entry.seq);
    this.entries.push(entry);
    this.entries.sort((a, b) => a.seq - b.seq);
    if (entry.kind === 'human_intervention') {
      this.confirmPending(entry.content);
    }
    this.emit();
  }

  /** Transcript sequence numbers start at 0 and are gapless once sorted. */
  isGapless(): boolean {
    return this.entries.every((entry, index) => entry.seq === index);
  }

  get terminated(): boolean {
    return this.entries.some((e) => e.kind === 'termination');
  }

  get composerEnabled(): boolean {
    return (this.status === 'running' || this.status === 'awaiting_human') && !this.terminated;
  }

  /** Optimistic card for a just-sent intervention. */
  addPending(text: string): PendingIntervention {
    const card: PendingIntervention = { localId: this.nextLocalId++, text, state: 'pending' };
    this.pending.push(card);
    this.emit();
    return card;
  }

  markPendingFailed(localId: number, reason: string): void {
    const card = this.pending.find((p) => p.localId === localId);
    if (card) {
      card.state = 'failed';
      card.reason = reason;
      this.emit();
    }
  }

  private confirmPending(text: string): void {
    const card = this.pending.find((p) => p.state === 'pending' && p.text === text);
    if (card) {
      card.state = 'confirmed'; // authoritative event replaces the optimistic card
    }
  }

  /** Cards still worth drawing under the composer. */
  visiblePending(): PendingIntervention[] {
    return this.pending.filter((p) => p.state !== 'confirmed');
  }
}
