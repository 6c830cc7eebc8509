// Fetch-based server-sent-events client with resume-on-drop.
//
// The service replays persisted events then follows live ones; on any
// network drop we reconnect with ?from=<last seen seq + 1>. The boundary
// event may be delivered twice; consumers dedup by sequence number.

import type { SessionEvent } from './types.js';

export interface SSEMessage {
  event: string;
  id: string;
  data: string;
}

export async function* parseSSE(
  body: ReadableStream<Uint8Array>,
): AsyncGenerator<SSEMessage> {
  const reader = body.getReader();
  const decoder = new TextDecoder();
  let buffer = '';
  try {
    while (true) {
      const { done, value } = await reader.read();
      if (done) break;
      buffer += decoder.decode(value, { stream: true });
      let boundary = buffer.indexOf('\n\n');
      while (boundary !== -1) {
        const block = buffer.slice(0, boundary);
        buffer = buffer.slice(boundary + 2);
        const message: SSEMessage = { event: 'message', id: '', data: '' };
        for (const line of block.split('\n')) {
          if (line.startsWith('data: ')) {
            message.data += (message.data ? '\n' : '') + line.slice(6);
          } else if (line.startsWith('id: ')) {
            message.id = line.slice(4);
          } else if (line.startsWith('event: ')) {
            message.event = line.slice(7);
          }
        }
        yield message;
        boundary = buffer.indexOf('\n\n');
      }
    }
  } finally {
    reader.releaseLock();
  }
}

export type FetchLike = (url: string) => Promise<Response>;

export interface EventStreamOptions {
  fetcher?: FetchLike;
  maxReconnects?: number;
  reconnectDelayMs?: number;
}

/**
 * Streams a session's events, transparently resuming after drops.
 * Ends when the server sends its end-of-stream marker.
 */
export async function* streamSessionEvents(
  baseUrl: string,
  sessionId: string,
  fromSeq = 0,
  options: EventStreamOptions = {},
): AsyncGenerator<SessionEvent> {
  const fetcher = options.fetcher ?? ((url: string) => fetch(url));
  const maxReconnects = options.maxReconnects ?? 20;
  const delay = options.reconnectDelayMs ?? 250;
  let cursor = fromSeq;
  let attempts = 0;

  while (attempts <= maxReconnects) {
    let response: Response;
    try {
      response = await fetcher(
        `${baseUrl}/sessions/${sessionId}/events?from=${cursor}`,
      );
    } catch {
      attempts += 1;
      await sleep(delay);
      continue;
    }
    if (!response.ok || !response.body) {
      attempts += 1;
      await sleep(delay);
      continue;
    }
    try {
      for await (const message of parseSSE(response.body)) {
        if (message.event === 'end') return;
        if (!message.data) continue;
        const event = JSON.parse(message.data) as SessionEvent;
        cursor = event.seq + 1; // resume point after a drop
        yield event;
      }
      return; // clean close without end marker: treat as finished
    } catch {
      attempts += 1; // mid-stream drop: reconnect from cursor
      await sleep(delay);
    }
  }
  throw new Error(`event stream for ${sessionId} kept failing`);
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}
