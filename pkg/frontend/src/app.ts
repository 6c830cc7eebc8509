// Application wiring: start form -> session view (live transcript, graph
// tab, document tab, intervention composer). All state derives from the
// event stream plus REST reads.

import { ApiClient, ApiError } from './api.js';
import { renderGraph } from './graphView.js';
import { SessionStore } from './store.js';
import { streamSessionEvents } from './sse.js';
import { TranscriptView } from './transcriptView.js';
import type { StartFormFields } from './types.js';
import { validateStartForm } from './validate.js';

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

export function startApp(baseUrl: string): void {
  const api = new ApiClient(baseUrl);
  const form = el<HTMLFormElement>('start-form');
  const errorsBox = el<HTMLElement>('form-errors');
  const sessionSection = el<HTMLElement>('session');
  const sessionTitle = el<HTMLElement>('session-title');
  const statusBadge = el<HTMLElement>('status-badge');
  const transcriptBox = el<HTMLElement>('transcript');
  const composer = el<HTMLFormElement>('composer');
  const composerInput = el<HTMLInputElement>('composer-text');
  const composerSend = el<HTMLButtonElement>('composer-send');
  const graphBox = el<HTMLElement>('graph');
  const documentBox = el<HTMLElement>('document');

  api
    .graphStats()
    .then((stats) => {
      el('graph-stats').textContent = `${stats.nodes} concepts, ${stats.edges} relations loaded`;
    })
    .catch(() => {
      el('graph-stats').textContent = 'service unreachable';
    });

  form.addEventListener('submit', (event) => {
    event.preventDefault();
    const fields = readForm(form);
    const result = validateStartForm(fields);
    errorsBox.textContent = '';
    if (!result.ok || !result.request) {
      // inline errors; no request is sent
      errorsBox.textContent = Object.entries(result.errors)
        .map(([field, message]) => `${field}: ${message}`)
        .join('\n');
      return;
    }
    if (fields.mode === 'group_chat') result.request.human_wait = 120;
    api
      .createSession(result.request)
      .then(({ id }) => openSession(id, fields))
      .catch((error: unknown) => {
        errorsBox.textContent = error instanceof ApiError ? error.detail : String(error);
      });
  });

  function openSession(id: string, fields: StartFormFields): void {
    sessionSection.hidden = false;
    const title = fields.random
      ? 'random concept pair'
      : `${fields.keyword1} ↔ ${fields.keyword2}`;
    sessionTitle.textContent = `session ${id}: ${title}`;
    transcriptBox.textContent = '';

    const store = new SessionStore();
    new TranscriptView(transcriptBox, store);
    store.onChange(() => {
      statusBadge.textContent = store.status;
      statusBadge.className = `badge badge-${store.status}`;
      const enabled = fields.mode === 'group_chat' && store.composerEnabled;
      composerInput.disabled = !enabled;
      composerSend.disabled = !enabled;
      if (store.status === 'finished') {
        api.documentMarkdown(id).then(
          (markdown) => {
            documentBox.textContent = markdown; // verbatim, no restructuring
          },
          () => {
            documentBox.textContent = '(no document produced)';
          },
        );
      }
    });

    composer.onsubmit = (event) => {
      event.preventDefault();
      const text = composerInput.value.trim();
      if (!text || composerInput.disabled) return;
      composerInput.value = '';
      const card = store.addPending(text);
      api.postHumanMessage(id, text).catch((error: unknown) => {
        store.markPendingFailed(
          card.localId,
          error instanceof ApiError ? error.detail : String(error),
        );
      });
    };

    if (!fields.random) {
      api
        .graphPath({
          from: fields.keyword1,
          to: fields.keyword2,
          alpha: fields.alpha,
          waypoints: fields.waypoints,
          hops: fields.hops,
          seed: fields.seed,
        })
        .then((path) => {
          renderGraph(graphBox, {
            nodes: path.subgraph.nodes,
            edges: path.subgraph.edges,
            highlight: path.nodes,
          });
        })
        .catch(() => {
          graphBox.textContent = '(no subgraph available)';
        });
    }

    void (async () => {
      try {
        for await (const event of streamSessionEvents(baseUrl, id)) {
          store.apply(event);
        }
      } catch (error) {
        errorsBox.textContent = `event stream lost: ${String(error)}`;
      }
    })();
  }
}

function readForm(form: HTMLFormElement): StartFormFields {
  const data = new FormData(form);
  const get = (name: string) => String(data.get(name) ?? '');
  return {
    mode: get('mode'),
    random: data.get('random') === 'on',
    keyword1: get('keyword1'),
    keyword2: get('keyword2'),
    alpha: get('alpha'),
    waypoints: get('waypoints'),
    hops: get('hops'),
    seed: get('seed'),
    maxTurns: get('maxTurns'),
  };
}
