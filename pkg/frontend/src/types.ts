// Wire types mirroring the session-service API.

export type EntryKind =
  | 'message'
  | 'tool_call'
  | 'tool_result'
  | 'human_intervention'
  | 'termination';

export interface TranscriptEntry {
  seq: number;
  author: string;
  kind: EntryKind;
  content: string;
  timestamp: number;
  call_id?: string;
}

export type SessionStatus = 'running' | 'awaiting_human' | 'finished' | 'failed';

export interface SessionEvent {
  seq: number;
  type: 'entry' | 'status';
  payload: TranscriptEntry | { status: SessionStatus };
  ts: number;
}

export interface SessionInfo {
  id: string;
  mode: 'scripted' | 'group_chat';
  status: SessionStatus;
  document_ready: boolean;
  event_count: number;
}

export interface StartFormFields {
  mode: string;
  random: boolean;
  keyword1: string;
  keyword2: string;
  alpha: string;
  waypoints: string;
  hops: string;
  seed: string;
  maxTurns: string;
}

export interface SessionRequestBody {
  mode: string;
  keyword_1?: string;
  keyword_2?: string;
  alpha: number;
  k_waypoints: number;
  hops: number;
  seed: number;
  max_turns: number;
  human_wait?: number;
}

export interface GraphNode {
  id: string;
  label: string;
}

export interface GraphEdge {
  source: string;
  target: string;
  relation: string;
}

export interface PathResponse {
  nodes: string[];
  labels: string[];
  relations: string[];
  path_string: string;
  subgraph: { nodes: GraphNode[]; edges: GraphEdge[] };
}
