// Wire types for the engine bridge. Events arrive as newline-delimited JSON
// with monotone sequence numbers; commands are JSON POSTs.

export interface GraphNode {
  name: string;
  coords: [number, number];
  attributes?: Record<string, string>;
}

export interface GraphDoc {
  objects: GraphNode[];
  regions: GraphNode[];
  object_connections: [string, string][];
  region_connections: [string, string][];
  robot_location: string;
}

export interface GridDoc {
  resolution: number;
  origin: [number, number];
  width: number;
  height: number;
  rows: string[]; // run-length encoded, northernmost row first
}

export interface MetricsDoc {
  success: boolean;
  time: number;
  distance: number;
  interactions: number;
  queries: number;
}

export interface BaseEvent {
  seq: number;
  type: string;
}

export interface SnapshotEvent extends BaseEvent {
  type: "snapshot";
  graph: GraphDoc;
  grid: GridDoc;
  robot: { pose: [number, number]; distance: number; time: number };
  metrics: MetricsDoc;
  state: string;
}

export interface MessageEvent extends BaseEvent {
  type: "message";
  role: "system" | "user" | "assistant";
  content: string;
  kind: string;
}

export interface PlanProposedEvent extends BaseEvent {
  type: "plan_proposed";
  document: {
    primary_goal: string;
    relevant_graph: string;
    reasoning: string;
    plan: string;
  };
}

export interface FeedbackEvent extends BaseEvent {
  type: "feedback";
  text: string;
}

export interface BehaviorEvent extends BaseEvent {
  type: "behavior";
  call: string;
  blocked: string | null;
  refused: string | null;
  user_messages: string[];
  distance: number;
  time: number;
}

export interface ClarifyEvent extends BaseEvent {
  type: "clarify_asked";
  question: string;
}

export interface StateEvent extends BaseEvent {
  type: "state";
  state: string;
  detail: string;
}

export interface MetricEvent extends BaseEvent, MetricsDoc {
  type: "metric";
}

export type EngineEvent =
  | SnapshotEvent
  | MessageEvent
  | PlanProposedEvent
  | FeedbackEvent
  | BehaviorEvent
  | ClarifyEvent
  | StateEvent
  | MetricEvent
  | (BaseEvent & Record<string, unknown>); // meta, delta, future kinds

export type CommandKind =
  | "start_mission"
  | "clarify_reply"
  | "intervene"
  | "pause"
  | "resume";

export interface CommandAck {
  ok: boolean;
  state: string;
  error?: string;
}

export const FREE = ".";
export const OCCUPIED = "#";
export const UNKNOWN = "?";

/** Decode one run-length encoded grid row ("12.3#5?") into cell symbols. */
export function decodeRow(row: string): string[] {
  const out: string[] = [];
  const re = /(\d+)([.#?])/g;
  let match: RegExpExecArray | null;
  let consumed = 0;
  while ((match = re.exec(row)) !== null) {
    if (match.index !== consumed) {
      throw new Error(`malformed RLE row at column ${consumed}`);
    }
    consumed = re.lastIndex;
    const count = parseInt(match[1], 10);
    for (let i = 0; i < count; i++) out.push(match[2]);
  }
  if (consumed !== row.length) {
    throw new Error(`malformed RLE row at column ${consumed}`);
  }
  return out;
}
