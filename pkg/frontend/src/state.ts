// Console view model: fold the engine's event stream into everything the
// operator panes need. Rendering reads this; only operator commands may
// influence the engine.

import type {
  BehaviorEvent,
  ClarifyEvent,
  EngineEvent,
  FeedbackEvent,
  GraphDoc,
  GridDoc,
  MessageEvent,
  MetricsDoc,
  PlanProposedEvent,
  SnapshotEvent,
  StateEvent,
} from "./protocol.js";

export interface TranscriptItem {
  seq: number;
  kind: "plan" | "feedback" | "behavior" | "clarify" | "terminal" | "operator";
  title: string;
  body: string;
}

export interface ConsoleState {
  lastSeq: number;
  missedSeqs: number[]; // sequence-number audit: gaps we ever observed
  missionState: string;
  graph: GraphDoc | null;
  grid: GridDoc | null;
  robot: { pose: [number, number]; distance: number; time: number } | null;
  metrics: MetricsDoc | null;
  transcript: TranscriptItem[];
  pendingClarify: string | null;
  terminal: { state: string; detail: string } | null;
}

export function initialState(): ConsoleState {
  return {
    lastSeq: -1,
    missedSeqs: [],
    missionState: "idle",
    graph: null,
    grid: null,
    robot: null,
    metrics: null,
    transcript: [],
    pendingClarify: null,
    terminal: null,
  };
}

export function reduce(state: ConsoleState, ev: EngineEvent): ConsoleState {
  const next: ConsoleState = { ...state, transcript: [...state.transcript] };
  if (typeof ev.seq === "number") {
    if (ev.seq > state.lastSeq + 1) {
      const missed = [...state.missedSeqs];
      for (let s = state.lastSeq + 1; s < ev.seq; s++) missed.push(s);
      next.missedSeqs = missed;
    }
    if (ev.seq <= state.lastSeq) {
      return state; // duplicate delivery (resync overlap): ignore
    }
    next.lastSeq = ev.seq;
  }

  switch (ev.type) {
    case "snapshot": {
      const snap = ev as SnapshotEvent;
      next.graph = snap.graph ?? next.graph;
      next.grid = snap.grid ?? next.grid;
      next.robot = snap.robot ?? next.robot;
      next.metrics = snap.metrics ?? next.metrics;
      next.missionState = snap.state ?? next.missionState;
      break;
    }
    case "plan_proposed": {
      const plan = ev as PlanProposedEvent;
      next.transcript.push({
        seq: ev.seq,
        kind: "plan",
        title: plan.document.plan,
        body: plan.document.reasoning, // the planner's reasoning, verbatim
      });
      break;
    }
    case "feedback": {
      const fb = ev as FeedbackEvent;
      next.transcript.push({ seq: ev.seq, kind: "feedback", title: "feedback",
                             body: fb.text });
      break;
    }
    case "behavior": {
      const b = ev as BehaviorEvent;
      const note = b.blocked ?? b.refused ?? b.user_messages.join(" | ");
      next.transcript.push({ seq: ev.seq, kind: "behavior", title: b.call,
                             body: note });
      break;
    }
    case "clarify_asked": {
      const c = ev as ClarifyEvent;
      next.pendingClarify = c.question;
      next.missionState = "awaiting_clarification";
      next.transcript.push({ seq: ev.seq, kind: "clarify", title: "clarify",
                             body: c.question });
      break;
    }
    case "message": {
      const m = ev as MessageEvent;
      if (m.kind === "clarify_reply" || m.kind === "intervention") {
        next.pendingClarify = null;
        next.missionState = "running";
        next.transcript.push({ seq: ev.seq, kind: "operator",
                               title: m.kind.replace("_", " "), body: m.content });
      }
      break;
    }
    case "state": {
      const s = ev as StateEvent;
      next.missionState = s.state;
      next.pendingClarify = null;
      next.terminal = { state: s.state, detail: s.detail };
      next.transcript.push({ seq: ev.seq, kind: "terminal", title: s.state,
                             body: s.detail });
      break;
    }
    case "metric": {
      next.metrics = ev as unknown as MetricsDoc;
      break;
    }
    default:
      break; // meta, delta: the snapshot carries their consequences
  }
  return next;
}

export function reduceAll(state: ConsoleState, events: EngineEvent[]): ConsoleState {
  return events.reduce(reduce, state);
}
