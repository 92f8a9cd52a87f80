// Console entry point: connect to the bridge, fold the event stream into the
// view model, re-render on every event, and reconnect (resuming from the
// last-seen sequence number) if the stream drops mid-mission.

import { BridgeClient } from "./client.js";
import { initialState, reduce, type ConsoleState } from "./state.js";
import {
  renderClarify,
  renderGraph,
  renderGrid,
  renderStatus,
  renderTranscript,
} from "./render.js";

const params = new URLSearchParams(window.location.search);
const base = params.get("bridge") ?? "http://127.0.0.1:8733";
const client = new BridgeClient(base);

let state: ConsoleState = initialState();

const svg = document.getElementById("graph") as unknown as SVGSVGElement;
const canvas = document.getElementById("grid") as HTMLCanvasElement;
const transcript = document.getElementById("transcript")!;
const status = document.getElementById("status")!;
const clarify = document.getElementById("clarify")!;

function draw(): void {
  renderGraph(svg, state);
  renderGrid(canvas, state);
  renderTranscript(transcript, state);
  renderStatus(status, state);
  renderClarify(clarify, state, (text) => void client.command("clarify_reply", text));
}

function onEvent(ev: Parameters<typeof reduce>[1]): void {
  state = reduce(state, ev);
  draw();
}

async function follow(): Promise<void> {
  for (;;) {
    try {
      await client.stream(state.lastSeq, onEvent);
      if (state.terminal) return; // mission over, stream closed cleanly
    } catch (err) {
      console.warn("stream dropped; resuming from", state.lastSeq, err);
    }
    await new Promise((r) => setTimeout(r, 500));
  }
}

document.getElementById("start")!.addEventListener("click", async () => {
  const mission = (document.getElementById("mission") as HTMLInputElement).value;
  const ack = await client.command("start_mission", mission);
  if (!ack.ok) renderStatus(status, { ...state, missionState: ack.error ?? "rejected" });
});

document.getElementById("intervene")!.addEventListener("click", async () => {
  const box = document.getElementById("steer") as HTMLInputElement;
  if (!box.value.trim()) return;
  await client.command("intervene", box.value.trim());
  box.value = "";
});

document.getElementById("pause")!.addEventListener("click", () => client.command("pause"));
document.getElementById("resume")!.addEventListener("click", () => client.command("resume"));

draw();
void follow();
