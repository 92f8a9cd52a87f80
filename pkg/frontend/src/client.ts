// Bridge client: a long-lived NDJSON event stream with since-based resume,
// plus the command and snapshot endpoints.

import type { CommandAck, CommandKind, EngineEvent } from "./protocol.js";

/** Split a byte stream into complete lines, tolerating chunk boundaries
 * anywhere (including mid-character: decoding is done per accumulated text). */
export class LineSplitter {
  private buffer = "";

  push(chunk: string): string[] {
    this.buffer += chunk;
    const lines = this.buffer.split("\n");
    this.buffer = lines.pop() ?? "";
    return lines.filter((ln) => ln.trim().length > 0);
  }

  flush(): string[] {
    const rest = this.buffer.trim();
    this.buffer = "";
    return rest ? [rest] : [];
  }
}

export class BridgeClient {
  constructor(readonly base: string) {}

  async snapshot(): Promise<EngineEvent> {
    const resp = await fetch(`${this.base}/snapshot`);
    return (await resp.json()) as EngineEvent;
  }

  async command(kind: CommandKind, text = ""): Promise<CommandAck> {
    const resp = await fetch(`${this.base}/command`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ kind, text }),
    });
    return (await resp.json()) as CommandAck;
  }

  /** Stream events with seq > since until the server closes (mission over)
   * or the signal aborts. Returns the number of events delivered. */
  async stream(
    since: number,
    onEvent: (ev: EngineEvent) => void,
    signal?: AbortSignal,
  ): Promise<number> {
    const resp = await fetch(`${this.base}/events?since=${since}`, { signal });
    if (!resp.ok || resp.body === null) {
      throw new Error(`event stream failed: HTTP ${resp.status}`);
    }
    const reader = resp.body.getReader();
    const decoder = new TextDecoder();
    const splitter = new LineSplitter();
    let count = 0;
    for (;;) {
      const { done, value } = await reader.read();
      const lines = done
        ? splitter.flush()
        : splitter.push(decoder.decode(value, { stream: true }));
      for (const line of lines) {
        onEvent(JSON.parse(line) as EngineEvent);
        count += 1;
      }
      if (done) return count;
    }
  }
}
