"""Operator console bridge: a small HTTP service relaying engine events to
clients and operator commands back to the engine.

Wire protocol (all JSON):
  GET  /events?since=<seq>  long-lived newline-delimited event stream,
                            resuming after the client's last-seen sequence
  GET  /snapshot            latest snapshot event (or {"state": "idle"})
  POST /command             {"kind": start_mission|clarify_reply|intervene|
                             pause|resume, "text": ...} -> acknowledgment

The bridge holds no authoritative state: it buffers the engine's event stream
(sequence-numbered by the engine) and forwards commands through queues.
"""

from __future__ import annotations

import json
import logging
import queue
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from .config import EngineConfig
from .engine import AWAITING_CLARIFICATION, RUNNING, MissionEngine
from .scenarios import Scenario, scenario_from_dict

logger = logging.getLogger(__name__)


class BridgeOperator:
    """Engine-facing side of the command queues. clarify_reply blocks the
    engine thread until the operator answers."""

    def __init__(self):
        self.clarify_queue: queue.Queue = queue.Queue()
        self.intervene_queue: queue.Queue = queue.Queue()
        self.paused = threading.Event()

    def clarify_reply(self, question: str) -> str | None:
        return self.clarify_queue.get()  # blocks until the console replies

    def poll_message(self):
        while self.paused.is_set():
            time.sleep(0.05)
        try:
            return ("intervention", self.intervene_queue.get_nowait())
        except queue.Empty:
            return None


class ConsoleBridge:
    def __init__(self, scenario: Scenario, backend_factory, config: EngineConfig | None = None):
        self.scenario = scenario
        self.backend_factory = backend_factory
        self.config = config or EngineConfig()
        self.events: list[dict] = []
        self.cond = threading.Condition()
        self.operator = BridgeOperator()
        self.engine: MissionEngine | None = None
        self.thread: threading.Thread | None = None
        self.done = threading.Event()

    # -- engine lifecycle ----------------------------------------------------

    def _sink(self, event: dict) -> None:
        with self.cond:
            self.events.append(event)
            self.cond.notify_all()

    def state(self) -> str:
        if self.engine is None:
            return "idle"
        return self.engine.state

    def start_mission(self, mission_text: str) -> None:
        if self.engine is not None:
            raise RuntimeError(f"a mission is already {self.state()}")
        scenario = self.scenario
        if mission_text:
            doc = dict(scenario.doc)
            doc["mission"] = mission_text
            scenario = scenario_from_dict(doc)
        self.engine = MissionEngine(scenario, self.backend_factory(), self.config,
                                    operator=self.operator, event_sink=self._sink)

        def _run():
            try:
                self.engine.run()
            except Exception:
                logger.exception("mission thread crashed")
            finally:
                self.done.set()
                with self.cond:
                    self.cond.notify_all()

        self.thread = threading.Thread(target=_run, daemon=True, name="mission")
        self.thread.start()

    def handle_command(self, command: dict) -> dict:
        kind = command.get("kind", "")
        text = command.get("text", "")
        state = self.state()
        try:
            if kind == "start_mission":
                self.start_mission(text)
            elif kind == "clarify_reply":
                if state != AWAITING_CLARIFICATION:
                    return {"ok": False, "state": state,
                            "error": f"no clarification pending (mission is {state})"}
                self.operator.clarify_queue.put(text)
            elif kind == "intervene":
                if state not in (RUNNING, AWAITING_CLARIFICATION):
                    return {"ok": False, "state": state,
                            "error": f"cannot intervene while mission is {state}"}
                self.operator.intervene_queue.put(text)
            elif kind == "pause":
                self.operator.paused.set()
            elif kind == "resume":
                self.operator.paused.clear()
            else:
                return {"ok": False, "state": state, "error": f"unknown command '{kind}'"}
        except RuntimeError as e:
            return {"ok": False, "state": self.state(), "error": str(e)}
        return {"ok": True, "state": self.state()}

    def latest_snapshot(self) -> dict:
        with self.cond:
            for ev in reversed(self.events):
                if ev.get("type") == "snapshot":
                    return ev
        return {"type": "snapshot", "state": "idle", "seq": -1}

    def events_after(self, since: int, timeout: float = 30.0):
        """Yield buffered events with seq > since, then tail new ones until
        the mission finishes."""
        cursor = since + 1
        deadline = time.monotonic() + timeout
        while True:
            with self.cond:
                batch = [ev for ev in self.events if ev["seq"] >= cursor]
                if not batch:
                    if self.done.is_set():
                        return
                    self.cond.wait(timeout=0.25)
            for ev in batch:
                cursor = ev["seq"] + 1
                yield ev
            if batch:
                deadline = time.monotonic() + timeout
            elif time.monotonic() > deadline:
                return


def make_handler(bridge: ConsoleBridge):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):
            logger.debug("http: " + fmt, *args)

        def _json(self, code: int, payload: dict) -> None:
            body = json.dumps(payload).encode()
            self.send_response(code)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(body)

        def do_OPTIONS(self):
            self.send_response(204)
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.end_headers()

        def do_GET(self):
            url = urlparse(self.path)
            if url.path == "/snapshot":
                self._json(200, bridge.latest_snapshot())
                return
            if url.path == "/events":
                since = int(parse_qs(url.query).get("since", ["-1"])[0])
                with bridge.cond:
                    have_first = any(ev["seq"] == since + 1 for ev in bridge.events)
                    gap = (since >= 0 and not have_first
                           and bool(bridge.events) and since + 1 < len(bridge.events))
                self.send_response(200)
                self.send_header("Content-Type", "application/x-ndjson")
                self.send_header("Access-Control-Allow-Origin", "*")
                self.send_header("Transfer-Encoding", "chunked")
                self.end_headers()
                try:
                    if gap:  # retention gap: resync with a full snapshot first
                        self._chunk(bridge.latest_snapshot())
                    for ev in bridge.events_after(since):
                        self._chunk(ev)
                    self.wfile.write(b"0\r\n\r\n")
                except (BrokenPipeError, ConnectionResetError):
                    pass
                return
            self._json(404, {"error": f"no such path {url.path}"})

        def _chunk(self, event: dict) -> None:
            data = (json.dumps(event) + "\n").encode()
            self.wfile.write(f"{len(data):X}\r\n".encode() + data + b"\r\n")
            self.wfile.flush()

        def do_POST(self):
            url = urlparse(self.path)
            if url.path != "/command":
                self._json(404, {"error": f"no such path {url.path}"})
                return
            length = int(self.headers.get("Content-Length", "0"))
            try:
                command = json.loads(self.rfile.read(length) or b"{}")
            except json.JSONDecodeError as e:
                self._json(400, {"ok": False, "error": f"bad JSON: {e.msg}"})
                return
            ack = bridge.handle_command(command)
            self._json(200 if ack.get("ok") else 409, ack)

    return Handler


def serve(bridge: ConsoleBridge, port: int):
    server = ThreadingHTTPServer(("127.0.0.1", port), make_handler(bridge))
    return server
