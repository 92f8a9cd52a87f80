import json
import threading
import time

import pytest
import requests

from spine.backends import ScriptedBackend, ScriptedPolicy
from spine.bridge import ConsoleBridge, serve
from spine.config import EngineConfig
from spine.scenarios import load_scenario


@pytest.fixture
def server():
    scenario = load_scenario("comms_down")
    backend_factory = lambda: ScriptedBackend(
        ScriptedPolicy.from_dict(scenario.oracle_policy))
    bridge = ConsoleBridge(scenario, backend_factory, EngineConfig())
    httpd = serve(bridge, 0)
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{httpd.server_address[1]}"
    yield base, bridge
    httpd.shutdown()


def post(base, kind, text=""):
    return requests.post(f"{base}/command", json={"kind": kind, "text": text},
                         timeout=10)


def stream_events(base, since=-1, limit=None, timeout=30):
    out = []
    with requests.get(f"{base}/events", params={"since": since},
                      stream=True, timeout=timeout) as resp:
        for line in resp.iter_lines():
            if not line:
                continue
            out.append(json.loads(line))
            if limit and len(out) >= limit:
                break
    return out


def wait_for_state(bridge, states, timeout=30):
    deadline = time.time() + timeout
    while time.time() < deadline:
        if bridge.state() in states:
            return bridge.state()
        time.sleep(0.02)
    raise TimeoutError(f"state never reached {states}, now {bridge.state()}")


def test_snapshot_before_start_is_idle(server):
    base, _ = server
    snap = requests.get(f"{base}/snapshot", timeout=5).json()
    assert snap["state"] == "idle"


def test_commands_validated_against_state(server):
    base, _ = server
    r = post(base, "clarify_reply", "too early")
    assert r.status_code == 409 and not r.json()["ok"]
    r = post(base, "bogus_kind")
    assert r.status_code == 409
    r = post(base, "intervene", "nothing running")
    assert r.status_code == 409


def test_full_mission_over_the_bridge(server):
    base, bridge = server
    ack = post(base, "start_mission", "Communications are down, why?").json()
    assert ack["ok"]
    # Second start while running is rejected.
    assert not post(base, "start_mission", "again").json()["ok"]

    wait_for_state(bridge, {"awaiting_clarification"})
    ack = post(base, "clarify_reply", "Please check both towers.").json()
    assert ack["ok"]

    deadline = time.time() + 60
    while not bridge.done.is_set() and time.time() < deadline:
        time.sleep(0.05)
    assert bridge.done.is_set()

    events = stream_events(base)
    kinds = [e["type"] for e in events]
    assert kinds[0] == "meta"
    # Sequence numbers are contiguous from zero.
    assert [e["seq"] for e in events] == list(range(len(events)))
    assert kinds.count("clarify_asked") == 1
    # The clarify question precedes every subsequent behavior execution.
    i_clarify = kinds.index("clarify_asked")
    behaviors = [i for i, k in enumerate(kinds) if k == "behavior"]
    assert any(i > i_clarify for i in behaviors)
    metric = [e for e in events if e["type"] == "metric"][-1]
    assert metric["success"] is True
    assert metric["interactions"] == 1

    # Terminal commands are rejected.
    assert not post(base, "clarify_reply", "late").json()["ok"]
    assert not post(base, "intervene", "late").json()["ok"]

    # Reconnecting mid-stream loses nothing (sequence audit).
    mid = len(events) // 2
    tail = stream_events(base, since=events[mid]["seq"])
    assert [e["seq"] for e in tail] == list(range(mid + 1, len(events)))
    snap = requests.get(f"{base}/snapshot", timeout=5).json()
    assert snap["state"] in ("completed",)
