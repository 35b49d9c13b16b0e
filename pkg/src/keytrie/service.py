"""Local JSON-over-HTTP prediction service.

Implements the four-point UI contract: inform the engine of a typed
character, get predictions back, read the last set without typing, and send
bad-prediction feedback. POST /v1/keystroke merges inform+predict into one
round trip to keep per-keystroke latency at a single request.

Endpoints (all JSON, UTF-8):
  POST /v1/keystroke  {"ch": <one character>, "ts": <epoch seconds, optional>}
                      -> {"predictions": [{"ch":…, "p":…}], "n": n_t, "idle": bool}
  GET  /v1/predictions -> same shape, read-only
  POST /v1/feedback   {} -> {"idle": true}
  POST /v1/reset      {} -> {"idle": bool}   (abandon the word in progress)
  GET  /v1/stats      -> engine counters and config

Errors are {"error": {"code": …}} with 400 for malformed input, 409 for a
multi-scalar "ch". Unknown JSON fields are ignored. Engine mutations are
serialized through one lock, so concurrent clients see a linearizable order.
"""

from __future__ import annotations

import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .engine import PredictionEngine, StreamOrderError

MAX_BODY = 1 << 20


class ApiError(Exception):
    def __init__(self, status: int, code: str, **extra):
        super().__init__(code)
        self.status = status
        self.body = {"error": {"code": code, **extra}}


def _prediction_body(engine: PredictionEngine) -> dict:
    return {
        "predictions": [{"ch": ch, "p": p} for ch, p in engine.last_prediction],
        "n": engine.n_t,
        "idle": engine.idle,
    }


class PredictionService:
    """One engine behind a lock; handlers call these entry points."""

    def __init__(self, engine: PredictionEngine, clock=time.time):
        self.engine = engine
        self.clock = clock
        self.lock = threading.Lock()

    def keystroke(self, payload: dict) -> dict:
        ch = payload.get("ch")
        if ch is None:
            raise ApiError(400, "missing_field", field="ch")
        if not isinstance(ch, str) or len(ch) == 0:
            raise ApiError(400, "invalid_field", field="ch")
        if len(ch) > 1:
            raise ApiError(409, "multi_scalar_ch")
        ts = payload.get("ts")
        if ts is None:
            ts = int(self.clock())
        elif isinstance(ts, bool) or not isinstance(ts, (int, float)):
            raise ApiError(400, "invalid_field", field="ts")
        with self.lock:
            try:
                self.engine.handle_keystroke(ch, ts)
            except StreamOrderError:
                raise ApiError(400, "stream_order")
            return _prediction_body(self.engine)

    def predictions(self) -> dict:
        with self.lock:
            return _prediction_body(self.engine)

    def feedback(self, payload: dict) -> dict:
        with self.lock:
            self.engine.send_feedback()
            return {"idle": True}

    def reset(self, payload: dict) -> dict:
        with self.lock:
            self.engine.reset_cursor()
            return {"idle": self.engine.idle}

    def stats(self) -> dict:
        with self.lock:
            return self.engine.stats()


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    service: PredictionService = None
    quiet = True

    def log_message(self, fmt, *args):
        if not self.quiet:
            super().log_message(fmt, *args)

    def _send(self, status: int, body: dict):
        data = json.dumps(body, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(data)

    def _read_json(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if length > MAX_BODY:
            raise ApiError(400, "body_too_large")
        raw = self.rfile.read(length) if length else b""
        if not raw:
            return {}
        try:
            payload = json.loads(raw)
        except (json.JSONDecodeError, UnicodeDecodeError):
            raise ApiError(400, "bad_json")
        if not isinstance(payload, dict):
            raise ApiError(400, "bad_json")
        return payload

    def _dispatch(self, method: str):
        try:
            if method == "GET" and self.path == "/v1/predictions":
                self._send(200, self.service.predictions())
            elif method == "GET" and self.path == "/v1/stats":
                self._send(200, self.service.stats())
            elif method == "POST" and self.path == "/v1/keystroke":
                self._send(200, self.service.keystroke(self._read_json()))
            elif method == "POST" and self.path == "/v1/feedback":
                self._send(200, self.service.feedback(self._read_json()))
            elif method == "POST" and self.path == "/v1/reset":
                self._send(200, self.service.reset(self._read_json()))
            elif self.path.startswith("/v1/"):
                self._send(405, {"error": {"code": "method_not_allowed"}})
            else:
                self._send(404, {"error": {"code": "not_found"}})
        except ApiError as exc:
            self._send(exc.status, exc.body)
        except Exception:  # user input must never kill the service
            self._send(500, {"error": {"code": "internal"}})

    def do_GET(self):
        self._dispatch("GET")

    def do_POST(self):
        self._dispatch("POST")

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()


def make_server(engine: PredictionEngine, host: str = "127.0.0.1", port: int = 8750,
                clock=time.time, quiet: bool = True) -> ThreadingHTTPServer:
    """Build (but do not start) the HTTP server bound to ``host:port``."""
    service = PredictionService(engine, clock=clock)
    handler = type("Handler", (_Handler,), {"service": service, "quiet": quiet})
    return ThreadingHTTPServer((host, port), handler)


def serve_forever(engine: PredictionEngine, host: str = "127.0.0.1", port: int = 8750,
                  quiet: bool = False) -> None:
    server = make_server(engine, host, port, quiet=quiet)
    addr = server.server_address
    print(f"keytrie service listening on http://{addr[0]}:{addr[1]}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
