"""Local HTTP service exposing the simulation engine.

Endpoints:
    GET  /api/health    -> {"status": "ok"}
    GET  /api/defaults  -> default simulate request document
    POST /api/simulate  -> simulation report (schema version 1)

Requests are size-bounded (iterations, voters, projects) and run
synchronously; a semaphore caps how many simulations execute at once,
extra requests wait. Responses carry permissive CORS headers so the
browser dashboard can call the service from another origin.

Status codes: 400 malformed JSON, 404 unknown path, 422 invalid or
out-of-bounds config (body names the violated invariant), 500 internal
error with an opaque id.
"""
from __future__ import annotations

import json
import logging
import os
import threading
import uuid
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .engine import run_simulation
from .errors import InvalidConfig
from .model import SimulationConfig, validate_config
from .reportio import config_from_dict, config_to_dict, report_to_dict

DEFAULT_PORT = 8080
PORT_ENV_VAR = "RETROVOTE_PORT"

MAX_ITERATIONS = 20_000
MAX_VOTERS = 2_000
MAX_PROJECTS = 5_000
MAX_WORKERS = 4
MAX_CONCURRENT_RUNS = 4

log = logging.getLogger(__name__)


def _check_bounds(config):
    if config.iterations > MAX_ITERATIONS:
        raise InvalidConfig(
            "iterations_bound", f"iterations must not exceed {MAX_ITERATIONS}"
        )
    if config.n_voters > MAX_VOTERS:
        raise InvalidConfig("n_voters_bound", f"n_voters must not exceed {MAX_VOTERS}")
    if config.n_projects > MAX_PROJECTS:
        raise InvalidConfig(
            "n_projects_bound", f"n_projects must not exceed {MAX_PROJECTS}"
        )


def default_request_document() -> dict:
    document = config_to_dict(SimulationConfig())
    document["workers"] = 1
    return document


class ApiServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address):
        super().__init__(address, ApiHandler)
        self.run_slots = threading.Semaphore(MAX_CONCURRENT_RUNS)


class ApiHandler(BaseHTTPRequestHandler):
    server_version = "retrovote/0.1"
    protocol_version = "HTTP/1.1"

    def log_message(self, format, *args):
        log.debug("%s - %s", self.address_string(), format % args)

    def _send_json(self, status, payload):
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self._send_cors_headers()
        self.end_headers()
        self.wfile.write(body)

    def _send_cors_headers(self):
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")

    def do_OPTIONS(self):
        self.send_response(204)
        self._send_cors_headers()
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        if self.path == "/api/health":
            self._send_json(200, {"status": "ok"})
        elif self.path == "/api/defaults":
            self._send_json(200, default_request_document())
        else:
            self._send_json(404, {"error": f"unknown path {self.path}"})

    def do_POST(self):
        if self.path != "/api/simulate":
            self._send_json(404, {"error": f"unknown path {self.path}"})
            return
        try:
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length)
            try:
                document = json.loads(raw)
            except json.JSONDecodeError as exc:
                self._send_json(400, {"error": f"malformed JSON: {exc}"})
                return
            if not isinstance(document, dict):
                self._send_json(400, {"error": "request body must be a JSON object"})
                return

            workers = document.pop("workers", 1)
            try:
                workers = max(1, min(MAX_WORKERS, int(workers)))
            except (TypeError, ValueError):
                self._send_json(422, {"error": "field 'workers' must be an integer"})
                return
            try:
                config = config_from_dict(document)
                _check_bounds(config)
                validate_config(config)
            except InvalidConfig as exc:
                self._send_json(422, {"error": str(exc), "invariant": exc.invariant})
                return
            except ValueError as exc:
                self._send_json(422, {"error": str(exc)})
                return

            with self.server.run_slots:
                report = run_simulation(config, workers=workers)
            self._send_json(200, report_to_dict(report))
        except Exception:
            incident = uuid.uuid4().hex
            log.exception("internal error (incident %s)", incident)
            self._send_json(500, {"error": "internal error", "id": incident})


def resolve_port(port=None) -> int:
    """Explicit port, else the RETROVOTE_PORT variable, else 8080."""
    if port is not None:
        return int(port)
    env = os.environ.get(PORT_ENV_VAR)
    if env:
        return int(env)
    return DEFAULT_PORT


def make_server(port=0, host="127.0.0.1") -> ApiServer:
    """Bind the API server; port 0 picks a free ephemeral port."""
    return ApiServer((host, port))


def serve(port=None, host="127.0.0.1") -> None:
    """Run the service until interrupted."""
    server = make_server(resolve_port(port), host)
    bound = server.server_address[1]
    print(f"retrovote API listening on http://{host}:{bound}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
