"""Service lifecycle: bind checks, migration gate, uvicorn hosting."""

from __future__ import annotations

import socket
import threading
import time

import uvicorn

from .api import create_app
from .config import ServiceConfig
from .errors import BindFailure, NotMigrated
from .runtime import Runtime, build_runtime
from .seed import seed


def check_bindable(host: str, port: int) -> None:
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    except OSError as exc:
        raise BindFailure(f"cannot bind {host}:{port}: {exc.strerror}") from exc
    finally:
        probe.close()


def prepare_runtime(config: ServiceConfig, auto_migrate: bool = False,
                    seed_data: bool = False) -> Runtime:
    runtime = build_runtime(config)
    pending = runtime.store.pending_migrations()
    if pending:
        if not auto_migrate:
            runtime.close()
            raise NotMigrated(
                f"{len(pending)} migrations pending; run `sims migrate` or pass"
                " --auto-migrate"
            )
        runtime.store.migrate()
    if seed_data:
        seed(runtime.store, runtime.hasher)
    return runtime


def _uvicorn_server(runtime: Runtime) -> uvicorn.Server:
    app = create_app(runtime)
    config = uvicorn.Config(
        app,
        host=runtime.config.bind_host,
        port=runtime.config.bind_port,
        log_level="warning",
        # graceful: in-flight requests complete before exit
        timeout_graceful_shutdown=30,
    )
    return uvicorn.Server(config)


def run_server(config: ServiceConfig, auto_migrate: bool = False) -> None:
    """Foreground serve; SIGINT/SIGTERM drain in-flight requests then exit."""
    check_bindable(config.bind_host, config.bind_port)
    runtime = prepare_runtime(config, auto_migrate=auto_migrate)
    try:
        _uvicorn_server(runtime).run()
    finally:
        runtime.close()


class BackgroundServer:
    """A served instance on a real socket, for tests and scripts."""

    def __init__(self, config: ServiceConfig, auto_migrate: bool = True,
                 seed_data: bool = False):
        check_bindable(config.bind_host, config.bind_port)
        self.runtime = prepare_runtime(config, auto_migrate=auto_migrate,
                                       seed_data=seed_data)
        self._server = _uvicorn_server(self.runtime)
        self._thread = threading.Thread(target=self._server.run, daemon=True)

    def start(self, timeout: float = 10.0) -> "BackgroundServer":
        self._thread.start()
        deadline = time.monotonic() + timeout
        while not self._server.started:
            if time.monotonic() > deadline:
                raise BindFailure("server did not start in time")
            if not self._thread.is_alive():
                raise BindFailure("server thread exited during startup")
            time.sleep(0.02)
        return self

    @property
    def port(self) -> int:
        return self._server.servers[0].sockets[0].getsockname()[1]

    @property
    def base_url(self) -> str:
        return f"http://{self.runtime.config.bind_host}:{self.port}"

    def stop(self, timeout: float = 30.0) -> None:
        self._server.should_exit = True
        self._thread.join(timeout=timeout)
        self.runtime.close()

    def __enter__(self) -> "BackgroundServer":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()
