#!/usr/bin/env python3
"""Spin up a throwaway instance, replay the full portal walkthrough against
it over real HTTP, and leave behind an audit fixture you can attack:

    python scripts/demo_walkthrough.py [--keep] [--workdir DIR]

With --keep the server stays up afterwards and the printed `sims audit`
command can be run against it from another shell.
"""

import argparse
import json
import sys
import tempfile
import time
from pathlib import Path

import httpx

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from academy_sims.config import FAST_TEST_HASH, ServiceConfig
from academy_sims.server import BackgroundServer

from conftest import ApiHarness
from scenario import (
    FIXTURE_EMAILS,
    FIXTURE_PASSWORDS,
    run_walkthrough,
    seed_for_walkthrough,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--keep", action="store_true",
                        help="keep serving after the walkthrough")
    parser.add_argument("--workdir", default=None,
                        help="where to put the store and uploads")
    args = parser.parse_args()

    workdir = Path(args.workdir or tempfile.mkdtemp(prefix="sims-demo-"))
    workdir.mkdir(parents=True, exist_ok=True)
    config = ServiceConfig(
        storage_path=str(workdir / "demo.db"),
        upload_dir=str(workdir / "uploads"),
        bind_port=0,
        hash_params=FAST_TEST_HASH,
    )
    server = BackgroundServer(config, auto_migrate=True).start()
    print(f"serving on {server.base_url}, store at {config.storage_path}")

    seed_for_walkthrough(server.runtime)
    client = httpx.Client(base_url=server.base_url)
    harness = ApiHarness(server.runtime, client)
    started = time.monotonic()
    artifacts = run_walkthrough(harness)
    elapsed = time.monotonic() - started
    client.close()
    print(f"walkthrough complete in {elapsed:.1f}s:")
    print(f"  eligible courses: {artifacts.eligible_codes}")
    print(f"  result rows:      {artifacts.results}")

    fixture_path = workdir / "audit-fixture.json"
    fixture_path.write_text(json.dumps({
        "credentials": {
            role: {"email": FIXTURE_EMAILS[role],
                   "password": FIXTURE_PASSWORDS[role],
                   **({"npaNumber": "NPA/04/09/00187"} if role == "cadet" else {})}
            for role in ("admin", "hod", "lecturer", "cadet")
        },
        "storagePath": config.storage_path,
        "department": "Sociology",
        "courseCode": "SOC-103",
        "sessionYear": 2019,
    }, indent=2))
    print(f"audit fixture written to {fixture_path}")
    print("try:")
    print(f"  sims audit --target {server.base_url} --fixture {fixture_path}"
          " --i-know-this-is-destructive")

    if args.keep:
        print("serving until interrupted (Ctrl-C) ...")
        try:
            while True:
                time.sleep(1)
        except KeyboardInterrupt:
            pass
    server.stop()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
