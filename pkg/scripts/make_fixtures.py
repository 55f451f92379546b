"""Regenerate the frozen artifacts: save fixtures and the shipped pack.

Run from the repository root:

    python3 scripts/make_fixtures.py

These files are committed and byte-compared by the test suite; regenerate
them only on a deliberate format or content change.
"""

from __future__ import annotations

from pathlib import Path

from mazo.baseline import baseline_db
from mazo.content import serialize_content
from mazo.persist import save_run
from mazo.run import RunConfig, start_run

ROOT = Path(__file__).resolve().parent.parent


def main() -> None:
    fixtures = ROOT / "fixtures"
    fixtures.mkdir(exist_ok=True)
    run = start_run(1, RunConfig(), baseline_db())
    path = fixtures / "run_seed1_start.mazosave.json"
    path.write_bytes(save_run(run))
    print(f"wrote {path} ({path.stat().st_size} bytes)")

    # shipped in canonical form: collections sorted by id, so the file's
    # sha256 (minus the trailing newline) is the session content hash
    pack = ROOT / "content" / "baseline.pack.json"
    pack.parent.mkdir(exist_ok=True)
    pack.write_bytes(serialize_content(baseline_db()) + b"\n")
    print(f"wrote {pack} ({pack.stat().st_size} bytes)")


if __name__ == "__main__":
    main()
