"""Score the bundled demo corpus with heuristic judges, no network needed.

Usage: python3 scripts/offline_demo.py [--out DIR]

Writes reports, run manifest, and evidence cache under --out (a temp
directory by default) and prints the score summary twice to show the
cache warming up.
"""

import argparse
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from cardaudit.cli import main as cli_main  # noqa: E402

DEMO_CORPUS = ROOT / "fixtures" / "demo_corpus"


def run(out_dir: str) -> int:
    args = [
        "score", "acme-lumen-8b",
        "--display-name", "Acme Lumen 8B",
        "--provider", "Acme AI",
        "--backend", f"corpus:{DEMO_CORPUS}",
        "--agents", "heuristic,heuristic,heuristic",
        "--out", out_dir,
    ]
    print("first run (cold cache)")
    code = cli_main(args)
    if code != 0:
        return code
    print("\nsecond run (warm cache)")
    return cli_main(args)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", help="output directory (default: a fresh temp dir)")
    ns = parser.parse_args()
    if ns.out:
        return run(ns.out)
    with tempfile.TemporaryDirectory(prefix="cardaudit-demo-") as tmp:
        code = run(tmp)
        print(f"\n(outputs were written under {tmp}; pass --out to keep them)")
        return code


if __name__ == "__main__":
    raise SystemExit(main())
