"""Show how section-name spelling variation collapses under fuzzy matching.

Usage: python3 scripts/name_variation_report.py [NAMES_FILE] [--threshold T] [--top N]

Reads one section name per line (default: the bundled 200-name list),
clusters them, and prints the largest clusters plus how many names map
onto the builtin concept lexicon.
"""

import argparse
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from cardaudit.normalize import canonicalize, cluster_names, seed_lexicon  # noqa: E402

DEFAULT_NAMES = ROOT / "fixtures" / "section_names.txt"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("names_file", nargs="?", default=str(DEFAULT_NAMES))
    parser.add_argument("--threshold", type=float, default=0.55)
    parser.add_argument("--top", type=int, default=10)
    ns = parser.parse_args()

    names = [
        line.strip()
        for line in Path(ns.names_file).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    if not names:
        print("no names to analyze", file=sys.stderr)
        return 2

    clusters = cluster_names(names, threshold=ns.threshold)
    lexicon = seed_lexicon()
    matched = sum(1 for n in names if canonicalize(n, lexicon, threshold=ns.threshold).matched)

    print(f"{len(names)} names, {len(clusters)} clusters at threshold {ns.threshold}")
    print(f"{matched}/{len(names)} names match a builtin concept\n")
    print(f"largest {min(ns.top, len(clusters))} clusters:")
    for cluster in sorted(clusters, key=lambda c: (-len(c.members), c.representative))[: ns.top]:
        print(f"  {cluster.representative} ({len(cluster.members)} members)")
        for member in cluster.members:
            print(f"    - {member}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
