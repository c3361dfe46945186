"""Regenerate fixtures/motivating.json from the in-code four-flow example."""
from __future__ import annotations

import argparse
from pathlib import Path

from ordo.io import save_instance
from ordo.netcfg import motivating_instance

ROOT = Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(ROOT / "fixtures" / "motivating.json"))
    args = ap.parse_args()
    save_instance(motivating_instance(), args.out)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
