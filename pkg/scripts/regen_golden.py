"""Recompute the golden files for the classification, cover and local-class tables.

Without --write this only reports which files differ from the shipped copies.
"""

import argparse
import json
import sys
from pathlib import Path

from divcontract.cli import golden_documents

GOLDEN = Path(__file__).resolve().parent.parent / "src" / "divcontract" / "golden"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--write", action="store_true", help="overwrite the shipped files")
    args = ap.parse_args()
    stale = 0
    for name, doc in golden_documents().items():
        path = GOLDEN / f"{name}.json"
        text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
        same = path.exists() and path.read_text() == text
        if args.write and not same:
            path.write_text(text)
            print(f"wrote {path.name}")
        else:
            print(f"{path.name}: {'up to date' if same else 'DIFFERS'}")
            stale += not same
    return 1 if stale and not args.write else 0


if __name__ == "__main__":
    sys.exit(main())
