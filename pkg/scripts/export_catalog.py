"""Write the bundled actions and SNC models to data/ as JSON documents."""

import argparse
import json
from pathlib import Path

from mquot import catalog


def slug(name):
    return name.replace("/", "_over_").replace("*", "").replace("^", "")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data"))
    args = ap.parse_args()
    out = Path(args.out)
    (out / "actions").mkdir(parents=True, exist_ok=True)
    (out / "models").mkdir(parents=True, exist_ok=True)
    items = [(out / "actions", a.name, a.to_document()) for a in catalog.actions()]
    items += [(out / "actions", f"exinsep-{p}", catalog.exinsep(p).to_document()) for p in (2, 3, 5, 7)]
    items += [(out / "models", m.name, m.to_document()) for m in catalog.models()]
    items += [(out / "mutated", m.name, m.to_document()) for m in catalog.mutated_models()]
    for folder, name, doc in items:
        folder.mkdir(exist_ok=True)
        (folder / f"{slug(name)}.json").write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    print(f"wrote {len(items)} documents under {out}")


if __name__ == "__main__":
    main()
