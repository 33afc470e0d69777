"""Run the acceptance battery and write the results as JSON."""

import argparse
import json
from dataclasses import dataclass, field
from pathlib import Path

from orbifold.acceptance import run_criterion


@dataclass(frozen=True)
class AcceptanceConfig:
    criteria: tuple = tuple(range(1, 11))
    out: Path = Path("results/acceptance.json")
    details: bool = False


def main(cfg: AcceptanceConfig) -> int:
    results = []
    for k in cfg.criteria:
        r = run_criterion(k)
        print(r.line(), flush=True)
        doc = r.to_json()
        if not cfg.details:
            doc.pop("details", None)
        results.append(doc)
    cfg.out.parent.mkdir(parents=True, exist_ok=True)
    cfg.out.write_text(json.dumps(results, indent=1, sort_keys=True, default=str) + "\n")
    passed = sum(r["passed"] for r in results)
    print(f"{passed}/{len(results)} criteria pass; written to {cfg.out}")
    return 0 if passed == len(results) else 1


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--criteria", type=int, nargs="*", default=list(range(1, 11)))
    ap.add_argument("--out", type=Path, default=AcceptanceConfig.out)
    ap.add_argument("--details", action="store_true")
    a = ap.parse_args()
    raise SystemExit(main(AcceptanceConfig(tuple(a.criteria), a.out, a.details)))
