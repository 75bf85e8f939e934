"""Minimal smoke pipeline: MOFAT design → MIM active learning → RunLog CSV."""

from __future__ import annotations

import sys
from pathlib import Path

from mim_design import mofat_heuristic
from mim_learn import run_active_learning
from mim_testfns import get_function


def main(function: str = "levy2", budget: int = 20) -> None:
    fn = get_function(function)
    design = mofat_heuristic(fn.d_total, 2, seed=1, iters=500)
    model, log = run_active_learning(fn, design, budget, "mim")
    path = log.write_csv(Path("logs/smoke_runlog.csv"), include_timing=False)
    print(f"best y {log.best_y:.6g} after {len(log)} evaluations; theta={model.spec.theta}")
    print(f"✅ smoke run done. see {path}")


if __name__ == "__main__":
    if len(sys.argv) > 3:
        print("usage: python scripts/smoke_run.py [function] [budget]")
        raise SystemExit(2)
    main(*(sys.argv[1:2]), *(int(v) for v in sys.argv[2:3]))
