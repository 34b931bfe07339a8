"""Shared helpers for the experiment scripts."""

from collections import defaultdict

import numpy as np


def summarize(records, keys=("method", "alpha", "s", "c", "k")):
    """Group records and print MRE, SD and mean time per group; returns the table."""
    groups = defaultdict(list)
    for r in records:
        groups[tuple(getattr(r, k) for k in keys)].append(r)
    table = []
    print("  ".join(f"{k:>9s}" for k in keys) + "        MRE         SD    time_s  failed")
    for key in sorted(groups, key=lambda t: tuple((v is None, v) for v in t)):
        rows = groups[key]
        err = np.array([r.rel_error for r in rows], dtype=float)
        ok = err[np.isfinite(err)]
        t = np.nanmean([r.time_s for r in rows])
        mre = float(ok.mean()) if ok.size else float("nan")
        sd = float(ok.std()) if ok.size else float("nan")
        table.append((key, mre, sd, t))
        cells = "  ".join(f"{str(v):>9s}" for v in key)
        print(f"{cells}  {mre:10.3e} {sd:10.3e} {t:9.4f}  {len(rows) - ok.size:6d}")
    return table
