"""Parameter sweeps of the HPW ratios over a catalog, and their CSV output.

Each (alpha, catalog entry) pair is one task for a bounded thread pool.  A
task transforms the entry and its rescaling ``c delta_r f`` (sampled
exactly), memoises the norms shared between cells, and returns its rows.
Rows are sorted by ``(entry, alpha, p, a, b, theorem)`` before the
single-threaded writer runs, so the output does not depend on scheduling.
"""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import groupby
from pathlib import Path

import numpy as np

from ._validation import conjugate_exponent
from .core import as_context
from .grids import SpectralFunction, build_dual_grid, build_space_grid, lp_norm_dual, lp_norm_space
from .transform import get_plan, plancherel_defect
from .uncertainty import HpwRecord, default_theorem, is_admissible

__all__ = ["CSV_HEADER", "THREADS_ENV", "SweepRow", "SweepReport", "run_sweep", "resolve_threads"]

CSV_HEADER = ("entry_id", "alpha", "p", "a", "b", "theorem", "admissible", "norm_p", "wnorm_space",
              "wnorm_dual", "lhs", "rhs", "ratio", "plancherel_defect", "scale_defect", "error")

THREADS_ENV = "LAGUERRE_HPW_THREADS"


def resolve_threads(cli_value=None, config_value=1):
    """Thread count: command line, then the environment, then the config."""
    if cli_value is not None:
        n = int(cli_value)
    elif os.environ.get(THREADS_ENV, "").strip():
        n = int(os.environ[THREADS_ENV])
    else:
        n = int(config_value)
    if n < 1:
        raise ValueError("thread count must be >= 1")
    return n


@dataclass(frozen=True)
class SweepRow:
    entry_id: str
    alpha: float
    p: float
    a: float
    b: float
    theorem: str
    admissible: bool
    record: HpwRecord | None = None
    plancherel_defect: float = float("nan")
    scale_defect: float = float("nan")
    error: str = ""

    @property
    def key(self):
        return (self.entry_id, self.alpha, self.p, self.a, self.b, self.theorem)

    @property
    def ok(self):
        return self.record is not None and not self.error

    def cells(self):
        r = self.record
        nums = ((r.norm_p, r.wnorm_space, r.wnorm_dual, r.lhs, r.rhs, r.ratio) if r is not None
                else (None,) * 6)
        return [self.entry_id, _num(self.alpha), _num(self.p), _num(self.a), _num(self.b), self.theorem,
                "true" if self.admissible else "false", *map(_num, nums),
                _num(self.plancherel_defect), _num(self.scale_defect), self.error]


def _num(v):
    if v is None:
        return ""
    return repr(float(v))


@dataclass
class SweepReport:
    rows: list

    @property
    def n_failed(self):
        return sum(not r.ok for r in self.rows)

    def csv_text(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in self.rows:
            w.writerow(row.cells())
        return buf.getvalue()

    def _series(self, x_field, group_fields):
        ok = sorted((r for r in self.rows if r.ok),
                    key=lambda r: (tuple(getattr(r, g) for g in group_fields), getattr(r, x_field)))
        out = []
        for key, grp in groupby(ok, key=lambda r: tuple(getattr(r, g) for g in group_fields)):
            pts = [(getattr(r, x_field), r.record.ratio) for r in grp]
            out.append((dict(zip(group_fields, key)), pts))
        return out

    def plot_text(self, x_field):
        """Two-column blocks ``x ratio``, one per series, separated by blank lines."""
        if x_field == "a":
            groups = ("entry_id", "alpha", "p", "b", "theorem")
        elif x_field == "p":
            groups = ("entry_id", "alpha", "a", "b")
        else:
            raise ValueError("x_field must be 'a' or 'p'")
        lines = []
        for meta, pts in self._series(x_field, groups):
            lines.append("# " + " ".join(f"{k}={v}" for k, v in meta.items()))
            lines.extend(f"{_num(x)} {_num(y)}" for x, y in pts)
            lines.extend(["", ""])
        return "\n".join(lines)

    def write(self, out_dir, plots=True):
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        paths = [out_dir / "sweep.csv"]
        paths[0].write_text(self.csv_text(), encoding="utf-8")
        if plots:
            for x_field in ("a", "p"):
                path = out_dir / f"ratio_vs_{x_field}.dat"
                path.write_text(self.plot_text(x_field), encoding="utf-8")
                paths.append(path)
        return paths


class _Norms:
    """Memo of the weighted norms of one function and its transform."""

    def __init__(self, f, F):
        self.f, self.F = f, F
        self._memo = {}

    def space(self, p, w=0.0):
        key = ("s", p, w)
        if key not in self._memo:
            self._memo[key] = lp_norm_space(self.f, p, w)
        return self._memo[key]

    def dual(self, p, w=0.0):
        key = ("d", p, w)
        if key not in self._memo:
            self._memo[key] = lp_norm_dual(self.F, p, w)
        return self._memo[key]

    def record(self, p, a, b, theorem, admissible):
        q = conjugate_exponent(p)
        if theorem == "T16":
            n, ws, wd = self.dual(p), self.space(q, a), self.dual(p, b / 2)
        else:
            n, ws, wd = self.space(p), self.space(p, a), self.dual(q, b / 2)
        if n == 0:
            raise ValueError("HPW ratio is undefined for f = 0")
        lhs = n ** (a + b)
        rhs = ws**b * wd**a
        return HpwRecord(p, a, b, lhs, rhs, rhs / lhs, theorem, admissible, n, ws, wd)


def _cells(config):
    for p in config.p_list:
        theorems = config.theorem_list or (default_theorem(p),)
        for a in config.a_grid:
            for b in config.b_grid:
                for th in theorems:
                    yield float(p), float(a), float(b), th


def _entry_rows(entry, alpha, space, dual, config):
    ctx = as_context(alpha)
    cells = list(_cells(config))
    base = [dict(entry_id=entry.id, alpha=float(alpha), p=p, a=a, b=b, theorem=th,
                 admissible=is_admissible(th, p, a, b, ctx)) for p, a, b, th in cells]
    try:
        func = entry.function(alpha)
        c, r, Q = config.scale_c, config.scale_r, ctx.Q
        f = space.sample(func)
        g = space.sample(lambda x, t: c * r ** (-Q) * func(x / r, t / r**2))
        plan = get_plan(space, dual)
        FG = plan.forward_values(np.stack([f.values, g.values]))
        F, G = SpectralFunction(dual, FG[0]), SpectralFunction(dual, FG[1])
        pl = plancherel_defect(f, dual, F=F)
        nf, ng = _Norms(f, F), _Norms(g, G)
    except Exception as exc:  # the whole entry failed; record it on every row
        msg = f"{type(exc).__name__}: {exc}"
        return [SweepRow(**kw, error=msg) for kw in base]
    rows = []
    for kw, (p, a, b, th) in zip(base, cells):
        try:
            rec = nf.record(p, a, b, th, kw["admissible"])
            moved = ng.record(p, a, b, th, kw["admissible"]).ratio
            rows.append(SweepRow(**kw, record=rec, plancherel_defect=pl,
                                 scale_defect=abs(moved - rec.ratio) / rec.ratio))
        except Exception as exc:
            rows.append(SweepRow(**kw, plancherel_defect=pl, error=f"{type(exc).__name__}: {exc}"))
    return rows


def run_sweep(config, threads=1):
    """Evaluate every (entry, alpha, p, a, b, theorem) cell of ``config``."""
    rows = []
    entries = config.entries()
    for alpha in config.alpha_list:
        ctx = as_context(alpha)
        space = build_space_grid(ctx, **config.space_kwargs())
        dual = build_dual_grid(ctx, **config.dual_kwargs())
        get_plan(space, dual)  # build the shared kernels before the workers start
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            for part in pool.map(lambda e: _entry_rows(e, alpha, space, dual, config), entries):
                rows.extend(part)
    rows.sort(key=lambda r: r.key)
    return SweepReport(rows)
