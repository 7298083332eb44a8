"""Exhaustive ground truth for q and mu, independent of the closed form.

Compatibility only looks at the interior rows of a multiplicity matrix, so
the search runs over interior blocks: every choice of interior entries per
column that extends to a valid column. Blocks are grouped by interior row
sums and the groups are joined pairwise.
"""

from __future__ import annotations

import csv
import itertools
import json
import os
import time
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np
from filelock import FileLock

from . import decision
from ._kernels import first_compatible
from .model import SizeTuple, as_size_tuple

CACHE_ENV = "QJOIN_CACHE"


@lru_cache(maxsize=None)
def _interior_options(mi: int, r: int) -> tuple[tuple[int, ...], ...]:
    """Interior parts (length r-2) of valid columns for K_mi, zero interiors dropped.

    A zero interior column can never be compatible, so it is skipped.
    """
    out = []
    inner = r - 2
    for total in range(1, mi + 1):
        for x in _compositions(total, inner):
            outer = mi - total
            nnz = sum(1 for v in x if v) + min(outer, 2)
            if mi >= 2 and nnz < 2:
                continue
            out.append(x)
    return tuple(out)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


@lru_cache(maxsize=4096)
def _grouped_blocks(m: tuple[int, ...], r: int) -> dict[tuple[int, ...], np.ndarray]:
    options = [_interior_options(mi, r) for mi in m]
    groups: dict[tuple[int, ...], list] = defaultdict(list)
    for cols in itertools.product(*options):
        block = np.array(cols, dtype=np.int64).T  # (r-2, k)
        groups[tuple(int(x) for x in block.sum(axis=1))].append(block)
    return {sig: np.stack(blocks) for sig, blocks in groups.items()}


def _search(m: SizeTuple, n: SizeTuple, r: int) -> int | None:
    """Smallest interior mass of a compatible pair with r rows, or None."""
    vg = _grouped_blocks(tuple(sorted(m, reverse=True)), r)
    wg = _grouped_blocks(tuple(sorted(n, reverse=True)), r)
    common = sorted(set(vg) & set(wg), key=lambda sig: (sum(sig), sig))
    for sig in common:
        a, _ = first_compatible(vg[sig], wg[sig])
        if a >= 0:
            return sum(sig)
    return None


def _check_rmax(r_max: int) -> None:
    if r_max < 3:
        raise ValueError("r_max must be at least 3")


def brute_force_q(m, n, r_max: int = 4) -> int:
    _check_rmax(r_max)
    m, n = as_size_tuple(m), as_size_tuple(n)
    for r in range(3, r_max + 1):
        if _search(m, n, r) is not None:
            return 2
    return 3


def brute_force_mu(m, n, r_max: int = 4) -> int:
    _check_rmax(r_max)
    m, n = as_size_tuple(m), as_size_tuple(n)
    best = None
    for r in range(3, r_max + 1):
        got = _search(m, n, r)
        if got is not None and (best is None or got < best):
            best = got
    if best is None:
        raise decision.NotRealizable(f"no compatible pair with at most {r_max} rows for {m} | {n}")
    return best


class OracleCache:
    """Append-only JSONL store of oracle answers keyed by canonical tuples.

    Records are written once per key under a file lock, so concurrent
    sweeps can share one file.
    """

    def __init__(self, path):
        self.path = Path(path)
        self._lock = FileLock(str(self.path) + ".lock")
        self._data: dict[str, dict] = {}
        self._load()

    @staticmethod
    def key(m: SizeTuple, n: SizeTuple, r_max: int) -> str:
        return f"{m.canonical()}|{n.canonical()}|{r_max}"

    def _load(self) -> None:
        if not self.path.exists():
            return
        with self.path.open() as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError:
                    continue  # torn tail from an interrupted writer
                self._data.setdefault(rec["key"], rec)

    def get(self, key: str) -> dict | None:
        return self._data.get(key)

    def put(self, key: str, q: int, mu: int | None, r_max: int) -> None:
        if key in self._data:
            return
        rec = {"key": key, "q": q, "mu": mu, "r_max": r_max, "timestamp": time.time()}
        with self._lock:
            self._data.clear()
            self._load()
            if key in self._data:
                return
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a") as fh:
                fh.write(json.dumps(rec) + "\n")
            self._data[key] = rec

    def __len__(self) -> int:
        return len(self._data)


def default_cache_path() -> str | None:
    return os.environ.get(CACHE_ENV) or None


def partitions(total: int, max_part: int | None = None):
    """Descending partitions of ``total``."""
    if max_part is None:
        max_part = total
    if total == 0:
        yield ()
        return
    for first in range(min(total, max_part), 0, -1):
        for rest in partitions(total - first, first):
            yield (first, *rest)


def canonical_tuples(limit: int) -> list[SizeTuple]:
    return [SizeTuple(p) for t in range(1, limit + 1) for p in partitions(t)]


@dataclass
class CrossCheckRow:
    m: SizeTuple
    n: SizeTuple
    q_formula: int
    q_brute: int
    mu_formula: int | None
    mu_brute: int | None
    agree: bool

    def to_json(self) -> dict:
        return {
            "m": self.m.to_json(),
            "n": self.n.to_json(),
            "q_formula": self.q_formula,
            "q_brute": self.q_brute,
            "mu_formula": self.mu_formula,
            "mu_brute": self.mu_brute,
            "agree": self.agree,
        }


@dataclass
class CrossCheckReport:
    limit: int
    r_max: int
    check_mu: bool
    rows: list[CrossCheckRow] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def cells(self) -> int:
        return len(self.rows)

    @property
    def counterexamples(self) -> list[CrossCheckRow]:
        return [row for row in self.rows if not row.agree]

    def to_json(self) -> dict:
        return {
            "limit": self.limit,
            "r_max": self.r_max,
            "check_mu": self.check_mu,
            "cells": self.cells,
            "q2_cells": sum(1 for row in self.rows if row.q_brute == 2),
            "counterexamples": [row.to_json() for row in self.counterexamples],
            "elapsed_s": round(self.elapsed, 3),
        }

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            out = csv.writer(fh)
            out.writerow(["m", "n", "q_formula", "q_brute", "mu_formula", "mu_brute", "agree"])
            for row in self.rows:
                out.writerow(
                    [
                        str(row.m),
                        str(row.n),
                        row.q_formula,
                        row.q_brute,
                        "" if row.mu_formula is None else row.mu_formula,
                        "" if row.mu_brute is None else row.mu_brute,
                        "true" if row.agree else "false",
                    ]
                )


def cross_check(limit: int, r_max: int = 4, check_mu: bool = True, cache: OracleCache | None = None) -> CrossCheckReport:
    """Compare the closed form against brute force on every canonical pair with |m|, |n| <= limit."""
    if limit < 2:
        raise ValueError("limit must be at least 2")
    _check_rmax(r_max)
    t0 = time.perf_counter()
    report = CrossCheckReport(limit=limit, r_max=r_max, check_mu=check_mu)
    tuples = canonical_tuples(limit)
    for m in tuples:
        for n in tuples:
            q_f = decision.q_value(m, n)
            mu_f = decision.mu(m, n) if (check_mu and q_f == 2) else None
            rec = cache.get(OracleCache.key(m, n, r_max)) if cache is not None else None
            if rec is not None and (rec["q"] == 3 or rec["mu"] is not None or not check_mu):
                q_b, mu_b = rec["q"], rec["mu"]
            else:
                q_b = brute_force_q(m, n, r_max)
                mu_b = brute_force_mu(m, n, r_max) if (check_mu and q_b == 2) else None
                if cache is not None:
                    cache.put(OracleCache.key(m, n, r_max), q_b, mu_b, r_max)
            if not check_mu:
                mu_b = None
            agree = q_f == q_b and mu_f == mu_b
            report.rows.append(CrossCheckRow(m, n, q_f, q_b, mu_f, mu_b, agree))
    report.elapsed = time.perf_counter() - t0
    return report
