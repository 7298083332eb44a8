"""Predicates and small constructors for multiplicity matrices of clique unions."""

from __future__ import annotations

import itertools
from collections import defaultdict
from typing import Iterator, Sequence

import numpy as np

from .model import MultiplicityMatrix, SizeTuple, as_size_tuple, middle

DEFAULT_R_MAX = 4  # enough rows for every union of complete graphs


def is_multiplicity_matrix_for(V: MultiplicityMatrix, m) -> bool:
    """Column i sums to m_i, and has two nonzero entries whenever m_i >= 2."""
    m = as_size_tuple(m)
    if V.cols != len(m):
        raise ValueError(f"matrix has {V.cols} columns but the tuple has {len(m)} components")
    for j, mj in enumerate(m):
        col = V.column(j)
        if sum(col) != mj:
            return False
        if mj >= 2 and sum(1 for x in col if x) < 2:
            return False
    return True


def is_compatible(V: MultiplicityMatrix, W: MultiplicityMatrix) -> bool:
    if V.rows != W.rows:
        raise ValueError(f"row counts differ: {V.rows} vs {W.rows}")
    Vm = np.array(middle(V), dtype=np.int64)
    Wm = np.array(middle(W), dtype=np.int64)
    if not np.array_equal(Vm.sum(axis=1), Wm.sum(axis=1)):
        return False
    return bool((Vm.T @ Wm > 0).all())


def compose_bounded(t: int, caps: Sequence[int]) -> tuple[int, ...] | None:
    """Positive b with b <= caps and sum(b) == t, filled greedily from the left.

    Exists iff len(caps) <= t <= sum(caps); returns None otherwise.
    """
    if not caps:
        raise ValueError("caps must be nonempty")
    if any(c < 1 for c in caps):
        raise ValueError("caps must be positive")
    if not len(caps) <= t <= sum(caps):
        return None
    spare = t - len(caps)
    out = []
    for c in caps:
        add = min(c - 1, spare)
        out.append(1 + add)
        spare -= add
    return tuple(out)


def fill_two_row_table(R: Sequence[int], C: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Nonnegative 2 x len(C) table with row sums R and column sums C, or None."""
    r1, r2 = R
    if r1 < 0 or r2 < 0 or any(c < 0 for c in C):
        raise ValueError("margins must be nonnegative")
    if r1 + r2 != sum(C):
        return None
    top, bottom = [], []
    left = r1
    for c in C:
        x = min(left, c)
        top.append(x)
        bottom.append(c - x)
        left -= x
    return tuple(top), tuple(bottom)


def _weak_compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    # descending lexicographic order
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _weak_compositions(total - first, parts - 1):
            yield (first, *rest)


def column_options(mi: int, r: int) -> list[tuple[int, ...]]:
    """All valid multiplicity vectors of length r for K_mi, in descending lex order."""
    cols = _weak_compositions(mi, r)
    if mi >= 2:
        return [c for c in cols if sum(1 for x in c if x) >= 2]
    return list(cols)


def enumerate_multiplicity_matrices(m, r: int) -> Iterator[MultiplicityMatrix]:
    """Every r x k multiplicity matrix for K_m exactly once, deterministically ordered.

    Columns are listed in descending lexicographic order; the first column
    varies slowest.
    """
    if r < 3:
        raise ValueError("r must be at least 3")
    m = as_size_tuple(m)
    options = [column_options(mi, r) for mi in m]
    for cols in itertools.product(*options):
        yield MultiplicityMatrix([[c[s] for c in cols] for s in range(r)])


def compatible_pair_exists(m, n, r_max: int = DEFAULT_R_MAX):
    """First compatible (V, W) with a common row count in [3, r_max], else None.

    Candidates are hash-joined on their middle row-sum vectors; within a
    row count the first V in enumeration order wins, then the first W.
    """
    if r_max < 3:
        raise ValueError("r_max must be at least 3")
    m, n = as_size_tuple(m), as_size_tuple(n)
    for r in range(3, r_max + 1):
        by_sig: dict[tuple[int, ...], list[MultiplicityMatrix]] = defaultdict(list)
        for W in enumerate_multiplicity_matrices(n, r):
            by_sig[W.row_sums()[1:-1]].append(W)
        stacked = {
            sig: np.array([middle(W) for W in group], dtype=np.int64) for sig, group in by_sig.items()
        }
        seen: set = set()
        for V in enumerate_multiplicity_matrices(m, r):
            Vm = middle(V)
            if Vm in seen:
                continue
            seen.add(Vm)
            sig = V.row_sums()[1:-1]
            group = stacked.get(sig)
            if group is None:
                continue
            prod = np.einsum("si,bsj->bij", np.array(Vm, dtype=np.int64), group)
            ok = (prod > 0).all(axis=(1, 2))
            if ok.any():
                return V, by_sig[sig][int(np.argmax(ok))]
    return None
