"""Closed-form q for joins of clique unions, with explicit witnesses.

All routines normalize so that the first tuple has no more components than
the second (k <= l), and map results back to the caller's orientation.
"""

from __future__ import annotations

from .combinatorics import (
    compose_bounded,
    fill_two_row_table,
    is_compatible,
    is_multiplicity_matrix_for,
)
from .model import DecisionReport, MultiplicityMatrix, SizeTuple, as_size_tuple

CONNECTED_ADVISORY = (
    "q >= 3 also holds for any join of connected graphs with these component orders"
)


class NotRealizable(ValueError):
    """Raised when an operation needs q = 2 but the join has q = 3."""


def _oriented(m: SizeTuple, n: SizeTuple) -> tuple[SizeTuple, SizeTuple, bool]:
    if len(m) > len(n):
        return n, m, True
    return m, n, False


def _rule(m: SizeTuple, n: SizeTuple) -> str:
    # assumes len(m) <= len(n)
    k, l = len(m), len(n)
    tm, tn, im, in_ = m.total(), n.total(), m.iso(), n.iso()
    if im == 0 and in_ == 0 and l <= tm:
        return "g1"
    if im > 0 and k + l <= tm + im:
        return "g2"
    if im == 0 and in_ > 0 and (k + l <= tm or 2 * k <= l <= tm or l <= 2 * k <= tn):
        return "g3"
    return "none"


def q_value(m, n) -> int:
    """Just the number 2 or 3, without building a witness."""
    a, b, _ = _oriented(as_size_tuple(m), as_size_tuple(n))
    return 3 if _rule(a, b) == "none" else 2


def _mu_oriented(m: SizeTuple, n: SizeTuple) -> int:
    k, l = len(m), len(n)
    if m.total() + m.iso() - k < l < 2 * k:
        return 2 * k
    return l


def mu(m, n) -> int:
    """Least interior multiplicity mass over all compatible witness pairs."""
    a, b, _ = _oriented(as_size_tuple(m), as_size_tuple(n))
    if _rule(a, b) == "none":
        raise NotRealizable(f"q({a} | {b}) = 3, mu is undefined")
    return _mu_oriented(a, b)


def iplus_range(m, n) -> tuple[int, int]:
    """Inclusive range of achievable +1 multiplicities of an orthogonal realization."""
    m, n = as_size_tuple(m), as_size_tuple(n)
    lo = mu(m, n)
    return lo, m.total() + n.total() - lo


def _matrix(rows) -> MultiplicityMatrix:
    return MultiplicityMatrix([list(r) for r in rows])


def _three_row(m: SizeTuple, n: SizeTuple):
    t = compose_bounded(len(n), [max(1, mi - 1) for mi in m])
    assert t is not None
    V = _matrix([[mi - ti for mi, ti in zip(m, t)], t, [0] * len(m)])
    W = _matrix([[nj - 1 for nj in n], [1] * len(n), [0] * len(n)])
    return V, W


def _all_ones_two_rows(m: SizeTuple) -> MultiplicityMatrix:
    k = len(m)
    return _matrix([[mi - 2 for mi in m], [1] * k, [1] * k, [0] * k])


def _no_iso_short(m: SizeTuple, n: SizeTuple):
    # both sides without isolated vertices, k <= l < 2k
    k, l = len(m), len(n)
    split = 2 * k - l
    top, r2, r3 = [], [], []
    for j, nj in enumerate(n):
        if j < split:
            top.append(nj - 2), r2.append(1), r3.append(1)
        elif j < k:
            top.append(nj - 1), r2.append(1), r3.append(0)
        else:
            top.append(nj - 1), r2.append(0), r3.append(1)
    return _all_ones_two_rows(m), _matrix([top, r2, r3, [0] * l])


def _double_width(m: SizeTuple, p: tuple[int, ...]):
    """Witness for no-isolated m against a tuple p with |p| = 2k."""
    k = len(m)
    big = [j for j, pj in enumerate(p) if pj >= 2]
    ones = [j for j, pj in enumerate(p) if pj == 1]
    t = len(big)
    a, b = divmod(len(ones), 2)
    R = (k - t - a - b, k - t - a)
    Y = fill_two_row_table(R, [p[j] - 2 for j in big])
    assert Y is not None and min(R) >= 0
    rows = [[0] * len(p) for _ in range(4)]
    for idx, j in enumerate(big):
        rows[1][j] = Y[0][idx] + 1
        rows[2][j] = Y[1][idx] + 1
    for idx, j in enumerate(ones):
        rows[1 if idx < a + b else 2][j] = 1
    return _all_ones_two_rows(m), rows


def _wide_no_iso(m: SizeTuple, n: SizeTuple):
    # no isolated vertices in m, 2k <= l <= |m|
    k, l = len(m), len(n)
    r = compose_bounded(l - k, [mi - 1 for mi in m])
    assert r is not None
    V = _matrix([[mi - ri - 1 for mi, ri in zip(m, r)], [1] * k, r, [0] * k])
    W = _matrix(
        [
            [nj - 1 for nj in n],
            [1 if j < k else 0 for j in range(l)],
            [0 if j < k else 1 for j in range(l)],
            [0] * l,
        ]
    )
    return V, W


def _construct_oriented(m: SizeTuple, n: SizeTuple) -> tuple[MultiplicityMatrix, MultiplicityMatrix, str]:
    k, l = len(m), len(n)
    rule = _rule(m, n)
    if rule == "none":
        raise NotRealizable(f"q({m} | {n}) = 3, no compatible witness exists")
    if k + l <= min(m.total() + m.iso(), n.total() + n.iso()):
        return (*_three_row(m, n), "three-row")
    if m.iso() == 0 and n.iso() == 0 and l < 2 * k:
        return (*_no_iso_short(m, n), "no-isolated")
    if m.iso() == 0 and l <= 2 * k <= n.total():
        p = compose_bounded(2 * k, list(n))
        assert p is not None
        V, rows = _double_width(m, p)
        # lift p up to n through the first row; the middle is unchanged
        rows[0] = [nj - pj for nj, pj in zip(n, p)]
        return V, _matrix(rows), "double-width-lift"
    if m.iso() == 0 and 2 * k <= l <= m.total():
        return (*_wide_no_iso(m, n), "wide")
    raise AssertionError(f"no construction covers {m} | {n} under rule {rule}")


def construct_witness(m, n) -> tuple[MultiplicityMatrix, MultiplicityMatrix]:
    """Compatible multiplicity matrices (V for m, W for n) with 3 or 4 rows."""
    V, W, _ = _construct_with_branch(as_size_tuple(m), as_size_tuple(n))
    return V, W


def _construct_with_branch(m: SizeTuple, n: SizeTuple):
    a, b, swapped = _oriented(m, n)
    V, W, branch = _construct_oriented(a, b)
    if swapped:
        V, W = W, V
    # self-check; these are cheap and guard every emitted witness
    if not (is_multiplicity_matrix_for(V, m) and is_multiplicity_matrix_for(W, n) and is_compatible(V, W)):
        raise AssertionError(f"construction {branch!r} produced an invalid witness for {m} | {n}")
    return V, W, branch


def decide_q(m, n) -> DecisionReport:
    m, n = as_size_tuple(m), as_size_tuple(n)
    a, b, swapped = _oriented(m, n)
    rule = _rule(a, b)
    if rule == "none":
        return DecisionReport(m=m, n=n, q=3, rule=rule, swapped=swapped, advisory=CONNECTED_ADVISORY)
    V, W, branch = _construct_with_branch(m, n)
    lo = _mu_oriented(a, b)
    return DecisionReport(
        m=m,
        n=n,
        q=2,
        rule=rule,
        witness=(V, W),
        mu=lo,
        iplus_range=(lo, m.total() + n.total() - lo),
        branch=branch,
        swapped=swapped,
    )


def witness_same_size_components(sizes_G, sizes_H, n: int):
    """(n+2)-row witness for two k-component graphs whose orders lie in {n, n+1, n+2}.

    Middle block is all ones; each top/bottom entry carries one unit of the
    component's excess over n.
    """
    g, h = as_size_tuple(sizes_G), as_size_tuple(sizes_H)
    if n < 1:
        raise ValueError("base order must be positive")
    if len(g) != len(h):
        raise ValueError("both graphs need the same number of components")
    if len(g) < 2:
        raise ValueError("needs at least two components per side")
    for x in (*g, *h):
        if not n <= x <= n + 2:
            raise ValueError(f"component order {x} not in {{{n}, {n + 1}, {n + 2}}}")

    def build(sizes):
        k = len(sizes)
        top = [1 if x - n >= 1 else 0 for x in sizes]
        bottom = [1 if x - n == 2 else 0 for x in sizes]
        return _matrix([top, *([[1] * k] * n), bottom])

    return build(g), build(h)


def witness_connected_vs_cliques(m: int, n):
    """(l+2)-row witness for a connected graph of order m joined with K_n, |n| = l."""
    n = as_size_tuple(n)
    l = len(n)
    if m not in (l, l + 1, l + 2):
        raise ValueError(f"order {m} must be one of {l}, {l + 1}, {l + 2}")
    extra = m - l
    V = _matrix([[1 if extra >= 1 else 0]] + [[1]] * l + [[1 if extra == 2 else 0]])
    eye = [[1 if i == j else 0 for j in range(l)] for i in range(l)]
    W = _matrix([[nj - 1 for nj in n], *eye, [0] * l])
    return V, W
