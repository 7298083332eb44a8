"""Exact worked examples, evaluated from their closed forms.

* ``cycles_join``: an orthogonal symmetric matrix in S(C8 v C4) with
  interior eigenvalues -+(sqrt(2) - 1).
* ``rank_two_star``: the rank-two matrix in S(K2 v mK1) with nonzero
  eigenvalues +-1 (it is not orthogonal).
"""

from __future__ import annotations

import numpy as np

from .model import EigenvalueList

SQRT2 = np.sqrt(2.0)
CYCLE_LAMBDA = SQRT2 - 1.0


def cycle_adjacency(n: int) -> np.ndarray:
    adj = np.zeros((n, n), dtype=bool)
    for i in range(n):
        adj[i, (i + 1) % n] = adj[(i + 1) % n, i] = True
    return adj


def _alpha(r: float) -> float:
    return np.sqrt(5.0 + r / SQRT2)


def cycles_blocks() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(A_G, A_H, C) for the C8 v C4 example."""
    A_G = cycle_adjacency(8).astype(float)
    A_G[0, 7] = A_G[7, 0] = -1.0
    A_G /= np.sqrt(2.0 + SQRT2)

    A_H = np.array([[0, 1, 0, -1], [1, 0, 1, 0], [0, 1, 0, 1], [-1, 0, 1, 0]], dtype=float) / (2.0 + SQRT2)

    a = _alpha
    core = np.array(
        [
            [3 * SQRT2, -1, 6 * SQRT2, 3],
            [-a(1), 3 * a(-7), -a(-1), 3 * a(7)],
            [-9, -SQRT2, -3, -2 * SQRT2],
            [a(7), -3 * a(1), -a(-7), -3 * a(-1)],
            [6 * SQRT2, 3, -3 * SQRT2, 1],
            [-a(-1), 3 * a(7), a(1), -3 * a(-7)],
            [-3, -2 * SQRT2, 9, SQRT2],
            [-a(-7), -3 * a(-1), -a(7), 3 * a(1)],
        ]
    )
    C = np.sqrt(CYCLE_LAMBDA) / 10.0 * core
    return A_G, A_H, C


def cycles_join() -> np.ndarray:
    A_G, A_H, C = cycles_blocks()
    return np.block([[A_G, C], [C.T, -A_H]])


def cycles_pattern() -> np.ndarray:
    from .realization import join_pattern

    return join_pattern(cycle_adjacency(8), cycle_adjacency(4))


def cycles_eigenvalues() -> EigenvalueList:
    return EigenvalueList([-1.0, -CYCLE_LAMBDA, CYCLE_LAMBDA, 1.0])


CYCLES_Z = (np.eye(2), np.array([[4.0, -3.0], [3.0, 4.0]]) / 5.0)


def rank_two_star(m: int = 3) -> np.ndarray:
    """[[A, B], [B^T, 0]] with A = (1/20)[[4, 3], [3, -4]], B = sqrt(3)/(4 sqrt(m)) [1; 2]."""
    A = np.array([[4.0, 3.0], [3.0, -4.0]]) / 20.0
    B = np.sqrt(3.0) / (4.0 * np.sqrt(m)) * np.vstack([np.ones(m), 2.0 * np.ones(m)])
    return np.block([[A, B], [B.T, np.zeros((m, m))]])


def rank_two_star_general(lam: float, m: int = 3) -> np.ndarray:
    """Rank-two matrix in S(K2 v mK1) with eigenvalues lam, -1 and 0 (m times), lam > 0, lam != 1."""
    x1 = np.ones(2) / SQRT2
    x2 = np.ones(m) / np.sqrt(m)
    return np.block(
        [
            [(lam - 1.0) * np.outer(x1, x1), np.sqrt(lam) * np.outer(x1, x2)],
            [np.sqrt(lam) * np.outer(x2, x1), np.zeros((m, m))],
        ]
    )
