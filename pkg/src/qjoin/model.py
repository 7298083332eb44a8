"""Value types shared by the combinatorial and numeric layers.

Everything combinatorial is exact integer data held in tuples; only
:class:`DenseSymMatrix` carries floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class SizeTuple:
    """Orders of the complete graphs in a disjoint union ``K_m1 u ... u K_mk``."""

    entries: tuple[int, ...]

    def __init__(self, entries: Iterable[int]):
        vals = tuple(int(e) for e in entries)
        if not vals:
            raise ValueError("a size tuple needs at least one component")
        if any(e < 1 for e in vals):
            raise ValueError(f"component orders must be positive, got {vals}")
        object.__setattr__(self, "entries", vals)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __str__(self) -> str:
        return ",".join(map(str, self.entries))

    def total(self) -> int:
        return sum(self.entries)

    def iso(self) -> int:
        """Number of isolated vertices, i.e. components of order one."""
        return sum(1 for e in self.entries if e == 1)

    def canonical(self) -> SizeTuple:
        """Descending-sorted copy; q is invariant under component permutation."""
        return SizeTuple(sorted(self.entries, reverse=True))

    def to_json(self) -> list[int]:
        return list(self.entries)

    @classmethod
    def from_json(cls, obj: Sequence[int]) -> SizeTuple:
        return cls(obj)


def as_size_tuple(m) -> SizeTuple:
    return m if isinstance(m, SizeTuple) else SizeTuple(m)


@dataclass(frozen=True)
class MultiplicityMatrix:
    """r x k nonnegative integer matrix; column i is an ordered multiplicity list."""

    data: tuple[tuple[int, ...], ...]

    def __init__(self, data):
        rows = tuple(tuple(int(x) for x in row) for row in data)
        if len(rows) < 3:
            raise ValueError(f"multiplicity matrices need at least 3 rows, got {len(rows)}")
        width = len(rows[0])
        if width < 1 or any(len(row) != width for row in rows):
            raise ValueError("ragged or empty multiplicity matrix")
        if any(x < 0 for row in rows for x in row):
            raise ValueError("multiplicities must be nonnegative")
        for j in range(width):
            if not any(row[j] for row in rows):
                raise ValueError(f"column {j} is identically zero")
        object.__setattr__(self, "data", rows)

    @property
    def rows(self) -> int:
        return len(self.data)

    @property
    def cols(self) -> int:
        return len(self.data[0])

    def array(self) -> np.ndarray:
        return np.array(self.data, dtype=np.int64)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.data)

    def column_sums(self) -> tuple[int, ...]:
        return tuple(sum(row[j] for row in self.data) for j in range(self.cols))

    def row_sums(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.data)

    def middle_mass(self) -> int:
        """Total multiplicity carried by the interior eigenvalues."""
        return sum(self.row_sums()[1:-1])

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "data": [list(r) for r in self.data]}

    @classmethod
    def from_json(cls, obj: dict) -> MultiplicityMatrix:
        mat = cls(obj["data"])
        if mat.rows != obj.get("rows", mat.rows) or mat.cols != obj.get("cols", mat.cols):
            raise ValueError("declared shape does not match data")
        return mat

    def __str__(self) -> str:
        width = max(len(str(x)) for row in self.data for x in row)
        return "\n".join(" ".join(str(x).rjust(width) for x in row) for row in self.data)


def middle(V: MultiplicityMatrix) -> tuple[tuple[int, ...], ...]:
    """Rows 2..r-1 of ``V`` (first and last row deleted)."""
    if V.rows < 3:
        raise ValueError("middle() needs at least 3 rows")
    return V.data[1:-1]


@dataclass(frozen=True)
class EigenvalueList:
    values: tuple[float, ...]

    def __init__(self, values: Iterable[float]):
        vals = tuple(float(v) for v in values)
        if not vals:
            raise ValueError("empty eigenvalue list")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError(f"eigenvalues must be strictly increasing: {vals}")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def check_realizable(self) -> None:
        """Raise unless the list is (-1, interior..., 1) with interior in (-1, 1)."""
        v = self.values
        if len(v) < 3 or v[0] != -1.0 or v[-1] != 1.0:
            raise ValueError(f"eigenvalue list must run from -1 to 1 with an interior value: {v}")
        if any(not -1.0 < x < 1.0 for x in v[1:-1]):
            raise ValueError("interior eigenvalues must lie strictly inside (-1, 1)")

    @classmethod
    def default(cls, r: int, guard: float = 1e-3) -> EigenvalueList:
        """Equally spaced interior values pulled inside (-1, 1) by ``guard``."""
        if r < 3:
            raise ValueError("need r >= 3")
        interior = [-1.0 + 2.0 * s / (r - 1) * (1.0 - guard) for s in range(1, r - 1)]
        return cls([-1.0, *interior, 1.0])


@dataclass(frozen=True, eq=False)
class DenseSymMatrix:
    """Square real matrix, symmetrized on construction."""

    data: np.ndarray

    def __init__(self, data, *, check: bool = True, atol: float = 0.0):
        arr = np.array(data, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {arr.shape}")
        if check:
            defect = float(np.abs(arr - arr.T).max()) if arr.size else 0.0
            if defect > atol:
                raise ValueError(f"matrix is not symmetric (defect {defect:.3e})")
        # keep exactly one triangle so X[i, j] == X[j, i] bitwise
        arr = np.triu(arr) + np.triu(arr, 1).T
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    def to_json(self) -> dict:
        return {"n": self.n, "data": self.data.tolist()}

    @classmethod
    def from_json(cls, obj: dict, atol: float = 1e-12) -> DenseSymMatrix:
        mat = cls(obj["data"], atol=atol)
        if "n" in obj and obj["n"] != mat.n:
            raise ValueError("declared size does not match data")
        return mat

    def to_text(self, precision: int = 6) -> str:
        cells = [[f"{x:.{precision}f}" for x in row] for row in self.data]
        width = max((len(c) for row in cells for c in row), default=0)
        return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)


@dataclass(frozen=True)
class DecisionReport:
    m: SizeTuple
    n: SizeTuple
    q: int
    rule: str
    witness: tuple[MultiplicityMatrix, MultiplicityMatrix] | None = None
    mu: int | None = None
    iplus_range: tuple[int, int] | None = None
    branch: str | None = None
    swapped: bool = False
    advisory: str | None = field(default=None)

    def __post_init__(self):
        if self.q not in (2, 3):
            raise ValueError("q must be 2 or 3")
        if (self.q == 2) != (self.witness is not None) or (self.q == 2) != (self.mu is not None):
            raise ValueError("q == 2 exactly when a witness and mu are present")

    def to_json(self) -> dict:
        return {
            "m": self.m.to_json(),
            "n": self.n.to_json(),
            "q": self.q,
            "rule": self.rule,
            "branch": self.branch,
            "swapped": self.swapped,
            "witness": None
            if self.witness is None
            else {"V": self.witness[0].to_json(), "W": self.witness[1].to_json()},
            "mu": self.mu,
            "iplus_range": None if self.iplus_range is None else list(self.iplus_range),
            "advisory": self.advisory,
        }

    @classmethod
    def from_json(cls, obj: dict) -> DecisionReport:
        wit = obj.get("witness")
        rng = obj.get("iplus_range")
        return cls(
            m=SizeTuple(obj["m"]),
            n=SizeTuple(obj["n"]),
            q=obj["q"],
            rule=obj["rule"],
            witness=None
            if wit is None
            else (MultiplicityMatrix.from_json(wit["V"]), MultiplicityMatrix.from_json(wit["W"])),
            mu=obj.get("mu"),
            iplus_range=None if rng is None else (rng[0], rng[1]),
            branch=obj.get("branch"),
            swapped=obj.get("swapped", False),
            advisory=obj.get("advisory"),
        )
