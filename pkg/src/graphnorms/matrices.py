"""Symmetric rational matrices (step-graphon kernels), the cut norm, and sampling.

Entries are exact ``fractions.Fraction`` values stored once per unordered
index pair, row-major over the upper triangle: (0,0), (0,1), ..., (0,n-1),
(1,1), ... This pair order is also the coordinate order used for Hessians.
"""

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import SizeGuardError, UsageError
from .rationals import format_rational, parse_rational

CUT_NORM_GUARD = 14

MATRIX_CLASSES = ("nonnegative", "positive", "signed")


def pair_index(i: int, j: int, n: int) -> int:
    """Flat index of the unordered pair {i, j} in row-major upper-triangle order."""
    if i > j:
        i, j = j, i
    return i * n - i * (i - 1) // 2 + (j - i)


def pair_list(n: int) -> list[tuple[int, int]]:
    """All unordered pairs in the canonical order matching pair_index."""
    return [(i, j) for i in range(n) for j in range(i, n)]


@dataclass(frozen=True)
class SymRationalMatrix:
    """n x n symmetric matrix of exact rationals (upper-triangle storage)."""

    n: int
    tri: tuple[Fraction, ...]

    def __post_init__(self):
        if self.n < 1:
            raise UsageError("matrix needs n >= 1")
        if len(self.tri) != self.n * (self.n + 1) // 2:
            raise UsageError("wrong upper-triangle length")

    @classmethod
    def from_rows(cls, rows) -> "SymRationalMatrix":
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise UsageError("matrix is not square")
        rows = [[Fraction(x) for x in r] for r in rows]
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise UsageError(f"matrix not symmetric at ({i},{j})")
        tri = tuple(rows[i][j] for i in range(n) for j in range(i, n))
        return cls(n, tri)

    @classmethod
    def from_pairs(cls, n: int, values) -> "SymRationalMatrix":
        """Build from a {(i, j): value} mapping over i <= j; missing pairs are 0."""
        tri = [Fraction(0)] * (n * (n + 1) // 2)
        for (i, j), x in values.items():
            tri[pair_index(i, j, n)] = Fraction(x)
        return cls(n, tuple(tri))

    def at(self, i: int, j: int) -> Fraction:
        return self.tri[pair_index(i, j, self.n)]

    def rows(self) -> list[list[Fraction]]:
        return [[self.at(i, j) for j in range(self.n)] for i in range(self.n)]

    def entrywise_abs(self) -> "SymRationalMatrix":
        return SymRationalMatrix(self.n, tuple(abs(x) for x in self.tri))

    def scale(self, c) -> "SymRationalMatrix":
        c = Fraction(c)
        return SymRationalMatrix(self.n, tuple(c * x for x in self.tri))

    def add(self, other: "SymRationalMatrix") -> "SymRationalMatrix":
        if self.n != other.n:
            raise UsageError("dimension mismatch")
        return SymRationalMatrix(
            self.n, tuple(a + b for a, b in zip(self.tri, other.tri))
        )

    def sub(self, other: "SymRationalMatrix") -> "SymRationalMatrix":
        return self.add(other.scale(-1))

    def entries_in(self, lo, hi) -> bool:
        lo, hi = Fraction(lo), Fraction(hi)
        return all(lo <= x <= hi for x in self.tri)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.tri)

    def permuted(self, perm: list[int]) -> "SymRationalMatrix":
        """Conjugate by the permutation i -> perm[i]."""
        return SymRationalMatrix.from_pairs(
            self.n,
            {
                (min(perm[i], perm[j]), max(perm[i], perm[j])): self.at(i, j)
                for i in range(self.n)
                for j in range(i, self.n)
            },
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "entries": [[format_rational(x) for x in row] for row in self.rows()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SymRationalMatrix":
        try:
            rows = [[parse_rational(x) for x in row] for row in data["entries"]]
        except (KeyError, TypeError) as exc:
            raise UsageError(f"malformed matrix JSON: {exc}") from exc
        mat = cls.from_rows(rows)
        if mat.n != int(data.get("n", mat.n)):
            raise UsageError("matrix n field disagrees with entries")
        return mat


def load_matrix_text(text: str) -> SymRationalMatrix:
    text = text.strip()
    if not text:
        raise UsageError("empty matrix input")
    try:
        return SymRationalMatrix.from_json(json.loads(text))
    except json.JSONDecodeError as exc:
        raise UsageError(f"bad matrix JSON: {exc}") from exc


def block_pm_ones(n: int) -> SymRationalMatrix:
    """2n x 2n block matrix: +1 within each half, -1 across halves."""
    if n < 1:
        raise UsageError("block size must be >= 1")
    one = Fraction(1)
    return SymRationalMatrix.from_rows(
        [
            [one if (i < n) == (j < n) else -one for j in range(2 * n)]
            for i in range(2 * n)
        ]
    )


def cut_norm(a: SymRationalMatrix, max_size: int = CUT_NORM_GUARD) -> Fraction:
    """max over S, T of |sum_{i in S, j in T} a_ij| / n^2, exactly.

    Restricting S and T to unions of parts is lossless: the objective is
    bilinear in fractional memberships, so optima occur at 0/1 points. For
    each S the optimal T picks exactly the columns whose S-restricted sums
    share a sign, so a single Gray-code sweep over S suffices.
    """
    n = a.n
    if n > max_size:
        raise SizeGuardError(f"cut norm guard: n={n} > {max_size}")
    scale = lcm(*(x.denominator for x in a.tri))
    rows = [[int(a.at(i, j) * scale) for j in range(n)] for i in range(n)]

    colsum = [0] * n
    inside = [False] * n
    best = 0
    # Gray code: flip one row per step, visiting every subset S once
    for g in range(1, 1 << n):
        bit = (g & -g).bit_length() - 1
        row = rows[bit]
        if inside[bit]:
            for j in range(n):
                colsum[j] -= row[j]
        else:
            for j in range(n):
                colsum[j] += row[j]
        inside[bit] = not inside[bit]
        pos = sum(c for c in colsum if c > 0)
        neg = -sum(c for c in colsum if c < 0)
        if pos > best:
            best = pos
        if neg > best:
            best = neg
    return Fraction(best, scale * n * n)


def sample_matrix(
    n: int, matrix_class: str, denominator_bound: int, seed: int
) -> SymRationalMatrix:
    """Deterministic random symmetric matrix with entries p/q, q <= bound.

    Classes: nonnegative -> [0, 1], positive -> (0, 1], signed -> [-1, 1].
    """
    if matrix_class not in MATRIX_CLASSES:
        raise UsageError(f"matrix class must be one of {MATRIX_CLASSES}")
    if denominator_bound < 1:
        raise UsageError("denominator bound must be >= 1")
    rng = random.Random(seed)
    tri = []
    for _ in range(n * (n + 1) // 2):
        q = rng.randint(1, denominator_bound)
        if matrix_class == "nonnegative":
            p = rng.randint(0, q)
        elif matrix_class == "positive":
            p = rng.randint(1, q)
        else:
            p = rng.randint(-q, q)
        tri.append(Fraction(p, q))
    return SymRationalMatrix(n, tuple(tri))
