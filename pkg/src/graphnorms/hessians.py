"""Exact Hessians of the homomorphism-count polynomial and a total PSD decision.

The count polynomial lives on the n(n+1)/2 upper-triangle entries of a
symmetric matrix; Hessian coordinates follow the same row-major pair order
(0,0), (0,1), ..., (1,1), ... as ``matrices.pair_index``. PSD is decided by
pivoted symmetric elimination over the rationals, never by eigenvalues, so
a failure always comes with a rational direction whose quadratic form is
negative and re-checkable by direct multiplication.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .errors import SizeGuardError, UsageError
from .graphs import Graph, structural_report
from .homs import VERTEX_GUARD, profile_map
from .matrices import SymRationalMatrix, block_pm_ones, pair_index, pair_list
from .polys import SparsePoly

HESSIAN_TEMPLATE_GUARD = 4
KERNEL_CHECK_VERTEX_GUARD = 10
KERNEL_CHECK_BLOCK_GUARD = 2


@dataclass(frozen=True)
class HessianMatrix:
    """Second derivatives of the count polynomial at a fixed base matrix,
    restricted to the listed variable pairs."""

    base: SymRationalMatrix
    pairs: tuple[tuple[int, int], ...]
    matrix: SymRationalMatrix  # len(pairs) x len(pairs)

    def entry(self, p: int, q: int) -> Fraction:
        return self.matrix.at(p, q)


def hessian_matrix(
    g: Graph,
    a: SymRationalMatrix,
    pairs=None,
    threads: int = 1,
    max_vertices: int = VERTEX_GUARD,
) -> HessianMatrix:
    """Assemble the exact Hessian directly from edge-multiplicity profiles.

    An assignment with profile m contributes m_p m_q A^{m-e_p-e_q} to the
    off-diagonal pair (p, q) and m_p (m_p - 1) A^{m-2e_p} to the diagonal,
    with 0^0 = 1 and any positive remaining exponent on a zero entry killing
    the term. The count polynomial itself is never materialized.
    """
    if a.n > HESSIAN_TEMPLATE_GUARD:
        raise SizeGuardError(f"hessian guard: n={a.n} > {HESSIAN_TEMPLATE_GUARD}")
    n = a.n
    all_pairs = pair_list(n)
    if pairs is None:
        selected = list(all_pairs)
    else:
        selected = [(min(i, j), max(i, j)) for (i, j) in pairs]
        if len(set(selected)) != len(selected):
            raise UsageError("duplicate pair selection")
        for (i, j) in selected:
            if not (0 <= i <= j < n):
                raise UsageError(f"pair ({i},{j}) out of range")

    ncells = len(all_pairs)
    # every cell multiplicity feeds the power products, so track them all;
    # zero cells beyond multiplicity 2 cannot survive two differentiations
    caps = {idx: 2 for idx in range(ncells) if a.tri[idx] == 0}
    pm = profile_map(g, n, range(ncells), caps, threads, max_vertices)

    sel_idx = [pair_index(i, j, n) for (i, j) in selected]
    k = len(selected)
    entries = [[Fraction(0)] * k for _ in range(k)]
    powers: dict[tuple[int, int], Fraction] = {}

    def cell_power(idx, e):
        if e == 0:
            return Fraction(1)
        key = (idx, e)
        got = powers.get(key)
        if got is None:
            base = a.tri[idx]
            got = base**e if base else Fraction(0)
            powers[key] = got
        return got

    for profile, cnt in pm.items():
        for r in range(k):
            p = sel_idx[r]
            mp = profile[p]
            if mp == 0:
                continue
            for s in range(r, k):
                q = sel_idx[s]
                mq = profile[q]
                if mq == 0:
                    continue
                if p == q:
                    factor = mp * (mp - 1)
                else:
                    factor = mp * mq
                if factor == 0:
                    continue
                w = Fraction(cnt * factor)
                for idx, m in enumerate(profile):
                    drop = (idx == p) + (idx == q)
                    if m - drop:
                        w = w * cell_power(idx, m - drop)
                        if w == 0:
                            break
                if w:
                    entries[r][s] += w
                    if r != s:
                        entries[s][r] += w

    return HessianMatrix(a, tuple(selected), SymRationalMatrix.from_rows(entries))


def principal_submatrix(h: HessianMatrix, pairs) -> SymRationalMatrix:
    """Rows and columns restricted to the given pairs; if this is not PSD
    the full Hessian is not PSD (zero-pad the witness)."""
    wanted = [(min(i, j), max(i, j)) for (i, j) in pairs]
    try:
        positions = [h.pairs.index(p) for p in wanted]
    except ValueError as exc:
        raise UsageError(f"pair not present in Hessian: {exc}") from exc
    return SymRationalMatrix.from_rows(
        [[h.matrix.at(r, s) for s in positions] for r in positions]
    )


@dataclass(frozen=True)
class PsdResult:
    verdict: str  # "psd" | "not_psd"
    witness: tuple[Fraction, ...] | None = None
    value: Fraction | None = None

    @property
    def is_psd(self) -> bool:
        return self.verdict == "psd"


def quadratic_form(m: SymRationalMatrix, v) -> Fraction:
    """v^T M v, exactly."""
    v = [Fraction(x) for x in v]
    if len(v) != m.n:
        raise UsageError("direction length mismatch")
    total = Fraction(0)
    for i in range(m.n):
        if v[i] == 0:
            continue
        for j in range(m.n):
            if v[j] != 0:
                total += v[i] * m.at(i, j) * v[j]
    return total


def _primitive(v: list[Fraction]) -> tuple[Fraction, ...]:
    """Scale a rational vector to a primitive integer vector (same sign)."""
    scale = lcm(*(x.denominator for x in v))
    ints = [int(x * scale) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(Fraction(x) for x in ints)


def psd_certify(m: SymRationalMatrix) -> PsdResult:
    """Total PSD decision by pivoted symmetric elimination over the rationals.

    Eliminates on strictly positive diagonal pivots; a negative diagonal
    entry yields a coordinate witness, and once every remaining diagonal
    entry is zero the matrix is PSD iff the remainder vanishes (a surviving
    off-diagonal entry gives an explicit negative direction). Witnesses are
    back-substituted to original coordinates and re-verified exactly.
    """
    n = m.n
    a = [[Fraction(x) for x in row] for row in m.rows()]
    # columns of lift[] express current coordinates in the original basis
    lift = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    active = list(range(n))

    def finish(direction):
        v = _primitive(direction)
        value = quadratic_form(m, v)
        assert value < 0
        return PsdResult("not_psd", v, value)

    while active:
        neg = next((i for i in active if a[i][i] < 0), None)
        if neg is not None:
            return finish([lift[r][neg] for r in range(n)])
        piv = next((i for i in active if a[i][i] > 0), None)
        if piv is None:
            # all remaining diagonals are zero
            for i in active:
                for j in active:
                    if i < j and a[i][j] != 0:
                        sign = 1 if a[i][j] > 0 else -1
                        return finish(
                            [lift[r][i] - sign * lift[r][j] for r in range(n)]
                        )
            return PsdResult("psd")
        active.remove(piv)
        ap = a[piv][piv]
        row = [a[piv][k] for k in range(n)]
        for j in active:
            f = a[j][piv] / ap
            if f == 0:
                continue
            for k in active:
                a[j][k] -= f * row[k]
            a[j][piv] = a[piv][j] = Fraction(0)
            for r in range(n):
                lift[r][j] -= f * lift[r][piv]
    return PsdResult("psd")


def two_var_hessian_at_origin(p: SparsePoly, x: str = "x", y: str = "y"):
    """The 2x2 Hessian of a bivariate polynomial at the origin.

    Entries are [[2 c(x^2), c(xy)], [c(xy), 2 c(y^2)]]. When extra symbols
    are present (a parameter like eps), each entry is returned as a
    polynomial in those symbols instead of a plain rational.
    """
    if x not in p.symbols or y not in p.symbols:
        raise UsageError(f"polynomial must involve {x!r} and {y!r}")
    xx = p.section({x: 2, y: 0}).scale(2)
    xy = p.section({x: 1, y: 1})
    yy = p.section({x: 0, y: 2}).scale(2)
    if len(p.symbols) == 2:
        const = lambda q: q.coefficient(())
        return [[const(xx), const(xy)], [const(xy), const(yy)]]
    return [[xx, xy], [xy, yy]]


def allones_kernel_check(g: Graph, half: int, threads: int = 1) -> bool:
    """At the +/- block matrix, the Hessian must annihilate the all-ones
    vector exactly (every row sums to zero). Requires an eulerian graph
    with an even number of edges."""
    if g.n > KERNEL_CHECK_VERTEX_GUARD:
        raise SizeGuardError(
            f"kernel check guard: {g.n} vertices > {KERNEL_CHECK_VERTEX_GUARD}"
        )
    if half > KERNEL_CHECK_BLOCK_GUARD:
        raise SizeGuardError(
            f"kernel check guard: block {half} > {KERNEL_CHECK_BLOCK_GUARD}"
        )
    report = structural_report(g)
    if not report.eulerian or g.edge_count % 2 != 0:
        raise UsageError("kernel check needs an eulerian graph with even edge count")
    h = hessian_matrix(g, block_pm_ones(half), threads=threads)
    dim = h.matrix.n
    return all(
        sum(h.matrix.at(r, s) for s in range(dim)) == 0 for r in range(dim)
    )
