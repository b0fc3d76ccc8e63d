"""Exhaustive weighted homomorphism enumeration over step-function kernels.

The single enumeration primitive is a *profile map*: for every map
phi: V(H) -> [n] it records how many edges of H land on each unordered
cell {i, j} of the target matrix, and counts assignments per profile.
Everything else (exact densities, symbolic polynomials in template cells,
Hessian assembly) is a cheap exact post-processing of that integer map,
so the hot loop never touches rational arithmetic.

Enumeration is plain nested assignment over the n^{v(H)} maps in
descending-degree vertex order, short-circuiting a branch as soon as a
cell exceeds its multiplicity cap (weight-zero cells kill immediately).
No tree-decomposition tricks: every instance in scope is small enough
that exhaustive enumeration stays exact and fast.
"""

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import SizeGuardError, UsageError
from .graphs import Graph, structural_report
from .matrices import SymRationalMatrix, block_pm_ones, cut_norm, pair_index
from .polys import SparsePoly

VERTEX_GUARD = 16
TEMPLATE_GUARD = 4
PARALLEL_THRESHOLD = 3**11  # below this, worker startup dominates


@dataclass(frozen=True)
class SymbolicTemplate:
    """Symmetric n x n array whose cells are exact rationals or symbol names.

    Diagonal cells are loop weights. Distinct cells may share a symbol; the
    symbol's exponent then accumulates across those cells.
    """

    n: int
    cells: tuple  # Fraction | str per unordered pair, pair_index order

    def __post_init__(self):
        if len(self.cells) != self.n * (self.n + 1) // 2:
            raise UsageError("wrong template cell count")

    @classmethod
    def from_rows(cls, rows) -> "SymbolicTemplate":
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise UsageError("template is not square")
        norm = [
            [x if isinstance(x, str) else Fraction(x) for x in row] for row in rows
        ]
        for i in range(n):
            for j in range(i + 1, n):
                if norm[i][j] != norm[j][i]:
                    raise UsageError(f"template not symmetric at ({i},{j})")
        return cls(n, tuple(norm[i][j] for i in range(n) for j in range(i, n)))

    @classmethod
    def from_matrix(cls, a: SymRationalMatrix) -> "SymbolicTemplate":
        return cls(a.n, a.tri)

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(sorted({c for c in self.cells if isinstance(c, str)}))

    def cell(self, i: int, j: int):
        return self.cells[pair_index(i, j, self.n)]

    def substitute(self, assignment: dict) -> SymRationalMatrix:
        """Replace every symbol by a rational value."""
        tri = []
        for c in self.cells:
            if isinstance(c, str):
                if c not in assignment:
                    raise UsageError(f"no value for symbol {c!r}")
                tri.append(Fraction(assignment[c]))
            else:
                tri.append(c)
        return SymRationalMatrix(self.n, tuple(tri))


def _enumeration_order(g: Graph):
    """Descending-degree vertex order and per-position back-edge lists."""
    deg = g.degrees()
    order = sorted(range(g.n), key=lambda v: (-deg[v], v))
    pos = {u: i for i, u in enumerate(order)}
    back = [[] for _ in range(g.n)]
    for (u, v) in g.edges:
        i, j = pos[u], pos[v]
        back[max(i, j)].append(min(i, j))
    return order, [tuple(b) for b in back]


def _dfs_profiles(v, back, n, incs, caps, prefix):
    """Enumerate colorings of positions len(prefix)..v-1, returning
    {packed profile key: assignment count}. ``caps`` is None (no limits)
    or a per-cell list of maximum multiplicities."""
    cellof = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            cellof[a][b] = pair_index(a, b, n)

    colors = [0] * v
    counts: dict[int, int] = {}
    start = len(prefix)
    key0 = 0
    cnt = None if caps is None else [0] * len(incs)
    for p, c in enumerate(prefix):
        colors[p] = c
        for b in back[p]:
            cell = cellof[colors[b]][c]
            key0 += incs[cell]
            if cnt is not None:
                cnt[cell] += 1
                if cnt[cell] > caps[cell]:
                    return counts
    if start == v:
        counts[key0] = 1
        return counts

    rng = range(n)
    last = v - 1

    if caps is None:

        def rec(p, key):
            bl = back[p]
            if p == last:
                get = counts.get
                for c in rng:
                    k = key
                    for b in bl:
                        k += incs[cellof[colors[b]][c]]
                    counts[k] = get(k, 0) + 1
            else:
                nxt = p + 1
                for c in rng:
                    k = key
                    for b in bl:
                        k += incs[cellof[colors[b]][c]]
                    colors[p] = c
                    rec(nxt, k)

    else:

        def rec(p, key):
            bl = back[p]
            is_last = p == last
            for c in rng:
                k = key
                touched = []
                ok = True
                for b in bl:
                    cell = cellof[colors[b]][c]
                    cnt[cell] += 1
                    touched.append(cell)
                    if cnt[cell] > caps[cell]:
                        ok = False
                        break
                if ok:
                    for b in bl:
                        k += incs[cellof[colors[b]][c]]
                    if is_last:
                        counts[k] = counts.get(k, 0) + 1
                    else:
                        colors[p] = c
                        rec(p + 1, k)
                for cell in touched:
                    cnt[cell] -= 1

    rec(start, key0)
    return counts


def _dfs_worker(args):
    spec, prefix = args
    return _dfs_profiles(*spec, prefix)


def _merge_counts(parts):
    total: dict[int, int] = {}
    for part in parts:
        for k, c in part.items():
            total[k] = total.get(k, 0) + c
    return total


@dataclass(frozen=True)
class ProfileMap:
    """Packed edge-multiplicity profiles with assignment counts."""

    tracked: tuple[int, ...]  # flat cell indices, ascending
    width: int
    counts: dict  # packed key -> number of assignments

    def decode(self, key: int) -> tuple[int, ...]:
        mask = (1 << self.width) - 1
        return tuple((key >> (t * self.width)) & mask for t in range(len(self.tracked)))

    def items(self):
        for key in sorted(self.counts):
            yield self.decode(key), self.counts[key]


def profile_map(
    g: Graph,
    n: int,
    tracked_cells,
    caps: dict[int, int] | None = None,
    threads: int = 1,
    max_vertices: int = VERTEX_GUARD,
) -> ProfileMap:
    """Count assignments per profile over the tracked cells.

    ``caps`` limits cell multiplicity (branch pruned beyond the cap);
    capped cells must be tracked unless their cap is 0.
    """
    if g.n > max_vertices:
        raise SizeGuardError(f"enumeration guard: {g.n} vertices > {max_vertices}")
    ncells = n * (n + 1) // 2
    tracked = tuple(sorted(tracked_cells))
    width = max(3, g.edge_count.bit_length())
    incs = [0] * ncells
    for t, cell in enumerate(tracked):
        incs[cell] = 1 << (t * width)
    cap_list = None
    if caps:
        cap_list = [g.edge_count] * ncells
        for cell, cap in caps.items():
            if cap < g.edge_count and cap > 0 and cell not in tracked:
                raise UsageError("capped cell must be tracked")
            cap_list[cell] = cap

    _, back = _enumeration_order(g)
    spec = (g.n, back, n, incs, cap_list)

    counts = None
    if threads > 1 and n**g.n >= PARALLEL_THRESHOLD:
        counts = _parallel_profiles(spec, n, threads)
    if counts is None:
        counts = _dfs_profiles(*spec, ())
    return ProfileMap(tracked, width, counts)


def _parallel_profiles(spec, n, threads):
    try:
        import multiprocessing as mp

        ctx = mp.get_context("fork")
    except ValueError:
        return None
    v = spec[0]
    depth = 1
    while n**depth < 4 * threads and depth < v - 1:
        depth += 1
    prefixes = list(product(range(n), repeat=depth))
    with ctx.Pool(threads) as pool:
        parts = pool.map(
            _dfs_worker, [(spec, pre) for pre in prefixes], chunksize=max(1, len(prefixes) // (4 * threads))
        )
    return _merge_counts(parts)


def _template_engine_spec(t: SymbolicTemplate, zero_cap: int = 0):
    """Split template cells into tracked / capped sets for the engine.

    Weight-1 cells need no tracking (they contribute factor 1); weight-0
    cells are capped at ``zero_cap`` copies.
    """
    tracked = []
    caps = {}
    for idx, c in enumerate(t.cells):
        if isinstance(c, str):
            tracked.append(idx)
        elif c == 0:
            if zero_cap > 0:
                tracked.append(idx)
            caps[idx] = zero_cap
        elif c != 1:
            tracked.append(idx)
    return tracked, caps


def _power(base: Fraction, exp: int) -> Fraction:
    if exp == 0:
        return Fraction(1)
    if base == 0:
        return Fraction(0)
    return base**exp


def weighted_hom_count(
    g: Graph,
    a: SymRationalMatrix,
    threads: int = 1,
    max_vertices: int = VERTEX_GUARD,
) -> Fraction:
    """Sum over all maps V(H) -> [n] of the product of edge weights.

    This is the homogeneous degree-e(H) evaluation without the n^{-v(H)}
    normalization; dividing by n^{v(H)} gives the density.
    """
    t = SymbolicTemplate.from_matrix(a)
    tracked, caps = _template_engine_spec(t)
    pm = profile_map(g, a.n, tracked, caps, threads, max_vertices)
    total = Fraction(0)
    for profile, cnt in pm.items():
        w = Fraction(cnt)
        for cell_idx, m in zip(pm.tracked, profile):
            if m:
                w *= _power(t.cells[cell_idx], m)
        total += w
    return total


def density(
    g: Graph,
    a: SymRationalMatrix,
    threads: int = 1,
    max_vertices: int = VERTEX_GUARD,
) -> Fraction:
    return weighted_hom_count(g, a, threads, max_vertices) / Fraction(a.n) ** g.n


def norm_powers(
    g: Graph,
    a: SymRationalMatrix,
    threads: int = 1,
    max_vertices: int = VERTEX_GUARD,
) -> dict[str, Fraction]:
    """The e(H)-th powers of the two norm candidates: |t_H(U_A)| and
    t_H(U_|A|). Roots are left to display-layer bracketing."""
    return {
        "norm_pow": abs(density(g, a, threads, max_vertices)),
        "weak_norm_pow": density(g, a.entrywise_abs(), threads, max_vertices),
    }


def symbolic_profile(
    g: Graph,
    t: SymbolicTemplate,
    threads: int = 1,
    max_vertices: int = VERTEX_GUARD,
) -> SparsePoly:
    """Exact polynomial in the template symbols accumulated over all maps.

    Substituting rationals for the symbols and evaluating equals
    weighted_hom_count on the substituted matrix.
    """
    if t.n > TEMPLATE_GUARD:
        raise SizeGuardError(f"template guard: n={t.n} > {TEMPLATE_GUARD}")
    tracked, caps = _template_engine_spec(t)
    pm = profile_map(g, t.n, tracked, caps, threads, max_vertices)
    symbols = t.symbols
    axis = {s: k for k, s in enumerate(symbols)}
    items = []
    for profile, cnt in pm.items():
        coeff = Fraction(cnt)
        exp = [0] * len(symbols)
        for cell_idx, m in zip(pm.tracked, profile):
            if not m:
                continue
            c = t.cells[cell_idx]
            if isinstance(c, str):
                exp[axis[c]] += m
            else:
                coeff *= _power(c, m)
        if coeff != 0:
            items.append((tuple(exp), coeff))
    return SparsePoly.build(symbols, items)


def sidorenko_check(
    g: Graph,
    a: SymRationalMatrix,
    threads: int = 1,
    max_vertices: int = VERTEX_GUARD,
) -> bool:
    """Exact check of t_H(U_A) >= t_{K2}(U_A)^{e(H)} for bipartite H."""
    if not structural_report(g).bipartite:
        raise UsageError("sidorenko check needs a bipartite graph")
    if not a.entries_in(0, 1):
        raise UsageError("sidorenko check needs entries in [0, 1]")
    edge_density = sum(
        a.at(i, j) for i in range(a.n) for j in range(a.n)
    ) / Fraction(a.n) ** 2
    return density(g, a, threads, max_vertices) >= edge_density**g.edge_count


def hatami_box_check(
    g: Graph,
    u: SymRationalMatrix,
    w: SymRationalMatrix,
    threads: int = 1,
    max_vertices: int = VERTEX_GUARD,
) -> bool:
    """Exact check of t_H(U+W) + t_H(U-W) <= 2^{e(H)-1} (t_H(U) + t_H(W))."""
    if u.n != w.n:
        raise UsageError("dimension mismatch")
    lhs = density(g, u.add(w), threads, max_vertices) + density(
        g, u.sub(w), threads, max_vertices
    )
    rhs = 2 ** (g.edge_count - 1) * (
        density(g, u, threads, max_vertices) + density(g, w, threads, max_vertices)
    )
    return lhs <= rhs


def counting_lemma_check(
    g: Graph,
    a: SymRationalMatrix,
    b: SymRationalMatrix,
    threads: int = 1,
    max_vertices: int = VERTEX_GUARD,
) -> bool:
    """Exact check of |t_H(U_A) - t_H(U_B)| <= 4 e(H) ||A - B||_cut."""
    if a.n != b.n:
        raise UsageError("dimension mismatch")
    if not (a.entries_in(-1, 1) and b.entries_in(-1, 1)):
        raise UsageError("counting lemma check needs entries in [-1, 1]")
    gap = abs(
        density(g, a, threads, max_vertices) - density(g, b, threads, max_vertices)
    )
    return gap <= 4 * g.edge_count * cut_norm(a.sub(b))


EULERIAN_INDICATOR_GUARD = 12


def eulerian_indicator_check(g: Graph, n: int, threads: int = 1) -> bool:
    """Check that the +/- block kernel sees exactly the eulerian indicator:
    density 1 when every degree of H is even, density 0 otherwise."""
    if g.n > EULERIAN_INDICATOR_GUARD:
        raise SizeGuardError(
            f"eulerian indicator guard: {g.n} vertices > {EULERIAN_INDICATOR_GUARD}"
        )
    d = density(g, block_pm_ones(n), threads)
    expected = Fraction(1) if structural_report(g).eulerian else Fraction(0)
    return d == expected


def default_threads() -> int:
    return os.cpu_count() or 1
