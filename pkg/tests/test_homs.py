import random as _random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphnorms import (
    Graph,
    SizeGuardError,
    SymbolicTemplate,
    SymRationalMatrix,
    UsageError,
    bowtie_blowup,
    counting_lemma_check,
    cycle_graph,
    density,
    eulerian_indicator_check,
    hatami_box_check,
    norm_powers,
    path_graph,
    sidorenko_check,
    symbolic_profile,
    weighted_hom_count,
)
from graphnorms.matrices import block_pm_ones
from oracles import (
    brute_hom_count,
    eulerian,
    random_graph,
    random_sym_matrix,
    trace_power,
)

K2 = path_graph(2)
PM1 = SymRationalMatrix.from_rows([[1, -1], [-1, 1]])
OFFDIAG = SymRationalMatrix.from_rows([[0, 1], [1, 0]])


def test_count_examples():
    assert weighted_hom_count(K2, SymRationalMatrix.from_rows([[1]])) == 1
    # two-vertex host without loops: C_4 homs = tr(A^4)
    assert trace_power(OFFDIAG.rows(), 4) == 2
    assert weighted_hom_count(cycle_graph(4), OFFDIAG) == 2
    assert brute_hom_count(cycle_graph(3), PM1.rows()) == 8
    assert weighted_hom_count(cycle_graph(3), PM1) == 8


def test_density_examples():
    assert density(cycle_graph(3), PM1) == 1
    assert density(path_graph(3), PM1) == 0
    ones = SymRationalMatrix.from_rows([[1, 1, 1]] * 3)
    assert density(K2, ones) == 1


def test_size_guard():
    big = Graph.from_edges(17, [(i, i + 1) for i in range(16)])
    with pytest.raises(SizeGuardError):
        weighted_hom_count(big, PM1)
    # explicit override lifts the guard
    assert weighted_hom_count(big, PM1, max_vertices=17) == 0


def test_norm_powers():
    p = norm_powers(cycle_graph(4), PM1)
    assert p["norm_pow"] == 1 and p["weak_norm_pow"] == 1
    p = norm_powers(K2, PM1)
    assert p["norm_pow"] == 0 and p["weak_norm_pow"] == 1


@given(st.integers(0, 300))
@settings(max_examples=30, deadline=None)
def test_norm_powers_agree_on_nonnegative(seed):
    a = random_sym_matrix(seed, 3, lo=0, hi=1)
    p = norm_powers(cycle_graph(4), a)
    assert p["norm_pow"] == p["weak_norm_pow"]


def test_symbolic_profile_single_cell():
    t = SymbolicTemplate.from_rows([["x"]])
    p = symbolic_profile(K2, t)
    assert p.symbols == ("x",)
    assert p.terms == {(1,): 1}


def test_symbolic_profile_boundary_coefficients():
    # the probed 3x3 template with an opened middle cell
    t = SymbolicTemplate.from_rows([[1, 1, "y"], [1, "z", 1], ["y", 1, "x"]])
    p = symbolic_profile(bowtie_blowup(cycle_graph(5)), t)
    assert p.coefficient_of(x=2) == 0
    assert p.coefficient_of(x=1, y=1) >= 1


@given(st.integers(0, 300), st.integers(2, 5))
@settings(max_examples=25, deadline=None)
def test_profile_evaluation_matches_count(seed, n_vertices):
    g = random_graph(seed, n_vertices)
    t = SymbolicTemplate.from_rows(
        [["a", 1, "b"], [1, 0, "a"], ["b", "a", Fraction(1, 2)]]
    )
    rng = _random.Random(seed)
    point = {
        "a": Fraction(rng.randint(-3, 3), rng.randint(1, 4)),
        "b": Fraction(rng.randint(-3, 3), rng.randint(1, 4)),
    }
    profile = symbolic_profile(g, t)
    assert profile.evaluate(point) == weighted_hom_count(g, t.substitute(point))


@given(st.integers(0, 300), st.integers(-3, 3), st.integers(1, 4))
@settings(max_examples=30, deadline=None)
def test_homogeneity(seed, num, den):
    g = cycle_graph(4)
    a = random_sym_matrix(seed, 2)
    lam = Fraction(num, den)
    assert weighted_hom_count(g, a.scale(lam)) == lam**g.edge_count * weighted_hom_count(g, a)


@given(st.integers(0, 300), st.integers(2, 6), st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_relabel_invariance(seed, n_vertices, perm_seed):
    g = random_graph(seed, n_vertices)
    a = random_sym_matrix(seed + 1, 3)
    perm = list(range(n_vertices))
    _random.Random(perm_seed).shuffle(perm)
    assert weighted_hom_count(g.relabel(perm), a) == weighted_hom_count(g, a)
    mperm = [1, 2, 0]
    assert weighted_hom_count(g, a.permuted(mperm)) == weighted_hom_count(g, a)


@given(st.integers(0, 300), st.integers(2, 4), st.integers(2, 4))
@settings(max_examples=20, deadline=None)
def test_disjoint_union_multiplies(seed, n1, n2):
    g1 = random_graph(seed, n1)
    g2 = random_graph(seed + 1, n2)
    union = Graph.from_edges(
        n1 + n2, list(g1.edges) + [(u + n1, v + n1) for (u, v) in g2.edges]
    )
    a = random_sym_matrix(seed + 2, 2)
    assert density(union, a) == density(g1, a) * density(g2, a)


@given(st.integers(2, 4), st.integers(1, 3))
@settings(max_examples=15, deadline=None)
def test_all_ones_counts_everything(n_vertices, n):
    g = random_graph(n_vertices * 13, n_vertices)
    ones = SymRationalMatrix.from_rows([[1] * n for _ in range(n)])
    assert weighted_hom_count(g, ones) == Fraction(n) ** g.n


def test_parallel_matches_serial():
    # the 12-vertex instance is above the pool-engagement threshold, so the
    # threads=2 runs genuinely take the multiprocessing path
    g = bowtie_blowup(cycle_graph(6))
    a = random_sym_matrix(42, 3)
    assert weighted_hom_count(g, a, threads=1) == weighted_hom_count(g, a, threads=2)
    t = SymbolicTemplate.from_rows([[1, 1, "y"], [1, 0, 1], ["y", 1, "x"]])
    assert symbolic_profile(g, t, threads=1) == symbolic_profile(g, t, threads=2)


def test_sidorenko_examples():
    ones = SymRationalMatrix.from_rows([[1, 1], [1, 1]])
    assert sidorenko_check(cycle_graph(4), ones)
    ident = SymRationalMatrix.from_rows([[1, 0], [0, 1]])
    # direct enumeration: density 1/8 versus edge density 1/2 to the 4th
    assert brute_hom_count(cycle_graph(4), ident.rows()) == 2
    assert density(cycle_graph(4), ident) == Fraction(1, 8) >= Fraction(1, 16)
    assert sidorenko_check(cycle_graph(4), ident)
    assert sidorenko_check(K2, random_sym_matrix(3, 2, lo=0, hi=1))
    with pytest.raises(UsageError):
        sidorenko_check(cycle_graph(5), ones.scale(1))
    with pytest.raises(UsageError):
        sidorenko_check(cycle_graph(4), PM1)


@given(st.integers(0, 400))
@settings(max_examples=40, deadline=None)
def test_sidorenko_random_bipartite(seed):
    a = random_sym_matrix(seed, 3, lo=0, hi=1)
    assert sidorenko_check(cycle_graph(4), a)


def test_hatami_examples():
    g = cycle_graph(4)
    u = random_sym_matrix(9, 2)
    e = g.edge_count
    lhs = density(g, u.add(u)) + density(g, u.sub(u))
    assert lhs == 2**e * density(g, u)
    assert hatami_box_check(g, u, u)
    zero = SymRationalMatrix.from_rows([[0, 0], [0, 0]])
    assert hatami_box_check(g, u, zero)
    with pytest.raises(UsageError):
        hatami_box_check(g, u, random_sym_matrix(1, 3))


def test_counting_lemma_examples():
    g = cycle_graph(4)
    a = random_sym_matrix(5, 3)
    assert counting_lemma_check(g, a, a)
    b = random_sym_matrix(6, 3)
    assert counting_lemma_check(K2, a, b)
    with pytest.raises(UsageError):
        counting_lemma_check(g, a.scale(3), b)


@given(st.integers(0, 400))
@settings(max_examples=40, deadline=None)
def test_inequalities_on_random_pairs(seed):
    g = cycle_graph(4)
    a = random_sym_matrix(seed, 3)
    b = random_sym_matrix(seed + 10**6, 3)
    assert counting_lemma_check(g, a, b)
    assert hatami_box_check(g, a, b)


def test_eulerian_indicator_examples():
    assert eulerian_indicator_check(cycle_graph(3), 1)
    assert eulerian_indicator_check(path_graph(3), 1)
    assert eulerian_indicator_check(cycle_graph(4), 2)
    assert density(cycle_graph(4), block_pm_ones(2)) == 1


@given(st.integers(0, 500), st.integers(2, 5), st.integers(1, 2))
@settings(max_examples=40, deadline=None)
def test_eulerian_indicator_random(seed, n_vertices, half):
    g = random_graph(seed, n_vertices)
    d = density(g, block_pm_ones(half))
    assert d == (1 if eulerian(g) else 0)
    assert eulerian_indicator_check(g, half)
