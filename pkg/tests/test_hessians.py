from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphnorms import (
    SparsePoly,
    SymbolicTemplate,
    SymRationalMatrix,
    UsageError,
    allones_kernel_check,
    bowtie_blowup,
    cycle_graph,
    hessian_matrix,
    path_graph,
    principal_submatrix,
    psd_certify,
    quadratic_form,
    symbolic_profile,
    two_var_hessian_at_origin,
)
from graphnorms.matrices import block_pm_ones
from oracles import fd_hessian_entry, random_sym_matrix, symbolic_hessian_entry

C4 = cycle_graph(4)


def test_trivial_hessians():
    one = SymRationalMatrix.from_rows([[Fraction(2, 3)]])
    h = hessian_matrix(path_graph(2), one)
    assert h.matrix.rows() == [[0]]
    h = hessian_matrix(C4, one)
    assert h.matrix.rows() == [[12 * Fraction(2, 3) ** 2]]


@given(st.integers(0, 200))
@settings(max_examples=15, deadline=None)
def test_hessian_matches_symbolic_double_derivative(seed):
    a = random_sym_matrix(seed, 2)
    h = hessian_matrix(C4, a)
    for r, p in enumerate(h.pairs):
        for s, q in enumerate(h.pairs):
            assert h.matrix.at(r, s) == symbolic_hessian_entry(C4, a, p, q)


def test_hessian_matches_symbolic_on_six_vertices():
    g = cycle_graph(6)
    a = random_sym_matrix(31, 2)
    h = hessian_matrix(g, a)
    for r, p in enumerate(h.pairs):
        for s, q in enumerate(h.pairs):
            assert h.matrix.at(r, s) == symbolic_hessian_entry(g, a, p, q)


def test_hessian_matches_finite_differences():
    a = random_sym_matrix(17, 2, lo=0, hi=1)
    h = hessian_matrix(C4, a)
    for r, p in enumerate(h.pairs):
        for s, q in enumerate(h.pairs):
            exact = h.matrix.at(r, s)
            fd = fd_hessian_entry(C4, a, p, q)
            assert abs(float(fd) - float(exact)) <= 1e-6 * max(1.0, abs(float(exact)))


@given(st.integers(0, 200), st.integers(1, 3), st.integers(1, 3))
@settings(max_examples=20, deadline=None)
def test_hessian_scaling_law(seed, num, den):
    a = random_sym_matrix(seed, 2)
    lam = Fraction(num, den)
    h1 = hessian_matrix(C4, a)
    h2 = hessian_matrix(C4, a.scale(lam))
    e = C4.edge_count
    assert h2.matrix == h1.matrix.scale(lam ** (e - 2))


def test_hessian_zero_cells_follow_formal_derivative():
    # entries with zeros: 0^0 = 1 keeps second derivatives alive
    a = SymRationalMatrix.from_rows([[0, 1], [1, 0]])
    h = hessian_matrix(C4, a)
    oracle = {
        (p, q): symbolic_hessian_entry(C4, a, p, q)
        for p in h.pairs
        for q in h.pairs
    }
    for r, p in enumerate(h.pairs):
        for s, q in enumerate(h.pairs):
            assert h.matrix.at(r, s) == oracle[(p, q)]


def test_pair_restriction_agrees_with_full():
    a = random_sym_matrix(3, 3)
    g = bowtie_blowup(cycle_graph(3))
    full = hessian_matrix(g, a)
    sub = hessian_matrix(g, a, pairs=[(2, 2), (0, 2)])
    assert sub.matrix.rows() == principal_submatrix(full, [(2, 2), (0, 2)]).rows()
    assert principal_submatrix(full, full.pairs).rows() == full.matrix.rows()
    with pytest.raises(UsageError):
        hessian_matrix(g, a, pairs=[(0, 0), (0, 0)])
    with pytest.raises(UsageError):
        principal_submatrix(full, [(5, 5)])


def test_mobius_boundary_principal_submatrix():
    # at the boundary witness, the Hessian restricted to the opened cells is
    # [[2q, l], [l, 2r]] with q, l, r the x^2 / xy / y^2 profile coefficients;
    # values cross-checked through the symbolic route below
    g = bowtie_blowup(cycle_graph(5))
    boundary = SymRationalMatrix.from_rows([[1, 1, 0], [1, 0, 1], [0, 1, 0]])
    h = hessian_matrix(g, boundary, pairs=[(2, 2), (0, 2)])
    assert h.matrix.rows() == [[0, 20], [20, 940]]
    t = SymbolicTemplate.from_rows([[1, 1, "y"], [1, 0, 1], ["y", 1, "x"]])
    p = symbolic_profile(g, t)
    assert p.coefficient_of(x=2) == 0
    assert p.coefficient_of(x=1, y=1) == 20
    assert p.coefficient_of(y=2) == 470
    assert two_var_hessian_at_origin(p) == [[0, 20], [20, 940]]
    assert not psd_certify(h.matrix).is_psd


def test_psd_examples():
    ident = SymRationalMatrix.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert psd_certify(ident).is_psd
    res = psd_certify(SymRationalMatrix.from_rows([[0, 1], [1, 0]]))
    assert res.verdict == "not_psd"
    assert res.witness == (1, -1)
    assert res.value == -2
    res = psd_certify(SymRationalMatrix.from_rows([[1, 2], [2, 1]]))
    assert res.verdict == "not_psd"
    assert quadratic_form(SymRationalMatrix.from_rows([[1, 2], [2, 1]]), res.witness) == res.value < 0


def test_psd_zero_diagonal_cases():
    assert psd_certify(SymRationalMatrix.from_rows([[0, 0], [0, 0]])).is_psd
    res = psd_certify(SymRationalMatrix.from_rows([[1, 1, 0], [1, 1, 0], [0, 0, 0]]))
    assert res.is_psd
    res = psd_certify(
        SymRationalMatrix.from_rows([[1, 0, 0], [0, 0, -1], [0, -1, 0]])
    )
    assert not res.is_psd
    assert res.value < 0


@given(st.integers(0, 400), st.integers(1, 5))
@settings(max_examples=60, deadline=None)
def test_gram_matrices_are_psd(seed, n):
    import random as _random

    rng = _random.Random(seed)
    rows = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]
    gram = [
        [sum(rows[k][i] * rows[k][j] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]
    assert psd_certify(SymRationalMatrix.from_rows(gram)).is_psd


@given(st.integers(0, 400), st.integers(2, 5))
@settings(max_examples=60, deadline=None)
def test_not_psd_witnesses_recheck(seed, n):
    m = random_sym_matrix(seed, n)
    res = psd_certify(m)
    if not res.is_psd:
        assert quadratic_form(m, res.witness) == res.value
        assert res.value < 0


def test_non_psd_principal_submatrix_extends_by_zero_padding():
    a = random_sym_matrix(23, 3)
    g = path_graph(4)
    full = hessian_matrix(g, a)
    res_full = psd_certify(full.matrix)
    for r in range(len(full.pairs)):
        for s in range(r + 1, len(full.pairs)):
            sub = principal_submatrix(full, [full.pairs[r], full.pairs[s]])
            res = psd_certify(sub)
            if not res.is_psd:
                padded = [Fraction(0)] * len(full.pairs)
                padded[r], padded[s] = res.witness
                assert quadratic_form(full.matrix, padded) == res.value < 0
                assert not res_full.is_psd


def test_two_var_hessian_examples():
    p = SparsePoly.build(
        ("x", "y"), [((2, 0), 3), ((1, 1), 5), ((0, 2), 7)]
    )
    assert two_var_hessian_at_origin(p) == [[6, 5], [5, 14]]
    cubic = SparsePoly.build(("x", "y"), [((3, 1), 1)])
    assert two_var_hessian_at_origin(cubic) == [[0, 0], [0, 0]]
    with pytest.raises(UsageError):
        two_var_hessian_at_origin(SparsePoly.variable("x"))


def test_two_var_hessian_mobius_top_left_zero():
    t = SymbolicTemplate.from_rows([[1, 1, "y"], [1, 0, 1], ["y", 1, "x"]])
    profile = symbolic_profile(bowtie_blowup(cycle_graph(5)), t)
    m = two_var_hessian_at_origin(profile)
    assert m[0][0] == 0
    assert m[0][1] == m[1][0] >= 1


def test_two_var_hessian_with_parameter():
    p = SparsePoly.build(
        ("eps", "x", "y"), [((2, 2, 0), 1), ((1, 1, 1), 4)]
    )  # x^2 eps^2 + 4 x y eps
    m = two_var_hessian_at_origin(p)
    assert m[0][0].terms == {(2,): 2}
    assert m[0][1].terms == {(1,): 4}
    assert m[1][1].is_zero()


@pytest.mark.parametrize("g,half", [(C4, 1), (C4, 2), (cycle_graph(6), 1)])
def test_allones_kernel(g, half):
    assert allones_kernel_check(g, half)


def test_allones_kernel_preconditions():
    with pytest.raises(UsageError):
        allones_kernel_check(cycle_graph(5), 1)  # odd edge count
    with pytest.raises(UsageError):
        allones_kernel_check(path_graph(3), 1)  # not eulerian


def test_kernel_hessians_are_psd():
    for g, half in ((C4, 1), (C4, 2), (cycle_graph(6), 1)):
        h = hessian_matrix(g, block_pm_ones(half))
        assert psd_certify(h.matrix).is_psd


def test_c4_hessian_psd_on_signed_matrices():
    for seed in range(200):
        n = 2 + seed % 2
        a = random_sym_matrix(seed, n)
        assert psd_certify(hessian_matrix(C4, a).matrix).is_psd
