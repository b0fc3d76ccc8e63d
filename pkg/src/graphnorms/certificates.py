"""Certificate pipelines refuting (weakly) norming properties.

A certificate pins an explicit step matrix, a pair selection, and a rational
direction whose quadratic form against the exact Hessian of the count
polynomial is negative; verification recomputes everything from scratch.
Structural screening certificates record a reason (non-bipartite,
non-eulerian, odd edge count) that is re-checkable from the graph alone.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .errors import SizeGuardError, UsageError
from .graphs import Graph, bowtie_blowup, cycle_graph, kpm_graph, structural_report
from .hessians import hessian_matrix, psd_certify, quadratic_form
from .homs import SymbolicTemplate, density, symbolic_profile
from .matrices import SymRationalMatrix, pair_list, sample_matrix
from .polys import SparsePoly
from .rationals import format_rational, parse_rational

MODES = ("weakly_norming", "norming")

SCREEN_REASONS = {
    "non-bipartite": "structural screen: a weakly norming graph is bipartite",
    "non-eulerian": "structural screen: a norming graph is eulerian",
    "odd edge count": "structural screen: a norming graph has an even number of edges",
}


@dataclass(frozen=True)
class Certificate:
    kind: str  # not_weakly_norming | not_norming | screening_failure
    graph: Graph
    n: int | None = None
    witness: SymRationalMatrix | None = None
    pairs: tuple[tuple[int, int], ...] | None = None
    direction: tuple[Fraction, ...] | None = None
    value: Fraction | None = None
    reason: str | None = None  # structural screening reason
    theorem: str = ""
    degree_evidence: dict | None = None
    seed: int | None = None

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "graph": self.graph.to_json(),
            "n": self.n,
            "witness": self.witness.to_json() if self.witness else None,
            "pairs": [list(p) for p in self.pairs] if self.pairs else None,
            "direction": [format_rational(x) for x in self.direction]
            if self.direction
            else None,
            "value": format_rational(self.value)
            if self.value is not None
            else self.reason,
            "theorem": self.theorem,
            "degree_evidence": self.degree_evidence,
            "tool_version": __version__,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        try:
            kind = data["kind"]
            graph = Graph.from_json(data["graph"])
        except (KeyError, TypeError) as exc:
            raise UsageError(f"malformed certificate: {exc}") from exc
        value = reason = None
        raw = data.get("value")
        if raw is not None:
            try:
                value = parse_rational(raw)
            except UsageError:
                reason = raw
        try:
            pairs = (
                tuple((int(i), int(j)) for (i, j) in data["pairs"])
                if data.get("pairs")
                else None
            )
        except (TypeError, ValueError) as exc:
            raise UsageError(f"malformed certificate pairs: {exc}") from exc
        return cls(
            kind=kind,
            graph=graph,
            n=data.get("n"),
            witness=SymRationalMatrix.from_json(data["witness"])
            if data.get("witness")
            else None,
            pairs=pairs,
            direction=tuple(parse_rational(x) for x in data["direction"])
            if data.get("direction")
            else None,
            value=value,
            reason=reason,
            theorem=data.get("theorem", ""),
            degree_evidence=data.get("degree_evidence"),
            seed=data.get("seed"),
        )


@dataclass(frozen=True)
class Refusal:
    """A pipeline declined to certify; evidence is consistent with (but not a
    proof of) the graph having the property."""

    operation: str
    reason: str
    evidence: dict

    def to_json(self) -> dict:
        return {
            "refused": True,
            "operation": self.operation,
            "reason": self.reason,
            "evidence": self.evidence,
        }


def screen_necessary(g: Graph, mode: str) -> Certificate | None:
    """Cheap necessary-condition screens; a failure refutes outright."""
    if mode not in MODES:
        raise UsageError(f"mode must be one of {MODES}")
    report = structural_report(g)
    reason = None
    if not report.bipartite:
        reason = "non-bipartite"
    elif mode == "norming" and not report.eulerian:
        reason = "non-eulerian"
    elif mode == "norming" and g.edge_count % 2 != 0:
        reason = "odd edge count"
    if reason is None:
        return None
    return Certificate(
        kind="screening_failure",
        graph=g,
        reason=reason,
        theorem=SCREEN_REASONS[reason],
    )


@dataclass(frozen=True)
class PositivizeResult:
    witness: SymRationalMatrix
    direction: tuple[Fraction, ...]
    value: Fraction
    eta: Fraction
    steps: int


ZERO_FILL_SYMBOL = "_fill"


def _symbolized(template: SymbolicTemplate) -> SymbolicTemplate:
    """Replace exact-zero constant cells by a shared fresh symbol."""
    cells = tuple(
        ZERO_FILL_SYMBOL if (not isinstance(c, str) and c == 0) else c
        for c in template.cells
    )
    return SymbolicTemplate(template.n, cells)


def _pair_symbols(template: SymbolicTemplate, pairs):
    """The two target cells must each hold a distinct single-cell symbol."""
    syms = []
    for (i, j) in pairs:
        c = template.cell(i, j)
        if not isinstance(c, str):
            raise UsageError(f"target cell ({i},{j}) holds no symbol")
        if sum(1 for cell in template.cells if cell == c) != 1:
            raise UsageError(f"symbol {c!r} occupies more than one cell")
        syms.append(c)
    if len(pairs) != 2 or syms[0] == syms[1]:
        raise UsageError("need two distinct symbol cells")
    return syms


def _pair_hessian_from_profile(profile: SparsePoly, sx: str, sy: str, point: dict):
    """Exact 2x2 second-derivative matrix of the profile polynomial."""
    hxx = profile.derivative(sx, 2).evaluate(point)
    hxy = profile.derivative(sx).derivative(sy).evaluate(point)
    hyy = profile.derivative(sy, 2).evaluate(point)
    return SymRationalMatrix.from_rows([[hxx, hxy], [hxy, hyy]])


def positivize_witness(
    g: Graph,
    template: SymbolicTemplate,
    pairs,
    max_steps: int = 24,
    threads: int = 1,
    profile: SparsePoly | None = None,
) -> PositivizeResult | None:
    """Push a boundary witness into the strictly positive orthant.

    Non-PSD-ness is an open condition, so whenever the 2x2 principal Hessian
    at the all-zeros substitution is non-PSD, filling every zero/symbol cell
    with a small eta = 2^-j keeps a negative direction. Returns None when no
    step in 1..max_steps works (consistent with the Hessian being PSD on the
    positive orthant). A template that is already an all-positive constant
    matrix is checked once and returned unchanged at step 0.
    """
    pairs = tuple((min(i, j), max(i, j)) for (i, j) in pairs)
    if not template.symbols and all(c > 0 for c in template.cells):
        mat = template.substitute({})
        sub = hessian_matrix(g, mat, pairs, threads=threads)
        res = psd_certify(sub.matrix)
        if res.is_psd:
            return None
        return PositivizeResult(mat, res.witness, res.value, Fraction(0), 0)

    sym_template = _symbolized(template)
    sx, sy = _pair_symbols(sym_template, pairs)
    symbols = sym_template.symbols
    if profile is None:
        profile = symbolic_profile(g, sym_template, threads=threads)

    for j in range(1, max_steps + 1):
        eta = Fraction(1, 2**j)
        point = {s: eta for s in symbols}
        m = _pair_hessian_from_profile(profile, sx, sy, point)
        res = psd_certify(m)
        if not res.is_psd:
            return PositivizeResult(
                witness=sym_template.substitute(point),
                direction=res.witness,
                value=res.value,
                eta=eta,
                steps=j,
            )
    return None


BOWTIE_PAIRS = ((2, 2), (0, 2))


def _bowtie_template() -> SymbolicTemplate:
    # boundary witness [[1,1,0],[1,0,1],[0,1,0]] with the probed cells opened
    return SymbolicTemplate.from_rows(
        [[1, 1, "y"], [1, 0, 1], ["y", 1, "x"]]
    )


def certify_bowtie_cycle(
    k: int,
    threads: int = 1,
    max_vertices: int = 16,
    max_steps: int = 24,
) -> Certificate | Refusal:
    """Refute weak norming for the cycle blow-up C_k^bowtie.

    At the boundary witness the 2x2 Hessian in the (2,2) and (0,2) cells is
    [[2 q, l], [l, 2 r]] with q the x^2-coefficient and l the xy-coefficient
    of the count polynomial; q = 0 together with l >= 1 forces determinant
    -l^2 < 0, and a positivization step turns that into a strictly positive
    witness. Refuses (with the computed coefficients) when the conditions
    fail, as they do for k in {3, 4}.
    """
    if k < 3:
        raise UsageError("cycle blow-up needs k >= 3")
    g = bowtie_blowup(cycle_graph(k))
    if g.n > max_vertices:
        raise SizeGuardError(f"blow-up guard: {g.n} vertices > {max_vertices}")
    template = _bowtie_template()
    sym_template = _symbolized(template)
    profile = symbolic_profile(g, sym_template, threads=threads)

    x2 = profile.coefficient_of(x=2)
    xy = profile.coefficient_of(x=1, y=1)
    evidence = {
        "x2_coeff": format_rational(x2),
        "xy_coeff": format_rational(xy),
    }
    failed = []
    if x2 != 0:
        failed.append("x2_coeff == 0")
    if xy < 1:
        failed.append("xy_coeff >= 1")
    if failed:
        return Refusal(
            operation=f"certify_bowtie_cycle({k})",
            reason="boundary Hessian conditions failed: " + ", ".join(failed),
            evidence=evidence,
        )

    pos = positivize_witness(
        g, template, BOWTIE_PAIRS, max_steps=max_steps, threads=threads, profile=profile
    )
    if pos is None:
        return Refusal(
            operation=f"certify_bowtie_cycle({k})",
            reason="positivization found no strictly positive witness",
            evidence=evidence,
        )
    evidence.update({"eta": format_rational(pos.eta), "steps": pos.steps})
    return Certificate(
        kind="not_weakly_norming",
        graph=g,
        n=3,
        witness=pos.witness,
        pairs=BOWTIE_PAIRS,
        direction=pos.direction,
        value=pos.value,
        theorem=(
            "weak-norming refutation: the count-polynomial Hessian has a "
            "negative direction at a strictly positive step matrix"
        ),
        degree_evidence=evidence,
    )


KPM_PAIRS = ((0, 0), (0, 1))


def _kpm_template() -> SymbolicTemplate:
    return SymbolicTemplate.from_rows(
        [["x", "y", "eps"], ["y", 1, 1], ["eps", 1, -1]]
    )


def certify_kpm(
    m: int,
    threads: int = 1,
    max_vertices: int = 16,
    max_eps_steps: int = 64,
) -> Certificate | Refusal:
    """Refute norming for K_{m,m} minus a perfect matching.

    Even m fails the eulerian screen outright. For odd m = 2s+1 the graph is
    2s-regular; every x^2-monomial of the count polynomial must carry
    eps-degree >= 6s-4, the xy-monomials >= 4s-3 with a nonzero coefficient
    at exactly 4s-3, and the y^2-coefficients must vanish through eps-degree
    2s-2. The 2x2 boundary Hessian determinant is then negative for a small
    explicit eps* in {1/2, 1/4, ...}.
    """
    if m < 2:
        raise UsageError("kpm needs m >= 2")
    g = kpm_graph(m)
    screen = screen_necessary(g, "norming")
    if screen is not None:
        return screen

    if g.n > max_vertices:
        raise SizeGuardError(f"kpm guard: {g.n} vertices > {max_vertices}")
    s = (m - 1) // 2
    thresholds = {"x2": 6 * s - 4, "xy": 4 * s - 3, "y2_vanish_upto": 2 * s - 2}
    template = _kpm_template()
    profile = symbolic_profile(g, template, threads=threads)

    min_x2 = profile.restrict_min_degree({"x": 2, "y": 0}, "eps")
    min_xy = profile.restrict_min_degree({"x": 1, "y": 1}, "eps")
    min_y2 = profile.restrict_min_degree({"x": 0, "y": 2}, "eps")
    xy_at_threshold = profile.coefficient_of(x=1, y=1, eps=thresholds["xy"])
    evidence = {
        "regularity": s,
        "thresholds": thresholds,
        "observed_min_eps_degree": {"x2": min_x2, "xy": min_xy, "y2": min_y2},
        "xy_coeff_at_threshold": format_rational(xy_at_threshold),
    }

    failed = []
    if min_x2 is not None and min_x2 < thresholds["x2"]:
        failed.append("x2 eps-degree")
    if xy_at_threshold == 0 or min_xy is None or min_xy < thresholds["xy"]:
        failed.append("xy coefficient")
    if min_y2 is not None and min_y2 <= thresholds["y2_vanish_upto"]:
        failed.append("y2 vanishing")
    if failed:
        return Refusal(
            operation=f"certify_kpm({m})",
            reason="boundary degree conditions failed: " + ", ".join(failed),
            evidence=evidence,
        )

    q_poly = profile.section({"x": 2, "y": 0})
    l_poly = profile.section({"x": 1, "y": 1})
    r_poly = profile.section({"x": 0, "y": 2})
    chosen = None
    for j in range(1, max_eps_steps + 1):
        eps = Fraction(1, 2**j)
        point = {"eps": eps}
        qq = q_poly.evaluate(point)
        ll = l_poly.evaluate(point)
        rr = r_poly.evaluate(point)
        if 4 * qq * rr - ll * ll < 0:
            chosen = (eps, qq, ll, rr)
            break
    if chosen is None:
        return Refusal(
            operation=f"certify_kpm({m})",
            reason="no eps with negative boundary Hessian determinant",
            evidence=evidence,
        )

    eps, qq, ll, rr = chosen
    m2 = SymRationalMatrix.from_rows([[2 * qq, ll], [ll, 2 * rr]])
    res = psd_certify(m2)
    assert not res.is_psd
    evidence["epsilon"] = format_rational(eps)
    return Certificate(
        kind="not_norming",
        graph=g,
        n=3,
        witness=template.substitute({"x": 0, "y": 0, "eps": eps}),
        pairs=KPM_PAIRS,
        direction=res.witness,
        value=res.value,
        theorem=(
            "norming refutation: the count-polynomial Hessian has a negative "
            "direction at a signed step matrix"
        ),
        degree_evidence=evidence,
    )


def random_witness_search(
    g: Graph,
    n: int,
    trials: int,
    mode: str,
    seed: int = 0,
    denominator_bound: int = 8,
    threads: int = 1,
) -> Certificate | None:
    """Sample step matrices of the mode's class until the Hessian fails PSD.

    weakly_norming mode samples nonnegative matrices: PSD-ness on the
    positive orthant extends to its closure, so a negative direction at a
    nonnegative matrix already refutes, and the refuting region typically
    hugs the boundary where some entries vanish. norming mode samples
    signed matrices. Deterministic for a fixed seed.
    """
    if mode not in MODES:
        raise UsageError(f"mode must be one of {MODES}")
    if g.n > 14:
        raise SizeGuardError(f"search guard: {g.n} vertices > 14")
    if n > 3:
        raise SizeGuardError(f"search guard: n={n} > 3")
    matrix_class = "nonnegative" if mode == "weakly_norming" else "signed"
    kind = "not_weakly_norming" if mode == "weakly_norming" else "not_norming"
    pairs = tuple(pair_list(n))
    for trial in range(trials):
        trial_seed = (seed * 0x9E3779B1 + trial) % 2**63
        a = sample_matrix(n, matrix_class, denominator_bound, trial_seed)
        hess = hessian_matrix(g, a, threads=threads)
        res = psd_certify(hess.matrix)
        if not res.is_psd:
            return Certificate(
                kind=kind,
                graph=g,
                n=n,
                witness=a,
                pairs=pairs,
                direction=res.witness,
                value=res.value,
                theorem=(
                    "randomized refutation: the count-polynomial Hessian has a "
                    f"negative direction at a {matrix_class} step matrix "
                    f"(trial {trial})"
                ),
                seed=seed,
            )
    return None


def convexity_violation(
    g: Graph,
    a: SymRationalMatrix,
    direction: SymRationalMatrix,
    step: Fraction,
    mode: str = "weakly_norming",
    threads: int = 1,
):
    """Exhibit a midpoint convexity failure of the density along a direction.

    Returns (a_plus, a_minus, densities) when the density at A strictly
    exceeds the average at A +/- step * D; None otherwise.
    """
    if mode not in MODES:
        raise UsageError(f"mode must be one of {MODES}")
    step = Fraction(step)
    lo, hi = (Fraction(0), Fraction(1)) if mode == "weakly_norming" else (
        Fraction(-1),
        Fraction(1),
    )
    a_plus = a.add(direction.scale(step))
    a_minus = a.sub(direction.scale(step))
    for mat in (a_plus, a_minus):
        if not mat.entries_in(lo, hi):
            raise UsageError("perturbed matrix leaves the admissible range")
    mid = density(g, a, threads)
    d_plus = density(g, a_plus, threads)
    d_minus = density(g, a_minus, threads)
    if 2 * mid > d_plus + d_minus:
        return a_plus, a_minus, {"mid": mid, "plus": d_plus, "minus": d_minus}
    return None


def direction_to_matrix(n: int, pairs, direction) -> SymRationalMatrix:
    """Spread a pair-indexed direction vector into a symmetric matrix."""
    values = {}
    for (i, j), x in zip(pairs, direction):
        values[(min(i, j), max(i, j))] = Fraction(x)
    return SymRationalMatrix.from_pairs(n, values)


def verify_certificate(cert: Certificate, threads: int = 1) -> bool:
    """Independent re-check: rebuild everything named by the certificate and
    reproduce its negative quadratic form (or structural reason) exactly."""
    if cert.kind == "screening_failure":
        report = structural_report(cert.graph)
        if cert.reason == "non-bipartite":
            return not report.bipartite
        if cert.reason == "non-eulerian":
            return not report.eulerian
        if cert.reason == "odd edge count":
            return cert.graph.edge_count % 2 == 1
        raise UsageError(f"unknown screening reason {cert.reason!r}")

    if cert.kind not in ("not_weakly_norming", "not_norming"):
        raise UsageError(f"unknown certificate kind {cert.kind!r}")
    if not (cert.witness and cert.pairs and cert.direction):
        raise UsageError("curvature certificate is missing fields")
    if cert.value is None or cert.value >= 0:
        return False
    if cert.witness.n != cert.n:
        return False
    if cert.kind == "not_weakly_norming" and not cert.witness.entries_in(0, 1):
        return False
    hess = hessian_matrix(cert.graph, cert.witness, cert.pairs, threads=threads)
    return quadratic_form(hess.matrix, cert.direction) == cert.value
