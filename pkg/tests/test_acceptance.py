"""End-to-end acceptance battery.

One test per headline property of the package, each ending in a single
printed PASS line with the measured extreme values. Every tolerance is a
fixed literal; every random loop is seeded. These are the checks a release
must clear.
"""

import time

import numpy as np
import pytest

from triple_lab.compop import (
    builtin_maps,
    consistency_matrix,
    criterion_sup_ratio,
    normalize_at_origin,
    parse_map,
    schwarz_check,
    theorem_verdict,
)
from triple_lab.linalg import CMatrix, solve_linear
from triple_lab.mobius import mobius_apply, mobius_map, norm_identity_residual, sphere_sup
from triple_lab.sampling import SamplingBudget, stream
from triple_lab.triples import (
    axiom_suite,
    bergman_sqrt,
    element,
    op_norm_triple,
    parse_model,
    sample_element,
    triple_norm,
    zero,
)
from triple_lab.weights import (
    associated_upper_lp,
    associated_upper_mono,
    boundary_l,
    build_associated_estimate,
    constant_weight,
    doubling_check,
    expdecay_weight,
    power_weight,
)

MODELS = ("disc", "hilbert:2", "hilbert:3", "matrix:2x2", "matrix:2x3")


@pytest.fixture(scope="module")
def assoc_power1():
    return build_associated_estimate(power_weight(1.0))


def test_c1_axiom_suite_all_models():
    t0 = time.perf_counter()
    worst = 0.0
    for name in MODELS:
        rep = axiom_suite(parse_model(name), trials=1000, seed=0, tol=1e-10)
        bad = [c.name for c in rep.checks if not c.passed]
        assert rep.passed, f"{name}: failing checks {bad}"
        worst = max(worst, max(c.worst_residual for c in rep.checks
                               if c.threshold <= 1e-10))
    dt = time.perf_counter() - t0
    assert dt <= 60.0, f"axiom suite took {dt:.1f}s"
    print(f"PASS criterion 1: axiom suite on {len(MODELS)} models x 1000 trials, "
          f"worst tight-residual {worst:.2e}, {dt:.1f}s")


def test_c2_bergman_inverse_norm():
    worst_exact = 0.0
    for name in ("disc", "hilbert:2", "hilbert:3"):
        m = parse_model(name)
        for i in range(100):
            rng = stream(0, 0xC2, i)
            x = sample_element(m, rng, norm=float(rng.uniform(0.05, 0.9)))
            nx = triple_norm(x)
            target = 1.0 / (1.0 - nx * nx)
            binv = CMatrix.from_array(solve_linear(
                bergman_sqrt(x), np.eye(m.coord_dim, dtype=np.complex128)))
            est = op_norm_triple(binv, m)
            assert est.certified, name
            resid = abs(est.estimate - target)
            assert resid <= 1e-10, f"{name} trial {i}: residual {resid:.2e}"
            worst_exact = max(worst_exact, resid)
    m = parse_model("matrix:2x2")
    lo, hi = np.inf, 0.0
    for i in range(20):
        rng = stream(0, 0xC2, 999, i)
        a = sample_element(m, rng, norm=float(rng.uniform(0.1, 0.85)))
        na = triple_norm(a)
        target = 1.0 / (1.0 - na * na)
        binv = CMatrix.from_array(solve_linear(
            bergman_sqrt(a), np.eye(4, dtype=np.complex128)))
        est = op_norm_triple(binv, m, SamplingBudget(samples=10_000, seed=i))
        ratio = est.estimate / target
        assert 0.95 <= ratio <= 1.001, f"center {i}: ratio {ratio:.6f}"
        lo, hi = min(lo, ratio), max(hi, ratio)
    print(f"PASS criterion 2: inverse Bergman-sqrt norm, exact residual "
          f"{worst_exact:.2e} (300 x), sampled ratio in [{lo:.6f}, {hi:.6f}] "
          f"(20 centers, 1e4 samples)")


def test_c3_mobius_group_laws():
    worst_origin = worst_round = worst_routes = 0.0
    for name in MODELS:
        m = parse_model(name)
        for i in range(1000):
            rng = stream(0, 0xC3, i)
            a = sample_element(m, rng, norm=float(rng.uniform(0.02, 0.88)))
            x = sample_element(m, rng, norm=float(rng.uniform(0.02, 0.88)))
            g = mobius_map(a)
            worst_origin = max(worst_origin,
                               triple_norm(mobius_apply(g, zero(m)) - a))
            y = mobius_apply(g, x)
            back = mobius_apply(mobius_map(-a), y)
            worst_round = max(worst_round, triple_norm(back - x))
            y2 = mobius_apply(g, x, route="quasi-inverse")
            worst_routes = max(worst_routes, triple_norm(y - y2))
        assert worst_origin <= 1e-9, name
        assert worst_round <= 1e-9, name
        assert worst_routes <= 1e-10, name
    print(f"PASS criterion 3: group laws over 1000 pairs x {len(MODELS)} models, "
          f"g_a(0)=a {worst_origin:.2e}, inverse {worst_round:.2e}, "
          f"routes {worst_routes:.2e}")


def test_c4_sphere_sup_sweep():
    radii = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
    norms = (0.2, 0.4, 2.0 / 5.0, 0.6, 0.8)
    worst_witness = worst_excess = -np.inf
    for name in MODELS:
        m = parse_model(name)
        for j, cn in enumerate(norms):
            rng = stream(0, 0xC4, j)
            a = sample_element(m, rng, norm=cn)
            for r in radii:
                rep = sphere_sup(a, r, SamplingBudget(samples=10_000, seed=7))
                dw = abs(rep.witness_value - rep.formula_value)
                assert dw <= 1e-9, f"{name} |a|={cn} r={r}: witness off {dw:.2e}"
                assert rep.max_excess <= 1e-9, \
                    f"{name} |a|={cn} r={r}: excess {rep.max_excess:.2e}"
                worst_witness = max(worst_witness, dw)
                worst_excess = max(worst_excess, rep.max_excess)
    print(f"PASS criterion 4: sphere sup sweep ({len(MODELS)} models x "
          f"{len(norms)} centers x {len(radii)} radii, 1e4 samples), witness "
          f"matches formula to {worst_witness:.2e}, sample excess <= {worst_excess:.2e}")


def test_c5_norm_identity_and_printed_variant():
    worst = 0.0
    for name in ("disc", "hilbert:2"):
        m = parse_model(name)
        for i in range(500):
            rng = stream(0, 0xC5, i)
            a = sample_element(m, rng, norm=float(rng.uniform(0.05, 0.8)))
            x = sample_element(m, rng, norm=float(rng.uniform(0.05, 0.8)))
            rep = norm_identity_residual(a, x)
            assert rep.certified, name
            assert rep.residual <= 1e-9, f"{name} pair {i}: {rep.residual:.2e}"
            worst = max(worst, rep.residual)
    disc = parse_model("disc")
    a, x = element(disc, [0.5]), element(disc, [0.25])
    good = norm_identity_residual(a, x)
    printed = norm_identity_residual(a, x, as_printed=True)
    assert good.residual <= 1e-9
    assert abs(good.target - 1.8) <= 1e-12
    assert printed.residual > 0.5, f"printed-variant gap only {printed.residual:.3f}"
    print(f"PASS criterion 5: proof identity residual {worst:.2e} over 2x500 "
          f"pairs; printed variant misses by {printed.residual:.3f} "
          f"(estimate {printed.estimate:.6f} vs {printed.target:.1f})")


def test_c6_lp_envelope_accuracy():
    worst_rel = 0.0
    for alpha in (0.5, 1.0, 2.0):
        w = power_weight(alpha)
        for r in (0.3, 0.5, 0.7, 0.9):
            v = (1 - r * r) ** alpha
            lp = associated_upper_lp(w, r, degree=96).value
            mono_matched = associated_upper_mono(w, r, n_max=96)
            mono_deep = associated_upper_mono(w, r, n_max=512)
            rel = abs(lp - v) / v
            assert rel <= 0.05, f"alpha={alpha} r={r}: lp off by {rel:.3%}"
            assert lp <= mono_matched * (1 + 1e-9) + 1e-12, (alpha, r)
            assert lp <= mono_deep * (1 + 1e-9) + 1e-12, (alpha, r)
            assert lp >= v - 1e-12 and mono_deep >= v - 1e-12, (alpha, r)
            worst_rel = max(worst_rel, rel)
        # whole default grid at matched degree caps
        est = build_associated_estimate(w, mono_nmax=96, lp_degree=96)
        assert np.all(est.upper_lp <= est.upper_mono * (1 + 1e-9) + 1e-12), alpha
        assert np.all(est.chosen >= est.lower * (1 - 1e-9)), alpha
    print(f"PASS criterion 6: LP envelope within {worst_rel:.2%} of (1-r^2)^a "
          f"on the 3x4 sweep; LP <= monomial envelope and both >= v everywhere tested")


def test_c7_doubling_verdicts():
    worst = 0.0
    for alpha in (0.5, 1.0, 2.0):
        rep = doubling_check(boundary_l(power_weight(alpha)))
        target = 2.0 ** alpha
        assert rep.verdict == "bounded", alpha
        rel = abs(rep.M_estimate - target) / target
        assert rel <= 0.05, f"alpha={alpha}: M={rep.M_estimate:.6f}"
        worst = max(worst, rel)
    for beta in (0.5, 1.0):
        rep = doubling_check(boundary_l(expdecay_weight(beta)))
        assert rep.verdict == "diverging", beta
    rep = doubling_check(boundary_l(constant_weight(1.0)))
    assert rep.verdict == "bounded" and abs(rep.M_estimate - 1.0) <= 1e-12
    print(f"PASS criterion 7: doubling M within {worst:.2%} of 2^a for powers, "
          f"expdecay diverging, constant M=1")


def test_c8_composition_operator_battery(assoc_power1):
    t0 = time.perf_counter()
    disc = parse_model("disc")
    w1 = power_weight(1.0)
    worst_rel = 0.0
    for c in (0.2, 0.4, 0.6):
        rep = criterion_sup_ratio(parse_map(f"mobius:{c}", disc), w1, w1,
                                  assoc_z=assoc_power1,
                                  budget=SamplingBudget(samples=2000, seed=0))
        limit = (1 + c) / (1 - c)
        rel = abs(rep.trend[-1] - limit) / limit
        assert rel <= 0.02, f"|a|={c}: shell limit {rep.trend[-1]:.4f} vs {limit:.4f}"
        assert rep.verdict == "continuous", c
        worst_rel = max(worst_rel, rel)
    for alpha in (0.5, 1.0, 2.0):
        w = power_weight(alpha)
        assert theorem_verdict(w, w).verdict == "all continuous", alpha
    for beta in (0.5, 1.0):
        w = expdecay_weight(beta)
        assert theorem_verdict(w, w).verdict == "not all continuous", beta
    rows = consistency_matrix(budget=SamplingBudget(samples=2000, seed=0))
    contradictions = [c for row in rows for c in row.contradictions]
    assert not contradictions, contradictions
    dt = time.perf_counter() - t0
    assert dt <= 300.0, f"battery took {dt:.1f}s"
    n_pairs = sum(len(row.map_reports) for row in rows)
    print(f"PASS criterion 8: shell limits within {worst_rel:.2%}, theorem "
          f"verdicts as forced, {n_pairs} map/weight pairs with no "
          f"contradiction, {dt:.1f}s")


def test_c9_schwarz_all_builtin_maps():
    worst = -np.inf
    count = 0
    for name in MODELS:
        m = parse_model(name)
        for phi in builtin_maps(m):
            psi, _ = normalize_at_origin(phi)
            rep = schwarz_check(psi, samples=10_000, seed=0, tol=1e-10)
            assert rep.passed, f"{name} {phi.label}: excess {rep.max_excess:.2e}"
            worst = max(worst, rep.max_excess)
            count += 1
    print(f"PASS criterion 9: Schwarz bound on {count} origin-fixed maps "
          f"x 1e4 samples, max excess {worst:.2e}")
