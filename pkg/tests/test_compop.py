import numpy as np
import pytest

from triple_lab.compop import (
    builtin_maps,
    compose_maps,
    criterion_sup_ratio,
    criterion_tail,
    identity_map,
    linear_map,
    map_apply,
    map_apply_batch,
    mobius_holo,
    normalize_at_origin,
    parse_map,
    power_map,
    schwarz_check,
    spot_check_mobius_family,
    theorem_verdict,
)
from triple_lab.errors import InvalidMapError, UsageError
from triple_lab.linalg import CMatrix
from triple_lab.sampling import SamplingBudget
from triple_lab.triples import element, parse_model, triple_norm, zero
from triple_lab.weights import (
    build_associated_estimate,
    constant_weight,
    expdecay_weight,
    power_weight,
    table_weight,
)

DISC = parse_model("disc")


@pytest.fixture(scope="module")
def assoc_power1():
    return build_associated_estimate(power_weight(1.0))


@pytest.fixture(scope="module")
def assoc_exp05():
    return build_associated_estimate(expdecay_weight(0.5))


def test_parse_map_forms():
    assert parse_map("identity", DISC).kind == "identity"
    assert parse_map("pow:3", DISC).exponent == 3
    assert parse_map("mobius:0.4", DISC).kind == "mobius"
    comp = parse_map("compose:[pow:2; mobius:0.4]", DISC)
    assert comp.kind == "compose" and len(comp.parts) == 2
    for bad in ("pow:x", "mobius:1.0", "compose:[]", "compose:pow:2", "wat"):
        with pytest.raises(UsageError):
            parse_map(bad, DISC)


def test_map_apply_oracles():
    out = map_apply(parse_map("mobius:0.5", DISC), element(DISC, [0.25]))
    assert abs(out.coords[0] - 2.0 / 3.0) <= 1e-14
    out = map_apply(parse_map("pow:2", DISC), element(DISC, [0.3 + 0.4j]))
    assert abs(out.coords[0] - (0.3 + 0.4j) ** 2) <= 1e-15
    comp = parse_map("compose:[pow:2; mobius:0.4]", DISC)
    x = element(DISC, [0.5j])
    step = map_apply(parse_map("pow:2", DISC), x)
    manual = map_apply(parse_map("mobius:0.4", DISC), step)
    assert abs(map_apply(comp, x).coords[0] - manual.coords[0]) <= 1e-14


def test_power_map_stays_in_ball_on_matrix_model():
    # coordinatewise powers contract every model norm (Schur products)
    m = parse_model("matrix:2x3")
    phi = power_map(m, 3)
    from triple_lab.sampling import stream
    from triple_lab.triples import sample_coords, triple_norm_batch

    xs = sample_coords(m, 500, stream(31, 0), norms=0.97)
    out = triple_norm_batch(m, map_apply_batch(phi, xs))
    assert np.max(out) < 0.97 ** 3 + 1e-9


def test_linear_map_norm_gate():
    ok = linear_map(CMatrix.from_array(np.array([[0.5]], dtype=complex)), DISC)
    assert ok.kind == "linear"
    with pytest.raises(InvalidMapError):
        linear_map(CMatrix.from_array(np.array([[1.2]], dtype=complex)), DISC)
    with pytest.raises(UsageError):
        linear_map(CMatrix.from_array(np.eye(2, dtype=complex)), DISC)


def test_compose_model_mismatch():
    with pytest.raises(UsageError):
        compose_maps([identity_map(DISC), identity_map(parse_model("hilbert:2"))])


def test_normalize_at_origin():
    phi = parse_map("compose:[pow:2; mobius:0.4]", DISC)
    psi, a = normalize_at_origin(phi)
    assert abs(a.coords[0] - 0.4) <= 1e-14
    assert triple_norm(map_apply(psi, zero(DISC))) <= 1e-12
    # already centered maps come back unchanged
    same, b = normalize_at_origin(identity_map(DISC))
    assert same.kind == "identity" and triple_norm(b) == 0.0


def test_schwarz_origin_fixing_maps():
    for name in ("disc", "matrix:2x2"):
        m = parse_model(name)
        for phi in builtin_maps(m):
            psi, _ = normalize_at_origin(phi)
            rep = schwarz_check(psi, samples=1500, seed=4)
            assert rep.passed, f"{name} {phi.label}: excess {rep.max_excess}"


def test_schwarz_flags_uncentered():
    rep = schwarz_check(mobius_holo(element(DISC, [0.3])), samples=200, seed=1)
    assert not rep.precondition_ok and not rep.passed


def test_criterion_shell_trend_hits_mobius_limit(assoc_power1):
    w = power_weight(1.0)
    assoc = assoc_power1
    for c in (0.2, 0.6):
        rep = criterion_sup_ratio(parse_map(f"mobius:{c}", DISC), w, w,
                                  assoc_z=assoc,
                                  budget=SamplingBudget(samples=600, seed=2))
        limit = (1 + c) / (1 - c)
        assert rep.verdict == "continuous", c
        assert rep.witness_used
        assert abs(rep.trend[-1] - limit) <= 0.02 * limit, c


def test_criterion_expdecay_rejects_mobius(assoc_exp05):
    w = expdecay_weight(0.5)
    assoc = assoc_exp05
    rep = criterion_sup_ratio(parse_map("mobius:0.4", DISC), w, w, assoc_z=assoc,
                              budget=SamplingBudget(samples=400, seed=2))
    assert rep.verdict == "not-continuous"
    rep = criterion_sup_ratio(parse_map("identity", DISC), w, w, assoc_z=assoc,
                              budget=SamplingBudget(samples=400, seed=2))
    assert rep.verdict == "continuous"


def test_criterion_decaying_ratio_is_bounded(assoc_power1):
    # a strict linear contraction sends shells well inside; its ratio decays
    w = power_weight(1.0)
    assoc = assoc_power1
    half = linear_map(CMatrix.from_array(np.array([[0.5]], dtype=complex)), DISC)
    rep = criterion_sup_ratio(half, w, w, assoc_z=assoc,
                              budget=SamplingBudget(samples=400, seed=3))
    assert rep.verdict == "continuous"
    assert rep.sup_estimate <= 1.0


def test_criterion_tail_vacuous_and_active(assoc_power1):
    w = power_weight(1.0)
    assoc = assoc_power1
    half = linear_map(CMatrix.from_array(np.array([[0.5]], dtype=complex)), DISC)
    rep = criterion_tail(half, w, w, r0=0.9, assoc_z=assoc,
                         budget=SamplingBudget(samples=300, seed=5))
    assert rep.verdict == "continuous" and "vacuous" in rep.notes
    rep = criterion_tail(parse_map("mobius:0.6", DISC), w, w, r0=0.9,
                         assoc_z=assoc, budget=SamplingBudget(samples=600, seed=5))
    assert rep.verdict == "continuous"
    assert np.sum(~np.isnan(rep.primary_log_trend)) >= 6


def test_criterion_rejects_degenerate_weight():
    bad = table_weight(((0.0, 1.0), (0.5, 0.0), (0.99, 0.0)), validate=False)
    with pytest.raises(UsageError):
        criterion_sup_ratio(identity_map(DISC), bad, bad,
                            budget=SamplingBudget(samples=50, seed=0))


def test_theorem_verdicts():
    assert theorem_verdict(power_weight(1.0), power_weight(1.0)).verdict == "all continuous"
    assert theorem_verdict(constant_weight(1.0), constant_weight(1.0)).verdict == "all continuous"
    assert theorem_verdict(expdecay_weight(1.0), expdecay_weight(1.0)).verdict == "not all continuous"
    rep = theorem_verdict(power_weight(1.0), power_weight(2.0))
    assert rep.verdict == "inapplicable" and not rep.applicable
    # cross-family with healthy domination stays decidable
    rep = theorem_verdict(power_weight(2.0), power_weight(1.0))
    assert rep.applicable and rep.verdict == "all continuous"


def test_spot_check_family_follows_weight():
    reports = spot_check_mobius_family(power_weight(1.0),
                                       budget=SamplingBudget(samples=400, seed=7))
    assert all(rep.verdict == "continuous" for _, rep in reports)
    reports = spot_check_mobius_family(expdecay_weight(1.0),
                                       budget=SamplingBudget(samples=400, seed=7))
    assert all(rep.verdict == "not-continuous" for _, rep in reports)


def test_map_output_validated():
    # a hand-built HoloMap that escapes the ball must be caught at apply time
    from triple_lab.compop import HoloMap

    bad = HoloMap("linear", DISC, DISC, "bad",
                  matrix=CMatrix.from_array(np.array([[2.0]], dtype=complex)))
    with pytest.raises(InvalidMapError):
        map_apply(bad, element(DISC, [0.9]))
