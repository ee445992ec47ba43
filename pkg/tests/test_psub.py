import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from probsub import agg, padd, psub, sets
from probsub.grid import Sampled, dirac, evaluate, exponential, knot_values, make_grid, sample
from probsub.report import InputError

K1, K2, KINF = padd.k_alpha(1), padd.k_alpha(2), padd.k_inf()
INF = math.inf


@pytest.fixture(scope="module")
def r4():
    return sets.powerset(sets.Universe.of_size(4))


@pytest.fixture(scope="module")
def r3():
    return sets.powerset(sets.Universe.of_size(3))


@pytest.fixture(scope="module")
def card4(r4):
    return sets.cardinality(r4)


@pytest.fixture(scope="module")
def card3(r3):
    return sets.cardinality(r3)


def one_set_eta(value):
    r = sets.powerset(sets.Universe(("a",)))
    return sets.NumericalSubmeasure(r, {0: 0.0, 1: value}), 1


def replay(gamma, L, A, w):
    """Re-evaluate a union witness from its printed fields alone."""
    u = gamma.ring.universe
    e, f = u.parse_key(w["E"]), u.parse_key(w["F"])
    lhs = evaluate(gamma[e | f], L(w["x"], w["y"]))
    rhs = A(evaluate(gamma[e], w["x"]), evaluate(gamma[f], w["y"]))
    return lhs, rhs


# -- universal / weibull --------------------------------------------------------

def test_universal_steps():
    eta, a = one_set_eta(1.0)
    gm = psub.universal(eta)
    assert evaluate(gm[0], 1e-9) == 1.0
    assert gm(a, 1.0) == 0.0 and gm(a, 1.01) == 1.0


def test_universal_passes_min(card4):
    rep = psub.check_axioms(psub.universal(card4), K1, agg.M)
    assert rep.passed and rep.params["tol"] == 1e-9


def test_universal_rejects_bad_eta(r3):
    sq = sets.NumericalSubmeasure(r3, {m: sets.popcount(m) ** 2 for m in r3})
    with pytest.raises(InputError):
        psub.universal(sq)
    gm = psub.universal(sq, strict=False)
    assert gm.notes and "subadditive" in gm.notes[0]


def test_weibull_values():
    eta, a = one_set_eta(1.0)
    gm = psub.weibull(eta, 1.0, 1.0)
    assert gm(a, 1.0) == pytest.approx(1 - math.exp(-1), abs=1e-12)
    assert gm(a, 1.0) == pytest.approx(0.63212, abs=1e-5)
    assert gm(0, 0.01) == 1.0
    with pytest.raises(InputError):
        psub.weibull(eta, 0, 1)


@pytest.mark.parametrize("k", [0.5, 1.0, 2.0])
def test_weibull_universal(card4, k):
    assert psub.check_axioms(psub.weibull(card4, 1.5, k), K1, agg.M).passed


# -- table rows ---------------------------------------------------------------

def printed_row(family, lam, e, x):
    """Row formulas as printed, valid for 0 < x <= eta(E)."""
    if family == "frank" and lam == 1:
        return min(math.exp(x - e), 1)
    if family == "frank" and lam == INF:
        return max(min(1 + x - e, 1), 0)
    if family == "frank":
        return min(math.log(1 + (lam - 1) * math.exp(x - e), lam), 1)
    if family == "aa":
        return math.exp(-(max(e - x, 0) ** (1 / lam)))
    if family == "dombi":
        return 1 / (1 + max(e - x, 0) ** (1 / lam))
    if family == "hamacher" and lam == 0:
        return min(1 / (1 + e - x), 1)
    if family == "hamacher":
        return min(lam / (math.exp(e - x) + lam - 1), 1)
    if family == "yager":
        return max(min(1 - max(e - x, 0) ** (1 / lam), 1), 0)
    if family == "sw":
        return max(min(((1 + lam) ** (1 + x - e) - 1) / lam, 1), 0)
    raise AssertionError


ROWS = [("frank", 1), ("frank", INF), ("frank", 2), ("frank", 0.5), ("aa", 2), ("aa", 0.5),
        ("dombi", 1), ("dombi", 2), ("hamacher", 0), ("hamacher", 2), ("hamacher", 0.5),
        ("yager", 2), ("yager", 0.5), ("sw", 1), ("sw", -0.5), ("sw", 3)]


@pytest.mark.parametrize("family,lam", ROWS)
def test_table_rows_match_printed(family, lam):
    eta, a = one_set_eta(3.0)
    gm = psub.table1(family, lam, eta)
    for x in np.linspace(0.05, 3.0, 25):
        assert gm(a, x) == pytest.approx(printed_row(family, lam, 3.0, x), abs=1e-12)
    # beyond eta(E) every row is 1
    assert gm(a, 3.5) == pytest.approx(1.0, abs=1e-12)
    assert gm(a, 9.0) == pytest.approx(1.0, abs=1e-12)


def test_table_frank_example():
    eta, a = one_set_eta(1.0)
    assert psub.table1("frank", 1, eta)(a, 0.5) == pytest.approx(math.exp(-0.5))
    assert psub.table1("frank", 1, eta)(a, 0.5) == pytest.approx(0.60653, abs=1e-5)


def test_table_yager1_equals_frank_inf(card4):
    g = make_grid()
    y, f = psub.table1("yager", 1, card4), psub.table1("frank", INF, card4)
    for m in card4.ring:
        assert np.array_equal(knot_values(y[m], g), knot_values(f[m], g))


@pytest.mark.parametrize("family,lam", [("aa", 0), ("dombi", 0), ("yager", 0), ("hamacher", INF), ("sw", -1)])
def test_table_step_rows(family, lam):
    eta, a = one_set_eta(2.0)
    gm = psub.table1(family, lam, eta)
    assert gm(a, 1.99) == 0.0 and gm(a, 2.0) == 0.0 and gm(a, 2.01) == 1.0


@pytest.mark.parametrize("family,lam", [("frank", 0), ("aa", -1), ("sw", -2), ("nope", 1)])
def test_table_range(card4, family, lam):
    with pytest.raises(InputError):
        psub.table1(family, lam, card4)


def test_table_empty_set_is_identity(card4):
    g = make_grid()
    for fam, lam in ROWS:
        assert np.all(knot_values(psub.table1(fam, lam, card4)[0], g)[1:] == 1.0)


# -- generator-based constructions ----------------------------------------------

def test_copula_gen_values():
    eta, a = one_set_eta(1.0)
    gm = psub.copula_gen_submeasure(agg.generator("log"), eta)
    assert gm(a, 0.4) == pytest.approx(math.exp(-0.6))
    assert gm(a, 0.4) == pytest.approx(0.54881, abs=1e-5)
    assert gm(a, 1.0) == 1.0 and gm(a, 5.0) == 1.0


def test_copula_gen_gh_passes(card3):
    gm = psub.copula_gen_submeasure(agg.generator("gh", 2), card3)
    assert psub.check_axioms(gm, K1, agg.gumbel_hougaard(2)).passed


def test_copula_gen_nonstrict_matches_closed_form(card3):
    lam = 2.0
    gm = psub.copula_gen_submeasure(agg.generator("nonstrict", lam), card3)
    for m in card3.ring:
        e = card3[m]
        for x in np.linspace(0.1, 4, 12):
            ref = max(min((1 - e + x) / (1 + (lam - 1) * (e - x)), 1), 0) if x < e else 1.0
            assert gm(m, x) == pytest.approx(ref, abs=1e-12)
    assert psub.check_axioms(gm, K1, agg.nonstrict_copula(lam)).passed


def test_copula_gen_with_tan(card3):
    h = agg.tan_automorphism()
    gm = psub.copula_gen_submeasure(agg.generator("linear"), card3, h)
    m = 3
    for x in (0.3, 1.2, 2.5):
        ref = max(min(4 / math.pi * math.atan(1 - card3[m] + x), 1), 0)
        assert gm(m, x) == pytest.approx(ref, abs=1e-12)
    assert psub.check_axioms(gm, K1, agg.psi(h, agg.W)).passed


def test_copula_gen_rejects_nonconvex(card3):
    with pytest.raises(InputError):
        psub.copula_gen_submeasure(agg.generator("yager", 0.5), card3)


# -- mean-based examples ---------------------------------------------------------

def test_geometric_values():
    eta, a = one_set_eta(1.0)
    gm = psub.pmean_submeasure("geometric", eta)
    assert gm(a, 1.0) == 1.0
    # the formula at x = 0 is exp(-1/2); as a DDF the value at 0 is 0, so probe 0+
    assert gm(a, 1e-12) == pytest.approx(math.exp(-0.5), abs=1e-9)
    assert gm(a, 0.0) == 0.0


def test_pmean_formula():
    eta, a = one_set_eta(2.0)
    gm = psub.pmean_submeasure(2, eta)
    x = 1.7
    inner = min(max(1 + 2 * (x - 2), 0) ** 0.5, 1)
    assert gm(a, x) == pytest.approx(2 ** -0.5 * (1 + inner ** 2) ** 0.5)
    with pytest.raises(InputError):
        psub.pmean_submeasure(-1, eta)


def test_pmean_verdict_recorded(card4):
    rep = psub.check_axioms(psub.pmean_submeasure(1, card4), K1, agg.pmean(1))
    # verdict is recorded, not asserted; a failure must carry a replayable witness
    if not rep.passed:
        w = rep.witnesses_for("union")[0]
        lhs, rhs = replay(psub.pmean_submeasure(1, card4), K1, agg.pmean(1), w)
        assert rhs - lhs == pytest.approx(w["violation"], abs=1e-12)


def test_ratio_example(card4):
    gm = psub.ratio(card4)
    for L in (K1, K2, KINF):
        assert psub.check_axioms(gm, L, agg.D).passed


def test_halfstep_example(card4):
    gm = psub.halfstep(card4)
    assert gm(1, 0.5) == 0.5 and gm(1, 1.0) == 0.5 and gm(1, 1.01) == 1.0
    assert psub.check_axioms(gm, K1, agg.M).passed


def test_affine_example(card4):
    gm = psub.affine(card4)
    assert psub.check_axioms(gm, K1, agg.D).passed
    rep = psub.check_axioms(gm, K1, agg.M)
    assert not rep.passed
    w = rep.witnesses_for("union")[0]
    lhs, rhs = replay(gm, K1, agg.M, w)
    assert rhs > lhs + 1e-9


# -- exponential -------------------------------------------------------------------

def test_two_point_exponential_fails_min():
    gm = psub.two_point_exponential(2.5, 2.5, 1)
    rep = psub.check_axioms(gm, K1, agg.M, probes=[[1.0, 1.0]])
    assert not rep.passed
    w = [w for w in rep.witnesses if w["x"] == 1.0 and w["y"] == 1.0][0]
    assert w["lhs"] == pytest.approx(1 - math.exp(-2), abs=1e-12)
    assert w["rhs"] == pytest.approx(1 - math.exp(-2.5), abs=1e-12)


def test_two_point_exponential_validation():
    with pytest.raises(InputError):
        psub.two_point_exponential(1, 1, 2)
    with pytest.raises(InputError):
        psub.two_point_exponential(0, 1, 0.5)


# -- level family --------------------------------------------------------------

def test_level_family(r3, card3):
    single = psub.level_family([(1.0, card3)], r3)
    uni = psub.universal(card3)
    xs = np.linspace(0.01, 5, 200)
    # the single level uses <=, the step uses <: they differ only at eta(E) itself
    for m in r3:
        keep = xs != card3[m]
        assert np.array_equal(evaluate(single[m], xs)[keep], evaluate(uni[m], xs)[keep])
    doubled = sets.cardinality(r3, 2.0)
    two = psub.level_family([(0.5, card3), (1.0, doubled)], r3)
    m = 3  # |E| = 2: levels at 2 and 4
    assert two(m, 1.9) == 0.0
    assert two(m, 2.0) == 0.5 and two(m, 3.9) == 0.5
    assert two(m, 4.0) == 1.0 and two(m, 9.0) == 1.0
    with pytest.raises(InputError):
        psub.level_family([(0.5, doubled), (1.0, card3)], r3)
    with pytest.raises(InputError):
        psub.level_family([(1.0, card3), (0.5, doubled)], r3)


# -- combinations and extensions ----------------------------------------------------

def test_combine_qam_single_and_example():
    r = sets.powerset(sets.Universe(("a",)))
    e1 = sets.NumericalSubmeasure(r, {0: 0, 1: 1.0})
    e3 = sets.NumericalSubmeasure(r, {0: 0, 1: 3.0})
    lin = agg.generator("linear")
    g1, g3 = psub.universal(e1), psub.universal(e3)
    same = psub.combine_qam(lin, [1.0], [g1])
    g = make_grid()
    assert np.array_equal(knot_values(same[1], g), knot_values(g1[1], g))
    mix = psub.combine_qam(lin, [0.5, 0.5], [g1, g3])
    assert mix(1, 2.0) == pytest.approx(0.5)
    with pytest.raises(InputError):
        psub.combine_qam(lin, [0.5, 0.6], [g1, g3])
    with pytest.raises(InputError):
        psub.combine_qam(lin, [1.0], [g1, g3])


def test_combine_qam_zero_weight_infinite_generator():
    r = sets.powerset(sets.Universe(("a",)))
    e = sets.NumericalSubmeasure(r, {0: 0, 1: 2.0})
    log = agg.generator("log")
    mix = psub.combine_qam(log, [1.0, 0.0], [psub.table1("frank", 1, e), psub.universal(e)])
    assert mix(1, 1.0) == pytest.approx(math.exp(-1))


def test_combine_qam_sampled_inputs(card3):
    g = make_grid(10, 64)
    base = psub.table1("frank", INF, card3)
    sampled = psub.ProbSubmeasure(card3.ring, {m: sample(base[m], g) for m in card3.ring})
    mix = psub.combine_qam(agg.generator("linear"), [0.5, 0.5], [sampled, base], g)
    assert all(isinstance(mix[m], Sampled) for m in card3.ring)
    assert mix.default_tol() == 1e-7


def test_jordan_identity_on_ring(card3):
    gm = psub.universal(card3)
    j = psub.jordan_extension(gm)
    g = make_grid()
    for m in card3.ring:
        assert np.array_equal(knot_values(j[m], g), knot_values(gm[m], g))
    assert not j.flagged


def test_jordan_trivial_ring():
    u = sets.Universe.of_size(3)
    r = sets.Ring(u, (0, 7))
    gm = psub.universal(sets.NumericalSubmeasure(r, {0: 0, 7: 2.0}))
    j = psub.jordan_extension(gm)
    g = make_grid()
    for m in range(1, 7):
        assert np.array_equal(knot_values(j[m], g), knot_values(gm[7], g))


def test_jordan_missing_superset_flagged():
    u = sets.Universe.of_size(3)
    r = sets.generate_ring(u, [1, 2])
    gm = psub.universal(sets.cardinality(r))
    j = psub.jordan_extension(gm)
    assert 4 in j.flagged and evaluate(j[4], 5.0) == 0.0
    assert j.notes
    # subsets of w1|w2 take the sup over their ring supersets
    assert np.array_equal(evaluate(j[3], np.array([1.5, 2.5])), [0.0, 1.0])


# -- extraction ------------------------------------------------------------------

def test_extract_spot_values():
    r = sets.powerset(sets.Universe(("a", "b")))
    eta = sets.NumericalSubmeasure(r, {0: 0, 1: 0.4, 2: 2.0, 3: 2.0})
    out = psub.extract_numerical(psub.universal(eta), agg.generator("linear"))
    assert out[0] == 0.0
    assert out[1] == pytest.approx(0.4, abs=1e-9)
    assert out[2] == pytest.approx(1.0, abs=1e-9)


def test_extract_cap_is_reported():
    eta, a = one_set_eta(5000.0)
    out = psub.extract_numerical(psub.universal(eta), agg.generator("log"), z_max=1e3)
    assert out[a] == 1e3 and out.notes


def test_extract_oracle_frank1():
    # gamma(z) = exp(-(e - z)) with t = 1 - x: the sup solves 1 - exp(z - e) = z
    from scipy.optimize import brentq

    eta, a = one_set_eta(2.0)
    out = psub.extract_numerical(psub.table1("frank", 1, eta), agg.generator("linear"))
    ref = brentq(lambda z: 1 - math.exp(z - 2.0) - z, 0, 1)
    assert out[a] == pytest.approx(ref, abs=1e-9)


# -- pseudo-metric and neighbourhoods ------------------------------------------------

def test_rho_basics(card3):
    gm = psub.table1("aa", 1, card3)
    r = psub.rho(gm)
    assert r[(5, 5)] is gm[0]
    assert r[(1, 6)] is r[(6, 1)]
    rep = psub.check_rho(gm, K1, agg.Pi)
    assert rep.passed and rep.metrics["triples"] == 512


def test_rho_triangle_failure_detected(card3):
    rep = psub.check_rho(psub.affine(card3), K1, agg.M)
    assert not rep.verdicts["triangle"] and rep.witnesses_for("triangle")


def test_neighborhood(card4):
    gm = psub.universal(card4)
    nb = psub.neighborhood(gm, 1.5, 0.5)
    assert sorted(nb) == sorted(m for m in card4.ring if card4[m] < 1.5)
    assert 0 in psub.neighborhood(psub.ratio(card4), 0.01, 0.01)
    with pytest.raises(InputError):
        psub.neighborhood(gm, 0, 0.5)
    with pytest.raises(InputError):
        psub.neighborhood(gm, 1, 0)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.01, 5), st.floats(0.01, 5), st.floats(0.01, 1), st.floats(0.01, 1))
def test_neighborhood_monotone(e1, e2, d1, d2):
    r = sets.powerset(sets.Universe.of_size(3))
    gm = psub.table1("frank", 1, sets.cardinality(r))
    (e1, e2), (d1, d2) = sorted((e1, e2)), sorted((d1, d2))
    assert set(psub.neighborhood(gm, e1, d1)) <= set(psub.neighborhood(gm, e2, d2))


# -- postcomposition ------------------------------------------------------------

def test_postcompose(card3):
    gm = psub.halfstep(card3)
    ident = psub.postcompose(agg.identity_automorphism(), gm)
    sq = psub.postcompose(lambda v: v ** 2, gm)
    assert ident(1, 0.5) == 0.5 and sq(1, 0.5) == 0.25
    with pytest.raises(InputError):
        psub.postcompose(lambda v: 1 - v, gm)


def test_postcompose_probe_reports_both(card3):
    rep = psub.postcompose_probe(agg.power_automorphism(2), psub.table1("frank", INF, card3), K1, agg.W)
    assert set(rep.metrics) == {"original_passes", "transformed_passes"}
    assert rep.metrics["original_passes"]


# -- checker mechanics ----------------------------------------------------------

def test_missing_assignment(r3):
    small = sets.powerset(sets.Universe.of_size(2))
    gm = psub.universal(sets.cardinality(small))
    with pytest.raises(InputError):
        psub.check_axioms(gm, K1, agg.M, ring=r3)


def test_empty_set_violation():
    r = sets.powerset(sets.Universe(("a",)))
    gm = psub.ProbSubmeasure(r, {0: exponential(1.0), 1: exponential(0.5)})
    rep = psub.check_axioms(gm, K1, agg.M)
    assert not rep.verdicts["empty_identity"] and rep.witnesses_for("empty_identity")


def test_antitone_violation():
    r = sets.powerset(sets.Universe(("a", "b")))
    gm = psub.ProbSubmeasure(r, {0: dirac(0), 1: dirac(2), 2: dirac(2), 3: dirac(1)})
    rep = psub.check_axioms(gm, K1, agg.M)
    assert not rep.verdicts["antitone"]
    w = rep.witnesses_for("antitone")[0]
    assert w["rhs"] > w["lhs"]


def test_sampled_tolerance_default(card3):
    g = make_grid(10, 64)
    gm = psub.ProbSubmeasure(card3.ring, {m: sample(psub.universal(card3)[m], g) for m in card3.ring})
    rep = psub.check_axioms(gm, K1, agg.M, grid=g)
    assert rep.params["tol"] == 1e-7 and rep.params["offgrid"] == 0


def test_witnesses_replay(card4):
    gm = psub.affine(card4)
    rep = psub.check_axioms(gm, K1, agg.M)
    for w in rep.witnesses_for("union"):
        lhs, rhs = replay(gm, K1, agg.M, w)
        assert rhs - lhs == pytest.approx(w["violation"], abs=1e-12)
        assert rhs - lhs > rep.params["tol"]


def test_probe_must_be_positive(card3):
    with pytest.raises(InputError):
        psub.check_axioms(psub.universal(card3), K1, agg.M, probes=[[0, 1]])


def test_deterministic(card4):
    a = psub.check_axioms(psub.affine(card4), K1, agg.M, seed=3).to_json()
    b = psub.check_axioms(psub.affine(card4), K1, agg.M, seed=3).to_json()
    assert a == b


MEMBERS = [("universal", None), ("table1", ("frank", INF)), ("table1", ("frank", 1)), ("ratio", None),
           ("affine", None), ("halfstep", None)]
DESCRIPTORS = [(K1, agg.M), (K1, agg.Pi), (K1, agg.W), (K1, agg.D), (KINF, agg.M), (K2, agg.Pi)]


def _build(kind, arg, eta):
    if kind == "table1":
        return psub.table1(arg[0], arg[1], eta)
    return getattr(psub, kind)(eta)


@pytest.mark.parametrize("kind,arg", MEMBERS)
def test_membership_monotone_over_descriptors(card3, kind, arg):
    """Passing (L1, A1) implies passing (L2, A2) whenever L1 <= L2 and A2 <= A1."""
    gm = _build(kind, arg, card3)
    verdict = {(L.label, A.label): psub.check_axioms(gm, L, A).passed for L, A in DESCRIPTORS}
    for L1, A1 in DESCRIPTORS:
        for L2, A2 in DESCRIPTORS:
            if padd.padd_leq(L1, L2) and agg.agg_leq(A2, A1) and verdict[(L1.label, A1.label)]:
                assert verdict[(L2.label, A2.label)], (L1.label, A1.label, L2.label, A2.label)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.floats(0, 5), min_size=3, max_size=3),
       st.sampled_from([("frank", 2.0), ("yager", 2.0), ("hamacher", 1.0), ("dombi", 1.5), ("aa", 3.0)]))
def test_table_rows_pass_on_random_eta(weights, row):
    r = sets.powerset(sets.Universe.of_size(3))
    eta = sets.weighted(r, weights, transform=math.sqrt)
    gm = psub.table1(row[0], row[1], eta)
    assert psub.check_axioms(gm, K1, agg.make_family(*row), grid=make_grid(10, 64)).passed


def test_tail_note_for_slow_ddfs(card4):
    rep = psub.check_axioms(psub.ratio(card4), padd.k_alpha(1), agg.D)
    assert any(n.startswith("tail unverified") for n in rep.notes)
    rep = psub.check_axioms(psub.universal(card4), padd.k_alpha(1), agg.M)
    assert not any(n.startswith("tail unverified") for n in rep.notes)
