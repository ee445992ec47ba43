import pytest
from hypothesis import given, settings, strategies as st

from probsub import sets
from probsub.report import InputError


def test_universe_keys():
    u = sets.Universe(("b", "a", "c"))
    m = u.mask(["a", "c"])
    assert u.key(m) == "a,c"
    assert u.parse_key("c, a") == m
    assert u.parse_key("") == 0
    with pytest.raises(InputError):
        u.mask(["z"])


@pytest.mark.parametrize("labels", [(), ("a", "a"), ("a,b",), tuple(str(i) for i in range(17))])
def test_universe_rejects(labels):
    with pytest.raises(InputError):
        sets.Universe(labels)


def test_powerset_size():
    assert len(sets.powerset(sets.Universe.of_size(4))) == 16


def test_generate_ring_minimal():
    u = sets.Universe.of_size(3)
    r = sets.generate_ring(u, [u.mask(["w1", "w2"])])
    assert sorted(r.members) == [0, 3]
    r2 = sets.generate_ring(u, [1, 3])
    assert sorted(r2.members) == [0, 1, 2, 3]


def test_ring_must_be_closed():
    u = sets.Universe.of_size(3)
    with pytest.raises(InputError):
        sets.Ring(u, (0, 1, 2))
    with pytest.raises(InputError):
        sets.Ring(u, (1,))


def test_cardinality_passes():
    rep = sets.check_numerical(sets.cardinality(sets.powerset(sets.Universe.of_size(4))))
    assert rep.passed


def test_square_cardinality_fails_subadditivity():
    r = sets.powerset(sets.Universe.of_size(3))
    eta = sets.NumericalSubmeasure(r, {m: sets.popcount(m) ** 2 for m in r})
    rep = sets.check_numerical(eta)
    assert rep.verdicts["monotone"] and not rep.verdicts["subadditive"]
    w = rep.witnesses_for("subadditive")[0]
    assert w["lhs"] > w["rhs"]


def test_nonmonotone_and_nonzero_empty():
    r = sets.powerset(sets.Universe.of_size(2))
    rep = sets.check_numerical(sets.NumericalSubmeasure(r, {0: 0.5, 1: 2, 2: 1, 3: 1}))
    assert not rep.verdicts["empty"] and not rep.verdicts["monotone"]
    assert rep.witnesses_for("empty") and rep.witnesses_for("monotone")


def test_from_table_and_missing():
    r = sets.powerset(sets.Universe(("a", "b")))
    eta = sets.from_table(r, {"": 0, "a": 1, "b": 2, "a,b": 2.5})
    assert eta[r.universe.parse_key("a,b")] == 2.5
    with pytest.raises(InputError):
        sets.from_table(r, {"": 0, "a": 1})
    with pytest.raises(InputError):
        sets.from_table(r, {"": 0, "a": -1, "b": 1, "a,b": 1})


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0, 10), min_size=4, max_size=4))
def test_sqrt_weighted_is_submeasure(weights):
    r = sets.powerset(sets.Universe.of_size(4))
    eta = sets.weighted(r, weights, transform=lambda s: s ** 0.5)
    assert sets.check_numerical(eta, tol=1e-9).passed


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 15), min_size=1, max_size=3))
def test_generated_ring_is_closed(gens):
    u = sets.Universe.of_size(4)
    r = sets.generate_ring(u, gens)
    for a in r:
        for b in r:
            assert a | b in r and a & ~b in r
    assert all(g in r for g in gens)
