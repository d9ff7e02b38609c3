import pytest

from taumackey import criteria, groups, morphisms
from taumackey.errors import CrossCheckFailed

from battery import available_taus, battery_names, get_group


def verdict(name, tau_name="inverse"):
    g = get_group(name)
    taus = dict(available_taus(g))
    return criteria.simply_reducible_verdict(g, taus[tau_name])


@pytest.mark.parametrize("name", ["S3", "S4", "Q8"])
def test_known_simply_reducible(name):
    v = verdict(name)
    assert v.agree and v.simply_reducible
    assert v.mackey_cosets is True
    assert v.sums[0] == v.sums[1]


def test_z3_fails_self_conjugacy_only():
    v = verdict("Z3")
    assert v.definition_mf and not v.definition_selfconj
    assert not v.simply_reducible
    assert v.witnesses["self_conjugate"]["row"] >= 1


def test_icosahedral_style_negative():
    v = verdict("A5xZ2")
    assert not v.simply_reducible
    assert v.witnesses["tensor"]["multiplicity"] >= 2
    assert v.sums[0] < v.sums[1]


def test_a5_strict_inequality():
    a5 = groups.alternating(5)
    ok, sums = criteria.check_mackey_wigner(a5, morphisms.tau_inverse(a5))
    assert not ok and sums[0] < sums[1]


@pytest.mark.parametrize("n", range(1, 6))
def test_clifford_battery_verdicts(n):
    g = groups.clifford(n)
    v = criteria.simply_reducible_verdict(g, morphisms.tau_clifford(g))
    assert v.agree and v.simply_reducible


def test_clifford3_needs_the_twisted_map():
    g = groups.clifford(3)
    v = criteria.simply_reducible_verdict(g, morphisms.tau_inverse(g))
    assert v.agree and not v.simply_reducible


def test_mackey_cosets_examples():
    q8 = get_group("Q8")
    assert criteria.check_mackey_cosets(q8, morphisms.tau_inverse(q8))
    z3 = get_group("Z3")
    assert not criteria.check_mackey_cosets(z3, morphisms.tau_inverse(z3))


def test_budget_skip_leaves_partial_verdict():
    s4 = get_group("S4")
    v = criteria.simply_reducible_verdict(
        s4, morphisms.tau_inverse(s4), pair_budget=10
    )
    assert v.mackey_cosets is None
    assert v.partially_verified
    assert v.agree and v.simply_reducible  # the two remaining routes agree


def test_disagreement_is_loud():
    v = criteria.SRVerdict(True, True, False, True, (1, 1))
    assert not v.agree
    with pytest.raises(CrossCheckFailed):
        _ = v.simply_reducible


@pytest.mark.parametrize("name", battery_names())
def test_three_way_agreement_battery(name):
    g = get_group(name)
    for _, tau in available_taus(g):
        assert criteria.simply_reducible_verdict(g, tau).agree


def test_square_sum_check_examples():
    q8 = get_group("Q8")
    r = criteria.theorem_square_sum_check(q8, morphisms.tau_inverse(q8))
    assert r.all_equal and r.sum_equality
    z3 = get_group("Z3")
    r = criteria.theorem_square_sum_check(z3, morphisms.tau_inverse(z3))
    assert r.all_equal and not r.sum_equality
    z4 = get_group("Z4")
    r = criteria.theorem_square_sum_check(z4, morphisms.tau_identity(z4))
    assert r.all_equal and r.sum_equality


@pytest.mark.parametrize("name", battery_names())
def test_square_sum_check_battery(name):
    g = get_group(name)
    for _, tau in available_taus(g):
        assert criteria.theorem_square_sum_check(g, tau).all_equal


def test_abelian_characterization_examples():
    z5 = get_group("Z5")
    r = criteria.abelian_characterization(z5, morphisms.tau_identity(z5))
    assert r.equality_at_3 and r.is_abelian_and_tau_identity
    r = criteria.abelian_characterization(z5, morphisms.tau_inverse(z5))
    assert not r.equality_at_3 and not r.is_abelian_and_tau_identity
    s3 = get_group("S3")
    for _, tau in available_taus(s3):
        r = criteria.abelian_characterization(s3, tau)
        assert not r.equality_at_3 and not r.is_abelian_and_tau_identity


@pytest.mark.parametrize("name", battery_names())
def test_downward_equality_chain(name):
    g = get_group(name)
    for _, tau in available_taus(g):
        flags = criteria.downward_equality_chain(g, tau, 3)
        assert len(flags) == 3
