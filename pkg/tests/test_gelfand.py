import numpy as np
import pytest

from taumackey import characters, gelfand, groups, morphisms
from taumackey.errors import NotAutomorphism, NotGelfand

from battery import get_group


def space_in(big, gen_labels):
    g = get_group(big)
    ids = groups.subgroup_closure(g, [g.element_id(s) for s in gen_labels])
    return gelfand.build_coset_space(g, ids)


def test_coset_space_shapes():
    sp = space_in("S4", ["(1 2)", "(1 2 3)"])
    assert sp.size == 4
    assert len(sp.subgroup) * sp.size == 24
    assert sp.point_of[0] == 0
    # transitive action
    assert len(np.unique(gelfand.k_orbit_labels(
        gelfand.build_coset_space(sp.group, np.arange(24))))) == 1


def test_whole_group_single_point():
    s3 = get_group("S3")
    sp = gelfand.build_coset_space(s3, np.arange(6))
    assert sp.size == 1


def test_trivial_subgroup_regular_action():
    s3 = get_group("S3")
    sp = gelfand.build_coset_space(s3, [0])
    assert sp.size == 6
    assert np.array_equal(sp.action, s3.table.astype(np.int64))


def test_permutation_character_values():
    sp = space_in("S4", ["(1 2)", "(1 2 3)"])  # natural 4-point action
    perm = gelfand.permutation_character(sp)
    # fixed points by class: identity 4, transpositions 2, 3-cycles 1,
    # double transpositions 0, 4-cycles 0
    assert sorted(int(v.real) for v in perm.values) == [0, 0, 1, 2, 4]


def test_orbit_analysis_s3_two_symmetric():
    sp = space_in("S3", ["(1 2)"])
    a = gelfand.orbit_analysis(sp, morphisms.tau_inverse(sp.group))
    assert (a.m_symmetric, a.m_antisymmetric) == (2, 0)
    assert (a.hom_sym_dim, a.hom_skew_dim) == (2, 0)
    assert len(a.coset_reps) == a.orbit_count == 2


def test_orbit_analysis_regular_z3():
    z3 = get_group("Z3")
    sp = gelfand.build_coset_space(z3, [0])
    a = gelfand.orbit_analysis(sp, morphisms.tau_inverse(z3))
    assert a.m_antisymmetric >= 2
    assert a.m_antisymmetric % 2 == 0


def test_orbit_analysis_point_space():
    s3 = get_group("S3")
    sp = gelfand.build_coset_space(s3, np.arange(6))
    a = gelfand.orbit_analysis(sp, morphisms.tau_inverse(s3))
    assert (a.m_symmetric, a.m_antisymmetric) == (1, 0)
    assert (a.hom_sym_dim, a.hom_skew_dim) == (1, 0)


def test_dimension_bookkeeping_matches_coset_count():
    for big, gens in [("S4", ["(1 2)", "(1 2 3)"]), ("S4", ["(1 2 3 4)"]),
                      ("S5", ["(1 2)", "(1 2 3 4)"])]:
        sp = space_in(big, gens)
        a = gelfand.orbit_analysis(sp, morphisms.tau_inverse(sp.group))
        assert a.hom_sym_dim + a.hom_skew_dim == a.orbit_count
        assert len(a.coset_reps) == a.orbit_count


def test_symmetric_pair_s4_s3():
    sp = space_in("S4", ["(1 2)", "(1 2 3)"])
    rep = gelfand.gelfand_criteria_report(sp, morphisms.tau_inverse(sp.group))
    assert rep.gelfand and rep.hypothesis_holds and rep.weak_symmetry
    assert all(rep.conditions)
    assert rep.subgroup_tau_invariant
    assert rep.rank == 2


def test_symmetric_pair_s5_s4():
    sp = space_in("S5", ["(1 2)", "(1 2 3 4)"])
    rep = gelfand.gelfand_criteria_report(sp, morphisms.tau_inverse(sp.group))
    assert rep.gelfand and all(rep.conditions) and rep.weak_symmetry


@pytest.mark.parametrize("n", [3, 4, 5])
def test_abelian_regular_gelfand_but_not_symmetric(n):
    g = groups.cyclic(n)
    sp = gelfand.build_coset_space(g, [0])
    rep = gelfand.gelfand_criteria_report(sp, morphisms.tau_inverse(g))
    assert rep.gelfand
    assert rep.hypothesis_holds
    assert not any(rep.conditions)
    assert not rep.weak_symmetry


def test_diagonal_pair_is_gelfand():
    s3 = get_group("S3")
    gg = groups.direct_product(s3, s3)
    diag = np.array([g * 6 + g for g in range(6)], dtype=np.int64)
    sp = gelfand.build_coset_space(gg, diag)
    rep = gelfand.gelfand_criteria_report(sp, morphisms.tau_inverse(gg))
    assert rep.gelfand
    assert rep.rank == 3  # one orbit per conjugacy class


def test_spherical_functions_s4_s3():
    sp = space_in("S4", ["(1 2)", "(1 2 3)"])
    t = characters.compute_character_table(sp.group)
    sph = gelfand.spherical_functions(sp, t)
    assert 0 in sph.constituent_rows            # trivial constituent
    triv = list(sph.constituent_rows).index(0)
    assert np.abs(sph.values[triv] - 1).max() < 1e-9
    assert sph.normalization_residual < 1e-6
    assert sph.inversion_residual < 1e-6
    assert sph.orthogonality_residual < 1e-6


def test_spherical_rejects_non_gelfand():
    sp = space_in("S4", ["(1 2)"])  # rank 7 over 5 rows forces multiplicity
    t = characters.compute_character_table(sp.group)
    with pytest.raises(NotGelfand):
        gelfand.spherical_functions(sp, t)


def test_twisted_pair_s4_s3():
    sp = space_in("S4", ["(1 2)", "(1 2 3)"])
    rep = gelfand.twisted_fs_gelfand(sp, morphisms.tau_inverse(sp.group))
    assert all(v == 1 for v in rep.indicator_values)
    assert rep.averaged_indicator_residual < 1e-6
    assert rep.degree_sum_lhs == rep.degree_sum_rhs
    assert rep.k_orbit_count_match


def test_twisted_pair_point_space():
    s3 = get_group("S3")
    sp = gelfand.build_coset_space(s3, np.arange(6))
    rep = gelfand.twisted_fs_gelfand(sp, morphisms.tau_inverse(s3))
    assert rep.degree_sum_lhs == rep.degree_sum_rhs == 6


def test_twisted_pair_s3_transposition_subgroup():
    sp = space_in("S3", ["(1 2)"])
    rep = gelfand.twisted_fs_gelfand(sp, morphisms.tau_inverse(sp.group))
    assert rep.self_conjugate_constituents == 2
    assert rep.tau_invariant_k_orbits == 2
    assert rep.k_orbit_count_match


def test_twisted_pair_regular_z4():
    z4 = get_group("Z4")
    sp = gelfand.build_coset_space(z4, [0])
    rep = gelfand.twisted_fs_gelfand(sp, morphisms.tau_inverse(z4))
    assert rep.self_conjugate_constituents == 2
    assert rep.tau_invariant_k_orbits == 2
    assert rep.degree_sum_lhs == rep.degree_sum_rhs


def test_condition_star_s4():
    s4 = get_group("S4")
    sigma = morphisms.validate(
        s4, s4.conj_map(s4.element_id("(1 2)(3 4)")), "automorphism"
    )
    star = gelfand.condition_star(s4, sigma)
    assert star.holds
    assert star.fixed_subgroup_order == 8
    assert star.gelfand and star.rank == 2


def test_condition_star_flip_on_square():
    s3 = get_group("S3")
    gg = groups.direct_product(s3, s3)
    flip = morphisms.validate(
        gg, np.array([(a % 6) * 6 + a // 6 for a in range(36)]), "automorphism"
    )
    star = gelfand.condition_star(gg, flip)
    assert star.holds and star.fixed_subgroup_order == 6 and star.gelfand


def test_condition_star_identity_sigma():
    s4 = get_group("S4")
    ident = morphisms.validate(s4, np.arange(24), "automorphism")
    star = gelfand.condition_star(s4, ident)
    assert star.holds and star.omega_size == 1
    assert star.skipped == {} if ident.involutory else True


def test_condition_star_requires_automorphism():
    s4 = get_group("S4")
    with pytest.raises(NotAutomorphism):
        gelfand.condition_star(s4, morphisms.tau_inverse(s4))
