"""Homogeneous spaces G/K: symmetry criteria, spherical functions, and the
twisted indicator identities on Gelfand pairs."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._kernels import orbit_labels
from .characters import (
    CharacterTable,
    ClassFunction,
    compute_character_table,
    inner_product,
    tau_row_permutation,
    twisted_fs_indicators,
)
from .conjugacy import PAIR_BUDGET, conjugacy_classes
from .errors import (
    BudgetExceeded,
    CrossCheckFailed,
    NotASubgroup,
    NotAutomorphism,
    NotGelfand,
)
from .groups import GroupTable, check_subgroup
from .morphisms import GroupMap

INT_TOL = 1e-6


@dataclass
class CosetSpace:
    """Left cosets of K in G with the tabulated G-action; point 0 is K."""

    group: GroupTable
    subgroup: np.ndarray       # sorted element ids of K
    size: int                  # |X| = |G| / |K|
    reps: np.ndarray           # minimal element id per point
    point_of: np.ndarray       # element id -> its coset's point
    action: np.ndarray         # (|G|, |X|): action[g, x] = point of g.x

    @property
    def base_point(self) -> int:
        return 0


def build_coset_space(G: GroupTable, subgroup_ids) -> CosetSpace:
    K = check_subgroup(G, np.asarray(subgroup_ids, dtype=np.int64))
    t = G.require_dense("coset space construction").astype(np.int64)
    n = G.order
    point_of = -np.ones(n, dtype=np.int64)
    reps = []
    for g in range(n):
        if point_of[g] >= 0:
            continue
        point_of[t[g, K]] = len(reps)
        reps.append(g)
    reps = np.array(reps, dtype=np.int64)
    size = len(reps)
    if size * len(K) != n:
        raise NotASubgroup("cosets do not partition the group evenly")
    action = point_of[t[:, reps]]
    stab = np.flatnonzero(action[:, 0] == 0)
    if not np.array_equal(stab, K):
        raise CrossCheckFailed("stabilizer of the base point is not K")
    return CosetSpace(G, K, size, reps, point_of, action)


def permutation_character(space: CosetSpace) -> ClassFunction:
    """Fixed points of each class representative acting on X (exact counts)."""
    conj = conjugacy_classes(space.group)
    x = np.arange(space.size)
    values = np.array(
        [(space.action[int(r)] == x).sum() for r in conj.representatives],
        dtype=complex,
    )
    return ClassFunction(space.group, values)


def k_orbit_labels(space: CosetSpace) -> np.ndarray:
    """Orbit labels of K acting on X (labels are minimal point indices)."""
    return orbit_labels(space.action[space.subgroup])


# ---------------------------------------------------------------------------
# twisted product action on X x X
# ---------------------------------------------------------------------------

@dataclass
class OrbitAnalysis:
    """Orbits of the pair action (twist on the left factor, plain on the
    right), classified by flip symmetry, with one double-coset representative
    per orbit."""

    orbit_count: int
    m_symmetric: int              # orbits fixed by the coordinate flip
    m_antisymmetric: int
    hom_sym_dim: int
    hom_skew_dim: int
    coset_reps: np.ndarray        # minimal group element per orbit
    rep_symmetric: np.ndarray     # flip flag aligned with coset_reps


def orbit_analysis(
    space: CosetSpace, tau: GroupMap, pair_budget: int = PAIR_BUDGET
) -> OrbitAnalysis:
    G = space.group
    X = space.size
    if X * X > pair_budget:
        raise BudgetExceeded(f"|X|^2 = {X * X} exceeds the pair budget {pair_budget}")
    inv = G.inverse.astype(np.int64)
    moves = []
    for s in G.generators:
        left = space.action[int(tau.images[inv[s]])]   # tau-twisted action
        right = space.action[int(s)]
        moves.append(np.add.outer(left * X, right).reshape(-1))
    labels = orbit_labels(np.stack(moves))
    pair_reps = np.unique(labels)
    x1, x2 = np.divmod(pair_reps, X)
    symmetric = labels[x2 * X + x1] == pair_reps
    m1 = int(symmetric.sum())
    m2 = int(len(pair_reps) - m1)
    if m2 % 2:
        raise CrossCheckFailed(f"antisymmetric orbit count {m2} is odd")
    # every orbit meets {(base point, y)}; the first group element hitting an
    # orbit there is its double-coset representative
    label_of_s = labels[space.action[:, 0]]
    orbit_labels_sorted, first_s = np.unique(label_of_s, return_index=True)
    if not np.array_equal(orbit_labels_sorted, pair_reps):
        raise CrossCheckFailed("double-coset representatives missed an orbit")
    return OrbitAnalysis(
        orbit_count=len(pair_reps),
        m_symmetric=m1,
        m_antisymmetric=m2,
        hom_sym_dim=m1 + m2 // 2,
        hom_skew_dim=m2 // 2,
        coset_reps=first_s.astype(np.int64),
        rep_symmetric=symmetric,
    )


def double_coset_tau_invariant(space: CosetSpace, tau: GroupMap, s: int) -> bool:
    """Direct scan: tau(s) in tau(K) s K."""
    G = space.group
    t = G.table.astype(np.int64)
    tau_k = np.unique(tau.images[space.subgroup])
    left = t[tau_k, int(s)]
    coset = t[np.ix_(left, space.subgroup)]
    return bool(np.isin(int(tau.images[s]), coset).any())


def weak_symmetry_holds(space: CosetSpace, tau: GroupMap) -> bool:
    """g in K tau(g) K for every g."""
    G = space.group
    t = G.table.astype(np.int64)
    K = space.subgroup
    for g in range(G.order):
        left = t[K, int(tau.images[g])]
        if not np.isin(g, t[np.ix_(left, K)]).any():
            return False
    return True


# ---------------------------------------------------------------------------
# the four equivalent symmetry conditions
# ---------------------------------------------------------------------------

@dataclass
class GelfandCriteria:
    gelfand: bool                      # permutation character multiplicity-free
    rank: int                          # number of K-orbits on X
    multiplicities: np.ndarray
    constituent_rows: np.ndarray
    hypothesis_holds: bool             # twisted permutation character = plain one
    weak_symmetry: bool
    subgroup_tau_invariant: bool
    cond_skew_dim_zero: bool           # (a)
    cond_orbits_symmetric: bool        # (b)
    cond_cosets_invariant: bool        # (c)
    cond_constituents_positive: bool   # (d)
    equivalences_asserted: bool
    analysis: OrbitAnalysis
    skipped: dict = field(default_factory=dict)

    @property
    def conditions(self) -> tuple[bool, bool, bool, bool]:
        return (
            self.cond_skew_dim_zero,
            self.cond_orbits_symmetric,
            self.cond_cosets_invariant,
            self.cond_constituents_positive,
        )


def gelfand_criteria_report(
    space: CosetSpace,
    tau: GroupMap,
    table: CharacterTable | None = None,
    seed: int | None = None,
    pair_budget: int = PAIR_BUDGET,
) -> GelfandCriteria:
    """Evaluate the four symmetry conditions independently; when the twisted
    permutation representation is equivalent to the plain one, their
    equivalence is asserted.  Facts are still reported when it is not."""
    G = space.group
    table = table if table is not None else compute_character_table(G, seed)
    perm = permutation_character(space)
    mults = table.decompose(perm, "permutation character")
    gelfand = bool((mults <= 1).all())
    constituents = np.flatnonzero(mults)
    rank = len(np.unique(k_orbit_labels(space)))
    norm = inner_product(perm, perm)
    if abs(norm - round(norm.real)) > INT_TOL or round(norm.real) != int((mults**2).sum()):
        raise CrossCheckFailed("permutation character norm disagrees with multiplicities")
    if int(round(norm.real)) != rank:
        raise CrossCheckFailed(
            f"character norm {norm} disagrees with the orbit rank {rank}"
        )
    hypothesis = bool(
        np.abs(perm.compose_tau(tau).values - perm.values).max() < INT_TOL
    )
    analysis = orbit_analysis(space, tau, pair_budget)
    cond_a = analysis.hom_skew_dim == 0
    cond_b = analysis.m_antisymmetric == 0
    cond_c = all(
        double_coset_tau_invariant(space, tau, int(s)) for s in analysis.coset_reps
    )
    indicators = twisted_fs_indicators(table, tau).values
    cond_d = gelfand and all(indicators[i] == 1 for i in constituents)
    weak = weak_symmetry_holds(space, tau)
    tau_k = bool(
        np.array_equal(np.unique(tau.images[space.subgroup]), space.subgroup)
    )
    conditions = (cond_a, cond_b, cond_c, cond_d)
    if hypothesis and len(set(conditions)) != 1:
        raise CrossCheckFailed(
            f"equivalent conditions disagree under the hypothesis: {conditions}"
        )
    if weak:
        if not (tau_k and all(conditions)):
            raise CrossCheckFailed(
                "weak symmetry holds but a symmetry condition fails"
            )
    return GelfandCriteria(
        gelfand=gelfand,
        rank=rank,
        multiplicities=mults,
        constituent_rows=constituents,
        hypothesis_holds=hypothesis,
        weak_symmetry=weak,
        subgroup_tau_invariant=tau_k,
        cond_skew_dim_zero=cond_a,
        cond_orbits_symmetric=cond_b,
        cond_cosets_invariant=cond_c,
        cond_constituents_positive=cond_d,
        equivalences_asserted=hypothesis,
        analysis=analysis,
    )


# ---------------------------------------------------------------------------
# spherical functions
# ---------------------------------------------------------------------------

@dataclass
class SphericalData:
    constituent_rows: np.ndarray
    values: np.ndarray            # (len(constituents), |X|)
    k_orbit_reps: np.ndarray      # point per K-orbit
    normalization_residual: float
    invariance_residual: float    # constancy on K-orbits
    inversion_residual: float     # character recovered from the average
    orthogonality_residual: float


def spherical_functions(space: CosetSpace, table: CharacterTable) -> SphericalData:
    """Averaged bi-K-invariant matrix coefficients of each constituent, with
    the normalization, inversion, and orthogonality identities checked."""
    G = space.group
    mults = table.decompose(permutation_character(space), "permutation character")
    if (mults > 1).any():
        raise NotGelfand("permutation character is not multiplicity-free")
    constituents = np.flatnonzero(mults)
    t = G.table.astype(np.int64)
    conj = table.conj
    prods = t[np.ix_(space.reps, space.subgroup)]      # (X, |K|)
    prod_classes = conj.class_of[prods]
    phi = np.empty((len(constituents), space.size), dtype=complex)
    for a, i in enumerate(constituents):
        phi[a] = table.values[i][prod_classes].conj().mean(axis=1)
    norm_res = float(np.abs(phi[:, 0] - 1).max())
    if norm_res > INT_TOL:
        raise CrossCheckFailed(f"spherical normalization residual {norm_res:.3g}")
    labels = k_orbit_labels(space)
    k_reps = np.unique(labels)
    inv_res = float(np.abs(phi - phi[:, labels]).max())
    if inv_res > INT_TOL:
        raise CrossCheckFailed(f"spherical functions not K-orbit constant: {inv_res:.3g}")
    # recover each character from its spherical function
    ids = np.arange(G.order)
    ginv = G.inverse.astype(np.int64)
    recon_res = 0.0
    for a, i in enumerate(constituents):
        d = int(table.degrees[i])
        for c, rep in enumerate(conj.representatives):
            conjugates = t[t[ginv, int(rep)], ids]
            val = d / G.order * phi[a][space.point_of[conjugates]].conj().sum()
            recon_res = max(recon_res, abs(val - table.values[i, c]))
    orth = phi @ phi.conj().T / space.size
    expected = np.diag(1.0 / table.degrees[constituents].astype(float))
    orth_res = float(np.abs(orth - expected).max())
    if max(recon_res, orth_res) > INT_TOL:
        raise CrossCheckFailed(
            f"spherical identities fail: inversion {recon_res:.3g}, "
            f"orthogonality {orth_res:.3g}"
        )
    return SphericalData(
        constituent_rows=constituents,
        values=phi,
        k_orbit_reps=k_reps,
        normalization_residual=norm_res,
        invariance_residual=inv_res,
        inversion_residual=float(recon_res),
        orthogonality_residual=orth_res,
    )


# ---------------------------------------------------------------------------
# twisted indicators on a Gelfand pair
# ---------------------------------------------------------------------------

@dataclass
class TwistedPairReport:
    constituent_rows: np.ndarray
    indicator_values: np.ndarray          # per constituent
    averaged_indicator_residual: float    # identity (1)
    point_count_sum: int                  # sum of squared twisted point counts
    degree_sum_lhs: Fraction              # exact (1/|G|) sum counts^2
    degree_sum_rhs: Fraction              # exact |K| * sum 1/d over self-conj
    degree_sum_residual: float            # identity (2)
    count_inversion_residual: float
    self_conjugate_constituents: int
    tau_invariant_k_orbits: int | None    # None when tau(K) != K
    k_orbit_count_match: bool | None
    skipped: dict = field(default_factory=dict)


def twisted_fs_gelfand(
    space: CosetSpace, tau: GroupMap, table: CharacterTable | None = None,
    seed: int | None = None,
) -> TwistedPairReport:
    """The two averaged identities for a multiplicity-free pair, plus the
    K-orbit count comparison when K is tau-invariant."""
    G = space.group
    table = table if table is not None else compute_character_table(G, seed)
    sph = spherical_functions(space, table)
    constituents = sph.constituent_rows
    indicators = twisted_fs_indicators(table, tau).values
    t = G.table.astype(np.int64)
    ids = np.arange(G.order)
    twisted = t[G.inverse[tau.images], ids]          # tau(g)^-1 g per g
    twisted_points = space.point_of[twisted]

    # identity (1): averaging a spherical function over twisted squares gives
    # the indicator of its constituent
    res1 = 0.0
    for a, i in enumerate(constituents):
        d = int(table.degrees[i])
        val = d / G.order * sph.values[a][twisted_points].sum()
        res1 = max(res1, abs(val - indicators[i]))
    if res1 > INT_TOL:
        raise CrossCheckFailed(f"averaged spherical indicator residual {res1:.3g}")

    # identity (2): exact rational comparison
    counts_x = np.bincount(twisted_points, minlength=space.size)
    square_sum = int((counts_x.astype(object) ** 2).sum())
    lhs = Fraction(square_sum, G.order)
    perm = tau_row_permutation(table, tau)
    self_conj = np.array([perm[i] == i for i in constituents])
    rhs = Fraction(len(space.subgroup), 1) * sum(
        (Fraction(1, int(table.degrees[i]))
         for i in constituents[self_conj]),
        Fraction(0),
    )
    res2 = abs(float(lhs - rhs))
    if lhs != rhs:
        raise CrossCheckFailed(
            f"twisted point-count identity fails: {lhs} != {rhs}"
        )

    # spherical inversion of the point counts
    recon = len(space.subgroup) * (
        indicators[constituents].astype(complex) @ sph.values
    )
    res3 = float(np.abs(recon - counts_x).max())
    if res3 > INT_TOL:
        raise CrossCheckFailed(f"point-count inversion residual {res3:.3g}")

    tau_k = bool(np.array_equal(np.unique(tau.images[space.subgroup]), space.subgroup))
    n_self = int(self_conj.sum())
    skipped = {}
    invariant_orbits = None
    match = None
    if tau_k:
        labels = k_orbit_labels(space)
        reps = np.unique(labels)
        tau_point = space.point_of[tau.images[space.reps]]
        invariant_orbits = int((labels[tau_point[reps]] == reps).sum())
        match = invariant_orbits == n_self
        if not match:
            raise CrossCheckFailed(
                f"tau-invariant K-orbits {invariant_orbits} != "
                f"self-conjugate constituents {n_self}"
            )
        bad = [
            int(i) for i, sc in zip(constituents, self_conj)
            if sc and indicators[i] != 1
        ]
        if bad:
            raise CrossCheckFailed(
                f"self-conjugate constituents with indicator != 1: rows {bad}"
            )
    else:
        skipped["k_orbit_comparison"] = "K is not tau-invariant"
    return TwistedPairReport(
        constituent_rows=constituents,
        indicator_values=indicators[constituents],
        averaged_indicator_residual=res1,
        point_count_sum=square_sum,
        degree_sum_lhs=lhs,
        degree_sum_rhs=rhs,
        degree_sum_residual=res2,
        count_inversion_residual=res3,
        self_conjugate_constituents=n_self,
        tau_invariant_k_orbits=invariant_orbits,
        k_orbit_count_match=match,
        skipped=skipped,
    )


# ---------------------------------------------------------------------------
# twisted-square conjugacy condition for an automorphism
# ---------------------------------------------------------------------------

@dataclass
class TwistedSquareConjugacy:
    holds: bool
    fixed_subgroup_order: int
    omega_size: int
    omega_classes_in_group: int
    omega_classes_in_fixed_subgroup: int
    gelfand: bool | None          # asserted when the automorphism is an involution
    rank: int | None
    skipped: dict = field(default_factory=dict)


def condition_star(
    G: GroupTable, sigma: GroupMap, seed: int | None = None,
    pair_budget: int = PAIR_BUDGET,
) -> TwistedSquareConjugacy:
    """Whether group-level conjugacy of the twisted squares x sigma(x^-1)
    already implies conjugacy inside the fixed subgroup of sigma.  For an
    involutory sigma that condition forces (G, fixed subgroup) to be a
    Gelfand pair, which is asserted."""
    if sigma.kind != "automorphism":
        raise NotAutomorphism("need a validated automorphism")
    if sigma.group is not G:
        raise NotAutomorphism("automorphism lives on a different group")
    n = G.order
    ids = np.arange(n)
    K = np.flatnonzero(sigma.images == ids).astype(np.int64)
    K = check_subgroup(G, K)
    t = G.require_dense("twisted-square analysis").astype(np.int64)
    omega = np.unique(t[ids, sigma.images[G.inverse[ids]]])
    conj = conjugacy_classes(G)
    in_g = len(np.unique(conj.class_of[omega]))
    moves = np.stack([G.conj_map(int(k)) for k in K])
    labels = orbit_labels(moves)
    in_k = len(np.unique(labels[omega]))
    if in_k < in_g:
        raise CrossCheckFailed(
            "fixed-subgroup conjugacy cannot be coarser than group conjugacy"
        )
    holds = in_k == in_g
    gelfand = None
    rank = None
    skipped = {}
    if sigma.involutory:
        space = build_coset_space(G, K)
        table = compute_character_table(G, seed)
        mults = table.decompose(permutation_character(space), "permutation character")
        gelfand = bool((mults <= 1).all())
        rank = len(np.unique(k_orbit_labels(space)))
        if holds and not gelfand:
            raise CrossCheckFailed(
                "twisted-square condition holds for an involution but the "
                "pair is not Gelfand"
            )
    else:
        skipped["gelfand_assertion"] = "sigma is not an involution"
    return TwistedSquareConjugacy(
        holds=holds,
        fixed_subgroup_order=len(K),
        omega_size=len(omega),
        omega_classes_in_group=in_g,
        omega_classes_in_fixed_subgroup=in_k,
        gelfand=gelfand,
        rank=rank,
        skipped=skipped,
    )
