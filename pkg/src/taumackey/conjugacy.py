"""Conjugacy classes, twisted square-root counts, orbit scans, power sums."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import orbit_labels
from .errors import BudgetExceeded, CrossCheckFailed, InvalidMap, NotCommuting, NotInteger
from .groups import GroupTable
from .morphisms import GroupMap

PAIR_BUDGET = 4_000_000


@dataclass
class ConjugacyData:
    group: GroupTable
    class_of: np.ndarray          # element id -> class index
    classes: list[np.ndarray]     # sorted element ids per class
    representatives: np.ndarray   # minimal element id per class
    class_sizes: np.ndarray
    centralizer_order: np.ndarray  # per element

    @property
    def class_count(self) -> int:
        return len(self.representatives)

    def tau_class_image(self, tau: GroupMap) -> np.ndarray:
        """Index of the class containing tau(class representative)."""
        return self.class_of[tau.images[self.representatives]]

    def tau_invariant_classes(self, tau: GroupMap) -> np.ndarray:
        return self.tau_class_image(tau) == np.arange(self.class_count)


def conjugacy_classes(G: GroupTable) -> ConjugacyData:
    """Classes sorted by minimal member id; cached on the group."""
    if "conjugacy" in G._caches:
        return G._caches["conjugacy"]
    labels = orbit_labels(G.generator_conj_maps())
    representatives = np.unique(labels)
    class_of = np.searchsorted(representatives, labels)
    class_sizes = np.bincount(class_of)
    classes = [np.flatnonzero(class_of == c) for c in range(len(representatives))]
    centralizer_order = (G.order // class_sizes)[class_of]
    data = ConjugacyData(
        G, class_of, classes, representatives, class_sizes, centralizer_order
    )
    G._caches["conjugacy"] = data
    return data


@dataclass
class TwistedSquareCounts:
    """counts[g] = number of h with tau(h^-1)*h = g; for tau = inversion this
    is the square-root count of g."""

    group: GroupTable
    tau: GroupMap
    counts: np.ndarray  # int64 per element

    def on_class_reps(self, conj: ConjugacyData) -> np.ndarray:
        return self.counts[conj.representatives]


def count_twisted_squares(G: GroupTable, tau: GroupMap) -> TwistedSquareCounts:
    if tau.group is not G or tau.kind != "anti-automorphism" or not tau.involutory:
        raise InvalidMap("need a validated involutory anti-automorphism of this group")
    n = G.order
    ids = np.arange(n, dtype=np.int64)
    if G.table is not None:
        t = G.table.astype(np.int64)
        targets = t[tau.images[G.inverse[ids]], ids]
    else:
        targets = np.array(
            [G.mul(int(tau.images[G.inv(h)]), h) for h in range(n)], dtype=np.int64
        )
    counts = np.bincount(targets, minlength=n).astype(np.int64)
    if counts.sum() != n:
        raise CrossCheckFailed("twisted square counts do not sum to |G|")
    conj = conjugacy_classes(G)
    if not np.array_equal(counts, counts[conj.representatives][conj.class_of]):
        raise CrossCheckFailed("twisted square counts are not constant on classes")
    return TwistedSquareCounts(G, tau, counts)


@dataclass
class TwistedOrbitCount:
    fixed_orbit_count: int
    averaged_count: int
    orbit_count: int
    per_element_matches_sum: int


def twisted_orbit_count(
    G: GroupTable, n_points: int, gen_images: dict[int, np.ndarray], alpha
) -> TwistedOrbitCount:
    """Count orbits globally fixed by alpha, two independent ways.

    The action is given by generator images on 0..n_points-1; alpha must
    commute with it.  Route one averages |{x: g.x = alpha(x)}| over the
    group; route two enumerates orbits directly; they are asserted equal.
    """
    alpha = np.asarray(alpha, dtype=np.int64)
    gens = list(G.generators)
    for s in gens:
        if s not in gen_images:
            raise InvalidMap(f"no action image for generator {G.label(s)}")
    moves = np.stack([np.asarray(gen_images[s], dtype=np.int64) for s in gens])
    for s, m in zip(gens, moves):
        if not np.array_equal(alpha[m], m[alpha]):
            raise NotCommuting(f"alpha does not commute with the image of {G.label(s)}")

    # route one: build the permutation of every group element along the
    # Cayley graph, then average the match counts
    perms = np.empty((G.order, n_points), dtype=np.int64)
    perms[0] = np.arange(n_points)
    done = np.zeros(G.order, dtype=bool)
    done[0] = True
    frontier = [0]
    while frontier:
        new = []
        for g in frontier:
            for s, m in zip(gens, moves):
                x = G.mul(g, s)
                if not done[x]:
                    perms[x] = perms[g][m]
                    done[x] = True
                    new.append(x)
        frontier = new
    if not done.all():
        raise InvalidMap("generators do not reach the whole group")
    match_sum = int((perms == alpha[None, :]).sum())
    if match_sum % G.order != 0:
        raise NotInteger(
            f"match average {match_sum}/{G.order} is not an integer"
        )
    averaged = match_sum // G.order

    # route two: direct orbit enumeration plus the alpha-invariance test
    labels = orbit_labels(moves)
    reps = np.unique(labels)
    fixed = int(np.sum(labels[alpha[reps]] == reps))
    if fixed != averaged:
        raise CrossCheckFailed(
            f"averaged fixed-orbit count {averaged} != enumerated count {fixed}"
        )
    return TwistedOrbitCount(fixed, averaged, len(reps), match_sum)


@dataclass
class PairOrbitScan:
    n: int
    orbit_count: int
    tau_invariant_orbit_count: int


def simultaneous_conjugation_scan(
    G: GroupTable, n: int, tau: GroupMap, pair_budget: int = PAIR_BUDGET
) -> PairOrbitScan:
    """Orbits of G conjugating G^n componentwise (n = 1 or 2), and how many
    are fixed by applying tau in every coordinate."""
    if n not in (1, 2):
        raise BudgetExceeded(f"orbit scan supports n in {{1, 2}}, got {n}")
    conj = conjugacy_classes(G)
    if n == 1:
        invariant = int(conj.tau_invariant_classes(tau).sum())
        return PairOrbitScan(1, conj.class_count, invariant)
    size = G.order * G.order
    if size > pair_budget:
        raise BudgetExceeded(
            f"|G|^2 = {size} exceeds the pair budget {pair_budget}"
        )
    cmaps = G.generator_conj_maps()
    moves = np.stack([(c[:, None] * G.order + c[None, :]).reshape(-1) for c in cmaps])
    labels = orbit_labels(moves)
    reps = np.unique(labels)
    a, b = np.divmod(reps, G.order)
    tau_pairs = tau.images[a] * G.order + tau.images[b]
    invariant = int(np.sum(labels[tau_pairs] == reps))
    return PairOrbitScan(2, len(reps), invariant)


@dataclass
class PowerSumReport:
    n: int
    sum_centralizer_pow: int      # sum over g of v(g)^n, exact
    sum_twisted_square_pow: int   # sum over g of counts(g)^(n+1), exact
    equal: bool
    verified_against_orbits: bool | None  # None when the scan was skipped
    skipped_reason: str | None = None


def power_sum_report(
    G: GroupTable,
    tau: GroupMap,
    n: int,
    pair_budget: int = PAIR_BUDGET,
) -> PowerSumReport:
    """Exact big-integer comparison of the two power sums; for n <= 2 the
    sums are also cross-checked against the orbit scans."""
    if n < 1:
        raise InvalidMap("power must be >= 1")
    conj = conjugacy_classes(G)
    counts = count_twisted_squares(G, tau)
    v_rep = [int(G.order // s) for s in conj.class_sizes]
    z_rep = [int(z) for z in counts.on_class_reps(conj)]
    sizes = [int(s) for s in conj.class_sizes]
    sum_v = sum(s * v**n for s, v in zip(sizes, v_rep))
    sum_z = sum(s * z ** (n + 1) for s, z in zip(sizes, z_rep))
    if sum_z > sum_v:
        raise CrossCheckFailed(
            f"sum of twisted counts^{n + 1} = {sum_z} exceeds "
            f"sum of centralizer orders^{n} = {sum_v}"
        )
    verified = None
    reason = None
    if n <= 2:
        try:
            scan = simultaneous_conjugation_scan(G, n, tau, pair_budget)
        except BudgetExceeded as exc:
            reason = str(exc)
        else:
            ok = (
                sum_v == G.order * scan.orbit_count
                and sum_z == G.order * scan.tau_invariant_orbit_count
            )
            if not ok:
                raise CrossCheckFailed(
                    "power sums disagree with the orbit scan: "
                    f"{sum_v} vs {G.order}*{scan.orbit_count}, "
                    f"{sum_z} vs {G.order}*{scan.tau_invariant_orbit_count}"
                )
            verified = True
    else:
        reason = f"orbit scan not run for n = {n}"
    return PowerSumReport(n, sum_v, sum_z, sum_z == sum_v, verified, reason)
