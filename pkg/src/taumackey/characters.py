"""Complex character tables and character-level functionals.

The table is computed by the class-algebra method: the exact integer
class-multiplication coefficients are assembled, a random real linear
combination of the class matrices is diagonalized, and eigenvectors are
normalized into central characters.  Floats enter only at the eigen stage;
every quantity that must be an integer (degrees, multiplicities,
indicators) is rounded with its residual asserted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BudgetExceeded,
    CaseClassificationFailed,
    CrossCheckFailed,
    DegenerateEigenspaces,
    GroupMismatch,
    NoMatchingRow,
    NonIntegralIndicator,
    NonIntegralMultiplicity,
    ValueOutOfRange,
)
from .conjugacy import ConjugacyData, conjugacy_classes, count_twisted_squares
from .groups import GroupTable, construct_semidirect_with_involution, subgroup_table
from .morphisms import GroupMap

DEFAULT_SEED = 1729
CLASS_CAP = 200
INT_TOL = 1e-6
EIG_GAP = 1e-8
MAX_EIG_RETRIES = 20


@dataclass
class ClassFunction:
    """A complex function on conjugacy classes (values indexed like
    conjugacy_classes(group).representatives)."""

    group: GroupTable
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        k = conjugacy_classes(self.group).class_count
        if self.values.shape != (k,):
            raise GroupMismatch(f"expected {k} class values, got {self.values.shape}")

    def at_element(self, g: int) -> complex:
        conj = conjugacy_classes(self.group)
        return complex(self.values[conj.class_of[g]])

    def conjugate(self) -> "ClassFunction":
        return ClassFunction(self.group, self.values.conj())

    def pointwise(self, other: "ClassFunction") -> "ClassFunction":
        """Product of class functions = character of the tensor product."""
        if other.group is not self.group:
            raise GroupMismatch("class functions live on different groups")
        return ClassFunction(self.group, self.values * other.values)

    def compose_tau(self, tau: GroupMap) -> "ClassFunction":
        """g -> value at tau(g)."""
        conj = conjugacy_classes(self.group)
        return ClassFunction(self.group, self.values[conj.tau_class_image(tau)])


def inner_product(f1: ClassFunction, f2: ClassFunction) -> complex:
    """(1/|G|) sum over classes of |C| f1(C) conj(f2(C))."""
    if f1.group is not f2.group:
        raise GroupMismatch("class functions live on different groups")
    conj = conjugacy_classes(f1.group)
    return complex(
        np.sum(conj.class_sizes * f1.values * f2.values.conj()) / f1.group.order
    )


def regular_character(G: GroupTable) -> ClassFunction:
    conj = conjugacy_classes(G)
    values = np.zeros(conj.class_count, dtype=complex)
    values[0] = G.order
    return ClassFunction(G, values)


def trivial_character(G: GroupTable) -> ClassFunction:
    return ClassFunction(G, np.ones(conjugacy_classes(G).class_count, dtype=complex))


@dataclass
class CharacterTable:
    group: GroupTable
    conj: ConjugacyData
    values: np.ndarray            # (k irreducibles) x (k classes), complex
    degrees: np.ndarray           # int per row
    orthogonality_residual: float
    integrality_residual: float
    seed: int

    @property
    def class_count(self) -> int:
        return self.conj.class_count

    def row(self, i: int) -> ClassFunction:
        return ClassFunction(self.group, self.values[i])

    def rows(self) -> list[ClassFunction]:
        return [self.row(i) for i in range(self.class_count)]

    def decompose(self, f: ClassFunction, what: str = "class function") -> np.ndarray:
        """Multiplicities of each irreducible row in f, asserted integral."""
        if f.group is not self.group:
            raise GroupMismatch("class function lives on a different group")
        w = self.conj.class_sizes / self.group.order
        mults = (self.values.conj() * w) @ f.values
        rounded = np.round(mults.real).astype(np.int64)
        residual = float(np.abs(mults - rounded).max())
        if residual > INT_TOL:
            raise NonIntegralMultiplicity(
                f"{what} has non-integral multiplicities (residual {residual:.3g})"
            )
        return rounded

    def find_row(self, f: ClassFunction, tol: float = INT_TOL) -> int:
        """Index of the unique row equal to f within tol."""
        diffs = np.abs(self.values - f.values[None, :]).max(axis=1)
        j = int(diffs.argmin())
        if diffs[j] > tol:
            raise NoMatchingRow(f"no table row within {tol} (best {diffs[j]:.3g})")
        return j


def _class_matrices(G: GroupTable, conj: ConjugacyData) -> np.ndarray:
    """Exact integer structure constants of the class algebra.

    A[i, j, m] = number of (x, y) in C_i x C_j with x*y equal to a fixed
    representative of C_m.
    """
    t = G.require_dense("character table computation").astype(np.int64)
    k = conj.class_count
    A = np.empty((k, k, k), dtype=np.int64)
    sizes = conj.class_sizes
    for i in range(k):
        rows = t[conj.classes[i]]
        for j in range(k):
            prods = rows[:, conj.classes[j]].reshape(-1)
            cnt = np.bincount(conj.class_of[prods], minlength=k)
            if (cnt % sizes).any():
                raise CrossCheckFailed("class products are not constant on classes")
            A[i, j] = cnt // sizes
    return A


def compute_character_table(
    G: GroupTable, seed: int | None = None, class_cap: int = CLASS_CAP
) -> CharacterTable:
    """Full complex irreducible character table with deterministic row order
    (by degree, then by value lexicographically with the trivial row first)."""
    seed = DEFAULT_SEED if seed is None else int(seed)
    conj = conjugacy_classes(G)
    k = conj.class_count
    if k > class_cap:
        raise BudgetExceeded(f"class count {k} exceeds the cap {class_cap}")
    cache_key = ("char_table", seed)
    if cache_key in G._caches:
        return G._caches[cache_key]
    A = _class_matrices(G, conj).astype(float)
    sizes = conj.class_sizes.astype(float)
    rng = np.random.default_rng(seed)
    last_problem = "no attempt made"
    for _ in range(MAX_EIG_RETRIES):
        r = rng.standard_normal(k)
        M = np.tensordot(r, A, axes=(0, 0))
        eigvals, eigvecs = np.linalg.eig(M)
        scale = max(1.0, float(np.abs(eigvals).max()))
        gap = min(
            abs(eigvals[i] - eigvals[j]) for i in range(k) for j in range(i + 1, k)
        ) if k > 1 else np.inf
        if gap < EIG_GAP * scale:
            last_problem = f"eigenvalue gap {gap:.3g}"
            continue
        if np.abs(eigvecs[0]).min() < 1e-12:
            last_problem = "eigenvector vanishes at the identity class"
            continue
        omegas = eigvecs / eigvecs[0]          # central characters, columns
        d2 = G.order / np.sum(np.abs(omegas) ** 2 / sizes[:, None], axis=0)
        degs = np.sqrt(d2)
        X = (degs[None, :] * omegas / sizes[:, None]).T   # rows = irreducibles
        deg_res = float(np.abs(degs - np.round(degs.real)).max())
        if deg_res > INT_TOL:
            last_problem = f"degree residual {deg_res:.3g}"
            continue
        degrees = np.round(degs.real).astype(np.int64)
        if int((degrees**2).sum()) != G.order:
            last_problem = "sum of squared degrees misses |G|"
            continue
        if any(G.order % int(d) for d in degrees):
            last_problem = "a degree does not divide |G|"
            continue
        gram = (X * conj.class_sizes) @ X.conj().T / G.order
        orth = float(np.abs(gram - np.eye(k)).max())
        if orth > 1e-8 * k:
            last_problem = f"orthogonality residual {orth:.3g}"
            continue
        order = sorted(
            range(k),
            key=lambda i: (
                int(degrees[i]),
                tuple(
                    (-round(float(v.real), 6), -round(float(v.imag), 6))
                    for v in X[i]
                ),
            ),
        )
        table = CharacterTable(
            group=G,
            conj=conj,
            values=np.ascontiguousarray(X[order]),
            degrees=degrees[order],
            orthogonality_residual=orth,
            integrality_residual=deg_res,
            seed=seed,
        )
        G._caches[cache_key] = table
        return table
    raise DegenerateEigenspaces(
        f"no usable eigenbasis after {MAX_EIG_RETRIES} random combinations: "
        + last_problem
    )


# ---------------------------------------------------------------------------
# tensor products
# ---------------------------------------------------------------------------

def tensor_multiplicities(table: CharacterTable) -> np.ndarray:
    """m[i, j, l] = multiplicity of row l in the product of rows i and j."""
    X = table.values
    k = table.class_count
    w = table.conj.class_sizes / table.group.order
    dual = (X.conj() * w).T                     # (classes, k)
    m = np.empty((k, k, k), dtype=np.int64)
    worst = 0.0
    for i in range(k):
        block = (X[i][None, :] * X) @ dual      # (k, k)
        rounded = np.round(block.real).astype(np.int64)
        worst = max(worst, float(np.abs(block - rounded).max()))
        m[i] = rounded
    if worst > INT_TOL:
        raise NonIntegralMultiplicity(
            f"tensor multiplicities are not integral (residual {worst:.3g})"
        )
    return m


# ---------------------------------------------------------------------------
# indicators
# ---------------------------------------------------------------------------

def _indicator_from_targets(table: CharacterTable, targets: np.ndarray) -> np.ndarray:
    counts = np.bincount(
        table.conj.class_of[targets], minlength=table.class_count
    )
    return (table.values @ counts) / table.group.order


def _round_indicators(raw: np.ndarray, what: str) -> np.ndarray:
    rounded = np.round(raw.real).astype(np.int64)
    residual = float(np.abs(raw - rounded).max())
    if residual > INT_TOL:
        raise NonIntegralIndicator(f"{what} residual {residual:.3g}")
    if np.abs(rounded).max() > 1:
        raise ValueOutOfRange(f"{what} outside {{-1, 0, 1}}: {rounded}")
    return rounded


def fs_indicators(table: CharacterTable) -> np.ndarray:
    """Classical indicators (1/|G|) sum of chi(g^2): 1 real, 0 complex,
    -1 quaternionic."""
    G = table.group
    t = G.require_dense("indicator computation").astype(np.int64)
    squares = t.diagonal()
    raw = _indicator_from_targets(table, squares)
    return _round_indicators(raw, "Frobenius-Schur indicator")


@dataclass
class TwistedIndicators:
    values: np.ndarray        # int per row
    trace_route: np.ndarray   # raw complex, (1/|G|) sum chi(tau(g)^-1 g)
    count_route: np.ndarray   # raw complex, (1/|G|) sum counts(g) conj(chi(g))
    max_residual: float


def twisted_fs_indicators(table: CharacterTable, tau: GroupMap) -> TwistedIndicators:
    """Twisted indicators computed two independent ways and asserted equal."""
    G = table.group
    if tau.group is not G:
        raise GroupMismatch("map lives on a different group")
    t = G.require_dense("indicator computation").astype(np.int64)
    ids = np.arange(G.order)
    targets = t[G.inverse[tau.images], ids]     # tau(g)^-1 * g
    trace_route = _indicator_from_targets(table, targets)
    counts = count_twisted_squares(G, tau).on_class_reps(table.conj)
    weights = counts * table.conj.class_sizes
    count_route = (table.values.conj() @ weights) / G.order
    agreement = float(np.abs(trace_route - count_route).max())
    if agreement > INT_TOL:
        raise CrossCheckFailed(
            f"twisted indicator routes disagree (residual {agreement:.3g})"
        )
    values = _round_indicators(trace_route, "twisted Frobenius-Schur indicator")
    residual = float(np.abs(trace_route - values).max())
    return TwistedIndicators(values, trace_route, count_route, max(residual, agreement))


# ---------------------------------------------------------------------------
# tau-conjugate rows
# ---------------------------------------------------------------------------

def tau_row_permutation(table: CharacterTable, tau: GroupMap) -> np.ndarray:
    """perm[i] = j with chi_j(g) = chi_i(tau(g)) for all g."""
    if tau.group is not table.group:
        raise GroupMismatch("map lives on a different group")
    twisted = table.values[:, table.conj.tau_class_image(tau)]
    diffs = np.abs(twisted[:, None, :] - table.values[None, :, :]).max(axis=2)
    perm = diffs.argmin(axis=1)
    worst = float(diffs[np.arange(len(perm)), perm].max())
    if worst > INT_TOL:
        raise NoMatchingRow(
            f"tau-conjugate of some row is not in the table (residual {worst:.3g})"
        )
    if len(np.unique(perm)) != len(perm):
        raise NoMatchingRow("tau-conjugation did not permute the rows")
    return perm


def tau_conjugate_row(table: CharacterTable, i: int, tau: GroupMap) -> int:
    return int(tau_row_permutation(table, tau)[i])


@dataclass
class SelfConjugateCensus:
    count: int
    per_row: np.ndarray           # bool per row
    squared_count_route: int      # (1/|G|) sum counts(g)^2, exact
    invariant_class_route: int


def self_conjugate_census(table: CharacterTable, tau: GroupMap) -> SelfConjugateCensus:
    """Three equal quantities: self-tau-conjugate rows, tau-invariant classes,
    and the exact averaged square of the twisted square-root counts."""
    perm = tau_row_permutation(table, tau)
    per_row = perm == np.arange(len(perm))
    count = int(per_row.sum())
    counts = count_twisted_squares(table.group, tau)
    total = sum(
        int(s) * int(z) ** 2
        for s, z in zip(table.conj.class_sizes, counts.on_class_reps(table.conj))
    )
    if total % table.group.order:
        raise CrossCheckFailed("averaged squared counts are not integral")
    squared_route = total // table.group.order
    class_route = int(table.conj.tau_invariant_classes(tau).sum())
    if not (count == squared_route == class_route):
        raise CrossCheckFailed(
            f"census disagreement: rows {count}, counts {squared_route}, "
            f"classes {class_route}"
        )
    return SelfConjugateCensus(count, per_row, squared_route, class_route)


def twisted_count_expansion_residual(table: CharacterTable, tau: GroupMap) -> float:
    """Max error of counts(g) = sum over rows of indicator * chi(g) on class
    representatives."""
    indicators = twisted_fs_indicators(table, tau).values
    reconstructed = indicators.astype(complex) @ table.values
    exact = count_twisted_squares(table.group, tau).on_class_reps(table.conj)
    return float(np.abs(reconstructed - exact).max())


# ---------------------------------------------------------------------------
# induction / restriction
# ---------------------------------------------------------------------------

def restricted_character(
    f: ClassFunction, sub: GroupTable, embedding: np.ndarray
) -> ClassFunction:
    """Restriction along an embedding produced by subgroup_table."""
    conj_g = conjugacy_classes(f.group)
    conj_k = conjugacy_classes(sub)
    reps_in_g = embedding[conj_k.representatives]
    return ClassFunction(sub, f.values[conj_g.class_of[reps_in_g]])


def induced_character(
    table: CharacterTable, sub: GroupTable, embedding: np.ndarray, f: ClassFunction
) -> ClassFunction:
    """Induce a class function of a subgroup up to G.

    Standard averaged formula; Frobenius reciprocity against every table row
    is asserted before returning.
    """
    G = table.group
    if f.group is not sub:
        raise GroupMismatch("class function does not live on the subgroup")
    t = G.require_dense("induction").astype(np.int64)
    conj_g = table.conj
    conj_k = conjugacy_classes(sub)
    f_elem = np.zeros(G.order, dtype=complex)
    f_elem[embedding] = f.values[conj_k.class_of]
    ids = np.arange(G.order)
    inv = G.inverse.astype(np.int64)
    values = np.empty(conj_g.class_count, dtype=complex)
    for c, rep in enumerate(conj_g.representatives):
        inner = t[t[inv, int(rep)], ids]        # x^-1 * rep * x over x
        values[c] = f_elem[inner].sum() / len(embedding)
    induced = ClassFunction(G, values)
    for i in range(table.class_count):
        lhs = inner_product(induced, table.row(i))
        res = restricted_character(table.row(i), sub, embedding)
        rhs = inner_product(f, res)
        if abs(lhs - rhs) > 1e-8:
            raise CrossCheckFailed(
                f"Frobenius reciprocity fails on row {i}: {lhs} vs {rhs}"
            )
    return induced


# ---------------------------------------------------------------------------
# index-two extension bookkeeping
# ---------------------------------------------------------------------------

@dataclass
class ExtensionCase:
    sigma_row: int
    case: int                     # 1: induces irreducibly, 2: splits in two
    extension_rows: tuple[int, ...]
    conjugate_partner_row: int | None = None    # case 1: the row of sigma^h


@dataclass
class ExtensionReport:
    base: GroupTable
    extension: GroupTable
    cases: list[ExtensionCase] = field(default_factory=list)

    def case_counts(self) -> tuple[int, int]:
        c1 = sum(1 for c in self.cases if c.case == 1)
        c2 = sum(1 for c in self.cases if c.case == 2)
        return c1, c2


def clifford_theory_check(
    N: GroupTable, tau: GroupMap, seed: int | None = None
) -> ExtensionReport:
    """Induce every irreducible of N to the order-2 extension built from tau
    and verify that exactly one of the two index-two branching patterns holds.

    Case 1: the induced character is irreducible, restricts to sigma plus its
    h-conjugate, and those are inequivalent.  Case 2: induction splits as
    theta plus theta tensor the order-two sign character, both restricting
    back to sigma.
    """
    G = construct_semidirect_with_involution(N, tau)
    table_n = compute_character_table(N, seed)
    table_g = compute_character_table(G, seed)
    n = N.order
    h = G.meta["h"]
    conj_g = table_g.conj
    conj_n = table_n.conj
    embedding = np.arange(n, dtype=np.int64)
    sign_values = np.where(conj_g.representatives < n, 1.0, -1.0).astype(complex)
    sign = ClassFunction(G, sign_values)
    report = ExtensionReport(N, G)
    for i in range(table_n.class_count):
        sigma = table_n.row(i)
        induced = induced_character(table_g, N, embedding, sigma)
        norm = inner_product(induced, induced)
        if abs(norm - round(norm.real)) > INT_TOL:
            raise CaseClassificationFailed(f"norm of induced row {i} not integral")
        norm = int(round(norm.real))
        # sigma^h(x) = sigma(h^-1 x h), computed inside the extension
        hx = np.array(
            [G.mul(G.mul(h, int(r)), h) for r in conj_n.representatives],
            dtype=np.int64,
        )
        sigma_h = ClassFunction(N, sigma.values[conj_n.class_of[hx]])
        res_ind = restricted_character(induced, N, embedding)
        if norm == 1:
            j = table_g.find_row(induced)
            twisted = table_g.row(j).pointwise(sign)
            if table_g.find_row(twisted) != j:
                raise CaseClassificationFailed(
                    f"irreducible induction of row {i} is moved by the sign twist"
                )
            expected = ClassFunction(N, sigma.values + sigma_h.values)
            if np.abs(res_ind.values - expected.values).max() > INT_TOL:
                raise CaseClassificationFailed(
                    f"restriction of induced row {i} is not sigma + sigma^h"
                )
            if np.abs(sigma.values - sigma_h.values).max() < INT_TOL:
                raise CaseClassificationFailed(
                    f"row {i}: induced irreducibly but sigma^h = sigma"
                )
            partner = table_n.find_row(sigma_h)
            report.cases.append(ExtensionCase(i, 1, (j,), partner))
        elif norm == 2:
            mults = table_g.decompose(induced, f"induced row {i}")
            rows = np.flatnonzero(mults)
            if len(rows) != 2 or set(mults[rows]) != {1}:
                raise CaseClassificationFailed(
                    f"induced row {i} does not split into two distinct rows"
                )
            t1, t2 = (int(r) for r in rows)
            twisted = table_g.row(t1).pointwise(sign)
            if table_g.find_row(twisted) != t2:
                raise CaseClassificationFailed(
                    f"rows {t1}, {t2} are not a sign-twist pair"
                )
            for r in (t1, t2):
                res = restricted_character(table_g.row(r), N, embedding)
                if np.abs(res.values - sigma.values).max() > INT_TOL:
                    raise CaseClassificationFailed(
                        f"row {r} of the extension does not restrict to row {i}"
                    )
            report.cases.append(ExtensionCase(i, 2, (t1, t2)))
        else:
            raise CaseClassificationFailed(
                f"induced row {i} has norm {norm}, expected 1 or 2"
            )
    return report


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def table_to_jsonable(table: CharacterTable) -> dict:
    conj = table.conj
    return {
        "order": table.group.order,
        "class_representatives": [table.group.label(int(r)) for r in conj.representatives],
        "class_sizes": [int(s) for s in conj.class_sizes],
        "degrees": [int(d) for d in table.degrees],
        "rows": [
            [[round(float(v.real), 12), round(float(v.imag), 12)] for v in row]
            for row in table.values
        ],
        "quality": {
            "orthogonality_residual": table.orthogonality_residual,
            "integrality_residual": table.integrality_residual,
        },
    }
