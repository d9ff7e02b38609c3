"""Automorphisms and involutory anti-automorphisms as id permutations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ClosureCapExceeded,
    HomomorphismViolation,
    InconsistentImages,
    InvalidMap,
    NotBijective,
    NotCliffordGroup,
    NotInvolutory,
    WrongKind,
)
from .groups import ORDER_CAP, GroupTable, direct_product

EXHAUSTIVE_CAP = 1024
SAMPLE_PAIRS = 100_000
_SAMPLE_SEED = 0x5EED


@dataclass(frozen=True)
class GroupMap:
    """A validated bijection of element ids with its homomorphism kind."""

    group: GroupTable
    images: np.ndarray
    kind: str  # "automorphism" | "anti-automorphism"
    involutory: bool
    exhaustive: bool  # True if the pair check covered all of G x G

    def __call__(self, a: int) -> int:
        return int(self.images[a])

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.images, np.arange(self.group.order)))


def _pair_respects(G: GroupTable, images: np.ndarray, kind: str, a: int, b: int) -> bool:
    img_ab = int(images[G.mul(a, b)])
    if kind == "automorphism":
        return img_ab == G.mul(int(images[a]), int(images[b]))
    return img_ab == G.mul(int(images[b]), int(images[a]))


def _check_hom(G: GroupTable, images: np.ndarray, kind: str):
    """Return (ok, witness, exhaustive); witness is a violating pair."""
    n = G.order
    if G.table is not None and n <= EXHAUSTIVE_CAP:
        t = G.table.astype(np.int64)
        lhs = images[t]
        m = t[np.ix_(images, images)]
        rhs = m if kind == "automorphism" else m.T
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            a, b = (int(x) for x in bad[0])
            return False, (a, b), True
        return True, None, True
    # generator pairs exhaustively, then a fixed random sample
    for s in G.generators:
        for b in range(n):
            if not _pair_respects(G, images, kind, s, b):
                return False, (s, b), False
            if not _pair_respects(G, images, kind, b, s):
                return False, (b, s), False
    rng = np.random.default_rng(_SAMPLE_SEED)
    pairs = rng.integers(0, n, size=(SAMPLE_PAIRS, 2))
    for a, b in pairs:
        if not _pair_respects(G, images, kind, int(a), int(b)):
            return False, (int(a), int(b)), False
    return True, None, False


def validate(G: GroupTable, images, kind: str) -> GroupMap:
    """Validate a raw id permutation as a map of the claimed kind."""
    if kind not in ("automorphism", "anti-automorphism"):
        raise InvalidMap(f"unknown kind {kind!r}")
    images = np.asarray(images, dtype=np.int64)
    if images.shape != (G.order,):
        raise NotBijective(f"expected {G.order} images, got shape {images.shape}")
    if not np.array_equal(np.sort(images), np.arange(G.order)):
        raise NotBijective("images are not a permutation of element ids")
    if images[0] != 0:
        raise NotBijective("map does not fix the identity")
    ok, witness, exhaustive = _check_hom(G, images, kind)
    if not ok:
        a, b = witness
        other = "anti-automorphism" if kind == "automorphism" else "automorphism"
        hint = f"; the map is a valid {other}" if _check_hom(G, images, other)[0] else ""
        raise HomomorphismViolation(
            f"{kind} law fails at witness ({G.label(a)}, {G.label(b)})" + hint
        )
    involutory = bool(np.array_equal(images[images], np.arange(G.order)))
    return GroupMap(G, images, kind, involutory, exhaustive)


def tau_inverse(G: GroupTable) -> GroupMap:
    """g -> g^-1, always an involutory anti-automorphism."""
    return validate(G, G.inverse.astype(np.int64), "anti-automorphism")


def tau_identity(G: GroupTable) -> GroupMap:
    """The identity map; an anti-automorphism only on abelian groups."""
    if not G.is_abelian():
        raise WrongKind("identity map is an anti-automorphism only for abelian groups")
    return validate(G, np.arange(G.order, dtype=np.int64), "anti-automorphism")


def tau_inner(G: GroupTable, g0: int) -> GroupMap:
    """g -> g0 * g^-1 * g0^-1; involutory only when g0^2 is central, so the
    involution is checked rather than assumed."""
    g0 = int(g0)
    inv = G.inverse.astype(np.int64)
    if G.table is not None:
        images = G.table[G.table[g0, inv], int(inv[g0])].astype(np.int64)
    else:
        images = np.array(
            [G.mul(G.mul(g0, G.inv(x)), G.inv(g0)) for x in range(G.order)],
            dtype=np.int64,
        )
    m = validate(G, images, "anti-automorphism")
    if not m.involutory:
        raise NotInvolutory(
            f"inner twist by {G.label(g0)} is not involutory (g0^2 not central)"
        )
    return m


def tau_clifford(G: GroupTable) -> GroupMap:
    """The sign-twisted involution for signed-subset groups when n = 3 mod 4,
    plain inversion otherwise."""
    n = G.meta.get("clifford_n")
    if n is None:
        raise NotCliffordGroup(f"{G.family_tag} was not built by clifford(n)")
    if n % 4 != 3:
        return tau_inverse(G)
    images = np.empty(G.order, dtype=np.int64)
    for i, (s, a) in enumerate(G.elements):
        k = bin(a).count("1")
        flip = -1 if (k * (k + 1) // 2) & 1 else 1
        images[i] = G.element_id((s * flip, a))
    return validate(G, images, "anti-automorphism")


def extend_to_power(tau: GroupMap, n: int) -> GroupMap:
    """Componentwise extension of tau to the direct power G^n."""
    if n < 1:
        raise InvalidMap("power must be >= 1")
    if tau.group.order ** n > ORDER_CAP:
        raise ClosureCapExceeded(f"|G|^{n} exceeds the order cap {ORDER_CAP}")
    if n == 1:
        return tau
    power = tau.group
    images = tau.images
    for _ in range(n - 1):
        power = direct_product(power, tau.group)
        m = tau.group.order
        images = (images[:, None] * m + tau.images[None, :]).reshape(-1)
    return GroupMap(power, images, tau.kind, tau.involutory, tau.exhaustive)


def tau_from_generator_images(
    G: GroupTable, pairs: dict[int, int], require_involutory: bool = False
) -> GroupMap:
    """Extend generator images along the Cayley graph by the reversal rule
    image(w*s) = image(s)*image(w), then validate globally."""
    for s in G.generators:
        if s not in pairs:
            raise InconsistentImages(f"no image given for generator {G.label(s)}")
    images = -np.ones(G.order, dtype=np.int64)
    images[0] = 0
    frontier = [0]
    while frontier:
        new = []
        for w in frontier:
            iw = int(images[w])
            for s in G.generators:
                x = G.mul(w, s)
                cand = G.mul(int(pairs[s]), iw)
                if images[x] < 0:
                    images[x] = cand
                    new.append(x)
                elif images[x] != cand:
                    raise InconsistentImages(
                        f"two words for {G.label(x)} give images "
                        f"{G.label(int(images[x]))} and {G.label(cand)}"
                    )
        frontier = new
    if (images < 0).any():
        raise InconsistentImages("generators do not reach the whole group")
    m = validate(G, images, "anti-automorphism")
    if require_involutory and not m.involutory:
        raise NotInvolutory("extended map is a valid but non-involutory map")
    return m


def compose_maps(outer: GroupMap, inner: GroupMap) -> GroupMap:
    """outer after inner, revalidated (two anti-automorphisms compose to an
    automorphism and vice versa)."""
    if outer.group is not inner.group:
        raise InvalidMap("maps live on different groups")
    kind = (
        "automorphism"
        if outer.kind == inner.kind
        else "anti-automorphism"
    )
    return validate(outer.group, outer.images[inner.images], kind)


def commute(m1: GroupMap, m2: GroupMap) -> bool:
    return bool(np.array_equal(m1.images[m2.images], m2.images[m1.images]))
