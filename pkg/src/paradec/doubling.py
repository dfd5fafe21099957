"""Exact doubling checks on finite domains.

The doubling condition for translating sets S1, S2 asks that
|A1·S1 ∪ A2·S2| >= |A1| + |A2| for all finite A1, A2.  Restricted to
subsets of a finite domain D this is exactly Hall's condition on the
bipartite graph with left side D x {1,2} and right side D·S1 ∪ D·S2, so a
single maximum-matching computation replaces the 4^|D| naive subset checks:
a saturating matching yields an explicit pair of injections (a certificate),
and a deficiency witness yields an explicit violating pair (A1, A2).

:func:`brute_force_check` is the independent oracle: it enumerates all
4^|D| subset pairs outright and reports a minimum-cardinality violator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .cayley import GeneratingSet, enumerate_ball, product_set
from .errors import CertificateError, DomainSizeError
from .groups import Element, GroupSpec
from .matching import UNMATCHED, alternating_reachable, hopcroft_karp

BRUTE_FORCE_MAX_DOMAIN = 14

_POPCOUNT = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)


@dataclass(frozen=True)
class TranslatingSets:
    """The two finite translator lists; elements are distinct within each."""

    s1: tuple[Element, ...]
    s2: tuple[Element, ...]

    def __post_init__(self):
        if not self.s1 or not self.s2:
            raise ValueError("both translating sets must be nonempty")
        if len(set(self.s1)) != len(self.s1) or len(set(self.s2)) != len(self.s2):
            raise ValueError("translators within a set must be distinct")

    @classmethod
    def from_words(
        cls, spec: GroupSpec, s1_words: str, s2_words: str, symbols=None
    ) -> "TranslatingSets":
        """Parse comma-separated word syntax, e.g. ``"1,a"`` and ``"1,b,c"``."""
        def parse_list(text: str) -> tuple[Element, ...]:
            return tuple(
                spec.parse_element(part, symbols) for part in text.split(",")
            )

        return cls(parse_list(s1_words), parse_list(s2_words))

    def total_size(self) -> int:
        return len(self.s1) + len(self.s2)


@dataclass(frozen=True)
class Certificate:
    """Saturating-matching witness: phi_i(g) ∈ g·S_i, both injective, images
    disjoint.  Pairs are sorted by domain element for reproducibility."""

    pairs1: tuple[tuple[Element, Element], ...]
    pairs2: tuple[tuple[Element, Element], ...]

    @property
    def phi1(self) -> dict:
        return dict(self.pairs1)

    @property
    def phi2(self) -> dict:
        return dict(self.pairs2)

    def domain(self) -> frozenset:
        return frozenset(g for g, _ in self.pairs1)


@dataclass(frozen=True)
class Violator:
    """Explicit Hall violator: |A1·S1 ∪ A2·S2| = union_size < |A1| + |A2|."""

    a1: tuple[Element, ...]
    a2: tuple[Element, ...]
    union_size: int


Verdict = Union[Certificate, Violator]


def make_violator(
    spec: GroupSpec,
    ts: TranslatingSets,
    a1: Iterable[Element],
    a2: Iterable[Element],
) -> Violator:
    """Construct a violator, recomputing the union size independently."""
    a1 = tuple(sorted(set(a1), key=spec.element_sort_key))
    a2 = tuple(sorted(set(a2), key=spec.element_sort_key))
    union = product_set(spec, a1, ts.s1) | product_set(spec, a2, ts.s2)
    if len(union) >= len(a1) + len(a2):
        raise ValueError(
            f"not a violator: union size {len(union)} >= {len(a1) + len(a2)}"
        )
    return Violator(a1=a1, a2=a2, union_size=len(union))


def verify_certificate(
    spec: GroupSpec, ts: TranslatingSets, cert: Certificate
) -> None:
    """Re-verify membership, injectivity and image disjointness from scratch.

    Raises :class:`CertificateError` on any failure.
    """
    images: list[set] = []
    for pairs, translators in ((cert.pairs1, ts.s1), (cert.pairs2, ts.s2)):
        image = set()
        for g, target in pairs:
            if target not in {spec.multiply(g, s) for s in translators}:
                raise CertificateError(
                    f"{spec.format_element(target)} is not a translate of "
                    f"{spec.format_element(g)}"
                )
            image.add(target)
        if len(image) != len(pairs):
            raise CertificateError("assignment is not injective")
        images.append(image)
    if images[0] & images[1]:
        raise CertificateError("images of the two assignments intersect")
    if {g for g, _ in cert.pairs1} != {g for g, _ in cert.pairs2}:
        raise CertificateError("the two assignments cover different domains")


def verify_violator(spec: GroupSpec, ts: TranslatingSets, violator: Violator) -> None:
    """Recompute the product-set union and check strict deficiency."""
    union = product_set(spec, violator.a1, ts.s1) | product_set(
        spec, violator.a2, ts.s2
    )
    if len(union) != violator.union_size:
        raise ValueError(
            f"recorded union size {violator.union_size} != recomputed {len(union)}"
        )
    if len(union) >= len(violator.a1) + len(violator.a2):
        raise ValueError("recorded pair does not violate the doubling condition")


def check_domain(
    spec: GroupSpec, ts: TranslatingSets, domain: Iterable[Element]
) -> Verdict:
    """Decide the doubling condition for all A1, A2 ⊆ D with one matching.

    The right-side universe D·S1 ∪ D·S2 is computed exactly in the group,
    never clipped to a patch.  On deficiency, the violator comes from
    alternating reachability and is then shrunk greedily (smaller violators
    are human-checkable; true minimality is brute_force_check's job).
    """
    elements = sorted(set(domain), key=spec.element_sort_key)
    if not elements:
        raise ValueError("domain must be nonempty")
    lefts = [(copy, g) for copy in (1, 2) for g in elements]
    right_index: dict[Element, int] = {}
    right_elements: list[Element] = []
    adjacency: list[list[int]] = []
    for copy, g in lefts:
        row = []
        for s in ts.s1 if copy == 1 else ts.s2:
            w = spec.multiply(g, s)
            j = right_index.get(w)
            if j is None:
                j = len(right_elements)
                right_index[w] = j
                right_elements.append(w)
            row.append(j)
        adjacency.append(row)
    pair_left, pair_right = hopcroft_karp(adjacency, len(right_elements))

    if all(p != UNMATCHED for p in pair_left):
        pairs1 = []
        pairs2 = []
        for (copy, g), j in zip(lefts, pair_left):
            (pairs1 if copy == 1 else pairs2).append((g, right_elements[j]))
        return Certificate(pairs1=tuple(pairs1), pairs2=tuple(pairs2))

    reach_left, _ = alternating_reachable(adjacency, pair_left, pair_right)
    a1 = [g for (copy, g), r in zip(lefts, reach_left) if r and copy == 1]
    a2 = [g for (copy, g), r in zip(lefts, reach_left) if r and copy == 2]
    a1, a2 = _shrink_violator(spec, ts, a1, a2)
    return make_violator(spec, ts, a1, a2)


def _union_size(spec, ts, a1, a2) -> int:
    return len(
        product_set(spec, a1, ts.s1) | product_set(spec, a2, ts.s2)
    )


def _shrink_violator(spec, ts, a1: list, a2: list) -> tuple[list, list]:
    """Drop elements one at a time while the pair still violates."""
    a1 = sorted(a1, key=spec.element_sort_key)
    a2 = sorted(a2, key=spec.element_sort_key)
    for which in (a1, a2):
        for g in list(which):
            which.remove(g)
            if _union_size(spec, ts, a1, a2) >= len(a1) + len(a2):
                which.append(g)
        which.sort(key=spec.element_sort_key)
    return a1, a2


# -- exhaustive oracle ---------------------------------------------------------


def brute_force_check(
    spec: GroupSpec, ts: TranslatingSets, domain: Iterable[Element]
) -> Verdict:
    """Exhaustively test all 4^|D| subset pairs (|D| <= 14).

    Returns a minimum-cardinality violator when one exists, breaking ties
    by the lexicographically least (sorted A1, sorted A2) pair; otherwise a
    certificate found with a plain augmenting-path matching, independent of
    the Hopcroft-Karp path used by :func:`check_domain`.
    """
    elements = sorted(set(domain), key=spec.element_sort_key)
    if not elements:
        raise ValueError("domain must be nonempty")
    n = len(elements)
    if n > BRUTE_FORCE_MAX_DOMAIN:
        raise DomainSizeError(
            f"domain of size {n} exceeds the brute-force bound {BRUTE_FORCE_MAX_DOMAIN}"
        )

    right_index: dict[Element, int] = {}

    def bitmask(g: Element, translators) -> int:
        mask = 0
        for s in translators:
            w = spec.multiply(g, s)
            j = right_index.get(w)
            if j is None:
                j = len(right_index)
                right_index[w] = j
            mask |= 1 << j
        return mask

    masks1 = [bitmask(g, ts.s1) for g in elements]
    masks2 = [bitmask(g, ts.s2) for g in elements]
    num_bits = len(right_index)
    num_bytes = max(1, (num_bits + 7) // 8)

    def to_row(mask: int) -> np.ndarray:
        return np.frombuffer(mask.to_bytes(num_bytes, "little"), dtype=np.uint8)

    rows1 = np.array([to_row(m) for m in masks1], dtype=np.uint8)
    rows2 = np.array([to_row(m) for m in masks2], dtype=np.uint8)

    def subset_unions(rows: np.ndarray) -> np.ndarray:
        unions = np.zeros((1 << n, num_bytes), dtype=np.uint8)
        for m in range(1, 1 << n):
            low = m & -m
            unions[m] = unions[m ^ low] | rows[low.bit_length() - 1]
        return unions

    unions1 = subset_unions(rows1)
    unions2 = subset_unions(rows2)
    sizes = np.array([bin(m).count("1") for m in range(1 << n)], dtype=np.int64)

    best_total = None
    for m1 in range(1 << n):
        union_counts = _POPCOUNT[unions1[m1] | unions2].sum(axis=1, dtype=np.int64)
        violating = union_counts < sizes[m1] + sizes
        if violating.any():
            total = sizes[m1] + int(sizes[violating].min())
            if best_total is None or total < best_total:
                best_total = total

    if best_total is None:
        return _brute_force_certificate(spec, ts, elements)

    best_pair = None
    best_key = None
    from itertools import combinations

    for k1 in range(0, min(n, best_total) + 1):
        k2 = best_total - k1
        if k2 < 0 or k2 > n:
            continue
        combos2 = list(combinations(range(n), k2))
        idx2 = np.array(
            [sum(1 << i for i in combo) for combo in combos2], dtype=np.int64
        )
        block2 = unions2[idx2]
        for combo1 in combinations(range(n), k1):
            m1 = sum(1 << i for i in combo1)
            union_counts = _POPCOUNT[unions1[m1] | block2].sum(axis=1, dtype=np.int64)
            violating = np.flatnonzero(union_counts < k1 + k2)
            if violating.size == 0:
                continue
            combo2 = combos2[int(violating[0])]
            a1 = tuple(elements[i] for i in combo1)
            a2 = tuple(elements[i] for i in combo2)
            key = (
                tuple(spec.element_sort_key(g) for g in a1),
                tuple(spec.element_sort_key(g) for g in a2),
            )
            if best_key is None or key < best_key:
                best_key = key
                best_pair = (a1, a2)
            break  # later combo1 of this size are lexicographically larger
    assert best_pair is not None
    return make_violator(spec, ts, best_pair[0], best_pair[1])


def _brute_force_certificate(
    spec: GroupSpec, ts: TranslatingSets, elements: Sequence[Element]
) -> Certificate:
    """Kuhn's augmenting-path matching; exhaustive scan showed Hall holds,
    so the matching saturates the left side."""
    lefts = [(copy, g) for copy in (1, 2) for g in elements]
    right_index: dict[Element, int] = {}
    right_elements: list[Element] = []
    adjacency = []
    for copy, g in lefts:
        row = []
        for s in ts.s1 if copy == 1 else ts.s2:
            w = spec.multiply(g, s)
            j = right_index.get(w)
            if j is None:
                j = len(right_elements)
                right_index[w] = j
                right_elements.append(w)
            row.append(j)
        adjacency.append(row)
    pair_right = [UNMATCHED] * len(right_elements)
    pair_left = [UNMATCHED] * len(lefts)

    def augment(u: int, visited: list[bool]) -> bool:
        for v in adjacency[u]:
            if visited[v]:
                continue
            visited[v] = True
            if pair_right[v] == UNMATCHED or augment(pair_right[v], visited):
                pair_left[u] = v
                pair_right[v] = u
                return True
        return False

    for u in range(len(lefts)):
        if not augment(u, [False] * len(right_elements)):
            raise AssertionError("Hall condition held but matching failed")
    pairs1 = []
    pairs2 = []
    for (copy, g), j in zip(lefts, pair_left):
        (pairs1 if copy == 1 else pairs2).append((g, right_elements[j]))
    return Certificate(pairs1=tuple(pairs1), pairs2=tuple(pairs2))


def minimal_violating_radius(
    spec: GroupSpec,
    gens: GeneratingSet,
    ts: TranslatingSets,
    max_radius: int,
    vertex_budget: "int | None" = None,
) -> "tuple[int, Violator] | None":
    """Smallest ball radius whose domain admits a violator, or None."""
    if max_radius < 0:
        raise ValueError("max_radius must be nonnegative")
    for radius in range(max_radius + 1):
        patch = enumerate_ball(spec, gens, radius, vertex_budget)
        verdict = check_domain(spec, ts, patch.vertices)
        if isinstance(verdict, Violator):
            return radius, verdict
    return None


# -- serialization -------------------------------------------------------------


def verdict_to_jsonable(spec: GroupSpec, verdict: Verdict) -> dict:
    if isinstance(verdict, Certificate):
        return {
            "kind": "certificate",
            "phi1": [
                [spec.format_element(g), spec.format_element(w)]
                for g, w in verdict.pairs1
            ],
            "phi2": [
                [spec.format_element(g), spec.format_element(w)]
                for g, w in verdict.pairs2
            ],
        }
    return {
        "kind": "violator",
        "a1": [spec.format_element(g) for g in verdict.a1],
        "a2": [spec.format_element(g) for g in verdict.a2],
        "union_size": verdict.union_size,
    }


def verdict_from_jsonable(spec: GroupSpec, data: dict) -> Verdict:
    if data["kind"] == "certificate":
        return Certificate(
            pairs1=tuple(
                (spec.parse_element(g), spec.parse_element(w)) for g, w in data["phi1"]
            ),
            pairs2=tuple(
                (spec.parse_element(g), spec.parse_element(w)) for g, w in data["phi2"]
            ),
        )
    if data["kind"] == "violator":
        return Violator(
            a1=tuple(spec.parse_element(g) for g in data["a1"]),
            a2=tuple(spec.parse_element(g) for g in data["a2"]),
            union_size=data["union_size"],
        )
    raise ValueError(f"unknown verdict kind {data.get('kind')!r}")
