"""Finite balls of right Cayley graphs: labeled edges, distances, product sets.

A :class:`CayleyPatch` is a closed combinatorial window onto the (possibly
infinite) Cayley graph: it stores every product that lands inside the patch
and nothing else.  Exact products that cross the boundary are computed with
:func:`product_set`, which works in the group itself.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ParseError, VertexBudgetError
from .groups import Element, GroupSpec, parse_group_spec, spec_to_string

DEFAULT_VERTEX_BUDGET = 5_000_000
VERTEX_BUDGET_ENV = "PARADEC_VERTEX_BUDGET"

# A directed labeled edge: (source index, symbol, sign, target index).
Edge = "tuple[int, str, int, int]"


def default_vertex_budget() -> int:
    raw = os.environ.get(VERTEX_BUDGET_ENV)
    if raw is None:
        return DEFAULT_VERTEX_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{VERTEX_BUDGET_ENV} must be an integer, got {raw!r}")
    if value < 1:
        raise ValueError(f"{VERTEX_BUDGET_ENV} must be positive")
    return value


def format_label(symbol: str, sign: int) -> str:
    return symbol if sign > 0 else f"{symbol}^-1"


def parse_label(text: str) -> tuple[str, int]:
    if text.endswith("^-1"):
        return text[:-3], -1
    return text, 1


@dataclass(frozen=True)
class GeneratingSet:
    """Named group elements; the symmetrized view S ∪ S⁻¹ is derived on
    demand, collapsing duplicate elements (an involution appears once)."""

    pairs: tuple[tuple[str, Element], ...]

    def __post_init__(self):
        symbols = [sym for sym, _ in self.pairs]
        if len(set(symbols)) != len(symbols):
            raise ValueError("generator symbols must be distinct")
        if not self.pairs:
            raise ValueError("generating set must be nonempty")

    @classmethod
    def standard(cls, spec: GroupSpec) -> "GeneratingSet":
        return cls(spec.standard_generators())

    @classmethod
    def from_pairs(
        cls, spec: GroupSpec, pairs: Iterable[tuple[str, Element]]
    ) -> "GeneratingSet":
        pairs = tuple(pairs)
        for _, element in pairs:
            spec.validate_element(element)
        return cls(pairs)

    def symbols(self) -> tuple[str, ...]:
        return tuple(sym for sym, _ in self.pairs)

    def mapping(self) -> dict[str, Element]:
        return dict(self.pairs)

    def element(self, symbol: str) -> Element:
        for sym, el in self.pairs:
            if sym == symbol:
                return el
        raise KeyError(f"no generator named {symbol!r}")

    def symmetrized(self, spec: GroupSpec) -> tuple[tuple[str, int, Element], ...]:
        view: list[tuple[str, int, Element]] = []
        seen: set[Element] = set()
        for sym, el in self.pairs:
            if el not in seen:
                view.append((sym, 1, el))
                seen.add(el)
        for sym, el in self.pairs:
            inv = spec.invert(el)
            if inv not in seen:
                view.append((sym, -1, inv))
                seen.add(inv)
        return tuple(view)


@dataclass(frozen=True)
class CayleyPatch:
    """Ball of the right Cayley graph; immutable and shareable.

    Vertex 0 is the identity.  ``edges`` holds every labeled product that
    stays inside the patch; the unoriented simple view (no loops, no
    parallel edges) is available via :meth:`simple_edges`.
    """

    spec: GroupSpec
    gens: GeneratingSet
    radius: int
    vertices: tuple[Element, ...]
    distances: tuple[int, ...]
    edges: tuple[tuple[int, str, int, int], ...]
    _index: dict = field(init=False, repr=False, compare=False, default=None)
    _simple: "tuple[tuple[int, int], ...] | None" = field(
        init=False, repr=False, compare=False, default=None
    )

    def __post_init__(self):
        object.__setattr__(
            self, "_index", {v: i for i, v in enumerate(self.vertices)}
        )

    def __len__(self) -> int:
        return len(self.vertices)

    def index_of(self, element: Element) -> int:
        return self._index[element]

    def __contains__(self, element: Element) -> bool:
        return element in self._index

    def simple_edges(self) -> tuple[tuple[int, int], ...]:
        """Unoriented simple graph: loops dropped, parallel edges collapsed."""
        if self._simple is None:
            seen = {
                (min(u, v), max(u, v))
                for u, _, _, v in self.edges
                if u != v
            }
            object.__setattr__(self, "_simple", tuple(sorted(seen)))
        return self._simple

    def sphere_sizes(self) -> list[int]:
        counts = [0] * (self.radius + 1)
        for d in self.distances:
            counts[d] += 1
        return counts

    # -- exports -----------------------------------------------------------

    def to_jsonable(self) -> dict:
        return {
            "group": spec_to_string(self.spec),
            "generators": [
                [sym, self.spec.format_element(el)] for sym, el in self.gens.pairs
            ],
            "radius": self.radius,
            "vertices": [self.spec.format_element(v) for v in self.vertices],
            "distances": list(self.distances),
            "edges": [
                [u, format_label(sym, sign), v] for u, sym, sign, v in self.edges
            ],
        }

    def to_edge_list_text(self) -> str:
        lines = [
            f"# patch group={spec_to_string(self.spec)} radius={self.radius} "
            f"vertices={len(self.vertices)} edges={len(self.edges)}"
        ]
        for i, v in enumerate(self.vertices):
            lines.append(f"# vertex\t{i}\t{self.spec.format_element(v)}\t{self.distances[i]}")
        for u, sym, sign, v in self.edges:
            lines.append(f"{u}\t{format_label(sym, sign)}\t{v}")
        return "\n".join(lines) + "\n"


def patch_from_jsonable(data: dict) -> CayleyPatch:
    spec = parse_group_spec(data["group"])
    gens = GeneratingSet.from_pairs(
        spec, [(sym, spec.parse_element(text)) for sym, text in data["generators"]]
    )
    vertices = tuple(spec.parse_element(text) for text in data["vertices"])
    edges = []
    for u, label, v in data["edges"]:
        sym, sign = parse_label(label)
        edges.append((u, sym, sign, v))
    return CayleyPatch(
        spec=spec,
        gens=gens,
        radius=data["radius"],
        vertices=vertices,
        distances=tuple(data["distances"]),
        edges=tuple(edges),
    )


def enumerate_ball(
    spec: GroupSpec,
    gens: GeneratingSet,
    radius: int,
    vertex_budget: "int | None" = None,
) -> CayleyPatch:
    """All elements of word length <= radius w.r.t. S ∪ S⁻¹, with every
    in-patch labeled edge.

    BFS order is deterministic: levels are sorted by the spec's element
    order, so identical inputs index vertices identically.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    budget = default_vertex_budget() if vertex_budget is None else vertex_budget
    view = gens.symmetrized(spec)
    identity = spec.identity()
    vertices: list[Element] = [identity]
    distance: dict[Element, int] = {identity: 0}
    frontier = [identity]
    for level in range(1, radius + 1):
        discovered: set[Element] = set()
        for u in frontier:
            for _, _, s in view:
                v = spec.multiply(u, s)
                if v not in distance:
                    discovered.add(v)
        frontier = sorted(discovered, key=spec.element_sort_key)
        for v in frontier:
            distance[v] = level
        vertices.extend(frontier)
        if len(vertices) > budget:
            raise VertexBudgetError(
                f"ball of radius {level} exceeds the vertex budget {budget}"
            )
        if not frontier:
            break
    index = {v: i for i, v in enumerate(vertices)}
    edges = []
    for i, u in enumerate(vertices):
        for sym, sign, s in view:
            v = spec.multiply(u, s)
            j = index.get(v)
            if j is not None:
                edges.append((i, sym, sign, j))
    distances = tuple(distance[v] for v in vertices)
    return CayleyPatch(
        spec=spec,
        gens=gens,
        radius=radius,
        vertices=tuple(vertices),
        distances=distances,
        edges=tuple(edges),
    )


def sphere_sizes(
    spec: GroupSpec,
    gens: GeneratingSet,
    radius: int,
    vertex_budget: "int | None" = None,
) -> list[int]:
    """Vertex counts at each exact distance 0..radius; sums to the ball size."""
    patch = enumerate_ball(spec, gens, radius, vertex_budget)
    return patch.sphere_sizes()


def product_set(
    spec: GroupSpec, elements: Iterable[Element], translators: Iterable[Element]
) -> frozenset:
    """Exact right product set {a·s : a ∈ A, s ∈ S}, computed in the group."""
    translators = tuple(translators)
    return frozenset(
        spec.multiply(a, s) for a in elements for s in translators
    )
