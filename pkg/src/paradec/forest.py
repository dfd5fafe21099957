"""Spanning forests on finite patches and the counting-argument audit.

Sampling is Wilson's loop-erased-random-walk algorithm, which draws exactly
uniform spanning trees.  Forests required to contain a fixed acyclic edge
set are sampled by contracting that set and sampling the contracted
multigraph; the matrix-tree correspondence makes the lifted tree uniform
among trees containing the required edges.

The audit replays, on one concrete forest and concrete finite sets A1, A2,
the counting chain that derives |A1S1 ∪ A2S2| >= |A1| + |A2| from a forest
containing all a-edges with enough degree on A2: directed edge sets E, E1,
E2, E3 are built explicitly, the auxiliary graph Λ on A1S1 ∪ A2S2 with
edges E2 ∪ E3 is checked to be a forest, and every inequality is recorded
with its actual values.

Everything is a finite surrogate: degrees of boundary vertices are
depressed, so callers keep A1, A2 in the patch interior.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .cayley import CayleyPatch, GeneratingSet, product_set
from .doubling import TranslatingSets
from .errors import (
    DisconnectedGraphError,
    PatchEscapeError,
    RequiredEdgesCycleError,
)
from .groups import Element, GroupSpec


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[ry] = rx
        return True


@dataclass(frozen=True)
class ForestSample:
    """An acyclic edge subset of a simple graph, with degrees and the seed.

    Acyclicity is checked with union-find at construction time.  ``patch``
    is set when the sample was drawn from a Cayley patch; synthetic graphs
    leave it as None.
    """

    num_vertices: int
    edges: tuple[tuple[int, int], ...]
    degrees: tuple[int, ...]
    seed: int
    patch: "CayleyPatch | None" = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        uf = _UnionFind(self.num_vertices)
        degrees = [0] * self.num_vertices
        for u, v in self.edges:
            if not uf.union(u, v):
                raise ValueError(f"edge ({u}, {v}) closes a cycle")
            degrees[u] += 1
            degrees[v] += 1
        if tuple(degrees) != self.degrees:
            raise ValueError("degree array does not match the edge set")

    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def num_components(self) -> int:
        return self.num_vertices - len(self.edges)

    def is_spanning_tree(self) -> bool:
        return self.num_components() == 1

    def to_edge_list_text(self) -> str:
        lines = [
            f"# forest seed={self.seed} vertices={self.num_vertices} "
            f"edges={len(self.edges)}"
        ]
        lines.extend(f"{u}\t{v}" for u, v in self.edges)
        return "\n".join(lines) + "\n"

    def to_jsonable(self) -> dict:
        return {
            "num_vertices": self.num_vertices,
            "edges": [list(e) for e in self.edges],
            "degrees": list(self.degrees),
            "seed": self.seed,
        }


def forest_from_jsonable(data: dict, patch: "CayleyPatch | None" = None) -> ForestSample:
    return ForestSample(
        num_vertices=data["num_vertices"],
        edges=tuple((u, v) for u, v in data["edges"]),
        degrees=tuple(data["degrees"]),
        seed=data["seed"],
        patch=patch,
    )


def _make_sample(num_vertices, edges, seed, patch=None) -> ForestSample:
    edges = tuple(sorted((min(u, v), max(u, v)) for u, v in edges))
    degrees = [0] * num_vertices
    for u, v in edges:
        degrees[u] += 1
        degrees[v] += 1
    return ForestSample(
        num_vertices=num_vertices,
        edges=edges,
        degrees=tuple(degrees),
        seed=seed,
        patch=patch,
    )


def _check_connected(num_vertices: int, edges: Sequence[tuple[int, int]]) -> None:
    uf = _UnionFind(num_vertices)
    components = num_vertices
    for u, v in edges:
        if uf.union(u, v):
            components -= 1
    if components != 1:
        raise DisconnectedGraphError(
            f"graph has {components} components; spanning trees need 1"
        )


def _wilson(
    num_vertices: int,
    multigraph_edges: Sequence[tuple[int, int]],
    rng: random.Random,
) -> list[int]:
    """Uniform spanning tree of a connected multigraph; returns edge ids.

    Wilson's algorithm: walk from each vertex toward the growing tree,
    recording the last exit taken from every vertex; following those exits
    afterwards is exactly the loop-erased path.
    """
    incident: list[list[tuple[int, int]]] = [[] for _ in range(num_vertices)]
    for eid, (u, v) in enumerate(multigraph_edges):
        incident[u].append((eid, v))
        incident[v].append((eid, u))
    in_tree = [False] * num_vertices
    in_tree[0] = True
    exit_choice: list[tuple[int, int]] = [(-1, -1)] * num_vertices
    tree_edges: list[int] = []
    for start in range(1, num_vertices):
        u = start
        while not in_tree[u]:
            eid, w = incident[u][rng.randrange(len(incident[u]))]
            exit_choice[u] = (eid, w)
            u = w
        u = start
        while not in_tree[u]:
            in_tree[u] = True
            eid, w = exit_choice[u]
            tree_edges.append(eid)
            u = w
    return tree_edges


def sample_spanning_tree_of_graph(
    num_vertices: int,
    edges: Sequence[tuple[int, int]],
    seed: int,
) -> ForestSample:
    """Uniform spanning tree of an arbitrary connected simple graph."""
    _check_connected(num_vertices, edges)
    rng = random.Random(seed)
    chosen = _wilson(num_vertices, list(edges), rng)
    return _make_sample(num_vertices, [edges[i] for i in chosen], seed)


def sample_spanning_tree_with_required_edges(
    num_vertices: int,
    edges: Sequence[tuple[int, int]],
    required: Sequence[tuple[int, int]],
    seed: int,
) -> ForestSample:
    """Uniform spanning tree among those containing every required edge.

    The required edges are contracted (they must be acyclic), a uniform
    spanning tree of the contracted multigraph is drawn, and its edges are
    lifted back.  Parallel edges of the contraction stay distinct, which is
    what keeps the lifted distribution uniform; self-loops are dropped since
    no spanning tree can use them.
    """
    required = [(min(u, v), max(u, v)) for u, v in required]
    required_set = set(required)
    uf = _UnionFind(num_vertices)
    for u, v in required:
        if not uf.union(u, v):
            raise RequiredEdgesCycleError(
                f"required edges close a cycle at ({u}, {v})"
            )
    roots = sorted({uf.find(x) for x in range(num_vertices)})
    block = {root: i for i, root in enumerate(roots)}
    contracted: list[tuple[int, int]] = []
    originals: list[tuple[int, int]] = []
    for u, v in edges:
        key = (min(u, v), max(u, v))
        if key in required_set:
            continue
        cu, cv = block[uf.find(u)], block[uf.find(v)]
        if cu == cv:
            continue
        contracted.append((cu, cv))
        originals.append(key)
    _check_connected(len(roots), contracted)
    rng = random.Random(seed)
    chosen = _wilson(len(roots), contracted, rng)
    picked = [originals[i] for i in chosen] + required
    return _make_sample(num_vertices, picked, seed)


def patch_a_edges(patch: CayleyPatch, a_symbol: str) -> tuple[tuple[int, int], ...]:
    """In-patch unoriented simple edges whose label element is a or a⁻¹."""
    pairs = {
        (min(u, v), max(u, v))
        for u, sym, _, v in patch.edges
        if sym == a_symbol and u != v
    }
    return tuple(sorted(pairs))


def sample_uniform_spanning_tree(patch: CayleyPatch, seed: int) -> ForestSample:
    """Uniform spanning tree of a patch's unoriented simple graph."""
    sample = sample_spanning_tree_of_graph(
        len(patch.vertices), patch.simple_edges(), seed
    )
    return _make_sample(sample.num_vertices, sample.edges, seed, patch)


def sample_forest_containing_a_edges(
    patch: CayleyPatch, a_symbol: str, seed: int
) -> ForestSample:
    """Uniform spanning tree of the patch containing every a±1-labeled edge.

    Requires the in-patch a-edge set to be acyclic, which holds whenever the
    labeled element has infinite order; a cycle signals torsion-like
    behaviour and raises :class:`RequiredEdgesCycleError`.
    """
    if a_symbol not in patch.gens.symbols():
        raise KeyError(f"no generator named {a_symbol!r} in the patch")
    required = patch_a_edges(patch, a_symbol)
    sample = sample_spanning_tree_with_required_edges(
        len(patch.vertices), patch.simple_edges(), required, seed
    )
    return _make_sample(sample.num_vertices, sample.edges, seed, patch)


# -- counting-argument audit ---------------------------------------------------

# A directed labeled edge at element level: (source, symbol, sign, target).
DirectedEdge = "tuple[Element, str, int, Element]"


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    lhs: int
    rhs: int
    relation: str
    passed: bool

    def to_jsonable(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "relation": self.relation,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class ForestAudit:
    """The explicit edge sets and the verified inequality ledger."""

    a1: tuple[Element, ...]
    a2: tuple[Element, ...]
    e: tuple
    e1: tuple
    e2: tuple
    e3: tuple
    lambda_vertices: tuple[Element, ...]
    lambda_edges: tuple[tuple[Element, Element], ...]
    ledger: tuple[InequalityCheck, ...]

    @property
    def all_passed(self) -> bool:
        return all(check.passed for check in self.ledger)

    def check(self, name: str) -> InequalityCheck:
        for entry in self.ledger:
            if entry.name == name:
                return entry
        raise KeyError(name)

    def to_jsonable(self, spec: GroupSpec) -> dict:
        def edge_list(edges):
            return [
                [
                    spec.format_element(g),
                    sym,
                    sign,
                    spec.format_element(target),
                ]
                for g, sym, sign, target in edges
            ]

        return {
            "a1": [spec.format_element(g) for g in self.a1],
            "a2": [spec.format_element(g) for g in self.a2],
            "e": edge_list(self.e),
            "e1": edge_list(self.e1),
            "e2": edge_list(self.e2),
            "e3": edge_list(self.e3),
            "lambda_vertices": [
                spec.format_element(v) for v in self.lambda_vertices
            ],
            "lambda_edges": [
                [spec.format_element(u), spec.format_element(v)]
                for u, v in self.lambda_edges
            ],
            "ledger": [check.to_jsonable() for check in self.ledger],
            "all_passed": self.all_passed,
        }


def audit_from_jsonable(spec: GroupSpec, data: dict) -> ForestAudit:
    def edges(items):
        return tuple(
            (spec.parse_element(g), sym, sign, spec.parse_element(t))
            for g, sym, sign, t in items
        )

    return ForestAudit(
        a1=tuple(spec.parse_element(g) for g in data["a1"]),
        a2=tuple(spec.parse_element(g) for g in data["a2"]),
        e=edges(data["e"]),
        e1=edges(data["e1"]),
        e2=edges(data["e2"]),
        e3=edges(data["e3"]),
        lambda_vertices=tuple(
            spec.parse_element(v) for v in data["lambda_vertices"]
        ),
        lambda_edges=tuple(
            (spec.parse_element(u), spec.parse_element(v))
            for u, v in data["lambda_edges"]
        ),
        ledger=tuple(
            InequalityCheck(
                name=c["name"],
                lhs=c["lhs"],
                rhs=c["rhs"],
                relation=c["relation"],
                passed=c["passed"],
            )
            for c in data["ledger"]
        ),
    )


def _identify_triple(
    spec: GroupSpec, gens: GeneratingSet, ts: TranslatingSets
) -> tuple[str, str, str]:
    """Match S1 = {1, a}, S2 = {1, b, c} against a named generating triple."""
    if len(gens.pairs) != 3:
        raise ValueError("the audit needs a generating triple (a, b, c)")
    elements = [el for _, el in gens.pairs]
    if len(set(elements)) != 3 or spec.identity() in elements:
        raise ValueError("generating triple must be three distinct non-identity elements")
    identity = spec.identity()
    if len(ts.s1) != 2 or identity not in ts.s1:
        raise ValueError("S1 must have the shape {1, a}")
    if len(ts.s2) != 3 or identity not in ts.s2:
        raise ValueError("S2 must have the shape {1, b, c}")
    a_elem = next(s for s in ts.s1 if s != identity)
    rest = {s for s in ts.s2 if s != identity}
    by_element = {el: sym for sym, el in gens.pairs}
    if a_elem not in by_element:
        raise ValueError("the S1 translator must be one of the named generators")
    if rest != set(by_element) - {a_elem}:
        raise ValueError("S2 must consist of 1 and the two remaining generators")
    a_sym = by_element[a_elem]
    b_sym, c_sym = sorted(by_element[el] for el in rest)
    return a_sym, b_sym, c_sym


def audit_counting_argument(
    forest: ForestSample,
    a1: Iterable[Element],
    a2: Iterable[Element],
    ts: TranslatingSets,
    gens: GeneratingSet,
) -> ForestAudit:
    """Replay the forest counting chain on concrete data.

    The degree hypothesis |E| >= 5|A2| is recorded like every other entry:
    it holds on patches whose interior degree is at least 5 (a rank-3 tree
    gives 6) and honestly fails elsewhere, in which case the dependent
    entries may fail too while the structural ones still hold.
    """
    if forest.patch is None:
        raise ValueError("the audit needs a forest sampled from a Cayley patch")
    patch = forest.patch
    spec = patch.spec
    a_sym, _, _ = _identify_triple(spec, gens, ts)
    a_elem = gens.element(a_sym)
    a1 = sorted(set(a1), key=spec.element_sort_key)
    a2 = sorted(set(a2), key=spec.element_sort_key)
    if not a1 and not a2:
        raise ValueError("A1 and A2 must not both be empty")
    for g in a1 + a2:
        if g not in patch:
            raise PatchEscapeError(
                f"element {spec.format_element(g)} is not a patch vertex"
            )

    view = gens.symmetrized(spec)
    s_elements = {el for _, el in gens.pairs}
    s_diff_sinv = {el for el in s_elements if spec.invert(el) not in s_elements}
    bc_elements = {s for s in ts.s2 if s != spec.identity()}

    # Escape checks: A2 needs its whole symmetrized star, A1 its a-translate.
    for g in a2:
        for sym, sign, t in view:
            if spec.multiply(g, t) not in patch:
                raise PatchEscapeError(
                    f"product of {spec.format_element(g)} with "
                    f"{sym}^{sign} leaves the patch; shrink A2 or grow the patch"
                )
    for g in a1:
        if spec.multiply(g, a_elem) not in patch:
            raise PatchEscapeError(
                f"a-translate of {spec.format_element(g)} leaves the patch"
            )

    forest_edges = forest.edge_set()

    def in_forest(g: Element, target: Element) -> bool:
        i, j = patch.index_of(g), patch.index_of(target)
        return (min(i, j), max(i, j)) in forest_edges

    e_edges = []
    for g in a2:
        for sym, sign, t in view:
            target = spec.multiply(g, t)
            if target != g and in_forest(g, target):
                e_edges.append((g, sym, sign, t, target))
    e1_edges = [edge for edge in e_edges if edge[3] in s_diff_sinv]
    e2_edges = [edge for edge in e_edges if edge[3] in bc_elements and edge[3] in s_diff_sinv]

    e3_edges = []
    for g in a1:
        target = spec.multiply(g, a_elem)
        if not in_forest(g, target):
            raise ValueError(
                f"forest is missing the a-edge at {spec.format_element(g)}; "
                "sample with the a-edge constraint first"
            )
        e3_edges.append((g, a_sym, 1, a_elem, target))

    lambda_vertices = sorted(
        product_set(spec, a1, ts.s1) | product_set(spec, a2, ts.s2),
        key=spec.element_sort_key,
    )
    directed2 = {(g, target) for g, _, _, _, target in e2_edges}
    directed3 = {(g, target) for g, _, _, _, target in e3_edges}
    lambda_edge_set = {
        tuple(sorted((g, target), key=spec.element_sort_key))
        for g, target in directed2 | directed3
    }
    lambda_edges = sorted(
        lambda_edge_set, key=lambda e: tuple(map(spec.element_sort_key, e))
    )

    opposite_pairs = sum(
        1
        for g, target in directed2 | directed3
        if (target, g) in directed2 or (target, g) in directed3
    ) // 2

    vertex_index = {v: i for i, v in enumerate(lambda_vertices)}
    uf = _UnionFind(len(lambda_vertices))
    lambda_components = len(lambda_vertices)
    acyclic = True
    for u, v in lambda_edges:
        if uf.union(vertex_index[u], vertex_index[v]):
            lambda_components -= 1
        else:
            acyclic = False

    n_e, n_e1, n_e2, n_e3 = len(e_edges), len(e1_edges), len(e2_edges), len(e3_edges)
    n_v, n_le = len(lambda_vertices), len(lambda_edges)
    size_s = len(gens.pairs)

    checks = [
        InequalityCheck("degree_sum", n_e, 5 * len(a2), ">=", n_e >= 5 * len(a2)),
        InequalityCheck(
            "e1_lower", n_e1, n_e - size_s * len(a2), ">=", n_e1 >= n_e - size_s * len(a2)
        ),
        InequalityCheck(
            "e1_at_least_twice_a2", n_e1, 2 * len(a2), ">=", n_e1 >= 2 * len(a2)
        ),
        InequalityCheck("e2_lower", n_e2, n_e1 - len(a2), ">=", n_e2 >= n_e1 - len(a2)),
        InequalityCheck("e2_at_least_a2", n_e2, len(a2), ">=", n_e2 >= len(a2)),
        InequalityCheck("e3_counts_a1", n_e3, len(a1), "==", n_e3 == len(a1)),
        InequalityCheck(
            "e2_e3_disjoint", len(directed2 & directed3), 0, "==", not directed2 & directed3
        ),
        InequalityCheck(
            "no_opposite_pairs", opposite_pairs, 0, "==", opposite_pairs == 0
        ),
        InequalityCheck(
            "lambda_edge_count", n_le, n_e2 + n_e3, "==", n_le == n_e2 + n_e3
        ),
        InequalityCheck(
            "lambda_forest",
            n_le,
            n_v - lambda_components,
            "==",
            acyclic and n_le == n_v - lambda_components,
        ),
        InequalityCheck("vertices_exceed_edges", n_v, n_le, ">", n_v > n_le),
        InequalityCheck(
            "doubling_conclusion",
            n_v,
            len(a1) + len(a2),
            ">=",
            n_v >= len(a1) + len(a2),
        ),
    ]

    def strip(edges):
        return tuple((g, sym, sign, target) for g, sym, sign, _, target in edges)

    return ForestAudit(
        a1=tuple(a1),
        a2=tuple(a2),
        e=strip(e_edges),
        e1=strip(e1_edges),
        e2=strip(e2_edges),
        e3=strip(e3_edges),
        lambda_vertices=tuple(lambda_vertices),
        lambda_edges=tuple(lambda_edges),
        ledger=tuple(checks),
    )


@dataclass(frozen=True)
class DegreeStatistics:
    """Forest degree sums over A2 across conditioned samples."""

    num_samples: int
    seed: int
    a2_size: int
    mean: float
    min: int
    max: int
    threshold: int
    meets_threshold: bool

    def to_jsonable(self) -> dict:
        return {
            "num_samples": self.num_samples,
            "seed": self.seed,
            "a2_size": self.a2_size,
            "mean": self.mean,
            "min": self.min,
            "max": self.max,
            "threshold": self.threshold,
            "meets_threshold": self.meets_threshold,
        }


def degree_statistics(
    patch: CayleyPatch,
    a_symbol: str,
    a2: Iterable[Element],
    num_samples: int,
    seed: int,
) -> DegreeStatistics:
    """Mean/min/max of sum(deg_F(g) for g in A2) over conditioned samples,
    against the threshold 5|A2|.

    A2 must lie in the patch interior (all symmetrized neighbours present),
    since boundary vertices have artificially depressed degrees.
    """
    if num_samples < 1:
        raise ValueError("need at least one sample")
    spec = patch.spec
    a2 = sorted(set(a2), key=spec.element_sort_key)
    view = patch.gens.symmetrized(spec)
    indices = []
    for g in a2:
        if g not in patch:
            raise PatchEscapeError(f"{spec.format_element(g)} is not a patch vertex")
        for sym, sign, t in view:
            if spec.multiply(g, t) not in patch:
                raise PatchEscapeError(
                    f"{spec.format_element(g)} is not interior: its "
                    f"{sym}^{sign} neighbour leaves the patch"
                )
        indices.append(patch.index_of(g))
    sums = []
    for i in range(num_samples):
        sample = sample_forest_containing_a_edges(patch, a_symbol, seed + i)
        sums.append(sum(sample.degrees[j] for j in indices))
    threshold = 5 * len(a2)
    mean = sum(sums) / len(sums)
    return DegreeStatistics(
        num_samples=num_samples,
        seed=seed,
        a2_size=len(a2),
        mean=mean,
        min=min(sums),
        max=max(sums),
        threshold=threshold,
        meets_threshold=mean >= threshold,
    )
