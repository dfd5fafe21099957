"""Decomposition pieces from certificates, verification, and Tarski bounds.

Everything here follows the right-product convention: a family of pieces
indexed by translators s covers a domain D when every g in D has g·s in
the piece of some s, i.e. the right translates piece[s]·s⁻¹ jointly
contain D.  (The classical left-translate formulation is carried over by
the inversion anti-isomorphism g -> g⁻¹.)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .cayley import product_set
from .doubling import Certificate, TranslatingSets, Verdict, verify_certificate
from .errors import CertificateError
from .groups import Element, GroupSpec

TARSKI_FLOOR = 4


@dataclass(frozen=True)
class PartialDecomposition:
    """Disjoint pieces indexed by translator, built over a finite domain.

    Piece contents may lie outside the domain (products escape any finite
    window); coverage is always asserted through translates, never through
    membership of the pieces themselves.
    """

    pieces1: tuple[tuple[Element, frozenset], ...]
    pieces2: tuple[tuple[Element, frozenset], ...]
    domain: frozenset

    def pieces1_map(self) -> dict:
        return dict(self.pieces1)

    def pieces2_map(self) -> dict:
        return dict(self.pieces2)

    def nonempty_piece_count(self) -> int:
        return sum(
            1 for _, piece in self.pieces1 + self.pieces2 if piece
        )


@dataclass(frozen=True)
class DecompositionReport:
    """Outcome of verifying a decomposition against its contract.

    ``overlaps`` lists elements sitting in more than one piece.  Uncovered
    elements are hard failures; ``indeterminate`` elements are boundary
    vertices whose translates leave the domain window, reported separately
    and never counted as failures.
    """

    disjoint: bool
    overlaps: tuple[Element, ...]
    uncovered1: tuple[Element, ...]
    uncovered2: tuple[Element, ...]
    indeterminate1: tuple[Element, ...]
    indeterminate2: tuple[Element, ...]

    @property
    def passed(self) -> bool:
        return self.disjoint and not self.uncovered1 and not self.uncovered2


def _sorted_pieces(
    spec: GroupSpec, translators: Sequence[Element], pieces: Mapping[Element, Iterable]
) -> tuple[tuple[Element, frozenset], ...]:
    return tuple((s, frozenset(pieces.get(s, ()))) for s in translators)


def make_decomposition(
    spec: GroupSpec,
    ts: TranslatingSets,
    pieces1: Mapping[Element, Iterable],
    pieces2: Mapping[Element, Iterable],
    domain: Iterable[Element],
) -> PartialDecomposition:
    for key in list(pieces1) + list(pieces2):
        if key not in ts.s1 and key not in ts.s2:
            raise ValueError(
                f"piece key {spec.format_element(key)} is not a translator"
            )
    return PartialDecomposition(
        pieces1=_sorted_pieces(spec, ts.s1, pieces1),
        pieces2=_sorted_pieces(spec, ts.s2, pieces2),
        domain=frozenset(domain),
    )


def pieces_from_certificate(
    spec: GroupSpec, cert: Certificate, ts: TranslatingSets
) -> PartialDecomposition:
    """Bucket phi_i targets by the translator that produced them.

    piece_i[s] = {g·s : g in D, phi_i(g) = g·s}.  Disjointness and coverage
    follow from the certificate properties but are re-verified, not assumed.
    """
    verify_certificate(spec, ts, cert)
    domain = cert.domain()

    def bucket(pairs, translators):
        pieces: dict[Element, set] = {s: set() for s in translators}
        for g, target in pairs:
            s = spec.multiply(spec.invert(g), target)
            if s not in pieces:
                raise CertificateError(
                    f"image {spec.format_element(target)} is not a translate "
                    f"of {spec.format_element(g)} by a translator"
                )
            pieces[s].add(target)
        return pieces

    pd = make_decomposition(
        spec, ts, bucket(cert.pairs1, ts.s1), bucket(cert.pairs2, ts.s2), domain
    )
    report = verify_decomposition(spec, pd, ts, domain)
    if not report.passed:
        raise CertificateError(
            "certificate produced pieces that fail verification; "
            f"overlaps={len(report.overlaps)} "
            f"uncovered={len(report.uncovered1) + len(report.uncovered2)}"
        )
    return pd


def verify_decomposition(
    spec: GroupSpec,
    pd: PartialDecomposition,
    ts: TranslatingSets,
    inner: Iterable[Element],
) -> DecompositionReport:
    """Check pairwise disjointness and translate-coverage of ``inner``.

    An inner element g counts as covered by family i when g·s lies in the
    piece of some translator s.  If it is not covered but one of its
    translates leaves the domain, the finite window simply cannot decide it:
    such g are reported as indeterminate rather than failed.
    """
    inner = set(inner)
    if not inner <= pd.domain:
        raise ValueError("inner set must be contained in the decomposition domain")

    counts: dict[Element, int] = {}
    for _, piece in pd.pieces1 + pd.pieces2:
        for x in piece:
            counts[x] = counts.get(x, 0) + 1
    overlaps = tuple(
        sorted((x for x, c in counts.items() if c > 1), key=spec.element_sort_key)
    )

    def coverage(pieces: tuple[tuple[Element, frozenset], ...]):
        uncovered = []
        indeterminate = []
        piece_of = dict(pieces)
        for g in sorted(inner, key=spec.element_sort_key):
            translates = [(s, spec.multiply(g, s)) for s, _ in pieces]
            if any(target in piece_of[s] for s, target in translates):
                continue
            if all(target in pd.domain for _, target in translates):
                uncovered.append(g)
            else:
                indeterminate.append(g)
        return tuple(uncovered), tuple(indeterminate)

    uncovered1, indeterminate1 = coverage(pd.pieces1)
    uncovered2, indeterminate2 = coverage(pd.pieces2)
    return DecompositionReport(
        disjoint=not overlaps,
        overlaps=overlaps,
        uncovered1=uncovered1,
        uncovered2=uncovered2,
        indeterminate1=indeterminate1,
        indeterminate2=indeterminate2,
    )


def first_letter_translators() -> TranslatingSets:
    """The translating sets {1, a}, {1, b} the classical witness targets."""
    return TranslatingSets(s1=((), (1,)), s2=((), (2,)))


def first_letter_pieces(rank: int, domain: Iterable[Element]) -> PartialDecomposition:
    """Classical free-group witness for translating sets {1,a}, {1,b}.

    In the right-product convention the first-letter classes become
    last-letter classes: with V(x) = reduced words ending in the letter x,
    the pieces are V(a⁻¹) and V(a) for family 1 (and b likewise), because
    any word not ending in a⁻¹ gains a final a when multiplied by a.  The
    construction ignores letters beyond the first two, so it is
    rank-agnostic above 2.
    """
    if rank < 2:
        raise ValueError("a non-abelian free group needs rank >= 2")
    from .groups import free_group

    spec = free_group(rank)
    domain = frozenset(domain)
    for w in domain:
        spec.validate_element(w)
    a, b = (1,), (2,)
    ts = first_letter_translators()

    def ends_with(letter: int) -> frozenset:
        return frozenset(w for w in domain if w and w[-1] == letter)

    return make_decomposition(
        spec,
        ts,
        {spec.identity(): ends_with(-1), a: ends_with(1)},
        {spec.identity(): ends_with(-2), b: ends_with(2)},
        domain,
    )


@dataclass(frozen=True)
class FreenessResult:
    """Outcome of the exhaustive short-relation search.

    ``witness`` is the shortest nonempty reduced word in g, h evaluating to
    the identity, as (symbol, sign) pairs over the names "g" and "h", or
    None when every word up to the length bound is nontrivial.
    """

    free_up_to: int
    witness: "tuple[tuple[str, int], ...] | None"

    @property
    def free(self) -> bool:
        return self.witness is None

    def witness_text(self) -> "str | None":
        if self.witness is None:
            return None
        return " ".join(
            name if sign > 0 else f"{name}^-1" for name, sign in self.witness
        )


def free_up_to_length(
    spec: GroupSpec, g: Element, h: Element, length: int
) -> FreenessResult:
    """True freeness evidence up to ``length``: every nonempty reduced word
    in {g±1, h±1} of that length or less must miss the identity.

    Enumeration is depth-first over reduced words (last-letter exclusion
    avoids the 4^L unreduced blowup), run length by length so the witness
    returned is shortest, and lexicographically first among those in the
    letter order g, g⁻¹, h, h⁻¹.
    """
    if length < 1:
        raise ValueError("length bound must be at least 1")
    letters = (
        ("g", 1, g),
        ("g", -1, spec.invert(g)),
        ("h", 1, h),
        ("h", -1, spec.invert(h)),
    )
    identity = spec.identity()

    def dfs(prefix, value, remaining):
        if remaining == 0:
            return prefix if value == identity else None
        last = prefix[-1] if prefix else None
        for name, sign, element in letters:
            if last is not None and last == (name, -sign):
                continue
            found = dfs(
                prefix + [(name, sign)], spec.multiply(value, element), remaining - 1
            )
            if found is not None:
                return found
        return None

    for target in range(1, length + 1):
        witness = dfs([], identity, target)
        if witness is not None:
            return FreenessResult(free_up_to=length, witness=tuple(witness))
    return FreenessResult(free_up_to=length, witness=None)


@dataclass(frozen=True)
class TarskiBoundReport:
    """Bounds supported by finite-domain evidence only.

    ``upper`` is the least m+n over verified certificate families with at
    least two translators on each side (a paradoxical decomposition forces
    m, n >= 2, so smaller families say nothing about the group).  ``lower``
    is always the universal floor 4.
    """

    upper: "int | None"
    lower: int
    justification: tuple[str, ...]

    def __post_init__(self):
        if self.lower < TARSKI_FLOOR:
            raise ValueError("the Tarski lower bound is never below 4")
        if self.upper is not None and self.upper < self.lower:
            raise ValueError("upper bound below lower bound")

    def to_jsonable(self) -> dict:
        return {
            "upper": self.upper,
            "lower": self.lower,
            "justification": list(self.justification),
        }


def report_from_jsonable(data: dict) -> TarskiBoundReport:
    return TarskiBoundReport(
        upper=data["upper"],
        lower=data["lower"],
        justification=tuple(data["justification"]),
    )


def tarski_bound_report(
    certificates: Sequence[tuple[TranslatingSets, frozenset, Verdict]],
    freeness: "FreenessResult | None" = None,
) -> TarskiBoundReport:
    """Aggregate certificate families and freeness evidence into bounds.

    Every conclusion is labeled as finite-domain evidence; no group-level
    value is ever asserted.
    """
    notes = ["all bounds rest on finite-domain evidence only"]
    upper = None
    for ts, domain, verdict in certificates:
        if not isinstance(verdict, Certificate):
            continue
        total = ts.total_size()
        if len(ts.s1) < 2 or len(ts.s2) < 2:
            notes.append(
                f"ignored certificate with {len(ts.s1)}+{len(ts.s2)} translators: "
                "a paradoxical decomposition needs at least 2 on each side"
            )
            continue
        notes.append(
            f"certificate with m+n = {total} on a domain of {len(domain)} elements"
        )
        if upper is None or total < upper:
            upper = total
    notes.append("lower bound 4: Tarski numbers are never smaller")
    if freeness is not None and freeness.free:
        notes.append(
            "= 4 achievable only with a free subgroup; freeness evidence true "
            f"up to length {freeness.free_up_to}"
        )
    else:
        notes.append("> 4 not certified")
    return TarskiBoundReport(upper=upper, lower=TARSKI_FLOOR, justification=tuple(notes))


# -- serialization -------------------------------------------------------------


def decomposition_to_jsonable(spec: GroupSpec, pd: PartialDecomposition) -> dict:
    def family(pieces):
        return [
            [
                spec.format_element(s),
                sorted(
                    (spec.format_element(x) for x in piece),
                ),
            ]
            for s, piece in pieces
        ]

    return {
        "pieces1": family(pd.pieces1),
        "pieces2": family(pd.pieces2),
        "domain": sorted(
            (spec.format_element(x) for x in pd.domain),
        ),
    }


def decomposition_from_jsonable(spec: GroupSpec, data: dict) -> PartialDecomposition:
    def family(items):
        return tuple(
            (
                spec.parse_element(s),
                frozenset(spec.parse_element(x) for x in piece),
            )
            for s, piece in items
        )

    return PartialDecomposition(
        pieces1=family(data["pieces1"]),
        pieces2=family(data["pieces2"]),
        domain=frozenset(spec.parse_element(x) for x in data["domain"]),
    )


def verification_to_jsonable(spec: GroupSpec, report: DecompositionReport) -> dict:
    def fmt(elements):
        return [spec.format_element(x) for x in elements]

    return {
        "disjoint": report.disjoint,
        "overlaps": fmt(report.overlaps),
        "uncovered1": fmt(report.uncovered1),
        "uncovered2": fmt(report.uncovered2),
        "indeterminate1": fmt(report.indeterminate1),
        "indeterminate2": fmt(report.indeterminate2),
        "passed": report.passed,
    }


def verification_from_jsonable(spec: GroupSpec, data: dict) -> DecompositionReport:
    def parse(items):
        return tuple(spec.parse_element(x) for x in items)

    return DecompositionReport(
        disjoint=data["disjoint"],
        overlaps=parse(data["overlaps"]),
        uncovered1=parse(data["uncovered1"]),
        uncovered2=parse(data["uncovered2"]),
        indeterminate1=parse(data["indeterminate1"]),
        indeterminate2=parse(data["indeterminate2"]),
    )


def report_to_text(spec: GroupSpec, pd: PartialDecomposition) -> str:
    """Plain-text pretty-printer: pieces rendered as word lists."""
    lines = []
    for title, pieces in (("family 1", pd.pieces1), ("family 2", pd.pieces2)):
        for s, piece in pieces:
            words = ", ".join(
                sorted(
                    (spec.format_element(x) for x in piece),
                )
            )
            lines.append(f"{title} piece[{spec.format_element(s)}] = {{{words}}}")
    return "\n".join(lines)
