import json

import pytest

from paradec import (
    Certificate,
    TranslatingSets,
    check_domain,
    enumerate_ball,
    first_letter_pieces,
    first_letter_translators,
    free_abelian_group,
    free_group,
    free_up_to_length,
    make_decomposition,
    matrix_group,
    pieces_from_certificate,
    tarski_bound_report,
    verify_decomposition,
)
from paradec.decomposition import (
    decomposition_from_jsonable,
    decomposition_to_jsonable,
    report_from_jsonable,
    verification_from_jsonable,
    verification_to_jsonable,
)
from paradec.errors import CertificateError

from helpers import standard_gens


def ball(spec, radius):
    return enumerate_ball(spec, standard_gens(spec), radius)


class TestPiecesFromCertificate:
    def test_single_element_domain(self):
        spec = free_group(1)
        e, x = (), (1,)
        ts = TranslatingSets(s1=(e, x), s2=(e, x))
        cert = Certificate(pairs1=((e, e),), pairs2=((e, x),))
        pd = pieces_from_certificate(spec, cert, ts)
        assert pd.pieces1_map()[e] == frozenset([e])
        assert pd.pieces1_map()[x] == frozenset()
        assert pd.pieces2_map()[x] == frozenset([x])
        report = verify_decomposition(spec, pd, ts, [e])
        assert report.passed

    def test_free2_ball3_pipeline(self):
        spec = free_group(2)
        ts = TranslatingSets.from_words(spec, "1,a", "1,b")
        domain = ball(spec, 3).vertices
        verdict = check_domain(spec, ts, domain)
        pd = pieces_from_certificate(spec, verdict, ts)
        assert pd.nonempty_piece_count() == 4
        assert verify_decomposition(spec, pd, ts, domain).passed

    def test_free3_ball3_pipeline(self):
        spec = free_group(3)
        ts = TranslatingSets.from_words(spec, "1,a", "1,b,c")
        domain = ball(spec, 3).vertices
        verdict = check_domain(spec, ts, domain)
        pd = pieces_from_certificate(spec, verdict, ts)
        assert pd.nonempty_piece_count() <= 5
        assert verify_decomposition(spec, pd, ts, domain).passed

    def test_invalid_certificate_rejected(self):
        spec = free_group(2)
        e, a = (), (1,)
        ts = TranslatingSets(s1=(e, a), s2=(e, (2,)))
        # image (2,2) is not a translate of the identity by 1 or a
        bogus = Certificate(pairs1=(((), (2, 2)),), pairs2=(((), (2,)),))
        with pytest.raises(CertificateError):
            pieces_from_certificate(spec, bogus, ts)

    def test_round_trip_invariant_across_models(self):
        cases = [
            (free_group(2), "1,a", "1,b", 2),
            (free_group(3), "1,a", "1,b,c", 2),
            (matrix_group(), "1,A", "1,B", 2),
        ]
        for spec, s1, s2, radius in cases:
            ts = TranslatingSets.from_words(spec, s1, s2)
            domain = ball(spec, radius).vertices
            verdict = check_domain(spec, ts, domain)
            pd = pieces_from_certificate(spec, verdict, ts)
            assert verify_decomposition(spec, pd, ts, domain).passed
            assert pd.nonempty_piece_count() <= ts.total_size()


class TestVerifyDecomposition:
    def test_overlapping_pieces_reported(self):
        spec = free_group(2)
        e = spec.identity()
        ts = TranslatingSets(s1=(e, (1,)), s2=(e, (2,)))
        pd = make_decomposition(
            spec, ts, {e: {e}}, {e: {e}}, domain=[e]
        )
        report = verify_decomposition(spec, pd, ts, [e])
        assert not report.disjoint
        assert report.overlaps == (e,)
        assert not report.passed

    def test_vacuous_pass_on_empty_inner(self):
        spec = free_group(2)
        e = spec.identity()
        ts = TranslatingSets(s1=(e, (1,)), s2=(e, (2,)))
        pd = make_decomposition(spec, ts, {}, {}, domain=[])
        report = verify_decomposition(spec, pd, ts, [])
        assert report.passed

    def test_inner_must_lie_in_domain(self):
        spec = free_group(2)
        e = spec.identity()
        ts = TranslatingSets(s1=(e, (1,)), s2=(e, (2,)))
        pd = make_decomposition(spec, ts, {}, {}, domain=[e])
        with pytest.raises(ValueError):
            verify_decomposition(spec, pd, ts, [(1,)])


class TestFirstLetterPieces:
    def test_ball1_hand_checkable(self):
        spec = free_group(2)
        domain = ball(spec, 1).vertices
        pd = first_letter_pieces(2, domain)
        ts = first_letter_translators()
        pieces1 = pd.pieces1_map()
        assert pieces1[()] == frozenset([(-1,)])
        assert pieces1[(1,)] == frozenset([(1,)])
        pieces2 = pd.pieces2_map()
        assert pieces2[()] == frozenset([(-2,)])
        assert pieces2[(2,)] == frozenset([(2,)])
        assert verify_decomposition(spec, pd, ts, [()]).passed

    def test_identity_in_no_piece_but_covered(self):
        spec = free_group(2)
        domain = ball(spec, 2).vertices
        pd = first_letter_pieces(2, domain)
        ts = first_letter_translators()
        e = spec.identity()
        for _, piece in pd.pieces1 + pd.pieces2:
            assert e not in piece
        report = verify_decomposition(spec, pd, ts, [e])
        assert report.passed and not report.indeterminate1

    def test_rank3_words_beyond_first_two_letters_ignored(self):
        spec = free_group(3)
        domain = ball(spec, 2).vertices
        pd = first_letter_pieces(3, domain)
        ts = first_letter_translators()
        inner = [w for w in domain if len(w) <= 1]
        assert verify_decomposition(spec, pd, ts, inner).passed

    def test_rank_below_two_rejected(self):
        with pytest.raises(ValueError):
            first_letter_pieces(1, [()])

    @pytest.mark.parametrize("radius", range(1, 6))
    def test_cross_check_with_matching_pieces(self, radius):
        # two independently built decompositions both verify on the
        # same ball (piece contents may differ)
        spec = free_group(2)
        ts = first_letter_translators()
        domain = ball(spec, radius).vertices
        verdict = check_domain(spec, ts, domain)
        from_matching = pieces_from_certificate(spec, verdict, ts)
        assert verify_decomposition(spec, from_matching, ts, domain).passed
        constructed = first_letter_pieces(2, domain)
        report = verify_decomposition(spec, constructed, ts, domain)
        assert report.passed
        inner = [w for w in domain if len(w) < radius]
        strict = verify_decomposition(spec, constructed, ts, inner)
        assert strict.passed and not strict.indeterminate1 and not strict.indeterminate2


class TestFreeUpToLength:
    def test_matrix_pair_free_to_length_8(self):
        spec = matrix_group()
        result = free_up_to_length(spec, (1, 2, 0, 1), (1, 0, 2, 1), 8)
        assert result.free
        assert result.witness is None

    def test_commuting_pair_witness(self):
        spec = free_abelian_group(2)
        result = free_up_to_length(spec, (1, 0), (0, 1), 4)
        assert not result.free
        assert result.witness == (("g", 1), ("h", 1), ("g", -1), ("h", -1))
        assert result.witness_text() == "g h g^-1 h^-1"

    def test_identity_has_length_one_witness(self):
        spec = free_group(2)
        result = free_up_to_length(spec, spec.identity(), (2,), 3)
        assert not result.free
        assert result.witness == (("g", 1),)

    def test_inverse_pair_witness(self):
        spec = matrix_group()
        result = free_up_to_length(spec, (1, 2, 0, 1), (1, -2, 0, 1), 4)
        assert not result.free
        assert result.witness == (("g", 1), ("h", 1))

    def test_antitone_in_length(self):
        spec = matrix_group()
        results = [
            free_up_to_length(spec, (1, 2, 0, 1), (1, 0, 2, 1), bound).free
            for bound in range(1, 7)
        ]
        # once false at some bound, it stays false beyond it; here all true
        assert results == sorted(results, reverse=True)

    def test_free_generators_are_free(self):
        spec = free_group(2)
        assert free_up_to_length(spec, (1,), (2,), 6).free


class TestTarskiBoundReport:
    def _certificate_entry(self, spec, s1, s2, radius):
        ts = TranslatingSets.from_words(spec, s1, s2)
        domain = ball(spec, radius).vertices
        verdict = check_domain(spec, ts, domain)
        return ts, frozenset(domain), verdict

    def test_two_plus_two(self):
        spec = free_group(2)
        entry = self._certificate_entry(spec, "1,a", "1,b", 3)
        freeness = free_up_to_length(spec, (1,), (2,), 6)
        report = tarski_bound_report([entry], freeness)
        assert report.upper == 4
        assert report.lower == 4
        assert any("free subgroup" in note for note in report.justification)

    def test_two_plus_three(self):
        spec = free_group(3)
        entry = self._certificate_entry(spec, "1,a", "1,b,c", 3)
        report = tarski_bound_report([entry])
        assert report.upper == 5
        assert report.lower == 4
        assert any("not certified" in note for note in report.justification)

    def test_no_certificates(self):
        report = tarski_bound_report([])
        assert report.upper is None
        assert report.lower == 4

    def test_degenerate_families_ignored(self):
        # a singleton side can be saturated on a tiny domain, but it can
        # never be part of a paradoxical decomposition
        spec = free_group(2)
        e = spec.identity()
        ts = TranslatingSets(s1=(e,), s2=(e, (1,)))
        verdict = check_domain(spec, ts, [e])
        assert isinstance(verdict, Certificate)
        report = tarski_bound_report([(ts, frozenset([e]), verdict)])
        assert report.upper is None

    def test_report_round_trip(self):
        spec = free_group(2)
        entry = self._certificate_entry(spec, "1,a", "1,b", 2)
        report = tarski_bound_report([entry])
        data = json.loads(json.dumps(report.to_jsonable()))
        assert report_from_jsonable(data) == report


class TestSerialization:
    def test_decomposition_round_trip(self):
        spec = free_group(2)
        ts = TranslatingSets.from_words(spec, "1,a", "1,b")
        domain = ball(spec, 2).vertices
        pd = pieces_from_certificate(spec, check_domain(spec, ts, domain), ts)
        data = json.loads(json.dumps(decomposition_to_jsonable(spec, pd)))
        assert decomposition_from_jsonable(spec, data) == pd

    def test_verification_round_trip(self):
        spec = free_group(2)
        ts = TranslatingSets.from_words(spec, "1,a", "1,b")
        domain = ball(spec, 2).vertices
        pd = pieces_from_certificate(spec, check_domain(spec, ts, domain), ts)
        report = verify_decomposition(spec, pd, ts, domain)
        data = json.loads(json.dumps(verification_to_jsonable(spec, report)))
        assert verification_from_jsonable(spec, data) == report
