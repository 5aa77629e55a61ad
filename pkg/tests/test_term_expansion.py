import time

import pytest

from qls_equiv import (BeamGeometry, CombinatorialLimitExceeded, Interaction, ProbeKind, ProbeState, TermClass,
                       TermDescriptor, classify, enumerate_terms, field_signature, interaction_scale,
                       is_geometry_valid, surviving_terms)
from qls_equiv.correlators import CorrelatorKind
from qls_equiv.term_expansion import factored_correlator, format_term_line, iter_terms

from oracles import count_terms

P_UP, P_DN = Interaction(0, True), Interaction(0, False)
C_UP, C_DN = Interaction(1, True), Interaction(1, False)
PUMP_PROBE = BeamGeometry.from_lists((1, 0, 0), [(0.9239, 0.3827, 0.0)])
VALID = {
    0: [BeamGeometry.from_lists((1, 0, 0)), BeamGeometry.from_lists((0, 0, 1))],
    1: [PUMP_PROBE, BeamGeometry.from_lists((0, 0, 1), [(0.3, 0.2, 0.9)]),
        BeamGeometry.from_lists((1, 0, 0), [(0.0, 1.0, 0.0)])],
    2: [BeamGeometry.from_lists((1, 0, 0), [(0.9239, 0.3827, 0.0), (0.8, 0.0, 0.6)]),
        BeamGeometry.from_lists((0, 0, 1), [(0.2, 0.1, 0.97), (-0.15, 0.25, 0.95)]),
        BeamGeometry.from_lists((1, 0, 0), [(0.7, 0.7, 0.1), (0.6, -0.2, 0.77)])],
}
ALLOWED = {TermClass.ZEROTH, TermClass.SECOND_ORDER_TYPE1, TermClass.SECOND_ORDER_TYPE2_ABSORPTION}


@pytest.fixture(scope="module")
def states(fig2_probe):
    return ProbeState.fock(fig2_probe), ProbeState.coherent(fig2_probe, 1.0)


class TestEnumeration:
    @pytest.mark.parametrize("n", range(5))
    @pytest.mark.parametrize("cap", range(5))
    def test_count_matches_recursive_counter(self, n, cap):
        terms = enumerate_terms(n, cap)
        assert len(terms) == count_terms(n, cap)
        assert len(set(terms)) == len(terms)

    def test_no_classical_fields(self):
        terms = enumerate_terms(0, 0)
        listed = {str(t): classify(t) for t in terms}
        assert listed["<a+ a>"] is TermClass.ZEROTH
        assert listed["<a+ L[]>"] is TermClass.FIRST_ORDER
        assert listed["<L+[] a>"] is TermClass.FIRST_ORDER
        assert listed["<L+[] L[]>"] is TermClass.SECOND_ORDER_TYPE1
        # linear absorption: the probe drives L^+ and its a_pr contracts with the bare a^+
        assert listed["<a+ L[P+]>"] is TermClass.SECOND_ORDER_TYPE2_ABSORPTION
        assert listed["<a+ L[P-]>"] is TermClass.SECOND_ORDER_TYPE2_ANOMALOUS
        assert len(terms) == 8

    def test_pump_probe_term_present(self):
        term = TermDescriptor(None, (C_UP, C_DN, P_UP))
        assert term in enumerate_terms(1, 2)
        assert classify(term) is TermClass.SECOND_ORDER_TYPE2_ABSORPTION
        assert term.lpr_order == 2 and term.outer_field == "a+"

    def test_canonical_order_is_generation_independent(self):
        terms = list(iter_terms(2, 2))
        assert enumerate_terms(2, 2) == sorted(reversed(terms), key=TermDescriptor.sort_key)

    def test_classification_total(self):
        for t in enumerate_terms(2, 3):
            assert isinstance(classify(t), TermClass)
            assert t.lpr_order <= 2

    def test_guards(self):
        with pytest.raises(CombinatorialLimitExceeded):
            enumerate_terms(5, 1)
        with pytest.raises(CombinatorialLimitExceeded):
            enumerate_terms(1, 7)
        with pytest.raises(ValueError):
            enumerate_terms(-1, 1)

    def test_too_high_order_rejected(self):
        with pytest.raises(ValueError):
            classify(TermDescriptor((P_UP,), (C_UP,)))


class TestClassify:
    def test_examples(self):
        assert classify(TermDescriptor(None, ())) is TermClass.FIRST_ORDER
        assert classify(TermDescriptor((), ())) is TermClass.SECOND_ORDER_TYPE1
        assert classify(TermDescriptor((P_DN, C_UP), None)) is TermClass.SECOND_ORDER_TYPE2_ABSORPTION
        assert classify(TermDescriptor((P_UP,), None)) is TermClass.SECOND_ORDER_TYPE2_ANOMALOUS

    def test_factored_correlators(self):
        assert factored_correlator(TermDescriptor()) is CorrelatorKind.NORMAL
        assert factored_correlator(TermDescriptor(None, ())) is CorrelatorKind.ONE_POINT_ADAG
        assert factored_correlator(TermDescriptor((), None)) is CorrelatorKind.ONE_POINT_A
        assert factored_correlator(TermDescriptor((), ())) is None
        assert factored_correlator(TermDescriptor(None, (P_DN,))) is CorrelatorKind.ANOMALOUS_ADAG_ADAG
        assert factored_correlator(TermDescriptor((P_UP,), None)) is CorrelatorKind.ANOMALOUS_AA


class TestFieldSignature:
    def test_examples(self):
        assert field_signature(TermDescriptor(None, (C_UP,)), ProbeKind.FOCK1).vanishes
        sig = field_signature(TermDescriptor((), ()), ProbeKind.FOCK1)
        assert sig == (False, 0.0)
        assert field_signature(TermDescriptor((), ()), ProbeKind.COHERENT, 1e6) == (False, 0.0)
        assert field_signature(TermDescriptor(), ProbeKind.COHERENT, 1e6).m_scaling == 1.0
        assert field_signature(TermDescriptor(None, (C_UP,)), ProbeKind.COHERENT, 2.0) == (False, 0.5)
        assert field_signature(TermDescriptor(None, (P_DN,)), ProbeKind.COHERENT, 2.0) == (False, 1.0)


class TestSurvival:
    @pytest.mark.parametrize("n", [0, 1, 2])
    def test_fock_equals_coherent(self, states, n):
        for g in VALID[n]:
            assert is_geometry_valid(g, 6).valid
            for cap in range(5):
                a = surviving_terms(n, cap, g, states[0])
                b = surviving_terms(n, cap, g, states[1])
                assert a == b
                assert {c for _, c in a} <= ALLOWED

    def test_pump_probe_classes(self, states):
        classes = {c for _, c in surviving_terms(1, 4, PUMP_PROBE, states[0])}
        assert classes == ALLOWED

    def test_no_classical_fields(self, states):
        classes = {c for _, c in surviving_terms(0, 0, VALID[0][0], states[1])}
        assert classes == ALLOWED

    def test_collinear_geometry_differs(self, states):
        collinear = BeamGeometry.from_lists((1, 0, 0), [(1, 0, 0)])
        fock = surviving_terms(1, 2, collinear, states[0])
        coh = surviving_terms(1, 2, collinear, states[1])
        extra = {c for _, c in coh} - {c for _, c in fock}
        assert TermClass.FIRST_ORDER in extra

    def test_needs_enough_beams(self, states):
        with pytest.raises(ValueError):
            surviving_terms(2, 1, PUMP_PROBE, states[0])

    def test_fast_enough(self, states):
        t = time.perf_counter()
        surviving_terms(2, 4, VALID[2][0], states[1])
        assert time.perf_counter() - t < 5


class TestInteractionScale:
    def test_boundary(self):
        s = interaction_scale(1.0, 50.0, 50.0, 1.0)
        assert s.l_scale == s.field_scale

    def test_amplified(self):
        s = interaction_scale(0.25, 1e8, 1e2, 1e6)
        assert s.ratio == pytest.approx(1e6 / 0.25 ** 0.5, rel=1e-12)

    def test_typical_values(self):
        # 40-digit mpmath value of sqrt(1e4 / 0.1)
        assert interaction_scale(0.1, 1e6, 1e2, 1.0).ratio == pytest.approx(316.2277660168379332, rel=1e-14)

    @pytest.mark.parametrize("args", [(0.0, 1, 1, 1), (1.5, 1, 1, 1), (0.5, -1, 1, 1), (0.5, 1, 0, 1), (0.5, 1, 1, 0)])
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            interaction_scale(*args)


def test_listing_line():
    line = format_term_line(TermDescriptor(None, (C_UP, C_DN, P_UP)), PUMP_PROBE, ProbeKind.FOCK1)
    cls, term, k, m, verdict = line.split("\t")
    assert cls == "SecondOrderType2Absorption"
    assert term == "<a+ L[C1+ C1- P+]>"
    assert k == "k=(+1.000000,+0.000000,+0.000000)"
    assert (m, verdict) == ("m^1", "survives")
    assert format_term_line(TermDescriptor(None, (C_UP,)), PUMP_PROBE, ProbeKind.FOCK1).endswith("vanishes")
    assert format_term_line(TermDescriptor(None, (C_UP,)), PUMP_PROBE, ProbeKind.COHERENT).endswith("unmatched")
