import math

import numpy as np
import pytest

from causaldet.distcore import causal_from_bell, is_nonsignaling
from causaldet.inequalities import InequalityId, InequalitySpec, eval_im22, violation
from causaldet.lp import OPTIMAL
from causaldet.nonsignaling import build_ns_lp, canonical_ns, dump_tableau, ns_max_violation, solve_lp

from test_lp import scipy_max

CACE = InequalitySpec(InequalityId.CACE_CLASSICAL)
I222 = InequalitySpec(InequalityId.I222)


def im22(m):
    return InequalitySpec(InequalityId.IM22, m)


class TestCanonical:
    def test_two_settings(self, box_bell):
        t = canonical_ns(2).table
        assert np.count_nonzero(t) == 8
        assert t[0, 1, 1, 0] == t[1, 0, 1, 0] == 0.5
        assert t[0, 0, 0, 0] == t[1, 1, 0, 1] == 0.5

    @pytest.mark.parametrize("m", range(2, 7))
    def test_nonsignaling(self, m):
        assert is_nonsignaling(canonical_ns(m), tol=1e-12)

    @pytest.mark.parametrize("m", range(2, 7))
    def test_marginals_uniform(self, m):
        t = canonical_ns(m).table
        np.testing.assert_array_equal(t.sum(axis=1), 0.5)
        np.testing.assert_array_equal(t.sum(axis=0), 0.5)

    def test_three_settings(self):
        assert eval_im22(causal_from_bell(canonical_ns(3)), 1.0) == pytest.approx(0.25)

    def test_rejects_one_setting(self):
        with pytest.raises(ValueError):
            canonical_ns(1)


class TestMaxViolation:
    @pytest.mark.parametrize("spec", [CACE, I222])
    def test_two_settings(self, spec):
        bell, t = ns_max_violation(spec, 1.0)
        assert t == pytest.approx(0.5, abs=1e-9)
        assert is_nonsignaling(bell, tol=1e-9)
        assert violation(causal_from_bell(bell, tol=1e-9), spec, 1.0) == pytest.approx(t, abs=1e-9)

    @pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
    def test_im22(self, m):
        _, t = ns_max_violation(im22(m), 1.0)
        assert t == pytest.approx(1 / (2 * m - 2), abs=1e-9)

    @pytest.mark.parametrize("spec", [CACE, I222, im22(3), im22(4)])
    def test_dominates_witness(self, spec):
        witness = causal_from_bell(canonical_ns(spec.m_settings))
        assert ns_max_violation(spec, 1.0)[1] >= violation(witness, spec, 1.0) - 1e-12

    @pytest.mark.parametrize("spec,eta", [(CACE, 1.0), (CACE, 0.9), (I222, 0.85), (im22(3), 0.95),
                                          (im22(4), 0.7), (CACE, 0.5)])
    def test_matches_scipy(self, spec, eta):
        lp = build_ns_lp(spec, eta)
        ref = scipy_max(lp)
        assert ref.status == 0
        assert solve_lp(lp).objective == pytest.approx(-ref.fun, abs=1e-9)

    def test_cace_threshold_bracket(self):
        boundary = math.sqrt(4 / 5)
        for eta in np.round(np.arange(0.80, 1.0001, 0.005), 6):
            t = ns_max_violation(CACE, float(eta))[1]
            if eta > boundary + 5e-3:
                assert t > 0
            elif eta < boundary - 5e-3:
                assert t < 0

    def test_deterministic_vertex(self):
        a, ta = ns_max_violation(I222, 0.93)
        b, tb = ns_max_violation(I222, 0.93)
        assert ta == tb
        np.testing.assert_array_equal(a.table, b.table)

    def test_rejects_nonlinear(self):
        with pytest.raises(ValueError, match="not linear"):
            build_ns_lp(InequalitySpec(InequalityId.QACE_QUANTUM), 1.0)

    def test_rejects_bad_eta(self):
        with pytest.raises(ValueError):
            build_ns_lp(CACE, 0.0)


def test_tableau_columns():
    text = dump_tableau(build_ns_lp(CACE, 1.0))
    header = text.splitlines()[0]
    assert header.startswith("# columns: p00|00 p00|01 p00|10 p00|11 p01|00")
    assert header.endswith("t+ t- | rhs")
    assert sum(line.startswith("le ") for line in text.splitlines()) == 8
    assert solve_lp(build_ns_lp(CACE, 1.0)).status == OPTIMAL
