import itertools
import math
import warnings

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from causaldet.distcore import CausalDistribution, apply_efficiency
from causaldet.inequalities import (
    InequalityId,
    InequalitySpec,
    XiUndefinedError,
    eval_cace_rhs,
    eval_i222,
    eval_im22,
    eval_j222,
    eval_qace_rhs,
    eval_xi,
    evaluate_rhs,
    xi_lemma_closed_form,
    xi_lemma_grid,
    linear_form,
    rhs_array,
    violation,
)
from causaldet.quantum import tight_quantum_distribution

CACE = InequalitySpec(InequalityId.CACE_CLASSICAL)
I222 = InequalitySpec(InequalityId.I222)
QACE = InequalitySpec(InequalityId.QACE_QUANTUM)
J222 = InequalitySpec(InequalityId.J222)

seeds = st.integers(0, 2 ** 32 - 1)


def random_obs(seed, m=2, eta=1.0):
    rng = np.random.default_rng(seed)
    return eta ** 2 * rng.dirichlet(np.ones(4), size=m).T.reshape(2, 2, m)


def causal(obs, eta=1.0):
    return CausalDistribution(obs, np.full((2, 2), 0.5 * eta), eta, "efficiency")


class TestSpec:
    @pytest.mark.parametrize("name", ["cace", "CACE", " I222 ", "im22", "Qace", "j222"])
    def test_parse(self, name):
        assert InequalitySpec.parse(name).id.value == name.strip().lower()

    def test_parse_rejects_unknown(self):
        with pytest.raises(ValueError, match="unknown inequality"):
            InequalitySpec.parse("chsh")

    def test_only_im22_takes_m(self):
        assert InequalitySpec.parse("im22", 4).m_settings == 4
        assert InequalitySpec.parse("cace", 4).m_settings == 2
        with pytest.raises(ValueError):
            InequalitySpec(InequalityId.I222, 3)
        with pytest.raises(ValueError):
            InequalitySpec(InequalityId.IM22, 1)


class TestCace:
    def test_box(self, box):
        assert eval_cace_rhs(box) == 0.5

    def test_uniform(self, uniform):
        assert eval_cace_rhs(uniform) == pytest.approx(-0.75)

    def test_needs_two_settings(self, ns_causal):
        with pytest.raises(ValueError):
            eval_cace_rhs(ns_causal(3))


class TestI222:
    def test_box_family(self, box):
        for eta in np.linspace(0.05, 1, 20):
            d = apply_efficiency(box, eta)
            assert eval_i222(d, eta) == pytest.approx(1.5 * eta ** 2 - 1, abs=1e-12)
        assert eval_i222(box, 1.0) == 0.5

    def test_threshold_boundary(self, box):
        eta = math.sqrt(2 / 3)
        assert eval_i222(apply_efficiency(box, eta), eta) == pytest.approx(0, abs=1e-12)

    def test_uniform(self, uniform):
        assert eval_i222(uniform, 1.0) == pytest.approx(-0.75)


class TestIM22:
    def test_three_settings(self, ns_causal):
        assert eval_im22(ns_causal(3), 1.0) == pytest.approx(0.25, abs=1e-12)

    def test_four_settings(self, ns_causal):
        assert eval_im22(ns_causal(4), 1.0) == pytest.approx(1 / 6, abs=1e-12)

    @pytest.mark.parametrize("m", range(2, 9))
    def test_canonical_family(self, ns_causal, m):
        assert eval_im22(ns_causal(m), 1.0) == pytest.approx(1 / (2 * m - 2), abs=1e-12)

    @settings(max_examples=300, deadline=None)
    @given(seeds, st.floats(0, 1))
    def test_reduces_to_i222(self, seed, eta):
        d = causal(random_obs(seed, eta=eta), eta)
        assert eval_im22(d, eta) == pytest.approx(eval_i222(d, eta), abs=1e-14)

    def test_spec_mismatch(self, ns_causal):
        with pytest.raises(ValueError):
            evaluate_rhs(ns_causal(3), InequalitySpec(InequalityId.IM22, 4), 1.0)


class TestXi:
    def test_tight_quantum(self):
        xi = eval_xi(tight_quantum_distribution())
        assert xi.s0 == pytest.approx(2 * math.sqrt(2) - 2, abs=1e-12)
        assert xi.s1 == pytest.approx(0, abs=1e-12)
        assert xi.xi == pytest.approx(math.sqrt(2) - 1, abs=1e-12)

    def test_box(self, box):
        xi = eval_xi(box)
        assert (xi.s0, xi.s1, xi.xi) == (1.0, 0.0, 0.0)

    def test_uniform(self, uniform):
        xi = eval_xi(uniform)
        assert (xi.s0, xi.s1, xi.xi) == (0.0, 0.0, 1.0)

    def test_both_branches_negative(self):
        # s0 = 2, s1 = -2: (1+s0)(1+s1) < 0 and (1-s0)(1-s1) < 0
        obs = np.zeros((2, 2, 2))
        obs[0, 0, 0] = obs[0, 1, 1] = 1.0
        obs[1, 1, 0] = obs[1, 0, 1] = 1.0
        with pytest.raises(XiUndefinedError, match="xi undefined"):
            eval_xi(CausalDistribution(obs, np.full((2, 2), 0.5), source="strategy"))
        assert np.isnan(rhs_array(obs, QACE, 1.0))

    def test_one_branch_excluded(self):
        # s0 = 1.5, s1 = 0.5: the minus branch has a negative factor
        obs = np.zeros((2, 2, 2))
        obs[0, 0, 0] = 1.0
        obs[0, 1, 1] = obs[1, 1, 1] = 0.5
        x = eval_xi(CausalDistribution(obs, np.full((2, 2), 0.5)))
        assert (x.s0, x.s1) == (1.5, 0.5)
        assert x.xi == pytest.approx(math.sqrt(2.5 * 1.5))

    @settings(max_examples=300, deadline=None)
    @given(seeds, st.floats(0, 1))
    def test_range(self, seed, eta):
        x = eval_xi(causal(random_obs(seed, eta=eta), eta))
        assume(abs(x.s0) <= 1 and abs(x.s1) <= 1)
        assert -1e-12 <= x.xi <= 1 + 1e-12


class TestQuantumBounds:
    def test_qace_tight(self):
        assert eval_qace_rhs(tight_quantum_distribution()) == pytest.approx(0, abs=1e-12)

    def test_qace_box(self, box):
        assert eval_qace_rhs(box) == 0.5

    def test_j222_box(self, box):
        assert eval_j222(box, 1.0) == 0.5

    def test_j222_uniform(self, uniform):
        assert eval_j222(uniform, 1.0) == pytest.approx(-1.0)

    def test_j222_rejects_zero_efficiency(self, box):
        with pytest.raises(ValueError):
            eval_j222(apply_efficiency(box, 0.0), 0.0)

    def test_qace_root(self, box):
        eta = 2 * math.sqrt(2) / 3
        assert eval_qace_rhs(apply_efficiency(box, eta)) == pytest.approx(0, abs=1e-12)


@pytest.mark.parametrize("eta", np.linspace(0.05, 1.0, 20))
def test_box_family_closed_forms(box, eta):
    d = apply_efficiency(box, eta)
    root = math.sqrt(max(1 - eta ** 2, 0.0))
    expected = {
        CACE: 2.5 * eta ** 2 - 2,
        I222: 1.5 * eta ** 2 - 1,
        QACE: 1.5 * eta ** 2 - root - 1,
        J222: (0.5 * eta ** 2 - root) / eta,
    }
    for spec, value in expected.items():
        assert violation(d, spec, eta) == pytest.approx(value, abs=1e-12)


def test_violation_warns_on_mismatched_efficiency(box):
    with pytest.warns(UserWarning, match="eta=0.9"):
        assert violation(box, I222, 0.9) == pytest.approx(2.5 - 1 - 0.81)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        violation(box, I222, 1.0)


@settings(max_examples=300, deadline=None)
@given(seeds, st.floats(0, 1), st.integers(2, 6))
def test_linear_form_matches_evaluators(seed, eta, m):
    obs = random_obs(seed, m, eta)
    specs = [InequalitySpec(InequalityId.IM22, m)]
    if m == 2:
        specs += [CACE, I222]
    for spec in specs:
        coef, const = linear_form(spec, eta)
        direct = evaluate_rhs(causal(obs, eta), spec, eta)
        assert float((coef * obs).sum() + const) == pytest.approx(direct, abs=1e-12)


def test_linear_form_rejects_nonlinear():
    for spec in (QACE, J222):
        with pytest.raises(ValueError):
            linear_form(spec, 1.0)


def test_rhs_array_is_vectorized():
    obs = np.stack([random_obs(s) for s in range(5)])
    batch = rhs_array(obs, QACE, 1.0)
    single = [eval_qace_rhs(causal(o)) for o in obs]
    np.testing.assert_allclose(batch, single, atol=1e-15)


def _relabel(obs, flip_a0, flip_a1, flip_b):
    out = obs.copy()
    for x, flip in enumerate((flip_a0, flip_a1)):
        if flip:
            out[:, :, x] = out[::-1, :, x]
    if flip_b:
        out = out[:, ::-1, :]
    return out


def test_cace_relabeling_symmetry():
    """Exhaustive search over the eight relabelings generated by flipping A's
    outcome at x=0, at x=1, and flipping B's outcome."""
    tables = [random_obs(s) for s in range(50)]
    symmetries = []
    for flips in itertools.product([False, True], repeat=3):
        if all(rhs_array(_relabel(o, *flips), CACE, 1.0) == pytest.approx(rhs_array(o, CACE, 1.0), abs=1e-12)
               for o in tables):
            symmetries.append(flips)
    # identity, and flipping a at x=1 where the bound only sees p(b=1|x=1)
    assert symmetries == [(False, False, False), (False, True, False)]


class TestXiLemma:
    def test_origin(self):
        assert xi_lemma_closed_form(0, 0) == -1.0

    def test_edge(self):
        assert xi_lemma_closed_form(1, 0) == 0.5

    def test_against_grid(self):
        rng = np.random.default_rng(2024)
        pts = rng.uniform(-0.99, 0.99, size=(100, 2))
        for xp, yp in pts:
            assert xi_lemma_closed_form(xp, yp) == pytest.approx(xi_lemma_grid(xp, yp), abs=1e-4)

    def test_grid_never_exceeds_closed_form(self):
        rng = np.random.default_rng(5)
        for xp, yp in rng.uniform(-0.99, 0.99, size=(50, 2)):
            assert xi_lemma_grid(xp, yp) <= xi_lemma_closed_form(xp, yp) + 1e-9
