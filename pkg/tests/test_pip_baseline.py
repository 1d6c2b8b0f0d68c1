import numpy as np
import pytest

from kappag import (
    Dataset,
    InvalidConfigError,
    enumerate_pip,
    log_marginal_gamma,
    ssvs_pip,
    validate,
)
from kappag.simgen import gen_design, gen_sim_p2

from conftest import make_dataset


class TestLogMarginal:
    def test_null_model_closed_form(self):
        ds = make_dataset(40, 25, 2)
        value = log_marginal_gamma(ds, np.zeros(2, dtype=bool), g_scale=25.0)
        assert value == pytest.approx(-(25 / 2) * np.log(ds.y @ ds.y), rel=1e-12)

    def test_occam_penalty_for_irrelevant_orthogonal_column(self):
        # x2 is orthogonalized against both y and x1, so adding it cannot
        # improve the fit and the dimension penalty must lower the
        # marginal, for any prior scale >= 1.
        rng = np.random.default_rng(41)
        x1 = rng.standard_normal(40)
        y = 2.0 * x1 + rng.standard_normal(40)
        x2 = rng.standard_normal(40)
        x2 -= y * (y @ x2) / (y @ y)
        x2 -= x1 * (x1 @ x2) / (x1 @ x1)
        x2 -= y * (y @ x2) / (y @ y)  # second pass for float exactness
        ds = validate(Dataset(np.column_stack([x1, x2]), y))
        just_x1 = np.array([True, False])
        both = np.array([True, True])
        for g_scale in (1.0, 40.0, 1000.0):
            assert log_marginal_gamma(ds, just_x1, g_scale) > log_marginal_gamma(
                ds, both, g_scale
            )

    def test_true_single_variable_model_beats_full(self):
        ds, _ = gen_sim_p2(0)
        lm_x1 = log_marginal_gamma(ds, np.array([True, False]), g_scale=30.0)
        lm_full = log_marginal_gamma(ds, np.array([True, True]), g_scale=30.0)
        assert lm_x1 - lm_full > 0.0  # Bayes factor > 1

    def test_bad_inputs(self):
        ds = make_dataset(42, 20, 2)
        with pytest.raises(InvalidConfigError):
            log_marginal_gamma(ds, np.zeros(3, dtype=bool), 10.0)
        with pytest.raises(InvalidConfigError):
            log_marginal_gamma(ds, np.zeros(2, dtype=bool), -1.0)


class TestEnumeration:
    def test_matches_hand_weights_at_p1(self):
        # Independent oracle: direct two-model posterior weights.
        ds = make_dataset(43, 30, 1, beta=[1.0])
        lm0 = log_marginal_gamma(ds, np.array([False]), 30.0)
        lm1 = log_marginal_gamma(ds, np.array([True]), 30.0)
        w1 = 1.0 / (1.0 + np.exp(lm0 - lm1))
        assert enumerate_pip(ds, 30.0)[0] == pytest.approx(w1, rel=1e-12)

    def test_dimension_guard(self):
        ds = make_dataset(44, 20, 16)
        with pytest.raises(InvalidConfigError):
            enumerate_pip(ds, 20.0)


class TestGibbs:
    def test_matches_enumeration_at_p3(self):
        ds, _ = gen_design(42, 40, [1.5, 0.0, 0.0])
        exact = enumerate_pip(ds, g_scale=40.0)
        estimate = ssvs_pip(ds, g_scale=40.0, prior_inclusion=0.5, T=20000, seed=0)
        assert np.max(np.abs(exact - estimate)) < 0.02

    def test_no_signal_data_not_selected(self):
        # With the unit-information scale the Occam penalty keeps null
        # PIPs well below the 0.5 prior.
        ds, _ = gen_design(100, 100, [0.0, 0.0, 0.0])
        pip = ssvs_pip(ds, g_scale=100.0, prior_inclusion=0.5, T=5000, seed=1)
        assert np.all(pip < 0.5)
        assert np.all(pip > 0.005)

    def test_seed_determinism(self):
        ds, _ = gen_design(45, 30, [1.0, 0.0])
        p1 = ssvs_pip(ds, g_scale=30.0, T=2000, seed=3)
        p2 = ssvs_pip(ds, g_scale=30.0, T=2000, seed=3)
        assert np.array_equal(p1, p2)

    def test_pip_in_unit_interval(self):
        ds, _ = gen_design(46, 30, [2.0, 0.0])
        pip = ssvs_pip(ds, g_scale=30.0, T=1000, seed=0)
        assert np.all((pip >= 0.0) & (pip <= 1.0))

    def test_config_guards(self):
        ds = make_dataset(47, 30, 2)
        with pytest.raises(InvalidConfigError):
            ssvs_pip(ds, g_scale=30.0, T=0, seed=0)
        with pytest.raises(InvalidConfigError):
            ssvs_pip(ds, g_scale=30.0, prior_inclusion=1.5, T=10, seed=0)
        wide = make_dataset(48, 40, 26)
        with pytest.raises(InvalidConfigError):
            ssvs_pip(wide, g_scale=40.0, T=10, seed=0)
