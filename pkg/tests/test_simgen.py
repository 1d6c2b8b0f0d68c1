import json

import numpy as np
import pytest

from kappag import InvalidConfigError, csv_roundtrip, gen_design, gen_sim_p2, gen_sim_p10, validate
from kappag.simgen import write_manifest


class TestGenerators:
    def test_p2_shape_and_truth(self):
        ds, beta = gen_sim_p2(0)
        assert (ds.n, ds.p) == (30, 2)
        assert np.array_equal(beta, [2.0, 0.0])
        validate(ds)

    def test_p10_shape_and_truth(self):
        ds, beta = gen_sim_p10(0)
        assert (ds.n, ds.p) == (30, 10)
        expected = np.zeros(10)
        expected[[0, 1, 7]] = 2.0
        assert np.array_equal(beta, expected)
        validate(ds)

    def test_seed_determinism(self):
        d1, _ = gen_sim_p2(7)
        d2, _ = gen_sim_p2(7)
        assert np.array_equal(d1.X, d2.X)
        assert np.array_equal(d1.y, d2.y)
        d3, _ = gen_sim_p2(8)
        assert not np.array_equal(d1.X, d3.X)

    def test_columns_standard_normal_in_the_limit(self):
        ds, _ = gen_sim_p2(1, n=10000)
        assert np.max(np.abs(ds.X.mean(axis=0))) < 0.05
        assert np.max(np.abs(ds.X.std(axis=0) - 1.0)) < 0.05

    def test_single_column_regression_recovers_slope(self):
        ds, _ = gen_sim_p2(2, n=10000)
        x1 = ds.X[:, 0]
        slope = (x1 @ ds.y) / (x1 @ x1)
        assert slope == pytest.approx(2.0, abs=0.05)

    def test_p10_ols_recovers_coefficients(self):
        from kappag import ols_fit

        ds, beta = gen_sim_p10(3, n=10000)
        fit = ols_fit(ds)
        assert np.max(np.abs(fit.beta_hat - beta)) < 0.05

    def test_equicorrelation(self):
        ds, _ = gen_design(4, 20000, [0.0, 0.0, 0.0], rho=0.4)
        corr = np.corrcoef(ds.X, rowvar=False)
        off = corr[np.triu_indices(3, k=1)]
        assert np.max(np.abs(off - 0.4)) < 0.03

    def test_bad_args(self):
        with pytest.raises(InvalidConfigError):
            gen_sim_p2(0, n=2)
        with pytest.raises(InvalidConfigError):
            gen_sim_p10(0, n=10)
        with pytest.raises(InvalidConfigError):
            gen_design(0, 20, [0.0], rho=1.0)


class TestRoundTrip:
    def test_exact_roundtrip(self, tmp_path):
        ds, _ = gen_sim_p2(5)
        back = csv_roundtrip(ds, tmp_path / "data.csv")
        assert np.max(np.abs(back.X - ds.X)) <= 1e-12
        assert np.max(np.abs(back.y - ds.y)) <= 1e-12
        assert np.array_equal(back.X, ds.X)

    def test_manifest_contents(self, tmp_path):
        ds, beta = gen_sim_p10(6)
        path = tmp_path / "manifest.json"
        write_manifest(path, "p10", 6, ds, beta)
        manifest = json.loads(path.read_text())
        assert manifest["design"] == "p10"
        assert manifest["seed"] == 6
        assert manifest["n"] == 30 and manifest["p"] == 10
        assert manifest["true_beta"][0] == 2.0 and manifest["true_beta"][2] == 0.0
        assert manifest["columns"] == [f"x{j}" for j in range(1, 11)]
