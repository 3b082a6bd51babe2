import json
import math

import numpy as np
import pytest

from strucrec.exceptions import ConfigurationError, ValidationError
from strucrec.harness import (
    CSV_HEADER,
    ExperimentConfig,
    config_from_dict,
    default_config,
    gen_ground_truth,
    records_from_csv,
    records_to_csv,
    records_to_json,
    run_mismatch_sweep,
    run_phase_transition,
    run_robustness_comparison,
    verify_bounds,
)
from strucrec.measurement import NoiseSpec
from strucrec.rng import RngSpec


class TestGenGroundTruth:
    def test_sparsity_and_norm(self):
        for seed in range(20):
            x = gen_ground_truth(50, 7, RngSpec(seed))
            assert np.count_nonzero(x) == 7
            assert np.linalg.norm(x) == pytest.approx(1.0, abs=1e-12)

    def test_full_support(self):
        x = gen_ground_truth(10, 10, RngSpec(0))
        assert np.count_nonzero(x) == 10

    def test_deterministic(self):
        assert np.array_equal(gen_ground_truth(20, 3, RngSpec(5)),
                              gen_ground_truth(20, 3, RngSpec(5)))

    def test_rejects_bad_sparsity(self):
        with pytest.raises(ValidationError):
            gen_ground_truth(5, 6, RngSpec(0))


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValidationError):
            ExperimentConfig(trials=0)
        with pytest.raises(ValidationError):
            ExperimentConfig(m_grid=())
        with pytest.raises(ValidationError):
            ExperimentConfig(eta_grid=(0.0,))
        with pytest.raises(ValidationError):
            ExperimentConfig(model="ols")

    def test_from_dict_requires_schema(self):
        with pytest.raises(ConfigurationError):
            config_from_dict({"model": "cls"})

    def test_from_dict_rejects_unknown_keys(self):
        with pytest.raises(ConfigurationError):
            config_from_dict({"schema": 1, "modle": "cls"})
        with pytest.raises(ConfigurationError):
            config_from_dict({"schema": 1, "noise": {"sigmaa": 0.1}})

    def test_round_trip(self):
        cfg = config_from_dict({
            "schema": 1, "model": "clad", "n": 32, "s": 3,
            "m_grid": [50], "eta_grid": [1.0], "trials": 2,
            "noise": {"kind": "gaussian", "sigma": 0.2},
            "solver": {"max_iters": 500},
        })
        assert cfg.model == "clad"
        assert cfg.noise.sigma == 0.2
        assert cfg.solver.max_iters == 500


def _tiny_cfg(**kw):
    base = dict(model="cls", constraint_kind="l1", n=24, s=3,
                m_grid=(40, 60), eta_grid=(0.8, 1.0), trials=3,
                master_seed=11)
    base.update(kw)
    return ExperimentConfig(**base)


class TestMismatchSweep:
    def test_row_count_and_order(self):
        cfg = _tiny_cfg()
        recs = run_mismatch_sweep(cfg)
        assert len(recs) == 2 * 2 * 3
        keys = [(r.m, round(r.eta / r.f_star, 6), r.trial_id) for r in recs]
        assert keys == sorted(keys)

    def test_threads_do_not_change_results(self):
        cfg = _tiny_cfg()
        a = records_to_csv(run_mismatch_sweep(cfg, threads=1))
        b = records_to_csv(run_mismatch_sweep(cfg, threads=4))
        assert a == b

    def test_case_selection(self):
        cfg = _tiny_cfg()
        recs = run_mismatch_sweep(cfg)
        for r in recs:
            # bounds apply once m clears the m0 surrogate (rho < 1)
            if r.eta < r.f_star and r.m >= 60:
                assert not math.isnan(r.bound_value)

    def test_optimal_tuning_small_error(self):
        cfg = _tiny_cfg(eta_grid=(1.0,), m_grid=(60,), trials=5)
        recs = run_mismatch_sweep(cfg)
        assert np.median([r.error for r in recs]) <= 1e-4


class TestPhaseTransition:
    def test_requires_noiseless_and_optimal(self):
        with pytest.raises(ValidationError):
            run_phase_transition(_tiny_cfg(noise=NoiseSpec(kind="gaussian", sigma=0.1),
                                           eta_grid=(1.0,)))
        with pytest.raises(ValidationError):
            run_phase_transition(_tiny_cfg(eta_grid=(0.8,)))

    def test_rate_high_when_oversampled(self):
        # fixed-step gradient descent needs kappa^2 iterations, so square
        # (m = n) Gaussian systems with their unbounded condition numbers are
        # out of reach; m = 2n keeps sigma_min bounded away from zero
        cfg = _tiny_cfg(constraint_kind="l2", eta_grid=(1.0,), m_grid=(48,),
                        trials=8)
        points = run_phase_transition(cfg)
        assert points[0].success_rate >= 0.99

    def test_rate_nondecreasing(self):
        cfg = _tiny_cfg(eta_grid=(1.0,), m_grid=(10, 30, 60), trials=8)
        points = run_phase_transition(cfg)
        rates = [p.success_rate for p in points]
        slack = 2.0 / math.sqrt(cfg.trials)
        assert all(b >= a - slack for a, b in zip(rates, rates[1:]))


class TestRobustness:
    def test_requires_sparse_noise(self):
        with pytest.raises(ValidationError):
            run_robustness_comparison(_tiny_cfg())

    def test_paired_records(self):
        cfg = _tiny_cfg(
            noise=NoiseSpec(kind="sparse_adversarial", fraction=0.1, magnitude=50.0),
            m_grid=(60,), eta_grid=(1.0,), trials=3,
        )
        recs = run_robustness_comparison(cfg)
        assert len(recs) == 6
        models = [r.model for r in recs]
        assert models == ["cls", "clad"] * 3
        # paired trials share the same seed
        for a, b in zip(recs[0::2], recs[1::2]):
            assert a.seed == b.seed


class TestSerialization:
    def test_csv_header(self):
        cfg = _tiny_cfg(m_grid=(40,), eta_grid=(1.0,), trials=1)
        text = records_to_csv(run_mismatch_sweep(cfg))
        assert text.splitlines()[0] == CSV_HEADER

    def test_csv_round_trip(self):
        cfg = _tiny_cfg(m_grid=(40,), eta_grid=(0.8, 1.25), trials=2)
        recs = run_mismatch_sweep(cfg)
        back = records_from_csv(records_to_csv(recs))
        assert len(back) == len(recs)
        for a, b in zip(recs, back):
            assert a.seed == b.seed
            assert a.error == pytest.approx(b.error, rel=1e-15)

    def test_json_keys_match_csv_columns(self):
        cfg = _tiny_cfg(m_grid=(40,), eta_grid=(1.0,), trials=1)
        rows = json.loads(records_to_json(run_mismatch_sweep(cfg)))
        assert list(rows[0].keys()) == CSV_HEADER.split(",")

    def test_runtime_column_zero_by_default(self):
        cfg = _tiny_cfg(m_grid=(40,), eta_grid=(1.0,), trials=1)
        assert run_mismatch_sweep(cfg)[0].runtime_ms == 0.0

    def test_runtime_recorded_when_asked(self):
        cfg = _tiny_cfg(m_grid=(40,), eta_grid=(1.0,), trials=1,
                        record_runtime=True)
        assert run_mismatch_sweep(cfg)[0].runtime_ms > 0.0


class TestVerifyBounds:
    def test_empty(self):
        assert verify_bounds([]) == []

    def test_noiseless_optimal_cls_coverage(self):
        cfg = _tiny_cfg(eta_grid=(1.0,), m_grid=(60,), trials=5)
        cells = verify_bounds(run_mismatch_sweep(cfg))
        assert len(cells) == 1
        assert cells[0].coverage == 1.0

    def test_default_config_valid(self):
        cfg = default_config()
        assert cfg.trials >= 1 and cfg.noise.kind == "gaussian"
