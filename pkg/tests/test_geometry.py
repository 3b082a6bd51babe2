import math

import numpy as np
import pytest

from strucrec.constraints import FeasibleSet
from strucrec.exceptions import InsufficientSamplesError, ValidationError
from strucrec.geometry import (
    ConeSpec,
    descent_cone_cap,
    euclidean_ball,
    gaussian_width_mc,
    l1_cap,
    min_samples_m1,
    phi,
    phi_ratio_monotone_check,
    sample_size_m0,
    sphere,
    width_bound_sparse,
)
from strucrec.rng import RngSpec


class TestPhi:
    def test_exact_values(self):
        assert phi(1.0) == pytest.approx(math.sqrt(2.0 / math.pi), abs=1e-10)
        assert phi(2.0) == pytest.approx(math.sqrt(math.pi / 2.0), abs=1e-10)

    def test_bracket(self):
        # 0.50245 t <= phi(t)^2 <= t on a log grid
        for t in np.geomspace(1.0, 1e6, 200):
            p2 = phi(t) ** 2
            assert 0.50245 * t <= p2 <= t

    def test_ratio_monotone(self):
        grid = np.geomspace(1.0, 1e6, 200)
        for a, b in zip(grid[:-1], grid[1:]):
            assert phi_ratio_monotone_check(a, b)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValidationError):
            phi(0.0)


class TestSampleSizes:
    def test_m0_inverts_phi(self):
        ss = sample_size_m0(omega=9.0, u=1.0)
        assert phi(ss.exact) == pytest.approx(10.0, abs=1e-8)
        assert ss.approx == pytest.approx(100.0)
        # phi(t)^2 in [t-1, t] puts the exact inverse just above the square
        assert ss.approx <= ss.exact <= ss.approx + 1.0

    def test_m1(self):
        assert min_samples_m1(3.0) == 9.0
        with pytest.raises(ValidationError):
            min_samples_m1(-1.0)

    def test_width_bound_sparse_values(self):
        # frozen reference values of sqrt(2 s log(n/s)) + 1.5 sqrt(s)
        assert width_bound_sparse(1, 2) == pytest.approx(2.6774, abs=1e-3)
        assert width_bound_sparse(5, 128) == pytest.approx(9.0483, abs=1e-3)

    def test_width_bound_domain(self):
        with pytest.raises(ValidationError):
            width_bound_sparse(0, 10)
        with pytest.raises(ValidationError):
            width_bound_sparse(11, 10)


class TestWidthEstimates:
    def test_ball_matches_phi(self):
        for n in (2, 16):
            est = gaussian_width_mc(euclidean_ball(n), 4000, RngSpec(11, n))
            assert abs(est.mean - phi(n)) <= 4 * est.stderr

    def test_sphere_equals_ball(self):
        a = gaussian_width_mc(sphere(8), 2000, RngSpec(12))
        b = gaussian_width_mc(euclidean_ball(8), 2000, RngSpec(12))
        assert a.mean == pytest.approx(b.mean)

    def test_l1_cap_inside_ball(self):
        cap = gaussian_width_mc(l1_cap(3, 32), 1000, RngSpec(13))
        ball = gaussian_width_mc(euclidean_ball(32), 1000, RngSpec(13))
        slack = 4 * (cap.stderr + ball.stderr)
        assert cap.mean <= ball.mean + slack

    def test_requires_samples(self):
        with pytest.raises(InsufficientSamplesError):
            gaussian_width_mc(euclidean_ball(4), 99, RngSpec(0))

    def test_deterministic(self):
        a = gaussian_width_mc(l1_cap(2, 16), 500, RngSpec(14))
        b = gaussian_width_mc(l1_cap(2, 16), 500, RngSpec(14))
        assert a.mean == b.mean and a.stderr == b.stderr


class TestDescentCone:
    def test_is_descent(self):
        x = np.array([1.0, 0.0, 0.0])
        cone = ConeSpec.at(x, FeasibleSet("l1", 1.0))
        assert cone.is_descent([-0.5, 0.0, 0.0])
        assert not cone.is_descent([0.5, 0.0, 0.0])

    def test_zero_anchor_width_zero(self):
        cone = ConeSpec.at(np.zeros(6), FeasibleSet("l1", 1.0))
        est = gaussian_width_mc(descent_cone_cap(cone), 200, RngSpec(15))
        assert est.mean == 0.0

    def test_cap_below_full_sphere(self):
        # the unit-sphere cap of a proper cone is narrower than the sphere
        x = np.zeros(16)
        x[:3] = [1.0, -2.0, 0.5]
        cone = ConeSpec.at(x, FeasibleSet("l1", float(np.abs(x).sum())))
        est = gaussian_width_mc(descent_cone_cap(cone), 300, RngSpec(16))
        full = gaussian_width_mc(sphere(16), 300, RngSpec(16))
        assert 0.0 < est.mean < full.mean

    def test_l0_cone_width_positive(self):
        x = np.zeros(12)
        x[[1, 4]] = [1.0, -1.0]
        cone = ConeSpec.at(x, FeasibleSet("l0", 2))
        est = gaussian_width_mc(descent_cone_cap(cone), 200, RngSpec(17))
        assert est.mean > 0.0
