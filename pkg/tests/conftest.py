"""Shared instances and the expensive session-scoped benchmark runs."""

import time

import numpy as np
import pytest

from infoanneal import (
    AnnealSchedule,
    CurveSpec,
    JointDistribution,
    ObjectiveKind,
    anneal,
    build_curve,
    classify_curve,
    four_gaussian_joint,
    two_cluster_joint,
)

ID = ObjectiveKind.INFORMATION_DISTORTION
IB = ObjectiveKind.INFORMATION_BOTTLENECK


@pytest.fixture(scope="session")
def four_gaussian():
    return four_gaussian_joint()


@pytest.fixture(scope="session")
def two_cluster():
    return two_cluster_joint()


@pytest.fixture(scope="session")
def toy_2x2():
    """Strictly concave K=2 instance (grid-search certified in test_curve)."""
    return JointDistribution(np.array([[0.4, 0.1], [0.1, 0.4]]))


@pytest.fixture(scope="session")
def k3n2_joint():
    """Small instance for exhaustive-grid comparisons."""
    return JointDistribution(np.array([
        [0.300, 0.015, 0.015],
        [0.015, 0.300, 0.015],
        [0.015, 0.015, 0.310],
    ]))


@pytest.fixture(scope="session")
def fg_anneal(four_gaussian):
    """Distortion anneal of the benchmark through its first transition."""
    t0 = time.time()
    schedule = AnnealSchedule(beta_max=1.5, step=0.005, rng_seed=0)
    result = anneal(ID, four_gaussian, 4, schedule)
    return result, time.time() - t0


@pytest.fixture(scope="session")
def tc_anneal(two_cluster):
    """Two-cluster N=2 anneal, well past its single transition."""
    t0 = time.time()
    schedule = AnnealSchedule(beta_max=2.2, step=0.005, rng_seed=0)
    result = anneal(ID, two_cluster, 2, schedule)
    return result, time.time() - t0


@pytest.fixture(scope="session")
def fg_curve_fine(four_gaussian):
    """Curve through the subcritical window of the benchmark."""
    t0 = time.time()
    spec = CurveSpec(i0_min=1e-4, i0_max=6e-3, n_points=30, n_classes=4, rng_seed=0)
    curve = build_curve(spec, ID, four_gaussian)
    classify_curve(curve, ID, four_gaussian)
    return curve, time.time() - t0


@pytest.fixture(scope="session")
def fg_slope_curve(four_gaussian):
    """Benchmark curve segment at exactly 1e-3 spacing for derivative checks."""
    t0 = time.time()
    spec = CurveSpec(i0_min=0.06, i0_max=0.075, n_points=16, n_classes=4, rng_seed=0)
    curve = build_curve(spec, ID, four_gaussian)
    return curve, time.time() - t0
