"""Estimator API: sklearn conventions and end-to-end behavior."""

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from infoanneal import AnnealedQuantizer, RelevanceCompressionCurve


class TestAnnealedQuantizer:
    def test_get_set_params_and_clone(self):
        est = AnnealedQuantizer(n_classes=3, beta_max=1.4, random_state=11)
        params = est.get_params()
        assert params["n_classes"] == 3
        assert params["beta_max"] == 1.4
        cloned = clone(est)
        assert cloned.get_params() == params
        est.set_params(n_classes=2)
        assert est.get_params()["n_classes"] == 2

    def test_not_fitted_errors(self):
        est = AnnealedQuantizer()
        with pytest.raises(NotFittedError):
            est.transform([0, 1])
        with pytest.raises(NotFittedError):
            est.predict([0])

    def test_fit_two_cluster(self, two_cluster):
        est = AnnealedQuantizer(n_classes=2, beta_max=2.0, step=0.02).fit(
            two_cluster.pxy
        )
        assert est.quantizer_.shape == (2, 12)
        assert np.abs(est.quantizer_.sum(axis=0) - 1).max() < 1e-10
        assert set(est.labels_) == {0, 1}
        # symbols split into the two diagonal clusters contiguously
        assert len(set(est.labels_[:5])) == 1
        assert len(set(est.labels_[-5:])) == 1
        assert est.labels_[0] != est.labels_[-1]
        assert len(est.bifurcations_) >= 1

    def test_transform_and_predict(self, two_cluster):
        est = AnnealedQuantizer(n_classes=2, beta_max=1.8).fit(two_cluster)
        member = est.transform([0, 5, 11])
        assert member.shape == (3, 2)
        assert np.abs(member.sum(axis=1) - 1).max() < 1e-10
        pred = est.predict([0, 5, 11])
        assert np.array_equal(pred, est.labels_[[0, 5, 11]])

    def test_fit_predict_matches_labels(self, two_cluster):
        est = AnnealedQuantizer(n_classes=2, beta_max=1.8)
        labels = est.fit_predict(two_cluster.pxy)
        assert np.array_equal(labels, est.labels_)

    def test_deterministic_for_fixed_state(self, two_cluster):
        a = AnnealedQuantizer(n_classes=2, beta_max=1.6, random_state=4).fit(two_cluster)
        b = AnnealedQuantizer(n_classes=2, beta_max=1.6, random_state=4).fit(two_cluster)
        assert np.array_equal(a.quantizer_, b.quantizer_)


class TestRelevanceCompressionCurve:
    def test_params_and_clone(self):
        est = RelevanceCompressionCurve(n_classes=2, n_points=9)
        assert clone(est).get_params() == est.get_params()

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            RelevanceCompressionCurve().predict([0.1])

    def test_fit_toy(self, toy_2x2):
        est = RelevanceCompressionCurve(n_classes=2, n_points=12).fit(toy_2x2)
        assert len(est.curve_) == 12
        assert np.all(np.diff(est.r_) <= 1e-6)
        assert np.all(est.beta_ >= 0)
        assert est.report_ is not None
        assert est.report_.sign_changes == []

    def test_predict_interpolates(self, toy_2x2):
        est = RelevanceCompressionCurve(n_classes=2, n_points=10).fit(toy_2x2)
        at_grid = est.predict(est.i0_)
        assert np.abs(at_grid - est.r_).max() < 1e-12
        mid = 0.5 * (est.i0_[0] + est.i0_[1])
        val = est.predict([mid])[0]
        assert min(est.r_[0], est.r_[1]) - 1e-12 <= val <= max(est.r_[0], est.r_[1]) + 1e-12
