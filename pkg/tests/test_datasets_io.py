"""Dataset generation and the file formats."""

import json

import numpy as np
import pytest

from infoanneal import (
    GaussianMixtureSpec,
    ObjectiveKind,
    gaussian_mixture_joint,
    load_joint,
    save_joint,
    solve_at_beta,
)
from infoanneal.annealing import tangent_perturbation
from infoanneal.datasets import DEFAULT_MEANS, two_cluster_joint
from infoanneal.exceptions import DataFormatError
from infoanneal.information import uniform_quantizer
from infoanneal.io import (
    load_summary_json,
    summary_dict,
    write_branches_csv,
    write_curve_csv,
    write_summary_json,
)
from infoanneal.state import AnnealResult, BifurcationEvent

ID = ObjectiveKind.INFORMATION_DISTORTION


def _isotropic(sigma, n):
    return tuple(((sigma ** 2, 0.0), (0.0, sigma ** 2)) for _ in range(n))


class TestGaussianMixture:
    def test_single_centered_component_reflection_symmetric(self):
        spec = GaussianMixtureSpec(
            means=((0.5, 0.5),),
            covariances=_isotropic(0.15, 1),
            weights=(1.0,),
            grid_shape=(9, 9),
        )
        p = gaussian_mixture_joint(spec)
        flipped = p.pxy[::-1, ::-1]
        assert np.abs(p.pxy - flipped).max() < 1e-12

    def test_default_spec_is_informative(self, four_gaussian):
        assert four_gaussian.mutual_information > 0.1
        assert four_gaussian.pxy.shape == (52, 52)

    def test_default_spec_modes_recovered_by_annealing(self, four_gaussian):
        # hard class assignments at large beta should align with the
        # mixture components generating each symbol column
        rng = np.random.default_rng(50)
        q0 = tangent_perturbation(rng, uniform_quantizer(4, 52), 1e-2)
        sp = solve_at_beta(ID, four_gaussian, q0, 6.0)
        labels = np.argmax(sp.q, axis=0)
        centers = np.array([m[1] for m in DEFAULT_MEANS])
        ys = (np.arange(52) + 0.5) / 52
        component = np.argmin(np.abs(ys[:, None] - centers[None, :]), axis=1)
        majority = {}
        for cls in range(4):
            members = component[labels == cls]
            assert members.size > 0
            counts = np.bincount(members, minlength=4)
            majority[cls] = int(np.argmax(counts))
            assert counts.max() / members.size > 0.8
        assert sorted(majority.values()) == [0, 1, 2, 3]

    def test_zero_weight_rejected(self):
        with pytest.raises(DataFormatError, match="strictly positive"):
            GaussianMixtureSpec(
                means=DEFAULT_MEANS,
                covariances=_isotropic(0.1, 4),
                weights=(1.0, 0.0, 0.0, 0.0),
            )

    def test_degenerate_covariance_rejected(self):
        with pytest.raises(DataFormatError, match="covariance"):
            GaussianMixtureSpec(
                means=((0.5, 0.5),),
                covariances=(((0.01, 0.0), (0.0, 0.0)),),
                weights=(1.0,),
            )

    def test_tiny_grid_rejected(self):
        with pytest.raises(DataFormatError, match="grid"):
            GaussianMixtureSpec(
                means=((0.5, 0.5),),
                covariances=_isotropic(0.1, 1),
                weights=(1.0,),
                grid_shape=(1, 5),
            )

    def test_generator_deterministic(self):
        a = gaussian_mixture_joint(GaussianMixtureSpec.default())
        b = gaussian_mixture_joint(GaussianMixtureSpec.default())
        assert np.array_equal(a.pxy, b.pxy)

    def test_jitter_consumes_seed(self):
        base = GaussianMixtureSpec.default()
        jit = GaussianMixtureSpec(jitter=0.01, rng_seed=3)
        a = gaussian_mixture_joint(jit)
        b = gaussian_mixture_joint(jit)
        assert np.array_equal(a.pxy, b.pxy)
        assert not np.array_equal(a.pxy, gaussian_mixture_joint(base).pxy)

    def test_diagonal_constructor(self):
        spec = GaussianMixtureSpec.diagonal(3, sigma=0.12, grid_shape=(10, 10))
        p = gaussian_mixture_joint(spec)
        assert p.pxy.shape == (10, 10)
        assert p.mutual_information > 0


class TestJointRoundTrip:
    def test_round_trip_bit_identical(self, four_gaussian, tmp_path):
        path = tmp_path / "joint.csv"
        save_joint(four_gaussian, path)
        again = load_joint(path)
        assert np.array_equal(four_gaussian.pxy, again.pxy)

    def test_negative_entry_rejected_with_location(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("2,2\n0.6,-0.1\n0.3,0.2\n")
        with pytest.raises(DataFormatError, match="row 0, column 1"):
            load_joint(path)

    def test_wrong_mass_rejected_with_sum(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("2,2\n0.5,0.18\n0.2,0.1\n")
        with pytest.raises(DataFormatError, match="0.98"):
            load_joint(path)

    def test_zero_column_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("2,2\n0.5,0\n0.5,0\n")
        with pytest.raises(DataFormatError, match="zero marginal"):
            load_joint(path)

    def test_malformed_header_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("2\n0.5,0.5\n")
        with pytest.raises(DataFormatError, match="header"):
            load_joint(path)

    def test_row_count_mismatch_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("3,2\n0.5,0.1\n0.2,0.2\n")
        with pytest.raises(DataFormatError, match="expected 3 data rows"):
            load_joint(path)


class TestResultWriters:
    def test_empty_branches_header_only(self, tmp_path):
        path = tmp_path / "branches.csv"
        write_branches_csv(AnnealResult(branches=[], events=[]), path)
        text = path.read_text().strip().splitlines()
        assert text == [
            "beta,branch_id,I_xyn,G,kkt_residual,solves_lagrangian,solves_constrained"
        ]

    def test_branch_rows_carry_classification(self, two_cluster, tc_anneal, tmp_path):
        result, _ = tc_anneal
        path = tmp_path / "branches.csv"
        write_branches_csv(result, path)
        lines = path.read_text().strip().splitlines()
        assert len(lines) == 1 + sum(len(br) for br in result.branches)
        first = lines[1].split(",")
        assert len(first) == 7
        assert first[5] in ("true", "false", "")

    def test_curve_csv_three_rows(self, k3n2_joint, tmp_path):
        from infoanneal import CurveSpec, build_curve

        curve = build_curve(CurveSpec(0.02, 0.12, 3, 2), ID, k3n2_joint)
        path = tmp_path / "curve.csv"
        write_curve_csv(curve, path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "I0,R,beta,branch_id,kkt_residual"
        assert len(lines) == 4

    def test_summary_json_round_trip(self, tmp_path):
        events = [BifurcationEvent(beta=1.25, kind="pitchfork_like",
                                   eigenvector=None, parent_branch=0)]
        summary = summary_dict(events=events)
        path = tmp_path / "summary.json"
        write_summary_json(summary, path)
        again = load_summary_json(path)
        assert again == json.loads(json.dumps(summary))
        assert again["bifurcations"] == [{"beta": 1.25, "kind": "pitchfork_like"}]
