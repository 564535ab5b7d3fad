import json
import math
import subprocess
import sys

import numpy as np
import pytest

from fscatter.filters import (
    COVERED_BAND_FLOOR,
    INFINITE_TIME_SUPPORT,
    FilterBank,
    FourierFilter,
    ParameterError,
    build_scale_set,
    gaussian_support,
    generate_filterbank,
    morlet_support,
    mother_params,
    renormalize_littlewood_paley,
    sample_gaussian_scaling,
    sample_morlet,
)


class TestMotherParams:
    def test_single_wavelet_per_octave(self):
        mp = mother_params(1)
        assert mp.mu0 == pytest.approx(3 * math.pi / 4, rel=1e-15)
        assert mp.sigma0 == pytest.approx(math.sqrt(3) / 2, rel=1e-15)

    def test_sixteen_per_octave(self):
        # frozen from the closed forms (pi/2)(2^(-1/16)+1), sqrt(3)(1-2^(-1/16))
        mp = mother_params(16)
        assert mp.mu0 == pytest.approx(3.0749960426429586, rel=1e-15)
        assert mp.sigma0 == pytest.approx(0.07343327190430643, rel=1e-15)

    def test_limit_trends(self):
        mus = [mother_params(q).mu0 for q in range(1, 65)]
        sigs = [mother_params(q).sigma0 for q in range(1, 65)]
        assert all(a < b < math.pi for a, b in zip(mus, mus[1:]))
        assert all(a > b > 0 for a, b in zip(sigs, sigs[1:]))

    def test_rejects_zero(self):
        with pytest.raises(ParameterError):
            mother_params(0)


class TestScaleSet:
    def test_integer_powers(self):
        np.testing.assert_allclose(build_scale_set(1, 2), [1, 2, 4])

    def test_half_octave_steps(self):
        np.testing.assert_allclose(
            build_scale_set(2, 1), [1, math.sqrt(2), 2], rtol=1e-15
        )

    def test_count_and_endpoint(self):
        scales = build_scale_set(16, 9)
        assert len(scales) == 16 * 9 + 1
        assert scales[-1] == 512.0
        assert np.all(np.diff(scales) > 0)

    @pytest.mark.parametrize("q,j", [(0, 1), (1, 0), (0, 0)])
    def test_rejects_zero(self, q, j):
        with pytest.raises(ParameterError):
            build_scale_set(q, j)


class TestMorletSupport:
    def test_two_sigma_at_eps_exp_minus_two(self):
        mp = mother_params(4)
        lo, hi = morlet_support(1.0, mp.mu0, mp.sigma0, math.exp(-2))
        assert lo == pytest.approx(mp.mu0 - 2 * mp.sigma0, rel=1e-12)
        assert hi == math.pi  # mu0 + 2 sigma0 > pi at lam=1, so it clips
        lo2, hi2 = morlet_support(2.0, mp.mu0, mp.sigma0, math.exp(-2))
        assert lo2 == pytest.approx((mp.mu0 - 2 * mp.sigma0) / 2, rel=1e-12)
        assert hi2 == pytest.approx((mp.mu0 + 2 * mp.sigma0) / 2, rel=1e-12)

    def test_doubling_scale_halves_endpoints(self):
        mp = mother_params(16)  # narrow enough that nothing clips
        lo1, hi1 = morlet_support(2.0, mp.mu0, mp.sigma0, 1e-4)
        lo2, hi2 = morlet_support(4.0, mp.mu0, mp.sigma0, 1e-4)
        assert lo2 == pytest.approx(lo1 / 2, rel=1e-12)
        assert hi2 == pytest.approx(hi1 / 2, rel=1e-12)

    def test_width_at_q16(self):
        # frozen from 2 * sigma0 * sqrt(2 ln 1e4); at lam=1 the top clips at
        # pi, so check the unclipped interval one octave down
        mp = mother_params(16)
        lo, hi = morlet_support(2.0, mp.mu0, mp.sigma0, 1e-4)
        assert hi - lo == pytest.approx(0.6303412268236386 / 2, rel=1e-12)

    def test_clips_to_half_band(self):
        mp = mother_params(1)
        lo, hi = morlet_support(1.0, mp.mu0, mp.sigma0, 1e-6)
        assert lo == 0.0
        assert hi == math.pi

    @pytest.mark.parametrize("eps", [0.0, 1.0, -0.5, 2.0])
    def test_rejects_bad_epsilon(self, eps):
        mp = mother_params(2)
        with pytest.raises(ParameterError):
            morlet_support(1.0, mp.mu0, mp.sigma0, eps)


class TestSampleMorlet:
    def test_peak_is_near_one(self):
        n, q = 4096, 8
        mp = mother_params(q)
        f = sample_morlet(2.0, mp.mu0, mp.sigma0, 1e-6, n)
        sig = mp.sigma0 / 2.0
        bound = math.exp(-((math.pi / n) ** 2) / (2 * sig**2))
        assert f.values.max() <= 1.0
        assert f.values.max() >= bound

    def test_dc_bin_is_zero_for_any_scale(self):
        # admissibility: H(0) = 0 even when the interval reaches down to 0
        n = 256
        mp = mother_params(1)
        for lam in (1.0, 2.0, 8.0):
            f = sample_morlet(lam, mp.mu0, mp.sigma0, 1e-8, n)
            assert f.lo >= 1
            assert f.dense_half()[0] == 0.0

    @pytest.mark.parametrize(
        "q,lam,eps,n",
        [
            (1, 1.0, 1e-3, 256),
            (4, 2.0, 1e-4, 1024),
            (16, 32.0, 1e-7, 4096),
            (2, 1.5874010519681994, 0.01, 512),
        ],
    )
    def test_support_matches_dense_evaluation(self, q, lam, eps, n):
        mp = mother_params(q)
        f = sample_morlet(lam, mp.mu0, mp.sigma0, eps, n)
        w = 2 * math.pi * np.arange(n // 2 + 1) / n
        dense = np.exp(-0.5 * ((w - mp.mu0 / lam) / (mp.sigma0 / lam)) ** 2)
        dense[0] = 0.0
        assert np.all(f.values > eps)
        outside = np.ones(n // 2 + 1, bool)
        outside[f.lo : f.hi + 1] = False
        assert np.all(dense[outside] <= eps)

    def test_empty_filter_is_legal(self):
        mp = mother_params(1)
        f = sample_morlet(512.0, mp.mu0, mp.sigma0, 1e-4, 16)
        assert f.is_empty
        assert f.width == 0


class TestGaussianScaling:
    def test_global_averaging_sentinel(self):
        f = sample_gaussian_scaling(INFINITE_TIME_SUPPORT, 1e-4, 64)
        assert (f.lo, f.hi) == (0, 0)
        assert f.values[0] == 1.0

    def test_one_sigma_support_edge(self):
        lo, hi = gaussian_support(math.pi, math.exp(-0.5))
        assert lo == 0.0
        assert hi == pytest.approx(math.pi, rel=1e-15)

    def test_matches_dense_evaluation(self):
        n, sigma, eps = 1024, 0.3, 1e-5
        f = sample_gaussian_scaling(sigma, eps, n)
        w = 2 * math.pi * np.arange(n // 2 + 1) / n
        dense = np.exp(-0.5 * (w / sigma) ** 2)
        assert f.lo == 0
        assert f.values[0] == 1.0
        np.testing.assert_array_equal(f.values, dense[: f.hi + 1])
        assert np.all(dense[f.hi + 1 :] <= eps)

    @pytest.mark.parametrize("sigma", [0.0, -1.0])
    def test_rejects_nonpositive_bandwidth(self, sigma):
        with pytest.raises(ParameterError):
            sample_gaussian_scaling(sigma, 1e-4, 64)


class TestGenerateFilterbank:
    def test_counts_and_order(self):
        bank = generate_filterbank(1024, 2, 3, 1e-4)
        assert len(bank) == 2 * 3 + 1
        assert len(bank.filters) == 7
        np.testing.assert_allclose(bank.scales, build_scale_set(2, 3))

    def test_admissibility(self):
        bank = generate_filterbank(512, 1, 3, 1e-9, normalize=False)
        for f in bank.filters:
            assert f.dense_half()[0] == 0.0

    def test_support_nesting(self):
        bank = generate_filterbank(4096, 4, 4, 1e-4, normalize=False)
        centers = [
            (f.lo + f.hi) / 2 for f in bank.filters if not f.is_empty
        ]
        assert all(a > b for a, b in zip(centers, centers[1:]))

    def test_filters_match_individual_sampling(self):
        n, q, j, eps = 2048, 4, 3, 1e-5
        bank = generate_filterbank(n, q, j, eps, normalize=False)
        mp = mother_params(q)
        for lam, f in zip(bank.scales, bank.filters):
            single = sample_morlet(float(lam), mp.mu0, mp.sigma0, eps, n)
            assert (f.lo, f.hi) == (single.lo, single.hi)
            np.testing.assert_array_equal(f.values, single.values)

    def test_sparsity_stable_when_n_doubles(self):
        a = generate_filterbank(2**18, 16, 9, 1e-4).sparsity_percent()
        b = generate_filterbank(2**19, 16, 9, 1e-4).sparsity_percent()
        assert abs(a - b) < 0.001

    def test_sparsity_decreases_with_smaller_epsilon(self):
        n = 2**16
        tight = generate_filterbank(n, 16, 9, 1e-4).sparsity_percent()
        loose = generate_filterbank(n, 16, 9, 1e-7).sparsity_percent()
        assert loose < tight

    def test_describe_is_json_ready(self):
        bank = generate_filterbank(256, 2, 2, 1e-3)
        doc = json.loads(json.dumps(bank.describe()))
        assert doc["n"] == 256
        assert doc["normalized"] is True
        assert len(doc["scales"]) == len(doc["supports"]) == 5
        assert all(len(s) == 2 for s in doc["supports"])

    def test_generation_time_grows_linearly(self):
        # loose [2, 8] band around the x4 ideal for each quadrupling.  Each
        # size is timed in its own interpreter so every measurement sees the
        # same cold allocator state; in-process timings are skewed by which
        # buffer sizes earlier tests happen to have pooled.
        sizes = [2**16, 2**18, 2**20, 2**22]
        times = [_generation_time_subprocess(n) for n in sizes]
        ratios = [b / a for a, b in zip(times, times[1:])]
        assert all(2.0 <= r <= 8.0 for r in ratios), ratios


def _generation_time_subprocess(n):
    code = (
        "import time\n"
        "from fscatter.filters import generate_filterbank\n"
        f"generate_filterbank({n}, 16, 5, 1e-4)\n"
        "best = float('inf')\n"
        "for _ in range(3):\n"
        "    t0 = time.perf_counter()\n"
        f"    generate_filterbank({n}, 16, 5, 1e-4)\n"
        "    best = min(best, time.perf_counter() - t0)\n"
        "print(best)\n"
    )
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, check=True
    )
    return float(out.stdout)


class TestRenormalize:
    def test_single_filter_becomes_flat(self):
        n = 256
        mp = mother_params(2)
        f = sample_morlet(2.0, mp.mu0, mp.sigma0, 1e-3, n)
        scaling = sample_gaussian_scaling(INFINITE_TIME_SUPPORT, 1e-3, n)
        bank = FilterBank.from_filters([f], scaling, q=2, j=1, epsilon=1e-3)
        out = renormalize_littlewood_paley(bank)
        np.testing.assert_allclose(out.filters[0].values, 1.0, atol=1e-12)
        assert out.normalized

    def test_partition_of_unity(self):
        bank = generate_filterbank(2**12, 4, 4, 1e-4)
        total = bank.response_sum()
        covered = bank.covered_band()
        assert covered.any()
        assert np.abs(total[covered] - 1.0).max() < 1e-9

    def test_idempotent(self):
        bank = generate_filterbank(1024, 2, 3, 1e-4)
        again = renormalize_littlewood_paley(bank)
        for a, b in zip(bank.filters, again.filters):
            np.testing.assert_array_equal(a.values, b.values)

    def test_untouched_outside_covered_band(self):
        # a filter tail below the floor keeps its raw value
        n = 4096
        bank_raw = generate_filterbank(n, 1, 6, 1e-9, normalize=False)
        bank = renormalize_littlewood_paley(bank_raw)
        covered = bank_raw.covered_band()
        for raw, norm in zip(bank_raw.filters, bank.filters):
            if raw.is_empty:
                continue
            sl = slice(raw.lo, raw.hi + 1)
            off_band = ~covered[sl]
            if off_band.any():
                np.testing.assert_array_equal(
                    raw.values[off_band], norm.values[off_band]
                )

    def test_empty_filters_survive(self):
        # scales pushed far enough down that the smallest supports vanish
        bank = generate_filterbank(16, 1, 5, 1e-4)
        assert len(bank.filters) == 6
        assert any(f.is_empty for f in bank.filters)


class TestFourierFilterType:
    def test_rejects_inconsistent_sizes(self):
        with pytest.raises(ParameterError):
            FourierFilter(np.ones(3), 0, 1, 64)

    def test_values_nonnegative_and_frozen(self):
        bank = generate_filterbank(256, 2, 2, 1e-4)
        f = bank.filters[0]
        assert np.all(f.values >= 0)
        with pytest.raises(ValueError):
            f.values[0] = 2.0
