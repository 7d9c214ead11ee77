import numpy as np
import pytest

from moralaudit.errors import ValidationError
from moralaudit.resampling import (
    BootstrapSpec,
    bootstrap_ci,
    bootstrap_ci_many,
    percentile_interval,
    resample_indices,
)


def mean_stat(xs):
    return float(np.mean(xs))


class TestSpec:
    def test_defaults(self):
        spec = BootstrapSpec(seed=1)
        assert spec.n_resamples == 1000
        assert spec.level == 0.95

    @pytest.mark.parametrize("kwargs", [{"n_resamples": 0}, {"level": 0.0}, {"level": 1.0}])
    def test_invalid(self, kwargs):
        with pytest.raises(ValidationError):
            BootstrapSpec(seed=0, **kwargs)


class TestBootstrapCi:
    def test_degenerate_constant_data(self):
        est = bootstrap_ci(mean_stat, [1.0, 1.0, 1.0], BootstrapSpec(n_resamples=100, seed=0))
        assert (est.point, est.lo, est.hi) == (1.0, 1.0, 1.0)

    def test_seeded_determinism(self):
        data = list(np.random.default_rng(5).normal(size=50))
        spec = BootstrapSpec(n_resamples=200, seed=99)
        a = bootstrap_ci(mean_stat, data, spec)
        b = bootstrap_ci(mean_stat, data, spec)
        assert a == b

    def test_lo_le_hi(self):
        data = list(np.random.default_rng(7).normal(size=30))
        est = bootstrap_ci(mean_stat, data, BootstrapSpec(n_resamples=100, seed=3))
        assert est.lo <= est.hi

    def test_widening_level_never_shrinks(self):
        data = list(np.random.default_rng(11).normal(size=40))
        narrow = bootstrap_ci(mean_stat, data, BootstrapSpec(n_resamples=300, level=0.90, seed=2))
        wide = bootstrap_ci(mean_stat, data, BootstrapSpec(n_resamples=300, level=0.99, seed=2))
        assert wide.lo <= narrow.lo
        assert wide.hi >= narrow.hi

    def test_empty_records_rejected(self):
        with pytest.raises(ValidationError):
            bootstrap_ci(mean_stat, [], BootstrapSpec(seed=0))

    def test_undefined_resamples_skipped(self):
        # statistic undefined unless the resample contains a positive value
        def stat(xs):
            pos = [x for x in xs if x > 0]
            return float(np.mean(pos)) if pos else None

        data = [1.0] * 5 + [-1.0] * 5
        est = bootstrap_ci(stat, data, BootstrapSpec(n_resamples=100, seed=4))
        assert est.lo <= est.hi

    def test_all_undefined_is_error(self):
        def stat(xs):
            return None if len(xs) > 0 else 0.0

        with pytest.raises(ValidationError, match="undefined"):
            bootstrap_ci(stat, [1.0, 2.0], BootstrapSpec(n_resamples=10, seed=0))

    def test_shared_resample_stream_across_statistics(self):
        data = list(np.random.default_rng(13).normal(size=25))
        spec = BootstrapSpec(n_resamples=150, seed=8)
        many = bootstrap_ci_many({"mean": mean_stat}, data, spec)
        single = bootstrap_ci(mean_stat, data, spec)
        assert many["mean"] == single


class TestSubSeeds:
    def test_resample_indices_deterministic_per_index(self):
        spec = BootstrapSpec(seed=21)
        a = resample_indices(10, spec, 3)
        b = resample_indices(10, spec, 3)
        assert (a == b).all()

    def test_different_resamples_differ(self):
        spec = BootstrapSpec(seed=21)
        assert not (resample_indices(50, spec, 0) == resample_indices(50, spec, 1)).all()


class TestPercentile:
    def test_nearest_rank_small_sample(self):
        stats = [1.0, 2.0, 3.0, 4.0]
        lo, hi = percentile_interval(stats, 0.5)
        assert lo == 1.0 and hi == 3.0

    def test_full_range_at_extreme_level(self):
        stats = list(range(100))
        lo, hi = percentile_interval([float(s) for s in stats], 0.999)
        assert lo == 0.0 and hi == 99.0
