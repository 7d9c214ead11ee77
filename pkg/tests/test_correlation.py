import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from moralaudit.correlation import (
    MODE_BOOTSTRAP_POOLED,
    MODE_PER_LABEL,
    spearman,
    spearman_p,
    validate_mfc,
)
from moralaudit.errors import ValidationError

# Reference per-label vectors in fixed label order
# (authority, care, fairness, loyalty, non-moral)
MFC_VEC = [0.7781, 0.9556, 0.9499, 0.9666, 0.9205]
EO_VEC = [0.40, 0.26, 0.22, 0.20, 0.34]
DP_VEC = [0.22, 0.04, 0.05, 0.03, 0.08]


class TestSpearman:
    def test_monotone_identity(self):
        assert spearman([1, 2, 3], [10, 20, 30]) == pytest.approx(1.0)

    def test_reversal(self):
        assert spearman([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)

    def test_mfc_vs_eo_reference_value(self):
        assert spearman(MFC_VEC, EO_VEC) == pytest.approx(-0.9, abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ValidationError, match="length mismatch"):
            spearman([1, 2, 3], [1, 2])

    def test_too_short(self):
        with pytest.raises(ValidationError):
            spearman([1, 2], [1, 2])

    def test_constant_vector_undefined(self):
        assert spearman([1, 1, 1], [1, 2, 3]) is None

    def test_self_correlation(self):
        x = [0.3, 0.1, 0.9, 0.5, 0.2]
        assert spearman(x, x) == pytest.approx(1.0)
        assert spearman(x, [-v for v in x]) == pytest.approx(-1.0)

    def test_ties_get_average_ranks(self):
        # x ties at positions 0,1; spearman must still be exact -1 vs 1-x
        x = [0.2, 0.2, 0.5, 0.9]
        y = [1 - v for v in x]
        assert spearman(x, y) == pytest.approx(-1.0, abs=1e-15)

    @given(
        st.lists(st.integers(min_value=-1000, max_value=1000), min_size=3, max_size=10, unique=True),
    )
    def test_invariant_under_increasing_transform(self, x):
        y = list(np.random.default_rng(0).permutation(x))
        base = spearman(x, y)
        transformed = spearman([3 * v + 7 for v in x], y)
        assert transformed == pytest.approx(base, abs=1e-12)
        negated = spearman([-v for v in x], y)
        assert negated == pytest.approx(-base, abs=1e-12)


class TestSpearmanP:
    def test_perfect_negative_n5_exact(self):
        assert spearman_p(-1.0, 5, "exact") == pytest.approx(2 / 120)

    def test_perfect_positive_n3_exact(self):
        assert spearman_p(1.0, 3, "exact") == pytest.approx(2 / 6)

    def test_zero_rho_asymptotic(self):
        assert spearman_p(0.0, 10, "asymptotic") == pytest.approx(1.0)

    def test_abs_one_asymptotic_convention(self):
        assert spearman_p(-1.0, 5, "asymptotic") == 0.0

    def test_symmetry(self):
        for rho in (0.3, 0.7, 0.9):
            assert spearman_p(rho, 5, "exact") == spearman_p(-rho, 5, "exact")
            assert spearman_p(rho, 8, "asymptotic") == pytest.approx(
                spearman_p(-rho, 8, "asymptotic")
            )

    def test_exact_limited_to_small_n(self):
        with pytest.raises(ValidationError):
            spearman_p(0.5, 12, "exact")

    def test_exact_matches_brute_enumeration_n4(self):
        # independent oracle: enumerate the 24 permutations directly
        from itertools import permutations

        base = [1.0, 2.0, 3.0, 4.0]
        rho_obs = spearman([1, 2, 3, 4], [2, 1, 4, 3])
        count = 0
        for perm in permutations(base):
            r = spearman(base, list(perm))
            if abs(r) >= abs(rho_obs) - 1e-12:
                count += 1
        assert spearman_p(rho_obs, 4, "exact") == pytest.approx(count / 24)


class TestValidateMfc:
    def _vectors(self):
        return {
            "mfc": MFC_VEC,
            "f1": [0.17, 0.25, 0.22, 0.23, 0.80],
            "precision": [0.44, 0.62, 0.50, 0.56, 0.71],
            "recall": [0.11, 0.21, 0.16, 0.16, 0.91],
            "dp": DP_VEC,
            "eo": EO_VEC,
        }

    def test_dp_rho_is_minus_one(self):
        # mfc = 1 - dp holds for the reference vectors up to rounding; use the
        # exact construction so the rank reversal is guaranteed
        vectors = self._vectors()
        vectors["mfc"] = [1 - d for d in vectors["dp"]]
        report = validate_mfc(vectors, MODE_PER_LABEL)
        assert report.entries["dp"].rho == pytest.approx(-1.0)
        assert report.entries["dp"].p_value == pytest.approx(2 / 120)

    def test_eo_rho_reference_value(self):
        report = validate_mfc(self._vectors(), MODE_PER_LABEL)
        assert report.entries["eo"].rho == pytest.approx(-0.9, abs=1e-3)

    def test_missing_vector_rejected(self):
        vectors = self._vectors()
        del vectors["recall"]
        with pytest.raises(ValidationError, match="recall"):
            validate_mfc(vectors, MODE_PER_LABEL)

    def test_pooled_mode_uses_asymptotic_p(self):
        rng = np.random.default_rng(3)
        n = 50
        x = list(rng.random(n))
        vectors = {
            "mfc": x,
            "f1": list(rng.random(n)),
            "precision": list(rng.random(n)),
            "recall": list(rng.random(n)),
            "dp": [1 - v for v in x],
            "eo": list(rng.random(n)),
        }
        report = validate_mfc(vectors, MODE_BOOTSTRAP_POOLED)
        assert report.mode == MODE_BOOTSTRAP_POOLED
        assert report.entries["dp"].rho == pytest.approx(-1.0)
        assert report.entries["dp"].p_value == 0.0
        assert all(e.n == n for e in report.entries.values())

    def test_constant_baseline_reported_undefined(self):
        vectors = self._vectors()
        vectors["eo"] = [0.2] * 5
        report = validate_mfc(vectors, MODE_PER_LABEL)
        assert report.entries["eo"].rho is None
        assert report.entries["eo"].p_value is None
