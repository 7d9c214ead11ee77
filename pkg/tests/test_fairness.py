import pytest

from moralaudit.errors import ValidationError
from moralaudit.fairness import (
    direction_rates,
    dp_difference,
    eo_difference,
    fairness_report,
    group_rates,
    mfc,
)
from moralaudit.labels import LABELS, Platform

from testutil import make_record


@pytest.fixture
def eight_record_fixture():
    """care rates: twitter TPR 1.0 / FPR 0.5, reddit TPR 0.5 / FPR 0.0."""
    return [
        make_record("t1", "twitter", ["care"], ["care"]),
        make_record("t2", "twitter", ["care"], ["care"]),
        make_record("t3", "twitter", ["non-moral"], ["care", "non-moral"]),
        make_record("t4", "twitter", ["non-moral"], ["non-moral"]),
        make_record("r1", "reddit", ["care"], ["care"]),
        make_record("r2", "reddit", ["care"], []),
        make_record("r3", "reddit", ["non-moral"], ["non-moral"]),
        make_record("r4", "reddit", ["non-moral"], ["non-moral"]),
    ]


class TestGroupRates:
    def test_positive_rate_counting(self):
        recs = [
            make_record("a", "twitter", ["care"], ["care"]),
            make_record("b", "twitter", ["care"], ["care"]),
            make_record("c", "twitter", ["care"], ["care"]),
            make_record("d", "twitter", ["care"], []),
        ]
        rates = group_rates(recs)
        assert rates.get(Platform.TWITTER, "care").positive_rate == 0.75

    def test_tpr_undefined_when_no_gold_positives(self):
        recs = [make_record("a", "twitter", ["non-moral"], ["care"])]
        rates = group_rates(recs)
        assert rates.get(Platform.TWITTER, "care").tpr is None
        # and FPR is still defined
        assert rates.get(Platform.TWITTER, "care").fpr == 1.0

    def test_tpr_counting(self):
        recs = [
            make_record("a", "reddit", ["care"], ["care"]),
            make_record("b", "reddit", ["care"], []),
        ]
        rates = group_rates(recs)
        assert rates.get(Platform.REDDIT, "care").tpr == 0.5

    def test_missing_group_is_undefined(self):
        recs = [make_record("a", "twitter", ["care"], ["care"])]
        rates = group_rates(recs)
        assert rates.get(Platform.REDDIT, "care").positive_rate is None


class TestDpDifference:
    def test_hand_values(self, eight_record_fixture):
        rates = group_rates(eight_record_fixture)
        signed, abs_ = dp_difference(rates, "care")
        assert signed == pytest.approx(0.75 - 0.25)
        assert abs_ == pytest.approx(0.5)

    def test_equal_rates_zero(self):
        recs = [
            make_record("a", "twitter", ["care"], ["care"]),
            make_record("b", "reddit", ["care"], ["care"]),
        ]
        signed, abs_ = dp_difference(group_rates(recs), "care")
        assert signed == 0.0 and abs_ == 0.0

    def test_undefined_propagates(self):
        recs = [make_record("a", "twitter", ["care"], ["care"])]
        assert dp_difference(group_rates(recs), "care") is None


class TestEoDifference:
    def test_hand_values(self, eight_record_fixture):
        rates = group_rates(eight_record_fixture)
        assert eo_difference(rates, "care") == pytest.approx(0.5)

    def test_identical_rates_zero(self):
        recs = [
            make_record("a", "twitter", ["care"], ["care"]),
            make_record("b", "twitter", ["non-moral"], ["non-moral"]),
            make_record("c", "reddit", ["care"], ["care"]),
            make_record("d", "reddit", ["non-moral"], ["non-moral"]),
        ]
        assert eo_difference(group_rates(recs), "care") == 0.0

    def test_undefined_component_propagates(self):
        recs = [
            make_record("a", "twitter", ["non-moral"], []),
            make_record("b", "reddit", ["care"], ["care"]),
        ]
        assert eo_difference(group_rates(recs), "care") is None

    def test_swapping_groups_preserves_eo_and_negates_dp(self, eight_record_fixture):
        swapped = [
            make_record(
                r.id,
                "reddit" if r.group == Platform.TWITTER else "twitter",
                r.gold.names(),
                r.predicted.names(),
            )
            for r in eight_record_fixture
        ]
        orig, swap = group_rates(eight_record_fixture), group_rates(swapped)
        assert eo_difference(orig, "care") == eo_difference(swap, "care")
        s1, a1 = dp_difference(orig, "care")
        s2, a2 = dp_difference(swap, "care")
        assert s2 == -s1 and a2 == a1


class TestMfc:
    REFERENCE_DIFFS = dict(zip(LABELS, (0.22, 0.04, 0.05, 0.03, 0.08)))

    def test_reference_diff_vector(self):
        rates = {
            "MFRC->MFTC": {name: d for name, d in self.REFERENCE_DIFFS.items()},
            "MFTC->MFRC": {name: 0.0 for name in LABELS},
        }
        per_label, aggregate = mfc(rates)
        expected = {n: 1 - d for n, d in self.REFERENCE_DIFFS.items()}
        for name in LABELS:
            assert per_label[name] == pytest.approx(expected[name])
        assert aggregate == pytest.approx(0.916)

    def test_zero_diff_is_perfect(self):
        rates = {t: {n: 0.4 for n in LABELS} for t in ("MFRC->MFTC", "MFTC->MFRC")}
        per_label, aggregate = mfc(rates)
        assert all(v == 1.0 for v in per_label.values())
        assert aggregate == 1.0

    def test_care_reference_value(self):
        rates = {
            "MFRC->MFTC": {n: (0.0444 if n == "care" else 0.0) for n in LABELS},
            "MFTC->MFRC": {n: 0.0 for n in LABELS},
        }
        per_label, _ = mfc(rates)
        assert per_label["care"] == pytest.approx(0.9556)

    def test_missing_direction_rejected(self):
        with pytest.raises(ValidationError, match="two cross-domain directions"):
            mfc({"MFRC->MFTC": {n: 0.0 for n in LABELS}})

    def test_aggregate_is_mean_of_per_label(self):
        rates = {
            "MFRC->MFTC": {n: 0.1 * i for i, n in enumerate(LABELS)},
            "MFTC->MFRC": {n: 0.05 for n in LABELS},
        }
        per_label, aggregate = mfc(rates)
        assert aggregate == pytest.approx(sum(per_label.values()) / 5)


def test_direction_rates_counting():
    recs = [
        make_record("a", "twitter", ["care"], ["care"]),
        make_record("b", "twitter", ["care"], []),
    ]
    rates = direction_rates(recs)
    assert rates["care"] == 0.5
    assert rates["loyalty"] == 0.0


def test_fairness_report_mfc_equals_one_minus_dp(eight_record_fixture):
    twitter = [r for r in eight_record_fixture if r.group == Platform.TWITTER]
    reddit = [r for r in eight_record_fixture if r.group == Platform.REDDIT]
    report = fairness_report(
        eight_record_fixture, {"MFRC->MFTC": twitter, "MFTC->MFRC": reddit}
    )
    for name in LABELS:
        lf = report.per_label[name]
        assert lf.mfc == pytest.approx(1.0 - lf.dp_abs, abs=1e-12)
