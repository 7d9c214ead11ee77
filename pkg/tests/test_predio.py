import pytest
from hypothesis import given, settings, strategies as st

from moralaudit.errors import ConsistencyError, ParseError, ValidationError
from moralaudit.labels import LabelSet, Platform
from moralaudit.predio import (
    PredictionRecord,
    PredictionSet,
    read_predictions,
    sigmoid,
    validate_direction,
    write_predictions,
)

from testutil import make_record, make_set


@pytest.fixture
def eight_record_set():
    recs = [
        make_record(f"id{i}", "twitter" if i % 2 else "reddit", ["care"], ["care", "loyalty"])
        for i in range(8)
    ]
    return make_set(recs)


def test_roundtrip_eight_records(tmp_path, eight_record_set):
    path = tmp_path / "preds.tsv"
    write_predictions(eight_record_set, path)
    back = read_predictions(path)
    assert back.records == eight_record_set.records
    assert back.model == eight_record_set.model
    assert back.threshold == eight_record_set.threshold
    # writing the re-read set reproduces the bytes
    path2 = tmp_path / "again.tsv"
    write_predictions(back, path2)
    assert path2.read_bytes() == path.read_bytes()


def test_gold_arity_error_names_line(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text(
        "#moralaudit-predictions\tv=1\tmodel=m\tdirection=MFRC->MFTC\tthreshold=0.5\n"
        "a\ttwitter\t10000\t10000\n"
        "b\ttwitter\t1000\t10000\n"
    )
    with pytest.raises(ParseError, match="line 3: gold arity 4"):
        read_predictions(path)


def test_logit_zero_at_threshold_half_needs_positive_bit():
    # sigmoid(0) = 0.5 >= 0.5, so the predicted bit must be 1
    rec = PredictionRecord(
        id="a",
        group=Platform.TWITTER,
        gold=LabelSet.from_bitstring("10000"),
        predicted=LabelSet.from_bitstring("10000"),
        logits=(0.0, -5.0, -5.0, -5.0, -5.0),
    )
    rec.check_threshold_consistency(0.5)  # accepted

    bad = PredictionRecord(
        id="a",
        group=Platform.TWITTER,
        gold=LabelSet.from_bitstring("10000"),
        predicted=LabelSet.from_bitstring("00000"),
        logits=(0.0, -5.0, -5.0, -5.0, -5.0),
    )
    with pytest.raises(ConsistencyError):
        bad.check_threshold_consistency(0.5)


def test_duplicate_id_rejected():
    recs = [
        make_record("same", "twitter", ["care"], ["care"]),
        make_record("same", "reddit", ["care"], ["care"]),
    ]
    with pytest.raises(ValidationError, match="duplicate"):
        make_set(recs)


def test_empty_set_refused():
    with pytest.raises(ValidationError, match="at least one record"):
        make_set([])


def test_missing_header_field(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("#moralaudit-predictions\tv=1\tmodel=m\tthreshold=0.5\na\ttwitter\t10000\t10000\n")
    with pytest.raises(ParseError, match="direction"):
        read_predictions(path)


def test_logits_omitted_when_absent(tmp_path, eight_record_set):
    path = tmp_path / "preds.tsv"
    write_predictions(eight_record_set, path)
    lines = path.read_text().splitlines()
    assert all(len(line.split("\t")) == 4 for line in lines[1:])


@pytest.mark.parametrize("tag", ["MFRC->MFTC", "MFTC->MFRC", "MFTC->MFTC", "MFRC<->MFTC"])
def test_direction_tags_accepted(tag):
    validate_direction(tag)


@pytest.mark.parametrize("tag", ["", "MFTC", "reddit->twitter", "MFTC<->MFTC"])
def test_direction_tags_rejected(tag):
    with pytest.raises(ValidationError):
        validate_direction(tag)


# ---------------------------------------------------------------------------
# Property: round-trip identity over randomized sets

bits = st.tuples(*([st.integers(0, 1)] * 5))
logit_floats = st.floats(min_value=-30, max_value=30, allow_nan=False)


@st.composite
def prediction_sets(draw):
    threshold = draw(st.floats(min_value=0.1, max_value=0.9))
    n = draw(st.integers(1, 12))
    with_logits = draw(st.booleans())
    records = []
    for i in range(n):
        group = draw(st.sampled_from(list(Platform)))
        gold = draw(bits.filter(any))
        if with_logits:
            logits = tuple(draw(logit_floats) for _ in range(5))
            pred = tuple(1 if sigmoid(z) >= threshold else 0 for z in logits)
        else:
            logits = None
            pred = draw(bits)
        records.append(
            PredictionRecord(
                id=f"r{i}", group=group, gold=LabelSet(gold), predicted=LabelSet(pred), logits=logits
            )
        )
    direction = draw(st.sampled_from(["MFRC->MFTC", "MFTC->MFRC", "MFTC->MFTC"]))
    return PredictionSet(records=records, model="hyp", direction=direction, threshold=threshold)


@settings(max_examples=50, deadline=None)
@given(pset=prediction_sets())
def test_roundtrip_property(tmp_path_factory, pset):
    path = tmp_path_factory.mktemp("predio") / "p.tsv"
    write_predictions(pset, path)
    back = read_predictions(path)
    assert back.records == pset.records
    assert back.threshold == pset.threshold
    assert back.direction == pset.direction
