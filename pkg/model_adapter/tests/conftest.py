import pytest

from moraltune.config import EncoderSize, TrainConfig

from adapter_testutil import write_canonical


@pytest.fixture(scope="session")
def tiny_config():
    return TrainConfig(
        epochs=1, batch_size=16, max_seq_length=32, seed=7, encoder_size=EncoderSize()
    )


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    write_canonical(root / "twitter_train.tsv", "twitter", 100, seed=1)
    write_canonical(root / "twitter_val.tsv", "twitter", 20, seed=2)
    write_canonical(root / "twitter_eval.tsv", "twitter", 30, seed=3)
    write_canonical(root / "reddit_eval.tsv", "reddit", 30, seed=4)
    return root


@pytest.fixture(scope="session")
def artifact_dir(tmp_path_factory, corpus_dir, tiny_config):
    from moraltune.train import train

    out = tmp_path_factory.mktemp("artifact")
    train(corpus_dir / "twitter_train.tsv", corpus_dir / "twitter_val.tsv", tiny_config, out)
    return out
