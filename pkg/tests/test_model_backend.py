"""Offline checks for the exported-model adapter using a tiny randomly
initialised masked LM saved to a temporary bundle directory."""

import shutil
from importlib import resources

import pytest

torch = pytest.importorskip("torch")
transformers = pytest.importorskip("transformers")

from maskstego import BackendError, ModelBackend, StegoConfig, decode, encode
from maskstego.backends import entropy
from maskstego.bits import BitString
from maskstego.eligibility import StopwordList
from maskstego.tokenizer import MASK_TOKEN, Vocabulary


@pytest.fixture(scope="module")
def bundle(tmp_path_factory):
    from transformers import BertConfig, BertForMaskedLM

    outdir = tmp_path_factory.mktemp("bundle")
    data = resources.files("maskstego.data").joinpath("demo_vocab.txt").read_bytes()
    (outdir / "vocab.txt").write_bytes(data)
    vocab_size = len(data.decode().splitlines())
    torch.manual_seed(0)
    config = BertConfig(vocab_size=vocab_size, hidden_size=32,
                        num_hidden_layers=2, num_attention_heads=2,
                        intermediate_size=64, max_position_embeddings=64)
    BertForMaskedLM(config).save_pretrained(outdir)
    return outdir


def masked(tokens, positions):
    out = list(tokens)
    for p in positions:
        out[p] = MASK_TOKEN
    return tuple(out)


def test_predict_is_deterministic_and_normalized(bundle):
    backend = ModelBackend(bundle)
    tokens = masked(("the", "cat", "sat", "on", "the", "mat", "."), (1, 5))
    a = backend.predict(tokens, (1, 5))
    b = backend.predict(tokens, (1, 5))
    assert a == b
    for dist in a:
        assert abs(sum(dist.probs.values()) - 1.0) < 1e-4
        assert entropy(dist) > 0


def test_digest_tracks_weights(bundle, tmp_path):
    from transformers import BertConfig, BertForMaskedLM

    assert ModelBackend(bundle).digest == ModelBackend(bundle).digest
    other = tmp_path / "other"
    other.mkdir()
    shutil.copy(bundle / "vocab.txt", other / "vocab.txt")
    torch.manual_seed(1)
    vocab_size = len((bundle / "vocab.txt").read_text().splitlines())
    config = BertConfig(vocab_size=vocab_size, hidden_size=32,
                        num_hidden_layers=2, num_attention_heads=2,
                        intermediate_size=64, max_position_embeddings=64)
    BertForMaskedLM(config).save_pretrained(other)
    assert ModelBackend(other).digest != ModelBackend(bundle).digest


def test_vocab_mismatch_rejected(bundle, tmp_path):
    copy = tmp_path / "copy"
    shutil.copytree(bundle, copy)
    (copy / "vocab.txt").write_text("[PAD]\n[UNK]\n[MASK]\n")
    with pytest.raises(BackendError):
        ModelBackend(copy)


def test_missing_vocab_rejected(tmp_path):
    with pytest.raises(BackendError):
        ModelBackend(tmp_path)


def test_round_trip_through_model(bundle):
    backend = ModelBackend(bundle)
    stopwords = StopwordList.default()
    # A random-weight model is near-uniform, so candidate sets are large;
    # a low threshold keeps a handful of candidates per slot.
    config = StegoConfig(f=2, p=0.003)
    cover = ("The cat sat on the mat in the garden and the dog walked to "
             "the river near the old bridge.")
    from maskstego import Framing
    message = BitString.from_hex("5C", 8)
    framing = Framing.fixed(8)
    result = encode(cover, message, config, backend, stopwords, framing)
    assert decode(result.stego_text, config, backend, stopwords, framing) == message
