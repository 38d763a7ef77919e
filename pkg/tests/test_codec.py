import numpy as np
import pytest

from maskstego import (BitString, CapacityExhausted, DecodeMismatch, Distribution,
                       Framing, HeaderUnderflow, StegoConfig, TableBackend,
                       candidate_set, check_retokenization_safe, decode, encode)
from maskstego.backends import sentence_key
from maskstego.bits import BitCursor
from maskstego.codec import encode_sentence
from maskstego.planner import compute_mask_plan
from maskstego.tokenizer import MASK_TOKEN


def dist(vocab, **probs):
    return Distribution({vocab.index[t]: p for t, p in probs.items()})


def build_table(vocab, stopwords, config, sentences, cand_lists, tmp_path):
    """Table backend assigning each planned position of each sentence the
    next candidate list (probs descending, stopword filler to reach sum 1)."""
    lines = []
    it = iter(cand_lists)
    for sentence in sentences:
        tokens = vocab.tokenize(sentence)
        plan = compute_mask_plan(tokens, config, stopwords)
        masked = list(tokens)
        for pos in plan:
            masked[pos] = MASK_TOKEN
        key = sentence_key(tuple(masked))
        for pos in plan:
            cands = next(it)
            total = sum(p for _, p in cands)
            entries = ",".join(f"{t}:{p}" for t, p in cands)
            entries += f",the:{round(1.0 - total, 6)}"
            lines.append(f"{key}\t{pos}\t{entries}")
    path = tmp_path / "table.tsv"
    path.write_text("\n".join(lines) + "\n")
    return TableBackend.load(path, vocab)


class TestCandidateSet:
    def test_hand_trace(self, vocab, stopwords):
        cfg = StegoConfig(f=2, p=0.02)
        tokens = ("the", "cat", "sat")
        d = dist(vocab, dog=0.5, fox=0.3, the=0.1, owl=0.05, cat=0.05)
        cs = candidate_set(d, tokens, 2, cfg, stopwords, vocab)
        assert [t for t, _ in cs.entries] == ["dog", "fox", "cat", "owl"][:cs.c]
        # "the" dropped as stopword; the 0.05 tie breaks by vocab index.
        assert cs.c == 4 and cs.n == 2

    def test_three_candidate_trace_carries_one_bit(self, vocab, stopwords):
        cfg = StegoConfig(p=0.02)
        d = dist(vocab, dog=0.5, fox=0.3, the=0.15, owl=0.05)
        cs = candidate_set(d, ("the", "cat", "sat"), 1, cfg, stopwords, vocab)
        assert [t for t, _ in cs.entries] == ["dog", "fox", "owl"]
        assert cs.c == 3 and cs.n == 1

    def test_all_below_threshold(self, vocab, stopwords):
        cfg = StegoConfig(p=0.5)
        d = dist(vocab, dog=0.4, fox=0.3, owl=0.3)
        cs = candidate_set(d, ("cat",), 0, cfg, stopwords, vocab)
        assert cs.c == 0 and cs.n == 0

    def test_probability_tie_breaks_by_vocab_index(self, vocab, stopwords):
        cfg = StegoConfig(p=0.02)
        d = dist(vocab, fox=0.3, dog=0.3, owl=0.4)
        cs = candidate_set(d, ("cat",), 0, cfg, stopwords, vocab)
        lo = min(vocab.index["fox"], vocab.index["dog"])
        assert [t for t, _ in cs.entries][:2] == ["owl", vocab.token(lo)]

    def test_sorting_is_idempotent(self, vocab, stopwords):
        cfg = StegoConfig(p=0.02)
        d = dist(vocab, dog=0.5, fox=0.3, owl=0.2)
        a = candidate_set(d, ("cat",), 0, cfg, stopwords, vocab)
        b = candidate_set(Distribution(dict(d.probs)), ("cat",), 0, cfg, stopwords, vocab)
        assert a == b

    def test_safe_mode_drops_merging_candidate(self, vocab, stopwords):
        # At a position followed by "##ed", the candidate "play" would merge
        # into the whole word "played" on retokenization.
        cfg = StegoConfig(f=1, p=0.02, safe_mode=True)
        tokens = ("walk", "##ed", "rest")
        d = dist(vocab, play=0.5, talk=0.3, walk=0.2)
        cs = candidate_set(d, tokens, 0, cfg, stopwords, vocab)
        assert "play" not in [t for t, _ in cs.entries]
        assert "talk" in [t for t, _ in cs.entries]
        fast = StegoConfig(f=1, p=0.02, safe_mode=False)
        cs_fast = candidate_set(d, tokens, 0, fast, stopwords, vocab)
        assert "play" in [t for t, _ in cs_fast.entries]


class TestRetokenizationCheck:
    def test_subword_merge_is_unsafe(self, vocab):
        assert not check_retokenization_safe(vocab, ("un", "##break", "##able"), 1, "##us")

    def test_standalone_swap_is_safe(self, vocab):
        assert check_retokenization_safe(vocab, ("the", "cat", "sat"), 1, "dog")

    def test_marry_to_wed_is_safe(self, vocab):
        tokens = vocab.tokenize("She will marry him")
        pos = tokens.index("marry")
        assert check_retokenization_safe(vocab, tokens, pos, "wed")

    def test_whole_word_merge_is_unsafe(self, vocab):
        assert not check_retokenization_safe(vocab, ("walk", "##ed", "rest"), 0, "play")


class TestEncodeSentence:
    cfg = StegoConfig(f=2, p=0.02)

    def test_empty_plan_leaves_sentence_unchanged(self, vocab, stopwords, tmp_path):
        backend = build_table(vocab, stopwords, self.cfg, [], [], tmp_path)
        cursor = BitCursor(BitString((1, 0)))
        out = encode_sentence(("the", "of", "."), cursor, backend, self.cfg, stopwords)
        assert out.tokens == ("the", "of", ".")
        assert cursor.offset == 0

    def test_two_candidates_bit_one_picks_second(self, vocab, stopwords, tmp_path):
        sentence = "the cat sat on mats"
        backend = build_table(vocab, stopwords, self.cfg, [sentence],
                              [[("dog", 0.6), ("fox", 0.3)]], tmp_path)
        cursor = BitCursor(BitString((1,)))
        out = encode_sentence(vocab.tokenize(sentence), cursor, backend, self.cfg, stopwords)
        assert out.tokens == ("the", "cat", "fox", "on", "mats")
        assert cursor.offset == 1 and out.positions_edited == 1

    def test_four_candidates_bits_10_pick_rank_two(self, vocab, stopwords, tmp_path):
        # Pins the chunk convention: bits "10" = big-endian 2 = third entry.
        sentence = "the cat sat on mats"
        backend = build_table(vocab, stopwords, self.cfg, [sentence],
                              [[("dog", 0.4), ("fox", 0.3), ("owl", 0.15), ("pig", 0.05)]],
                              tmp_path)
        cursor = BitCursor(BitString((1, 0)))
        out = encode_sentence(vocab.tokenize(sentence), cursor, backend, self.cfg, stopwords)
        assert out.tokens[2] == "owl"
        assert cursor.offset == 2

    def test_zero_capacity_position_keeps_original(self, vocab, stopwords, tmp_path):
        sentence = "the cat sat on mats"
        backend = build_table(vocab, stopwords, self.cfg, [sentence],
                              [[("dog", 0.9)]], tmp_path)
        cursor = BitCursor(BitString((1,)))
        out = encode_sentence(vocab.tokenize(sentence), cursor, backend, self.cfg, stopwords)
        assert out.tokens[2] == "sat"
        assert cursor.offset == 0 and out.positions_zero_capacity == 1


def eight_candidates(words):
    probs = [0.20, 0.15, 0.12, 0.10, 0.09, 0.08, 0.07, 0.06]
    return list(zip(words, probs))


@pytest.fixture
def rich_backend(vocab, stopwords, tmp_path):
    """Ten-sentence cover, every planned position carries 3 bits."""
    cfg = StegoConfig(f=2, p=0.02)
    pool = ["dog", "fox", "owl", "pig", "cow", "frog", "bear", "wolf"]
    rng = np.random.default_rng(17)
    sentences = []
    nouns = ["cat", "dog", "bird", "horse", "rabbit", "sheep", "goat", "duck"]
    for _ in range(10):
        words = [nouns[rng.integers(len(nouns))] for _ in range(8)]
        sentences.append("The " + " ".join(words) + ".")
    cover = " ".join(sentences)
    cand_lists = []
    for sentence in sentences:
        plan = compute_mask_plan(vocab.tokenize(sentence), cfg, stopwords)
        cand_lists.extend(eight_candidates(pool) for _ in plan)
    backend = build_table(vocab, stopwords, cfg, sentences, cand_lists, tmp_path)
    return cfg, cover, backend


class TestEncodeDecode:
    def test_round_trip_1000_random_messages(self, rich_backend, stopwords):
        cfg, cover, backend = rich_backend
        rng = np.random.default_rng(3)
        for _ in range(1000):
            length = int(rng.integers(1, 65))
            message = BitString(tuple(int(b) for b in rng.integers(0, 2, size=length)))
            result = encode(cover, message, cfg, backend, stopwords)
            assert decode(result.stego_text, cfg, backend, stopwords,
                          Framing.fixed(length)) == message

    def test_header_framing_round_trip(self, rich_backend, stopwords):
        cfg, cover, backend = rich_backend
        message = BitString.from_hex("DEADBEEF", 32)
        result = encode(cover, message, cfg, backend, stopwords, Framing.header())
        out = decode(result.stego_text, cfg, backend, stopwords, Framing.header())
        assert out == message

    def test_encode_deterministic(self, rich_backend, stopwords):
        cfg, cover, backend = rich_backend
        message = BitString.from_hex("1F28", 13)
        a = encode(cover, message, cfg, backend, stopwords)
        b = encode(cover, message, cfg, backend, stopwords)
        assert a == b

    def test_message_fits_first_sentence(self, rich_backend, stopwords):
        cfg, cover, backend = rich_backend
        result = encode(cover, BitString((1, 0, 1)), cfg, backend, stopwords)
        assert result.sentences_used == 1
        assert len(result.stego_text.split(".")) < len(cover.split("."))

    def test_chunk_accounting(self, rich_backend, stopwords):
        cfg, cover, backend = rich_backend
        message = BitString((1, 0, 1, 1, 0))  # 5 bits into 3-bit chunks
        result = encode(cover, message, cfg, backend, stopwords)
        assert result.bits_embedded == 3 * result.positions_edited
        assert result.padding_bits == result.bits_embedded - len(message)
        assert 0 < result.padding_bits < 3

    def test_zero_capacity_cover_exhausts(self, vocab, stopwords, tmp_path):
        cfg = StegoConfig(f=2, p=0.02)
        backend = build_table(vocab, stopwords, cfg, [], [], tmp_path)
        with pytest.raises(CapacityExhausted) as exc:
            encode("The of and. In on at.", BitString((1,)), cfg, backend, stopwords)
        assert exc.value.bits_embedded == 0

    def test_corrupted_stego_raises_mismatch(self, rich_backend, stopwords):
        cfg, cover, backend = rich_backend
        message = BitString.from_hex("ABCD", 16)
        result = encode(cover, message, cfg, backend, stopwords)
        words = result.stego_text.split()
        # Replace the first substituted animal with a token outside every
        # candidate list.
        pool = {"dog", "fox", "owl", "pig", "cow", "frog", "bear", "wolf"}
        idx = next(i for i, w in enumerate(words) if w.rstrip(".") in pool)
        words[idx] = "stone" + ("." if words[idx].endswith(".") else "")
        with pytest.raises(DecodeMismatch):
            decode(" ".join(words), cfg, backend, stopwords, Framing.fixed(16))

    def test_truncated_stego_underflows(self, rich_backend, stopwords):
        cfg, cover, backend = rich_backend
        message = BitString.from_hex("ABCDEF", 24)
        result = encode(cover, message, cfg, backend, stopwords)
        first = result.stego_text.split(".")[0] + "."
        with pytest.raises(HeaderUnderflow):
            decode(first, cfg, backend, stopwords, Framing.fixed(24))

    def test_substituted_tokens_are_eligible(self, rich_backend, stopwords, vocab):
        from maskstego.eligibility import is_eligible
        cfg, cover, backend = rich_backend
        result = encode(cover, BitString.from_hex("0F0F", 16), cfg, backend, stopwords)
        cover_tokens = vocab.tokenize(cover)
        for sentence in result.stego_text.split("."):
            for tok in vocab.tokenize(sentence):
                if tok not in cover_tokens:
                    assert is_eligible(tok, cfg, stopwords)

    def test_empty_message_rejected(self, rich_backend, stopwords):
        cfg, cover, backend = rich_backend
        with pytest.raises(ValueError):
            encode(cover, BitString(()), cfg, backend, stopwords)
