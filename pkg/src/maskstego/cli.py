"""Command-line interface: encode, decode, capacity, audit, sweep."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .bits import BitString
from .backends import Backend, BackendError, BigramBackend, HashBackend, ModelBackend, \
    TableBackend
from .codec import CapacityExhausted, DecodeMismatch, HeaderUnderflow, decode, encode
from .config import ConfigError, Framing, StegoConfig, validate_config, validate_framing
from .descriptor import DescriptorMismatch, build_descriptor, format_descriptor, \
    parse_descriptor, verify_descriptor
from .eligibility import StopwordList
from .harness import load_corpus, audit_distortion, measure_capacity, sweep, sweep_csv
from .tokenizer import Vocabulary

EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_DESCRIPTOR = 3


def _fail(code: str, message: str, status: int = EXIT_ERROR):
    click.echo(f"error code={code} msg={message!r}", err=True)
    sys.exit(status)


def _load_backend(spec: str, vocab: Vocabulary | None) -> Backend:
    kind, _, arg = spec.partition(":")
    try:
        if kind == "model":
            return ModelBackend(arg)
        if vocab is None:
            raise click.UsageError(f"--vocab is required for backend {kind!r}")
        if kind == "table":
            return TableBackend.load(arg, vocab)
        if kind == "hash":
            return HashBackend(int(arg), vocab)
        if kind == "bigram":
            return BigramBackend.from_corpus(arg, vocab)
    except (BackendError, OSError, ValueError) as exc:
        _fail("backend", str(exc))
    raise click.UsageError(f"unknown backend {spec!r} (use table:<path>, hash:<seed>, "
                           "bigram:<path>, or model:<dir>)")


def _common(fn):
    fn = click.option("--f", "f", type=int, default=3, show_default=True,
                      help="Masking interval.")(fn)
    fn = click.option("--p", "p", type=float, default=0.02, show_default=True,
                      help="Probability threshold.")(fn)
    for flag in ("skip-punct-num", "skip-stopwords", "skip-subwords", "skip-capitalized"):
        name = flag.replace("-", "_")
        fn = click.option(f"--{flag}/--no-{flag}", name, default=True, show_default=True)(fn)
    fn = click.option("--safe-mode/--fast-mode", "safe_mode", default=True,
                      show_default=True)(fn)
    fn = click.option("--backend", "backend_spec", required=True,
                      help="table:<path> | hash:<seed> | bigram:<path> | model:<dir>")(fn)
    fn = click.option("--vocab", "vocab_path", type=click.Path(exists=True),
                      help="Vocabulary file (one token per line).")(fn)
    fn = click.option("--stopwords", "stopwords_path", type=click.Path(exists=True),
                      help="Stopword file; defaults to the bundled English list.")(fn)
    return fn


def _setup(f, p, skip_punct_num, skip_stopwords, skip_subwords, skip_capitalized,
           safe_mode, backend_spec, vocab_path, stopwords_path):
    config = StegoConfig(f=f, p=p, skip_punct_num=skip_punct_num,
                         skip_stopwords=skip_stopwords, skip_subwords=skip_subwords,
                         skip_capitalized=skip_capitalized, safe_mode=safe_mode)
    try:
        validate_config(config)
    except ConfigError as exc:
        raise click.UsageError(str(exc))
    stopwords = StopwordList.load(stopwords_path) if stopwords_path else StopwordList.default()
    vocab = Vocabulary.load(vocab_path) if vocab_path else None
    backend = _load_backend(backend_spec, vocab)
    return config, backend, stopwords


@click.group()
def main():
    """Edit-based linguistic steganography with a masked language model."""


@main.command("encode")
@_common
@click.option("--message-hex", required=True, help="Message bits as hex digits.")
@click.option("--message-bits", type=int, required=True, help="Exact bit length.")
@click.option("--header-framing", is_flag=True,
              help="Prepend a 32-bit length header instead of relying on an "
                   "out-of-band length agreement.")
@click.option("--cover", "cover_path", type=click.Path(exists=True), required=True)
@click.option("--out", "out_path", type=click.Path(), help="Stego text output (default stdout).")
@click.option("--write-descriptor", "descriptor_out", type=click.Path(),
              help="Write the protocol descriptor to this file.")
def cli_encode(message_hex, message_bits, header_framing, cover_path, out_path,
               descriptor_out, **kw):
    config, backend, stopwords = _setup(**kw)
    framing = Framing.header() if header_framing else Framing.fixed(message_bits)
    try:
        message = BitString.from_hex(message_hex, message_bits)
        result = encode(Path(cover_path).read_text(encoding="utf-8"), message,
                        config, backend, stopwords, framing)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    except CapacityExhausted as exc:
        _fail("capacity-exhausted", f"embedded {exc.bits_embedded} of {exc.needed} bits")
    except BackendError as exc:
        _fail("backend", str(exc))
    if out_path:
        Path(out_path).write_text(result.stego_text + "\n", encoding="utf-8")
    else:
        click.echo(result.stego_text)
    click.echo(f"bits_embedded={result.bits_embedded} padding_bits={result.padding_bits} "
               f"sentences_used={result.sentences_used} "
               f"positions_edited={result.positions_edited}", err=True)
    if descriptor_out:
        Path(descriptor_out).write_text(
            format_descriptor(build_descriptor(config, framing, backend, stopwords)),
            encoding="utf-8")


@main.command("decode")
@_common
@click.option("--expected-bits", type=int, help="Message length for fixed framing.")
@click.option("--header-framing", is_flag=True)
@click.option("--stego", "stego_path", type=click.Path(exists=True), required=True)
@click.option("--descriptor", "descriptor_path", type=click.Path(exists=True),
              help="Verify against the encoder's protocol descriptor before decoding.")
def cli_decode(expected_bits, header_framing, stego_path, descriptor_path, **kw):
    config, backend, stopwords = _setup(**kw)
    if header_framing == (expected_bits is not None):
        raise click.UsageError("exactly one of --expected-bits / --header-framing is required")
    framing = Framing.header() if header_framing else Framing.fixed(expected_bits)
    if descriptor_path:
        try:
            verify_descriptor(parse_descriptor(descriptor_path), config, framing,
                              backend, stopwords)
        except DescriptorMismatch as exc:
            _fail("descriptor-mismatch", str(exc), EXIT_DESCRIPTOR)
    try:
        message = decode(Path(stego_path).read_text(encoding="utf-8"), config,
                         backend, stopwords, framing)
    except (DecodeMismatch, HeaderUnderflow, BackendError) as exc:
        _fail(type(exc).__name__.lower(), str(exc))
    click.echo(f"len={len(message)} hex={message.to_hex()}")


@main.command("capacity")
@_common
@click.option("--corpus", "corpus_path", type=click.Path(exists=True), required=True)
@click.option("--message-bits", type=int, default=32, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def cli_capacity(corpus_path, message_bits, seed, **kw):
    config, backend, stopwords = _setup(**kw)
    docs = load_corpus(corpus_path)
    try:
        report = measure_capacity(docs, config, backend, stopwords,
                                  message_bits=message_bits, seed=seed)
    except (ValueError, BackendError) as exc:
        _fail("capacity", str(exc))
    click.echo(f"bits_per_word={report.bits_per_word:.6f} "
               f"bits_embedded={report.bits_embedded} stego_words={report.stego_words} "
               f"positions_total={report.positions_total} "
               f"positions_zero_capacity={report.positions_zero_capacity} "
               f"documents_processed={report.documents_processed} "
               f"documents_skipped={report.documents_skipped}")


@main.command("audit")
@_common
@click.option("--corpus", "corpus_path", type=click.Path(exists=True), required=True)
def cli_audit(corpus_path, **kw):
    config, backend, stopwords = _setup(**kw)
    docs = load_corpus(corpus_path)
    try:
        report = audit_distortion(docs, config, backend, stopwords)
    except BackendError as exc:
        _fail("audit", str(exc))
    click.echo(f"masked_positions={report.masked_positions} "
               f"positions_with_unsafe_candidate={report.positions_with_unsafe_candidate} "
               f"rate={report.rate:.6f}")


@main.command("sweep")
@_common
@click.option("--corpus", "corpus_path", type=click.Path(exists=True), required=True)
@click.option("--f-values", default="1,2,3,4,6,8", show_default=True,
              help="Comma-separated masking intervals.")
@click.option("--p-values", default="0.01,0.02,0.05,0.1", show_default=True,
              help="Comma-separated probability thresholds.")
@click.option("--message-bits", type=int, default=32, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(), help="CSV output (default stdout).")
@click.option("--figures", "figures_dir", type=click.Path(),
              help="Also render capacity/distortion figures into this directory.")
def cli_sweep(corpus_path, f_values, p_values, message_bits, seed, out_path,
              figures_dir, **kw):
    config, backend, stopwords = _setup(**kw)
    docs = load_corpus(corpus_path)
    try:
        fs = [int(v) for v in f_values.split(",") if v]
        ps = [float(v) for v in p_values.split(",") if v]
    except ValueError as exc:
        raise click.UsageError(f"bad sweep grid: {exc}")
    rows = sweep(docs, fs, ps, backend, stopwords, base_config=config,
                 message_bits=message_bits, seed=seed)
    text = sweep_csv(rows)
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)
    if figures_dir:
        from .plots import render_sweep_figures
        for path in render_sweep_figures(rows, figures_dir):
            click.echo(f"wrote {path}", err=True)


@main.command("tokenize")
@click.option("--vocab", "vocab_path", type=click.Path(exists=True), required=True)
@click.option("--text", "text_path", type=click.Path(exists=True), required=True)
@click.option("--ids", is_flag=True, help="Print vocabulary indices instead of surfaces.")
def cli_tokenize(vocab_path, text_path, ids):
    """Tokenize a text file, one sentence per line (diagnostic helper; also
    the reference surface the model-export round-trip check compares against)."""
    from .tokenizer import split_sentences
    vocab = Vocabulary.load(vocab_path)
    text = Path(text_path).read_text(encoding="utf-8")
    unk = vocab.index.get("[UNK]", 0)
    for sentence in split_sentences(text):
        tokens = vocab.tokenize(sentence)
        if ids:
            click.echo(" ".join(str(vocab.index.get(t, unk)) for t in tokens))
        else:
            click.echo(" ".join(tokens))


if __name__ == "__main__":
    main()
