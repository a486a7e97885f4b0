"""Command-line interface.

Exit codes are uniform across subcommands: 0 accept/pass, 1 reject/fail,
2 usage or data error.  ``--structured`` switches output to one JSON
object (schema version 1) carrying the same decision as the plain text.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass

from .bpe import (
    Tokenizer,
    TokenizerError,
    dumps_tokenizer,
    escape_bytes,
    load_tokenizer,
    train,
)
from .encoding import UTF8, EncodingError, encode_grammar
from .grammar import (
    Grammar,
    GrammarError,
    add_leading_space,
    format_grammar,
    parse_grammar,
    recognize,
    reduce_grammar,
    sample,
)
from .recognizer import TokenRecognizer
from .segmentation import Kind, classify, count_tokenizations, enumerate_tokenizations
from .verify import run_equivalence_suite, run_homomorphism_suite, run_partition_suite

SCHEMA_VERSION = 1

SAMPLE_ATTEMPTS = 50  # retries per requested sample before giving up


class CliError(Exception):
    """User-facing configuration or data error; exits with status 2."""


@dataclass
class RunConfig:
    """Validated invocation state: artifacts are loaded before any
    subcommand logic runs."""

    grammar: Grammar | None = None
    tokenizer: Tokenizer | None = None
    alphabet_mode: str = "unicode"
    bos_id: int | None = None
    structured: bool = False
    seed: int = 0
    limit: int | None = None


def _build_config(args) -> RunConfig:
    cfg = RunConfig(
        alphabet_mode=getattr(args, "alphabet", "unicode"),
        bos_id=getattr(args, "bos_id", None),
        structured=getattr(args, "structured", False),
        seed=getattr(args, "seed", 0),
        limit=getattr(args, "limit", None),
    )
    if cfg.limit is not None and cfg.limit < 1:
        raise CliError("--limit must be positive")
    path = getattr(args, "grammar", None)
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                cfg.grammar = reduce_grammar(parse_grammar(fh.read(), cfg.alphabet_mode))
        except OSError as e:
            raise CliError(f"cannot read grammar: {e}") from None
    path = getattr(args, "tokenizer", None)
    if path:
        try:
            cfg.tokenizer = load_tokenizer(path)
        except OSError as e:
            raise CliError(f"cannot read tokenizer: {e}") from None
    return cfg


def _need(cfg: RunConfig, *, grammar: bool = False, tokenizer: bool = False):
    if grammar and cfg.grammar is None:
        raise CliError("this command needs --grammar")
    if tokenizer and cfg.tokenizer is None:
        raise CliError("this command needs --tokenizer")


def _read_text_input(args) -> str:
    if getattr(args, "input", None) is not None:
        return args.input
    if getattr(args, "input_file", None):
        with open(args.input_file, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    return text[:-1] if text.endswith("\n") else text


def _read_byte_input(args) -> bytes:
    if getattr(args, "bytes", False):
        if getattr(args, "input", None) is not None:
            raise CliError("--bytes reads a file or stdin, not a literal argument")
        if getattr(args, "input_file", None):
            with open(args.input_file, "rb") as fh:
                return fh.read()
        return sys.stdin.buffer.read()
    return _read_text_input(args).encode("utf-8")


def _parse_ids(text: str, cfg: RunConfig) -> list[int]:
    try:
        ids = [int(f) for f in text.split()]
    except ValueError:
        raise CliError(f"token ids must be space-separated decimals, got {text!r}") from None
    if cfg.bos_id is not None and ids[:1] == [cfg.bos_id]:
        ids = ids[1:]
    return ids


def _emit(cfg: RunConfig, plain: str, structured: dict) -> None:
    if cfg.structured:
        structured["schema"] = SCHEMA_VERSION
        print(json.dumps(structured))
    elif plain:
        print(plain)
    else:
        print()


def _byte_grammar(cfg: RunConfig) -> Grammar:
    g = cfg.grammar
    if g.alphabet == "unicode":
        g = encode_grammar(UTF8, g)  # auto byte transform when tokens are in play
    return g


# --- subcommands -------------------------------------------------------------


def cmd_tokenize(args) -> int:
    cfg = _build_config(args)
    _need(cfg, tokenizer=True)
    ids = cfg.tokenizer.tokenize(_read_byte_input(args))
    _emit(cfg, " ".join(map(str, ids)), {"command": "tokenize", "ids": ids})
    return 0


def cmd_detokenize(args) -> int:
    cfg = _build_config(args)
    _need(cfg, tokenizer=True)
    ids = _parse_ids(_read_text_input(args), cfg)
    data = cfg.tokenizer.detokenize(ids)
    if getattr(args, "bytes", False) and not cfg.structured:
        sys.stdout.buffer.write(data)
        return 0
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        text = None
    if cfg.structured:
        _emit(cfg, "", {"command": "detokenize", "bytes": escape_bytes(data), "text": text})
        return 0
    if text is None:
        raise CliError("detokenized bytes are not UTF-8; use --bytes for raw output")
    print(text)
    return 0


def cmd_recognize(args) -> int:
    cfg = _build_config(args)
    _need(cfg, grammar=True)
    mode = args.mode
    reason = None

    if mode == "chars":
        g = cfg.grammar
        if g.alphabet == "byte":
            terms = _read_byte_input(args)
        else:
            terms = [ord(c) for c in _read_text_input(args)]
        session = g.open_session()
        for t in terms:
            session.feed(t)
            if not session.live:
                break
        accept = session.accepts()
        died_at = session.died_at
    else:
        _need(cfg, tokenizer=True)
        rec = TokenRecognizer(_byte_grammar(cfg), cfg.tokenizer)
        ids = cfg.tokenizer.check_ids(_parse_ids(_read_text_input(args), cfg))
        session = rec.open_session()
        for tid in ids:
            session.feed(tid)
        accept = session.accepts()
        died_at = session.died_at
        if mode == "proper" and accept:
            c = classify(cfg.tokenizer, ids)
            if c.kind is not Kind.PROPER:
                accept = False
                reason = f"improper: {c.kind.value}"

    plain = "accept" if accept else ("reject" if reason is None else f"reject: {reason}")
    _emit(cfg, plain, {
        "command": "recognize",
        "mode": mode,
        "accept": accept,
        "died_at": died_at,
        "reason": reason,
    })
    return 0 if accept else 1


def cmd_classify(args) -> int:
    cfg = _build_config(args)
    _need(cfg, tokenizer=True)
    ids = _parse_ids(_read_text_input(args), cfg)
    c = classify(cfg.tokenizer, ids)
    _emit(cfg, str(c), {
        "command": "classify",
        "kind": c.kind.value,
        "mergeable_at": c.mergeable_at,
        "proper": list(c.proper_form) if c.proper_form is not None else None,
    })
    return 0


def cmd_enumerate(args) -> int:
    cfg = _build_config(args)
    _need(cfg, tokenizer=True)
    data = _read_byte_input(args)
    total = count_tokenizations(cfg.tokenizer, data)
    rows = []
    for ids in enumerate_tokenizations(cfg.tokenizer, data, limit=cfg.limit):
        rows.append((ids, classify(cfg.tokenizer, ids).kind.value))
    if cfg.structured:
        _emit(cfg, "", {
            "command": "enumerate",
            "total": total,
            "items": [{"ids": ids, "kind": kind} for ids, kind in rows],
        })
    else:
        for ids, kind in rows:
            print(f"{' '.join(map(str, ids))}\t{kind}")
        print(f"total: {total}")
    return 0


def cmd_transform(args) -> int:
    cfg = _build_config(args)
    _need(cfg, grammar=True)
    g = cfg.grammar
    if args.leading_space:
        g = add_leading_space(g)
    if args.encode_utf8:
        if g.alphabet != "unicode":
            raise CliError("--encode-utf8 needs a unicode-alphabet grammar")
        g = encode_grammar(UTF8, g)
    sys.stdout.write(format_grammar(g))
    return 0


def cmd_train(args) -> int:
    cfg = _build_config(args)
    try:
        if getattr(args, "bytes", False):
            with open(args.corpus, "rb") as fh:
                corpus = [fh.read()]
        else:
            with open(args.corpus, encoding="utf-8") as fh:
                corpus = [line.rstrip("\n").encode("utf-8") for line in fh]
    except OSError as e:
        raise CliError(f"cannot read corpus: {e}") from None
    t = train(corpus, args.merges)
    out = dumps_tokenizer(t) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
        if not cfg.structured:
            print(f"{len(t.vocab)} tokens, {len(t.merges)} merges -> {args.output}")
    else:
        sys.stdout.write(out)
    return 0


def cmd_sample(args) -> int:
    cfg = _build_config(args)
    _need(cfg, grammar=True)
    g = cfg.grammar
    if g.is_empty_language:
        raise CliError("grammar generates the empty language; nothing to sample")
    rng = random.Random(cfg.seed)
    lines = []
    for _ in range(args.count):
        for _ in range(SAMPLE_ATTEMPTS):
            w = sample(g, args.max_expansions, rng)
            if w is not None:
                break
        else:
            raise CliError(
                f"sampling budget exhausted {SAMPLE_ATTEMPTS} times; "
                f"raise --max-expansions")
        if not recognize(g, w):  # postcondition guard; never expected to fire
            raise CliError(f"internal error: sampled string {w!r} failed recognition")
        if isinstance(w, bytes):
            try:
                lines.append(w.decode("utf-8"))
            except UnicodeDecodeError:
                lines.append(escape_bytes(w))
        else:
            lines.append(w)
    if cfg.structured:
        _emit(cfg, "", {"command": "sample", "samples": lines})
    else:
        for line in lines:
            print(line)
    return 0


def cmd_verify(args) -> int:
    cfg = _build_config(args)
    budget = args.budget
    if args.suite == "homomorphism":
        _need(cfg, tokenizer=True)
        report = run_homomorphism_suite(
            cfg.tokenizer, pairs=budget or 10000, seed=cfg.seed)
    elif args.suite == "equivalence":
        _need(cfg, grammar=True, tokenizer=True)
        rec = TokenRecognizer(_byte_grammar(cfg), cfg.tokenizer)
        report = run_equivalence_suite(rec, max_len=budget or 5)
    else:
        _need(cfg, tokenizer=True)
        report = run_partition_suite(cfg.tokenizer, max_len=budget or 8)
    if cfg.structured:
        _emit(cfg, "", {
            "command": "verify",
            "suite": report.suite,
            "passed": report.passed,
            "cases": report.cases,
            "failures": report.failures[:20],
        })
    else:
        print(report.summary())
    return 0 if report.passed else 1


# --- parser ------------------------------------------------------------------


def _add_artifact_flags(p, *, grammar=False, tokenizer=False):
    if grammar:
        p.add_argument("--grammar", metavar="FILE", help="grammar file")
        p.add_argument("--alphabet", choices=["unicode", "byte"], default="unicode",
                       help="grammar terminal alphabet (default: unicode)")
    if tokenizer:
        p.add_argument("--tokenizer", metavar="FILE", help="tokenizer file (native format)")
        p.add_argument("--bos-id", type=int, default=None, metavar="ID",
                       help="strip this leading id from token input")


def _add_io_flags(p, *, input_arg=True, bytes_flag=False):
    p.add_argument("--structured", action="store_true", help="JSON output")
    if input_arg:
        p.add_argument("input", nargs="?", default=None,
                       help="literal input (default: stdin)")
        p.add_argument("--input-file", metavar="FILE", help="read input from a file")
    if bytes_flag:
        p.add_argument("--bytes", action="store_true",
                       help="treat input (file or stdin) as raw bytes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toklang",
        description="Context-free recognition over byte-level BPE token streams.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tokenize", help="text -> token ids")
    _add_artifact_flags(p, tokenizer=True)
    _add_io_flags(p, bytes_flag=True)
    p.set_defaults(func=cmd_tokenize)

    p = sub.add_parser("detokenize", help="token ids -> text")
    _add_artifact_flags(p, tokenizer=True)
    _add_io_flags(p, bytes_flag=True)
    p.set_defaults(func=cmd_detokenize)

    p = sub.add_parser("recognize", help="decide membership (exit 0 accept, 1 reject)")
    _add_artifact_flags(p, grammar=True, tokenizer=True)
    p.add_argument("--mode", choices=["chars", "tokens", "proper"], default="chars")
    _add_io_flags(p, bytes_flag=True)
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("classify", help="Proper / Mergeable / WrongMergeOrder")
    _add_artifact_flags(p, tokenizer=True)
    _add_io_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("enumerate", help="list all tokenizations of a string")
    _add_artifact_flags(p, tokenizer=True)
    p.add_argument("--limit", type=int, default=1000,
                   help="max tokenizations to print (default: 1000)")
    _add_io_flags(p, bytes_flag=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("transform", help="rewrite a grammar")
    _add_artifact_flags(p, grammar=True)
    p.add_argument("--encode-utf8", action="store_true",
                   help="character terminals -> UTF-8 byte terminals")
    p.add_argument("--leading-space", action="store_true",
                   help="accept exactly the members prefixed with one space")
    p.add_argument("--structured", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("train", help="learn a BPE tokenizer from a corpus")
    p.add_argument("--corpus", required=True, metavar="FILE",
                   help="training corpus, one sample per line")
    p.add_argument("--merges", required=True, type=int, help="number of merges to learn")
    p.add_argument("--output", metavar="FILE", help="write tokenizer here (default: stdout)")
    p.add_argument("--bytes", action="store_true", help="corpus file is one raw-byte sample")
    p.add_argument("--structured", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("sample", help="draw member strings from a grammar")
    _add_artifact_flags(p, grammar=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-expansions", type=int, default=200,
                   help="derivation budget per attempt (default: 200)")
    p.add_argument("--structured", action="store_true", help="JSON output")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", help="run a property suite (exit 0 iff it passes)")
    _add_artifact_flags(p, grammar=True, tokenizer=True)
    p.add_argument("--suite", required=True,
                   choices=["homomorphism", "equivalence", "partition"])
    p.add_argument("--budget", type=int, default=None,
                   help="random pairs (homomorphism) or max length (others)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--structured", action="store_true", help="JSON output")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, GrammarError, TokenizerError, EncodingError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
