#!/usr/bin/env python3
"""Byte-level token splits on a real GPT-2-format vocabulary.

The repository ships no real vocabulary; supply the two files from a
byte-level BPE release (for GPT-2: vocab.json and merges.txt) and this
prints, for a handful of sample strings,

* the token IDs our merge-applier produces,
* each token's raw bytes — note how a CJK character's three UTF-8 bytes
  can land in different tokens,
* a check that concatenating per-token detokenizations reproduces the
  exact input bytes,

plus a nested-brackets table showing how bracket runs clump into
multi-character tokens at increasing depth.

Caveat: real tokenizers also run a regex pre-tokenizer, so on texts with
word boundaries the IDs printed here can differ from the official
tokenizer's output.  The byte-level facts demonstrated hold either way.

Usage:
    python scripts/real_vocab_demo.py VOCAB_JSON MERGES_TXT [--text STRING ...]
"""

import argparse
import sys

from toklang import escape_bytes, load_gpt2_tokenizer

DEFAULT_SAMPLES = ["Hello World", "你", "你好", "[]", "[[[]]]"]


def show_split(tok, text: str) -> None:
    data = text.encode("utf-8")
    ids = tok.tokenize(data)
    pieces = [tok.detokenize([i]) for i in ids]
    print(f"input: {text!r}  ({escape_bytes(data)})")
    print(f"  ids:    {ids}")
    print("  tokens: " + "  ".join(
        f"{i}={escape_bytes(p)!r}" for i, p in zip(ids, pieces)))
    joined = b"".join(pieces)
    status = "ok" if joined == data else "MISMATCH"
    print(f"  concat of per-token detokenizations == input bytes: {status}")
    assert joined == data


def nested_bracket_table(tok, max_depth: int = 8) -> None:
    print("\nnested brackets, one row per depth:")
    for depth in range(max_depth + 1):
        s = "[" * depth + "]" * depth
        ids = tok.tokenize(s.encode())
        rendered = " ".join(
            escape_bytes(tok.detokenize([i])) for i in ids)
        print(f"  depth {depth}: {s or '(empty)':20s} -> {ids}  [{rendered}]")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("vocab", help="vocab.json path")
    parser.add_argument("merges", help="merges.txt path")
    parser.add_argument("--text", action="append", default=None,
                        help="extra sample string (repeatable)")
    args = parser.parse_args(argv)

    tok = load_gpt2_tokenizer(args.vocab, args.merges)
    print(f"loaded {len(tok.vocab)} tokens, {len(tok.merges)} merges\n")

    for text in DEFAULT_SAMPLES + (args.text or []):
        show_split(tok, text)
        print()
    nested_bracket_table(tok)
    return 0


if __name__ == "__main__":
    sys.exit(main())
