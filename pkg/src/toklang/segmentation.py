"""The full tokenization space of a string, and where each point falls.

A byte string usually has many segmentations into vocabulary tokens; the
tokenizer returns exactly one of them.  This module enumerates and counts
all of them, and sorts any given token sequence into one of three kinds:

* Proper — equal to what the tokenizer returns for its own detokenization;
* Mergeable — some adjacent pair matches a merge rule;
* WrongMergeOrder — no pair merges, yet it is not the proper form.

A sequence with both defects counts as Mergeable: the pair scan runs first.
Whether the wrong-merge-order sequences of a tokenizer form a regular set
is unknown; the unmerge/retokenize check below is a multi-pass decision
procedure, not a finite-state one.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

from .bpe import Tokenizer, TokenizerError


class Kind(enum.Enum):
    PROPER = "Proper"
    MERGEABLE = "Mergeable"
    WRONG_MERGE_ORDER = "WrongMergeOrder"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    mergeable_at: int | None = None          # Mergeable: first mergeable pair
    proper_form: tuple[int, ...] | None = None  # WrongMergeOrder: what it should be

    def __str__(self) -> str:
        if self.kind is Kind.MERGEABLE:
            return f"Mergeable at {self.mergeable_at}"
        if self.kind is Kind.WRONG_MERGE_ORDER:
            return "WrongMergeOrder; proper = " + " ".join(map(str, self.proper_form))
        return "Proper"


def enumerate_tokenizations(t: Tokenizer, data: bytes,
                            limit: int | None = None) -> Iterator[list[int]]:
    """Lazily yield every segmentation of *data* into vocabulary tokens.

    Longest token first at each cut, recursively, so the all-single-byte
    segmentation (when it exists) comes last.  Each segmentation appears
    exactly once; an unsegmentable input yields nothing.  ``limit`` caps
    the number of items.
    """
    if limit is not None and limit < 1:
        raise ValueError("limit must be >= 1 (or None for unlimited)")
    ids = t.token_ids
    n = len(data)
    cap = t.max_token_len

    def walk(pos: int) -> Iterator[list[int]]:
        if pos == n:
            yield []
            return
        for ln in range(min(cap, n - pos), 0, -1):
            tid = ids.get(data[pos:pos + ln])
            if tid is not None:
                for rest in walk(pos + ln):
                    yield [tid] + rest

    gen = walk(0)
    return gen if limit is None else itertools.islice(gen, limit)


def count_tokenizations(t: Tokenizer, data: bytes) -> int:
    """Number of segmentations, by suffix DP in O(len · max token length)."""
    ids = t.token_ids
    n = len(data)
    cap = t.max_token_len
    counts = [0] * (n + 1)
    counts[n] = 1
    for pos in range(n - 1, -1, -1):
        total = 0
        for ln in range(1, min(cap, n - pos) + 1):
            if data[pos:pos + ln] in ids:
                total += counts[pos + ln]
        counts[pos] = total
    return counts[0]


def find_mergeable_pair(t: Tokenizer, ids: Iterable[int]) -> int | None:
    """Index of the first adjacent pair matching a merge rule, else None."""
    seq = t.check_ids(ids)
    ranks = t.merge_ranks
    for i in range(len(seq) - 1):
        if (seq[i], seq[i + 1]) in ranks:
            return i
    return None


def unmerge(t: Tokenizer, ids: Iterable[int]) -> list[int]:
    """Expand every token down to single-byte tokens.

    Because every merge output is the concatenation of its inputs, undoing
    merges all the way down lands on the token's byte string, so this maps
    each byte straight to its single-byte token.  Detokenization is
    unchanged: detokenize(unmerge(ids)) == detokenize(ids).
    """
    seq = t.check_ids(ids)
    sb = t.single_byte_ids
    out: list[int] = []
    for tid in seq:
        for b in t.vocab[tid]:
            base = sb.get(b)
            if base is None:
                raise TokenizerError(
                    f"token {tid} is not decomposable: no single-byte token "
                    f"for byte 0x{b:02x}")
            out.append(base)
    return out


def classify(t: Tokenizer, ids: Iterable[int]) -> Classification:
    """Sort a token sequence into Proper / Mergeable / WrongMergeOrder.

    The proper form is recomputed as tokenize(detokenize(ids)), which
    equals retokenizing the unmerged byte sequence since unmerging never
    changes the detokenization.
    """
    seq = t.check_ids(ids)
    proper = t.tokenize(t.detokenize(seq))
    if seq == proper:
        return Classification(Kind.PROPER)
    at = find_mergeable_pair(t, seq)
    if at is not None:
        return Classification(Kind.MERGEABLE, mergeable_at=at)
    return Classification(Kind.WRONG_MERGE_ORDER, proper_form=tuple(proper))
