import itertools
import random

import pytest
from hypothesis import given, strategies as st

from toklang import (
    GrammarError,
    TokenRecognizer,
    TokenizerError,
    build,
    parse_grammar,
    recognize,
    reduce_grammar,
    relevant_token_ids,
)
from toklang.toys import (
    aab_tokenizer,
    bracket_tokenizer,
    dyck_grammar,
)

from oracles import strings_up_to

toy_ids = st.lists(st.sampled_from([1, 2, 3, 4, 5]), max_size=6)


@pytest.fixture(scope="module")
def rec():
    return build(dyck_grammar(), bracket_tokenizer())


# --- construction ---------------------------------------------------------------


def test_build_rejects_unicode_grammar(brackets):
    g = reduce_grammar(parse_grammar('S -> "[]" ;', "unicode"))
    with pytest.raises(GrammarError, match="byte-alphabet"):
        build(g, brackets)


def test_build_rejects_unreduced_grammar(brackets):
    g = parse_grammar('S -> "[]" ;', "byte")
    with pytest.raises(GrammarError, match="reduced"):
        build(g, brackets)


def test_build_rejects_non_byte_base_tokenizer(dyck):
    with pytest.raises(TokenizerError, match="byte-base"):
        build(dyck, aab_tokenizer())


def test_build_empty_language(brackets):
    g = reduce_grammar(parse_grammar("S -> S ;", "byte"))
    r = TokenRecognizer(g, brackets)
    assert not r.accepts_tokens([])
    assert not r.accepts_tokens([3])
    assert r.open_session().allowed_next_tokens() == set()


# --- feeding --------------------------------------------------------------------


def test_feed_token_examples(rec):
    s = rec.open_session()
    s.feed(3)  # "[]"
    assert s.live and s.accepts() and s.tokens_consumed == 1

    s = rec.open_session().feed(2)  # "]"
    assert not s.live and s.died_at == 0

    s = rec.open_session().feed(4)  # "[["
    assert s.live and not s.accepts()


def test_feed_tracks_detokenized_bytes(rec):
    s = rec.open_session()
    s.feed(4).feed(3).feed(5)  # "[[" + "[]" + "]]"
    assert s.inner.consumed == 6
    assert s.tokens_consumed == 3
    assert s.accepts()


def test_feed_unknown_id(rec):
    with pytest.raises(TokenizerError):
        rec.open_session().feed(999)


def test_feed_splits_multibyte_characters():
    # a token may cover only part of a UTF-8 character; bytes are bytes
    from toklang import UTF8, Tokenizer, encode_grammar
    g = encode_grammar(UTF8, reduce_grammar(parse_grammar('S -> "你" ;', "unicode")))
    vocab = [bytes([b]) for b in range(256)] + [b"\xe4\xbd"]
    t = build(g, Tokenizer(tuple(vocab), ((0xE4, 0xBD, 256),)))
    assert t.accepts_tokens([256, 0xA0])
    assert not t.accepts_tokens([256])
    assert t.accepts_proper(t.tokenizer.tokenize("你".encode()))


# --- acceptance -------------------------------------------------------------------


def test_accepts_tokens_examples(rec):
    assert rec.accepts_tokens([4, 5])       # "[[]]"
    assert rec.accepts_tokens([3])
    assert not rec.accepts_tokens([1])
    assert rec.accepts_tokens([])           # epsilon is a member


def test_accepts_tokens_validates_all_ids_first(rec):
    with pytest.raises(TokenizerError):
        rec.accepts_tokens([2, 999])  # prefix already dead, id still checked


def test_accepts_proper_examples(rec):
    assert rec.accepts_proper(rec.tokenizer.tokenize(b"[[]]"))
    assert rec.accepts_tokens([1, 3, 2]) and not rec.accepts_proper([1, 3, 2])
    assert not rec.accepts_proper([1])


@given(toy_ids)
def test_proper_implies_extended(ids):
    r = build(dyck_grammar(), bracket_tokenizer())
    if r.accepts_proper(ids):
        assert r.accepts_tokens(ids)


@given(toy_ids)
def test_streaming_matches_batch(ids):
    r = build(dyck_grammar(), bracket_tokenizer())
    s = r.open_session()
    for t in ids:
        s.feed(t)
    assert s.accepts() == r.accepts_tokens(ids)


@given(toy_ids)
def test_accepts_tokens_equals_character_oracle(ids):
    r = build(dyck_grammar(), bracket_tokenizer())
    assert r.accepts_tokens(ids) == recognize(r.grammar, r.tokenizer.detokenize(ids))


def test_exhaustive_oracle_agreement_short(rec):
    for n in range(4):
        for seq in itertools.product([1, 2, 3, 4, 5], repeat=n):
            assert rec.accepts_tokens(seq) == recognize(
                rec.grammar, rec.tokenizer.detokenize(seq))


def test_membership_decidable_through_token_space(rec):
    members = strings_up_to(rec.grammar, 8)
    for n in range(9):
        for combo in itertools.product((0x5B, 0x5D), repeat=n):
            w = bytes(combo)
            assert rec.accepts_tokens(rec.tokenizer.tokenize(w)) == (combo in members)


# --- next-token sets ----------------------------------------------------------------


def test_allowed_next_tokens_fresh(rec):
    assert rec.open_session().allowed_next_tokens() == {1, 3, 4}


def test_allowed_next_tokens_after_open_bracket(rec):
    s = rec.open_session().feed(1)
    assert s.allowed_next_tokens() == {1, 2, 3, 4}


def test_allowed_next_tokens_dead_session(rec):
    assert rec.open_session().feed(2).allowed_next_tokens() == set()


def test_allowed_next_tokens_does_not_mutate_parent(rec):
    s = rec.open_session().feed(1)
    before = (s.tokens_consumed, s.inner.consumed, s.live)
    s.allowed_next_tokens()
    assert (s.tokens_consumed, s.inner.consumed, s.live) == before
    s.feed(2)
    assert s.accepts()


def test_allowed_next_tokens_equals_per_token_trials(rec):
    rng = random.Random(0)
    vocab_size = len(rec.tokenizer.vocab)
    for _ in range(30):
        s = rec.open_session()
        for _ in range(rng.randrange(6)):
            options = sorted(s.allowed_next_tokens())
            if not options:
                break
            s.feed(rng.choice(options))
        brute = {tid for tid in range(vocab_size) if s.clone().feed(tid).live}
        assert s.allowed_next_tokens() == brute


def test_session_clone_forks(rec):
    a = rec.open_session().feed(4)
    b = a.clone()
    a.feed(5)
    assert a.accepts() and not b.accepts()
    assert b.tokens_consumed == 1


def test_relevant_token_ids(rec):
    assert relevant_token_ids(rec) == [1, 2, 3, 4, 5]
