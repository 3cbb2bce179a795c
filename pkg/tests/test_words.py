import pytest
from hypothesis import given
from hypothesis import strategies as st

from nlstar.words import (
    CLOSE,
    OPEN,
    Alphabet,
    IllegalWordError,
    WordSyntaxError,
    concat,
    depth,
    is_legal,
    parse_word,
    prefixes,
    reg,
    serialize_word,
)

AB1 = Alphabet({"a", "b"}, 1)
AB2 = Alphabet({"a", "b"}, 2)


def test_alphabet_tokens_without_binders():
    assert Alphabet({"b", "a"}, 0).tokens() == ("a", "b")


def test_alphabet_tokens_with_binders():
    assert AB2.tokens() == ("a", "b", 1, 2, OPEN, CLOSE)


def test_alphabet_rejects_bad_letters():
    with pytest.raises(ValueError):
        Alphabet({"A"}, 0)
    with pytest.raises(ValueError):
        Alphabet({"a"}, -1)


def test_is_legal_close_without_open():
    assert not is_legal((CLOSE,), AB2)


def test_is_legal_index_above_open_count():
    assert not is_legal((OPEN, 2), AB2)


def test_is_legal_counterexample_word():
    assert is_legal(("a", "b", OPEN, CLOSE), AB1)


def test_is_legal_rejects_foreign_letters_and_deep_nesting():
    assert not is_legal(("c",), AB1)
    assert not is_legal((OPEN, OPEN), AB1)


def test_reg_open_binder():
    assert reg(("a", "b", OPEN)) == 1


def test_reg_balanced():
    assert reg(("a", "b", OPEN, CLOSE)) == 0


def test_reg_empty():
    assert reg(()) == 0


def test_reg_rejects_illegal():
    with pytest.raises(IllegalWordError):
        reg((CLOSE,))


def test_depth_examples():
    assert depth(()) == 0
    assert depth(("a", "b", OPEN, CLOSE)) == 1
    assert depth((OPEN, OPEN, 2, CLOSE, CLOSE)) == 2


def test_concat_too_deep_is_marked():
    assert concat(("a", "b", OPEN), (OPEN,), AB1) is None


def test_concat_epsilon_neutral():
    assert concat(("a", "b", OPEN), (), AB1) == ("a", "b", OPEN)


def test_concat_close():
    assert concat(("a", "b", OPEN), (CLOSE,), AB1) == ("a", "b", OPEN, CLOSE)


def test_prefixes():
    assert prefixes(()) == [()]
    assert prefixes(("a", "b")) == [(), ("a",), ("a", "b")]
    assert prefixes(("a", "b", OPEN, CLOSE)) == [
        (),
        ("a",),
        ("a", "b"),
        ("a", "b", OPEN),
        ("a", "b", OPEN, CLOSE),
    ]


def test_parse_word_plain_and_decorated():
    assert parse_word("a b << 1 >>") == ("a", "b", OPEN, 1, CLOSE)
    assert parse_word("a b <<1. >>") == ("a", "b", OPEN, CLOSE)
    assert parse_word("a b << 1 . >>") == ("a", "b", OPEN, CLOSE)
    assert parse_word("") == ()


def test_parse_word_decoration_must_match_nesting():
    with pytest.raises(WordSyntaxError):
        parse_word("<<2.")


def test_parse_word_rejects_garbage():
    with pytest.raises(WordSyntaxError) as err:
        parse_word("a ? b")
    assert err.value.position == 2


def test_serialize_decorates_levels():
    assert serialize_word(("a", OPEN, OPEN, 2, CLOSE, CLOSE)) == "a <<1. <<2. 2 >> >>"


token = st.one_of(
    st.sampled_from(["a", "b", OPEN, CLOSE]), st.integers(min_value=1, max_value=3)
)
words = st.lists(token, max_size=12).map(tuple)


@given(words)
def test_legality_is_prefix_closed(word):
    if is_legal(word, AB2):
        for prefix in prefixes(word):
            assert is_legal(prefix, AB2)


@given(words)
def test_reg_below_depth_below_bound(word):
    if is_legal(word, AB2):
        assert reg(word) <= depth(word) <= AB2.n


@given(words, words)
def test_concat_result_is_legal(left, right):
    result = concat(left, right, AB2)
    if result is not None:
        assert is_legal(result, AB2)
        assert depth(result) <= AB2.n


@given(words)
def test_serialize_parse_roundtrip(word):
    if is_legal(word, AB2):
        assert parse_word(serialize_word(word)) == word


@given(st.text(alphabet="ab<>. 123", max_size=20))
def test_parse_normalizes(text):
    try:
        word = parse_word(text)
    except WordSyntaxError:
        return
    if is_legal(word, AB2):
        assert parse_word(serialize_word(word)) == word
