import itertools

import pytest

from graphknap import (
    CancellationError,
    FreeProductSplit,
    WordError,
    cyclically_reduce,
    decompose,
    invert_word,
    is_identity,
    is_identity_stacked,
    reduce_word,
    syllables,
    validate_alphabet,
    word_from_strs,
)
from graphknap.group import concat, new_state

F2 = validate_alphabet(["a", "b"], [])
Z2 = validate_alphabet(["a", "b"], [["a", "b"]])
P4 = validate_alphabet(["a", "b", "c", "d"], [["a", "b"], ["b", "c"], ["c", "d"]])
SPLIT_AB = FreeProductSplit(frozenset(["a"]), frozenset(["b"]))


def W(text):
    return word_from_strs(text.split()) if text else ()


def test_reduce_cancels_adjacent_inverse():
    assert reduce_word(W("a a^-1"), F2) == ()


def test_reduce_commutes_then_cancels():
    assert reduce_word(W("a b a^-1"), P4) == W("b")


def test_reduce_free_commutator_stays():
    assert len(reduce_word(W("a b a^-1 b^-1"), F2)) == 4


def test_is_identity_examples():
    assert is_identity(W("a b b^-1 a^-1"), F2)
    assert not is_identity(W("a b"), F2)
    assert is_identity((), F2)


def test_is_identity_unknown_generator():
    with pytest.raises(WordError):
        is_identity(W("q"), F2)


def test_stacked_abelian_vs_free():
    assert is_identity_stacked(W("a b a^-1 b^-1"), decompose(Z2))
    assert not is_identity_stacked(W("a b a^-1 b^-1"), decompose(F2))


def test_stacked_one_push_one_resume():
    state = new_state(decompose(F2))
    for letter in W("a b b^-1 a^-1"):
        state.feed(letter)
    assert state.is_one()
    assert state.pushes == 1
    assert state.resumes == 1


def test_stacked_state_clone_independent():
    state = new_state(decompose(F2))
    for letter in W("a b"):
        state.feed(letter)
    snapshot = state.clone()
    for letter in W("b^-1 a^-1"):
        state.feed(letter)
    assert state.is_one()
    assert not snapshot.is_one()


def test_stacked_rejects_foreign_letter():
    with pytest.raises(WordError):
        is_identity_stacked(W("c"), decompose(F2))


def test_syllables_examples():
    assert syllables(W("a a b"), SPLIT_AB) == [W("a a"), W("b")]
    assert syllables((), SPLIT_AB) == []
    assert syllables(W("a b^-1 b^-1 a"), SPLIT_AB) == [W("a"), W("b^-1 b^-1"), W("a")]


def test_cyclically_reduce_already_reduced():
    f, g = cyclically_reduce(W("a"), SPLIT_AB, F2)
    assert f == () and g == W("a")


def test_cyclically_reduce_conjugate():
    f, g = cyclically_reduce(W("b^-1 a b"), SPLIT_AB, F2)
    assert f == W("b") and g == W("a")
    assert is_identity(concat(invert_word(f), g, f, invert_word(W("b^-1 a b"))), F2)


def test_cyclically_reduce_mixed_ends():
    f, g = cyclically_reduce(W("b^-1 a b a"), SPLIT_AB, F2)
    assert f == ()
    assert g == W("b^-1 a b a")


def test_cyclically_reduce_rotation_restores_format():
    # same-factor non-cancelling ends force one rotation
    f, g = cyclically_reduce(W("a b a"), SPLIT_AB, F2)
    syls = syllables(g, SPLIT_AB)
    assert len(syls) == 1 or SPLIT_AB.factor_of_word(syls[0]) != SPLIT_AB.factor_of_word(syls[-1])
    assert is_identity(concat(invert_word(f), g, f, invert_word(W("a b a"))), F2)


def test_cyclically_reduce_identity_rejected():
    with pytest.raises(CancellationError):
        cyclically_reduce(W("a a^-1"), SPLIT_AB, F2)


def _all_words(alpha, length):
    letters = [(g, s) for g in alpha.generators for s in (1, -1)]
    return itertools.product(letters, repeat=length)


def _transitive_forest_alphabets_three():
    yield validate_alphabet(["a"], [])
    yield validate_alphabet(["a", "b"], [])
    yield validate_alphabet(["a", "b"], [["a", "b"]])
    yield validate_alphabet(["a", "b", "c"], [])
    yield validate_alphabet(["a", "b", "c"], [["a", "b"]])
    yield validate_alphabet(["a", "b", "c"], [["a", "b"], ["b", "c"]])
    yield validate_alphabet(["a", "b", "c"], [["a", "b"], ["b", "c"], ["c", "a"]])


def test_reduce_vs_stacked_exhaustive_small():
    for alpha in _transitive_forest_alphabets_three():
        tree = decompose(alpha)
        for length in range(5):
            for word in _all_words(alpha, length):
                assert is_identity(word, alpha) == is_identity_stacked(word, tree), word


def test_reduce_word_is_geodesic_bfs():
    """No shorter equivalent word exists: breadth-first search over the
    rewriting relation (swap independent adjacent letters, delete adjacent
    inverse pairs) never reaches a shorter word."""
    for alpha in [F2, Z2, P4]:
        for length in range(5):
            for word in itertools.islice(_all_words(alpha, length), 0, None, 7):
                reduced = reduce_word(word, alpha)
                seen = {word}
                frontier = [word]
                shortest = len(word)
                while frontier:
                    nxt = []
                    for w in frontier:
                        for i in range(len(w) - 1):
                            x, y = w[i], w[i + 1]
                            if x[0] == y[0] and x[1] == -y[1]:
                                cand = w[:i] + w[i + 2:]
                                if cand not in seen:
                                    seen.add(cand)
                                    nxt.append(cand)
                                    shortest = min(shortest, len(cand))
                            if alpha.independent(x[0], y[0]):
                                cand = w[:i] + (y, x) + w[i + 2:]
                                if cand not in seen:
                                    seen.add(cand)
                                    nxt.append(cand)
                    frontier = nxt
                assert len(reduced) == shortest


def test_reduce_word_inverse_roundtrip():
    for word in [W("a b a b"), W("a b a^-1 b^-1"), W("b b a a^-1")]:
        for alpha in [F2, Z2, P4]:
            r = reduce_word(word, alpha)
            assert is_identity(concat(word, invert_word(r)), alpha)


def test_identity_symmetric_under_reversal():
    for alpha in [F2, Z2]:
        for length in range(5):
            for word in itertools.islice(_all_words(alpha, length), 0, None, 5):
                assert is_identity(word, alpha) == is_identity(invert_word(word), alpha)
