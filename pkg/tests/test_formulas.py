import pytest

from fockcanon.canonical import canonical_oracle
from fockcanon.combinatorics import Symbol, is_ordered, is_standard, remove_entry_all_rows
from fockcanon.expansion import MethodInapplicable
from fockcanon.fock import GoodSequence, good_maximal_sequences, monomial_vector
from fockcanon.formulas import (
    arrangements,
    asymptotic_canonical,
    asymptotic_split,
    column_lift,
    column_removal,
    disjoint_column_boundaries,
    good_monomial,
    good_monomial_canonical,
    heart_check,
    lm_canonical,
    lm_pairs,
    m_statistic,
    min_length,
    ordered_canonical,
    ordered_seq,
    ordered_terms,
    permutation_from_word,
    permute,
    psi_injection,
    runs_to_monomial,
    spine_canonical,
    spine_tilde_seq,
    spines,
)
from fockcanon.laurent import LaurentPoly

from conftest import sym

q = LaurentPoly.q()


def as_dict(expansion):
    return {tuple(map(tuple, T.display_rows())): str(c) for T, c in expansion.vector.items()}


def expect(v, table):
    return {tuple(map(tuple, sym(v, rows).display_rows())): c for rows, c in table}


def swap_positions(values, word):
    """Apply ``s_{w1} s_{w2} ...`` to positions, rightmost generator first."""
    out = list(values)
    for g in reversed(word):
        out[g - 1], out[g] = out[g], out[g - 1]
    return tuple(out)


# -- permutations ------------------------------------------------------------

def test_min_length_matches_stable_matching():
    assert min_length((0, 0, 1), (0, 1, 0)) == 1
    assert min_length((0, 0, 1), (1, 0, 0)) == 2
    assert min_length((3, 2, 1), (1, 2, 3)) == 3
    assert sorted(ell for _, ell in arrangements((1, 1, 2))) == [0, 1, 2]
    with pytest.raises(ValueError):
        min_length((1, 2), (1, 3))


def test_permutation_words():
    p = permutation_from_word([1, 2], 3)
    assert sorted(p) == [0, 1, 2]
    assert permute((10, 20, 30), permutation_from_word([], 3)) == (10, 20, 30)
    with pytest.raises(ValueError):
        permutation_from_word([3], 3)


# -- level two ---------------------------------------------------------------

def test_lm_pairs_and_terms(lm_symbol):
    assert lm_pairs(lm_symbol) == [(1, 2), (5, 7)]
    got = as_dict(lm_canonical(lm_symbol))
    assert got == expect((1, 0), [
        ([[0, 1, 3, 5], [0, 2, 7]], "1"),
        ([[0, 2, 3, 5], [0, 1, 7]], "q"),
        ([[0, 1, 3, 7], [0, 2, 5]], "q"),
        ([[0, 2, 3, 7], [0, 1, 5]], "q^2"),
    ])
    assert lm_canonical(lm_symbol).vector == canonical_oracle(lm_symbol).vector


def test_lm_rejects_other_levels(ordered_symbol):
    with pytest.raises(MethodInapplicable, match="method inapplicable"):
        lm_canonical(ordered_symbol)


# -- asymptotic --------------------------------------------------------------

FAR = ((6, 5, 1, 0), [[-1, 0, 1, 2, 3, 4, 5, 6], [-1, 0, 1, 2, 3, 4, 7], [-1, 0, 2], [-1, 3]])


def test_asymptotic_split_and_expansion():
    v, rows = FAR
    S = sym(v, rows)
    assert S.size == 6
    parts = asymptotic_split(S)
    assert [p[0] for p in parts] == [(6, 5), (1, 0)]
    assert asymptotic_split(S, 4) == parts
    got = asymptotic_canonical(S, canonical_oracle)
    top_swap = [[-1, 0, 1, 2, 3, 4, 5, 7], [-1, 0, 1, 2, 3, 4, 6]]
    bottom_swap = [[-1, 0, 3], [-1, 2]]
    assert as_dict(got) == expect(v, [
        (rows, "1"),
        (top_swap + rows[2:], "q"),
        (rows[:2] + bottom_swap, "q"),
        (top_swap + bottom_swap, "q^2"),
    ])
    assert got.vector == canonical_oracle(S).vector


def test_asymptotic_needs_a_cut(lm_symbol):
    assert asymptotic_split(lm_symbol) is None
    with pytest.raises(MethodInapplicable):
        asymptotic_canonical(lm_symbol, canonical_oracle)


# -- column removal ----------------------------------------------------------

REMOVALS = [
    ((2, 2, 1), [[0, 2, 3], [0, 2, 4], [0, 2]], 2, [
        ([[0, 2, 3], [0, 2, 4], [0, 2]], "1"),
        ([[0, 2, 4], [0, 2, 3], [0, 2]], "q"),
    ]),
    ((4, 2, 1, 1), [[0, 1, 2, 3, 5], [0, 1, 3], [0, 1], [1, 2]], 1, [
        ([[0, 1, 2, 3, 5], [0, 1, 3], [0, 1], [1, 2]], "1"),
        ([[0, 1, 2, 3, 5], [0, 1, 3], [1, 2], [0, 1]], "q"),
        ([[0, 1, 2, 3, 5], [1, 2, 3], [0, 1], [0, 1]], "q^2"),
    ]),
]


@pytest.mark.parametrize("v,rows,x,table", REMOVALS)
def test_column_removal_examples(v, rows, x, table):
    S = sym(v, rows)
    G = canonical_oracle(S)
    assert as_dict(G) == expect(v, table)
    small = canonical_oracle(remove_entry_all_rows(S, x))
    assert column_removal(G, x).vector == small.vector
    assert column_lift(small, x).vector == G.vector


# -- level three monomials ---------------------------------------------------

def test_three_term_monomial():
    S = sym((3, 3, 3), [[0, 1, 2, 3], [0, 1, 3, 4], [0, 1, 3, 4]])
    x = monomial_vector((3, 3, 3), ((3, 2), (2, 2)))
    assert sorted(str(c) for _, c in x.items()) == ["1", "q", "q^2"]
    assert x == canonical_oracle(S).vector


def test_some_good_sequences_are_not_monomial():
    S = sym((2, 2, 1), [[1, 3], [1, 3], [2]])
    assert GoodSequence(((2, 1), (1, 1), (2, 1))) in list(good_maximal_sequences(S))
    bad = monomial_vector((2, 2, 1), ((2, 1), (1, 1), (2, 1)))
    assert bad.coefficient(S) == 1 + q * q
    seq, x = good_monomial(S)
    assert seq == GoodSequence(((2, 2), (1, 1)))
    assert x == canonical_oracle(S).vector
    assert good_monomial_canonical(S).vector == x


# -- ordered symbols ---------------------------------------------------------

def test_ordered_admissibility_example():
    S = sym((2, 2, 1), [[-1, 0, 1, 5], [-1, 0, 2, 5], [-1, 1, 4]])
    assert is_ordered(S)
    images = {t.image for t in ordered_terms(S)}
    assert sym((2, 2, 1), [[-1, 0, 1, 5], [-1, 1, 4, 5], [-1, 0, 2]]) in images
    # s_2 on one column and s_1 on the next repeats an entry in row two
    cols = [(0, 0, 1), (1, 2, 4)]
    assert swap_positions(cols[0], [2])[1] == swap_positions(cols[1], [1])[1]


# rows of each term, then (sigma words per column, length, M) for the
# twelve terms of the ordered example; entries 4 and 11 are corrected
ORDERED_TERMS = [
    ([[0, 1, 3, 5], [0, 2, 3, 5], [1, 3, 4]], ([], [], [], []), 0, 0),
    ([[0, 1, 3, 5], [0, 3, 4, 5], [1, 2, 3]], ([], [2], [2], []), 2, 1),
    ([[0, 1, 3, 5], [1, 2, 3, 5], [0, 3, 4]], ([2], [], [], []), 1, 0),
    ([[0, 1, 3, 5], [1, 3, 4, 5], [0, 2, 3]], ([2], [2], [2], []), 3, 1),
    ([[0, 2, 3, 5], [0, 1, 3, 5], [1, 3, 4]], ([], [1], [], []), 1, 0),
    ([[0, 3, 4, 5], [0, 1, 3, 5], [1, 2, 3]], ([], [1, 2], [1, 2], []), 4, 2),
    ([[1, 2, 3, 5], [0, 1, 3, 5], [0, 3, 4]], ([1, 2], [1], [], []), 3, 1),
    ([[1, 3, 4, 5], [0, 1, 3, 5], [0, 2, 3]], ([1, 2], [1, 2], [1, 2], []), 6, 3),
    ([[0, 2, 3, 5], [1, 3, 4, 5], [0, 1, 3]], ([2], [2, 1], [2], []), 4, 2),
    ([[0, 3, 4, 5], [1, 2, 3, 5], [0, 1, 3]], ([2], [2, 1, 2], [1, 2], []), 6, 3),
    ([[1, 2, 3, 5], [0, 3, 4, 5], [0, 1, 3]], ([1, 2], [2, 1], [2], []), 5, 2),
    ([[1, 3, 4, 5], [0, 2, 3, 5], [0, 1, 3]], ([1, 2], [1, 2, 1], [1, 2], []), 7, 3),
]


def test_ordered_example_terms(ordered_symbol):
    S = ordered_symbol
    v = S.multicharge
    terms = {t.image: t for t in ordered_terms(S)}
    assert len(terms) == 12
    cols = [(0, 0, 1), (1, 2, 3), (3, 3, 4), (5, 5)]
    for rows, words, ell, m in ORDERED_TERMS:
        T = sym(v, rows)
        moved = [swap_positions(c, w) for c, w in zip(cols, words)]
        assert [T.entry(r, j) for j, col in zip(range(-1, 3), moved)
                for r in range(len(col))] == [x for col in moved for x in col]
        assert sum(len(w) for w in words) == ell
        assert (terms[T].length, terms[T].m_statistic) == (ell, m)
        assert m_statistic(T) == m
    exps = sorted(t.exponent for t in terms.values())
    assert exps == [0, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3, 4]
    assert ordered_canonical(S).vector == canonical_oracle(S).vector


def test_ordered_rejects_unordered():
    S3 = sym((3, 3, 2), [[0, 1, 3, 5], [0, 1, 3, 5], [2, 3, 4]])
    with pytest.raises(MethodInapplicable, match="ordered"):
        ordered_canonical(S3)


def test_ordered_sequence_and_monomial():
    v = (5, 3, 2, 2)
    S = sym(v, [[0, 1, 2, 4, 5, 7], [0, 2, 3, 5], [0, 2, 4], [0, 2, 4]])
    assert is_ordered(S) and S.size == 14
    seq = ordered_seq(S)
    assert seq[-5:] == [4, 4, 2, 2, 2]
    assert seq == [6, 7, 5, 4, 4, 5, 3, 3, 3, 4, 4, 2, 2, 2]
    assert monomial_vector(v, runs_to_monomial(seq)) == canonical_oracle(S).vector


def test_disjoint_boundaries(ordered_symbol):
    assert not disjoint_column_boundaries(ordered_symbol)
    S = sym((2, 2, 1), [[0, 1, 2, 5], [0, 1, 3, 6], [0, 1, 4]])
    assert is_ordered(S)
    assert disjoint_column_boundaries(S) and heart_check(S)


# -- spines ------------------------------------------------------------------

S1 = ((3, 3, 2), [[0, 1, 3, 5], [0, 2, 3, 5], [1, 3, 4]])
S2 = ((3, 3, 2), [[0, 2, 3, 5], [0, 2, 3, 5], [1, 3, 4]])
S3 = ((3, 3, 2), [[0, 1, 3, 5], [0, 1, 3, 5], [2, 3, 4]])


def test_heart_condition():
    a, b, c = (sym(*x) for x in (S1, S2, S3))
    assert (heart_check(a), heart_check(b), heart_check(c)) == (False, True, True)
    assert psi_injection(a, 1, 2)(1) == 0
    assert psi_injection(a, 0, 1)(0) == 0
    assert psi_injection(a, 0, 2)(1) == 1


def test_spines_of_example():
    S = sym(*S2)
    dec = spines(S)
    assert set(dec.spines) == {(0, 0, 1), (3, 3, 3), (2, 2, 4), (5, 5)}
    assert all(S.entry(r, j) == j for r in range(3) for j in range(dec.low - 3, dec.low + 1))
    with pytest.raises(MethodInapplicable):
        spines(sym(*S1))


def test_spine_expansion():
    S = sym(*S2)
    G = spine_canonical(S)
    assert G.vector == canonical_oracle(S).vector
    assert len(G.vector) == 9
    T = sym((3, 3, 2), [[0, 2, 3, 5], [1, 3, 4, 5], [0, 2, 3]])
    assert G.coefficient(T) == q * q
    assert spine_canonical(sym(*S3)).vector == canonical_oracle(sym(*S3)).vector


def test_spine_sequence_is_monomial():
    S = sym(*S2)
    steps = spine_tilde_seq(S)
    assert steps == [(4, 2), (5, 2), (3, 3), (4, 1), (2, 3), (3, 1), (1, 1)]
    x = monomial_vector(S.multicharge, [(i - 1, m) for i, m in steps])
    assert x == spine_canonical(S).vector


def test_standard_input_required():
    bad = sym((1, 0), [[2, 3], [0]])
    assert not is_standard(bad)
    with pytest.raises(MethodInapplicable):
        lm_canonical(bad)
