import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from magicmap.aig import AigBuilder, and_balance, exhaustive_words, simulate, truth_tables

from strategies import aigs


def test_strash_and_trivial_rules():
    b = AigBuilder()
    x, y = b.add_pi(), b.add_pi()
    n = b.add_and(x, y)
    assert b.add_and(y, x) == n
    assert b.add_and(x, 0) == 0
    assert b.add_and(x, 1) == x
    assert b.add_and(x, x) == x
    assert b.add_and(x, x ^ 1) == 0
    assert len(b._ands) == 1


def test_pis_before_ands():
    b = AigBuilder()
    x = b.add_pi()
    b.add_and(x, b.add_pi())
    with pytest.raises(RuntimeError):
        b.add_pi()


def test_exhaustive_words_enumerate_patterns():
    words, mask = exhaustive_words(3)
    assert mask == 0xFF
    for idx in range(8):
        assert [(w >> idx) & 1 for w in words] == [(idx >> i) & 1 for i in range(3)]


def test_or_and_xor_simulation():
    b = AigBuilder()
    x, y = b.add_pi(), b.add_pi()
    o = b.add_or(x, y)
    xor = b.add_or(b.add_and(x, y ^ 1), b.add_and(x ^ 1, y))
    aig = b.build([o, xor, 1, 0])
    for a, c in itertools.product((0, 1), repeat=2):
        assert simulate(aig, [a, c]) == [a | c, a ^ c, 1, 0]
    with pytest.raises(ValueError):
        simulate(aig, [1])


@pytest.mark.parametrize("n", [2, 3, 5, 6, 8, 13])
def test_balance_chain_is_logarithmic(n):
    b = AigBuilder()
    pis = [b.add_pi() for _ in range(n)]
    aig = b.build([b.add_and_chain(pis)])
    assert aig.depth() == n - 1
    bal = and_balance(aig)
    assert bal.depth() == math.ceil(math.log2(n))
    assert truth_tables(bal) == truth_tables(aig)


def test_balance_keeps_shared_nodes_as_roots():
    b = AigBuilder()
    p = [b.add_pi() for _ in range(4)]
    shared = b.add_and(b.add_and(p[0], p[1]), p[2])
    aig = b.build([b.add_and(shared, p[3]), shared])
    bal = and_balance(aig)
    assert truth_tables(bal) == truth_tables(aig)
    assert bal.depth() <= aig.depth()


@settings(max_examples=80, deadline=None)
@given(aigs(max_pis=10, max_ands=40))
def test_balance_preserves_function_and_depth(aig):
    bal = and_balance(aig)
    assert truth_tables(bal) == truth_tables(aig)
    assert bal.depth() <= aig.depth()
    assert bal.pi_count == aig.pi_count and len(bal.pos) == len(aig.pos)


@settings(max_examples=40, deadline=None)
@given(aigs(max_pis=6), st.integers(0, 63))
def test_word_and_scalar_simulation_agree(aig, idx):
    idx %= 1 << aig.pi_count
    pattern = [(idx >> i) & 1 for i in range(aig.pi_count)]
    tts = truth_tables(aig)
    assert simulate(aig, pattern) == [(t >> idx) & 1 for t in tts]
