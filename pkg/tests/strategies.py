"""Hypothesis strategies and small builders shared by the test modules."""

import random

from hypothesis import strategies as st

from magicmap.aig import AigBuilder


def random_aig(rng: random.Random, max_pis: int = 8, max_ands: int = 30, max_pos: int = 3):
    b = AigBuilder()
    pis = [b.add_pi() for _ in range(rng.randint(1, max_pis))]
    lits = list(pis)
    for _ in range(rng.randint(0, max_ands)):
        x = rng.choice(lits) ^ rng.randint(0, 1)
        y = rng.choice(lits) ^ rng.randint(0, 1)
        lit = b.add_and(x, y)
        if lit > 1 and lit not in lits:
            lits.append(lit)
    pos = [rng.choice(lits) ^ rng.randint(0, 1) for _ in range(rng.randint(1, max_pos))]
    return b.build(pos)


@st.composite
def aigs(draw, max_pis=8, max_ands=30, max_pos=3):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_aig(random.Random(seed), max_pis, max_ands, max_pos)
