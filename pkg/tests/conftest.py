import random

import pytest

from synchro.automaton import Automaton
from synchro.generate import cerny


@pytest.fixture
def c4() -> Automaton:
    return cerny(4)


@pytest.fixture
def c5() -> Automaton:
    return cerny(5)


def random_automaton(rng: random.Random, n: int, k: int) -> Automaton:
    rows = tuple(tuple(rng.randrange(n) for _ in range(n)) for _ in range(k))
    names = tuple("abcdefghij"[:k])
    return Automaton(names, rows)
