"""Instance sources: the classic cycle-plus-merge family, seeded random
synchronizing-transitive automata, and exhaustive enumeration of small
transition tables for ground-truth sweeps."""

from __future__ import annotations

import itertools
import random
import string
from typing import Iterator, Sequence

from .automaton import Automaton, is_synchronizing
from .errors import ResourceCap, RetryExhausted
from .permgroup import is_transitive, perms_of

DEFAULT_ENUM_CAP = 1 << 21


def cerny(n: int) -> Automaton:
    """The n-state cycle-plus-merge automaton with reset threshold (n-1)^2.

    Letter "a" is the cyclic shift i -> i+1 (mod n); letter "b" sends state 1
    to 2 and fixes everything else.
    """
    if n < 2:
        raise ValueError("need at least 2 states")
    cycle = tuple((q + 1) % n for q in range(n))
    merge = (1,) + tuple(range(1, n))
    return Automaton(("a", "b"), (cycle, merge))


def _letter_names(count: int) -> tuple[str, ...]:
    if count > 26:
        raise ValueError("at most 26 letters supported")
    return tuple(string.ascii_lowercase[:count])


def random_st(
    n: int,
    n_perm_letters: int,
    n_defect1_letters: int,
    seed: int,
    *,
    max_attempts: int = 5000,
) -> Automaton:
    """A seeded random synchronizing automaton whose permutation letters act
    transitively and whose remaining letters each have defect exactly one.

    Permutation letters are drawn uniformly; defect-one letters are a random
    permutation with one state's image redirected onto another's, which
    excludes exactly one state and doubles exactly one fiber.  Draws repeat
    until the transitivity and synchronization checks pass.
    """
    if n < 2:
        raise ValueError("need at least 2 states")
    if n_perm_letters < 1:
        raise ValueError("need at least one permutation letter")
    if n_defect1_letters < 1:
        raise ValueError("need at least one defect-1 letter")
    rng = random.Random(seed)
    names = _letter_names(n_perm_letters + n_defect1_letters)
    for attempt in range(1, max_attempts + 1):
        rows = [tuple(rng.sample(range(n), n)) for _ in range(n_perm_letters)]
        if not is_transitive(rows, n):
            continue
        for _ in range(n_defect1_letters):
            base = rng.sample(range(n), n)
            s = rng.randrange(n)
            t = rng.randrange(n - 1)
            if t >= s:
                t += 1
            row = list(base)
            row[s] = base[t]
            rows.append(tuple(row))
        aut = Automaton(names, tuple(rows))
        if is_synchronizing(aut):
            return aut
    raise RetryExhausted(
        f"no ST automaton found in {max_attempts} attempts "
        f"(n={n}, perm={n_perm_letters}, defect1={n_defect1_letters}, seed={seed})"
    )


def canonical_form(aut: Automaton) -> tuple:
    """Minimum-lexicographic transition table over all state relabelings.

    Intended for deduplicating enumerated instances; the factorial sweep
    restricts it to at most 4 states.
    """
    n = aut.n
    if n > 4:
        raise ValueError("canonical form supported for n <= 4 only")
    best = None
    for relabel in itertools.permutations(range(n)):
        table = tuple(
            tuple(relabel[row[inverse]] for inverse in _inverse_order(relabel))
            for row in aut.table
        )
        if best is None or table < best:
            best = table
    return best


def _inverse_order(relabel: Sequence[int]) -> list[int]:
    inv = [0] * len(relabel)
    for old, new in enumerate(relabel):
        inv[new] = old
    return inv


def enumerate_automata(
    n: int,
    k: int,
    *,
    dedup: bool = False,
    cap: int | None = DEFAULT_ENUM_CAP,
) -> Iterator[Automaton]:
    """Stream every k-letter transition table on n states.

    With ``dedup`` only one representative per state-relabeling class is
    emitted.  The raw count n^(n*k) is checked against ``cap`` up front so a
    hopeless sweep fails fast instead of running forever.
    """
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    total = n ** (n * k)
    if cap is not None and total > cap:
        raise ResourceCap(f"enumeration of {total} tables exceeds cap {cap}")
    names = _letter_names(k)
    seen: set[tuple] = set()
    for rows in itertools.product(itertools.product(range(n), repeat=n), repeat=k):
        aut = Automaton(names, rows)
        if dedup:
            canon = canonical_form(aut)
            if canon in seen:
                continue
            seen.add(canon)
        yield aut


def exhaustive_st_instances(n: int, k: int = 2, *, cap: int | None = DEFAULT_ENUM_CAP) -> Iterator[Automaton]:
    """All enumerated n-state k-letter automata that are synchronizing with a
    transitive group generated by their permutation letters."""
    for aut in enumerate_automata(n, k, cap=cap):
        perm_ids = [a for a, d in enumerate(aut.letter_defects) if d == 0]
        if not perm_ids:
            continue
        if not is_transitive(perms_of(aut, perm_ids), n):
            continue
        if is_synchronizing(aut):
            yield aut
