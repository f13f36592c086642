"""Complete deterministic automata: word actions, preimages, defect profiles,
connectivity, synchronization, and the exact reset-threshold oracle."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import NotSynchronizing, ResourceCap

Word = tuple[int, ...]

EPSILON: Word = ()

DEFAULT_SUBSET_CAP = 1 << 22


@dataclass(frozen=True)
class Automaton:
    """Complete deterministic automaton on states 1..n.

    ``table[a][q]`` is the 0-based image of 0-based state ``q`` under letter
    ``a``.  Everything user-facing (constructors, the file format, reports,
    and the state sets passed to or returned by the operations below) speaks
    1-indexed states; the 0-based table and bitmask positions are internal.
    Instances are immutable and safe to share across threads.
    """

    letters: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.letters:
            raise ValueError("automaton needs at least one letter")
        if len(self.letters) != len(self.table):
            raise ValueError("one table row per letter required")
        if len(set(self.letters)) != len(self.letters):
            raise ValueError("duplicate letter name")
        for name in self.letters:
            if not name or any(c.isspace() for c in name):
                raise ValueError(f"bad letter name {name!r}")
        n = len(self.table[0])
        if n < 1:
            raise ValueError("automaton needs at least one state")
        for name, row in zip(self.letters, self.table):
            if len(row) != n:
                raise ValueError(f"letter {name!r}: expected {n} images, got {len(row)}")
            for q, img in enumerate(row):
                if not 0 <= img < n:
                    raise ValueError(
                        f"letter {name!r}: image {img + 1} of state {q + 1} out of range 1..{n}"
                    )

    @classmethod
    def from_rows(cls, letters: Sequence[str], rows: Sequence[Sequence[int]]) -> "Automaton":
        """Build from 1-indexed image rows, one row per letter."""
        return cls(tuple(letters), tuple(tuple(img - 1 for img in row) for row in rows))

    @property
    def n(self) -> int:
        return len(self.table[0])

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def rows(self) -> tuple[tuple[int, ...], ...]:
        """1-indexed image rows, one per letter (the file-format view)."""
        return tuple(tuple(img + 1 for img in row) for row in self.table)

    def letter_index(self, name: str) -> int:
        try:
            return self.letters.index(name)
        except ValueError:
            raise ValueError(f"unknown letter {name!r}") from None

    def word(self, source: str | Iterable[int | str]) -> Word:
        """Parse a word from letter names or indices.

        A plain string is read letter-by-letter when every letter name is a
        single character, and as whitespace-separated names otherwise.
        """
        if isinstance(source, str):
            parts: Iterable[int | str]
            if all(len(name) == 1 for name in self.letters):
                parts = list(source)
            else:
                parts = source.split()
        else:
            parts = source
        out = []
        for item in parts:
            if isinstance(item, str):
                out.append(self.letter_index(item))
            else:
                self._check_letter(item)
                out.append(item)
        return tuple(out)

    def format_word(self, word: Word) -> str:
        self.validate_word(word)
        names = [self.letters[a] for a in word]
        if all(len(name) == 1 for name in self.letters):
            return "".join(names)
        return " ".join(names)

    def word_names(self, word: Word) -> list[str]:
        self.validate_word(word)
        return [self.letters[a] for a in word]

    def _check_letter(self, a: int) -> None:
        if not isinstance(a, int) or not 0 <= a < len(self.letters):
            raise ValueError(f"invalid letter id {a!r}")

    def validate_word(self, word: Iterable[int]) -> None:
        for a in word:
            self._check_letter(a)

    @cached_property
    def preimage_state_masks(self) -> tuple[tuple[int, ...], ...]:
        """For each letter, the preimage bitmask of every 0-based state."""
        out = []
        for row in self.table:
            masks = [0] * self.n
            for q, img in enumerate(row):
                masks[img] |= 1 << q
            out.append(tuple(masks))
        return tuple(out)

    @cached_property
    def letter_defects(self) -> tuple[int, ...]:
        return tuple(self.n - len(set(row)) for row in self.table)


# ---------------------------------------------------------------------------
# bitmask helpers (state i, 1-indexed, lives at bit i-1)

def mask_of(states: Iterable[int], n: int) -> int:
    mask = 0
    for q in states:
        if not 1 <= q <= n:
            raise ValueError(f"state {q} out of range 1..{n}")
        mask |= 1 << (q - 1)
    return mask


def states_of(mask: int) -> frozenset[int]:
    out = set()
    while mask:
        low = mask & -mask
        mask ^= low
        out.add(low.bit_length())
    return frozenset(out)


def image_mask(aut: Automaton, mask: int, a: int) -> int:
    row = aut.table[a]
    out = 0
    while mask:
        low = mask & -mask
        mask ^= low
        out |= 1 << row[low.bit_length() - 1]
    return out


def preimage_mask(aut: Automaton, mask: int, a: int) -> int:
    masks = aut.preimage_state_masks[a]
    out = 0
    while mask:
        low = mask & -mask
        mask ^= low
        out |= masks[low.bit_length() - 1]
    return out


def word_image_mask(aut: Automaton, mask: int, word: Word) -> int:
    for a in word:
        mask = image_mask(aut, mask, a)
    return mask


def word_preimage_mask(aut: Automaton, mask: int, word: Word) -> int:
    # S.(uv)^-1 = (S.v^-1).u^-1, so letters are consumed right to left.
    for a in reversed(word):
        mask = preimage_mask(aut, mask, a)
    return mask


def preimage_mask_table(aut: Automaton) -> list[list[int]]:
    """Per letter, the preimage mask of every subset mask; O(k * 2^n) total."""
    size = 1 << aut.n
    tables = []
    for state_masks in aut.preimage_state_masks:
        tab = [0] * size
        for mask in range(1, size):
            low = mask & -mask
            tab[mask] = tab[mask ^ low] | state_masks[low.bit_length() - 1]
        tables.append(tab)
    return tables


# ---------------------------------------------------------------------------
# operations

def apply_word(aut: Automaton, states: Iterable[int], word: Word) -> frozenset[int]:
    """Forward action: the set {q.w : q in states}, 1-indexed."""
    aut.validate_word(word)
    return states_of(word_image_mask(aut, mask_of(states, aut.n), word))


def preimage(aut: Automaton, states: Iterable[int], word: Word) -> frozenset[int]:
    """The exact preimage {q : q.w in states}, 1-indexed."""
    aut.validate_word(word)
    return states_of(word_preimage_mask(aut, mask_of(states, aut.n), word))


def defect(aut: Automaton, word: Word) -> int:
    """Number of states missing from the image of the whole state set."""
    aut.validate_word(word)
    return aut.n - word_image_mask(aut, aut.full_mask, word).bit_count()


def letters_of_defect(aut: Automaton, i: int) -> frozenset[int]:
    """Letter ids whose single-letter defect is exactly ``i``."""
    if not 0 <= i <= aut.n - 1:
        raise ValueError(f"defect {i} out of range 0..{aut.n - 1}")
    return frozenset(a for a, d in enumerate(aut.letter_defects) if d == i)


def deficient_letters(aut: Automaton) -> tuple[int, ...]:
    """Letter ids of positive defect, in alphabet order."""
    return tuple(a for a, d in enumerate(aut.letter_defects) if d > 0)


def is_strongly_connected(aut: Automaton) -> bool:
    """True iff every state reaches every other in the transition digraph."""
    n = aut.n
    if n == 1:
        return True
    fwd = [set() for _ in range(n)]
    back = [set() for _ in range(n)]
    for row in aut.table:
        for q, img in enumerate(row):
            fwd[q].add(img)
            back[img].add(q)
    for adj in (fwd, back):
        seen = {0}
        stack = [0]
        while stack:
            q = stack.pop()
            for r in adj[q]:
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        if len(seen) != n:
            return False
    return True


def is_synchronizing(aut: Automaton) -> bool:
    """Decide synchronizability by the pair-merging criterion.

    The automaton admits a reset word iff every 2-element subset of states is
    mapped to a singleton by some word, which a backward closure over the
    pair graph decides in polynomial time (no power-set search).
    """
    n = aut.n
    if n == 1:
        return True
    pair_id = {}
    pairs = []
    for p in range(n):
        for q in range(p + 1, n):
            pair_id[(p, q)] = len(pairs)
            pairs.append((p, q))
    mergeable = [False] * len(pairs)
    rev: list[list[int]] = [[] for _ in pairs]
    seeds = []
    for i, (p, q) in enumerate(pairs):
        for row in aut.table:
            pi, qi = row[p], row[q]
            if pi == qi:
                if not mergeable[i]:
                    mergeable[i] = True
                    seeds.append(i)
            else:
                j = pair_id[(pi, qi) if pi < qi else (qi, pi)]
                rev[j].append(i)
    queue = deque(seeds)
    while queue:
        j = queue.popleft()
        for i in rev[j]:
            if not mergeable[i]:
                mergeable[i] = True
                queue.append(i)
    return all(mergeable)


def reset_threshold_exact(aut: Automaton, cap: int = DEFAULT_SUBSET_CAP) -> tuple[int, Word]:
    """Exact reset threshold with a shortest witness word.

    Breadth-first search on the subset lattice, starting from the full state
    set and applying letters forward, guarantees the first singleton reached
    sits at minimum depth.  Ties among shortest words are broken by letter
    order, so the witness is deterministic for a given automaton.  Memory is
    bounded by ``cap`` visited subsets.
    """
    if not is_synchronizing(aut):
        raise NotSynchronizing("automaton admits no reset word")
    full = aut.full_mask
    if full.bit_count() == 1:
        return 0, EPSILON
    k = len(aut.letters)
    parents: dict[int, tuple[int, int]] = {full: (-1, 0)}
    queue = deque([full])
    while queue:
        mask = queue.popleft()
        for a in range(k):
            nxt = image_mask(aut, mask, a)
            if nxt in parents:
                continue
            parents[nxt] = (a, mask)
            if nxt.bit_count() == 1:
                word = []
                cur = nxt
                while cur != full:
                    a_, prev = parents[cur]
                    word.append(a_)
                    cur = prev
                word.reverse()
                return len(word), tuple(word)
            if len(parents) > cap:
                raise ResourceCap(f"subset frontier exceeded cap of {cap} subsets")
            queue.append(nxt)
    raise NotSynchronizing("automaton admits no reset word")  # pragma: no cover
