"""Preimage-growth vectors, their cone sequence under permutation shifts,
polar-escape lengths, and the subset-extension engine.

For a word w, the vector k_w records per state the preimage fiber size minus
one, so ``<char(S), k_w> = |S.w^-1| - |S|`` exactly.  Seeding with the
deficient letters and repeatedly shifting by the chosen permutation letters
yields a monotone generator sequence T_0 <= T_1 <= ... whose rational cones
K_i stabilize; the stabilized cone drives every extension bound below.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .automaton import (
    Automaton,
    EPSILON,
    Word,
    deficient_letters,
    is_strongly_connected,
    is_synchronizing,
    mask_of,
    preimage_mask,
    preimage_mask_table,
    states_of,
    word_preimage_mask,
)
from .errors import (
    InternalContradiction,
    NoDeficientLetters,
    NotStronglyConnected,
    NotSynchronizing,
    NotTransitive,
)
from .linalg import (
    Matrix,
    SubspaceBasis,
    Vector,
    char_vector_of_mask,
    in_cone,
    orthogonal_complement,
    span_basis,
)
from .permgroup import Perm, is_transitive, permutation_letters, perms_of


@dataclass(frozen=True)
class KVector:
    """A preimage-growth vector together with the word that produced it."""

    vector: Vector
    word: Word


def k_vector(aut: Automaton, word: Word) -> KVector:
    """k_w(i) = |preimage({i}, w)| - 1; coordinates sum to zero."""
    aut.validate_word(word)
    counts = [-1] * aut.n
    for q in range(aut.n):
        img = q
        for a in word:
            img = aut.table[a][img]
        counts[img] += 1
    return KVector(tuple(counts), tuple(word))


def preimage_matrix(aut: Automaton, word: Word) -> Matrix:
    """Matrix [w] with row q the indicator of preimage({q}, w).

    Acting on row vectors from the right: char(S) [w] = char(S.w^-1).
    """
    aut.validate_word(word)
    return tuple(
        char_vector_of_mask(word_preimage_mask(aut, 1 << q, word), aut.n)
        for q in range(aut.n)
    )


def shift_vector(vector: Vector, perm: Perm) -> Vector:
    """Coordinate action matching word extension by a permutation letter.

    Appending a letter acting as the permutation p to a word w moves each
    fiber along p, i.e. k_{wp}(p(q)) = k_w(q).
    """
    out = [0] * len(vector)
    for q, value in enumerate(vector):
        out[perm[q]] = value
    return tuple(out)


def subset_sums(vector: Sequence, size: int) -> list:
    """sums[mask] = sum of vector coordinates selected by mask, for all masks."""
    sums = [0] * size
    for mask in range(1, size):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] + vector[low.bit_length() - 1]
    return sums


def masked_sum(vector: Sequence, mask: int):
    total = 0
    while mask:
        low = mask & -mask
        mask ^= low
        total += vector[low.bit_length() - 1]
    return total


@dataclass(frozen=True)
class ConeReport:
    """Stabilization data for the generator sequence of one automaton.

    ``tiers[i]`` is the full generator set after i permutation shifts, so the
    last tier is the limit set.  ``limit_span`` is the span of the limit
    generators with ``polar_basis`` its orthogonal complement; when
    ``is_subspace`` is true (transitive permutation group) the limit cone
    equals that span and ``polar_basis`` is exactly its polar cone.
    """

    n: int
    a_letters: tuple[int, ...]
    deficient: tuple[int, ...]
    trans_len_t: int
    trans_len_k: int
    tiers: tuple[frozenset[Vector], ...]
    limit_generators: tuple[KVector, ...]
    is_subspace: bool
    span_dim: int
    limit_span: SubspaceBasis
    polar_basis: SubspaceBasis

    @property
    def limit_vectors(self) -> tuple[Vector, ...]:
        return tuple(kv.vector for kv in self.limit_generators)

    def dim_limit_cone(self) -> int:
        """Dimension of the limit cone; defined when it is a subspace."""
        if not self.is_subspace:
            raise NotTransitive("limit cone is only known to be a subspace for transitive sets")
        return self.span_dim


def _resolve_a_set(aut: Automaton, a_set: Sequence[int] | None) -> tuple[tuple[int, ...], tuple[Perm, ...]]:
    ids = permutation_letters(aut) if a_set is None else tuple(sorted(set(a_set)))
    return ids, perms_of(aut, ids)


def cone_sequence(aut: Automaton, a_set: Sequence[int] | None = None) -> ConeReport:
    """Iterate the generator sets to both transient lengths.

    The set transient is the first level whose shift adds no new vector; the
    cone transient is the first level at which every newly shifted generator
    already lies in the previous cone.  One-step equality suffices for both:
    later levels only shift existing vectors, and the shift maps carry the
    stabilized set (or cone) into itself.
    """
    a_ids, perms = _resolve_a_set(aut, a_set)
    deficient = deficient_letters(aut)
    if not deficient:
        raise NoDeficientLetters("every letter is a permutation")

    order: list[KVector] = []
    seen: set[Vector] = set()
    for b in deficient:
        kv = k_vector(aut, (b,))
        if kv.vector not in seen:
            seen.add(kv.vector)
            order.append(kv)
    tiers = [frozenset(seen)]
    frontier = list(order)
    trans_k: int | None = None
    level = 0
    while True:
        new: list[KVector] = []
        for kv in frontier:
            for a, perm in zip(a_ids, perms):
                vec = shift_vector(kv.vector, perm)
                if vec not in seen:
                    seen.add(vec)
                    new.append(KVector(vec, kv.word + (a,)))
        if not new:
            trans_len_t = level
            if trans_k is None:
                trans_k = level
            break
        if trans_k is None:
            current = [kv.vector for kv in order]
            if all(in_cone(kv.vector, current) for kv in new):
                trans_k = level
        order.extend(new)
        tiers.append(frozenset(seen))
        frontier = new
        level += 1

    vectors = [kv.vector for kv in order]
    limit_span = span_basis(vectors, aut.n)
    return ConeReport(
        n=aut.n,
        a_letters=a_ids,
        deficient=deficient,
        trans_len_t=trans_len_t,
        trans_len_k=trans_k,
        tiers=tuple(tiers),
        limit_generators=tuple(order),
        is_subspace=is_transitive(perms, aut.n),
        span_dim=limit_span.dim,
        limit_span=limit_span,
        polar_basis=orthogonal_complement(limit_span, aut.n),
    )


def k_limit_subspace(aut: Automaton, a_set: Sequence[int] | None = None) -> SubspaceBasis:
    """Echelon basis of the limit cone, which is a subspace for transitive sets."""
    report = cone_sequence(aut, a_set)
    if not report.is_subspace:
        raise NotTransitive("permutation letters do not generate a transitive group")
    return report.limit_span


def _escapes_polar(vectors: Sequence[Vector], mask: int) -> bool:
    return any(masked_sum(v, mask) > 0 for v in vectors)


def ell(
    aut: Automaton,
    a_set: Sequence[int] | None = None,
    s: Sequence[int] | frozenset[int] = (),
    *,
    cone: ConeReport | None = None,
) -> tuple[int, Word]:
    """Length (and witness) of a shortest word taking the preimage of ``s``
    outside the polar cone of the limit cone.

    Preimages are explored under every letter of the alphabet, not just the
    permutation set, because escape may need deficient steps.  If the
    indicator of ``s`` is already outside the polar cone the answer is (0, empty).
    """
    if not is_synchronizing(aut):
        raise NotSynchronizing("polar escape needs a synchronizing automaton")
    if not is_strongly_connected(aut):
        raise NotStronglyConnected("polar escape needs a strongly connected automaton")
    mask = mask_of(s, aut.n)
    if mask == 0 or mask == aut.full_mask:
        raise ValueError("need a nonempty proper subset of the states")
    if cone is None:
        cone = cone_sequence(aut, a_set)
    vectors = cone.limit_vectors
    if _escapes_polar(vectors, mask):
        return 0, EPSILON
    k = len(aut.letters)
    parents: dict[int, tuple[int, int]] = {mask: (-1, 0)}
    queue = deque([mask])
    while queue:
        cur = queue.popleft()
        for a in range(k):
            nxt = preimage_mask(aut, cur, a)
            if nxt in parents:
                continue
            parents[nxt] = (a, cur)
            if _escapes_polar(vectors, nxt):
                word = []
                walk = nxt
                while walk != mask:
                    a_, prev = parents[walk]
                    word.append(a_)
                    walk = prev
                return len(word), tuple(word)
            queue.append(nxt)
    raise InternalContradiction(
        "no preimage of the subset leaves the polar cone; this contradicts "
        "synchronizing strong connectivity and indicates a bug"
    )


def _extension_candidates(cone: ConeReport) -> list[KVector]:
    """Generator words usable by the extension step, shortest-then-lex order."""
    depth = cone.trans_len_k + 1
    return [kv for kv in cone.limit_generators if len(kv.word) <= depth]


def _extend_details(
    aut: Automaton,
    a_set: Sequence[int] | None,
    mask: int,
    cone: ConeReport,
) -> tuple[Word, int]:
    """Extension word for the subset given as a mask, plus its escape length."""
    ell_len, w = ell(aut, a_set, states_of(mask), cone=cone)
    p_mask = word_preimage_mask(aut, mask, w)
    for kv in _extension_candidates(cone):
        if masked_sum(kv.vector, p_mask) > 0:
            word = kv.word + w
            if word_preimage_mask(aut, mask, word).bit_count() <= mask.bit_count():
                raise InternalContradiction(
                    f"extension word {word} failed to grow the preimage"
                )
            return word, ell_len
    raise InternalContradiction(
        "no generator word extends the escaped subset; the stabilized cone "
        "certificate is violated"
    )


def extend_subset(
    aut: Automaton,
    a_set: Sequence[int] | None = None,
    s: Sequence[int] | frozenset[int] = (),
    *,
    cone: ConeReport | None = None,
) -> Word:
    """A word whose preimage strictly enlarges ``s``.

    The word factors as (generator word) + (polar escape witness); its length
    is bounded by the cone transient plus the escape length plus one.
    """
    if not is_synchronizing(aut):
        raise NotSynchronizing("extension needs a synchronizing automaton")
    if cone is None:
        cone = cone_sequence(aut, a_set)
    if not cone.is_subspace:
        raise NotTransitive("extension bounds need a transitive permutation set")
    mask = mask_of(s, aut.n)
    if mask == 0 or mask == aut.full_mask:
        raise ValueError("need a nonempty proper subset of the states")
    word, _ = _extend_details(aut, a_set, mask, cone)
    return word


def ell_all(
    aut: Automaton, vectors: Sequence[Vector]
) -> tuple[list[int | None], list[tuple[int, int] | None]]:
    """Escape distances for every subset mask at once.

    Returns (dist, step) arrays over all 2^n masks: ``dist[m]`` is the escape
    length of the subset with mask ``m`` (0 when already outside the polar
    cone, None when unreachable), and ``step[m]`` is (letter, next mask) along
    a shortest escape, with letters accumulating in application order so the
    witness word is their reverse.  One multi-source BFS from the escaped
    masks over reversed preimage edges covers the whole lattice.
    """
    n = aut.n
    size = 1 << n
    pre_tabs = preimage_mask_table(aut)
    escaped = bytearray(size)
    for vec in vectors:
        sums = subset_sums(vec, size)
        for m in range(size):
            if sums[m] > 0:
                escaped[m] = 1
    rev: list[list[tuple[int, int]]] = [[] for _ in range(size)]
    for m in range(size):
        for a, tab in enumerate(pre_tabs):
            rev[tab[m]].append((a, m))
    dist: list[int | None] = [None] * size
    step: list[tuple[int, int] | None] = [None] * size
    queue = deque()
    for m in range(size):
        if escaped[m]:
            dist[m] = 0
            queue.append(m)
    while queue:
        u = queue.popleft()
        du = dist[u]
        for a, m in rev[u]:
            if dist[m] is None:
                dist[m] = du + 1
                step[m] = (a, u)
                queue.append(m)
    return dist, step


def escape_word_from_steps(
    step: Sequence[tuple[int, int] | None], mask: int
) -> tuple[Word, int]:
    """Witness word and final (escaped) mask from an ``ell_all`` step array."""
    letters = []
    cur = mask
    while step[cur] is not None:
        a, cur2 = step[cur]
        letters.append(a)
        cur = cur2
    return tuple(reversed(letters)), cur
