"""Loop-free digraphs on the state set, excluded/duplicate states of
defect-one words, and the arc-growth sequence under permutation shifts.

Each defect-one word w misses exactly one state from its image (the excluded
state) and doubles exactly one preimage fiber (the duplicate state).  The
growth sequence seeds one arc (excluded, duplicate) per defect-one letter and
closes level by level under the permutation letters; its component structure
bounds the cone transient length computed in :mod:`synchro.cones`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .automaton import Automaton, Word, letters_of_defect
from .errors import (
    NoDefectOneLetters,
    NotTransitive,
    UnsupportedAlphabet,
    WrongDefect,
)
from .permgroup import Perm, is_transitive, perms_of, permutation_letters

Arc = tuple[int, int]


@dataclass(frozen=True)
class Digraph:
    """Loop-free digraph on vertices 1..n with a set of ordered arcs."""

    n: int
    arcs: frozenset[Arc]

    def __post_init__(self):
        for p, q in self.arcs:
            if p == q:
                raise ValueError(f"loop arc ({p},{p}) not allowed")
            if not (1 <= p <= self.n and 1 <= q <= self.n):
                raise ValueError(f"arc ({p},{q}) outside 1..{self.n}")

    def out_degree(self, v: int) -> int:
        return sum(1 for p, _ in self.arcs if p == v)

    def in_degree(self, v: int) -> int:
        return sum(1 for _, q in self.arcs if q == v)


def digraph(n: int, arcs: Iterable[Arc]) -> Digraph:
    return Digraph(n, frozenset(arcs))


def to_dot(g: Digraph, name: str = "gamma") -> str:
    """dot-format rendering, vertex labels 1..n, one arc per line."""
    lines = [f"digraph {name} {{"]
    for v in range(1, g.n + 1):
        lines.append(f"  {v};")
    for p, q in sorted(g.arcs):
        lines.append(f"  {p} -> {q};")
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ComponentDecomposition:
    """Strong and weak component partitions with sink/source flags.

    ``sccs`` is ordered topologically with respect to the condensation
    (sources first); ``scc_is_sink[i]`` / ``scc_is_source[i]`` flag the i-th
    strong component.
    """

    sccs: tuple[frozenset[int], ...]
    wccs: tuple[frozenset[int], ...]
    scc_is_sink: tuple[bool, ...]
    scc_is_source: tuple[bool, ...]

    @property
    def scc_partition(self) -> frozenset[frozenset[int]]:
        return frozenset(self.sccs)

    @property
    def wcc_partition(self) -> frozenset[frozenset[int]]:
        return frozenset(self.wccs)

    @property
    def sink_count(self) -> int:
        return sum(self.scc_is_sink)

    @property
    def source_count(self) -> int:
        return sum(self.scc_is_source)


def scc_wcc(g: Digraph) -> ComponentDecomposition:
    """Kosaraju strong components plus union-find weak components."""
    n = g.n
    adj: list[list[int]] = [[] for _ in range(n + 1)]
    radj: list[list[int]] = [[] for _ in range(n + 1)]
    for p, q in sorted(g.arcs):
        adj[p].append(q)
        radj[q].append(p)

    visited = [False] * (n + 1)
    finish: list[int] = []
    for start in range(1, n + 1):
        if visited[start]:
            continue
        visited[start] = True
        stack: list[tuple[int, int]] = [(start, 0)]
        while stack:
            v, idx = stack.pop()
            advanced = False
            while idx < len(adj[v]):
                w = adj[v][idx]
                idx += 1
                if not visited[w]:
                    visited[w] = True
                    stack.append((v, idx))
                    stack.append((w, 0))
                    advanced = True
                    break
            if not advanced:
                finish.append(v)

    comp = [0] * (n + 1)
    sccs: list[frozenset[int]] = []
    assigned = [False] * (n + 1)
    for root in reversed(finish):
        if assigned[root]:
            continue
        members = []
        assigned[root] = True
        stack2 = [root]
        while stack2:
            v = stack2.pop()
            members.append(v)
            for w in radj[v]:
                if not assigned[w]:
                    assigned[w] = True
                    stack2.append(w)
        index = len(sccs)
        for v in members:
            comp[v] = index
        sccs.append(frozenset(members))

    is_sink = [True] * len(sccs)
    is_source = [True] * len(sccs)
    for p, q in g.arcs:
        if comp[p] != comp[q]:
            is_sink[comp[p]] = False
            is_source[comp[q]] = False

    parent = list(range(n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p, q in g.arcs:
        rp, rq = find(p), find(q)
        if rp != rq:
            parent[rp] = rq
    groups: dict[int, set[int]] = {}
    for v in range(1, n + 1):
        groups.setdefault(find(v), set()).add(v)
    wccs = tuple(frozenset(group) for _, group in sorted(groups.items()))

    return ComponentDecomposition(
        sccs=tuple(sccs),
        wccs=wccs,
        scc_is_sink=tuple(is_sink),
        scc_is_source=tuple(is_source),
    )


def excluded_and_duplicate(aut: Automaton, word: Word) -> tuple[int, int]:
    """The unique state missing from the image and the unique doubled fiber.

    Defined exactly for words of defect one; both states are 1-indexed.
    """
    aut.validate_word(word)
    counts = [0] * aut.n
    for q in range(aut.n):
        img = q
        for a in word:
            img = aut.table[a][img]
        counts[img] += 1
    missing = [q for q, c in enumerate(counts) if c == 0]
    doubled = [q for q, c in enumerate(counts) if c == 2]
    if len(missing) != 1 or len(doubled) != 1:
        raise WrongDefect(f"word has defect {len(missing)}, need exactly 1")
    return missing[0] + 1, doubled[0] + 1


@dataclass(frozen=True)
class GrowthTrace:
    """The digraph growth sequence up to stabilization.

    ``levels[i]`` holds the arcs reachable with at most i permutation shifts;
    the trace stops at the first level whose shift adds nothing, so the last
    entry is the limit digraph.  Indexing past the end is clamped to it.
    """

    levels: tuple[Digraph, ...]
    decompositions: tuple[ComponentDecomposition, ...]

    @property
    def n(self) -> int:
        return self.levels[0].n

    @property
    def transient(self) -> int:
        return len(self.levels) - 1

    @property
    def limit(self) -> Digraph:
        return self.levels[-1]

    @property
    def limit_decomposition(self) -> ComponentDecomposition:
        return self.decompositions[-1]

    @property
    def d(self) -> int:
        """Number of strong components of the limit digraph."""
        return len(self.limit_decomposition.sccs)

    def at(self, i: int) -> Digraph:
        return self.levels[min(max(i, 0), self.transient)]

    def decomposition_at(self, i: int) -> ComponentDecomposition:
        return self.decompositions[min(max(i, 0), self.transient)]


def shift_arc(arc: Arc, perm: Perm) -> Arc:
    p, q = arc
    return perm[p - 1] + 1, perm[q - 1] + 1


def gamma_growth(aut: Automaton, a_set: Sequence[int] | None = None) -> GrowthTrace:
    """Grow the excluded/duplicate arc digraph under the permutation letters.

    Level zero holds one arc per defect-one letter; appending a permutation
    letter to a defect-one word shifts both distinguished states by it, so
    each next level is the previous one plus its shifted arcs.
    """
    sigma1 = sorted(letters_of_defect(aut, 1)) if aut.n >= 2 else []
    if not sigma1:
        raise NoDefectOneLetters("no letter has defect exactly 1")
    a_ids = permutation_letters(aut) if a_set is None else tuple(sorted(set(a_set)))
    perms = perms_of(aut, a_ids)

    seeds = {excluded_and_duplicate(aut, (b,)) for b in sigma1}
    arcs: set[Arc] = set(seeds)
    frontier = sorted(seeds)
    levels = [digraph(aut.n, arcs)]
    while True:
        new = []
        for arc in frontier:
            for perm in perms:
                shifted = shift_arc(arc, perm)
                if shifted not in arcs:
                    arcs.add(shifted)
                    new.append(shifted)
        if not new:
            break
        levels.append(digraph(aut.n, arcs))
        frontier = new
    return GrowthTrace(
        levels=tuple(levels),
        decompositions=tuple(scc_wcc(g) for g in levels),
    )


@dataclass(frozen=True)
class LemmaCheck:
    """Outcome of one executable lemma check: pass, fail, or n/a."""

    name: str
    status: str
    detail: str = ""


@dataclass(frozen=True)
class GrowthLemmaReport:
    checks: tuple[LemmaCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def by_name(self, name: str) -> LemmaCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def arc_incidence_vector(p: int, q: int, n: int) -> tuple:
    """Indicator difference char({p}) - char({q}) for 1-indexed states."""
    out = [0] * n
    out[p - 1] += 1
    out[q - 1] -= 1
    return tuple(out)


def verify_growth_lemmas(
    aut: Automaton,
    a_set: Sequence[int] | None = None,
    *,
    trace: GrowthTrace | None = None,
) -> GrowthLemmaReport:
    """Run every growth-structure theorem as an executable check.

    All of these are proved facts, so any failure indicates an implementation
    bug.  Checks whose hypothesis needs a transitive permutation set are
    reported n/a when it is not.
    """
    from .linalg import orthogonal_complement, span_basis

    a_ids = permutation_letters(aut) if a_set is None else tuple(sorted(set(a_set)))
    perms = perms_of(aut, a_ids)
    if trace is None:
        trace = gamma_growth(aut, a_ids)
    n = trace.n
    transitive = is_transitive(perms, n)
    checks: list[LemmaCheck] = []

    def add(name: str, ok: bool, detail: str = "") -> None:
        checks.append(LemmaCheck(name, "pass" if ok else "fail", detail))

    def add_na(name: str, why: str) -> None:
        checks.append(LemmaCheck(name, "n/a", why))

    shift_ok = True
    shift_detail = ""
    for i in range(trace.transient + 1):
        nxt = trace.at(i + 1).arcs
        for arc in trace.at(i).arcs:
            for perm in perms:
                if shift_arc(arc, perm) not in nxt:
                    shift_ok = False
                    shift_detail = f"arc {arc} shifted out of level {i + 1}"
    add("arc_shift_closure", shift_ok, shift_detail)

    rank_ok = True
    rank_detail = ""
    basis = span_basis([], n)
    previous: frozenset[Arc] = frozenset()
    for i, (level, deco) in enumerate(zip(trace.levels, trace.decompositions)):
        for p, q in sorted(level.arcs - previous):
            basis = basis.extended(arc_incidence_vector(p, q, n))
        previous = level.arcs
        expected = n - len(deco.wccs)
        if basis.dim != expected:
            rank_ok = False
            rank_detail = f"level {i}: rank {basis.dim} != {expected}"
            break
        complement = orthogonal_complement(basis, n)
        chars = span_basis([tuple(1 if v in w else 0 for v in range(1, n + 1)) for w in deco.wccs], n)
        if complement != chars:
            rank_ok = False
            rank_detail = f"level {i}: complement differs from component span"
            break
    add("incidence_rank_matches_weak_components", rank_ok, rank_detail)

    if not transitive:
        why = "permutation set not transitive"
        for name in (
            "weak_equals_strong_at_limit",
            "weak_components_stable_early",
            "every_vertex_covered_early",
            "strong_stable_by_n_when_many_components",
            "strong_stable_late_when_few_components",
        ):
            add_na(name, why)
        return GrowthLemmaReport(tuple(checks))

    limit_deco = trace.limit_decomposition
    d = trace.d
    add(
        "weak_equals_strong_at_limit",
        limit_deco.wcc_partition == limit_deco.scc_partition,
        f"{len(limit_deco.wccs)} weak vs {len(limit_deco.sccs)} strong",
    )
    add(
        "weak_components_stable_early",
        trace.decomposition_at(n - d - 1).wcc_partition == limit_deco.wcc_partition,
        f"checked at level {n - d - 1}",
    )
    early = trace.at(n - 1)
    heads = {q for _, q in early.arcs}
    tails = {p for p, _ in early.arcs}
    add(
        "every_vertex_covered_early",
        all(v in heads and v in tails for v in range(1, n + 1)),
        f"level {n - 1}",
    )
    if 3 * d > n:
        add(
            "strong_stable_by_n_when_many_components",
            trace.decomposition_at(n).scc_partition == limit_deco.scc_partition,
            f"d={d}",
        )
        add_na("strong_stable_late_when_few_components", f"d={d} > n/3")
    else:
        add_na("strong_stable_by_n_when_many_components", f"d={d} <= n/3")
        idx = 2 * n - 3 * d - 1
        add(
            "strong_stable_late_when_few_components",
            trace.decomposition_at(idx).scc_partition == limit_deco.scc_partition,
            f"checked at level {idx}, d={d}",
        )
    return GrowthLemmaReport(tuple(checks))


def translen_k_bound(aut: Automaton, a_set: Sequence[int] | None = None, *, dim: int | None = None) -> int:
    """Component-counting bound on the cone transient length.

    Valid when every letter has defect at most one and the permutation set is
    transitive; ``dim`` is the limit-cone dimension (computed via the cone
    sequence when not supplied).
    """
    if any(d > 1 for d in aut.letter_defects):
        raise UnsupportedAlphabet("a letter of defect 2 or more is present")
    a_ids = permutation_letters(aut) if a_set is None else tuple(sorted(set(a_set)))
    perms = perms_of(aut, a_ids)
    if not is_transitive(perms, aut.n):
        raise NotTransitive("bound requires a transitive permutation set")
    if dim is None:
        from .cones import cone_sequence

        dim = cone_sequence(aut, a_ids).span_dim
    n = aut.n
    if 2 * dim == n:
        return n
    return 3 * dim - n - 1
