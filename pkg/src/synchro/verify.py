"""Executable verification suites.

Every statement the synthesis machinery relies on is a proved fact, so these
suites treat any failure as an implementation bug and report it with a
witness.  ``lemma_suite`` audits one automaton; the ``suite_*`` functions
sweep generated or enumerated instance batches and aggregate failures.
"""

from __future__ import annotations

import itertools
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .automaton import (
    Automaton,
    is_strongly_connected,
    is_synchronizing,
    preimage_mask_table,
    reset_threshold_exact,
    states_of,
    word_image_mask,
    word_preimage_mask,
)
from .bounds import (
    bound_defect1,
    bound_main,
    bound_rystsov,
    synthesize_reset_word,
)
from .cones import (
    _extension_candidates,
    cone_sequence,
    ell_all,
    escape_word_from_steps,
    k_vector,
    masked_sum,
    subset_sums,
)
from .errors import CapExceeded
from .generate import cerny, enumerate_automata, exhaustive_st_instances, random_st
from .growth import (
    LemmaCheck,
    gamma_growth,
    translen_k_bound,
    verify_growth_lemmas,
)
from .linalg import in_cone, unit_difference
from .permgroup import is_transitive, permutation_letters, perms_of


@dataclass(frozen=True)
class InstanceChecks:
    label: str
    checks: tuple[LemmaCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    @property
    def failures(self) -> tuple[LemmaCheck, ...]:
        return tuple(c for c in self.checks if c.status == "fail")


@dataclass
class SuiteReport:
    suite: str
    seed: int | None
    params: dict
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures


def worker_count(requested: int | None = None) -> int:
    """Worker threads for suite fan-out; SYNCHRO_THREADS overrides."""
    if requested is not None:
        return max(1, requested)
    env = os.environ.get("SYNCHRO_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _map(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# per-instance lemma audit

def lemma_suite(
    aut: Automaton,
    a_set: Sequence[int] | None = None,
    *,
    word_depth: int = 3,
    subset_limit: int = 1 << 14,
    sample_size: int = 2048,
    label: str = "",
) -> InstanceChecks:
    """Audit one automaton against every executable lemma that applies.

    Subset-quantified checks run exhaustively while 2^n stays within
    ``subset_limit`` and fall back to seeded sampling beyond it.  Checks
    whose hypotheses do not hold for this instance report n/a.
    """
    n = aut.n
    k_letters = len(aut.letters)
    size = 1 << n
    exhaustive = size <= subset_limit
    a_ids = tuple(sorted(permutation_letters(aut) if a_set is None else set(a_set)))
    perms = perms_of(aut, a_ids)
    transitive = is_transitive(perms, n)
    sync = is_synchronizing(aut)
    connected = is_strongly_connected(aut)
    defects = aut.letter_defects
    has_deficient = any(d > 0 for d in defects)
    defect_at_most_1 = all(d <= 1 for d in defects)
    has_defect_1 = any(d == 1 for d in defects)
    checks: list[LemmaCheck] = []

    def add(name: str, ok: bool, detail: str = "") -> None:
        checks.append(LemmaCheck(name, "pass" if ok else "fail", detail))

    def add_na(name: str, why: str) -> None:
        checks.append(LemmaCheck(name, "n/a", why))

    rng = random.Random(0x5EED ^ (n << 16) ^ k_letters)
    if exhaustive:
        masks = range(size)
        pre_tabs = preimage_mask_table(aut)
        pc = [m.bit_count() for m in range(size)]
    else:
        masks = [rng.randrange(size) for _ in range(sample_size)]
        pre_tabs = None
        pc = None

    # growth identity |S.w^-1| - |S| = <char(S), k_w> on all short words
    identity_ok = True
    identity_detail = ""
    words = [
        word
        for length in range(word_depth + 1)
        for word in itertools.product(range(k_letters), repeat=length)
    ]
    for word in words:
        vec = k_vector(aut, word).vector
        if exhaustive:
            sums = subset_sums(vec, size)
            arr = list(range(size))
            for a in reversed(word):
                tab = pre_tabs[a]
                arr = [tab[x] for x in arr]
            for mask in masks:
                if pc[arr[mask]] - pc[mask] != sums[mask]:
                    identity_ok = False
                    identity_detail = f"word {word}, subset mask {mask}"
                    break
        else:
            for mask in masks:
                got = word_preimage_mask(aut, mask, word).bit_count() - mask.bit_count()
                if got != masked_sum(vec, mask):
                    identity_ok = False
                    identity_detail = f"word {word}, subset mask {mask}"
                    break
        if not identity_ok:
            break
    add("preimage_growth_identity", identity_ok, identity_detail)

    if not has_deficient:
        add_na("limit_generators_sum_zero", "no deficient letter")
        return InstanceChecks(label or f"n{n}", tuple(checks))

    cone = cone_sequence(aut, a_ids)
    vectors = cone.limit_vectors
    add(
        "limit_generators_sum_zero",
        all(sum(v) == 0 for v in vectors),
        "",
    )
    add(
        "t_transient_at_least_k_transient",
        cone.trans_len_t >= cone.trans_len_k,
        f"T {cone.trans_len_t} vs K {cone.trans_len_k}",
    )

    # stabilization certificate: one-step equality at the reported index,
    # strict growth just before it
    j = cone.trans_len_k
    tier_j = cone.tiers[j]
    tier_next = cone.tiers[j + 1] if j + 1 < len(cone.tiers) else tier_j
    cert_ok = all(in_cone(v, list(tier_j)) for v in tier_next - tier_j)
    if cert_ok and j > 0:
        tier_prev = cone.tiers[j - 1]
        cert_ok = any(not in_cone(v, list(tier_prev)) for v in cone.tiers[j] - tier_prev)
    add("k_transient_certificate", cert_ok, f"index {j}")

    if transitive:
        add(
            "negation_closure_of_limit_cone",
            all(in_cone(tuple(-x for x in v), vectors) for v in vectors),
            "",
        )
    else:
        add_na("negation_closure_of_limit_cone", "permutation set not transitive")

    # polar membership forces letter preimages to keep the cardinality when
    # the limit cone is a subspace (generators negation-closed); without
    # that symmetry only the non-increasing direction holds
    if exhaustive:
        escaped = bytearray(size)
        for vec in vectors:
            sums = subset_sums(vec, size)
            for m in range(size):
                if sums[m] > 0:
                    escaped[m] = 1
        stable_ok = True
        stable_detail = ""
        for m in range(size):
            if escaped[m]:
                continue
            for tab in pre_tabs:
                delta = pc[tab[m]] - pc[m]
                if delta > 0 or (transitive and delta != 0):
                    stable_ok = False
                    stable_detail = f"mask {m}"
                    break
            if not stable_ok:
                break
        add("polar_members_have_stable_preimages", stable_ok, stable_detail)
    else:
        add_na("polar_members_have_stable_preimages", "state set too large for exhaustive sweep")

    if sync and connected and transitive and exhaustive:
        dist, step = ell_all(aut, vectors)
        bound_codim = n - 1 - cone.span_dim
        escape_ok = True
        escape_detail = ""
        extend_ok = True
        extend_detail = ""
        candidates = _extension_candidates(cone)
        for mask in range(1, size - 1):
            if dist[mask] is None or dist[mask] > bound_codim:
                escape_ok = False
                escape_detail = f"subset {sorted(states_of(mask))}: escape {dist[mask]}"
                break
            witness, escaped_mask = escape_word_from_steps(step, mask)
            for kv in candidates:
                if masked_sum(kv.vector, escaped_mask) > 0:
                    word = kv.word + witness
                    if len(word) > cone.trans_len_k + dist[mask] + 1:
                        extend_ok = False
                        extend_detail = f"subset {sorted(states_of(mask))}: length {len(word)}"
                    elif (
                        word_preimage_mask(aut, mask, word).bit_count()
                        <= mask.bit_count()
                    ):
                        extend_ok = False
                        extend_detail = f"subset {sorted(states_of(mask))}: no growth"
                    break
            else:
                extend_ok = False
                extend_detail = f"subset {sorted(states_of(mask))}: no extending word"
            if not extend_ok:
                break
        add("escape_length_within_codimension", escape_ok, escape_detail)
        add("extension_length_within_cone_bound", extend_ok, extend_detail)
    else:
        why = (
            "needs synchronizing, strongly connected, transitive, exhaustive"
            f" (sync={sync}, connected={connected}, transitive={transitive})"
        )
        add_na("escape_length_within_codimension", why)
        add_na("extension_length_within_cone_bound", why)

    if has_defect_1:
        trace = gamma_growth(aut, a_ids)
        growth_report = verify_growth_lemmas(aut, a_ids, trace=trace)
        checks.extend(growth_report.checks)
        if defect_at_most_1:
            bridge_ok = len(cone.tiers) == len(trace.levels)
            bridge_detail = ""
            if bridge_ok:
                for i, (tier, level) in enumerate(zip(cone.tiers, trace.levels)):
                    arcs_as_vectors = {
                        unit_difference(q, p, n) for (p, q) in level.arcs
                    }
                    if tier != arcs_as_vectors:
                        bridge_ok = False
                        bridge_detail = f"level {i}"
                        break
            else:
                bridge_detail = (
                    f"tier count {len(cone.tiers)} vs levels {len(trace.levels)}"
                )
            add("cone_digraph_bridge", bridge_ok, bridge_detail)
            add(
                "limit_dim_matches_components",
                cone.span_dim == n - len(trace.limit_decomposition.wccs),
                f"dim {cone.span_dim}, weak components {len(trace.limit_decomposition.wccs)}",
            )
            if transitive:
                bound39 = translen_k_bound(aut, a_ids, dim=cone.span_dim)
                add(
                    "k_transient_within_digraph_bound",
                    cone.trans_len_k <= bound39,
                    f"transient {cone.trans_len_k}, bound {bound39}",
                )
            else:
                add_na("k_transient_within_digraph_bound", "not transitive")
        else:
            for name in ("cone_digraph_bridge", "limit_dim_matches_components",
                         "k_transient_within_digraph_bound"):
                add_na(name, "letters of defect 2 or more present")
    else:
        for name in ("cone_digraph_bridge", "limit_dim_matches_components",
                     "k_transient_within_digraph_bound"):
            add_na(name, "no defect-1 letter")

    return InstanceChecks(label or f"n{n}", tuple(checks))


# ---------------------------------------------------------------------------
# instance batches

def random_st_batch(
    count: int, ns: Sequence[int], seed: int
) -> list[tuple[str, Automaton]]:
    """Deterministic batch of random ST instances, every letter defect <= 1."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = ns[i % len(ns)]
        n_perm = rng.choice((1, 2))
        n_d1 = rng.choice((1, 2))
        inst_seed = rng.randrange(1 << 30)
        aut = random_st(n, n_perm, n_d1, inst_seed)
        out.append((f"st-n{n}-p{n_perm}-d{n_d1}-s{inst_seed}", aut))
    return out


# ---------------------------------------------------------------------------
# suites

def suite_cerny(n_max: int = 8, *, workers: int | None = None) -> SuiteReport:
    """Exact thresholds and bound tightness across the cycle-plus-merge family."""
    report = SuiteReport(suite="cerny", seed=None, params={"n_max": n_max})

    def check(n: int) -> list[str]:
        fails = []
        aut = cerny(n)
        square = (n - 1) ** 2
        rt, witness = reset_threshold_exact(aut)
        if rt != square:
            fails.append(f"n={n}: reset threshold {rt} != {square}")
        if word_image_mask(aut, aut.full_mask, witness).bit_count() != 1:
            fails.append(f"n={n}: witness does not reset")
        tight = bound_main(aut, (0,))
        if tight != square:
            fails.append(f"n={n}: dimension bound {tight} != {square}")
        return fails

    sizes = list(range(2, n_max + 1))
    for fails in _map(check, sizes, worker_count(workers)):
        report.checked += 1
        report.failures.extend(fails)
    report.details["family_sizes"] = sizes
    return report


def suite_enumerate(
    n: int, letters: int = 2, *, cap: int | None = None, workers: int | None = None
) -> SuiteReport:
    """Exhaustive square-bound sweep over all n-state tables."""
    report = SuiteReport(
        suite="enumerate", seed=None, params={"n": n, "letters": letters}
    )
    square = (n - 1) ** 2
    synchronizing = 0
    kwargs = {} if cap is None else {"cap": cap}
    for aut in enumerate_automata(n, letters, **kwargs):
        report.checked += 1
        if not is_synchronizing(aut):
            continue
        synchronizing += 1
        rt, _ = reset_threshold_exact(aut)
        if rt > square:
            report.failures.append(
                f"table {aut.rows()}: reset threshold {rt} > {square}"
            )
    report.details["synchronizing"] = synchronizing
    report.details["square_bound"] = square
    return report


def suite_bounds(
    count: int = 200,
    ns: Sequence[int] = (5, 6, 7, 8, 9, 10),
    seed: int = 0,
    *,
    group_cap: int = 20000,
    workers: int | None = None,
) -> SuiteReport:
    """Soundness chain on random ST instances:
    exact threshold <= synthesized length <= dimension bound <= diameter bound,
    plus the defect-one quadratic bound for 6 or more states."""
    report = SuiteReport(
        suite="bounds",
        seed=seed,
        params={"count": count, "ns": list(ns), "group_cap": group_cap},
    )
    instances = random_st_batch(count, ns, seed)

    def check(item: tuple[str, Automaton]) -> list[str]:
        label, aut = item
        fails = []
        n = aut.n
        rt, _ = reset_threshold_exact(aut)
        result = synthesize_reset_word(aut)
        if not result.verified:
            fails.append(f"{label}: synthesized word not verified")
        if rt > result.length:
            fails.append(f"{label}: rt {rt} > synthesized {result.length}")
        if result.length > result.bound:
            fails.append(f"{label}: synthesized {result.length} > bound {result.bound}")
        try:
            ryst = bound_rystsov(aut, cap=group_cap)
        except CapExceeded:
            ryst = None
        if ryst is not None:
            if result.bound > ryst:
                fails.append(f"{label}: dimension bound {result.bound} > diameter bound {ryst}")
            if rt > ryst:
                fails.append(f"{label}: rt {rt} > diameter bound {ryst}")
        d1 = bound_defect1(aut)
        if n >= 6 and result.length > d1:
            fails.append(f"{label}: synthesized {result.length} > defect-1 bound {d1}")
        return fails

    for fails in _map(check, instances, worker_count(workers)):
        report.checked += 1
        report.failures.extend(fails)
    report.details["instances"] = [label for label, _ in instances]
    return report


def suite_lemmas(
    count: int = 200,
    ns: Sequence[int] = (5, 6, 7, 8, 9, 10),
    seed: int = 0,
    *,
    exhaustive_n_max: int = 0,
    workers: int | None = None,
) -> SuiteReport:
    """Per-instance lemma audit over random ST instances, optionally joined by
    every exhaustively enumerated 2-letter ST instance up to a given size."""
    report = SuiteReport(
        suite="lemmas",
        seed=seed,
        params={"count": count, "ns": list(ns), "exhaustive_n_max": exhaustive_n_max},
    )
    instances = random_st_batch(count, ns, seed)
    for n in range(2, exhaustive_n_max + 1):
        for idx, aut in enumerate(exhaustive_st_instances(n)):
            instances.append((f"exhaustive-n{n}-{idx}", aut))

    def check(item: tuple[str, Automaton]) -> tuple[str, InstanceChecks]:
        label, aut = item
        return label, lemma_suite(aut, label=label)

    results = _map(check, instances, worker_count(workers))
    na_counts: dict[str, int] = {}
    check_count = 0
    for label, inst in results:
        report.checked += 1
        for c in inst.checks:
            check_count += 1
            if c.status == "fail":
                report.failures.append(f"{label}: {c.name} failed ({c.detail})")
            elif c.status == "n/a":
                na_counts[c.name] = na_counts.get(c.name, 0) + 1
    report.details["total_checks"] = check_count
    report.details["not_applicable"] = na_counts
    return report
