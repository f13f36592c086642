import itertools
import random
from collections import deque
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from synchro.linalg import (
    char_vector,
    in_cone,
    in_polar_cone,
    in_span,
    inner_product,
    orthogonal_complement,
    span_basis,
    unit_difference,
    vector_times_matrix,
)

rationals = st.fractions(
    min_value=-10, max_value=10, max_denominator=12
)


def reference_inner_product(x, y):
    """Independent re-implementation on raw numerator/denominator pairs."""
    num, den = 0, 1
    for a, b in zip(x, y):
        fa, fb = Fraction(a), Fraction(b)
        pn = fa.numerator * fb.numerator
        pd = fa.denominator * fb.denominator
        num = num * pd + pn * den
        den = den * pd
    return num, den


def gaussian_rank(vectors):
    """Independent fraction-free rank computation."""
    rows = [list(map(Fraction, v)) for v in vectors]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for col in range(cols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col] / rows[rank][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


CYCLE_VECTORS = [(1, -1, 0, 0), (0, 1, -1, 0), (0, 0, 1, -1), (-1, 0, 0, 1)]
SUM_ZERO_BASIS = span_basis(CYCLE_VECTORS, 4)


class TestCharAndInner:
    def test_char_vector_empty(self):
        assert char_vector((), 3) == (0, 0, 0)

    def test_char_vector_selects(self):
        assert char_vector({1, 3}, 3) == (1, 0, 1)

    def test_char_vector_full(self):
        assert char_vector(range(1, 5), 4) == (1, 1, 1, 1)

    def test_char_vector_range_check(self):
        with pytest.raises(ValueError):
            char_vector({4}, 3)

    def test_inner_product_orthogonal(self):
        assert inner_product((1, 0, 1), (0, 1, 0)) == 0

    def test_inner_product_fractions(self):
        half = Fraction(1, 2)
        assert inner_product((half, half), (half, half)) == half

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            inner_product((1,), (1, 2))

    @given(st.lists(st.tuples(rationals, rationals), min_size=0, max_size=8))
    @settings(max_examples=200, deadline=None)
    def test_matches_reference_reimplementation(self, pairs):
        x = tuple(p[0] for p in pairs)
        y = tuple(p[1] for p in pairs)
        num, den = reference_inner_product(x, y)
        assert inner_product(x, y) == Fraction(num, den)


class TestSpan:
    def test_empty_is_zero_subspace(self):
        basis = span_basis([], 4)
        assert basis.dim == 0

    def test_cycle_vectors_have_rank_three(self):
        assert SUM_ZERO_BASIS.dim == 3
        assert gaussian_rank(CYCLE_VECTORS) == 3

    def test_collinear_vectors(self):
        assert span_basis([(2, 0), (1, 0)], 2).dim == 1

    def test_canonical_form_is_representation_equality(self):
        b1 = span_basis([(1, 1, 0), (0, 1, 1)], 3)
        b2 = span_basis([(1, 0, -1), (0, 2, 2)], 3)
        assert b1 == b2

    def test_rank_matches_reference_on_random_input(self):
        rng = random.Random(21)
        for _ in range(60):
            n = rng.randrange(1, 6)
            vecs = [
                tuple(rng.randrange(-3, 4) for _ in range(n))
                for _ in range(rng.randrange(1, 6))
            ]
            assert span_basis(vecs, n).dim == gaussian_rank(vecs)


class TestInSpan:
    def test_zero_vector_always_in(self):
        assert in_span((0, 0, 0, 0), SUM_ZERO_BASIS)

    def test_all_ones_not_in_sum_zero(self):
        assert not in_span((1, 1, 1, 1), SUM_ZERO_BASIS)

    def test_sum_zero_vector_in(self):
        assert in_span((1, 0, 0, -1), SUM_ZERO_BASIS)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            in_span((1, 0), SUM_ZERO_BASIS)


class TestOrthogonalComplement:
    def test_of_zero_subspace(self):
        basis = orthogonal_complement(span_basis([], 3), 3)
        assert basis.dim == 3

    def test_of_sum_zero_subspace(self):
        comp = orthogonal_complement(SUM_ZERO_BASIS, 4)
        assert comp.dim == 1
        assert comp == span_basis([(1, 1, 1, 1)], 4)

    def test_of_full_space(self):
        full = span_basis([(1, 0), (0, 1)], 2)
        assert orthogonal_complement(full, 2).dim == 0

    def test_double_complement_random(self):
        rng = random.Random(31)
        for _ in range(40):
            n = rng.randrange(1, 6)
            vecs = [
                tuple(rng.randrange(-3, 4) for _ in range(n))
                for _ in range(rng.randrange(1, 5))
            ]
            basis = span_basis(vecs, n)
            assert orthogonal_complement(orthogonal_complement(basis, n), n) == basis

    def test_dimension_identity(self):
        rng = random.Random(32)
        for _ in range(40):
            n = rng.randrange(1, 7)
            vecs = [
                tuple(rng.randrange(-2, 3) for _ in range(n))
                for _ in range(rng.randrange(1, 5))
            ]
            basis = span_basis(vecs, n)
            assert basis.dim + orthogonal_complement(basis, n).dim == n


def reachable(arcs, src, dst):
    """Plain BFS oracle over 0-based arcs, independent of the library."""
    adj = {}
    for a, b in arcs:
        adj.setdefault(a, []).append(b)
    seen = {src}
    queue = deque([src])
    while queue:
        x = queue.popleft()
        if x == dst:
            return True
        for y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return dst in seen


class TestCone:
    def test_zero_vector_in_any_cone(self):
        assert in_cone((0, 0), [])
        assert in_cone((0, 0), [(1, -1)])

    def test_ray_membership(self):
        assert in_cone((1, -1), [(1, -1)])
        assert not in_cone((-1, 1), [(1, -1)])

    def test_scaled_ray_needs_lp(self):
        assert in_cone((2, -2), [(1, -1)], method="lp")
        assert in_cone((Fraction(1, 3), Fraction(-1, 3)), [(1, -1)])

    def test_chain_path_decomposition(self):
        gens = [(-1, 1, 0, 0), (0, -1, 1, 0)]  # arcs 1->2 and 2->3
        assert not in_cone((1, 0, -1, 0), gens)  # needs path 3->1
        assert in_cone((-1, 0, 1, 0), gens)  # path 1->3 exists

    def test_generators_belong_to_their_cone(self):
        rng = random.Random(41)
        for _ in range(30):
            n = rng.randrange(1, 5)
            gens = [
                tuple(rng.randrange(-3, 4) for _ in range(n))
                for _ in range(rng.randrange(1, 5))
            ]
            for g in gens:
                assert in_cone(g, gens, method="lp")

    def test_monotone_in_generators(self):
        rng = random.Random(42)
        for _ in range(30):
            n = rng.randrange(1, 5)
            gens = [
                tuple(rng.randrange(-3, 4) for _ in range(n))
                for _ in range(rng.randrange(1, 4))
            ]
            extra = gens + [tuple(rng.randrange(-3, 4) for _ in range(n))]
            coeffs = [rng.randrange(0, 3) for _ in gens]
            v = tuple(
                sum(c * g[i] for c, g in zip(coeffs, gens)) for i in range(n)
            )
            assert in_cone(v, gens, method="lp")
            assert in_cone(v, extra, method="lp")

    def test_nonnegative_combinations_are_members(self):
        rng = random.Random(43)
        for _ in range(50):
            n = rng.randrange(1, 6)
            gens = [
                tuple(rng.randrange(-4, 5) for _ in range(n))
                for _ in range(rng.randrange(1, 5))
            ]
            coeffs = [Fraction(rng.randrange(0, 7), rng.randrange(1, 4)) for _ in gens]
            v = tuple(
                sum(c * g[i] for c, g in zip(coeffs, gens)) for i in range(n)
            )
            assert in_cone(v, gens, method="lp")

    def test_lp_agrees_with_subset_solving_oracle(self):
        # Caratheodory: a cone member rides on some linearly independent
        # generator subset with nonnegative coordinates, so solving every
        # subset system exactly is a complete (if slow) second decision route
        def solve_exact(cols, v, n):
            m = len(cols)
            rows = [
                [Fraction(cols[j][i]) for j in range(m)] + [Fraction(v[i])]
                for i in range(n)
            ]
            r = 0
            for c in range(m):
                pivot = next((k for k in range(r, n) if rows[k][c]), None)
                if pivot is None:
                    return None  # dependent subset, skip
                rows[r], rows[pivot] = rows[pivot], rows[r]
                pv = rows[r][c]
                rows[r] = [x / pv for x in rows[r]]
                for k in range(n):
                    if k != r and rows[k][c]:
                        f = rows[k][c]
                        rows[k] = [x - f * y for x, y in zip(rows[k], rows[r])]
                r += 1
            if any(rows[k][m] for k in range(r, n)):
                return None
            return [rows[i][m] for i in range(m)]

        def oracle(v, gens, n):
            if not any(v):
                return True
            for size in range(1, n + 1):
                for subset in itertools.combinations(range(len(gens)), size):
                    sol = solve_exact([gens[j] for j in subset], v, n)
                    if sol is not None and all(c >= 0 for c in sol):
                        return True
            return False

        rng = random.Random(2718)
        for _ in range(300):
            n = rng.randrange(1, 5)
            m = rng.randrange(1, 6)
            gens = [tuple(rng.randrange(-3, 4) for _ in range(n)) for _ in range(m)]
            if rng.random() < 0.5:
                coeffs = [
                    Fraction(rng.randrange(0, 5), rng.randrange(1, 3)) for _ in gens
                ]
                v = tuple(sum(c * g[i] for c, g in zip(coeffs, gens)) for i in range(n))
            else:
                v = tuple(rng.randrange(-6, 7) for _ in range(n))
            assert in_cone(v, gens, method="lp") == oracle(v, gens, n)

    def test_lp_agrees_with_reachability_on_random_digraphs(self):
        rng = random.Random(44)
        for _ in range(120):
            n = rng.randrange(2, 7)
            arc_count = rng.randrange(0, min(2 * n, n * (n - 1)) + 1)
            arcs = set()
            while len(arcs) < arc_count:
                a, b = rng.randrange(n), rng.randrange(n)
                if a != b:
                    arcs.add((a, b))
            gens = [unit_difference(b + 1, a + 1, n) for a, b in arcs]
            p, q = rng.sample(range(n), 2)
            target = unit_difference(q + 1, p + 1, n)
            lp = in_cone(target, gens, method="lp")
            shortcut = in_cone(target, gens, method="reachability") if gens else None
            expected = reachable(arcs, p, q)
            assert lp == expected
            if gens:
                assert shortcut == expected

    def test_reachability_mode_rejects_general_vectors(self):
        with pytest.raises(ValueError):
            in_cone((1, -1), [(2, -2)], method="reachability")

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            in_cone((1, -1), [(1, -1)], method="simplex")


class TestPolarCone:
    def test_empty_generators_vacuous(self):
        assert in_polar_cone((5, -3), [])

    def test_all_ones_in_polar_of_sum_zero_vectors(self):
        gens = CYCLE_VECTORS
        assert in_polar_cone((1, 1, 1, 1), gens)

    def test_sign_example(self):
        assert in_polar_cone((1, 0, 0, 0), [(-1, 1, 0, 0)])

    def test_agrees_with_complement_when_negation_closed(self):
        rng = random.Random(51)
        for _ in range(40):
            n = rng.randrange(1, 6)
            gens = [
                tuple(rng.randrange(-3, 4) for _ in range(n))
                for _ in range(rng.randrange(1, 4))
            ]
            closed = gens + [tuple(-x for x in g) for g in gens]
            comp = orthogonal_complement(span_basis(gens, n), n)
            v = tuple(rng.randrange(-3, 4) for _ in range(n))
            assert in_polar_cone(v, closed) == in_span(
                v, comp
            ), f"gens {gens} v {v}"


class TestVectorMatrix:
    def test_row_action(self):
        m = ((0, 1), (1, 0))
        assert vector_times_matrix((2, 3), m) == (3, 2)

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            vector_times_matrix((1, 2, 3), ((1, 0), (0, 1)))
