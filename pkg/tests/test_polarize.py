from itertools import combinations, permutations
from math import comb, factorial

import pytest

from polarization.errors import (ArityMismatch, CharacteristicDividesFactorial, CharacteristicTwo,
                                 DimensionMismatch)
from polarization.polarize import (METHODS, OpCounter, coefficient_extraction, constant_check,
                                   expand_in_t, gray_order, polarize_offset, polarize_operator,
                                   polarize_signed, polarize_signed_via_offset,
                                   polarize_subset_sum, polarize_subset_sum_gray, recover,
                                   shift_expand, subset_sum)
from polarization.scalar import GF, QQ
from polarization.symtensor import (DiagonalFn, SymMultiMap, diagonal, eval_direct,
                                    random_symmetric)
from polarization.vector import Vector, random_vector


def power_diag(n):
    """u~(x) = x^n on K^1, the diagonal of the product form."""
    return DiagonalFn(lambda x: x[0] ** n, n, 1)


def scalars(*vals):
    return [Vector([v]) for v in vals]


def instance(rng, seed, n, d, field=QQ, density=1.0):
    u = random_symmetric(n, d, field, seed=seed, density=density)
    return u, [random_vector(rng, d, field) for _ in range(n)]


def test_subset_sum_examples(rng):
    xs = [Vector([1, 0]), Vector([0, 1])]
    assert subset_sum(xs, 0b11) == Vector([1, 1])
    assert subset_sum(xs, 0) == Vector([0, 0])
    ys = [random_vector(rng, 3) for _ in range(6)]
    for mask in range(64):
        acc = [QQ(0)] * 3
        for i in range(6):
            if mask & (1 << i):
                acc = [a + b for a, b in zip(acc, ys[i].coords)]
        assert subset_sum(ys, mask) == Vector(acc)


def test_operator_examples():
    assert polarize_operator(power_diag(2), scalars(1, 1)) == 2
    assert polarize_operator(power_diag(3), scalars(1, 1, 1)) == 6


def test_operator_matches_eval_direct(rng):
    for i in range(40):
        n, d = rng.integer(1, 5), rng.integer(1, 3)
        u, xs = instance(rng, i, n, d)
        assert polarize_operator(diagonal(u), xs) == factorial(n) * eval_direct(u, xs)


def test_shift_expand_examples():
    assert shift_expand(1) == [(0, -1), (1, 1)]
    assert shift_expand(2) == [(0, 1), (1, -1), (2, -1), (3, 1)]
    for n in range(1, 9):
        terms = shift_expand(n)
        assert len(terms) == 2**n and sum(s for _, s in terms) == 0


def test_subset_sum_examples_engine():
    assert polarize_subset_sum(power_diag(2), scalars(1, 2)) == 4
    assert polarize_subset_sum(power_diag(3), scalars(1, 1, 1)) == 6


def test_subset_matches_operator(rng):
    for i in range(100):
        n, d = rng.integer(1, 6), rng.integer(1, 3)
        u, xs = instance(rng, 1000 + i, n, d, density=0.5)
        ut = diagonal(u)
        assert polarize_subset_sum(ut, xs) == polarize_operator(ut, xs)


def test_gray_order_property():
    order = gray_order(3)
    assert len(order) == 8 and sorted(order) == list(range(8))
    assert all((a ^ b).bit_count() == 1 for a, b in zip(order, order[1:]))
    for n in range(1, 11):
        o = gray_order(n)
        assert len(set(o)) == 2**n
        assert all((a ^ b).bit_count() == 1 for a, b in zip(o, o[1:]))


def test_gray_matches_naive(rng):
    for i in range(100):
        n, d = rng.integer(1, 10), rng.integer(1, 4)
        u, xs = instance(rng, 2000 + i, n, d, density=min(1.0, 6 / comb(n + d - 1, n)))
        ut = diagonal(u)
        assert polarize_subset_sum_gray(ut, xs) == polarize_subset_sum(ut, xs)


def test_offset_examples():
    ut = power_diag(2)
    assert polarize_offset(ut, scalars(1, 2), Vector([5])) == 64 - 36 - 49 + 25 == 4
    assert polarize_offset(ut, scalars(1, 2), Vector([0])) == polarize_subset_sum(ut, scalars(1, 2))


def test_offset_independent_of_x0(rng):
    for i in range(50):
        n, d = rng.integer(1, 4), rng.integer(1, 3)
        u, xs = instance(rng, 3000 + i, n, d)
        ut = diagonal(u)
        ref = polarize_subset_sum(ut, xs)
        for _ in range(20):
            assert polarize_offset(ut, xs, random_vector(rng, d)) == ref


def test_gray_with_offset(rng):
    for i in range(20):
        n, d = rng.integer(1, 5), rng.integer(1, 3)
        u, xs = instance(rng, 3500 + i, n, d)
        x0 = random_vector(rng, d)
        assert polarize_subset_sum_gray(diagonal(u), xs, x0) == factorial(n) * eval_direct(u, xs)


def test_signed_examples():
    assert polarize_signed(power_diag(2), scalars(1, 1)) == 8
    x = QQ("7/3")
    assert polarize_signed(power_diag(1), scalars(x)) == 2 * x


def test_signed_matches_subset(rng):
    for i in range(100):
        n, d = rng.integer(1, 6), rng.integer(1, 3)
        u, xs = instance(rng, 4000 + i, n, d, density=0.5)
        ut = diagonal(u)
        assert polarize_signed(ut, xs) == 2**n * polarize_subset_sum(ut, xs)
        assert polarize_signed_via_offset(ut, xs) == polarize_signed(ut, xs)


def test_signed_rejects_characteristic_two():
    u = random_symmetric(2, 1, GF(2), seed=1)
    with pytest.raises(CharacteristicTwo):
        polarize_signed(diagonal(u), [Vector([1], GF(2))] * 2)
    u1 = random_symmetric(1, 1, GF(2), seed=1)
    with pytest.raises(CharacteristicTwo):
        recover(diagonal(u1), [Vector([1], GF(2))], "signed")


def test_recover_examples():
    assert recover(power_diag(2), scalars(1, 2)) == 2
    u = random_symmetric(3, 2, GF(2), seed=4)
    xs = [Vector([1, 0], GF(2))] * 3
    with pytest.raises(CharacteristicDividesFactorial):
        recover(diagonal(u), xs)


def test_recover_all_methods(rng):
    for i in range(200):
        n, d = rng.integer(1, 4), rng.integer(1, 3)
        u, xs = instance(rng, 5000 + i, n, d)
        method = METHODS[i % len(METHODS)]
        x0 = random_vector(rng, d) if method == "offset" else None
        assert recover(diagonal(u), xs, method, x0) == eval_direct(u, xs)
    with pytest.raises(ValueError):
        recover(power_diag(1), scalars(1), "bogus")


def test_recover_over_large_prime(rng):
    F = GF(2**61 - 1)
    for i in range(20):
        n, d = rng.integer(1, 5), rng.integer(1, 3)
        u, xs = instance(rng, 5500 + i, n, d, F)
        for method in METHODS:
            assert recover(diagonal(u), xs, method) == eval_direct(u, xs)


def test_coefficient_extraction_examples():
    prod2 = SymMultiMap(2, 1, {(0, 0): 1})
    assert coefficient_extraction(prod2, scalars(1, 1)) == 2
    dot = SymMultiMap(2, 2, {(0, 0): 1, (1, 1): 1})
    assert coefficient_extraction(dot, [Vector.basis(0, 2), Vector.basis(1, 2)]) == 0


def test_coefficient_extraction_matches_subset(rng):
    for i in range(100):
        n, d = rng.integer(1, 4), rng.integer(1, 3)
        u, xs = instance(rng, 6000 + i, n, d)
        assert coefficient_extraction(u, xs) == polarize_subset_sum(diagonal(u), xs)


def test_derivative_route_matches_coefficient(rng):
    for i in range(20):
        n, d = rng.integer(1, 4), rng.integer(1, 3)
        u, xs = instance(rng, 6500 + i, n, d)
        p = expand_in_t(u, xs)
        for k in range(1, n + 1):
            p = p.partial_derivative(f"t{k}")
        assert p.is_constant()
        assert p.constant_term() == factorial(n) * eval_direct(u, xs)


def test_constant_check_examples():
    quad = diagonal(SymMultiMap(2, 2, {(0, 0): 3, (0, 1): -1, (1, 1): 2}))
    xs = [Vector([1, 2]), Vector([-1, 5])]
    probes = [Vector.zero(2), Vector.basis(0, 2), Vector.basis(1, 2).scale(7)]
    assert constant_check(quad, xs, probes)
    cube = power_diag(3)
    assert not constant_check(cube, scalars(1, 1), [Vector([0]), Vector([1])])


def test_constant_check_random(rng):
    for i in range(100):
        n, d = rng.integer(1, 4), rng.integer(1, 3)
        u, xs = instance(rng, 7000 + i, n, d)
        assert constant_check(diagonal(u), xs, [random_vector(rng, d) for _ in range(10)])


def test_engine_counters():
    for n in range(1, 9):
        ut = power_diag(n)
        xs = scalars(*range(1, n + 1))
        c = OpCounter()
        polarize_subset_sum(ut, xs, counter=c)
        assert c.evaluations == 2**n - 1
        assert c.vector_ops == sum(k * comb(n, k) for k in range(n + 1)) == n * 2 ** (n - 1)
        c = OpCounter()
        polarize_offset(ut, xs, Vector([3]), counter=c)
        assert c.evaluations == 2**n
        c = OpCounter()
        polarize_signed(ut, xs, counter=c)
        assert c.evaluations == 2**n
        c = OpCounter()
        polarize_subset_sum_gray(ut, xs, counter=c)
        assert c.evaluations == 2**n - 1 and c.vector_ops == 2**n - 1
        c = OpCounter()
        polarize_operator(ut, xs, counter=c)
        assert c.evaluations == 2**n


@pytest.mark.parametrize("p", [2, 3])
def test_any_field_validity(rng, p):
    F = GF(p)
    for i in range(30):
        n, d = rng.integer(p, p + 3), rng.integer(1, 3)
        u, xs = instance(rng, 8000 + i, n, d, F)
        ut = diagonal(u)
        expected = factorial(n) * eval_direct(u, xs)
        assert expected == 0  # n! vanishes when p <= n
        assert polarize_subset_sum(ut, xs) == expected
        assert polarize_operator(ut, xs) == expected
        assert coefficient_extraction(u, xs) == expected
        with pytest.raises(CharacteristicDividesFactorial):
            recover(ut, xs)


def test_formula_symmetry(rng):
    for i in range(20):
        n, d = rng.integer(2, 4), rng.integer(1, 3)
        u, xs = instance(rng, 9000 + i, n, d)
        ut = diagonal(u)
        s, g = polarize_subset_sum(ut, xs), polarize_signed(ut, xs)
        for perm in permutations(xs):
            assert polarize_subset_sum(ut, list(perm)) == s
            assert polarize_signed(ut, list(perm)) == g


def test_symmetry_holds_for_arbitrary_functions():
    # the right-hand side is symmetric in the x_i for any function u~, not only diagonals
    f = DiagonalFn(lambda x: x[0] ** 5 - 3 * x[0] ** 2 + x[0] * x[1], 3, 2)
    xs = [Vector([1, 2]), Vector(["1/3", -1]), Vector([4, 0])]
    vals = {polarize_subset_sum(f, list(p)) for p in permutations(xs)}
    assert len(vals) == 1


def test_engine_argument_errors():
    ut = power_diag(2)
    with pytest.raises(ArityMismatch):
        polarize_subset_sum(ut, scalars(1))
    with pytest.raises(DimensionMismatch):
        polarize_operator(ut, [Vector([1, 2]), Vector([1, 2])])


def test_nelson_via_engine():
    # u(a1..an) = a1 a2 ... an on K^1 gives Nelson's product formula numerically
    for n in range(1, 7):
        vals = [QQ(k) / (k + 1) for k in range(1, n + 1)]
        total = QQ(0)
        for k in range(1, n + 1):
            for J in combinations(vals, k):
                total += (-1) ** (n - k) * sum(J) ** n
        prod_ = QQ(1)
        for v in vals:
            prod_ *= v
        assert total == factorial(n) * prod_
        assert polarize_subset_sum(power_diag(n), scalars(*vals)) == total
