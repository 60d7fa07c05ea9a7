from itertools import permutations

import pytest

from polarization.errors import (ArityMismatch, CharacteristicDividesFactorial, DimensionMismatch,
                                 FieldMismatch, InexactScalar, NotHomogeneous)
from polarization.poly import Polynomial
from polarization.rng import SplitMix64
from polarization.scalar import GF, QQ
from polarization.symtensor import (SymMultiMap, diagonal, distinct_permutations, eval_direct,
                                    from_polynomial, multi_indices, multiplicity,
                                    random_symmetric, tensor_from_json, tensor_to_json,
                                    to_polynomial)
from polarization.vector import Vector, random_vector

from oracles import distinct_perm_count, naive_eval

DOT = SymMultiMap(2, 2, {(0, 0): 1, (1, 1): 1})
CUBE = SymMultiMap(3, 1, {(0, 0, 0): 1})


def vec(*xs):
    return Vector(xs)


def test_splitmix64_reference_stream():
    r = SplitMix64(0)
    assert [r.next_u64() for _ in range(3)] == [
        0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


def test_multiplicity_matches_permutation_count():
    for n in range(1, 6):
        for m in multi_indices(n, 3):
            assert multiplicity(m) == distinct_perm_count(m)
            assert len(list(distinct_permutations(m))) == multiplicity(m)
            assert set(distinct_permutations(m)) == set(permutations(m))


def test_eval_examples():
    assert eval_direct(DOT, [vec(1, 2), vec(3, 4)]) == 11
    assert eval_direct(CUBE, [vec(2), vec(3), vec(4)]) == 24


def test_eval_matches_naive_oracle(rng):
    for i in range(50):
        n, d = rng.integer(1, 4), rng.integer(1, 3)
        u = random_symmetric(n, d, seed=i)
        xs = [random_vector(rng, d) for _ in range(n)]
        assert eval_direct(u, xs) == naive_eval(u, xs)


def test_eval_errors():
    with pytest.raises(ArityMismatch):
        eval_direct(DOT, [vec(1, 2)])
    with pytest.raises(DimensionMismatch):
        eval_direct(DOT, [vec(1, 2), vec(1, 2, 3)])
    with pytest.raises(FieldMismatch):
        eval_direct(DOT, [vec(1, 2), Vector([1, 2], GF(5))])
    with pytest.raises(InexactScalar):
        Vector([0.5, 1])


def test_diagonal_examples():
    assert diagonal(DOT)(vec(3, 4)) == 25
    assert diagonal(CUBE)(vec(2)) == 8


def test_diagonal_is_polynomial_evaluation(rng):
    for i in range(40):
        n, d = rng.integer(1, 5), rng.integer(1, 4)
        u = random_symmetric(n, d, seed=100 + i)
        x = random_vector(rng, d)
        assert diagonal(u)(x) == to_polynomial(u).evaluate(list(x.coords))
        assert diagonal(u)(x) == eval_direct(u, [x] * n)


def test_homogeneity(rng):
    for i in range(30):
        n, d = rng.integer(1, 5), rng.integer(1, 3)
        ut = diagonal(random_symmetric(n, d, seed=200 + i))
        x, lam = random_vector(rng, d), rng.rational()
        assert ut(Vector.zero(d)) == 0
        assert ut(x.scale(lam)) == lam**n * ut(x)


def test_to_polynomial_examples():
    X0, X1 = Polynomial.var("X0"), Polynomial.var("X1")
    assert to_polynomial(DOT) == X0**2 + X1**2
    assert to_polynomial(SymMultiMap(2, 2, {(0, 1): 1})) == 2 * X0 * X1


def test_from_polynomial_examples():
    X0, X1 = Polynomial.var("X0"), Polynomial.var("X1")
    u = from_polynomial((X0 * X1).with_gens(("X0", "X1")))
    assert u.coeffs[(0, 1)] == QQ("1/2") and u.coeffs[(0, 0)] == 0
    assert from_polynomial(X0**2) == SymMultiMap(2, 1, {(0, 0): 1})


def test_round_trips(rng):
    for i in range(60):
        n, d = rng.integer(1, 5), rng.integer(1, 4)
        u = random_symmetric(n, d, seed=300 + i, density=0.6)
        assert from_polynomial(to_polynomial(u), n, d) == u
        p = to_polynomial(random_symmetric(n, d, seed=400 + i))
        assert to_polynomial(from_polynomial(p, n, d)) == p


def test_from_polynomial_errors():
    X0 = Polynomial.var("X0")
    with pytest.raises(NotHomogeneous):
        from_polynomial(X0**2 + X0)
    X0f, X1f = Polynomial.var("X0", GF(2)), Polynomial.var("X1", GF(2))
    with pytest.raises(CharacteristicDividesFactorial):
        from_polynomial(X0f * X1f)
    # multiplicity 1 is invertible even in characteristic 2
    assert from_polynomial(X0f**3).coeffs[(0, 0, 0)] == GF(2)(1)


def test_random_symmetric_determinism():
    assert random_symmetric(2, 2, seed=1) == random_symmetric(2, 2, seed=1)
    assert random_symmetric(2, 2, seed=1) != random_symmetric(2, 2, seed=2)
    sparse = random_symmetric(6, 3, seed=5, density=0.2)
    assert 0 < len(sparse.nonzero()) < len(multi_indices(6, 3))


def test_linear_form(rng):
    u = random_symmetric(1, 3, seed=9)
    w = Vector([u.coeffs[(j,)] for j in range(3)])
    x = random_vector(rng, 3)
    assert eval_direct(u, [x]) == w.dot(x)


def test_symmetry_under_permutations(rng):
    for i in range(15):
        n, d = rng.integer(2, 5), rng.integer(1, 3)
        u = random_symmetric(n, d, seed=500 + i)
        xs = [random_vector(rng, d) for _ in range(n)]
        ref = eval_direct(u, xs)
        assert all(eval_direct(u, list(p)) == ref for p in permutations(xs))


def test_multilinearity(rng):
    for i in range(30):
        n, d = rng.integer(1, 4), rng.integer(1, 3)
        u = random_symmetric(n, d, seed=600 + i)
        xs = [random_vector(rng, d) for _ in range(n)]
        y = random_vector(rng, d)
        a, b = rng.rational(), rng.rational()
        k = rng.below(n)
        mixed = xs[:k] + [xs[k].scale(a) + y.scale(b)] + xs[k + 1:]
        assert eval_direct(u, mixed) == a * eval_direct(u, xs) + \
            b * eval_direct(u, xs[:k] + [y] + xs[k + 1:])


def test_uniqueness_from_diagonal(rng):
    for i in range(20):
        n, d = rng.integer(1, 4), rng.integer(1, 3)
        u = random_symmetric(n, d, seed=700 + i)
        v = from_polynomial(to_polynomial(u), n, d)
        probes = [random_vector(rng, d) for _ in range(n * d + 10)]
        assert all(diagonal(u)(x) == diagonal(v)(x) for x in probes)
        assert u == v
        w = SymMultiMap(n, d, {**u.coeffs, (0,) * n: u.coeffs[(0,) * n] + 1})
        assert any(diagonal(u)(x) != diagonal(w)(x) for x in probes)


def test_json_round_trip_and_validation():
    u = random_symmetric(3, 2, seed=3)
    assert tensor_from_json(tensor_to_json(u)) == u
    ug = random_symmetric(3, 2, GF(7), seed=3)
    data = tensor_to_json(ug)
    assert data["field"] == {"gfp": 7}
    assert tensor_from_json(data) == ug
    bad = {"order": 2, "dim": 2, "field": "rational",
           "entries": [{"index": [1, 0], "value": "1"}]}
    with pytest.raises(ValueError):
        tensor_from_json(bad)
    dup = {"order": 2, "dim": 2, "field": "rational",
           "entries": [{"index": [0, 1], "value": "1"}, {"index": [0, 1], "value": "2"}]}
    with pytest.raises(ValueError):
        tensor_from_json(dup)
    with pytest.raises(DimensionMismatch):
        tensor_from_json({"order": 1, "dim": 2, "entries": [{"index": [2], "value": "1"}]})
