import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from genrest.field import (FieldSpec, additive_character, gf, multiplicative_character,
                           smallest_primitive_polynomial)

SMALL_Q = [2, 3, 4, 5, 7, 8, 9]


# independent oracle: schoolbook polynomial arithmetic mod the table's modulus
def _digits(x, p, k):
    return [(x // p ** i) % p for i in range(k)]


def _index(c, p):
    return sum(v * p ** i for i, v in enumerate(c))


def _poly_mul(a, b, F):
    p, k = F.p, F.k
    if k == 1:
        return a * b % p
    A, B = _digits(a, p, k), _digits(b, p, k)
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(A):
        for j, y in enumerate(B):
            prod[i + j] = (prod[i + j] + x * y) % p
    mod = list(F.modulus) + [1]
    for d in range(2 * k - 2, k - 1, -1):
        c = prod[d]
        if c:
            for i in range(k + 1):
                prod[d - k + i] = (prod[d - k + i] - c * mod[i]) % p
    return _index(prod[:k], p)


def _poly_add(a, b, F):
    p, k = F.p, F.k
    return _index([(x + y) % p for x, y in zip(_digits(a, p, k), _digits(b, p, k))], p)


def test_spec_validation():
    assert FieldSpec(3, 2).q == 9
    assert FieldSpec.from_order(8) == FieldSpec(2, 3)
    with pytest.raises(ValueError):
        FieldSpec(4, 1)
    with pytest.raises(ValueError):
        FieldSpec.from_order(6)
    with pytest.raises(ValueError):
        FieldSpec(2, 17)


def test_small_examples():
    F3, F5 = gf(3), gf(5)
    assert F3.add(1, 2) == 0
    assert F5.inv(2) == 3
    assert F5.mul(2, F5.inv(2)) == 1


@pytest.mark.parametrize("q", SMALL_Q)
def test_tables_match_polynomial_oracle(q):
    F = gf(q)
    xs = np.arange(q)
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    mul = F.mul(X, Y)
    add = F.add(X, Y)
    for a, b in itertools.product(range(q), repeat=2):
        assert mul[a, b] == _poly_mul(a, b, F)
        assert add[a, b] == _poly_add(a, b, F)


@pytest.mark.parametrize("q", SMALL_Q)
def test_field_axioms_exhaustive(q):
    F = gf(q)
    x = np.arange(q)
    A, B, C = np.meshgrid(x, x, x, indexing="ij")
    assert (F.mul(A, F.add(B, C)) == F.add(F.mul(A, B), F.mul(A, C))).all()
    assert (F.mul(F.mul(A, B), C) == F.mul(A, F.mul(B, C))).all()
    assert (F.add(F.add(A, B), C) == F.add(A, F.add(B, C))).all()
    assert (F.add(x, F.neg(x)) == 0).all()
    nz = x[1:]
    assert (F.mul(nz, F.inv(nz)) == 1).all()
    assert (F.mul(x, 1) == x).all() and (F.add(x, 0) == x).all()


@pytest.mark.parametrize("q", SMALL_Q)
def test_log_exp_and_generator(q):
    F = gf(q)
    assert sorted(F.exp.tolist()) == list(range(1, q))
    assert F.log[0] == -1
    assert (F.exp[F.log[1:]] == np.arange(1, q)).all()
    assert F.power(F.generator, q - 1) == 1


@pytest.mark.parametrize("q", SMALL_Q)
def test_trace_frobenius_invariant(q):
    F = gf(q)
    x = np.arange(q)
    assert (F.tr(F.power(x, F.p)) == F.tr(x)).all()
    assert (F.tr(x) < F.p).all()


def test_trace_f9_by_definition():
    F = gf(9)
    for x in range(9):
        cube = _poly_mul(_poly_mul(x, x, F), x, F)
        tr = _poly_add(x, cube, F)
        assert tr < 3
        assert F.tr(x) == tr


def test_smallest_primitive_polynomial():
    # x^2 + x + 1 over F_2 is the only candidate; x^2 + x + 2 is the first primitive one over F_3
    assert smallest_primitive_polynomial(2, 2) == (1, 1)
    assert smallest_primitive_polynomial(3, 2) == (2, 1)
    assert smallest_primitive_polynomial(2, 3) == (1, 1, 0)


def test_additive_character_examples():
    F2, F3 = gf(2), gf(3)
    assert additive_character(F2, 0)(1) == 1
    assert abs(additive_character(F2, 1)(1) + 1) < 1e-12
    assert abs(sum(additive_character(F3, 1)(x) for x in range(3))) < 1e-12


@pytest.mark.parametrize("q", SMALL_Q)
def test_additive_character_orthogonality(q):
    F = gf(q)
    x = np.arange(q)
    for a in range(q):
        pa = additive_character(F, a)(x)
        for b in range(q):
            s = np.sum(pa * np.conj(additive_character(F, b)(x)))
            assert abs(s - (q if a == b else 0)) < 1e-10


def test_multiplicative_character_examples():
    F3, F5 = gf(3), gf(5)
    assert multiplicative_character(F3, 0)(2) == 1
    assert abs(multiplicative_character(F3, 1)(2) + 1) < 1e-12
    chi = multiplicative_character(F5, 2)
    g = F5.generator
    assert abs(chi(g) ** 2 - chi(F5.mul(g, g))) < 1e-12
    with pytest.raises(ValueError):
        chi(0)
    with pytest.raises(ValueError):
        multiplicative_character(F5, 4)


@settings(max_examples=60, deadline=None)
@given(q=st.sampled_from(SMALL_Q), data=st.data())
def test_multiplicative_character_is_homomorphism(q, data):
    F = gf(q)
    a = data.draw(st.integers(1, q - 1))
    b = data.draw(st.integers(1, q - 1))
    j = data.draw(st.integers(0, q - 2))
    chi = multiplicative_character(F, j)
    assert abs(chi(F.mul(a, b)) - chi(a) * chi(b)) < 1e-10


@settings(max_examples=40, deadline=None)
@given(q=st.sampled_from([2, 3, 4, 5]), seed=st.integers(0, 2 ** 31))
def test_matrix_inverse_and_det(q, seed):
    F = gf(q)
    rng = np.random.default_rng(seed)
    A = rng.integers(0, q, size=(4, 4))
    d = F.det(A)
    B = rng.integers(0, q, size=(4, 4))
    assert F.det(F.matmul(A, B)) == F.mul(d, F.det(B))
    if d != 0:
        assert (F.matmul(A, F.matinv(A)) == np.eye(4, dtype=int)).all()
