import itertools

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from maxbent.field import (CONWAY_REGISTRY, FieldError, dual_basis, format_registry, frobenius, inv,
                           is_irreducible, make_field, make_tower, mul, parse_registry, power, trace)


def ref_mul(a, b, modulus, k):
    """Schoolbook shift-and-reduce, independent of the library's clmul/poly_mod."""
    r = 0
    for i in range(k):
        if (b >> i) & 1:
            r ^= a << i
    for i in range(2 * k - 2, k - 1, -1):
        if (r >> i) & 1:
            r ^= modulus << (i - k)
    return r


def sympy_poly(mask):
    x = sympy.Symbol("x")
    return sympy.Poly([int(c) for c in bin(mask)[2:]], x, modulus=2)


REGISTRY = parse_registry(CONWAY_REGISTRY)


@pytest.mark.parametrize("degree", sorted(REGISTRY))
def test_registry_moduli_irreducible_by_independent_oracle(degree):
    mod = REGISTRY[degree]
    assert sympy_poly(mod).is_irreducible
    assert is_irreducible(mod)


def test_is_irreducible_matches_sympy_on_all_small_polys():
    for k in range(2, 9):
        for mod in range(1 << k, 1 << (k + 1)):
            assert is_irreducible(mod) == sympy_poly(mod).is_irreducible, hex(mod)


@pytest.mark.parametrize("degree", range(2, 13))
def test_generator_order_brute_force(degree):
    K = make_field(degree)
    g = K.generator
    seen, x = set(), 1
    for _ in range(K.order - 1):
        seen.add(x)
        x = ref_mul(x, g, K.modulus, degree)
    assert x == 1 and len(seen) == K.order - 1


def test_make_field_examples():
    K = make_field(2, 0b111)
    a = K.generator
    assert K.order == 4
    assert K.mul(a, a) == a ^ 1
    assert make_field(4).order == 16
    K3 = make_field(3, 0b1011)
    assert K3.multiplicative_order(K3.generator) == 7


def test_make_field_errors():
    with pytest.raises(FieldError):
        make_field(4, 0b10101)  # (x^2+x+1)^2
    with pytest.raises(FieldError):
        make_field(1)
    with pytest.raises(FieldError):
        make_field(21)


@pytest.mark.parametrize("degree", [2, 3, 5, 8, 11])
def test_table_mul_matches_reference(degree):
    K = make_field(degree)
    rng = np.random.default_rng(degree)
    a = rng.integers(0, K.order, 400)
    b = rng.integers(0, K.order, 400)
    got = K.mul(a, b)
    for x, y, z in zip(a.tolist(), b.tolist(), got.tolist()):
        assert z == ref_mul(x, y, K.modulus, degree)


@pytest.mark.parametrize("degree", [17, 20])
def test_large_degree_mul_without_tables(degree):
    K = make_field(degree)
    rng = np.random.default_rng(1)
    for x, y in rng.integers(0, K.order, (50, 2)).tolist():
        assert K.mul(x, y) == ref_mul(x, y, K.modulus, degree)
        if x:
            assert K.mul(x, K.inv(x)) == 1


@pytest.mark.parametrize("degree", [2, 3, 4])
def test_field_axioms_exhaustive(degree):
    K = make_field(degree)
    x = K.elements()
    A, B, C = np.meshgrid(x, x, x, indexing="ij")
    assert np.array_equal(K.mul(K.mul(A, B), C), K.mul(A, K.mul(B, C)))
    assert np.array_equal(K.mul(A, B ^ C), K.mul(A, B) ^ K.mul(A, C))
    assert np.array_equal(K.mul(A, B), K.mul(B, A))


@settings(max_examples=200, deadline=None)
@given(k=st.integers(2, 8), data=st.data())
def test_field_axioms_hypothesis(k, data):
    K = make_field(k)
    el = st.integers(0, K.order - 1)
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert K.mul(K.mul(a, b), c) == K.mul(a, K.mul(b, c))
    assert K.mul(a, b ^ c) == K.mul(a, b) ^ K.mul(a, c)
    assert K.mul(a, 1) == a
    if a:
        assert K.mul(a, K.inv(a)) == 1
        assert K.pow(a, K.order - 1) == 1


def test_inverse_and_pow_conventions():
    K = make_field(4)
    g = K(K.generator)
    assert (inv(g) * g).coords == 1
    assert K.pow(0, 0) == 1 and K.pow(0, 5) == 0
    assert K.multiplicative_order(K.pow(K.generator, 5)) == 3
    assert K.pow(K.generator, -1) == K.inv(K.generator)
    assert power(g, 15).coords == 1
    with pytest.raises((FieldError, ZeroDivisionError, ValueError)):
        K.inv(0)
    with pytest.raises(FieldError):
        _ = K(3) * make_field(5)(3)


def test_element_wrappers():
    K = make_field(3)
    x = K(5)
    assert mul(x, K.one) == x
    assert (x + x).coords == 0
    assert frobenius(x, 0) == x and frobenius(x, 3) == x
    g = K(K.generator)
    assert frobenius(g, 1) == g * g


@pytest.mark.parametrize("k", [2, 3, 4, 6, 8, 10, 12])
def test_trace_properties(k):
    K = make_field(k)
    x = K.elements()
    assert K.trace(0) == 0
    assert K.trace(1) == k % 2
    for d in [d for d in range(1, k + 1) if k % d == 0]:
        t = K.trace(x, d)
        assert np.array_equal(K.frobenius(t, d), t)  # lands in the subfield
        rng = np.random.default_rng(d)
        a, b = rng.integers(0, K.order, (2, 64))
        assert np.array_equal(K.trace(a ^ b, d), K.trace(a, d) ^ K.trace(b, d))
        # transitivity Tr_{k/1} = Tr_{d/1} o Tr_{k/d}
        assert np.array_equal(K.trace(t, 1, d), K.trace(x, 1))


def test_relative_trace_defining_sum():
    K = make_field(4)
    g = K.generator
    assert K.trace(g, 2) == g ^ K.pow(g, 4)
    with pytest.raises(FieldError):
        trace(K(g), 3)


@pytest.mark.parametrize("k", range(2, 13))
def test_dual_basis(k):
    K = make_field(k)
    db = dual_basis(K)
    for i, j in itertools.product(range(k), repeat=2):
        assert K.trace(K.mul(db.basis[i], db.dual[j])) == (i == j)
    x = K.elements()
    recon = np.zeros_like(x)
    for b, d in zip(db.basis, db.dual):
        recon ^= np.where(K.trace(K.mul(x, d)) == 1, b, 0)
    assert np.array_equal(recon, x)


def test_pairing_mask_is_trace_form():
    K = make_field(5)
    P = K.pairing
    x = K.elements()
    for w in range(K.order):
        dot = np.bitwise_count(P[w] & x) & 1
        assert np.array_equal(dot, K.trace(K.mul(w, x)))


@pytest.mark.parametrize("m", range(2, 7))
def test_tower_embedding(m):
    T = make_tower(m)
    img = T.embed(T.small.elements())
    assert len(set(img.tolist())) == T.small.order
    fixed = np.nonzero(T.big.frobenius(T.big.elements(), m) == T.big.elements())[0]
    assert np.array_equal(np.sort(img), fixed)
    s = T.small.elements()
    A, B = np.meshgrid(s, s, indexing="ij")
    assert np.array_equal(T.embed(T.small.mul(A, B)), T.big.mul(T.embed(A), T.embed(B)))
    assert np.array_equal(T.embed(A ^ B), T.embed(A) ^ T.embed(B))
    assert T.big.pow(T.embed(T.small.generator), (1 << m) - 1) == 1
    assert np.array_equal(T.restrict(img), s)


def test_conway_towers_are_compatible():
    # for Conway moduli the embedding sends g_m to g_n^((2^n-1)/(2^m-1)) directly
    for m in range(2, 11):
        assert make_tower(m).shift == 1


def test_tower_range():
    with pytest.raises(FieldError):
        make_tower(1)
    with pytest.raises(FieldError):
        make_tower(11)


def test_registry_roundtrip_and_errors(tmp_path):
    assert parse_registry(format_registry(REGISTRY)) == REGISTRY
    with pytest.raises(FieldError):
        parse_registry("4:0x7\n")
    with pytest.raises(FieldError):
        parse_registry("junk\n")


def test_custom_modulus_field():
    K = make_field(4, 0b11001)  # x^4+x^3+1
    assert K.modulus == 0b11001
    x = K.elements()
    assert np.all(K.mul(x[1:], K.inv(x[1:])) == 1)
