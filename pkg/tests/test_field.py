import itertools

import pytest

from dp4sieve.errors import DivisionByZero, NonPrime, ReducibleModulus, UnsupportedSize
from dp4sieve.field import lex_least_irreducible, make_field


def test_prime_fields():
    f2 = make_field(2, 1)
    assert (f2.p, f2.n, f2.q, f2.modulus) == (2, 1, 2, ())
    f3 = make_field(3)
    assert f3.q == 3
    assert f3.add(2, 2) == 1


def test_f4_modulus_is_lex_least():
    # x^2 + x + 1 is the only monic irreducible quadratic over F_2,
    # found by the exhaustive irreducibility scan.
    assert lex_least_irreducible(2, 2) == (1, 1, 1)
    f4 = make_field(2, 2)
    assert f4.q == 4
    x = f4.from_vector((0, 1))
    # x*x reduces to x+1 under x^2+x+1
    assert f4.to_vector(f4.mul(x, x)) == (1, 1)


def test_construction_errors():
    with pytest.raises(NonPrime):
        make_field(4, 1)
    with pytest.raises(UnsupportedSize):
        make_field(17, 1)
    with pytest.raises(UnsupportedSize):
        make_field(13, 4)
    with pytest.raises(ReducibleModulus):
        make_field(2, 2, modulus=(0, 0, 1))  # x^2 is reducible
    with pytest.raises(ReducibleModulus):
        make_field(2, 2, modulus=(1, 1))  # wrong degree


def test_enumerate_elements_contract():
    for spec in (make_field(2), make_field(3), make_field(2, 2), make_field(3, 2)):
        elems = list(spec.elements())
        assert len(elems) == spec.q
        assert elems[0] == 0 and elems[1] == 1
        assert len(set(elems)) == spec.q


def test_inverse_and_identity():
    for spec in (make_field(5), make_field(2, 2), make_field(2, 3), make_field(3, 2)):
        assert spec.inv(1) == 1
        for a in spec.elements():
            if a:
                assert spec.mul(a, spec.inv(a)) == 1
        with pytest.raises(DivisionByZero):
            spec.inv(0)


@pytest.mark.parametrize("p,n", [(2, 1), (3, 1), (5, 1), (2, 2), (7, 1), (2, 3), (3, 2), (13, 1), (5, 2)])
def test_field_axioms_exhaustive(p, n):
    # associativity, commutativity, distributivity checked exhaustively (q <= 27)
    spec = make_field(p, n)
    if spec.q > 27:
        pytest.skip("exhaustive check capped at q <= 27")
    els = list(spec.elements())
    for a, b in itertools.product(els, els):
        assert spec.add(a, b) == spec.add(b, a)
        assert spec.mul(a, b) == spec.mul(b, a)
        assert spec.sub(a, b) == spec.add(a, spec.neg(b))
    for a, b, c in itertools.product(els, els, els):
        assert spec.add(spec.add(a, b), c) == spec.add(a, spec.add(b, c))
        assert spec.mul(spec.mul(a, b), c) == spec.mul(a, spec.mul(b, c))
        assert spec.mul(a, spec.add(b, c)) == spec.add(spec.mul(a, b), spec.mul(a, c))


@pytest.mark.parametrize("p,n", [(2, 1), (3, 1), (2, 2), (2, 3), (3, 2), (5, 1)])
def test_multiplicative_group_cyclic(p, n):
    spec = make_field(p, n)
    # some element generates all q-1 nonzero elements
    for g in spec.elements():
        if g == 0:
            continue
        seen = set()
        e = 1
        for _ in range(spec.q - 1):
            seen.add(e)
            e = spec.mul(e, g)
        if len(seen) == spec.q - 1:
            break
    else:
        pytest.fail("no generator found")


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 2), (5, 1)])
def test_frobenius_automorphism(p, n):
    spec = make_field(p, n)
    for a in spec.elements():
        for b in spec.elements():
            assert spec.frobenius(spec.add(a, b)) == spec.add(spec.frobenius(a), spec.frobenius(b))
            assert spec.frobenius(spec.mul(a, b)) == spec.mul(spec.frobenius(a), spec.frobenius(b))
    # n-fold iterate is the identity; fixed points are exactly the prime subfield
    fixed = []
    for a in spec.elements():
        e = a
        for _ in range(n):
            e = spec.frobenius(e)
        assert e == a
        if spec.frobenius(a) == a:
            fixed.append(a)
    assert len(fixed) == p


def test_frobenius_on_prime_field_is_identity():
    f5 = make_field(5)
    assert all(f5.frobenius(a) == a for a in f5.elements())


def test_f4_frobenius_example():
    f4 = make_field(2, 2)
    x = f4.from_vector((0, 1))
    assert f4.to_vector(f4.frobenius(x)) == (1, 1)  # x^2 = x+1
