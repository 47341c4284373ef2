"""Exact arithmetic in small finite fields F_q, q = p^n with p <= 13 and n <= 3.

Elements are canonical small integers: the element with coefficient vector
(c_0, ..., c_{n-1}) over Z/p (c_0 the constant term) is encoded as the
integer sum c_i * p^i.  All public contracts speak in coefficient vectors;
the integer encoding is an internal convenience that doubles as a table
index.  FieldSpec instances are immutable after construction and safe to
share between workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .errors import DivisionByZero, NonPrime, ReducibleModulus, UnsupportedSize

_SUPPORTED_PRIMES = (2, 3, 5, 7, 11, 13)
_MAX_Q = 13 ** 3


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# polynomial helpers over Z/p (dense little-endian coefficient tuples)

def _poly_trim(c):
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return tuple(c[:i])


def _poly_mod(num, den, p):
    """Remainder of num modulo monic den, coefficients in Z/p."""
    num = list(num)
    dn = len(den) - 1
    while len(num) - 1 >= dn and any(num):
        num = _poly_trim(num)
        num = list(num)
        if len(num) - 1 < dn:
            break
        lead = num[-1]
        shift = len(num) - 1 - dn
        for i, d in enumerate(den):
            num[shift + i] = (num[shift + i] - lead * d) % p
        num = num[:-1]
    return _poly_trim(num)


def _poly_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_trim(out)


def _monic_polys(degree: int, p: int):
    """All monic polynomials of exactly the given degree over Z/p, lex order."""
    for code in range(p ** degree):
        coeffs = []
        c = code
        for _ in range(degree):
            coeffs.append(c % p)
            c //= p
        yield tuple(coeffs) + (1,)


def _is_irreducible(poly, p: int) -> bool:
    """Trial division against every monic polynomial of degree <= deg/2."""
    deg = len(poly) - 1
    if deg <= 0:
        return False
    for d in range(1, deg // 2 + 1):
        for div in _monic_polys(d, p):
            if not _poly_mod(poly, div, p):
                return False
    return True


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """A validated finite field F_q with table-backed arithmetic.

    Attributes:
        p: characteristic.
        n: extension degree over the prime field.
        modulus: monic degree-n irreducible over Z/p as a little-endian
            coefficient tuple of length n+1; () when n == 1.
        q: cardinality p^n.

    Construction is memoized, so specs with equal parameters are the same
    object; identity comparison and hashing are therefore exact and cheap.
    """

    p: int
    n: int
    modulus: tuple
    q: int
    _exp: tuple = field(repr=False, default=())    # exp[i] = g^i, length q-1
    _log: tuple = field(repr=False, default=())    # log[e] for e != 0

    # -- encoding -----------------------------------------------------------

    def to_vector(self, e: int) -> tuple:
        """Canonical coefficient vector of length n, each entry in [0, p)."""
        out = []
        for _ in range(self.n):
            out.append(e % self.p)
            e //= self.p
        return tuple(out)

    def from_vector(self, vec) -> int:
        e = 0
        for c in reversed(vec):
            e = e * self.p + (c % self.p)
        return e

    # -- arithmetic ---------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.n == 1:
            return (a + b) % self.p
        p, out, mult = self.p, 0, 1
        for _ in range(self.n):
            out += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        if self.n == 1:
            return (-a) % self.p
        p, out, mult = self.p, 0, 1
        for _ in range(self.n):
            out += ((-a) % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise DivisionByZero("inverse of zero")
            return 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def frobenius(self, a: int) -> int:
        """The p-power map; its n-fold iterate is the identity."""
        return self.pow(a, self.p)

    # -- inventory ----------------------------------------------------------

    def elements(self) -> range:
        """All q elements in canonical order; starts 0, 1."""
        return range(self.q)

    def __str__(self):
        return f"F_{self.q}" if self.n == 1 else f"F_{self.q} = F_{self.p}[x]/{self.modulus}"


def _raw_mul(a: int, b: int, p: int, n: int, modulus) -> int:
    if n == 1:
        return (a * b) % p
    av = [(a // p ** i) % p for i in range(n)]
    bv = [(b // p ** i) % p for i in range(n)]
    prod = _poly_mod(_poly_mul(tuple(av), tuple(bv), p), modulus, p)
    out = 0
    for c in reversed(prod):
        out = out * p + c
    return out


def _build_log_tables(p: int, n: int, modulus, q: int):
    # find a multiplicative generator by brute force, then tabulate powers
    for g in range(1, q):
        seen = [False] * q
        e, count = 1, 0
        exp = []
        while not seen[e]:
            seen[e] = True
            exp.append(e)
            e = _raw_mul(e, g, p, n, modulus)
            count += 1
        if count == q - 1:
            log = [0] * q
            for i, v in enumerate(exp):
                log[v] = i
            return tuple(exp), tuple(log)
    raise UnsupportedSize(f"no multiplicative generator found for q={q}")  # pragma: no cover


@lru_cache(maxsize=None)
def _make_field_cached(p: int, n: int, modulus) -> FieldSpec:
    q = p ** n
    exp, log = _build_log_tables(p, n, modulus, q)
    return FieldSpec(p=p, n=n, modulus=modulus, q=q, _exp=exp, _log=log)


def lex_least_irreducible(p: int, n: int) -> tuple:
    """The first monic irreducible of degree n over Z/p in lex order.

    Lex order scans the non-leading coefficient vector (c_0, ..., c_{n-1})
    by ascending integer code sum c_i p^i, so the choice is reproducible
    across runs and machines.
    """
    for poly in _monic_polys(n, p):
        if _is_irreducible(poly, p):
            return poly
    raise ReducibleModulus(f"no irreducible of degree {n} over F_{p}")  # pragma: no cover


def make_field(p: int, n: int = 1, modulus=None) -> FieldSpec:
    """Construct a validated FieldSpec for F_{p^n}.

    If the modulus is omitted for n > 1, the lexicographically least monic
    irreducible of degree n is chosen, deterministically.
    """
    if not _is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if p not in _SUPPORTED_PRIMES:
        raise UnsupportedSize(f"characteristic {p} outside supported range 2..13")
    if n < 1 or p ** n > _MAX_Q:
        raise UnsupportedSize(f"q = {p}^{n} outside supported range")
    if n == 1:
        if modulus not in (None, ()):
            raise ReducibleModulus("prime fields take no modulus")
        return _make_field_cached(p, 1, ())
    if modulus is None:
        modulus = lex_least_irreducible(p, n)
    else:
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != n + 1 or modulus[-1] != 1:
            raise ReducibleModulus(f"modulus must be monic of degree {n}")
        if not _is_irreducible(modulus, p):
            raise ReducibleModulus(f"modulus {modulus} is reducible over F_{p}")
    return _make_field_cached(p, n, modulus)
