"""Binary forms on P^1 over F_q, closed points, and effective divisors.

Conventions.  A binary form of degree d is the coefficient tuple
(c_0, ..., c_d) meaning sum c_j X^j Y^{d-j}; the zero form is any
all-zero tuple.  Points of P^1 carry the affine coordinate x = X/Y, so a
closed point is either the place at infinity (Y = 0, degree 1) or a monic
irreducible polynomial in x.  Working with forms rather than polynomials
keeps the place at infinity on the same footing as every other point: a
"common root" of two forms includes common vanishing at infinity.

Everything here is immutable and pure; factorization is by exhaustive
trial division over the closed-point inventory, which is transparent and
plenty fast at the degrees this package ever touches.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import BothZero, TooLarge, ZeroForm
from .field import FieldSpec

_HILB_CAP = 2_000_000


# ---------------------------------------------------------------------------
# dense polynomial arithmetic over F_q (little-endian tuples of field ints)

def poly_trim(c):
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return tuple(c[:i])


def poly_mul(K: FieldSpec, a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = K.add(out[i + j], K.mul(x, y))
    return poly_trim(out)


def poly_divmod(K: FieldSpec, num, den):
    num = list(poly_trim(num))
    den = poly_trim(den)
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    dn = len(den) - 1
    inv_lead = K.inv(den[-1])
    quot = [0] * max(0, len(num) - dn)
    while len(num) - 1 >= dn and any(num):
        if num[-1] == 0:
            num.pop()
            continue
        coef = K.mul(num[-1], inv_lead)
        shift = len(num) - 1 - dn
        quot[shift] = coef
        for i, d in enumerate(den):
            num[shift + i] = K.sub(num[shift + i], K.mul(coef, d))
        num.pop()
    return tuple(quot), poly_trim(num)


def poly_gcd(K: FieldSpec, a, b):
    """Monic gcd; gcd(a, 0) = monic(a)."""
    a, b = poly_trim(a), poly_trim(b)
    while b:
        _, a = poly_divmod(K, a, b)
        a, b = b, a
    if a:
        inv = K.inv(a[-1])
        a = tuple(K.mul(c, inv) for c in a)
    return a


def poly_eval(K: FieldSpec, c, x):
    acc = 0
    for coef in reversed(c):
        acc = K.add(K.mul(acc, x), coef)
    return acc


# ---------------------------------------------------------------------------
# closed points

@dataclass(frozen=True, order=True)
class ClosedPoint:
    """A closed point of P^1: infinity, or a monic irreducible in x.

    The sort key (degree, code) fixes the deterministic enumeration order;
    infinity sorts после the rational affine points.
    """

    degree: int
    code: int            # poly code sum c_i q^i, or -1 sentinel... see below
    poly: tuple          # () for infinity, else monic coefficient tuple

    @property
    def is_infinity(self) -> bool:
        return not self.poly


def _poly_code(q: int, poly) -> int:
    code = 0
    for c in reversed(poly):
        code = code * q + c
    return code


def point_at_infinity() -> ClosedPoint:
    # sort key puts infinity first within degree 1; enumeration order is
    # fixed separately by closed_points_up_to
    return ClosedPoint(degree=1, code=-1, poly=())


def _affine_point(K: FieldSpec, poly) -> ClosedPoint:
    poly = tuple(poly)
    deg = len(poly) - 1
    code = _poly_code(K.q, poly)
    return ClosedPoint(degree=deg, code=code, poly=poly)


def rational_point(K: FieldSpec, x: int) -> ClosedPoint:
    """The degree-1 point at affine coordinate x."""
    return _affine_point(K, (K.neg(x), 1))


@lru_cache(maxsize=None)
def _irreducibles_of_degree(K: FieldSpec, n: int):
    """All monic irreducible polynomials of degree n, ascending code order."""
    if n == 1:
        return tuple(_affine_point(K, (c, 1)) for c in K.elements())
    lower = []
    for d in range(1, n // 2 + 1):
        lower.extend(pt.poly for pt in _irreducibles_of_degree(K, d))
    out = []
    for code in range(K.q ** n):
        coeffs = []
        c = code
        for _ in range(n):
            coeffs.append(c % K.q)
            c //= K.q
        poly = tuple(coeffs) + (1,)
        if all(poly_divmod(K, poly, div)[1] for div in lower):
            out.append(_affine_point(K, poly))
    return tuple(out)


def closed_points_up_to(K: FieldSpec, N: int):
    """All closed points of degree <= N in deterministic order.

    Degree 1 lists the q affine rational points by coordinate code and then
    infinity; higher degrees list monic irreducibles by coefficient code.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    pts = list(_irreducibles_of_degree(K, 1)) + [point_at_infinity()]
    for n in range(2, N + 1):
        pts.extend(_irreducibles_of_degree(K, n))
    return pts


def _int_mobius(n: int) -> int:
    out, d = 1, 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            out = -out
        d += 1
    if n > 1:
        out = -out
    return out


def count_closed_points(K: FieldSpec, n: int) -> int:
    """Number of closed points of degree n, by the necklace formula.

    Degree 1 counts q + 1 (the affine line plus infinity); for n >= 2 the
    count is (1/n) * sum_{d | n} mu(d) q^{n/d}.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return K.q + 1
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += _int_mobius(d) * K.q ** (n // d)
    assert total % n == 0
    return total // n


# ---------------------------------------------------------------------------
# effective divisors

@dataclass(frozen=True)
class EffectiveDivisor:
    """A finite multiset of closed points: sorted ((point, mult), ...) pairs."""

    entries: tuple

    def __post_init__(self):
        assert all(m >= 1 for _, m in self.entries)

    @property
    def degree(self) -> int:
        return sum(pt.degree * m for pt, m in self.entries)

    @property
    def support(self):
        return tuple(pt for pt, _ in self.entries)

    def mult(self, pt: ClosedPoint) -> int:
        for p, m in self.entries:
            if p == pt:
                return m
        return 0

    def is_zero(self) -> bool:
        return not self.entries

    def add(self, other: "EffectiveDivisor") -> "EffectiveDivisor":
        out = dict(self.entries)
        for pt, m in other.entries:
            out[pt] = out.get(pt, 0) + m
        return divisor(out.items())

    def min(self, other: "EffectiveDivisor") -> "EffectiveDivisor":
        out = []
        for pt, m in self.entries:
            m2 = other.mult(pt)
            if m2:
                out.append((pt, min(m, m2)))
        return divisor(out)

    def contains(self, other: "EffectiveDivisor") -> bool:
        return all(self.mult(pt) >= m for pt, m in other.entries)

    def __str__(self):
        if not self.entries:
            return "0"
        bits = []
        for pt, m in self.entries:
            name = "inf" if pt.is_infinity else f"{pt.poly}"
            bits.append(f"{m}*{name}" if m > 1 else name)
        return " + ".join(bits)


def divisor(pairs) -> EffectiveDivisor:
    ent = tuple(sorted((pt, m) for pt, m in pairs if m))
    return EffectiveDivisor(entries=ent)


ZERO_DIVISOR = EffectiveDivisor(entries=())


# ---------------------------------------------------------------------------
# forms: divisor extraction and gcd

def form_is_zero(coeffs) -> bool:
    return not any(coeffs)


def _affine_part(coeffs):
    """Split a form into (affine polynomial, order of vanishing at infinity)."""
    aff = poly_trim(coeffs)
    return aff, len(coeffs) - len(aff)


def factor_poly(K: FieldSpec, poly) -> list:
    """Factor a nonzero polynomial into (ClosedPoint, multiplicity) pairs."""
    poly = poly_trim(poly)
    out = []
    deg = len(poly) - 1
    n = 1
    while len(poly) - 1 > 0:
        if n > (len(poly) - 1) // 2:
            # remaining cofactor is irreducible
            inv = K.inv(poly[-1])
            monic = tuple(K.mul(c, inv) for c in poly)
            out.append((_affine_point(K, monic), 1))
            break
        for pt in _irreducibles_of_degree(K, n):
            mult = 0
            while True:
                quot, rem = poly_divmod(K, poly, pt.poly)
                if rem:
                    break
                poly, mult = quot, mult + 1
            if mult:
                out.append((pt, mult))
        n += 1
    assert sum(pt.degree * m for pt, m in out) == deg
    return out


def divisor_of_form(K: FieldSpec, coeffs) -> EffectiveDivisor:
    """Full factorization of a nonzero form, including the place at infinity."""
    if form_is_zero(coeffs):
        raise ZeroForm("the zero form has no divisor")
    aff, inf_mult = _affine_part(coeffs)
    pairs = factor_poly(K, aff) if len(aff) > 1 else []
    if inf_mult:
        pairs.append((point_at_infinity(), inf_mult))
    div = divisor(pairs)
    assert div.degree == len(coeffs) - 1
    return div


def form_gcd(K: FieldSpec, f, g) -> EffectiveDivisor:
    """Pointwise minimum of the two divisors, as a divisor.

    Equals the divisor of the polynomial gcd of the affine parts plus the
    minimum of the orders at infinity.  A zero form acts as the neutral
    upper bound: form_gcd(0, g) = div(g).
    """
    fz, gz = form_is_zero(f), form_is_zero(g)
    if fz and gz:
        raise BothZero("gcd of two zero forms")
    if fz:
        return divisor_of_form(K, g)
    if gz:
        return divisor_of_form(K, f)
    aff_f, inf_f = _affine_part(f)
    aff_g, inf_g = _affine_part(g)
    gcd_poly = poly_gcd(K, aff_f, aff_g)
    pairs = factor_poly(K, gcd_poly) if len(gcd_poly) > 1 else []
    inf_mult = min(inf_f, inf_g)
    if inf_mult:
        pairs.append((point_at_infinity(), inf_mult))
    return divisor(pairs)


def form_gcd_degree(K: FieldSpec, f, g) -> int:
    """Degree of form_gcd without factoring (fast path for counting)."""
    fz, gz = form_is_zero(f), form_is_zero(g)
    if fz and gz:
        raise BothZero("gcd of two zero forms")
    if fz:
        return len(g) - 1
    if gz:
        return len(f) - 1
    aff_f, inf_f = _affine_part(f)
    aff_g, inf_g = _affine_part(g)
    gcd_poly = poly_gcd(K, aff_f, aff_g)
    return max(0, len(gcd_poly) - 1) + min(inf_f, inf_g)


# ---------------------------------------------------------------------------
# Hilbert scheme slices and the zeta identity

def hilb_points(K: FieldSpec, n: int):
    """All effective divisors of degree n; their number is #P^n(F_q)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    expected = (K.q ** (n + 1) - 1) // (K.q - 1)
    if expected > _HILB_CAP:
        raise TooLarge(f"degree-{n} divisor inventory over F_{K.q} has {expected} members")
    if n == 0:
        return [ZERO_DIVISOR]
    pts = closed_points_up_to(K, n)
    out = []

    def rec(idx, remaining, acc):
        if remaining == 0:
            out.append(divisor(acc))
            return
        if idx == len(pts):
            return
        pt = pts[idx]
        if pt.degree > remaining:
            rec(idx + 1, remaining, acc)
            return
        max_mult = remaining // pt.degree
        for m in range(max_mult, -1, -1):
            rec(idx + 1, remaining - m * pt.degree, acc + [(pt, m)] if m else acc)

    rec(0, n, [])
    assert len(out) == expected
    return sorted(out, key=lambda d: d.entries)


def _point_counts(K: FieldSpec, N: int, use_enumeration: bool):
    if use_enumeration:
        by_deg = [0] * (N + 1)
        for pt in closed_points_up_to(K, N):
            by_deg[pt.degree] += 1
        return by_deg
    return [0] + [count_closed_points(K, n) for n in range(1, N + 1)]


def zeta_p1_identity_check(K: FieldSpec, N: int, use_enumeration: bool = False,
                           return_detail: bool = False):
    """Check prod_{deg c <= N} (1 - t^{deg c})^{-1} = 1/((1-t)(1-qt)) mod t^{N+1}.

    The left side multiplies out the closed-point inventory (counts by the
    necklace formula, or by actual enumeration when requested); the right
    side has coefficient #P^n(F_q) at t^n.  Returns True on full agreement,
    otherwise the first mismatching order (or (ok, first_bad) with
    return_detail).
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    counts = _point_counts(K, N, use_enumeration)
    series = [Fraction(0)] * (N + 1)
    series[0] = Fraction(1)
    for n in range(1, N + 1):
        # multiply by (1 - t^n)^{-count} = sum_j C(count+j-1, j) t^{nj}
        c = counts[n]
        new = [Fraction(0)] * (N + 1)
        j, binom = 0, 1
        while n * j <= N:
            for i in range(0, N + 1 - n * j):
                if series[i]:
                    new[i + n * j] += binom * series[i]
            j += 1
            binom = binom * (c + j - 1) // j
        series = new
    first_bad = None
    for n in range(N + 1):
        rhs = (K.q ** (n + 1) - 1) // (K.q - 1)
        if series[n] != rhs:
            first_bad = n
            break
    ok = first_bad is None
    if return_detail:
        return ok, first_bad
    return ok if ok else first_bad
