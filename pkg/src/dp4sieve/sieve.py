"""Inclusion-exclusion over configuration posets: local condition lattices
at closed points of P^1, saturation, expected codimension, Moebius
functions, and truncated sieve sums.

The local condition lattice is pluggable.  Its elements are product
subspaces A + B of the four-dimensional fiber V_1 + V_2, each factor being
the full plane, one of four marked lines, or zero; the order is inclusion
and the meet is intersection.  Two instances ship:

* the 14-element lattice {V; the four planes W_i = l_i + l'_i; the eight
  lines l_i + 0 and 0 + l'_i; 0}, the literal reading of the survey data;
* the 16-element subspace closure that also contains 0 + V_2 and V_1 + 0
  (one whole side vanishes).  Only this one has the six corank-2 elements
  that the explicit Euler factor's -6 q^{-2|c|} term counts; the
  coefficient-by-coefficient comparison lives in the diagnostics and is
  asserted only for the 16-element lattice.

A local condition at a closed point is a multiplicity assignment m on the
lattice with m(V) treated as infinity; it is saturated when every level set
{m >= j} is meet-closed, equivalently m(p ^ q) = min(m(p), m(q)).  In these
lattices every meet-closed up-set is principal, so a saturated condition is
the same thing as a weakly shrinking chain of subspaces (the level meets),
and its expected codimension is the sum of their coranks.  Non-saturated
input is rejected, never repaired.

Truncation bookkeeping: the excess of x over a base w counts, per closed
point and weighted by its degree, the growth in multiplicity depth plus the
number of base levels strictly refined.  This is the unique grading for
which zero excess means exactly x = w (the leading-term identity of the
acceptance suite) while depth-1 conditions at fresh points cost one unit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import NotComparable, NotSaturated, TooLarge
from .field import FieldSpec
from .projline import ClosedPoint, closed_points_up_to, poly_divmod, poly_mul
from .secenum import SurfaceConfig, u_k_points

INFINITE = -1  # sentinel multiplicity for the top element


# ---------------------------------------------------------------------------
# condition lattices

@dataclass(frozen=True, eq=False)
class ConditionLattice:
    """A finite meet-semilattice of fiber subspaces with coranks.

    Elements are encoded as pairs (A, B); each factor is 'full', 'zero', or
    a line index 0..3.  The top element (full, full) is the ambient space
    and never carries a finite multiplicity.
    """

    name: str
    elements: tuple
    coranks: tuple
    meet_idx: tuple
    top: int

    def index(self, elem) -> int:
        return self.elements.index(elem)

    def leq(self, i: int, j: int) -> bool:
        return self.meet_idx[i][j] == i

    def meet(self, i: int, j: int) -> int:
        return self.meet_idx[i][j]

    def meet_many(self, idxs, start=None) -> int:
        acc = self.top if start is None else start
        for i in idxs:
            acc = self.meet_idx[acc][i]
        return acc

    @property
    def nontop(self):
        return tuple(i for i in range(len(self.elements)) if i != self.top)


def _factor_meet(x, y):
    if x == "full":
        return y
    if y == "full":
        return x
    if x == y:
        return x
    return "zero"


def _factor_corank(x):
    return 0 if x == "full" else (1 if x != "zero" else 2)


def _build_lattice(name, elems):
    elems = tuple(elems)
    idx = {e: i for i, e in enumerate(elems)}
    meets = []
    for (a1, b1) in elems:
        row = []
        for (a2, b2) in elems:
            m = (_factor_meet(a1, a2), _factor_meet(b1, b2))
            if m not in idx:
                raise ValueError(f"lattice {name} not meet-closed at {m}")
            row.append(idx[m])
        meets.append(tuple(row))
    coranks = tuple(_factor_corank(a) + _factor_corank(b) for a, b in elems)
    return ConditionLattice(name=name, elements=elems, coranks=coranks,
                            meet_idx=tuple(meets), top=idx[("full", "full")])


@lru_cache(maxsize=1)
def survey_q_lattice() -> ConditionLattice:
    """The 14-element lattice: V, the four W_i, the eight marked lines, 0."""
    elems = [("full", "full")]
    elems += [(i, i) for i in range(4)]                       # W_i
    elems += [(i, "zero") for i in range(4)]                  # l_{i,1} + 0
    elems += [("zero", i) for i in range(4)]                  # 0 + l_{i,2}
    elems += [("zero", "zero")]
    return _build_lattice("survey14", elems)


@lru_cache(maxsize=1)
def subspace_q_lattice() -> ConditionLattice:
    """The 16-element subspace closure, adding 0 + V_2 and V_1 + 0."""
    elems = [("full", "full"), ("zero", "full"), ("full", "zero")]
    elems += [(i, i) for i in range(4)]
    elems += [(i, "zero") for i in range(4)]
    elems += [("zero", i) for i in range(4)]
    elems += [("zero", "zero")]
    return _build_lattice("subspace16", elems)


def meet(lattice: ConditionLattice, p, q):
    """Meet of two elements given as (A, B) pairs or indices."""
    i = p if isinstance(p, int) else lattice.index(p)
    j = q if isinstance(q, int) else lattice.index(q)
    return lattice.elements[lattice.meet_idx[i][j]]


# ---------------------------------------------------------------------------
# local conditions

def local_condition(lattice: ConditionLattice, mults: dict) -> tuple:
    """Validated multiplicity tuple over the non-top elements.

    mults maps element index (or (A, B) pair) to multiplicity; omitted
    elements get the largest value monotonicity forces, namely zero unless
    some smaller element pushes them up, in which case validation fails:
    this constructor never repairs input.
    """
    m = [0] * len(lattice.elements)
    for key, val in mults.items():
        i = key if isinstance(key, int) else lattice.index(key)
        if i == lattice.top:
            raise NotSaturated("the top element carries infinite multiplicity")
        if val < 0:
            raise ValueError("multiplicities must be >= 0")
        m[i] = val
    cond = tuple(m[i] for i in lattice.nontop)
    validate_condition(lattice, cond)
    return cond


def _mult_of(lattice: ConditionLattice, cond, i: int):
    if i == lattice.top:
        return float("inf")
    return cond[lattice.nontop.index(i)]


def validate_condition(lattice: ConditionLattice, cond):
    """Reject non-monotone or non-saturated multiplicity data."""
    full = [0.0] * len(lattice.elements)
    for pos, i in enumerate(lattice.nontop):
        full[i] = cond[pos]
    full[lattice.top] = float("inf")
    n = len(lattice.elements)
    for i in range(n):
        for j in range(n):
            if lattice.leq(i, j) and full[i] > full[j]:
                raise NotSaturated("multiplicities not monotone along the order")
            if full[lattice.meet_idx[i][j]] != min(full[i], full[j]):
                raise NotSaturated("level sets are not meet-closed")


def condition_chain(lattice: ConditionLattice, cond) -> tuple:
    """Level meets: chain[j-1] = meet of {e : m(e) >= j}, j = 1..maxorder.

    Every meet-closed up-set of these lattices is principal, so the chain
    determines the condition and vice versa.
    """
    out = []
    j = 1
    while True:
        level = [i for pos, i in enumerate(lattice.nontop) if cond[pos] >= j]
        if not level:
            break
        out.append(lattice.meet_many(level))
        j += 1
    return tuple(out)


def condition_gamma(lattice: ConditionLattice, cond) -> int:
    """Sum of the coranks of the level meets."""
    return sum(lattice.coranks[m] for m in condition_chain(lattice, cond))


def condition_leq(lattice: ConditionLattice, lo, hi) -> bool:
    return all(a <= b for a, b in zip(lo, hi))


def condition_max_order(cond) -> int:
    return max(cond) if cond else 0


def condition_excess(lattice: ConditionLattice, base, cond, degree: int) -> int:
    """Degree-weighted truncation excess of cond over base (see module doc)."""
    cb = condition_chain(lattice, base)
    cc = condition_chain(lattice, cond)
    refined = sum(1 for j in range(len(cb)) if cc[j] != cb[j])
    return degree * ((len(cc) - len(cb)) + refined)


@lru_cache(maxsize=None)
def _local_shapes(lattice: ConditionLattice, max_order: int) -> tuple:
    """All saturated conditions with multiplicity depth <= max_order.

    Level sets of a saturated condition are principal filters up(e_j) with
    e_1 <= e_2 <= ... in the lattice order, so conditions are enumerated as
    weakly increasing chains of non-top elements; the empty chain is the
    trivial condition.
    """
    chains_by_len = {0: [()]}
    for length in range(1, max_order + 1):
        new = []
        for ch in chains_by_len[length - 1]:
            for e in lattice.nontop:
                if not ch or lattice.leq(ch[-1], e):
                    new.append(ch + (e,))
        chains_by_len[length] = new
    conds = []
    for chains in chains_by_len.values():
        for ch in chains:
            m = [0] * len(lattice.elements)
            for e in ch:
                # level j has principal filter up(ch[j-1])
                for i in range(len(lattice.elements)):
                    if lattice.leq(e, i) and i != lattice.top:
                        m[i] += 1
            conds.append(tuple(m[i] for i in lattice.nontop))
    return tuple(sorted(set(conds)))


# ---------------------------------------------------------------------------
# configurations

@dataclass(frozen=True)
class Configuration:
    """Finitely supported assignment of saturated local conditions."""

    lattice: ConditionLattice
    data: tuple          # sorted ((ClosedPoint, cond), ...), conds nonzero

    @property
    def total_degree(self) -> int:
        return sum(pt.degree * condition_max_order(c) for pt, c in self.data)

    def condition_at(self, pt: ClosedPoint):
        for p, c in self.data:
            if p == pt:
                return c
        return tuple(0 for _ in self.lattice.nontop)

    @property
    def support(self):
        return tuple(pt for pt, _ in self.data)


def configuration(lattice: ConditionLattice, assignments) -> Configuration:
    data = []
    for pt, cond in assignments:
        validate_condition(lattice, cond)
        if any(cond):
            data.append((pt, tuple(cond)))
    data.sort(key=lambda e: (e[0], e[1]))
    return Configuration(lattice=lattice, data=tuple(data))


def empty_configuration(lattice: ConditionLattice) -> Configuration:
    return Configuration(lattice=lattice, data=())


def config_leq(w: Configuration, x: Configuration) -> bool:
    """Pointwise divisor containment at every lattice element."""
    assert w.lattice is x.lattice
    for pt, cond in w.data:
        if not condition_leq(w.lattice, cond, x.condition_at(pt)):
            return False
    return True


def config_from_divisor_tuple(lattice: ConditionLattice, w) -> Configuration:
    """The configuration induced by a disjoint divisor tuple: component i
    places its multiplicities at the plane W_i."""
    by_point: dict = {}
    for i, div in enumerate(w):
        for pt, mult in div.entries:
            cond = by_point.setdefault(pt, {})
            cond[(i, i)] = cond.get((i, i), 0) + mult
    return configuration(lattice, [(pt, local_condition(lattice, m))
                                   for pt, m in by_point.items()])


def gamma(x: Configuration) -> int:
    """Expected codimension: degree-weighted sum of local level coranks."""
    return sum(pt.degree * condition_gamma(x.lattice, cond) for pt, cond in x.data)


def config_excess(w: Configuration, x: Configuration) -> int:
    assert config_leq(w, x)
    total = 0
    for pt, cond in x.data:
        total += condition_excess(x.lattice, w.condition_at(pt), cond, pt.degree)
    return total


# ---------------------------------------------------------------------------
# Moebius functions

@lru_cache(maxsize=None)
def _local_interval_mobius(lattice: ConditionLattice, lo, hi) -> int:
    """mu(lo, hi) in the poset of saturated local conditions."""
    if lo == hi:
        return 1
    if not condition_leq(lattice, lo, hi):
        raise NotComparable("conditions are not nested")
    total = 0
    for mid in _conditions_between(lattice, lo, hi):
        if mid != hi:
            total += _local_interval_mobius(lattice, lo, mid)
    return -total


@lru_cache(maxsize=None)
def _conditions_between(lattice: ConditionLattice, lo, hi) -> tuple:
    out = []
    for cand in _local_shapes(lattice, condition_max_order(hi)):
        if condition_leq(lattice, lo, cand) and condition_leq(lattice, cand, hi):
            out.append(cand)
    return tuple(out)


def interval(w: Configuration, x: Configuration):
    """All configurations between w and x (product of local intervals)."""
    if not config_leq(w, x):
        raise NotComparable("w is not below x")
    lattice = w.lattice
    pts = x.support
    locals_ = []
    for pt in pts:
        lo, hi = w.condition_at(pt), x.condition_at(pt)
        locals_.append([(pt, c) for c in _conditions_between(lattice, lo, hi)])
    out = []
    for combo in itertools.product(*locals_):
        out.append(configuration(lattice, list(combo)))
    return out


def mobius(w: Configuration, x: Configuration, recursive: bool = False) -> int:
    """mu(w, x) of the configuration poset.

    The default multiplies local interval values over closed points;
    recursive=True runs the generic interval recursion instead, so
    multiplicativity is a tested fact, not an assumption.
    """
    if not config_leq(w, x):
        raise NotComparable("w is not below x")
    if recursive:
        return _mobius_recursive(w, x)
    lattice = w.lattice
    out = 1
    for pt in x.support:
        out *= _local_interval_mobius(lattice, w.condition_at(pt), x.condition_at(pt))
    return out


def _mobius_recursive(w: Configuration, x: Configuration) -> int:
    members = interval(w, x)
    members.sort(key=lambda y: gamma(y))
    mu = {}
    for y in members:
        if y.data == w.data:
            mu[y.data] = 1
            continue
        acc = 0
        for z in members:
            if z.data != y.data and config_leq(z, y):
                acc += mu.get(z.data, 0)
        mu[y.data] = -acc
    return mu[x.data]


# ---------------------------------------------------------------------------
# enumeration of configurations above a base

def enumerate_configs_above(w, D: int, K: FieldSpec,
                            lattice: ConditionLattice | None = None,
                            limit: int = 500_000):
    """All saturated configurations dominating the w-induced configuration
    with excess at most D, in deterministic order.

    w is a tuple of four effective divisors with disjoint supports, or a
    Configuration.  Excess counts depth growth plus strict level
    refinements, degree-weighted (module doc); D = 0 yields exactly the
    base configuration.
    """
    if D < 0:
        raise ValueError("D must be >= 0")
    lattice = lattice or subspace_q_lattice()
    base = w if isinstance(w, Configuration) else config_from_divisor_tuple(lattice, w)
    base_pts = list(base.support)
    new_pts = [pt for pt in closed_points_up_to(K, max(1, D))
               if pt.degree <= D and pt not in base_pts] if D >= 1 else []
    all_pts = base_pts + new_pts

    per_point = []
    for pt in all_pts:
        lo = base.condition_at(pt)
        lo_ord = condition_max_order(lo)
        cands = []
        for cand in _local_shapes(lattice, lo_ord + D // pt.degree):
            if condition_leq(lattice, lo, cand):
                excess = condition_excess(lattice, lo, cand, pt.degree)
                if excess <= D:
                    cands.append((cand, excess))
        per_point.append(cands)

    out = []

    def rec(idx, remaining, acc):
        if len(out) > limit:
            raise TooLarge("configuration inventory exceeds limit")
        if idx == len(all_pts):
            out.append(configuration(lattice, acc))
            return
        pt = all_pts[idx]
        for cand, excess in per_point[idx]:
            if excess <= remaining:
                rec(idx + 1, remaining - excess, acc + [(pt, cand)])

    rec(0, D, [])
    out.sort(key=lambda x: (config_excess(base, x), x.data))
    return out


# ---------------------------------------------------------------------------
# sieve sums

@dataclass(frozen=True)
class SievePrediction:
    a: int
    b: int
    k: tuple
    truncation: int
    value: Fraction
    stable_range: int


def stable_range_I(a: int, b: int, k) -> int:
    """floor( min(2a+1-sum k, 2b+1-sum k) / 8 - 1/2 ), possibly negative."""
    sk = sum(k)
    m = min(2 * a + 1 - sk, 2 * b + 1 - sk)
    val = Fraction(m, 8) - Fraction(1, 2)
    return val.numerator // val.denominator


@lru_cache(maxsize=None)
def _local_poly(lattice: ConditionLattice, q: int, deg: int, base, budget: int):
    """Excess generating polynomial at one closed point.

    Coefficient of T^e sums mu(base, tau) q^{-deg * gamma(tau)} over
    saturated tau >= base of excess e <= budget.
    """
    base_ord = condition_max_order(base)
    out = [Fraction(0)] * (budget + 1)
    for tau in _local_shapes(lattice, base_ord + budget // deg + 1):
        if not condition_leq(lattice, base, tau):
            continue
        excess = condition_excess(lattice, base, tau, deg)
        if excess > budget:
            continue
        mu = _local_interval_mobius(lattice, base, tau)
        if mu:
            out[excess] += mu * Fraction(1, q ** (deg * condition_gamma(lattice, tau)))
    return tuple(out)


def _series_mul(a, b, order):
    out = [Fraction(0)] * (order + 1)
    for i, x in enumerate(a[: order + 1]):
        if x:
            for j, y in enumerate(b[: order + 1 - i]):
                if y:
                    out[i + j] += x * y
    return out


def _series_inv(a, order):
    assert a[0] != 0
    inv0 = 1 / a[0]
    out = [Fraction(0)] * (order + 1)
    out[0] = inv0
    for n in range(1, order + 1):
        acc = Fraction(0)
        for i in range(1, min(n, len(a) - 1) + 1):
            acc += a[i] * out[n - i]
        out[n] = -acc * inv0
    return out


def _series_pow(a, e, order):
    result = [Fraction(0)] * (order + 1)
    result[0] = Fraction(1)
    base = list(a[: order + 1]) + [Fraction(0)] * max(0, order + 1 - len(a))
    while e:
        if e & 1:
            result = _series_mul(result, base, order)
        e >>= 1
        if e:
            base = _series_mul(base, base, order)
    return result


@lru_cache(maxsize=None)
def count_closed_points_for(q: int, n: int) -> int:
    from .field import make_field
    from .projline import count_closed_points as ccp

    for p in (2, 3, 5, 7, 11, 13):
        m = 1
        while p ** m <= q:
            if p ** m == q:
                return ccp(make_field(p, m), n)
            m += 1
    raise ValueError(f"unsupported q = {q}")


@lru_cache(maxsize=None)
def _background_series(lattice: ConditionLattice, q: int, D: int):
    """Product over all closed points of the no-base excess polynomial,
    truncated at T^D."""
    empty = tuple(0 for _ in lattice.nontop)
    series = [Fraction(0)] * (D + 1)
    series[0] = Fraction(1)
    for d in range(1, D + 1):
        count = count_closed_points_for(q, d)
        local = _local_poly(lattice, q, d, empty, D)
        series = _series_mul(series, _series_pow(local, count, D), D)
    return tuple(series)


def sieve_sum(K: FieldSpec, k, D: int,
              lattice: ConditionLattice | None = None,
              with_deltas: bool = False):
    """Exact truncated sieve sum over (w <= x) pairs.

    Sums mu(x_w, x) q^{-gamma(x)} over w in U_k(F_q) and saturated x above
    x_w with excess <= D.  Moebius multiplicativity over closed points
    (verified in tests against the generic recursion) factors the sum into
    per-point excess polynomials against a background Euler product.  The
    x = x_w terms sit at excess 0, so the D = 0 value is the bare
    sum_w q^{-gamma(x_w)}.  Returns an exact Fraction; with_deltas gives
    the partial values at truncations 0..D so stabilization is observable.
    """
    lattice = lattice or subspace_q_lattice()
    q = K.q
    k = tuple(k)
    background = _background_series(lattice, q, D)
    empty = tuple(0 for _ in lattice.nontop)
    totals = [Fraction(0)] * (D + 1)
    for w in u_k_points(K, k):
        per_w = list(background)
        for i, div in enumerate(w):
            for pt, mult in div.entries:
                base = local_condition(lattice, {(i, i): mult})
                num = _local_poly(lattice, q, pt.degree, base, D)
                den = _local_poly(lattice, q, pt.degree, empty, D)
                per_w = _series_mul(per_w, num, D)
                per_w = _series_mul(per_w, _series_inv(den, D), D)
        for e in range(D + 1):
            totals[e] += per_w[e]
    partials = list(itertools.accumulate(totals))
    if with_deltas:
        return partials
    return partials[D]


def prediction(K: FieldSpec, a: int, b: int, k, D: int,
               lattice: ConditionLattice | None = None) -> SievePrediction:
    """q^{2a+2b+4} times the truncated sieve sum, as a prediction record."""
    value = sieve_sum(K, k, D, lattice=lattice)
    return SievePrediction(a=a, b=b, k=tuple(k), truncation=D,
                           value=K.q ** (2 * a + 2 * b + 4) * value,
                           stable_range=stable_range_I(a, b, k))


# ---------------------------------------------------------------------------
# exact linear-algebra oracle for gamma

def gamma_rank_oracle(x: Configuration, a: int, b: int, cfg: SurfaceConfig) -> int:
    """Rank of the exact linear system imposed by x on the section space.

    Assembles, over F_q, the conditions "the section lies in the prescribed
    subspace to the prescribed order" for every lattice element with
    positive multiplicity, as linear equations on the 2a+2b+4 coefficients,
    and returns the codimension of the solution space: the ground truth for
    gamma in the stable range.
    """
    K = cfg.field
    rows = []
    for pt, cond in x.data:
        for pos, idx in enumerate(x.lattice.nontop):
            mult = cond[pos]
            if mult == 0:
                continue
            A, B = x.lattice.elements[idx]
            rows.extend(_subspace_rows(K, cfg, pt, mult, A, side="s", degree=a))
            rows.extend(_subspace_rows(K, cfg, pt, mult, B, side="t", degree=b))
    if not rows:
        return 0
    width = (2 * a + 2) + (2 * b + 2)
    full = []
    for side, row in rows:
        vec = [0] * width
        base = 0 if side == "s" else 2 * a + 2
        for i, v in enumerate(row):
            vec[base + i] = v
        full.append(vec)
    return _rank_mod(K, full)


def _subspace_rows(K: FieldSpec, cfg: SurfaceConfig, pt: ClosedPoint, mult: int,
                   factor, side: str, degree: int):
    """Rows for "this side's value at pt lies in factor, to order mult"."""
    if factor == "full":
        return []
    if factor == "zero":
        rows = []
        for coord in (0, 1):
            for r in _vanishing_rows(K, pt, mult, degree):
                rows.append((side, _embed(r, coord, degree)))
        return rows
    lam = (cfg.lam if side == "s" else cfg.lam2)(factor)
    d, negc = lam
    rows = []
    for r in _vanishing_rows(K, pt, mult, degree):
        combined = [K.mul(d, v) for v in r] + [K.mul(negc, v) for v in r]
        rows.append((side, combined))
    return rows


def _embed(row, coord, degree):
    zero = [0] * (degree + 1)
    return (list(row) + zero) if coord == 0 else (zero + list(row))


@lru_cache(maxsize=None)
def _vanishing_rows(K: FieldSpec, pt: ClosedPoint, mult: int, degree: int):
    """Rows expressing "a degree-`degree` form vanishes on mult * pt"."""
    ncols = degree + 1
    if pt.is_infinity:
        # order at infinity = number of vanishing top coefficients
        rows = []
        for j in range(min(mult, ncols)):
            row = [0] * ncols
            row[ncols - 1 - j] = 1
            rows.append(tuple(row))
        return tuple(rows)
    modulus = pt.poly
    for _ in range(mult - 1):
        modulus = poly_mul(K, modulus, pt.poly)
    red = len(modulus) - 1
    rows = [[0] * ncols for _ in range(red)]
    for j in range(ncols):
        xj = (0,) * j + (1,)
        _, rem = poly_divmod(K, xj, modulus)
        for r in range(red):
            rows[r][j] = rem[r] if r < len(rem) else 0
    return tuple(tuple(r) for r in rows)


def _rank_mod(K: FieldSpec, rows) -> int:
    rows = [list(r) for r in rows]
    ncols = len(rows[0])
    rank, col = 0, 0
    while rank < len(rows) and col < ncols:
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = K.inv(rows[rank][col])
        rows[rank] = [K.mul(v, inv) for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [K.sub(x, K.mul(f, y)) for x, y in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


# ---------------------------------------------------------------------------
# diagnostic: local factor of a lattice vs the explicit Euler factor

def lattice_local_factor(lattice: ConditionLattice, q: int, deg: int,
                         u_order: int, t_order: int) -> dict:
    """Local factor of the lattice at a degree-`deg` point.

    Returns {m: Fraction}: entry m sums mu(base_m, tau) q^{-deg gamma(tau)}
    over saturated tau above the depth-m plane condition at a fixed marked
    index (the four are symmetric), truncated to gamma <= u_order, times
    the height-zeta bookkeeping power q^{deg m}.  Entry 0 is the factor's
    constant part; comparisons against the closed-form display live in the
    heightzeta module.
    """
    empty = tuple(0 for _ in lattice.nontop)
    out = {}
    max_ord = t_order + u_order // 2 + 1
    shapes = _local_shapes(lattice, max_ord)
    for m in range(t_order + 1):
        base = local_condition(lattice, {(0, 0): m}) if m else empty
        acc = Fraction(0)
        for tau in shapes:
            if not condition_leq(lattice, base, tau):
                continue
            g = condition_gamma(lattice, tau)
            if g > u_order:
                continue
            mu = _local_interval_mobius(lattice, base, tau)
            if mu:
                acc += mu * Fraction(1, q ** (deg * g))
        out[m] = acc * q ** (deg * m)
    return out
