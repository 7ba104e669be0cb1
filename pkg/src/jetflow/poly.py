"""Sparse multivariate polynomial arithmetic, truncation, and bivariate GCD.

A MultiPoly is a finite map from exponent tuples to nonzero coefficients.
Coefficients are either exact rationals (Fraction) or 64-bit floats; the
two scalar modes never mix inside one computation.  PolyMap bundles m
coordinate polynomials sharing the same variables and an optional truncation
order K, and represents a K-jet of a map at the origin.

All values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import gcd as int_gcd

from . import univar
from .config import FLOAT_DROP_TOL
from .errors import NotDivisibleError

EXACT = "exact"
FLOAT = "float"

# Default display names; --vars overrides at the CLI layer.
_DEFAULT_NAMES = ("x", "y", "z")


def default_var_names(nvars):
    """x, y, z for up to three variables, x1..xn beyond."""
    if nvars <= 3:
        return list(_DEFAULT_NAMES[:nvars])
    return [f"x{i + 1}" for i in range(nvars)]


def _coerce(value, mode):
    if mode == EXACT:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value)
        raise ValueError(f"exact mode cannot hold a {type(value).__name__} coefficient")
    if mode == FLOAT:
        if isinstance(value, (int, float, Fraction)):
            return float(value)
        raise ValueError(f"float mode cannot hold a {type(value).__name__} coefficient")
    raise ValueError(f"unknown scalar mode {mode!r}")


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def monomials_of_degree(nvars, d):
    """All exponent tuples of total degree d, in descending lex order."""
    if nvars == 1:
        return [(d,)]
    out = []
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(nvars - 1, d - first):
            out.append((first,) + rest)
    return out


def mono_deg(mono):
    return sum(mono)


def _check_pair(a, b):
    if a.nvars != b.nvars:
        raise ValueError(f"variable-count mismatch: {a.nvars} vs {b.nvars}")
    if a.mode != b.mode:
        raise ValueError(f"scalar-mode mismatch: {a.mode} vs {b.mode}")


class MultiPoly:
    """Sparse polynomial in ``nvars`` variables over one scalar mode."""

    __slots__ = ("nvars", "mode", "terms")

    def __init__(self, nvars, terms=None, mode=EXACT):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        clean = {}
        for mono, coeff in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != nvars:
                raise ValueError(f"monomial {mono} does not have {nvars} exponents")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in {mono}")
            c = _coerce(coeff, mode)
            if c == 0:
                continue
            if mono in clean:
                c = clean[mono] + c
                if c == 0:
                    del clean[mono]
                    continue
            clean[mono] = c
        self.nvars = nvars
        self.mode = mode
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars, mode=EXACT):
        return cls(nvars, {}, mode)

    @classmethod
    def const(cls, nvars, value, mode=EXACT):
        return cls(nvars, {(0,) * nvars: value}, mode)

    @classmethod
    def variable(cls, nvars, index, mode=EXACT):
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range for {nvars} variables")
        mono = tuple(1 if i == index else 0 for i in range(nvars))
        return cls(nvars, {mono: 1}, mode)

    @classmethod
    def _raw(cls, nvars, terms, mode):
        """Internal: terms already clean (no zeros, correct tuples, coerced)."""
        self = object.__new__(cls)
        self.nvars = nvars
        self.mode = mode
        self.terms = terms
        return self

    # -- basic queries -----------------------------------------------------

    def is_zero(self):
        return not self.terms

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        return max(map(mono_deg, self.terms), default=-1)

    def min_degree(self):
        """Smallest total degree with a nonzero term; math.inf for zero."""
        return min(map(mono_deg, self.terms), default=math.inf)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, _coerce(0, self.mode))

    def coefficient(self, mono):
        return self.terms.get(tuple(mono), _coerce(0, self.mode))

    def max_abs_coeff(self):
        return max((abs(c) for c in self.terms.values()), default=_coerce(0, self.mode))

    def is_homogeneous(self, d=None):
        degs = set(map(mono_deg, self.terms))
        if not degs:
            return True
        if len(degs) > 1:
            return False
        return d is None or degs == {d}

    def __eq__(self, other):
        return (isinstance(other, MultiPoly) and self.nvars == other.nvars
                and self.mode == other.mode and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, self.mode, tuple(sorted(self.terms.items()))))

    def sorted_terms(self):
        """Terms in descending graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda kv: (mono_deg(kv[0]), kv[0]), reverse=True)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction, float)):
            other = MultiPoly.const(self.nvars, other, self.mode)
        _check_pair(self, other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono)
            s = c if s is None else s + c
            if s == 0:
                out.pop(mono, None)
            else:
                out[mono] = s
        return MultiPoly._raw(self.nvars, out, self.mode)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return MultiPoly._raw(self.nvars, {m: -c for m, c in self.terms.items()}, self.mode)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, float)):
            other = MultiPoly.const(self.nvars, other, self.mode)
        return self.__add__(other.__neg__())

    def __rsub__(self, other):
        return self.__neg__().__add__(MultiPoly.const(self.nvars, other, self.mode))

    def scale(self, c):
        c = _coerce(c, self.mode)
        if c == 0:
            return MultiPoly.zero(self.nvars, self.mode)
        return MultiPoly._raw(self.nvars, {m: v * c for m, v in self.terms.items()}, self.mode)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, float)):
            return self.scale(other)
        _check_pair(self, other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = mono_mul(m1, m2)
                s = out.get(mono)
                s = c1 * c2 if s is None else s + c1 * c2
                if s == 0:
                    out.pop(mono, None)
                else:
                    out[mono] = s
        return MultiPoly._raw(self.nvars, out, self.mode)

    def __rmul__(self, other):
        return self.__mul__(other)

    def mul_trunc(self, other, k):
        """Product truncated to total degree <= k (the jet product)."""
        _check_pair(self, other)
        items1 = sorted(((mono_deg(m), m, c) for m, c in self.terms.items()))
        items2 = sorted(((mono_deg(m), m, c) for m, c in other.terms.items()))
        out = {}
        for d1, m1, c1 in items1:
            if d1 > k:
                break
            for d2, m2, c2 in items2:
                if d1 + d2 > k:
                    break
                mono = mono_mul(m1, m2)
                s = out.get(mono)
                s = c1 * c2 if s is None else s + c1 * c2
                if s == 0:
                    out.pop(mono, None)
                else:
                    out[mono] = s
        result = MultiPoly._raw(self.nvars, out, self.mode)
        if self.mode == FLOAT:
            result = result.truncate(k)
        return result

    def pow_trunc(self, e, k):
        """e-th power truncated to total degree <= k."""
        if e < 0:
            raise ValueError("negative exponent")
        acc = MultiPoly.const(self.nvars, 1, self.mode)
        for _ in range(e):
            acc = acc.mul_trunc(self, k)
        return acc

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponents must be natural numbers")
        acc = MultiPoly.const(self.nvars, 1, self.mode)
        for _ in range(e):
            acc = acc * self
        return acc

    # -- jets --------------------------------------------------------------

    def truncate(self, k, drop_tol=None):
        """Drop all terms of total degree > k (and tiny float coefficients)."""
        tol = FLOAT_DROP_TOL if drop_tol is None else drop_tol
        if self.mode == FLOAT:
            # `not (abs(c) <= tol)` keeps NaN coefficients visible to callers.
            out = {m: c for m, c in self.terms.items()
                   if mono_deg(m) <= k and not abs(c) <= tol}
        else:
            out = {m: c for m, c in self.terms.items() if mono_deg(m) <= k}
        return MultiPoly._raw(self.nvars, out, self.mode)

    def homogeneous_part(self, d):
        """The degree-d slice, as a HomogPoly (zero slice allowed)."""
        out = {m: c for m, c in self.terms.items() if mono_deg(m) == d}
        return HomogPoly(MultiPoly._raw(self.nvars, out, self.mode), d)

    def partial(self, index):
        """Exact partial derivative with respect to variable ``index`` (0-based)."""
        if not 0 <= index < self.nvars:
            raise ValueError(f"variable index {index} out of range for {self.nvars} variables")
        out = {}
        for mono, c in self.terms.items():
            e = mono[index]
            if e == 0:
                continue
            lowered = tuple(v - 1 if i == index else v for i, v in enumerate(mono))
            out[lowered] = c * e
        return MultiPoly._raw(self.nvars, out, self.mode)

    def rename_vars(self, index_map, new_nvars):
        """Inject into a ring with ``new_nvars`` variables; old var i -> index_map[i]."""
        out = {}
        for mono, c in self.terms.items():
            new = [0] * new_nvars
            for i, e in enumerate(mono):
                if e:
                    new[index_map[i]] += e
            key = tuple(new)
            s = out.get(key)
            s = c if s is None else s + c
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
        return MultiPoly._raw(new_nvars, out, self.mode)

    # -- evaluation and conversion ------------------------------------------

    def evaluate(self, point):
        """Value at a point given as one scalar per variable."""
        point = [_coerce(v, self.mode) for v in point]
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.nvars}")
        total = _coerce(0, self.mode)
        for mono, c in self.terms.items():
            term = c
            for e, v in zip(mono, point):
                if e:
                    term *= v ** e
            total += term
        return total

    def to_float(self):
        if self.mode == FLOAT:
            return self
        return MultiPoly(self.nvars, {m: float(c) for m, c in self.terms.items()}, FLOAT)

    def content(self):
        """Positive rational c such that self/c has coprime integer coefficients."""
        if self.mode != EXACT:
            raise ValueError("content is defined in exact mode only")
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = int_gcd(num, abs(c.numerator))
            den = den * c.denominator // int_gcd(den, c.denominator)
        return Fraction(num, den)

    # -- display -------------------------------------------------------------

    def to_string(self, names=None):
        if self.is_zero():
            return "0"
        names = names or default_var_names(self.nvars)
        pieces = []
        for mono, coeff in self.sorted_terms():
            factors = []
            for name, e in zip(names, mono):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if self.mode == EXACT:
                sign = "-" if coeff < 0 else "+"
                mag = -coeff if coeff < 0 else coeff
                if not factors:
                    body = str(mag)
                elif mag == 1:
                    body = "*".join(factors)
                else:
                    body = "*".join([str(mag)] + factors)
            else:
                sign = "-" if coeff < 0 else "+"
                mag = abs(coeff)
                body = "*".join([repr(mag)] + factors) if factors else repr(mag)
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"MultiPoly({self})"


class HomogPoly:
    """A MultiPoly together with its declared homogeneity degree.

    The zero polynomial is homogeneous of every degree.
    """

    __slots__ = ("poly", "degree")

    def __init__(self, poly, degree):
        if degree < 0:
            raise ValueError("homogeneity degree must be nonnegative")
        if not poly.is_homogeneous(degree):
            raise ValueError(f"polynomial is not homogeneous of degree {degree}")
        self.poly = poly
        self.degree = degree

    @classmethod
    def zero(cls, nvars, degree, mode=EXACT):
        return cls(MultiPoly.zero(nvars, mode), degree)

    @property
    def nvars(self):
        return self.poly.nvars

    @property
    def mode(self):
        return self.poly.mode

    def is_zero(self):
        return self.poly.is_zero()

    def evaluate(self, point):
        return self.poly.evaluate(point)

    def __eq__(self, other):
        return (isinstance(other, HomogPoly) and self.degree == other.degree
                and self.poly == other.poly)

    def __hash__(self):
        return hash((self.degree, self.poly))

    def __str__(self):
        return str(self.poly)

    def __repr__(self):
        return f"HomogPoly(deg={self.degree}, {self.poly})"


class PolyMap:
    """m-tuple of polynomials in n shared variables, with a truncation order.

    ``trunc`` is an int K (the map is a K-jet; terms above K are cut on
    construction) or None for an untruncated polynomial map.
    """

    __slots__ = ("nvars", "ncoords", "coords", "trunc")

    def __init__(self, coords, trunc=None):
        coords = tuple(coords)
        if not coords:
            raise ValueError("a PolyMap needs at least one coordinate")
        nvars = coords[0].nvars
        mode = coords[0].mode
        for c in coords[1:]:
            if c.nvars != nvars:
                raise ValueError("coordinates disagree on variable count")
            if c.mode != mode:
                raise ValueError("coordinates disagree on scalar mode")
        if trunc is not None:
            coords = tuple(c.truncate(trunc) for c in coords)
        self.nvars = nvars
        self.ncoords = len(coords)
        self.coords = coords
        self.trunc = trunc

    @property
    def mode(self):
        return self.coords[0].mode

    @classmethod
    def identity(cls, nvars, mode=EXACT, trunc=None):
        return cls([MultiPoly.variable(nvars, i, mode) for i in range(nvars)], trunc)

    @classmethod
    def zero(cls, nvars, ncoords, mode=EXACT, trunc=None):
        return cls([MultiPoly.zero(nvars, mode) for _ in range(ncoords)], trunc)

    @classmethod
    def linear(cls, matrix_rows, mode=EXACT, trunc=None):
        """The linear map x -> Ax from an iterable of matrix rows."""
        rows = [list(r) for r in matrix_rows]
        n = len(rows[0])
        coords = []
        for row in rows:
            terms = {}
            for j, a in enumerate(row):
                mono = tuple(1 if i == j else 0 for i in range(n))
                terms[mono] = a
            coords.append(MultiPoly(n, terms, mode))
        return cls(coords, trunc)

    def vanishes_at_origin(self):
        return all(c.constant_term() == 0 for c in self.coords)

    def truncate(self, k):
        return PolyMap(self.coords, k)

    def __add__(self, other):
        self._check_shape(other)
        t = _merge_trunc(self.trunc, other.trunc)
        return PolyMap([a + b for a, b in zip(self.coords, other.coords)], t)

    def __sub__(self, other):
        self._check_shape(other)
        t = _merge_trunc(self.trunc, other.trunc)
        return PolyMap([a - b for a, b in zip(self.coords, other.coords)], t)

    def scale(self, c):
        return PolyMap([p.scale(c) for p in self.coords], self.trunc)

    def _check_shape(self, other):
        if self.nvars != other.nvars or self.ncoords != other.ncoords:
            raise ValueError("map shape mismatch")
        if self.mode != other.mode:
            raise ValueError("scalar-mode mismatch")

    def __eq__(self, other):
        return (isinstance(other, PolyMap) and self.nvars == other.nvars
                and self.coords == other.coords)

    def linear_part(self):
        """Rows of the Jacobian at the origin (list of lists of scalars)."""
        rows = []
        for p in self.coords:
            row = []
            for j in range(self.nvars):
                mono = tuple(1 if i == j else 0 for i in range(self.nvars))
                row.append(p.coefficient(mono))
            rows.append(row)
        return rows

    def max_abs_coeff(self):
        return max((p.max_abs_coeff() for p in self.coords),
                   default=_coerce(0, self.mode))

    def is_identity(self, k=None, tol=None):
        """Whether this map is the identity jet (to order k, within tol in float mode)."""
        ident = PolyMap.identity(self.nvars, self.mode)
        diff = self - ident
        if k is not None:
            diff = diff.truncate(k)
        if self.mode == EXACT:
            return all(p.is_zero() for p in diff.coords)
        bound = 0.0 if tol is None else tol
        return float(diff.max_abs_coeff()) <= bound

    def to_float(self):
        if self.mode == FLOAT:
            return self
        return PolyMap([c.to_float() for c in self.coords], self.trunc)

    def evaluate(self, point):
        return [c.evaluate(point) for c in self.coords]

    def to_string(self, names=None):
        return ", ".join(c.to_string(names) for c in self.coords)

    def __str__(self):
        return f"({self.to_string()})"

    def __repr__(self):
        return f"PolyMap({self}, trunc={self.trunc})"


def _merge_trunc(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class Substituter:
    """Shared power cache for substituting the coordinates of G into polynomials.

    Builds mixed powers G_1^e1 * ... * G_n^en lazily, each from a predecessor
    by a single truncated multiplication, so repeated substitutions against
    the same inner map (e.g. all flow coefficients v_i composed with one h)
    share the work.
    """

    def __init__(self, inner, k):
        if not inner.vanishes_at_origin():
            raise ValueError("inner map must vanish at the origin for truncated composition")
        self.inner = inner
        self.k = k
        self.mode = inner.mode
        one = MultiPoly.const(inner.nvars, 1, inner.mode)
        self._cache = {(0,) * inner.ncoords: one}
        self._orders = [c.min_degree() for c in inner.coords]

    def _power(self, mono):
        cached = self._cache.get(mono)
        if cached is not None:
            return cached
        idx = next(i for i, e in enumerate(mono) if e)
        prev = tuple(e - 1 if i == idx else e for i, e in enumerate(mono))
        value = self._power(prev).mul_trunc(self.inner.coords[idx], self.k)
        self._cache[mono] = value
        return value

    def apply(self, poly):
        """j^k(poly o inner)."""
        if poly.nvars != self.inner.ncoords:
            raise ValueError("dimension mismatch in composition")
        if poly.mode != self.mode:
            raise ValueError("scalar-mode mismatch")
        acc = MultiPoly.zero(self.inner.nvars, self.mode)
        for mono, c in poly.terms.items():
            # Terms whose substituted order already exceeds k contribute nothing.
            if sum(e * o for e, o in zip(mono, self._orders) if e) > self.k:
                continue
            acc = acc + self._power(mono).scale(c)
        return acc.truncate(self.k)


def compose(outer, inner, k):
    """j^k(outer o inner) for maps with inner vanishing at the origin."""
    sub = Substituter(inner, k)
    return PolyMap([sub.apply(c) for c in outer.coords], k)


def divide_exact(f, d):
    """Quotient q with q*d = f exactly; raises NotDivisibleError otherwise.

    Works in any number of variables via graded-lex reduction by the single
    divisor d.
    """
    _check_pair(f, d)
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if f.is_zero():
        return MultiPoly.zero(f.nvars, f.mode)
    key = lambda m: (mono_deg(m), m)
    lead_d = max(d.terms, key=key)
    lead_d_coeff = d.terms[lead_d]
    rem = dict(f.terms)
    quot = {}
    while rem:
        lead_r = max(rem, key=key)
        diff = tuple(a - b for a, b in zip(lead_r, lead_d))
        if any(e < 0 for e in diff):
            raise NotDivisibleError(f"{d} does not divide {f}")
        c = rem[lead_r] / lead_d_coeff
        quot[diff] = c
        for m2, c2 in d.terms.items():
            mono = mono_mul(diff, m2)
            s = rem.get(mono, None)
            s = -c * c2 if s is None else s - c * c2
            if s == 0:
                rem.pop(mono, None)
            else:
                rem[mono] = s
    return MultiPoly(f.nvars, quot, f.mode)


def _strip_common_monomial(f, g):
    """Largest monomial dividing both; returns (mono, f/mono, g/mono)."""
    n = f.nvars
    mins = []
    for i in range(n):
        mf = min((m[i] for m in f.terms), default=0) if not f.is_zero() else None
        mg = min((m[i] for m in g.terms), default=0) if not g.is_zero() else None
        lows = [v for v in (mf, mg) if v is not None]
        mins.append(min(lows) if lows else 0)
    mono = tuple(mins)
    if all(e == 0 for e in mono):
        return mono, f, g
    shift = lambda p: MultiPoly(n, {tuple(a - b for a, b in zip(m, mono)): c
                                    for m, c in p.terms.items()}, p.mode)
    return mono, shift(f), shift(g)


def _gcd_normalize(p):
    """Scale to integer content 1 with positive lexicographically-leading coefficient."""
    if p.is_zero():
        return p
    c = p.content()
    p = p.scale(1 / c)
    lead = max(p.terms)  # plain lexicographic order on exponent tuples
    if p.terms[lead] < 0:
        p = p.scale(-1)
    return p


def _as_homog_poly(p):
    if isinstance(p, HomogPoly):
        return p.poly, p.degree
    if not p.is_homogeneous():
        raise ValueError("expected a homogeneous polynomial")
    return p, max(p.degree(), 0)


def bivariate_homog_gcd(f, g):
    """GCD of two homogeneous polynomials in two variables.

    Strips common monomial factors, dehomogenizes to one variable, runs the
    Euclidean algorithm over the rationals, and rehomogenizes.  The result is
    normalized to integer content 1 with a positive lexicographically-leading
    coefficient.
    """
    pf, _ = _as_homog_poly(f)
    pg, _ = _as_homog_poly(g)
    _check_pair(pf, pg)
    if pf.nvars != 2:
        raise ValueError("bivariate GCD needs exactly two variables")
    if pf.mode != EXACT:
        raise ValueError("GCD is computed in exact mode only")
    if pf.is_zero() and pg.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    if pf.is_zero() or pg.is_zero():
        p = _gcd_normalize(pg if pf.is_zero() else pf)
        return HomogPoly(p, max(p.degree(), 0))
    mono, pf, pg = _strip_common_monomial(pf, pg)

    def dehomog(p):
        coeffs = [Fraction(0)] * (max((m[0] for m in p.terms), default=0) + 1)
        for m, c in p.terms.items():
            coeffs[m[0]] += c
        return univar.normalize(coeffs)

    u = dehomog(pf)
    w = dehomog(pg)
    h = univar.gcd(u, w)
    d = univar.degree(h)
    terms = {}
    for i, c in enumerate(h):
        if c != 0:
            terms[(i + mono[0], d - i + mono[1])] = c
    out = _gcd_normalize(MultiPoly(2, terms, EXACT))
    return HomogPoly(out, max(out.degree(), 0))
