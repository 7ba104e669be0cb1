"""Univariate polynomial helpers over exact rationals.

A polynomial is a list of Fraction coefficients, index = power, with no
trailing zeros (the zero polynomial is the empty list).  These helpers back
the bivariate homogeneous GCD (via dehomogenization), Sturm-sequence real
root counting, and Yun's squarefree decomposition.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd


def normalize(coeffs):
    """Strip trailing zero coefficients."""
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return list(coeffs[:n])


def degree(p):
    """Degree of p, or -1 for the zero polynomial."""
    return len(p) - 1


def add(p, q):
    out = [Fraction(0)] * max(len(p), len(q))
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return normalize(out)


def neg(p):
    return [-c for c in p]


def sub(p, q):
    return add(p, neg(q))


def mul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return normalize(out)


def scale(p, c):
    if c == 0:
        return []
    return [a * c for a in p]


def divmod_exact(p, d):
    """Quotient and remainder of p by d over the rationals."""
    if not d:
        raise ZeroDivisionError("univariate division by zero polynomial")
    r = list(p)
    q = [Fraction(0)] * max(len(p) - len(d) + 1, 0)
    lead = d[-1]
    while len(r) >= len(d) and normalize(r):
        r = normalize(r)
        if len(r) < len(d):
            break
        shift = len(r) - len(d)
        factor = r[-1] / lead
        q[shift] = factor
        for i, c in enumerate(d):
            r[shift + i] -= factor * c
        r = r[:-1]
    return normalize(q), normalize(r)


def monic(p):
    if not p:
        return []
    lead = p[-1]
    return [c / lead for c in p]


def gcd(p, q):
    """Monic GCD by the Euclidean algorithm."""
    a, b = normalize(p), normalize(q)
    while b:
        _, r = divmod_exact(a, b)
        a, b = b, r
    return monic(a)


def derivative(p):
    return normalize([i * c for i, c in enumerate(p)][1:])


def evaluate(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _sign(x):
    return (x > 0) - (x < 0)


def _sign_variations(signs):
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)


def sturm_chain(p):
    """Sturm sequence p, p', -rem(...), ... (for squarefree p: standard chain)."""
    chain = [normalize(p)]
    d = derivative(p)
    if d:
        chain.append(d)
        while degree(chain[-1]) > 0:
            _, r = divmod_exact(chain[-2], chain[-1])
            if not r:
                break
            chain.append(neg(r))
    return chain


def _variations_at(chain, x):
    return _sign_variations([_sign(evaluate(f, x)) for f in chain])


def _variations_at_infinity(chain, positive):
    signs = []
    for f in chain:
        if not f:
            signs.append(0)
            continue
        s = _sign(f[-1])
        if not positive and degree(f) % 2 == 1:
            s = -s
        signs.append(s)
    return _sign_variations(signs)


def count_real_roots(p, lo=None, hi=None):
    """Number of distinct real roots of p in (lo, hi); None means +-infinity.

    Finite endpoints must not be roots of p.
    """
    p = normalize(p)
    if degree(p) <= 0:
        return 0
    chain = sturm_chain(p)
    va = _variations_at_infinity(chain, False) if lo is None else _variations_at(chain, lo)
    vb = _variations_at_infinity(chain, True) if hi is None else _variations_at(chain, hi)
    return va - vb


def squarefree_part(p):
    """p divided by gcd(p, p')."""
    p = normalize(p)
    if degree(p) <= 0:
        return monic(p)
    g = gcd(p, derivative(p))
    q, _ = divmod_exact(p, g)
    return monic(q)


def squarefree_decomposition(p):
    """Yun's algorithm: list of (multiplicity, monic factor of that multiplicity)."""
    p = normalize(p)
    out = []
    if degree(p) <= 0:
        return out
    g = gcd(p, derivative(p))
    c, _ = divmod_exact(p, g)
    dq, _ = divmod_exact(derivative(p), g)
    d = sub(dq, derivative(c))
    k = 1
    while degree(c) > 0:
        a = gcd(c, d)
        if degree(a) > 0:
            out.append((k, monic(a)))
        c, _ = divmod_exact(c, a)
        dq, _ = divmod_exact(d, a)
        d = sub(dq, derivative(c))
        k += 1
    return out


def integerize(p):
    """Scale p by a positive rational so coefficients are coprime integers."""
    p = normalize(p)
    if not p:
        return []
    denom_lcm = 1
    for c in p:
        denom_lcm = denom_lcm * c.denominator // int_gcd(denom_lcm, c.denominator)
    ints = [int(c * denom_lcm) for c in p]
    g = 0
    for v in ints:
        g = int_gcd(g, abs(v))
    return [v // g for v in ints]


def _divisors(n):
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            out.append(n // d)
        d += 1
    return sorted(set(out))


def rational_roots(p):
    """All rational roots of p with multiplicity 1 each (p assumed squarefree)."""
    ints = integerize(p)
    if not ints or len(ints) == 1:
        return []
    roots = []
    if ints[0] == 0:
        roots.append(Fraction(0))
        while ints and ints[0] == 0:
            ints = ints[1:]
    if len(ints) <= 1:
        return roots
    for num in _divisors(ints[0]):
        for den in _divisors(ints[-1]):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if cand not in roots and evaluate([Fraction(c) for c in ints], cand) == 0:
                    roots.append(cand)
    return sorted(roots)
