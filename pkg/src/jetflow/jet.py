"""Jets of flows and of shift maps.

The flow of a polynomial vector field F expands in time as
x + v_1(x) t + v_2(x) t^2/2! + ..., with v_1 = F and v_{i+1} the directional
derivative of v_i along F.  Substituting a function alpha(x) for t gives the
shift map x -> Phi(x, alpha(x)); for a field of flat order p the order bound
j^{i(p-1)}(v_i) = 0 makes every K-jet of a shift a finite computation.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction

from .config import FLOW_STEP
from .linalg import RatMatrix
from .poly import EXACT, FLOAT, MultiPoly, PolyMap, Substituter, compose


class VectorFieldJet:
    """A polynomial vector field vanishing at the origin, with its initial part.

    Derives the flat order p (smallest degree carrying a nonzero term), the
    initial part P = degree-p homogeneous slice, and for p = 1 the matrix L
    with P(x) = Lx.  Flow coefficients v_i are memoized per truncation order.
    """

    def __init__(self, field):
        if field.ncoords != field.nvars:
            raise ValueError("a vector field needs as many coordinates as variables")
        if not field.vanishes_at_origin():
            raise ValueError("vector field must vanish at the origin")
        p = min(c.min_degree() for c in field.coords)
        if p == math.inf:
            raise ValueError("the zero (flat) field has no initial part")
        self.field = field
        self.n = field.nvars
        self.mode = field.mode
        self.p = int(p)
        self.P = [c.homogeneous_part(self.p) for c in field.coords]
        if self.p == 1:
            rows = PolyMap([h.poly for h in self.P]).linear_part()
            self.L = RatMatrix(rows) if self.mode == EXACT else rows
        else:
            self.L = None
        self._vcache = {}
        self._vlock = threading.Lock()

    def initial_part_map(self):
        return PolyMap([h.poly for h in self.P])

    def flow_coeffs(self, imax, k):
        """v_1..v_imax, each truncated to order k (cached per k)."""
        with self._vlock:
            vs = self._vcache.setdefault(k, [PolyMap(self.field.coords, k)])
            while len(vs) < imax:
                prev = vs[-1]
                nxt = []
                for coord in prev.coords:
                    acc = MultiPoly.zero(self.n, self.mode)
                    for j in range(self.n):
                        acc = acc + coord.partial(j).mul_trunc(self.field.coords[j], k)
                    nxt.append(acc)
                vs.append(PolyMap(nxt, k))
            return vs[:imax]

    def __repr__(self):
        return f"VectorFieldJet(p={self.p}, field={self.field})"


class FlowJet:
    """The list v_1..v_N of time-Taylor coefficients of a flow, at x-order K."""

    def __init__(self, base, order, k, coeffs):
        self.base = base
        self.order = order
        self.k = k
        self.coeffs = coeffs


class BiJet:
    """A jet T(x, t) in n+1 variables with T(x, 0) = x.

    Truncated to degree <= xorder in the space variables and <= torder in t;
    t is the last variable of the underlying map.
    """

    def __init__(self, map_, xorder, torder):
        self.map = map_
        self.xorder = xorder
        self.torder = torder


def flow_taylor_coeffs(field, order, k):
    """Flow coefficients v_1..v_order of a vector field, truncated at k."""
    if order < 1 or k < 1:
        raise ValueError("order and truncation must be at least 1")
    return FlowJet(field, order, k, field.flow_coeffs(order, k))


def _inv_factorial(i, mode):
    return Fraction(1, math.factorial(i)) if mode == EXACT else 1.0 / math.factorial(i)


def flow_bijet(field, order, k):
    """T(x, t) = x + sum v_i(x) t^i / i!, as a BiJet."""
    vs = field.flow_coeffs(order, k)
    n = field.n
    embed = list(range(n))  # x_i keeps its slot; t is variable n
    coords = [MultiPoly.variable(n + 1, i, field.mode) for i in range(n)]
    for i, v in enumerate(vs, start=1):
        t_power = tuple([0] * n + [i])
        factor = MultiPoly(n + 1, {t_power: _inv_factorial(i, field.mode)}, field.mode)
        for j in range(n):
            lifted = v.coords[j].rename_vars(embed, n + 1)
            coords[j] = coords[j] + lifted * factor
    return BiJet(PolyMap(coords), k, order)


def bidegree_truncate(poly_map, split, xorder, torder):
    """Keep terms with degree <= xorder in the first ``split`` variables and
    <= torder in the rest."""
    coords = []
    for c in poly_map.coords:
        kept = {m: v for m, v in c.terms.items()
                if sum(m[:split]) <= xorder and sum(m[split:]) <= torder}
        coords.append(MultiPoly(c.nvars, kept, c.mode))
    return PolyMap(coords)


def _series_term_bound(p, ord_alpha, k):
    """Largest summation index i with i*(p-1) + i*ord(alpha) <= k."""
    denom = (p - 1) + ord_alpha
    if denom <= 0:
        raise ValueError("the shift series does not terminate (p=1 with constant part)")
    return k // denom


def shift_jet(field, alpha, k):
    """j^K of the shift map x -> Phi(x, alpha(x)).

    For p = 1 a nonzero alpha(0) is transcendental in exact mode (rejected);
    in float mode it is reduced through the constant-time flow map.
    """
    if alpha.nvars != field.n:
        raise ValueError("alpha must live in the field's variables")
    if alpha.mode != field.mode:
        raise ValueError("scalar-mode mismatch")
    c = alpha.constant_term()
    if c != 0 and field.p == 1:
        if field.mode == EXACT:
            raise ValueError(
                "p=1 with alpha(0) != 0 is not exactly computable; "
                "normalize the input or use float mode")
        base = flow_time_jet(field, c, k)
        return hatted_shift_jet(field, base, alpha - c, k)
    if alpha.is_zero():
        return PolyMap.identity(field.n, field.mode, k)
    imax = _series_term_bound(field.p, 0 if c != 0 else int(alpha.min_degree()), k)
    vs = field.flow_coeffs(imax, k) if imax >= 1 else []
    coords = list(PolyMap.identity(field.n, field.mode).coords)
    alpha_pow = MultiPoly.const(field.n, 1, field.mode)
    for i in range(1, imax + 1):
        alpha_pow = alpha_pow.mul_trunc(alpha, k)
        if alpha_pow.is_zero():
            break
        inv_fact = _inv_factorial(i, field.mode)
        for j in range(field.n):
            term = vs[i - 1].coords[j].mul_trunc(alpha_pow, k)
            coords[j] = coords[j] + term.scale(inv_fact)
    return PolyMap(coords, k)


def hatted_shift_jet(field, h, beta, k):
    """j^K of x -> Phi(h(x), beta(x)) for a map h vanishing at the origin.

    beta(0) != 0 is allowed whenever the jet sum is finite: always for p >= 2,
    and for p = 1 in float mode via the constant-time flow.  Exact mode with
    p = 1 and beta(0) != 0 is rejected.
    """
    if not h.vanishes_at_origin():
        raise ValueError("h must vanish at the origin")
    if beta.nvars != field.n or h.nvars != field.n or h.ncoords != field.n:
        raise ValueError("dimension mismatch")
    if beta.mode != field.mode or h.mode != field.mode:
        raise ValueError("scalar-mode mismatch")
    c = beta.constant_term()
    if c != 0 and field.p == 1:
        if field.mode == EXACT:
            raise ValueError(
                "p=1 with beta(0) != 0 is not exactly computable; "
                "normalize the input or use float mode")
        base = compose(flow_time_jet(field, c, k), h, k)
        return hatted_shift_jet(field, base, beta - c, k)
    if beta.is_zero():
        return h.truncate(k)
    imax = _series_term_bound(field.p, 0 if c != 0 else int(beta.min_degree()), k)
    vs = field.flow_coeffs(imax, k) if imax >= 1 else []
    sub = Substituter(h, k)
    coords = [coord.truncate(k) for coord in h.coords]
    beta_pow = MultiPoly.const(field.n, 1, field.mode)
    for i in range(1, imax + 1):
        beta_pow = beta_pow.mul_trunc(beta, k)
        if beta_pow.is_zero():
            break
        inv_fact = _inv_factorial(i, field.mode)
        for j in range(field.n):
            if vs[i - 1].coords[j].is_zero():
                continue
            term = sub.apply(vs[i - 1].coords[j]).mul_trunc(beta_pow, k)
            coords[j] = coords[j] + term.scale(inv_fact)
    return PolyMap(coords, k)


def flow_time_jet(field, c, k, step=None):
    """j^K of the time-c flow map, by RK4 on the jet-coefficient system.

    Float mode only: integrates d/dt J = j^K(F o J), J(0) = id, with
    ceil(|c|/step) fixed steps.  The default step is 0.01 shrunk by the
    field's largest coefficient magnitude, keeping the 4th-order error near
    1e-9 beyond unit-scale fields.
    """
    if field.mode != FLOAT:
        raise ValueError("flow_time_jet is available in float mode only")
    c = float(c)
    n = field.n
    current = PolyMap.identity(n, FLOAT, k)
    if c == 0.0:
        return current
    if step is None:
        step = FLOW_STEP / max(1.0, float(field.field.max_abs_coeff()))
    nsteps = max(1, math.ceil(abs(c) / step))
    dt = c / nsteps
    rhs = lambda jmap: compose(field.field, jmap, k)
    for _ in range(nsteps):
        k1 = rhs(current)
        k2 = rhs(current + k1.scale(dt / 2))
        k3 = rhs(current + k2.scale(dt / 2))
        k4 = rhs(current + k3.scale(dt))
        incr = k1 + k2.scale(2) + k3.scale(2) + k4
        current = (current + incr.scale(dt / 6)).truncate(k)
        if not all(math.isfinite(v) for p in current.coords for v in p.terms.values()):
            raise ValueError(f"flow integration blew up before time {c}")
    return current


def jet_inverse(h, k):
    """g with j^K(h o g) = j^K(g o h) = id, built order by order.

    Requires h(0) = 0 and an invertible linear part.
    """
    if h.ncoords != h.nvars:
        raise ValueError("only square maps can be inverted")
    if not h.vanishes_at_origin():
        raise ValueError("h must vanish at the origin")
    n = h.nvars
    rows = h.linear_part()
    if h.mode == EXACT:
        a_inv = RatMatrix(rows).inverse().rows
    else:
        import numpy as np

        mat = np.array(rows, dtype=float)
        if abs(np.linalg.det(mat)) < 1e-14:
            raise ValueError("matrix is singular")
        a_inv = np.linalg.inv(mat).tolist()
    g = PolyMap.linear(a_inv, h.mode, k)
    ident = PolyMap.identity(n, h.mode)
    for order in range(2, k + 1):
        err = compose(h, g, order) - ident.truncate(order)
        parts = [c.homogeneous_part(order).poly for c in err.coords]
        if all(p.is_zero() for p in parts):
            continue
        correction = []
        for i in range(n):
            acc = MultiPoly.zero(n, h.mode)
            for j in range(n):
                coeff = a_inv[i][j]
                if coeff == 0:
                    continue
                acc = acc + parts[j].scale(coeff)
            correction.append(acc)
        g = g - PolyMap(correction)
        g = g.truncate(k)
    return g.truncate(k)
