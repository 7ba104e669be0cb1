import math
import random
from fractions import Fraction

import numpy as np
import pytest
from scipy.linalg import expm

from jetflow.errors import InconsistentJetError, NotOnSubgroupError
from jetflow.jet import VectorFieldJet, hatted_shift_jet, shift_jet
from jetflow.linalg import RatMatrix
from jetflow.poly import EXACT, FLOAT, HomogPoly, MultiPoly, PolyMap
from jetflow.recover import (delta0_linear, divide_by_initial_part,
                             recover_shift_jet, verify_residual)

from conftest import rand_poly


def P_example():
    x = MultiPoly.variable(2, 0)
    y = MultiPoly.variable(2, 1)
    return [HomogPoly(x.scale(-4), 1), HomogPoly(y.scale(3), 1)], x, y


def test_divide_by_initial_part_examples():
    p_vec, x, y = P_example()
    v = [(x ** 3 * y).scale(-4), (x ** 2 * y ** 2).scale(3)]
    omega = divide_by_initial_part(v, p_vec)
    assert omega == HomogPoly(x ** 2 * y, 3)

    with pytest.raises(InconsistentJetError):
        divide_by_initial_part([x ** 3, x ** 3], p_vec)

    u = MultiPoly.variable(1, 0)
    omega1 = divide_by_initial_part([(u ** 3).scale(3)], [HomogPoly(u ** 2, 2)])
    assert omega1 == HomogPoly(u.scale(3), 1)


def test_divide_by_initial_part_zero_slice():
    p_vec, x, y = P_example()
    omega = divide_by_initial_part([MultiPoly.zero(2), MultiPoly.zero(2)], p_vec, l=2)
    assert omega.is_zero() and omega.degree == 2


def test_delta0_examples():
    rot = [[0.0, -1.0], [1.0, 0.0]]
    a = expm(np.array(rot) * 0.3)
    assert abs(delta0_linear(a, rot) - 0.3) < 1e-9
    assert abs(delta0_linear(np.eye(2), rot)) < 1e-12
    t = delta0_linear([[2.0, 0.0], [0.0, 0.5]], [[1.0, 0.0], [0.0, -1.0]])
    assert abs(t - math.log(2)) < 1e-9


def test_delta0_circle_prefers_smallest_t():
    # rotation by 4.0: the representative closest to zero is 4.0 - 2*pi
    rot = [[0.0, -1.0], [1.0, 0.0]]
    t = delta0_linear(expm(np.array(rot) * 4.0), rot)
    assert abs(t - (4.0 - 2 * math.pi)) < 1e-9


def test_delta0_not_on_subgroup():
    rot = [[0.0, -1.0], [1.0, 0.0]]
    with pytest.raises(NotOnSubgroupError):
        delta0_linear([[2.0, 0.0], [0.0, 3.0]], rot)
    with pytest.raises(ValueError):
        delta0_linear(np.eye(2), [[0.0, 0.0], [0.0, 0.0]])


def test_recover_round_trip_example(quartic_field):
    x = MultiPoly.variable(2, 0)
    y = MultiPoly.variable(2, 1)
    alpha = MultiPoly.const(2, Fraction(1, 2)) + x - (y ** 2).scale(2)
    h = shift_jet(quartic_field, alpha, 10)
    res = recover_shift_jet(quartic_field, h, 10)
    assert res.mode == EXACT
    assert res.residual_ok
    assert res.omegas[0].poly == MultiPoly.const(2, Fraction(1, 2))
    assert res.omegas[1].poly == x
    assert res.omegas[2].poly == (y ** 2).scale(-2)
    assert all(res.omegas[l].is_zero() for l in range(3, 8))
    assert verify_residual(quartic_field, h, res.omegas, 10)


def test_recover_identity(quartic_field):
    res = recover_shift_jet(quartic_field, PolyMap.identity(2), 8)
    assert res.residual_ok
    assert all(om.is_zero() for om in res.omegas)


def test_recover_float_p1_round_trip():
    rows = [[-4.0, 0.0], [0.0, 3.0]]
    field = VectorFieldJet(PolyMap.linear(rows, FLOAT))
    x = MultiPoly.variable(2, 0, FLOAT)
    base = PolyMap.linear(expm(np.array(rows) * 0.25).tolist(), FLOAT, 6)
    h = hatted_shift_jet(field, base, x * x, 6)
    res = recover_shift_jet(field, h, 6)
    assert res.residual_ok
    assert abs(res.omegas[0].poly.constant_term() - 0.25) < 1e-6
    w2 = res.omegas[2].poly
    assert abs(w2.coefficient((2, 0)) - 1.0) < 1e-6
    assert abs(w2.coefficient((1, 1))) < 1e-6
    assert abs(w2.coefficient((0, 2))) < 1e-6


def test_recover_float_p3_round_trip(quartic_field):
    field = VectorFieldJet(quartic_field.field.to_float())
    x = MultiPoly.variable(2, 0, FLOAT)
    y = MultiPoly.variable(2, 1, FLOAT)
    alpha = MultiPoly.const(2, 0.5, FLOAT) + x - (y * y).scale(2.0)
    h = shift_jet(field, alpha, 8)
    res = recover_shift_jet(field, h, 8)
    assert res.mode == FLOAT
    assert res.residual_ok
    assert abs(res.omegas[0].poly.constant_term() - 0.5) < 1e-9
    assert abs(res.omegas[1].poly.coefficient((1, 0)) - 1.0) < 1e-9
    assert abs(res.omegas[2].poly.coefficient((0, 2)) + 2.0) < 1e-9


def test_recover_round_trip_three_variables():
    # the recovery loop is dimension-generic even though star checks are not
    x = MultiPoly.variable(3, 0)
    y = MultiPoly.variable(3, 1)
    z = MultiPoly.variable(3, 2)
    field = VectorFieldJet(PolyMap([y ** 2, z ** 2, x ** 2]))
    alpha = MultiPoly.const(3, Fraction(1, 3)) + x - (y * z).scale(2)
    h = shift_jet(field, alpha, 6)
    res = recover_shift_jet(field, h, 6)
    assert res.residual_ok
    for l in range(6 - field.p + 1):
        assert res.omegas[l].poly == alpha.homogeneous_part(l).poly
    assert verify_residual(field, h, res.omegas, 6)


def test_recover_float_p1_circle_subgroup():
    # rotation generator: {e^{Lt}} is a circle; recovery picks the small branch
    rows = [[0.0, -1.0], [1.0, 0.0]]
    field = VectorFieldJet(PolyMap.linear(rows, FLOAT))
    x = MultiPoly.variable(2, 0, FLOAT)
    base = PolyMap.linear(expm(np.array(rows) * 0.4).tolist(), FLOAT, 6)
    h = hatted_shift_jet(field, base, x * x, 6)
    res = recover_shift_jet(field, h, 6)
    assert res.residual_ok
    assert abs(res.omegas[0].poly.constant_term() - 0.4) < 1e-6
    w2 = res.omegas[2].poly
    assert abs(w2.coefficient((2, 0)) - 1.0) < 1e-6


def test_recover_exact_p1_requires_identity_linear_part():
    rows = [[Fraction(-4), Fraction(0)], [Fraction(0), Fraction(3)]]
    field = VectorFieldJet(PolyMap.linear(rows))
    x = MultiPoly.variable(2, 0)
    h = shift_jet(field, x ** 2, 6)  # alpha(0) = 0, so j^1(h) = id
    res = recover_shift_jet(field, h, 6)
    assert res.residual_ok
    assert res.omegas[2].poly == x ** 2
    bad = PolyMap.linear([[Fraction(2), Fraction(0)], [Fraction(0), Fraction(1)]])
    with pytest.raises(ValueError):
        recover_shift_jet(field, bad, 4)


def test_recover_inconsistent_reports_order(quartic_field):
    x = MultiPoly.variable(2, 0)
    h = shift_jet(quartic_field, x, 8)
    # inject junk at degree 5 that is not P * omega_2
    junk = PolyMap([x ** 5, MultiPoly.zero(2)])
    broken = h + junk
    with pytest.raises(InconsistentJetError) as err:
        recover_shift_jet(quartic_field, broken, 8)
    assert err.value.order == 2


def test_verify_residual_cases(quartic_field):
    x = MultiPoly.variable(2, 0)
    h = shift_jet(quartic_field, x, 8)
    zeros = [HomogPoly.zero(2, l) for l in range(6)]
    assert not verify_residual(quartic_field, h, zeros, 8)
    # K below flat order with nothing to match
    assert verify_residual(quartic_field, PolyMap.identity(2), [], 2)


def test_incremental_matches_batch(quartic_field):
    rng = random.Random(61)
    k = 9
    p = quartic_field.p
    for _ in range(4):
        alpha = rand_poly(rng, 2, 5)
        h = shift_jet(quartic_field, alpha, k)
        res = recover_shift_jet(quartic_field, h, k)
        running = h
        partial = MultiPoly.zero(2)
        for omega in res.omegas:
            running = hatted_shift_jet(quartic_field, running, -omega.poly, k)
            partial = partial + omega.poly
            assert running == hatted_shift_jet(quartic_field, h, -partial, k)


def test_structure_identity_before_extraction(quartic_field):
    # after removing omega_0..omega_l the jet matches the identity through p+l
    rng = random.Random(67)
    k = 9
    p = quartic_field.p
    ident = PolyMap.identity(2)
    alpha = rand_poly(rng, 2, 4)
    h = shift_jet(quartic_field, alpha, k)
    res = recover_shift_jet(quartic_field, h, k)
    running = h
    for l, omega in enumerate(res.omegas):
        diff = running - ident
        for deg in range(1, p + l):
            assert all(c.homogeneous_part(deg).is_zero() for c in diff.coords)
        running = hatted_shift_jet(quartic_field, running, -omega.poly, k)


def test_shift_condition_equivalence(quartic_field):
    # (D) j^K(h) = j^K(F_alpha)  iff  (E) j^K(Phi(h, -alpha)) = id
    rng = random.Random(71)
    k = 7
    ident = PolyMap.identity(2, trunc=k)
    for _ in range(5):
        alpha = rand_poly(rng, 2, 4, min_deg=1)
        h = shift_jet(quartic_field, alpha, k)
        assert hatted_shift_jet(quartic_field, h, -alpha, k) == ident
        other = rand_poly(rng, 2, 4, min_deg=1)
        if shift_jet(quartic_field, other, k) != h:
            assert hatted_shift_jet(quartic_field, h, -other, k) != ident


def test_unique_or_inconsistent_never_parametric(quartic_field):
    rng = random.Random(73)
    p_vec = quartic_field.P
    from conftest import rand_homog

    for _ in range(10):
        l = rng.randint(0, 3)
        omega = rand_homog(rng, 2, l, nonzero=False)
        v = [c.poly * omega.poly for c in p_vec]
        got = divide_by_initial_part(v, p_vec, l=l)
        assert got.poly == omega.poly


def test_recover_k_below_p_rejected(quartic_field):
    with pytest.raises(ValueError):
        recover_shift_jet(quartic_field, PolyMap.identity(2), 2)


def test_round_trip_on_random_nondivisible_fields():
    # random reduced Hamiltonian fields carry the non-divisibility property
    from jetflow.fields import check_star, reduced_hamiltonian

    rng = random.Random(83)
    x = MultiPoly.variable(2, 0)
    y = MultiPoly.variable(2, 1)
    done = 0
    while done < 5:
        g = (x ** 2 + (y ** 2).scale(rng.randint(1, 4)))
        if rng.random() < 0.5:
            g = g * (x.scale(rng.randint(1, 3)) + y.scale(rng.randint(-3, 3)))
        if rng.random() < 0.5:
            g = g * (x ** 2 + (y ** 2).scale(rng.randint(1, 4)))
        _, fmap = reduced_hamiltonian(g)
        field = VectorFieldJet(fmap)
        if field.p < 2 or check_star(field).nondivisible != "yes":
            continue
        k = field.p + rng.randint(2, 4)
        alpha = rand_poly(rng, 2, 4)
        h = shift_jet(field, alpha, k)
        res = recover_shift_jet(field, h, k)
        assert res.residual_ok
        for l in range(k - field.p + 1):
            assert res.omegas[l].poly == alpha.homogeneous_part(l).poly
        done += 1


def test_divisible_initial_part_still_reported():
    # P = (x^2, xy) is divisible by x; a true shift still recovers cleanly,
    # and the result is reported rather than reinterpreted
    x = MultiPoly.variable(2, 0)
    y = MultiPoly.variable(2, 1)
    field = VectorFieldJet(PolyMap([x ** 2, x * y]))
    alpha = y
    h = shift_jet(field, alpha, 5)
    res = recover_shift_jet(field, h, 5)
    assert res.residual_ok
    assert res.omegas[1].poly == y
