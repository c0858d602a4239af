import random
from fractions import Fraction

import pytest

from ravcalc.rings import LaurentSeries, MultiPoly, RatFrac


def z(n, i):
    return RatFrac.var(n, i)


def rand_poly(rng, nvars, deg=2, nterms=4):
    p = MultiPoly(nvars)
    for _ in range(nterms):
        exp = tuple(rng.randint(0, deg) for _ in range(nvars))
        c = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        p = p + MultiPoly(nvars, {exp: c})
    return p


def rand_ratfrac(rng, nvars, max_e=2):
    den = {}
    for i in range(nvars):
        for j in range(i + 1, nvars):
            if rng.random() < 0.4:
                den[(i, j)] = rng.randint(1, max_e)
    return RatFrac(nvars, rand_poly(rng, nvars), den)


def rand_point(rng, nvars):
    while True:
        pt = [Fraction(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(nvars)]
        if len({p for p in pt}) == nvars:
            return pt


def test_normalize_exact_cancellation():
    # ((z1-z2)^2) / (z1-z2) -> (z1-z2)
    n = 2
    d = MultiPoly.var(n, 0) - MultiPoly.var(n, 1)
    f = RatFrac(n, d * d, {(0, 1): 1})
    assert f.den == {}
    assert f.num == d


def test_normalize_difference_of_squares():
    n = 2
    num = MultiPoly.var(n, 0) * MultiPoly.var(n, 0) - MultiPoly.var(n, 1) * MultiPoly.var(n, 1)
    f = RatFrac(n, num, {(0, 1): 1})
    assert f.den == {}
    assert f.num == MultiPoly.var(n, 0) + MultiPoly.var(n, 1)


def test_normalize_evaluation_oracle():
    rng = random.Random(7)
    n = 3
    d01 = MultiPoly.var(n, 0) - MultiPoly.var(n, 1)
    for _ in range(20):
        f = rand_ratfrac(rng, n)
        g = RatFrac(n, f.num * d01, {**f.den, (0, 1): f.den.get((0, 1), 0) + 1})
        pt = rand_point(rng, n)
        assert g.eval(pt) == f.eval(pt)


def test_normalization_idempotent():
    rng = random.Random(11)
    for _ in range(30):
        f = rand_ratfrac(rng, 3)
        g = RatFrac(f.nvars, f.num, f.den)
        assert g == f


def test_add_antisymmetry_and_unit():
    n = 2
    a = RatFrac.diff_inverse(n, 0, 1)   # 1/(z1-z2)
    b = RatFrac.diff_inverse(n, 1, 0)   # 1/(z2-z1)
    assert not (a + b)
    d = z(n, 0) - z(n, 1)
    assert d * a == RatFrac.const(n, 1)


def test_ring_axioms_by_evaluation():
    rng = random.Random(3)
    n = 3
    for _ in range(25):
        a, b, c = (rand_ratfrac(rng, n) for _ in range(3))
        pt = rand_point(rng, n)
        assert ((a + b) + c).eval(pt) == (a + (b + c)).eval(pt)
        assert (a * b).eval(pt) == (b * a).eval(pt)
        assert ((a * b) * c).eval(pt) == (a * (b * c)).eval(pt)
        assert (a * (b + c)).eval(pt) == (a * b + a * c).eval(pt)


def test_is_regular_in():
    n = 2
    f = z(n, 0) * RatFrac.diff_inverse(n, 0, 1)
    assert not f.is_regular_in(0, 1)
    assert (z(n, 0) + z(n, 1)).is_regular_in(0, 1)
    d = MultiPoly.var(n, 0) - MultiPoly.var(n, 1)
    g = RatFrac(n, d, {(0, 1): 1})   # (z1-z2)/(z1-z2) = 1
    assert g == RatFrac.const(n, 1)
    assert g.is_regular_in(0, 1)
    with pytest.raises(ValueError):
        f.is_regular_in(1, 1)


def test_regularity_stable_under_poly_multiple():
    rng = random.Random(19)
    n = 3
    for _ in range(20):
        f = rand_ratfrac(rng, n)
        p = RatFrac(n, rand_poly(rng, n))
        if not p:
            continue
        for (i, j) in ((0, 1), (0, 2), (1, 2)):
            if f.is_regular_in(i, j):
                assert (p * f).is_regular_in(i, j)


def test_vanishes_at_infinity():
    n = 2  # variables z1, w
    one_over_w_z1 = RatFrac.diff_inverse(n, 1, 0)         # 1/(w-z1)
    assert one_over_w_z1.vanishes_at_infinity_in()
    w_over = z(n, 1) * one_over_w_z1                       # w/(w-z1)
    assert not w_over.vanishes_at_infinity_in()
    n = 3  # z1, z2, w
    f = (z(n, 0) - z(n, 1)) * RatFrac.diff_inverse(n, 2, 0) * RatFrac.diff_inverse(n, 2, 1)
    assert f.vanishes_at_infinity_in()


def test_laurent_expand_geometric():
    # 1/(w-z_i), i != s: sum_k (-1)^k (z_s - z_i)^{-(k+1)} (w-z_s)^k
    n = 3  # z1, z2, w
    f = RatFrac.diff_inverse(n, 2, 1)   # 1/(w - z2)
    ser = f.laurent_expand(0, 4)        # expand at s = z1
    assert ser.prec == 4
    for k in range(4):
        expect = Fraction((-1) ** k) * RatFrac.diff_inverse(2, 0, 1, k + 1)
        assert ser.terms[k] == expect


def test_laurent_expand_local_pole_and_shift():
    n = 2  # z1, w
    f = RatFrac.diff_inverse(n, 1, 0)   # 1/(w-z1)
    ser = f.laurent_expand(0, 3)
    assert set(ser.terms) == {-1}
    assert ser.terms[-1] == RatFrac.const(1, 1)
    w = z(n, 1)
    ser = w.laurent_expand(0, 3)        # w = z1 + (w-z1)
    assert ser.terms[0] == RatFrac.var(1, 0)
    assert ser.terms[1] == RatFrac.const(1, 1)


def test_laurent_expand_empty_when_under_precision():
    n = 2
    f = RatFrac.diff_inverse(n, 1, 0, 2)   # 1/(w-z1)^2
    ser = f.laurent_expand(0, -2)
    assert ser.prec == -2 and not ser.terms


def test_laurent_expand_is_ring_hom():
    rng = random.Random(23)
    n = 3
    for _ in range(15):
        f = rand_ratfrac(rng, n)
        g = rand_ratfrac(rng, n)
        K = 4
        sf, sg, sfg = f.laurent_expand(0, K), g.laurent_expand(0, K), (f * g).laurent_expand(K=K, s=0)
        prod = sf * sg
        cut = sfg.truncate(prod.prec if prod.prec is not None else K)
        assert prod == cut


def test_laurent_ops_basic():
    inv = LaurentSeries("t", {-1: Fraction(1)})
    lin = LaurentSeries("t", {1: Fraction(1)})
    assert (inv * lin).terms == {0: Fraction(1)}
    assert inv.derive().terms == {-2: Fraction(-1)}
    assert inv.derive().var == "t"


def test_laurent_mul_matches_convolution_oracle():
    rng = random.Random(5)
    for _ in range(25):
        ta = {k: Fraction(rng.randint(-4, 4)) for k in range(-3, rng.randint(0, 4))}
        tb = {k: Fraction(rng.randint(-4, 4)) for k in range(-2, rng.randint(0, 5))}
        Ka, Kb = rng.randint(2, 6), rng.randint(2, 6)
        a = LaurentSeries("t", ta, Ka)
        b = LaurentSeries("t", tb, Kb)
        prod = a * b
        # direct convolution, honoring the precision rule
        prec = min(Ka + b.min_degree(), Kb + a.min_degree())
        conv = {}
        for k1, c1 in a.terms.items():
            for k2, c2 in b.terms.items():
                if k1 + k2 < prec:
                    conv[k1 + k2] = conv.get(k1 + k2, Fraction(0)) + c1 * c2
        conv = {k: c for k, c in conv.items() if c}
        assert prod.prec == prec and prod.terms == conv


def test_precision_propagation_never_silently_lost():
    a = LaurentSeries("t", {0: Fraction(1)}, prec=3)
    b = LaurentSeries("t", {-2: Fraction(1)}, prec=5)
    assert (a + b).prec == 3
    assert (a * b).prec == min(3 + (-2), 5 + 0)


def test_render():
    n = 2
    f = RatFrac.diff_inverse(n, 0, 1) + RatFrac.const(n, 1)
    assert "z1-z2" in f.render()
    s = LaurentSeries("x", {0: 1, 2: 3}, prec=5)
    assert s.render().endswith("O(x^5)")
