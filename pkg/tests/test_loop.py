import random
from fractions import Fraction

import pytest

from ravcalc import loop
from ravcalc.loop import FieldElement, Gen, sl2


L = sl2()
E, H, F = 0, 1, 2


def gen_pool():
    """Six lowering generators used across the consistency tests."""
    return [
        Gen(E, -1, "e1", 0),   # e x dv/z
        Gen(F, -1, "e1", 0),   # f x dv/z
        Gen(H, -2, "e1", 1),   # h x v dv / z^2
        Gen(E, -1, "e0", 0),   # e x v(1-v)/z
        Gen(F, -2, "e0", 0),   # f x v(1-v)/z^2
        Gen(H, -1, "e0", 1),   # h x v^2(1-v)/z
    ]


def rand_combo(rng, pool, size=2):
    out = {}
    for g in rng.sample(pool, size):
        out[g] = Fraction(rng.randint(-3, 3) or 1)
    return out


def test_lie_data_checks():
    assert L.bracket(E, F) == {H: Fraction(1)}
    assert L.bracket(F, E) == {H: Fraction(-1)}
    with pytest.raises(ValueError):
        loop.LieData(["a", "b"], {(0, 1): {0: Fraction(1)}, (1, 0): {0: Fraction(1)}})


def test_bracket_examples():
    # odd square: [e x dv/z, f x dv/z] has dv ^ dv = 0
    x = Gen(E, -1, "e1", 0)
    y = Gen(F, -1, "e1", 0)
    assert loop.bracket_gens(L, x, y) == {}
    # [e x 1, f x dv/z] = h x dv/z
    p = Gen(E, 0, "f0", 0)
    assert loop.bracket_gens(L, p, y) == {Gen(H, -1, "e1", 0): Fraction(1)}


def test_bracket_graded_antisymmetry_and_jacobi():
    rng = random.Random(71)
    pool = gen_pool() + [Gen(E, 0, "f0", 0), Gen(H, 1, "f1", 1), Gen(F, 2, "f0", 2)]
    for _ in range(60):
        x, y, z = (rng.choice(pool) for _ in range(3))
        xy = loop.bracket_gens(L, x, y)
        yx = loop.bracket_gens(L, y, x)
        sign = Fraction((-1) ** (x.parity * y.parity))
        flipped = {g: -sign * c for g, c in yx.items()}
        assert xy == flipped
        # graded Jacobi: [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
        lhs = loop.bracket(L, {x: Fraction(1)}, loop.bracket_gens(L, y, z))
        r1 = loop.bracket(L, loop.bracket_gens(L, x, y), {z: Fraction(1)})
        r2 = loop.bracket(L, {y: Fraction(1)}, loop.bracket_gens(L, x, z))
        sxy = Fraction((-1) ** (x.parity * y.parity))
        rhs = dict(r1)
        loop._merge(rhs, r2, sxy)
        assert lhs == rhs


def test_act_examples():
    vac = {(): Fraction(1)}
    # raising on the vacuum
    assert loop.act_gen(L, Gen(E, 1, "f0", 0), vac) == {}
    # (e x 1)(f x dv/z)|0> = (h x dv/z)|0>
    y = Gen(F, -1, "e1", 0)
    st = loop.act_gen(L, y, vac)
    out = loop.act_gen(L, Gen(E, 0, "f0", 0), st)
    assert out == {(Gen(H, -1, "e1", 0),): Fraction(1)}
    # odd generator squared is zero
    x = Gen(E, -1, "e1", 0)
    assert loop.act_gen(L, x, loop.act_gen(L, x, vac)) == {}


def test_straightening_consistency_random():
    # X.(Y.v) = (-1)^{|X||Y|} Y.(X.v) + [X,Y].v for lowering X, Y
    rng = random.Random(73)
    pool = gen_pool()
    for _ in range(40):
        x, y = rng.choice(pool), rng.choice(pool)
        base = {(): Fraction(1)}
        for g in rng.sample(pool, rng.randint(0, 2)):
            base = loop.act_gen(L, g, base)
        lhs = loop.act_gen(L, x, loop.act_gen(L, y, base))
        rhs = loop.act_gen(L, y, loop.act_gen(L, x, base))
        sign = Fraction((-1) ** (x.parity * y.parity))
        expected = {w: sign * c for w, c in rhs.items()}
        loop._merge(expected, loop.act(L, loop.bracket_gens(L, x, y), base), Fraction(1))
        expected = {w: c for w, c in expected.items() if c}
        assert lhs == expected


def test_pbw_words_sorted():
    rng = random.Random(79)
    pool = gen_pool()
    for _ in range(30):
        vec = {(): Fraction(1)}
        for g in (rng.choice(pool) for _ in range(3)):
            vec = loop.act_gen(L, g, vec)
        for word in vec:
            keys = [g.sort_key() for g in word]
            assert keys == sorted(keys)
            for a, b in zip(word, word[1:]):
                if a == b:
                    assert not a.parity


def test_differential_examples():
    vac = {(): Fraction(1)}
    st = loop.act_gen(L, Gen(E, -1, "e1", 0), vac)
    assert loop.differential(L, st) == {}
    st0 = loop.act_gen(L, Gen(E, -1, "e0", 0), vac)
    d = loop.differential(L, st0)
    assert d == {
        (Gen(E, -1, "e1", 0),): Fraction(1),
        (Gen(E, -1, "e1", 1),): Fraction(-2),
    }


def test_differential_squares_to_zero():
    rng = random.Random(83)
    pool = gen_pool()
    for _ in range(100):
        vec = {(): Fraction(1)}
        for g in (rng.choice(pool) for _ in range(rng.randint(1, 3))):
            vec = loop.act_gen(L, g, vec)
        assert loop.differential(L, loop.differential(L, vec)) == {}


def test_plus_modes_pole_one():
    x = Gen(E, -1, "e1", 0)
    for j in range(5):
        g, c = loop.plus_mode(x, j)
        assert g == Gen(E, -1 - j, "e1", 0) and c == 1


def test_minus_modes_pole_one_dv():
    # (a x dv/z)_-(x) = sum_k (a x z^k) d(1-u) / x^{k+1}, d(1-u) = -du
    x = Gen(E, -1, "e1", 0)
    assert loop.minus_mode_ufactor(x) == {(0, 1): Fraction(-1)}
    for j in range(4):
        dx, g, c = loop.minus_mode(x, j)
        assert dx == -j - 1 and g == Gen(E, j, "f0", 0) and c == 1


def test_mode_derivative_rule():
    # raising the pole order differentiates with d/dx and a minus sign:
    # the pole-2 plus modes are -(d/dx) of the pole-1 modes termwise
    x1 = Gen(E, -1, "e0", 1)
    x2 = Gen(E, -2, "e0", 1)
    series1 = {j: loop.plus_mode(x1, j) for j in range(6)}
    # -(d/dx): coefficient of x^j becomes -(j+1) coeff at x^{j+1} pulled down
    for j in range(5):
        g2, c2 = loop.plus_mode(x2, j)
        g1, c1 = series1[j + 1]
        assert g2 == g1
        assert c2 == -(-(j + 1)) * c1  # = (j+1), same generator
    m2 = [loop.minus_mode(x2, j) for j in range(4)]
    for j, (dx, g, c) in enumerate(m2):
        assert dx == -j - 2 and g == Gen(E, j, "f0", 0)
        assert c == -(j + 1)


def test_y_identity_on_vacuum():
    B = loop.state([(Fraction(1), [Gen(F, -1, "e1", 0)])], L)
    out = loop.y_recursive(L, {(): Fraction(1)}, B, 5)
    assert out.state_part() == B
    assert all(k[0] == 0 and k[1] == 0 and k[2] == 0 for k in out.terms)


def test_y_single_lowering_on_vacuum():
    # Y((a x dv/z)|0>; x)|0> = sum_{0<=k<K} x^k (a x dv/z^{k+1}) |0>
    A = {(Gen(E, -1, "e1", 0),): Fraction(1)}
    out = loop.y_recursive(L, A, {(): Fraction(1)}, 4)
    expect = {}
    for k in range(4):
        expect[(k, 0, 0, (Gen(E, -1 - k, "e1", 0),))] = Fraction(1)
    assert out.terms == expect


def test_y_boundary_predicate_holds():
    rng = random.Random(89)
    pool = gen_pool()
    for _ in range(20):
        A = loop.state([(Fraction(1), rng.sample(pool, rng.randint(1, 2)))], L)
        B = loop.state([(Fraction(1), rng.sample(pool, rng.randint(0, 2)))], L)
        if not A or not B:
            continue
        out = loop.y_recursive(L, A, B, 4)
        assert loop.field_boundary_ok(out)


def test_y_smoothness_bounded_poles():
    rng = random.Random(97)
    pool = gen_pool()
    for _ in range(15):
        a_gens = rng.sample(pool, 2)
        b_gens = rng.sample(pool, rng.randint(0, 2))
        A = loop.state([(Fraction(1), a_gens)], L)
        B = loop.state([(Fraction(1), b_gens)], L)
        if not A:
            continue
        out = loop.y_recursive(L, A, B, 3)
        bound = sum(-g.power for g in a_gens) + sum(-g.power for g in b_gens)
        assert out.min_x() >= -bound


def test_unshuffle_sign_examples_and_oracle():
    assert loop.unshuffle_sign([0, 0, 0], (1,), (0, 2)) == 1
    # two odds, mu = (2nd), nu = (1st): one odd transposition
    assert loop.unshuffle_sign([1, 1], (1,), (0,)) == -1
    rng = random.Random(101)
    for _ in range(50):
        n = rng.randint(1, 5)
        parities = [rng.randint(0, 1) for _ in range(n)]
        mus = sorted(rng.sample(range(n), rng.randint(0, n)))
        nus = [i for i in range(n) if i not in mus]
        target = list(mus) + list(reversed(nus))
        # bubble-sort oracle: sort target back to identity, counting odd swaps
        arr = list(target)
        sign = 1
        for i in range(len(arr)):
            for j in range(len(arr) - 1 - i):
                if arr[j] > arr[j + 1]:
                    if parities[arr[j]] and parities[arr[j + 1]]:
                        sign = -sign
                    arr[j], arr[j + 1] = arr[j + 1], arr[j]
        assert loop.unshuffle_sign(parities, tuple(mus), tuple(nus)) == sign


def test_explicit_equals_recursive_small():
    rng = random.Random(103)
    pool = gen_pool()
    for _ in range(12):
        n = rng.randint(0, 3)
        word_gens = [rng.choice(pool) for _ in range(n)]
        A = loop.state([(Fraction(1), word_gens)], L)
        B = loop.state([(Fraction(1), rng.sample(pool, rng.randint(0, 2)))], L)
        if not A:
            continue
        K = 4
        assert loop.y_recursive(L, A, B, K).terms == loop.y_explicit(L, A, B, K).terms


def test_y_chain_map():
    # d(Y(A;x)B) = Y(dA;x)B + (-1)^{|A|} Y(A;x) dB on sample states
    rng = random.Random(107)
    pool = gen_pool()
    for _ in range(10):
        a_gens = [rng.choice(pool) for _ in range(rng.randint(1, 2))]
        A = loop.state([(Fraction(1), a_gens)], L)
        B = loop.state([(Fraction(1), [rng.choice(pool)])], L)
        if not A or not B:
            continue
        parity = loop.word_parity(tuple(a_gens))
        K = 4
        lhs = loop.field_differential(L, loop.y_recursive(L, A, B, K))
        dA = loop.differential(L, A)
        dB = loop.differential(L, B)
        rhs = FieldElement({}, K)
        if dA:
            rhs = rhs + loop.y_recursive(L, dA, B, K)
        if dB:
            rhs = rhs + loop.y_recursive(L, A, dB, K).scale(Fraction((-1) ** parity))
        assert lhs.terms == rhs.terms


def test_classical_current_two_point():
    # Y(a_{-1}|0>; x) b_{-1}|0> = sum_k x^k a_{-k-1} b_{-1} |0> + x^{-1} [a,b]_{-1} |0>
    a = Gen(E, -1, "cl")
    b = Gen(F, -1, "cl")
    A = {(a,): Fraction(1)}
    B = {(b,): Fraction(1)}
    out = loop.y_recursive(L, A, B, 3)
    expect = {(-1, 0, 0, (Gen(H, -1, "cl"),)): Fraction(1)}
    for k in range(3):
        w = loop.act_gen(L, Gen(E, -1 - k, "cl"), B)
        for word, c in w.items():
            expect[(k, 0, 0, word)] = c
    assert out.terms == expect


def test_classical_explicit_equals_recursive():
    rng = random.Random(109)
    pool = [Gen(E, -1, "cl"), Gen(F, -1, "cl"), Gen(H, -2, "cl"), Gen(E, -2, "cl")]
    for _ in range(12):
        n = rng.randint(0, 3)
        A = loop.state([(Fraction(1), [rng.choice(pool) for _ in range(n)])], L)
        B = loop.state([(Fraction(1), rng.sample(pool, rng.randint(0, 2)))], L)
        if not A:
            continue
        assert loop.y_recursive(L, A, B, 4).terms == loop.y_explicit(L, A, B, 4).terms
