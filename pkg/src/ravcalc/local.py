"""The local dg commutative algebra of functions on the formal raviolo.

An element is a truncated Laurent series in a local variable zeta whose
coefficients are polynomial differential forms f(v) + F(v) dv, subject to the
boundary conditions: the pullbacks at v=0 and v=1 contain no negative powers
of zeta.  The coefficient forms are `Form`s over a single free generator "v"
(optionally more generators for the configuration-space variants; every
operation here touches only the v direction).

The splitting keeps strictly negative zeta-powers on the minus side, where
the boundary conditions force the degree-0 part to vanish at v=0 and v=1,
and nonnegative powers (with arbitrary v-dependence) on the plus side.

Homotopies, with basepoint v0 = 0 on the plus side:

    h(f + F dv) = integral_0^v F          dh + hd = id - incl . (eval at v=0)
    k(f + F dv) = integral_0^v F - v integral_0^1 F
                                          dk + kd = id - (dv .) . integral_0^1
"""

from __future__ import annotations

from fractions import Fraction

from .linalg import in_span, nullspace, rank
from .rings import LaurentSeries
from .simplex import Form, SimplexSpace

#: spaces with only the interval coordinate v (plain C{{z}} model)
V_SPACE = SimplexSpace(["pt"], free=("v",))  # single dummy label, one free gen


def v_form(terms: dict[tuple[int, int], Fraction]) -> Form:
    """Build f(v) + F(v) dv from {(m, 0): c} and {(m, 1): c} entries."""
    f = Form.zero(1)
    for (m, d), c in terms.items():
        key = ((m,), (0,) if d else ())
        f = f + Form(1, {key: Fraction(c)})
    return f


def series(terms: dict[int, Form], prec: int | None = None, var: str = "z") -> LaurentSeries:
    return LaurentSeries(var, terms, prec)


def _pullback_v(form: Form, value: Fraction) -> Form:
    return form.set_gen(0, value)


def boundary_check(x: LaurentSeries) -> bool:
    """True iff the v=0 and v=1 pullbacks have no negative zeta-powers."""
    for k, form in x.terms.items():
        if k < 0:
            if _pullback_v(form, Fraction(0)) or _pullback_v(form, Fraction(1)):
                return False
    return True


def minus_boundary_check(x: LaurentSeries) -> bool:
    """Membership predicate for the minus part: only negative powers, and
    both boundary pullbacks vanish identically."""
    for k, form in x.terms.items():
        if k >= 0:
            return False
        if _pullback_v(form, Fraction(0)) or _pullback_v(form, Fraction(1)):
            return False
    return True


def split_pm(x: LaurentSeries) -> tuple[LaurentSeries, LaurentSeries]:
    """Direct sum decomposition by zeta-degree: (minus, plus)."""
    if not boundary_check(x):
        raise ValueError("element violates the raviolo boundary conditions")
    minus = LaurentSeries(x.var, {k: f for k, f in x.terms.items() if k < 0}, None)
    plus = LaurentSeries(x.var, {k: f for k, f in x.terms.items() if k >= 0}, x.prec)
    return minus, plus


def _integrate_dv(form: Form) -> Form:
    """integral_0^v of the dv-part; kills 0-form terms."""
    out = Form.zero(form.ngens)
    for (exps, odd), c in form.terms.items():
        if odd != (0,):
            continue
        m = exps[0]
        e = list(exps)
        e[0] = m + 1
        out = out + Form(form.ngens, {(tuple(e), ()): c * Fraction(1, m + 1)})
    return out


def _integral_01(form: Form) -> Form:
    """integral_0^1 of the dv-part, a v-free form (other generators kept)."""
    out = Form.zero(form.ngens)
    for (exps, odd), c in form.terms.items():
        if odd != (0,):
            continue
        m = exps[0]
        e = list(exps)
        e[0] = 0
        out = out + Form(form.ngens, {(tuple(e), ()): c * Fraction(1, m + 1)})
    return out


def homotopy_h(x: LaurentSeries) -> LaurentSeries:
    """h = integral_0^v on each series coefficient (plus side)."""
    return x.map_coeffs(_integrate_dv)


def homotopy_k(x: LaurentSeries) -> LaurentSeries:
    """k = integral_0^v - v . integral_0^1 on each coefficient (minus side)."""
    def k(form: Form) -> Form:
        first = _integrate_dv(form)
        second = Form.gen(form.ngens, 0) * _integral_01(form)
        return first - second
    return x.map_coeffs(k)


def de_rham(x: LaurentSeries) -> LaurentSeries:
    return x.map_coeffs(lambda f: f.d())


def sdr_plus_defect(x: LaurentSeries) -> LaurentSeries:
    """dh(x) + hd(x) - x + incl(pi0(x)); zero iff the plus SDR identity holds."""
    lhs = de_rham(homotopy_h(x)) + homotopy_h(de_rham(x)) - x
    proj = x.map_coeffs(lambda f: _pullback_v(f, Fraction(0)))
    return lhs + proj


def sdr_minus_defect(x: LaurentSeries) -> LaurentSeries:
    """dk(x) + kd(x) - x + dv . integral_0^1 x; zero iff the minus identity holds."""
    lhs = de_rham(homotopy_k(x)) + homotopy_k(de_rham(x)) - x
    dv = Form.dgen(1, 0)
    proj = x.map_coeffs(lambda f: dv * _integral_01(f))
    return lhs + proj


# -- truncated cohomology ---------------------------------------------------


def _basis_window(K: int, D: int) -> tuple[list, list]:
    """Monomial bases of the truncation in form degrees 0 and 1.

    Degree 0: z^k v^m with m <= D, where for k < 0 only the boundary-vanishing
    combinations v^{m+1}(1-v) (m+2 <= D) are allowed.  Degree 1: z^k v^m dv
    with m <= D-1.
    """
    deg0 = []
    for k in range(0, K + 1):
        for m in range(0, D + 1):
            deg0.append(("mon", k, m))
    for k in range(-K, 0):
        for m in range(0, D - 1):
            deg0.append(("e0", k, m))  # v^{m+1}(1-v) z^k
    deg1 = []
    for k in range(-K, K + 1):
        for m in range(0, D):
            deg1.append(("dv", k, m))
    return deg0, deg1


def _d_matrix(deg0: list, deg1: list) -> list[list[Fraction]]:
    index1 = {b: i for i, b in enumerate(deg1)}
    cols = []
    for b in deg0:
        col = [Fraction(0)] * len(deg1)
        kind, k, m = b
        if kind == "mon":
            if m > 0:
                col[index1[("dv", k, m - 1)]] += m
        else:  # e0: d(v^{m+1}(1-v)) = (m+1)v^m dv - (m+2)v^{m+1} dv
            col[index1[("dv", k, m)]] += m + 1
            col[index1[("dv", k, m + 1)]] -= m + 2
        cols.append(col)
    # column-major -> row-major
    return [[cols[j][i] for j in range(len(deg0))] for i in range(len(deg1))]


def cohomology_truncated(K: int, D: int) -> dict:
    """Exact cohomology of the truncation (z-powers in [-K, K], v-degree <= D).

    Returns ranks and canonical representatives per degree, checking that the
    stated representatives are closed, independent, and exhaust the ranks.
    """
    if K < 1 or D < 1:
        raise ValueError("K and D must be >= 1")
    deg0, deg1 = _basis_window(K, D)
    d = _d_matrix(deg0, deg1)
    ker = nullspace(d, ncols=len(deg0))
    h0_rank = len(ker)
    im_rank = len(deg0) - h0_rank
    h1_rank = len(deg1) - im_rank

    # canonical degree-0 representatives z^k, 0 <= k <= K
    rep0 = []
    for k in range(0, K + 1):
        vec = [Fraction(0)] * len(deg0)
        vec[deg0.index(("mon", k, 0))] = Fraction(1)
        rep0.append(vec)
    assert rank(rep0) == len(rep0) <= h0_rank
    for v in rep0:
        assert in_span(ker, v), "representative not closed"
    # canonical degree-1 representatives z^{-k} dv, 1 <= k <= K: closed (all
    # of degree 1 is closed here) and independent modulo the image of d
    image = [row for row in _transpose_image(d, deg0)] if deg0 else []
    rep1 = []
    for k in range(1, K + 1):
        vec = [Fraction(0)] * len(deg1)
        vec[deg1.index(("dv", -k, 0))] = Fraction(1)
        rep1.append(vec)
    base = rank(image) if image else 0
    assert rank(image + rep1) == base + len(rep1), "degree-1 representatives not independent mod exact"

    return {
        "K": K,
        "D": D,
        "ranks": {0: h0_rank, 1: h1_rank},
        "representatives": {
            0: [f"z^{k}" for k in range(0, K + 1)],
            1: [f"z^-{k}*dv" for k in range(1, K + 1)],
        },
    }


def _transpose_image(d: list[list[Fraction]], deg0: list) -> list[list[Fraction]]:
    """Columns of d (images of the degree-0 basis) as vectors in degree 1."""
    cols = []
    for j in range(len(deg0)):
        col = [d[i][j] for i in range(len(d))]
        if any(col):
            cols.append(col)
    return cols


def random_local_element(rng, max_pole=3, max_plus=2, max_m=3, space: SimplexSpace | None = None) -> LaurentSeries:
    """Random boundary-valid element: minus terms from the e0/e1 spanning set,
    plus terms arbitrary."""
    terms: dict[int, Form] = {}
    for _ in range(rng.randint(1, 4)):
        k = rng.randint(-max_pole, max_plus)
        m = rng.randint(0, max_m)
        c = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        if not c:
            continue
        if k < 0:
            if rng.random() < 0.5:
                f = v_form({(m + 1, 0): c, (m + 2, 0): -c})   # c v^{m+1}(1-v)
            else:
                f = v_form({(m, 1): c})                        # c v^m dv
        else:
            f = v_form({(m, rng.randint(0, 1)): c})
        terms[k] = terms.get(k, Form.zero(1)) + f
    return LaurentSeries("z", {k: f for k, f in terms.items() if f}, prec=max_plus + 1)
