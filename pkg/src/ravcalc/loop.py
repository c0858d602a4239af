"""Loop algebras over the raviolo local ring, the vacuum module, and the
state-field maps.

Generators `Gen(lie, power, kind, m)` combine a Lie-algebra basis index, a
power of the local coordinate, and a polynomial form in the interval
coordinate v:

    kind 'e0'  v^{m+1}(1-v)   lowering, power <= -1, even
    kind 'e1'  v^m dv         lowering, power <= -1, odd
    kind 'f0'  v^m            raising,  power >= 0,  even
    kind 'f1'  v^m dv         raising,  power >= 0,  odd
    kind 'cl'  (no form)      classical generators, any power

The e-basis spans the boundary-vanishing degree-0 polynomials and all
degree-1 polynomials, so products of lowering generators decompose exactly.

Vacuum vectors are linear combinations of PBW words: tuples of lowering
generators sorted non-decreasingly by (form degree, m, pole order, Lie
index), with odd generators never repeated.  Brackets of lowering
generators are strictly larger than both factors in this order, which makes
the straightening recursion in `insert_gen` safe without re-sorting
prefixes.  Even generators may repeat: the universal envelope of the graded
Lie algebra requires it.

Mode expansions follow the convention in which the plus modes of a pole of
order k carry binomial coefficients C(j+k-1, k-1) with no extra sign and
the minus modes carry (-1)^{k-1} C(j+k-1, k-1); equivalently, raising the
pole order differentiates with d/dx and a minus sign.  This is the unique
convention compatible with the coinvariant limits computed in `blocks`
(checked there against an independent brute-force oracle).

A `FieldElement` is a truncated series in x valued in u-forms tensor vacuum
vectors, stored flat: {(x exponent, u exponent, du degree, word): Fraction}.
The external u-factor of the minus modes is p(1-u, -du).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations


class LieData:
    """Finite-dimensional Lie algebra by structure constants, with checks."""

    def __init__(self, names: list[str], brackets: dict[tuple[int, int], dict[int, Fraction]]):
        self.names = list(names)
        self.dim = len(names)
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), val in brackets.items():
            table[(i, j)] = {k: Fraction(c) for k, c in val.items() if c}
        # antisymmetrize and validate
        self.table = {}
        for i in range(self.dim):
            for j in range(self.dim):
                ij = table.get((i, j), {})
                ji = table.get((j, i), {})
                if ij and ji:
                    if {k: -c for k, c in ji.items()} != ij:
                        raise ValueError(f"structure constants not antisymmetric at {(i, j)}")
                self.table[(i, j)] = ij or {k: -c for k, c in ji.items()}
        self._check_jacobi()

    def bracket(self, i: int, j: int) -> dict[int, Fraction]:
        return self.table.get((i, j), {})

    def _check_jacobi(self):
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    acc: dict[int, Fraction] = {}
                    for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                        for m, cm in self.bracket(b, c).items():
                            for n, cn in self.bracket(a, m).items():
                                acc[n] = acc.get(n, Fraction(0)) + cm * cn
                    if any(acc.values()):
                        raise ValueError(f"Jacobi identity fails at {(i, j, k)}")

    def adjoint_matrices(self) -> list[list[list[Fraction]]]:
        """rho(a_i)[k][j] = coefficient of a_k in [a_i, a_j]."""
        mats = []
        for i in range(self.dim):
            mat = [[Fraction(0)] * self.dim for _ in range(self.dim)]
            for j in range(self.dim):
                for k, c in self.bracket(i, j).items():
                    mat[k][j] = c
            mats.append(mat)
        return mats

    def index(self, name: str) -> int:
        return self.names.index(name)


@lru_cache(maxsize=1)
def sl2() -> LieData:
    # basis e, h, f with [e,f] = h, [h,e] = 2e, [h,f] = -2f
    E, H, F = 0, 1, 2
    return LieData(
        ["e", "h", "f"],
        {
            (E, F): {H: Fraction(1)},
            (H, E): {E: Fraction(2)},
            (H, F): {F: Fraction(-2)},
        },
    )


@dataclass(frozen=True, order=False)
class Gen:
    lie: int
    power: int
    kind: str  # e0, e1, f0, f1, cl
    m: int = 0

    @property
    def parity(self) -> int:
        return 1 if self.kind in ("e1", "f1") else 0

    @property
    def is_lowering(self) -> bool:
        if self.kind == "cl":
            return self.power < 0
        return self.kind in ("e0", "e1")

    def sort_key(self):
        return (self.parity, self.m, -self.power, self.lie)

    def __repr__(self):
        return f"Gen({self.lie},{self.power},{self.kind},{self.m})"


def word_parity(word: tuple) -> int:
    return sum(g.parity for g in word) & 1


def word_depth(word: tuple) -> int:
    return sum(-g.power for g in word)


# -- form products in the v direction ---------------------------------------


def _form_poly(g: Gen) -> dict[tuple[int, int], Fraction]:
    if g.kind == "e0":
        return {(g.m + 1, 0): Fraction(1), (g.m + 2, 0): Fraction(-1)}
    if g.kind == "e1":
        return {(g.m, 1): Fraction(1)}
    if g.kind == "f0":
        return {(g.m, 0): Fraction(1)}
    if g.kind == "f1":
        return {(g.m, 1): Fraction(1)}
    raise ValueError(f"classical generator has no form part: {g}")


def _poly_mul(p, q):
    out: dict[tuple[int, int], Fraction] = {}
    for (m1, d1), c1 in p.items():
        for (m2, d2), c2 in q.items():
            if d1 and d2:
                continue
            key = (m1 + m2, d1 + d2)
            s = out.get(key, Fraction(0)) + c1 * c2
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def _decompose_minus(poly) -> dict[tuple[str, int], Fraction]:
    """Write a form with vanishing boundary values in the e-basis."""
    out: dict[tuple[str, int], Fraction] = {}
    deg0 = {m: c for (m, d), c in poly.items() if d == 0}
    if deg0:
        if deg0.get(0):
            raise ValueError("degree-0 part does not vanish at v=0")
        if sum(deg0.values()):
            raise ValueError("degree-0 part does not vanish at v=1")
        # v^{m+1}(1-v) = v^{m+1} - v^{m+2}: prefix sums give the coordinates
        maxm = max(deg0)
        acc = Fraction(0)
        for t in range(1, maxm + 1):
            acc += deg0.get(t, Fraction(0))
            if acc:
                out[("e0", t - 1)] = acc
    for (m, d), c in poly.items():
        if d == 1 and c:
            out[("e1", m)] = out.get(("e1", m), Fraction(0)) + c
    return {k: c for k, c in out.items() if c}


def _decompose_plus(poly) -> dict[tuple[str, int], Fraction]:
    out = {}
    for (m, d), c in poly.items():
        out[("f1" if d else "f0", m)] = c
    return out


def bracket_gens(lie: LieData, x: Gen, y: Gen) -> dict[Gen, Fraction]:
    """[x, y] decomposed into generators (Koszul sign carried by the caller:
    the form product here is the graded-commutative one)."""
    lie_part = lie.bracket(x.lie, y.lie)
    if not lie_part:
        return {}
    power = x.power + y.power
    if x.kind == "cl" or y.kind == "cl":
        if not (x.kind == y.kind == "cl"):
            raise ValueError("cannot mix classical and raviolo generators")
        return {Gen(k, power, "cl"): c for k, c in lie_part.items()}
    prod = _poly_mul(_form_poly(x), _form_poly(y))
    if not prod:
        return {}
    basis = _decompose_minus(prod) if power < 0 else _decompose_plus(prod)
    out: dict[Gen, Fraction] = {}
    for k, ck in lie_part.items():
        for (kind, m), cf in basis.items():
            g = Gen(k, power, kind, m)
            s = out.get(g, Fraction(0)) + ck * cf
            if s:
                out[g] = s
            else:
                out.pop(g, None)
    return out


def bracket(lie: LieData, a: dict[Gen, Fraction], b: dict[Gen, Fraction]) -> dict[Gen, Fraction]:
    """Bracket of linear combinations of generators."""
    out: dict[Gen, Fraction] = {}
    for x, cx in a.items():
        for y, cy in b.items():
            for g, c in bracket_gens(lie, x, y).items():
                s = out.get(g, Fraction(0)) + cx * cy * c
                if s:
                    out[g] = s
                else:
                    out.pop(g, None)
    return out


# -- PBW straightening -------------------------------------------------------


def _merge(dst: dict, src: dict, factor: Fraction):
    if not factor:
        return
    for k, c in src.items():
        s = dst.get(k, Fraction(0)) + factor * c
        if s:
            dst[k] = s
        else:
            dst.pop(k, None)


def insert_gen(lie: LieData, x: Gen, word: tuple) -> dict[tuple, Fraction]:
    """x . word in PBW normal form, x a lowering generator, word sorted."""
    if not word:
        return {(x,): Fraction(1)}
    y = word[0]
    kx, ky = x.sort_key(), y.sort_key()
    if kx < ky or (kx == ky and not x.parity):
        return {(x,) + word: Fraction(1)}
    if kx == ky:  # odd generator squared
        return {}
    rest = word[1:]
    out: dict[tuple, Fraction] = {}
    sign = Fraction(-1 if (x.parity and y.parity) else 1)
    for w, c in insert_gen(lie, x, rest).items():
        _merge(out, {(y,) + w: c}, sign)
    for g, c in bracket_gens(lie, x, y).items():
        _merge(out, insert_gen(lie, g, rest), c)
    return out


def apply_raising(lie: LieData, p: Gen, word: tuple) -> dict[tuple, Fraction]:
    """p . word |0> for a raising generator p: annihilates the vacuum and
    commutes rightward, spawning brackets."""
    if not word:
        return {}
    y, rest = word[0], word[1:]
    out: dict[tuple, Fraction] = {}
    sign = Fraction(-1 if (p.parity and y.parity) else 1)
    for w, c in apply_raising(lie, p, rest).items():
        _merge(out, insert_gen(lie, y, w), sign * c)
    for g, c in bracket_gens(lie, p, y).items():
        if g.is_lowering:
            _merge(out, insert_gen(lie, g, rest), c)
        else:
            _merge(out, apply_raising(lie, g, rest), c)
    return out


def act_gen(lie: LieData, g: Gen, vec: dict[tuple, Fraction]) -> dict[tuple, Fraction]:
    out: dict[tuple, Fraction] = {}
    for word, c in vec.items():
        if g.is_lowering:
            _merge(out, insert_gen(lie, g, word), c)
        else:
            _merge(out, apply_raising(lie, g, word), c)
    return out


def act(lie: LieData, combo: dict[Gen, Fraction], vec: dict[tuple, Fraction]) -> dict[tuple, Fraction]:
    out: dict[tuple, Fraction] = {}
    for g, cg in combo.items():
        _merge(out, act_gen(lie, g, vec), cg)
    return out


def _d_gen(g: Gen) -> dict[Gen, Fraction]:
    if g.kind == "e0":
        return {
            Gen(g.lie, g.power, "e1", g.m): Fraction(g.m + 1),
            Gen(g.lie, g.power, "e1", g.m + 1): Fraction(-(g.m + 2)),
        }
    if g.kind == "f0" and g.m > 0:
        return {Gen(g.lie, g.power, "f1", g.m - 1): Fraction(g.m)}
    return {}


def differential(lie: LieData, vec: dict[tuple, Fraction]) -> dict[tuple, Fraction]:
    """Leibniz extension of the coefficient differential to PBW words."""
    out: dict[tuple, Fraction] = {}
    for word, c in vec.items():
        prefix_parity = 0
        for i, g in enumerate(word):
            dg = _d_gen(g)
            if dg:
                suffix = word[i + 1:]
                sign = Fraction(-1 if prefix_parity else 1)
                for b, cb in dg.items():
                    # b is strictly larger than g in the generator order, so
                    # prepending the sorted prefix afterwards stays sorted
                    for w, cw in insert_gen(lie, b, suffix).items():
                        _merge(out, {word[:i] + w: cw}, sign * c * cb)
            prefix_parity ^= g.parity
    return out


# -- fields ------------------------------------------------------------------


class FieldElement:
    """Series in x of u-forms tensor vacuum vectors, truncated at `prec`."""

    __slots__ = ("terms", "prec")

    def __init__(self, terms: dict | None = None, prec: int | None = None):
        self.prec = prec
        self.terms: dict[tuple, Fraction] = {}
        for key, c in (terms or {}).items():
            if c and (prec is None or key[0] < prec):
                self.terms[key] = c

    @classmethod
    def from_state(cls, vec: dict[tuple, Fraction]) -> "FieldElement":
        return cls({(0, 0, 0, w): c for w, c in vec.items()})

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: "FieldElement") -> "FieldElement":
        prec = _minp(self.prec, other.prec)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, Fraction(0)) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return FieldElement(out, prec)

    def scale(self, c: Fraction) -> "FieldElement":
        return FieldElement({k: c * v for k, v in self.terms.items()}, self.prec)

    def truncate(self, K: int) -> "FieldElement":
        return FieldElement(self.terms, K if self.prec is None else min(self.prec, K))

    def __eq__(self, other):
        return (
            isinstance(other, FieldElement)
            and self.terms == other.terms
            and self.prec == other.prec
        )

    def min_x(self) -> int:
        return min((k[0] for k in self.terms), default=0)

    def state_part(self) -> dict[tuple, Fraction]:
        """The x^0, u-free part as a vacuum vector."""
        out = {}
        for (xe, um, ud, w), c in self.terms.items():
            if xe == 0 and um == 0 and ud == 0:
                out[w] = c
        return out


def _minp(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def field_boundary_ok(fe: FieldElement) -> bool:
    """Pullbacks at u=0 and u=1 must have no negative x powers."""
    at0: dict[tuple, Fraction] = {}
    at1: dict[tuple, Fraction] = {}
    for (xe, um, ud, w), c in fe.terms.items():
        if xe >= 0 or ud:
            continue
        if um == 0:
            at0[(xe, w)] = at0.get((xe, w), Fraction(0)) + c
        at1[(xe, w)] = at1.get((xe, w), Fraction(0)) + c
    return not any(at0.values()) and not any(at1.values())


def field_differential(lie: LieData, fe: FieldElement) -> FieldElement:
    out = FieldElement({}, fe.prec)
    for (xe, um, ud, w), c in fe.terms.items():
        if ud == 0 and um > 0:
            out = out + FieldElement({(xe, um - 1, 1, w): c * um}, fe.prec)
        sign = Fraction(-1 if ud else 1)
        for w2, c2 in differential(lie, {w: c}).items():
            out = out + FieldElement({(xe, um, ud, w2): sign * c2}, fe.prec)
    return out


# -- modes -------------------------------------------------------------------


def _check_lowering(x: Gen):
    if not x.is_lowering or x.kind in ("f0", "f1"):
        raise ValueError(f"not a lowering generator: {x}")


def plus_mode(x: Gen, j: int) -> tuple[Gen, Fraction]:
    """Coefficient of x^j in the plus expansion: deeper poles, same form."""
    _check_lowering(x)
    k = -x.power
    coeff = Fraction(math.comb(j + k - 1, k - 1))
    return Gen(x.lie, x.power - j, x.kind, x.m), coeff


def minus_mode_ufactor(x: Gen) -> dict[tuple[int, int], Fraction]:
    """The external u-form p(1-u, -du) of the minus modes."""
    if x.kind == "cl":
        return {(0, 0): Fraction(1)}
    if x.kind == "e0":
        # (1-u)^{m+1} (1-(1-u)) = (1-u)^{m+1} u
        out = {}
        for i in range(x.m + 2):
            out[(i + 1, 0)] = Fraction((-1) ** i * math.comb(x.m + 1, i))
        return out
    if x.kind == "e1":
        # (1-u)^m (-du)
        return {(i, 1): Fraction((-1) ** (i + 1) * math.comb(x.m, i)) for i in range(x.m + 1)}
    raise ValueError(f"no minus modes for {x}")


def minus_mode(x: Gen, j: int) -> tuple[int, Gen, Fraction]:
    """(x exponent, raising generator, coefficient) of the j-th minus mode."""
    _check_lowering(x)
    k = -x.power
    coeff = Fraction((-1) ** (k - 1) * math.comb(j + k - 1, k - 1))
    gen = Gen(x.lie, j, "cl") if x.kind == "cl" else Gen(x.lie, j, "f0", 0)
    return -j - k, gen, coeff


def apply_plus_modes(lie: LieData, x: Gen, fe: FieldElement, K: int) -> FieldElement:
    """x_+(x) applied to fe, truncated at precision K."""
    out: dict[tuple, Fraction] = {}
    prec = _minp(fe.prec, K)
    for (xe, um, ud, w), c in fe.terms.items():
        sign = Fraction(-1 if (x.parity and ud) else 1)
        for j in range(0, prec - xe):
            g, cj = plus_mode(x, j)
            for w2, c2 in insert_gen(lie, g, w).items():
                key = (xe + j, um, ud, w2)
                s = out.get(key, Fraction(0)) + sign * c * cj * c2
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
    return FieldElement(out, prec)


def apply_minus_modes(lie: LieData, x: Gen, fe: FieldElement) -> FieldElement:
    """x_-(x) applied to fe; exact, since smoothness bounds the mode depth."""
    out: dict[tuple, Fraction] = {}
    ufac = minus_mode_ufactor(x)
    for (xe, um, ud, w), c in fe.terms.items():
        depth = word_depth(w)
        for j in range(0, depth):
            dx, g, cj = minus_mode(x, j)
            if not cj:
                continue
            acted = apply_raising(lie, g, w)
            if not acted:
                continue
            # the mode's operator part is even; only the u-factor is graded
            for (du_m, du_d), cu in ufac.items():
                if du_d and ud:
                    continue
                for w2, c2 in acted.items():
                    key = (xe + dx, um + du_m, ud + du_d, w2)
                    s = out.get(key, Fraction(0)) + c * cj * cu * c2
                    if s:
                        out[key] = s
                    else:
                        out.pop(key, None)
    return FieldElement(out, fe.prec)


# -- state-field maps ---------------------------------------------------------


def y_apply(lie: LieData, word: tuple, fe: FieldElement, K: int) -> FieldElement:
    """Y(word |0>; x) applied to a field element, recursively:
    Y(X B; x) = X_+(x) Y(B; x) + (-1)^{|X||B|} Y(B; x) X_-(x)."""
    if not word:
        return fe.truncate(K) if fe.prec is None or fe.prec > K else fe
    x, rest = word[0], word[1:]
    inner = y_apply(lie, rest, fe, K)
    t1 = apply_plus_modes(lie, x, inner, K)
    t2 = y_apply(lie, rest, apply_minus_modes(lie, x, fe), K)
    if x.parity and word_parity(rest):
        t2 = t2.scale(Fraction(-1))
    return t1 + t2


def y_recursive(lie: LieData, A: dict[tuple, Fraction], B: dict[tuple, Fraction], K: int) -> FieldElement:
    """The state-field map of A evaluated on B, to precision K in x."""
    out = FieldElement({}, K)
    for word, c in A.items():
        out = out + y_apply(lie, word, FieldElement.from_state(B), K).scale(c).truncate(K)
    if not field_boundary_ok(out):
        raise AssertionError("state-field output violates the boundary conditions")
    return out


def unshuffles(n: int):
    """All splittings of (1..n) into two increasing subsequences (mu, nu)."""
    idx = tuple(range(n))
    for m in range(n + 1):
        for mu in combinations(idx, m):
            nu = tuple(i for i in idx if i not in mu)
            yield mu, nu


def unshuffle_sign(parities: list[int], mu: tuple, nu: tuple) -> int:
    """Koszul sign chi with X^1...X^n = (-1)^chi X^{mu...} X^{reversed nu...}
    in the free graded-symmetric algebra."""
    n = len(parities)
    if sorted(mu + nu) != list(range(n)):
        raise ValueError("not an unshuffle of 0..n-1")
    if list(mu) != sorted(mu) or list(nu) != sorted(nu):
        raise ValueError("unshuffle parts must be increasing")
    target = list(mu) + list(reversed(nu))
    sign = 1
    for a in range(n):
        for b in range(a + 1, n):
            # original positions a < b; inverted in the target order?
            if target.index(a) > target.index(b):
                if parities[a] and parities[b]:
                    sign = -sign
    return sign


def y_explicit(lie: LieData, A: dict[tuple, Fraction], B: dict[tuple, Fraction], K: int) -> FieldElement:
    """Unshuffle formula for the state-field map: sum over (mu, nu) of
    (-1)^{n-m+chi} X^{mu_1}_+ ... X^{mu_m}_+ X^{nu_{n-m}}_- ... X^{nu_1}_-."""
    out = FieldElement({}, K)
    for word, c in A.items():
        n = len(word)
        parities = [g.parity for g in word]
        total = FieldElement({}, K)
        for mu, nu in unshuffles(n):
            chi = unshuffle_sign(parities, mu, nu)
            sign = Fraction(((-1) ** (n - len(mu))) * chi)
            fe = FieldElement.from_state(B)
            for i in nu:  # rightmost operator first: X^{nu_1}_- acts first
                fe = apply_minus_modes(lie, word[i], fe)
            for i in reversed(mu):  # then X^{mu_m}_+ ... X^{mu_1}_+
                fe = apply_plus_modes(lie, word[i], fe, K)
            total = total + fe.truncate(K).scale(sign)
        out = out + total.scale(c)
    return out


# -- convenience constructors --------------------------------------------------


def lower(lie: LieData, name: str, pole: int, kind: str, m: int = 0) -> Gen:
    if pole < 1:
        raise ValueError("pole order must be >= 1")
    if kind not in ("e0", "e1"):
        raise ValueError("lowering kinds are e0 (v^{m+1}(1-v)) and e1 (v^m dv)")
    return Gen(lie.index(name), -pole, kind, m)


def classical_lower(lie: LieData, name: str, pole: int) -> Gen:
    if pole < 1:
        raise ValueError("pole order must be >= 1")
    return Gen(lie.index(name), -pole, "cl")


def state(words: list[tuple[Fraction, list[Gen]]], lie: LieData) -> dict[tuple, Fraction]:
    """Normal-ordered state from (coefficient, generator list) pairs."""
    out: dict[tuple, Fraction] = {}
    for c, gens in words:
        vec = {(): Fraction(1)}
        for g in reversed(gens):
            vec = act_gen(lie, g, vec)
        _merge(out, vec, Fraction(c))
    return out
