"""Configuration-space dg algebras for ravioli and their expansion maps.

A `ConfigForm` bundles a Form over the permutation labels S_N (coefficients
in the pairwise-difference localization of N variables) with its variable
count.  When the form lives over S_{N+1}, the last variable plays the role
of the extra movable coordinate w = z_{N+1}.

Membership in the algebra of derived functions on the ravioli configuration
space is a checked predicate: for every ordered pair (i, j) of sites the
pullback to the face where all u_sigma with i preceding j vanish has to be
regular in z_i - z_j.  Cancellations across terms happen before the
regularity test because the face restriction collects coefficients per
form monomial.

Local expansions at a site s produce Laurent series in (w - z_s) whose
coefficients are forms over the interval coordinate v together with the
S_N simplex; the generator assignment is

    u_sigma -> (1-v) u_{sigma minus N+1}   if N+1 immediately precedes s,
               v u_{sigma minus N+1}       if N+1 immediately follows s,
               0                           otherwise,

and the one-sided inverse substitutes v -> sum of u_tau over orders where s
precedes N+1 and embeds S_N forms by summing fibers.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .rings import LaurentSeries, RatFrac
from .simplex import Form, SimplexSpace, orders_with, perm_labels


class ConfigForm:
    """Form over S_N (or S_{N+1}) with RatFrac coefficients."""

    def __init__(self, N: int, form: Form, with_w: bool = False):
        self.N = N                     # number of marked points
        self.with_w = with_w           # True when over S_{N+1}, vars z_1..z_N, w
        self.form = form

    @property
    def nvars(self) -> int:
        return self.N + 1 if self.with_w else self.N

    @property
    def nlabels(self) -> int:
        return self.N + 1 if self.with_w else self.N

    def space(self) -> SimplexSpace:
        return _sn_space(self.nlabels)

    def __add__(self, other: "ConfigForm") -> "ConfigForm":
        return ConfigForm(self.N, self.form + other.form, self.with_w)

    def __sub__(self, other: "ConfigForm") -> "ConfigForm":
        return ConfigForm(self.N, self.form - other.form, self.with_w)

    def __mul__(self, other: "ConfigForm") -> "ConfigForm":
        return ConfigForm(self.N, self.form * other.form, self.with_w)

    def __neg__(self):
        return ConfigForm(self.N, -self.form, self.with_w)

    def __bool__(self):
        return bool(self.form)

    def __eq__(self, other):
        return (
            isinstance(other, ConfigForm)
            and (self.N, self.with_w) == (other.N, other.with_w)
            and self.form == other.form
        )

    def d(self) -> "ConfigForm":
        return ConfigForm(self.N, self.form.d(), self.with_w)

    def one(self, c=1) -> Form:
        return Form.const(self.form.ngens, RatFrac.const(self.nvars, c))

    def render(self) -> str:
        return self.space().render(self.form, coeff_render=lambda c: c.render(var_names(self.N, self.with_w)))


def var_names(N: int, with_w: bool) -> list[str]:
    names = [f"z{i + 1}" for i in range(N)]
    if with_w:
        names.append("w")
    return names


def in_A(omega: ConfigForm) -> tuple[bool, list[dict]]:
    """Membership test with a violation report listing failing (i, j) pairs."""
    labels = perm_labels(omega.nlabels)
    space = omega.space()
    violations = []
    n = omega.nlabels
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            zero_set = orders_with(labels, i, j)
            restricted, _ = space.restrict_face(omega.form, zero_set)
            bad = [c for c in restricted.terms.values() if not c.is_regular_in(i - 1, j - 1)]
            if bad:
                violations.append(
                    {
                        "pair": (i, j),
                        "face": f"u[sigma]=0 for all sigma with {i} before {j}",
                        "coefficients": [c.render(var_names(omega.N, omega.with_w)) for c in bad],
                    }
                )
    return (not violations), violations


def vanishes_at_infinity(omega: ConfigForm) -> bool:
    """True iff every coefficient vanishes as w -> infinity (requires with_w)."""
    if not omega.with_w:
        raise ValueError("no w variable present")
    return all(c.vanishes_at_infinity_in(omega.N) for c in omega.form.terms.values())


def iota_embed(J: list[int], N: int, omega: ConfigForm) -> ConfigForm:
    """Embedding along a subset J of [1, N]: relabels the |J| variables into
    the slots J and sends u_sigma to the sum of u_tau over orders restricting
    to sigma on J."""
    M = len(J)
    if omega.N != M or omega.with_w:
        raise ValueError("form must be over S_|J| without w")
    if sorted(J) != list(J) or not all(1 <= j <= N for j in J):
        raise ValueError("J must be a sorted subset of [1, N]")
    src_labels = perm_labels(M)
    src = SimplexSpace(src_labels)
    tgt_labels = perm_labels(N)
    tgt = SimplexSpace(tgt_labels)
    positions = [j - 1 for j in J]
    lifted = omega.form.map_coeffs(lambda c: c.extend_vars(N, positions))

    fiber: dict[tuple, list[tuple]] = {s: [] for s in src_labels}
    for tau in tgt_labels:
        restricted = tuple(J.index(x) + 1 for x in tau if x in set(J))
        fiber[restricted].append(tau)

    def mapping(sigma):
        out = tgt.zero()
        for tau in fiber[sigma]:
            out = out + tgt.u(tau, RatFrac.const(N, 1))
        return out

    mapped = src.map_form(lifted, mapping, tgt)
    return ConfigForm(N, mapped)


def iota_sum(N: int, i: int, j: int) -> ConfigForm:
    """The element v_ij = iota_{{i,j}}(u_(12)) = sum of u_sigma with i before j."""
    labels = perm_labels(N)
    space = SimplexSpace(labels)
    return ConfigForm(N, space.sum_u(orders_with(labels, i, j), RatFrac.const(N, 1)))


@lru_cache(maxsize=None)
def local_space(N: int) -> SimplexSpace:
    """Forms over the interval coordinate v times the S_N simplex."""
    return SimplexSpace(perm_labels(N), free=("v",))


@lru_cache(maxsize=None)
def _sn_space(n: int) -> SimplexSpace:
    return SimplexSpace(perm_labels(n))


@lru_cache(maxsize=None)
def _p_images(s: int, N: int, coeff_nvars: int | None) -> tuple:
    src = _sn_space(N + 1)
    tgt = local_space(N)
    one = Fraction(1) if coeff_nvars is None else RatFrac.const(coeff_nvars, 1)
    v = Form.gen(tgt.ngens, 0, one)
    one_minus_v = Form.const(tgt.ngens, one) - v

    def mapping(tau):
        pos = tau.index(N + 1)
        if pos + 1 < len(tau) and tau[pos + 1] == s:
            reduced = tuple(x for x in tau if x != N + 1)
            return one_minus_v * tgt.u(reduced, one)
        if pos > 0 and tau[pos - 1] == s:
            reduced = tuple(x for x in tau if x != N + 1)
            return v * tgt.u(reduced, one)
        return tgt.zero()

    return tuple(src.full_images(mapping, tgt))


def p_pullback(s: int, N: int, form: Form, coeff_one=None) -> Form:
    """Generator-level pullback from S_{N+1} forms to v x S_N forms.

    Deletes the label N+1: orders with N+1 adjacent to s survive, picking up
    (1-v) when N+1 comes first and v when s comes first.
    """
    nv = coeff_one.nvars if isinstance(coeff_one, RatFrac) else None
    images = _p_images(s, N, nv)
    return form.subst(list(images), local_space(N).ngens)


@lru_cache(maxsize=None)
def _q_images(s: int, N: int, coeff_nvars: int | None) -> tuple:
    src = local_space(N)
    tgt_labels = perm_labels(N + 1)
    tgt = _sn_space(N + 1)
    one = Fraction(1) if coeff_nvars is None else RatFrac.const(coeff_nvars, 1)

    fiber: dict[tuple, list[tuple]] = {}
    for tau in tgt_labels:
        reduced = tuple(x for x in tau if x != N + 1)
        fiber.setdefault(reduced, []).append(tau)

    def mapping(lab):
        if lab == "v":
            return tgt.sum_u(orders_with(tgt_labels, s, N + 1), one)
        out = tgt.zero()
        for tau in fiber[lab]:
            out = out + tgt.u(tau, one)
        return out

    return tuple(src.full_images(mapping, tgt))


def q_pullback(s: int, N: int, form: Form, coeff_one=None) -> Form:
    """One-sided inverse to p: v -> sum of u_tau over orders with s before
    N+1, u_sigma -> sum over the fiber deleting N+1."""
    nv = coeff_one.nvars if isinstance(coeff_one, RatFrac) else None
    images = _q_images(s, N, nv)
    return form.subst(list(images), _sn_space(N + 1).ngens)


def expand_at(omega: ConfigForm, s: int, K: int, check: bool = True) -> LaurentSeries:
    """Expansion of a member of the (N+1)-point algebra at site s: Laurent
    series in (w - z_s) with coefficients in v x S_N forms over RatFrac(N).

    Hard-fails if the output violates the local boundary predicates, which
    would signal an implementation bug rather than bad input.
    """
    if not omega.with_w:
        raise ValueError("expansion requires a form over S_{N+1} with w")
    N = omega.N
    if check:
        ok, report = in_A(omega)
        if not ok:
            raise ValueError(f"form is not a member: violations at {[v['pair'] for v in report]}")
    tgt = local_space(N)
    pform = p_pullback(s, N, omega.form, coeff_one=RatFrac.const(N + 1, 1))
    by_exp: dict[int, Form] = {}
    for (exps, odd), coeff in pform.terms.items():
        ser = coeff.laurent_expand(s - 1, K)
        for k, c in ser.terms.items():
            cur = by_exp.get(k)
            add = Form(tgt.ngens, {(exps, odd): c})
            by_exp[k] = cur + add if cur is not None else add
    out = LaurentSeries("t", {k: f for k, f in by_exp.items() if f}, prec=K)
    if check and not _local_boundary_ok(out, N):
        raise AssertionError("expansion violated the local boundary predicate")
    return out


def _local_boundary_ok(x: LaurentSeries, N: int) -> bool:
    """Boundary predicate of the local configuration algebra at a site:
    v=0,1 pullbacks regular in the local variable, and every pair-face
    restriction regular in z_i - z_j."""
    space = local_space(N)
    labels = perm_labels(N)
    for k, form in x.terms.items():
        if k < 0:
            if form.set_gen(0, Fraction(0)) or form.set_gen(0, Fraction(1)):
                return False
        for i in range(1, N + 1):
            for j in range(1, N + 1):
                if i == j:
                    continue
                restricted, _ = space.restrict_face(form, orders_with(labels, i, j))
                if any(not c.is_regular_in(i - 1, j - 1) for c in restricted.terms.values()):
                    return False
    return True


def minus_local_ok(x: LaurentSeries, N: int) -> bool:
    """Minus-part predicate: negative local powers only, vanishing boundary."""
    for k, form in x.terms.items():
        if k >= 0:
            return False
        if form.set_gen(0, Fraction(0)) or form.set_gen(0, Fraction(1)):
            return False
    return _local_boundary_ok(x, N)


def g_build(k: int, x: LaurentSeries, N: int) -> ConfigForm:
    """Build a global object from a minus-part local element at site k.

    Coefficients (w - z_k)^{-l} become the same rational function of w; the
    form part goes through the one-sided inverse substitution.  The result is
    a member of the (N+1)-point algebra vanishing at w -> infinity, and the
    map is multiplicative for fixed k.
    """
    if not minus_local_ok(x, N):
        raise ValueError("input is not a minus-part local element")
    nv = N + 1
    one = RatFrac.const(nv, 1)
    tgt = _sn_space(N + 1)
    total = Form.zero(tgt.ngens)
    for exp, form in x.terms.items():
        l = -exp
        pole = RatFrac(nv, wl_num(nv, l), {(k - 1, N): l})
        lifted = form.map_coeffs(lambda c: c.extend_vars(nv) * pole)
        total = total + q_pullback(k, N, lifted, coeff_one=one)
    return ConfigForm(N, total, with_w=True)


def wl_num(nv: int, l: int):
    """Numerator of (w - z_k)^{-l} over the pair convention (z_k - w)."""
    from .rings import MultiPoly

    return MultiPoly.const(nv, (-1) ** l)


def decompose_global(per_site: dict[int, LaurentSeries], N: int, K: int) -> tuple[ConfigForm, dict[int, LaurentSeries]]:
    """Split a family over the sites into a global part built from the minus
    components and a per-site plus remainder (no negative local powers)."""
    glob = ConfigForm(N, Form.zero(_sn_space(N + 1).ngens), with_w=True)
    minus_parts = {}
    for site, x in per_site.items():
        minus = LaurentSeries(x.var, {e: f for e, f in x.terms.items() if e < 0}, None)
        minus_parts[site] = minus
        if minus:
            glob = glob + g_build(site, minus, N)
    remainders = {}
    for site, x in per_site.items():
        if glob:
            exp = expand_at(glob, site, K, check=False)
        else:
            exp = LaurentSeries("t", {}, prec=K)
        rem = x.truncate(K) - exp
        if rem.terms and min(rem.terms) < 0:
            raise AssertionError("remainder has negative local powers")
        remainders[site] = rem
    return glob, remainders


# -- worked elements ---------------------------------------------------------


def omega12() -> ConfigForm:
    """The closed degree-2 element of the 3-point algebra built from the
    embedded interval coordinates v_ij, with poles at w-z_1, w-z_2, z_1-z_2."""
    N = 3
    nv = 3
    v31 = iota_sum(N, 3, 1)
    v32 = iota_sum(N, 3, 2)
    v21 = iota_sum(N, 2, 1)
    v12 = iota_sum(N, 1, 2)
    inv_wz1 = RatFrac.diff_inverse(nv, 2, 0)   # 1/(w-z1), w = z3
    inv_wz2 = RatFrac.diff_inverse(nv, 2, 1)   # 1/(w-z2)
    inv_z2z1 = RatFrac.diff_inverse(nv, 1, 0)  # 1/(z2-z1)
    inv_z1z2 = RatFrac.diff_inverse(nv, 0, 1)  # 1/(z1-z2)

    t1 = (v31.d() * v32.d()).form.map_coeffs(lambda c: c * inv_wz1 * inv_wz2)
    t2 = (v21.d() * v32.d()).form.map_coeffs(lambda c: c * inv_z2z1 * inv_wz2)
    t3 = (v31.d() * v12.d()).form.map_coeffs(lambda c: c * inv_wz1 * inv_z1z2)
    return ConfigForm(2, t1 - t2 - t3, with_w=True)


def kernel_element() -> ConfigForm:
    """u_(123) u_(312) / (w - z_2): a member of the 3-point algebra killed by
    expansion at both sites."""
    space = _sn_space(3)
    inv = RatFrac.diff_inverse(3, 2, 1)  # 1/(w-z2) with w = z3
    one = RatFrac.const(3, 1)
    f = space.u((1, 2, 3), one) * space.u((3, 1, 2), one)
    return ConfigForm(2, f.map_coeffs(lambda c: c * inv), with_w=True)


def random_minus_local(rng, N: int, max_pole=2, max_m=2) -> LaurentSeries:
    """Random minus-part local element with polynomial z-coefficients."""
    from .rings import MultiPoly

    space = local_space(N)
    terms: dict[int, Form] = {}
    for _ in range(rng.randint(1, 3)):
        e = -rng.randint(1, max_pole)
        m = rng.randint(0, max_m)
        nv = N
        coeff = RatFrac(nv, MultiPoly(nv, {
            tuple(rng.randint(0, 1) for _ in range(nv)): Fraction(rng.randint(-3, 3) or 1)
        }))
        # u-part: a polynomial in the retained simplex generators
        exps = [0] * space.ngens
        if rng.random() < 0.6:
            exps[rng.randint(1, space.ngens - 1)] = rng.randint(1, 2)
        key_even = tuple(exps)
        if rng.random() < 0.5:
            vpart = {((m + 1,), ()): Fraction(1), ((m + 2,), ()): Fraction(-1)}  # v^{m+1}(1-v)
        else:
            vpart = {((m,), (0,)): Fraction(1)}                                  # v^m dv
        f = Form.zero(space.ngens)
        for (ve, vo), c in vpart.items():
            full = list(key_even)
            full[0] = ve[0]
            f = f + Form(space.ngens, {(tuple(full), vo): coeff * c})
        terms[e] = terms.get(e, Form.zero(space.ngens)) + f
    return LaurentSeries("t", {k: f for k, f in terms.items() if f}, None)
