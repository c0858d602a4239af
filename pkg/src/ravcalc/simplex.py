"""Polynomial differential forms on algebro-geometric simplices.

A `Form` is a sparse graded-commutative polynomial in a fixed tuple of
generators: each generator g contributes an even variable u_g (degree 0) and
an odd variable du_g (degree 1).  Terms are keyed by

    (exponents of the even variables, sorted tuple of odd positions)

with the Koszul sign of sorting absorbed into the coefficient.  Coefficients
live in any commutative ring with +, *, unary -, truthiness and int/Fraction
scaling (Fraction, RatFrac, ...).

Forms on the simplex Delta^{|L|-1} for a label set L are represented
canonically in the quotient by < sum u - 1, sum du >: the generator of the
*last* label in the fixed order is eliminated via

    u_last = 1 - sum(others),   du_last = -sum(others),

so a canonical form is just a Form over the retained generators.  The
`SimplexSpace` wrapper holds the label bookkeeping and provides the quotient
operations: face restriction, generator substitution, vertex-map pullbacks.

Label sets with permutation labels use one-line tuples (sigma(1),...,sigma(N))
sorted lexicographically, so the eliminated generator is u_{(N,...,1)}.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

MAX_FULL_N = 4  # S_5 has 120 labels; full simplex computations stop at S_4


class Form:
    __slots__ = ("ngens", "terms")

    def __init__(self, ngens: int, terms: dict | None = None):
        self.ngens = ngens
        self.terms: dict[tuple, object] = {}
        if terms:
            for (exps, odd), c in terms.items():
                if c:
                    self.terms[(tuple(exps), tuple(odd))] = c

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ngens: int) -> "Form":
        return cls(ngens)

    @classmethod
    def const(cls, ngens: int, c) -> "Form":
        return cls(ngens, {((0,) * ngens, ()): c})

    @classmethod
    def gen(cls, ngens: int, i: int, one=Fraction(1)) -> "Form":
        exps = [0] * ngens
        exps[i] = 1
        return cls(ngens, {(tuple(exps), ()): one})

    @classmethod
    def dgen(cls, ngens: int, i: int, one=Fraction(1)) -> "Form":
        return cls(ngens, {((0,) * ngens, (i,)): one})

    # -- ring structure ----------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, Form) and self.ngens == other.ngens and self.terms == other.terms

    def __hash__(self):
        return hash((self.ngens, frozenset(self.terms.items())))

    def __add__(self, other: "Form") -> "Form":
        out = dict(self.terms)
        for k, c in other.terms.items():
            if k in out:
                s = out[k] + c
                if s:
                    out[k] = s
                else:
                    del out[k]
            else:
                out[k] = c
        r = Form(self.ngens)
        r.terms = out
        return r

    def __neg__(self):
        r = Form(self.ngens)
        r.terms = {k: -c for k, c in self.terms.items()}
        return r

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "Form") -> "Form":
        """Wedge product (graded-commutative)."""
        if not self.terms or not other.terms:
            return Form(self.ngens)
        out: dict[tuple, object] = {}
        for (e1, o1), c1 in self.terms.items():
            for (e2, o2), c2 in other.terms.items():
                merged = _merge_odd(o1, o2)
                if merged is None:
                    continue
                odd, sign = merged
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                if sign < 0:
                    c = -c
                key = (e, odd)
                if key in out:
                    s = out[key] + c
                    if s:
                        out[key] = s
                    else:
                        del out[key]
                elif c:
                    out[key] = c
        r = Form(self.ngens)
        r.terms = out
        return r

    def scale(self, c) -> "Form":
        if not c:
            return Form(self.ngens)
        r = Form(self.ngens)
        r.terms = {k: c * v for k, v in self.terms.items()}
        return r

    def map_coeffs(self, f) -> "Form":
        r = Form(self.ngens)
        for k, v in self.terms.items():
            w = f(v)
            if w:
                r.terms[k] = w
        return r

    def d(self) -> "Form":
        """De Rham differential: d(u^E w) = sum_i E_i u^{E - e_i} du_i ^ w."""
        out = Form(self.ngens)
        for (exps, odd), c in self.terms.items():
            for i, e in enumerate(exps):
                if not e:
                    continue
                merged = _merge_odd((i,), odd)
                if merged is None:
                    continue
                newodd, sign = merged
                newexps = list(exps)
                newexps[i] -= 1
                coeff = (e * sign) * c
                out = out + Form(self.ngens, {(tuple(newexps), newodd): coeff})
        return out

    def degrees(self) -> set[int]:
        return {len(odd) for (_, odd) in self.terms}

    def homogeneous_degree(self) -> int:
        """Form degree of a homogeneous form (0 for the zero form)."""
        degs = self.degrees()
        if not degs:
            return 0
        if len(degs) > 1:
            raise ValueError(f"form is not homogeneous: degrees {degs}")
        return degs.pop()

    def component(self, deg: int) -> "Form":
        r = Form(self.ngens)
        r.terms = {k: c for k, c in self.terms.items() if len(k[1]) == deg}
        return r

    def set_gen(self, i: int, value: Fraction) -> "Form":
        """Pull back along u_i = value, du_i = 0 (a vertex in direction i)."""
        out = Form(self.ngens)
        for (exps, odd), c in self.terms.items():
            if i in odd:
                continue
            e = list(exps)
            if e[i]:
                if not value:
                    continue
                c = c * (value ** e[i]) if value != 1 else c
                e[i] = 0
            key = (tuple(e), odd)
            if key in out.terms:
                s = out.terms[key] + c
                if s:
                    out.terms[key] = s
                else:
                    del out.terms[key]
            else:
                out.terms[key] = c
        return out

    def subst(self, images: list[tuple["Form", "Form"]], target_ngens: int) -> "Form":
        """Apply the algebra map u_i -> images[i][0], du_i -> images[i][1].

        Works term by term; the caller guarantees the images define a dg map
        (d of the even image equals the odd image).
        """
        out = Form.zero(target_ngens)
        powers: dict[tuple[int, int], Form] = {}

        def power(i: int, e: int) -> Form:
            key = (i, e)
            got = powers.get(key)
            if got is None:
                got = images[i][0] if e == 1 else power(i, e - 1) * images[i][0]
                powers[key] = got
            return got

        for (exps, odd), c in self.terms.items():
            t = Form.const(target_ngens, c)
            for i, e in enumerate(exps):
                if e:
                    t = t * power(i, e)
                    if not t:
                        break
            if not t:
                continue
            dead = False
            for i in odd:
                t = t * images[i][1]
                if not t:
                    dead = True
                    break
            if not dead and t:
                out = out + t
        return out

    def eval_at(self, point: list, tangents: list[list]) -> object:
        """Evaluate a k-form on k tangent vectors at a rational point.

        Used as an independent equality oracle: a term c u^E du_{j1..jk} gives
        c * point^E * det[tangents[a][j_b]].
        """
        total = None
        for (exps, odd), c in self.terms.items():
            if len(odd) != len(tangents):
                continue
            v = c
            for i, e in enumerate(exps):
                if e:
                    v = v * (point[i] ** e)
            if odd:
                mat = [[t[j] for j in odd] for t in tangents]
                v = v * _det(mat)
            total = v if total is None else total + v
        return total if total is not None else Fraction(0)

    def render(self, names: list[str], coeff_render=str) -> str:
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=lambda k: (len(k[1]), k[1], tuple(-e for e in k[0])))
        parts = []
        for (exps, odd) in keys:
            factors = []
            for i, e in enumerate(exps):
                if e:
                    factors.append(f"u[{names[i]}]" if e == 1 else f"u[{names[i]}]^{e}")
            for i in odd:
                factors.append(f"du[{names[i]}]")
            mon = "^".join(factors)
            c = coeff_render(self.terms[(exps, odd)])
            parts.append(f"({c})" + (f"*{mon}" if mon else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"Form({self.render([str(i) for i in range(self.ngens)])})"


def _merge_odd(o1: tuple, o2: tuple):
    """Merge two sorted odd words; None if they overlap, else (word, sign)."""
    if not o1:
        return o2, 1
    if not o2:
        return o1, 1
    if set(o1) & set(o2):
        return None
    merged = []
    i = j = 0
    inversions = 0
    while i < len(o1) and j < len(o2):
        if o1[i] < o2[j]:
            merged.append(o1[i])
            i += 1
        else:
            merged.append(o2[j])
            inversions += len(o1) - i
            j += 1
    merged.extend(o1[i:])
    merged.extend(o2[j:])
    return tuple(merged), (-1) ** inversions


def _det(mat):
    n = len(mat)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return mat[0][0]
    total = None
    for perm in itertools.permutations(range(n)):
        sign = _perm_sign(perm)
        v = mat[0][perm[0]]
        for i in range(1, n):
            v = v * mat[i][perm[i]]
        v = v if sign > 0 else -v
        total = v if total is None else total + v
    return total


def _perm_sign(perm) -> int:
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return (-1) ** inv


@lru_cache(maxsize=None)
def _perm_labels_cached(N: int) -> tuple:
    return tuple(sorted(itertools.permutations(range(1, N + 1))))


def perm_labels(N: int) -> list[tuple]:
    """Total orders on [1,N] in one-line notation, lexicographically sorted."""
    if N > MAX_FULL_N:
        raise ValueError(
            f"full simplex computations support N <= {MAX_FULL_N} (S_{N} has {_fact(N)} labels)"
        )
    return list(_perm_labels_cached(N))


def _fact(n):
    r = 1
    for i in range(2, n + 1):
        r *= i
    return r


def orders_with(labels: list[tuple], i: int, j: int) -> list[tuple]:
    """Sublist of permutation labels in which i precedes j."""
    return [s for s in labels if s.index(i) < s.index(j)]


class SimplexSpace:
    """Canonical forms on Delta^{|L|-1}, plus optional free prefix generators.

    `free` lists generators without a simplex relation (the interval
    coordinates v or u of the local models); they come first.  `labels` is the
    ordered label set; the last label is eliminated.
    """

    def __init__(self, labels: list, free: tuple = ()):
        if not labels:
            raise ValueError("empty label set")
        self.labels = list(labels)
        self.free = tuple(free)
        self.retained = list(free) + self.labels[:-1]
        self.ngens = len(self.retained)
        self.index = {g: i for i, g in enumerate(self.retained)}

    def zero(self) -> Form:
        return Form.zero(self.ngens)

    def one(self, c=Fraction(1)) -> Form:
        return Form.const(self.ngens, c)

    def u(self, label, one=Fraction(1)) -> Form:
        """Canonical representative of the generator for `label`."""
        if label == self.labels[-1]:
            out = self.one(one)
            for lab in self.labels[:-1]:
                out = out - Form.gen(self.ngens, self.index[lab], one)
            return out
        return Form.gen(self.ngens, self.index[label], one)

    def du(self, label, one=Fraction(1)) -> Form:
        if label == self.labels[-1]:
            out = self.zero()
            for lab in self.labels[:-1]:
                out = out - Form.dgen(self.ngens, self.index[lab], one)
            return out
        return Form.dgen(self.ngens, self.index[label], one)

    def sum_u(self, labels, one=Fraction(1)) -> Form:
        out = self.zero()
        for lab in labels:
            out = out + self.u(lab, one)
        return out

    def full_images(self, mapping, target: "SimplexSpace") -> list[tuple[Form, Form]]:
        """Images (for retained generators) of a map given on all labels.

        `mapping(label) -> Form` over the target, degree 0.  Free generators
        carry no relation; the simplex labels must satisfy sum of images = 1
        (checked), which makes the map well defined on the quotient.
        """
        total = target.zero()
        for lab in self.labels:
            total = total + mapping(lab)
        if total != target.one():
            raise ValueError("substitution does not preserve the simplex relation sum u = 1")
        images = []
        for g in self.retained:
            img = mapping(g)
            images.append((img, img.d()))
        return images

    def map_form(self, form: Form, mapping, target: "SimplexSpace") -> Form:
        """Push a canonical form through the dg algebra map `mapping`."""
        return form.subst(self.full_images(mapping, target), target.ngens)

    def restrict_face(self, form: Form, zero_labels) -> tuple[Form, "SimplexSpace"]:
        """Pull back along u_l = 0, du_l = 0 for l in zero_labels."""
        zero_set = frozenset(zero_labels)
        if len(zero_set) >= len(self.labels):
            raise ValueError("cannot zero out every label")
        target, images = _face_data(tuple(self.labels), self.free, zero_set)
        return form.subst(list(images), target.ngens), target

    def pullback_vertex_map(self, phi: dict, domain: "SimplexSpace", form: Form) -> Form:
        """Pullback of `form` (over this space) along the label map
        phi: domain.labels -> self.labels, i.e. u_l -> sum over phi^{-1}(l)."""
        fibers: dict = {lab: [] for lab in self.labels}
        for m, l in phi.items():
            fibers[l].append(m)

        def mapping(lab):
            out = domain.zero()
            for m in fibers[lab]:
                out = out + domain.u(m)
            return out

        return self.map_form(form, mapping, domain)

    def random_form(self, rng, max_deg=2, max_exp=2, nterms=3, coeff=None) -> Form:
        coeff = coeff or (lambda: Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
        f = self.zero()
        for _ in range(nterms):
            exps = tuple(rng.randint(0, max_exp) if rng.random() < 0.5 else 0 for _ in range(self.ngens))
            k = rng.randint(0, min(max_deg, self.ngens))
            odd = tuple(sorted(rng.sample(range(self.ngens), k)))
            f = f + Form(self.ngens, {(exps, odd): coeff()})
        return f

    def render(self, form: Form, coeff_render=str) -> str:
        names = [_label_name(g) for g in self.retained]
        return form.render(names, coeff_render)


def _label_name(g) -> str:
    if isinstance(g, tuple):
        return "".join(str(x) for x in g)
    return str(g)


@lru_cache(maxsize=None)
def _face_data(labels: tuple, free: tuple, zero: frozenset):
    space = SimplexSpace(list(labels), free)
    remaining = [l for l in labels if l not in zero]
    target = SimplexSpace(remaining, free)

    def mapping(lab):
        if lab in zero:
            return target.zero()
        if lab in free:
            return Form.gen(target.ngens, target.index[lab])
        return target.u(lab)

    images = space.full_images(mapping, target)
    return target, tuple(images)
