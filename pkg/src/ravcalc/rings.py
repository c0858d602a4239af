"""Exact coefficient rings: sparse multivariate polynomials over Q, the
localizations C[z_i, (z_i - z_j)^{-1}], and precision-tracked Laurent series.

Representations:

  MultiPoly   nvars + dict mapping exponent tuples to Fraction.  The zero
              polynomial is the empty dict.  Variables are positional;
              by convention index 0..N-1 are z_1..z_N and, when a ring has
              one extra movable variable, the last index is w = z_{N+1}.

  RatFrac     a MultiPoly numerator over a product of pairwise differences
              prod (z_i - z_j)^{e_ij} with i < j.  Normalized so that the
              numerator is not divisible by any (z_i - z_j) carrying a
              positive exponent.  Exact division only; no factorization.

  LaurentSeries   finite dict {exponent: coefficient} in one local variable
              plus a precision bound `prec`: exponents < prec are exact,
              exponents >= prec are unknown.  prec=None means exact
              everywhere.  Coefficients live in any ring with +, *, unary -,
              and truthiness (zero is falsy), e.g. Fraction or RatFrac.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable


class MultiPoly:
    """Sparse polynomial in `nvars` variables with Fraction coefficients."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        self._hash = None
        self.terms: dict[tuple, Fraction] = {}
        if terms:
            for exp, c in terms.items():
                c = Fraction(c)
                if c:
                    self.terms[tuple(exp)] = c

    @classmethod
    def const(cls, nvars: int, value) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: Fraction(value)})

    @classmethod
    def var(cls, nvars: int, idx: int) -> "MultiPoly":
        if not 0 <= idx < nvars:
            raise ValueError(f"variable index {idx} out of range for {nvars} variables")
        exp = [0] * nvars
        exp[idx] = 1
        return cls(nvars, {tuple(exp): Fraction(1)})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def is_const(self) -> bool:
        if not self.terms:
            return True
        if len(self.terms) > 1:
            return False
        (exp,) = self.terms
        return not any(exp)

    def const_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        return next(iter(self.terms.values()))

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = out.get(exp, Fraction(0)) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        r = MultiPoly(self.nvars)
        r.terms = out
        return r

    def __neg__(self) -> "MultiPoly":
        r = MultiPoly(self.nvars)
        r.terms = {e: -c for e, c in self.terms.items()}
        return r

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        out: dict[tuple, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        r = MultiPoly(self.nvars)
        r.terms = out
        return r

    def scale(self, c) -> "MultiPoly":
        c = Fraction(c)
        r = MultiPoly(self.nvars)
        if c:
            r.terms = {e: c * v for e, v in self.terms.items()}
        return r

    def degree_in(self, idx: int) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(e[idx] for e in self.terms)

    def eval(self, point: Iterable) -> Fraction:
        pt = [Fraction(p) for p in point]
        total = Fraction(0)
        for exp, c in self.terms.items():
            v = c
            for x, e in zip(pt, exp):
                if e:
                    v *= x ** e
            total += v
        return total

    def subst_value(self, idx: int, value: Fraction) -> "MultiPoly":
        """Substitute a rational constant for one variable (keeps nvars)."""
        out = MultiPoly(self.nvars)
        for exp, c in self.terms.items():
            e = list(exp)
            v = c * value ** e[idx] if e[idx] else c
            e[idx] = 0
            key = tuple(e)
            s = out.terms.get(key, Fraction(0)) + v
            if s:
                out.terms[key] = s
            else:
                out.terms.pop(key, None)
        return out

    def subst_var(self, idx: int, other_idx: int) -> "MultiPoly":
        """Substitute variable `other_idx` for variable `idx`."""
        out = MultiPoly(self.nvars)
        for exp, c in self.terms.items():
            e = list(exp)
            e[other_idx] += e[idx]
            e[idx] = 0
            key = tuple(e)
            s = out.terms.get(key, Fraction(0)) + c
            if s:
                out.terms[key] = s
            else:
                out.terms.pop(key, None)
        return out

    def drop_last_var(self) -> "MultiPoly":
        """Forget the last variable, which must not occur."""
        if self.degree_in(self.nvars - 1) > 0:
            raise ValueError("last variable occurs; cannot drop")
        r = MultiPoly(self.nvars - 1)
        r.terms = {e[:-1]: c for e, c in self.terms.items()}
        return r

    def extend_vars(self, nvars: int, positions: list[int] | None = None) -> "MultiPoly":
        """Embed into a larger ring; variable i goes to positions[i] (default i)."""
        if positions is None:
            positions = list(range(self.nvars))
        r = MultiPoly(nvars)
        for exp, c in self.terms.items():
            e = [0] * nvars
            for i, p in enumerate(positions):
                e[p] = exp[i]
            r.terms[tuple(e)] = c
        return r

    def divmod_linear(self, i: int, j: int) -> tuple["MultiPoly", "MultiPoly"]:
        """Divide by (z_i - z_j): returns (q, r) with self = q*(z_i - z_j) + r
        and r free of z_i (r = self with z_i replaced by z_j)."""
        # Collect coefficients of powers of z_i, then run Horner from the top.
        by_deg: dict[int, MultiPoly] = {}
        for exp, c in self.terms.items():
            d = exp[i]
            e = list(exp)
            e[i] = 0
            coeff = by_deg.setdefault(d, MultiPoly(self.nvars))
            key = tuple(e)
            s = coeff.terms.get(key, Fraction(0)) + c
            if s:
                coeff.terms[key] = s
            else:
                coeff.terms.pop(key, None)
        if not by_deg:
            return MultiPoly(self.nvars), MultiPoly(self.nvars)
        maxd = max(by_deg)
        zi = MultiPoly.var(self.nvars, i)
        zj = MultiPoly.var(self.nvars, j)
        q = MultiPoly(self.nvars)
        acc = MultiPoly(self.nvars)
        for d in range(maxd, 0, -1):
            acc = acc * zj + by_deg.get(d, MultiPoly(self.nvars))
            if acc:
                q = q + acc * _power(zi, d - 1)
        r = acc * zj + by_deg.get(0, MultiPoly(self.nvars))
        return q, r

    def render(self, names: list[str]) -> str:
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=lambda e: (-sum(e), tuple(-x for x in e)))
        parts = []
        for exp in keys:
            c = self.terms[exp]
            mon = "*".join(
                (names[i] if e == 1 else f"{names[i]}^{e}")
                for i, e in enumerate(exp)
                if e
            )
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append(f"-{mon}")
            else:
                parts.append(f"{c}*{mon}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        return f"MultiPoly({self.render([f'x{i}' for i in range(self.nvars)])})"


def _power(p: MultiPoly, n: int) -> MultiPoly:
    r = MultiPoly.const(p.nvars, 1)
    for _ in range(n):
        r = r * p
    return r


class RatFrac:
    """Element of C[z_i, (z_i - z_j)^{-1}]: numerator / prod (z_i - z_j)^{e_ij}.

    `den` maps ordered pairs (i, j) with i < j to positive exponents.
    Always normalized: no factor with positive exponent divides the numerator.
    """

    __slots__ = ("nvars", "num", "den", "_hash")

    def __init__(self, nvars: int, num: MultiPoly | None = None, den: dict | None = None):
        self._hash = None
        self.nvars = nvars
        num = num if num is not None else MultiPoly(nvars)
        den = {k: v for k, v in (den or {}).items() if v}
        for (i, j), e in den.items():
            if not (0 <= i < j < nvars):
                raise ValueError(f"bad denominator pair {(i, j)}")
            if e < 0:
                raise ValueError("negative denominator exponent")
        self.num, self.den = self._normalize(num, den)

    @staticmethod
    def _normalize(num: MultiPoly, den: dict) -> tuple[MultiPoly, dict]:
        if not num:
            return num, {}
        den = dict(den)
        for pair in sorted(den):
            i, j = pair
            while den[pair] > 0:
                q, r = num.divmod_linear(i, j)
                if r:
                    break
                num = q
                den[pair] -= 1
            if den[pair] == 0:
                del den[pair]
        return num, den

    @classmethod
    def const(cls, nvars: int, value) -> "RatFrac":
        return cls(nvars, MultiPoly.const(nvars, value))

    @classmethod
    def var(cls, nvars: int, idx: int) -> "RatFrac":
        return cls(nvars, MultiPoly.var(nvars, idx))

    @classmethod
    def diff_inverse(cls, nvars: int, i: int, j: int, e: int = 1) -> "RatFrac":
        """1/(z_i - z_j)^e; for i > j this is (-1)^e / (z_j - z_i)^e."""
        if i == j:
            raise ValueError("i == j")
        sign = 1
        if i > j:
            i, j = j, i
            sign = (-1) ** e
        return cls(nvars, MultiPoly.const(nvars, sign), {(i, j): e})

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFrac.const(self.nvars, other)
        return (
            isinstance(other, RatFrac)
            and self.nvars == other.nvars
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, self.num, frozenset(self.den.items())))
        return self._hash

    @classmethod
    def _make(cls, nvars: int, num: MultiPoly, den: dict) -> "RatFrac":
        """Trusted constructor: inputs already normalized."""
        r = cls.__new__(cls)
        r.nvars, r.num, r.den, r._hash = nvars, num, den, None
        return r

    def _coerce(self, other) -> "RatFrac":
        if isinstance(other, RatFrac):
            return other
        if isinstance(other, (int, Fraction)):
            return RatFrac.const(self.nvars, other)
        return NotImplemented

    def scale(self, c) -> "RatFrac":
        """Multiply by a nonzero-or-zero rational constant; no renormalization
        is needed because units cannot create new cancellations."""
        if c == 1:
            return self
        c = Fraction(c)
        if not c or not self.num:
            return RatFrac._make(self.nvars, MultiPoly(self.nvars), {})
        return RatFrac._make(self.nvars, self.num.scale(c), dict(self.den))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.den and not other.den:
            return RatFrac._make(self.nvars, self.num + other.num, {})
        pairs = set(self.den) | set(other.den)
        n1, n2 = self.num, other.num
        den: dict[tuple, int] = {}
        for pr in pairs:
            e = max(self.den.get(pr, 0), other.den.get(pr, 0))
            den[pr] = e
            d = MultiPoly.var(self.nvars, pr[0]) - MultiPoly.var(self.nvars, pr[1])
            n1 = n1 * _power(d, e - self.den.get(pr, 0))
            n2 = n2 * _power(d, e - other.den.get(pr, 0))
        return RatFrac(self.nvars, n1 + n2, den)

    __radd__ = __add__

    def __neg__(self):
        return RatFrac._make(self.nvars, -self.num, dict(self.den))

    def __sub__(self, other):
        other = self._coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, RatFrac):
            return NotImplemented
        # a unit times a normalized fraction stays normalized
        if other.num.is_const() and not other.den:
            return self.scale(other.num.const_value())
        if self.num.is_const() and not self.den:
            return other.scale(self.num.const_value())
        den = dict(self.den)
        for pr, e in other.den.items():
            den[pr] = den.get(pr, 0) + e
        if not den:
            return RatFrac._make(self.nvars, self.num * other.num, {})
        return RatFrac(self.nvars, self.num * other.num, den)

    __rmul__ = __mul__

    def is_regular_in(self, i: int, j: int) -> bool:
        """True iff no pole along z_i = z_j (indices 0-based, i != j)."""
        if i == j:
            raise ValueError("i == j")
        return self.den.get((min(i, j), max(i, j)), 0) == 0

    def vanishes_at_infinity_in(self, w_idx: int | None = None) -> bool:
        """True iff the w-degree of the numerator is strictly less than the
        total w-degree of the denominator (w defaults to the last variable)."""
        if w_idx is None:
            w_idx = self.nvars - 1
        if not self.num:
            return True
        den_deg = sum(e for (i, j), e in self.den.items() if i == w_idx or j == w_idx)
        return self.num.degree_in(w_idx) < den_deg

    def pole_order(self, i: int, j: int) -> int:
        return self.den.get((min(i, j), max(i, j)), 0)

    def eval(self, point: Iterable) -> Fraction:
        pt = [Fraction(p) for p in point]
        v = self.num.eval(pt)
        for (i, j), e in self.den.items():
            d = pt[i] - pt[j]
            if d == 0:
                raise ZeroDivisionError(f"point on diagonal z_{i}=z_{j}")
            v /= d ** e
        return v

    def extend_vars(self, nvars: int, positions: list[int] | None = None) -> "RatFrac":
        if positions is None:
            positions = list(range(self.nvars))
        den = {}
        for (i, j), e in self.den.items():
            a, b = positions[i], positions[j]
            den[(min(a, b), max(a, b))] = e
        num = self.num.extend_vars(nvars, positions)
        if any(positions[i] > positions[j] for (i, j) in self.den):
            # reordering a pair flips the sign of each factor
            sign = 1
            for (i, j), e in self.den.items():
                if positions[i] > positions[j]:
                    sign *= (-1) ** e
            num = num.scale(sign)
        return RatFrac._make(nvars, num, den)

    def drop_last_var(self) -> "RatFrac":
        w = self.nvars - 1
        if any(w in pr for pr in self.den):
            raise ValueError("denominator involves the last variable")
        return RatFrac._make(self.nvars - 1, self.num.drop_last_var(), dict(self.den))

    def laurent_expand(self, s: int, K: int) -> "LaurentSeries":
        """Expand in small (w - z_s), w the last variable, z_1..z_N fixed.

        `s` is a 0-based site index < nvars-1.  Returns a LaurentSeries with
        precision exactly K whose coefficients are RatFrac in nvars-1
        variables.  Poles at other sites become geometric series:
        1/(w - z_i) -> sum_k (-1)^k (z_s - z_i)^{-(k+1)} (w - z_s)^k.
        """
        w = self.nvars - 1
        nv = self.nvars - 1
        if not 0 <= s < w:
            raise ValueError("site index out of range")
        pole = self.den.get((s, w), 0)
        if K <= -pole or not self.num:
            return LaurentSeries("t", {}, prec=K)
        # Numerator: substitute w = z_s + t, giving polynomial t-coefficients.
        num_ser: dict[int, MultiPoly] = {}
        for exp, c in self.num.terms.items():
            a = exp[w]
            base = list(exp[:w])
            for k in range(a + 1):
                e = list(base)
                e[s] += a - k
                coeff = c * math.comb(a, k)
                key = tuple(e)
                tgt = num_ser.setdefault(k, MultiPoly(nv))
                sval = tgt.terms.get(key, Fraction(0)) + coeff
                if sval:
                    tgt.terms[key] = sval
                else:
                    tgt.terms.pop(key, None)
        series = LaurentSeries(
            "t",
            {k: RatFrac(nv, p) for k, p in num_ser.items() if p},
            prec=None,
        )
        # Denominator factors.
        result = series
        for (i, j), e in self.den.items():
            if (i, j) == (s, w):
                continue
            if w not in (i, j):
                inv = RatFrac.diff_inverse(nv, i, j, e)
                result = result.map_coeffs(lambda c, inv=inv: c * inv)
                continue
            # factor (z_i - w)^e with i != s: expand
            # (z_i - z_s - t)^{-e} = sum_k C(k+e-1, e-1) t^k (z_i - z_s)^{-e-k}
            i_other = i if j == w else j
            terms = {}
            for k in range(0, K + pole + 1):
                coeff = Fraction(math.comb(k + e - 1, e - 1)) * RatFrac.diff_inverse(
                    nv, i_other, s, e + k
                )
                terms[k] = coeff
            geo = LaurentSeries("t", terms, prec=K + pole + 1)
            result = result * geo
        if pole:
            result = result.shift(-pole).map_coeffs(lambda c: c * ((-1) ** pole))
        return result.truncate(K)

    def render(self, names: list[str] | None = None) -> str:
        if names is None:
            names = [f"z{i + 1}" for i in range(self.nvars)]
        num = self.num.render(names)
        if not self.den:
            return num
        dens = []
        for (i, j) in sorted(self.den):
            e = self.den[(i, j)]
            f = f"({names[i]}-{names[j]})"
            dens.append(f if e == 1 else f + f"^{e}")
        d = "*".join(dens)
        if len(self.num.terms) > 1:
            num = f"({num})"
        return f"{num}/{d}" if len(dens) == 1 else f"{num}/({d})"

    def __repr__(self):
        return f"RatFrac({self.render()})"


class LaurentSeries:
    """Truncated Laurent series in one local variable.

    Exponents < prec are exact; exponents >= prec are unknown.  prec=None
    means the series is exact at all orders (a Laurent polynomial).
    """

    __slots__ = ("var", "terms", "prec")

    def __init__(self, var: str, terms: dict | None = None, prec: int | None = None):
        self.var = var
        self.prec = prec
        self.terms = {}
        for k, c in (terms or {}).items():
            if prec is not None and k >= prec:
                continue
            if c:
                self.terms[k] = c

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, LaurentSeries)
            and self.var == other.var
            and self.terms == other.terms
            and self.prec == other.prec
        )

    def min_degree(self) -> int:
        """Least stored exponent; falls back to prec (or 0) when empty."""
        if self.terms:
            return min(self.terms)
        return self.prec if self.prec is not None else 0

    def _check(self, other: "LaurentSeries"):
        if self.var != other.var:
            raise ValueError(f"variable mismatch: {self.var} vs {other.var}")

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check(other)
        prec = _min_prec(self.prec, other.prec)
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
        return LaurentSeries(self.var, out, prec)

    def __neg__(self):
        return LaurentSeries(self.var, {k: -c for k, c in self.terms.items()}, self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check(other)
        prec = _min_prec(
            _add_prec(self.prec, other.min_degree()),
            _add_prec(other.prec, self.min_degree()),
        )
        out: dict[int, object] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = k1 + k2
                if prec is not None and k >= prec:
                    continue
                p = c1 * c2
                if k in out:
                    s = out[k] + p
                    if s:
                        out[k] = s
                    else:
                        del out[k]
                elif p:
                    out[k] = p
        return LaurentSeries(self.var, out, prec)

    def scale(self, c) -> "LaurentSeries":
        return LaurentSeries(self.var, {k: c * v for k, v in self.terms.items()}, self.prec)

    def map_coeffs(self, f) -> "LaurentSeries":
        return LaurentSeries(self.var, {k: f(v) for k, v in self.terms.items()}, self.prec)

    def shift(self, n: int) -> "LaurentSeries":
        return LaurentSeries(
            self.var,
            {k + n: c for k, c in self.terms.items()},
            None if self.prec is None else self.prec + n,
        )

    def derive(self) -> "LaurentSeries":
        """d/dt, dropping the k=0 term; precision shifts down by one."""
        out = {}
        for k, c in self.terms.items():
            if k != 0:
                out[k - 1] = k * c
        return LaurentSeries(self.var, out, None if self.prec is None else self.prec - 1)

    def truncate(self, K: int) -> "LaurentSeries":
        prec = K if self.prec is None else min(self.prec, K)
        return LaurentSeries(self.var, {k: c for k, c in self.terms.items() if k < prec}, prec)

    def coeff(self, k: int):
        if self.prec is not None and k >= self.prec:
            raise ValueError(f"coefficient of {self.var}^{k} beyond precision {self.prec}")
        return self.terms.get(k)

    def render(self, coeff_render=str) -> str:
        parts = []
        for k in sorted(self.terms):
            c = coeff_render(self.terms[k])
            if k == 0:
                parts.append(c)
            else:
                pw = self.var if k == 1 else f"{self.var}^{k}"
                parts.append(f"({c})*{pw}")
        body = " + ".join(parts) if parts else "0"
        if self.prec is not None:
            body += f" + O({self.var}^{self.prec})"
        return body

    def __repr__(self):
        return f"LaurentSeries({self.render()})"


def _min_prec(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _add_prec(p: int | None, n: int) -> int | None:
    return None if p is None else p + n
