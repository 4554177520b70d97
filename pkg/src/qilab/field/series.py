"""Truncated bivariate power series in (u, h).

Series are truncated at a fixed total degree: terms with deg >= cutoff are
dropped.  The cutoff travels with the series and must agree between operands.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import MPoly
from .ratfun import RatFun

__all__ = ["TruncSeries2", "series_of_poly", "leading_form_ratio"]


class TruncSeries2:
    """Polynomial approximation modulo total degree ``cutoff`` in (u, h)."""

    __slots__ = ("cutoff", "coef")

    def __init__(self, cutoff: int, coef: dict | None = None):
        if cutoff < 1:
            raise ValueError("cutoff must be at least 1")
        clean = {}
        for (i, j), v in (coef or {}).items():
            if i + j < cutoff:
                v = Fraction(v)
                if v:
                    clean[(i, j)] = v
        object.__setattr__(self, "cutoff", cutoff)
        object.__setattr__(self, "coef", clean)

    def __setattr__(self, *a):
        raise AttributeError("TruncSeries2 is immutable")

    @classmethod
    def const(cls, x, cutoff: int) -> "TruncSeries2":
        return cls(cutoff, {(0, 0): Fraction(x)})

    @classmethod
    def var_u(cls, cutoff: int) -> "TruncSeries2":
        return cls(cutoff, {(1, 0): Fraction(1)})

    @classmethod
    def var_h(cls, cutoff: int) -> "TruncSeries2":
        return cls(cutoff, {(0, 1): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.coef

    def __eq__(self, other):
        if not isinstance(other, TruncSeries2):
            return NotImplemented
        return self.cutoff == other.cutoff and self.coef == other.coef

    def __hash__(self):
        return hash((self.cutoff, tuple(sorted(self.coef.items()))))

    def _check(self, other) -> "TruncSeries2":
        if isinstance(other, (int, Fraction)):
            return TruncSeries2.const(other, self.cutoff)
        if not isinstance(other, TruncSeries2):
            raise TypeError("expected a TruncSeries2 or scalar")
        if other.cutoff != self.cutoff:
            raise ValueError("mismatched truncation cutoffs")
        return other

    def __neg__(self):
        return TruncSeries2(self.cutoff, {k: -v for k, v in self.coef.items()})

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.coef)
        for k, v in other.coef.items():
            acc = out.get(k, Fraction(0)) + v
            if acc:
                out[k] = acc
            else:
                out.pop(k, None)
        return TruncSeries2(self.cutoff, out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        cut = self.cutoff
        out: dict[tuple[int, int], Fraction] = {}
        for (i1, j1), v1 in self.coef.items():
            for (i2, j2), v2 in other.coef.items():
                i, j = i1 + i2, j1 + j2
                if i + j >= cut:
                    continue
                k = (i, j)
                acc = out.get(k, Fraction(0)) + v1 * v2
                if acc:
                    out[k] = acc
                else:
                    out.pop(k, None)
        return TruncSeries2(cut, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("series exponent must be a nonnegative integer")
        result = TruncSeries2.const(1, self.cutoff)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self) -> "TruncSeries2":
        """Multiplicative inverse; requires a nonzero constant term."""
        c0 = self.coef.get((0, 0), Fraction(0))
        if not c0:
            raise ZeroDivisionError("series has no constant term")
        inv0 = Fraction(1) / c0
        out = {(0, 0): inv0}
        # solve (self * out) = 1 degree by degree
        for d in range(1, self.cutoff):
            for i in range(d + 1):
                j = d - i
                acc = Fraction(0)
                for (a, b), v in self.coef.items():
                    if (a, b) == (0, 0):
                        continue
                    ia, jb = i - a, j - b
                    if ia < 0 or jb < 0:
                        continue
                    w = out.get((ia, jb))
                    if w:
                        acc += v * w
                if acc:
                    out[(i, j)] = -acc * inv0
        return TruncSeries2(self.cutoff, out)

    def min_total_degree(self) -> int:
        if not self.coef:
            return -1
        return min(i + j for i, j in self.coef)

    def leading_form(self) -> MPoly:
        """Homogeneous part of lowest total degree, as a polynomial in (u, h)."""
        if not self.coef:
            return MPoly.zero()
        d = self.min_total_degree()
        return MPoly(
            ("u", "h"), {(i, j): v for (i, j), v in self.coef.items() if i + j == d}
        )

    def __str__(self):
        return str(
            MPoly(("u", "h"), dict(self.coef.items()))
        ) + f" + O(deg {self.cutoff})"

    def __repr__(self):
        return f"TruncSeries2({self})"


def series_of_poly(p: MPoly, subs: dict, cutoff: int) -> TruncSeries2:
    """Expand a polynomial with every variable replaced by a series."""
    targets = {}
    for name, s in subs.items():
        if isinstance(s, (int, Fraction)):
            s = TruncSeries2.const(s, cutoff)
        targets[name] = s
    out = TruncSeries2.const(0, cutoff)
    cache: dict[tuple[str, int], TruncSeries2] = {}
    for e, coeff in p.terms.items():
        term = TruncSeries2.const(coeff, cutoff)
        for i, k in enumerate(e):
            if not k:
                continue
            name = p.vars[i]
            if name not in targets:
                raise ValueError(f"no series supplied for variable {name!r}")
            ck = cache.get((name, k))
            if ck is None:
                ck = targets[name] ** k
                cache[(name, k)] = ck
            term = term * ck
        out = out + term
    return out


def leading_form_ratio(num: TruncSeries2, den: TruncSeries2) -> RatFun:
    """Ratio of lowest-degree homogeneous parts, as an exact rational function.

    This is the leading behaviour of num/den along (u, h) -> 0.  The
    denominator series must be nonzero within its truncation.
    """
    if den.is_zero():
        raise ZeroDivisionError("denominator series vanishes to the cutoff")
    if num.is_zero():
        return RatFun(0)
    return RatFun(num.leading_form(), den.leading_form())
