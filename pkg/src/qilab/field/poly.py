"""Multivariate polynomials with exact rational coefficients.

The variable set is fixed: q, z, w, u, h, u1, u2, ..., c, X1, X2, ..., t.
Underscored spellings such as ``u_1`` or ``X_2`` are accepted on input and
normalized to the plain form.  Every canonical form in the package (term
order, leading coefficients, denominator normalization) is stated relative
to one global monomial order, defined by ranking the variables

    c > X1 > X2 > ... > z > w > u > u1 > u2 > ... > h > q > t

and comparing exponent vectors lexicographically, most significant variable
first.  Terms print in descending order under this ranking.
"""

from __future__ import annotations

import re
from fractions import Fraction

__all__ = ["MPoly", "NotDivisible", "normalize_var", "var_rank", "poly_gcd"]


class NotDivisible(ArithmeticError):
    """Exact polynomial division left a remainder."""


_PLAIN = {"q", "z", "w", "u", "h", "c", "t"}
_INDEXED = re.compile(r"^([uX])_?([1-9][0-9]*)$")

_RANK0 = {
    "c": (0, 0),
    "z": (2, 0),
    "w": (3, 0),
    "u": (4, 0),
    "h": (6, 0),
    "q": (7, 0),
    "t": (8, 0),
}


def normalize_var(name: str) -> str:
    """Map an accepted variable spelling to its canonical name."""
    if name in _PLAIN:
        return name
    m = _INDEXED.match(name)
    if m:
        return m.group(1) + m.group(2)
    raise ValueError(f"unknown variable {name!r}")


def var_rank(name: str) -> tuple[int, int]:
    """Sort key of a canonical variable name; smaller sorts more significant."""
    r = _RANK0.get(name)
    if r is not None:
        return r
    if name[0] == "X":
        return (1, int(name[1:]))
    return (5, int(name[1:]))


def _coerce_scalar(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return None


class MPoly:
    """Immutable sparse polynomial; ``vars`` holds exactly the support."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars, terms):
        vars = tuple(vars)
        clean = {}
        for exps, coeff in terms.items():
            if not isinstance(coeff, Fraction):
                coeff = Fraction(coeff)
            if coeff:
                clean[tuple(exps)] = coeff
        used = [False] * len(vars)
        for exps in clean:
            for i, e in enumerate(exps):
                if e:
                    used[i] = True
        order = sorted(
            (i for i in range(len(vars)) if used[i]), key=lambda i: var_rank(vars[i])
        )
        newvars = tuple(vars[i] for i in order)
        if newvars != vars:
            remapped: dict[tuple, Fraction] = {}
            for exps, coeff in clean.items():
                key = tuple(exps[i] for i in order)
                acc = remapped.get(key, Fraction(0)) + coeff
                if acc:
                    remapped[key] = acc
                else:
                    remapped.pop(key, None)
            clean = remapped
            vars = newvars
        object.__setattr__(self, "vars", vars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("MPoly is immutable")

    # constructors

    @classmethod
    def zero(cls) -> "MPoly":
        return cls((), {})

    @classmethod
    def const(cls, x) -> "MPoly":
        return cls((), {(): Fraction(x)})

    @classmethod
    def var(cls, name: str) -> "MPoly":
        return cls((normalize_var(name),), {(1,): Fraction(1)})

    # predicates and views

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.vars

    def is_monomial(self) -> bool:
        return len(self.terms) <= 1

    def as_fraction(self) -> Fraction:
        if self.vars:
            raise ValueError(f"not a constant: {self}")
        return self.terms.get((), Fraction(0))

    def degree(self) -> int:
        """Total degree; the zero polynomial reports -1."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        name = normalize_var(name)
        if name not in self.vars:
            return 0
        i = self.vars.index(name)
        return max(e[i] for e in self.terms)

    def degree_in_set(self, names) -> int:
        """Max total degree counting only the listed variables."""
        names = {normalize_var(n) for n in names}
        idx = [i for i, v in enumerate(self.vars) if v in names]
        if not self.terms:
            return -1
        return max(sum(e[i] for i in idx) for e in self.terms)

    def key(self):
        return (self.vars, tuple(sorted(self.terms.items())))

    def __hash__(self):
        return hash(self.key())

    def __bool__(self):
        return bool(self.terms)

    def _aligned(self, other):
        if self.vars == other.vars:
            return self.vars, self.terms, other.terms
        merged = tuple(sorted(set(self.vars) | set(other.vars), key=var_rank))
        return merged, _remap(self, merged), _remap(other, merged)

    # arithmetic

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.vars == other.vars and self.terms == other.terms
        s = _coerce_scalar(other)
        if s is None:
            return NotImplemented
        return self.is_const() and self.as_fraction() == s

    def __neg__(self):
        return MPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        if not isinstance(other, MPoly):
            s = _coerce_scalar(other)
            if s is None:
                return NotImplemented
            other = MPoly.const(s)
        vars, ta, tb = self._aligned(other)
        out = dict(ta)
        for e, c in tb.items():
            acc = out.get(e, Fraction(0)) + c
            if acc:
                out[e] = acc
            else:
                out.pop(e, None)
        return MPoly(vars, out)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, MPoly):
            s = _coerce_scalar(other)
            if s is None:
                return NotImplemented
            other = MPoly.const(s)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            s = _coerce_scalar(other)
            if s is None:
                return NotImplemented
            if not s:
                return MPoly.zero()
            return MPoly(self.vars, {e: c * s for e, c in self.terms.items()})
        if not self.terms or not other.terms:
            return MPoly.zero()
        vars, ta, tb = self._aligned(other)
        out: dict[tuple, Fraction] = {}
        for ea, ca in ta.items():
            for eb, cb in tb.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                acc = out.get(e, Fraction(0)) + ca * cb
                if acc:
                    out[e] = acc
                else:
                    out.pop(e, None)
        return MPoly(vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("MPoly exponent must be a nonnegative integer")
        result = MPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # leading data under the global order

    def lex_leading(self):
        """Leading ``(exponents, coefficient)``; raises on the zero polynomial."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms)
        return e, self.terms[e]

    def monic(self) -> "MPoly":
        if not self.terms:
            return self
        _, c = self.lex_leading()
        if c == 1:
            return self
        inv = 1 / c
        return MPoly(self.vars, {e: k * inv for e, k in self.terms.items()})

    # structure helpers

    def split_by(self, name: str) -> dict:
        """Decompose as a polynomial in one variable: degree -> coefficient."""
        name = normalize_var(name)
        if name not in self.vars:
            return {0: self} if self.terms else {}
        i = self.vars.index(name)
        rest = self.vars[:i] + self.vars[i + 1 :]
        buckets: dict[int, dict] = {}
        for e, c in self.terms.items():
            d = e[i]
            re_ = e[:i] + e[i + 1 :]
            buckets.setdefault(d, {})[re_] = c
        return {d: MPoly(rest, t) for d, t in buckets.items()}

    def coeff_of(self, name: str, k: int) -> "MPoly":
        return self.split_by(name).get(k, MPoly.zero())

    def substitute(self, mapping: dict) -> "MPoly":
        """Substitute variables by polynomials or scalars; others are kept."""
        norm = {}
        for k, v in mapping.items():
            if not isinstance(v, MPoly):
                v = MPoly.const(v)
            norm[normalize_var(k)] = v
        targets = [norm.get(v, MPoly.var(v)) for v in self.vars]
        out = MPoly.zero()
        cache: dict[tuple[int, int], MPoly] = {}
        for e, coeff in self.terms.items():
            term = MPoly.const(coeff)
            for i, k in enumerate(e):
                if k:
                    ck = cache.get((i, k))
                    if ck is None:
                        ck = targets[i] ** k
                        cache[(i, k)] = ck
                    term = term * ck
            out = out + term
        return out

    def eval_complex(self, mapping: dict) -> complex:
        norm = {normalize_var(k): complex(v) for k, v in mapping.items()}
        missing = [v for v in self.vars if v not in norm]
        if missing:
            raise ValueError(f"unbound variables in numeric evaluation: {missing}")
        total = 0j
        for e, coeff in self.terms.items():
            val = complex(coeff.numerator) / coeff.denominator
            for i, k in enumerate(e):
                if k:
                    val *= norm[self.vars[i]] ** k
            total += val
        return total

    def eval_fraction(self, mapping: dict) -> Fraction:
        norm = {normalize_var(k): Fraction(v) for k, v in mapping.items()}
        missing = [v for v in self.vars if v not in norm]
        if missing:
            raise ValueError(f"unbound variables in exact evaluation: {missing}")
        total = Fraction(0)
        for e, coeff in self.terms.items():
            val = coeff
            for i, k in enumerate(e):
                if k:
                    val *= norm[self.vars[i]] ** k
            total += val
        return total

    # exact division

    def div_exact(self, other) -> "MPoly":
        """Exact quotient self/other; raises NotDivisible on a remainder."""
        if not isinstance(other, MPoly):
            s = _coerce_scalar(other)
            if s is None:
                raise TypeError("div_exact expects a polynomial or scalar")
            if not s:
                raise ZeroDivisionError("division by zero")
            return self * (Fraction(1) / s)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return MPoly.zero()
        if other.is_const():
            return self * (Fraction(1) / other.as_fraction())
        vars, ta, tb = self._aligned(other)
        eb = max(tb)
        cb = tb[eb]
        rem = dict(ta)
        quo: dict[tuple, Fraction] = {}
        while rem:
            er = max(rem)
            cr = rem[er]
            eq = tuple(a - b for a, b in zip(er, eb))
            if any(x < 0 for x in eq):
                raise NotDivisible(f"({self}) is not divisible by ({other})")
            cq = cr / cb
            quo[eq] = quo.get(eq, Fraction(0)) + cq
            for e, c in tb.items():
                tgt = tuple(a + b for a, b in zip(e, eq))
                acc = rem.get(tgt, Fraction(0)) - c * cq
                if acc:
                    rem[tgt] = acc
                else:
                    rem.pop(tgt, None)
        return MPoly(vars, quo)

    # printing

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for e in sorted(self.terms, reverse=True):
            coeff = self.terms[e]
            mono = "*".join(
                self.vars[i] if k == 1 else f"{self.vars[i]}^{k}"
                for i, k in enumerate(e)
                if k
            )
            mag = abs(coeff)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not pieces:
                pieces.append(body if coeff > 0 else "-" + body)
            else:
                pieces.append((" + " if coeff > 0 else " - ") + body)
        return "".join(pieces)

    def __repr__(self):
        return f"MPoly({self})"


def _remap(p: MPoly, merged: tuple) -> dict:
    pos = [merged.index(v) for v in p.vars]
    width = len(merged)
    out = {}
    for e, c in p.terms.items():
        key = [0] * width
        for i, k in enumerate(e):
            key[pos[i]] = k
        out[tuple(key)] = c
    return out


def _min_exps(p: MPoly) -> dict:
    mins = None
    for e in p.terms:
        mins = list(e) if mins is None else [min(a, b) for a, b in zip(mins, e)]
    return dict(zip(p.vars, mins or []))


def _shift_down(p: MPoly, mins: dict) -> MPoly:
    if not any(mins.values()):
        return p
    drop = [mins[v] for v in p.vars]
    return MPoly(
        p.vars, {tuple(a - b for a, b in zip(e, drop)): c for e, c in p.terms.items()}
    )


def _euclid_univar(a: MPoly, b: MPoly, x: str) -> MPoly:
    da = {k: v.as_fraction() for k, v in a.split_by(x).items()}
    db = {k: v.as_fraction() for k, v in b.split_by(x).items()}
    while db:
        degb = max(db)
        lcb = db[degb]
        while da and max(da) >= degb:
            dega = max(da)
            f = da[dega] / lcb
            shift = dega - degb
            for k, v in db.items():
                tgt = k + shift
                acc = da.get(tgt, Fraction(0)) - f * v
                if acc:
                    da[tgt] = acc
                else:
                    da.pop(tgt, None)
        da, db = db, da
    deg = max(da)
    lc = da[deg]
    return MPoly((x,), {(k,): v / lc for k, v in da.items()})


def _content_in(p: MPoly, x: str) -> MPoly:
    parts = list(p.split_by(x).values())
    g = parts[0]
    for piece in parts[1:]:
        g = poly_gcd(g, piece)
        if g.is_const():
            return MPoly.const(1)
    return g.monic()


def _prem(a: MPoly, b: MPoly, x: str) -> MPoly:
    db = b.degree_in(x)
    lcb = b.coeff_of(x, db)
    xv = MPoly.var(x)
    r = a
    while not r.is_zero() and r.degree_in(x) >= db:
        dr = r.degree_in(x)
        lcr = r.coeff_of(x, dr)
        r = lcb * r - lcr * (xv ** (dr - db)) * b
    return r


def _gcd_core(a: MPoly, b: MPoly) -> MPoly:
    # both nonzero with trivial monomial content
    if a.is_const() or b.is_const():
        return MPoly.const(1)
    shared = [v for v in a.vars if v in b.vars]
    if not shared:
        return MPoly.const(1)
    x = min(shared, key=lambda v: min(a.degree_in(v), b.degree_in(v)))
    if a.vars == (x,) and b.vars == (x,):
        return _euclid_univar(a, b, x)
    ca = _content_in(a, x)
    cb = _content_in(b, x)
    cont = poly_gcd(ca, cb)
    A = a.div_exact(ca)
    B = b.div_exact(cb)
    if A.degree_in(x) < B.degree_in(x):
        A, B = B, A
    while not B.is_zero():
        R = _prem(A, B, x)
        if not R.is_zero():
            R = R.div_exact(_content_in(R, x))
        A, B = B, R
    return (cont * A).monic()


def poly_gcd(a: MPoly, b: MPoly) -> MPoly:
    """Greatest common divisor, normalized to leading coefficient 1."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    ma = _min_exps(a)
    mb = _min_exps(b)
    a1 = _shift_down(a, ma)
    b1 = _shift_down(b, mb)
    mono = MPoly.const(1)
    for v in ma:
        if v in mb:
            k = min(ma[v], mb[v])
            if k:
                mono = mono * (MPoly.var(v) ** k)
    return (mono * _gcd_core(a1, b1)).monic()
