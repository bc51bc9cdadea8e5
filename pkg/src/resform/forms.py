"""Exterior algebra on ``z0..zn`` with rational-function coefficients.

Rational functions are not gcd-reduced.  They are kept in a light canonical
shape (common monomial content removed, exact polynomial quotients taken when
one side divides the other, integral coefficients with a normalised leading
denominator coefficient) and compared by cross-multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .errors import PoleProximityError, PreconditionError
from .poly import GaussianRational, Poly, _as_gq

POLE_TOLERANCE = 1e-12


def _as_poly(x, nvars=0):
    if isinstance(x, Poly):
        return x
    c = _as_gq(x)
    if c is NotImplemented:
        raise TypeError(f"cannot use {x!r} as a polynomial")
    return Poly.constant(c, nvars)


class RationalFunction:
    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = _as_poly(num)
        den = _as_poly(den)
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        self.num, self.den = _reduce(num, den)

    @classmethod
    def _raw(cls, num, den):
        obj = cls.__new__(cls)
        obj.num, obj.den = num, den
        return obj

    @property
    def nvars(self):
        return max(self.num.nvars, self.den.nvars)

    @property
    def is_zero(self):
        return self.num.is_zero

    def __bool__(self):
        return not self.num.is_zero

    def is_polynomial(self):
        return self.den.is_constant()

    def as_poly(self):
        if not self.is_polynomial():
            raise PreconditionError(f"{self} is not a polynomial")
        return self.num / self.den.constant_term()

    @staticmethod
    def coerce(x):
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, Poly):
            return RationalFunction(x)
        c = _as_gq(x)
        if c is NotImplemented:
            return NotImplemented
        return RationalFunction(Poly.constant(c))

    def __add__(self, other):
        other = RationalFunction.coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.num, self.den
        c, d = other.num, other.den
        if b == d:
            return RationalFunction(a + c, b)
        k = d.divexact(b)
        if k is not None:
            return RationalFunction(a * k + c, d)
        k = b.divexact(d)
        if k is not None:
            return RationalFunction(a + c * k, b)
        return RationalFunction(a * d + c * b, b * d)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(-self.num, self.den)

    def __sub__(self, other):
        other = RationalFunction.coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = RationalFunction.coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = RationalFunction.coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RationalFunction.coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = RationalFunction.coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return RationalFunction(self.den**-k, self.num**-k)
        return RationalFunction(self.num**k, self.den**k)

    def __eq__(self, other):
        other = RationalFunction.coerce(other)
        if other is NotImplemented:
            return other
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def derivative(self, i):
        n = max(self.nvars, i + 1)
        num, den = self.num.extend(n), self.den.extend(n)
        dden = den.derivative(i)
        if dden.is_zero:
            return RationalFunction(num.derivative(i), den)
        return RationalFunction(num.derivative(i) * den - num * dden, den * den)

    def substitute(self, i, value):
        den = self.den.substitute(i, value)
        if den.is_zero:
            raise ZeroDivisionError(f"denominator vanishes identically at z{i} = {value}")
        return RationalFunction(self.num.substitute(i, value), den)

    def extend(self, nvars):
        return RationalFunction._raw(self.num.extend(nvars), self.den.extend(nvars))

    def evaluate(self, point, tol=POLE_TOLERANCE):
        d = self.den.evaluate(point)
        if abs(d) < tol:
            raise PoleProximityError(f"denominator {self.den} has magnitude {abs(d):.3g} at {list(point)}")
        return self.num.evaluate(point) / d

    def __str__(self):
        from .formlang import render_rational

        return render_rational(self)

    def __repr__(self):
        return f"RationalFunction({str(self)!r})"


def _reduce(num: Poly, den: Poly):
    n = max(num.nvars, den.nvars)
    num, den = num.extend(n), den.extend(n)
    if num.is_zero:
        return num, Poly.constant(1, n)
    mc = tuple(min(x, y) for x, y in zip(num.monomial_content(), den.monomial_content()))
    if any(mc):
        num, den = num.shift(mc, -1), den.shift(mc, -1)
    if den.is_constant():
        return num / den.constant_term(), Poly.constant(1, n)
    q = num.divexact(den)
    if q is not None:
        return q, Poly.constant(1, n)
    if not num.is_constant():
        q = den.divexact(num)
        if q is not None:
            num, den = Poly.constant(1, n), q
    return _normalize_scalars(num, den)


def _normalize_scalars(num, den):
    """Integral coefficients, content removed, leading denominator coefficient in the first quadrant."""
    scale = num.coefficient_lcm()
    d2 = den.coefficient_lcm()
    scale = scale * d2 // gcd(scale, d2)
    if scale != 1:
        num, den = num * scale, den * scale
    g = 0
    for p in (num, den):
        for _, c in p.items():
            g = gcd(g, c.re.numerator, c.im.numerator)
    if g > 1:
        inv = GaussianRational(1) / g
        num, den = num * inv, den * inv
    _, lc = den.leading_term()
    unit = _first_quadrant_unit(lc)
    if unit != 1:
        num, den = num * unit, den * unit
    return num, den


def _first_quadrant_unit(c):
    for u in (GaussianRational(1), GaussianRational(0, -1), GaussianRational(-1), GaussianRational(0, 1)):
        v = c * u
        if v.re > 0 and v.im >= 0:
            return u
    return GaussianRational(1)


def _sort_with_sign(indices):
    """Sort a tuple of distinct indices; return (sorted, sign) or (None, 0) on repeats."""
    if len(set(indices)) != len(indices):
        return None, 0
    inversions = sum(1 for a in range(len(indices)) for b in range(a + 1, len(indices)) if indices[a] > indices[b])
    return tuple(sorted(indices)), (-1 if inversions % 2 else 1)


class DiffForm:
    """A homogeneous ``k``-form ``sum_I c_I dz_I`` with strictly increasing ``I``."""

    __slots__ = ("nvars", "degree", "_terms")

    def __init__(self, terms=None, degree=None, nvars=None):
        terms = dict(terms or {})
        if degree is None:
            if not terms:
                raise PreconditionError("degree required for an empty form")
            degree = len(next(iter(terms)))
        width = max((max(I) + 1 for I in terms if I), default=0)
        for c in terms.values():
            if isinstance(c, (RationalFunction, Poly)):
                width = max(width, c.nvars)
        nvars = width if nvars is None else nvars
        if nvars < width:
            raise PreconditionError(f"form uses more than nvars={nvars} variables")
        if degree > nvars:
            raise PreconditionError(f"degree {degree} exceeds dimension {nvars}")
        clean = {}
        for I, c in terms.items():
            if len(I) != degree:
                raise PreconditionError(f"mixed degrees: {I} in a {degree}-form")
            J, sign = _sort_with_sign(tuple(I))
            if J is None:
                continue
            c = RationalFunction.coerce(c)
            if sign < 0:
                c = -c
            if J in clean:
                c = clean[J] + c
            if c:
                clean[J] = c.extend(nvars)
            else:
                clean.pop(J, None)
        self.nvars = nvars
        self.degree = degree
        self._terms = clean

    @classmethod
    def _raw(cls, terms, degree, nvars):
        obj = cls.__new__(cls)
        obj.nvars, obj.degree, obj._terms = nvars, degree, terms
        return obj

    @classmethod
    def basis(cls, indices, nvars, coefficient=1):
        return cls({tuple(indices): coefficient}, len(indices), nvars)

    @classmethod
    def scalar(cls, f, nvars=None):
        f = RationalFunction.coerce(f)
        nvars = f.nvars if nvars is None else nvars
        return cls({(): f} if f else {}, 0, nvars)

    @classmethod
    def volume(cls, nvars, coefficient=1):
        return cls.basis(tuple(range(nvars)), nvars, coefficient)

    @classmethod
    def zero(cls, degree, nvars):
        return cls._raw({}, degree, nvars)

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, indices):
        J, sign = _sort_with_sign(tuple(indices))
        if J is None or J not in self._terms:
            return RationalFunction(0)
        c = self._terms[J]
        return c if sign > 0 else -c

    def __len__(self):
        return len(self._terms)

    @property
    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def extend(self, nvars):
        if nvars == self.nvars:
            return self
        if nvars < self.nvars:
            raise PreconditionError("cannot shrink a form's ambient dimension")
        return DiffForm._raw({I: c.extend(nvars) for I, c in self._terms.items()}, self.degree, nvars)

    def _aligned(self, other):
        n = max(self.nvars, other.nvars)
        return self.extend(n), other.extend(n), n

    def __add__(self, other):
        if not isinstance(other, DiffForm):
            if self.degree != 0:
                return NotImplemented
            other = DiffForm.scalar(other, self.nvars)
        if other.degree != self.degree:
            raise PreconditionError(f"cannot add a {self.degree}-form and a {other.degree}-form")
        a, b, n = self._aligned(other)
        terms = dict(a._terms)
        for I, c in b._terms.items():
            if I in terms:
                s = terms[I] + c
                if s:
                    terms[I] = s
                else:
                    del terms[I]
            else:
                terms[I] = c
        return DiffForm._raw(terms, self.degree, n)

    __radd__ = __add__

    def __neg__(self):
        return DiffForm._raw({I: -c for I, c in self._terms.items()}, self.degree, self.nvars)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, f):
        f = RationalFunction.coerce(f)
        if f is NotImplemented:
            raise TypeError("forms scale by rational functions only")
        n = max(self.nvars, f.nvars)
        terms = {}
        for I, c in self._terms.items():
            v = c * f
            if v:
                terms[I] = v.extend(n)
        return DiffForm._raw(terms, self.degree, n)

    def __mul__(self, other):
        if isinstance(other, DiffForm):
            return wedge(self, other)
        if RationalFunction.coerce(other) is NotImplemented:
            return NotImplemented
        return self.scale(other)

    def __rmul__(self, other):
        if RationalFunction.coerce(other) is NotImplemented:
            return NotImplemented
        return self.scale(other)

    def __truediv__(self, other):
        other = RationalFunction.coerce(other)
        if other is NotImplemented:
            return other
        return self.scale(1 / other)

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, DiffForm):
            return NotImplemented
        if self.degree != other.degree:
            return self.is_zero and other.is_zero
        keys = set(self._terms) | set(other._terms)
        return all(self.coefficient(I) == other.coefficient(I) for I in keys)

    __hash__ = None

    def substitute(self, i, value, drop_differential=True):
        """Set ``z_i = value``; with ``drop_differential`` also set ``dz_i = 0``."""
        terms = {}
        for I, c in self._terms.items():
            if drop_differential and i in I:
                continue
            v = c.substitute(i, value)
            if v:
                terms[I] = v
        return DiffForm._raw(terms, self.degree, self.nvars)

    def __str__(self):
        from .formlang import render_form

        return render_form(self)

    def __repr__(self):
        return f"DiffForm({str(self)!r}, degree={self.degree}, nvars={self.nvars})"


def wedge(f: DiffForm, g: DiffForm) -> DiffForm:
    f, g, n = f._aligned(g)
    if f.degree + g.degree > n:
        raise PreconditionError(f"wedge of degrees {f.degree}+{g.degree} exceeds dimension {n}")
    terms = {}
    for I, c in f._terms.items():
        sI = set(I)
        for J, e in g._terms.items():
            if sI.intersection(J):
                continue
            inversions = sum(1 for x in I for y in J if x > y)
            v = c * e
            if inversions % 2:
                v = -v
            K = tuple(sorted(I + J))
            if K in terms:
                v = terms[K] + v
                if not v:
                    del terms[K]
                    continue
            terms[K] = v
    return DiffForm._raw(terms, f.degree + g.degree, n)


def exterior_derivative(f: DiffForm) -> DiffForm:
    n = f.nvars
    if f.degree >= n:
        raise PreconditionError(f"d of a {f.degree}-form in {n} variables")
    terms = {}
    for I, c in f._terms.items():
        for j in range(n):
            if j in I:
                continue
            dc = c.derivative(j)
            if not dc:
                continue
            if sum(1 for x in I if x < j) % 2:
                dc = -dc
            K = tuple(sorted(I + (j,)))
            if K in terms:
                dc = terms[K] + dc
                if not dc:
                    del terms[K]
                    continue
            terms[K] = dc
    return DiffForm._raw(terms, f.degree + 1, n)


@dataclass(frozen=True)
class PolyVectorField:
    """``sum_i V_i d/dz_i`` with polynomial components."""

    components: tuple

    def __post_init__(self):
        comps = tuple(_as_poly(c) for c in self.components)
        n = len(comps)
        object.__setattr__(self, "components", tuple(c.extend(max(n, c.nvars)) for c in comps))

    @property
    def nvars(self):
        return len(self.components)

    @classmethod
    def coordinate(cls, i, nvars):
        return cls(tuple(Poly.constant(1 if j == i else 0, nvars) for j in range(nvars)))

    @classmethod
    def euler(cls, weights):
        """Weighted Euler field ``sum a_i z_i d/dz_i``."""
        n = len(weights)
        return cls(tuple(Poly.variable(i, n) * a for i, a in enumerate(weights)))


def interior_product(V: PolyVectorField, f: DiffForm) -> DiffForm:
    if f.degree < 1:
        raise PreconditionError("interior product needs a form of degree >= 1")
    n = max(V.nvars, f.nvars)
    f = f.extend(n)
    comps = list(V.components) + [Poly.zero(n)] * (n - V.nvars)
    terms = {}
    for I, c in f._terms.items():
        for r, idx in enumerate(I):
            vi = comps[idx]
            if vi.is_zero:
                continue
            v = c * vi
            if r % 2:
                v = -v
            K = I[:r] + I[r + 1:]
            if K in terms:
                v = terms[K] + v
                if not v:
                    del terms[K]
                    continue
            terms[K] = v
    return DiffForm._raw(terms, f.degree - 1, n)


def form_evaluate(f: DiffForm, point, frame=()) -> complex:
    """Evaluate ``f`` at ``point`` on the ``k`` vectors of ``frame``."""
    point = np.asarray(point, dtype=complex)
    frame = [np.asarray(v, dtype=complex) for v in frame]
    if len(frame) != f.degree:
        raise PreconditionError(f"{f.degree}-form needs {f.degree} frame vectors, got {len(frame)}")
    if f.degree == 0:
        return sum((c.evaluate(point) for c in f._terms.values()), 0j)
    F = np.array(frame)
    total = 0j
    for I, c in f._terms.items():
        total += c.evaluate(point) * np.linalg.det(F[:, list(I)])
    return complex(total)
