"""Exact sparse multivariate polynomials over the Gaussian rationals Q(i).

Variables are always ``z0 ... z{n}``.  A :class:`Poly` stores a dict from
exponent tuples to nonzero :class:`GaussianRational` coefficients.  Polynomials
with different variable counts may be mixed freely; the shorter one is padded
with zero exponents.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import ExponentOverflowError, PreconditionError

MAX_EXPONENT = 2**31 - 1


class GaussianRational:
    """``re + im*i`` with ``re``, ``im`` exact rationals in lowest terms."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            re, im = re.re, re.im + Fraction(im)
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def coerce(cls, value):
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Rational)):
            return cls(value)
        if isinstance(value, str):
            return parse_gaussian(value)
        raise TypeError(f"cannot convert {value!r} to a Gaussian rational")

    def __add__(self, other):
        other = _as_gq(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_gq(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _as_gq(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = _as_gq(other)
        if other is NotImplemented:
            return other
        if not self.im and not other.im:
            return GaussianRational(self.re * other.re)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_gq(other)
        if other is NotImplemented:
            return other
        if not other:
            raise ZeroDivisionError("division by zero Gaussian rational")
        if not other.im:
            return GaussianRational(self.re / other.re, self.im / other.re)
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _as_gq(other)
        if other is NotImplemented:
            return other
        return other / self

    def inverse(self):
        norm = self.re * self.re + self.im * self.im
        if not norm:
            raise ZeroDivisionError("inverse of zero")
        return GaussianRational(self.re / norm, -self.im / norm)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        other = _as_gq(other)
        if other is NotImplemented:
            return other
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def is_real(self):
        return not self.im

    def denominator_lcm(self):
        a, b = self.re.denominator, self.im.denominator
        return a * b // _gcd(a, b)

    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        return format_gaussian(self)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _as_gq(value):
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Rational)):
        return GaussianRational(value)
    return NotImplemented


def _format_fraction(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_gaussian(c: GaussianRational) -> str:
    """Render in the input grammar, e.g. ``3/2``, ``(1/2)*i``, ``(1 - 2*i)``."""
    if not c.im:
        return _format_fraction(c.re)
    if not c.re:
        return _format_imag(c.im)
    imag = _format_imag(abs(c.im))
    sign = "-" if c.im < 0 else "+"
    return f"({_format_fraction(c.re)} {sign} {imag})"


def _format_imag(q: Fraction) -> str:
    if q == 1:
        return "i"
    if q == -1:
        return "-i"
    if q.denominator == 1:
        return f"{q.numerator}*i"
    return f"({_format_fraction(q)})*i"


def parse_gaussian(text: str) -> GaussianRational:
    from .formlang import parse_poly

    p = parse_poly(text)
    if not p.is_constant():
        raise PreconditionError(f"expected a constant, got {text!r}")
    return p.constant_term()


def _check_exponent(e):
    if e > MAX_EXPONENT:
        raise ExponentOverflowError(f"exponent {e} exceeds {MAX_EXPONENT}")


def grlex_key(m):
    return (sum(m), m)


class Poly:
    """Immutable sparse polynomial in ``nvars`` variables."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, terms=None, nvars=None):
        terms = dict(terms or {})
        width = max((len(m) for m in terms), default=0)
        if nvars is None:
            nvars = width
        elif nvars < width:
            raise PreconditionError(f"exponent vectors longer than nvars={nvars}")
        clean = {}
        for m, c in terms.items():
            c = GaussianRational.coerce(c)
            if not c:
                continue
            if any(e < 0 for e in m):
                raise PreconditionError(f"negative exponent in {m}")
            for e in m:
                _check_exponent(e)
            m = tuple(m) + (0,) * (nvars - len(m))
            clean[m] = c
        self.nvars = nvars
        self._terms = clean
        self._hash = None

    # -- construction ---------------------------------------------------
    @classmethod
    def _raw(cls, terms, nvars):
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c, nvars=0):
        c = GaussianRational.coerce(c)
        return cls._raw({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def zero(cls, nvars=0):
        return cls._raw({}, nvars)

    @classmethod
    def variable(cls, i, nvars=None):
        nvars = i + 1 if nvars is None else nvars
        if not 0 <= i < nvars:
            raise PreconditionError(f"variable index {i} out of range")
        m = [0] * nvars
        m[i] = 1
        return cls._raw({tuple(m): GaussianRational(1)}, nvars)

    @classmethod
    def monomial(cls, m, c=1):
        return cls({tuple(m): c}, len(m))

    # -- basic access ---------------------------------------------------
    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def monomials(self):
        return list(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    @property
    def is_zero(self):
        return not self._terms

    def is_constant(self):
        return all(not any(m) for m in self._terms)

    def constant_term(self):
        return self._terms.get((0,) * self.nvars, GaussianRational(0))

    def coefficient(self, m):
        m = tuple(m) + (0,) * (self.nvars - len(m))
        return self._terms.get(m, GaussianRational(0))

    def total_degree(self):
        return max((sum(m) for m in self._terms), default=-1)

    def degree_in(self, i):
        if i >= self.nvars:
            return 0 if self._terms else -1
        return max((m[i] for m in self._terms), default=-1)

    def used_variables(self):
        return sorted({i for m in self._terms for i, e in enumerate(m) if e})

    def leading_term(self):
        m = max(self._terms, key=grlex_key)
        return m, self._terms[m]

    def sorted_terms(self):
        """Terms in descending graded-lexicographic order."""
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def extend(self, nvars):
        if nvars == self.nvars:
            return self
        if nvars < self.nvars:
            if any(any(m[nvars:]) for m in self._terms):
                raise PreconditionError("cannot drop a variable that is in use")
            return Poly._raw({m[:nvars]: c for m, c in self._terms.items()}, nvars)
        pad = (0,) * (nvars - self.nvars)
        return Poly._raw({m + pad: c for m, c in self._terms.items()}, nvars)

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        c = _as_gq(other)
        if c is NotImplemented:
            return NotImplemented
        return Poly.constant(c, self.nvars)

    def _aligned(self, other):
        n = max(self.nvars, other.nvars)
        return self.extend(n), other.extend(n), n

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, n = self._aligned(other)
        terms = dict(a._terms)
        for m, c in b._terms.items():
            s = terms.get(m)
            if s is None:
                terms[m] = c
            else:
                s = s + c
                if s:
                    terms[m] = s
                else:
                    del terms[m]
        return Poly._raw(terms, n)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({m: -c for m, c in self._terms.items()}, self.nvars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = _as_gq(other)
            if c is NotImplemented:
                return c
            if not c:
                return Poly.zero(self.nvars)
            return Poly._raw({m: v * c for m, v in self._terms.items()}, self.nvars)
        a, b, n = self._aligned(other)
        terms = {}
        for m1, c1 in a._terms.items():
            for m2, c2 in b._terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                c = c1 * c2
                s = terms.get(m)
                terms[m] = c if s is None else s + c
        for m in [m for m, c in terms.items() if not c]:
            del terms[m]
        for m in terms:
            for e in m:
                _check_exponent(e)
        return Poly._raw(terms, n)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = _as_gq(other)
        if c is NotImplemented:
            if isinstance(other, Poly) and other.is_constant() and other:
                c = other.constant_term()
            else:
                return NotImplemented
        return self * c.inverse()

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise PreconditionError("polynomial powers need a nonnegative integer")
        if k > MAX_EXPONENT or (self.total_degree() > 0 and k * self.total_degree() > MAX_EXPONENT):
            raise ExponentOverflowError(f"power {k} overflows the exponent range")
        result = Poly.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = self._coerce(other)
            if other is NotImplemented:
                return other
        a, b, _ = self._aligned(other)
        return a._terms == b._terms

    def __hash__(self):
        if self._hash is None:
            trimmed = frozenset((_trim(m), c) for m, c in self._terms.items())
            self._hash = hash(trimmed)
        return self._hash

    # -- calculus and substitution --------------------------------------
    def derivative(self, i):
        if not 0 <= i < self.nvars:
            raise PreconditionError(f"derivative index {i} out of range 0..{self.nvars - 1}")
        terms = {}
        for m, c in self._terms.items():
            e = m[i]
            if e:
                mm = m[:i] + (e - 1,) + m[i + 1:]
                terms[mm] = c * e
        return Poly._raw(terms, self.nvars)

    def substitute(self, i, value):
        """Set ``z_i = value`` (a constant), keeping the variable count."""
        value = GaussianRational.coerce(value)
        acc = {}
        for m, c in self._terms.items():
            e = m[i]
            mm = m[:i] + (0,) + m[i + 1:]
            cc = c * value**e if e else c
            acc[mm] = acc.get(mm, GaussianRational(0)) + cc
        return Poly._raw({m: c for m, c in acc.items() if c}, self.nvars)

    def monomial_content(self):
        """Componentwise minimum exponent over the support."""
        if not self._terms:
            return (0,) * self.nvars
        ms = list(self._terms)
        return tuple(min(col) for col in zip(*ms)) if self.nvars else ()

    def shift(self, m, sign=1):
        """Multiply (sign=1) or divide (sign=-1) by the monomial ``z^m``."""
        terms = {}
        for mm, c in self._terms.items():
            new = tuple(x + sign * y for x, y in zip(mm, m))
            if any(e < 0 for e in new):
                raise PreconditionError("monomial does not divide polynomial")
            terms[new] = c
        return Poly._raw(terms, self.nvars)

    def divexact(self, other):
        """Return ``self / other`` if ``other`` divides exactly, else ``None``."""
        if other.is_zero:
            raise ZeroDivisionError("division by zero polynomial")
        a, b, n = self._aligned(other)
        if a.is_zero:
            return Poly.zero(n)
        if b.is_constant():
            return a * b.constant_term().inverse()
        lm_b, lc_b = b.leading_term()
        inv = lc_b.inverse()
        rem = dict(a._terms)
        quot = {}
        deg_b = sum(lm_b)
        while rem:
            lm = max(rem, key=grlex_key)
            if sum(lm) < deg_b:
                return None
            diff = tuple(x - y for x, y in zip(lm, lm_b))
            if any(e < 0 for e in diff):
                return None
            q = rem[lm] * inv
            quot[diff] = q
            for mb, cb in b._terms.items():
                mm = tuple(x + y for x, y in zip(mb, diff))
                v = rem.get(mm, GaussianRational(0)) - q * cb
                if v:
                    rem[mm] = v
                else:
                    rem.pop(mm, None)
        return Poly._raw(quot, n)

    def coefficient_lcm(self):
        out = 1
        for c in self._terms.values():
            d = c.denominator_lcm()
            out = out * d // _gcd(out, d)
        return out

    # -- numerics -------------------------------------------------------
    def evaluate(self, point):
        """Nested Horner evaluation at a complex point."""
        point = [complex(x) for x in point]
        if len(point) < self.nvars:
            raise PreconditionError(f"point has {len(point)} coordinates, need {self.nvars}")
        items = [(m, complex(c)) for m, c in self._terms.items()]
        return _horner(items, point, 0, self.nvars)

    def __call__(self, *point):
        if len(point) == 1 and not np.isscalar(point[0]):
            point = point[0]
        return self.evaluate(point)

    def compile(self):
        """Return a vectorised evaluator ``f(Z) -> values`` for ``Z`` of shape (N, nvars)."""
        if not self._terms:
            return lambda Z: np.zeros(np.asarray(Z).shape[0], dtype=complex)
        exps = np.array(list(self._terms), dtype=np.int64).reshape(len(self._terms), self.nvars)
        coeffs = np.array([complex(c) for c in self._terms.values()])

        def f(Z):
            Z = np.asarray(Z, dtype=complex)
            if Z.ndim == 1:
                Z = Z[None, :]
            out = np.zeros(Z.shape[0], dtype=complex)
            for e, c in zip(exps, coeffs):
                term = np.full(Z.shape[0], c, dtype=complex)
                for i, k in enumerate(e):
                    if k:
                        term = term * Z[:, i] ** k
                out += term
            return out

        return f

    def monomial_magnitude_sum(self, point):
        point = [complex(x) for x in point]
        total = 0.0
        for m, c in self._terms.items():
            v = abs(complex(c))
            for z, e in zip(point, m):
                if e:
                    v *= abs(z) ** e
            total += v
        return total

    # -- display --------------------------------------------------------
    def __str__(self):
        from .formlang import render_poly

        return render_poly(self)

    def __repr__(self):
        return f"Poly({str(self)!r}, nvars={self.nvars})"


def _trim(m):
    m = list(m)
    while m and m[-1] == 0:
        m.pop()
    return tuple(m)


def _horner(items, point, i, nvars):
    if i == nvars:
        return sum((c for _, c in items), 0j)
    groups = {}
    for m, c in items:
        groups.setdefault(m[i], []).append((m, c))
    z = point[i]
    acc = 0j
    prev = None
    for e in sorted(groups, reverse=True):
        if prev is not None:
            acc *= z ** (prev - e)
        acc += _horner(groups[e], point, i + 1, nvars)
        prev = e
    if prev:
        acc *= z**prev
    return acc


def gradient(p: Poly, nvars=None):
    nvars = p.nvars if nvars is None else nvars
    p = p.extend(max(nvars, p.nvars))
    return [p.derivative(i) for i in range(p.nvars)]
