"""Quasihomogeneous gradings: weight systems, weighted degrees, decomposition."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import numpy as np
from scipy.optimize import linprog

from .errors import NotQuasihomogeneousError, PreconditionError
from .poly import Poly


@dataclass(frozen=True)
class WeightSystem:
    """Positive integer weights ``a_0..a_n`` and the weighted degree ``d`` of ``s``."""

    weights: tuple
    degree: int

    def __post_init__(self):
        weights = tuple(int(a) for a in self.weights)
        object.__setattr__(self, "weights", weights)
        if not weights or any(a <= 0 for a in weights):
            raise PreconditionError(f"weights must be positive integers, got {weights}")
        if gcd(*weights) != 1:
            raise PreconditionError(f"weights {weights} are not coprime")
        if int(self.degree) <= 0:
            raise PreconditionError(f"weighted degree must be positive, got {self.degree}")
        object.__setattr__(self, "degree", int(self.degree))

    @property
    def nvars(self):
        return len(self.weights)

    @property
    def total(self):
        """Sum of the weights, the weight of ``dz_0 ^ ... ^ dz_n``."""
        return sum(self.weights)

    @classmethod
    def for_poly(cls, s: Poly, weights=None):
        """Validate ``weights`` against ``s`` (or infer them) and return the system."""
        if weights is None:
            found = infer_weights(s)
            if found is None:
                raise NotQuasihomogeneousError(f"no positive weight system makes {s} quasihomogeneous")
            return found
        weights = tuple(int(a) for a in weights)
        s = s.extend(max(s.nvars, len(weights)))
        if len(weights) != s.nvars:
            raise PreconditionError(f"{len(weights)} weights given for {s.nvars} variables")
        d = is_quasihomogeneous(s, weights)
        if isinstance(d, WeightMismatch):
            raise NotQuasihomogeneousError(f"{s} is not quasihomogeneous for weights {weights}: {d}")
        return cls(weights, d)


@dataclass(frozen=True)
class WeightMismatch:
    """Returned by :func:`is_quasihomogeneous` when monomial weights differ."""

    weights: tuple

    def __str__(self):
        return "monomial weights {" + ", ".join(map(str, self.weights)) + "}"


def _weights_of(W):
    return W.weights if isinstance(W, WeightSystem) else tuple(W)


def monomial_weight(m, W) -> int:
    a = _weights_of(W)
    if len(m) > len(a):
        if any(m[len(a):]):
            raise PreconditionError(f"exponent vector {m} longer than weights {a}")
        m = m[: len(a)]
    return sum(ai * mi for ai, mi in zip(a, m))


def occurring_weights(p: Poly, W):
    return sorted({monomial_weight(m, W) for m in p.monomials()})


def is_quasihomogeneous(p: Poly, W):
    """Weight ``d`` shared by all monomials of ``p``, or a :class:`WeightMismatch`."""
    if p.is_zero:
        raise PreconditionError("the zero polynomial has no weight")
    ws = occurring_weights(p, W)
    if len(ws) == 1:
        return ws[0]
    return WeightMismatch(tuple(ws))


def weighted_degree(p: Poly, W):
    """Largest monomial weight; equals the weight when ``p`` is quasihomogeneous."""
    if p.is_zero:
        raise PreconditionError("the zero polynomial has no weight")
    return max(occurring_weights(p, W))


def weight_decompose(p: Poly, W):
    """Split ``p`` into quasihomogeneous pieces, sorted by increasing weight."""
    groups = {}
    for m, c in p.items():
        groups.setdefault(monomial_weight(m, W), {})[m] = c
    return [(w, Poly(groups[w], p.nvars)) for w in sorted(groups)]


def _nullspace(rows, ncols):
    """Exact rational nullspace basis of the matrix with the given rows."""
    A = [[Fraction(x) for x in row] for row in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -A[i][fcol]
        basis.append(v)
    return basis


def _normalize_integer(vec):
    den = lcm(*(x.denominator for x in vec))
    ints = [int(x * den) for x in vec]
    g = gcd(*ints)
    return [x // g for x in ints]


def infer_weights(p: Poly):
    """Smallest coprime positive weights making ``p`` quasihomogeneous, or ``None``.

    Unknowns are ``(a_0..a_n, d)`` with one equation ``sum a_i m_i - d = 0`` per
    monomial.  A one-dimensional solution space is solved exactly.  When several
    directions remain (unused variables, too few monomials) the vertex of
    ``{a_i >= 1}`` minimising ``sum a_i`` is taken and checked exactly.
    """
    if p.is_zero:
        raise PreconditionError("the zero polynomial has no weight")
    n = p.nvars
    if n == 0:
        return None
    rows = [list(m) + [-1] for m in p.monomials()]
    basis = _nullspace(rows, n + 1)
    if not basis:
        return None
    if len(basis) == 1:
        v = basis[0]
        if v[n] < 0:
            v = [-x for x in v]
        if v[n] <= 0 or any(x <= 0 for x in v[:n]):
            return None
        ints = _normalize_integer(v)
        return WeightSystem(tuple(ints[:n]), ints[n])
    return _infer_weights_lp(rows, n)


def _infer_weights_lp(rows, n):
    cost = [1.0] * n + [0.0]
    bounds = [(1, None)] * n + [(0, None)]
    res = linprog(cost, A_eq=np.array(rows, dtype=float), b_eq=np.zeros(len(rows)),
                  bounds=bounds, method="highs")
    if res.status != 0:
        return None
    v = [Fraction(x).limit_denominator(10**6) for x in res.x]
    if any(sum(Fraction(c) * x for c, x in zip(row, v)) != 0 for row in rows):
        return None
    if v[n] <= 0:
        return None
    ints = _normalize_integer(v)
    return WeightSystem(tuple(ints[:n]), ints[n])
