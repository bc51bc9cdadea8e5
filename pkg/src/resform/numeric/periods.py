"""Real periods of ``P(z) dz / sqrt(Q(z))`` on ``w^2 = Q(z)``.

Two independent routes: adaptive quadrature after removing the square-root
endpoint singularity, and the arithmetic-geometric mean applied to the roots
of ``z^3 + p z + q``.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from ..errors import PreconditionError, QuadratureError
from ..poly import Poly

RELATIVE_TOLERANCE = 1e-10
ROOT_TOLERANCE = 1e-10
AGM_TOLERANCE = 1e-15
AGM_MAX_ITER = 60


def _coefficients(f) -> np.ndarray:
    """Real coefficients, highest degree first, of a univariate polynomial."""
    if isinstance(f, Poly):
        used = f.used_variables()
        if len(used) > 1:
            raise PreconditionError(f"{f} is not univariate")
        if f.is_zero:
            return np.zeros(1)
        k = next(iter(used)) if used else 0
        D = f.degree_in(k) if used else 0
        c = np.zeros(D + 1)
        for m, a in f.items():
            if not a.is_real:
                raise PreconditionError("period polynomials must have real coefficients")
            c[D - (m[k] if used else 0)] = float(a.re)
        return c
    if isinstance(f, (int, float)):
        return np.array([float(f)])
    c = np.trim_zeros(np.asarray(f, dtype=float), "f")
    return c if len(c) else np.zeros(1)


def cubic_coefficients(p, q) -> np.ndarray:
    return np.array([1.0, 0.0, float(p), float(q)])


def _deflate(Q, e):
    quo, rem = np.polydiv(Q, np.array([1.0, -e]))
    if abs(rem[-1]) > ROOT_TOLERANCE * (1 + np.sum(np.abs(Q)) * max(1.0, abs(e)) ** (len(Q) - 1)):
        raise PreconditionError(f"path endpoint {e} is not a root of Q")
    return quo


def _real_roots(Q):
    r = np.roots(Q)
    return np.sort(r[np.abs(r.imag) <= 1e-9 * (1 + np.abs(r))].real)


def _quad(f, a, b):
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            value, err = quad(f, a, b, epsabs=0.0, epsrel=RELATIVE_TOLERANCE * 1e-2, limit=500)
        except IntegrationWarning as exc:
            raise QuadratureError(f"quadrature did not converge: {exc}") from None
    if not math.isfinite(value) or err > RELATIVE_TOLERANCE * max(abs(value), 1e-300):
        raise QuadratureError(f"quadrature error estimate {err:.3g} above tolerance")
    return value


def period_integral(cubic, path, numerator=1) -> float:
    """``int_path P(z) / sqrt|Q(z)| dz`` along a real path between branch points.

    ``path`` is ``(e, inf)`` or ``(e1, e2)``; every finite endpoint must be a
    root of ``Q`` and no root may lie strictly inside.  On ``[e, inf)`` the
    substitution is ``z = e + u^2`` with ``u = x/(1-x)``, on ``[e1, e2]`` it is
    ``z = e1 + (e2 - e1) sin^2 phi``; both leave a smooth integrand.
    """
    Q = _coefficients(cubic)
    P = _coefficients(numerator)
    if len(Q) < 2:
        raise PreconditionError("Q must have positive degree")
    if not np.any(P):
        return 0.0
    lo, hi = float(path[0]), float(path[1])
    if not lo < hi:
        raise PreconditionError(f"empty path [{lo}, {hi}]")
    roots = _real_roots(Q)
    margin = 1e-9 * (1 + max(abs(lo), abs(hi) if math.isfinite(hi) else 0.0))
    inside = roots[(roots > lo + margin) & (roots < hi - margin)]
    if len(inside):
        raise PreconditionError(f"path passes through the branch point {inside[0]:.12g}")

    if math.isinf(hi):
        if 2 * (len(P) - 1) >= len(Q) - 3:
            raise PreconditionError("integral diverges at infinity for this numerator degree")
        R = _deflate(Q, lo)

        def f(x):
            u = x / (1.0 - x)
            y = u * u
            return 2.0 * np.polyval(P, lo + y) / math.sqrt(abs(np.polyval(R, lo + y))) / (1.0 - x) ** 2

        return _quad(f, 0.0, 1.0)

    L = _deflate(_deflate(Q, lo), hi)
    width = hi - lo

    def f(phi):
        z = lo + width * math.sin(phi) ** 2
        return 2.0 * np.polyval(P, z) / math.sqrt(abs(np.polyval(L, z)))

    return _quad(f, 0.0, math.pi / 2)


def agm(a: float, b: float) -> float:
    for _ in range(AGM_MAX_ITER):
        if abs(a - b) <= AGM_TOLERANCE * abs(a):
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def cubic_discriminant(p, q) -> float:
    return -4.0 * p**3 - 27.0 * q**2


def depressed_cubic_roots(p, q):
    """Real roots (ascending) and, if any, the complex pair ``b +- ic`` (``c > 0``)."""
    p, q = float(p), float(q)
    disc = cubic_discriminant(p, q)
    scale = 4.0 * abs(p) ** 3 + 27.0 * q**2
    if abs(disc) <= 1e-12 * max(scale, 1e-300):
        raise PreconditionError(f"z^3 + ({p})z + ({q}) has a repeated root")
    if disc > 0:
        m = 2.0 * math.sqrt(-p / 3.0)
        theta = math.acos(max(-1.0, min(1.0, 3.0 * q / (p * m))))
        return sorted(m * math.cos((theta - 2.0 * math.pi * k) / 3.0) for k in range(3)), None
    D = math.sqrt(q * q / 4.0 + p**3 / 27.0)
    e = float(np.cbrt(-q / 2.0 + D) + np.cbrt(-q / 2.0 - D))
    b = -e / 2.0
    c = math.sqrt(max(p + 3.0 * e * e / 4.0, 0.0))
    return [e], (b, c)


def agm_elliptic_oracle(p, q) -> float:
    """``int_{e_max}^inf dz / sqrt(z^3 + p z + q)`` through the arithmetic-geometric mean."""
    real, pair = depressed_cubic_roots(p, q)
    if pair is None:
        e1, e2, e3 = real
        return math.pi / agm(math.sqrt(e3 - e1), math.sqrt(e3 - e2))
    (e,), (b, c) = real, pair
    A = math.hypot(e - b, c)
    return math.pi / agm(math.sqrt(A), math.sqrt((A + e - b) / 2.0))


def real_period(p, q) -> float:
    """Quadrature route to the quantity returned by :func:`agm_elliptic_oracle`."""
    Q = cubic_coefficients(p, q)
    return period_integral(Q, (float(_real_roots(Q)[-1]), math.inf))
