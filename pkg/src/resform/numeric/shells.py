"""Square-integrability of the residue near a quasihomogeneous singular point.

Shells are bands ``r <= rho(z) < 2r`` of the weighted radius
``rho(z) = max_i |z_i|^(1/a_i)``.  The shell mass is the residue's squared
norm integrated over ``X`` in the band,

    S(r) = int |g|^2 / |grad s|^2 dA.

Seen as a graph over the coordinates other than ``z_k`` the area element of
``X`` is ``|grad s|^2 / |s_k|^2`` times Lebesgue measure, so the integrand
becomes ``|g / s_k|^2``.  ``X`` is split into pieces by which ``k`` maximises
the scale-free ratio ``|s_k| / rho^(d - a_k)``; each piece is integrated over
its own projection by Monte Carlo.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from ..errors import NotQuasihomogeneousError, PreconditionError, QuadratureError, SamplingError
from ..grading import WeightMismatch, WeightSystem, is_quasihomogeneous
from ..poly import Poly
from ..residue import GRADIENT_TOLERANCE, ON_X_TOLERANCE, MeroTopForm
from .points import CompiledPoly, PointOnX

SLOPE_THRESHOLD = 0.05
DEFAULT_BLOCK = 256
NEWTON_POLISH_STEPS = 3


class ShellSample(list):
    """List of :class:`PointOnX` plus the bookkeeping needed for error bars."""

    def __init__(self, points=(), r=None, rounds=None, acceptance=None):
        super().__init__(points)
        self.r = r
        self.rounds = rounds
        self.acceptance = acceptance


def weighted_radius(Z, weights):
    Z = np.abs(np.atleast_2d(Z))
    a = np.asarray(weights, dtype=float)
    return np.max(Z ** (1.0 / a), axis=1)


def _univariate_coefficients(s: Poly, k, Z):
    """Coefficients (highest first) of ``s`` as a polynomial in ``z_k`` at rows of ``Z``."""
    D = s.degree_in(k)
    C = np.zeros((Z.shape[0], D + 1), dtype=complex)
    for m, c in s.items():
        term = np.full(Z.shape[0], complex(c))
        for i, e in enumerate(m):
            if i != k and e:
                term = term * Z[:, i] ** e
        C[:, D - m[k]] += term
    return C


def _all_roots(C):
    """Roots of each row of ``C``; rows with a vanishing leading coefficient lose roots at infinity."""
    B, D1 = C.shape
    D = D1 - 1
    lead = C[:, 0]
    ok = np.abs(lead) > 1e-300
    roots = np.full((B, D), np.nan + 0j)
    if D == 1:
        roots[ok, 0] = -C[ok, 1] / lead[ok]
        return roots
    if np.any(ok):
        monic = C[ok, 1:] / lead[ok, None]
        comp = np.zeros((monic.shape[0], D, D), dtype=complex)
        comp[:, 0, :] = -monic
        comp[:, np.arange(1, D), np.arange(D - 1)] = 1.0
        roots[ok] = np.linalg.eigvals(comp)
    for b in np.flatnonzero(~ok):
        r = np.roots(C[b])
        roots[b, : len(r)] = r
    return roots


def _block_rng(rng_seed, chart, block):
    return np.random.default_rng(np.random.SeedSequence([int(rng_seed), int(chart), int(block)]))


def sample_shell(s: Poly, W: WeightSystem, r: float, count: int, rng_seed: int = 0,
                 block: int = DEFAULT_BLOCK, max_blocks: int | None = None) -> ShellSample:
    """Sample regular points of ``X`` with ``r <= rho < 2r``.

    Each draw picks the coordinates other than ``z_k`` uniformly in the
    polydisc ``|z_i| <= (2r)^(a_i)``, solves ``s = 0`` for ``z_k`` and polishes
    every root with Newton steps.  Draws come in blocks; block ``b`` of chart
    ``k`` uses its own seed stream ``(rng_seed, k, b)``, so the output does not
    depend on evaluation order.  Sampling stops after the first block that
    brings the number of accepted points to ``count``.
    """
    if r <= 0:
        raise PreconditionError("shell radius must be positive")
    n = s.nvars
    a = np.asarray(W.weights, dtype=float)
    d = W.degree
    cp = CompiledPoly(s)
    charts = [k for k in range(n) if not s.derivative(k).is_zero and s.degree_in(k) > 0]
    if not charts:
        raise PreconditionError("s is constant")
    radii = (2.0 * r) ** a
    volumes = {k: float(np.prod([math.pi * radii[i] ** 2 for i in range(n) if i != k])) for k in charts}
    if max_blocks is None:
        max_blocks = max(64, math.ceil(100 * count / block))

    accepted = []
    draws = 0
    b = 0
    while True:
        for k in charts:
            rng = _block_rng(rng_seed, k, b)
            U = rng.random((block, n))
            V = rng.random((block, n))
            Z = radii * np.sqrt(U) * np.exp(2j * math.pi * V)
            C = _univariate_coefficients(s, k, Z)
            roots = _all_roots(C)
            D = roots.shape[1]
            P = np.repeat(Z, D, axis=0)
            P[:, k] = roots.reshape(-1)
            idx = np.repeat(np.arange(block) + b * block, D)
            finite = np.isfinite(P[:, k])
            P, idx = P[finite], idx[finite]
            for _ in range(NEWTON_POLISH_STEPS):
                val = cp.value(P)
                dk = cp.grad[k](P)
                step = np.where(dk != 0, val / np.where(dk != 0, dk, 1), 0)
                P[:, k] -= step
            val = np.abs(cp.value(P))
            grad = cp.gradient(P)
            gn = np.linalg.norm(grad, axis=1)
            rho = weighted_radius(P, a)
            on_x = val <= ON_X_TOLERANCE * cp.scale(P)
            regular = gn > GRADIENT_TOLERANCE
            band = (rho >= r) & (rho < 2 * r)
            ratio = np.abs(grad) / np.maximum(rho, 1e-300)[:, None] ** (d - a)[None, :]
            mine = np.argmax(ratio, axis=1) == k
            keep = on_x & regular & band & mine
            for j in np.flatnonzero(keep):
                accepted.append((k, int(idx[j]), P[j].copy(), float(val[j]), float(gn[j])))
            draws += block
        b += 1
        rate = len(accepted) / draws
        if len(accepted) >= count:
            break
        if (b >= 4 and rate < 0.01) or b >= max_blocks:
            raise SamplingError(f"shell sampler accepted {len(accepted)} of {draws} draws at r={r:g}")
    rounds = b * block
    points = [PointOnX(z, res, g, chart=k, weight=volumes[k] / rounds, draw=i) for k, i, z, res, g in accepted]
    return ShellSample(points, r=r, rounds=rounds, acceptance=len(accepted) / draws)


@dataclass(frozen=True)
class ShellMass:
    value: float
    stderr: float
    npoints: int

    def __float__(self):
        return self.value


def shell_mass(omega: MeroTopForm, points, r: float | None = None) -> ShellMass:
    """Monte Carlo estimate of the residue's squared norm over one shell."""
    if len(points) == 0:
        raise PreconditionError("empty point list")
    if any(p.chart is None or p.weight is None for p in points):
        raise PreconditionError("shell_mass needs points produced by sample_shell")
    Z = np.array([p.coords for p in points])
    g = omega.g.compile()(Z)
    charts = np.array([p.chart for p in points])
    dk = np.empty(len(points), dtype=complex)
    for k in set(charts.tolist()):
        sel = charts == k
        dk[sel] = omega.s.derivative(k).compile()(Z[sel])
    w = np.array([p.weight for p in points])
    contrib = w * np.abs(g) ** 2 / np.abs(dk) ** 2
    value = float(contrib.sum())
    # per-draw totals -> standard error of the mean over draws
    groups = {}
    for c, k, i in zip(contrib, charts, (p.draw for p in points)):
        groups[(k, i)] = groups.get((k, i), 0.0) + c
    rounds = getattr(points, "rounds", None)
    var = 0.0
    for k in set(charts.tolist()):
        y = np.array([v for (kk, _), v in groups.items() if kk == k])
        var += float(np.sum(y**2))
        if rounds:
            var -= float(y.sum()) ** 2 / rounds
    return ShellMass(value, math.sqrt(max(var, 0.0)), len(points))


def _curve_orbits(s: Poly, W: WeightSystem):
    """Representatives ``P`` of the C*-orbits in ``X - {0}`` with stabiliser orders."""
    a0, a1 = W.weights
    coeffs = np.zeros(s.degree_in(0) + 1, dtype=complex)
    slice1 = s.substitute(1, 1)
    D = len(coeffs) - 1
    for m, c in slice1.items():
        coeffs[D - m[0]] += complex(c)
    while len(coeffs) > 1 and coeffs[0] == 0:
        coeffs = coeffs[1:]
    orbits = []
    keys = []
    for c in (np.roots(coeffs) if len(coeffs) > 1 else []):
        key = c**a1
        if any(abs(key - k) <= 1e-9 * max(1.0, abs(k)) for k in keys):
            continue
        keys.append(key)
        orbits.append((np.array([c, 1.0], dtype=complex), math.gcd(a1, a0) if abs(c) > 1e-12 else a1))
    if s.substitute(1, 0).is_zero:
        orbits.append((np.array([1.0, 0.0], dtype=complex), a0))
    return orbits


def shell_mass_curve(omega: MeroTopForm, W: WeightSystem, r: float, angular_nodes: int = 64) -> float:
    """Deterministic shell mass for plane curves via the orbit parametrisation.

    Every orbit ``t -> (t^a0 P0, t^a1 P1)`` is a holomorphic curve, so its area
    element is ``|d/dt (t.P)|^2`` times Lebesgue measure in ``t``.
    """
    if omega.nvars != 2:
        raise PreconditionError("shell_mass_curve handles plane curves only")
    a = np.asarray(W.weights)
    g = omega.g
    grads = [omega.s.derivative(k) for k in range(2)]
    theta = 2 * math.pi * np.arange(angular_nodes) / angular_nodes
    total = 0.0
    for P, stab in _curve_orbits(omega.s, W):
        rhoP = float(np.max(np.abs(P) ** (1.0 / a)))

        def ring(tau):
            t = tau * np.exp(1j * theta)
            pts = [(t[j] ** a[0] * P[0], t[j] ** a[1] * P[1]) for j in range(angular_nodes)]
            vals = []
            for j, z in enumerate(pts):
                gv = g.evaluate(z)
                gr = [h.evaluate(z) for h in grads]
                tangent = [a[i] * t[j] ** (a[i] - 1) * P[i] for i in range(2)]
                vals.append(abs(gv) ** 2 / (abs(gr[0]) ** 2 + abs(gr[1]) ** 2)
                            * (abs(tangent[0]) ** 2 + abs(tangent[1]) ** 2))
            return float(np.mean(vals)) * 2 * math.pi * tau

        value, err = quad(ring, r / rhoP, 2 * r / rhoP, epsabs=0, epsrel=1e-10, limit=200)
        if not math.isfinite(value):
            raise QuadratureError("curve shell quadrature failed")
        total += value / stab
    return total


@dataclass(frozen=True)
class ProbeResult:
    radii: tuple
    masses: tuple
    stderrs: tuple
    slope: float
    verdict: str
    weight: int
    predicted_slope: float | None = None
    mismatch: float | None = None
    method: str = "montecarlo"
    counts: tuple = field(default=())

    def rows(self):
        return list(zip(self.radii, self.masses, self.stderrs))


def verdict_for_slope(beta, threshold=SLOPE_THRESHOLD):
    if beta > threshold:
        return "convergent"
    if beta < -threshold:
        return "divergent"
    return "borderline"


def _level_seed(rng_seed, level):
    return int(np.random.SeedSequence([int(rng_seed), int(level)]).generate_state(1)[0])


def l2_probe(omega: MeroTopForm, W: WeightSystem, r0: float = 0.25, levels: int = 6,
             count: int = 2000, rng_seed: int = 0, threads: int = 1,
             method: str = "montecarlo") -> ProbeResult:
    """Fit ``log S(r) ~ beta log r`` over shells ``r_k = r0 2^-k``.

    ``beta > 0`` means the shell masses sum to a finite total near the origin.
    """
    for p, name in ((omega.s, "s"), (omega.g, "g")):
        if p.is_zero:
            raise PreconditionError(f"{name} is zero")
        v = is_quasihomogeneous(p, W)
        if isinstance(v, WeightMismatch):
            raise NotQuasihomogeneousError(f"{name} is not quasihomogeneous ({v}); decompose first")
    weight = is_quasihomogeneous(omega.g, W) - W.degree + W.total
    radii = [r0 * 2.0**-k for k in range(levels)]

    def one(k):
        r = radii[k]
        if method == "curve":
            return shell_mass_curve(omega, W, r), 0.0, 0
        if method != "montecarlo":
            raise PreconditionError(f"unknown probe method {method!r}")
        pts = sample_shell(omega.s, W, r, count, _level_seed(rng_seed, k))
        m = shell_mass(omega, pts, r)
        return m.value, m.stderr, m.npoints

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, range(levels)))
    else:
        results = [one(k) for k in range(levels)]
    masses = [m for m, _, _ in results]
    if any(m <= 0 for m in masses):
        raise PreconditionError("a shell mass vanished; the form is zero on X")
    slope = float(np.polyfit(np.log(radii), np.log(masses), 1)[0])
    predicted = mismatch = None
    if len(set(W.weights)) == 1:
        predicted = 2.0 * weight
        mismatch = abs(slope - predicted) / abs(predicted) if predicted else abs(slope)
    return ProbeResult(tuple(radii), tuple(masses), tuple(e for _, e, _ in results), slope,
                       verdict_for_slope(slope), weight, predicted, mismatch, method,
                       tuple(c for _, _, c in results))
