"""Points on ``X = {s = 0}``: Newton projection and a search for non-isolated singularities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConvergenceError, SingularPointError
from ..poly import Poly
from ..residue import GRADIENT_TOLERANCE, ON_X_TOLERANCE, on_x_scale


@dataclass(frozen=True)
class PointOnX:
    """A regular point of ``X``.

    ``chart``, ``weight`` and ``draw`` are set by the shell sampler: the
    projection coordinate used to reach the point, its area-per-draw weight
    and the index of the draw that produced it.
    """

    coords: np.ndarray
    residual: float
    grad_norm: float
    chart: int | None = None
    weight: float | None = None
    draw: int | None = None

    def __iter__(self):
        return iter(self.coords)


class CompiledPoly:
    """``s`` and its gradient as vectorised evaluators."""

    def __init__(self, s: Poly):
        self.poly = s
        self.nvars = s.nvars
        self.f = s.compile()
        self.grad = [s.derivative(k).compile() for k in range(s.nvars)]
        self._abs_coeffs = np.array([abs(complex(c)) for _, c in s.items()])
        self._exps = np.array(s.monomials(), dtype=np.int64).reshape(len(s), s.nvars)

    def value(self, Z):
        return self.f(Z)

    def gradient(self, Z):
        Z = np.atleast_2d(Z)
        return np.stack([g(Z) for g in self.grad], axis=1)

    def scale(self, Z):
        """``1 + sum |c_m| |z^m|`` row by row."""
        Z = np.abs(np.atleast_2d(np.asarray(Z, dtype=complex)))
        mags = np.prod(Z[:, None, :] ** self._exps[None, :, :], axis=2)
        return 1.0 + mags @ self._abs_coeffs


def find_point_on_X(s: Poly, seed, tol=ON_X_TOLERANCE, max_iter=50) -> PointOnX:
    """Newton iteration in the coordinate with the largest partial at ``seed``."""
    z = np.array(seed, dtype=complex)
    grads = [s.derivative(k) for k in range(s.nvars)]
    g0 = np.array([g.evaluate(z) for g in grads])
    if np.linalg.norm(g0) < GRADIENT_TOLERANCE:
        raise SingularPointError(f"grad s vanishes at the seed {z.tolist()}")
    k = int(np.argmax(np.abs(g0)))
    for _ in range(max_iter + 1):
        val = s.evaluate(z)
        if abs(val) <= tol * on_x_scale(s, z):
            grad = np.array([g.evaluate(z) for g in grads])
            gn = float(np.linalg.norm(grad))
            if gn < GRADIENT_TOLERANCE:
                raise SingularPointError(f"Newton landed on a singular point {z.tolist()}")
            return PointOnX(z, abs(val), gn)
        dk = grads[k].evaluate(z)
        if dk == 0:
            raise ConvergenceError(f"ds/dz{k} vanished during Newton iteration")
        z[k] -= val / dk
    raise ConvergenceError(f"Newton did not reach |s| <= {tol:g} in {max_iter} iterations")


@dataclass(frozen=True)
class IsolatednessResult:
    plausible: bool
    counterexample: np.ndarray | None = None
    trials: int = 0

    def __bool__(self):
        return self.plausible


def isolatedness_probe(s: Poly, box_radius=1.0, trials=64, rng_seed=0, max_iter=60) -> IsolatednessResult:
    """Search for singular points of ``X`` other than the origin inside a box.

    Gauss-Newton on ``grad s = 0`` from random starts.  ``plausible`` only
    means no counterexample was found.
    """
    n = s.nvars
    grad = [s.derivative(k) for k in range(n)]
    hess = [[g.derivative(j) for j in range(n)] for g in grad]
    rng = np.random.default_rng(rng_seed)
    R = float(box_radius)
    starts = R * (rng.uniform(-1, 1, (trials, n)) + 1j * rng.uniform(-1, 1, (trials, n)))
    for z in starts:
        for _ in range(max_iter):
            F = np.array([g.evaluate(z) for g in grad])
            scale = on_x_scale(s, z)
            if np.linalg.norm(F) <= 1e-12 * scale:
                break
            J = np.array([[h.evaluate(z) for h in row] for row in hess])
            step = np.linalg.lstsq(J, F, rcond=None)[0]
            z = z - step
            if not np.all(np.isfinite(z)) or np.max(np.abs(z)) > 10 * R:
                break
        else:
            continue
        if not np.all(np.isfinite(z)):
            continue
        F = np.array([g.evaluate(z) for g in grad])
        scale = on_x_scale(s, z)
        away = np.linalg.norm(z) > 1e-3 * R
        inside = np.max(np.abs(z.real)) <= R and np.max(np.abs(z.imag)) <= R
        if away and inside and np.linalg.norm(F) <= 1e-10 * scale and abs(s.evaluate(z)) <= 1e-9 * scale:
            return IsolatednessResult(False, z, trials)
    return IsolatednessResult(True, None, trials)
