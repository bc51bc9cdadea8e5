"""Chart residues of ``omega = (g/s) dz_0 ^ ... ^ dz_n`` along ``X = {s = 0}``.

In the chart ``s_i = ds/dz_i != 0`` the residue is

    R_i = (-1)^i (g / s_i) dz_0 ^ ... (omit i) ... ^ dz_n,

the unique ``n``-form without ``dz_i`` satisfying ``ds ^ R_i = s * omega``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ChartDegenerateError, OffHypersurfaceError, PreconditionError, SingularPointError
from .forms import DiffForm, RationalFunction, form_evaluate, wedge
from .poly import Poly

ON_X_TOLERANCE = 1e-9
GRADIENT_TOLERANCE = 1e-12


@dataclass(frozen=True)
class MeroTopForm:
    """The top form ``(g/s) dz_0 ^ ... ^ dz_n`` with a first-order pole along ``s = 0``."""

    g: Poly
    s: Poly
    nvars: int = 0

    def __post_init__(self):
        n = max(self.g.nvars, self.s.nvars, self.nvars)
        if self.s.is_zero or self.s.is_constant():
            raise PreconditionError("s must be a nonconstant polynomial")
        object.__setattr__(self, "g", self.g.extend(n))
        object.__setattr__(self, "s", self.s.extend(n))
        object.__setattr__(self, "nvars", n)

    @property
    def n(self):
        """Complex dimension of the hypersurface."""
        return self.nvars - 1

    def as_form(self) -> DiffForm:
        return DiffForm.volume(self.nvars, RationalFunction(self.g, self.s))

    def scaled(self, factor):
        return MeroTopForm(self.g * factor, self.s, self.nvars)

    def gradient(self):
        return [self.s.derivative(i) for i in range(self.nvars)]


@dataclass(frozen=True)
class ChartResidue:
    chart: int
    form: DiffForm

    def __str__(self):
        return str(self.form)


def _omit(i, n):
    return tuple(k for k in range(n) if k != i)


def chart_residue(omega: MeroTopForm, i: int) -> ChartResidue:
    n = omega.nvars
    if not 0 <= i < n:
        raise PreconditionError(f"chart index {i} out of range 0..{n - 1}")
    si = omega.s.derivative(i)
    if si.is_zero:
        raise ChartDegenerateError(f"ds/dz{i} vanishes identically; chart {i} is empty")
    coeff = RationalFunction(omega.g, si)
    if i % 2:
        coeff = -coeff
    return ChartResidue(i, DiffForm.basis(_omit(i, n), n, coeff))


def differential(p: Poly, nvars=None) -> DiffForm:
    n = p.nvars if nvars is None else max(nvars, p.nvars)
    p = p.extend(n)
    return DiffForm({(k,): p.derivative(k) for k in range(n)}, 1, n)


@dataclass(frozen=True)
class LerayCheck:
    passed: bool
    witness: tuple | None = None
    lhs: RationalFunction | None = None
    rhs: RationalFunction | None = None

    def __bool__(self):
        return self.passed


def verify_leray_identity(omega: MeroTopForm, i: int, residue: DiffForm | None = None) -> LerayCheck:
    """Check ``ds ^ R_i == s * omega`` coefficientwise by cross-multiplication.

    ``residue`` overrides the computed chart residue (for negative controls).
    """
    if residue is None:
        residue = chart_residue(omega, i).form
    n = omega.nvars
    lhs = wedge(differential(omega.s, n), residue.extend(n))
    rhs = DiffForm.volume(n, omega.g)
    for I in sorted(set(lhs.terms) | set(rhs.terms)):
        a, b = lhs.coefficient(I), rhs.coefficient(I)
        if not a.num * b.den == b.num * a.den:
            return LerayCheck(False, I, a, b)
    return LerayCheck(True)


def on_x_scale(s: Poly, point):
    return 1.0 + s.monomial_magnitude_sum(point)


def check_on_x(s: Poly, point, tol=ON_X_TOLERANCE):
    value = s.evaluate(point)
    if abs(value) > tol * on_x_scale(s, point):
        raise OffHypersurfaceError(f"|s| = {abs(value):.3g} at {list(point)} is above the on-X tolerance")
    return abs(value)


def gradient_at(s: Poly, point):
    return np.array([s.derivative(k).evaluate(point) for k in range(s.nvars)])


def evaluate_norm_density(omega: MeroTopForm, point) -> float:
    """Pointwise norm ``|g| / |grad s|`` of the residue in the coordinate metric."""
    point = np.asarray(point, dtype=complex)
    check_on_x(omega.s, point)
    grad = gradient_at(omega.s, point)
    norm = float(np.linalg.norm(grad))
    if norm < GRADIENT_TOLERANCE:
        raise SingularPointError(f"grad s vanishes at {point.tolist()}")
    return abs(omega.g.evaluate(point)) / norm


def tangent_frame(grad):
    """Unitary basis of ``ker(v -> sum grad_k v_k)``.

    Standard basis vectors are projected off the unit normal ``conj(grad)/|grad|``
    and orthonormalised, skipping the one most aligned with the normal.
    """
    grad = np.asarray(grad, dtype=complex)
    norm = np.linalg.norm(grad)
    if norm < GRADIENT_TOLERANCE:
        raise SingularPointError("degenerate tangent frame: gradient vanishes")
    nu = np.conj(grad) / norm
    skip = int(np.argmax(np.abs(nu)))
    frame = []
    for k in range(len(grad)):
        if k == skip:
            continue
        v = np.zeros(len(grad), dtype=complex)
        v[k] = 1.0
        v = v - nu * np.vdot(nu, v)
        for u in frame:
            v = v - u * np.vdot(u, v)
        vn = np.linalg.norm(v)
        if vn < 1e-8:
            raise SingularPointError("degenerate tangent frame")
        frame.append(v / vn)
    return frame


def chart_consistency_check(omega: MeroTopForm, i: int, j: int, points) -> float:
    """Max relative disagreement of ``R_i`` and ``R_j`` on tangent frames at ``points``."""
    if i == j:
        return 0.0
    Ri = chart_residue(omega, i).form
    Rj = chart_residue(omega, j).form
    worst = 0.0
    for z in points:
        z = np.asarray(getattr(z, "coords", z), dtype=complex)
        check_on_x(omega.s, z)
        frame = tangent_frame(gradient_at(omega.s, z))
        a = form_evaluate(Ri, z, frame)
        b = form_evaluate(Rj, z, frame)
        worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    return worst
