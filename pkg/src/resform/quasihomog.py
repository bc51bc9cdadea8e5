"""Weights, orders, primitives and second residues for quasihomogeneous ``s``.

For weights ``a_i`` and ``d = v(s)`` the weight of ``omega = (g/s) dz`` with
quasihomogeneous ``g`` is ``v(g) - v(s) + sum a_i``.  A component of nonzero
weight ``w`` is exact near the origin, ``omega = d(iota_E omega) / w`` with
``E`` the weighted Euler field.  Weight-zero components obstruct lifting; their
second residue is ``kappa * iota_E Res(omega)`` restricted to a slice
``z_j = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .errors import NoPrimitiveError, NotQuasihomogeneousError, NotSecondResidueError, PreconditionError
from .forms import DiffForm, PolyVectorField, interior_product
from .grading import (
    WeightMismatch,
    WeightSystem,
    is_quasihomogeneous,
    monomial_weight,
    weight_decompose,
    weighted_degree,
)
from .poly import Poly
from .residue import MeroTopForm, chart_residue

# Fixed by the elliptic P8 example: Res2 of (1/s) dz0^dz1^dz2 in charts i=2, j=0 is dz1/z2.
SECOND_RESIDUE_KAPPA = -2


def _require_s(omega: MeroTopForm, W: WeightSystem):
    d = is_quasihomogeneous(omega.s, W)
    if isinstance(d, WeightMismatch):
        raise NotQuasihomogeneousError(f"s = {omega.s} is not quasihomogeneous for weights {W.weights}: {d}")
    if d != W.degree:
        raise PreconditionError(f"v(s) = {d} but the weight system says d = {W.degree}")
    if len(W.weights) != omega.nvars:
        raise PreconditionError(f"{len(W.weights)} weights for {omega.nvars} variables")


def form_weight(omega: MeroTopForm, W: WeightSystem) -> int:
    _require_s(omega, W)
    if omega.g.is_zero:
        raise PreconditionError("the zero form has no weight")
    vg = is_quasihomogeneous(omega.g, W)
    if isinstance(vg, WeightMismatch):
        raise NotQuasihomogeneousError(f"g = {omega.g} is not quasihomogeneous ({vg}); decompose first")
    return vg - W.degree + W.total


@dataclass(frozen=True)
class WeightComponent:
    weight: int
    form: MeroTopForm
    weights: WeightSystem

    @property
    def g(self):
        return self.form.g


def decompose_form(omega: MeroTopForm, W: WeightSystem):
    _require_s(omega, W)
    out = []
    for vg, piece in weight_decompose(omega.g, W):
        part = MeroTopForm(piece, omega.s, omega.nvars)
        out.append(WeightComponent(vg - W.degree + W.total, part, W))
    return out


def euler_field(W) -> PolyVectorField:
    return PolyVectorField.euler(W.weights if isinstance(W, WeightSystem) else tuple(W))


def primitive(c: WeightComponent) -> DiffForm:
    """``eta / w`` with ``eta = iota_E omega``; its exterior derivative is the component."""
    if c.weight == 0:
        raise NoPrimitiveError("weight-0 component: no primitive (the residue is nonzero on the link)")
    eta = interior_product(euler_field(c.weights), c.form.as_form())
    return eta / c.weight


def euler_identity_check(g: Poly, s: Poly, W) -> bool:
    """Exact check of ``sum a_i z_i (s g_i - g s_i) == (v(g) - v(s)) g s``.

    ``v`` is the largest monomial weight, so weights that fail to make
    ``g`` or ``s`` quasihomogeneous make the identity fail.
    """
    a = W.weights if isinstance(W, WeightSystem) else tuple(W)
    n = max(g.nvars, s.nvars, len(a))
    g, s = g.extend(n), s.extend(n)
    lhs = Poly.zero(n)
    for i, ai in enumerate(a):
        zi = Poly.variable(i, n)
        lhs = lhs + zi * (s * g.derivative(i) - g * s.derivative(i)) * ai
    if g.is_zero:
        return lhs.is_zero
    rhs = g * s * (weighted_degree(g, a) - weighted_degree(s, a))
    return lhs == rhs


def order_of_monomial_form(m, W: WeightSystem) -> Fraction:
    """Order ``sum (m_i + 1) a_i / d - 1`` of ``z^m dz_0 ^ ... ^ dz_n``."""
    return Fraction(monomial_weight(tuple(x + 1 for x in m), W), W.degree) - 1


@dataclass(frozen=True)
class ComponentReport:
    weight: int
    order: Fraction
    canonical: bool
    liftable: bool
    numerator: Poly


@dataclass(frozen=True)
class ClassificationReport:
    weights: WeightSystem
    components: tuple
    canonical: bool
    ih_liftable: bool
    obstructions: tuple
    notes: tuple = field(default=())


def classify(omega: MeroTopForm, W: WeightSystem) -> ClassificationReport:
    """Canonical iff every weight component is positive; liftable iff none is zero."""
    comps = decompose_form(omega, W)
    rows = []
    for c in comps:
        orders = {order_of_monomial_form(m, W) for m in c.g.monomials()}
        assert len(orders) == 1, "quasihomogeneous component with several orders"
        alpha = orders.pop()
        assert alpha * W.degree == c.weight
        rows.append(ComponentReport(c.weight, alpha, c.weight > 0, c.weight != 0, c.g))
    canonical = all(r.canonical for r in rows)
    liftable = all(r.liftable for r in rows)
    obstructions = tuple(r.numerator for r in rows if r.weight == 0)
    notes = [
        "canonical <=> every component has positive weight (positive order)",
        "canonical <=> Res(omega) extends holomorphically to a resolution <=> |Res(omega)| is L^2",
        "ih_liftable <=> no component of weight 0",
    ]
    if not liftable:
        notes.append("weight-0 components have a nonzero second residue on the link quotient")
    return ClassificationReport(W, tuple(rows), canonical, liftable, obstructions, tuple(notes))


def spectrum_brieskorn_pham(exponents):
    """Orders ``sum (m_i+1)/b_i - 1`` over ``0 <= m_i <= b_i - 2``, sorted."""
    b = [int(x) for x in exponents]
    if not b or any(x < 2 for x in b):
        raise PreconditionError(f"Brieskorn-Pham exponents must be >= 2, got {b}")
    steps = [[Fraction(m + 1, bi) for m in range(bi - 1)] for bi in b]
    return sorted(sum(combo) - 1 for combo in product(*steps))


def milnor_number(exponents):
    out = 1
    for b in exponents:
        out *= int(b) - 1
    return out


def second_residue_chart(c: WeightComponent, W: WeightSystem | None = None, chart: int = 0,
                         residue_chart: int | None = None) -> DiffForm:
    """``kappa * iota_E R_i`` with ``z_chart = 1`` and ``dz_chart = 0``.

    ``residue_chart`` defaults to the last index whose partial is nonzero.
    """
    W = c.weights if W is None else W
    if c.weight != 0:
        raise NotSecondResidueError(f"component has weight {c.weight}; second residues need weight 0")
    n = c.form.nvars
    if not 0 <= chart < n:
        raise PreconditionError(f"slice index {chart} out of range")
    if residue_chart is None:
        residue_chart = max(k for k in range(n) if not c.form.s.derivative(k).is_zero)
    R = chart_residue(c.form, residue_chart).form
    contracted = interior_product(euler_field(W), R) * SECOND_RESIDUE_KAPPA
    return contracted.substitute(chart, 1)


def slice_curve(s: Poly, chart: int) -> Poly:
    return s.substitute(chart, 1)
