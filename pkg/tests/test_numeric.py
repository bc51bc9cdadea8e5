import math

import numpy as np
import pytest

from resform.errors import ConvergenceError, PreconditionError, SamplingError, SingularPointError
from resform.formlang import parse_poly
from resform.grading import WeightSystem
from resform.numeric import (
    agm_elliptic_oracle,
    find_point_on_X,
    isolatedness_probe,
    l2_probe,
    period_integral,
    real_period,
    sample_shell,
    shell_mass,
    shell_mass_curve,
)
from resform.numeric.periods import agm, cubic_coefficients
from resform.numeric.shells import verdict_for_slope, weighted_radius
from resform.poly import Poly
from resform.residue import MeroTopForm

NODE_W = WeightSystem((1, 1), 2)


class TestPoints:
    def test_linear(self):
        pt = find_point_on_X(parse_poly("z0", nvars=2), [0.3, 1])
        assert np.allclose(pt.coords, [0, 1])

    def test_cusp(self, cusp):
        pt = find_point_on_X(cusp, [1.01, 0.98])
        assert abs(cusp.evaluate(pt.coords)) <= 1e-9
        assert pt.grad_norm > 1e-12

    def test_cusp_origin(self, cusp):
        with pytest.raises(SingularPointError):
            find_point_on_X(cusp, [0, 0])

    def test_non_convergence(self):
        with pytest.raises(ConvergenceError):
            find_point_on_X(parse_poly("z0^2 + 1", nvars=2), [0.5, 0.0], max_iter=3)


class TestIsolatedness:
    def test_cusp(self, cusp):
        assert isolatedness_probe(cusp, 1.0, 32, rng_seed=1)

    def test_line_of_singularities(self):
        res = isolatedness_probe(parse_poly("z0^2", nvars=2), 1.0, 32, rng_seed=1)
        assert not res
        assert abs(res.counterexample[0]) < 1e-8 and abs(res.counterexample[1]) > 1e-3

    def test_node(self, node):
        assert isolatedness_probe(node, 1.0, 32, rng_seed=1)


class TestShells:
    def test_hyperplane(self):
        s = parse_poly("z0", nvars=2)
        pts = sample_shell(s, NODE_W, 0.3, 100, rng_seed=4)
        Z = np.array([p.coords for p in pts])
        assert np.all(Z[:, 0] == 0)
        rho = weighted_radius(Z, (1, 1))
        assert np.all((rho >= 0.3) & (rho < 0.6))

    def test_node_sample(self, node):
        pts = sample_shell(node, NODE_W, 0.1, 500, rng_seed=11)
        assert len(pts) >= 500
        assert max(p.residual for p in pts) <= 1e-9 * 2

    def test_deterministic(self, node):
        a = sample_shell(node, NODE_W, 0.1, 200, rng_seed=3)
        b = sample_shell(node, NODE_W, 0.1, 200, rng_seed=3)
        assert len(a) == len(b)
        assert all(np.array_equal(x.coords, y.coords) for x, y in zip(a, b))

    def test_low_acceptance(self):
        # z0 - 10 has no points near the origin
        with pytest.raises(SamplingError):
            sample_shell(parse_poly("z0 - 10", nvars=2), NODE_W, 0.1, 10, rng_seed=0)

    def test_masses(self, node):
        pts = sample_shell(node, NODE_W, 0.2, 2000, rng_seed=9)
        zero = shell_mass(MeroTopForm(Poly.zero(2), node), pts, 0.2)
        assert zero.value == 0
        with pytest.raises(PreconditionError):
            shell_mass(MeroTopForm(Poly.constant(1, 2), node), [], 0.2)

    def test_node_ratio(self, node):
        omega = MeroTopForm(parse_poly("z0"), node)
        big = shell_mass(omega, sample_shell(node, NODE_W, 0.2, 2000, rng_seed=1), 0.2).value
        small = shell_mass(omega, sample_shell(node, NODE_W, 0.1, 2000, rng_seed=2), 0.1).value
        assert small / big == pytest.approx(0.25, rel=0.15)

    def test_p8_ratio(self, p8_omega):
        s, W = p8_omega.s, WeightSystem((1, 1, 1), 3)
        big = shell_mass(p8_omega, sample_shell(s, W, 0.2, 2000, rng_seed=1), 0.2).value
        small = shell_mass(p8_omega, sample_shell(s, W, 0.1, 2000, rng_seed=2), 0.1).value
        assert small / big == pytest.approx(1.0, rel=0.15)

    def test_monte_carlo_matches_curve_quadrature(self, cusp, cusp_weights):
        for g in ("1", "z1"):
            omega = MeroTopForm(parse_poly(g, nvars=2), cusp)
            exact = shell_mass_curve(omega, cusp_weights, 0.1)
            est = shell_mass(omega, sample_shell(cusp, cusp_weights, 0.1, 4000, rng_seed=5), 0.1)
            assert abs(est.value - exact) <= 4 * est.stderr

    def test_curve_node_closed_form(self, node):
        # lines t -> (t, +-t): |grad|^2 = 8|t|^2, |tangent|^2 = 2, so each line
        # contributes the integral of 1/(4|t|^2) over r <= |t| < 2r
        omega = MeroTopForm(Poly.constant(1, 2), node)
        exact = 2 * 2 * math.pi * (1 / 4) * math.log(2)
        assert shell_mass_curve(omega, NODE_W, 0.37) == pytest.approx(exact, rel=1e-9)


def test_verdicts():
    assert verdict_for_slope(0.2) == "convergent"
    assert verdict_for_slope(-0.2) == "divergent"
    assert verdict_for_slope(0.05) == "borderline"


def test_probe_thread_independence(node):
    omega = MeroTopForm(parse_poly("z0"), node)
    a = l2_probe(omega, NODE_W, levels=3, count=300, rng_seed=17, threads=1)
    b = l2_probe(omega, NODE_W, levels=3, count=300, rng_seed=17, threads=3)
    assert a.masses == b.masses and a.slope == b.slope


def test_probe_requires_single_component(cusp, cusp_weights):
    from resform.errors import NotQuasihomogeneousError

    with pytest.raises(NotQuasihomogeneousError):
        l2_probe(MeroTopForm(parse_poly("1 + z1", nvars=2), cusp), cusp_weights, levels=2, count=50)


class TestPeriods:
    def test_agm_matches_quadrature(self):
        assert real_period(-1, 0) == pytest.approx(agm_elliptic_oracle(-1, 0), rel=1e-8)

    def test_zero_numerator(self):
        assert period_integral(cubic_coefficients(-1, 0), (1, math.inf), numerator=0) == 0.0

    def test_scaling(self):
        c = 2.5
        base = period_integral([1, 0, -1, 0], (1, math.inf))
        scaled = period_integral([1, 0, -c * c, 0], (c, math.inf))
        assert scaled == pytest.approx(base * c**-0.5, rel=1e-9)

    def test_bounded_path(self):
        # for z^3 - z the two real cycles have the same length
        a = period_integral([1, 0, -1, 0], (-1, 0))
        assert a == pytest.approx(period_integral([1, 0, -1, 0], (1, math.inf)), rel=1e-9)

    def test_interior_root(self):
        with pytest.raises(PreconditionError):
            period_integral([1, 0, -1, 0], (-1, 1))

    def test_endpoint_must_be_root(self):
        with pytest.raises(PreconditionError):
            period_integral([1, 0, -1, 0], (2, math.inf))

    def test_divergent_numerator(self):
        with pytest.raises(PreconditionError):
            period_integral([1, 0, -1, 0], (1, math.inf), numerator=[1, 0])

    def test_double_root(self):
        with pytest.raises(PreconditionError):
            agm_elliptic_oracle(-3, 2)

    def test_homothety(self):
        lam = 1.9
        for p, q in ((-1, 0), (-2, 1), (1, 0.5)):
            ref = agm_elliptic_oracle(p, q)
            assert agm_elliptic_oracle(lam**2 * p, lam**3 * q) == pytest.approx(lam**-0.5 * ref, rel=1e-10)

    def test_agm_basic(self):
        assert agm(1.0, 1.0) == 1.0
        assert agm(1.0, math.sqrt(2.0)) == pytest.approx(1.19814023473559220744, rel=1e-15)

    def test_poly_input(self):
        Q = parse_poly("z1^3 - z1")
        assert period_integral(Q, (1, math.inf), Poly.constant(1, 2)) == pytest.approx(agm_elliptic_oracle(-1, 0), rel=1e-10)
