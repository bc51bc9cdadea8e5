"""Acceptance criteria, one test per criterion.

Each test prints a PASS/FAIL line; the conftest terminal summary repeats them
in one block.  ``python3 tests/test_acceptance.py`` runs just this file.
"""

import math
import random
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from golden_cases import CASES, GOLDEN, run_case
from randpoly import (
    P8_TEXT,
    brieskorn_pham,
    coefficient,
    random_poly,
    random_qh,
    random_qh_hypersurface,
)
from resform.formlang import parse_form, parse_poly, render, render_fraction_style
from resform.forms import exterior_derivative
from resform.grading import WeightMismatch, WeightSystem, infer_weights, is_quasihomogeneous
from resform.numeric import agm_elliptic_oracle, find_point_on_X, l2_probe, real_period
from resform.poly import Poly
from resform.quasihomog import (
    WeightComponent,
    classify,
    decompose_form,
    euler_identity_check,
    form_weight,
    order_of_monomial_form,
    primitive,
    second_residue_chart,
    spectrum_brieskorn_pham,
)
from resform.residue import MeroTopForm, chart_consistency_check, chart_residue, verify_leray_identity

SEED = 20240607


class Criterion:
    def __init__(self, number, title, budget):
        self.number, self.title, self.budget = number, title, budget

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        ok = exc_type is None and elapsed < self.budget
        print(f"\ncriterion {self.number:>2}: {'PASS' if ok else 'FAIL'}  {self.title}  ({elapsed:.2f}s of {self.budget}s)")
        if exc_type is None:
            assert elapsed < self.budget, f"runtime {elapsed:.2f}s over budget {self.budget}s"
        return False


def p8(p=-1, q=0):
    return parse_poly(P8_TEXT, {"p": p, "q": q})


def test_ac01_p8_residue():
    with Criterion(1, "P8 chart-2 residue is -1/(2 z0 z2) dz0^dz1", 1.0):
        omega = MeroTopForm(Poly.constant(1, 3), p8())
        R = chart_residue(omega, 2).form
        assert R == parse_form("-1/(2*z0*z2) * dz0^dz1", nvars=3)
        assert render(R) == "-1/(2*z0*z2) * dz0^dz1"


def test_ac02_p8_second_residue():
    with Criterion(2, "P8 second residue (i=2, j=0) is dz1/z2", 1.0):
        W = WeightSystem((1, 1, 1), 3)
        (c,) = decompose_form(MeroTopForm(Poly.constant(1, 3), p8()), W)
        form = second_residue_chart(c, W, chart=0, residue_chart=2)
        assert form == parse_form("dz1 / z2", nvars=3)
        assert render_fraction_style(form) == "dz1/z2"
        # z2^2 = z1^3 + p z1 + q on the slice z0 = 1
        curve = p8().substitute(0, 1)
        assert curve == parse_poly("z1^3 - z1 - z2^2", nvars=3)


def test_ac03_leray_suite():
    with Criterion(3, "Leray identity on 100 random (g, s, i), every valid chart", 10.0):
        rng = random.Random(SEED + 3)
        checked = 0
        for _ in range(100):
            n = rng.randint(1, 4)
            s = random_poly(rng, n, 6, rng.randint(1, 5))
            while s.is_constant():
                s = random_poly(rng, n, 6, rng.randint(1, 5))
            g = random_poly(rng, n, 6, rng.randint(0, 4))
            omega = MeroTopForm(g, s)
            for i in range(n):
                if s.derivative(i).is_zero:
                    continue
                assert verify_leray_identity(omega, i), (str(g), str(s), i)
                checked += 1
        assert checked >= 100


def test_ac04_primitive_suite():
    with Criterion(4, "d(primitive) reproduces 100 random components with w != 0", 20.0):
        rng = random.Random(SEED + 4)
        done = 0
        while done < 100:
            s, W = random_qh_hypersurface(rng, rng.randint(2, 4))
            w = rng.randint(-W.total + 1, 6)
            g = random_qh(rng, W.weights, w + W.degree - W.total, rng.randint(1, 3))
            if g is None or w == 0:
                continue
            omega = MeroTopForm(g, s)
            assert form_weight(omega, W) == w
            c = WeightComponent(w, omega, W)
            assert exterior_derivative(primitive(c)) == omega.as_form()
            done += 1


def test_ac05_euler_suite():
    with Criterion(5, "Euler identity on 100 random (g, s, W); perturbed weights fail", 10.0):
        rng = random.Random(SEED + 5)
        passed = controls = 0
        while passed < 100:
            s, W = random_qh_hypersurface(rng, rng.randint(2, 4))
            g = random_qh(rng, W.weights, rng.randint(0, 6), rng.randint(1, 3))
            if g is None:
                continue
            assert euler_identity_check(g, s, W)
            passed += 1
            k = rng.randrange(W.nvars)
            bumped = tuple(a + (1 if i == k else 0) for i, a in enumerate(W.weights))
            # the identity characterises quasihomogeneity of g and s
            broken = any(isinstance(is_quasihomogeneous(p, bumped), WeightMismatch) for p in (g, s))
            assert euler_identity_check(g, s, bumped) is (not broken)
            controls += broken
        assert controls >= 50


def test_ac06_order_weight():
    with Criterion(6, "alpha * d == v(omega) for 500 monomials over 20 weight systems", 5.0):
        rng = random.Random(SEED + 6)
        systems = []
        while len(systems) < 20:
            s, W = random_qh_hypersurface(rng, rng.randint(2, 4))
            if W not in [w for _, w in systems]:
                systems.append((s, W))
        for k in range(500):
            s, W = systems[k % 20]
            m = tuple(rng.randint(0, 5) for _ in range(W.nvars))
            g = Poly.monomial(m, coefficient(rng))
            alpha = order_of_monomial_form(m, W)
            assert isinstance(alpha, Fraction)
            assert alpha * W.degree == form_weight(MeroTopForm(g, s), W)


def test_ac07_spectrum():
    with Criterion(7, "Brieskorn-Pham spectra: values, cardinality, symmetry", 5.0):
        assert spectrum_brieskorn_pham((2, 3)) == [Fraction(-1, 6), Fraction(1, 6)]
        rng = random.Random(SEED + 7)
        done = 0
        while done < 30:
            b = [rng.randint(2, 12) for _ in range(rng.randint(1, 4))]
            mu = math.prod(x - 1 for x in b)
            if mu > 10**4:
                continue
            spec = spectrum_brieskorn_pham(b)
            n = len(b) - 1
            assert len(spec) == mu
            assert sorted((n - 1) - a for a in spec) == spec
            done += 1


def test_ac08_l2_probe():
    with Criterion(8, "L2 shell probe verdicts agree with classify()", 60.0):
        node = parse_poly("z0^2 - z1^2")
        cusp = parse_poly("z0^2 - z1^3")
        cases = [
            (MeroTopForm(parse_poly("z0"), node), WeightSystem((1, 1), 2)),
            (MeroTopForm(Poly.constant(1, 2), node), WeightSystem((1, 1), 2)),
            (MeroTopForm(Poly.constant(1, 2), cusp), WeightSystem((3, 2), 6)),
        ]
        results = [l2_probe(om, W, levels=6, count=2000, rng_seed=SEED) for om, W in cases]
        for (om, W), res in zip(cases, results):
            canonical = classify(om, W).canonical
            print(f"  slope {res.slope:+.4f} verdict {res.verdict} canonical {canonical}")
            assert (res.verdict == "convergent") == canonical
        node_z0, node_1, cusp_1 = results
        assert node_z0.verdict == "convergent" and abs(node_z0.slope - 2) <= 0.1 * 2
        assert node_1.verdict == "borderline" and abs(node_1.slope) <= 0.05
        assert cusp_1.verdict == "divergent" and cusp_1.slope < -0.05


def test_ac09_periods():
    with Criterion(9, "quadrature period equals AGM oracle; homothety", 5.0):
        for p, q in [(-1, 0), (-2, 1), (-1, 0.25)]:
            a, b = real_period(p, q), agm_elliptic_oracle(p, q)
            assert abs(a - b) <= 1e-8 * abs(b), (p, q, a, b)
            for lam in (0.5, 1.7, 3.0):
                scaled = agm_elliptic_oracle(lam**2 * p, lam**3 * q)
                assert abs(scaled - lam**-0.5 * b) <= 1e-10 * abs(scaled)


def test_ac10_weight_inference():
    with Criterion(10, "infer_weights on 20 Brieskorn-Pham and 10 inconsistent supports", 2.0):
        rng = random.Random(SEED + 10)
        for _ in range(20):
            b = [rng.randint(2, 15) for _ in range(rng.randint(2, 5))]
            L = math.lcm(*b)
            a = [L // x for x in b]
            g = math.gcd(*a)
            W = infer_weights(brieskorn_pham(b))
            assert W == WeightSystem(tuple(x // g for x in a), L // g), b
        for k in range(10):
            n = rng.randint(1, 4)
            base = tuple(rng.randint(0, 3) for _ in range(n))
            # a monomial and a proper multiple of it force some weight to vanish
            bigger = list(base)
            bigger[rng.randrange(n)] += rng.randint(1, 3)
            terms = {base: 1, tuple(bigger): -2}
            for _ in range(k % 3):
                terms[tuple(rng.randint(0, 4) for _ in range(n))] = 3
            assert infer_weights(Poly(terms, n)) is None, terms


def test_ac11_chart_consistency():
    with Criterion(11, "P8 residues in charts 0 and 2 agree on 50 tangent frames", 5.0):
        s = p8()
        omega = MeroTopForm(Poly.constant(1, 3), s)
        rng = np.random.default_rng(SEED + 11)
        pts = []
        while len(pts) < 50:
            seed = rng.normal(size=3) + 1j * rng.normal(size=3)
            pt = find_point_on_X(s, seed)
            if min(abs(s.derivative(k).evaluate(pt.coords)) for k in (0, 2)) > 1e-6:
                pts.append(pt)
        assert chart_consistency_check(omega, 0, 2, pts) <= 1e-9


def test_ac12_cli_golden():
    with Criterion(12, "CLI JSON for P8 and cusp fixtures is byte-stable", 5.0):
        for name in sorted(CASES):
            first = run_case(name)
            second = run_case(name)
            assert first == second
            assert first[1] == (GOLDEN / f"{name}.json").read_text(), name


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
