"""Command-line front end.

    resform classify --s "z0^2 - z1^3" --g z1
    resform residue --s "z1^3 + p*z0^2*z1 + q*z0^3 - z0*z2^2" --bind p=-1 --bind q=0 --chart 2
    resform spectrum 2 3
    resform l2probe --s "z0^2 - z1^2" --g z0 --csv shells.csv
    resform period --bind p=-1 --bind q=0

Every command accepts ``--json``.  Exit status is 0 on success, 2 for
precondition and parse errors, 3 for numeric failures.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from . import __version__
from .errors import NoPrimitiveError, NumericError, PreconditionError
from .formlang import parse_bindings, parse_poly, render, render_fraction_style, render_poly
from .grading import WeightSystem, infer_weights
from .poly import Poly, format_gaussian
from .quasihomog import (
    SECOND_RESIDUE_KAPPA,
    classify,
    decompose_form,
    milnor_number,
    order_of_monomial_form,
    primitive,
    second_residue_chart,
    spectrum_brieskorn_pham,
)
from .residue import GRADIENT_TOLERANCE, ON_X_TOLERANCE, MeroTopForm, chart_residue, verify_leray_identity

DEFAULT_SEED = 20240607


class Job:
    """Parsed common options: polynomials, bindings and the weight system."""

    def __init__(self, args):
        self.args = args
        self.bindings = parse_bindings(args.bind)
        self.warnings = []
        self._s = self._g = None

    def _parse_pair(self):
        if self.args.s is None:
            raise PreconditionError("--s is required for this command")
        s = parse_poly(self.args.s, self.bindings)
        g = parse_poly(self.args.g, self.bindings)
        n = max(s.nvars, g.nvars, len(self.explicit_weights or ()))
        self._s, self._g = s.extend(n), g.extend(n)

    @property
    def s(self) -> Poly:
        if self._s is None:
            self._parse_pair()
        return self._s

    @property
    def g(self) -> Poly:
        if self._g is None:
            self._parse_pair()
        return self._g

    @property
    def omega(self):
        return MeroTopForm(self.g, self.s)

    @property
    def explicit_weights(self):
        if not self.args.weights:
            return None
        try:
            return tuple(int(x) for x in self.args.weights.split(","))
        except ValueError:
            raise PreconditionError(f"--weights expects integers like 3,2, got {self.args.weights!r}") from None

    def weight_system(self) -> WeightSystem:
        explicit = self.explicit_weights
        if explicit is not None:
            W = WeightSystem.for_poly(self.s, explicit)
            if self.args.infer_weights:
                found = infer_weights(self.s)
                if found is not None and found != W:
                    self.warn(f"inferred weights {found.weights} (d={found.degree}) differ; using --weights")
            return W
        return WeightSystem.for_poly(self.s)

    def warn(self, message):
        self.warnings.append(message)
        print(f"warning: {message}", file=sys.stderr)

    def inputs(self):
        out = {"bindings": {k: format_gaussian(v) for k, v in sorted(self.bindings.items())}}
        if self.args.s is not None:
            out["s"] = render_poly(self.s)
            out["g"] = render_poly(self.g)
        return out


def _frac(x: Fraction) -> str:
    return str(Fraction(x))


def _weights_json(W):
    return None if W is None else {"weights": list(W.weights), "degree": W.degree}


def _tolerances():
    return {"on_x": ON_X_TOLERANCE, "gradient": GRADIENT_TOLERANCE}


# -- commands ----------------------------------------------------------

def cmd_classify(job):
    W = job.weight_system()
    rep = classify(job.omega, W)
    rows = [
        {"weight": c.weight, "order": _frac(c.order), "canonical": c.canonical,
         "liftable": c.liftable, "numerator": render_poly(c.numerator)}
        for c in rep.components
    ]
    results = {
        "components": rows,
        "canonical": rep.canonical,
        "ih_liftable": rep.ih_liftable,
        "obstructions": [render_poly(p) for p in rep.obstructions],
        "summary": list(rep.notes),
    }
    lines = [f"weights {W.weights}, d = {W.degree}", "weight  order  canonical  liftable  numerator"]
    for r in rows:
        lines.append(f"{r['weight']:>6}  {r['order']:>5}  {str(r['canonical']):>9}  {str(r['liftable']):>8}  {r['numerator']}")
    lines.append(f"canonical: {rep.canonical}")
    lines.append(f"ih_liftable: {rep.ih_liftable}")
    if rep.obstructions:
        lines.append("weight-0 obstructions: " + ", ".join(results["obstructions"]))
    lines.extend(rep.notes)
    return W, results, lines, {}


def _default_chart(omega):
    return max(k for k in range(omega.nvars) if not omega.s.derivative(k).is_zero)


def cmd_residue(job):
    omega = job.omega
    i = job.args.chart if job.args.chart is not None else _default_chart(omega)
    R = chart_residue(omega, i)
    check = verify_leray_identity(omega, i, R.form)
    form = R.form
    # X a coordinate hyperplane: restrict the coefficient to it
    hyperplane = _coordinate_hyperplane(omega.s)
    if hyperplane is not None:
        form = form.substitute(hyperplane, 0)
    text = render(form)
    results = {"chart": i, "residue": text, "leray_identity": check.passed, "restricted": hyperplane is not None}
    return None, results, [text], {}


def _coordinate_hyperplane(s: Poly):
    if len(s) != 1:
        return None
    (m, _), = s.items()
    if sum(m) == 1:
        return m.index(1)
    return None


def cmd_primitive(job):
    W = job.weight_system()
    comps = decompose_form(job.omega, W)
    zero = [c for c in comps if c.weight == 0]
    if zero:
        raise NoPrimitiveError(
            "weight-0 component(s) " + ", ".join(render_poly(c.g) for c in zero) + " have no primitive")
    rows, lines = [], []
    for c in comps:
        eta = render(primitive(c))
        rows.append({"weight": c.weight, "numerator": render_poly(c.g), "primitive": eta})
        lines.append(f"w = {c.weight}: {eta}")
    return W, {"components": rows}, lines, {}


def cmd_order(job):
    W = job.weight_system()
    rows, lines = [], []
    for m, _ in job.g.sorted_terms():
        alpha = order_of_monomial_form(m, W)
        mono = render_poly(Poly.monomial(m))
        rows.append({"monomial": mono, "order": _frac(alpha), "weight": _frac(alpha * W.degree)})
        lines.append(f"{mono}: order {alpha}")
    return W, {"orders": rows}, lines, {}


def cmd_spectrum(job):
    b = job.args.exponents
    if not b:
        raise PreconditionError("spectrum needs Brieskorn-Pham exponents, e.g. 'spectrum 2 3'")
    spec = spectrum_brieskorn_pham(b)
    text = "{" + ", ".join(_frac(a) for a in spec) + "}"
    mu = milnor_number(b)
    return None, {"exponents": list(b), "spectrum": [_frac(a) for a in spec], "milnor_number": mu}, [text, f"mu = {mu}"], {}


def _slice_equation(s_slice: Poly, var: int) -> str:
    """``s|slice = 0`` rearranged as ``(terms in z_var) = (rest)``."""
    lhs = Poly({m: c for m, c in s_slice.items() if m[var]}, s_slice.nvars)
    rhs = Poly({m: -c for m, c in s_slice.items() if not m[var]}, s_slice.nvars)
    if not lhs.is_zero and lhs.leading_term()[1].re < 0:
        lhs, rhs = -lhs, -rhs
    return f"{render_poly(lhs)} = {render_poly(rhs)}"


def cmd_second_residue(job):
    W = job.weight_system()
    comps = [c for c in decompose_form(job.omega, W) if c.weight == 0]
    if not comps:
        raise PreconditionError("the form has no weight-0 component")
    j = job.args.slice
    i = job.args.chart
    rows, lines = [], []
    for c in comps:
        form = second_residue_chart(c, W, chart=j, residue_chart=i)
        ichart = i if i is not None else _default_chart(c.form)
        eq = _slice_equation(c.form.s.substitute(j, 1), ichart)
        shown = render_fraction_style(form)
        rows.append({"numerator": render_poly(c.g), "second_residue": shown, "form": render(form),
                     "curve": eq, "residue_chart": ichart, "slice": j})
        lines.append(f"{shown} on {eq}")
    return W, {"components": rows, "kappa": SECOND_RESIDUE_KAPPA}, lines, {}


def cmd_l2probe(job):
    from .numeric.shells import SLOPE_THRESHOLD, l2_probe

    a = job.args
    W = job.weight_system()
    seed = a.seed
    res = l2_probe(job.omega, W, a.r0, a.levels, a.count, seed, threads=a.threads, method=a.method)
    canonical = classify(job.omega, W).canonical
    agrees = (res.verdict == "convergent") == canonical
    shells = [{"r": r, "mass": m, "stderr": e} for r, m, e in res.rows()]
    results = {
        "shells": shells, "slope": res.slope, "verdict": res.verdict, "weight": res.weight,
        "predicted_slope": res.predicted_slope, "mismatch": res.mismatch,
        "canonical": canonical, "agrees_with_classify": agrees, "method": res.method,
    }
    lines = ["r  mass  stderr"] + [f"{r:.6g}  {m:.6g}  {e:.3g}" for r, m, e in res.rows()]
    lines.append(f"slope {res.slope:.4f}  verdict {res.verdict}")
    if res.predicted_slope is not None:
        lines.append(f"predicted slope {res.predicted_slope:g}, relative mismatch {res.mismatch:.3g}")
    lines.append(f"classify canonical={canonical}; agreement {agrees}")
    if a.csv:
        with open(a.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["r", "mass", "stderr"])
            w.writerows([repr(r), repr(m), repr(e)] for r, m, e in res.rows())
    diag = {"slope_threshold": SLOPE_THRESHOLD, "seed": seed, "count": a.count, "levels": a.levels, "r0": a.r0}
    return W, results, lines, diag


def cmd_period(job):
    from .numeric.periods import RELATIVE_TOLERANCE, agm_elliptic_oracle, real_period

    try:
        p, q = job.bindings["p"], job.bindings["q"]
    except KeyError as exc:
        raise PreconditionError(f"period needs --bind {exc.args[0]}=<rational>") from None
    if not (p.is_real and q.is_real):
        raise PreconditionError("period needs real p and q")
    pf, qf = float(p.re), float(q.re)
    quad_value = real_period(pf, qf)
    agm_value = agm_elliptic_oracle(pf, qf)
    rel = abs(quad_value - agm_value) / abs(agm_value)
    results = {"quadrature": quad_value, "agm": agm_value, "relative_difference": rel,
               "cubic": f"z^3 + ({format_gaussian(p)})*z + ({format_gaussian(q)})"}
    lines = [f"quadrature {quad_value!r}", f"agm        {agm_value!r}", f"relative difference {rel:.3g}"]
    return None, results, lines, {"quadrature_relative_tolerance": RELATIVE_TOLERANCE}


COMMANDS = {
    "classify": cmd_classify,
    "residue": cmd_residue,
    "primitive": cmd_primitive,
    "order": cmd_order,
    "spectrum": cmd_spectrum,
    "second-residue": cmd_second_residue,
    "l2probe": cmd_l2probe,
    "period": cmd_period,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--s", help="hypersurface polynomial")
    common.add_argument("--g", default="1", help="numerator polynomial (default 1)")
    common.add_argument("--bind", action="append", default=[], metavar="NAME=RATIONAL")
    common.add_argument("--weights", help="comma-separated weights, e.g. 3,2")
    common.add_argument("--infer-weights", action="store_true")
    common.add_argument("--chart", type=int, help="residue chart index")
    common.add_argument("--slice", type=int, default=0, help="slice index j (z_j = 1)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--json", action="store_true")
    common.add_argument("--out", metavar="FILE")

    parser = argparse.ArgumentParser(prog="resform", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"resform {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "spectrum":
            p.add_argument("exponents", nargs="*", type=int)
        if name == "l2probe":
            p.add_argument("--r0", type=float, default=0.25)
            p.add_argument("--levels", type=int, default=6)
            p.add_argument("--count", type=int, default=2000)
            p.add_argument("--method", choices=["montecarlo", "curve"], default="montecarlo")
            p.add_argument("--csv", metavar="FILE", help="write (r, mass, stderr) rows")
    return parser


def _dump(report):
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"


def run(args):
    """Execute one parsed command and return the text to emit."""
    job = Job(args)
    W, results, lines, diag = COMMANDS[args.command](job)
    if not args.json:
        return "\n".join(lines) + "\n"
    return _dump({
        "version": __version__,
        "command": args.command,
        "inputs": job.inputs(),
        "weights": _weights_json(W),
        "results": results,
        "diagnostics": {"seed": args.seed, "tolerances": {**_tolerances(), **diag}, "warnings": job.warnings},
    })


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = run(args)
    except (PreconditionError, NumericError) as exc:
        code = 2 if isinstance(exc, PreconditionError) else 3
        kind = "error" if code == 2 else "numeric error"
        print(f"{kind}: {exc}", file=sys.stderr)
        if args.json:
            _emit(_dump({"version": __version__, "command": args.command, "error": {
                "type": type(exc).__name__, "message": str(exc), "exit_code": code}}), args.out)
        return code
    _emit(text, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
