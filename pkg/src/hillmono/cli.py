"""Command line front end.

Subcommands wrap the library modules one to one: monodromy, kepler
{to-orbit, to-potential}, synthesize, spectrum, boundary {separated,
general}, classify, plotdata, and sample-potential. Inputs are JSON or CSV
files as described in the README; outputs go to --output or stdout.

Exit codes: 0 success, 2 malformed input or domain error, 3 numerical
invariant failure. All floats are printed with 17 significant digits so
outputs are deterministic and round-trip exactly.
"""

import argparse
import math
import os
import sys

import numpy as np

from . import boundary
from .cover import CoverElement, classify, element_to_dict
from .errors import DomainError, NumericalInvariantError
from .integrate import DEFAULT_STEPS, MIN_STEPS, monodromy
from .kepler import (curve_of, orbit_from_dict, orbit_of, orbit_to_dict,
                     potential_of_orbit, save_curve_csv)
from .potentials import Potential, load_potential
from .serialize import dumps_json, fmt_float, read_json
from .spectral import DEFAULT_SCAN_STEPS, oscillation_eigenvalues
from .synthesis import potential_with_monodromy

TAU = math.tau

RESIDUAL_TOL = 1e-7
SYNTH_VERIFY_TOL = 1e-6
PLOT_IDENTITY_TOL = 1e-12


def _steps_arg(text):
    steps = int(text)
    if steps < MIN_STEPS:
        raise argparse.ArgumentTypeError(f"steps must be >= {MIN_STEPS}")
    return steps


def _tol_arg(text):
    tol = float(text)
    if not tol > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return tol


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma list of floats: {text!r}")


def _write_text(text, path):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _stratum_dict(stratum):
    return {"kind": stratum.kind,
            "component_index": stratum.component_index,
            "trace": stratum.trace}


def _load_element(path):
    """Cover element from a file in element or monodromy-output format."""
    data = read_json(path)
    if not isinstance(data, dict):
        raise DomainError("element file must hold a JSON object")
    if "m" not in data and "matrix" in data:
        mat = data["matrix"]
        data = dict(data, m=[mat[0][0], mat[0][1], mat[1][0], mat[1][1]])
    try:
        raw = data["m"]
        omega = float(data["omega"])
        comp = data.get("component", "+")
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise DomainError(f"malformed element file: {exc}") from None
    if comp not in ("+", "-"):
        raise DomainError(f"component must be '+' or '-', got {comp!r}")
    mat = np.array(raw, dtype=float).reshape(2, 2)
    return CoverElement(mat, omega, component=1 if comp == "+" else -1)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_monodromy(args):
    q = load_potential(args.potential)
    element, theta_r = monodromy(q, args.steps)
    m = element.mat
    out = {
        "matrix": [[m[0, 0], m[0, 1]], [m[1, 0], m[1, 1]]],
        "omega": element.omega,
        "component": "+" if element.component == 1 else "-",
        "theta_R": theta_r,
        "trace": element.trace,
        "stratum": _stratum_dict(classify(element)),
    }
    _write_text(dumps_json(out), args.output)
    return 0


def cmd_kepler_to_orbit(args):
    q = load_potential(args.potential)
    orbit = orbit_of(curve_of(q, args.steps), args.nodes)
    _write_text(dumps_json(orbit_to_dict(orbit)), args.output)
    return 0


def cmd_kepler_to_potential(args):
    orbit = orbit_from_dict(read_json(args.orbit))
    q = potential_of_orbit(orbit, args.steps)
    _write_text(dumps_json(q.to_dict()), args.output)
    return 0


def cmd_synthesize(args):
    target = _load_element(args.target)
    q = potential_with_monodromy(target, args.coeffs, args.steps)
    # Verify at the resolution the potential was synthesized at; stiff
    # targets need more than the default step count.
    check, theta_r = monodromy(q, args.steps or q.samples.size - 1)
    residual = max(float(np.abs(check.mat - target.mat).max()),
                   abs(check.omega - target.omega))
    if residual > args.verify_tol:
        raise NumericalInvariantError(
            f"synthesized potential misses the target by {residual:.3e}")
    print(f"synthesis residual: {fmt_float(residual)}", file=sys.stderr)
    _write_text(dumps_json(q.to_dict()), args.output)
    return 0


def _component_label(comp):
    if comp.variant == "hyperplane":
        return "hyperplane"
    if comp.variant == "vertex":
        return f"vertex({comp.n})"
    return f"cone_leaf({comp.n}{'+' if comp.sign > 0 else '-'})"


def cmd_spectrum(args):
    q0 = load_potential(args.q0)
    qplus = load_potential(args.qplus)
    records = oscillation_eigenvalues(q0, qplus, args.nmax, args.steps)
    lines = ["n,s,multiplicity,component,trace,theta_R"]
    for r in records:
        lines.append(",".join([
            str(r.index), fmt_float(r.s), str(r.multiplicity),
            _component_label(r.component), fmt_float(r.trace),
            fmt_float(r.theta_r)]))
    _write_text("\n".join(lines) + "\n", args.output)
    return 0


def cmd_boundary_separated(args):
    q = load_potential(args.potential)
    bc = boundary.SeparatedBC(args.theta0, args.theta2pi)
    residual = boundary.separated_residual(q, bc, args.steps)
    has = abs(residual) <= args.tol
    out = {"has_solution": has, "residual": residual}
    if has:
        out["index"] = boundary.separated_index(q, bc, args.steps)
    _write_text(dumps_json(out), args.output)
    return 0


def cmd_boundary_general(args):
    q = load_potential(args.potential)
    a = args.A
    if len(a) != 4:
        raise DomainError("--A needs four comma separated entries a,b,c,d")
    bc = boundary.GeneralBC([[a[0], a[1]], [a[2], a[3]]])
    residual = boundary.general_residual(q, bc, args.steps)
    image = boundary.beta_image(bc, monodromy(q, args.steps).element)
    out = {
        "has_solution": abs(residual) <= args.tol,
        "residual": residual,
        "all_solutions": boundary.general_all_solutions(q, bc, args.tol,
                                                        args.steps),
        "beta": element_to_dict(image.element),
        "beta_trace": image.trace,
    }
    if image.stratum is not None:
        out["beta_stratum"] = _stratum_dict(image.stratum)
    _write_text(dumps_json(out), args.output)
    return 0


def cmd_classify(args):
    element = _load_element(args.element)
    out = _stratum_dict(classify(element, tol=args.tol))
    _write_text(dumps_json(out), args.output)
    return 0


def cmd_plotdata(args):
    if args.curve_of is not None:
        if args.output is None or args.output == "-":
            raise DomainError("--curve-of requires --output FILE")
        q = load_potential(args.curve_of)
        save_curve_csv(curve_of(q, args.steps), args.output)
        return 0
    if not args.levels:
        raise DomainError("plotdata needs --levels or --curve-of")
    alphas = np.linspace(args.alpha_min, args.alpha_max, args.alpha_samples)
    lines = ["c,alpha,r"]
    for c in args.levels:
        if c == 0.0:
            # The zero level is the union of vertical lines in the
            # (alpha, r) chart; emit each line on an r grid.
            k_lo = math.ceil((args.alpha_min - math.pi / 2) / math.pi)
            k_hi = math.floor((args.alpha_max - math.pi / 2) / math.pi)
            for k in range(k_lo, k_hi + 1):
                alpha = math.pi / 2 + k * math.pi
                for r in np.linspace(0.0, args.rmax, 101):
                    lines.append(",".join([fmt_float(c), fmt_float(alpha),
                                           fmt_float(r)]))
            continue
        for alpha in alphas:
            ratio = c / (2.0 * math.cos(alpha)) if math.cos(alpha) != 0 else \
                math.inf
            if not (1.0 <= ratio < math.cosh(args.rmax)):
                continue
            r = math.acosh(ratio)
            err = abs(2.0 * math.cos(alpha) * math.cosh(r) - c)
            if err > max(PLOT_IDENTITY_TOL, 16.0 * np.finfo(float).eps * abs(c)):
                raise NumericalInvariantError(
                    f"trace level identity violated by {err:.3e} at "
                    f"alpha={alpha!r}")
            lines.append(",".join([fmt_float(c), fmt_float(alpha),
                                   fmt_float(r)]))
    _write_text("\n".join(lines) + "\n", args.output)
    return 0


def cmd_sample_potential(args):
    if args.constant is not None:
        if args.cos or args.sin or args.constant_term != 0.0:
            raise DomainError("--constant excludes the trig flags")
        q = Potential.constant(args.constant)
    elif args.cos or args.sin or args.constant_term != 0.0:
        q = Potential.trig_poly(args.cos or (), args.sin or (),
                                args.constant_term)
    else:
        raise DomainError("give --constant or trig coefficients")
    if args.grid is not None:
        q = Potential.sampled(q.sample(args.grid))
    _write_text(dumps_json(q.to_dict()), args.output)
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_common(p, steps_default=DEFAULT_STEPS):
    p.add_argument("--steps", type=_steps_arg, default=steps_default,
                   help=f"integration steps (default {steps_default})")
    p.add_argument("--output", "-o", default=None,
                   help="output file, '-' or omitted for stdout")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hillmono",
        description="Lifted monodromy of Hill's equation: integration, "
                    "orbit transforms, synthesis, spectra, and boundary "
                    "value problems.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("monodromy", help="lifted monodromy of a potential")
    p.add_argument("--potential", required=True, help="potential JSON file")
    _add_common(p)
    p.set_defaults(func=cmd_monodromy)

    pk = sub.add_parser("kepler", help="orbit transforms")
    ksub = pk.add_subparsers(dest="kepler_command", required=True)
    p = ksub.add_parser("to-orbit", help="potential to polar orbit")
    p.add_argument("--potential", required=True)
    p.add_argument("--nodes", type=int, default=None,
                   help="resample the orbit on this many nodes")
    _add_common(p)
    p.set_defaults(func=cmd_kepler_to_orbit)
    p = ksub.add_parser("to-potential", help="polar orbit to potential")
    p.add_argument("--orbit", required=True, help="orbit JSON file")
    _add_common(p)
    p.set_defaults(func=cmd_kepler_to_potential)

    p = sub.add_parser("synthesize",
                       help="potential with a prescribed lifted monodromy")
    p.add_argument("--target", required=True, help="cover element JSON file")
    p.add_argument("--coeffs", type=_float_list, default=None,
                   help="fiber coordinates, comma separated")
    p.add_argument("--verify-tol", type=_tol_arg, default=SYNTH_VERIFY_TOL)
    p.add_argument("--steps", type=_steps_arg, default=None,
                   help="integration steps (default: automatic)")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("spectrum",
                       help="periodic eigenvalues along q0 - s qplus")
    p.add_argument("--q0", required=True, help="base potential JSON file")
    p.add_argument("--qplus", required=True,
                   help="direction potential JSON file, must be positive")
    p.add_argument("--nmax", type=int, required=True,
                   help="largest eigenvalue index")
    _add_common(p, steps_default=DEFAULT_SCAN_STEPS)
    p.set_defaults(func=cmd_spectrum)

    pb = sub.add_parser("boundary", help="two point boundary conditions")
    bsub = pb.add_subparsers(dest="boundary_command", required=True)
    p = bsub.add_parser("separated", help="separated condition")
    p.add_argument("--potential", required=True)
    p.add_argument("--theta0", type=float, required=True)
    p.add_argument("--theta2pi", type=float, required=True)
    p.add_argument("--tol", type=_tol_arg, default=RESIDUAL_TOL)
    _add_common(p)
    p.set_defaults(func=cmd_boundary_separated)
    p = bsub.add_parser("general", help="coupled condition via matrix A")
    p.add_argument("--potential", required=True)
    p.add_argument("--A", type=_float_list, required=True,
                   help="matrix entries a,b,c,d")
    p.add_argument("--tol", type=_tol_arg, default=RESIDUAL_TOL)
    _add_common(p)
    p.set_defaults(func=cmd_boundary_general)

    p = sub.add_parser("classify", help="stratum of a cover element file")
    p.add_argument("--element", required=True, help="cover element JSON file")
    p.add_argument("--tol", type=_tol_arg, default=1e-8)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("plotdata",
                       help="trace level sets or sampled curves as CSV")
    p.add_argument("--levels", type=_float_list, default=None,
                   help="trace values, comma separated")
    p.add_argument("--alpha-min", type=float, default=-TAU)
    p.add_argument("--alpha-max", type=float, default=TAU)
    p.add_argument("--alpha-samples", type=int, default=1601)
    p.add_argument("--rmax", type=float, default=5.0)
    p.add_argument("--curve-of", default=None,
                   help="emit the fundamental curve of this potential file")
    _add_common(p)
    p.set_defaults(func=cmd_plotdata)

    p = sub.add_parser("sample-potential",
                       help="write a potential file for other commands")
    p.add_argument("--constant", type=float, default=None)
    p.add_argument("--cos", type=_float_list, default=None,
                   help="cosine coefficients from frequency 1")
    p.add_argument("--sin", type=_float_list, default=None,
                   help="sine coefficients from frequency 1")
    p.add_argument("--constant-term", type=float, default=0.0)
    p.add_argument("--grid", type=int, default=None,
                   help="emit as sampled values on this many grid points")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_sample_potential)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalInvariantError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 3


def entry():
    try:
        sys.exit(main())
    except BrokenPipeError:
        # Downstream consumer (head, less) closed the pipe; exit quietly
        # with the conventional SIGPIPE status.
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        sys.exit(141)


if __name__ == "__main__":
    entry()
