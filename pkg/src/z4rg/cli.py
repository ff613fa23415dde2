"""Command line front end: ``z4rg <command> [options]``.

Exit codes: 0 success, 1 usage error, 2 domain or I/O error.
Output goes to ``--output`` if given, otherwise to ``$Z4RG_OUTPUT_DIR``
(one file per command) if that is set, otherwise to stdout.
"""
from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .beta_system import BETA_LOOPS, ETA2_POLY, ETA_POLY
from .errors import DomainError
from .exponents import exponents_at
from .fixed_points import (
    known_fixed_points,
    line_factor,
    numeric_fixed_points,
    solve_series,
)
from .flow import CONVERGED, integrate, integrate_batch, vector_field
from .model_map import (
    ModelCouplings,
    hermitian_equivalent_coupling,
    nd_constant,
    physical_to_tensor,
    pt_phase,
)
from .serialize import dumps, trajectory_csv
from .stability import classify
from .tensor_engine import derive_rg_functions

ENV_OUTPUT_DIR = "Z4RG_OUTPUT_DIR"
DIVERGING_FACTOR = 10.0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ----------------------------------------------------------------------------
# argument types
# ----------------------------------------------------------------------------

def parse_number(text: str):
    """Exact Fraction for decimal/rational text, complex otherwise."""
    try:
        return Fraction(text.strip())
    except ValueError:
        pass
    try:
        z = complex(text.strip().replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    return z.real if z.imag == 0 else z


def _real(text: str) -> float:
    v = parse_number(text)
    if isinstance(v, complex):
        raise argparse.ArgumentTypeError(f"expected a real number: {text!r}")
    return float(v)


def _triple_or_pair(text: str):
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError("expected g1,g2 or g1,g2,g3")
    return [complex(parse_number(p)) for p in parts]


def _pair(kind):
    def conv(text: str):
        parts = text.split(",")
        if len(parts) != 2:
            raise argparse.ArgumentTypeError(f"expected two comma-separated values: {text!r}")
        return tuple(kind(p) for p in parts)

    return conv


def _float_of(k) -> complex:
    return complex(k)


# ----------------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------------

def cmd_derive(args):
    derived = derive_rg_functions()
    coded = {"beta1": BETA_LOOPS[0], "beta2": BETA_LOOPS[1], "beta3": BETA_LOOPS[2],
             "eta": ETA_POLY, "eta2": ETA2_POLY}
    mismatched = sorted(name for name in coded if derived[name] != coded[name])
    if mismatched:
        raise DomainError(f"tensor contraction disagrees with tabulated polynomials: {mismatched}")
    doc = {name: derived[name] for name in coded}
    doc["note"] = "beta_a = -eps*g_a + polynomial shown"
    doc["agrees_with_tabulated"] = True
    return dumps(doc), "json"


def _point_doc(fp, eps=None, numeric=None):
    doc = {"label": fp.label, "kind": fp.kind.value, "branch": fp.branch,
           "coords": list(fp.coords), "real": fp.is_real()}
    if eps is not None:
        doc["series_at_eps"] = fp.evaluate(eps)
        if numeric is not None:
            doc["numeric_root"] = numeric.get(fp.label)
    return doc


def cmd_fixpoints(args):
    k = args.k
    if args.method == "solve":
        points = solve_series(k, order=args.order)
    else:
        points = known_fixed_points(k, order=args.order)
    numeric = None
    if args.eps is not None:
        numeric = {fp.label: x for fp, x in numeric_fixed_points(k, args.eps)}
    doc = {"k": k, "order": args.order, "method": args.method, "eps": args.eps,
           "points": [_point_doc(fp, args.eps, numeric) for fp in points]}
    return dumps(doc), "json"


def cmd_stability(args):
    reports = []
    for fp in known_fixed_points(args.k):
        r = classify(fp, args.eps, marginal_tol=args.marginal_tol)
        reports.append({
            "label": r.label,
            "eigenvalues": r.eigenvalues,
            "classes": r.classes,
            "eigenvectors": r.eigenvectors,
            "dominant_axis": r.axis_alignment,
            "exact_zero_mode": r.exact_zero_mode,
        })
    doc = {"k": args.k, "eps": args.eps, "marginal_tol": args.marginal_tol,
           "convention": "dg/dt = -beta; ir_stable iff Re(lambda) > tol", "reports": reports}
    return dumps(doc), "json"


def cmd_exponents(args):
    out = []
    for fp in known_fixed_points(args.k):
        x = exponents_at(fp)
        out.append({"label": fp.label, "eta": x.eta, "eta2": x.eta2, "nu": x.nu, "real": x.is_real})
    return dumps({"k": args.k, "points": out}), "json"


def _scan_row(k: float, eps: float):
    if abs(1 - k * k) < 1e-14:
        return {"k": k, "exceptional": True, "diverging": True}
    s = complex(line_factor(k))
    row = {"k": k, "exceptional": False, "diverging": abs(s) > DIVERGING_FACTOR, "s": s}
    for fp in known_fixed_points(k):
        if fp.branch == "principal" and fp.is_line:
            row[fp.kind.value] = fp.evaluate(eps)
    return row


def cmd_scan_k(args):
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    ks = np.linspace(args.k_from, args.k_to, args.steps)
    rows = [_scan_row(float(k), args.eps) for k in ks]
    if args.format == "csv":
        cols = ["k", "exceptional", "diverging"]
        for name in ("IsingLine", "CubicLine"):
            for a in ("g1", "g2", "g3"):
                cols += [f"{name}_{a}_re", f"{name}_{a}_im"]
        lines = [",".join(cols)]
        for r in rows:
            vals = [repr(float(r["k"])), str(int(r["exceptional"])), str(int(r["diverging"]))]
            for name in ("IsingLine", "CubicLine"):
                g = r.get(name)
                for a in range(3):
                    vals += ["nan", "nan"] if g is None else [repr(float(g[a].real) + 0.0), repr(float(g[a].imag) + 0.0)]
            lines.append(",".join(vals))
        return "\n".join(lines) + "\n", "csv"
    return dumps({"eps": args.eps, "diverging_factor": DIVERGING_FACTOR, "rows": rows}), "json"


def cmd_flow(args):
    modes = sum(x is not None for x in (args.traj, args.grid, args.basin))
    if modes != 1:
        raise UsageError("flow needs exactly one of --traj, --grid, --basin")
    if args.step <= 0 or args.t_max <= 0:
        raise UsageError("--step and --t-max must be positive")
    k = args.k
    if args.traj is not None:
        g0 = list(args.traj)
        if len(g0) == 2:
            if k is None:
                raise UsageError("--traj g1,g2 needs --k to fix g3 = k*g2")
            g0.append(_float_of(k) * g0[1])
        tr = integrate(g0, args.eps, args.t_max, step=args.step, sample_every=args.sample_every)
        if args.format == "csv":
            return trajectory_csv(tr), "csv"
        doc = {"eps": tr.eps, "k0": tr.k0, "terminal": tr.terminal, "converged_to": tr.converged_to,
               "invariant_drift": tr.invariant_drift, "t": tr.t, "g": tr.g}
        return dumps(doc), "json"

    if k is None:
        raise UsageError("--grid and --basin need --k")
    if args.grid is not None:
        vf = vector_field(k, args.g1_range, args.g2_range, args.grid, args.eps)
        doc = {"k": k, "eps": args.eps, "g1": vf.g1, "g2": vf.g2, "U": vf.U, "V": vf.V,
               "lines_present": vf.lines_present,
               "fixed_points": [{"label": p.label, "series_at_eps": p.series_value, "numeric_root": p.numeric}
                                for p in vf.fixed_points]}
        return dumps(doc), "json"

    # basin sweep: random starts near the origin in the positive quadrant
    rng = np.random.default_rng(args.seed)
    g12 = rng.uniform(0.0, args.radius, size=(args.basin, 2))
    kf = _float_of(k)
    starts = np.column_stack([g12[:, 0], g12[:, 1], kf * g12[:, 1]])
    trs = integrate_batch(starts, args.eps, args.t_max, step=args.step, sample_every=10**9)
    runs = [{"start": s, "terminal": t.terminal, "converged_to": t.converged_to, "final": t.final,
             "invariant_drift": t.invariant_drift} for s, t in zip(starts, trs)]
    tally: dict[str, int] = {}
    for t in trs:
        key = t.converged_to if t.terminal == CONVERGED else t.terminal
        tally[key] = tally.get(key, 0) + 1
    doc = {"k": k, "eps": args.eps, "seed": args.seed, "radius": args.radius, "tally": tally, "runs": runs}
    return dumps(doc), "json"


def cmd_map(args):
    mc = ModelCouplings(args.u, args.v, args.w, args.m2)
    g = physical_to_tensor(mc)
    nd = nd_constant(args.d)
    doc = {
        "u": mc.u, "v": mc.v, "w": mc.w, "m2": mc.m2,
        "g": list(g),
        "g_tilde": [nd * float(x) for x in g],
        "nd": nd,
        "d": args.d,
        "pt_phase": pt_phase(mc.v, mc.w, args.tol),
        "k": None if mc.v == 0 else mc.k,
        "hermitian_equivalent": hermitian_equivalent_coupling(float(mc.v), float(mc.w)),
    }
    return dumps(doc), "json"


# ----------------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("-o", "--output", help="output file (default: stdout or $%s)" % ENV_OUTPUT_DIR)
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")

    p = _Parser(prog="z4rg", description="Two-loop RG toolkit for the Z4-anisotropic complex scalar.")
    p.add_argument("--version", action="version", version=f"z4rg {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser
    sub.add_parser("derive", help="beta/eta polynomials from tensor contraction").set_defaults(func=cmd_derive)

    s = sub.add_parser("fixpoints", help="fixed points as eps series")
    s.add_argument("--k", type=parse_number, required=True)
    s.add_argument("--eps", type=_real)
    s.add_argument("--order", type=int, default=2)
    s.add_argument("--method", choices=("closed", "solve"), default="closed")
    s.set_defaults(func=cmd_fixpoints)

    s = sub.add_parser("stability", help="stability matrix eigen-analysis")
    s.add_argument("--k", type=parse_number, required=True)
    s.add_argument("--eps", type=_real, required=True)
    s.add_argument("--marginal-tol", type=float, default=1e-9)
    s.set_defaults(func=cmd_stability)

    s = sub.add_parser("exponents", help="eta, eta2, nu per fixed point")
    s.add_argument("--k", type=parse_number, required=True)
    s.set_defaults(func=cmd_exponents)

    s = sub.add_parser("scan-k", help="line couplings versus k")
    s.add_argument("--from", dest="k_from", type=_real, required=True)
    s.add_argument("--to", dest="k_to", type=_real, required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--eps", type=_real, default=1.0)
    s.set_defaults(func=cmd_scan_k)

    s = sub.add_parser("flow", help="trajectories, vector fields, basin sweeps")
    s.add_argument("--k", type=parse_number)
    s.add_argument("--eps", type=_real, required=True)
    s.add_argument("--traj", type=_triple_or_pair)
    s.add_argument("--grid", type=_pair(int))
    s.add_argument("--basin", type=int, help="number of random starts")
    s.add_argument("--g1-range", type=_pair(_real), default=(-0.5, 1.5))
    s.add_argument("--g2-range", type=_pair(_real), default=(-0.5, 1.5))
    s.add_argument("--radius", type=float, default=0.1)
    s.add_argument("--t-max", type=float, default=20.0)
    s.add_argument("--step", type=float, default=1e-3)
    s.add_argument("--sample-every", type=int, default=10)
    s.set_defaults(func=cmd_flow)

    s = sub.add_parser("map", help="(u, v, w) to tensor couplings and PT phase")
    s.add_argument("--u", type=parse_number, required=True)
    s.add_argument("--v", type=parse_number, required=True)
    s.add_argument("--w", type=parse_number, required=True)
    s.add_argument("--m2", type=parse_number, default=Fraction(0))
    s.add_argument("--d", type=_real, default=4.0)
    s.add_argument("--tol", type=float, default=0.0)
    s.set_defaults(func=cmd_map)
    return p


def _destination(args, ext: str) -> Path | None:
    if args.output:
        return Path(args.output)
    env = os.environ.get(ENV_OUTPUT_DIR)
    if env:
        return Path(env) / f"{args.command}.{ext}"
    return None


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.format == "csv" and args.command not in ("flow", "scan-k"):
            raise UsageError(f"{args.command} has no csv output")
        if args.format is None:
            args.format = "csv" if args.command == "flow" and args.traj is not None else "json"
        text, ext = args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (DomainError, ZeroDivisionError, ArithmeticError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    dest = _destination(args, ext)
    if dest is None:
        sys.stdout.write(text)
        return 0
    try:
        dest.parent.mkdir(parents=True, exist_ok=True)
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {dest}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
