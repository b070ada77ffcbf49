"""Command-line front end: ``qca analyze | model | closure | simulate``.

Exit codes: 0 success (whatever the verdicts), 1 I/O error, 2 schema or
parameter error, 3 numerical-conditioning refusal.
"""

import argparse
import sys

import numpy as np

from . import __version__, io
from .analysis import analyze, orbit_dims
from .lie import lie_closure
from .matcore import ConditioningError, ShapeError, ValidationError
from .models import FAMILIES, ParameterError, build, example_orbit_pair
from .sim import equivalent_state_check, propagate_state


def _write(path, text):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _fmt_vector(psi):
    return "[" + ", ".join(f"{z.real:+.10f}{z.imag:+.10f}j" for z in psi) + "]"


def cmd_analyze(args):
    doc = io.load_json(args.path)
    model = io.system_from_dict(doc)
    report = analyze(model)
    out = report.to_dict()
    out["version"] = __version__
    out["input_sha256"] = io.digest(doc)

    print(f"system: {model.label or args.path} (n={model.n}, m={model.m})")
    print(f"dim L = {report.dim_L}   dim B = {report.dim_B}")
    print(f"traceless: {report.traceless}   contains iI: {report.contains_scalar}")
    print(f"OC  = {report.oc} ({report.oc_flavor})")
    print(f"PSC = {report.psc}")
    print(f"ESC = {report.esc}")
    print(f"DMC = {report.dmc}")
    print(f"classification: {report.classification}")
    print(f"small-time obstruction: {report.small_time_obstruction} (hypothesis {report.small_time_hypothesis})")

    if args.density:
        ddoc = io.load_json(args.density)
        rho = io.density_from_dict(ddoc)
        if rho.n != model.n:
            raise io.SchemaError(f"density: dimension {rho.n} does not match system n={model.n}")
        basis = lie_closure(model.generators())
        full, sub = orbit_dims(basis, rho)
        out["density"] = {
            "input_sha256": io.digest(ddoc),
            "full_orbit_dim": full,
            "L_orbit_dim": sub,
            "orbit_equality": full == sub,
        }
        print(f"orbit equality for rho: {full == sub} (n^2 - dim C_D = {full}, dim L - dim L∩C_D = {sub})")
    for note in report.diagnostics:
        print(f"  note: {note}")
    if args.json:
        _write(args.json, io.dumps(out))
    return 0


def cmd_model(args):
    params = {
        "omega": args.omega,
        "controls": args.controls,
        "J": args.J,
        "gamma1": args.gamma1,
        "gamma2": args.gamma2,
        "coupling": args.coupling,
        "n": args.n,
    }
    model = build(args.family, **params)
    _write(args.output, io.dumps(io.system_to_dict(model)))
    if args.density_out:
        if args.family != "example-orbit":
            raise ParameterError("--density-out is only available for example-orbit")
        d, _, _ = example_orbit_pair(model.n)
        _write(args.density_out, io.dumps(io.density_to_dict(d)))
    if args.output != "-":
        print(f"wrote {args.family} system (n={model.n}, {model.m} controls) to {args.output}")
    return 0


def cmd_closure(args):
    doc = io.load_json(args.path)
    model = io.system_from_dict(doc)
    L = lie_closure(model.generators())
    B = lie_closure(list(model.controls))
    print(f"dim L = {L.dim}")
    print(f"dim B = {B.dim}")
    if args.dump:
        basis = B if args.controls_only else L
        dump = {
            "n": model.n,
            "label": f"closure basis of {model.label}".strip(),
            "dim": basis.dim,
            "source": "controls" if args.controls_only else "drift+controls",
            "drift": io.encode_matrix(np.zeros((model.n, model.n))),
            "controls": [io.encode_matrix(e) for e in basis.elements],
        }
        _write(args.dump, io.dumps(dump))
    return 0


def cmd_simulate(args):
    model = io.system_from_dict(io.load_json(args.system))
    pulses = io.pulses_from_dict(io.load_json(args.pulses), model.m)
    psi0 = io.state_from_dict(io.load_json(args.initial))
    if psi0.size != model.n:
        raise io.SchemaError(f"initial state: dimension {psi0.size} does not match system n={model.n}")
    psi = propagate_state(model, pulses, psi0)
    print(f"segments: {len(pulses)}")
    print(f"final state: {_fmt_vector(psi)}")
    print(f"norm: {np.linalg.norm(psi):.15f}")
    if args.target:
        target = io.state_from_dict(io.load_json(args.target))
        if target.size != model.n:
            raise io.SchemaError(f"target state: dimension {target.size} does not match system n={model.n}")
        match, phase = equivalent_state_check(psi, target)
        print(f"fidelity |<target|psi>|: {abs(np.vdot(target, psi)):.15f}")
        print(f"equivalent up to phase: {match} (phase {phase:+.12f} rad)")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="qca", description="Controllability analysis of bilinear quantum systems.")
    p.add_argument("--version", action="version", version=f"qca {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="OC/PSC/ESC/DMC verdicts for a system file")
    a.add_argument("path")
    a.add_argument("--json", metavar="OUT", help="write the machine-readable report ('-' for stdout)")
    a.add_argument("--density", metavar="RHO", help="density-matrix file for the orbit-equality test")
    a.set_defaults(func=cmd_analyze)

    m = sub.add_parser("model", help="write a builtin system file")
    m.add_argument("family", choices=FAMILIES)
    m.add_argument("--omega", type=float, default=1.0, help="single-spin drift frequency")
    m.add_argument("--controls", default="xy", help="single-spin control axes, e.g. 'xy' or 'x'")
    m.add_argument("--J", type=float, help="two-spin coupling strength")
    m.add_argument("--gamma1", type=float, help="two-spin gyromagnetic factor of spin 1")
    m.add_argument("--gamma2", type=float, help="two-spin gyromagnetic factor of spin 2")
    m.add_argument("--coupling", choices=("ising", "isotropic"), default="ising")
    m.add_argument("--n", type=int, help="example-orbit dimension (even, > 2)")
    m.add_argument("-o", "--output", default="-")
    m.add_argument("--density-out", metavar="RHO", help="example-orbit: also write the density matrix D")
    m.set_defaults(func=cmd_model)

    c = sub.add_parser("closure", help="dimension of the generated Lie algebra")
    c.add_argument("path")
    c.add_argument("--dump", metavar="OUT", help="write the orthonormal basis as a system file")
    c.add_argument("--controls-only", action="store_true", help="dump the control algebra B instead of L")
    c.set_defaults(func=cmd_closure)

    s = sub.add_parser("simulate", help="propagate a state under piecewise-constant controls")
    s.add_argument("system")
    s.add_argument("pulses")
    s.add_argument("--initial", required=True, metavar="PSI")
    s.add_argument("--target", metavar="PSI")
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConditioningError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (io.SchemaError, ValidationError, ShapeError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
