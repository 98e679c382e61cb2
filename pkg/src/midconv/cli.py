"""Command-line interface.

One system per file; every subcommand reads documents, calls the pure
library, and prints a deterministic JSON report (command echo, result
payload, diagnostics).  Exit status: 0 success, 1 domain error, 2 usage.
"""

from __future__ import annotations

import argparse
import sys as _sys

from .checks import run_checks
from .datum import kappa, phi
from .documents import (
    dumps_canonical,
    harnad_to_document,
    matrix_to_json,
    normal_form_to_document,
    parse_document,
    parse_scalar_flag,
    system_to_document,
    trace_to_document,
)
from .errors import DomainError, ValidationError
from .exactalg import Matrix
from .functors import OkuboTriple, dr_middle_convolution, hd, mc, okubo_to_pair
from .normalform import compute_normal_form, select_alpha, stabilizer_dim
from .rigidity import katz_reduce, katz_step, orbit_dim, rigidity_index
from .datum import HarnadDatum, is_stable
from .systems import System, add_scalar, equivalent, is_irreducible

__all__ = ["main"]


def _read(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_document(fh.read())


def _read_system(path: str) -> System:
    doc = _read(path)
    if not isinstance(doc, System):
        raise ValidationError(f"{path}: expected a system document")
    return doc


def _read_datum(path: str) -> HarnadDatum:
    doc = _read(path)
    if not isinstance(doc, HarnadDatum):
        raise ValidationError(f"{path}: expected a datum document")
    return doc


def _pick_part(sys: System, point_flag):
    if point_flag is not None:
        pt = parse_scalar_flag(point_flag)
        part = sys.part_at(pt)
        if part is None:
            raise ValidationError(f"no pole at {point_flag}")
        return part
    if len(sys.parts) != 1:
        raise ValidationError("--point is required when the system has several poles")
    return sys.parts[0]


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="midconv",
        description="Exact middle convolution, duality, and reduction for linear ODE systems.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def cmd(name, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("file")
        return p

    cmd("canon", "canonical datum of a system")
    cmd("phi", "system realized by a datum document")
    cmd("hd", "Harnad dual pair")
    p = cmd("add", "add a rank-1 parameter times the identity")
    p.add_argument("--alpha", required=True, metavar="FILE")
    p = cmd("mc", "middle convolution with a rank-1 parameter")
    p.add_argument("--alpha", required=True, metavar="FILE")
    p = cmd("dr", "classical middle convolution of a Fuchsian pair")
    p.add_argument("--lambda", dest="lam", required=True, metavar="Q")
    cmd("stable", "stability of a datum document")
    cmd("irred", "irreducibility of a pair")
    p = sub.add_parser("equiv", help="constant-gauge equivalence of two pairs")
    p.add_argument("file1")
    p.add_argument("file2")
    p = cmd("normal-form", "normal form at a pole")
    p.add_argument("--point", metavar="T")
    p = cmd("stab-dim", "stabilizer dimension at a pole")
    p.add_argument("--point", metavar="T")
    p = cmd("select-alpha", "kernel-maximizing scalar part at a pole")
    p.add_argument("--point", metavar="T")
    cmd("orbit-dim", "dimension of the truncated-gauge orbit")
    cmd("rigidity", "rigidity index of a pair")
    p = cmd("katz-step", "one add/convolve/add reduction step")
    p.add_argument("--alpha", required=True, metavar="FILE")
    cmd("katz-reduce", "iterated reduction to rank one")
    cmd("okubo", "pair associated with an Okubo-form document")
    p = cmd("check", "run the invariant suite against the input")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=5)
    return ap


def _dispatch(args) -> tuple[dict, int]:
    cmd = args.command
    if cmd == "canon":
        h = kappa(_read_system(args.file))
        return harnad_to_document(h), 0
    if cmd == "phi":
        return system_to_document(phi(_read_datum(args.file))), 0
    if cmd == "hd":
        return system_to_document(hd(_read_system(args.file))), 0
    if cmd == "add":
        return (
            system_to_document(add_scalar(_read_system(args.file), _read_system(args.alpha))),
            0,
        )
    if cmd == "mc":
        return (
            system_to_document(mc(_read_system(args.file), _read_system(args.alpha))),
            0,
        )
    if cmd == "dr":
        lam = parse_scalar_flag(args.lam)
        return system_to_document(dr_middle_convolution(_read_system(args.file), lam)), 0
    if cmd == "stable":
        h = _read_datum(args.file)
        return {"stable": is_stable(h.datum)}, 0
    if cmd == "irred":
        return {"irreducible": is_irreducible(_read_system(args.file))}, 0
    if cmd == "equiv":
        a, b = _read_system(args.file1), _read_system(args.file2)
        f = equivalent(a, b)
        if f is None:
            return {"equivalent": False}, 0
        return {"equivalent": True, "witness": matrix_to_json(f)}, 0
    if cmd == "normal-form":
        sys_ = _read_system(args.file)
        part = _pick_part(sys_, args.point)
        nf = compute_normal_form(part)
        return normal_form_to_document(nf, point=part.point), 0
    if cmd == "stab-dim":
        part = _pick_part(_read_system(args.file), args.point)
        return {"stabilizer_dimension": stabilizer_dim(part)}, 0
    if cmd == "select-alpha":
        part = _pick_part(_read_system(args.file), args.point)
        sel = select_alpha(part)
        alpha = System(1, Matrix.zeros(1, 1), (sel,))
        return system_to_document(alpha), 0
    if cmd == "orbit-dim":
        return {"orbit_dimension": orbit_dim(_read_system(args.file))}, 0
    if cmd == "rigidity":
        idx = rigidity_index(_read_system(args.file))
        return {"rigidity_index": idx, "rigid": idx == 0}, 0
    if cmd == "katz-step":
        res = katz_step(_read_system(args.file), _read_system(args.alpha))
        return system_to_document(res), 0
    if cmd == "katz-reduce":
        return trace_to_document(katz_reduce(_read_system(args.file))), 0
    if cmd == "okubo":
        triple = _read(args.file)
        if not isinstance(triple, OkuboTriple):
            raise ValidationError(f"{args.file}: expected an okubo document")
        return system_to_document(okubo_to_pair(triple)), 0
    if cmd == "check":
        results = run_checks(_read_system(args.file), args.seed, args.trials)
        payload = {
            "seed": args.seed,
            "trials": args.trials,
            "checks": [
                {"name": r.name, "passed": r.passed, "trials": r.trials, "detail": r.detail}
                for r in results
            ],
        }
        return payload, 0 if all(r.passed for r in results) else 1
    raise AssertionError(f"unhandled command {cmd}")  # pragma: no cover


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        result, status = _dispatch(args)
    except DomainError as exc:
        report = {
            "command": args.command,
            "error": {"type": type(exc).__name__, "message": str(exc)},
        }
        _sys.stdout.write(dumps_canonical(report))
        return 1
    report = {"command": args.command, "result": result, "diagnostics": []}
    _sys.stdout.write(dumps_canonical(report))
    return status


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
