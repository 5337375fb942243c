"""Command-line interface ``structcanon``.

Subcommands::

    check IN                     structure residuals and classification
    gen --class C --n N ...      planted instance plus a sidecar JSON
    canon --class C IN           canonical form, transform and report
    compare IN                   structured vs unstructured Hermitian-part diagonalization
    diagnormal IN                unstructured diagonalization of a normal matrix
    spy IN                       magnitude CSV and threshold masks of a matrix

Exit codes: 0 success, 1 I/O or usage error, 2 structure precondition
failed, 3 no convergence. ``STRUCTCANON_LOG`` (``quiet``, ``info`` or
``trace``) sets the diagnostic verbosity on stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from .core import DimensionError, StructCanonError, f_matrix, j_matrix
from .experiments import compare_structured_unstructured
from .genmat import GenSpec, generate
from .hamiltonian import (
    RESIDUAL_FACTOR,
    canon_normal_hamiltonian,
    canon_normal_skew_hamiltonian,
)
from .jacobi import ConvergenceError, normal_diagonalize_gh
from .matrix_io import MatrixFormatError, read_matrix, write_matrix
from .perplectic import canon_normal_per_hermitian, canon_normal_perskew_hermitian
from .report import RunReport, SpyGrid
from .spectrum import spectrum_distance
from .structure import Structure, StructureError, structure_report

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_STRUCTURE = 2
EXIT_CONVERGENCE = 3

CLASSES = {
    "ham": (Structure.HAMILTONIAN, canon_normal_hamiltonian),
    "skewham": (Structure.SKEW_HAMILTONIAN, canon_normal_skew_hamiltonian),
    "perh": (Structure.PER_HERMITIAN, canon_normal_per_hermitian),
    "perskewh": (Structure.PERSKEW_HERMITIAN, canon_normal_perskew_hermitian),
}

log = logging.getLogger("structcanon")


class UsageError(StructCanonError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _configure_logging():
    level = {"quiet": logging.ERROR, "info": logging.INFO, "trace": logging.DEBUG}
    name = os.environ.get("STRUCTCANON_LOG", "quiet").lower()
    root = logging.getLogger("structcanon")
    root.setLevel(level.get(name, logging.ERROR))
    if not root.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        root.addHandler(handler)


def _eig_list(values):
    return [[float(v.real), float(v.imag)] for v in np.asarray(values, dtype=complex)]


def _load(path, fmt=None):
    path = Path(path)
    a = read_matrix(path, fmt)
    info = {
        "path": path.name,
        "sha256": hashlib.sha256(path.read_bytes()).hexdigest(),
        "rows": a.shape[0],
        "cols": a.shape[1],
    }
    return a, info


def _project(a, cls):
    """Closest matrix of class ``cls`` (used by ``--force``)."""
    size = a.shape[0]
    if cls in (Structure.HAMILTONIAN, Structure.SKEW_HAMILTONIAN):
        k = j_matrix(size // 2)
    else:
        k = f_matrix(size)
    sign = 1 if cls in (Structure.HAMILTONIAN, Structure.PER_HERMITIAN) else -1
    x = k @ a
    return k.conj().T @ ((x + sign * x.conj().T) / 2)


def _settings(args, **extra):
    out = {"tol": args.tol, "max_sweeps": args.max_sweeps}
    out.update(extra)
    return out


def _finish(args, report, started):
    if args.timing:
        report.wall_time = time.perf_counter() - started
    text = report.to_json()
    if args.out:
        out = Path(args.out)
        path = out if out.suffix == ".json" else out.with_name(out.name + ".report.json")
        path.write_text(text)
    else:
        sys.stdout.write(text)


def _planted_eigs(path):
    data = json.loads(Path(path).read_text())
    return np.array([complex(re, im) for re, im in data["eigenvalues"]])


def cmd_check(args):
    started = time.perf_counter()
    a, info = _load(args.input, args.format)
    rep = structure_report(a)
    report = RunReport("check", settings={"tol": args.tol}, input=info,
                       structure=rep.to_dict(), outputs={"classes": rep.classify(args.tol)})
    _finish(args, report, started)
    return EXIT_OK


def cmd_gen(args):
    if args.out is None:
        raise UsageError("gen needs --out")
    if args.n is None:
        raise UsageError("gen needs --n")
    spec = GenSpec(n=args.n, seed=args.seed, n1=args.n1, r=args.r, degenerate=args.degenerate)
    a, planted = generate(args.cls, spec)
    out = Path(args.out)
    write_matrix(out, a, args.format)
    sidecar = out.with_name(out.stem + ".planted.json")
    data = {
        "class": args.cls,
        "spec": {"n": spec.n, "n1": spec.n1, "r": spec.r, "seed": spec.seed,
                 "degenerate": spec.degenerate},
        "planted": planted.to_dict(),
        "eigenvalues": _eig_list(planted.eigenvalues()),
    }
    sidecar.write_text(json.dumps(data, sort_keys=True, indent=2) + "\n")
    print(f"wrote {out} and {sidecar}")
    return EXIT_OK


def cmd_canon(args):
    started = time.perf_counter()
    cls, algo = CLASSES[args.cls]
    a, info = _load(args.input, args.format)
    rep = structure_report(a)
    if args.force:
        a = _project(a, cls)
    form = algo(a, args.tol, args.max_sweeps)
    transform = form.z if hasattr(form, "z") else form.u
    size = a.shape[0]
    ident = np.eye(size)
    group = j_matrix(size // 2) if cls in (Structure.HAMILTONIAN, Structure.SKEW_HAMILTONIAN) \
        else f_matrix(size)
    th = transform.conj().T
    residuals = {
        "canonical": form.residual_canonical,
        "unitarity": float(np.linalg.norm(th @ transform - ident)),
        "group": float(np.linalg.norm(th @ group @ transform - group)),
        "bound": RESIDUAL_FACTOR * args.tol * max(1.0, rep.norm),
    }
    eigs = form.eigenvalues()
    if args.planted:
        residuals["eigenvalue_error"] = spectrum_distance(eigs, _planted_eigs(args.planted))
    if hasattr(form, "sweeps_phase1"):
        sweeps = {"phase1": form.sweeps_phase1, "phase2": form.sweeps_phase2,
                  "escalations": form.escalations}
    else:
        sweeps = {"total": form.sweeps}
    report = RunReport("canon", settings=_settings(args, cls=args.cls, force=args.force),
                       input=info, structure=rep.to_dict(),
                       outputs={"canonical": form.to_dict(), "eigenvalues": _eig_list(eigs)},
                       sweeps=sweeps, residuals=residuals)
    if args.out:
        out = Path(args.out)
        ext = ".json" if args.format == "json" else ".mtx"
        write_matrix(out.with_name(out.name + ".transform" + ext), transform, args.format)
    _finish(args, report, started)
    return EXIT_OK


def cmd_compare(args):
    started = time.perf_counter()
    a, info = _load(args.input, args.format)
    stop_s = args.stop or "relative"
    stop_u = args.stop or "entrywise"
    cmp = compare_structured_unstructured(a, args.tol, args.max_sweeps, stop_s, stop_u)
    outputs = {
        "n1": cmp.n1,
        "thresholds": list(cmp.thresholds),
        "structured_survivors": [len(cmp.spy("structured").survivors(k)) for k in range(2)],
        "unstructured_survivors": [len(cmp.spy("unstructured").survivors(k)) for k in range(2)],
        "structured_violations": [list(v) for v in cmp.structured_violations(0)],
    }
    if args.out:
        directory = Path(args.out)
        for which in ("structured", "unstructured"):
            cmp.spy(which).write(directory, f"{which}_skew")
    report = RunReport("compare", settings=_settings(args, stop_structured=stop_s,
                                                     stop_unstructured=stop_u),
                       input=info, structure=structure_report(a).to_dict(), outputs=outputs,
                       sweeps={"structured": cmp.structured_sweeps,
                               "unstructured": cmp.unstructured_sweeps})
    if args.out:
        args.out = str(Path(args.out) / "compare.json")
    _finish(args, report, started)
    return EXIT_OK


def cmd_diagnormal(args):
    started = time.perf_counter()
    a, info = _load(args.input, args.format)
    res = normal_diagonalize_gh(a, args.tol, args.max_sweeps, stop=args.stop or "relative")
    residuals = {"off_relative": res.final_off_relative}
    if args.planted:
        residuals["eigenvalue_error"] = spectrum_distance(res.eigenvalues,
                                                          _planted_eigs(args.planted))
    report = RunReport("diagnormal", settings=_settings(args), input=info,
                       structure=structure_report(a).to_dict(),
                       outputs={"eigenvalues": _eig_list(res.eigenvalues)},
                       sweeps={"hermitian_part": res.sweeps, "escalations": res.escalations},
                       residuals=residuals)
    _finish(args, report, started)
    return EXIT_OK


def cmd_spy(args):
    thresholds = (100 * args.tol, 10 * args.tol)
    path = Path(args.input)
    if path.suffix == ".csv":
        grid = SpyGrid.from_csv(path.read_text(), thresholds)
    else:
        grid = SpyGrid.of(read_matrix(path, args.format), thresholds)
    directory = Path(args.out) if args.out else path.parent
    for p in grid.write(directory, path.stem):
        print(f"wrote {p}")
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "gen": cmd_gen,
    "canon": cmd_canon,
    "compare": cmd_compare,
    "diagnormal": cmd_diagnormal,
    "spy": cmd_spy,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--max-sweeps", type=int, default=30)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--n", type=int)
    common.add_argument("--n1", type=int)
    common.add_argument("--r", type=int)
    common.add_argument("--class", dest="cls", choices=sorted(CLASSES), default="ham")
    common.add_argument("--stop", choices=["relative", "entrywise"])
    common.add_argument("--force", action="store_true",
                        help="project the input onto the class instead of rejecting it")
    common.add_argument("--out")
    common.add_argument("--format", choices=["mm", "json"])
    common.add_argument("--planted", help="sidecar JSON from 'gen' to compare eigenvalues with")
    common.add_argument("--degenerate", action="store_true",
                        help="allow repeated planted eigenvalues (gen)")
    common.add_argument("--timing", action="store_true",
                        help="record wall time (reports are then no longer reproducible)")

    parser = _Parser(prog="structcanon", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name in ("gen", "canon"):
            p.add_argument("class_name", nargs="?", choices=sorted(CLASSES), metavar="CLASS")
        if name != "gen":
            p.add_argument("input")
    return parser


def main(argv=None):
    _configure_logging()
    args = build_parser().parse_args(argv)
    if getattr(args, "class_name", None):
        args.cls = args.class_name
    if args.tol <= 0 or args.max_sweeps < 1:
        print("structcanon: --tol must be positive and --max-sweeps at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (StructureError, DimensionError) as exc:
        print(f"structcanon: structure check failed: {exc}", file=sys.stderr)
        return EXIT_STRUCTURE
    except ConvergenceError as exc:
        print(f"structcanon: no convergence: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (OSError, MatrixFormatError, UsageError, ValueError) as exc:
        print(f"structcanon: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
