"""``strip-hardy`` command line: analyses of a JSON spec with text and CSV reports.

Exit codes: 0 success, 2 audit or precondition failure, 3 spec parse error.
Every report is assembled in memory first, so a failing command never leaves
a partial CSV behind.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .deficiency import (INFINITE, atomic_singular_deficiency_vectors, blaschke_deficiency_basis,
                         classify, deficiency_indices, midline_truncated_basis,
                         perturbation_criterion, von_neumann_check)
from .errors import SpecParseError, StripHardyError, SymmetryAuditError
from .extension import (SquareSymbol, apply_extension, apply_spectral_function, build_extension,
                        parse_spectral_function, square_spec, symmetry_audit)
from .grid import BoundaryVector, StripGrid, l2_norm
from .specfile import load_spec
from .symbols import (Approach, SymbolSpec, boundary_values, check_symmetry,
                      inner_modulus_audit, radial_modulus_profile, split_outer)

EXIT_OK, EXIT_AUDIT, EXIT_PARSE = 0, 2, 3
DEFAULT_GRID = (16.0, 2048)
# the Blaschke vectors decay like e^{-|theta|/2}; on the small grid their
# truncation jump swamps the continuation
DEFICIENCY_GRID = (96.0, 8192)
DEFAULT_TOL = 1e-5
DEFAULT_SEED = 42
AUDIT_TOL = 1e-6
AUDIT_TRIALS = 50


def fmt(x) -> str:
    """17 significant digits, the CSV number format."""
    return format(float(x), ".17g")


@dataclass
class Table:
    name: str
    header: list
    rows: list = field(default_factory=list)

    def render(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(self.header)
        for row in self.rows:
            w.writerow([v if isinstance(v, str) else fmt(v) for v in row])
        return buf.getvalue()


@dataclass
class ReportBundle:
    lines: list = field(default_factory=list)
    tables: list = field(default_factory=list)
    exit_code: int = EXIT_OK

    def add(self, text: str = ""):
        self.lines.append(text)

    @property
    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def boundary_table(name: str, grid: StripGrid, f0, fpi) -> Table:
    t = Table(name, ["theta", "re_f0", "im_f0", "re_fpi", "im_fpi"])
    for th, a, b in zip(grid.theta, f0, fpi):
        t.rows.append([th, a.real, a.imag, b.real, b.imag])
    return t


def vector_table(name: str, v: BoundaryVector) -> Table:
    t = Table(name, ["theta", "re_v", "im_v", "abs_v"])
    for th, a in zip(v.grid.theta, v.samples):
        t.rows.append([th, a.real, a.imag, abs(a)])
    return t


def _eig_label(e: complex) -> str:
    return "+i" if e.imag > 0 else "-i"


def write_bundle(bundle: ReportBundle, out: Path):
    """Write ``report.txt`` and the CSVs, each through a temporary file."""
    out.mkdir(parents=True, exist_ok=True)
    files = [("report.txt", bundle.text)] + [(t.name, t.render()) for t in bundle.tables]
    staged = []
    try:
        for name, body in files:
            fd, tmp = tempfile.mkstemp(dir=out, prefix=".tmp-")
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(body)
            staged.append((tmp, out / name))
        for tmp, dest in staged:
            os.replace(tmp, dest)
    finally:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)


def _header(bundle: ReportBundle, args, grid: StripGrid):
    bundle.add(f"strip-hardy {args.command}")
    bundle.add(f"spec: {args.spec}")
    bundle.add(f"grid-L: {fmt(grid.L)}")
    bundle.add(f"grid-N: {grid.N}")
    bundle.add(f"tol: {fmt(args.tol)}")
    bundle.add(f"seed: {args.seed}")
    bundle.add("")


def _symbol(loaded):
    return square_spec(loaded.spec) if loaded.square_root else loaded.spec


def _indices_line(idx) -> str:
    if not idx.determined:
        return f"indices: not determined ({idx.note})"
    if idx.n_plus == 0 and idx.n_minus == 0:
        tail = "essentially self-adjoint"
    elif idx.equal:
        tail = "self-adjoint extensions exist"
    else:
        tail = "no self-adjoint extension"
    return f"indices: {idx}; {tail}"


# ------------------------------------------------------------------ commands

def cmd_analyze(args, loaded, grid) -> ReportBundle:
    b = ReportBundle()
    _header(b, args, grid)
    spec = _symbol(loaded)
    cls = classify(spec)
    count = "infinite" if cls.blaschke_count == INFINITE else str(int(cls.blaschke_count))
    b.add(f"blaschke zeros: {count}")
    b.add(f"singular inner: {'nontrivial' if cls.singular_nontrivial else 'trivial'}")
    b.add(f"outer: {spec.outer.kind} ({'admissible' if cls.outer_admissible else 'inadmissible'})")
    b.add(_indices_line(deficiency_indices(cls)))
    f0, fpi = boundary_values(spec, grid)
    sym = check_symmetry(spec, grid)
    inner = inner_modulus_audit(spec, grid)
    b.add(f"symmetry audit: {fmt(sym['max_deviation'])} {'pass' if sym['pass'] else 'FAIL'}")
    b.add(f"inner modulus audit: {fmt(inner['max_deviation'])} "
          f"{'pass' if inner['pass'] else 'FAIL'}")
    pc = perturbation_criterion(spec, grid)
    if pc.passes:
        b.add(f"perturbation criterion: pass (r* = {fmt(pc.r)})")
    else:
        b.add(f"perturbation criterion: fails (worst theta = {fmt(pc.worst_point)})")
    vn = von_neumann_check(spec, grid)
    b.add(f"von Neumann conjugation: {'commutes' if vn.commutes else 'does not commute'} "
          f"(deviation {fmt(vn.max_deviation)})")
    b.tables.append(boundary_table("boundary.csv", grid, f0, fpi))
    if not (sym["pass"] and inner["pass"]):
        b.exit_code = EXIT_AUDIT
    return b


def _int_list(text: str) -> list:
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise StripHardyError(f"bad integer list {text!r}") from None
    if any(v < 0 for v in vals):
        raise StripHardyError("list entries must be nonnegative")
    return vals


def cmd_deficiency(args, loaded, grid) -> ReportBundle:
    b = ReportBundle()
    _header(b, args, grid)
    spec = _symbol(loaded)
    bl, sg = spec.blaschke, spec.singular
    if not spec.outer.trivial or spec.phase != 1:
        raise _Precondition("deficiency bases need a trivial outer factor and phase 1")
    if sg.nontrivial() and bl.count:
        raise _Precondition("deficiency bases need a pure Blaschke or a pure singular symbol")
    if sg.nontrivial():
        n_list = _int_list(args.n_list)
        b.add(f"construction: atomic singular, n = {','.join(map(str, n_list))}")
        vectors = atomic_singular_deficiency_vectors(sg, grid, n_list)
    elif bl.declared_infinite:
        k_list = _int_list(args.k_list)
        b.add(f"construction: midline truncation, k = {','.join(map(str, k_list))}")
        vectors = midline_truncated_basis(bl, grid, k_list)
    else:
        b.add(f"construction: finite Blaschke product, {bl.count} zeros")
        vectors = blaschke_deficiency_basis(bl, grid)
    table = Table("basis.csv", ["k", "eigenvalue", "residual", "trusted"])
    for v in vectors:
        table.rows.append([str(v.k), _eig_label(v.eigenvalue), v.residual,
                           "true" if v.trusted else "false"])
        sign = "plus" if v.eigenvalue.imag > 0 else "minus"
        b.tables.append(vector_table(f"vector_{sign}_k{v.k}.csv", v.samples))
        extra = "" if v.analytic_residual is None else f" analytic {fmt(v.analytic_residual)}"
        b.add(f"k={v.k} eigenvalue {_eig_label(v.eigenvalue)} residual {fmt(v.residual)} "
              f"{'trusted' if v.trusted else 'untrusted'}{extra}")
        if v.trusted and v.residual > args.tol:
            b.exit_code = EXIT_AUDIT
    if not vectors:
        b.add("no deficiency vectors")
    b.tables.insert(0, table)
    return b


def cmd_split(args, loaded, grid) -> ReportBundle:
    b = ReportBundle()
    _header(b, args, grid)
    outer = _symbol(loaded).outer
    sp = split_outer(outer, grid)
    f_out = boundary_values(SymbolSpec(outer=outer), grid)[0]
    audits = sp.audits(f_out)
    b.add(f"outer: {outer.kind}")
    for key in ("unimodular", "reconstruction", "cross_boundary"):
        b.add(f"{key}: {fmt(audits[key])}")
    b.tables.append(boundary_table("f_minus.csv", grid, sp.f_minus_on_0.samples,
                                   sp.f_minus_on_minus_pi.samples))
    b.tables.append(boundary_table("f_plus.csv", grid, sp.f_plus_on_0.samples,
                                   sp.f_plus_on_minus_pi.samples))
    if max(audits.values()) > args.tol:
        b.exit_code = EXIT_AUDIT
    return b


def read_vector_csv(path, grid: StripGrid) -> BoundaryVector:
    """Two columns ``re, im`` aligned with ``grid``; a header row is optional."""
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for k, row in enumerate(csv.reader(fh)):
            if not row:
                continue
            try:
                rows.append((float(row[0]), float(row[1])))
            except (ValueError, IndexError):
                if k == 0 and not rows:
                    continue
                raise StripHardyError(f"{path}: row {k + 1} is not two numbers") from None
    if len(rows) != grid.N:
        raise StripHardyError(f"{path}: {len(rows)} rows for a grid of {grid.N} nodes")
    arr = np.array(rows)
    return BoundaryVector(grid, arr[:, 0] + 1j * arr[:, 1], 0.0)


def cmd_extend(args, loaded, grid) -> ReportBundle:
    if not loaded.square_root:
        raise _Precondition("canonical extension requires f = h²")
    b = ReportBundle()
    _header(b, args, grid)
    if args.input:
        xi = read_vector_csv(args.input, grid)
    else:
        xi = grid.sample(lambda th: np.exp(-th * th / 2))
    try:
        ext = build_extension(SquareSymbol(loaded.spec), grid)
    except SymmetryAuditError as exc:
        raise _Precondition(str(exc)) from None
    func = args.function
    g = parse_spectral_function(func)
    res = apply_extension(ext, xi)
    b.add(f"input: {args.input or 'gaussian exp(-theta^2/2)'}")
    b.add(f"function: {func}")
    b.add(f"in_domain: {'true' if res.in_domain else 'false'} (defect {fmt(res.defect)})")
    out = res.result if func == "identity" else apply_spectral_function(ext, g, xi)
    if func == "square":
        twice = apply_extension(ext, res.result).result
        dev = l2_norm(BoundaryVector(grid, out.samples - twice.samples)) / max(l2_norm(twice), 1e-300)
        b.add(f"square vs identity twice: {fmt(dev)}")
    audit = symmetry_audit(ext, AUDIT_TRIALS, args.seed)
    b.add(f"symmetry audit: {fmt(audit)} ({AUDIT_TRIALS} trials) "
          f"{'pass' if audit <= AUDIT_TOL else 'FAIL'}")
    u = Table("u.csv", ["theta", "re_u", "im_u"])
    for th, a in zip(grid.theta, ext.u_on_0.samples):
        u.rows.append([th, a.real, a.imag])
    b.tables += [u, vector_table("result.csv", out)]
    if audit > AUDIT_TOL:
        b.exit_code = EXIT_AUDIT
    return b


def cmd_profile(args, loaded, grid) -> ReportBundle:
    b = ReportBundle()
    _header(b, args, grid)
    approach = Approach.parse(args.approach)
    prof = radial_modulus_profile(_symbol(loaded), approach)
    b.add(f"approach: {args.approach}")
    b.add(f"min |f|: {fmt(np.min(prof.modulus))}")
    t = Table("profile.csv", [approach.parameter_name, "abs_f", "log_abs_f"])
    for s, m, lm in zip(prof.steps, prof.modulus, prof.log_modulus):
        t.rows.append([s, m, lm])
    b.tables.append(t)
    return b


class _Precondition(StripHardyError):
    pass


COMMANDS = {
    "analyze": cmd_analyze,
    "deficiency": cmd_deficiency,
    "split": cmd_split,
    "extend": cmd_extend,
    "profile": cmd_profile,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="strip-hardy",
                                description="Analyse multiplication-by-continuation operators on a strip.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("spec", help="JSON spec file")
    p.add_argument("--grid-L", type=float, default=None,
                   help=f"grid half width (default {DEFAULT_GRID[0]:g}; deficiency {DEFICIENCY_GRID[0]:g})")
    p.add_argument("--grid-N", type=int, default=None,
                   help=f"grid size (default {DEFAULT_GRID[1]}; deficiency {DEFICIENCY_GRID[1]})")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", type=Path, default=None, help="directory for report.txt and CSVs")
    p.add_argument("--input", default=None, help="two-column (re, im) CSV for extend")
    p.add_argument("--function", default="identity",
                   help="identity | square | indicator:a,b | exp:c")
    p.add_argument("--approach", default="ray:theta=0",
                   help="ray:theta=<x> | atom:s=<s> | infinity:+|-")
    p.add_argument("--n-list", default="0,1", help="atomic vector orders")
    p.add_argument("--k-list", default="0", help="midline truncation orders")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    base = DEFICIENCY_GRID if args.command == "deficiency" else DEFAULT_GRID
    L = base[0] if args.grid_L is None else args.grid_L
    N = base[1] if args.grid_N is None else args.grid_N
    try:
        grid = StripGrid(L, N)
        loaded = load_spec(args.spec)
    except SpecParseError as exc:
        print(f"error: {args.spec}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (StripHardyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE if isinstance(exc, OSError) else EXIT_AUDIT
    try:
        bundle = COMMANDS[args.command](args, loaded, grid)
    except (StripHardyError, OverflowError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_AUDIT
    sys.stdout.write(bundle.text)
    if args.out is not None:
        write_bundle(bundle, args.out)
    return bundle.exit_code


if __name__ == "__main__":
    sys.exit(main())
