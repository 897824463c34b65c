"""
srdef - command-line front end

Builds a complex from a facet file or a named identifier, runs one
computation and prints a text report or JSON.
"""
import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional

import pandas as pd

from complex_core import (
    Multidegree, SimplicialComplex, VertexSet, f_vector_and_counts, flip, is_closed_manifold,
    is_named_complex, load_facet_file, named_complex, write_facet_text,
)
from config import DEFAULT_ORDER, DEFAULT_OUTPUT_FORMAT, OUTPUT_FORMATS, Config
from cotangent import (
    b_set, degree_zero_totals, graded_piece, is_rigid, surface_formulas, theta_and_projective_dims,
    threefold_formula,
)
from exceptions import SrdefError, UnsupportedError, UsageError
from logger import get_logger, get_recent_warnings, report_handler, set_level
from oracle_algebra import graded_oracle
from topology import homology_dims, is_orientable, local_cohomology_dim, twisted_structure_sheaf_cohomology
from utils import Timer, format_vertices, parse_integer_vector, parse_vertex_list
from versal import (
    KRULL_METHODS, first_order_table, krull_dimension, matrices_disjoint, normal_form,
    verify_normal_form_relations, versal_ideal,
)

logger = get_logger(__name__)

PROGRAM = "srdef"


@dataclass
class CommandResult:
    """Payload for JSON, lines for text mode, and the exit status"""
    payload: Dict
    lines: List[str] = field(default_factory=list)
    exit_status: int = 0


def parse_complex_source(spec: str) -> SimplicialComplex:
    """A readable facet file path, or a named identifier such as torus:7"""
    path = Path(spec)
    if path.is_file():
        return load_facet_file(path)
    if is_named_complex(spec):
        return named_complex(spec)
    raise UsageError(f"'{spec}' is neither a readable facet file nor a known complex identifier")


def _load(args) -> SimplicialComplex:
    K = parse_complex_source(args.source)
    args.complex = K
    return K


def _normalization_lines(K: SimplicialComplex) -> List[str]:
    report = K.normalization
    if not report.has_changes:
        return []
    lines = [f"normalized input: {report.merged_duplicates} duplicate(s) merged, "
             f"{len(report.dropped_nonmaximal)} non-maximal facet(s) dropped"]
    lines.extend(f"  dropped {format_vertices(f)}" for f in report.dropped_nonmaximal)
    if report.void:
        lines.append("  empty input gives the void complex")
    return lines


def _table(frame: pd.DataFrame) -> List[str]:
    if frame.empty:
        return ["(none)"]
    return frame.to_string(index=False).splitlines()


def _degree(args) -> Multidegree:
    return Multidegree.parse(args.a or "", args.b or "")


# -- command handlers ---------------------------------------------------------

def cmd_info(args) -> CommandResult:
    K = _load(args)
    counts = f_vector_and_counts(K)
    try:
        manifold, dimension = is_closed_manifold(K)
    except UnsupportedError as exc:
        logger.warning(f"Manifold recognition skipped: {exc}")
        manifold, dimension = None, K.dim
    orientable = is_orientable(K) if manifold else None
    betti = homology_dims(K, reduced=True)

    payload = {
        "n_vertices": K.n_vertices,
        "dimension": K.dim,
        "f_vector": list(counts.f_vector),
        "euler_characteristic": counts.euler_characteristic,
        "vertex_valencies": {str(v): k for v, k in sorted(counts.vertex_valencies().items())},
        "closed_manifold": manifold,
        "orientable": orientable,
        "reduced_homology": betti.to_dict(),
    }
    lines = [
        f"vertices: {K.n_vertices}, dimension: {K.dim}",
        f"f-vector: {tuple(counts.f_vector)}",
        f"euler characteristic: {counts.euler_characteristic}",
        f"closed manifold: {manifold} (dimension {dimension}), orientable: {orientable}",
        f"reduced Betti numbers from degree {betti.start}: {list(betti.dims)}",
        "valency counts:",
    ]
    lines.extend("  " + line for line in _table(counts.to_dataframe()))
    return CommandResult(payload, lines)


def cmd_bset(args) -> CommandResult:
    K = _load(args)
    members = b_set(K)
    payload = {"count": len(members), "b_set": [b.to_list() for b in members]}
    lines = [f"|B(K)| = {len(members)}"] + [f"  {format_vertices(b)}" for b in members]
    return CommandResult(payload, lines)


def _graded(args, i: int) -> CommandResult:
    K = _load(args)
    if args.degree0:
        summary = degree_zero_totals(K, workers=args.parallel)
        total = summary.t1_total if i == 1 else summary.t2_total
        payload = summary.to_dict()
        lines = [f"dim T{i}_A,0 = {total}"]
        lines.extend(f"  |a| = {size}: {value}" for size, value in sorted(summary.breakdown(i).items(), reverse=True))
        if i == 1:
            theta = theta_and_projective_dims(K, summary)
            payload["projective"] = theta.to_dict()
            lines.append(f"dim T1_P = {theta.t1_projective}")
        else:
            payload["projective"] = {"t2_bound": "partial"}
        return CommandResult(payload, lines)

    if args.b is None and args.a is None:
        raise UsageError("Give a degree with --a/--b, or --degree0")
    degree = _degree(args)
    report = graded_piece(K, i, degree, use_oracle=args.oracle)
    lines = [f"dim T{i} in degree {degree} = {report.dimension} ({report.method})"]
    if report.basis:
        lines.append(f"  basis: {report.basis}")
    return CommandResult(report.to_dict(), lines)


def cmd_t1(args) -> CommandResult:
    return _graded(args, 1)


def cmd_t2(args) -> CommandResult:
    return _graded(args, 2)


def _oracle(args, i: int) -> CommandResult:
    K = _load(args)
    degree = _degree(args)
    dimension = graded_oracle(K, i, degree)
    payload = {"i": i, "dim": dimension, "method": "oracle"}
    payload.update(degree.to_dict())
    return CommandResult(payload, [f"oracle dim T{i} in degree {degree} = {dimension}"])


def cmd_oracle_t1(args) -> CommandResult:
    return _oracle(args, 1)


def cmd_oracle_t2(args) -> CommandResult:
    return _oracle(args, 2)


def cmd_surface(args) -> CommandResult:
    report = surface_formulas(_load(args))
    lines = [
        f"dim T1_P = {report.t1_projective} (counting form {report.t1_projective_alternative})",
        f"dim T2_A,0 = {report.t2_affine_degree_zero}",
        f"h2 = {report.h2}, h2(Theta) = {report.h2_theta}",
        f"6χ = Σ(6-k)f0^(k): {report.euler_identity_holds}",
        f"rigid: {report.rigid}",
    ]
    return CommandResult(report.to_dict(), lines)


def cmd_threefold(args) -> CommandResult:
    report = threefold_formula(_load(args))
    data = report.to_dict()
    lines = [f"dim T1_P = {report.t1_projective}"]
    lines.extend(f"  {name} = {value}" for name, value in data["counters"].items())
    lines.append(f"  h2 = {report.h2}")
    if report.unclassified:
        lines.append(f"  unclassified vertex links: {report.unclassified}")
    return CommandResult(data, lines)


def cmd_rigid(args) -> CommandResult:
    K = _load(args)
    with Timer("Rigidity audit"):
        report = is_rigid(K)
    lines = [f"rigid: {report.rigid}", f"h2 = {report.h2}"]
    lines.extend(f"  edge {format_vertices(e)} has valency {k}" for e, k in report.low_valency_edges)
    return CommandResult(report.to_dict(), lines)


def cmd_local_cohomology(args) -> CommandResult:
    K = _load(args)
    c = parse_integer_vector(args.c)
    dimension = local_cohomology_dim(K, args.i, c)
    payload = {"i": args.i, "c": c, "dim": dimension}
    return CommandResult(payload, [f"dim H^{args.i}_m(A_K) in degree {c} = {dimension}"])


def cmd_sheaf_cohomology(args) -> CommandResult:
    K = _load(args)
    dims = twisted_structure_sheaf_cohomology(K, args.m)
    payload = {"m": args.m, "h": {str(p): dims[p] for p in dims.degrees()}}
    lines = [f"h^{p}(O({args.m})) = {dims[p]}" for p in dims.degrees()]
    return CommandResult(payload, lines)


def cmd_normal_form(args) -> CommandResult:
    form = normal_form(args.n, args.order)
    lines = [f"Z_{form.n}, truncated at parameter degree {form.order}"]
    if form.base_relations:
        lines.append("base relations:")
        lines.extend(f"  {r}" for r in form.base_relations)
    lines.append("equations:")
    for key, equation in sorted(form.equations.items()):
        lifted = "".join(f"y{i}" for i in key)
        lines.append(f"  [{lifted}] {equation}")
    return CommandResult(form.to_dict(), lines)


def cmd_verify_nf(args) -> CommandResult:
    report = verify_normal_form_relations(args.n, args.order, workers=args.parallel)
    lines = [
        f"Z_{report.n} at order {report.order}: {'PASS' if report.passed else 'FAIL'}",
        f"  specializes to the Stanley-Reisner ideal: {report.specializes}",
    ]
    for check in report.checks:
        status = "ok" if check.passed else f"FAIL ({check.residual_terms} residual terms)"
        lines.append(f"  {check.name}: {status}")
    return CommandResult(report.to_dict(), lines, 0 if report.passed else 2)


def cmd_versal_ideal(args) -> CommandResult:
    V = versal_ideal(_load(args))
    payload = V.to_dict()
    lines = [
        f"{len(V.registry)} variables, {len(V.generators)} minors, exact: {V.exact} ({V.exactness})",
    ]
    for vertex, (top, bottom) in sorted(V.matrices.items()):
        lines.append(f"  vertex {vertex}: [{', '.join(top)}] / [{', '.join(bottom)}]")
    if not V.generators or matrices_disjoint(V):
        report = krull_dimension(V)
        payload["krull_dimension"] = report.dimension
        lines.append(f"krull dimension: {report.dimension}")
    return CommandResult(payload, lines)


def cmd_krull_dim(args) -> CommandResult:
    V = versal_ideal(_load(args))
    with Timer("Krull dimension"):
        report = krull_dimension(V, method=args.method)
    lines = [
        f"krull dimension: {report.dimension} ({report.method})",
        f"  coordinate subspace bound: {report.coordinate_bound}",
        f"  tangent dimensions at sampled points: {report.tangent_dimensions}",
    ]
    return CommandResult(report.to_dict(), lines, 0 if report.consistent else 2)


def cmd_first_order_table(args) -> CommandResult:
    table = first_order_table(_load(args))
    return CommandResult(table.to_dict(), _table(table.to_dataframe()))


def _write_or_print(K: SimplicialComplex, title: str, output: Optional[str]) -> List[str]:
    text = write_facet_text(K, title)
    if output:
        try:
            Path(output).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"Cannot write {output}: {exc}") from exc
        logger.info(f"Wrote {len(K.facets)} facets to {output}")
        return [f"wrote {len(K.facets)} facets to {output}"]
    return text.rstrip("\n").splitlines()


def cmd_flip(args) -> CommandResult:
    K = _load(args)
    a, b = VertexSet(parse_vertex_list(args.a)), VertexSet(parse_vertex_list(args.b))
    flipped = flip(K, a, b)
    payload = {"a": a.to_list(), "b": b.to_list(), "complex": flipped.to_dict()}
    title = f"{args.source} flipped at {format_vertices(a)} -> {format_vertices(b)}"
    return CommandResult(payload, _write_or_print(flipped, title, args.output))


def cmd_export(args) -> CommandResult:
    K = _load(args)
    payload = {"complex": K.to_dict(), "output": args.output}
    return CommandResult(payload, _write_or_print(K, args.source, args.output))


# -- parser ---------------------------------------------------------------------

def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=OUTPUT_FORMATS, default=DEFAULT_OUTPUT_FORMAT,
                        help="report format")
    common.add_argument("--parallel", type=int, default=None, metavar="W",
                        help="worker threads (default: SRDEF_PARALLEL_WORKERS)")
    common.add_argument("--log-level", default=None, help="override LOG_LEVEL for this run")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROGRAM,
        description="Deformation invariants of Stanley-Reisner schemes",
    )
    parser.add_argument("--show-config", action="store_true", help="print the effective configuration")
    common = _common_options()
    commands = parser.add_subparsers(dest="command", metavar="command")

    def add(name: str, handler: Callable, help_text: str, source: bool = True) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, parents=[common], help=help_text)
        if source:
            sub.add_argument("source", help="facet file or identifier such as torus:7")
        sub.set_defaults(handler=handler)
        return sub

    add("info", cmd_info, "f-vector, valencies, homology, manifold test")
    add("bset", cmd_bset, "the sets b with one-dimensional T^1")

    for name, handler in (("t1", cmd_t1), ("t2", cmd_t2)):
        sub = add(name, handler, f"graded {name.upper()} or its degree-zero total")
        sub.add_argument("--a", default=None, help='vertex:multiplicity list, e.g. "0:2,3:1"')
        sub.add_argument("--b", default=None, help='vertex list, e.g. "1,4,7"')
        sub.add_argument("--degree0", action="store_true", help="sum over all degree-zero pieces")
        sub.add_argument("--oracle", action="store_true", help="use the algebraic oracle")

    for name, handler in (("oracle-t1", cmd_oracle_t1), ("oracle-t2", cmd_oracle_t2)):
        sub = add(name, handler, "graded piece from the monomial presentation")
        sub.add_argument("--a", default="", help='vertex:multiplicity list')
        sub.add_argument("--b", default="", help="vertex list")

    add("surface", cmd_surface, "dimension formulas for surfaces")
    add("threefold", cmd_threefold, "dimension formula for 3-manifolds")
    add("rigid", cmd_rigid, "sufficient rigidity test for 3-manifolds")

    sub = add("local-cohomology", cmd_local_cohomology, "graded local cohomology of A_K")
    sub.add_argument("--i", type=int, required=True)
    sub.add_argument("--c", required=True, help='degree vector, e.g. "--c=-1,0,0,-1"')

    sub = add("sheaf-cohomology", cmd_sheaf_cohomology, "cohomology of O(m) on P(K)")
    sub.add_argument("--m", type=int, required=True)

    for name, handler, help_text in (
        ("normal-form", cmd_normal_form, "deformation equations of Z_n"),
        ("verify-nf", cmd_verify_nf, "check that the relations of Z_n lift"),
    ):
        sub = add(name, handler, help_text, source=False)
        sub.add_argument("--n", type=int, required=True)
        sub.add_argument("--order", type=int, default=DEFAULT_ORDER)

    add("versal-ideal", cmd_versal_ideal, "minors ideal of the versal base space")
    sub = add("krull-dim", cmd_krull_dim, "Krull dimension of the versal base space")
    sub.add_argument("--method", choices=KRULL_METHODS, default="auto")
    add("first-order-table", cmd_first_order_table, "first-order normal form per vertex")

    sub = add("flip", cmd_flip, "bistellar flip of a face")
    sub.add_argument("--a", required=True, help="face to remove")
    sub.add_argument("--b", required=True, help="face to insert")
    sub.add_argument("--output", default=None, help="write the facet file here")

    sub = add("export", cmd_export, "write the facet file of a complex")
    sub.add_argument("--output", default=None, help="write the facet file here")
    return parser


def _reject_degree_mix(parser: argparse.ArgumentParser, args):
    if getattr(args, "degree0", False) and (args.a is not None or args.b is not None):
        parser.error(f"{args.command}: argument --degree0: not allowed with argument --a/--b")


# -- output ---------------------------------------------------------------------

def _emit_json(data: Dict):
    print(json.dumps(data, indent=2, ensure_ascii=False))


def _emit(args, result: CommandResult):
    K = getattr(args, "complex", None)
    if args.format == "json":
        data = {"command": args.command}
        if getattr(args, "source", None):
            data["source"] = args.source
        data["result"] = result.payload
        if K is not None and K.normalization.has_changes:
            data["normalization"] = K.normalization.to_dict()
        data["warnings"] = get_recent_warnings()
        _emit_json(data)
        return
    lines = _normalization_lines(K) if K is not None else []
    for line in lines + result.lines:
        print(line)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _reject_degree_mix(parser, args)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1

    if getattr(args, "log_level", None):
        set_level(args.log_level)

    report_handler.clear()
    for problem in Config.validate():
        logger.warning(problem)

    if args.show_config:
        _emit_json(Config.to_dict())
        if not args.command:
            return 0
    if not args.command:
        parser.print_help()
        return 1

    try:
        result = args.handler(args)
        _emit(args, result)
        return result.exit_status
    except SrdefError as exc:
        logger.error(f"{args.command} failed: {exc}")
        if args.format == "json":
            _emit_json({"error": exc.to_dict(), "warnings": get_recent_warnings()})
        else:
            print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return exc.exit_status
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return 1
    except Exception as exc:
        logger.critical(f"Unexpected error in {args.command}: {exc}", exc_info=True)
        if args.format == "json":
            _emit_json({"error": {"code": "internal", "message": str(exc)}})
        else:
            print(f"error [internal]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
