"""
Command-line front end.

Every command except ``convert`` prints one JSON report to stdout; diagnostics
go to stderr. Exit codes: 0 when the command completed (whatever the verdict),
2 for bad input, 3 when a size guard refused the work.
"""

import argparse
import json
import logging
import math
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Sequence

from exciton_invariants import __version__
from exciton_invariants.core.config import Settings, get_settings
from exciton_invariants.core.errors import ExcitonError, GuardLimitError, InputError
from exciton_invariants.core.exciton import Flavor, build_level, level_graph
from exciton_invariants.core.formats import (
    FORMATS,
    GRAPH6,
    detect_format,
    format_graph,
    read_catalog,
    read_graph,
)
from exciton_invariants.core.graph import Graph
from exciton_invariants.core.oracle import (
    brute_force_isomorphic,
    verify_block_equivalence,
    verify_excitation_conservation,
)
from exciton_invariants.core.spectral import (
    char_poly_exact,
    default_tolerance,
    spectrum,
)
from exciton_invariants.pipelines import BatchPipeline, DistinguishPipeline

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_GUARD_LIMIT = 3


def snap(value: float, tol: float) -> Optional[float]:
    """
    JSON-stable rendering of a float.

    Values within tol of an integer become that integer, others keep 12
    significant digits. -0.0 becomes 0.0 and non-finite values become None.
    """
    if not math.isfinite(value):
        return None
    nearest = round(value)
    if abs(value - nearest) <= tol:
        return float(nearest) + 0.0
    return float(f"{value:.12g}") + 0.0


def _round12(value: Optional[float]) -> Optional[float]:
    if value is None or not math.isfinite(value):
        return None
    return float(f"{value:.12g}") + 0.0


def _configure_logging(verbosity: int, settings: Settings) -> None:
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = getattr(logging, settings.log_level.upper(), logging.WARNING)
    logging.basicConfig(
        stream=sys.stderr,
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


def _envelope(args: argparse.Namespace, inputs: Dict[str, Any]) -> Dict[str, Any]:
    payload: Dict[str, Any] = {
        "tool_version": __version__,
        "command": args.command,
        "inputs": inputs,
    }
    if not args.reproducible:
        payload["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return payload


def _emit(payload: Dict[str, Any]) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    sys.stdout.flush()


def _format_of(args: argparse.Namespace, path: Path) -> str:
    return args.format or detect_format(path)


def _read(args: argparse.Namespace, path: Path) -> Graph:
    return read_graph(path, args.format, args.vertices)


def cmd_spectrum(args: argparse.Namespace, settings: Settings) -> int:
    """Spectrum of one level matrix, optionally with its exact characteristic polynomial."""
    g = _read(args, args.input)
    matrix = build_level(g, args.level, args.flavor, settings).base
    values = spectrum(matrix)
    tol = args.tol if args.tol is not None else default_tolerance(matrix, settings)

    payload = _envelope(
        args,
        {
            "input": str(args.input),
            "format": _format_of(args, args.input),
            "level": args.level,
            "flavor": args.flavor,
        },
    )
    payload.update(
        {
            "n_vertices": g.n_vertices,
            "level": args.level,
            "flavor": args.flavor,
            "dim": values.dim,
            "tolerance": _round12(tol),
            "spectrum": [snap(v, tol) for v in values.values],
            "grouped": values.format_grouped(tol),
            "trace": snap(values.trace(), tol),
            "sum_of_squares": snap(values.sum_of_squares(), tol),
        }
    )

    if args.exact:
        poly = char_poly_exact(matrix, settings)
        agree: Optional[bool] = None
        if values.dim <= settings.exact_roots_max_dim:
            roots = poly.roots()
            agree = len(roots) == values.dim and all(
                abs(root - value) <= max(tol, 1e-6) for root, value in zip(roots, values.values)
            )
        else:
            logger.info(
                "Skipping the root cross-check: dimension %d is above %d",
                values.dim,
                settings.exact_roots_max_dim,
            )
        payload["char_poly"] = {
            "coefficients": list(poly.coefficients),
            "text": str(poly),
            "roots_match_spectrum": agree,
        }

    _emit(payload)
    return EXIT_OK


def _distinguish_dict(report_dict: Dict[str, Any]) -> Dict[str, Any]:
    for check in report_dict["levels_checked"]:
        tol = check["tolerance"]
        if check["max_gap"] is not None:
            check["max_gap"] = snap(check["max_gap"], tol) if tol is not None else None
        check["tolerance"] = _round12(tol)
    return report_dict


def cmd_distinguish(args: argparse.Namespace, settings: Settings) -> int:
    """Escalate through screens and levels until the pair is told apart."""
    g1 = _read(args, args.input1)
    g2 = _read(args, args.input2)
    pipeline = DistinguishPipeline(
        max_level=args.max_level,
        flavor=Flavor(args.flavor),
        tol=args.tol,
        skip_screens=args.skip_screens,
        all_levels=args.all_levels,
        force=args.force,
        settings=settings,
    )
    report = pipeline.run((g1, g2))

    payload = _envelope(
        args,
        {
            "input1": str(args.input1),
            "input2": str(args.input2),
            "format": [_format_of(args, args.input1), _format_of(args, args.input2)],
            "max_level": args.max_level,
            "flavor": args.flavor,
            "skip_screens": args.skip_screens,
            "all_levels": args.all_levels,
        },
    )
    payload.update(_distinguish_dict(report.to_dict()))
    _emit(payload)
    return EXIT_OK


def cmd_convert(args: argparse.Namespace, settings: Settings) -> int:
    """Re-encode a graph, or export a level matrix as a graph."""
    g = _read(args, args.input)
    if args.export_level is not None:
        g = level_graph(g, args.export_level, settings)
        logger.info("Exported level %d as a graph on %d vertices", args.export_level, g.n_vertices)
    text = format_graph(g, args.to)

    if args.output is None:
        sys.stdout.write(text)
    else:
        args.output.write_text(text, encoding="utf-8")
    return EXIT_OK


def cmd_batch(args: argparse.Namespace, settings: Settings) -> int:
    """Partition a catalog into buckets the invariants cannot separate."""
    graphs, skipped = read_catalog(args.catalog, args.format, args.vertices)
    pipeline = BatchPipeline(
        max_level=args.max_level,
        flavor=Flavor(args.flavor),
        tol=args.tol,
        settings=settings,
    )
    report = pipeline.run(graphs)

    payload = _envelope(
        args,
        {
            "catalog": str(args.catalog),
            "format": args.format,
            "max_level": args.max_level,
            "flavor": args.flavor,
        },
    )
    payload.update(report.to_dict())
    payload["skipped"] = [{"name": name, "reason": reason} for name, reason in skipped]
    _emit(payload)
    return EXIT_OK


def cmd_oracle_check(args: argparse.Namespace, settings: Settings) -> int:
    """Cross-check the level machinery against the independent oracles."""
    expected_inputs = 2 if args.mode == "isomorphism" else 1
    if len(args.inputs) != expected_inputs:
        raise InputError(
            f"--mode {args.mode} takes {expected_inputs} input file(s), got {len(args.inputs)}"
        )

    graphs = [_read(args, path) for path in args.inputs]
    payload = _envelope(
        args,
        {
            "inputs": [str(path) for path in args.inputs],
            "mode": args.mode,
            "level": args.level,
            "flavor": args.flavor,
        },
    )

    if args.mode == "block":
        g = graphs[0]
        levels = [args.level] if args.level is not None else list(range(g.n_vertices + 1))
        checks = [
            {
                "level": n,
                "dim": math.comb(g.n_vertices, n),
                "passed": verify_block_equivalence(g, n, settings),
            }
            for n in levels
        ]
        payload["checks"] = checks
        payload["passed"] = all(check["passed"] for check in checks)

    elif args.mode == "conservation":
        payload["passed"] = verify_excitation_conservation(graphs[0], settings)

    else:
        g1, g2 = graphs
        brute = brute_force_isomorphic(g1, g2, settings)
        report = DistinguishPipeline(
            max_level=args.level,
            flavor=Flavor(args.flavor),
            tol=args.tol,
            all_levels=True,
            settings=settings,
        ).run((g1, g2))
        # any Different verdict on an isomorphic pair is a soundness failure
        invariants_differ = report.first_distinguishing_level is not None
        payload.update(
            {
                "brute_force": brute.outcome,
                "witness": list(brute.witness.images) if brute.witness else None,
                "invariants_differ": invariants_differ,
                "first_distinguishing_level": report.first_distinguishing_level,
                "passed": not (brute.is_isomorphic and invariants_differ),
            }
        )

    _emit(payload)
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        choices=FORMATS,
        default=None,
        help="Input format; detected from the file extension when omitted",
    )
    parser.add_argument("--vertices", type=int, default=None, help="Vertex count N (required for hex)")
    parser.add_argument(
        "--flavor",
        choices=[flavor.value for flavor in Flavor],
        default=Flavor.ADJACENCY.value,
        help="Level-matrix flavour",
    )
    parser.add_argument("--tol", type=float, default=None, help="Fixed eigenvalue tolerance")
    parser.add_argument(
        "--reproducible", action="store_true", help="Omit the timestamp from the JSON report"
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="INFO logging; repeat for DEBUG"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exciton-invariants",
        description="Graph isomorphism invariants from level-n exciton matrix spectra",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    spectrum_parser = subparsers.add_parser("spectrum", help="Spectrum of one level matrix")
    spectrum_parser.add_argument("input", type=Path)
    spectrum_parser.add_argument("--level", type=int, default=1)
    spectrum_parser.add_argument(
        "--exact", action="store_true", help="Also compute the exact characteristic polynomial"
    )
    _add_common(spectrum_parser)
    spectrum_parser.set_defaults(handler=cmd_spectrum)

    distinguish_parser = subparsers.add_parser("distinguish", help="Try to tell two graphs apart")
    distinguish_parser.add_argument("input1", type=Path)
    distinguish_parser.add_argument("input2", type=Path)
    distinguish_parser.add_argument("--max-level", type=int, default=None, help="Default floor(N/2)")
    distinguish_parser.add_argument("--skip-screens", action="store_true")
    distinguish_parser.add_argument(
        "--all-levels", action="store_true", help="Keep going after the first Different level"
    )
    distinguish_parser.add_argument(
        "--force", action="store_true", help="Allow levels above floor(N/2)"
    )
    _add_common(distinguish_parser)
    distinguish_parser.set_defaults(handler=cmd_distinguish)

    convert_parser = subparsers.add_parser("convert", help="Convert between graph formats")
    convert_parser.add_argument("input", type=Path)
    convert_parser.add_argument("--to", choices=FORMATS, default=GRAPH6)
    convert_parser.add_argument("--output", type=Path, default=None, help="Default stdout")
    convert_parser.add_argument(
        "--export-level",
        type=int,
        default=None,
        help="Write the level-n adjacency matrix as a graph instead",
    )
    _add_common(convert_parser)
    convert_parser.set_defaults(handler=cmd_convert)

    batch_parser = subparsers.add_parser("batch", help="Bucket a catalog by invariants")
    batch_parser.add_argument("catalog", type=Path, help="Directory or one-graph-per-line file")
    batch_parser.add_argument("--max-level", type=int, default=None, help="Default floor(N/2)")
    _add_common(batch_parser)
    batch_parser.set_defaults(handler=cmd_batch)

    oracle_parser = subparsers.add_parser("oracle-check", help="Run the independent oracles")
    oracle_parser.add_argument("inputs", type=Path, nargs="+")
    oracle_parser.add_argument(
        "--mode", choices=["block", "isomorphism", "conservation"], default="block"
    )
    oracle_parser.add_argument(
        "--level",
        type=int,
        default=None,
        help="Block level (default all) or highest level compared in isomorphism mode",
    )
    _add_common(oracle_parser)
    oracle_parser.set_defaults(handler=cmd_oracle_check)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point for the exciton-invariants console script.

    Args:
        argv: Arguments without the program name; sys.argv[1:] when None

    Returns:
        Process exit code
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    handler: Callable[[argparse.Namespace, Settings], int] = args.handler

    try:
        settings = get_settings()
        _configure_logging(args.verbose, settings)
        return handler(args, settings)
    except GuardLimitError as e:
        logger.error("%s", e)
        return EXIT_GUARD_LIMIT
    except (ExcitonError, ValueError) as e:
        logger.error("%s", e)
        return EXIT_INPUT_ERROR
