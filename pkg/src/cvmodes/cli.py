"""Command-line interface.

Subcommands: ``validate``, ``transform``, ``analyze``, ``reproduce-paper``.
Exit codes: 0 success, 2 parse/validation error, 3 pipeline step error,
4 numerical failure.  Analysis verdicts are data and never affect the
exit code.
"""

import argparse
import json
import sys

from .core import purity, total_photon_number, validate
from .entanglement import THRESHOLD_BAND
from .errors import (
    BadPolarization,
    ConvergenceStall,
    ConventionMismatch,
    DimensionMismatch,
    DuplicateIndex,
    DuplicateLabel,
    IndexOutOfRange,
    NonPositiveDeterminant,
    NonSymplectic,
    NotAPermutation,
    NotCircular,
    NumericalFailure,
    ParseError,
    PhysicalityViolation,
    PipelineStepError,
    UnpairedMode,
)
from .io import load_cov_csv, load_state, parse_register_spec, save_state, state_to_dict
from .pipeline import (
    PipelineConfig,
    emit_report,
    reproduce_paper,
    reproduce_paper_json,
    reproduce_paper_text,
    run_pipeline,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_STEP = 3
EXIT_NUMERICAL = 4

_PARSE_ERRORS = (
    ParseError,
    ConventionMismatch,
    PhysicalityViolation,
    DimensionMismatch,
    DuplicateIndex,
    DuplicateLabel,
    IndexOutOfRange,
    NotAPermutation,
    BadPolarization,
    NotCircular,
    UnpairedMode,
    FileNotFoundError,
)
_NUMERICAL_ERRORS = (
    NumericalFailure,
    ConvergenceStall,
    NonPositiveDeterminant,
    NonSymplectic,
)


def _load_input(args, require_physical=True):
    if args.file.endswith(".csv"):
        if not args.register:
            raise ParseError(
                "CSV input carries the covariance matrix only; pass the "
                "register via --register tag:pol:oam,..."
            )
        register = parse_register_spec(args.register)
        return load_cov_csv(args.file, register,
                            require_physical=require_physical)
    return load_state(args.file, require_physical=require_physical,
                      rescale=args.rescale)


def _cmd_validate(args):
    state = _load_input(args, require_physical=False)
    report = validate(state)
    if args.format == "json":
        doc = {
            "symmetric": report.symmetric,
            "physical": report.physical,
            "min_heisenberg_eigenvalue": report.min_heisenberg_eigenvalue,
            "register": list(state.register.tags),
        }
        sys.stdout.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        sys.stdout.write(
            f"register: {', '.join(str(m) for m in state.register)}\n"
            f"symmetric: {report.symmetric}\n"
            f"physical: {report.physical}\n"
            f"min Heisenberg eigenvalue: "
            f"{report.min_heisenberg_eigenvalue:+.6e}\n"
        )
    return EXIT_OK


def _cmd_transform(args):
    state = _load_input(args)
    config = PipelineConfig.from_file(args.config)
    result = run_pipeline(config, state=state, band=args.tol)
    if args.output:
        save_state(result.final_state, args.output)
    else:
        sys.stdout.write(
            json.dumps(state_to_dict(result.final_state), indent=2) + "\n"
        )
    for d in result.diagnostics:
        sys.stderr.write(
            f"step {d.index} {d.step}: n={d.total_photons:.6f} "
            f"mu={d.purity:.6f} min_eig={d.min_heisenberg_eigenvalue:+.3e}\n"
        )
    return EXIT_OK


def _cmd_analyze(args):
    state = _load_input(args)
    analyses = []
    if args.pairs or not (args.pairs or args.scan):
        analyses.append("pairwise")
    if args.scan or not (args.pairs or args.scan):
        analyses.append("scan")
    config = PipelineConfig(source=None, steps=(), analyses=tuple(analyses))
    result = run_pipeline(config, state=state, band=args.tol)
    sys.stdout.buffer.write(emit_report(result.report, format=args.format))
    if args.format == "text":
        sys.stdout.write(
            f"purity: {purity(state):.6f}   total photons: "
            f"{total_photon_number(state):.6f}\n"
        )
    return EXIT_OK


def _cmd_reproduce(args):
    outcome = reproduce_paper(band=args.tol)
    fmt = "json" if args.json else args.format
    if fmt == "json":
        sys.stdout.buffer.write(reproduce_paper_json(outcome))
    else:
        sys.stdout.buffer.write(reproduce_paper_text(outcome))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cvmodes",
        description="Gaussian covariance-matrix toolkit: q-plate "
                    "entanglement distribution and separability analysis.",
    )
    parser.add_argument("--format", choices=("text", "json"), default="text",
                        help="report format (default: text)")
    parser.add_argument("--tol", type=float, default=THRESHOLD_BAND,
                        help="one-sided witness tolerance band below the "
                             "shot-noise unit (default: 1e-9)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a state file")
    p.add_argument("file")
    p.add_argument("--register", help="register spec for CSV input "
                                      "(tag:pol:oam,...)")
    p.add_argument("--rescale", action="store_true",
                   help="accept files with sn != 1/2 by rescaling on load")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("transform", help="run pipeline steps on a state file")
    p.add_argument("file")
    p.add_argument("--config", required=True, help="pipeline config (JSON)")
    p.add_argument("--output", help="write the final state here "
                                    "(default: stdout)")
    p.add_argument("--register", help="register spec for CSV input")
    p.add_argument("--rescale", action="store_true")
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("analyze", help="entanglement analysis of a state file")
    p.add_argument("file")
    p.add_argument("--pairs", action="store_true",
                   help="pairwise marginal verdicts")
    p.add_argument("--scan", action="store_true",
                   help="full-register bipartition scan")
    p.add_argument("--register", help="register spec for CSV input")
    p.add_argument("--rescale", action="store_true")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("reproduce-paper",
                       help="run the bundled reference experiment "
                            "(hermetic, fixture inputs only)")
    p.add_argument("--json", action="store_true",
                   help="shorthand for --format json")
    p.set_defaults(func=_cmd_reproduce)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PipelineStepError as exc:
        sys.stderr.write(f"error: {exc}\n")
        cause = exc.cause
        if isinstance(cause, _NUMERICAL_ERRORS):
            return EXIT_NUMERICAL
        return EXIT_STEP
    except _NUMERICAL_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NUMERICAL
    except _PARSE_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
