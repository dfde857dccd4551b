import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import pandas as pd

from .glaisher_reps import (
    GlaisherKinkelin,
    IdentityName,
    IdentityReport,
    IdentityVariant,
    Representation,
    Series2Mode,
)
from .report_utils import format_bound, format_decimal, merge_reports
from .special_functions import MIN_PRECISION_BITS, SeriesResult
from .zeta_apostol import QuadratureConfig

logging.basicConfig(
    level = logging.INFO,
    format = '%(asctime)s - %(levelname)s - %(message)s'
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_CONVERGED = 2
EXIT_MISMATCH = 3
EXIT_USAGE = 64

PRECISION_ENV_VAR = 'GK_PRECISION_BITS'
CSV_COLUMNS = ['k', 'partial_sum', 'increment_abs', 'error_vs_reference']
JSON_KEYS = ['representation', 'value', 'digits_claimed', 'terms_used', 'tail_bound', 'elapsed_ms', 'converged', 'mode', 'notes']
K_INDEXED_IDENTITIES = (IdentityName.CI_INTEGRAL, IdentityName.SI_INTEGRAL, IdentityName.HYP_LOG_INTEGRAL)


class UsageError(ValueError):
    """Invalid command-line or environment input; maps to exit code 64."""


class OutputFormat(Enum):
    TEXT = 'text'
    JSON = 'json'
    CSV = 'csv'


class DiagnosticsArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that exits with 64 on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_representations(text: str) -> Tuple[Representation, ...]:
    if text.strip().lower() == 'all':
        return tuple(Representation)
    reps = []
    for item in text.split(','):
        try:
            reps.append(Representation(item.strip().lower()))
        except ValueError:
            raise UsageError(f"Unknown representation {item.strip()!r}; choose from r1..r6 or all")
    return tuple(reps)


@dataclass(frozen = True)
class RunConfig:
    """
    Settings of one CLI run.

    Priority is flag, then the GK_PRECISION_BITS environment variable
    (precision only), then the defaults below.
    """
    representation: str = 'r2'
    precision_bits: int = 128
    max_terms: int = 10_000
    tolerance: float = 1e-10
    quadrature_intervals: int = 10_000
    output_format: OutputFormat = OutputFormat.TEXT
    series2_mode: Series2Mode = Series2Mode.RECONCILED
    series2_terms: int = GlaisherKinkelin.SERIES2_DEFAULT_TERMS
    n: int = 1000
    k_max: int = 8
    k_range: Tuple[int, int] = (1, 100)
    identity_names: Tuple[IdentityName, ...] = tuple(IdentityName)
    variant: IdentityVariant = IdentityVariant.PRINTED
    out: Optional[str] = None
    timings: bool = False

    def __post_init__(self):
        if self.precision_bits < MIN_PRECISION_BITS:
            raise UsageError(f"precision must be at least {MIN_PRECISION_BITS} bits, got {self.precision_bits}")
        if not self.tolerance > 0:
            raise UsageError(f"tol must be positive, got {self.tolerance}")
        if self.k_range[0] > self.k_range[1]:
            raise UsageError(f"Empty k range {self.k_range[0]}:{self.k_range[1]}")
        try:
            QuadratureConfig(intervals = self.quadrature_intervals)
        except ValueError as e:
            raise UsageError(f"--intervals: {e}")
        if self.series2_terms > GlaisherKinkelin.MAX_SERIES2_K:
            raise UsageError(f"--series2-terms is capped at {GlaisherKinkelin.MAX_SERIES2_K}")
        _parse_representations(self.representation)

    @property
    def representations(self) -> Tuple[Representation, ...]:
        return _parse_representations(self.representation)

    @property
    def quadrature(self) -> QuadratureConfig:
        return QuadratureConfig(intervals = self.quadrature_intervals)

    @classmethod
    def from_args(cls, args: argparse.Namespace, environ: Optional[Mapping[str, str]] = None) -> 'RunConfig':
        environ = os.environ if environ is None else environ
        precision = args.precision
        if precision is None:
            raw = environ.get(PRECISION_ENV_VAR)
            if raw is None:
                precision = cls.precision_bits
            else:
                try:
                    precision = int(raw)
                except ValueError:
                    raise UsageError(f"{PRECISION_ENV_VAR} must be a positive integer, got {raw!r}")

        settings = {
            'precision_bits': precision,
            'max_terms': args.max_terms,
            'tolerance': args.tol,
            'quadrature_intervals': args.intervals,
            'output_format': OutputFormat(args.format),
            'series2_mode': Series2Mode(args.series2_mode),
            'series2_terms': args.series2_terms,
            'n': args.n,
            'out': args.out,
            'timings': args.timings,
        }
        for option, field in (('rep', 'representation'), ('reps', 'representation'),
                              ('k_max', 'k_max'), ('k_range', 'k_range')):
            value = getattr(args, option, None)
            if value is not None:
                settings[field] = value
        if getattr(args, 'names', None) is not None:
            settings['identity_names'] = args.names
        if getattr(args, 'variant', None) is not None:
            settings['variant'] = IdentityVariant(args.variant)
        return cls(**settings)


@dataclass(frozen = True)
class ConvergenceRecord:
    """One CSV row of a convergence trace; all numbers as decimal strings."""
    k: int
    partial_sum: str
    increment_abs: str
    error_vs_reference: str


# ----------------------------------------------------------------------
# argument types

def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return value


def _representation_list(text: str) -> str:
    try:
        _parse_representations(text)
    except UsageError as e:
        raise argparse.ArgumentTypeError(str(e))
    return text.strip().lower()


def _k_range(text: str) -> Tuple[int, int]:
    start, sep, end = text.partition(':')
    if not sep:
        raise argparse.ArgumentTypeError(f"expected START:END, got {text!r}")
    first, last = _positive_int(start), _positive_int(end)
    if first > last:
        raise argparse.ArgumentTypeError(f"empty range {text!r}: start is after end")
    return first, last


def _identity_names(text: str) -> Tuple[IdentityName, ...]:
    if text.strip().lower() == 'all':
        return tuple(IdentityName)
    names = []
    for item in text.split(','):
        try:
            names.append(IdentityName(item.strip().lower()))
        except ValueError:
            choices = ', '.join(name.value for name in IdentityName)
            raise argparse.ArgumentTypeError(f"unknown identity {item.strip()!r}; choose from {choices}")
    return tuple(names)


def build_parser() -> DiagnosticsArgumentParser:
    common = argparse.ArgumentParser(add_help = False)
    common.add_argument('--precision', type = _positive_int, default = None,
                        help = f"Working precision in bits (default: ${PRECISION_ENV_VAR} or 128).")
    common.add_argument('--tol', type = _positive_float, default = 1e-10,
                        help = "Absolute tolerance; relative threshold for verify (default: 1e-10).")
    common.add_argument('--max-terms', type = _positive_int, default = 10_000, dest = 'max_terms',
                        help = "Terms K of the Ci series route r3 (default: 10000).")
    common.add_argument('--intervals', type = _positive_int, default = 10_000,
                        help = "Unit quadrature cells N for r1 (default: 10000).")
    common.add_argument('--series2-mode', choices = [m.value for m in Series2Mode], default = Series2Mode.RECONCILED.value,
                        dest = 'series2_mode', help = "r6 mode (default: reconciled).")
    common.add_argument('--series2-terms', type = _positive_int, default = GlaisherKinkelin.SERIES2_DEFAULT_TERMS,
                        dest = 'series2_terms', help = "Terms K of route r6, at most 200 (default: 50).")
    common.add_argument('--n', type = _positive_int, default = 1000,
                        help = "Hyperfactorial order n for r5 (default: 1000).")
    common.add_argument('--format', choices = [f.value for f in OutputFormat], default = OutputFormat.TEXT.value,
                        help = "Output format (default: text).")
    common.add_argument('--out', type = str, default = None,
                        help = "Write output to this path instead of stdout.")
    common.add_argument('--timings', action = 'store_true',
                        help = "Fill elapsed_ms in structured output.")
    common.add_argument('--log-level', choices = ['DEBUG', 'INFO', 'WARNING', 'ERROR'], default = 'WARNING',
                        dest = 'log_level', help = "Logging level on stderr (default: WARNING).")

    parser = DiagnosticsArgumentParser(prog = 'glaisher-kinkelin',
                                       description = "ln A of the Glaisher-Kinkelin constant through six routes, with identity checks.")
    sub = parser.add_subparsers(dest = 'command', parser_class = DiagnosticsArgumentParser)
    sub.required = True

    compute = sub.add_parser('compute', parents = [common], help = "Compute ln A through one route or all.")
    compute.add_argument('--rep', type = _representation_list, default = 'r2',
                         help = "r1..r6 or all (default: r2).")

    compare = sub.add_parser('compare', parents = [common], help = "Compare routes against the r2 reference.")
    compare.add_argument('--reps', type = _representation_list, default = 'all',
                         help = "Comma-separated routes or all (default: all).")

    convergence = sub.add_parser('convergence', parents = [common], help = "Partial sums of a series route as CSV.")
    convergence.add_argument('--rep', type = _representation_list, default = 'r3',
                             help = "r2, r3, r5 or r6 (default: r3); r2 indices start at 2.")
    convergence.add_argument('--k-range', type = _k_range, default = (1, 100), dest = 'k_range',
                             help = "Inclusive index range START:END (default: 1:100).")

    verify = sub.add_parser('verify', parents = [common], help = "Check closed forms against numerical oracles.")
    verify.add_argument('--names', type = _identity_names, default = None,
                        help = "Comma-separated identity names or all (default: all).")
    verify.add_argument('--k-max', type = _positive_int, default = 8, dest = 'k_max',
                        help = "Largest k for the k-indexed identities (default: 8).")
    verify.add_argument('--variant', choices = [v.value for v in IdentityVariant], default = IdentityVariant.PRINTED.value,
                        help = "printed or corrected coefficients (default: printed).")
    return parser


# ----------------------------------------------------------------------
# rendering

def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.out:
        with open(cfg.out, 'w', encoding = 'utf-8', newline = '\n') as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def _render_records(records: List[Dict], cfg: RunConfig, single: bool = False) -> str:
    if cfg.output_format is OutputFormat.JSON:
        payload = records[0] if single and len(records) == 1 else records
        return json.dumps(payload, indent = 2) + '\n'
    frame = pd.DataFrame(records)
    if cfg.output_format is OutputFormat.CSV:
        return frame.to_csv(index = False, lineterminator = '\n')
    if single and len(records) == 1:
        return ''.join(f"{key}: {value}\n" for key, value in records[0].items())
    return frame.to_string(index = False) + '\n'


def _run_representation(gk: GlaisherKinkelin, rep: Representation, cfg: RunConfig) -> SeriesResult:
    if rep is Representation.R1_ZETA_PRIME_NEG1:
        return gk.ln_a_r1_result(cfg.quadrature)
    if rep is Representation.R2_GLAISHER_PRODUCT:
        return gk.ln_a_reference_result(max(cfg.precision_bits, gk.REFERENCE_MIN_BITS))
    if rep is Representation.R3_CI_SERIES:
        return gk.ln_a_r3(cfg.max_terms, cfg.tolerance)
    if rep is Representation.R4_ZETA_PRIME_2:
        return gk.ln_a_r4_result(cfg.tolerance)
    if rep is Representation.R5_HYPERFACTORIAL:
        return gk.ln_a_r5_result(cfg.n)
    return gk.ln_a_r6(cfg.series2_terms, cfg.series2_mode, cfg.tolerance)


def _timed(gk: GlaisherKinkelin, rep: Representation, cfg: RunConfig) -> Tuple[SeriesResult, Optional[int]]:
    start = time.perf_counter()
    result = _run_representation(gk, rep, cfg)
    elapsed = int(round((time.perf_counter() - start) * 1000)) if cfg.timings else None
    return result, elapsed


def _result_record(rep: Representation, result: SeriesResult, cfg: RunConfig, elapsed_ms: Optional[int]) -> Dict:
    return {
        'representation': rep.value,
        'value': format_decimal(result.value, result.digits_claimed),
        'digits_claimed': result.digits_claimed,
        'terms_used': result.terms_used,
        'tail_bound': format_bound(result.tail_bound),
        'elapsed_ms': elapsed_ms,
        'converged': bool(result.converged),
        'mode': cfg.series2_mode.value if rep is Representation.R6_HYPERGEOMETRIC_SERIES else None,
        'notes': result.notes,
    }


# ----------------------------------------------------------------------
# commands

def cmd_compute(cfg: RunConfig) -> Tuple[int, List[Dict]]:
    """
    Computes each requested route and emits one record per route.

    Returns
    -------
    (int, list of dict)
        Exit code 0 when every route converged, 2 otherwise, and the records
    """
    gk = GlaisherKinkelin(cfg.precision_bits)
    records = []
    exit_code = EXIT_OK
    for rep in cfg.representations:
        result, elapsed = _timed(gk, rep, cfg)
        records.append(_result_record(rep, result, cfg, elapsed))
        if not result.converged:
            exit_code = EXIT_NOT_CONVERGED
    _emit(_render_records(records, cfg, single = True), cfg)
    return exit_code, records


def cmd_compare(cfg: RunConfig) -> Tuple[int, pd.DataFrame]:
    """
    Runs the requested routes and tabulates their errors against r2.

    A converged route is within bounds when |value - reference| is at most
    its tail bound plus the reference's plus a few ulps. Exit code 0 when
    all converged routes are within bounds, 3 otherwise.
    """
    gk = GlaisherKinkelin(cfg.precision_bits)
    reference = gk.ln_a_reference_result(max(cfg.precision_bits, gk.REFERENCE_MIN_BITS))
    rounding = 2.0 ** -(cfg.precision_bits - 8)

    frames = []
    all_within = True
    for rep in cfg.representations:
        result, elapsed = _timed(gk, rep, cfg)
        error = abs(result.value - reference.value)
        allowed = float(result.tail_bound) + float(reference.tail_bound) + rounding
        within = float(error) <= allowed
        if result.converged and not within:
            all_within = False
            logging.warning(f"Route {rep.value} is off the reference by {float(error):.3e}, allowed {allowed:.3e}")
        frames.append(pd.DataFrame([{
            'representation': rep.value,
            'value': format_decimal(result.value, result.digits_claimed),
            'error_vs_reference': format_bound(error.magnitude),
            'tail_bound': format_bound(result.tail_bound),
            'reference_bound': format_bound(reference.tail_bound),
            'within_bounds': bool(within),
            'converged': bool(result.converged),
            'elapsed_ms': elapsed,
        }]))

    table = merge_reports(*frames, key = 'representation')
    if table is None:
        raise RuntimeError("Could not assemble the comparison table")
    _emit(_render_records(table.to_dict(orient = 'records'), cfg), cfg)
    return (EXIT_OK if all_within else EXIT_MISMATCH), table


def cmd_convergence(cfg: RunConfig, k_range: Optional[Tuple[int, int]] = None) -> Tuple[int, pd.DataFrame]:
    """
    Emits one ConvergenceRecord per index in the inclusive range.

    Text and CSV formats both produce the CSV stream with the fixed header
    k,partial_sum,increment_abs,error_vs_reference; JSON emits the same
    rows as a list.
    """
    start, end = k_range or cfg.k_range
    if start > end:
        raise UsageError(f"Empty k range {start}:{end}")
    reps = cfg.representations
    if len(reps) != 1:
        raise UsageError("convergence traces one route at a time")
    rep = reps[0]
    if rep in (Representation.R1_ZETA_PRIME_NEG1, Representation.R4_ZETA_PRIME_2):
        raise UsageError(f"{rep.value} has no term index; trace r2, r3, r5 or r6")
    if rep is Representation.R6_HYPERGEOMETRIC_SERIES and end > GlaisherKinkelin.MAX_SERIES2_K:
        raise UsageError(f"r6 traces are capped at k = {GlaisherKinkelin.MAX_SERIES2_K}")
    if rep is Representation.R2_GLAISHER_PRODUCT:
        if end < 2:
            raise UsageError(f"r2 indices start at 2; k range {start}:{end} is empty")
        start = max(start, 2)

    gk = GlaisherKinkelin(cfg.precision_bits)
    trace = gk.convergence_trace(rep, start, end, cfg.tolerance, cfg.series2_mode)
    records = [ConvergenceRecord(k = int(row.k),
                                 partial_sum = format_decimal(row.partial_sum),
                                 increment_abs = format_decimal(row.increment_abs),
                                 error_vs_reference = format_decimal(row.error_vs_reference))
               for row in trace.itertuples(index = False)]
    table = pd.DataFrame([vars(record) for record in records], columns = CSV_COLUMNS)

    if cfg.output_format is OutputFormat.JSON:
        _emit(json.dumps(table.to_dict(orient = 'records'), indent = 2) + '\n', cfg)
    else:
        _emit(table.to_csv(index = False, lineterminator = '\n'), cfg)
    return EXIT_OK, table


def cmd_verify(cfg: RunConfig,
               names: Optional[Sequence[IdentityName]] = None,
               k_max: Optional[int] = None) -> Tuple[int, List[IdentityReport]]:
    """
    Runs the identity harness and emits every report.

    The k-indexed identities run for k = 1..k_max; eq27_i3_series uses k_max as
    its minimum term count and zeta2_assembly runs once. Exit code 0 when
    every verdict is match, 3 otherwise.
    """
    names = tuple(names or cfg.identity_names)
    k_max = k_max or cfg.k_max
    gk = GlaisherKinkelin(cfg.precision_bits)
    reports = []
    for name in names:
        ks = range(1, k_max + 1) if name in K_INDEXED_IDENTITIES else [k_max if name is IdentityName.I3_SERIES else 1]
        for k in ks:
            reports.append(gk.verify_identity(name, k, cfg.tolerance, cfg.variant, cfg.quadrature if name is IdentityName.ZETA2_ASSEMBLY else None))

    records = [{key: value for key, value in report.to_record().items() if key not in ('lhs', 'rhs')}
               if cfg.output_format is OutputFormat.TEXT else report.to_record()
               for report in reports]
    _emit(_render_records(records, cfg), cfg)
    all_match = all(report.verdict == 'match' for report in reports)
    return (EXIT_OK if all_match else EXIT_MISMATCH), reports


def main(argv: Optional[List[str]] = None, environ: Optional[Mapping[str, str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE

    logging.getLogger().setLevel(args.log_level)
    try:
        cfg = RunConfig.from_args(args, environ)
    except UsageError as e:
        sys.stderr.write(f"{parser.prog}: error: {e}\n")
        return EXIT_USAGE

    commands = {
        'compute': lambda: cmd_compute(cfg),
        'compare': lambda: cmd_compare(cfg),
        'convergence': lambda: cmd_convergence(cfg),
        'verify': lambda: cmd_verify(cfg),
    }
    try:
        exit_code, _ = commands[args.command]()
        return exit_code
    except UsageError as e:
        sys.stderr.write(f"{parser.prog}: error: {e}\n")
        return EXIT_USAGE
    except Exception as e:
        logging.error(f"Error running {args.command}: {e}")
        return EXIT_ERROR


def run() -> None:
    sys.exit(main())


if __name__ == '__main__':
    run()
