"""
spcert command line
Subcommands: gen, analyze, oracle-check, certify, sweep

Exit status: 0 success, 1 a checked invariant failed or the pipeline ran out
of samples, 2 usage, parse, settings or parameter error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from certify import certify, check_certificate, effective_numbers, save_certificate, theorem_verdicts
from dyadic import check_decomposition, dyadic_decompose, select_popular_class
from exactnum import format_gaussian, format_rational
from geom4 import GenericityExhausted
from pipeline_settings import PipelineSettings, SettingsError, load_settings
from set_families import FAMILIES, FamilyParameterError, generate
from set_files import (
    SetFileParseError, format_set_file, load_set_file, parse_gaussian, save_set_file,
)
from setcore import (
    ComplexSet, OracleCapExceeded, cauchy_schwarz_check, check_tally, direction_tally,
    energy_oracle, productset, sumset,
)
from sphereplanar import PARTNER_RULES, HemisphereExhausted
from sweep import exponent_trend, format_sweep_csv, run_sweep, write_sweep_csv
from sweep_export import export_sweep_to_excel

logger = logging.getLogger("spcert")

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spcert",
        description="Exact sum-product statistics and injection certificates for sets of Gaussian rationals.",
    )
    parser.add_argument("--settings", type=Path, default=None, help="JSON settings file (flags override it).")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging.")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Warnings and errors only.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="Write a member of a set family to a set file.")
    gen.add_argument("--family", choices=FAMILIES, required=True)
    gen.add_argument("--n", type=int, required=True, help="Set size (grid: a perfect square).")
    gen.add_argument("--ratio", type=str, default=None, help="gp ratio, e.g. 2 or 1+i.")
    gen.add_argument("--bound", type=int, default=None, help="random: numerator/denominator bound.")
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--out", type=Path, default=None, help="Output set file (stdout if omitted).")

    analyze = sub.add_parser("analyze", help="Sizes, energy and dyadic summary of a set file.")
    analyze.add_argument("file", type=Path)
    analyze.add_argument("--json", action="store_true", help="Emit a JSON report.")

    oracle = sub.add_parser("oracle-check", help="Compare the tally energy with brute-force counting.")
    oracle.add_argument("file", type=Path)
    oracle.add_argument("--cap", type=int, default=None, help="Largest |A| to enumerate.")

    cert = sub.add_parser("certify", help="Run the pipeline and emit the certificate JSON.")
    cert.add_argument("file", type=Path)
    cert.add_argument("--seed", type=int, default=None)
    cert.add_argument("--retries", type=int, default=None)
    cert.add_argument("--partner-rule", choices=PARTNER_RULES, default=None)
    cert.add_argument("--out", type=Path, default=None, help="Certificate file (stdout if omitted).")

    sweep = sub.add_parser("sweep", help="Certify a family over a size range, one CSV row each.")
    sweep.add_argument("--family", choices=FAMILIES, required=True)
    sweep.add_argument("--n-min", type=int, required=True)
    sweep.add_argument("--n-max", type=int, required=True)
    sweep.add_argument("--seed", type=int, default=None)
    sweep.add_argument("--ratio", type=str, default=None)
    sweep.add_argument("--bound", type=int, default=None)
    sweep.add_argument("--csv", type=Path, default=None, help="CSV output (stdout if omitted).")
    sweep.add_argument("--xlsx", type=Path, default=None, help="Also write an Excel workbook.")

    return parser


def configure_logging(verbose: bool = False, quiet: bool = False):
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s",
                        stream=sys.stderr, force=True)


def _gp_ratio(text: Optional[str], settings: PipelineSettings):
    try:
        return parse_gaussian(text if text is not None else settings.gp_ratio)
    except ValueError as e:
        raise FamilyParameterError(f"bad --ratio: {e}") from e


def cmd_gen(args, settings: PipelineSettings) -> int:
    seed = settings.seed if args.seed is None else args.seed
    bound = settings.random_bound if args.bound is None else args.bound
    a = generate(args.family, args.n, ratio=_gp_ratio(args.ratio, settings), bound=bound, seed=seed)
    comment = f"spcert gen --family {args.family} --n {args.n}"
    if args.out is None:
        sys.stdout.write(format_set_file(a, comment))
        return EXIT_OK
    if not save_set_file(a, args.out, comment):
        return EXIT_USAGE
    logger.info("wrote %d elements to %s", len(a), args.out)
    return EXIT_OK


def analyze_report(a: ComplexSet) -> dict:
    """Everything analyze prints, decided by exact arithmetic"""
    tally = direction_tally(a)
    sum_size, prod_size = len(sumset(a)), len(productset(a))
    eq1 = cauchy_schwarz_check(tally, a, prod_size)
    classes = dyadic_decompose(tally)
    selection = select_popular_class(classes, len(a))
    theorem_exact, theorem_floor = theorem_verdicts(len(a), sum_size, prod_size)
    constant, exponent = effective_numbers(len(a), sum_size, prod_size)

    violations = check_tally(tally, a) + check_decomposition(classes, tally)
    if not eq1.holds:
        violations.append(f"E = {tally.energy} below |A|^4/|A*A| = {format_rational(eq1.bound)}")
    if theorem_exact is False:
        violations.append("64 log2|A| |A+A|^2 |A*A| < |A|^4")

    dyadic = selection.to_dict()
    dyadic['provable_bound'] = format_rational(dyadic['provable_bound'])
    dyadic['classes'] = [
        {'k': c.k, 'size': len(c), 'mass': c.mass, 'nu_min': c.nu_min, 'nu_max': c.nu_max}
        for c in classes
    ]

    return {
        'size': len(a),
        'elements': [format_gaussian(z) for z in a],
        'sumset_size': sum_size,
        'productset_size': prod_size,
        'direction_count': len(tally),
        'energy': tally.energy,
        'eq1': {'bound': format_rational(eq1.bound), 'holds': eq1.holds},
        'dyadic': dyadic,
        'theorem_bound': theorem_exact,
        'theorem_bound_floor': theorem_floor,
        'effective_constant': constant,
        'effective_exponent': exponent,
        'violations': violations,
    }


def format_analyze_text(report: dict) -> str:
    dyadic = report['dyadic']
    lines = [
        f"|A| = {report['size']}",
        f"|A+A| = {report['sumset_size']}",
        f"|A*A| = {report['productset_size']}",
        f"|T| = {report['direction_count']}",
        f"E = {report['energy']}",
        f"E >= |A|^4/|A*A| = {report['eq1']['bound']}: {'holds' if report['eq1']['holds'] else 'FAILS'}",
        f"dyadic classes: {dyadic['class_count']}, chosen k={dyadic['k']} "
        f"(|T'|={dyadic['size']}, mass={dyadic['mass']}, nu in [{dyadic['nu_min']}, {dyadic['nu_max']}])",
    ]
    for c in dyadic['classes']:
        lines.append(f"  k={c['k']}: {c['size']} directions, mass {c['mass']}")
    lines.append(f"theorem bound: {report['theorem_bound']}")
    lines.append(f"effective constant: {report['effective_constant']}, "
                 f"effective exponent: {report['effective_exponent']}")
    for message in report['violations']:
        lines.append(f"VIOLATION: {message}")
    return "\n".join(lines) + "\n"


def cmd_analyze(args, settings: PipelineSettings) -> int:
    report = analyze_report(load_set_file(args.file))
    if args.json:
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    else:
        sys.stdout.write(format_analyze_text(report))
    return EXIT_VIOLATION if report['violations'] else EXIT_OK


def cmd_oracle_check(args, settings: PipelineSettings) -> int:
    a = load_set_file(args.file)
    cap = settings.oracle_cap if args.cap is None else args.cap
    tally_energy = direction_tally(a).energy
    oracle = energy_oracle(a, cap=cap)
    if tally_energy == oracle:
        print(f"{tally_energy} == {oracle}")
        return EXIT_OK
    print(f"{tally_energy} != {oracle}")
    logger.error("energy mismatch on %s: tally %d, oracle %d", args.file, tally_energy, oracle)
    return EXIT_VIOLATION


def cmd_certify(args, settings: PipelineSettings) -> int:
    a = load_set_file(args.file)
    settings = settings.override(seed=args.seed, retries=args.retries, partner_rule=args.partner_rule)
    cert = certify(a, seed=settings.seed, settings=settings)

    if args.out is None:
        sys.stdout.write(cert.to_json() + "\n")
    elif not save_certificate(cert, args.out):
        return EXIT_USAGE

    violations = check_certificate(cert)
    for message in violations:
        logger.error("certificate violation: %s", message)
    if not cert.globally_injective:
        logger.warning("%d colliding sum values remain after %d attempts",
                       len(cert.collisions), cert.attempts_used)
    return EXIT_VIOLATION if violations else EXIT_OK


def cmd_sweep(args, settings: PipelineSettings) -> int:
    if args.n_min > args.n_max:
        raise FamilyParameterError(f"--n-min {args.n_min} exceeds --n-max {args.n_max}")
    seed = settings.seed if args.seed is None else args.seed
    bound = settings.random_bound if args.bound is None else args.bound
    rows = run_sweep(args.family, args.n_min, args.n_max, seed=seed, settings=settings,
                     ratio=_gp_ratio(args.ratio, settings), bound=bound)
    trend = exponent_trend(rows)
    if not trend.empty:
        logger.info("effective exponent by |A|: %s",
                    ", ".join(f"{size}: {value}" for size, value in trend.items()))

    if args.csv is None:
        sys.stdout.write(format_sweep_csv(rows))
    elif not write_sweep_csv(rows, args.csv):
        return EXIT_USAGE
    if args.xlsx is not None:
        export_sweep_to_excel(rows, str(args.xlsx))
    return EXIT_OK


COMMANDS = {
    'gen': cmd_gen,
    'analyze': cmd_analyze,
    'oracle-check': cmd_oracle_check,
    'certify': cmd_certify,
    'sweep': cmd_sweep,
}


def run_subcommand(argv: List[str]) -> int:
    """Parse argv, run one subcommand, and map failures to exit codes"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    configure_logging(args.verbose, args.quiet)

    try:
        settings = load_settings(args.settings)
        return COMMANDS[args.command](args, settings)
    except SetFileParseError as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except (SettingsError, FamilyParameterError, OracleCapExceeded) as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except FileNotFoundError as e:
        logger.error("file not found: %s", e.filename)
        return EXIT_USAGE
    except (GenericityExhausted, HemisphereExhausted) as e:
        logger.error("pipeline failed: %s", e)
        return EXIT_VIOLATION


def main() -> int:
    return run_subcommand(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
