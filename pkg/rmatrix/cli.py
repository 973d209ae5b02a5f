"""Command-line interface for rmatrix.

Provides the main entry point for verification reports, Lax flow runs,
solver comparisons and Toda lattice runs from the command line.

Exit codes: 0 all checks passed, 1 a check failed or a computation was
rejected, 2 the input could not be read, 130 interrupted.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, TextIO
import logging

import yaml

from rmatrix import __version__
from rmatrix.errors import INPUT_ERRORS, InputFormatError, RMatrixError
from rmatrix.report.html_generator import HtmlReportGenerator
from rmatrix.report.json_generator import JSONReportGenerator
from rmatrix.report.md_generator import MarkdownReportGenerator
from rmatrix.runner import RMatrixRunner
from rmatrix.utils.config_utils import save_default_config

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_INTERRUPTED = 130


def float_list(value: str) -> list[float]:
    """Parse '0,0.5,-1' into floats."""
    try:
        return [float(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {value!r}")


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        '--config',
        type=str,
        metavar='FILE',
        help='YAML configuration file (tolerances, integrator, seed)'
    )
    common.add_argument(
        '--log-file',
        type=str,
        metavar='FILE',
        default='rmatrix.log',
        help='Log file path with rotation (default: rmatrix.log)'
    )
    common.add_argument(
        '--seed',
        type=int,
        metavar='N',
        help='Seed for random scans (default: random.seed from the config)'
    )
    common.add_argument(
        '--json',
        type=str,
        metavar='FILE',
        help="JSON report output ('-' prints to stdout)"
    )
    common.add_argument(
        '--markdown',
        '--md',
        type=str,
        metavar='FILE',
        dest='markdown',
        help='Markdown summary output'
    )
    common.add_argument(
        '--html',
        type=str,
        metavar='FILE',
        help='HTML report output'
    )
    common.add_argument(
        '-v', '--verbose',
        action='store_true',
        help='Debug logging and tracebacks on error'
    )
    return common


def _flow_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--n', type=int, default=2, metavar='N', help='Chain size N (N+1 sites, default: 2)')
    parser.add_argument('--a', type=float_list, metavar='LIST', help='Initial a values (default: zeros)')
    parser.add_argument('--b', type=float_list, metavar='LIST', help='Initial b values (default: ones)')
    parser.add_argument('--dt', type=float, metavar='STEP', help='RK4 step (default: integrator.step)')
    parser.add_argument('--t-end', type=float, metavar='T', help='End time (default: integrator.t_end)')


def create_parser() -> argparse.ArgumentParser:
    """Create argument parser.

    Returns:
        Configured ArgumentParser
    """
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog='rmatrix',
        description='rmatrix - Classical r-matrix toolkit',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  rmatrix verify --r-matrix sl3-split --json report.json
  rmatrix verify --algebra sl3-split --r-matrix my_r.json --c 1 --dump-structure
  rmatrix verify-bialgebra --r sl2-factorisable --markdown bialgebra.md
  rmatrix flow --system toda --n 3 --a 0,0,0,0 --b 1,1,1 --dt 1e-3 --t-end 5 --out traj.csv
  rmatrix factorise --matrix g.json --kind ldu --json -
  rmatrix compare --system toda --n 2 --t-end 1
  rmatrix toda --variant periodic --n 5 --t-end 5 --html toda.html
  rmatrix init-config rmatrix.yaml
        """
    )
    parser.add_argument(
        '--version',
        action='version',
        version=f'rmatrix {__version__}'
    )
    sub = parser.add_subparsers(dest='command', required=True, metavar='COMMAND')

    verify = sub.add_parser('verify', parents=[common], help='mCYBE and R-bracket Jacobi certificate')
    verify.add_argument('--r-matrix', required=True, metavar='FILE', help='R-matrix JSON file or shipped name')
    verify.add_argument('--algebra', metavar='FILE', help="Algebra JSON file or shipped name (default: the r-matrix's)")
    verify.add_argument('--c', type=float, default=1.0, help='mCYBE constant (default: 1, 0 gives CYBE)')
    verify.add_argument('--dump-structure', action='store_true', help='Print structure constants and Gram matrix')

    bialgebra = sub.add_parser('verify-bialgebra', parents=[common], help='Classify a tensor r-matrix')
    bialgebra.add_argument('--r', required=True, metavar='FILE', help='Tensor r-matrix JSON file or shipped name')
    bialgebra.add_argument('--algebra', metavar='FILE', help='Algebra JSON file or shipped name')

    flow = sub.add_parser('flow', parents=[common], help='RK4 integration of a Lax equation')
    flow.add_argument('--system', choices=['toda', 'lax'], default='toda', help='toda (Flaschka data) or lax (any R)')
    _flow_options(flow)
    flow.add_argument('--record-every', type=int, metavar='K', help='Record every K-th step')
    flow.add_argument('--out', metavar='CSV', help='Trajectory CSV output')
    flow.add_argument('--r-matrix', metavar='FILE', help='R-matrix for --system lax')
    flow.add_argument('--algebra', metavar='FILE', help='Algebra for --system lax')
    flow.add_argument('--initial', metavar='FILE', help='Initial matrix JSON for --system lax')
    flow.add_argument('--degree', type=int, default=1, help='Hamiltonian H_l = tr(L^(l+1))/(l+1) (default: 1)')
    flow.add_argument('--side', choices=['plus', 'minus', 'symmetric'], default='plus', help='Which M to use')

    fact = sub.add_parser('factorise', parents=[common], help='Factorise g = g_plus g_minus^-1')
    fact.add_argument('--matrix', required=True, metavar='FILE', help='JSON file {"matrix": [[...]]}')
    fact.add_argument('--kind', choices=['qr', 'ldu'], default='qr', help='Split kind (default: qr)')

    compare = sub.add_parser('compare', parents=[common], help='RK4 against the factorisation solver')
    compare.add_argument('--system', choices=['toda'], default='toda')
    _flow_options(compare)

    toda = sub.add_parser('toda', parents=[common], help='Toda lattice constructions')
    toda.add_argument('--variant', choices=['open', 'cartan', 'periodic'], required=True)
    _flow_options(toda)
    toda.add_argument('--record-every', type=int, metavar='K', help='Record every K-th step')
    toda.add_argument('--eta', type=float_list, metavar='LIST', help='Cartan diagonal (normalised to unit product)')
    toda.add_argument('--omega-scale', type=float, default=0.0, help='Scale of random Cartan triangular data')
    toda.add_argument('--samples', type=int, metavar='K', help='Random states for the open-chain regression')

    init = sub.add_parser('init-config', help='Write the default configuration as YAML')
    init.add_argument('path', nargs='?', default='rmatrix.yaml', help='Output path (default: rmatrix.yaml)')

    return parser


def run_command(runner: RMatrixRunner, args: argparse.Namespace) -> dict[str, Any]:
    """Dispatch parsed arguments to the runner."""
    match args.command:
        case 'verify':
            return runner.verify(args.r_matrix, args.algebra, args.c, args.dump_structure)
        case 'verify-bialgebra':
            return runner.verify_bialgebra(args.r, args.algebra)
        case 'flow' if args.system == 'lax':
            if not (args.r_matrix and args.initial):
                raise InputFormatError("--system lax needs --r-matrix and --initial")
            return runner.lax_flow(
                args.r_matrix, args.initial, args.degree, args.side, args.algebra,
                args.dt, args.t_end, args.out,
            )
        case 'flow':
            return runner.flow(args.n, args.a, args.b, args.dt, args.t_end, args.record_every, args.out)
        case 'factorise':
            return runner.factorise(args.matrix, args.kind)
        case 'compare':
            return runner.compare(args.n, args.a, args.b, args.dt, args.t_end)
        case 'toda':
            return runner.toda(
                args.variant, args.n, args.a, args.b, args.eta, args.omega_scale,
                args.dt, args.t_end, args.record_every, args.samples,
            )
        case _:
            raise ValueError(f"Unknown command: {args.command}")


def write_reports(results: dict[str, Any], args: argparse.Namespace, out: TextIO) -> None:
    if args.json == '-':
        print(JSONReportGenerator(results).get_json_string())
    elif args.json:
        JSONReportGenerator(results).generate(args.json)
        print(f"✅ JSON report saved to: {args.json}", file=out)

    if args.markdown:
        MarkdownReportGenerator(results).generate(args.markdown)
        print(f"✅ Markdown summary saved to: {args.markdown}", file=out)

    if args.html:
        HtmlReportGenerator(results).generate(args.html)
        print(f"✅ HTML report saved to: {args.html}", file=out)

    if getattr(args, 'out', None):
        print(f"✅ Trajectory CSV saved to: {args.out}", file=out)


def main(argv: list[str] | None = None) -> int:
    """Main CLI entry point.

    Returns:
        Exit code (0 = passed, 1 = failed, 2 = bad input, 130 = interrupted)
    """
    parser = create_parser()
    args = parser.parse_args(argv)

    if args.command == 'init-config':
        save_default_config(args.path)
        print(f"✅ Default configuration saved to: {args.path}")
        return EXIT_OK

    # Keep stdout clean for the JSON report
    out = sys.stderr if args.json == '-' else sys.stdout

    try:
        runner = RMatrixRunner(
            config_path=args.config,
            verbose=args.verbose,
            log_file=args.log_file,
            seed=args.seed,
        )
        print(f"🔍 Running {args.command}", file=out)
        print(f"📝 Logging to: {Path(args.log_file).resolve()}", file=out)

        results = run_command(runner, args)

        if args.command == 'verify' and args.dump_structure:
            print(json.dumps(results.get('structure', {}), indent=2), file=out)

        print_summary(results, out)
        write_reports(results, args, out)

        return EXIT_OK if results['summary']['passed'] else EXIT_FAILED

    except KeyboardInterrupt:
        print(f"\n\n⚠️  Run interrupted by user", file=sys.stderr)
        return EXIT_INTERRUPTED

    except (*INPUT_ERRORS, FileNotFoundError, json.JSONDecodeError, yaml.YAMLError) as e:
        print(f"\n❌ Input error: {e}", file=sys.stderr)
        return EXIT_INPUT

    except RMatrixError as e:
        print(f"\n❌ {type(e).__name__}: {e}", file=sys.stderr)
        if args.verbose:
            import traceback
            traceback.print_exc()
        return EXIT_FAILED

    except ValueError as e:
        print(f"\n❌ Invalid value: {e}", file=sys.stderr)
        return EXIT_INPUT

    except Exception as e:
        print(f"\n❌ Error during {args.command}: {e}", file=sys.stderr)
        if args.verbose:
            import traceback
            traceback.print_exc()
        return EXIT_FAILED


def print_summary(results: dict[str, Any], out: TextIO = sys.stdout) -> None:
    """Print run summary to the console.

    Args:
        results: Run results
        out: Stream to print to
    """
    summary = results.get('summary', {})
    metadata = results.get('metadata', {})

    print("=" * 70, file=out)
    print(f"RMATRIX {metadata.get('command', '').upper()}", file=out)
    print("=" * 70, file=out)
    print(file=out)

    for key in ('algebra', 'r_matrix', 'system', 'variant', 'n', 'kind'):
        if key in metadata:
            print(f"{key.replace('_', ' ').title()}: {metadata[key]}", file=out)
    print(file=out)

    print("Checks:", file=out)
    for check in results.get('checks', []):
        print(f"  {get_check_status(check['passed'])} {check['name']}: {format_value(check['value'])}"
              f" (tol {format_value(check['tolerance'])})", file=out)
        if check.get('detail') and not check['passed']:
            print(f"      {check['detail']}", file=out)
    print(file=out)

    passed = summary.get('passed', False)
    print(f"Result: {get_check_status(passed)} "
          f"{summary.get('checks_total', 0) - summary.get('checks_failed', 0)}/{summary.get('checks_total', 0)} checks passed",
          file=out)
    print("=" * 70, file=out)


def get_check_status(passed: bool) -> str:
    return "🟢" if passed else "🔴"


def format_value(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.3e}"
    return str(value)


if __name__ == '__main__':
    sys.exit(main())
