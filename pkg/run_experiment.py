import argparse
import sys
from typing import List, Optional

from rich.console import Console
from rich.table import Table

from lib.errors import LabError
from lib.experiments.experiment_config import KIND_BLOCKS
from lib.services.service_factory import ServiceFactory
from utils.logger import setup_logger

logger = setup_logger('run_experiment')
console = Console()

EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='hartree-lab',
                                     description='Pseudospectral lab for the semirelativistic Hartree equation')
    subparsers = parser.add_subparsers(dest='command', required=True)

    for kind in KIND_BLOCKS:
        sub = subparsers.add_parser(kind, help=f'run a {kind} experiment')
        sub.add_argument('config', type=str, help='Path to the experiment YAML config')
        sub.add_argument('--output', type=str, default=None,
                         help='Output directory (overrides output_dir and HARTREE_LAB_OUTPUT_ROOT)')
        sub.add_argument('--jobs', type=int, default=None, help='Cap on worker threads and FFT workers')

    emit = subparsers.add_parser('emit-plotdata', help='write long-format plot CSVs for a finished run')
    emit.add_argument('directory', type=str, help='Experiment output directory')
    return parser


def print_projection(projection: dict) -> None:
    mib = projection['bytes_per_iterate'] / 2 ** 20
    grid = projection['grid']
    console.print(f"[bold yellow]Picard iterate store:[/bold yellow] n={grid['n']}, "
                  f"{projection['samples']} time samples, about {mib:.1f} MiB")


def print_summary(outcome) -> None:
    result = outcome.result
    table = Table(title=f"{result.kind} -> {outcome.output_dir}", show_header=True,
                  header_style="bold magenta")
    table.add_column("Check", style="cyan")
    table.add_column("Value", justify="right", style="green")
    table.add_column("Threshold", justify="right")
    table.add_column("Status")

    for check in result.checks:
        if check.passed:
            status = "[green]pass[/green]"
        elif check.asserted:
            status = "[bold red]FAIL[/bold red]"
        else:
            status = "[yellow]info[/yellow]"
        table.add_row(check.name, f"{check.value}", f"{check.comparison} {check.threshold}", status)

    console.print(table)
    for warning in result.warnings:
        console.print(f"[yellow]warning:[/yellow] {warning}")
    verdict = "[bold green]PASSED[/bold green]" if result.passed else "[bold red]FAILED[/bold red]"
    console.print(f"{verdict} in {outcome.wall_time:.1f}s")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else 0

    service_factory = ServiceFactory()
    try:
        orchestration_service = service_factory.get_orchestration_service()

        if args.command == 'emit-plotdata':
            status = orchestration_service.emit_plotdata(args.directory)
            console.print(f"{status['status']}: {len(status['files'])} file(s)")
            for path in status['files']:
                console.print(f"  {path}")
            return 0

        config = orchestration_service.load_config(args.config, expected_kind=args.command)
        projection = orchestration_service.projection(config)
        if projection is not None:
            print_projection(projection)

        outcome = orchestration_service.execute_config(config, output=args.output, jobs=args.jobs,
                                                       config_path=args.config)
        print_summary(outcome)
        return outcome.exit_code

    except LabError as e:
        logger.error(f"{type(e).__name__}: {e}")
        console.print(f"[bold red]error:[/bold red] {e}")
        return e.exit_code

    finally:
        service_factory.cleanup()


if __name__ == "__main__":
    sys.exit(main())
