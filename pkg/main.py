"""
Command-line entry point for the qph toolkit.

Sets up logging and registers the subcommands, which delegate to the
handlers in ``routes.command_routes``.
"""
import logging
import sys
from typing import Optional, Sequence

import click

from config import LOG_LEVEL
from routes.command_routes import (
    handle_check, handle_compile, handle_example, handle_matrix, handle_normal, handle_parse,
    handle_prelude, handle_simulate, handle_verify,
)

logger = logging.getLogger(__name__)

SOURCE = click.Path(exists=True, dir_okay=False)


@click.group()
@click.option("--verbose", is_flag=True, help="Log pipeline stages at DEBUG level.")
def cli(verbose: bool):
    """Compile, simulate and verify global-phase / if-let quantum programs."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else LOG_LEVEL,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


@cli.command()
@click.argument("file", type=SOURCE)
@click.pass_context
def parse(ctx, file):
    """Print the elaborated program."""
    ctx.exit(handle_parse(file))


@cli.command()
@click.argument("file", type=SOURCE)
@click.pass_context
def check(ctx, file):
    """Print the program's type."""
    ctx.exit(handle_check(file))


@cli.command(name="compile")
@click.argument("file", type=SOURCE)
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write the circuit here.")
@click.option("--fuse", is_flag=True, help="Merge adjacent clauses with equal selectors.")
@click.option("--stats", is_flag=True, help="Print gate counts to stderr.")
@click.pass_context
def compile_command(ctx, file, output, fuse, stats):
    """Compile to the circuit text format."""
    ctx.exit(handle_compile(file, output, fuse, stats))


@cli.command()
@click.argument("file", type=SOURCE)
@click.option("--compiled", is_flag=True, help="Simulate the compiled circuit instead of the source.")
@click.pass_context
def matrix(ctx, file, compiled):
    """Print the program's unitary."""
    ctx.exit(handle_matrix(file, compiled))


@cli.command()
@click.argument("file", type=SOURCE)
@click.pass_context
def verify(ctx, file):
    """Check the compiled circuit against the source semantics."""
    ctx.exit(handle_verify(file))


@cli.command()
@click.argument("file", type=SOURCE)
@click.option("--fuse", is_flag=True)
@click.pass_context
def normal(ctx, file, fuse):
    """Print the normal clauses, one per line."""
    ctx.exit(handle_normal(file, fuse))


@cli.command()
@click.pass_context
def prelude(ctx):
    """List the built-in gates."""
    ctx.exit(handle_prelude())


@cli.command()
@click.argument("family", type=click.Choice(["grover", "qft", "trotter", "qsp", "qet", "ghz"]))
@click.option("-n", "--qubits", type=int, default=3, show_default=True)
@click.option("--omega", type=int, default=0, show_default=True, help="Grover marked element.")
@click.option("--iterations", type=int, default=None, help="Grover rounds (default ceil(pi*sqrt(N)/4)).")
@click.option("--bitrev", is_flag=True, help="QFT: append swaps so the output is in natural order.")
@click.option("--time", "time_", type=float, default=1.0, show_default=True)
@click.option("--steps", type=int, default=8, show_default=True)
@click.option("--omegas", type=(float, float), default=(1.0, 0.7), show_default=True,
              help="Trotter: the two single-spin frequencies.")
@click.option("--coupling", type=float, default=0.3, show_default=True)
@click.option("--signal", type=float, default=0.5, show_default=True, help="QSP signal amplitude a.")
@click.option("--phi", "phis", type=float, multiple=True, help="QSP/QET phase angle (repeatable).")
@click.option("--unitary", default="H", show_default=True, help="QET: prelude gate used as s_U.")
@click.option("--projector", default="|0>", show_default=True, help="QET: projector pattern.")
@click.option("-o", "--output", type=click.Path(dir_okay=False))
@click.pass_context
def example(ctx, family, qubits, omega, iterations, bitrev, time_, steps, omegas, coupling,
            signal, phis, unitary, projector, output):
    """Emit an algorithm as a .qph program."""
    ctx.exit(handle_example(family, qubits, omega, iterations, bitrev, time_, steps, omegas,
                            coupling, signal, phis, unitary, projector, output))


@cli.command()
@click.argument("file", required=False, type=click.Path(dir_okay=False))
@click.option("--hamiltonian", required=True, type=SOURCE, help="Hamiltonian spec (JSON).")
@click.pass_context
def simulate(ctx, file, hamiltonian):
    """Trotterize a Hamiltonian and report the error against exp(-iHt).

    FILE, when given, receives the generated program.
    """
    ctx.exit(handle_simulate(file, hamiltonian))


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit status (0 ok, 1 failure, 2 usage)."""
    try:
        status = cli.main(args=list(argv) if argv is not None else None,
                          prog_name="qph", standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        return 2
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        return 1
    except Exception as exc:
        logger.debug("unhandled error", exc_info=True)
        click.echo(f"❌ {type(exc).__name__}: {exc}", err=True)
        return 1
    return status if isinstance(status, int) else 0


if __name__ == "__main__":
    sys.exit(run())
