import json

import click

from itekit import __version__
from itekit.common import jsonable
from itekit.errors import ITEKitError
from itekit.logger import configure

from . import counting, geometry, spectral
from .session import Session


class ITEKitCLI(click.Group):
    """Maps library errors to a JSON object on stderr and the error's exit code."""

    def invoke(self, ctx):
        try:
            return super(ITEKitCLI, self).invoke(ctx)
        except ITEKitError as e:
            click.echo(json.dumps(jsonable(e.to_dict()), sort_keys=True), err=True)
            ctx.exit(e.exit_code)


@click.group(cls=ITEKitCLI)
@click.version_option(__version__, "-v", "--version", message="itekit v%(version)s")
@click.help_option("-h", "--help")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), help="Run config (JSON or TOML)")
@click.option("--cache-dir", type=click.Path(file_okay=False), help="Spectrum cache directory")
@click.option("--threads", type=click.IntRange(min=1), help="Modes evaluated concurrently")
@click.option("--out", type=click.Path(dir_okay=False), help="Output file (default: stdout)")
@click.option("--verbose", "verbosity", flag_value=1, help="Debug logging")
@click.option("-q", "--quiet", "verbosity", flag_value=-1, help="Warnings only")
@click.pass_context
def cli(ctx, config_path=None, cache_dir=None, threads=None, out=None, verbosity=0):
    """itekit: interior transmission eigenvalues on warped products

    Every command reads the run config given by `--config`. Example::

        itekit --config pair.json ite
        itekit --config disk.json --out spectrum.csv spectrum
    """

    configure(verbosity or 0)
    session = Session(config_path, cache_dir, threads, out)
    ctx.obj = session
    ctx.call_on_close(session.close)


def setup():
    """Registers the commands of the cli modules"""

    geometry.register(cli)
    spectral.register(cli)
    counting.register(cli)


def run():
    """Setup the CLI and run the CLI"""

    setup()
    cli()


if __name__ == "__main__":
    run()
