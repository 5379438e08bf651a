"""Command-line entry point: keygen, ingest, serve, query, estimate and bench."""

import json
import logging
import random
import sys
from typing import Optional

import click

from .core import config
from .core.config import Settings, load_settings
from .handlers.arithmetic import TOY_GROUP, generate_dh_group
from .handlers.bench import run_bench
from .handlers.cost_model import CostScheme, PRESETS, TABLE_SCHEMES, render_scenario
from .handlers.key_files import write_key
from .handlers.paillier import paillier_keygen
from .handlers.psi_client import query as psi_query, session_config_from_settings
from .handlers.psi_server import serve as psi_serve
from .handlers.rsa import rsa_keygen
from .handlers.store import read_trail_points, store_ingest
from .models.schemas import EncodingParams
from .models.transcript import SchemeId
from .utils import status_codes
from .utils.errors import ConfigurationError, PsiError

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


class PsiGroup(click.Group):
    """Maps every PsiError to a one-line message on stderr and exit code 1."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except PsiError as e:
            logger.debug("Command failed", exc_info=True)
            click.echo(f"error: {e}", err=True)
            ctx.exit(status_codes.EXIT_ERROR)


def _settings(ctx: click.Context, **overrides) -> Settings:
    """Settings from --config/environment with non-None command flags applied on top."""
    if "settings" not in ctx.obj:
        ctx.obj["settings"] = load_settings(ctx.obj.get("config_path"))
    settings: Settings = ctx.obj["settings"]
    updates = {k: v for k, v in overrides.items() if v is not None}
    if not updates:
        return settings
    try:
        return Settings(**{**settings.model_dump(), **updates})
    except ValueError as e:
        raise ConfigurationError(f"invalid option: {e}") from e


def _encoding(settings: Settings) -> EncodingParams:
    return EncodingParams(
        beta_bits=settings.beta_bits,
        time_bucket_s=settings.time_bucket_s,
        window_buckets=settings.window_buckets,
    )


def _rng(seed: Optional[int]) -> random.Random:
    return random.Random(seed) if seed is not None else random.SystemRandom()


@click.group(cls=PsiGroup, invoke_without_command=True)
@click.option("--config", "config_path", envvar="PSI_CONFIG", type=click.Path(dir_okay=False),
              help="dotenv-style configuration file.")
@click.option("-v", "--verbose", is_flag=True, help="Log at DEBUG level.")
@click.option("-q", "--quiet", is_flag=True, help="Log warnings and errors only.")
@click.pass_context
def cli(ctx: click.Context, config_path: Optional[str], verbose: bool, quiet: bool):
    """Private set intersection over location trails."""
    level = logging.DEBUG if verbose else logging.WARNING if quiet else config.LOG_LEVEL
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)
    ctx.ensure_object(dict)
    ctx.obj["config_path"] = config_path
    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_usage(), err=True)
        ctx.exit(status_codes.EXIT_USAGE)


@cli.command()
@click.argument("kind", type=click.Choice(["rsa", "paillier", "dh"]))
@click.option("--bits", type=int, default=None, help="Prime size (RSA/Paillier) or group modulus size (DH).")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
@click.option("--public-out", type=click.Path(dir_okay=False), default=None,
              help="Also write the public half (RSA/Paillier).")
@click.option("--toy", is_flag=True, help="DH only: write the 23-element toy group.")
@click.option("--seed", type=int, default=None, help="Deterministic key generation (testing only).")
def keygen(kind: str, bits: Optional[int], out_path: str, public_out: Optional[str], toy: bool, seed: Optional[int]):
    """Generate key material in the PSI-KEY text format."""
    if public_out and kind == "dh":
        raise click.UsageError("--public-out does not apply to DH groups")
    rng = _rng(seed)
    if kind == "rsa":
        key = rsa_keygen(bits or config.DEFAULT_RSA_PRIME_BITS, rng=rng)
        public = key.public
    elif kind == "paillier":
        key = paillier_keygen(bits or config.DEFAULT_PAILLIER_PRIME_BITS, rng=rng)
        public = key.public
    else:
        key = TOY_GROUP if toy else generate_dh_group(bits or config.DEFAULT_DH_GROUP_BITS, rng=rng)
        public = None

    write_key(out_path, key)
    if public_out:
        write_key(public_out, public)
    click.echo(out_path)


@cli.command()
@click.argument("trails", type=click.Path(dir_okay=False))
@click.option("--store", "store_path", type=click.Path(file_okay=False), default=None)
@click.option("--time-bucket", "time_bucket_s", type=int, default=None)
@click.pass_context
def ingest(ctx: click.Context, trails: str, store_path: Optional[str], time_bucket_s: Optional[int]):
    """Digest an NDJSON trail file into the town-partitioned store."""
    settings = _settings(ctx, store_path=store_path, time_bucket_s=time_bucket_s)
    store = store_ingest(trails, _encoding(settings), settings.store_path)
    click.echo(json.dumps(store.manifest.model_dump(mode="json"), sort_keys=True))


@cli.command()
@click.option("--listen", default=None, help="host:port of the PSI listener.")
@click.option("--store", "store_path", type=click.Path(file_okay=False), default=None)
@click.option("--rsa-key", "rsa_key_path", type=click.Path(dir_okay=False), default=None)
@click.option("--dh-group", "dh_group_path", type=click.Path(dir_okay=False), default=None)
@click.option("--http-port", type=int, default=None, help="Status API port; 0 disables it.")
@click.option("--max-client-elements", type=int, default=None)
@click.pass_context
def serve(ctx: click.Context, **overrides):
    """Serve every scheme over TCP until SIGINT/SIGTERM."""
    psi_serve(_settings(ctx, **overrides))


@cli.command()
@click.argument("trails", type=click.Path(dir_okay=False))
@click.option("--server", "address", default=None, help="host:port of the PSI server.")
@click.option("--scheme", type=click.Choice([s.value for s in SchemeId]), default=None)
@click.option("--town", default=None)
@click.option("--window", "window_buckets", type=int, default=None, help="Odd number of time buckets per point.")
@click.option("--seed", type=int, default=None)
@click.pass_context
def query(
    ctx: click.Context,
    trails: str,
    address: Optional[str],
    scheme: Optional[str],
    town: Optional[str],
    window_buckets: Optional[int],
    seed: Optional[int],
):
    """Run the client role and print the RiskReport as JSON."""
    settings = _settings(ctx, listen=address, window_buckets=window_buckets)
    session_config = session_config_from_settings(settings, SchemeId(scheme) if scheme else None, town)
    report = psi_query(
        settings.listen_address,
        read_trail_points(trails),
        session_config,
        _encoding(settings),
        max_frame_bytes=settings.max_frame_bytes,
        rng=_rng(seed),
    )
    click.echo(report.model_dump_json())


@cli.command()
@click.option("--preset", type=click.Choice(sorted(PRESETS)), default="india", show_default=True)
@click.option("--scheme", type=click.Choice([s.value for s in CostScheme]), default=None,
              help="One scheme instead of the whole table.")
@click.option("--m", type=click.IntRange(min=1), default=None)
@click.option("--n", type=click.IntRange(min=1), default=None)
@click.option("--alpha", type=click.IntRange(min=1), default=None)
@click.option("--beta", type=click.IntRange(min=1), default=None)
@click.option("--tau", type=click.IntRange(min=1), default=None)
@click.option("--server-hz", type=click.FloatRange(min=0, min_open=True), default=None)
@click.option("--client-hz", type=click.FloatRange(min=0, min_open=True), default=None)
@click.option("--format", "output_format", type=click.Choice(["table", "csv"]), default="table", show_default=True)
def estimate(preset: str, scheme: Optional[str], output_format: str, **overrides):
    """Modeled computation seconds and communication bits per scheme."""
    schemes = [CostScheme(scheme)] if scheme else list(TABLE_SCHEMES)
    rendered = render_scenario(preset, schemes, **overrides)
    click.echo(rendered.csv if output_format == "csv" else rendered.table, nl=False)


@cli.command()
@click.option("--bits", "key_bits", type=int, default=256, show_default=True, help="Prime size of the benchmark keys.")
@click.option("--m", "server_size", type=int, default=64, show_default=True)
@click.option("--n", "client_size", type=int, default=16, show_default=True)
@click.option("--repeats", type=click.IntRange(min=1), default=5, show_default=True)
@click.option("--seed", type=int, default=None)
def bench(key_bits: int, server_size: int, client_size: int, repeats: int, seed: Optional[int]):
    """Wall-clock timings of primitives and small PSI runs as JSON."""
    report = run_bench(key_bits, server_size, client_size, repeats, _rng(seed))
    click.echo(report.model_dump_json(indent=2))


def main() -> None:
    cli(prog_name="psi")


if __name__ == "__main__":
    main()
