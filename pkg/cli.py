import json
import sys
from enum import Enum
from pathlib import Path
from typing import List, Optional

import click
import typer
from pydantic import ValidationError as ModelValidationError
from typing_extensions import Annotated

import game as games
import optimize
import oracle
import protocol
import witness as witnesses
from core import settings
from core.config import PPT_TOL
from core.exceptions import GameError
from core.log import configure_logging
from inputs import read_source, resolve_game, resolve_state, resolve_strategy, resolve_vector, resolve_witness
from models import OptimizeOptions

app = typer.Typer(
    help="Semiquantum witnessing games: build games, compute pay-offs, run oracles and simulations.",
    no_args_is_help=True,
    add_completion=False,
)
witness_app = typer.Typer(help="Build entanglement witnesses.", no_args_is_help=True)
game_app = typer.Typer(help="Build games from witnesses.", no_args_is_help=True)
payoff_app = typer.Typer(help="Evaluate and optimize pay-offs.", no_args_is_help=True)
measure_app = typer.Typer(help="Entanglement measures from optimized pay-offs.", no_args_is_help=True)
oracle_app = typer.Typer(help="Independent reference computations.", no_args_is_help=True)

app.add_typer(witness_app, name="witness")
app.add_typer(game_app, name="game")
app.add_typer(payoff_app, name="payoff")
app.add_typer(measure_app, name="measure")
app.add_typer(oracle_app, name="oracle")

# Shared options
StateOpt = Annotated[str, typer.Option("--state", help="State JSON file or bell:<name>, werner:<v>, maxent:<d>")]
GameOpt = Annotated[str, typer.Option("--game", help="Game or witness JSON file, or swap:<d>, bell:<name>, maxent:<d>")]
StrategyOpt = Annotated[str, typer.Option("--strategy", help="Strategy JSON file or pairing:identity|twisted, accept-all:<d>, reject-all:<d>")]
OutOpt = Annotated[Optional[Path], typer.Option("--out", help="Write JSON here instead of standard output")]
SeedOpt = Annotated[Optional[int], typer.Option("--seed", help="RNG seed (default SQGAME_SEED)")]
ThreadsOpt = Annotated[Optional[int], typer.Option("--threads", min=1, help="Worker threads; results do not depend on it")]
RestartsOpt = Annotated[Optional[int], typer.Option("--restarts", min=0)]
TolOpt = Annotated[Optional[float], typer.Option("--tol")]
MaxIterOpt = Annotated[Optional[int], typer.Option("--max-iter", min=1)]


class Family(str, Enum):
    PRODUCT = "product"
    MATCHED = "matched"


def _emit(payload: str, out: Optional[Path]) -> None:
    if out is None:
        typer.echo(payload)
    else:
        out.write_text(payload + "\n")


def _emit_value(out: Optional[Path], **values) -> None:
    _emit(json.dumps(values, indent=2), out)


def _options(seed, threads, restarts=None, tol=None, max_iter=None, top_k=None) -> OptimizeOptions:
    return OptimizeOptions.from_settings(
        seed=seed, workers=threads, restarts=restarts, tol=tol, max_iter=max_iter, top_k=top_k
    )


@app.callback()
def root(verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Log at DEBUG level")] = False):
    configure_logging("DEBUG" if verbose else settings.LOG_LEVEL)


# witness

@witness_app.command("decomposable")
def witness_decomposable(
    psi: Annotated[str, typer.Option("--psi", help="Vector JSON file or bell:<name|d>, maxent:<d>")],
    out: OutOpt = None,
):
    """W = -D |psi><psi|^{T_B0}."""
    W = witnesses.decomposable_witness(resolve_vector(read_source(psi)))
    _emit(W.model_dump_json(indent=2), out)


@witness_app.command("swap")
def witness_swap(d: Annotated[int, typer.Option("--d")], out: OutOpt = None):
    _emit(witnesses.swap_witness(d).model_dump_json(indent=2), out)


# game

@game_app.command("from-witness")
def game_from_witness(
    witness: Annotated[str, typer.Option("--witness", help="Witness JSON file or swap:<d>, bell:<name>, maxent:<d>")],
    out: OutOpt = None,
):
    game = games.from_witness(resolve_witness(read_source(witness)))
    _emit(game.model_dump_json(indent=2), out)


# payoff

@payoff_app.command("evaluate")
def payoff_evaluate(game: GameOpt, state: StateOpt, strategy: StrategyOpt, out: OutOpt = None):
    """Average reward of a strategy on a shared state."""
    value = games.average_reward(
        resolve_game(read_source(game)), resolve_state(read_source(state)), resolve_strategy(read_source(strategy))
    )
    _emit_value(out, value=value)


@payoff_app.command("optimize")
def payoff_optimize(
    game: GameOpt,
    state: StateOpt,
    family: Annotated[Family, typer.Option("--family")] = Family.MATCHED,
    restarts: RestartsOpt = None,
    tol: TolOpt = None,
    max_iter: MaxIterOpt = None,
    seed: SeedOpt = None,
    threads: ThreadsOpt = None,
    out: OutOpt = None,
):
    W = resolve_game(read_source(game)).witness
    rho = resolve_state(read_source(state))
    opts = _options(seed, threads, restarts, tol, max_iter)
    solver = optimize.seesaw_product if family is Family.PRODUCT else optimize.seesaw_matched
    _emit(solver(W, rho, opts).model_dump_json(indent=2), out)


# measure

@measure_app.command("npt")
def measure_npt(
    state: StateOpt,
    game: Annotated[Optional[str], typer.Option("--game", help="Decomposable game; default is the canonical Bell-type witness")] = None,
    restarts: RestartsOpt = None,
    seed: SeedOpt = None,
    threads: ThreadsOpt = None,
    out: OutOpt = None,
):
    rho = resolve_state(read_source(state))
    if game is None:
        d_a, d_b = rho.dims
        W = witnesses.canonical_witness(d_a, d_b)
    else:
        W = resolve_game(read_source(game)).witness
    report = optimize.payoff_npt(W, rho, _options(seed, threads, restarts))
    _emit(report.model_dump_json(indent=2), out)


@measure_app.command("bullet")
def measure_bullet(
    state: StateOpt,
    top_k: Annotated[Optional[int], typer.Option("--top-k", min=1)] = None,
    restarts: RestartsOpt = None,
    seed: SeedOpt = None,
    threads: ThreadsOpt = None,
    out: OutOpt = None,
):
    rho = resolve_state(read_source(state))
    report = optimize.payoff_bullet(rho, _options(seed, threads, restarts, top_k=top_k))
    _emit(report.model_dump_json(indent=2), out)


@measure_app.command("member")
def measure_member(
    state: StateOpt,
    lam: Annotated[float, typer.Option("--lambda")],
    restarts: RestartsOpt = None,
    seed: SeedOpt = None,
    threads: ThreadsOpt = None,
    out: OutOpt = None,
):
    """Is the state in S_lambda?"""
    verdict = optimize.s_lambda_member(resolve_state(read_source(state)), lam, _options(seed, threads, restarts))
    _emit(verdict.model_dump_json(indent=2), out)


# oracle

@oracle_app.command("negativity")
def oracle_negativity(state: StateOpt, out: OutOpt = None):
    _emit_value(out, negativity=oracle.negativity(resolve_state(read_source(state))))


@oracle_app.command("ppt")
def oracle_ppt(state: StateOpt, out: OutOpt = None):
    value = oracle.ppt_min_eigenvalue(resolve_state(read_source(state)))
    _emit_value(out, min_eigenvalue=value, ppt=value >= -PPT_TOL)


@oracle_app.command("upper-bound")
def oracle_upper_bound(game: GameOpt, state: StateOpt, out: OutOpt = None):
    W = resolve_game(read_source(game)).witness
    _emit_value(out, upper_bound=oracle.upper_bound_global(W, resolve_state(read_source(state))))


@oracle_app.command("witness")
def oracle_witness(state: StateOpt, out: OutOpt = None):
    """Decomposable witness from the most negative partial-transpose direction."""
    W, value = oracle.optimal_decomposable_witness(resolve_state(read_source(state)))
    _emit(json.dumps({"witness": W.model_dump(mode="json"), "detection_value": value}, indent=2), out)


@oracle_app.command("brute-force")
def oracle_brute_force(
    game: GameOpt,
    state: StateOpt,
    trials: Annotated[int, typer.Option("--trials", min=1)] = 1000,
    seed: SeedOpt = None,
    out: OutOpt = None,
):
    W = resolve_game(read_source(game)).witness
    seed = settings.SEED if seed is None else seed
    _emit_value(out, value=oracle.brute_force_payoff(W, resolve_state(read_source(state)), trials, seed))


# simulate

@app.command("simulate")
def simulate(
    game: GameOpt,
    state: StateOpt,
    strategy: StrategyOpt,
    shots: Annotated[int, typer.Option("--shots", min=1)] = 10_000,
    seed: SeedOpt = None,
    partitions: Annotated[int, typer.Option("--partitions", min=1)] = 1,
    threads: ThreadsOpt = None,
    transcript: Annotated[Optional[Path], typer.Option("--transcript", help="Write one JSON line per shot")] = None,
    out: OutOpt = None,
):
    """Finite-shot run of the referee protocol."""
    kwargs = dict(
        shots=shots,
        seed=settings.SEED if seed is None else seed,
        partitions=partitions,
        workers=threads or settings.MAX_WORKERS,
    )
    g = resolve_game(read_source(game))
    rho = resolve_state(read_source(state))
    s = resolve_strategy(read_source(strategy))
    if transcript is None:
        report = protocol.run(g, rho, s, **kwargs)
    else:
        with transcript.open("w") as stream:
            report = protocol.run(g, rho, s, transcript=stream, **kwargs)
    _emit(report.model_dump_json(indent=2), out)


def _fail(error: str, detail: str) -> None:
    typer.echo(json.dumps({"error": error, "detail": detail}), err=True)


def main(argv: Optional[List[str]] = None) -> int:
    """Run the command line; returns 0 on success, 2 on invalid input, 3 on dimension or infeasibility errors."""
    command = typer.main.get_command(app)
    try:
        result = command.main(args=argv, prog_name="sqgame", standalone_mode=False)
    except GameError as exc:
        _fail(type(exc).__name__, exc.detail)
        return exc.exit_code
    except ModelValidationError as exc:
        _fail("ValidationError", str(exc))
        return 2
    except json.JSONDecodeError as exc:
        _fail("ValidationError", f"malformed JSON: {exc}")
        return 2
    except click.ClickException as exc:
        _fail("UsageError", exc.format_message())
        return 2
    except click.exceptions.Abort:
        return 1
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    sys.exit(main())
