"""
Command-Line Interface

Every library operation behind one click group. Words are abstract letters
by default ("aba", letters mapped by first occurrence); --digits switches
to 0-9a-z digit words.

Usage:
    subshift-escape escape --q 3 --hole aa,bb
    subshift-escape --format json compare --q 4 --hole1 abc,bcd --hole2 abc,ddd
    subshift-escape --digits count --q 2 --hole 00,11 --n 8 --brute
    subshift-escape --format csv table 1
    subshift-escape --seed 7 verify min-period --p 4 --q 6 --samples 100

Exit codes: 0 success, 1 domain error or failed verification, 2 usage error.
"""

import inspect
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import click

from subshift_escape.config import configure_logging
from subshift_escape.errors import EscapeRateError
from subshift_escape.escape import (
    HoleSpec,
    ThresholdVariant,
    compare_escape,
    cylinder_measure,
    d_threshold,
    escape_rate,
    gen_period_threshold,
    hole_measure,
    parry_data,
)
from subshift_escape.experiments.executor import SUITES, SuiteRequest, execute_many, load_suite_config
from subshift_escape.experiments.reports import (
    TABLE_CSV_FIELDS,
    Status,
    VerificationReport,
    to_csv_text,
    to_json_text,
)
from subshift_escape.experiments.tables import TABLE_IDS, reproduce_table
from subshift_escape.poly import correlation_data, correlation_matrix, generating_function, r_function, series_coefficients
from subshift_escape.spectral import brute_force_count, build_avoidance_automaton, count_words, topological_entropy
from subshift_escape.words import (
    WordCollection,
    WordMode,
    correlation,
    minimal_period_hole,
    minimal_period_word,
    parse_collection,
    parse_word,
    split_words,
)

logger = logging.getLogger(__name__)

SCHEMA_DIR = Path(__file__).parent / "schemas"
SCHEMAS = ("escape_result", "comparison", "table_row", "verification_report", "perron_result")

# q used by the purely combinatorial commands when --q is not given
COMBINATORIAL_Q = 36


@dataclass(frozen=True)
class CommandConfig:
    """Global options shared by every subcommand."""

    output_format: str = "text"
    mode: WordMode = WordMode.ABSTRACT
    tol: float | None = None
    jobs: int = 1
    seed: int | None = None


def _emit(config: CommandConfig, payload: Any, text: str, rows: list[dict[str, Any]] | None = None,
          fieldnames: list[str] | None = None) -> None:
    if config.output_format == "json":
        click.echo(to_json_text(payload))
    elif config.output_format == "csv":
        click.echo(to_csv_text(rows if rows is not None else [payload], fieldnames), nl=False)
    else:
        click.echo(text)


def _holes(config: CommandConfig, q: int, base: str | None, *holes: str) -> tuple[WordCollection | None, list[WordCollection]]:
    """Parse a base and holes; in abstract mode each hole extends the base's letter map."""
    mapping: dict[str, int] = {}
    base_collection = parse_collection(base, q, config.mode, mapping) if base else None
    parsed = [parse_collection(text, q, config.mode, dict(mapping)) for text in holes]
    return base_collection, parsed


q_option = click.option("--q", "q", type=click.IntRange(min=2), required=True, help="Alphabet size")
optional_q_option = click.option(
    "--q", "q", type=click.IntRange(min=2), default=COMBINATORIAL_Q, show_default=True, help="Alphabet size",
)


@click.group()
@click.option("--format", "output_format", type=click.Choice(["text", "json", "csv"]), default="text",
              show_default=True, help="Output format")
@click.option("--digits", is_flag=True, help="Read words as 0-9a-z digits instead of abstract letters")
@click.option("--tol", type=click.FloatRange(min=0, min_open=True), default=None,
              help="Perron root bracket tolerance")
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True, help="Worker processes")
@click.option("--seed", type=int, default=None, help="Seed for sampled suites")
@click.option("--debug", is_flag=True, help="Enable debug logging")
@click.pass_context
def cli(ctx: click.Context, output_format: str, digits: bool, tol: float | None, jobs: int,
        seed: int | None, debug: bool):
    """Escape rates of the shift into Markov holes."""
    configure_logging(debug=debug)
    if debug:
        logger.debug("Debug logging enabled")
    ctx.obj = CommandConfig(
        output_format=output_format,
        mode=WordMode.DIGIT if digits else WordMode.ABSTRACT,
        tol=tol,
        jobs=jobs,
        seed=seed,
    )


@cli.command()
@click.argument("u")
@click.argument("w")
@optional_q_option
@click.pass_obj
def corr(config: CommandConfig, u: str, w: str, q: int):
    """Correlation polynomial (U, W)_z."""
    mapping: dict[str, int] = {}
    first = parse_word(u, q, config.mode, mapping)
    second = parse_word(w, q, config.mode, mapping)
    poly = correlation(first, second)
    _emit(config, {"u": u, "w": w, "correlation": poly.to_json(), "text": str(poly)}, str(poly),
          [{"u": u, "w": w, "correlation": str(poly)}])


@cli.command()
@click.argument("words")
@optional_q_option
@click.pass_obj
def period(config: CommandConfig, words: str, q: int):
    """Minimal periods of each word and of the hole."""
    collection = parse_collection(words, q, config.mode)
    periods = {text: minimal_period_word(w) for text, w in zip(split_words(words), collection)}
    tau = minimal_period_hole(collection)
    lines = [f"{text}: {value}" for text, value in periods.items()] + [f"tau={tau}"]
    _emit(config, {"words": periods, "tau": tau}, "\n".join(lines),
          [{"word": text, "period": value} for text, value in periods.items()])


@cli.command()
@click.argument("words")
@optional_q_option
@click.pass_obj
def rfunc(config: CommandConfig, words: str, q: int):
    """r(z) = S(z)/Δ(z) of a collection."""
    collection = parse_collection(words, q, config.mode)
    r = r_function(collection)
    delta, s = correlation_data(collection)
    payload = {
        "words": collection.texts(),
        "matrix": correlation_matrix(collection).to_json(),
        "delta": delta.to_json(),
        "S": s.to_json(),
        "r": r.to_json(),
    }
    text = f"r(z) = {r.reduced()}\nDelta(z) = {delta}\nS(z) = {s}"
    _emit(config, payload, text, [{"delta": str(delta), "S": str(s), "r": str(r.reduced())}])


@cli.command()
@q_option
@click.option("--forbidden", default=None, help="Forbidden words (empty for the full shift)")
@click.pass_obj
def entropy(config: CommandConfig, q: int, forbidden: str | None):
    """Topological entropy ln θ of the subshift avoiding FORBIDDEN."""
    collection = parse_collection(forbidden, q, config.mode) if forbidden else WordCollection(q)
    result = topological_entropy(collection, q, config.tol)
    _emit(config, result.to_json(), f"h_top={result.value:.12g} theta={result.theta.value:.12g}",
          [{"q": q, "forbidden": forbidden or "", "entropy": result.value, "theta": result.theta.value}])


@cli.command()
@q_option
@click.option("--hole", required=True, help="Hole words, comma separated")
@click.option("--base", default=None, help="Forbidden words of the ambient subshift")
@click.pass_obj
def escape(config: CommandConfig, q: int, hole: str, base: str | None):
    """Escape rate ρ of a hole."""
    base_collection, (hole_collection,) = _holes(config, q, base, hole)
    result = escape_rate(HoleSpec(hole_collection, q, base_collection), config.tol)
    text = (
        f"rho={result.rho:.12g}\n"
        f"bracket=[{result.rho_lo:.12g}, {result.rho_hi:.12g}]\n"
        f"lambda={result.lam.value:.12g} theta={result.theta.value:.12g}"
    )
    _emit(config, result.to_json(), text, [result.csv_row()])


@cli.command()
@q_option
@click.option("--hole1", required=True, help="First hole")
@click.option("--hole2", required=True, help="Second hole")
@click.option("--base", default=None, help="Forbidden words of the ambient subshift")
@click.pass_obj
def compare(config: CommandConfig, q: int, hole1: str, hole2: str, base: str | None):
    """Certified order of ρ(HOLE1) against ρ(HOLE2)."""
    base_collection, (first, second) = _holes(config, q, base, hole1, hole2)
    result = compare_escape(HoleSpec(first, q, base_collection), HoleSpec(second, q, base_collection), config.tol)
    text = (
        f"{result.ordering.value} (certified={result.certified}, gap={float(result.gap):.3g})\n"
        f"rho1={result.first.rho:.12g} rho2={result.second.rho:.12g}"
    )
    _emit(config, result.to_json(), text, [{
        "ordering": result.ordering.value, "certified": result.certified, "gap": float(result.gap),
        "rho1": result.first.rho, "rho2": result.second.rho,
    }])


@cli.command()
@q_option
@click.option("--hole", required=True, help="Forbidden words")
@click.option("--n", "n", type=click.IntRange(min=0), required=True, help="Last coefficient index")
@click.pass_obj
def series(config: CommandConfig, q: int, hole: str, n: int):
    """Coefficients f(0..N) of the generating function."""
    collection = parse_collection(hole, q, config.mode)
    numerator, denominator = generating_function(collection, q)
    values = series_coefficients(numerator, denominator, n)
    payload = {"numerator": numerator.to_json(), "denominator": denominator.to_json(), "coefficients": values}
    _emit(config, payload, " ".join(str(v) for v in values), [{"n": i, "f": v} for i, v in enumerate(values)])


@cli.command()
@q_option
@click.option("--hole", required=True, help="Forbidden words")
@click.option("--n", "n", type=click.IntRange(min=0), required=True, help="Word length")
@click.option("--brute", is_flag=True, help="Also count by brute force")
@click.pass_obj
def count(config: CommandConfig, q: int, hole: str, n: int, brute: bool):
    """Number of length-N words avoiding HOLE."""
    collection = parse_collection(hole, q, config.mode)
    value = count_words(build_avoidance_automaton(collection, q), n)
    payload: dict[str, Any] = {"q": q, "n": n, "count": value}
    text = f"f({n})={value}"
    if brute:
        payload["brute_force"] = brute_force_count(collection, q, n)
        text += f" brute_force={payload['brute_force']}"
    _emit(config, payload, text)


@cli.command()
@q_option
@click.option("--forbidden", default=None, help="Forbidden words (empty for the full shift)")
@click.option("--cylinder", default=None, help="Word or comma-separated equal-length words to measure")
@click.pass_obj
def parry(config: CommandConfig, q: int, forbidden: str | None, cylinder: str | None):
    """Parry measure data, optionally the measure of a cylinder."""
    base, holes = _holes(config, q, forbidden, *([cylinder] if cylinder else []))
    pd = parry_data(base or WordCollection(q), q, config.tol)
    payload = pd.to_json()
    text = f"theta={pd.theta.value:.12g}"
    if holes:
        measured = holes[0]
        value = cylinder_measure(measured.words[0], pd) if measured.t == 1 else hole_measure(measured, pd)
        payload["measure"] = value
        text += f"\nmu={value:.12g}"
    _emit(config, payload, text)


@cli.command()
@click.option("--t", "t", type=click.IntRange(min=1), required=True, help="Words per hole")
@click.option("--p", "p", type=click.IntRange(min=1), required=True, help="Word length")
@click.option("--variant", type=click.Choice([v.value for v in ThresholdVariant]), default="two_words",
              show_default=True, help="Threshold formula")
@click.option("--p1", type=click.IntRange(min=1), default=None, help="First word length (mixed variant)")
@click.option("--p2", type=click.IntRange(min=1), default=None, help="Second word length (mixed variant)")
@click.pass_obj
def threshold(config: CommandConfig, t: int, p: int, variant: str, p1: int | None, p2: int | None):
    """Threshold D(t, p) and the gen-period alphabet bound."""
    if variant == ThresholdVariant.MIXED.value and (p1 is None or p2 is None):
        raise click.UsageError("--variant mixed needs --p1 and --p2")
    value = d_threshold(t, p, variant, p1, p2)
    payload = {"t": t, "p": p, "variant": variant, "D": value, "gen_period_q": gen_period_threshold(t)}
    _emit(config, payload, f"D={value} gen_period_q={payload['gen_period_q']}")


def _report_output(config: CommandConfig, reports: list[VerificationReport]) -> None:
    payload = [r.to_json(timing=False) for r in reports]
    lines = []
    for r in reports:
        verdict = "PASS" if r.passed else f"FAIL ({len(r.failures)})"
        lines.append(f"{r.theorem}: {verdict} - {r.instances_tested} instances, {r.universe}")
        lines.extend(f"  {f.kind}: {f.reason}" for f in r.failures)
    rows = [row for r in reports for row in r.csv_rows()]
    _emit(config, payload[0] if len(payload) == 1 else payload, "\n".join(lines), rows)


def _write_reports(reports: list[VerificationReport], directory: Path, output_format: str) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    for index, report in enumerate(reports):
        target = directory / f"{index:02d}_{report.theorem}.{output_format}"
        if output_format == "json":
            target.write_text(to_json_text(report.to_json()) + "\n", encoding="utf-8")
        else:
            target.write_text(to_csv_text(report.csv_rows()), encoding="utf-8")
        logger.info(f"[CLI] Wrote {target}")


@cli.command()
@click.argument("suite", type=click.Choice(sorted(SUITES) + ["config"]))
@click.argument("config_file", required=False, type=click.Path(dir_okay=False))
@click.option("--p", "p", type=click.IntRange(min=1), default=None, help="Word length")
@click.option("--t", "t", type=click.IntRange(min=1), default=None, help="Words per hole")
@click.option("--q", "q", type=click.IntRange(min=2), default=None, help="Alphabet size")
@click.option("--q-max", type=click.IntRange(min=3), default=None, help="Largest alphabet (p2 suite)")
@click.option("--D", "D", type=click.IntRange(min=1), default=None, help="Threshold for r-order")
@click.option("--samples", type=click.IntRange(min=1), default=None, help="Sampled instances")
@click.option("--mode", type=click.Choice(["exhaustive", "sampled"]), default=None, help="min-period mode")
@click.option("--base", default=None, help="Ambient forbidden words (subshift suites)")
@click.option("--exploratory", is_flag=True, help="Run outside the proved range")
@click.pass_obj
def verify(config: CommandConfig, suite: str, config_file: str | None, **flags):
    """Run a verification SUITE, or every suite in a JSON config file (verify config FILE)."""
    if suite == "config":
        if config_file is None:
            raise click.UsageError("verify config needs a FILE argument")
        experiment = load_suite_config(config_file)
        reports = execute_many(experiment.requests, config.jobs, experiment.settings)
        if experiment.output_directory is not None:
            _write_reports(reports, experiment.output_directory, experiment.output_format)
    else:
        if config_file is not None:
            raise click.UsageError(f"unexpected argument {config_file!r} for suite {suite}")
        params = {k: v for k, v in flags.items() if v is not None and v is not False}
        if config.seed is not None:
            params["seed"] = config.seed
        request = SuiteRequest(suite, params)
        accepted = inspect.signature(SUITES[suite]).parameters
        for name in params:
            if name not in accepted:
                flag = "--seed" if name == "seed" else f"--{name.replace('_', '-')}"
                raise click.UsageError(f"suite {suite} does not take {flag}")
        reports = execute_many([request], 1)
    _report_output(config, reports)
    if not all(r.passed for r in reports):
        sys.exit(1)


@cli.command()
@click.argument("table_id", type=click.Choice(list(TABLE_IDS)))
@click.option("--tolerance", type=click.FloatRange(min=0, min_open=True), default=None,
              help="Absolute PASS tolerance")
@click.pass_obj
def table(config: CommandConfig, table_id: str, tolerance: float | None):
    """Recompute printed table TABLE_ID."""
    rows = reproduce_table(table_id, tolerance, config.jobs, config.tol)
    lines = [
        f"{r.column:>6} q={r.q:<3} {r.collection:<24} expected={r.expected!s:<9} "
        f"computed={'' if r.computed is None else format(r.computed, '.6g'):<10} {r.status.value} {r.note}".rstrip()
        for r in rows
    ]
    _emit(config, [r.to_json() for r in rows], "\n".join(lines), [r.to_json() for r in rows], TABLE_CSV_FIELDS)
    if any(r.status is Status.FAIL for r in rows):
        sys.exit(1)


@cli.command()
@click.argument("name", type=click.Choice(SCHEMAS))
def schema(name: str):
    """Print the JSON schema of an output type."""
    click.echo((SCHEMA_DIR / f"{name}.schema.json").read_text(encoding="utf-8"), nl=False)


def dispatch(argv: list[str] | None = None) -> int:
    """
    Run the CLI on argv and return the exit code.

    Domain errors print "Error [<ClassName>]: message" and give 1; usage
    errors give 2.
    """
    try:
        cli.main(args=argv, prog_name="subshift-escape", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return 2 if isinstance(e, click.UsageError) else 1
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    except EscapeRateError as e:
        click.echo(f"Error [{type(e).__name__}]: {e}", err=True)
        return 1
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 1
    return 0


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
