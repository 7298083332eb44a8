"""Command line entry point: ``qjoin decide | realize | verify | crosscheck | batch | table | fixture``.

Exit codes: 0 ok, 1 verification or cross-check failure, 2 bad arguments,
3 q = 3 (nothing to realize), 4 realization inconclusive, 5 batch finished
with malformed lines.
"""

from __future__ import annotations

import itertools
import json
import random
import sys

import click
import numpy as np

from . import fixtures
from .combinatorics import is_compatible, is_multiplicity_matrix_for
from .decision import decide_q
from .model import DecisionReport, DenseSymMatrix, SizeTuple
from .oracle import OracleCache, cross_check, default_cache_path
from .realization import RealizationConfig, RealizationError, assemble_join, verify_realization

EXIT_FAIL = 1
EXIT_Q3 = 3
EXIT_INCONCLUSIVE = 4
EXIT_BATCH_PARTIAL = 5


class TupleType(click.ParamType):
    name = "tuple"

    def convert(self, value, param, ctx):
        if isinstance(value, SizeTuple):
            return value
        try:
            return SizeTuple(int(x) for x in str(value).split(","))
        except ValueError:
            self.fail(f"{value!r} is not a comma-separated list of positive integers", param, ctx)


SIZE = TupleType()


def _emit(obj) -> None:
    click.echo(json.dumps(obj))


def _checked(report: DecisionReport) -> DecisionReport:
    if report.witness is not None:
        V, W = report.witness
        if not (is_multiplicity_matrix_for(V, report.m) and is_multiplicity_matrix_for(W, report.n) and is_compatible(V, W)):
            raise click.ClickException("internal error: emitted witness failed re-validation")
    return report


@click.group()
@click.version_option(package_name="artifact")
def main() -> None:
    """Orthogonal symmetric realizations of joins of clique unions."""


@main.command()
@click.argument("m", type=SIZE)
@click.argument("n", type=SIZE)
@click.option("--json", "as_json", is_flag=True, help="Print the full report as JSON.")
@click.option("--witness", is_flag=True, help="Print the compatible multiplicity matrices.")
@click.option("--mu", "show_mu", is_flag=True, help="Print mu and the achievable +1 multiplicities.")
def decide(m, n, as_json, witness, show_mu):
    """Decide q for the join of K_M and K_N (e.g. `decide 2,2 1,1,1`)."""
    report = _checked(decide_q(m, n))
    if as_json:
        _emit(report.to_json())
        return
    line = f"q={report.q} rule={report.rule}"
    if show_mu and report.q == 2:
        lo, hi = report.iplus_range
        line = f"q={report.q} mu={report.mu} iplus=[{lo},{hi}] rule={report.rule}"
    click.echo(line)
    if witness and report.witness is not None:
        V, W = report.witness
        click.echo(f"branch: {report.branch}")
        click.echo("V =")
        click.echo(str(V))
        click.echo("W =")
        click.echo(str(W))


def _parse_lambda(text: str | None):
    if text is None:
        return None
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise click.BadParameter("expected comma-separated reals", param_hint="--lambda")
    if vals and vals[0] == -1.0 and vals[-1] == 1.0 and len(vals) >= 3:
        vals = vals[1:-1]
    return vals


@main.command()
@click.argument("m", type=SIZE)
@click.argument("n", type=SIZE)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--lambda", "lam", default=None, help="Interior eigenvalues, comma-separated, inside (-1, 1).")
@click.option("--tol", default=1e-9, show_default=True, type=float, help="Residual tolerance for X^2 = I.")
@click.option("--retries", default=64, show_default=True, type=int)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json", show_default=True)
def realize(m, n, seed, lam, tol, retries, out_path, fmt):
    """Build and verify an orthogonal symmetric matrix in S(K_M v K_N)."""
    from .model import EigenvalueList

    report = _checked(decide_q(m, n))
    if report.q == 3:
        click.echo("q=3: no realization exists", err=True)
        sys.exit(EXIT_Q3)
    cfg = RealizationConfig(tol_residual=tol, max_retries=retries, seed=seed)
    V, W = report.witness
    interior = _parse_lambda(lam)
    try:
        lam_list = None if interior is None else EigenvalueList([-1.0, *interior, 1.0])
        result = assemble_join(V, W, m, n, lam_list, cfg)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--lambda")
    except RealizationError as exc:
        click.echo(f"inconclusive: {exc}", err=True)
        sys.exit(EXIT_INCONCLUSIVE)
    check = verify_realization(result.X, m, n, cfg)
    if fmt == "json":
        payload = {
            "m": m.to_json(),
            "n": n.to_json(),
            "matrix": result.X.to_json(),
            "lambda": list(result.lam.values),
            "seed": seed,
            "retries_used": result.retries_used,
            "verification": check.to_json(),
        }
        text = json.dumps(payload)
    else:
        text = "\n".join(
            [
                f"# K_({m}) v K_({n})  seed={seed} retries={result.retries_used}",
                result.X.to_text(),
                f"# residual={check.residual:.3e} pattern_ok={check.pattern_ok} "
                f"i_plus={check.i_plus} passed={check.passed}",
            ]
        )
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
        click.echo(f"wrote {out_path}: residual={check.residual:.3e} passed={check.passed}")
    else:
        click.echo(text)
    if not check.passed:
        sys.exit(EXIT_FAIL)


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.argument("m", type=SIZE, required=False)
@click.argument("n", type=SIZE, required=False)
@click.option("--tol", default=1e-9, show_default=True, type=float)
def verify(path, m, n, tol):
    """Verify a stored matrix file against K_M v K_N (or the pattern stored in the file)."""
    with open(path) as fh:
        obj = json.load(fh)
    mat = obj.get("matrix", obj)
    pattern = mat.get("pattern", obj.get("pattern"))
    if m is None and n is None and pattern is None and "m" in obj and "n" in obj:
        m, n = SizeTuple(obj["m"]), SizeTuple(obj["n"])
    if (m is None or n is None) and pattern is None:
        raise click.UsageError("give M and N, or a file that stores its pattern")
    try:
        X = np.array(mat["data"], dtype=float)
        report = verify_realization(X, m, n, RealizationConfig(tol_residual=tol), pattern=None if m is not None else pattern)
    except (KeyError, ValueError) as exc:
        raise click.UsageError(f"cannot verify {path}: {exc}")
    _emit(report.to_json())
    if not report.passed:
        for v in report.violations[:10]:
            click.echo(f"violation: ({v['i']},{v['j']}) {v['kind']} value={v['value']:.3e}", err=True)
        sys.exit(EXIT_FAIL)


@main.command()
@click.option("--limit", default=6, show_default=True, type=click.IntRange(min=2))
@click.option("--rmax", default=4, show_default=True, type=click.IntRange(min=3))
@click.option("--cache", "cache_path", default=None, type=click.Path(dir_okay=False),
              help="JSONL cache file (default: $QJOIN_CACHE).")
@click.option("--csv", "csv_path", default=None, type=click.Path(dir_okay=False))
@click.option("--no-mu", is_flag=True, help="Only compare q, skip mu.")
def crosscheck(limit, rmax, cache_path, csv_path, no_mu):
    """Compare the closed form with brute force over all pairs with |m|, |n| <= LIMIT."""
    cache_path = cache_path or default_cache_path()
    cache = OracleCache(cache_path) if cache_path else None
    report = cross_check(limit, r_max=rmax, check_mu=not no_mu, cache=cache)
    if csv_path:
        report.write_csv(csv_path)
    _emit(report.to_json())
    if report.counterexamples:
        sys.exit(EXIT_FAIL)


@main.command()
@click.option("--in", "in_path", type=click.File("r"), default="-", show_default=True)
@click.option("--out", "out_path", type=click.File("w"), default="-", show_default=True)
def batch(in_path, out_path):
    """One decision per JSONL line: {"m": [...], "n": [...]} -> report.

    Every input line yields one output line; malformed (including blank)
    lines become error objects and the run exits 5 at the end.
    """
    bad = 0
    for lineno, line in enumerate(in_path, start=1):
        try:
            obj = json.loads(line)
            rec = _checked(decide_q(SizeTuple(obj["m"]), SizeTuple(obj["n"]))).to_json()
        except (ValueError, KeyError, TypeError) as exc:
            bad += 1
            rec = {"line": lineno, "error": f"{type(exc).__name__}: {exc}"}
        out_path.write(json.dumps(rec) + "\n")
        out_path.flush()
    if bad:
        sys.exit(EXIT_BATCH_PARTIAL)


def _parse_params(text: str) -> dict[str, list[int]]:
    out = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        key, _, val = part.partition("=")
        if not val:
            raise click.BadParameter(f"bad parameter {part!r}", param_hint="--params")
        try:
            if ".." in val:
                lo, hi = val.split("..")
                out[key.strip()] = list(range(int(lo), int(hi) + 1))
            else:
                out[key.strip()] = [int(val)]
        except ValueError:
            raise click.BadParameter(f"bad parameter {part!r}", param_hint="--params")
    return out


def discrete_rule(s: int, a: int, b: int) -> int:
    if s == 2:
        return 2 if b in (a, 2 * a) else 3
    return 2 if a <= b <= s * a else 3


@main.command()
@click.option("--example", type=click.Choice(["km-connected", "discrete"]), required=True)
@click.option("--params", default="", help="e.g. 's=2,a=1..4,b=1..8' or 'm=4,l=1..6,e=1..2'.")
@click.option("--samples", default=50, show_default=True, type=int,
              help="km-connected: random n-tuples per cell when exhaustive listing is too large.")
def table(example, params, samples):
    """Tabulate q for aK_s v bK_1 or K_m v (any l cliques), each cell from the decision rule."""
    p = _parse_params(params)
    mismatches = 0
    if example == "discrete":
        s_vals, a_vals, b_vals = p.get("s", [2]), p.get("a", [1, 2, 3, 4]), p.get("b", list(range(1, 9)))
        click.echo("s a | " + " ".join(f"b={b:<2}" for b in b_vals))
        for s, a in itertools.product(s_vals, a_vals):
            cells = []
            for b in b_vals:
                q = decide_q([s] * a, [1] * b).q
                mismatches += q != discrete_rule(s, a, b)
                cells.append(f"{q:>4}")
            click.echo(f"{s} {a} | " + " ".join(cells))
    else:
        m_vals, l_vals, e_vals = p.get("m", [4]), p.get("l", list(range(1, 7))), p.get("e", [1, 2])
        rng = random.Random(0)
        click.echo("m l | q  expected  tuples")
        for m, l in itertools.product(m_vals, l_vals):
            combos = list(itertools.islice(itertools.combinations_with_replacement(e_vals, l), 2000))
            if len(e_vals) ** l > 2000:
                combos = [tuple(rng.choice(e_vals) for _ in range(l)) for _ in range(samples)]
            qs = {decide_q([m], list(c)).q for c in combos}
            expected = 2 if l <= m else 3
            mismatches += qs != {expected}
            shown = str(qs.pop()) if len(qs) == 1 else "mixed"
            click.echo(f"{m} {l} | {shown:<2} {expected:<9} {len(combos)}")
    click.echo(f"mismatches={mismatches}")
    if mismatches:
        sys.exit(EXIT_FAIL)


@main.command()
@click.argument("name", type=click.Choice(["cycles", "rank-two-star"]))
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
def fixture(name, out_path):
    """Write an exact worked example as a matrix file that `verify` can read."""
    if name == "cycles":
        X = fixtures.cycles_join()
        pattern = fixtures.cycles_pattern()
        obj = {"matrix": DenseSymMatrix(X).to_json(), "pattern": pattern.astype(int).tolist()}
    else:
        X = fixtures.rank_two_star(3)
        obj = {"matrix": DenseSymMatrix(X).to_json(), "m": [2], "n": [1, 1, 1]}
    with open(out_path, "w") as fh:
        json.dump(obj, fh)
    click.echo(f"wrote {out_path}")


if __name__ == "__main__":  # pragma: no cover
    main()
