"""Command-line front end.

Three subcommands: ``quantale`` runs axiom/adjunction/condition-(S) checks
on a definition file, ``laws`` runs the monad law and naturality suites on a
scenario file, and ``counterexample`` replays the associativity-failure
script.  Exit codes are a stable contract: 0 when expectations are met, 1 on
a mathematical failure, 2 on input errors, 3 on budget exhaustion.  Reports
are deterministic given inputs and seeds, and the structured output mirrors
the text output exactly.
"""

from __future__ import annotations

import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import click

from .counterexample import (NO_VIOLATION_EXPECTED, VIOLATION,
                             run_counterexample)
from .errors import BudgetError, PreconditionError, QuantalabError
from .monad import (Variant, check_monad_laws, check_naturality,
                    classical_correspondence_report, table_satisfies)
from .quantale import (FiniteQuantale, TNorm, check_condition_s,
                       check_quantale_axioms, grid,
                       residuum_continuity_probe, two_chain)
from .serialize import (format_fraction, load_quantale, load_scenario,
                        parse_fraction, render_text, semifilter_to_json)

EXIT_OK = 0
EXIT_MATH_FAILURE = 1
EXIT_INPUT_ERROR = 2
EXIT_BUDGET = 3


def _emit(report: dict, out: str | None, fmt: str):
    text = render_text(report) if fmt == "text" else json.dumps(report, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    click.echo(text)


def _fraction_arg(value: str, name: str) -> Fraction:
    try:
        return parse_fraction(value)
    except QuantalabError as e:
        raise click.UsageError(f"bad {name}: {e}")


@click.group()
def main():
    """Exact checks for quantale-valued filter structures and their monads."""
    # worker-count env var is accepted for forward compatibility; runs are
    # currently sequential and deterministic regardless
    os.environ.get("QUANTALAB_WORKERS")


@main.command("quantale")
@click.option("--quantale", "path", required=True, type=click.Path(exists=True))
@click.option("--check", "checks", multiple=True,
              type=click.Choice(["axioms", "adjunction", "s", "probe"]),
              help="Checks to run; defaults to every applicable one.")
@click.option("--grid-step", default="1/64", show_default=True)
@click.option("--out", default=None, type=click.Path())
@click.option("--format", "fmt", default="text",
              type=click.Choice(["text", "structured"]), show_default=True)
def cmd_quantale(path, checks, grid_step, out, fmt):
    """Check a quantale definition file."""
    try:
        q = load_quantale(path)
        step = parse_fraction(grid_step)
        if not checks:
            checks = ("axioms", "adjunction", "s", "probe") if isinstance(q, TNorm) \
                else ("axioms", "adjunction")
        report: dict = {"input": str(path), "kind": "tnorm" if isinstance(q, TNorm) else "finite"}
        failed = False

        if "axioms" in checks:
            if isinstance(q, FiniteQuantale):
                violations = check_quantale_axioms(q)
                report["axioms"] = {
                    "status": "ok" if not violations else "violated",
                    "violations": [{"law": v.law,
                                    "witness": [format_fraction(w) for w in v.witness]}
                                   for v in violations]}
                failed = failed or bool(violations)
            else:
                bad = _tnorm_axiom_probe(q, step)
                report["axioms"] = {"status": "ok" if bad is None else "violated",
                                    "probe": "grid"}
                if bad is not None:
                    report["axioms"]["witness"] = [format_fraction(v) for v in bad]
                    failed = True
        if "adjunction" in checks:
            bad = _adjunction_witness(q, step)
            report["adjunction"] = {"status": "ok" if bad is None else "violated"}
            if bad is not None:
                report["adjunction"]["witness"] = [format_fraction(v) for v in bad]
                failed = True
        if isinstance(q, TNorm):
            if "s" in checks:
                ok, block = check_condition_s(q)
                entry = {"status": "satisfied" if ok else "violated"}
                if block is not None:
                    entry["witness_block"] = {"lo": format_fraction(block.lo),
                                              "hi": format_fraction(block.hi),
                                              "kind": block.kind.value}
                report["condition (S)"] = entry
                failed = failed or not ok
            if "probe" in checks:
                jump, where = residuum_continuity_probe(q, step)
                report["continuity probe"] = {
                    "max_offdiagonal_jump": format_fraction(jump),
                    "at": [[format_fraction(v) for v in pt] for pt in where] if where else None}
        _emit(report, out, fmt)
        sys.exit(EXIT_MATH_FAILURE if failed else EXIT_OK)
    except QuantalabError as e:
        click.echo(f"input error: {e}", err=True)
        sys.exit(EXIT_INPUT_ERROR)


def _tnorm_axiom_probe(t, step):
    """First grid witness against commutativity, the unit law or (on a
    coarser grid) associativity; None when the probe is clean."""
    points = grid(step)
    one = points[-1]
    for x in points:
        if t.tensor(x, one) != x:
            return (x,)
        for y in points:
            if t.tensor(x, y) != t.tensor(y, x):
                return (x, y)
    coarse = grid(max(step, parse_fraction("1/16")))
    for x in coarse:
        for y in coarse:
            xy = t.tensor(x, y)
            for z in coarse:
                if t.tensor(xy, z) != t.tensor(x, t.tensor(y, z)):
                    return (x, y, z)
    return None


def _adjunction_witness(q, step):
    """First triple violating the residuation adjunction, or None."""
    if isinstance(q, FiniteQuantale):
        points = list(q.elements)
        tensor, res, leq = q.tensor, q.residuum, q.leq
    else:
        points = grid(step)
        tensor, res, leq = q.tensor, q.residuum, q.leq
    for x in points:
        for y in points:
            r = res(x, y)
            for z in points:
                if leq(tensor(x, z), y) != leq(z, r):
                    return (x, y, z)
    return None


@main.command("laws")
@click.option("--scenario", "path", required=True, type=click.Path(exists=True))
@click.option("--seed", default=None, type=int, help="Overrides the file's seed.")
@click.option("--budget", default=None, type=int,
              help="Cap on the number of law scenarios actually run.")
@click.option("--out", default=None, type=click.Path())
@click.option("--format", "fmt", default="text",
              type=click.Choice(["text", "structured"]), show_default=True)
def cmd_laws(path, seed, budget, out, fmt):
    """Run the monad-law and naturality suites from a scenario file."""
    try:
        scenario = load_scenario(path)
        if not isinstance(scenario.carrier, FiniteQuantale):
            raise PreconditionError("law suites need a finite carrier")
        seed = scenario.seed if seed is None else seed
        budget = scenario.budget if budget is None else budget

        explicit = scenario.explicit_maps()
        if explicit is not None:
            for name, mapped in explicit.items():
                for x, table in mapped.items():
                    if not table_satisfies(table, scenario.variant):
                        click.echo(f"input error: {name}({x!r}) is not a "
                                   f"{scenario.variant.value} semifilter", err=True)
                        click.echo(json.dumps(semifilter_to_json(table)), err=True)
                        sys.exit(EXIT_INPUT_ERROR)

        sizes = (len(scenario.x_set), len(scenario.y_set), len(scenario.z_set))
        law = check_monad_laws(scenario.carrier, sizes, scenario.scenarios, seed,
                               scenario.variant, budget=budget)
        nat = check_naturality(scenario.carrier, samples=8, seed=seed)
        report = {
            "input": str(path),
            "variant": scenario.variant.value,
            "seed": seed,
            "sizes": list(sizes),
            "laws": {"scenarios_run": law.scenarios_run,
                     "checks": law.checks,
                     "incomplete": law.incomplete,
                     "failures": [{"law": f.law, "scenario": f.scenario,
                                   "detail": f.detail} for f in law.failures]},
            "naturality": {"checks": nat.checks, "failures": nat.failures},
        }
        if scenario.carrier == two_chain():
            cor = classical_correspondence_report(max_size=3)
            report["classical_filter_oracle"] = {
                "status": "match" if cor.passed else "mismatch",
                "checks": cor.checks, "failures": cor.failures}
        _emit(report, out, fmt)
        if law.incomplete:
            sys.exit(EXIT_BUDGET)
        failed = law.failures or nat.failures \
            or report.get("classical_filter_oracle", {}).get("status") == "mismatch"
        sys.exit(EXIT_MATH_FAILURE if failed else EXIT_OK)
    except BudgetError as e:
        click.echo(f"budget exhausted: {e}", err=True)
        sys.exit(EXIT_BUDGET)
    except QuantalabError as e:
        click.echo(f"input error: {e}", err=True)
        sys.exit(EXIT_INPUT_ERROR)


@main.command("counterexample")
@click.option("--quantale", "path", default=None, type=click.Path(exists=True))
@click.option("--scenario", "scenario_path", default=None, type=click.Path(exists=True),
              help="Scenario file supplying the quantale, variant and an "
                   "optional witness catalog; flags take precedence.")
@click.option("--t", "t_par", required=True)
@click.option("--s", "s_par", required=True)
@click.option("--truncation", default=1000, show_default=True, type=int)
@click.option("--variant", default=None,
              type=click.Choice([v.value for v in Variant]),
              help="Defaults to the scenario's variant, else plain.")
@click.option("--epsilon", default="1/8", show_default=True)
@click.option("--out", default=None, type=click.Path())
@click.option("--format", "fmt", default="text",
              type=click.Choice(["text", "structured"]), show_default=True)
def cmd_counterexample(path, scenario_path, t_par, s_par, truncation, variant,
                       epsilon, out, fmt):
    """Replay the associativity-failure script on a t-norm definition."""
    try:
        catalog = None
        if scenario_path is not None:
            scenario = load_scenario(scenario_path)
            q = scenario.carrier
            catalog = scenario.witness_catalog
            if variant is None:
                variant = scenario.variant.value
            if path is not None:
                q = load_quantale(path)
        elif path is not None:
            q = load_quantale(path)
        else:
            raise PreconditionError("need --quantale or --scenario")
        if variant is None:
            variant = Variant.PLAIN.value
        if not isinstance(q, TNorm):
            raise PreconditionError("the counterexample runs on t-norm specs")
        rep = run_counterexample(q, _fraction_arg(t_par, "--t"),
                                 _fraction_arg(s_par, "--s"),
                                 depth=truncation, variant=Variant(variant),
                                 epsilon=_fraction_arg(epsilon, "--epsilon"),
                                 catalog_exprs=catalog)
        report = {
            "input": str(path or scenario_path),
            "variant": rep.variant.value,
            "condition (S)": rep.condition_s,
            "certified": rep.certified,
            "routed_to_plain": rep.routed_to_plain,
            "p": format_fraction(rep.p),
            "q": format_fraction(rep.q) if rep.q is not None else None,
            "t": format_fraction(rep.t_par),
            "s": format_fraction(rep.s_par),
            "truncation": rep.depth,
            "catalog_size": rep.catalog_size,
            "step1_value": format_fraction(rep.step1_value),
            "step1_exact": rep.step1_exact,
            "step1_witness": rep.step1_witness,
            "step2_bound": format_fraction(rep.step2_bound),
            "coincide_on_catalog": rep.coincide_on_catalog,
            "claims": [{"name": c.name, "ok": c.ok, "detail": c.detail}
                       for c in rep.claims],
            "verdict": rep.verdict,
        }
        _emit(report, out, fmt)
        expected = (rep.verdict == NO_VIOLATION_EXPECTED) if rep.condition_s \
            else (rep.verdict == VIOLATION and rep.all_claims_ok)
        sys.exit(EXIT_OK if expected else EXIT_MATH_FAILURE)
    except PreconditionError as e:
        click.echo(f"input error: {e}", err=True)
        sys.exit(EXIT_INPUT_ERROR)
    except QuantalabError as e:
        click.echo(f"input error: {e}", err=True)
        sys.exit(EXIT_INPUT_ERROR)


if __name__ == "__main__":
    main()
