"""Command-line interface.

Exit status: 0 on success, 1 on validation failures or counterexamples,
2 on usage errors.  Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import defaultdict
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .assets import AssetSystem, skewness
from .dataio import (
    curve_to_json,
    load_dataset,
    load_scenarios,
    parse_range,
    report_to_dict,
    write_curve_csv,
    write_dataset_csv,
)
from .datasets import ATTACKER_COLUMNS, BUILTINS
from .evaluation import (
    STRATEGIES,
    SystemScenario,
    average_defensibility,
    compare_systems,
    defensibility,
    evaluation_grid,
)
from .defense import optimal_defense_bruteforce, reflexive_defense
from .evaluation import residual_value
from .properties import builtin_property_suite, count_counterexamples, randomized_property_suite
from .threats import ThreatKind, ThreatModel


class CliError(Exception):
    pass


def _range_arg(text: str) -> list[int]:
    try:
        return parse_range(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_dataset_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--dataset", required=required,
                   help=f"built-in name ({', '.join(BUILTINS)}) or path to a CSV/JSON file")
    p.add_argument("--dataset-format", choices=("csv", "json"), help="file format (default: from suffix)")
    p.add_argument("--attacker-values", choices=ATTACKER_COLUMNS,
                   help="attach a built-in attacker valuation column")


def _add_threat_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--threat", choices=[k.value for k in ThreatKind],
                   help="default: optimal-different when attacker values are present, else optimal")
    p.add_argument("--probabilities", type=Path,
                   help="JSON object {asset_id: probability} for the stationary threat")
    p.add_argument("--b0", default="", help="comma-separated ids of assets defended beforehand")
    p.add_argument("--strategy", choices=STRATEGIES, default="reflexive", help="how the defense is chosen")


def _system(args) -> AssetSystem:
    return load_dataset(args.dataset, args.dataset_format, args.attacker_values)


def _threat(args, system: AssetSystem, name: Optional[str] = None) -> ThreatModel:
    name = name or args.threat
    if name is None:
        name = "optimal-different" if system.has_attacker_values else "optimal"
    probabilities = None
    if name == ThreatKind.STATIONARY_STOCHASTIC.value:
        if args.probabilities is None:
            raise CliError("the stationary threat needs --probabilities")
        probabilities = json.loads(args.probabilities.read_text(encoding="utf-8"))
    threat = ThreatModel.parse(name, probabilities)
    threat.validate_for(system)
    return threat


def _b0(args) -> frozenset[str]:
    return frozenset(x.strip() for x in args.b0.split(",") if x.strip())


def _out(args):
    if getattr(args, "output", None):
        return open(args.output, "w", encoding="utf-8", newline="")
    return sys.stdout


def cmd_evaluate(args) -> int:
    system = _system(args)
    threat = _threat(args, system)
    pre = _b0(args)
    if args.strategy == "optimal":
        defense = optimal_defense_bruteforce(system, threat, args.a, args.b, pre)[0]
    else:
        defense = reflexive_defense(system, args.b, pre)
    v = residual_value(system, threat, args.a, defense)
    d = defensibility(system, threat, args.a, args.b, pre, args.strategy)
    result = {
        "system": system.name,
        "threat": threat.descriptor,
        "a": args.a,
        "b": args.b,
        "b0": sorted(pre),
        "defended": sorted(defense.defended_ids),
        "residual_value": v,
        "residual_fraction": v / system.total_value,
        "defensibility": d,
    }
    if args.json:
        print(json.dumps(result, indent=2, sort_keys=True))
    else:
        for key in ("system", "threat", "a", "b"):
            print(f"{key}: {result[key]}")
        print(f"defended: {', '.join(result['defended']) or '-'}")
        print(f"residual_value: {v:.6g}")
        print(f"residual_fraction: {v / system.total_value:.6g}")
        print(f"defensibility: {d:.6g}")
    return 0


def cmd_curve(args) -> int:
    if args.config:
        scenarios, _ = load_scenarios(args.config)
        if len(scenarios) != 1:
            raise CliError("curve takes a config with exactly one scenario")
        sc = scenarios[0]
        grid = evaluation_grid(sc.system, sc.threat, sc.a_values, sc.b_values, sc.b0_ids, sc.strategy)
        fmt = args.format or sc.output
    else:
        if not args.dataset:
            raise CliError("curve needs --dataset or --config")
        system = _system(args)
        threat = _threat(args, system)
        b_values = args.b if args.b is not None else list(range(0, system.n + 1))
        grid = evaluation_grid(system, threat, args.a, b_values, _b0(args), args.strategy)
        fmt = args.format or "csv"
    out = _out(args)
    try:
        if fmt == "json":
            out.write(curve_to_json(grid))
        else:
            write_curve_csv(grid, out)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_average(args) -> int:
    system = _system(args)
    threat = _threat(args, system)
    bs = args.b
    if bs != list(range(bs[0], bs[-1] + 1)):
        raise CliError("--b must be a contiguous range such as 1..10")
    avg = average_defensibility(system, threat, args.a, bs[0], bs[-1], _b0(args), args.strategy)
    if args.json:
        print(json.dumps({"system": system.name, "threat": threat.descriptor, "a": args.a,
                          "b_from": bs[0], "b_to": bs[-1], "average_defensibility": avg},
                         indent=2, sort_keys=True))
    else:
        print(f"average_defensibility({system.name}, {threat.descriptor}, a={args.a}, "
              f"b={bs[0]}..{bs[-1]}): {avg:.6g}")
    return 0


def cmd_compare(args) -> int:
    if args.config:
        scenarios, settings = load_scenarios(args.config)
        items = [SystemScenario(s.system, s.threat, s.a_values[0], s.name) for s in scenarios]
        budget = args.budget if args.budget is not None else settings.get("budget")
        avg = args.average or settings.get("average_range")
    else:
        if not args.dataset:
            raise CliError("compare needs --config or at least two --dataset options")
        threats = args.threat or [None]
        efforts = args.a or [1]
        if len(threats) not in (1, len(args.dataset)) or len(efforts) not in (1, len(args.dataset)):
            raise CliError("give one --threat/--a for all datasets or one per dataset")
        items = []
        for k, src in enumerate(args.dataset):
            system = load_dataset(src, None, args.attacker_values)
            threat = _threat(args, system, threats[k % len(threats)])
            a = efforts[k % len(efforts)]
            items.append(SystemScenario(system, threat, a, f"{system.name}:{threat.descriptor}:a={a}"))
        budget, avg = args.budget, args.average
    if budget is None:
        raise CliError("compare needs --budget")
    if avg is not None:
        avg = (min(avg), max(avg))
    report = compare_systems(items, budget, avg)
    if args.json:
        print(json.dumps(report_to_dict(report), indent=2, sort_keys=True))
    else:
        for e in report.entries:
            d = "n/a" if e.defensibility is None else f"{e.defensibility:.6g}"
            line = f"{e.name}: D(a={e.a},b={budget})={d}"
            if avg is not None:
                line += " avg={}".format("n/a" if e.average is None else f"{e.average:.6g}")
            if e.error:
                line += f" error={e.error}"
            print(line)
        print(f"recommended: {report.recommended_system_id}")
        if len(report.maximizers) > 1:
            print(f"tied: {', '.join(report.maximizers)}")
    if report.recommended_system_id is None:
        print("error: no scenario could be evaluated", file=sys.stderr)
        return 1
    return 0


def cmd_verify(args) -> int:
    results = []
    if not args.skip_builtin:
        results += builtin_property_suite()
    if args.instances > 0:
        results += randomized_property_suite(args.seed, args.instances, args.n_max)
    bad = count_counterexamples(results)
    if args.json:
        print(json.dumps({"seed": args.seed, "instances": args.instances, "n_max": args.n_max,
                          "counterexamples": bad, "results": [r.to_dict() for r in results]},
                         indent=2, sort_keys=True))
    else:
        summary = defaultdict(lambda: [0, 0, 0])
        for r in results:
            row = summary[r.proposition_id.value]
            row[0] += 1
            row[1] += r.holds
            row[2] += r.counterexample
        for prop, (checks, held, ce) in summary.items():
            print(f"{prop:<6} checks={checks:<5} holds={held:<5} counterexamples={ce}")
        for r in results:
            if r.counterexample:
                print(f"COUNTEREXAMPLE {r.proposition_id.value} {r.instance_descriptor}: "
                      f"{json.dumps(r.witness, sort_keys=True)}")
        print(f"total checks={len(results)} counterexamples={bad}")
    return 1 if bad else 0


def cmd_stats(args) -> int:
    system = _system(args)
    try:
        skew = skewness(system.values)
    except ValueError:
        skew = None
    if args.json:
        print(json.dumps({"system": system.name, "n": system.n, "total_value": system.total_value,
                          "skewness": skew,
                          "assets": [{"rank": i + 1, "id": x.id, "defender_value": x.defender_value,
                                      "attacker_value": x.attacker_value}
                                     for i, x in enumerate(system.assets)]},
                         indent=2, sort_keys=True))
    else:
        print(f"system: {system.name}")
        print(f"n: {system.n}")
        print(f"total_value: {system.total_value:.6g}")
        print("skewness: " + ("undefined" if skew is None else f"{skew:.6g}"))
        for i, x in enumerate(system.assets, 1):
            extra = "" if x.attacker_value is None else f"  attacker_value={x.attacker_value:g}"
            print(f"{i:>3}  {x.id:<16} {x.defender_value:g}{extra}")
    return 0


def cmd_export(args) -> int:
    system = _system(args)
    out = _out(args)
    try:
        write_dataset_csv(system, out)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="defensibility",
                                     description="Defensibility of systems of discrete assets.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", help="residual value and defensibility at one (a, b)")
    _add_dataset_args(p)
    _add_threat_args(p)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("curve", help="residual value / defensibility grid as CSV or JSON")
    _add_dataset_args(p, required=False)
    _add_threat_args(p)
    p.add_argument("--config", type=Path, help="JSON scenario file (replaces the dataset options)")
    p.add_argument("--a", type=_range_arg, default=[1], help="attack efforts, e.g. 1,2,4,10")
    p.add_argument("--b", type=_range_arg, help="defense efforts, e.g. 0..10 (default 0..n)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--output", help="write to a file instead of stdout")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("average", help="average defensibility over a range of b")
    _add_dataset_args(p)
    _add_threat_args(p)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--b", type=_range_arg, default=[1, 10], help="inclusive range, e.g. 1..10")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_average)

    p = sub.add_parser("compare", help="pick the system where a defense budget helps most")
    p.add_argument("--config", type=Path, help="JSON with 'scenarios', 'budget', 'average_range'")
    p.add_argument("--dataset", action="append", help="repeat once per system")
    p.add_argument("--attacker-values", choices=ATTACKER_COLUMNS)
    p.add_argument("--threat", action="append", choices=[k.value for k in ThreatKind],
                   help="one for all datasets, or one per dataset")
    p.add_argument("--probabilities", type=Path)
    p.add_argument("--a", type=int, action="append", help="one for all datasets, or one per dataset")
    p.add_argument("--budget", type=int)
    p.add_argument("--average", type=_range_arg, help="rank by mean defensibility over this b range")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", help="check the analytical propositions")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--instances", type=int, default=100)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--skip-builtin", action="store_true", help="only run the randomized instances")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stats", help="n, total value, skewness and ranks of a dataset")
    _add_dataset_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("export", help="write a dataset as CSV")
    _add_dataset_args(p)
    p.add_argument("--output")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError, KeyError, FileNotFoundError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
