"""Command-line driver.

Records go to stdout (JSON lines by default), diagnostics to stderr. Exit
codes: 0 success, 2 usage or contract error, 3 capacity exceeded,
4 a search ran out of budget without finding a solution.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from collections.abc import Iterable, Sequence

import numpy as np

from . import amplification as amp
from . import counting, heuristics, verify
from .errors import CapacityError, ContractError
from .oracles import Oracle, load_family, load_oracle, make_random_oracle, make_subset_oracle
from .statevec import project, sample

EXIT_OK, EXIT_USAGE, EXIT_CAPACITY, EXIT_NOT_FOUND = 0, 2, 3, 4
DECIMALS = 9


class UsageError(ContractError):
    pass


def _add_oracle_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("oracle")
    g.add_argument("--n", type=int, help="data-register qubits")
    g.add_argument("--t", type=int, help="number of random solutions")
    g.add_argument("--oracle-seed", type=int, default=0, help="seed for the random solution set")
    g.add_argument("--solutions", help="comma-separated solution indices")
    g.add_argument("--oracle", metavar="FILE", help="JSON oracle file")


def _add_run_args(p: argparse.ArgumentParser, trials: int = 1) -> None:
    p.add_argument("--seed", type=int, help="seed of a single run (or base seed for --trials)")
    p.add_argument("--seed-base", type=int, help="trial i uses seed seed_base + i")
    p.add_argument("--trials", type=int, default=trials)
    p.add_argument("--format", choices=("jsonl", "csv", "pretty"), default="jsonl")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="amplicount",
        description="Amplitude amplification, quantum search and approximate counting simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("search", help="search without knowing the number of solutions")
    _add_oracle_args(p)
    _add_run_args(p)
    p.add_argument("--budget", type=int, help="query budget before giving up")

    p = sub.add_parser("search-known", help="search with m = floor(pi / 4 theta)")
    _add_oracle_args(p)
    _add_run_args(p)
    p.add_argument("--a", type=float, help="success probability (default t/N)")
    p.add_argument("--budget", type=int)

    p = sub.add_parser("amplify", help="m amplification steps from the uniform state")
    _add_oracle_args(p)
    _add_run_args(p)
    p.add_argument("--m", type=int, help="iterations (default floor(pi / 4 theta))")

    p = sub.add_parser("derandomize", help="exact-success search with known a")
    _add_oracle_args(p)
    _add_run_args(p)
    p.add_argument("--method", choices=("augmented", "phase"), default="phase")

    p = sub.add_parser("count", help="one run of Count(F, P)")
    _add_oracle_args(p)
    _add_run_args(p)
    p.add_argument("--P", type=int, required=True)
    p.add_argument("--coherent", action="store_true", help="skip the optional data-register measurement")

    p = sub.add_parser("count-rel", help="relative-error counting")
    _add_oracle_args(p)
    _add_run_args(p)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--k", type=int, help="majority size (default max(5, ceil(3 log2 log2 N)), odd)")

    p = sub.add_parser("count-exact", help="exact counting")
    _add_oracle_args(p)
    _add_run_args(p)

    p = sub.add_parser("estimate", help="amplitude estimation")
    _add_oracle_args(p)
    _add_run_args(p)
    p.add_argument("--P", type=int, required=True)
    p.add_argument("--a", type=float, help="estimate a one-qubit rotation with this a instead of an oracle")

    p = sub.add_parser("heuristic", help="heuristic-boosted search benchmark")
    _add_run_args(p, trials=160)
    p.add_argument("--family", help="family JSON (default: the bundled example)")
    p.add_argument("--kappa", type=float, help="constant for the bound (default: calibrate)")

    p = sub.add_parser("verify-grid", help="run a verification suite and emit CSV")
    p.add_argument("--suite", choices=sorted(verify.SUITES), required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, help="Monte Carlo trials for corollary suites")
    p.add_argument("--format", choices=("jsonl", "csv", "pretty"), default="csv")
    return parser


def resolve_oracle(args: argparse.Namespace) -> Oracle:
    if args.oracle:
        return load_oracle(args.oracle)
    if args.n is None:
        raise UsageError("--n is required unless --oracle is given")
    if args.solutions is not None:
        sols = [int(s) for s in args.solutions.split(",") if s.strip()]
        return make_subset_oracle(args.n, sols)
    if args.t is not None:
        return make_random_oracle(args.n, args.t, args.oracle_seed)
    raise UsageError("give --t, --solutions or --oracle")


def trial_seeds(args: argparse.Namespace) -> list[int]:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    base = args.seed_base if args.seed_base is not None else args.seed
    if base is None:
        raise UsageError("stochastic commands need --seed or --seed-base")
    return [base + i for i in range(args.trials)]


def _clean(value):
    if isinstance(value, float):
        return round(value, DECIMALS)
    if isinstance(value, (np.floating,)):
        return round(float(value), DECIMALS)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, complex):
        return [round(value.real, DECIMALS), round(value.imag, DECIMALS)]
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def emit(records: Iterable[dict], fmt: str, out) -> None:
    records = [_clean(r) for r in records]
    if fmt == "jsonl":
        for r in records:
            out.write(json.dumps(r) + "\n")
    elif fmt == "csv":
        keys: list[str] = []
        for r in records:
            keys += [k for k in r if k not in keys and not isinstance(r[k], dict)]
        writer = csv.DictWriter(out, fieldnames=keys, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for r in records:
            writer.writerow(r)
    else:
        for r in records:
            body = ", ".join(f"{k}={v}" for k, v in r.items() if not isinstance(v, dict))
            out.write(body + "\n")


def _config(args: argparse.Namespace, oracle: Oracle | None = None) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "format"}
    if oracle is not None:
        cfg["resolved_oracle"] = oracle.label
    return cfg


def _aggregate(command: str, records: list[dict], cfg: dict, keys: Sequence[str]) -> dict:
    agg: dict = {"record": "aggregate", "algo": command, "trials": len(records)}
    for key in keys:
        vals = [r[key] for r in records if isinstance(r.get(key), (int, float)) and not isinstance(r.get(key), bool)]
        if vals:
            agg[f"mean_{key}"] = sum(vals) / len(vals)
    flags = [r["within_bound"] for r in records if "within_bound" in r]
    if flags:
        agg["within_bound_frequency"] = sum(flags) / len(flags)
    agg["config"] = cfg
    return agg


def _search_like(args, oracle: Oracle) -> tuple[list[dict], bool]:
    records, missing = [], False
    N = oracle.N
    A = amp.walsh_hadamard(oracle.n)
    for seed in trial_seeds(args):
        F = oracle.clone()
        rng = np.random.default_rng(seed)
        if args.command == "search":
            res = amp.search_unknown(A, F, rng, args.budget)
        else:
            a = args.a if args.a is not None else oracle.t / N
            res = amp.search_known(A, F, a, rng, args.budget)
        missing |= not res.found
        records.append({
            "algo": args.command, "N": N, "t": oracle.t, "seed": seed,
            "solution": res.solution, "found": res.found, "queries": res.queries,
            "rounds": res.rounds, "bound": math.sqrt(N / oracle.t) if oracle.t else None,
        })
    return records, missing


def _run_command(args: argparse.Namespace) -> tuple[list[dict], int]:
    cmd = args.command
    if cmd == "verify-grid":
        kwargs = {"seed": args.seed}
        if args.trials is not None:
            kwargs["trials"] = args.trials
        rows = list(verify.SUITES[args.suite](**kwargs))
        cfg = _config(args)
        for r in rows:
            r["config"] = cfg
        return rows, EXIT_OK

    if cmd == "heuristic":
        seeds = [args.seed_base if args.seed_base is not None else args.seed]
        if seeds[0] is None:
            raise UsageError("stochastic commands need --seed or --seed-base")
        fam = load_family(args.family or str(verify.example_family_path()))
        rng = np.random.default_rng(seeds[0])
        kappa = args.kappa if args.kappa is not None else heuristics.calibrate_kappa(rng)
        report = heuristics.heuristic_benchmark(fam, args.trials, rng, kappa)
        records = [
            {"algo": cmd, "member": m.member, "h": m.h, "t": m.t, "trials": m.trials,
             "mean_queries": m.mean_queries, "efficient": m.efficient, "seed": seeds[0], "config": _config(args)}
            for m in report.members
        ]
        records.append({
            "record": "aggregate", "algo": cmd, "weighted_mean_queries": report.weighted_mean_queries,
            "cauchy_schwarz": report.cauchy_schwarz, "kappa": kappa, "bound": report.bound,
            "within_bound": report.within_bound, "mean_h_fraction": report.mean_h_fraction,
            "mean_t_fraction": report.mean_t_fraction, "excluded": report.excluded,
            "config": _config(args),
        })
        return records, EXIT_OK

    if cmd == "estimate" and args.a is not None:
        oracle = make_subset_oracle(1, [1], label=f"rotation(a={args.a})")
        A = amp.two_level_rotation(2, 0, 1, args.a)
    else:
        oracle = resolve_oracle(args)
        A = amp.walsh_hadamard(oracle.n)
    cfg = _config(args, oracle)
    N, t = oracle.N, oracle.t
    status = EXIT_OK

    if cmd in ("search", "search-known"):
        records, missing = _search_like(args, oracle)
        status = EXIT_NOT_FOUND if missing else EXIT_OK
        keys = ["queries", "rounds"]
    elif cmd == "amplify":
        a = project(A.initial_state(), oracle).a
        m = args.m if args.m is not None else (amp.optimal_iterations(a) if a > 0 else 0)
        records = []
        for seed in trial_seeds(args):
            F = oracle.clone()
            state = amp.amplify(A, F, amp.AmplificationSchedule(m))
            p = project(state, F).a
            x, _ = sample(state, 0, np.random.default_rng(seed))
            records.append({"algo": cmd, "N": N, "t": t, "m": m, "seed": seed,
                            "success_probability": p, "outcome": x, "good": oracle.predicate(x),
                            "queries": F.queries})
        keys = ["success_probability"]
    elif cmd == "derandomize":
        if not 0 < t:
            raise UsageError("derandomization needs at least one solution")
        fn = amp.derandomize_augmented if args.method == "augmented" else amp.derandomize_phase
        records = []
        for seed in trial_seeds(args):
            F = oracle.clone()
            run = fn(A, F, t / N, np.random.default_rng(seed))
            records.append({"algo": f"derandomize-{args.method}", "N": N, "t": t, "seed": seed,
                            "solution": run.solution, "good": oracle.predicate(run.solution),
                            "good_mass": run.good_mass, "iterations": run.iterations,
                            "queries": run.queries, "phi": run.phi, "varphi": run.varphi})
        keys = ["queries"]
    elif cmd in ("count", "estimate"):
        records = []
        truth = project(A.initial_state(), oracle).a
        for seed in trial_seeds(args):
            F = oracle.clone()
            rng = np.random.default_rng(seed)
            if cmd == "count":
                est = counting.count(F, args.P, rng, measure_step3=not args.coherent)
                bound = counting.count_bound(t, N, args.P)
                err = abs(t - est.t_tilde)
                rec = {"algo": cmd, "N": N, "t": t, "P": args.P, "seed": seed,
                       "f_tilde": est.f_tilde, "t_tilde": est.t_tilde}
            else:
                est = counting.estimate_amplitude(A, F, args.P, rng)
                bound = counting.estimate_bound(truth, args.P)
                err = abs(truth - est.a_tilde)
                rec = {"algo": cmd, "N": N, "a": truth, "P": args.P, "seed": seed,
                       "f_tilde": est.f_tilde, "a_tilde": est.a_tilde}
            rec.update({"queries": est.queries_used, "bound": bound, "within_bound": err < bound,
                        "success_guarantee": counting.EIGHT_OVER_PI_SQ})
            records.append(rec)
        keys = ["t_tilde", "a_tilde", "queries"]
    elif cmd == "count-rel":
        records = []
        for seed in trial_seeds(args):
            F = oracle.clone()
            est = counting.count_rel(F, args.c, np.random.default_rng(seed), args.k)
            bound = t / args.c
            records.append({"algo": cmd, "N": N, "t": t, "c": args.c, "seed": seed,
                            "f_tilde": est.f_tilde, "t_tilde": est.t_tilde, "P": est.P,
                            "loop_P": est.loop_P, "converged": est.converged,
                            "queries": est.queries_used, "bound": bound,
                            "within_bound": abs(t - est.t_tilde) < bound})
        keys = ["t_tilde", "queries"]
    elif cmd == "count-exact":
        records = []
        for seed in trial_seeds(args):
            F = oracle.clone()
            res = counting.count_exact(F, np.random.default_rng(seed))
            records.append({"algo": cmd, "N": N, "t": t, "seed": seed, "t_tilde": res.t_tilde,
                            "P": res.stage2_P, "stage1_P": res.stage1_P,
                            "queries": res.queries_used, "bound": 0.5,
                            "within_bound": res.t_tilde == t})
        keys = ["queries"]
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown command {cmd}")

    for r in records:
        r["config"] = cfg
    records.append(_aggregate(cmd, records, cfg, keys))
    return records, status


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    buf = io.StringIO()
    try:
        records, status = _run_command(args)
        emit(records, args.format, buf)
    except CapacityError as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ContractError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(buf.getvalue())
    if args.command == "verify-grid":
        failed = sum(1 for r in records if not r.get("ok", True))
        print(f"{args.suite}: {len(records) - failed}/{len(records)} grid points ok", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
