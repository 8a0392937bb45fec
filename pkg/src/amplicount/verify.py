"""Verification grids; each suite yields one row (dict) per grid point."""

from __future__ import annotations

import math
from collections.abc import Callable, Iterator
from importlib import resources

import numpy as np

from .amplification import (
    AmplificationSchedule,
    amplify,
    closed_form,
    derandomize_augmented,
    derandomize_phase,
    optimal_iterations,
    two_level_rotation,
    walsh_hadamard,
)
from .counting import (
    EIGHT_OVER_PI_SQ,
    ERROR_TERM_LIMIT,
    analyze_count,
    analyze_estimate,
    count_exact,
    count_rel,
)
from .heuristics import calibrate_kappa, heuristic_benchmark
from .oracles import load_family, make_subset_oracle
from .statevec import project

Row = dict[str, object]


def theorem1(**_) -> Iterator[Row]:
    for n in (2, 3, 4, 6):
        N = 1 << n
        A = walsh_hadamard(n)
        for t in range(1, N // 2 + 1):
            F = make_subset_oracle(n, range(t))
            dec = project(A.initial_state(), F)
            worst = 0.0
            for j in range(51):
                k, l = closed_form(t / N, j)
                expected = k * dec.good_component + l * dec.bad_component
                state = amplify(A, F, AmplificationSchedule(j))
                worst = max(worst, float(np.abs(state.amplitudes - expected).max()))
            yield {"N": N, "t": t, "max_j": 50, "max_abs_error": worst, "ok": worst <= 1e-9}


def theorem2(points: int = 200, **_) -> Iterator[Row]:
    F = make_subset_oracle(1, [1])
    for i in range(1, points + 1):
        a = i / points
        m = optimal_iterations(a)
        state = amplify(two_level_rotation(2, 0, 1, a), F.clone(), AmplificationSchedule(m))
        p = project(state, F).a
        bound = max(1.0 - a, a)
        yield {"a": a, "m": m, "success_probability": p, "bound": bound, "ok": p >= bound - 1e-12}


def theorem4(**_) -> Iterator[Row]:
    for n in (4, 6, 8):
        N = 1 << n
        for t in range(0, N // 2 + 1):
            F = make_subset_oracle(n, range(t))
            for P in (4, 8, 16, 32, 64):
                an = analyze_count(F, P)
                r_ok = an.case in ("zero", "integer") or an.error_term_mass < ERROR_TERM_LIMIT
                yield {
                    "N": N,
                    "t": t,
                    "P": P,
                    "f": an.f,
                    "case": an.case,
                    "success_probability": an.success_probability,
                    "error_term_mass": an.error_term_mass,
                    "queries": F.queries,
                    "ok": an.success_probability >= EIGHT_OVER_PI_SQ - 1e-9 and r_ok and F.queries == P,
                }
                F.counter.count = 0


def theorem5(**_) -> Iterator[Row]:
    F = make_subset_oracle(1, [1])
    for a in (0.1, 0.25, 0.3, 0.5):
        A = two_level_rotation(2, 0, 1, a)
        for P in (16, 32):
            an = analyze_estimate(A, F, P)
            yield {
                "a": a,
                "P": P,
                "success_probability": an.success_probability,
                "ok": an.success_probability >= EIGHT_OVER_PI_SQ - 1e-9,
            }


def derandomize(seed: int = 0, **_) -> Iterator[Row]:
    rng = np.random.default_rng(seed)
    for n in (2, 3, 4, 5):
        N = 1 << n
        A = walsh_hadamard(n)
        for t in range(1, N // 2 + 1):
            F = make_subset_oracle(n, range(t))
            aug = derandomize_augmented(A, F, t / N, rng)
            ph = derandomize_phase(A, F, t / N, rng)
            yield {
                "N": N,
                "t": t,
                "mass_augmented": aug.good_mass,
                "mass_phase": ph.good_mass,
                "iterations_augmented": aug.iterations,
                "iterations_phase": ph.iterations,
                "ok": abs(aug.good_mass - 1) <= 1e-9 and abs(ph.good_mass - 1) <= 1e-9,
            }


def corollary3(seed: int = 0, trials: int = 400, **_) -> Iterator[Row]:
    n = 8
    N = 1 << n
    loglog = math.log2(math.log2(N))
    for t in (16, 64):
        F = make_subset_oracle(n, range(t))
        for c in (2, 4):
            hits = 0
            queries = 0
            for i in range(trials):
                est = count_rel(F.clone(), c, np.random.default_rng(seed + i))
                hits += abs(t - est.t_tilde) < t * (math.pi / c) * (1 + math.pi / c)
                queries += est.queries_used
            freq = hits / trials
            mean_q = queries / trials
            ref = (c + loglog) * math.sqrt(N / t)
            yield {
                "N": N,
                "t": t,
                "c": c,
                "trials": trials,
                "success_frequency": freq,
                "mean_queries": mean_q,
                "reference_queries": ref,
                "query_ratio": mean_q / ref,
                "ok": freq >= 0.75 and 0.25 <= mean_q / ref <= 4.0,
            }


def corollary4(seed: int = 0, trials: int = 400, **_) -> Iterator[Row]:
    for n, t in ((6, 1), (6, 5), (8, 100)):
        N = 1 << n
        F = make_subset_oracle(n, range(t))
        hits = 0
        queries = 0
        for i in range(trials):
            res = count_exact(F.clone(), np.random.default_rng(seed + i))
            hits += res.t_tilde == t
            queries += res.queries_used
        freq = hits / trials
        mean_q = queries / trials
        ref = math.sqrt(t * N)
        yield {
            "N": N,
            "t": t,
            "trials": trials,
            "success_frequency": freq,
            "mean_queries": mean_q,
            "reference_queries": ref,
            "query_ratio": mean_q / ref,
            "ok": freq >= 0.75 and 0.25 <= mean_q / ref <= 4.0,
        }


def example_family_path():
    return resources.files("amplicount") / "data" / "example_family.json"


def heuristic(seed: int = 0, trials: int = 160, repetitions: int = 50, **_) -> Iterator[Row]:
    fam = load_family(str(example_family_path()))
    kappa = calibrate_kappa(np.random.default_rng(seed))
    for rep in range(repetitions):
        rep_seed = seed + 1 + rep
        report = heuristic_benchmark(fam, trials, np.random.default_rng(rep_seed), kappa)
        yield {
            "repetition": rep,
            "seed": rep_seed,
            "weighted_mean_queries": report.weighted_mean_queries,
            "cauchy_schwarz": report.cauchy_schwarz,
            "kappa": kappa,
            "bound": report.bound,
            "mean_h_fraction": report.mean_h_fraction,
            "mean_t_fraction": report.mean_t_fraction,
            "ok": report.within_bound,
        }


SUITES: dict[str, Callable[..., Iterator[Row]]] = {
    "theorem1": theorem1,
    "theorem2": theorem2,
    "theorem4": theorem4,
    "theorem5": theorem5,
    "derandomize": derandomize,
    "corollary3": corollary3,
    "corollary4": corollary4,
    "heuristic": heuristic,
}
