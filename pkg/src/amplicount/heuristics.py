"""Heuristic-boosted search: run Search over the heuristic's seed space."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .amplification import SearchResult, grover_search
from .errors import ContractError
from .oracles import HeuristicFamily, induced_seed_oracle, make_subset_oracle


@dataclass(frozen=True)
class HeuristicSearchResult:
    """Outcome of one seed-space search.

    ``seed_queries`` counts queries to r -> F(G(F, r)); each one costs an F
    and a G evaluation. ``f_evaluations`` adds the final classical check of x.
    """

    x: int | None
    seed: int | None
    seed_queries: int
    f_evaluations: int
    g_evaluations: int

    @property
    def found(self) -> bool:
        return self.x is not None


def heuristic_search(
    fam: HeuristicFamily, member: int, rng: np.random.Generator, budget: int | None = None
) -> HeuristicSearchResult:
    G_prime = induced_seed_oracle(fam, member)
    res: SearchResult = grover_search(G_prime, rng, budget)
    if not res.found:
        return HeuristicSearchResult(None, None, res.queries, res.queries, res.queries)
    x = G_prime.lookup(res.solution)
    F = fam.members[member]
    before = F.queries
    if not F.evaluate(x):
        raise ContractError(f"seed {res.solution} passed the seed oracle but F({x}) = 0")
    extra = F.queries - before
    return HeuristicSearchResult(x, res.solution, res.queries, res.queries + extra, res.queries + 1)


@dataclass(frozen=True)
class MemberReport:
    member: int
    h: int
    t: int
    trials: int
    mean_queries: float
    efficient: bool


@dataclass(frozen=True)
class HeuristicRunReport:
    members: list[MemberReport]
    weighted_mean_queries: float
    cauchy_schwarz: float
    kappa: float
    mean_h_fraction: float
    mean_t_fraction: float
    excluded: list[int] = field(default_factory=list)

    @property
    def bound(self) -> float:
        return self.kappa * self.cauchy_schwarz

    @property
    def within_bound(self) -> bool:
        return self.weighted_mean_queries <= self.bound


def cauchy_schwarz_bound(weights, ratios) -> float:
    """sqrt(sum_F P_F |R| / h_F), the right side of the expected-time bound."""
    weights = np.asarray(weights, dtype=float)
    ratios = np.asarray(ratios, dtype=float)
    return math.sqrt(float(np.dot(weights, ratios)))


def calibrate_kappa(
    rng: np.random.Generator, n: int = 8, trials: int = 400
) -> float:
    """Largest observed mean-queries / sqrt(N/t) of plain search over t = 1, 2, 4, ..., N/2."""
    ratios = []
    t = 1
    while t <= (1 << n) // 2:
        F = make_subset_oracle(n, range(t))
        total = 0
        for _ in range(trials):
            total += grover_search(F.clone(), rng).queries
        ratios.append(total / trials / math.sqrt((1 << n) / t))
        t *= 2
    return max(ratios)


def heuristic_benchmark(
    fam: HeuristicFamily, trials: int, rng: np.random.Generator, kappa: float
) -> HeuristicRunReport:
    """Weighted mean seed-space queries against kappa * sqrt(sum P_F |R| / h_F).

    Trials are split across members in proportion to their weights (at
    least one each). Members with h_F = 0 are dropped with a warning and the
    remaining weights renormalized.
    """
    R = fam.seed_space_size
    hs = [fam.h(i) for i in range(len(fam.members))]
    keep = [i for i, h in enumerate(hs) if h > 0]
    excluded = [i for i, h in enumerate(hs) if h == 0]
    if excluded:
        warnings.warn(f"members {excluded} have no solution-producing seed; excluded", stacklevel=2)
    if not keep:
        raise ContractError("no family member has a solution-producing seed")
    w = fam.weights[keep]
    w = w / w.sum()
    reports = []
    for wi, i in zip(w, keep):
        n_i = max(1, int(round(trials * wi)))
        total = 0
        for _ in range(n_i):
            total += heuristic_search(fam, i, rng).seed_queries
        F = fam.members[i]
        reports.append(
            MemberReport(i, hs[i], F.t, n_i, total / n_i, hs[i] / R > F.t / F.N)
        )
    weighted = float(sum(wi * r.mean_queries for wi, r in zip(w, reports)))
    cs = cauchy_schwarz_bound(w, [R / r.h for r in reports])
    mean_h = float(sum(wi * r.h / R for wi, r in zip(w, reports)))
    mean_t = float(sum(wi * r.t / fam.members[r.member].N for wi, r in zip(w, reports)))
    return HeuristicRunReport(reports, weighted, cs, kappa, mean_h, mean_t, excluded)
