"""Approximate counting and amplitude estimation.

A counting register of dimension P in uniform superposition controls powers
of the amplification operator on the data register; a Fourier transform of
the counting register then reveals the rotation frequency f = P theta / pi,
from which t (or a) is read off as N sin^2(f pi / P).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import kernels
from .amplification import PreparedAlgorithm, walsh_hadamard
from .errors import ContractError
from .oracles import Oracle
from .statevec import (
    JOINT_CAP,
    Distribution,
    StateVector,
    check_joint,
    dft,
    draw,
    measure_distribution,
    project,
    sample,
)

EIGHT_OVER_PI_SQ = 8.0 / math.pi**2
ERROR_TERM_LIMIT = 2.0 / 5.0


@dataclass(frozen=True)
class CountEstimate:
    """One folded Fourier outcome and the estimate it encodes.

    ``t_tilde`` is N sin^2(f_tilde pi / P); in estimation mode N is the
    dimension of the prepared register and ``a_tilde`` is the quantity of
    interest. ``converged`` is False when a CountRel loop hit its P cap.
    """

    f_tilde: int
    P: int
    N: int
    queries_used: int
    folded: bool
    mode: Literal["count", "estimate"] = "count"
    converged: bool = True
    loop_P: int | None = None

    @property
    def a_tilde(self) -> float:
        return math.sin(self.f_tilde * math.pi / self.P) ** 2

    @property
    def t_tilde(self) -> float:
        return self.N * self.a_tilde


@dataclass(frozen=True, eq=False)
class OutcomeAnalysis:
    distribution: Distribution
    error_term_mass: float
    success_probability: float
    f: float
    peaks: tuple[int, ...]
    case: Literal["zero", "integer", "low", "middle", "high"]


def fold(f_tilde: int, P: int) -> int:
    return P - f_tilde if f_tilde > P / 2 else f_tilde


def count_bound(t: float, N: int, P: int) -> float:
    """Additive error allowed for a single Count run with parameter P."""
    return 2.0 * math.pi / P * math.sqrt(t * N) + math.pi**2 / P**2 * N


def estimate_bound(a: float, P: int) -> float:
    return 2.0 * math.pi / P * math.sqrt(a) + math.pi**2 / P**2


def repetitions_for(N: int) -> int:
    """Majority-vote size max(5, ceil(3 log2 log2 N)), forced odd."""
    k = 5
    if N > 2:
        k = max(5, math.ceil(3.0 * math.log2(math.log2(N))))
    return k if k % 2 else k + 1


def _check_P(P: int) -> None:
    if not isinstance(P, (int, np.integer)) or P < 4:
        raise ContractError(f"counting needs an integer P >= 4, got {P!r}")


def controlled_powers(A: PreparedAlgorithm, oracle: Oracle, P: int) -> StateVector:
    """Uniform counting register with row m holding Q^m A|0>; charges P queries."""
    _check_P(P)
    if A.dim != oracle.N:
        raise ContractError(f"algorithm dimension {A.dim} does not match oracle domain {oracle.N}")
    check_joint(P * A.dim)
    rows = np.empty((P, A.dim), dtype=np.complex128)
    rows[0] = A.psi
    kernels.power_rows(rows, A.psi, oracle.mask_u8, -1.0 + 0j, -1.0 + 0j)
    oracle.charge(P)
    rows /= math.sqrt(P)
    return StateVector((P, A.dim), rows)


def _run(
    A: PreparedAlgorithm,
    oracle: Oracle,
    P: int,
    rng: np.random.Generator,
    measure_step3: bool,
    mode: Literal["count", "estimate"],
) -> CountEstimate:
    start = oracle.queries
    state = controlled_powers(A, oracle, P)
    if measure_step3:
        _, state = sample(state, 1, rng)
    state = dft(state, 0)
    raw = draw(measure_distribution(state, 0).probabilities, rng)
    f = fold(raw, P)
    return CountEstimate(f, P, A.dim, oracle.queries - start, f != raw, mode)


def count(
    F: Oracle, P: int, rng: np.random.Generator, measure_step3: bool = True
) -> CountEstimate:
    """One run of Count(F, P); uses exactly P queries to F.

    t > N/2 is accepted. The counting register then peaks near P/2 - f(N - t)
    rather than f(N - t), so the folded estimate still targets t.
    """
    _check_P(P)
    return _run(walsh_hadamard(F.n), F, P, rng, measure_step3, "count")


def estimate_amplitude(
    A: PreparedAlgorithm,
    oracle: Oracle,
    P: int,
    rng: np.random.Generator,
    measure_step3: bool = True,
) -> CountEstimate:
    """Count with G_F replaced by Q(A, chi, -1, -1); read ``a_tilde``."""
    _check_P(P)
    return _run(A, oracle, P, rng, measure_step3, "estimate")


def peak_outcomes(f: float, P: int) -> tuple[tuple[int, ...], str]:
    """Outcomes that carry the main Fourier peaks for frequency ``f``."""
    nearest = round(f)
    if abs(f - nearest) < 1e-9:
        if nearest == 0:
            return (0,), "zero"
        return tuple(sorted({nearest % P, (P - nearest) % P})), "integer"
    if f < 1:
        return (0, 1, P - 1), "low"
    if P % 2 == 0 and f > P / 2 - 1:
        h = P // 2
        return (h - 1, h, h + 1), "high"
    lo, hi = math.floor(f), math.floor(f + 1)
    return tuple(sorted({lo, hi, (P - lo) % P, (P - hi) % P})), "middle"


def _analyze(
    A: PreparedAlgorithm, oracle: Oracle, P: int, truth: float, scale: int, bound: float
) -> OutcomeAnalysis:
    a = project(A.initial_state(), oracle).a
    theta = math.asin(math.sqrt(a))
    f = P * theta / math.pi
    state = dft(controlled_powers(A, oracle, P), 0)
    dist = measure_distribution(state, 0)
    probs = dist.probabilities
    peaks, case = peak_outcomes(f, P)
    error_mass = float(max(0.0, 1.0 - probs[list(peaks)].sum()))
    outcomes = np.arange(P)
    folded = np.where(outcomes > P / 2, P - outcomes, outcomes)
    estimates = scale * np.sin(folded * np.pi / P) ** 2
    hits = np.abs(truth - estimates) < bound
    success = float(min(1.0, probs[hits].sum()))
    return OutcomeAnalysis(dist, error_mass, success, f, peaks, case)


def analyze_count(F: Oracle, P: int) -> OutcomeAnalysis:
    """Exact final distribution of Count(F, P) run coherently.

    ``success_probability`` is the mass on outcomes whose folded estimate
    satisfies the single-run error bound for the true t.
    """
    _check_P(P)
    t = F.t
    return _analyze(walsh_hadamard(F.n), F, P, t, F.N, count_bound(t, F.N, P))


def analyze_estimate(A: PreparedAlgorithm, oracle: Oracle, P: int) -> OutcomeAnalysis:
    _check_P(P)
    a = project(A.initial_state(), oracle).a
    return _analyze(A, oracle, P, a, 1, estimate_bound(a, P))


def count_majority(k: int, F: Oracle, P: int, rng: np.random.Generator) -> int:
    """Most frequent folded outcome of ``k`` Count runs, ties to the smaller value."""
    if k < 1 or k % 2 == 0:
        raise ContractError(f"majority size must be a positive odd integer, got {k}")
    votes = Counter(count(F, P, rng).f_tilde for _ in range(k))
    top = max(votes.values())
    return min(f for f, v in votes.items() if v == top)


def count_rel(
    F: Oracle, c: float, rng: np.random.Generator, k: int | None = None
) -> CountEstimate:
    """Estimate t to relative error about 1/c without knowing it in advance.

    Doubles P from 4 until a majority vote gives f_tilde > 1, then runs
    Count(F, ceil(c P)). With t = 0 the loop gives up once P exceeds
    8 sqrt(N) and reports a zero estimate with ``converged=False``.
    """
    if c < 1:
        raise ContractError(f"c must be >= 1, got {c}")
    k = repetitions_for(F.N) if k is None else k
    limit = 8.0 * math.sqrt(F.N)
    start = F.queries
    P = 2
    while True:
        P *= 2
        if P > limit:
            return CountEstimate(0, P // 2, F.N, F.queries - start, False, converged=False, loop_P=P // 2)
        if count_majority(k, F, P, rng) > 1:
            break
    final = count(F, max(4, math.ceil(c * P)), rng)
    return CountEstimate(
        final.f_tilde, final.P, F.N, F.queries - start, final.folded, loop_P=P
    )


@dataclass(frozen=True)
class ExactCount:
    t_tilde: int
    queries_used: int
    stage1_P: int
    stage1_estimate: float
    stage2_P: int | None


def count_exact(F: Oracle, rng: np.random.Generator, repetitions: int = 5) -> ExactCount:
    """Exact t with probability at least 3/4 using Theta(sqrt(tN)) queries.

    Stage 1 takes a majority of Count(F, 4 ceil(sqrt N)) runs for a rough t1;
    stage 2 runs Count(F, ceil(20 sqrt((t1 + 1) N))) and rounds. Stage 2's P
    is clipped to the joint-dimension cap.
    """
    N = F.N
    start = F.queries
    P1 = max(4, 4 * math.ceil(math.sqrt(N)))
    f1 = count_majority(repetitions, F, P1, rng)
    t1 = N * math.sin(f1 * math.pi / P1) ** 2
    if f1 == 0:
        return ExactCount(0, F.queries - start, P1, t1, None)
    P2 = max(4, math.ceil(20.0 * math.sqrt((t1 + 1.0) * N)))
    P2 = min(P2, max(4, JOINT_CAP // N))
    est = count(F, P2, rng)
    return ExactCount(int(round(est.t_tilde)), F.queries - start, P1, t1, P2)
