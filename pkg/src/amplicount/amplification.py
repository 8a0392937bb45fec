"""Amplitude amplification: the Q operator, iteration schedules, search drivers
and the two exact-success derandomizations."""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import kernels
from .errors import BoundaryError, ContractError, InternalConsistencyError
from .oracles import Oracle
from .statevec import (
    StateVector,
    basis,
    check_phase,
    draw,
    phase_flip_good,
    phase_flip_zero,
    project,
)

_INT_TOL = 1e-9


# -- primitive steps --------------------------------------------------------
# Each step acts along axis 0 of a (d, k) complex array and returns a new array.


@dataclass(frozen=True)
class WalshHadamard:
    n: int

    def apply(self, x: np.ndarray) -> np.ndarray:
        d, k = x.shape
        out = x.copy()
        h = 1
        scale = 1.0 / math.sqrt(2.0)
        while h < d:
            v = out.reshape(d // (2 * h), 2, h, k)
            a = v[:, 0].copy()
            b = v[:, 1]
            v[:, 0] = (a + b) * scale
            v[:, 1] = (a - b) * scale
            h *= 2
        return out

    def adjoint(self) -> WalshHadamard:
        return self


@dataclass(frozen=True)
class ZeroPhase:
    phi: complex

    def apply(self, x: np.ndarray) -> np.ndarray:
        out = x.copy()
        out[0] *= self.phi
        return out

    def adjoint(self) -> ZeroPhase:
        return ZeroPhase(complex(self.phi).conjugate())


@dataclass(frozen=True, eq=False)
class OraclePhase:
    oracle: Oracle
    phi: complex

    def apply(self, x: np.ndarray) -> np.ndarray:
        self.oracle.charge(1)
        out = x.copy()
        out[self.oracle.mask] *= self.phi
        return out

    def adjoint(self) -> OraclePhase:
        return OraclePhase(self.oracle, complex(self.phi).conjugate())


@dataclass(frozen=True, eq=False)
class TwoLevel:
    """2x2 unitary acting on the amplitude pair (i, j)."""

    i: int
    j: int
    matrix: np.ndarray

    def apply(self, x: np.ndarray) -> np.ndarray:
        out = x.copy()
        (u00, u01), (u10, u11) = self.matrix
        xi, xj = x[self.i], x[self.j]
        out[self.i] = u00 * xi + u01 * xj
        out[self.j] = u10 * xi + u11 * xj
        return out

    def adjoint(self) -> TwoLevel:
        return TwoLevel(self.i, self.j, self.matrix.conj().T)


@dataclass(frozen=True, eq=False)
class OnFactor:
    """Embed a step acting on the middle factor of ``outer x d x inner``."""

    step: object
    outer: int
    d: int
    inner: int

    def apply(self, x: np.ndarray) -> np.ndarray:
        k = x.shape[1]
        y = x.reshape(self.outer, self.d, self.inner, k).transpose(1, 0, 2, 3)
        y = self.step.apply(y.reshape(self.d, -1))
        y = y.reshape(self.d, self.outer, self.inner, k).transpose(1, 0, 2, 3)
        return np.ascontiguousarray(y).reshape(-1, k)

    def adjoint(self) -> OnFactor:
        return OnFactor(self.step.adjoint(), self.outer, self.d, self.inner)


@dataclass(frozen=True, eq=False)
class PreparedAlgorithm:
    """Measurement-free unitary on one register, as a sequence of primitive steps."""

    dim: int
    steps: tuple

    def forward(self, vec: np.ndarray) -> np.ndarray:
        x = np.asarray(vec, dtype=np.complex128).reshape(self.dim, -1)
        for step in self.steps:
            x = step.apply(x)
        return x.reshape(np.shape(vec))

    def inverse(self, vec: np.ndarray) -> np.ndarray:
        x = np.asarray(vec, dtype=np.complex128).reshape(self.dim, -1)
        for step in reversed(self.steps):
            x = step.adjoint().apply(x)
        return x.reshape(np.shape(vec))

    def adjoint(self) -> PreparedAlgorithm:
        return PreparedAlgorithm(self.dim, tuple(s.adjoint() for s in reversed(self.steps)))

    @functools.cached_property
    def psi(self) -> np.ndarray:
        """A|0>, read-only."""
        out = self.forward(basis(self.dim).amplitudes.copy())
        out.flags.writeable = False
        return out

    def initial_state(self) -> StateVector:
        return StateVector((self.dim,), self.psi)


@functools.lru_cache(maxsize=32)
def walsh_hadamard(n: int) -> PreparedAlgorithm:
    return PreparedAlgorithm(1 << n, (WalshHadamard(n),))


def rotation_matrix(a: float) -> np.ndarray:
    """Real rotation sending |0> to sqrt(1-a)|0> + sqrt(a)|1>."""
    if not 0.0 <= a <= 1.0:
        raise ContractError(f"rotation probability must lie in [0, 1], got {a}")
    c, s = math.sqrt(1.0 - a), math.sqrt(a)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def two_level_rotation(dim: int, i: int, j: int, a: float) -> PreparedAlgorithm:
    """Algorithm mapping |i> to sqrt(1-a)|i> + sqrt(a)|j>."""
    if not (0 <= i < dim and 0 <= j < dim and i != j):
        raise ContractError(f"invalid amplitude pair ({i}, {j}) for dimension {dim}")
    return PreparedAlgorithm(dim, (TwoLevel(i, j, rotation_matrix(a)),))


def compose(*algs: PreparedAlgorithm) -> PreparedAlgorithm:
    """Apply ``algs`` left to right."""
    dims = {A.dim for A in algs}
    if len(dims) != 1:
        raise ContractError(f"cannot compose algorithms of dimensions {sorted(dims)}")
    return PreparedAlgorithm(dims.pop(), tuple(s for A in algs for s in A.steps))


def tensor(A: PreparedAlgorithm, B: PreparedAlgorithm) -> PreparedAlgorithm:
    """A on the major factor, B adjoined as the minor factor."""
    steps = tuple(OnFactor(s, 1, A.dim, B.dim) for s in A.steps)
    steps += tuple(OnFactor(s, A.dim, B.dim, 1) for s in B.steps)
    return PreparedAlgorithm(A.dim * B.dim, steps)


# -- Q operator and schedules -----------------------------------------------


@dataclass(frozen=True)
class AmplificationSchedule:
    m: int
    phi: complex = -1.0
    varphi: complex = -1.0
    rationale: Literal["known_a", "unknown_a_step", "derandomize_final"] = "known_a"

    def __post_init__(self) -> None:
        if self.m < 0:
            raise ContractError(f"iteration count must be >= 0, got {self.m}")
        object.__setattr__(self, "phi", check_phase(self.phi, "phi"))
        object.__setattr__(self, "varphi", check_phase(self.varphi, "varphi"))


def _check_dims(A: PreparedAlgorithm, oracle: Oracle, state: StateVector | None = None) -> None:
    if A.dim != oracle.N:
        raise ContractError(f"algorithm dimension {A.dim} does not match oracle domain {oracle.N}")
    if state is not None and state.dims != (A.dim,):
        raise ContractError(f"state dims {state.dims} do not match algorithm dimension {A.dim}")


def apply_q(
    state: StateVector,
    A: PreparedAlgorithm,
    oracle: Oracle,
    phi: complex = -1.0,
    varphi: complex = -1.0,
) -> StateVector:
    """One application of -A S_0^phi A^-1 S_chi^varphi, gate by gate."""
    phi, varphi = check_phase(phi, "phi"), check_phase(varphi, "varphi")
    _check_dims(A, oracle, state)
    s = phase_flip_good(state, oracle, varphi)
    s = s.with_amplitudes(A.inverse(s.amplitudes))
    s = phase_flip_zero(s, phi)
    return s.with_amplitudes(-A.forward(s.amplitudes))


def apply_q_fast(
    state: StateVector,
    A: PreparedAlgorithm,
    oracle: Oracle,
    phi: complex = -1.0,
    varphi: complex = -1.0,
    m: int = 1,
) -> StateVector:
    """``m`` applications of Q through the compiled reflection kernel."""
    phi, varphi = check_phase(phi, "phi"), check_phase(varphi, "varphi")
    _check_dims(A, oracle, state)
    v = state.amplitudes.copy()
    kernels.q_iterate(v, A.psi, oracle.mask_u8, phi, varphi, m)
    oracle.charge(m)
    return state.with_amplitudes(v)


def closed_form(a: float, j: int) -> tuple[float, float]:
    """Coefficients (k_j, l_j) with Q^j A|0> = k_j |Psi_good> + l_j |Psi_bad>.

    The two components are the unnormalized good and bad projections of A|0>.
    """
    if j < 0:
        raise ContractError(f"iteration count must be >= 0, got {j}")
    if not 0.0 <= a <= 1.0:
        raise ContractError(f"probability must lie in [0, 1], got {a}")
    if a == 0.0 or a == 1.0:
        raise BoundaryError(f"closed form undefined at a = {a}")
    theta = math.asin(math.sqrt(a))
    angle = (2 * j + 1) * theta
    return math.sin(angle) / math.sqrt(a), math.cos(angle) / math.sqrt(1.0 - a)


def optimal_iterations(a: float) -> int:
    if not 0.0 <= a <= 1.0:
        raise ContractError(f"probability must lie in [0, 1], got {a}")
    if a == 0.0:
        raise BoundaryError("no iteration count reaches a good state when a = 0")
    theta = math.asin(math.sqrt(a))
    return math.floor(math.pi / (4.0 * theta))


def amplify(
    A: PreparedAlgorithm,
    oracle: Oracle,
    schedule: AmplificationSchedule,
    method: Literal["kernel", "circuit"] = "kernel",
) -> StateVector:
    """Q^m A|0>; charges exactly ``schedule.m`` oracle queries."""
    _check_dims(A, oracle)
    state = A.initial_state()
    if method == "circuit":
        for _ in range(schedule.m):
            state = apply_q(state, A, oracle, schedule.phi, schedule.varphi)
        return state
    return apply_q_fast(state, A, oracle, schedule.phi, schedule.varphi, schedule.m)


def success_probability(state: StateVector, oracle: Oracle) -> float:
    return project(state, oracle).a


# -- search drivers ---------------------------------------------------------


@dataclass(frozen=True)
class SearchResult:
    """``solution`` is None when the query budget ran out."""

    solution: int | None
    queries: int
    rounds: int

    @property
    def found(self) -> bool:
        return self.solution is not None


def search_known(
    A: PreparedAlgorithm,
    oracle: Oracle,
    a: float,
    rng: np.random.Generator,
    budget: int | None = None,
    debug: bool = False,
) -> SearchResult:
    """Repeat Q^m A|0> with m = floor(pi / 4 theta) until a good outcome is seen."""
    _check_dims(A, oracle)
    if debug:
        true_a = project(A.initial_state(), oracle).a
        if abs(true_a - a) > 1e-6:
            warnings.warn(f"supplied a = {a} but the oracle gives a = {true_a}", stacklevel=2)
    m = optimal_iterations(a)
    schedule = AmplificationSchedule(m)
    start = oracle.queries
    rounds = 0
    while budget is None or oracle.queries - start + m + 1 <= budget:
        rounds += 1
        state = amplify(A, oracle, schedule)
        x = draw(np.abs(state.amplitudes) ** 2, rng)
        if oracle.evaluate(x):
            return SearchResult(x, oracle.queries - start, rounds)
    return SearchResult(None, oracle.queries - start, rounds)


def search_unknown(
    A: PreparedAlgorithm,
    oracle: Oracle,
    rng: np.random.Generator,
    budget: int | None = None,
    growth: float = 6 / 5,
) -> SearchResult:
    """Randomized-iteration search that never looks at a.

    Each round draws m uniformly from [0, ceil(M)), measures Q^m A|0> and
    checks the outcome classically; M grows by ``growth`` up to ceil(sqrt(dim)).
    """
    _check_dims(A, oracle)
    cap = math.ceil(math.sqrt(A.dim))
    M = 1.0
    start = oracle.queries
    rounds = 0
    while True:
        m = int(rng.integers(0, math.ceil(M)))
        if budget is not None and oracle.queries - start + m + 1 > budget:
            return SearchResult(None, oracle.queries - start, rounds)
        rounds += 1
        state = amplify(A, oracle, AmplificationSchedule(m, rationale="unknown_a_step"))
        x = draw(np.abs(state.amplitudes) ** 2, rng)
        if oracle.evaluate(x):
            return SearchResult(x, oracle.queries - start, rounds)
        M = min(growth * M, cap)


def grover_search(
    oracle: Oracle, rng: np.random.Generator, budget: int | None = None
) -> SearchResult:
    return search_unknown(walsh_hadamard(oracle.n), oracle, rng, budget)


# -- derandomization --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DerandomizedRun:
    solution: int
    state: StateVector
    good_mass: float
    iterations: int
    queries: int
    phi: complex = -1.0
    varphi: complex = -1.0


def _fractional_iterations(a: float) -> float:
    if not 0.0 < a <= 1.0:
        raise ContractError(f"derandomization needs 0 < a <= 1, got {a}")
    return math.pi / (4.0 * math.asin(math.sqrt(a))) - 0.5


def derandomize_augmented(
    A: PreparedAlgorithm, oracle: Oracle, a: float, rng: np.random.Generator
) -> DerandomizedRun:
    """Exact search by shrinking the angle with an adjoined rotated qubit.

    The good set becomes (good for A) and (ancilla = 1); with
    theta_0 = pi / (4 m_0 + 2) the m_0-th iterate is entirely good.
    """
    _check_dims(A, oracle)
    m_frac = _fractional_iterations(a)
    m0 = math.ceil(m_frac - _INT_TOL)
    theta0 = math.pi / (4 * m0 + 2)
    a0 = math.sin(theta0) ** 2
    if a0 > a * (1.0 + 1e-12):
        raise InternalConsistencyError(f"reduced probability {a0} exceeds a = {a}")
    augmented = tensor(A, two_level_rotation(2, 0, 1, min(a0 / a, 1.0)))
    lifted = oracle.with_ancilla()
    start = oracle.queries
    state = amplify(augmented, lifted, AmplificationSchedule(m0, rationale="derandomize_final"))
    mass = project(state, lifted).a
    x = draw(np.abs(state.amplitudes) ** 2, rng)
    return DerandomizedRun(x >> 1, state, mass, m0, oracle.queries - start)


def final_phases(a: float, m0: int) -> tuple[complex, complex]:
    """Phases (phi, varphi) for a last iteration that removes the bad amplitude.

    Solves l^2 = 2a(1 - Re phi) with Im phi >= 0, then makes
    varphi (1 - phi) a k - ((1 - phi) a + phi) l vanish.
    """
    k, l = closed_form(a, m0)
    re = 1.0 - l * l / (2.0 * a)
    if abs(re) > 1.0 + 1e-12:
        raise InternalConsistencyError(f"Re(phi) = {re} is not a valid cosine")
    re = max(-1.0, min(1.0, re))
    phi = complex(re, math.sqrt(1.0 - re * re))
    varphi = ((1.0 - phi) * a + phi) * l / ((1.0 - phi) * a * k)
    if abs(abs(varphi) - 1.0) > 1e-9:
        raise InternalConsistencyError(f"|varphi| = {abs(varphi)} is not 1")
    return phi, varphi / abs(varphi)


def derandomize_phase(
    A: PreparedAlgorithm, oracle: Oracle, a: float, rng: np.random.Generator
) -> DerandomizedRun:
    """Exact search by slowing down the last iteration with complex phases."""
    _check_dims(A, oracle)
    m_frac = _fractional_iterations(a)
    m0 = math.floor(m_frac + _INT_TOL)
    start = oracle.queries
    state = amplify(A, oracle, AmplificationSchedule(m0))
    phi = varphi = complex(-1.0)
    iterations = m0
    if m_frac - m0 > _INT_TOL:
        phi, varphi = final_phases(a, m0)
        state = apply_q_fast(state, A, oracle, phi, varphi)
        iterations += 1
    mass = project(state, oracle).a
    x = draw(np.abs(state.amplitudes) ** 2, rng)
    return DerandomizedRun(x, state, mass, iterations, oracle.queries - start, phi, varphi)
