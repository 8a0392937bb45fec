"""Dense state vectors over a data register and an optional counting register.

Amplitudes live in one flat complex array with row-major joint indexing.
With two registers the counting register is the major (first) one and the
data register is always the last one.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import CapacityError, ContractError, InternalConsistencyError

if TYPE_CHECKING:
    from .oracles import Oracle

NORM_TOL = 1e-9
PHASE_TOL = 1e-12
DEFAULT_MAX_QUBITS = 14
JOINT_CAP = 2**20


def max_qubits() -> int:
    """Data-register qubit cap, overridable through ``AMPLICOUNT_MAX_QUBITS``."""
    raw = os.environ.get("AMPLICOUNT_MAX_QUBITS")
    if raw is None or raw == "":
        return DEFAULT_MAX_QUBITS
    try:
        return int(raw)
    except ValueError as exc:
        raise ContractError(f"AMPLICOUNT_MAX_QUBITS must be an integer, got {raw!r}") from exc


def check_qubits(n: int) -> None:
    if n < 0:
        raise ContractError(f"qubit count must be non-negative, got {n}")
    cap = max_qubits()
    if n > cap:
        raise CapacityError(f"{n} qubits exceeds the cap of {cap}")


def check_joint(size: int) -> None:
    if size > JOINT_CAP:
        raise CapacityError(f"joint dimension {size} exceeds the cap of {JOINT_CAP}")


def check_phase(phi: complex, name: str = "phi") -> complex:
    phi = complex(phi)
    if abs(abs(phi) - 1.0) > PHASE_TOL:
        raise ContractError(f"{name} must have unit modulus, got |{name}| = {abs(phi)!r}")
    return phi


@dataclass(frozen=True, eq=False)
class StateVector:
    """Pure state over one or two registers.

    ``dims`` lists the register dimensions, counting register first when
    present. The amplitude array is never modified after construction.
    """

    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        if not 1 <= len(dims) <= 2 or any(d < 1 for d in dims):
            raise ContractError(f"dims must hold one or two positive sizes, got {dims}")
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != math.prod(dims):
            raise ContractError(f"{amps.size} amplitudes do not match dims {dims}")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise InternalConsistencyError(f"state norm drifted to {norm!r}")
        amps.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def data_dim(self) -> int:
        return self.dims[-1]

    def as_matrix(self) -> np.ndarray:
        """Read-only (counting, data) view; a single register gives one row."""
        if len(self.dims) == 1:
            return self.amplitudes.reshape(1, -1)
        return self.amplitudes.reshape(self.dims)

    def with_amplitudes(self, amps: np.ndarray) -> StateVector:
        return StateVector(self.dims, amps)

    def to_json(self) -> str:
        pairs = [[float(z.real), float(z.imag)] for z in self.amplitudes]
        return json.dumps({"dims": list(self.dims), "amplitudes": pairs})

    @classmethod
    def from_json(cls, text: str) -> StateVector:
        obj = json.loads(text)
        amps = np.array([complex(re, im) for re, im in obj["amplitudes"]], dtype=np.complex128)
        return cls(tuple(obj["dims"]), amps)


@dataclass(frozen=True, eq=False)
class AmplitudeDecomposition:
    """Split of a state into its good and bad parts with ``a = sin^2(theta)``."""

    good_component: np.ndarray
    bad_component: np.ndarray
    a: float
    theta: float

    @property
    def b(self) -> float:
        return float(np.vdot(self.bad_component, self.bad_component).real)


@dataclass(frozen=True, eq=False)
class Distribution:
    register_index: int
    probabilities: np.ndarray


def basis(dim: int, index: int = 0) -> StateVector:
    amps = np.zeros(dim, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector((dim,), amps)


def uniform(n: int) -> StateVector:
    """Uniform superposition over ``2**n`` basis states."""
    check_qubits(n)
    dim = 1 << n
    return StateVector((dim,), np.full(dim, 1.0 / math.sqrt(dim), dtype=np.complex128))


def joint(counting: StateVector, data: StateVector) -> StateVector:
    """Tensor product with the counting register major."""
    if len(counting.dims) != 1 or len(data.dims) != 1:
        raise ContractError("joint() takes two single-register states")
    check_joint(counting.data_dim * data.data_dim)
    amps = np.outer(counting.amplitudes, data.amplitudes)
    return StateVector((counting.data_dim, data.data_dim), amps)


def _check_register(state: StateVector, register_index: int) -> int:
    k = len(state.dims)
    if not -k <= register_index < k:
        raise ContractError(f"register index {register_index} invalid for dims {state.dims}")
    return register_index % k


def _check_oracle(state: StateVector, oracle: Oracle) -> None:
    if oracle.N != state.data_dim:
        raise ContractError(
            f"oracle domain {oracle.N} does not match data register dimension {state.data_dim}"
        )


def phase_flip_good(state: StateVector, oracle: Oracle, phi: complex) -> StateVector:
    """Multiply every good amplitude by ``phi``; costs one oracle query."""
    phi = check_phase(phi)
    _check_oracle(state, oracle)
    oracle.charge(1)
    mat = state.as_matrix().copy()
    mat[:, oracle.mask] *= phi
    return state.with_amplitudes(mat)


def phase_flip_zero(state: StateVector, phi: complex) -> StateVector:
    """Multiply the amplitudes with data register 0 by ``phi``."""
    phi = check_phase(phi)
    mat = state.as_matrix().copy()
    mat[:, 0] *= phi
    return state.with_amplitudes(mat)


def dft_matrix(P: int, inverse: bool = False) -> np.ndarray:
    """Direct dimension-P Fourier matrix ``F[l, k] = exp(2 pi i k l / P) / sqrt(P)``."""
    if P < 1:
        raise ContractError(f"Fourier dimension must be >= 1, got {P}")
    k = np.arange(P)
    sign = -1.0 if inverse else 1.0
    return np.exp(sign * 2j * np.pi * np.outer(k, k) / P) / math.sqrt(P)


def _fourier_axis0(mat: np.ndarray, inverse: bool) -> np.ndarray:
    # |k> -> sum_l e^{+2 pi i k l / P}|l> / sqrt(P) is numpy's orthonormal inverse FFT
    if inverse:
        return np.fft.fft(mat, axis=0, norm="ortho")
    return np.fft.ifft(mat, axis=0, norm="ortho")


def dft(state: StateVector, register_index: int, inverse: bool = False) -> StateVector:
    """Apply the Fourier transform (or its adjoint) to one register."""
    reg = _check_register(state, register_index)
    if len(state.dims) == 1:
        out = _fourier_axis0(state.amplitudes, inverse)
    else:
        mat = state.as_matrix()
        out = _fourier_axis0(mat if reg == 0 else mat.T, inverse)
        if reg == 1:
            out = out.T
    return state.with_amplitudes(out)


def project(state: StateVector, oracle: Oracle) -> AmplitudeDecomposition:
    """Exact good/bad split. Diagnostic access: no query is charged."""
    _check_oracle(state, oracle)
    mat = state.as_matrix()
    good = np.zeros_like(mat)
    good[:, oracle.mask] = mat[:, oracle.mask]
    bad = mat - good
    good, bad = good.reshape(-1), bad.reshape(-1)
    a = float(np.vdot(good, good).real)
    a = min(max(a, 0.0), 1.0)
    return AmplitudeDecomposition(good, bad, a, math.asin(math.sqrt(a)))


def measure_distribution(state: StateVector, register_index: int = -1) -> Distribution:
    """Born-rule marginal of one register."""
    reg = _check_register(state, register_index)
    probs = np.abs(state.as_matrix()) ** 2
    if len(state.dims) == 1:
        marginal = probs.reshape(-1)
    else:
        marginal = probs.sum(axis=1 - reg)
    return Distribution(reg, marginal)


def draw(probabilities: np.ndarray, rng: np.random.Generator) -> int:
    """Inverse-CDF draw; zero-probability outcomes are never returned."""
    cdf = np.cumsum(probabilities)
    u = rng.random() * cdf[-1]
    idx = int(np.searchsorted(cdf, u, side="right"))
    return min(idx, len(cdf) - 1)


def sample(
    state: StateVector, register_index: int, rng: np.random.Generator
) -> tuple[int, StateVector]:
    """Measure one register; returns the outcome and the collapsed state."""
    dist = measure_distribution(state, register_index)
    outcome = draw(dist.probabilities, rng)
    if len(state.dims) == 1:
        amps = np.zeros_like(state.amplitudes)
        amps[outcome] = state.amplitudes[outcome] / abs(state.amplitudes[outcome])
        return outcome, state.with_amplitudes(amps)
    mat = state.as_matrix()
    collapsed = np.zeros_like(mat)
    if dist.register_index == 0:
        collapsed[outcome, :] = mat[outcome, :]
    else:
        collapsed[:, outcome] = mat[:, outcome]
    collapsed /= math.sqrt(dist.probabilities[outcome])
    return outcome, state.with_amplitudes(collapsed)
