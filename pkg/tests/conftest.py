"""Shared brute-force oracles and the acceptance summary hook."""

import math

import numpy as np
import pytest

ACCEPTANCE_LINES: list[str] = []

H2 = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def hadamard_matrix(n):
    """Walsh-Hadamard by repeated Kronecker products."""
    out = np.ones((1, 1), dtype=complex)
    for _ in range(n):
        out = np.kron(out, H2)
    return out


def dense_q(A, mask, phi=-1.0, varphi=-1.0):
    """-A S_0^phi A^dagger S_chi^varphi as an explicit matrix."""
    d = A.shape[0]
    s_chi = np.diag(np.where(mask, varphi, 1.0).astype(complex))
    s_0 = np.eye(d, dtype=complex)
    s_0[0, 0] = phi
    return -A @ s_0 @ A.conj().T @ s_chi


def algorithm_matrix(alg):
    """Column j is alg.forward(e_j)."""
    return np.column_stack([alg.forward(np.eye(alg.dim, dtype=complex)[:, j]) for j in range(alg.dim)])


def direct_dft(P):
    k = np.arange(P)
    return np.array(
        [[np.exp(2j * np.pi * kk * ll / P) for kk in k] for ll in k], dtype=complex
    ) / math.sqrt(P)


def count_distribution_closed_form(N, t, P):
    """Fourier-register distribution of Count built from sin/cos of (2m+1) theta.

    Column x of the post-C_F state is sin((2m+1) theta) / sqrt(tP) for good x
    and cos((2m+1) theta) / sqrt((N-t)P) for bad x; summing |F_P column|^2
    over x gives the marginal.
    """
    theta = math.asin(math.sqrt(t / N))
    m = np.arange(P)
    F = direct_dft(P)
    s = np.sin((2 * m + 1) * theta)
    c = np.cos((2 * m + 1) * theta)
    return (np.abs(F @ s) ** 2 + np.abs(F @ c) ** 2) / P


def random_state(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_phase(rng):
    return complex(np.exp(1j * rng.uniform(0, 2 * np.pi)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
