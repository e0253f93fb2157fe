"""Shared helpers: dense oracle states built directly from amplitudes,
independent of the symmetric-state algebra under test."""

from __future__ import annotations

import numpy as np
import pytest

from bellkit.qstate import DensityMatrix, PureState


def ghz_pure(n: int, sign: int = 1) -> PureState:
    amp = np.zeros(2**n, dtype=complex)
    amp[0] = 1 / np.sqrt(2)
    amp[-1] = sign / np.sqrt(2)
    return PureState(n, amp)


def random_pure(n: int, rng: np.random.Generator) -> PureState:
    vec = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return PureState(n, vec)


def random_density(n: int, rng: np.random.Generator, rank: int = 3) -> DensityMatrix:
    d = 2**n
    mat = np.zeros((d, d), dtype=complex)
    weights = rng.random(rank)
    weights /= weights.sum()
    for w in weights:
        psi = random_pure(n, rng)
        mat += w * np.outer(psi.amp, psi.amp.conj())
    return DensityMatrix(n, mat)


def random_unit_vectors(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=(n, 2, 3))
    return v / np.linalg.norm(v, axis=2, keepdims=True)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
