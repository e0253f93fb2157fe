"""Recursive Klyshko correlation polynomial F_n, its multilinear expansion,
and the matching Hermitian Bell operator B_n.

Classical side (exact integer/rational arithmetic):

    F_1(a) = 2 a
    F_n    = (a_n + a_n') F_{n-1} / 2 + (a_n - a_n') F_{n-1}' / 2

where the primed polynomial swaps every a_j with a_j'.  Deterministic +-1
assignments can never push F_n above 2, while the quantum operator built
from the same recursion,

    B_1 = 2 a.sigma
    B_n = B_{n-1} (x) (a_n.sigma + a_n'.sigma)/2 + B_{n-1}' (x) (a_n.sigma - a_n'.sigma)/2,

satisfies B_n^2 <= 2^(n+1) and reaches eigenvalue 2^((n+1)/2) at the GHZ
states, an exponentially growing gap that powers the entanglement-depth
certificates in :mod:`bellkit.certify`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .qstate import PureState, State, UNIT_ATOL, pauli_dot

MAX_OPERATOR_QUBITS = 12   # dense 2^n operators
MAX_ENUM_QUBITS = 10       # 4^n assignment enumeration
OPERATOR_MATCH_ATOL = 1e-10
BOUND_SLACK = 1e-8
EXPECTATION_IMAG_ATOL = 1e-10

UNPRIMED, PRIMED = 0, 1


@dataclass(frozen=True)
class Settings:
    """Per-qubit measurement pair: vectors[j, 0] = a_j, vectors[j, 1] = a_j'."""

    vectors: np.ndarray

    def __post_init__(self):
        arr = np.array(self.vectors, dtype=float)
        if arr.ndim != 3 or arr.shape[1:] != (2, 3) or arr.shape[0] < 1:
            raise ValueError(f"expected shape (n, 2, 3), got {arr.shape}")
        norms = np.linalg.norm(arr, axis=2)
        if np.max(np.abs(norms - 1.0)) > UNIT_ATOL:
            raise ValueError("all measurement directions must be unit vectors")
        arr.setflags(write=False)
        object.__setattr__(self, "vectors", arr)

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    def swapped(self) -> "Settings":
        return Settings(self.vectors[:, ::-1, :])

    def direction(self, qubit: int, choice: int) -> np.ndarray:
        return self.vectors[qubit - 1, choice]

    @classmethod
    def from_pairs(cls, pairs: Iterable) -> "Settings":
        return cls(np.array([[a, ap] for a, ap in pairs], dtype=float))

    @classmethod
    def from_xz_angles(cls, angles: Iterable[tuple[float, float]]) -> "Settings":
        """Directions in the xz-plane; the angle is measured from +z."""
        def vec(t):
            return [np.sin(t), 0.0, np.cos(t)]
        return cls.from_pairs([(vec(a), vec(ap)) for a, ap in angles])

    def to_json(self) -> list:
        return [{"a": list(map(float, a)), "a_prime": list(map(float, ap))}
                for a, ap in self.vectors]

    @classmethod
    def from_json(cls, obj: list) -> "Settings":
        return cls.from_pairs([(entry["a"], entry["a_prime"]) for entry in obj])

    @classmethod
    def load(cls, path) -> "Settings":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh)


@dataclass(frozen=True)
class Assignment:
    """Deterministic outcomes: values[j] = (a_j, a_j'), each exactly +-1."""

    values: tuple[tuple[int, int], ...]

    def __post_init__(self):
        vals = tuple((int(a), int(ap)) for a, ap in self.values)
        if not vals:
            raise ValueError("assignment must cover at least one qubit")
        if any(v not in (1, -1) for pair in vals for v in pair):
            raise ValueError("assignment values must be exactly +1 or -1")
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return len(self.values)

    def swapped(self) -> "Assignment":
        return Assignment(tuple((ap, a) for a, ap in self.values))

    def sub(self, start: int, stop: int) -> "Assignment":
        """Assignment restricted to qubits start..stop (1-based, inclusive)."""
        return Assignment(self.values[start - 1:stop])

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "Assignment":
        vals = rng.integers(0, 2, size=(n, 2)) * 2 - 1
        return cls(tuple((int(a), int(ap)) for a, ap in vals))


def _f_pair(asg: Assignment) -> tuple[int, int]:
    """(F_n, F_n') by the joint recursion; every intermediate is an integer."""
    (a1, a1p) = asg.values[0]
    f, fp = 2 * a1, 2 * a1p
    for a, ap in asg.values[1:]:
        f, fp = ((a + ap) * f + (a - ap) * fp) // 2, \
                ((a + ap) * fp - (a - ap) * f) // 2
    return f, fp


def f_classical(asg: Assignment) -> int:
    """Exact F_n; |result| <= 2 for every deterministic assignment."""
    return _f_pair(asg)[0]


def f_prime(asg: Assignment) -> int:
    """F_n with all primed and unprimed values exchanged; an involution."""
    return _f_pair(asg)[1]


def lhv_max(n: int) -> int:
    """Exact max of F_n over all 4^n deterministic assignments (equals 2).

    The enumeration is a vectorized integer dynamic program over the joint
    (F_k, F_k') recursion; all values stay tiny integers so int64 arithmetic
    is exact.
    """
    if not 1 <= n <= MAX_ENUM_QUBITS:
        raise ValueError(f"enumeration supports 1 <= n <= {MAX_ENUM_QUBITS}")
    a = np.array([1, 1, -1, -1], dtype=np.int64)
    ap = np.array([1, -1, 1, -1], dtype=np.int64)
    f, fp = 2 * a, 2 * ap
    plus, minus = a + ap, a - ap
    for _ in range(n - 1):
        new_f = (plus[None, :] * f[:, None] + minus[None, :] * fp[:, None]) // 2
        new_fp = (plus[None, :] * fp[:, None] - minus[None, :] * f[:, None]) // 2
        f, fp = new_f.reshape(-1), new_fp.reshape(-1)
    return int(f.max())


@dataclass(frozen=True)
class CorrelatorPoly:
    """Multilinear expansion F_n = sum_c coeff(c) prod_j a_j^(c_j).

    Choice strings are 0/1 tuples per qubit (0 = unprimed); only nonzero
    coefficients are stored.
    """

    n: int
    coeffs: dict

    def coefficient(self, choice: tuple[int, ...]) -> Fraction:
        return self.coeffs.get(tuple(choice), Fraction(0))

    def items(self):
        return self.coeffs.items()

    def __len__(self) -> int:
        return len(self.coeffs)

    def evaluate(self, asg: Assignment) -> Fraction:
        if asg.n != self.n:
            raise ValueError("assignment size mismatch")
        total = Fraction(0)
        for choice, coeff in self.coeffs.items():
            prod = 1
            for j, c in enumerate(choice):
                prod *= asg.values[j][c]
            total += coeff * prod
        return total


def expand_correlators(n: int) -> CorrelatorPoly:
    """Exact expansion of F_n over choice strings (rational coefficients)."""
    if not 1 <= n <= 14:
        raise ValueError("expansion supports 1 <= n <= 14")
    coeffs: dict = {(UNPRIMED,): Fraction(2)}
    for _ in range(n - 1):
        swapped = {tuple(1 - c for c in choice): v for choice, v in coeffs.items()}
        new: dict = {}
        for choice in set(coeffs) | set(swapped):
            alpha = coeffs.get(choice, Fraction(0))
            alpha_p = swapped.get(choice, Fraction(0))
            up = (alpha + alpha_p) / 2
            pr = (alpha - alpha_p) / 2
            if up:
                new[choice + (UNPRIMED,)] = up
            if pr:
                new[choice + (PRIMED,)] = pr
        coeffs = new
    return CorrelatorPoly(n, coeffs)


def _bell_operator_raw(vectors: np.ndarray) -> np.ndarray:
    """Operator recursion for arbitrary (possibly non-unit) 3-vectors; the
    construction is multilinear in each direction, which the optimizers in
    :mod:`bellkit.optimize` exploit."""
    b = 2.0 * pauli_dot(vectors[0, 0])
    bp = 2.0 * pauli_dot(vectors[0, 1])
    for a, ap in vectors[1:]:
        m_plus = 0.5 * (pauli_dot(a) + pauli_dot(ap))
        m_minus = 0.5 * (pauli_dot(a) - pauli_dot(ap))
        b, bp = (np.kron(b, m_plus) + np.kron(bp, m_minus),
                 np.kron(bp, m_plus) - np.kron(b, m_minus))
    return b


def bell_operator(st: Settings) -> np.ndarray:
    """Dense Hermitian B_n for the given settings."""
    if st.n > MAX_OPERATOR_QUBITS:
        raise ValueError(f"dense operator supports n <= {MAX_OPERATOR_QUBITS}")
    return _bell_operator_raw(st.vectors)


def operator_from_correlators(st: Settings) -> np.ndarray:
    """B_n assembled term by term from the multilinear expansion:
    sum_c coeff(c) (x)_j (chosen direction).sigma.  Independent of the
    recursion in bell_operator, so the two serve as cross-checks."""
    poly = expand_correlators(st.n)
    dim = 2**st.n
    total = np.zeros((dim, dim), dtype=complex)
    for choice, coeff in poly.items():
        term = np.eye(1, dtype=complex)
        for j, c in enumerate(choice):
            term = np.kron(term, pauli_dot(st.vectors[j, c]))
        total += float(coeff) * term
    return total


def bell_expectation(state: State, st: Settings) -> float:
    """<B_n> in the given state; the imaginary part must vanish."""
    if state.n != st.n:
        raise ValueError(f"state has {state.n} qubits but settings have {st.n}")
    b = bell_operator(st)
    if isinstance(state, PureState):
        val = complex(np.vdot(state.amp, b @ state.amp))
    else:
        val = complex(np.trace(state.mat @ b))
    if abs(val.imag) > EXPECTATION_IMAG_ATOL:
        raise RuntimeError(f"expectation has imaginary part {val.imag!r}")
    return float(val.real)


@dataclass(frozen=True)
class BoundCheck:
    lambda_max_sq: float
    bound: float
    passed: bool


def bound_check(st: Settings) -> BoundCheck:
    """Largest eigenvalue of B_n^2 against its cap 2^(n+1)."""
    w = np.linalg.eigvalsh(bell_operator(st))
    lam_sq = float(np.max(w**2))
    bound = 2.0 ** (st.n + 1)
    return BoundCheck(lam_sq, bound, lam_sq <= bound + BOUND_SLACK)


def fnm_identity_check(n: int, m: int, trials: int, seed: int) -> Fraction:
    """Max absolute deviation, over random assignments, of

        F_n  vs  (F_{n-m} + F_{n-m}') F_m / 4 + (F_{n-m} - F_{n-m}') F_m' / 4

    with F_{n-m} on the first n-m qubits and F_m on the last m.  Both sides
    are evaluated exactly; the identity holds, so the deviation is 0.
    """
    if not 1 <= m < n <= MAX_OPERATOR_QUBITS:
        raise ValueError(f"need 1 <= m < n <= {MAX_OPERATOR_QUBITS}")
    rng = np.random.default_rng(seed)
    worst = Fraction(0)
    for _ in range(trials):
        asg = Assignment.random(n, rng)
        lhs = f_classical(asg)
        head = asg.sub(1, n - m)
        tail = asg.sub(n - m + 1, n)
        fa, fap = _f_pair(head)
        fb, fbp = _f_pair(tail)
        rhs = Fraction((fa + fap) * fb + (fa - fap) * fbp, 4)
        dev = abs(Fraction(lhs) - rhs)
        if dev > worst:
            worst = dev
    return worst


def ghz_optimal_settings(n: int) -> Settings:
    """Settings that make the GHZ state saturate <B_n> = 2^((n+1)/2).

    All directions lie in the xy-plane: a_j at angle
    (j-1) * (-1)^(n+1) * pi / (2n) from the x-axis and a_j' perpendicular to
    a_j in the same plane.  Orthogonality leaves a sign free, so both global
    signs are evaluated on the GHZ state and the better one is kept.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    ghz = np.zeros(2**n, dtype=complex)
    ghz[0] = ghz[-1] = 1 / np.sqrt(2)
    state = PureState(n, ghz)

    def xy(phi: float) -> np.ndarray:
        return np.array([np.cos(phi), np.sin(phi), 0.0])

    best = None
    best_val = -np.inf
    for sign in (1, -1):
        vecs = []
        for j in range(1, n + 1):
            phi = (j - 1) * ((-1) ** (n + 1)) * np.pi / (2 * n)
            vecs.append((xy(phi), xy(phi + sign * np.pi / 2)))
        st = Settings.from_pairs(vecs)
        val = bell_expectation(state, st)
        if val > best_val:
            best, best_val = st, val
    return best
