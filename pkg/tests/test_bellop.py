import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellkit import bellop
from bellkit.bellop import (Assignment, Settings, bell_expectation,
                            bell_operator, bound_check, expand_correlators,
                            f_classical, f_prime, fnm_identity_check,
                            ghz_optimal_settings, lhv_max,
                            operator_from_correlators)
from bellkit.qstate import PureState, pauli_dot

from conftest import ghz_pure, random_pure, random_unit_vectors


def brute_force_lhv_max(n: int) -> Fraction:
    """Independent oracle: recursive definition evaluated over every
    assignment with Fraction arithmetic."""
    def f(values, primed):
        if len(values) == 1:
            a, ap = values[0]
            return Fraction(2 * (ap if primed else a))
        a, ap = values[-1]
        if primed:
            a, ap = ap, a
        head = values[:-1]
        return (Fraction(a + ap, 2) * f(head, primed)
                + Fraction(a - ap, 2) * f(head, not primed))

    best = Fraction(-10)
    for bits in itertools.product((1, -1), repeat=2 * n):
        values = tuple((bits[2 * i], bits[2 * i + 1]) for i in range(n))
        best = max(best, f(values, False))
    return best


assignments = st.integers(min_value=1, max_value=6).flatmap(
    lambda n: st.tuples(*[st.tuples(st.sampled_from((1, -1)),
                                    st.sampled_from((1, -1))) for _ in range(n)]))


class TestClassicalPolynomial:
    def test_single_qubit(self):
        assert f_classical(Assignment(((1, 1),))) == 2
        assert f_classical(Assignment(((-1, 1),))) == -2

    def test_chsh_combination(self):
        # (a + a') b + (a - a') b' at (1, 1, 1, -1)
        assert f_classical(Assignment(((1, 1), (1, -1)))) == 2

    def test_three_qubit_symmetric_form(self):
        # E(a,b,c') + E(a,b',c) + E(a',b,c) - E(a',b',c') at all +1
        asg = Assignment(((1, 1), (1, 1), (1, 1)))
        assert f_classical(asg) == 1 + 1 + 1 - 1

    def test_prime_base_case(self):
        assert f_prime(Assignment(((1, -1),))) == -2

    def test_prime_via_swap_example(self):
        asg = Assignment(((1, 1), (1, -1)))
        # a'b' + a'b + ab' - ab with a=a'=b=1, b'=-1
        assert f_prime(asg) == -2

    @given(assignments)
    def test_prime_is_swap_involution(self, values):
        asg = Assignment(values)
        assert f_prime(asg) == f_classical(asg.swapped())
        assert f_prime(asg.swapped()) == f_classical(asg)

    @given(assignments)
    @settings(max_examples=200)
    def test_magnitude_bounded_by_two(self, values):
        assert abs(f_classical(Assignment(values))) <= 2

    def test_value_validation(self):
        with pytest.raises(ValueError):
            Assignment(((1, 0),))


class TestLhvMax:
    @pytest.mark.parametrize("n", [2, 3, 8])
    def test_equals_two(self, n):
        assert lhv_max(n) == 2

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_against_brute_force_oracle(self, n):
        assert lhv_max(n) == brute_force_lhv_max(n)

    def test_too_large(self):
        with pytest.raises(ValueError):
            lhv_max(11)


class TestExpandCorrelators:
    def test_single_qubit(self):
        poly = expand_correlators(1)
        assert dict(poly.items()) == {(0,): Fraction(2)}

    def test_two_qubits(self):
        poly = expand_correlators(2)
        assert dict(poly.items()) == {
            (0, 0): Fraction(1), (0, 1): Fraction(1),
            (1, 0): Fraction(1), (1, 1): Fraction(-1),
        }

    def test_three_qubits_matches_symmetric_form(self):
        poly = expand_correlators(3)
        assert dict(poly.items()) == {
            (0, 0, 1): Fraction(1), (0, 1, 0): Fraction(1),
            (1, 0, 0): Fraction(1), (1, 1, 1): Fraction(-1),
        }

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 6, 8])
    def test_evaluation_matches_recursion(self, n):
        poly = expand_correlators(n)
        rng = np.random.default_rng(5 + n)
        for _ in range(100):
            asg = Assignment.random(n, rng)
            assert poly.evaluate(asg) == f_classical(asg)


class TestBellOperator:
    def test_base_case(self):
        st_ = Settings.from_pairs([((0, 0, 1), (1, 0, 0))])
        b = bell_operator(st_)
        assert np.allclose(b, 2 * pauli_dot([0, 0, 1]))
        assert np.allclose(np.linalg.eigvalsh(b), [-2, 2])

    def test_chsh_optimal_eigenvalue(self):
        z, x = np.array([0, 0, 1.0]), np.array([1.0, 0, 0])
        st_ = Settings.from_pairs([
            (z, x), ((z + x) / np.sqrt(2), (z - x) / np.sqrt(2))])
        lam = np.linalg.eigvalsh(bell_operator(st_))[-1]
        assert lam == pytest.approx(2 * np.sqrt(2), abs=1e-12)

    def test_ghz3_settings_eigenvalue(self):
        lam = np.linalg.eigvalsh(bell_operator(ghz_optimal_settings(3)))[-1]
        assert lam == pytest.approx(4.0, abs=1e-9)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_hermitian_and_matches_expansion(self, n, rng):
        st_ = Settings(random_unit_vectors(n, rng))
        b = bell_operator(st_)
        assert np.max(np.abs(b - b.conj().T)) <= 1e-12
        assert np.max(np.abs(b - operator_from_correlators(st_))) <= 1e-10

    def test_non_unit_rejected(self):
        with pytest.raises(ValueError):
            Settings.from_pairs([((0, 0, 2), (1, 0, 0))])


class TestBellExpectation:
    @pytest.mark.parametrize("n", [2, 3, 4, 6])
    def test_ghz_saturates(self, n):
        val = bell_expectation(ghz_pure(n), ghz_optimal_settings(n))
        assert val == pytest.approx(2 ** ((n + 1) / 2), abs=1e-9)

    def test_product_states_lhv_capped(self, rng):
        for n in (2, 3, 4):
            amp = np.array([1.0])
            for _ in range(n):
                q = rng.normal(size=2) + 1j * rng.normal(size=2)
                amp = np.kron(amp, q / np.linalg.norm(q))
            state = PureState(n, amp)
            for _ in range(20):
                st_ = Settings(random_unit_vectors(n, rng))
                assert bell_expectation(state, st_) <= 2 + 1e-9

    def test_alpha_beta_ghz_factor(self):
        # alpha|0..0> + beta|1..1> at the GHZ-optimal settings evaluates to
        # 2*alpha*beta*2^((n+1)/2): only the off-diagonal block contributes
        # in the xy-plane, scaled by 2*alpha*beta relative to GHZ.  (The
        # violation ratio over the LHV bound is therefore
        # 2*alpha*beta*2^((n-1)/2), twice the sometimes-quoted factor.)
        alpha, beta = 0.6, 0.8
        amp = np.zeros(8)
        amp[0], amp[-1] = alpha, beta
        state = PureState(3, amp)
        val = bell_expectation(state, ghz_optimal_settings(3))
        assert val == pytest.approx(2 * alpha * beta * 4.0, abs=1e-9)

    def test_cirelson_cap_on_random_inputs(self, rng):
        for n in (2, 3, 4):
            cap = 2 ** ((n + 1) / 2) + 1e-8
            for _ in range(25):
                psi = random_pure(n, rng)
                st_ = Settings(random_unit_vectors(n, rng))
                assert bell_expectation(psi, st_) <= cap

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            bell_expectation(ghz_pure(2), ghz_optimal_settings(3))


class TestBoundCheck:
    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_random_settings_pass(self, n, rng):
        for _ in range(50):
            res = bound_check(Settings(random_unit_vectors(n, rng)))
            assert res.passed
            assert res.lambda_max_sq <= 2 ** (n + 1) + 1e-8

    def test_collinear_pair_degenerates(self, rng):
        # a = a' on the last qubit kills the primed branch, so the square
        # caps at 2^n instead of 2^(n+1).
        n = 3
        v = random_unit_vectors(n, rng)
        v[-1, 1] = v[-1, 0]
        res = bound_check(Settings(v))
        assert res.passed
        assert res.lambda_max_sq <= 2**n + 1e-8


class TestFnmIdentity:
    def test_m_one_is_definition(self):
        assert fnm_identity_check(3, 1, 200, seed=1) == 0

    @pytest.mark.parametrize("n,m", [(6, 3), (12, 5)])
    def test_exact_zero_deviation(self, n, m):
        assert fnm_identity_check(n, m, 1000, seed=2) == 0

    def test_range_errors(self):
        with pytest.raises(ValueError):
            fnm_identity_check(3, 3, 10, seed=0)


class TestGhzOptimalSettings:
    def test_n2_angles(self):
        st_ = ghz_optimal_settings(2)
        assert np.allclose(st_.direction(1, 0), [1, 0, 0], atol=1e-12)
        assert np.allclose(st_.direction(2, 0),
                           [np.cos(np.pi / 4), -np.sin(np.pi / 4), 0], atol=1e-12)

    def test_n3_angles(self):
        st_ = ghz_optimal_settings(3)
        for j, angle in enumerate([0, np.pi / 6, np.pi / 3], start=1):
            assert np.allclose(st_.direction(j, 0),
                               [np.cos(angle), np.sin(angle), 0], atol=1e-12)

    def test_perpendicular_pairs(self):
        st_ = ghz_optimal_settings(5)
        for j in range(1, 6):
            assert abs(np.dot(st_.direction(j, 0), st_.direction(j, 1))) <= 1e-12

    def test_needs_two_qubits(self):
        with pytest.raises(ValueError):
            ghz_optimal_settings(1)


class TestSettingsIO:
    def test_json_round_trip(self, tmp_path, rng):
        st_ = Settings(random_unit_vectors(4, rng))
        path = tmp_path / "settings.json"
        st_.save(path)
        loaded = Settings.load(path)
        assert np.allclose(loaded.vectors, st_.vectors, atol=1e-15)

    def test_swapped_involution(self, rng):
        st_ = Settings(random_unit_vectors(3, rng))
        assert np.array_equal(st_.swapped().swapped().vectors, st_.vectors)
