"""Tests for operator means, the operator/trace chains, and cross-route checks.

The operator chains are built by transferring a scalar inequality through the
spectrum of A^{-1/2} B A^{-1/2}; these tests independently recompose the same
matrices from the public mean operations and compare, and reduce commuting
(diagonal) instances to the scalar chains entrywise.
"""

import math

import numpy as np
import pytest

from matmeans import (
    DomainError,
    SpdMatrix,
    arithmetic_mean,
    geometric_mean,
    harmonic_mean,
    harmonic_operator_chain,
    harmonic_reverse_chain,
    kantorovich_chain,
    kantorovich_hypothesis,
    kantorovich_operator_chain,
    kantorovich_operator_product,
    operator_reverse_chain,
    operator_squared_chain,
    random_spd,
    trace_additive_chain,
    trace_depth1_chain,
    trace_multiplicative_chain,
    young_reverse_chain,
    young_squared_chain,
)
from matmeans.means import OperatorChain
from matmeans.reporting import chain_passes, operator_chain_slacks


def _pair(seed, n=4, cond=100.0):
    return random_spd(n, cond, seed), random_spd(n, cond, seed + 1000)


def _ordered_pair(seed, n=4, cond=50.0):
    a = random_spd(n, cond, seed)
    s = random_spd(n, cond, seed + 2000)
    return a, SpdMatrix(a.a + s.a)


def _diag(*vals):
    return SpdMatrix(np.diag([float(v) for v in vals]))


class TestMeans:
    def test_equal_arguments_fixed_point(self):
        a = random_spd(4, 50, 5)
        for nu in (-2.0, 0.0, 0.5, 3.0):
            for fn in (arithmetic_mean, geometric_mean, harmonic_mean):
                np.testing.assert_allclose(fn(a, a, nu).a, a.a, atol=1e-11)

    def test_zero_weight_returns_first(self):
        a, b = _pair(1)
        for fn in (arithmetic_mean, geometric_mean, harmonic_mean):
            np.testing.assert_allclose(fn(a, b, 0.0).a, a.a, atol=1e-11)

    def test_commuting_diagonal_geometric(self):
        g = geometric_mean(_diag(1, 4), _diag(9, 16), 0.5)
        np.testing.assert_allclose(g.a, np.diag([3.0, 8.0]), atol=1e-12)

    def test_diagonal_reduces_to_scalar_means(self):
        from matmeans import arith_mean, geom_mean, harm_mean

        a, b = _diag(1, 2, 5), _diag(3, 0.5, 4)
        for nu in (0.25, 0.9, 2.0):
            np.testing.assert_allclose(
                np.diag(geometric_mean(a, b, nu).a).real,
                [geom_mean(x, y, nu) for x, y in zip([1, 2, 5], [3, 0.5, 4])],
                rtol=1e-12,
            )
            np.testing.assert_allclose(
                np.diag(arithmetic_mean(a, b, nu).a).real,
                [arith_mean(x, y, nu) for x, y in zip([1, 2, 5], [3, 0.5, 4])],
                rtol=1e-12,
            )
            if nu <= 1.0:  # resolvent positive entrywise only for these weights
                np.testing.assert_allclose(
                    np.diag(harmonic_mean(a, b, nu).a).real,
                    [harm_mean(x, y, nu) for x, y in zip([1, 2, 5], [3, 0.5, 4])],
                    rtol=1e-12,
                )

    def test_geometric_weight_reversal(self):
        rng = np.random.default_rng(8)
        for seed in range(10):
            a, b = _pair(seed, n=int(rng.integers(2, 6)))
            nu = float(rng.uniform(0, 1))
            left = geometric_mean(a, b, nu).a
            right = geometric_mean(b, a, 1 - nu).a
            assert np.linalg.norm(left - right) <= 1e-9 * max(1, np.linalg.norm(left))

    def test_congruence_covariance(self):
        rng = np.random.default_rng(9)
        for seed in range(10):
            n = int(rng.integers(2, 7))
            a, b = _pair(seed, n=n)
            m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            nu = float(rng.uniform(0, 1))
            for fn in (arithmetic_mean, geometric_mean, harmonic_mean):
                lhs = m.conj().T @ fn(a, b, nu).a @ m
                rhs = fn(
                    SpdMatrix(m.conj().T @ a.a @ m), SpdMatrix(m.conj().T @ b.a @ m), nu
                ).a
                assert np.linalg.norm(lhs - rhs) <= 1e-9 * max(1, np.linalg.norm(rhs))

    def test_harmonic_resolvent_failure(self):
        with pytest.raises(DomainError):
            harmonic_mean(_diag(2.0), _diag(1.0), -1.0)


class TestOperatorReverseChain:
    def test_equal_matrices_collapse(self):
        a = random_spd(3, 20, 2)
        chain = operator_reverse_chain(a, a, 2.0, 3)
        for m in chain.matrices:
            np.testing.assert_allclose(m.a, a.a, atol=1e-10)

    def test_commuting_reduces_to_scalar_chain(self):
        a, b = _diag(1, 2, 0.5), _diag(3, 1, 2)
        for nu in (0.7, 2.5, -1.5, -4.0):
            chain = operator_reverse_chain(a, b, nu, 3)
            for i, (x, y) in enumerate(zip([1, 2, 0.5], [3, 1, 2])):
                svals = young_reverse_chain(x, y, nu, 3).values
                mvals = [np.real(m.a[i, i]) for m in chain.matrices]
                np.testing.assert_allclose(mvals, svals, atol=1e-10, rtol=1e-10)

    def test_depth1_collapse_identity(self):
        # depth-1 refined term is 2 nu (A nabla B - A # B).
        a, b = _pair(3)
        nu = 1.7
        chain = operator_reverse_chain(a, b, nu, 1)
        expected = (
            arithmetic_mean(a, b, -nu).a
            + 2 * nu * (arithmetic_mean(a, b, 0.5).a - geometric_mean(a, b, 0.5).a)
        )
        assert np.linalg.norm(chain.matrix("refined").a - expected) <= 1e-10 * max(
            1, np.linalg.norm(expected)
        )

    def test_transfer_route_matches_mean_composition(self):
        rng = np.random.default_rng(12)
        for seed in range(8):
            n = int(rng.integers(2, 7))
            a, b = _pair(seed, n=n)
            nu = float(rng.uniform(0, 6))
            depth = int(rng.integers(1, 7))
            chain = operator_reverse_chain(a, b, nu, depth)
            composed = arithmetic_mean(a, b, -nu).a.copy()
            for j in range(1, depth + 1):
                composed += (
                    2.0 ** (j - 1)
                    * nu
                    * (
                        a.a
                        - 2 * geometric_mean(a, b, 2.0 ** -j).a
                        + geometric_mean(a, b, 2.0 ** (1 - j)).a
                    )
                )
            scale = max(1.0, np.linalg.norm(composed))
            assert np.linalg.norm(chain.matrix("refined").a - composed) <= 1e-9 * scale
            target = geometric_mean(a, b, -nu).a
            assert np.linalg.norm(chain.matrix("geom").a - target) <= 1e-9 * max(
                1.0, np.linalg.norm(target)
            )

    def test_loewner_ascending_random(self):
        rng = np.random.default_rng(13)
        for seed in range(40):
            n = int(rng.integers(2, 9))
            a, b = _pair(seed, n=n)
            nu = rng.uniform(0, 8) if seed % 2 else -1 - rng.uniform(0, 8)
            chain = operator_reverse_chain(a, b, float(nu), int(rng.integers(1, 9)))
            assert chain_passes(chain, 1e-8)

    def test_scalar_dimension_one_matches(self):
        chain = operator_reverse_chain(_diag(2.0), _diag(5.0), 1.5, 2)
        svals = young_reverse_chain(2.0, 5.0, 1.5, 2).values
        np.testing.assert_allclose(
            [float(m.a[0, 0].real) for m in chain.matrices], svals, rtol=1e-12
        )


class TestOperatorSquaredChain:
    def test_equal_matrices_collapse(self):
        a = random_spd(3, 20, 4)
        chain = operator_squared_chain(a, a, 1.5, 2)
        for m in chain.matrices:
            np.testing.assert_allclose(m.a, 2.5 * a.a, atol=1e-9)

    def test_zero_weight(self):
        a, b = _pair(5)
        chain = operator_squared_chain(a, b, 0.0, 2)
        np.testing.assert_allclose(chain.matrices[0].a, a.a, atol=1e-10)
        np.testing.assert_allclose(chain.matrices[-1].a, a.a, atol=1e-10)

    def test_dimension_one_gap_matches_scalar_rearrangement(self):
        # At size 1 with A=1 the chain is an affine rearrangement of the
        # squared scalar refinement: the end-to-end gaps agree.
        for y, nu, depth in ((3.0, 1.4, 2), (0.2, 4.0, 3), (7.0, 0.3, 1)):
            chain = operator_squared_chain(_diag(1.0), _diag(y), nu, depth)
            c = young_squared_chain(1.0, y, nu, depth)
            op_gap = float((chain.matrices[-1].a - chain.matrices[1].a)[0, 0].real)
            sc_gap = c.values[1] - c.values[0]
            assert op_gap == pytest.approx(sc_gap, rel=1e-10, abs=1e-12)

    def test_loewner_ascending_both_branches(self):
        rng = np.random.default_rng(14)
        for seed in range(30):
            n = int(rng.integers(2, 8))
            a, b = _pair(seed, n=n)
            nu = rng.uniform(0, 8) if seed % 2 else -1 - rng.uniform(0, 8)
            chain = operator_squared_chain(a, b, float(nu), int(rng.integers(1, 9)))
            assert chain_passes(chain, 1e-8)


class TestHarmonicOperatorChain:
    def test_requires_loewner_order(self):
        a = _diag(2.0, 1.0)
        b = _diag(1.0, 2.0)
        with pytest.raises(DomainError):
            harmonic_operator_chain(a, b, 1.0, 1)

    def test_equal_matrices_collapse(self):
        a = random_spd(3, 30, 6)
        chain = harmonic_operator_chain(a, a, 3.0, 2)
        for m in chain.matrices:
            np.testing.assert_allclose(m.a, a.a, atol=1e-9)

    def test_zero_weight_collapse(self):
        a, b = _ordered_pair(7)
        chain = harmonic_operator_chain(a, b, 0.0, 2)
        for m in chain.matrices:
            np.testing.assert_allclose(m.a, a.a, atol=1e-9)

    def test_commuting_reduces_to_scalar_chain(self):
        a, b = _diag(1, 2), _diag(2, 3)
        for nu in (0.5, 2.0, 6.0):
            chain = harmonic_operator_chain(a, b, nu, 2)
            for i, (x, y) in enumerate(zip([1, 2], [2, 3])):
                svals = harmonic_reverse_chain(x, y, nu, 2).values
                mvals = [np.real(m.a[i, i]) for m in chain.matrices]
                np.testing.assert_allclose(mvals, svals, atol=1e-10)

    def test_loewner_ascending_random(self):
        rng = np.random.default_rng(15)
        for seed in range(30):
            n = int(rng.integers(2, 9))
            a, b = _ordered_pair(seed, n=n)
            chain = harmonic_operator_chain(
                a, b, float(rng.uniform(0, 8)), int(rng.integers(1, 9))
            )
            assert chain_passes(chain, 1e-8)


class TestKantorovichOperator:
    def test_equal_matrices_collapse(self):
        a = random_spd(3, 30, 8)
        chain = kantorovich_operator_chain(a, a, 2.0)
        for m in chain.matrices:
            np.testing.assert_allclose(m.a, a.a, atol=1e-9)

    def test_zero_weight(self):
        a, b = _ordered_pair(9)
        chain = kantorovich_operator_chain(a, b, 0.0)
        for m in chain.matrices:
            np.testing.assert_allclose(m.a, a.a, atol=1e-9)

    def test_commuting_matches_scalar_bound(self):
        a, b = _diag(1, 2), _diag(4, 3)
        for nu in (0.5, 1.0, 3.0):
            chain = kantorovich_operator_chain(a, b, nu)
            for i, (x, y) in enumerate(zip([1, 2], [4, 3])):
                svals = kantorovich_chain(x, y, nu).values
                mvals = [np.real(m.a[i, i]) for m in chain.matrices]
                np.testing.assert_allclose(mvals, svals, rtol=1e-10)

    def test_product_form_matches_congruence_form(self):
        rng = np.random.default_rng(16)
        for seed in range(10):
            n = int(rng.integers(2, 7))
            a, b = _ordered_pair(seed, n=n)
            nu = float(rng.uniform(0, 4))
            chain = kantorovich_operator_chain(a, b, nu)
            product = kantorovich_operator_product(a, b, nu)
            scale = max(1.0, np.linalg.norm(chain.matrices[0].a))
            assert np.linalg.norm(product - chain.matrices[0].a) <= 1e-8 * scale

    def test_hypothesis_check(self):
        holds, witness = kantorovich_hypothesis(_diag(1.0, 1.0), _diag(2.0, 2.0))
        assert holds and witness >= 2.0 - 1e-12

    def test_loewner_ascending_random(self):
        rng = np.random.default_rng(17)
        for seed in range(30):
            n = int(rng.integers(2, 9))
            a, b = _ordered_pair(seed, n=n)
            chain = kantorovich_operator_chain(a, b, float(rng.uniform(0, 8)))
            assert chain_passes(chain, 1e-8)


class TestTraceChains:
    def test_equal_matrices_collapse(self):
        a = random_spd(4, 40, 10)
        add = trace_additive_chain(a, a, 2.0, 3)
        np.testing.assert_allclose(add.values, np.trace(a.a).real, rtol=1e-11)
        mult = trace_multiplicative_chain(a, a, 2.0, 3)
        np.testing.assert_allclose(mult.values, np.trace(a.a).real, rtol=1e-11)

    def test_zero_weight_collapse(self):
        a, b = _pair(11)
        add = trace_additive_chain(a, b, 0.0, 2)
        np.testing.assert_allclose(add.values, np.trace(a.a).real, rtol=1e-12)

    def test_hand_values_diagonal(self):
        # A=diag(1,2), B=diag(3,1), nu=1, depth=1, by direct arithmetic:
        # additive [2, 9 - 2 sqrt(3) - 2 sqrt(2), 13/3],
        # multiplicative [9/4, 27/(5 + 2 sqrt(6)), 13/3].
        a, b = _diag(1, 2), _diag(3, 1)
        add = trace_additive_chain(a, b, 1.0, 1)
        np.testing.assert_allclose(
            add.values,
            (2.0, 9 - 2 * math.sqrt(3) - 2 * math.sqrt(2), 13 / 3),
            rtol=1e-12,
        )
        mult = trace_multiplicative_chain(a, b, 1.0, 1)
        np.testing.assert_allclose(
            mult.values, (2.25, 27 / (5 + 2 * math.sqrt(6)), 13 / 3), rtol=1e-12
        )

    def test_depth1_chain_ascending_and_consistent(self):
        rng = np.random.default_rng(18)
        for seed in range(40):
            n = int(rng.integers(2, 9))
            a, b = _pair(seed, n=n)
            nu = float(rng.uniform(0, 8))
            chain = trace_depth1_chain(a, b, nu)
            scale = max(1.0, max(abs(v) for v in chain.values))
            diffs = np.diff(chain.values)
            assert np.all(diffs >= -1e-9 * scale)
            # second element equals the depth-1 additive refined value
            add = trace_additive_chain(a, b, nu, 1)
            assert chain.values[1] == pytest.approx(add.value("refined"), rel=1e-12)

    def test_refined_monotone_in_depth(self):
        a, b = _pair(12)
        prev = -np.inf
        for depth in range(1, 9):
            val = trace_additive_chain(a, b, 2.0, depth).value("refined")
            assert val >= prev - 1e-12 * max(1, abs(val))
            prev = val

    def test_requires_nonnegative_weight(self):
        a, b = _pair(13)
        with pytest.raises(DomainError):
            trace_additive_chain(a, b, -1.0, 1)


class TestOperatorChainType:
    def test_rejects_mismatched_lengths(self):
        a = random_spd(2, 10, 1)
        with pytest.raises(DomainError):
            OperatorChain(("one",), (a, a))

    def test_rejects_mixed_dimensions(self):
        with pytest.raises(DomainError):
            OperatorChain(("x", "y"), (random_spd(2, 10, 1), random_spd(3, 10, 1)))

    def test_slacks_sign(self):
        a = random_spd(3, 10, 2)
        bigger = SpdMatrix(a.a + np.eye(3))
        up = OperatorChain(("lo", "hi"), (a, bigger))
        assert operator_chain_slacks(up)[0] > 0
        down = OperatorChain(("hi", "lo"), (bigger, a))
        assert operator_chain_slacks(down)[0] < 0
