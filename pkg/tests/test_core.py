import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from onebit_mimo import (
    all_message_digits,
    bit_table,
    bits_to_message,
    m_ary_compose,
    m_ary_expansion,
    message_to_bits,
    modulate,
    q_function,
    qam_constellation,
    real_channel_matrix,
    real_decompose,
    real_stack,
)


class TestMaryExpansion:
    def test_zero(self):
        assert m_ary_expansion(0, 4, 2).tolist() == [0, 0]

    def test_definition_arithmetic(self):
        # 6 = 2*1 + 1*4, least significant digit first
        assert m_ary_expansion(6, 4, 2).tolist() == [2, 1]

    def test_maximal(self):
        assert m_ary_expansion(15, 4, 2).tolist() == [3, 3]

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            m_ary_expansion(16, 4, 2)
        with pytest.raises(ValueError):
            m_ary_expansion(-1, 4, 2)

    @pytest.mark.parametrize("m", [2, 4, 16])
    @pytest.mark.parametrize("K", range(1, 9))
    def test_round_trip(self, m, K):
        total = m**K
        ks = np.arange(total) if total <= 4096 else np.linspace(0, total - 1, 512, dtype=np.int64)
        for k in ks:
            digits = m_ary_expansion(int(k), m, K)
            assert np.all((0 <= digits) & (digits < m))
            assert m_ary_compose(digits, m) == k

    def test_table_matches_scalar(self):
        table = all_message_digits(4, 3)
        assert table.shape == (64, 3)
        for ell in range(64):
            assert np.array_equal(table[ell], m_ary_expansion(ell, 4, 3))


class TestBitLabels:
    @pytest.mark.parametrize("bits,expected", [((1, 0), 2), ((0, 0), 0), ((1, 1), 3)])
    def test_examples(self, bits, expected):
        assert bits_to_message(bits) == expected

    @pytest.mark.parametrize("m", [4, 16, 64])
    def test_round_trip(self, m):
        q = int(np.log2(m))
        for w in range(m):
            assert bits_to_message(message_to_bits(w, q)) == w

    def test_bit_table_rows(self):
        table = bit_table(16)
        for w in range(16):
            assert np.array_equal(table[w], message_to_bits(w, 4))


class TestConstellation:
    def test_qpsk_point_zero(self):
        const = qam_constellation(4, 2.0)
        assert modulate(0, const) == pytest.approx(1 + 1j)

    def test_qpsk_point_three(self):
        const = qam_constellation(4, 2.0)
        assert modulate(3, const) == pytest.approx(-1 - 1j)

    def test_qpsk_sign_mapping(self):
        # first label bit flips the real axis, second the imaginary axis
        const = qam_constellation(4, 2.0)
        assert modulate(2, const) == pytest.approx(-1 + 1j)
        assert modulate(1, const) == pytest.approx(1 - 1j)

    @pytest.mark.parametrize("m", [4, 16, 64])
    @pytest.mark.parametrize("snr", [0.5, 1.0, 10.0])
    def test_power_constraint_exact(self, m, snr):
        const = qam_constellation(m, snr)
        power = np.mean(np.abs(const.points) ** 2)
        assert power == pytest.approx(snr, rel=1e-12)

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            qam_constellation(8, 1.0)
        with pytest.raises(ValueError):
            qam_constellation(2, 1.0)

    def test_16qam_levels(self):
        const = qam_constellation(16, 10.0)
        re_levels = np.unique(np.round(const.points.real, 9))
        assert len(re_levels) == 4  # +-1, +-3 scaled


class TestRealDecomposition:
    def test_identity_case(self):
        h, _ = real_decompose(np.array([[1 + 0j]]), np.array([1 + 0j]))
        assert np.array_equal(h, np.eye(2))

    def test_rotation_case(self):
        h, _ = real_decompose(np.array([[0 + 1j]]), np.array([1 + 0j]))
        assert np.array_equal(h, np.array([[0.0, -1.0], [1.0, 0.0]]))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            real_decompose(np.ones((2, 3), dtype=complex), np.ones(2, dtype=complex))

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 2**31 - 1))
    def test_preserves_complex_multiplication(self, n_r, k, seed):
        rng = np.random.default_rng(seed)
        h_c = rng.standard_normal((n_r, k)) + 1j * rng.standard_normal((n_r, k))
        x_c = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        h, x = real_decompose(h_c, x_c)
        direct = h_c @ x_c
        assert np.allclose(h @ x, np.concatenate([direct.real, direct.imag]), atol=1e-12)

    def test_real_stack_order(self):
        x = np.array([1 + 2j, 3 + 4j])
        assert real_stack(x).tolist() == [1, 3, 2, 4]

    def test_matrix_shape(self):
        h = real_channel_matrix(np.ones((3, 2), dtype=complex))
        assert h.shape == (6, 4)


class TestQFunction:
    def test_at_zero(self):
        assert q_function(0.0) == pytest.approx(0.5)

    def test_tail_bound(self):
        assert q_function(10.0) < 1e-20

    def test_reference_value(self):
        assert q_function(1.0) == pytest.approx(0.15865525393145707, abs=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(-8, 8))
    def test_symmetry(self, x):
        assert q_function(x) + q_function(-x) == pytest.approx(1.0, abs=1e-12)

    def test_monotone_decreasing(self):
        xs = np.linspace(-6, 6, 200)
        vals = q_function(xs)
        assert np.all(np.diff(vals) < 0)
