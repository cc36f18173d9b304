"""Indexing, modulation and Gaussian-tail utilities shared by all modules.

Conventions used throughout the package:

* A message vector is a length-K integer array with entries in {0, ..., m-1}.
* A codeword / observation is a length-N uint8 array with entries in {0, 1},
  where N = 2 * n_receive_antennas (real and imaginary halves stacked).
* Symbol labels are read MSB-first: label(b_1, ..., b_q) = sum_i b_i 2^(q-i).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erfc


def m_ary_expansion(k: int, m: int, length: int) -> np.ndarray:
    """Digits [b_0, ..., b_{length-1}] with k = sum_i b_i * m**i (LSD first)."""
    if not 0 <= k < m**length:
        raise ValueError(f"index {k} outside [0, {m}**{length})")
    digits = np.empty(length, dtype=np.int64)
    for i in range(length):
        k, digits[i] = divmod(k, m)
    return digits


def m_ary_compose(digits: np.ndarray, m: int) -> int:
    """Inverse of :func:`m_ary_expansion`."""
    digits = np.asarray(digits)
    if digits.size and (digits.min() < 0 or digits.max() >= m):
        raise ValueError("digit outside [0, m)")
    return int(np.dot(digits, m ** np.arange(len(digits), dtype=np.int64)))


def all_message_digits(m: int, K: int) -> np.ndarray:
    """(m**K, K) table whose row ell is the m-ary expansion of ell."""
    ell = np.arange(m**K, dtype=np.int64)
    return (ell[:, None] // m ** np.arange(K, dtype=np.int64)) % m


def bits_to_message(bits) -> int:
    """Symbol value of an MSB-first bit tuple: sum_i b_i * 2^(q-i)."""
    bits = np.asarray(bits)
    q = len(bits)
    return int(np.dot(bits, 2 ** np.arange(q - 1, -1, -1, dtype=np.int64)))


def message_to_bits(w: int, q: int) -> np.ndarray:
    """MSB-first bits of a symbol in [0, 2**q)."""
    if not 0 <= w < 2**q:
        raise ValueError(f"symbol {w} outside [0, 2**{q})")
    return (w >> np.arange(q - 1, -1, -1)) & 1


def bit_table(m: int) -> np.ndarray:
    """(m, q) lookup table; row w holds the MSB-first bits of symbol w."""
    q = int(np.log2(m))
    return (np.arange(m)[:, None] >> np.arange(q - 1, -1, -1)) & 1


@dataclass(frozen=True, eq=False)
class Constellation:
    """Square QAM constellation with mean symbol power fixed exactly.

    The label of a symbol is split across the two axes: odd-numbered bits
    (b_1, b_3, ...) select the real component, even-numbered bits the
    imaginary one.  The leading bit of each axis group is the sign
    (0 -> positive), the remaining bits index odd amplitude levels
    1, 3, 5, ...  All points are scaled so the mean power equals ``snr``.
    """

    m: int
    snr: float
    points: np.ndarray  # complex, shape (m,)

    @property
    def bits_per_symbol(self) -> int:
        return int(np.log2(self.m))


def _pam_axis(bits: np.ndarray) -> np.ndarray:
    """Signed odd-integer level for one axis; bits shape (n_symbols, p)."""
    sign = 1 - 2 * bits[:, 0]
    if bits.shape[1] > 1:
        mag_idx = bits[:, 1:] @ (2 ** np.arange(bits.shape[1] - 2, -1, -1))
    else:
        mag_idx = np.zeros(len(bits), dtype=np.int64)
    return sign * (1 + 2 * mag_idx)


def qam_constellation(m: int, snr: float) -> Constellation:
    """Square m-QAM (m a power of 4) meeting the average-power constraint."""
    q = int(round(np.log2(m)))
    if 2**q != m or q % 2 != 0:
        raise ValueError(f"square QAM needs m a power of 4, got {m}")
    if snr <= 0:
        raise ValueError("snr must be positive")
    bits = bit_table(m)
    re = _pam_axis(bits[:, 0::2])
    im = _pam_axis(bits[:, 1::2])
    raw = re + 1j * im
    scale = np.sqrt(snr / np.mean(np.abs(raw) ** 2))
    return Constellation(m=m, snr=snr, points=raw * scale)


def modulate(w, constellation: Constellation):
    """Complex symbol(s) for message value(s) w."""
    return constellation.points[np.asarray(w)]


def real_stack(x_complex: np.ndarray) -> np.ndarray:
    """[Re(x); Im(x)] as one real vector."""
    x_complex = np.asarray(x_complex)
    return np.concatenate([x_complex.real, x_complex.imag])


def real_channel_matrix(h_complex: np.ndarray) -> np.ndarray:
    """Block matrix [[Re H, -Im H], [Im H, Re H]] of shape (2*Nr, 2*K)."""
    h_complex = np.asarray(h_complex)
    if h_complex.ndim != 2:
        raise ValueError("channel matrix must be 2-D")
    return np.block(
        [[h_complex.real, -h_complex.imag], [h_complex.imag, h_complex.real]]
    )


def real_decompose(h_complex: np.ndarray, x_complex: np.ndarray):
    """Real representation (H, x) with H @ x = [Re(H~ x~); Im(H~ x~)]."""
    h_complex = np.asarray(h_complex)
    x_complex = np.asarray(x_complex)
    if h_complex.ndim != 2 or h_complex.shape[1] != x_complex.shape[0]:
        raise ValueError(
            f"shape mismatch: {h_complex.shape} matrix vs {x_complex.shape} vector"
        )
    return real_channel_matrix(h_complex), real_stack(x_complex)


def q_function(x):
    """Gaussian tail probability P(Z > x) for standard normal Z."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / np.sqrt(2.0))
