"""Hard and soft detection over a (possibly reduced) candidate set.

Decoders score each codeword with its own weight vector and break ties
toward the lowest codeword index.  LLRs follow the convention
L = log(P(bit=0) / P(bit=1)) and are clamped to +-LLR_CLAMP before handoff
to a channel decoder.
"""

from __future__ import annotations

import numpy as np
from scipy.special import logsumexp

from .core import Constellation
from .errors import DegeneratePosteriorError
from .spatial_code import SpatialCode, symbol_bit_masks

LLR_CLAMP = 60.0

APP_MODES = ("exact-sum", "wh-sum", "wh-max")


def weighted_hamming(x: np.ndarray, y: np.ndarray, alpha: np.ndarray) -> float:
    """sum_i alpha_i * 1{x_i != y_i}."""
    x = np.asarray(x)
    y = np.asarray(y)
    alpha = np.asarray(alpha)
    if not x.shape == y.shape == alpha.shape:
        raise ValueError("x, y and alpha must have equal length")
    return float(alpha[x != y].sum())


def _candidate_array(code: SpatialCode, candidates) -> np.ndarray:
    if candidates is None:
        return np.arange(code.size)
    candidates = np.asarray(candidates, dtype=np.int64)
    if candidates.size == 0:
        raise ValueError("candidate set must be nonempty")
    return np.sort(candidates)


def wmd_decode(r: np.ndarray, code: SpatialCode, candidates=None) -> int:
    """Index minimizing the per-codeword weighted Hamming distance to r."""
    cand = _candidate_array(code, candidates)
    d = code.wh_distances(r, cand)
    return int(cand[np.argmin(d)])


def md_decode(r: np.ndarray, code: SpatialCode, candidates=None) -> int:
    """Plain minimum-Hamming-distance baseline (all weights equal)."""
    cand = _candidate_array(code, candidates)
    d = code.hamming_distances(r, cand)
    return int(cand[np.argmin(d)])


def ml_decode(r: np.ndarray, code: SpatialCode, candidates=None) -> int:
    """Exact maximum-likelihood decision, computed in the log domain."""
    cand = _candidate_array(code, candidates)
    ll = code.log_likelihoods(r, cand)
    return int(cand[np.argmax(ll)])


def zf_detect(r: np.ndarray, h_real: np.ndarray, constellation: Constellation) -> np.ndarray:
    """Zero-forcing baseline: pseudo-inverse on +-1 samples, then slicing.

    One-bit quantization loses the amplitude, so the pseudo-inverse output is
    rescaled to the constellation's mean power before nearest-point slicing.
    """
    y = 1.0 - 2.0 * np.asarray(r, dtype=float)
    x_hat = np.linalg.pinv(h_real) @ y  # raises LinAlgError when rank-deficient
    K = x_hat.shape[0] // 2
    s = x_hat[:K] + 1j * x_hat[K:]
    rms = np.sqrt(np.mean(np.abs(s) ** 2))
    if rms > 0:
        s = s * np.sqrt(constellation.snr) / rms
    dist = np.abs(s[:, None] - constellation.points[None, :])
    return np.argmin(dist, axis=1)


def compute_app(
    r: np.ndarray, code: SpatialCode, candidates=None, mode: str = "wh-max"
) -> np.ndarray:
    """(K, m) posterior table; row k is P(w_k = . | r) over the candidate set.

    exact-sum marginalizes exact likelihoods over each symbol's subcode;
    wh-sum replaces the likelihood by exp(-d_wh), which is tight when every
    crossover probability is small; wh-max keeps only the nearest codeword
    per subcode.  Symbols whose subcode was fully pruned get zero mass.
    """
    if mode not in APP_MODES:
        raise ValueError(f"unknown APP mode {mode!r}")
    if candidates is not None and len(candidates) == 0:
        raise DegeneratePosteriorError("empty candidate set leaves no posterior mass")
    cand = _candidate_array(code, candidates)
    if mode == "exact-sum":
        score = code.log_likelihoods(r, cand)
    else:
        score = -code.wh_distances(r, cand)

    digits = code.digits[cand]  # (n_cand, K)
    log_mass = np.full((code.K, code.m), -np.inf)
    for k in range(code.K):
        for j in range(code.m):
            sel = score[digits[:, k] == j]
            if sel.size == 0:
                continue
            log_mass[k, j] = sel.max() if mode == "wh-max" else logsumexp(sel)

    rows_max = log_mass.max(axis=1)
    if np.any(np.isneginf(rows_max)):
        raise DegeneratePosteriorError(
            "all candidates pruned for every symbol of some user"
        )
    table = np.exp(log_mass - rows_max[:, None])
    return table / table.sum(axis=1, keepdims=True)


def compute_llrs(r: np.ndarray, code: SpatialCode, candidates=None) -> np.ndarray:
    """(K, q) LLR block for one slot, clamped to +-LLR_CLAMP.

    Entry (k, i) is the LLR of label bit i (MSB first) of user k+1's symbol:
    min weighted distance over the bit=1 subcode union minus the bit=0 one.
    A side emptied by pruning saturates the LLR at the clamp.
    """
    if candidates is not None and len(candidates) == 0:
        raise DegeneratePosteriorError("empty candidate set leaves no posterior mass")
    cand = _candidate_array(code, candidates)
    d = code.wh_distances(r, cand)
    bits = symbol_bit_masks(code, cand)  # (n_cand, K, q)
    d3 = d[:, None, None]
    min1 = np.min(np.where(bits, d3, np.inf), axis=0)
    min0 = np.min(np.where(~bits, d3, np.inf), axis=0)
    return np.clip(min1 - min0, -LLR_CLAMP, LLR_CLAMP)
