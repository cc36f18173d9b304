"""Regular LDPC code construction and decoding.

Codes are (3,6)-regular by default, built by random stub pairing followed by
edge swaps that remove parallel edges and 4-cycles, so the Tanner graph has
girth at least 6.  The parity-check matrix is reduced over GF(2) to obtain a
systematic-form generator; constructions that come out rank deficient are
retried with a fresh pairing.

Decoders: sum-product belief propagation on log-likelihood ratios (positive
LLR favors bit 0) and hard-input majority bit flipping.  Both are iteration
capped and report whether they converged to a valid codeword.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CodeConstructionError, ConfigurationError

VAR_DEGREE = 3
CHECK_DEGREE = 6
MAX_CONSTRUCTION_ATTEMPTS = 30
_TANH_LIM = 1.0 - 1e-12


@dataclass(eq=False)
class LdpcCode:
    h: np.ndarray  # (n_checks, n) uint8 parity-check matrix
    generator: np.ndarray  # (k, n) uint8, g @ h.T == 0 over GF(2)
    message_positions: np.ndarray  # (k,) codeword columns holding the message
    edge_var: np.ndarray  # (n_edges,) variable index, grouped by check
    edge_check: np.ndarray  # (n_edges,) check index, non-decreasing
    check_start: np.ndarray  # (n_checks,) reduceat offsets into the edge arrays
    col_degree: np.ndarray  # (n,) variable node degrees

    @property
    def n(self) -> int:
        return self.h.shape[1]

    @property
    def n_checks(self) -> int:
        return self.h.shape[0]

    @property
    def k(self) -> int:
        return self.generator.shape[0]

    @property
    def rate(self) -> float:
        return self.k / self.n


def _pair_stubs(n: int, n_checks: int, rng: np.random.Generator):
    ev = np.repeat(np.arange(n), VAR_DEGREE)
    ec = np.repeat(np.arange(n_checks), CHECK_DEGREE)[rng.permutation(n * VAR_DEGREE)]
    return ev, ec


def _find_bad_edge(ev: np.ndarray, ec: np.ndarray):
    """Index of an edge participating in a parallel pair or a 4-cycle."""
    seen = {}
    for e, (v, c) in enumerate(zip(ev, ec)):
        key = (v, c)
        if key in seen:
            return e
        seen[key] = e
    pair_seen = {}
    rows = [[] for _ in range(int(ec.max()) + 1)]
    for e, c in enumerate(ec):
        rows[c].append(e)
    for row in rows:
        row_sorted = sorted(row, key=lambda e: ev[e])
        for i in range(len(row_sorted)):
            for j in range(i + 1, len(row_sorted)):
                key = (ev[row_sorted[i]], ev[row_sorted[j]])
                if key in pair_seen:
                    return row_sorted[j]
                pair_seen[key] = row_sorted[j]
    return None


def _repair_graph(ev, ec, rng, max_rounds=2000):
    """Swap check endpoints until no parallel edges or 4-cycles remain."""
    n_edges = len(ev)
    present = set(zip(ev.tolist(), ec.tolist()))
    for _ in range(max_rounds):
        bad = _find_bad_edge(ev, ec)
        if bad is None:
            return True
        for _ in range(200):
            other = int(rng.integers(n_edges))
            v1, c1 = int(ev[bad]), int(ec[bad])
            v2, c2 = int(ev[other]), int(ec[other])
            if v1 == v2 or c1 == c2:
                continue
            if (v1, c2) in present or (v2, c1) in present:
                continue
            present.discard((v1, c1))
            present.discard((v2, c2))
            present.add((v1, c2))
            present.add((v2, c1))
            ec[bad], ec[other] = c2, c1
            break
        else:
            return False
    return False


def _gf2_systematic(h: np.ndarray):
    """Row-reduce h over GF(2); return (reduced, pivot_cols) or None if rank deficient."""
    hw = h.copy().astype(np.uint8)
    n_checks, n = hw.shape
    pivots = []
    row = 0
    for col in range(n):
        pool = np.nonzero(hw[row:, col])[0]
        if pool.size == 0:
            continue
        pr = row + int(pool[0])
        if pr != row:
            hw[[row, pr]] = hw[[pr, row]]
        others = np.nonzero(hw[:, col])[0]
        others = others[others != row]
        if others.size:
            hw[others] ^= hw[row]
        pivots.append(col)
        row += 1
        if row == n_checks:
            break
    if row < n_checks:
        return None
    return hw, np.array(pivots)


def code_from_parity_check(h: np.ndarray) -> LdpcCode:
    """Build the full decoder/encoder structure from a parity-check matrix.

    Raises CodeConstructionError when h is rank deficient (no systematic
    generator exists for the full check set).
    """
    h = np.asarray(h, dtype=np.uint8) % 2
    if h.ndim != 2 or not h.any():
        raise CodeConstructionError("parity-check matrix must be a nonzero 2-D binary array")
    reduced = _gf2_systematic(h)
    if reduced is None:
        raise CodeConstructionError("parity-check matrix is rank deficient")
    hw, pivots = reduced
    n_checks, n = h.shape
    free = np.setdiff1d(np.arange(n), pivots)
    k = n - n_checks
    gen = np.zeros((k, n), dtype=np.uint8)
    gen[np.arange(k), free] = 1
    gen[:, pivots] = hw[:, free].T
    if np.any((gen @ h.T) % 2):
        raise CodeConstructionError("generator does not satisfy the parity checks")

    ec, ev = np.nonzero(h)
    check_start = np.searchsorted(ec, np.arange(n_checks))
    return LdpcCode(
        h=h,
        generator=gen,
        message_positions=free,
        edge_var=ev.astype(np.int64),
        edge_check=ec.astype(np.int64),
        check_start=check_start.astype(np.int64),
        col_degree=h.sum(axis=0).astype(np.int64),
    )


def construct_code(n: int, rate: float = 0.5, seed: int = 0) -> LdpcCode:
    """Random (3,6)-regular code of blocklength n with girth >= 6.

    The degree pair fixes the design rate at 1/2; other rates are rejected.
    """
    if abs(rate - 0.5) > 1e-12:
        raise ConfigurationError(f"(3,6)-regular construction fixes rate=0.5, got {rate}")
    if n < 2 * CHECK_DEGREE or n % 2:
        raise ConfigurationError(f"blocklength must be even and >= {2 * CHECK_DEGREE}, got {n}")
    n_checks = n * VAR_DEGREE // CHECK_DEGREE
    for attempt in range(MAX_CONSTRUCTION_ATTEMPTS):
        rng = np.random.default_rng([seed, attempt])
        ev, ec = _pair_stubs(n, n_checks, rng)
        if not _repair_graph(ev, ec, rng):
            continue
        h = np.zeros((n_checks, n), dtype=np.uint8)
        h[ec, ev] = 1
        try:
            return code_from_parity_check(h)
        except CodeConstructionError:
            continue
    raise CodeConstructionError(
        f"no full-rank girth-6 construction found for n={n} after "
        f"{MAX_CONSTRUCTION_ATTEMPTS} attempts"
    )


def encode(code: LdpcCode, message: np.ndarray) -> np.ndarray:
    message = np.asarray(message, dtype=np.uint8)
    if message.shape != (code.k,):
        raise ValueError(f"message must have shape ({code.k},), got {message.shape}")
    return (message @ code.generator) % 2


def syndrome(code: LdpcCode, bits: np.ndarray) -> np.ndarray:
    """Per-check parities of a candidate word (all zero iff a codeword)."""
    return np.bitwise_and(
        np.add.reduceat(np.asarray(bits, dtype=np.int64)[code.edge_var], code.check_start), 1
    )


def decode_bp(llrs: np.ndarray, code: LdpcCode, max_iter: int = 50):
    """Sum-product decoding; returns (hard_bits, converged).

    An all-zero LLR vector carries no channel information, so it is rejected
    immediately (all-zero word, converged False) rather than reported as a
    trivially satisfied codeword.
    """
    llrs = np.asarray(llrs, dtype=np.float64)
    if llrs.shape != (code.n,):
        raise ValueError(f"llrs must have shape ({code.n},), got {llrs.shape}")
    if not llrs.any():
        return np.zeros(code.n, dtype=np.uint8), False

    ev, ec, start = code.edge_var, code.edge_check, code.check_start
    msg_cv = np.zeros(len(ev))
    total = llrs.copy()
    bits = (total < 0).astype(np.uint8)
    if not syndrome(code, bits).any():
        return bits, True

    for _ in range(max_iter):
        t = np.tanh(0.5 * (total[ev] - msg_cv))
        mag = np.abs(t)
        is_zero = mag < 1e-300
        logm = np.where(is_zero, 0.0, np.log(np.maximum(mag, 1e-300)))
        neg = t < 0.0
        log_sum = np.add.reduceat(logm, start)
        zero_sum = np.add.reduceat(is_zero.astype(np.int64), start)
        neg_sum = np.add.reduceat(neg.astype(np.int64), start)
        # leave-one-out products per edge via the check totals
        excl_zero = zero_sum[ec] - is_zero
        excl_sign = np.where((neg_sum[ec] - neg) % 2 == 0, 1.0, -1.0)
        prod = np.where(excl_zero > 0, 0.0, excl_sign * np.exp(log_sum[ec] - logm))
        msg_cv = 2.0 * np.arctanh(np.clip(prod, -_TANH_LIM, _TANH_LIM))
        total = llrs.copy()
        np.add.at(total, ev, msg_cv)
        bits = (total < 0).astype(np.uint8)
        if not syndrome(code, bits).any():
            return bits, True
    return bits, False


def decode_bit_flipping(bits: np.ndarray, code: LdpcCode, max_iter: int = 50):
    """Majority bit flipping on hard decisions; returns (bits, converged).

    Each round flips every bit whose unsatisfied-check count strictly exceeds
    half its degree; a round with nothing to flip stalls the decoder.
    """
    bits = np.array(bits, dtype=np.uint8)
    if bits.shape != (code.n,):
        raise ValueError(f"bits must have shape ({code.n},), got {bits.shape}")
    for _ in range(max_iter):
        synd = syndrome(code, bits)
        if not synd.any():
            return bits, True
        unsat = np.zeros(code.n, dtype=np.int64)
        np.add.at(unsat, code.edge_var, synd[code.edge_check])
        flip = 2 * unsat > code.col_degree
        if not flip.any():
            return bits, False
        bits[flip] ^= 1
    return bits, not syndrome(code, bits).any()


def write_alist(h: np.ndarray) -> str:
    """Serialize a parity-check matrix in the standard alist text format."""
    h = np.asarray(h, dtype=np.uint8)
    n_checks, n = h.shape
    col_idx = [np.nonzero(h[:, j])[0] + 1 for j in range(n)]
    row_idx = [np.nonzero(h[i])[0] + 1 for i in range(n_checks)]
    col_deg = [len(c) for c in col_idx]
    row_deg = [len(r) for r in row_idx]
    max_col, max_row = max(col_deg), max(row_deg)
    lines = [
        f"{n} {n_checks}",
        f"{max_col} {max_row}",
        " ".join(map(str, col_deg)),
        " ".join(map(str, row_deg)),
    ]
    for c in col_idx:
        lines.append(" ".join(map(str, list(c) + [0] * (max_col - len(c)))))
    for r in row_idx:
        lines.append(" ".join(map(str, list(r) + [0] * (max_row - len(r)))))
    return "\n".join(lines) + "\n"


def parse_alist(text: str) -> np.ndarray:
    """Inverse of write_alist; zero padding entries are ignored.

    The line count and per-column degrees are checked against the header so
    truncated or internally inconsistent files are rejected.
    """
    rows = [line.split() for line in text.splitlines() if line.strip()]
    try:
        n, n_checks = int(rows[0][0]), int(rows[0][1])
        if n < 1 or n_checks < 1:
            raise ValueError("dimensions must be positive")
        if len(rows) != 4 + n + n_checks:
            raise ValueError(f"expected {4 + n + n_checks} lines, got {len(rows)}")
        col_deg = [int(t) for t in rows[2]]
        if len(col_deg) != n:
            raise ValueError("column degree count disagrees with the header")
        h = np.zeros((n_checks, n), dtype=np.uint8)
        for j, line in enumerate(rows[4 : 4 + n]):
            for tok in line:
                i = int(tok)
                if i < 0 or i > n_checks:
                    raise ValueError(f"check index {i} out of range")
                if i:
                    h[i - 1, j] = 1
            if int(h[:, j].sum()) != col_deg[j]:
                raise ValueError(f"column {j} degree disagrees with the header")
    except (IndexError, ValueError) as exc:
        raise ConfigurationError(f"malformed alist data: {exc}") from exc
    return h


def save_alist(h: np.ndarray, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(write_alist(h))


def load_alist(path) -> np.ndarray:
    with open(path, "r", encoding="ascii") as fh:
        return parse_alist(fh.read())
