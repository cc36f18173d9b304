"""Simulation configuration and result records.

A run is described by a SimConfig; configs load from JSON files whose keys
mirror the dataclass fields one-for-one, and every field can be overridden
from the command line.  Result rows serialize to CSV with rates printed at
six significant digits alongside the raw integer counts; wall-clock timings
live in the sidecar metadata so repeated runs produce identical CSV bytes.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .partition import PartitionParams, validate_params

DETECTORS = ("wmd", "soft-wmd", "md", "ml", "zf")
CSIR_MODES = ("perfect", "estimated")

CSV_HEADER = "snr_db,detector,metric,rate,errors,trials,denominator,mean_candidates"
SWEEP_CSV_HEADER = (
    "partition,n_pre,n_wmd,n_total,snr_db,metric,rate,errors,trials,denominator,mean_candidates"
)


def parse_partition(value) -> PartitionParams | None:
    """Accept None/"full", a {"k":…,"q":…} mapping, or a [k_list, q_list] pair."""
    if value is None or value == "full":
        return None
    if isinstance(value, PartitionParams):
        return value
    if isinstance(value, str):
        try:
            value = json.loads(value)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"cannot parse partition spec {value!r}: {exc}") from exc
        return parse_partition(value)
    if isinstance(value, dict):
        try:
            params = PartitionParams(k=tuple(value["k"]), q=tuple(value["q"]))
        except (KeyError, TypeError) as exc:
            raise ConfigurationError(f"partition mapping needs k and q lists: {value!r}") from exc
    elif isinstance(value, (list, tuple)) and len(value) == 2:
        params = PartitionParams(k=tuple(value[0]), q=tuple(value[1]))
    else:
        raise ConfigurationError(f"unrecognized partition spec: {value!r}")
    violations = validate_params(params)
    if violations:
        detail = "; ".join(f"level {v.level}: {v.message}" for v in violations)
        raise ConfigurationError(f"invalid partition parameters: {detail}")
    return params


def partition_to_json(params: PartitionParams | None):
    if params is None:
        return None
    return {"k": list(params.k), "q": list(params.q)}


@dataclass
class SimConfig:
    """Everything a Monte Carlo run needs, minus the subcommand choice."""

    n_users: int = 4
    n_rx: int = 32
    m: int = 4
    snr_db: tuple = (10.0,)
    t_c: int = 1000
    t_t: int = 0
    t_d: int = 1000
    csir: str = "perfect"
    detector: str = "wmd"
    partition: PartitionParams | None = None
    ldpc_n: int = 672
    ldpc_rate: float = 0.5
    ldpc_seed: int = 7
    ldpc_max_iter: int = 50
    ldpc_alist: str | None = None
    frames_per_block: int | None = None  # default: fill t_d with whole frames
    trials: int = 10000
    target_errors: int = 100
    seed: int | None = None
    workers: int = 1
    wave: int = 8
    output: str | None = None

    def __post_init__(self):
        if isinstance(self.snr_db, (int, float)):
            self.snr_db = (float(self.snr_db),)
        else:
            self.snr_db = tuple(float(v) for v in self.snr_db)
        self.partition = parse_partition(self.partition)

    def validate(self, coded: bool = False) -> None:
        if self.n_users < 1 or self.n_rx < 1:
            raise ConfigurationError("n_users and n_rx must be positive")
        if self.m < 4 or (self.m & (self.m - 1)) or (self.m.bit_length() - 1) % 2:
            raise ConfigurationError(f"m must be an even power of 2 and >= 4, got {self.m}")
        if not self.snr_db:
            raise ConfigurationError("snr_db must list at least one operating point")
        if self.detector not in DETECTORS:
            raise ConfigurationError(f"detector must be one of {DETECTORS}, got {self.detector!r}")
        if self.csir not in CSIR_MODES:
            raise ConfigurationError(f"csir must be one of {CSIR_MODES}, got {self.csir!r}")
        if self.csir == "estimated" and self.t_t < self.n_users:
            raise ConfigurationError("estimated CSIR needs t_t >= n_users pilot slots")
        if self.t_c != self.t_t + self.t_d:
            raise ConfigurationError(
                f"coherence block must split exactly: t_c={self.t_c} != "
                f"t_t={self.t_t} + t_d={self.t_d}"
            )
        if self.trials < 1 or self.target_errors < 1:
            raise ConfigurationError("trials and target_errors must be positive")
        if self.workers < 1 or self.wave < 1:
            raise ConfigurationError("workers and wave must be positive")
        if self.partition is not None:
            violations = validate_params(self.partition)
            if violations:
                detail = "; ".join(f"level {v.level}: {v.message}" for v in violations)
                raise ConfigurationError(f"invalid partition parameters: {detail}")
        if coded:
            if self.detector == "zf":
                raise ConfigurationError("zf detection is uncoded-only")
            if self.frames_per_block is not None and self.frames_per_block < 1:
                raise ConfigurationError("frames_per_block must be >= 1 when set")
            q = self.m.bit_length() - 1
            # with an external alist the blocklength comes from the file and
            # is re-checked once the matrix is loaded
            if self.ldpc_alist is None:
                if self.ldpc_n % q:
                    raise ConfigurationError(
                        f"ldpc_n={self.ldpc_n} must be a multiple of the {q} bits per symbol"
                    )
                if self.ldpc_n // q > self.t_d:
                    raise ConfigurationError(
                        f"one codeword spans {self.ldpc_n // q} slots but t_d={self.t_d}"
                    )
        elif self.detector == "soft-wmd":
            raise ConfigurationError("soft-wmd produces LLRs and needs a coded run")

    def require_seed(self) -> None:
        if self.seed is None:
            raise ConfigurationError("result-producing runs require an explicit seed")

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["snr_db"] = list(self.snr_db)
        out["partition"] = partition_to_json(self.partition)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "SimConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "SimConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigurationError(f"config {path} must hold a JSON object")
        return cls.from_dict(data)


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _num(x) -> str:
    return str(x) if isinstance(x, (int, np.integer)) else _fmt(x)


@dataclass
class ResultRow:
    snr_db: float
    detector: str
    metric: str  # "ber" or "fer"
    rate: float
    errors: int
    trials: int  # slots (uncoded) or user-frames (coded)
    denominator: int  # bits (ber) or frames (fer); rate = errors/denominator
    mean_candidates: float
    wall_time_s: float = 0.0

    def to_csv(self) -> str:
        return ",".join(
            [
                _fmt(self.snr_db),
                self.detector,
                self.metric,
                _fmt(self.rate),
                str(self.errors),
                str(self.trials),
                str(self.denominator),
                _fmt(self.mean_candidates),
            ]
        )


@dataclass
class SweepRow:
    partition: str  # label, "full" for the unpartitioned arm
    n_pre: int
    n_wmd: int
    n_total: int
    row: ResultRow

    def to_csv(self) -> str:
        return ",".join(
            [
                self.partition,
                _num(self.n_pre),
                _num(self.n_wmd),
                _num(self.n_total),
                _fmt(self.row.snr_db),
                self.row.metric,
                _fmt(self.row.rate),
                str(self.row.errors),
                str(self.row.trials),
                str(self.row.denominator),
                _fmt(self.row.mean_candidates),
            ]
        )
