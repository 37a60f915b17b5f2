"""Monte-Carlo random-access trials

Each trial draws L distinct codewords, CN(0, 1) fades, optional noise,
decodes the superposition and counts the users that were not recovered.
Trial t draws from its own Philox stream keyed by (seed, t), so results do
not depend on how trials are scheduled across workers.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Literal, Optional, Sequence, Tuple

import logging
import numpy as np
from pydantic import BaseModel, Field
from tqdm import tqdm

from subchirp.codes.baselines import RandomCodebook
from subchirp.codes.bssc import Codebook, codebook_size
from subchirp.config import settings
from subchirp.decoding.decoder import decode_multi, decode_multi_exhaustive
from subchirp.errors import ConfigError, DecodeError, DomainError, SubchirpError
from subchirp.sim.report import wilson_interval

logger = logging.getLogger(__name__)


class TrialConfig(BaseModel):
    """One point of a random-access experiment"""

    m: int = Field(ge=1, le=16)
    L: int = Field(ge=1)
    trials: int = Field(ge=1)
    seed: int = Field(default=settings.DEFAULT_SEED, ge=0, lt=2 ** 64)
    codebook: Literal["bssc", "bc", "random"] = "bssc"
    decoder: Literal["structured", "exhaustive"] = "structured"
    noise_var: float = Field(default=0.0, ge=0.0)


@dataclass(frozen=True)
class TrialStats:
    config: TrialConfig
    users: int
    per_user_errors: int
    per_trial_errors: int
    per_user_ci: Tuple[float, float]
    per_trial_ci: Tuple[float, float]
    mean_decode_us: float

    @property
    def per_user_p(self) -> float:
        return self.per_user_errors / self.users

    @property
    def per_trial_p(self) -> float:
        return self.per_trial_errors / self.config.trials


@dataclass(frozen=True)
class SweepRow:
    config: TrialConfig
    stats: Optional[TrialStats]
    error: Optional[str] = None


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(trial,))))


def draw_channel(rng: np.random.Generator, count: int) -> np.ndarray:
    """i.i.d. circular complex Gaussian with unit variance"""
    return (rng.standard_normal(count) + 1j * rng.standard_normal(count)) / np.sqrt(2.0)


def superpose(vectors: np.ndarray, h: np.ndarray) -> np.ndarray:
    """s = sum_l h_l w_l for codewords stacked as rows"""
    return np.asarray(h, dtype=complex) @ np.asarray(vectors, dtype=complex)


def draw_index(rng: np.random.Generator, size: int) -> int:
    """Uniform id in [0, size) for any Python int size

    Sizes past the int64 range are drawn as 32-bit words with rejection.
    """
    if size < 1:
        raise DomainError("Cannot draw from an empty range")
    if size < 2 ** 63:
        return int(rng.integers(size))
    bits = (size - 1).bit_length()
    words = -(-bits // 32)
    while True:
        value = 0
        for word in rng.integers(0, 2 ** 32, size=words, dtype=np.uint64):
            value = (value << 32) | int(word)
        value >>= 32 * words - bits
        if value < size:
            return value


def draw_distinct(rng: np.random.Generator, size: int, count: int) -> List[int]:
    """`count` distinct uniform ids from [0, size), in draw order"""
    chosen: List[int] = []
    while len(chosen) < count:
        index = draw_index(rng, size)
        if index not in chosen:
            chosen.append(index)
    return chosen


class _Experiment:
    """Codebook and decoder bound to one TrialConfig"""

    def __init__(self, cfg: TrialConfig):
        self.cfg = cfg
        if cfg.codebook == "random" and cfg.decoder == "structured":
            raise ConfigError("Random codebooks have no structured decoder")
        self.structured = None if cfg.codebook == "random" else Codebook(cfg.m, cfg.codebook)
        self.size = codebook_size(cfg.m) if self.structured is None else self.structured.size
        if cfg.L > self.size:
            raise ConfigError(f"L={cfg.L} exceeds the codebook size {self.size}")
        self.random = RandomCodebook(cfg.m, self.size, cfg.seed) if cfg.codebook == "random" else None
        self.matrix = None
        if self.structured is not None and cfg.decoder == "exhaustive":
            self.matrix = self.structured.matrix()

    def vectors(self, ids: Sequence[int]) -> np.ndarray:
        if self.random is not None:
            return self.random.vectors(ids)
        if self.matrix is not None:
            return self.matrix[list(ids)]
        return np.stack([self.structured.vector(k) for k in ids])

    def decode(self, s: np.ndarray) -> List[int]:
        if self.cfg.decoder == "exhaustive":
            rows = self.random if self.random is not None else self.matrix
            return decode_multi_exhaustive(s, rows, self.cfg.L).recovered
        result = decode_multi(s, self.cfg.L, ranks=self.structured.ranks)
        return [self.structured.index(p) for p in result.recovered]

    def run_one(self, trial: int) -> Tuple[int, float]:
        """(missed users, decode seconds) for trial number `trial`"""
        cfg = self.cfg
        rng = trial_rng(cfg.seed, trial)
        ids = draw_distinct(rng, self.size, cfg.L)
        h = draw_channel(rng, cfg.L)
        s = superpose(self.vectors(ids), h)
        if cfg.noise_var > 0:
            s = s + np.sqrt(cfg.noise_var) * draw_channel(rng, s.shape[0])
        start = time.perf_counter()
        try:
            recovered = set(self.decode(s))
        except DecodeError as e:
            logger.debug(f"Trial {trial}: {e}")
            recovered = set()
        elapsed = time.perf_counter() - start
        return sum(1 for k in ids if k not in recovered), elapsed


def run_trials(cfg: TrialConfig, threads: Optional[int] = None) -> TrialStats:
    """
    Run every trial of `cfg` and aggregate the error counts

    Args:
        cfg: Experiment point
        threads: Worker count, settings.worker_count() when omitted

    Returns:
        TrialStats with per-user and per-trial rates and Wilson intervals
    """
    experiment = _Experiment(cfg)
    workers = threads or settings.worker_count()
    logger.info(
        f"Simulating m={cfg.m} L={cfg.L} {cfg.codebook}/{cfg.decoder} "
        f"trials={cfg.trials} workers={workers}"
    )
    with ThreadPoolExecutor(max_workers=workers) as pool:
        outcomes = list(pool.map(experiment.run_one, range(cfg.trials)))

    misses = [miss for miss, _ in outcomes]
    users = cfg.L * cfg.trials
    per_user_errors = sum(misses)
    per_trial_errors = sum(1 for miss in misses if miss)
    stats = TrialStats(
        config=cfg,
        users=users,
        per_user_errors=per_user_errors,
        per_trial_errors=per_trial_errors,
        per_user_ci=wilson_interval(per_user_errors, users),
        per_trial_ci=wilson_interval(per_trial_errors, cfg.trials),
        mean_decode_us=1e6 * sum(t for _, t in outcomes) / cfg.trials,
    )
    logger.info(f"Finished: per-user p={stats.per_user_p:.4g}, per-trial p={stats.per_trial_p:.4g}")
    return stats


def sweep(cfgs: Sequence[TrialConfig], threads: Optional[int] = None, progress: bool = True) -> List[SweepRow]:
    """Run every config in order; a failing row is recorded and the sweep continues"""
    if not cfgs:
        raise ConfigError("Sweep needs at least one configuration")
    rows: List[SweepRow] = []
    for cfg in tqdm(cfgs, desc="sweep", disable=not progress):
        try:
            rows.append(SweepRow(cfg, run_trials(cfg, threads)))
        except SubchirpError as e:
            logger.warning(f"Sweep row m={cfg.m} L={cfg.L} {cfg.codebook}/{cfg.decoder} failed: {e}")
            rows.append(SweepRow(cfg, None, str(e)))
    return rows
