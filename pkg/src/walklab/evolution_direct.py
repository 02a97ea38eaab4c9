"""Ground-truth evolution of the full density operator on the 4N^2 space.

One step is decohere-then-rotate-then-shift, applied without ever
materializing the (4N^2)^2 unitary: the coin channel and coin rotation act
blockwise on the two coin axes and the shift is an index permutation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BasisMismatch
from .walk_model import WalkConfig, build_hadamard2d_coin, build_shift, validate_config

POSITION_COIN = "position_coin"
FOURIER_COIN = "fourier_coin"
COIN_ONLY = "coin_only"
POSITION_ONLY = "position_only"


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian trace-1 PSD matrix on the walk space or a subsystem."""

    matrix: np.ndarray
    basis: str
    n: int | None = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class PositionDistribution:
    """P(x, y) on the N x N torus."""

    n: int
    probs: np.ndarray


def density_invariants(rho: DensityOperator) -> dict:
    """Measured CPTP diagnostics: trace, hermiticity defect, min eigenvalue."""
    m = rho.matrix
    return {
        "trace": float(np.trace(m).real),
        "trace_dev": float(abs(np.trace(m) - 1.0)),
        "herm_dev": float(np.abs(m - m.conj().T).max()),
        "min_eig": float(np.linalg.eigvalsh((m + m.conj().T) / 2).min()),
    }


def purity(rho: DensityOperator) -> float:
    """Tr(rho^2)."""
    m = rho.matrix
    return float(np.einsum("ij,ji->", m, m).real)


def initial_state(cfg: WalkConfig) -> DensityOperator:
    """rho(0) = |0,0><0,0| tensor |psi0><psi0| (pure, launched from the origin)."""
    cfg = validate_config(cfg)
    dim = 4 * cfg.n * cfg.n
    rho = np.zeros((dim, dim), dtype=np.complex128)
    rho[0:4, 0:4] = np.outer(cfg.coin_init, cfg.coin_init.conj())
    return DensityOperator(matrix=rho, basis=POSITION_COIN, n=cfg.n)


def _channel_weights(p: float, kraus_mode: str) -> tuple[float, float]:
    # the diagonal Kraus family acts as rho -> a*rho + b*coin_diag(rho)
    if kraus_mode == "sqrt":
        return 1.0 - p, p
    return (1.0 - p) ** 2, p * p


def _step_matrix(
    m: np.ndarray, n: int, p: float, kraus_mode: str, coin: np.ndarray, inv: np.ndarray
) -> np.ndarray:
    npos = n * n
    r = m.reshape(npos, 4, npos, 4)
    a, b = _channel_weights(p, kraus_mode)
    r = a * r + b * (r * np.eye(4)[None, :, None, :])
    r = np.einsum("ij,ajbl,kl->aibk", coin, r, coin.conj(), optimize=True)
    r = r.reshape(4 * npos, 4 * npos)
    return r[np.ix_(inv, inv)]


def step(rho: DensityOperator, cfg: WalkConfig) -> DensityOperator:
    """One decoherence-then-unitary step of rho(t+1) = sum_n U A_n rho A_n^dagger U^dagger."""
    if rho.basis != POSITION_COIN:
        raise BasisMismatch(f"step expects {POSITION_COIN} basis, got {rho.basis}")
    if rho.dim != 4 * cfg.n * cfg.n:
        raise BasisMismatch(f"dim {rho.dim} does not match N={cfg.n}")
    coin = build_hadamard2d_coin()
    inv = np.argsort(build_shift(cfg.n))
    out = _step_matrix(rho.matrix, cfg.n, cfg.p, cfg.kraus_mode, coin, inv)
    return DensityOperator(matrix=out, basis=POSITION_COIN, n=cfg.n)


def default_record_times(t_max: int, stride: int | None = None) -> list[int]:
    """Recording rule: every step up to t=100, then every 10th, always t_max.

    A positive stride overrides the rule with fixed spacing (plus t_max).
    """
    if stride is not None:
        times = list(range(0, t_max + 1, stride))
    else:
        times = list(range(0, min(t_max, 100) + 1))
        times += list(range(110, t_max + 1, 10))
    if t_max not in times:
        times.append(t_max)
    return times


def evolve(
    cfg: WalkConfig, record_times: list[int] | None = None
) -> list[tuple[int, DensityOperator]]:
    """Run the recurrence, returning (t, rho(t)) at the recorded times."""
    cfg = validate_config(cfg)
    if record_times is None:
        record_times = default_record_times(cfg.t_max, cfg.record_stride)
    wanted = set(record_times)
    coin = build_hadamard2d_coin()
    inv = np.argsort(build_shift(cfg.n))
    rho = initial_state(cfg)
    out = []
    if 0 in wanted:
        out.append((0, rho))
    m = rho.matrix
    for t in range(1, max(wanted, default=0) + 1):
        m = _step_matrix(m, cfg.n, cfg.p, cfg.kraus_mode, coin, inv)
        if t in wanted:
            out.append((t, DensityOperator(matrix=m.copy(), basis=POSITION_COIN, n=cfg.n)))
    return out


def position_distribution(rho: DensityOperator) -> PositionDistribution:
    """P(x,y) = sum_j <x,y,j| rho |x,y,j>."""
    if rho.basis != POSITION_COIN:
        raise BasisMismatch(f"position_distribution expects {POSITION_COIN}, got {rho.basis}")
    n = rho.n if rho.n is not None else int(round(np.sqrt(rho.dim / 4)))
    r = rho.matrix.reshape(n * n, 4, n * n, 4)
    probs = np.einsum("ajaj->a", r).real.reshape(n, n)
    return PositionDistribution(n=n, probs=probs)


def classical_walk_oracle(n: int, t: int) -> PositionDistribution:
    """Independent oracle: t applications of the move-1/4-to-each-neighbor kernel.

    Plain stochastic-vector iteration from (0,0); shares no code with the
    quantum evolution.
    """
    probs = np.zeros((n, n), dtype=np.float64)
    probs[0, 0] = 1.0
    for _ in range(t):
        probs = 0.25 * (
            np.roll(probs, -1, axis=0)
            + np.roll(probs, 1, axis=0)
            + np.roll(probs, -1, axis=1)
            + np.roll(probs, 1, axis=1)
        )
    return PositionDistribution(n=n, probs=probs)
