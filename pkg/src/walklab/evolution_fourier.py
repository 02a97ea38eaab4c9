"""Momentum-space backend: per-quadruple 4x4 coin blocks under the channel
B -> sum_n U_C(kx,ky) A_n B A_n^dagger U_C(kx',ky')^dagger.

Blocks evolve independently, so the full set is stored as one
(N, N, N, N, 4, 4) array indexed [kx, ky, kx', ky']. diagonal_only mode keeps
just the kx=kx', ky=ky' fibers (enough for the coin reduced state over long
horizons) as an (N, N, 4, 4) array.

Reconstruction uses <x,y|kx,ky> = (1/N) exp(-2*pi*i*(x*kx + y*ky)/N) and an
overall 1/N^2 on the block decomposition; that pairing is the one that makes
Tr rho = 1 and reproduces the direct backend exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DiagonalOnlyStored, TooLarge
from .evolution_direct import (
    COIN_ONLY,
    FOURIER_COIN,
    POSITION_COIN,
    DensityOperator,
    PositionDistribution,
)
from .walk_model import WalkConfig, fourier_coin_table, validate_config

RECONSTRUCT_MAX_N = 8


@dataclass(frozen=True)
class FourierBlockSet:
    """The family B(t; kx, ky, kx', ky') of coin-space blocks at one time."""

    n: int
    t: int
    blocks: np.ndarray
    diagonal_only: bool = False


@dataclass(frozen=True)
class MomentumReducedWalker:
    """Walker reduced state in the momentum basis: M[k,k'] = Tr B(k,k') / N^2.

    Entropy is basis independent, so this N^2 x N^2 matrix carries the same
    spectrum as the position-basis walker reduced state.
    """

    n: int
    matrix: np.ndarray


def init_blocks(cfg: WalkConfig, diagonal_only: bool = False) -> FourierBlockSet:
    """Every block starts at |psi0><psi0|."""
    cfg = validate_config(cfg)
    b0 = np.outer(cfg.coin_init, cfg.coin_init.conj())
    shape = (cfg.n, cfg.n, 4, 4) if diagonal_only else (cfg.n, cfg.n, cfg.n, cfg.n, 4, 4)
    blocks = np.broadcast_to(b0, shape).copy()
    return FourierBlockSet(n=cfg.n, t=0, blocks=blocks, diagonal_only=diagonal_only)


def _channel_weights(p: float, kraus_mode: str) -> tuple[float, float]:
    if kraus_mode == "sqrt":
        return 1.0 - p, p
    return (1.0 - p) ** 2, p * p


def _step_array(
    blocks: np.ndarray, coins: np.ndarray, p: float, kraus_mode: str, diagonal_only: bool
) -> np.ndarray:
    a, b = _channel_weights(p, kraus_mode)
    mixed = a * blocks + b * (blocks * np.eye(4))
    coins_h = coins.conj().swapaxes(-1, -2)
    if diagonal_only:
        return coins @ mixed @ coins_h
    return coins[:, :, None, None] @ mixed @ coins_h[None, None, :, :]


def step_blocks(bs: FourierBlockSet, cfg: WalkConfig) -> FourierBlockSet:
    """Advance every block one step; blocks evolve independently."""
    coins = fourier_coin_table(bs.n)
    out = _step_array(bs.blocks, coins, cfg.p, cfg.kraus_mode, bs.diagonal_only)
    return FourierBlockSet(n=bs.n, t=bs.t + 1, blocks=out, diagonal_only=bs.diagonal_only)


def evolve_blocks(
    cfg: WalkConfig, t: int, diagonal_only: bool = False
) -> FourierBlockSet:
    """init_blocks followed by t steps (coin table built once)."""
    cfg = validate_config(cfg)
    bs = init_blocks(cfg, diagonal_only=diagonal_only)
    coins = fourier_coin_table(cfg.n)
    blocks = bs.blocks
    for _ in range(t):
        blocks = _step_array(blocks, coins, cfg.p, cfg.kraus_mode, diagonal_only)
    return FourierBlockSet(n=cfg.n, t=t, blocks=blocks, diagonal_only=diagonal_only)


def _diagonal_fibers(bs: FourierBlockSet) -> np.ndarray:
    if bs.diagonal_only:
        return bs.blocks
    n = bs.n
    k = np.arange(n)
    return bs.blocks[k[:, None], k[None, :], k[:, None], k[None, :]]


def coin_reduced_density(bs: FourierBlockSet) -> DensityOperator:
    """rho_C = (1/N^2) sum_k B(t; k, k): tracing out position keeps diagonal fibers."""
    fibers = _diagonal_fibers(bs)
    rho_c = fibers.sum(axis=(0, 1)) / (bs.n * bs.n)
    return DensityOperator(matrix=rho_c, basis=COIN_ONLY, n=bs.n)


def walker_reduced_density(bs: FourierBlockSet) -> MomentumReducedWalker:
    """Trace out the coin: M[(kx,ky),(kx',ky')] = Tr B / N^2."""
    if bs.diagonal_only:
        raise DiagonalOnlyStored("walker reduction needs the full block set")
    n = bs.n
    traces = np.einsum("abcdll->abcd", bs.blocks)
    return MomentumReducedWalker(n=n, matrix=traces.reshape(n * n, n * n) / (n * n))


def momentum_full_matrix(bs: FourierBlockSet) -> DensityOperator:
    """The full state in the momentum-coin basis: entries B_lm(k,k') / N^2.

    Unitarily equivalent to the position-basis rho(t) (same spectrum, trace,
    and entropy) at any N, without the N^8 reconstruction cost.
    """
    if bs.diagonal_only:
        raise DiagonalOnlyStored("full matrix needs the full block set")
    n = bs.n
    m = bs.blocks.transpose(0, 1, 4, 2, 3, 5).reshape(4 * n * n, 4 * n * n) / (n * n)
    return DensityOperator(matrix=m, basis=FOURIER_COIN, n=n)


def _fourier_kernel(n: int) -> np.ndarray:
    k = np.arange(n)
    return np.exp(-2.0j * np.pi * np.outer(k, k) / n)


def reconstruct_full_rho(bs: FourierBlockSet) -> DensityOperator:
    """Position-coin rho(t) from the blocks (guarded at N <= 8)."""
    if bs.diagonal_only:
        raise DiagonalOnlyStored("reconstruction needs the full block set")
    if bs.n > RECONSTRUCT_MAX_N:
        raise TooLarge(f"reconstruction guarded at N <= {RECONSTRUCT_MAX_N}, got N={bs.n}")
    n = bs.n
    f = _fourier_kernel(n)
    rho = np.einsum(
        "xa,yb,zc,vd,abcdlm->xylzvm",
        f, f, f.conj(), f.conj(), bs.blocks, optimize=True,
    ) / float(n**4)
    return DensityOperator(
        matrix=rho.reshape(4 * n * n, 4 * n * n), basis=POSITION_COIN, n=n
    )


def position_distribution_fourier(bs: FourierBlockSet) -> PositionDistribution:
    """P(x,y) from block traces alone (no N^8 reconstruction)."""
    if bs.diagonal_only:
        raise DiagonalOnlyStored("position distribution needs the full block set")
    n = bs.n
    traces = np.einsum("abcdll->abcd", bs.blocks)
    f = _fourier_kernel(n)
    g = f[:, :, None] * f.conj()[:, None, :]  # g[x, k, k'] pairs the two x-transforms
    probs = np.einsum("abcd,xac,ybd->xy", traces, g, g, optimize=True).real / float(n**4)
    return PositionDistribution(n=n, probs=probs)


def probability_at(bs: FourierBlockSet, x: int, y: int) -> float:
    """P(x, y, t) for a single site."""
    if bs.diagonal_only:
        raise DiagonalOnlyStored("probabilities need the full block set")
    n = bs.n
    traces = np.einsum("abcdll->abcd", bs.blocks)
    f = _fourier_kernel(n)
    gx = f[x, :, None] * f.conj()[x, None, :]
    gy = f[y, :, None] * f.conj()[y, None, :]
    return float(np.einsum("abcd,ac,bd->", traces, gx, gy, optimize=True).real / float(n**4))
