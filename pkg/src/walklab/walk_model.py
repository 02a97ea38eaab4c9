"""Static operators of the decoherent 2D walk: coin, Fourier-picture coin,
shift permutation, Kraus family, and run-configuration validation.

Coin basis convention (fixed throughout): index 0 -> L (x-1), 1 -> R (x+1),
2 -> D (y-1), 3 -> U (y+1). Momentum states are the plane waves
|kx,ky> = (1/N) sum_xy exp(-2*pi*i*(x*kx + y*ky)/N) |x,y>, the sign for which
the Fourier-picture coin below is exactly the one-step fiber operator.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import BadNorm, BadRange, DirectBackendTooLarge

COIN_LABELS = ("L", "R", "D", "U")
COIN_MOVES = ((-1, 0), (1, 0), (0, -1), (0, 1))

KRAUS_MODES = ("sqrt", "paper_literal")
BACKENDS = ("direct", "fourier", "both")

DIRECT_BACKEND_MAX_N = 12

# Product of the standard 1D symmetric coin state with itself; gives a
# symmetric p=0 walk. Runs may override it freely.
DEFAULT_COIN_INIT = 0.5 * np.array([1.0, 1.0j, 1.0j, -1.0], dtype=np.complex128)


@dataclass(frozen=True)
class WalkConfig:
    """Single source of run parameters."""

    n: int
    p: float
    coin_init: np.ndarray = field(default_factory=lambda: DEFAULT_COIN_INIT.copy())
    t_max: int = 0
    kraus_mode: str = "sqrt"
    backend: str = "direct"
    tol: float = 1e-10
    record_stride: int | None = None

    def to_dict(self) -> dict:
        c = np.asarray(self.coin_init, dtype=np.complex128)
        return {
            "n": int(self.n),
            "p": float(self.p),
            "coin_init": [[float(z.real), float(z.imag)] for z in c],
            "t_max": int(self.t_max),
            "kraus_mode": self.kraus_mode,
            "backend": self.backend,
            "tol": float(self.tol),
            "record_stride": self.record_stride,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "WalkConfig":
        coin = d.get("coin_init")
        if coin is None:
            coin_init = DEFAULT_COIN_INIT.copy()
        else:
            coin_init = np.array(
                [complex(c[0], c[1]) if isinstance(c, (list, tuple)) else complex(c) for c in coin],
                dtype=np.complex128,
            )
        return cls(
            n=int(d["n"]),
            p=float(d["p"]),
            coin_init=coin_init,
            t_max=int(d.get("t_max", 0)),
            kraus_mode=d.get("kraus_mode", "sqrt"),
            backend=d.get("backend", "direct"),
            tol=float(d.get("tol", 1e-10)),
            record_stride=d.get("record_stride"),
        )


@dataclass(frozen=True)
class KrausFamily:
    """Five 4x4 coin-space operators A0..A4 plus the completeness defect.

    In sqrt mode sum A_n^dagger A_n = I holds exactly and the defect is ~0.
    In paper_literal mode the defect ((1-p)^2 + p^2 - 1 per diagonal entry)
    is computed and attached, never asserted away.
    """

    operators: tuple
    mode: str
    completeness_defect: float


def build_hadamard2d_coin() -> np.ndarray:
    """The 4x4 coin of the standard 2D Hadamard walk (all entries +-1/2)."""
    h = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / np.sqrt(2.0)
    return np.kron(h, h)


def build_fourier_coin(kx: int, ky: int, n: int) -> np.ndarray:
    """Fourier-picture coin: Diag(e^-iwkx, e^iwkx, e^-iwky, e^iwky) . U_C, w = 2*pi/N."""
    w = 2.0j * np.pi / n
    phases = np.array(
        [np.exp(-w * kx), np.exp(w * kx), np.exp(-w * ky), np.exp(w * ky)],
        dtype=np.complex128,
    )
    return phases[:, None] * build_hadamard2d_coin()


def fourier_coin_table(n: int) -> np.ndarray:
    """All N^2 Fourier-picture coins as an (N, N, 4, 4) array."""
    out = np.empty((n, n, 4, 4), dtype=np.complex128)
    for kx in range(n):
        for ky in range(n):
            out[kx, ky] = build_fourier_coin(kx, ky, n)
    return out


def build_kraus(p: float, mode: str = "sqrt") -> KrausFamily:
    """Decoherence family on the coin space.

    sqrt mode: A0 = sqrt(1-p) I, Aj = sqrt(p) |j><j| (complete by construction).
    paper_literal mode: the diagonals (1-p, ..) and single-entry p diagonals
    exactly as printed, with the completeness defect reported.
    """
    if not 0.0 <= p <= 1.0:
        raise BadRange(f"decoherence rate p={p} outside [0, 1]")
    if mode not in KRAUS_MODES:
        raise BadRange(f"unknown kraus mode {mode!r}")
    eye = np.eye(4, dtype=np.complex128)
    ops = []
    if mode == "sqrt":
        ops.append(np.sqrt(1.0 - p) * eye)
        for j in range(4):
            a = np.zeros((4, 4), dtype=np.complex128)
            a[j, j] = np.sqrt(p)
            ops.append(a)
    else:
        ops.append((1.0 - p) * eye)
        # printed ordering: slots 0, 3, 1, 2
        for j in (0, 3, 1, 2):
            a = np.zeros((4, 4), dtype=np.complex128)
            a[j, j] = p
            ops.append(a)
    total = sum(a.conj().T @ a for a in ops)
    defect = float(np.abs(total - eye).max())
    return KrausFamily(operators=tuple(ops), mode=mode, completeness_defect=defect)


def build_shift(n: int) -> np.ndarray:
    """Shift permutation as an index map on the 4N^2 composite basis.

    perm[i] is the flat index of the basis state |x,y,j> after one move in
    direction j (mod N). Flat layout: (x*N + y)*4 + j, coin fastest.
    """
    if n < 2:
        raise BadRange(f"lattice size n={n} must be >= 2")
    perm = np.empty(4 * n * n, dtype=np.intp)
    for x in range(n):
        for y in range(n):
            base = (x * n + y) * 4
            for j, (dx, dy) in enumerate(COIN_MOVES):
                perm[base + j] = (((x + dx) % n) * n + (y + dy) % n) * 4 + j
    return perm


def validate_config(cfg: WalkConfig) -> WalkConfig:
    """Enforce field invariants; returns a copy with coin_init normalized."""
    if int(cfg.n) != cfg.n or cfg.n < 2:
        raise BadRange(f"lattice size n={cfg.n} must be an integer >= 2")
    if not 0.0 <= cfg.p <= 1.0:
        raise BadRange(f"decoherence rate p={cfg.p} outside [0, 1]")
    if cfg.t_max < 0:
        raise BadRange(f"t_max={cfg.t_max} must be >= 0")
    if cfg.kraus_mode not in KRAUS_MODES:
        raise BadRange(f"unknown kraus mode {cfg.kraus_mode!r}")
    if cfg.backend not in BACKENDS:
        raise BadRange(f"unknown backend {cfg.backend!r}")
    if cfg.tol <= 0:
        raise BadRange(f"tol={cfg.tol} must be positive")
    if cfg.record_stride is not None and cfg.record_stride < 1:
        raise BadRange(f"record_stride={cfg.record_stride} must be >= 1")
    coin = np.asarray(cfg.coin_init, dtype=np.complex128).reshape(-1)
    if coin.shape != (4,):
        raise BadNorm(f"coin_init must have 4 amplitudes, got {coin.shape}")
    if not np.all(np.isfinite(coin.real)) or not np.all(np.isfinite(coin.imag)):
        raise BadNorm("coin_init has non-finite amplitudes")
    norm = float(np.linalg.norm(coin))
    if abs(norm - 1.0) > 1e-6:
        raise BadNorm(f"coin_init norm {norm} is more than 1e-6 away from 1")
    if cfg.backend in ("direct", "both") and cfg.n > DIRECT_BACKEND_MAX_N:
        raise DirectBackendTooLarge(
            f"direct backend capped at N <= {DIRECT_BACKEND_MAX_N}, got N={cfg.n}"
        )
    return replace(cfg, n=int(cfg.n), coin_init=coin / norm)
