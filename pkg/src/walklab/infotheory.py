"""Von Neumann entropy, partial traces, mutual information, and the long-run
limit experiments.

Entropies are in nats throughout (0*ln 0 = 0); eigenvalues in [-1e-9, 0) are
clamped to zero before the log. A bits helper exists for display only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadRange, BasisMismatch, HorizonTooShort, NotDensity, WalkLabError
from .evolution_direct import (
    COIN_ONLY,
    POSITION_COIN,
    POSITION_ONLY,
    DensityOperator,
    default_record_times,
    evolve,
    position_distribution,
)
from .evolution_fourier import (
    coin_reduced_density,
    init_blocks,
    momentum_full_matrix,
    reconstruct_full_rho,
    step_blocks,
    walker_reduced_density,
)
from .numerics import trace_norm
from .walk_model import WalkConfig, validate_config
from . import spectral

EIGENVALUE_FLOOR = -1e-9
MI_FLOOR = -1e-9


def _matrix_of(rho) -> np.ndarray:
    return rho.matrix if hasattr(rho, "matrix") else np.asarray(rho)


def von_neumann_entropy(rho) -> float:
    """-sum lambda ln lambda over the spectrum, in nats.

    Raises NotDensity when an eigenvalue sits below -1e-9 or the trace is
    more than 1e-8 away from 1.
    """
    m = _matrix_of(rho)
    w = np.linalg.eigvalsh((m + m.conj().T) / 2)
    if w.min() < EIGENVALUE_FLOOR:
        raise NotDensity(f"eigenvalue {w.min():.3e} below {EIGENVALUE_FLOOR}")
    if abs(w.sum() - 1.0) > 1e-8:
        raise NotDensity(f"trace {w.sum():.12f} is not 1 within 1e-8")
    w = np.clip(w, 0.0, None)
    pos = w[w > 0.0]
    return float(-(pos * np.log(pos)).sum())


def entropy_bits(nats: float) -> float:
    """Display conversion; everything internal stays in nats."""
    return nats / math.log(2.0)


def partial_trace_coin(rho: DensityOperator) -> DensityOperator:
    """Trace out the coin: the N^2-dim walker reduced state."""
    if rho.basis != POSITION_COIN:
        raise BasisMismatch(f"partial_trace_coin expects {POSITION_COIN}, got {rho.basis}")
    n = rho.n if rho.n is not None else int(round(np.sqrt(rho.dim / 4)))
    r = rho.matrix.reshape(n * n, 4, n * n, 4)
    return DensityOperator(matrix=np.einsum("ajbj->ab", r), basis=POSITION_ONLY, n=n)


def partial_trace_position(rho: DensityOperator) -> DensityOperator:
    """Trace out the walker: the 4x4 coin reduced state."""
    if rho.basis != POSITION_COIN:
        raise BasisMismatch(f"partial_trace_position expects {POSITION_COIN}, got {rho.basis}")
    n = rho.n if rho.n is not None else int(round(np.sqrt(rho.dim / 4)))
    r = rho.matrix.reshape(n * n, 4, n * n, 4)
    return DensityOperator(matrix=np.einsum("ajal->jl", r), basis=COIN_ONLY, n=n)


def mutual_information(s_coin: float, s_walker: float, s_total: float) -> float:
    """S(coin) + S(walker) - S(total), floored at -1e-9 against rounding noise."""
    return max(s_coin + s_walker - s_total, MI_FLOOR)


def trace_norm_distance(r1: DensityOperator, r2: DensityOperator) -> float:
    """Trace norm of the difference; the metric in which entropy is continuous."""
    if r1.basis != r2.basis:
        raise BasisMismatch(f"bases differ: {r1.basis} vs {r2.basis}")
    if r1.dim != r2.dim:
        raise BasisMismatch(f"dims differ: {r1.dim} vs {r2.dim}")
    return trace_norm(r1.matrix - r2.matrix)


@dataclass
class EntropyTrace:
    """Per-step entropy and mutual-information series, in nats."""

    times: list = field(default_factory=list)
    s_total: list = field(default_factory=list)
    s_coin: list = field(default_factory=list)
    s_walker: list = field(default_factory=list)
    mutual_info: list = field(default_factory=list)
    mutual_info_raw: list = field(default_factory=list)
    config: WalkConfig | None = None

    def append(self, t: int, st: float, sc: float, sw: float) -> None:
        self.times.append(t)
        self.s_total.append(st)
        self.s_coin.append(sc)
        self.s_walker.append(sw)
        self.mutual_info_raw.append(sc + sw - st)
        self.mutual_info.append(mutual_information(sc, sw, st))


def _entropy_trace_direct(cfg: WalkConfig, record_times: list[int]) -> EntropyTrace:
    trace = EntropyTrace(config=cfg)
    for t, rho in evolve(cfg, record_times=record_times):
        st = von_neumann_entropy(rho)
        sc = von_neumann_entropy(partial_trace_position(rho))
        sw = von_neumann_entropy(partial_trace_coin(rho))
        trace.append(t, st, sc, sw)
    return trace


def _entropy_trace_fourier(cfg: WalkConfig, record_times: list[int]) -> EntropyTrace:
    trace = EntropyTrace(config=cfg)
    wanted = set(record_times)
    bs = init_blocks(cfg)
    for t in range(0, max(wanted, default=0) + 1):
        if t > 0:
            bs = step_blocks(bs, cfg)
        if t in wanted:
            st = von_neumann_entropy(momentum_full_matrix(bs))
            sc = von_neumann_entropy(coin_reduced_density(bs))
            sw = von_neumann_entropy(walker_reduced_density(bs))
            trace.append(t, st, sc, sw)
    return trace


def entropy_trace(cfg: WalkConfig, record_times: list[int] | None = None) -> EntropyTrace:
    """Run the configured backend and record S(rho), S(coin), S(walker), MI.

    backend "both" runs the two backends and cross-checks every series to
    1e-8 before returning the direct one.
    """
    cfg = validate_config(cfg)
    if record_times is None:
        record_times = default_record_times(cfg.t_max, cfg.record_stride)
    if cfg.backend == "direct":
        return _entropy_trace_direct(cfg, record_times)
    if cfg.backend == "fourier":
        return _entropy_trace_fourier(cfg, record_times)
    direct = _entropy_trace_direct(cfg, record_times)
    fourier = _entropy_trace_fourier(cfg, record_times)
    for name in ("s_total", "s_coin", "s_walker"):
        diff = np.abs(np.array(getattr(direct, name)) - np.array(getattr(fourier, name))).max()
        if diff > 1e-8:
            raise WalkLabError(f"cross-backend {name} mismatch: {diff:.3e}")
    return direct


def required_horizon(rate: float, target: float) -> int:
    """Steps until rate^t < target (1 if the transient is already gone)."""
    if not 0.0 < rate < 1.0:
        return 1
    return max(1, math.ceil(math.log(target) / math.log(rate)))


@dataclass
class LimitReport:
    """Side-by-side comparison of measured long-run values with the claimed
    limits and with the candidates forced by trace normalization."""

    data: dict

    def to_dict(self) -> dict:
        return self.data


def limit_report(
    cfg: WalkConfig,
    t_long: int | None = None,
    offdiag_target: float = 1e-5,
    support_threshold: float = 1e-6,
) -> LimitReport:
    """Evolve to a gap-predicted horizon and report limiting diagonal values,
    off-diagonal mass, asymptotic entropy, MI, and the support lattice.

    Claimed candidates: diagonal 1/(4N) and entropy 1 + ln N for odd N
    (1/N and ln N for even N). Normalization-forced candidates: 1/(4N^2)
    and ln(4N^2), plus the uniform value over the measured support.
    """
    cfg = validate_config(cfg)
    if not 0.0 < cfg.p <= 1.0:
        raise BadRange(f"limit experiments need 0 < p <= 1, got p={cfg.p}")
    n = cfg.n
    rate = spectral.subunit_spectral_radius(n, cfg.p, kraus_mode=cfg.kraus_mode)
    needed = required_horizon(rate, offdiag_target)
    if t_long is None:
        t_long = needed
    if t_long < needed:
        raise HorizonTooShort(
            f"t_long={t_long} below the gap-predicted horizon {needed} "
            f"(rate {rate:.6f}, target {offdiag_target})"
        )

    bs = init_blocks(cfg)
    for _ in range(t_long):
        bs = step_blocks(bs, cfg)
    rho = reconstruct_full_rho(bs)
    m = rho.matrix
    diag = np.diag(m).real
    off = m - np.diag(np.diag(m))
    max_offdiag = float(np.abs(off).max())

    support = diag > support_threshold
    support_size = int(support.sum())
    supported = diag[support]
    mean_diag = float(supported.mean()) if support_size else 0.0
    spread = float((supported.max() - supported.min()) / mean_diag) if support_size else 0.0

    s_total = von_neumann_entropy(rho)
    sc = von_neumann_entropy(partial_trace_position(rho))
    sw = von_neumann_entropy(partial_trace_coin(rho))
    mi = mutual_information(sc, sw, s_total)

    probs = position_distribution(rho).probs
    xs, ys = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    single_axis_mask = (xs + ys - t_long) % 2 == 0
    dual_mask = ((t_long - xs) % 2 == 0) & ((t_long - ys) % 2 == 0)
    mass_on = float(probs[single_axis_mask].sum())
    mass_off = float(probs[~single_axis_mask].sum())
    dual_mass_off = float(probs[~dual_mask].sum())
    site_support = int((probs > support_threshold).sum())

    odd = n % 2 == 1
    data = {
        "n": n,
        "p": cfg.p,
        "t_long": int(t_long),
        "needed_horizon": int(needed),
        "subunit_spectral_radius": rate,
        "offdiag_target": offdiag_target,
        "support_threshold": support_threshold,
        "max_offdiag": max_offdiag,
        "support_size": support_size,
        "diag": {
            "paper": (1.0 / (4 * n)) if odd else (1.0 / n),
            "forced_uniform": 1.0 / (4 * n * n),
            "support_uniform": (1.0 / support_size) if support_size else 0.0,
            "measured_mean": mean_diag,
            "measured_min": float(supported.min()) if support_size else 0.0,
            "measured_max": float(supported.max()) if support_size else 0.0,
            "measured_relative_spread": spread,
        },
        "entropy": {
            "paper": (1.0 + math.log(n)) if odd else math.log(n),
            "forced_uniform": math.log(4 * n * n),
            "support_uniform": math.log(support_size) if support_size else 0.0,
            "measured": s_total,
        },
        "mutual_info": mi,
        "s_coin": sc,
        "s_walker": sw,
        "support_parity": {
            "n_even": not odd,
            "site_support_size": site_support,
            "mass_on_single_axis_class": mass_on,
            "mass_off_single_axis_class": mass_off,
            "single_axis_rule_holds": mass_off < 1e-12,
            "mass_off_dual_parity_class": dual_mass_off,
            "dual_parity_rule_holds": dual_mass_off < 1e-12,
        },
    }
    return LimitReport(data=data)
