"""Experiment orchestration: one function per CLI/service command, returning
plain JSON-shaped dicts. The service endpoints and the CLI both sit on top of
these, so an HTTP round trip and a library call produce identical data.
"""

from __future__ import annotations

import numpy as np

from .errors import WalkLabError
from .evolution_direct import (
    default_record_times,
    density_invariants,
    evolve,
    position_distribution,
)
from .evolution_fourier import (
    init_blocks,
    momentum_full_matrix,
    position_distribution_fourier,
    step_blocks,
)
from .infotheory import entropy_trace, limit_report
from .walk_model import WalkConfig, validate_config
from . import spectral

SCHEMA_VERSIONS = {
    "evolve": "distribution.v1",
    "entropy": "entropy.v1",
    "spectrum": "spectrum.v1",
    "audit": "audit.v1",
    "limits": "limits.v1",
}


def _meta(command: str, cfg: WalkConfig, seed: int) -> dict:
    return {
        "schema_version": SCHEMA_VERSIONS[command],
        "command": command,
        "seed": int(seed),
        "config": cfg.to_dict(),
    }


def _distribution_rows(t: int, probs: np.ndarray) -> list[dict]:
    # sites carrying no probability (exact structural zeros) are omitted
    n = probs.shape[0]
    return [
        {"t": int(t), "x": int(x), "y": int(y), "p": float(probs[x, y])}
        for x in range(n)
        for y in range(n)
        if probs[x, y] != 0.0
    ]


def _fourier_records(cfg: WalkConfig, times: list[int]):
    wanted = set(times)
    bs = init_blocks(cfg)
    for t in range(0, max(wanted, default=0) + 1):
        if t > 0:
            bs = step_blocks(bs, cfg)
        if t in wanted:
            yield t, bs


def run_evolve(cfg: WalkConfig, seed: int = 0) -> dict:
    """Distribution rows plus per-recorded-step CPTP invariants."""
    cfg = validate_config(cfg)
    times = default_record_times(cfg.t_max, cfg.record_stride)
    rows: list[dict] = []
    invariants: list[dict] = []

    def add_invariants(t: int, rho) -> None:
        inv = density_invariants(rho)
        invariants.append(
            {
                "t": int(t),
                "trace": inv["trace"],
                "herm_dev": inv["herm_dev"],
                "min_eig": inv["min_eig"],
            }
        )

    if cfg.backend in ("direct", "both"):
        direct_dists = {}
        for t, rho in evolve(cfg, record_times=times):
            probs = position_distribution(rho).probs
            direct_dists[t] = probs
            rows.extend(_distribution_rows(t, probs))
            add_invariants(t, rho)
        if cfg.backend == "both":
            for t, bs in _fourier_records(cfg, times):
                diff = np.abs(position_distribution_fourier(bs).probs - direct_dists[t]).max()
                if diff > 1e-10:
                    raise WalkLabError(f"backend disagreement at t={t}: max |dP|={diff:.3e}")
    else:
        for t, bs in _fourier_records(cfg, times):
            rows.extend(_distribution_rows(t, position_distribution_fourier(bs).probs))
            add_invariants(t, momentum_full_matrix(bs))

    out = _meta("evolve", cfg, seed)
    out["rows"] = rows
    out["invariants"] = invariants
    return out


def run_entropy(cfg: WalkConfig, seed: int = 0) -> dict:
    """Entropy and mutual-information series at the recorded steps."""
    cfg = validate_config(cfg)
    trace = entropy_trace(cfg)
    out = _meta("entropy", cfg, seed)
    out["rows"] = [
        {
            "t": int(t),
            "s_total": float(st),
            "s_coin": float(sc),
            "s_walker": float(sw),
            "mutual_info": float(mi),
        }
        for t, st, sc, sw, mi in zip(
            trace.times, trace.s_total, trace.s_coin, trace.s_walker, trace.mutual_info
        )
    ]
    return out


def _eigen_rows(eigs: np.ndarray, n: int) -> list[dict]:
    rows = []
    for quad in spectral.all_quadruples(n):
        vals = sorted(eigs[quad], key=lambda z: (round(z.real, 12), round(z.imag, 12)))
        for lam in vals:
            rows.append(
                {
                    "kx": quad[0],
                    "ky": quad[1],
                    "kxp": quad[2],
                    "kyp": quad[3],
                    "re_lambda": float(lam.real),
                    "im_lambda": float(lam.imag),
                    "modulus": float(abs(lam)),
                }
            )
    return rows


def _audit_payload(cfg: WalkConfig, seed: int, trials: int, block_t_max: int | None) -> dict:
    n, p = cfg.n, cfg.p
    audit: dict = {}
    if 0.0 < p < 1.0:
        prop1 = spectral.audit_proposition1(n, p)
        audit["proposition1"] = prop1.to_dict()
        eigs = prop1.eigenvalues
    else:
        audit["proposition1"] = {"skipped": f"unit-circle classification needs 0 < p < 1, got p={p}"}
        eigs = spectral.spectrum_sweep(n, p, cfg.kraus_mode)
    if 0.0 < p <= 1.0:
        audit["factorization"] = spectral.audit_factorization(n, p)
    else:
        audit["factorization"] = {"skipped": f"factorization audit needs 0 < p <= 1, got p={p}"}
    audit["contraction"] = [
        spectral.audit_contraction(trials, p, (0, 0, 0, 0), n, seed=seed),
        spectral.audit_contraction(trials, p, (0, 0, 1 % n, 2 % n), n, seed=seed + 1),
        spectral.audit_contraction(max(100, trials // 10), 0.0, (0, 0, 1 % n, 2 % n), n, seed=seed + 2),
    ]
    if block_t_max is not None:
        if 0.0 < p < 1.0:
            audit["block_limits"] = spectral.audit_block_limits(
                n, p, t_max=block_t_max, coin_init=cfg.coin_init
            )
        else:
            audit["block_limits"] = {"skipped": f"block-limit audit needs 0 < p < 1, got p={p}"}
    audit["_eigenvalues"] = eigs
    return audit


def run_spectrum(cfg: WalkConfig, seed: int = 0, trials: int = 1000) -> dict:
    """Full eigenvalue table plus the claim audits that ride along with it."""
    cfg = validate_config(cfg)
    audit = _audit_payload(cfg, seed, trials, block_t_max=None)
    eigs = audit.pop("_eigenvalues")
    out = _meta("spectrum", cfg, seed)
    out["rows"] = _eigen_rows(eigs, cfg.n)
    out["audit"] = audit
    return out


def run_audit(
    cfg: WalkConfig, seed: int = 0, trials: int = 1000, block_t_max: int | None = None
) -> dict:
    """All audits, including the long-run block limits."""
    cfg = validate_config(cfg)
    if block_t_max is None:
        block_t_max = cfg.t_max if cfg.t_max > 0 else 2000
    audit = _audit_payload(cfg, seed, trials, block_t_max=block_t_max)
    audit.pop("_eigenvalues")
    out = _meta("audit", cfg, seed)
    out["audit"] = audit
    return out


def run_limits(cfg: WalkConfig, seed: int = 0, t_long: int | None = None) -> dict:
    """Long-run limit comparison table (paper vs forced vs measured)."""
    cfg = validate_config(cfg)
    if t_long is None and cfg.t_max > 0:
        t_long = cfg.t_max
    report = limit_report(cfg, t_long=t_long)
    out = _meta("limits", cfg, seed)
    out["report"] = report.to_dict()
    return out
