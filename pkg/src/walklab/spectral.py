"""Matrix representations of the per-quadruple superoperator, spectra, the
quartic characteristic polynomial of the 1D reference matrix, and the claim
audits (contraction, unit-circle classification, tensor factorization,
long-run block limits).

Audits never assert doubtful claims: every report row carries the measured
number next to the claimed condition, and disagreements land in a violations
list instead of an exception.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import BadRange
from .walk_model import DEFAULT_COIN_INIT, build_fourier_coin, build_kraus

UNIT_CIRCLE_TOL = 1e-8   # membership: |lambda| within this of 1
CLASS_TOL = 1e-6         # assignment to the +1 / -1 classes

_PAULI = (
    np.eye(2, dtype=np.complex128),
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


def pauli_tensor_basis() -> list[np.ndarray]:
    """Orthonormal basis (sigma_a tensor sigma_b)/2, lexicographic in (a, b)."""
    return [np.kron(a, b) / 2.0 for a in _PAULI for b in _PAULI]


def _vec(m: np.ndarray) -> np.ndarray:
    # column stacking
    return m.flatten(order="F")


def _pauli_change_of_basis() -> np.ndarray:
    w = np.column_stack([_vec(p) for p in pauli_tensor_basis()])
    return w


@dataclass(frozen=True)
class SuperoperatorMatrix:
    """16x16 representation of one step of the block map at a quadruple."""

    matrix: np.ndarray
    quadruple: tuple
    p: float
    basis: str


def build_superoperator(
    quadruple: tuple, p: float, n: int, basis: str = "elementary", kraus_mode: str = "sqrt"
) -> SuperoperatorMatrix:
    """Matrix M with vec(L(B)) = M vec(B), column-stacked vec.

    basis "elementary" uses the E_ij column-stacking basis; "pauli_tensor"
    conjugates by the (fixed, lexicographic) normalized Pauli tensor basis.
    Eigenvalues are identical in both.
    """
    kx, ky, kxp, kyp = quadruple
    u1 = build_fourier_coin(kx, ky, n)
    u2 = build_fourier_coin(kxp, kyp, n)
    m = np.zeros((16, 16), dtype=np.complex128)
    for a in build_kraus(p, kraus_mode).operators:
        m += np.kron((u2 @ a).conj(), u1 @ a)
    if basis == "pauli_tensor":
        w = _pauli_change_of_basis()
        m = w.conj().T @ m @ w
    elif basis != "elementary":
        raise BadRange(f"unknown superoperator basis {basis!r}")
    return SuperoperatorMatrix(matrix=m, quadruple=tuple(quadruple), p=p, basis=basis)


@dataclass(frozen=True)
class Reference1DMatrix:
    """The printed 4x4 single-pair template in (k, k', q)."""

    matrix: np.ndarray
    k: int
    kp: int
    q: float


def build_reference_1d(k: int, kp: int, p: float, n: int) -> Reference1DMatrix:
    """Fill the template with s/c of 2*pi*(k -+ k')/N and q = 1 - p."""
    q = 1.0 - p
    sm = math.sin(2.0 * math.pi * (k - kp) / n)
    cm = math.cos(2.0 * math.pi * (k - kp) / n)
    sp = math.sin(2.0 * math.pi * (k + kp) / n)
    cp = math.cos(2.0 * math.pi * (k + kp) / n)
    m = np.array(
        [
            [cm, 1j * q * sm, 0, 0],
            [0, 0, q * sp, cp],
            [0, 0, -q * cp, sp],
            [1j * sm, q * cm, 0, 0],
        ],
        dtype=np.complex128,
    )
    return Reference1DMatrix(matrix=m, k=k, kp=kp, q=q)


@dataclass(frozen=True)
class CharPolyParams:
    q: float
    cplus: float
    cminus: float
    splus: float
    sminus: float

    @classmethod
    def from_momenta(cls, k: int, kp: int, p: float, n: int) -> "CharPolyParams":
        return cls(
            q=1.0 - p,
            cplus=math.cos(2.0 * math.pi * (k + kp) / n),
            cminus=math.cos(2.0 * math.pi * (k - kp) / n),
            splus=math.sin(2.0 * math.pi * (k + kp) / n),
            sminus=math.sin(2.0 * math.pi * (k - kp) / n),
        )


def char_poly_coeffs(params: CharPolyParams) -> np.ndarray:
    """Monic quartic coefficients, highest degree first."""
    q, cp, cm = params.q, params.cplus, params.cminus
    return np.array([1.0, q * cp - cm, -2.0 * q * cp * cm, q * (cp - q * cm), q * q])


def char_poly_f(lam: complex, params: CharPolyParams) -> complex:
    """Evaluate the quartic at lam (Horner on the printed coefficients)."""
    out = 0.0 + 0.0j
    for c in char_poly_coeffs(params):
        out = out * lam + c
    return out


def char_poly_roots(params: CharPolyParams) -> np.ndarray:
    """Roots via the companion matrix of the monic quartic."""
    c = char_poly_coeffs(params)
    comp = np.zeros((4, 4), dtype=np.complex128)
    comp[0, :] = -c[1:]
    comp[1:, :-1] = np.eye(3)
    return np.linalg.eigvals(comp)


def char_poly_coeffs_of_matrix(m: np.ndarray) -> np.ndarray:
    """Monic characteristic-polynomial coefficients via Newton's identities.

    Power sums tr(M^k) condition far better than individual eigenvalues at
    repeated roots, so this pins the coefficients to ~1e-15 even where the
    eigenproblem is defective.
    """
    m = np.asarray(m, dtype=np.complex128)
    d = m.shape[0]
    power = np.eye(d, dtype=np.complex128)
    psums = []
    for _ in range(d):
        power = power @ m
        psums.append(np.trace(power))
    elem = [1.0 + 0.0j]
    for k in range(1, d + 1):
        acc = 0.0 + 0.0j
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * elem[k - i] * psums[i - 1]
        elem.append(acc / k)
    return np.array([(-1) ** k * elem[k] for k in range(d + 1)])


def all_quadruples(n: int):
    for kx in range(n):
        for ky in range(n):
            for kxp in range(n):
                for kyp in range(n):
                    yield (kx, ky, kxp, kyp)


def modular_delta(a: int, b: int, n: int) -> int:
    d = abs(a - b) % n
    return min(d, n - d)


def spectrum_sweep(n: int, p: float, kraus_mode: str = "sqrt") -> np.ndarray:
    """Eigenvalues of every quadruple's superoperator, shape (N,N,N,N,16)."""
    out = np.empty((n, n, n, n, 16), dtype=np.complex128)
    for quad in all_quadruples(n):
        m = build_superoperator(quad, p, n, kraus_mode=kraus_mode).matrix
        out[quad] = np.linalg.eigvals(m)
    return out


def subunit_spectral_radius(
    n: int, p: float, unit_tol: float = UNIT_CIRCLE_TOL, kraus_mode: str = "sqrt"
) -> float:
    """Largest eigenvalue modulus strictly below the unit circle.

    Sets the geometric decay rate of every transient; only meaningful for
    p > 0 (at p = 0 the whole spectrum is unitary and 0.0 is returned).
    """
    mods = np.abs(spectrum_sweep(n, p, kraus_mode)).ravel()
    sub = mods[mods < 1.0 - unit_tol]
    return float(sub.max()) if sub.size else 0.0


@dataclass
class SpectralReport:
    """Unit-circle classification of the full quadruple sweep."""

    n: int
    p: float
    tol: float
    unit_tol: float
    class_tol: float
    max_modulus: float
    modulus_violations: list
    unit_eigenvalues: list
    plus_one: dict
    minus_one: dict
    other_unit: list
    violations: list
    eigenvalues: np.ndarray  # raw sweep, kept out of to_dict()

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "tol": self.tol,
            "unit_circle_tol": self.unit_tol,
            "class_tol": self.class_tol,
            "max_modulus": self.max_modulus,
            "modulus_violations": self.modulus_violations,
            "unit_eigenvalues": self.unit_eigenvalues,
            "plus_one": self.plus_one,
            "minus_one": self.minus_one,
            "other_unit": self.other_unit,
            "violations": self.violations,
        }


def audit_proposition1(n: int, p: float, tol: float = 1e-10) -> SpectralReport:
    """Classify every unit-modulus eigenvalue over all N^4 quadruples.

    Hard facts checked: moduli <= 1 + tol; lambda ~ +1 exactly at the N^2
    diagonal quadruples with multiplicity 1. The claimed -1 locations
    (modular deltas N/4, N/4) are compared against the measured ones and any
    mismatch is recorded in `violations`, not raised.
    """
    if not 0.0 < p < 1.0:
        raise BadRange(f"unit-circle classification audited for 0 < p < 1, got p={p}")
    eigs = spectrum_sweep(n, p)
    mods = np.abs(eigs)
    max_modulus = float(mods.max())
    modulus_violations = []
    unit_rows = []
    plus_quads: dict[tuple, int] = {}
    minus_quads: dict[tuple, int] = {}
    other_rows = []
    for quad in all_quadruples(n):
        ev = eigs[quad]
        for lam in ev:
            alam = abs(lam)
            if alam > 1.0 + tol:
                modulus_violations.append({"quadruple": list(quad), "modulus": float(alam)})
            if abs(alam - 1.0) < UNIT_CIRCLE_TOL:
                if abs(lam - 1.0) < CLASS_TOL:
                    cls = "plus_one"
                    plus_quads[quad] = plus_quads.get(quad, 0) + 1
                elif abs(lam + 1.0) < CLASS_TOL:
                    cls = "minus_one"
                    minus_quads[quad] = minus_quads.get(quad, 0) + 1
                else:
                    cls = "other"
                    other_rows.append({"quadruple": list(quad), "value": [lam.real, lam.imag]})
                unit_rows.append(
                    {"quadruple": list(quad), "value": [lam.real, lam.imag], "class": cls}
                )

    violations = [f"modulus {v['modulus']} beyond 1+tol at {v['quadruple']}" for v in modulus_violations]

    diagonal = {q for q in plus_quads if q[0] == q[2] and q[1] == q[3]}
    plus_ok = (
        len(plus_quads) == n * n
        and len(diagonal) == len(plus_quads)
        and all(c == 1 for c in plus_quads.values())
    )
    if not plus_ok:
        extra = sorted(set(plus_quads) - diagonal)
        missing = n * n - len(diagonal)
        multi = sorted(q for q, c in plus_quads.items() if c > 1)
        violations.append(
            "lambda=1 structure off: "
            f"{missing} diagonal quadruples missing, extra at {extra}, multiplicity>1 at {multi}"
        )
    plus_one = {
        "count": len(plus_quads),
        "expected_count": n * n,
        "all_at_diagonal_quadruples": len(diagonal) == len(plus_quads),
        "all_simple": all(c == 1 for c in plus_quads.values()),
        "ok": plus_ok,
    }

    quarter = n // 4 if n % 4 == 0 else None
    minus_rows = []
    deltas = set()
    for q, c in sorted(minus_quads.items()):
        d = (modular_delta(q[0], q[2], n), modular_delta(q[1], q[3], n))
        deltas.add(d)
        minus_rows.append(
            {
                "quadruple": list(q),
                "multiplicity": c,
                "modular_delta": list(d),
                "claimed_quarter_rule": quarter is not None and d == (quarter, quarter),
            }
        )
    claim_quads = (
        [q for q in all_quadruples(n)
         if modular_delta(q[0], q[2], n) == quarter and modular_delta(q[1], q[3], n) == quarter]
        if quarter is not None
        else []
    )
    found_not_claimed = [r for r in minus_rows if not r["claimed_quarter_rule"]]
    claimed_not_found = [list(q) for q in claim_quads if q not in minus_quads]
    if found_not_claimed:
        violations.append(
            f"lambda=-1 found at modular deltas {sorted(deltas)}; "
            f"the |delta|=N/4 rule does not cover {len(found_not_claimed)} of {len(minus_rows)} findings"
        )
    if claimed_not_found:
        violations.append(
            f"no lambda=-1 at {len(claimed_not_found)} quadruples with modular deltas (N/4, N/4)"
        )
    for r in other_rows:
        violations.append(f"unit-modulus eigenvalue not +-1 at {r['quadruple']}: {r['value']}")
    minus_one = {
        "count": len(minus_quads),
        "quadruples": minus_rows,
        "modular_deltas_found": sorted(list(d) for d in deltas),
        "quarter_rule_deltas": [quarter, quarter] if quarter is not None else None,
        "quarter_rule_matches": not found_not_claimed and not claimed_not_found,
        "claimed_but_missing": claimed_not_found,
    }

    return SpectralReport(
        n=n,
        p=p,
        tol=tol,
        unit_tol=UNIT_CIRCLE_TOL,
        class_tol=CLASS_TOL,
        max_modulus=max_modulus,
        modulus_violations=modulus_violations,
        unit_eigenvalues=unit_rows,
        plus_one=plus_one,
        minus_one=minus_one,
        other_unit=other_rows,
        violations=violations,
        eigenvalues=eigs,
    )


def _assignment_distance(a: np.ndarray, b: np.ndarray) -> float:
    cost = np.abs(np.asarray(a)[:, None] - np.asarray(b)[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def default_audit_quadruples(n: int) -> list[tuple]:
    quads = [
        (0, 0, 0, 0),
        (1 % n, 2 % n, 1 % n, 2 % n),
        (0, 0, 1 % n, 2 % n),
        (1 % n, 0, 0, 1 % n),
        (1 % n, 2 % n, 0, 1 % n),
        (0, 0, 0, 1 % n),  # mixed: one delta zero, one nonzero
    ]
    if n % 2 == 0:
        quads.append((0, 0, n // 2, n // 2))
        quads.append((0, 1, n // 2, 1 + n // 2))
    if n % 4 == 0:
        quads.append((0, 0, n // 4, n // 4))
    seen, out = set(), []
    for q in quads:
        if q not in seen:
            seen.add(q)
            out.append(q)
    return out


def audit_factorization(
    n: int, p: float, tol: float = 1e-8, quadruples: list | None = None
) -> dict:
    """Compare each sampled superoperator spectrum against the tensor-square
    candidates: eigenvalue products of the two 1D reference matrices, and the
    4-fold repeated companion roots of the quartic (in either momentum pair).

    Distances are optimal-assignment max distances; outcomes are recorded,
    never presumed.
    """
    if not 0.0 < p <= 1.0:
        raise BadRange(f"factorization audit needs 0 < p <= 1, got p={p}")
    if quadruples is None:
        quadruples = default_audit_quadruples(n)
    rows = []
    for quad in quadruples:
        kx, ky, kxp, kyp = quad
        ev = np.linalg.eigvals(build_superoperator(quad, p, n).matrix)
        e1 = np.linalg.eigvals(build_reference_1d(kx, kxp, p, n).matrix)
        e2 = np.linalg.eigvals(build_reference_1d(ky, kyp, p, n).matrix)
        tensor = np.multiply.outer(e1, e2).ravel()
        fx = np.repeat(char_poly_roots(CharPolyParams.from_momenta(kx, kxp, p, n)), 4)
        fy = np.repeat(char_poly_roots(CharPolyParams.from_momenta(ky, kyp, p, n)), 4)
        d_tensor = _assignment_distance(ev, tensor)
        d_fx = _assignment_distance(ev, fx)
        d_fy = _assignment_distance(ev, fy)
        rows.append(
            {
                "quadruple": list(quad),
                "dist_tensor_product": d_tensor,
                "dist_f4_xpair": d_fx,
                "dist_f4_ypair": d_fy,
                "tensor_matches": d_tensor < tol,
                "max_modulus": float(np.abs(ev).max()),
            }
        )
    return {
        "n": n,
        "p": p,
        "tol": tol,
        "rows": rows,
        "max_dist_tensor_product": max(r["dist_tensor_product"] for r in rows),
        "all_tensor_match": all(r["tensor_matches"] for r in rows),
        "max_modulus": max(r["max_modulus"] for r in rows),
    }


def audit_contraction(
    trials: int, p: float, quadruple: tuple, n: int, seed: int = 0
) -> dict:
    """Frobenius contraction check on random complex-Gaussian blocks.

    Verifies <L(B), L(B)> <= <B, B> + 1e-12 per trial; at p = 0 additionally
    checks equality within 1e-12.
    """
    if trials < 1:
        raise BadRange(f"trials={trials} must be >= 1")
    kx, ky, kxp, kyp = quadruple
    u1 = build_fourier_coin(kx, ky, n)
    u2 = build_fourier_coin(kxp, kyp, n)
    rng = np.random.default_rng(seed)
    b = rng.standard_normal((trials, 4, 4)) + 1j * rng.standard_normal((trials, 4, 4))
    mixed = (1.0 - p) * b + p * (b * np.eye(4))
    lb = u1 @ mixed @ u2.conj().T
    norm_in = np.einsum("tij,tij->t", b.conj(), b).real
    norm_out = np.einsum("tij,tij->t", lb.conj(), lb).real
    growth = norm_out - norm_in
    violations = int(np.sum(growth > 1e-12))
    report = {
        "quadruple": list(quadruple),
        "n": n,
        "p": p,
        "trials": trials,
        "seed": seed,
        "max_growth": float(growth.max()),
        "violations": violations,
        "ok": violations == 0,
    }
    if p == 0.0:
        report["max_equality_defect"] = float(np.abs(growth).max())
        report["equality_ok"] = bool(np.abs(growth).max() <= 1e-12)
    return report


def fiber_classification(quad: tuple, n: int) -> str:
    dx = modular_delta(quad[0], quad[2], n)
    dy = modular_delta(quad[1], quad[3], n)
    if (dx, dy) == (0, 0):
        return "diagonal"
    if n % 2 == 0 and (dx, dy) == (n // 2, n // 2):
        return "half_delta"
    if n % 4 == 0 and (dx, dy) == (n // 4, n // 4):
        return "quarter_delta"
    if dx == 0 or dy == 0:
        return "mixed"
    return "generic"


def audit_block_limits(
    n: int,
    p: float,
    t_max: int = 2000,
    tol: float = 1e-3,
    coin_init: np.ndarray | None = None,
) -> dict:
    """Evolve representative fibers to t_max and record their limits.

    Diagonal fibers are measured against I/4, quarter- and half-delta fibers
    against the sign-corrected diag(1/4), and everything else against 0.
    """
    if not 0.0 < p < 1.0:
        raise BadRange(f"block-limit audit needs 0 < p < 1, got p={p}")
    psi = DEFAULT_COIN_INIT if coin_init is None else np.asarray(coin_init, dtype=np.complex128)
    quads = [q for q in default_audit_quadruples(n)]
    extra = (1 % n, 1 % n, 1 % n, 1 % n)
    if extra not in quads:
        quads.append(extra)
    rows = []
    eye4 = np.eye(4) / 4.0
    for quad in quads:
        kx, ky, kxp, kyp = quad
        u1 = build_fourier_coin(kx, ky, n)
        u2h = build_fourier_coin(kxp, kyp, n).conj().T
        b = np.outer(psi, psi.conj())
        half_norm = None
        for t in range(1, t_max + 1):
            b = u1 @ ((1.0 - p) * b + p * (b * np.eye(4))) @ u2h
            if t == t_max // 2:
                half_norm = float(np.abs(b).max())
        sign = -1.0 if t_max % 2 else 1.0
        cls = fiber_classification(quad, n)
        row = {
            "quadruple": list(quad),
            "class": cls,
            "t_max": t_max,
            "final_max_abs": float(np.abs(b).max()),
            "half_time_max_abs": half_norm,
            "dist_to_quarter_identity": float(np.abs(b - eye4).max()),
            "sign_corrected_dist_to_quarter_identity": float(np.abs(sign * b - eye4).max()),
        }
        if cls == "diagonal":
            row["converged_to_quarter_identity"] = row["dist_to_quarter_identity"] < tol
        elif cls in ("quarter_delta", "half_delta"):
            row["sign_corrected_converged"] = row["sign_corrected_dist_to_quarter_identity"] < tol
            row["decayed_to_zero"] = row["final_max_abs"] < tol
        else:
            row["decayed_to_zero"] = row["final_max_abs"] < tol
        rows.append(row)
    return {"n": n, "p": p, "t_max": t_max, "tol": tol, "rows": rows}
