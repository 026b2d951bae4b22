"""Exact truncated-Hilbert-space oracle for the full and reduced models.

Everything in this module is deliberately independent of the closed forms in
:mod:`dickelab.gaussian` and :mod:`dickelab.fisher`: Hamiltonians are built as
sparse matrices on a photon-number (optionally tensor collective-spin) basis,
propagated by dense eigendecomposition (small dimensions) or by sparse
exponential action (large ones, with an in-house Lanczos stepper as a
cross-check backend), and Fisher information is extracted from
finite-difference state overlaps or from the spectral sum.  The cross checks
between the two layers are the package's main correctness argument.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh, expm

from .gaussian import DickeParams

DENSE_LIMIT = 4000           # above this dimension propagation is iterative
TAIL_TOL = 1e-10             # accepted occupation above cutoff-10
NORM_TOL = 1e-10


@dataclass(frozen=True)
class FockBasisSpec:
    """Truncated basis: photons 0..cutoff, tensor a (2S+1)-level spin block."""

    cutoff: int
    spin_levels: int = 1
    dimension_cap: int = 10**6

    def __post_init__(self):
        if self.cutoff < 1 or int(self.cutoff) != self.cutoff:
            raise ValueError("cutoff must be an integer >= 1")
        if self.spin_levels < 1 or int(self.spin_levels) != self.spin_levels:
            raise ValueError("spin_levels must be an integer >= 1")
        if self.dimension > self.dimension_cap:
            raise ValueError(
                f"basis dimension {self.dimension} exceeds cap {self.dimension_cap}"
            )

    @property
    def dimension(self) -> int:
        return (self.cutoff + 1) * self.spin_levels


def destroy(cutoff: int) -> sp.csr_matrix:
    """Annihilation operator on the truncated photon basis."""
    n = np.arange(1, cutoff + 1, dtype=float)
    return sp.diags(np.sqrt(n), offsets=1, format="csr").astype(complex)


def number_op(cutoff: int) -> sp.csr_matrix:
    return sp.diags(np.arange(cutoff + 1, dtype=float), format="csr").astype(complex)


def quadrature_op(phi: float, cutoff: int) -> sp.csr_matrix:
    """Q(phi) = (a e^{i phi} + a^dag e^{-i phi}) / sqrt(2)."""
    a = destroy(cutoff)
    return (np.exp(1j * phi) * a + np.exp(-1j * phi) * a.getH()) / math.sqrt(2.0)


def spin_matrices(n_spins: int):
    """Collective spin S = N/2 on the (N+1)-dimensional symmetric sector."""
    s = 0.5 * n_spins
    m = np.arange(-s, s + 1.0)
    sz = sp.diags(m, format="csr").astype(complex)
    raise_amp = np.sqrt(s * (s + 1.0) - m[:-1] * (m[:-1] + 1.0))
    sp_plus = sp.diags(raise_amp, offsets=-1, format="csr").astype(complex)
    sx = 0.5 * (sp_plus + sp_plus.getH())
    return sx.tocsr(), sz.tocsr()


def hermiticity_defect(h) -> float:
    diff = (h - h.getH()).tocoo() if sp.issparse(h) else h - h.conj().T
    if sp.issparse(diff):
        return float(np.max(np.abs(diff.data))) if diff.nnz else 0.0
    return float(np.max(np.abs(diff)))


def _checked(h: sp.csr_matrix) -> sp.csr_matrix:
    if hermiticity_defect(h) > 1e-12:
        raise ValueError("constructed Hamiltonian is not Hermitian")
    return h


def build_dicke(p: DickeParams, basis: FockBasisSpec) -> sp.csr_matrix:
    """Full Dicke Hamiltonian w n + Omega Sz + (g/sqrt(N)) (a + a^dag) Sx."""
    if basis.spin_levels != p.n_spins + 1:
        raise ValueError("basis spin_levels must equal n_spins + 1")
    m = basis.cutoff
    eye_ph = sp.identity(m + 1, format="csr", dtype=complex)
    sx, sz = spin_matrices(p.n_spins)
    eye_sp = sp.identity(p.n_spins + 1, format="csr", dtype=complex)
    a = destroy(m)
    h = (
        p.omega * sp.kron(number_op(m), eye_sp)
        + p.Omega * sp.kron(eye_ph, sz)
        + (p.g / math.sqrt(p.n_spins)) * sp.kron(a + a.getH(), sx)
    )
    return _checked(h.tocsr())


def build_effective(p: DickeParams, basis: FockBasisSpec) -> sp.csr_matrix:
    """Frozen-spin photon Hamiltonian (w - g^2/2W) n - (g^2/4W) (a^dag^2 + a^2)."""
    if basis.spin_levels != 1:
        raise ValueError("effective Hamiltonian acts on a photon-only basis")
    m = basis.cutoff
    a = destroy(m)
    a2 = (a @ a).tocsr()
    g2 = p.g**2 / p.Omega
    h = (p.omega - 0.5 * g2) * number_op(m) - 0.25 * g2 * (a2 + a2.getH())
    return _checked(h.tocsr())


def vacuum_spin_down(basis: FockBasisSpec) -> np.ndarray:
    """|0> photon state, spin in the lowest Sz level (first spin index)."""
    v = np.zeros(basis.dimension, dtype=complex)
    v[0] = 1.0
    return v


def tail_population(v: np.ndarray, basis: FockBasisSpec, margin: int = 10) -> float:
    """Occupation above photon level cutoff - margin."""
    probs = np.abs(v.reshape(basis.cutoff + 1, basis.spin_levels)) ** 2
    return float(probs[max(basis.cutoff + 1 - margin, 0):].sum())


def _gershgorin_norm(h: sp.csr_matrix) -> float:
    return float(np.max(np.asarray(np.abs(h).sum(axis=1))))


def _lanczos_expm_step(h, v: np.ndarray, dt: float, krylov: int):
    """One Krylov step of exp(-i h dt) v; returns (vector, error estimate)."""
    beta0 = np.linalg.norm(v)
    basis = np.empty((krylov, v.size), dtype=complex)
    basis[0] = v / beta0
    alphas = np.zeros(krylov)
    betas = np.zeros(krylov)
    k = krylov
    happy = False
    for j in range(krylov):
        w = h @ basis[j]
        alphas[j] = np.real(np.vdot(basis[j], w))
        w = w - alphas[j] * basis[j]
        if j > 0:
            w = w - betas[j - 1] * basis[j - 1]
        # full reorthogonalization keeps the small basis numerically clean
        overlaps = (basis[: j + 1] @ w.conj()).conj()
        w = w - basis[: j + 1].T @ overlaps
        betas[j] = np.linalg.norm(w)
        if betas[j] < 1e-14 * beta0:
            k, happy = j + 1, True
            break
        if j + 1 < krylov:
            basis[j + 1] = w / betas[j]
    t_mat = (
        np.diag(alphas[:k])
        + np.diag(betas[: k - 1], 1)
        + np.diag(betas[: k - 1], -1)
    )
    y = expm(-1j * dt * t_mat)[:, 0]
    err = 0.0 if happy else abs(betas[k - 1] * y[k - 1] * dt)
    return beta0 * (basis[:k].T @ y), err


def _lanczos_series(hs: sp.csr_matrix, v: np.ndarray, ts) -> list[np.ndarray]:
    """Adaptive Lanczos stepping; the in-house cross-check propagator."""
    hnorm = _gershgorin_norm(hs)
    krylov = 64
    tol = 1e-12
    dt_try = 30.0 / hnorm if hnorm > 0 else math.inf
    out = []
    cur, t_cur = v.astype(complex), 0.0
    for t in ts:
        remaining = t - t_cur
        while remaining > 1e-15:
            dt = min(dt_try, remaining)
            step, err = _lanczos_expm_step(hs, cur, dt, krylov)
            halvings = 0
            while err > tol and halvings < 60:
                dt *= 0.5
                halvings += 1
                step, err = _lanczos_expm_step(hs, cur, dt, krylov)
            if err > tol:
                raise RuntimeError(
                    f"Krylov propagator did not converge (residual {err:.3e})"
                )
            cur = step
            remaining -= dt
            dt_try = 2.0 * dt if err < 0.1 * tol else dt
        t_cur = t
        out.append(cur.copy())
    return out


def evolve_series(h, v: np.ndarray, ts, backend: str = "auto") -> list[np.ndarray]:
    """States exp(-i h t) v for each t in the increasing sequence ``ts``.

    ``backend``: "auto" diagonalizes densely up to DENSE_LIMIT and otherwise
    steps with scipy's sparse exponential-action; "lanczos" forces the
    in-house Krylov stepper (kept as an independent cross-check path).
    """
    ts = list(ts)
    if any(t < 0 for t in ts) or any(b < a for a, b in zip(ts, ts[1:])):
        raise ValueError("ts must be non-negative and non-decreasing")
    dim = v.shape[0]
    if backend == "lanczos":
        hs = h.tocsr() if sp.issparse(h) else sp.csr_matrix(h)
        out = _lanczos_series(hs, v, ts)
    elif dim <= DENSE_LIMIT:
        hd = h.toarray() if sp.issparse(h) else np.asarray(h)
        evals, evecs = eigh(hd)
        w = evecs.conj().T @ v
        out = [evecs @ (np.exp(-1j * evals * t) * w) for t in ts]
    else:
        hc = (h if sp.issparse(h) else sp.csr_matrix(h)).tocsc()
        out = []
        cur, t_cur = v.astype(complex), 0.0
        for t in ts:
            if t > t_cur:
                cur = sp.linalg.expm_multiply(-1j * (t - t_cur) * hc, cur)
                t_cur = t
            out.append(cur.copy())
    for t, state in zip(ts, out):
        drift = abs(np.linalg.norm(state) - np.linalg.norm(v))
        if drift > NORM_TOL:
            raise RuntimeError(f"norm drift {drift:.3e} at t={t}")
    return out


def evolve_exact(h, v: np.ndarray, t: float) -> np.ndarray:
    """exp(-i h t) v with norm preservation checked to 1e-10."""
    return evolve_series(h, v, [t])[0]


def ground_state(h):
    """Lowest eigenpair; residual ||H v - E v|| < 1e-9 is enforced."""
    dim = h.shape[0]
    if dim <= DENSE_LIMIT:
        hd = h.toarray() if sp.issparse(h) else np.asarray(h)
        evals, evecs = eigh(hd)
        energy, vec = evals[0], evecs[:, 0]
    else:
        evals, evecs = sp.linalg.eigsh(h, k=1, which="SA")
        energy, vec = evals[0], evecs[:, 0]
    residual = np.linalg.norm(h @ vec - energy * vec)
    if residual > 1e-9:
        raise RuntimeError(f"eigensolver residual {residual:.3e} exceeds 1e-9")
    return float(energy), vec


def expectation(op, v: np.ndarray) -> float:
    return float(np.real(np.vdot(v, op @ v)))


def squeezed_fock_state(xi: float, n: int, cutoff: int) -> np.ndarray:
    """exp{(xi/2)(a^dag^2 - a^2)} |n> for real squeezing xi."""
    a = np.diag(np.sqrt(np.arange(1.0, cutoff + 1)), 1)
    gen = 0.5 * xi * (a.T @ a.T - a @ a)
    vec = np.zeros(cutoff + 1)
    vec[n] = 1.0
    return (expm(gen) @ vec).astype(complex)


def _qfi_overlap(family: Callable[[float], np.ndarray], lam0: float, dlam: float,
                 psi0: np.ndarray) -> float:
    psi_p = family(lam0 + dlam)
    psi_m = family(lam0 - dlam)
    # gauge fix: make <psi0|psi(+-)> real positive before differencing
    for psi in (psi_p, psi_m):
        ov = np.vdot(psi0, psi)
        if abs(ov) > 0:
            psi *= ov.conjugate() / abs(ov)
    dpsi = (psi_p - psi_m) / (2.0 * dlam)
    return 4.0 * float(
        np.real(np.vdot(dpsi, dpsi)) - abs(np.vdot(psi0, dpsi)) ** 2
    )


def qfi_fidelity(family: Callable[[float], np.ndarray], lam0: float, dlam: float):
    """Pure-state QFI from central-difference overlaps of a state family.

    One Richardson refinement (steps dlam and dlam/2) is applied; returns
    (qfi, error_estimate) and warns when the estimate exceeds 1e-3 of the
    value.
    """
    if dlam <= 0.0:
        raise ValueError("dlam must be positive")
    psi0 = family(lam0)
    coarse = _qfi_overlap(family, lam0, dlam, psi0)
    fine = _qfi_overlap(family, lam0, 0.5 * dlam, psi0)
    value = (4.0 * fine - coarse) / 3.0
    err = abs(fine - coarse) / 3.0
    if err > 1e-3 * abs(value):
        warnings.warn(
            f"qfi_fidelity error estimate {err:.3e} above 1e-3 of value {value:.6e}",
            stacklevel=2,
        )
    return value, err


def qfi_spectral(h_family: Callable[[float], sp.csr_matrix], lam0: float) -> float:
    """Ground-state QFI from the spectral sum over excited states.

    4 sum_{n>0} |<psi_n| dH |psi_0>|^2 / (E_n - E_0)^2 with dH by central
    differences on the matrix entries.  Requires a non-degenerate ground
    state: gap > 1e-8 of the spectral width.
    """
    h0 = h_family(lam0)
    dim = h0.shape[0]
    if dim > DENSE_LIMIT:
        raise ValueError("spectral QFI needs the full spectrum; dimension too large")
    hd = h0.toarray() if sp.issparse(h0) else np.asarray(h0)
    evals, evecs = eigh(hd)
    width = evals[-1] - evals[0]
    if evals[1] - evals[0] <= 1e-8 * width:
        raise ValueError("ground state too close to degeneracy for the spectral sum")
    dlam = abs(lam0) * 1e-5 if lam0 != 0.0 else 1e-5
    hp = h_family(lam0 + dlam)
    hm = h_family(lam0 - dlam)
    dh = ((hp - hm) / (2.0 * dlam))
    dh = dh.toarray() if sp.issparse(dh) else np.asarray(dh)
    column = dh @ evecs[:, 0]
    amps = evecs.conj().T @ column
    gaps = evals - evals[0]
    return 4.0 * float(np.sum(np.abs(amps[1:]) ** 2 / gaps[1:] ** 2))


def photon_number_series(p: DickeParams, ts, cutoff_start: int = 400,
                         cutoff_max: int = 1 << 15, effective: bool = False):
    """<n>(t) under the full (or reduced) model with the tail gate enforced.

    Starts at ``cutoff_start`` and doubles the cutoff until the occupation
    above cutoff-10 stays below 1e-10 along the whole trajectory.  Returns
    (values, cutoff_used).
    """
    m = cutoff_start
    while True:
        if effective:
            basis = FockBasisSpec(cutoff=m)
            h = build_effective(p, basis)
        else:
            basis = FockBasisSpec(cutoff=m, spin_levels=p.n_spins + 1)
            h = build_dicke(p, basis)
        n_op = sp.kron(number_op(m), sp.identity(basis.spin_levels, format="csr")).tocsr()
        states = evolve_series(h, vacuum_spin_down(basis), ts)
        worst_tail = max(tail_population(s, basis) for s in states)
        if worst_tail < TAIL_TOL:
            return [expectation(n_op, s) for s in states], m
        if 2 * m > cutoff_max:
            raise RuntimeError(
                f"tail population {worst_tail:.3e} at cutoff {m}; "
                f"doubling would exceed the cap {cutoff_max}"
            )
        m *= 2
