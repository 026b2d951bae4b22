"""Shared oracles and helpers for the test suite."""

import math
from contextlib import contextmanager

import numpy as np
from scipy.linalg import eigh

from dickelab import DickeParams, FockBasisSpec, build_effective, fock, numerics
from dickelab.fock import quadrature_op, vacuum_spin_down


@contextmanager
def forced_series():
    """Route all entire-function helpers through their Taylor fallbacks."""
    saved = numerics.SERIES_CUTOFF
    numerics.SERIES_CUTOFF = 1.0
    try:
        yield
    finally:
        numerics.SERIES_CUTOFF = saved


def replace_param(p: DickeParams, lam: str, value: float) -> DickeParams:
    kwargs = dict(omega=p.omega, Omega=p.Omega, g=p.g, n_spins=p.n_spins)
    kwargs[lam] = value
    return DickeParams(**kwargs)


def param_value(p: DickeParams, lam: str) -> float:
    return {"omega": p.omega, "Omega": p.Omega, "g": p.g}[lam]


def quench_family(p: DickeParams, lam: str, t: float, cutoff: int):
    """lam -> exp(-i H_eff(lam) t)|0> on the truncated photon basis."""

    def family(lam_value):
        q = replace_param(p, lam, lam_value)
        basis = FockBasisSpec(cutoff=cutoff)
        h = build_effective(q, basis)
        return fock.evolve_exact(h, vacuum_spin_down(basis), t)

    return family


def unitary_derivative_generator(p: DickeParams, lam: str, t: float,
                                 cutoff: int = 600, block: int = 8):
    """Quadratic-form coefficients of i U^dag dU/dlam fitted from matrices.

    The unitary of the truncated reduced Hamiltonian is differenced in lam
    and the generator matrix is least-squares fitted on a low Fock block
    against {X^2, P^2, XP+PX, 1}.  The block must stay well below the
    cutoff divided by the squeezing amplification over time t.
    """

    def unitary(lam_value):
        q = replace_param(p, lam, lam_value)
        h = build_effective(q, FockBasisSpec(cutoff=cutoff)).toarray()
        evals, evecs = eigh(h)
        return evecs @ np.diag(np.exp(-1j * evals * t)) @ evecs.conj().T

    lam0 = param_value(p, lam)
    step = 1e-6 * lam0
    du = (unitary(lam0 + step) - unitary(lam0 - step)) / (2.0 * step)
    gen_mat = 1j * unitary(lam0).conj().T @ du
    x_op = quadrature_op(0.0, cutoff).toarray()
    p_op = quadrature_op(-0.5 * math.pi, cutoff).toarray()
    mats = [x_op @ x_op, p_op @ p_op, x_op @ p_op + p_op @ x_op, np.eye(cutoff + 1)]
    window = slice(0, block)
    design = np.column_stack([m[window, window].ravel() for m in mats])
    coeffs, *_ = np.linalg.lstsq(design, gen_mat[window, window].ravel(), rcond=None)
    assert np.max(np.abs(coeffs.imag)) < 1e-6
    return coeffs.real
