"""Gaussian engine for the quadratic photon reduction of the Dicke model.

With the collective spin frozen in its lowest state the Dicke Hamiltonian
reduces to a single bosonic mode with Hamiltonian

    H = (omega - g^2/(2 Omega)) n + squeeze terms
      = (omega/2) P^2 + (omega/2) (1 - g^2/g_c^2) X^2   (+ constant),

an oscillator whose stiffness vanishes at the critical coupling
g_c = sqrt(omega * Omega) and becomes negative beyond it.  Everything here is
exact Gaussian phase-space dynamics of that Hamiltonian: vacuum preparation,
symplectic propagation, Bogoliubov mode mixing, quadrature statistics and the
frozen-spin validity diagnostics.

Quadrature convention: X = (a + a^dag)/sqrt(2), P = (a - a^dag)/(i sqrt(2)),
vacuum variance <X^2> = <P^2> = 1/2, and the rotated quadrature is
Q(phi) = (a e^{i phi} + a^dag e^{-i phi})/sqrt(2) = X cos(phi) - P sin(phi).
All operations are pure functions over immutable values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import coshc, sinhc, sinhc_prime

# 2x2 symplectic form in the (X, P) ordering.
SYMPLECTIC_FORM = np.array([[0.0, 1.0], [-1.0, 0.0]])

PURITY_TOL = 1e-10


@dataclass(frozen=True)
class DickeParams:
    """Physical configuration: field frequency, spin splitting, coupling, size."""

    omega: float
    Omega: float
    g: float
    n_spins: int = 1

    def __post_init__(self):
        if not (self.omega > 0.0 and math.isfinite(self.omega)):
            raise ValueError("omega must be positive and finite")
        if not (self.Omega > 0.0 and math.isfinite(self.Omega)):
            raise ValueError("Omega must be positive and finite")
        if not (self.g >= 0.0 and math.isfinite(self.g)):
            raise ValueError("g must be non-negative and finite")
        if int(self.n_spins) != self.n_spins or self.n_spins < 1:
            raise ValueError("n_spins must be an integer >= 1")

    @property
    def g_c(self) -> float:
        """Critical coupling sqrt(omega * Omega)."""
        return math.sqrt(self.omega * self.Omega)

    @property
    def coupling_ratio(self) -> float:
        """r = g^2 / g_c^2; the phase transition sits at r = 1."""
        return self.g**2 / (self.omega * self.Omega)


@dataclass(frozen=True)
class GaussianState:
    """Mean vector and 2x2 covariance of a single mode, (X, P) ordering."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).reshape(2)
        cov = np.array(self.cov, dtype=float).reshape(2, 2)
        if abs(cov[0, 1] - cov[1, 0]) > 1e-12 * max(1.0, float(np.max(np.abs(cov)))):
            raise ValueError("covariance must be symmetric")
        det = float(np.linalg.det(cov))
        if cov[0, 0] <= 0.0 or det <= 0.0:
            raise ValueError("covariance must be positive definite")
        # the 2x2 determinant of a strongly squeezed covariance cancels to
        # 1/4 from entries of scale ||cov||, so the purity gate cannot be
        # tighter than eps * ||cov||^2 in double precision
        float_floor = 100.0 * np.finfo(float).eps * float(np.max(np.abs(cov))) ** 2
        if abs(det - 0.25) > max(PURITY_TOL, float_floor):
            raise ValueError("impure covariance: det(cov) != 1/4")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)


@dataclass(frozen=True)
class QuadraticHamiltonian:
    """H = cxx X^2 + cpp P^2 + cxp (XP + PX) + c0, coefficients in energy units."""

    cxx: float
    cpp: float
    cxp: float = 0.0
    c0: float = 0.0

    def __post_init__(self):
        for name in ("cxx", "cpp", "cxp", "c0"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    def flow_matrix(self) -> np.ndarray:
        """Generator A of the classical flow d/dt (X, P)^T = A (X, P)^T."""
        return np.array(
            [
                [2.0 * self.cxp, 2.0 * self.cpp],
                [-2.0 * self.cxx, -2.0 * self.cxp],
            ]
        )


@dataclass(frozen=True)
class BogoliubovCoeffs:
    """Mode mixing a(t) = u a + v a^dag; canonical iff |u|^2 - |v|^2 = 1."""

    u: complex
    v: complex

    def commutator_defect(self) -> float:
        return abs(abs(self.u) ** 2 - abs(self.v) ** 2 - 1.0)


def vacuum_state() -> GaussianState:
    """The vacuum: zero mean, isotropic covariance diag(1/2, 1/2)."""
    return GaussianState(np.zeros(2), 0.5 * np.eye(2))


def effective_hamiltonian(p: DickeParams) -> QuadraticHamiltonian:
    """Quadratic photon Hamiltonian for the frozen-spin Dicke model.

    Returns cpp = omega/2 and cxx = (omega/2)(1 - r); the X^2 stiffness is
    negative beyond the critical coupling.  The constant c0 is fixed so the
    quadrature form matches the normal-ordered number/squeeze form exactly.
    """
    cxx = 0.5 * p.omega * (1.0 - p.coupling_ratio)
    cpp = 0.5 * p.omega
    return QuadraticHamiltonian(cxx=cxx, cpp=cpp, cxp=0.0, c0=-0.5 * (cxx + cpp))


def squeezing_parameter(p: DickeParams) -> float:
    """Ground-state squeezing xi = -(1/4) ln(1 - r), real only below g_c."""
    r = p.coupling_ratio
    if r >= 1.0:
        raise ValueError("squeezing parameter is real only for g < g_c")
    return -0.25 * math.log(1.0 - r)


def propagator(h: QuadraticHamiltonian, t: float) -> np.ndarray:
    """Symplectic matrix S(t) = exp(A t) for the classical flow of ``h``.

    A is traceless with A^2 = mu^2 I, mu^2 = 4 (cxp^2 - cxx cpp), so
    S = coshc(z) I + t sinhc(z) A with z = mu^2 t^2: trigonometric for a
    trapping Hamiltonian, hyperbolic for an inverted one, and the series
    fallback covers the degenerate point in between.
    """
    if t < 0.0:
        raise ValueError("t must be non-negative")
    a = h.flow_matrix()
    z = 4.0 * (h.cxp**2 - h.cxx * h.cpp) * t * t
    return coshc(z) * np.eye(2) + t * sinhc(z) * a


def evolve(state: GaussianState, h: QuadraticHamiltonian, t: float) -> GaussianState:
    """Propagate a Gaussian state for time ``t`` under ``h``."""
    s = propagator(h, t)
    return GaussianState(s @ state.mean, s @ state.cov @ s.T)


def _mixing_coeffs(p: DickeParams) -> tuple[float, float]:
    """(A, B) with da/dt = -iA a + iB a^dag; A - B tracks the X^2 stiffness."""
    b = p.g**2 / (2.0 * p.Omega)
    return p.omega - b, b


def bogoliubov_coeffs(p: DickeParams, t: float) -> BogoliubovCoeffs:
    """Heisenberg-picture mode mixing for a quench of duration ``t``.

    Closed form u = coshc(z) - i A t sinhc(z), v = i B t sinhc(z) with
    z = (B^2 - A^2) t^2; hyperbolic beyond the critical coupling.
    """
    if t < 0.0:
        raise ValueError("t must be non-negative")
    a_c, b_c = _mixing_coeffs(p)
    z = (b_c * b_c - a_c * a_c) * t * t
    c = coshc(z)
    s = t * sinhc(z)
    return BogoliubovCoeffs(u=complex(c, -a_c * s), v=complex(0.0, b_c * s))


def quadrature_variance(p: DickeParams, t: float, phi: float) -> float:
    """Variance of Q(phi) at time ``t`` for the initial vacuum."""
    v, _, _ = variance_and_gradient(p, t, phi)
    return v


def variance_and_gradient(p: DickeParams, t: float, phi: float):
    """Quadrature variance and its partials w.r.t. the mixing coefficients.

    Returns (V, dV/dA, dV/dB) where (A, B) are the mode-mixing coefficients
    of ``_mixing_coeffs``.  The partials feed the parametric sensitivities of
    the Fisher-information module; they are exact derivatives of the closed
    form, with the same smooth continuation across the critical point.
    """
    if t < 0.0:
        raise ValueError("t must be non-negative")
    a_c, b_c = _mixing_coeffs(p)
    c2phi = math.cos(2.0 * phi)
    s2phi = math.sin(2.0 * phi)
    t2 = t * t
    z = (b_c * b_c - a_c * a_c) * t2
    c = coshc(z)
    s = sinhc(z)
    sp = sinhc_prime(z)

    quad = a_c * a_c + b_c * b_c + 2.0 * a_c * b_c * c2phi
    v = 0.5 * (c * c + t2 * s * s * quad - 2.0 * b_c * t * c * s * s2phi)

    # chain rule through z plus the explicit (A, B) dependence; coshc' = sinhc/2
    dv_dz = 0.5 * (c * s + 2.0 * t2 * s * sp * quad
                   - 2.0 * b_c * t * s2phi * (0.5 * s * s + c * sp))
    dz_da = -2.0 * a_c * t2
    dz_db = 2.0 * b_c * t2
    dv_da = dv_dz * dz_da + 0.5 * t2 * s * s * (2.0 * a_c + 2.0 * b_c * c2phi)
    dv_db = (dv_dz * dz_db
             + 0.5 * (t2 * s * s * (2.0 * b_c + 2.0 * a_c * c2phi)
                      - 2.0 * t * c * s * s2phi))
    return v, dv_da, dv_db


def photon_number(state: GaussianState) -> float:
    """Mean photon number of a Gaussian state."""
    return 0.5 * (
        state.cov[0, 0] + state.cov[1, 1]
        + state.mean[0] ** 2 + state.mean[1] ** 2 - 1.0
    )


@dataclass(frozen=True)
class ValidityReport:
    """Diagnostics for the frozen-spin reduction after a quench.

    ``condition7`` must be small for the initial state to sit in the decoupled
    sector; ``condition8_bound`` caps the photon number up to which the
    reduced dynamics tracks the full model.  The photon cap only binds beyond
    the critical coupling (``bound_applies``); below it the reduced dynamics
    is bounded and the small-parameter check alone decides ``within``.
    """

    condition7: float
    condition8_bound: float
    bound_applies: bool
    within: bool


def check_validity(p: DickeParams, state: GaussianState, eps7: float = 0.01) -> ValidityReport:
    """Evaluate the frozen-spin validity conditions for ``state``."""
    if p.g <= 0.0:
        raise ValueError("validity conditions require g > 0")
    r = p.coupling_ratio
    condition7 = 0.25 * r * p.omega / p.Omega
    bound = (p.n_spins * p.Omega / (32.0 * p.omega)) * (r - 1.0 / r)
    applies = r > 1.0
    within = condition7 < eps7 and (not applies or photon_number(state) < bound)
    return ValidityReport(
        condition7=condition7,
        condition8_bound=bound,
        bound_applies=applies,
        within=within,
    )
