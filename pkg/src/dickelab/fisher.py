"""Quantum and classical Fisher information for the quenched oscillator.

The quantum Fisher information of the quench protocol is four times the
vacuum variance of the local generator h_lam = i U^dag (d/dlam U).  For a
quadratic Hamiltonian the generator closes on the span of
{X^2, P^2, XP + PX, 1}: with C = -i[H, H_lam] and D = -i[H, C],

    h_lam = H_lam t + (cos(sqrt(d_eps) t) - 1)/d_eps * C
            - (sin(sqrt(d_eps) t) - sqrt(d_eps) t)/d_eps^{3/2} * D,

where d_eps = 4 omega^2 (1 - r) is the squared gap.  Beyond the critical
coupling d_eps < 0 and the trigonometric factors continue to hyperbolic ones;
the series fallbacks of :mod:`dickelab.numerics` cover the critical point
itself.  The classical Fisher information of a homodyne record is the
signal-to-noise ratio of the quadrature second moment, which is exact for the
zero-mean Gaussian states produced here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .gaussian import DickeParams, variance_and_gradient
from .numerics import coshc_m1, sinhc_m1

PARAMETER_CHOICES = ("omega", "Omega", "g")


@dataclass(frozen=True)
class GapParameter:
    """Squared gap d_eps = 4 omega^2 (1 - r) and its dimensionless form."""

    delta_eps: float
    delta: float


@dataclass(frozen=True)
class LocalGenerator:
    """Coefficients of a quadratic generator on {X^2, P^2, XP+PX, 1}."""

    a_xx: float
    a_pp: float
    a_xp: float
    a_0: float = 0.0


def _check_parameter(lam: str) -> str:
    if lam not in PARAMETER_CHOICES:
        raise ValueError(f"unknown parameter {lam!r}; expected one of {PARAMETER_CHOICES}")
    return lam


def delta_epsilon(p: DickeParams) -> GapParameter:
    """Squared energy gap of the quadratic model; negative beyond g_c."""
    delta = 4.0 * (1.0 - p.coupling_ratio)
    return GapParameter(delta_eps=p.omega**2 * delta, delta=delta)


def _hamiltonian_coeffs(p: DickeParams) -> tuple[float, float, float]:
    """(X^2, P^2, XP+PX) coefficients of the quadratic Hamiltonian."""
    return 0.5 * p.omega * (1.0 - p.coupling_ratio), 0.5 * p.omega, 0.0


def _drive_coeffs(p: DickeParams, lam: str) -> tuple[float, float, float]:
    """Coefficients of H_lam = dH/dlam for the chosen parameter."""
    if lam == "omega":
        return 0.5, 0.5, 0.0
    if lam == "Omega":
        return p.g**2 / (2.0 * p.Omega**2), 0.0, 0.0
    return -p.g / p.Omega, 0.0, 0.0


def _commutator(q1, q2) -> tuple[float, float, float]:
    """Coefficients of -i[q1, q2] for quadratic forms q1, q2.

    The algebra closes: [X^2, P^2] = 2i(XP+PX), [X^2, XP+PX] = 4i X^2 and
    [P^2, XP+PX] = -4i P^2.
    """
    a1, b1, c1 = q1
    a2, b2, c2 = q2
    return (
        4.0 * (a1 * c2 - c1 * a2),
        -4.0 * (b1 * c2 - c1 * b2),
        2.0 * (a1 * b2 - b1 * a2),
    )


def local_generator(p: DickeParams, lam: str, t: float) -> LocalGenerator:
    """Local generator of the quench, continued smoothly through g = g_c."""
    _check_parameter(lam)
    if t < 0.0:
        raise ValueError("t must be non-negative")
    d_eps = delta_epsilon(p).delta_eps
    h = _hamiltonian_coeffs(p)
    h_lam = _drive_coeffs(p, lam)
    c_op = _commutator(h, h_lam)
    d_op = _commutator(h, c_op)
    # (cos(sqrt(d)t)-1)/d and -(sin(sqrt(d)t)-sqrt(d)t)/d^{3/2} as entire maps
    x = -d_eps * t * t
    f_c = -t * t * coshc_m1(x)
    f_d = t**3 * sinhc_m1(x)
    return LocalGenerator(
        a_xx=t * h_lam[0] + f_c * c_op[0] + f_d * d_op[0],
        a_pp=t * h_lam[1] + f_c * c_op[1] + f_d * d_op[1],
        a_xp=t * h_lam[2] + f_c * c_op[2] + f_d * d_op[2],
        a_0=0.0,
    )


def qfi_from_generator(gen: LocalGenerator) -> float:
    """QFI = 4 Var_vac of a quadratic generator.

    On the vacuum the fourth moments factorize (Wick):
    Var(X^2) = Var(P^2) = 1/2, Cov(X^2, P^2) = -1/2 (symmetrized) and
    Var(XP+PX) = 2, all cross terms with XP+PX vanishing, which collapses to
    Var = (a_xx - a_pp)^2 / 2 + 2 a_xp^2.
    """
    return 2.0 * (gen.a_xx - gen.a_pp) ** 2 + 8.0 * gen.a_xp**2


def qfi_quench(p: DickeParams, lam: str, t: float) -> float:
    """QFI of the quench protocol for parameter ``lam`` at time ``t``."""
    return qfi_from_generator(local_generator(p, lam, t))


def qfi_heuristic_superradiant(p: DickeParams, lam: str, t: float) -> float:
    """QFI from the exp/2 surrogate generator, defined only beyond g_c.

    Both trigonometric factors of the exact generator are replaced by
    exp(sqrt(|d_eps|) t)/2, the crude large-time shadow of cosh and sinh.
    Kept verbatim as a comparison point; never used inside exact paths.
    """
    _check_parameter(lam)
    if t < 0.0:
        raise ValueError("t must be non-negative")
    d_eps = delta_epsilon(p).delta_eps
    if d_eps >= 0.0:
        raise ValueError("heuristic generator requires g > g_c")
    s = math.sqrt(-d_eps)
    half_exp = 0.5 * math.exp(s * t)
    f_c = (half_exp - 1.0) / abs(d_eps)
    f_d = (half_exp - s * t) / abs(d_eps) ** 1.5
    h_lam = _drive_coeffs(p, lam)
    c_op = _commutator(_hamiltonian_coeffs(p), h_lam)
    d_op = _commutator(_hamiltonian_coeffs(p), c_op)
    gen = LocalGenerator(
        a_xx=t * h_lam[0] + f_c * c_op[0] + f_d * d_op[0],
        a_pp=t * h_lam[1] + f_c * c_op[1] + f_d * d_op[1],
        a_xp=t * h_lam[2] + f_c * c_op[2] + f_d * d_op[2],
    )
    return qfi_from_generator(gen)


def qfi_eigenstate(p: DickeParams, n: int, lam: str) -> float:
    """Closed-form QFI of the n-th squeezed eigenstate, normal phase only."""
    _check_parameter(lam)
    if lam == "g":
        raise ValueError("no closed-form eigenstate QFI for the coupling")
    if n < 0 or int(n) != n:
        raise ValueError("n must be a non-negative integer")
    r = p.coupling_ratio
    if r >= 1.0:
        raise ValueError("eigenstate QFI is defined only for g < g_c")
    lam_value = p.omega if lam == "omega" else p.Omega
    return (1.0 + n + n * n) * r * r / (8.0 * lam_value**2 * (1.0 - r) ** 2)


def _parameter_gradient(p: DickeParams, lam: str) -> tuple[float, float]:
    """(dA/dlam, dB/dlam) for the mode-mixing coefficients A, B."""
    db = {
        "omega": 0.0,
        "Omega": -p.g**2 / (2.0 * p.Omega**2),
        "g": p.g / p.Omega,
    }[lam]
    da = 1.0 if lam == "omega" else -db
    return da, db


def cfi_quadrature(p: DickeParams, lam: str, t: float, phi: float) -> float:
    """Classical Fisher information of the quadrature second-moment estimator.

    For the zero-mean Gaussian state the estimator noise is
    Delta^2(Q^2) = 2 V^2, so F = (dV/dlam)^2 / (2 V^2) with the parametric
    derivative taken analytically through the mode-mixing coefficients.
    """
    _check_parameter(lam)
    v, dv_da, dv_db = variance_and_gradient(p, t, phi)
    da, db = _parameter_gradient(p, lam)
    dv = dv_da * da + dv_db * db
    return dv * dv / (2.0 * v * v)


def cfi_closed_form_sqrt2(omega: float, t: float, phi: float) -> float:
    """CFI for the pure-squeezing quench (g = sqrt(2) g_c, lam = omega).

    2 cos^2(2 phi) sinh^4(wt) / [w^2 (cosh(2wt) - sin(2 phi) sinh(2wt))^2],
    evaluated in exponential-scaled form at large wt to avoid overflow.
    """
    if t < 0.0:
        raise ValueError("t must be non-negative")
    wt = omega * t
    c2 = math.cos(2.0 * phi)
    s2 = math.sin(2.0 * phi)
    if wt <= 20.0:
        sh = math.sinh(wt)
        den = math.cosh(2.0 * wt) - s2 * math.sinh(2.0 * wt)
        return 2.0 * c2 * c2 * sh**4 / (omega**2 * den * den)
    # sinh^2(wt) = e^{2wt}(1-e^{-2wt})^2/4; denominator in the same scaling
    eps = math.exp(-2.0 * wt)
    ratio = (1.0 - eps) ** 2 / (2.0 * (1.0 - s2) + 2.0 * eps * eps * (1.0 + s2))
    return 2.0 * c2 * c2 * ratio * ratio / omega**2


def cfi_large_time(omega: float, phi: float) -> float:
    """Large-time plateau cos^2(2 phi) / (2 w^2 (sin(2 phi) - 1)^2)."""
    s2 = math.sin(2.0 * phi)
    if s2 == 1.0:
        raise ValueError("pole at phi = pi/4")
    return math.cos(2.0 * phi) ** 2 / (2.0 * omega**2 * (s2 - 1.0) ** 2)


def cfi_asymptotic(omega: float, phi: float) -> float:
    """Quadratic-pole asymptote 1 / (2 w^2 (phi - pi/4)^2)."""
    d = phi - 0.25 * math.pi
    if d == 0.0:
        raise ValueError("pole at phi = pi/4")
    return 1.0 / (2.0 * omega**2 * d * d)


def optimal_angle(r: float, omega_t: float) -> float:
    """Analytic homodyne angle for the superradiant branch, r = (g/g_c)^2 > 1.

    phi = arccos(sqrt(f/2)) with
    f = 1 + sqrt(2) |r - 2| sinh(u) / sqrt(2 r^2 sinh^2(u) + 8 (r - 1)),
    u = sqrt(r - 1) * omega_t.  Pass omega_t = inf for the limiting direction
    arccos(sqrt(1 - 1/r)).
    """
    if r <= 1.0:
        raise ValueError("optimal angle is defined for r > 1")
    if math.isinf(omega_t):
        return math.acos(math.sqrt(1.0 - 1.0 / r))
    if omega_t <= 0.0:
        raise ValueError("omega_t must be positive (or inf for the limit)")
    u = math.sqrt(r - 1.0) * omega_t
    if u > 350.0:
        f = 1.0 + abs(r - 2.0) / r
    else:
        sh = math.sinh(u)
        f = 1.0 + math.sqrt(2.0) * abs(r - 2.0) * sh / math.sqrt(
            2.0 * r * r * sh * sh + 8.0 * (r - 1.0)
        )
    return math.acos(math.sqrt(min(max(f / 2.0, 0.0), 1.0)))


def scan_optimal_angle(p: DickeParams, lam: str, t: float, grid: float = 1e-6):
    """Grid search plus golden-section argmax of the CFI over phi in [0, pi).

    ``grid`` is the refinement tolerance on the returned angle.  Returns
    (phi_opt, cfi_max).
    """
    _check_parameter(lam)
    if grid <= 0.0:
        raise ValueError("grid tolerance must be positive")
    n_coarse = 4096
    step = math.pi / n_coarse
    best_phi, best_val = 0.0, -1.0
    for k in range(n_coarse):
        phi = k * step
        val = cfi_quadrature(p, lam, t, phi)
        if val > best_val:
            best_phi, best_val = phi, val
    lo, hi = best_phi - step, best_phi + step

    inv_gr = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - inv_gr * (hi - lo)
    x2 = lo + inv_gr * (hi - lo)
    f1 = cfi_quadrature(p, lam, t, x1)
    f2 = cfi_quadrature(p, lam, t, x2)
    while hi - lo > grid:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + inv_gr * (hi - lo)
            f2 = cfi_quadrature(p, lam, t, x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - inv_gr * (hi - lo)
            f1 = cfi_quadrature(p, lam, t, x1)
    phi_opt = 0.5 * (lo + hi) % math.pi
    return phi_opt, cfi_quadrature(p, lam, t, phi_opt)
