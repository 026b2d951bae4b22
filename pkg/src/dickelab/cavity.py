"""Transversely pumped cavity-BEC system mapped onto the quadratic machinery.

The two-mode reduction of a pumped condensate in a single-mode cavity is a
Dicke model with the roles omega -> -delta_c, Omega -> omega_R (recoil) and
g -> y = sqrt(2N) eta, up to a fixed phase-space rotation: the pump couples
through i(a^dag - a), i.e. through P instead of X.  After that rotation the
frozen-spin reduction is the standard inverted oscillator with critical
coupling y_c = sqrt(-omega_R delta_c), so all Gaussian and Fisher-information
tools apply verbatim to the rotated frame.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

from .gaussian import DickeParams, QuadraticHamiltonian


@dataclass(frozen=True)
class CavityParams:
    """Pumped-cavity configuration.

    delta_c: effective cavity detuning (negative for a superradiant
    transition); omega_R: atomic recoil frequency; u: dispersive shift
    N U_0 / 4; eta: pump-cavity coupling; n_atoms: condensate size.
    """

    delta_c: float
    omega_R: float
    u: float
    eta: float
    n_atoms: int

    def __post_init__(self):
        if not math.isfinite(self.delta_c):
            raise ValueError("delta_c must be finite")
        if not (self.omega_R > 0.0 and math.isfinite(self.omega_R)):
            raise ValueError("omega_R must be positive")
        if not (self.eta >= 0.0 and math.isfinite(self.eta)):
            raise ValueError("eta must be non-negative")
        if int(self.n_atoms) != self.n_atoms or self.n_atoms < 1:
            raise ValueError("n_atoms must be an integer >= 1")

    @property
    def y(self) -> float:
        """Collective pump coupling sqrt(2N) eta."""
        return math.sqrt(2.0 * self.n_atoms) * self.eta

    @property
    def y_c(self) -> float:
        """Critical coupling sqrt(-omega_R delta_c); real only for delta_c < 0."""
        if self.delta_c >= 0.0:
            raise ValueError("critical coupling requires delta_c < 0")
        return math.sqrt(-self.omega_R * self.delta_c)

    @property
    def dispersive_shift_negligible(self) -> bool:
        return abs(self.u) < abs(self.delta_c)


def _require_red_detuning(c: CavityParams):
    if c.delta_c >= 0.0:
        raise ValueError("mapping requires delta_c < 0")
    if not c.dispersive_shift_negligible:
        warnings.warn(
            "dispersive shift |u| >= |delta_c|; dropping it anyway", stacklevel=3
        )


def equivalent_dicke_params(c: CavityParams) -> DickeParams:
    """Dicke parameters of the rotated cavity model: (|delta_c|, omega_R, y, N)."""
    _require_red_detuning(c)
    return DickeParams(
        omega=-c.delta_c, Omega=c.omega_R, g=c.y, n_spins=c.n_atoms
    )


def map_to_quadratic(c: CavityParams) -> QuadraticHamiltonian:
    """Frozen-spin photon Hamiltonian of the cavity in the rotated frame.

    cpp = |delta_c|/2 and cxx = (|delta_c|/2)(1 - (y/y_c)^2): the oscillator
    inverts at the self-organization threshold.  The rotation X <-> P that
    absorbs the i(a^dag - a) coupling phase carries no physical content.
    """
    _require_red_detuning(c)
    half = -0.5 * c.delta_c
    ratio_sq = (c.y / c.y_c) ** 2
    cxx = half * (1.0 - ratio_sq)
    return QuadraticHamiltonian(cxx=cxx, cpp=half, cxp=0.0, c0=-0.5 * (cxx + half))


def gap_squared(c: CavityParams) -> float:
    """Squared-gap analogue 4 delta_c^2 (1 - (y/y_c)^2); negative when pumped
    beyond threshold."""
    _require_red_detuning(c)
    return 4.0 * c.delta_c**2 * (1.0 - (c.y / c.y_c) ** 2)


def gap_linear_form(c: CavityParams) -> complex:
    """The one-power frequency form 4 delta_c sqrt(1 - (y/y_c)^2), kept for
    reference; imaginary beyond threshold."""
    _require_red_detuning(c)
    return 4.0 * c.delta_c * cmath.sqrt(1.0 - (c.y / c.y_c) ** 2)


def qfi_growth_exponent(c: CavityParams) -> float:
    """Closed-form growth rate 8 sqrt(2) sqrt(N |delta_c| / omega_R) eta.

    Meaningful deep in the superradiant regime; a warning is raised when
    (y/y_c)^2 < 4.
    """
    if c.delta_c >= 0.0:
        raise ValueError("growth exponent requires delta_c < 0")
    if (c.y / c.y_c) ** 2 < 4.0:
        warnings.warn(
            "growth exponent assumes (y/y_c)^2 >> 1; requested point has "
            f"(y/y_c)^2 = {(c.y / c.y_c) ** 2:.3g}",
            stacklevel=2,
        )
    return 8.0 * math.sqrt(2.0) * math.sqrt(
        c.n_atoms * abs(c.delta_c) / c.omega_R
    ) * c.eta
