"""Branch-free evaluation of the entire functions behind oscillator propagators.

Every closed form in this package is assembled from cosh(sqrt(x)) and
sinh(sqrt(x))/sqrt(x), which are entire in x: for negative argument they turn
into cos(sqrt(-x)) and sin(sqrt(-x))/sqrt(-x).  Routing all formulas through
these helpers keeps trajectories, generators and their derivatives smooth
across the oscillator-inversion point, where the argument passes through zero
and the naive expressions hit 0/0.
"""

import math

# Below this magnitude the explicit branches lose digits in differenced
# quantities; the truncated series are exact to well beyond double precision.
SERIES_CUTOFF = 1e-6


def coshc(x: float) -> float:
    """cosh(sqrt(x)) for x >= 0, cos(sqrt(-x)) for x < 0."""
    if x > SERIES_CUTOFF:
        return math.cosh(math.sqrt(x))
    if x < -SERIES_CUTOFF:
        return math.cos(math.sqrt(-x))
    return 1.0 + x / 2.0 + x * x / 24.0 + x * x * x / 720.0


def sinhc(x: float) -> float:
    """sinh(sqrt(x))/sqrt(x), continued through x = 0 (value 1)."""
    if x > SERIES_CUTOFF:
        r = math.sqrt(x)
        return math.sinh(r) / r
    if x < -SERIES_CUTOFF:
        r = math.sqrt(-x)
        return math.sin(r) / r
    return 1.0 + x / 6.0 + x * x / 120.0 + x * x * x / 5040.0


def coshc_m1(x: float) -> float:
    """(coshc(x) - 1)/x with the removable singularity at x = 0 filled in."""
    if abs(x) > SERIES_CUTOFF:
        return (coshc(x) - 1.0) / x
    return 0.5 + x / 24.0 + x * x / 720.0 + x * x * x / 40320.0


def sinhc_m1(x: float) -> float:
    """(sinhc(x) - 1)/x with the removable singularity at x = 0 filled in."""
    if abs(x) > SERIES_CUTOFF:
        return (sinhc(x) - 1.0) / x
    return 1.0 / 6.0 + x / 120.0 + x * x / 5040.0 + x * x * x / 362880.0


def sinhc_prime(x: float) -> float:
    """d/dx sinhc(x) = (coshc(x) - sinhc(x))/(2x), continued through x = 0."""
    if abs(x) > SERIES_CUTOFF:
        return (coshc(x) - sinhc(x)) / (2.0 * x)
    return 1.0 / 6.0 + x / 60.0 + x * x / 1680.0 + x * x * x / 90720.0


def linear_fit(xs, ys):
    """Least-squares line through (xs, ys); returns (slope, intercept, r_squared)."""
    n = len(xs)
    if n < 2:
        raise ValueError("need at least two points for a linear fit")
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    sxx = sum((x - mean_x) ** 2 for x in xs)
    if sxx == 0.0:
        raise ValueError("degenerate abscissa for linear fit")
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = mean_y - slope * mean_x
    sstot = sum((y - mean_y) ** 2 for y in ys)
    ssres = sum((y - (slope * x + intercept)) ** 2 for x, y in zip(xs, ys))
    r_squared = 1.0 if sstot == 0.0 else 1.0 - ssres / sstot
    return slope, intercept, r_squared
