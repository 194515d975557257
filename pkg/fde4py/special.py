# -*- coding: utf-8 -*-
__doc__ = """
Numeric special functions needed by the term algebra: Gamma,
log-Gamma, the one-parameter Mittag-Leffler function and the
fractional sine and cosine built on top of it.

Gamma uses a Lanczos rational core (g=7, 9 coefficients) which is
accurate to roughly 1e-15 relative on the positive real axis. The
Mittag-Leffler function is evaluated from its power series:

.. code-block:: python
   :linenos:

   >>> from fde4py.special import mittag_leffler
   >>> mittag_leffler(1.0, 2.0)
   (7.38905609893065+0j)
   >>> mittag_leffler(0.5, 1.0, full_output=True)
   ((5.00898008076228...+0j), 2...e-14)

For negative or imaginary arguments the series terms grow far
beyond the value before they cancel. Once the rounding of those
terms exceeds the accuracy target the value comes from the inverse
Laplace transform of ``s^(alpha-1) / (s^alpha - z)`` instead, taken
along two rays out of the origin with Gauss-Legendre panels. Large
arguments are rejected rather than approximated.
"""
import cmath
import logging
import math

import numpy as np

from fde4py.exc import GammaDomainError, GammaOverflowError, \
     ArgumentTooLargeError, SeriesNonConvergenceError, EvaluationRangeError

__all__ = ['MLConfig', 'gamma', 'log_gamma', 'mittag_leffler',
           'mittag_leffler_array', 'frac_cos', 'frac_sin']

logger = logging.getLogger('fde4py')

LANCZOS_G = 7
LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
SQRT_2PI = math.sqrt(2.0 * math.pi)
LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

# Gamma(x) overflows a double just above this point.
GAMMA_MAX_ARG = 171.62

DEFAULT_EPS = 1e-16
DEFAULT_K_MAX = 2000
DEFAULT_Z_MAX = 50.0
DEFAULT_ACCURACY = 1e-9

MACHINE_EPS = float(np.finfo(float).eps)
# rounding allowance of series term k, in units of (k + 1) MACHINE_EPS
SERIES_ROUNDING = 8.0

# contour rays, tried from the fastest decaying one down
RAY_ANGLES = math.pi * np.array([1.0, 0.9, 0.8, 0.75])
# smallest angle between a ray integrand pole and the real axis worth keeping
RAY_MARGIN = 0.3
MIN_SEPARATION = 0.05
# exp(-RHO_MAX) is below the resolution of any value
RHO_MAX = 45.0
RHO_STEP = 3.0
ORIGIN_PANELS = 16
CONTOUR_CHUNK = 256
GAUSS_FINE = np.polynomial.legendre.leggauss(14)
GAUSS_COARSE = np.polynomial.legendre.leggauss(7)

class MLConfig(object):
    def __init__(self, eps=DEFAULT_EPS, k_max=DEFAULT_K_MAX, z_max=DEFAULT_Z_MAX,
                 accuracy=DEFAULT_ACCURACY):
        """
        Series controls for :func:`mittag_leffler`.

        ``eps`` is the relative stopping tolerance, ``k_max`` the
        maximum number of series terms and ``z_max`` the largest
        accepted ``|z|``. ``accuracy`` is the relative error a value
        must reach, the series hands over to the contour integral
        when it can't.
        """
        if not eps > 0:
            raise ValueError('eps must be positive')
        if int(k_max) != k_max or k_max < 16:
            raise ValueError('k_max must be an integer >= 16')
        if not z_max > 0:
            raise ValueError('z_max must be positive')
        if not 0 < accuracy < 1:
            raise ValueError('accuracy must lie in (0, 1)')

        self.eps = float(eps)
        self.k_max = int(k_max)
        self.z_max = float(z_max)
        self.accuracy = float(accuracy)

    def __repr__(self):
        return "MLConfig(eps=%r, k_max=%r, z_max=%r, accuracy=%r)" % \
            (self.eps, self.k_max, self.z_max, self.accuracy)

DEFAULT_ML_CONFIG = MLConfig()

def _check_gamma_arg(x):
    x = float(x)
    if math.isnan(x) or x <= 0:
        raise GammaDomainError("Gamma is only defined here for x > 0, got %r" % x)
    if x > GAMMA_MAX_ARG:
        raise GammaOverflowError("Gamma(%r) exceeds the double range" % x)
    return x

def _lanczos_series(z):
    s = LANCZOS_COEFFS[0]
    for i in range(1, len(LANCZOS_COEFFS)):
        s += LANCZOS_COEFFS[i] / (z + i)
    return s

def gamma(x):
    """
    Returns Gamma(x) for a positive real ``x``.

    Raises :exc:`fde4py.exc.GammaDomainError` for ``x <= 0`` and
    :exc:`fde4py.exc.GammaOverflowError` when the result cannot be
    represented as a double.
    """
    x = _check_gamma_arg(x)
    if x < 0.5:
        # reflection, 1 - x stays inside the core's accurate range
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))

    z = x - 1.0
    t = z + LANCZOS_G + 0.5
    # split the power so t**(z+0.5) doesn't overflow before exp(-t) scales it
    half = t ** ((z + 0.5) / 2.0)
    result = SQRT_2PI * half * (half * math.exp(-t)) * _lanczos_series(z)
    if math.isinf(result):
        raise GammaOverflowError("Gamma(%r) exceeds the double range" % x)
    return result

def log_gamma(x):
    """
    Returns log(Gamma(x)) for a positive real ``x``. Unlike
    :func:`gamma` this never overflows.
    """
    x = float(x)
    if math.isnan(x) or x <= 0:
        raise GammaDomainError("log-Gamma is only defined here for x > 0, got %r" % x)
    if x < 0.5:
        return math.log(math.pi / math.sin(math.pi * x)) - log_gamma(1.0 - x)

    z = x - 1.0
    t = z + LANCZOS_G + 0.5
    return LOG_SQRT_2PI + (z + 0.5) * math.log(t) - t + math.log(_lanczos_series(z))

def _check_alpha(alpha):
    alpha = float(alpha)
    if not 0 < alpha <= 1:
        raise ValueError('alpha must lie in (0, 1], got %r' % alpha)
    return alpha

def _add_compensated(total, comp, x):
    # Neumaier's variant of Kahan summation, one real component
    t = total + x
    if abs(total) >= abs(x):
        comp += (total - t) + x
    else:
        comp += (x - t) + total
    return t, comp

def _series(alpha, z, cfg):
    """
    Sums the power series of E_alpha(z). Returns ``(value, error)``
    or None when a term overflows. ``error`` adds the rounding carried
    by every term to the size of the last one, so it grows with the
    cancellation between large terms.
    """
    # magnitude and phase are kept apart so real and imaginary
    # arguments produce exactly real or exactly rotating terms
    logmag = math.log(abs(z))
    phase = z / abs(z)
    rotation = 1 + 0j
    re, re_c = 1.0, 0.0
    im, im_c = 0.0, 0.0
    last = [1.0, 1.0, 1.0]
    weighted = 1.0

    for k in range(1, cfg.k_max + 1):
        rotation *= phase
        try:
            term = math.exp(k * logmag - log_gamma(1.0 + alpha * k)) * rotation
        except OverflowError:
            return None

        re, re_c = _add_compensated(re, re_c, term.real)
        im, im_c = _add_compensated(im, im_c, term.imag)
        weighted += (k + 1) * abs(term)

        last = [last[1], last[2], abs(term)]
        bound = cfg.eps * abs(complex(re + re_c, im + im_c))
        if k >= 3 and max(last) < bound or max(last) == 0.0:
            value = complex(re + re_c, im + im_c)
            return value, last[-1] + SERIES_ROUNDING * MACHINE_EPS * weighted

    raise SeriesNonConvergenceError("E_%g(%s) did not converge within %d terms" % (alpha, z, cfg.k_max))

def _series_array(alpha, z, cfg):
    # terms follow the ratio recurrence z * Gamma(1 + alpha (k-1)) / Gamma(1 + alpha k)
    total = np.ones_like(z)
    comp = np.zeros_like(z)
    term = np.ones_like(z)
    weighted = np.ones(z.shape)
    last = np.ones((3,) + z.shape)
    previous = log_gamma(1.0)

    for k in range(1, cfg.k_max + 1):
        current = log_gamma(1.0 + alpha * k)
        term = term * z * math.exp(previous - current)
        previous = current

        t = total + term
        big = np.abs(total) >= np.abs(term)
        comp += np.where(big, (total - t) + term, (term - t) + total)
        total = t
        weighted += (k + 1) * np.abs(term)

        last = np.roll(last, -1, axis=0)
        last[-1] = np.abs(term)
        if k >= 3:
            value = total + comp
            # overflowed entries are settled too, the contour takes them over
            settled = (last.max(axis=0) <= cfg.eps * np.abs(value)) | ~np.isfinite(value)
            if np.all(settled):
                return value, last[-1] + SERIES_ROUNDING * MACHINE_EPS * weighted

    raise SeriesNonConvergenceError("E_%g did not converge within %d terms over the grid" % (alpha, cfg.k_max))

def _ray_edges(alpha, theta, r_min, r_max, separation):
    """
    Panel edges in ``u`` for one ray. The panels follow the decay of
    ``exp(rho e^(i theta))`` with ``rho = u^(1/alpha)``, refine towards
    the origin and are geometric around every pole modulus of the
    batch.
    """
    rho_max = RHO_MAX / -math.cos(theta)
    rho = np.concatenate((RHO_STEP * 0.5 ** np.arange(ORIGIN_PANELS, 0, -1),
                          np.arange(RHO_STEP, rho_max + RHO_STEP, RHO_STEP)))
    edges = rho ** alpha
    u_max = edges[-1]

    lo, hi = r_min / 8.0, min(8.0 * r_max, u_max)
    if lo < hi:
        ratio = 1.0 + 0.5 * separation
        count = int(math.ceil(math.log(hi / lo) / math.log(ratio)))
        edges = np.concatenate((edges, lo * ratio ** np.arange(count + 1)))
    return np.unique(np.concatenate(([0.0], edges[edges <= u_max])))

def _cauchy_sums(nodes, poles, weighted):
    # sum_j weighted[j] / (nodes[j] - pole) for every pole
    out = np.empty(len(poles), dtype=complex)
    for start in range(0, len(poles), CONTOUR_CHUNK):
        block = poles[start:start + CONTOUR_CHUNK]
        out[start:start + CONTOUR_CHUNK] = np.dot(1.0 / (nodes[None, :] - block[:, None]), weighted)
    return out

def _ray_pair(alpha, theta, z, dist):
    """
    Contour value of E_alpha(z) with the Bromwich line folded onto the
    rays ``arg s = +-theta``, for ``z`` in the closed upper half plane.
    """
    r = np.abs(z)
    separation = max(float(np.min(np.sin(np.minimum(dist, 0.5 * math.pi)))), MIN_SEPARATION)
    edges = _ray_edges(alpha, theta, float(r.min()), float(r.max()), separation)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * np.diff(edges)

    turn = complex(math.cos(theta), math.sin(theta))
    spin = cmath.exp(1j * alpha * theta)
    upper_poles, lower_poles = z / spin, z * spin

    estimates, masses = [], []
    for x, w in (GAUSS_FINE, GAUSS_COARSE):
        u = (mid[:, None] + half[:, None] * x).ravel()
        weighted = (half[:, None] * w).ravel() * np.exp(u ** (1.0 / alpha) * turn)
        upper = _cauchy_sums(u, upper_poles, weighted)
        lower = _cauchy_sums(u, lower_poles, weighted.conjugate())
        estimates.append((upper - lower) / (2j * math.pi * alpha))
        masses.append(float(np.sum(np.abs(weighted))))
    fine, coarse = estimates

    # the pole s = z^(1/alpha) sits inside the rays when |arg z| < alpha theta
    inside = np.angle(z) < alpha * theta
    power = np.where(inside, np.exp(np.log(z) / alpha), 0)
    residue = np.where(inside, np.exp(power) / alpha, 0)

    rounding = MACHINE_EPS * (np.abs(residue) * (1.0 + np.abs(power)) +
                              masses[0] / (math.pi * alpha * separation * r))
    return residue + fine, np.abs(fine - coarse) + rounding

def _contour(alpha, z):
    """
    E_alpha over a flat array of non-zero arguments from the inverse
    Laplace transform of ``s^(alpha-1) / (s^alpha - z)`` at ``t = 1``:
    the residue at ``s = z^(1/alpha)`` when it lies between the rays,
    plus the integral along two rays leaving the origin at ``+-theta``.
    Returns ``(values, errors)``.

    ``theta`` is picked per argument so that no pole of the ray
    integrands comes close to the real axis.
    """
    z = np.asarray(z, dtype=complex)
    mirrored = np.signbit(z.imag)
    z = np.where(mirrored, z.conjugate(), z)
    phi = np.angle(z)

    shift = alpha * RAY_ANGLES
    dist = np.minimum(np.abs(phi[:, None] - shift), 2 * math.pi - phi[:, None] - shift)
    clear = dist >= RAY_MARGIN
    choice = np.where(clear.any(axis=1), np.argmax(clear, axis=1), np.argmax(dist, axis=1))

    values = np.empty_like(z)
    errors = np.empty(z.shape)
    with np.errstate(over='ignore', invalid='ignore'):
        for index in np.unique(choice):
            group = choice == index
            values[group], errors[group] = _ray_pair(alpha, RAY_ANGLES[index], z[group], dist[group, index])

    values = np.where(z.imag == 0, values.real + 0j, values)
    return np.where(mirrored, values.conjugate(), values), errors

def _accurate(value, error, cfg):
    return np.isfinite(value) & (error <= cfg.accuracy * np.abs(value))

def mittag_leffler(alpha, z, cfg=None, full_output=False):
    """
    Evaluates E_alpha(z) = sum z^k / Gamma(1 + alpha k) for
    ``0 < alpha <= 1`` and complex ``z``.

    The partial sums are accumulated with compensated summation and
    the series stops once the last three terms are each smaller than
    ``cfg.eps`` times the partial sum. The error estimate is the last
    term plus the rounding of all terms, which dominates when large
    terms cancel (negative or imaginary ``z``). When that estimate
    misses ``cfg.accuracy`` relative to the value, the function is
    evaluated from its contour integral instead. When ``full_output``
    is set the function returns ``(value, error)``.

    For ``alpha == 1`` the closed form ``exp(z)`` is returned directly.

    Raises :exc:`fde4py.exc.ArgumentTooLargeError` when ``|z|``
    exceeds ``cfg.z_max``,
    :exc:`fde4py.exc.SeriesNonConvergenceError` when ``cfg.k_max``
    terms weren't enough and :exc:`fde4py.exc.EvaluationRangeError`
    when neither evaluation reaches ``cfg.accuracy``.
    """
    cfg = cfg or DEFAULT_ML_CONFIG
    alpha = _check_alpha(alpha)
    z = complex(z)

    if abs(z) > cfg.z_max:
        raise ArgumentTooLargeError("|z| = %g exceeds z_max = %g" % (abs(z), cfg.z_max))

    if z == 0:
        return (1 + 0j, 0.0) if full_output else 1 + 0j

    if alpha == 1.0:
        value = cmath.exp(z)
        return (value, cfg.eps * abs(value)) if full_output else value

    result = _series(alpha, z, cfg)
    if result is None or not _accurate(result[0], result[1], cfg):
        logger.debug("E_%g(%s): series lost its accuracy, using the contour integral", alpha, z)
        values, errors = _contour(alpha, [z])
        result = complex(values[0]), float(errors[0])
        if not _accurate(result[0], result[1], cfg):
            raise EvaluationRangeError("E_%g(%s) cannot be evaluated to relative accuracy %g (error %g)" %
                                       (alpha, z, cfg.accuracy, result[1]))

    return result if full_output else result[0]

def mittag_leffler_array(alpha, z, cfg=None):
    """
    Vectorized E_alpha over a numpy array of complex arguments.

    Used when whole grids need evaluating, e.g. by the numeric
    oracle. Accuracy rules are the ones of :func:`mittag_leffler`,
    the arguments the series can't handle go through the contour
    integral together.
    """
    cfg = cfg or DEFAULT_ML_CONFIG
    alpha = _check_alpha(alpha)
    z = np.asarray(z, dtype=complex)

    if z.size and np.max(np.abs(z)) > cfg.z_max:
        raise ArgumentTooLargeError("|z| = %g exceeds z_max = %g" % (np.max(np.abs(z)), cfg.z_max))

    if alpha == 1.0:
        return np.exp(z)

    with np.errstate(over='ignore', invalid='ignore'):
        values, errors = _series_array(alpha, z, cfg)
        failed = ~_accurate(values, errors, cfg)

    if np.any(failed):
        logger.debug("E_%g: %d of %d arguments need the contour integral", alpha, np.sum(failed), z.size)
        patched, patched_errors = _contour(alpha, z[failed])
        if not np.all(_accurate(patched, patched_errors, cfg)):
            raise EvaluationRangeError("E_%g cannot be evaluated to relative accuracy %g over the grid, "
                                       "worst error %g" % (alpha, cfg.accuracy, np.max(patched_errors)))
        values[failed] = patched

    return values

def frac_cos(alpha, b, t, cfg=None):
    """
    cos_alpha(b t^alpha), the real part of E_alpha(i b t^alpha).
    """
    if t < 0:
        raise ValueError('t must be non-negative')
    return mittag_leffler(alpha, 1j * b * t ** alpha, cfg).real

def frac_sin(alpha, b, t, cfg=None):
    """
    sin_alpha(b t^alpha), the imaginary part of E_alpha(i b t^alpha).
    """
    if t < 0:
        raise ValueError('t must be non-negative')
    return mittag_leffler(alpha, 1j * b * t ** alpha, cfg).imag
