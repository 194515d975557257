# -*- coding: utf-8 -*-
__doc__ = """
Independent numeric fractional calculus used to check the symbolic
results.

* :func:`gl_jumarie_derivative` is the Grunwald-Letnikov sum applied to
  ``f - f(0)``, which makes the derivative of a constant vanish.
* :func:`frac_integral` is a first order product integration of the
  Riemann-Liouville integral over a uniform grid.
* :func:`residual` and :func:`gl_operator_residual` measure how far a
  solution is from satisfying its equation.

.. code-block:: python
   :linenos:

   >>> from fde4py.oracle import gl_jumarie_derivative
   >>> value, error = gl_jumarie_derivative(lambda t: t ** 0.5, 0.5, 1.0)
   >>> round(value, 3)
   0.886
"""
import csv
import logging

import numpy as np

from fde4py.exc import StepUnderflowError, ValidationError
from fde4py.special import gamma
from fde4py.terms import d_alpha_n

__all__ = ['OracleConfig', 'SampledFunction', 'gl_weights',
           'gl_jumarie_derivative', 'gl_derivative_samples',
           'frac_integral', 'residual', 'gl_operator_residual']

logger = logging.getLogger('fde4py')

DEFAULT_STEP = 1e-3
DEFAULT_QUAD_TOL = 1e-2
DEFAULT_MAX_TERMS = 10 ** 7

# relative tolerance on the spacing of grids read from CSV
GRID_TOL = 1e-6

class OracleConfig(object):
    def __init__(self, h=DEFAULT_STEP, richardson=True, quad_tol=DEFAULT_QUAD_TOL,
                 max_terms=DEFAULT_MAX_TERMS):
        """
        ``h`` is the base step of the Grunwald-Letnikov sums, the
        second refinement runs at ``h/2``. ``richardson`` combines
        both refinements to cancel the first order error term.
        ``quad_tol`` is the self-convergence target of the quadrature
        path and ``max_terms`` caps the length of a single sum.
        """
        if not h > 0:
            raise ValueError('h must be positive')
        if not quad_tol > 0:
            raise ValueError('quad_tol must be positive')
        if int(max_terms) != max_terms or max_terms < 1:
            raise ValueError('max_terms must be a positive integer')

        self.h = float(h)
        self.richardson = bool(richardson)
        self.quad_tol = float(quad_tol)
        self.max_terms = int(max_terms)

    def __repr__(self):
        return "OracleConfig(h=%r, richardson=%r, quad_tol=%r, max_terms=%r)" % \
            (self.h, self.richardson, self.quad_tol, self.max_terms)

class SampledFunction(object):
    def __init__(self, h, values):
        """
        Samples ``values[n] = f(n h)`` on a uniform grid starting at 0.
        """
        values = np.asarray(values)
        if not np.iscomplexobj(values):
            values = values.astype(float)
        if not h > 0:
            raise ValidationError('the grid step must be positive')
        if values.ndim != 1 or len(values) < 2:
            raise ValidationError('at least two samples are required')

        self.h = float(h)
        self.values = values

    @classmethod
    def from_function(cls, f, h, t_max):
        """
        Samples ``f`` over ``[0, t_max]``, ``t_max`` is rounded to
        the nearest multiple of ``h``.
        """
        n = int(round(t_max / h))
        ts = h * np.arange(n + 1)
        return cls(h, _sample(f, ts))

    def __len__(self):
        return len(self.values)

    def __repr__(self):
        return "SampledFunction(h=%r, n=%d)" % (self.h, len(self.values))

    def times(self):
        return self.h * np.arange(len(self.values))

    @property
    def t_max(self):
        return self.h * (len(self.values) - 1)

    def to_csv(self, path):
        """
        Writes ``t,y`` rows, plus a ``y_imag`` column when any sample
        has a non-zero imaginary part.
        """
        complex_valued = np.iscomplexobj(self.values) and np.any(self.values.imag != 0)
        with open(path, 'w', newline='') as f:
            writer = csv.writer(f)
            if complex_valued:
                writer.writerow(['t', 'y', 'y_imag'])
                for t, y in zip(self.times(), self.values):
                    writer.writerow(['%.17g' % t, '%.17g' % y.real, '%.17g' % y.imag])
            else:
                writer.writerow(['t', 'y'])
                for t, y in zip(self.times(), np.real(self.values)):
                    writer.writerow(['%.17g' % t, '%.17g' % y])

    @classmethod
    def from_csv(cls, path):
        """
        Reads a file written by :meth:`to_csv`. The grid must start at
        0 and be uniform.
        """
        with open(path, newline='') as f:
            reader = csv.reader(f)
            try:
                header = [h.strip() for h in next(reader)]
            except StopIteration:
                raise ValidationError('%s is empty' % path)
            if header[:2] != ['t', 'y']:
                raise ValidationError("%s: expected a 't,y' header, got %r" % (path, ','.join(header)))
            imaginary = len(header) > 2 and header[2] == 'y_imag'

            ts, ys = [], []
            for lineno, row in enumerate(reader, 2):
                if not row:
                    continue
                try:
                    ts.append(float(row[0]))
                    y = float(row[1])
                    if imaginary:
                        y = complex(y, float(row[2]))
                    ys.append(y)
                except (IndexError, ValueError):
                    raise ValidationError('%s:%d: malformed row %r' % (path, lineno, row))

        if len(ts) < 2:
            raise ValidationError('%s: at least two samples are required' % path)
        ts = np.asarray(ts)
        h = ts[1] - ts[0]
        if ts[0] != 0 or not h > 0 or \
           np.max(np.abs(np.diff(ts) - h)) > GRID_TOL * h:
            raise ValidationError('%s: samples must sit on a uniform grid starting at 0' % path)
        return cls(h, ys)

def _sample(f, ts):
    # accept plain scalar callables as well as numpy aware ones
    try:
        values = np.asarray(f(ts))
    except (TypeError, ValueError):
        values = None
    if values is None or values.shape != ts.shape:
        values = np.asarray([f(t) for t in ts])
    return values

def gl_weights(alpha, n):
    """
    Generalized binomial weights ``(-1)^r binom(alpha, r)`` for
    ``r = 0..n``.
    """
    r = np.arange(1, n + 1, dtype=float)
    return np.concatenate(([1.0], np.cumprod((r - 1.0 - alpha) / r)))

def _check_order(alpha):
    alpha = float(alpha)
    if not 0 < alpha < 1:
        raise ValueError('alpha must lie in (0, 1), got %r' % alpha)
    return alpha

def _gl_sum(f, alpha, t, n):
    step = t / n
    # newest sample first, samples[-1] is f(0)
    samples = _sample(f, step * np.arange(n, -1, -1))
    return np.dot(gl_weights(alpha, n), samples - samples[-1]) / step ** alpha

def _scalar(x):
    x = complex(x)
    return x if x.imag else x.real

def gl_jumarie_derivative(f, alpha, t, cfg=None):
    """
    Numeric Jumarie derivative of order ``alpha`` of ``f`` at ``t``.

    Returns ``(value, error)``. The sum runs at steps close to
    ``cfg.h`` and ``cfg.h/2``, adjusted so both grids end on 0 and
    ``t``. With ``cfg.richardson`` the two are extrapolated,
    ``error`` is always the difference between refinements.

    Raises :exc:`fde4py.exc.StepUnderflowError` when the sums would
    exceed ``cfg.max_terms``.
    """
    cfg = cfg or OracleConfig()
    alpha = _check_order(alpha)
    t = float(t)
    if not t > 0:
        raise ValueError('t must be positive')

    n = max(1, int(round(t / cfg.h)))
    if 2 * n > cfg.max_terms:
        raise StepUnderflowError("t/h = %d exceeds the %d term cap" % (2 * n, cfg.max_terms))

    coarse = _gl_sum(f, alpha, t, n)
    fine = _gl_sum(f, alpha, t, 2 * n)
    error = abs(fine - coarse)
    value = 2 * fine - coarse if cfg.richardson else fine
    return _scalar(value), float(error)

def gl_derivative_samples(f, alpha):
    """
    Grunwald-Letnikov Jumarie derivative at every grid point of a
    :class:`SampledFunction`, at the grid's own step. The value at
    ``t = 0`` is 0.
    """
    alpha = _check_order(alpha)
    n = len(f)
    shifted = f.values - f.values[0]
    out = np.convolve(shifted, gl_weights(alpha, n - 1))[:n] / f.h ** alpha
    return SampledFunction(f.h, out)

def frac_integral(f, alpha):
    """
    Riemann-Liouville integral of order ``alpha`` of a
    :class:`SampledFunction` at every grid point.

    ``f`` is interpolated linearly between samples and the kernel
    ``(t - s)^(alpha - 1) / Gamma(alpha)`` is integrated exactly on
    every cell, so ``f = 1`` gives ``t^alpha / Gamma(1 + alpha)`` up to
    rounding.
    """
    alpha = float(alpha)
    if not 0 < alpha <= 1:
        raise ValueError('alpha must lie in (0, 1], got %r' % alpha)

    n = len(f) - 1
    a1 = alpha + 1.0
    d = np.arange(1, n, dtype=float)
    weights = np.empty(n)
    weights[0] = 1.0
    weights[1:] = (d + 1) ** a1 - 2 * d ** a1 + (d - 1) ** a1

    steps = np.arange(1, n + 1, dtype=float)
    first = (steps - 1) ** a1 - (steps - a1) * steps ** alpha

    tail = np.convolve(f.values[1:], weights)[:n]
    out = np.zeros(n + 1, dtype=tail.dtype if np.iscomplexobj(tail) else float)
    out[1:] = (first * f.values[0] + tail) * f.h ** alpha / gamma(alpha + 2.0)
    return SampledFunction(f.h, out)

def residual(problem, solution, grid):
    """
    Largest ``|op(D^alpha) s - target|`` over ``grid``, where ``s`` runs
    over the basis elements (target 0) and the particular integral
    (target the forcing). Operators are applied symbolically.
    """
    from fde4py.operators import apply

    grid = np.asarray(list(grid), dtype=float)
    checks = [(b, None) for b in solution.complementary]
    checks.append((solution.particular, problem.forcing))

    worst = 0.0
    for s, target in checks:
        image = apply(problem.op, s)
        if target is not None:
            image = image - target
        if image.is_zero or not len(grid):
            continue
        worst = max(worst, float(np.max(np.abs(image.evaluate_array(grid)))))
    logger.debug("residual over %d points: %g", len(grid), worst)
    return worst

def gl_operator_residual(op, s, target, t, cfg=None):
    """
    ``|op(D^alpha) s - target|`` at ``t`` with every derivative of
    order ``alpha`` taken numerically.

    The ``j``-th power of the operator is the Grunwald-Letnikov
    derivative of the symbolic ``(j-1)``-th derivative, so only one
    numeric step enters each summand.
    """
    alpha = _check_order(op.alpha)
    total = op.coeffs[0] * s.evaluate(t)
    for j in range(1, len(op.coeffs)):
        lower = d_alpha_n(s, j - 1)
        value, _ = gl_jumarie_derivative(lower.evaluate_array, alpha, t, cfg)
        total += op.coeffs[j] * value
    return abs(total - target.evaluate(t))
