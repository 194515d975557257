# -*- coding: utf-8 -*-
__doc__ = """
General solutions ``y = y_c + y_p`` of ``f(D^alpha) y = g``.

The complementary function comes from the characteristic roots of
``f``. Particular integrals for every forcing atom
``C t^(m alpha) E_alpha(c t^alpha)`` come from one rule, the
exponential shift::

    1/f(D) [V E(c t^alpha)] = E(c t^alpha) 1/f(D + c) [V]

where ``f(D + c) = D^k psi(D)`` and ``k`` is the multiplicity of ``c``
as a characteristic root. ``1/psi`` is expanded as a power series in
``D^alpha`` which terminates on ``t^(m alpha)`` after ``m`` terms,
and ``1/D^k`` is ``k`` fractional integrations.

.. code-block:: python
   :linenos:

   >>> from fde4py.operators import OperatorPoly
   >>> from fde4py.terms import TermSum
   >>> from fde4py.solver import Problem, solve
   >>> op = OperatorPoly(1/3., [6, -5, 1])
   >>> sol = solve(Problem(1/3., op, TermSum.power(1/3., 6)))
   >>> len(sol.particular)
   7
"""
import logging

import numpy as np

from fde4py import format_complex
from fde4py.exc import AlphaMismatchError, ConsistencyError, \
     DegenerateOperatorError, EvaluationRangeError, NotRealError, \
     ValidationError
from fde4py.operators import apply, char_roots, deflate, shifted
from fde4py.terms import TermSum, d_alpha, integrate_alpha, to_real, \
     ALPHA_TOL
from fde4py.special import mittag_leffler_array

__all__ = ['Problem', 'Solution', 'complementary', 'particular_atom',
           'particular', 'solve', 'solve_alpha_order_quadrature',
           'reciprocal_series']

logger = logging.getLogger('fde4py')

DEGENERATE_TOL = 1e-10
CONSISTENCY_TOL = 1e-9

class Problem(object):
    def __init__(self, alpha, op, forcing=None, samples=None):
        """
        The equation ``op(D^alpha) y = forcing``.

        ``forcing`` is a :class:`fde4py.terms.TermSum` for the
        symbolic path; ``samples`` is a
        :class:`fde4py.oracle.SampledFunction` for the quadrature
        path. Exactly one of them must be given.
        """
        alpha = float(alpha)
        if not 0 < alpha <= 1:
            raise ValidationError('alpha must lie in (0, 1], got %r' % alpha)
        if abs(op.alpha - alpha) > ALPHA_TOL:
            raise ValidationError('operator order %r differs from alpha %r' % (op.alpha, alpha))
        if op.degree < 1:
            raise ValidationError('the operator must have degree >= 1')
        if (forcing is None) == (samples is None):
            raise ValidationError('exactly one of a symbolic or a sampled forcing is required')
        if forcing is not None and abs(forcing.alpha - alpha) > ALPHA_TOL:
            raise ValidationError('forcing order %r differs from alpha %r' % (forcing.alpha, alpha))

        self.alpha = alpha
        self.op = op
        self.forcing = forcing
        self.samples = samples

    @property
    def is_symbolic(self):
        return self.forcing is not None

    def __repr__(self):
        return "Problem(alpha=%r, op=%r, forcing=%r)" % (self.alpha, self.op, self.forcing)

    def __eq__(self, other):
        if not isinstance(other, Problem):
            return NotImplemented
        return abs(self.alpha - other.alpha) <= ALPHA_TOL and self.op == other.op and \
            self.forcing == other.forcing

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    __hash__ = None

class Solution(object):
    def __init__(self, alpha, complementary, particular):
        """
        ``complementary`` holds one basis element per free constant,
        labelled ``A_1 .. A_n`` in order; ``particular`` is the
        particular integral.
        """
        self.alpha = alpha
        self.complementary = list(complementary)
        self.particular = particular

    @property
    def constants(self):
        return ['A_%d' % (i + 1) for i in range(len(self.complementary))]

    def general(self, constants=None):
        """
        ``sum A_i b_i + y_p`` for the given constants, a mapping from
        label to value or a sequence. Missing constants are zero.
        """
        constants = constants or {}
        if not isinstance(constants, dict):
            constants = dict(zip(self.constants, constants))
        unknown = set(constants) - set(self.constants)
        if unknown:
            raise ValueError('unknown constants: %s' % ', '.join(sorted(unknown)))

        total = self.particular
        for label, basis in zip(self.constants, self.complementary):
            value = constants.get(label, 0)
            if value:
                total = total + value * basis
        return total

    def to_json(self):
        return {
            'alpha': self.alpha,
            'complementary': [b.to_json() for b in self.complementary],
            'particular': self.particular.to_json(),
            'rendered': self.render(),
        }

    def render(self, digits=12):
        """
        Closed form as text; real forms are used whenever the terms
        pair up into real atoms.
        """
        parts = []
        for label, basis in zip(self.constants, self.complementary):
            parts.append('%s*[%s]' % (label, _render(basis, digits)))
        parts.append(_render(self.particular, digits))
        return 'y = ' + ' + '.join(parts)

def _render(s, digits):
    try:
        return to_real(s).render(digits)
    except (NotRealError, EvaluationRangeError):
        return s.render(digits)

def complementary(op, roots=None):
    """
    Basis ``t^(j alpha) E_alpha(m t^alpha)``, ``j < r``, for every
    characteristic root ``m`` of multiplicity ``r``.
    """
    roots = roots or char_roots(op)
    basis = []
    for root, mult in roots:
        for j in range(mult):
            basis.append(TermSum.ml(op.alpha, root, 1.0, k=j))
    return basis

def reciprocal_series(coeffs, order):
    """
    First ``order + 1`` coefficients of ``1 / sum coeffs[j] x^j``.
    """
    lead = coeffs[0]
    out = [1.0 / lead]
    for j in range(1, order + 1):
        total = 0j
        for i in range(1, min(j, len(coeffs) - 1) + 1):
            total += coeffs[i] * out[j - i]
        out.append(-total / lead)
    return out

def particular_atom(op, C, m, c, roots=None):
    """
    Particular integral of ``op(D^alpha) y = C t^(m alpha) E_alpha(c t^alpha)``.

    Raises :exc:`fde4py.exc.DegenerateOperatorError` if the cofactor
    left after deflating ``c`` still vanishes at ``c``, which means the
    multiplicity was misjudged.
    """
    alpha = op.alpha
    c = complex(c)
    roots = roots or char_roots(op)
    k = roots.multiplicity_of(c)

    phi = deflate(op, c, k) if k else op
    psi = shifted(phi, c)
    scale = max(1.0, phi.norm() * max(1.0, abs(c)) ** phi.degree)
    if abs(psi.coeffs[0]) <= DEGENERATE_TOL * scale:
        raise DegenerateOperatorError("phi(%s) vanishes after removing multiplicity %d"
                                      % (format_complex(c), k))

    series = reciprocal_series(psi.coeffs, m)
    current = TermSum.power(alpha, m)
    v = series[0] * current
    for b in series[1:]:
        current = d_alpha(current)
        v = v + b * current

    for _ in range(k):
        v = integrate_alpha(v)

    logger.debug("particular integral for %s*t^(%d*alpha)*E_alpha(%s*t^alpha): multiplicity %d, phi(c)=%s",
                 format_complex(C), m, format_complex(c), k, format_complex(psi.coeffs[0]))
    return (complex(C) * v).times_ml(c)

def particular(op, forcing, roots=None):
    """
    Particular integral for a whole forcing sum, atom by atom.
    """
    if abs(op.alpha - forcing.alpha) > ALPHA_TOL:
        raise AlphaMismatchError("Operator order %r doesn't match forcing order %r" % (op.alpha, forcing.alpha))
    if forcing.is_zero:
        return TermSum.zero(op.alpha)

    roots = roots or char_roots(op)
    total = TermSum.zero(op.alpha)
    for term in forcing.terms:
        total = total + particular_atom(op, term.coeff, term.k, term.rate, roots)
    return total

def _check_basis(op, basis):
    scale = max(1.0, op.norm())
    for b in basis:
        rate = b.terms[0].rate
        residue = apply(op, b).max_coeff()
        limit = CONSISTENCY_TOL * scale * max(1.0, abs(rate)) ** op.degree
        if residue > limit:
            raise ConsistencyError("basis element %s leaves residue %g" % (b.render(), residue))

def _check_particular(op, forcing, yp):
    image = apply(op, yp)
    if not image.isclose(forcing, rel_tol=CONSISTENCY_TOL):
        raise ConsistencyError("particular integral leaves residue %g"
                               % (image - forcing).max_coeff())

def solve(problem):
    """
    Returns the :class:`Solution` of a symbolic :class:`Problem`.
    Both residual identities are checked before returning and a
    failure raises :exc:`fde4py.exc.ConsistencyError`.
    """
    if not problem.is_symbolic:
        raise ValidationError('solve() needs a symbolic forcing, use solve_alpha_order_quadrature()')

    op = problem.op
    roots = char_roots(op)
    basis = complementary(op, roots)
    yp = particular(op, problem.forcing, roots)

    _check_basis(op, basis)
    _check_particular(op, problem.forcing, yp)
    logger.debug("solved %s with %d basis elements and %d particular terms",
                 op.render(), len(basis), len(yp))
    return Solution(problem.alpha, basis, yp)

def solve_alpha_order_quadrature(a, g, alpha, cfg=None):
    """
    The ``A = 0`` solution of ``(D^alpha - a) y = g`` for a sampled
    forcing ``g``::

        y = E_alpha(a t^alpha) D^-alpha[g E_alpha(-a t^alpha)]

    The grid is halved to estimate self-convergence; an estimate above
    ``cfg.quad_tol`` is logged as a warning, non-finite samples raise
    :exc:`fde4py.exc.EvaluationRangeError`. The estimate is stored on
    the returned samples as ``error_estimate``.
    """
    from fde4py.oracle import SampledFunction, OracleConfig, frac_integral

    cfg = cfg or OracleConfig()
    a = complex(a)

    def _solve(samples):
        ta = samples.times() ** alpha
        integrand = samples.values * mittag_leffler_array(alpha, -a * ta)
        integral = frac_integral(SampledFunction(samples.h, integrand), alpha)
        return integral.values * mittag_leffler_array(alpha, a * ta)

    y = _solve(g)
    estimate = 0.0
    if len(g) >= 5:
        coarse = _solve(SampledFunction(2 * g.h, g.values[::2]))
        fine = y[::2][:len(coarse)]
        estimate = float(np.max(np.abs(fine - coarse)) / max(1.0, float(np.max(np.abs(fine)))))
        if estimate > cfg.quad_tol:
            logger.warning("Quadrature grid too coarse: self-convergence estimate %g exceeds %g",
                           estimate, cfg.quad_tol)

    if not (np.isfinite(estimate) and np.all(np.isfinite(y))):
        raise EvaluationRangeError("quadrature produced non-finite samples (self-convergence estimate %g)" % estimate)

    if not np.iscomplexobj(g.values) and a.imag == 0:
        y = y.real
    result = SampledFunction(g.h, y)
    result.error_estimate = estimate
    return result
