# -*- coding: utf-8 -*-
__doc__ = """
Closed-form algebra over atoms ``coeff * t^(k alpha) * E_alpha(a t^alpha)``.

A :class:`TermSum` is a normalized linear combination of such atoms
sharing one order ``alpha``. Every symbolic operation of the package
(Jumarie differentiation, fractional integration, operator
application, particular integrals) maps term sums to term sums.

.. code-block:: python
   :linenos:

   >>> from fde4py.terms import TermSum, d_alpha
   >>> s = TermSum.ml(0.5, rate=2.0)
   >>> d_alpha(s).terms
   (FracTerm(coeff=(2+0j), k=0, rate=(2+0j)),)

Rates and coefficients are complex throughout. The fractional sine
and cosine only show up when a sum is rendered through
:func:`to_real`.
"""
from collections import namedtuple
import cmath
import logging
import math

import numpy as np

from fde4py import format_complex
from fde4py.exc import AlphaMismatchError, NotRealError
from fde4py.special import gamma, log_gamma, mittag_leffler, \
     mittag_leffler_array

__all__ = ['FracTerm', 'TermSum', 'RealAtom', 'RealRendering',
           'd_alpha', 'd_alpha_n', 'integrate_alpha', 'evaluate', 'to_real',
           'power_rule_factor', 'fractional_cos', 'fractional_sin',
           'TOL_RATE', 'TOL_COEFF']

logger = logging.getLogger('fde4py')

# Rates closer than this are the same rate. Root finding leaves
# about 1e-12 of noise on repeated rates.
TOL_RATE = 1e-9
# Coefficients below this magnitude are dropped.
TOL_COEFF = 1e-12
# Relative imaginary residue tolerated by to_real().
NOT_REAL_TOL = 1e-10
ALPHA_TOL = 1e-12

_REALITY_SAMPLES = (0.25, 0.5, 1.0)

def power_rule_factor(alpha, k):
    """
    Gamma(1 + k alpha) / Gamma(1 + (k - 1) alpha), the factor the
    Jumarie derivative pulls out of ``t^(k alpha)``.
    """
    hi = 1.0 + k * alpha
    lo = 1.0 + (k - 1) * alpha
    if hi < 170.0:
        return gamma(hi) / gamma(lo)
    return math.exp(log_gamma(hi) - log_gamma(lo))

def _check_finite(z, what):
    if not (cmath.isfinite(z)):
        raise ValueError('%s must be finite, got %r' % (what, z))

class FracTerm(namedtuple('FracTerm', 'coeff k rate')):
    """
    One atom ``coeff * t^(k alpha) * E_alpha(rate t^alpha)``.
    """
    __slots__ = ()

    def __new__(cls, coeff, k=0, rate=0j):
        coeff = complex(coeff)
        rate = complex(rate)
        if int(k) != k or k < 0:
            raise ValueError('k must be a non-negative integer, got %r' % k)
        _check_finite(coeff, 'coeff')
        _check_finite(rate, 'rate')
        return super(FracTerm, cls).__new__(cls, coeff, int(k), rate)

    @property
    def is_power(self):
        return self.rate == 0

def _snap(x):
    return 0.0 if abs(x) <= TOL_RATE else x

def _snap_rate(rate):
    rate = complex(_snap(rate.real), _snap(rate.imag))
    return rate

def _normalize(terms):
    merged = []
    for term in terms:
        rate = _snap_rate(term.rate)
        for i, (coeff, k, other) in enumerate(merged):
            if k == term.k and abs(other - rate) <= TOL_RATE:
                merged[i] = (coeff + term.coeff, k, other)
                break
        else:
            merged.append((term.coeff, term.k, rate))

    kept = [FracTerm(c, k, r) for (c, k, r) in merged if abs(c) >= TOL_COEFF]
    kept.sort(key=lambda t: (t.rate.real, t.rate.imag, -t.k))
    return tuple(kept)

class TermSum(object):
    def __init__(self, alpha, terms=()):
        """
        A normalized sum of :class:`FracTerm` atoms of order ``alpha``.

        Normalization merges atoms sharing ``k`` and a rate within
        :data:`TOL_RATE`, drops coefficients below :data:`TOL_COEFF`
        and sorts atoms by rate then by decreasing power so two equal
        sums always list their atoms in the same order.

        Instances are treated as immutable.
        """
        alpha = float(alpha)
        if not 0 < alpha <= 1:
            raise ValueError('alpha must lie in (0, 1], got %r' % alpha)
        self.alpha = alpha
        self.terms = _normalize(FracTerm(*t) if not isinstance(t, FracTerm) else t
                                for t in terms)

    @classmethod
    def zero(cls, alpha):
        return cls(alpha)

    @classmethod
    def constant(cls, alpha, value):
        return cls(alpha, [FracTerm(value, 0, 0)])

    @classmethod
    def power(cls, alpha, k, coeff=1.0):
        """
        ``coeff * t^(k alpha)``
        """
        return cls(alpha, [FracTerm(coeff, k, 0)])

    @classmethod
    def ml(cls, alpha, rate, coeff=1.0, k=0):
        """
        ``coeff * t^(k alpha) * E_alpha(rate t^alpha)``
        """
        return cls(alpha, [FracTerm(coeff, k, rate)])

    def __repr__(self):
        return "TermSum(alpha=%r, terms=%r)" % (self.alpha, list(self.terms))

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __bool__(self):
        return bool(self.terms)
    __nonzero__ = __bool__

    def _check_alpha(self, other):
        if abs(self.alpha - other.alpha) > ALPHA_TOL:
            raise AlphaMismatchError("Cannot combine orders %r and %r" % (self.alpha, other.alpha))

    def __add__(self, other):
        if not isinstance(other, TermSum):
            return NotImplemented
        self._check_alpha(other)
        return TermSum(self.alpha, self.terms + other.terms)

    def __neg__(self):
        return TermSum(self.alpha, [FracTerm(-t.coeff, t.k, t.rate) for t in self.terms])

    def __sub__(self, other):
        if not isinstance(other, TermSum):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, TermSum):
            return NotImplemented
        scalar = complex(scalar)
        return TermSum(self.alpha, [FracTerm(scalar * t.coeff, t.k, t.rate) for t in self.terms])
    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TermSum):
            return NotImplemented
        return abs(self.alpha - other.alpha) <= ALPHA_TOL and self.terms == other.terms

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    __hash__ = None

    @property
    def is_zero(self):
        return not self.terms

    def max_coeff(self):
        """
        Largest coefficient magnitude, 0 for the empty sum.
        """
        return max([abs(t.coeff) for t in self.terms] or [0.0])

    def isclose(self, other, rel_tol=1e-9, abs_tol=TOL_COEFF):
        """
        Tells if every coefficient of ``self - other`` is below
        ``max(abs_tol, rel_tol * scale)`` where ``scale`` is the
        largest coefficient of either side.
        """
        diff = self - other
        scale = max(self.max_coeff(), other.max_coeff())
        return diff.max_coeff() <= max(abs_tol, rel_tol * scale)

    def times_ml(self, rate):
        """
        Multiplies a sum of pure powers by ``E_alpha(rate t^alpha)``.

        Products of two Mittag-Leffler atoms with non-zero rates are
        not representable in this algebra and raise :exc:`ValueError`.
        """
        for t in self.terms:
            if t.rate != 0:
                raise ValueError('only zero-rate terms can be multiplied by E_alpha(c t^alpha)')
        return TermSum(self.alpha, [FracTerm(t.coeff, t.k, rate) for t in self.terms])

    def evaluate(self, t, cfg=None):
        return evaluate(self, t, cfg)

    def evaluate_array(self, t, cfg=None):
        """
        Evaluates the sum over a numpy array of non-negative times.
        """
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise ValueError('t must be non-negative')
        ta = t ** self.alpha
        out = np.zeros(t.shape, dtype=complex)
        for term in self.terms:
            part = term.coeff * ta ** term.k
            if term.rate != 0:
                part = part * mittag_leffler_array(self.alpha, term.rate * ta, cfg)
            out += part
        return out

    def to_json(self):
        """
        Returns the documented JSON shape
        ``{alpha, terms: [{re, im, k, a_re, a_im}]}``.
        """
        return {
            'alpha': self.alpha,
            'terms': [{'re': t.coeff.real, 'im': t.coeff.imag, 'k': t.k,
                       'a_re': t.rate.real, 'a_im': t.rate.imag}
                      for t in self.terms]
        }

    @classmethod
    def from_json(cls, data):
        terms = [FracTerm(complex(item['re'], item.get('im', 0.0)), item['k'],
                          complex(item.get('a_re', 0.0), item.get('a_im', 0.0)))
                 for item in data.get('terms', [])]
        return cls(data['alpha'], terms)

    def render(self, digits=12):
        """
        Human-readable complex form, mostly for logs.
        """
        if not self.terms:
            return '0'
        parts = []
        for t in self.terms:
            factors = [format_complex(t.coeff, digits)]
            if t.k:
                factors.append(_power_text(t.k))
            if t.rate != 0:
                factors.append('E_alpha(%s*t^alpha)' % format_complex(t.rate, digits))
            parts.append('*'.join(factors))
        return ' + '.join(parts)

def _power_text(k):
    if k == 1:
        return 't^alpha'
    return 't^(%d*alpha)' % k

def d_alpha(s):
    """
    Symbolic Jumarie derivative of order alpha.

    Uses the eigen-relation ``D E_alpha(a t^alpha) = a E_alpha(a t^alpha)``
    together with the power rule through the Jumarie product rule::

        D[t^(k alpha) E] = a t^(k alpha) E + G(k) t^((k-1) alpha) E

    with ``G(k) = Gamma(1 + k alpha) / Gamma(1 + (k-1) alpha)``. The
    second summand is absent for ``k = 0``.
    """
    out = []
    for t in s.terms:
        if t.rate != 0:
            out.append(FracTerm(t.rate * t.coeff, t.k, t.rate))
        if t.k >= 1:
            out.append(FracTerm(t.coeff * power_rule_factor(s.alpha, t.k), t.k - 1, t.rate))
    return TermSum(s.alpha, out)

def d_alpha_n(s, n):
    """
    Applies :func:`d_alpha` ``n`` times.
    """
    if int(n) != n or n < 0:
        raise ValueError('n must be a non-negative integer, got %r' % n)
    for _ in range(int(n)):
        s = d_alpha(s)
    return s

def _integrate_term(alpha, t):
    if t.rate == 0:
        return [FracTerm(t.coeff / power_rule_factor(alpha, t.k + 1), t.k + 1, 0)]

    # I_0 = E / a and I_j = (t^(j alpha) E - G(j) I_{j-1}) / a
    inv = 1.0 / t.rate
    coeffs = {0: inv}
    for j in range(1, t.k + 1):
        g = power_rule_factor(alpha, j)
        nxt = dict((i, -g * inv * c) for (i, c) in coeffs.items())
        nxt[j] = inv
        coeffs = nxt
    return [FracTerm(t.coeff * c, j, t.rate) for (j, c) in coeffs.items()]

def integrate_alpha(s):
    """
    One order-alpha antiderivative of ``s``, i.e. ``d_alpha`` of the
    result gives ``s`` back. Additive constants are left out, they
    belong to the complementary function.
    """
    out = []
    for t in s.terms:
        out.extend(_integrate_term(s.alpha, t))
    return TermSum(s.alpha, out)

def evaluate(s, t, cfg=None):
    """
    Numeric value of ``s`` at time ``t >= 0``.
    """
    if t < 0:
        raise ValueError('t must be non-negative')
    t = float(t)
    ta = t ** s.alpha
    total = 0j
    for term in s.terms:
        value = term.coeff * ta ** term.k
        if term.rate != 0:
            value *= mittag_leffler(s.alpha, term.rate * ta, cfg)
        total += value
    return total

def fractional_cos(alpha, b, coeff=1.0):
    """
    ``coeff * cos_alpha(b t^alpha)`` as a pair of conjugate atoms.
    """
    half = 0.5 * complex(coeff)
    return TermSum(alpha, [FracTerm(half, 0, 1j * b), FracTerm(half, 0, -1j * b)])

def fractional_sin(alpha, b, coeff=1.0):
    """
    ``coeff * sin_alpha(b t^alpha)`` as a pair of conjugate atoms.
    """
    half = 0.5j * complex(coeff)
    return TermSum(alpha, [FracTerm(-half, 0, 1j * b), FracTerm(half, 0, -1j * b)])

class RealAtom(namedtuple('RealAtom', 'coeff k p q kind')):
    """
    A real atom ``coeff * t^(k alpha) * X`` where ``X`` is

    * ``'exp'``: ``E_alpha(p t^alpha)`` (``q`` is 0)
    * ``'cos'``: the real part of ``E_alpha((p + iq) t^alpha)``
    * ``'sin'``: the imaginary part of ``E_alpha((p + iq) t^alpha)``

    With ``p = 0`` the last two are cos_alpha and sin_alpha.
    """
    __slots__ = ()

    def evaluate(self, alpha, t, cfg=None):
        ta = float(t) ** alpha
        value = mittag_leffler(alpha, complex(self.p, self.q) * ta, cfg)
        if self.kind == 'exp':
            part = value.real
        elif self.kind == 'cos':
            part = value.real
        else:
            part = value.imag
        return self.coeff * ta ** self.k * part

    def render(self, alpha, digits=12):
        factors = ['%.*g' % (digits, self.coeff)]
        if self.k:
            factors.append(_power_text(self.k))
        if self.kind == 'exp':
            if self.p != 0:
                factors.append('E_alpha(%.*g*t^alpha)' % (digits, self.p))
        elif self.p == 0 or alpha == 1.0:
            if self.p != 0:
                factors.append('E_alpha(%.*g*t^alpha)' % (digits, self.p))
            factors.append('%s_alpha(%.*g*t^alpha)' % (self.kind, digits, self.q))
        else:
            # E_alpha doesn't factor over p + iq when alpha < 1
            part = 'Re' if self.kind == 'cos' else 'Im'
            factors.append('%s E_alpha(%s*t^alpha)' % (part, format_complex(complex(self.p, self.q), digits)))
        return '*'.join(factors)

class RealRendering(object):
    def __init__(self, alpha, atoms):
        """
        Real form of a term sum: a list of :class:`RealAtom`.
        """
        self.alpha = alpha
        self.atoms = list(atoms)

    def __repr__(self):
        return "RealRendering(alpha=%r, atoms=%r)" % (self.alpha, self.atoms)

    def __len__(self):
        return len(self.atoms)

    def evaluate(self, t, cfg=None):
        return sum(a.evaluate(self.alpha, t, cfg) for a in self.atoms)

    def render(self, digits=12):
        if not self.atoms:
            return '0'
        return ' + '.join(a.render(self.alpha, digits) for a in self.atoms)

    def find(self, kind, k=0, p=0.0, q=0.0, tol=TOL_RATE):
        """
        Returns the coefficient of the atom matching ``kind``, ``k``,
        ``p`` and ``q``, 0 when absent.
        """
        for a in self.atoms:
            if a.kind == kind and a.k == k and abs(a.p - p) <= tol and abs(a.q - q) <= tol:
                return a.coeff
        return 0.0

def to_real(s, cfg=None):
    """
    Pairs conjugate rates ``p +/- iq`` and returns the
    :class:`RealRendering` of ``s``.

    Raises :exc:`fde4py.exc.NotRealError` when ``s`` carries an
    imaginary part, either structurally (unpaired complex rates,
    non-conjugate pair coefficients, complex coefficients on real
    rates) or numerically at a few sample times.
    """
    scale = max(1.0, s.max_coeff())
    limit = NOT_REAL_TOL * scale
    residue = 0.0
    atoms = []
    used = set()

    for i, t in enumerate(s.terms):
        if i in used:
            continue
        if t.rate.imag == 0:
            residue = max(residue, abs(t.coeff.imag))
            atoms.append(RealAtom(t.coeff.real, t.k, t.rate.real, 0.0, 'exp'))
            continue

        partner = None
        for j, u in enumerate(s.terms):
            if j != i and j not in used and u.k == t.k and \
               abs(u.rate - t.rate.conjugate()) <= TOL_RATE:
                partner = j
                break

        if partner is None:
            residue = max(residue, abs(t.coeff))
            continue

        used.add(partner)
        c, cp = t.coeff, s.terms[partner].coeff
        if t.rate.imag < 0:
            c, cp = cp, c
        residue = max(residue, abs(c - cp.conjugate()))
        p, q = t.rate.real, abs(t.rate.imag)
        cos_coeff = c.real + cp.real
        sin_coeff = cp.imag - c.imag
        if abs(cos_coeff) >= TOL_COEFF:
            atoms.append(RealAtom(cos_coeff, t.k, p, q, 'cos'))
        if abs(sin_coeff) >= TOL_COEFF:
            atoms.append(RealAtom(sin_coeff, t.k, p, q, 'sin'))

    if residue > limit:
        raise NotRealError("Imaginary residue %g exceeds %g" % (residue, limit))

    for t in _REALITY_SAMPLES:
        value = evaluate(s, t, cfg)
        if abs(value.imag) > 1e-9 * max(1.0, abs(value)):
            raise NotRealError("Imaginary part %g at t=%g" % (value.imag, t))

    return RealRendering(s.alpha, atoms)
