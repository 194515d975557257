# -*- coding: utf-8 -*-
__doc__ = """
The operator ``f(D^alpha) = c_0 + c_1 D^alpha + ... + c_n D^(n alpha)``
as a polynomial in the Jumarie derivative.

An :class:`OperatorPoly` can be applied to a
:class:`fde4py.terms.TermSum`, evaluated at a scalar (its
characteristic polynomial), shifted, deflated by a known root and
factored through :func:`char_roots`.

.. code-block:: python
   :linenos:

   >>> from fde4py.operators import OperatorPoly, char_roots
   >>> op = OperatorPoly(1/3., [6, -5, 1])
   >>> char_roots(op)
   RootSet([((2+0j), 1), ((3+0j), 1)])

Roots come from Aberth's simultaneous iteration. Clusters of
approximations around a repeated root are merged and the merge is
only accepted when repeated synthetic division confirms the
multiplicity.
"""
import cmath
import logging
import math
import random

from fde4py import format_complex
from fde4py.exc import AlphaMismatchError, RootFindingError, NotARootError
from fde4py.terms import TermSum, d_alpha, ALPHA_TOL

__all__ = ['OperatorPoly', 'RootSet', 'apply', 'char_roots', 'deflate',
           'shifted', 'eval_poly']

logger = logging.getLogger('fde4py')

MAX_ITERATIONS = 500
MAX_RESTARTS = 4
# Approximations of one repeated root spread like eps**(1/r);
# candidates within this relative radius are tested for merging.
CLUSTER_RADIUS = 1e-3
DEFLATION_TOL = 1e-9
RESIDUAL_TOL = 1e-10
SNAP_TOL = 1e-12
EPS = 2.220446049250313e-16

class OperatorPoly(object):
    def __init__(self, alpha, coeffs):
        """
        ``coeffs[j]`` multiplies ``D^(j alpha)``. The leading
        coefficient must be non-zero. Coefficients are kept complex
        even when the input is real.
        """
        alpha = float(alpha)
        if not 0 < alpha <= 1:
            raise ValueError('alpha must lie in (0, 1], got %r' % alpha)
        coeffs = tuple(complex(c) for c in coeffs)
        if not coeffs:
            raise ValueError('an operator needs at least one coefficient')
        for c in coeffs:
            if not cmath.isfinite(c):
                raise ValueError('coefficients must be finite')
        if coeffs[-1] == 0:
            raise ValueError('the leading coefficient must be non-zero')

        self.alpha = alpha
        self.coeffs = coeffs

    @classmethod
    def from_roots(cls, alpha, roots, lead=1.0):
        """
        Builds ``lead * prod (D^alpha - root)``. ``roots`` may hold
        plain roots or ``(root, multiplicity)`` pairs.
        """
        coeffs = [complex(lead)]
        for item in roots:
            if isinstance(item, tuple):
                root, mult = item
            else:
                root, mult = item, 1
            for _ in range(mult):
                coeffs = _multiply_linear(coeffs, complex(root))
        return cls(alpha, coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def is_real(self):
        return all(c.imag == 0 for c in self.coeffs)

    def norm(self):
        return max(abs(c) for c in self.coeffs)

    def __call__(self, m):
        return eval_poly(self, m)

    def __repr__(self):
        return "OperatorPoly(alpha=%r, coeffs=%r)" % (self.alpha, list(self.coeffs))

    def __eq__(self, other):
        if not isinstance(other, OperatorPoly):
            return NotImplemented
        return abs(self.alpha - other.alpha) <= ALPHA_TOL and self.coeffs == other.coeffs

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    __hash__ = None

    def isclose(self, other, tol=1e-12):
        if self.degree != other.degree:
            return False
        scale = max(1.0, self.norm(), other.norm())
        return all(abs(a - b) <= tol * scale for a, b in zip(self.coeffs, other.coeffs))

    def render(self, digits=12):
        parts = []
        for j in range(self.degree, -1, -1):
            c = self.coeffs[j]
            if c == 0:
                continue
            if j == 0:
                parts.append(format_complex(c, digits))
            elif j == 1:
                parts.append('%s*D^alpha' % format_complex(c, digits))
            else:
                parts.append('%s*D^(%d*alpha)' % (format_complex(c, digits), j))
        return ' + '.join(parts)

def _multiply_linear(coeffs, root):
    # coeffs * (m - root), low degree first
    out = [0j] * (len(coeffs) + 1)
    for j, c in enumerate(coeffs):
        out[j + 1] += c
        out[j] -= root * c
    return out

def _horner(coeffs, m):
    value = 0j
    for c in reversed(coeffs):
        value = value * m + c
    return value

def _horner_with_derivative(coeffs, m):
    value = 0j
    deriv = 0j
    bound = 0.0
    am = abs(m)
    for c in reversed(coeffs):
        deriv = deriv * m + value
        value = value * m + c
        bound = bound * am + abs(c)
    return value, deriv, bound

def _divide_linear(coeffs, root):
    # synthetic division by (m - root): quotient, remainder
    n = len(coeffs) - 1
    quotient = [0j] * n
    carry = coeffs[n]
    for j in range(n - 1, -1, -1):
        quotient[j] = carry
        carry = coeffs[j] + root * carry
    return quotient, carry

def _magnitude(coeffs, m):
    am = abs(m)
    return sum(abs(c) * am ** j for j, c in enumerate(coeffs))

def eval_poly(op, m):
    """
    Horner evaluation of ``sum c_j m^j``.
    """
    return _horner(op.coeffs, complex(m))

def apply(op, s):
    """
    Returns ``f(D^alpha)[s] = sum_j c_j D^(j alpha)[s]``.
    """
    if abs(op.alpha - s.alpha) > ALPHA_TOL:
        raise AlphaMismatchError("Operator order %r doesn't match term order %r" % (op.alpha, s.alpha))

    current = s
    total = op.coeffs[0] * s
    for c in op.coeffs[1:]:
        current = d_alpha(current)
        if c != 0:
            total = total + c * current
    return TermSum(s.alpha, total.terms)

def shifted(op, c):
    """
    Coefficients of ``f(D^alpha + c)`` through the binomial expansion.
    """
    c = complex(c)
    n = op.degree
    out = []
    for j in range(n + 1):
        total = 0j
        for i in range(j, n + 1):
            total += op.coeffs[i] * math.comb(i, j) * c ** (i - j)
        out.append(total)
    return OperatorPoly(op.alpha, out)

def deflate(op, c, k=1):
    """
    Divides ``(D^alpha - c)^k`` out of ``op`` by repeated synthetic
    division and returns the cofactor.

    Raises :exc:`fde4py.exc.NotARootError` as soon as a division
    leaves a remainder above ``DEFLATION_TOL`` relative to the
    magnitude of the polynomial at ``c``.
    """
    c = complex(c)
    if int(k) != k or k < 1:
        raise ValueError('k must be a positive integer, got %r' % k)
    if k > op.degree:
        raise NotARootError("Cannot divide a degree %d operator by a degree %d factor" % (op.degree, k))

    coeffs = list(op.coeffs)
    for step in range(int(k)):
        scale = max(max(abs(x) for x in coeffs), _magnitude(coeffs, c))
        quotient, remainder = _divide_linear(coeffs, c)
        if abs(remainder) > DEFLATION_TOL * scale:
            raise NotARootError("%s is not a root of multiplicity %d (remainder %g at step %d)"
                                % (format_complex(c), k, abs(remainder), step + 1))
        coeffs = quotient
    return OperatorPoly(op.alpha, coeffs)

class RootSet(object):
    def __init__(self, roots):
        """
        Distinct roots with their multiplicities, as a list of
        ``(root, multiplicity)`` pairs.
        """
        self.roots = [(complex(r), int(m)) for (r, m) in roots]

    def __repr__(self):
        return "RootSet(%r)" % self.roots

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)

    @property
    def degree(self):
        return sum(m for (_, m) in self.roots)

    def multiplicity_of(self, c, tol=1e-9):
        """
        Multiplicity of ``c`` as a root, 0 when it isn't one.
        """
        c = complex(c)
        for root, mult in self.roots:
            if abs(root - c) <= tol * max(1.0, abs(root)):
                return mult
        return 0

    def expand(self):
        """
        Monic coefficients of ``prod (m - root)^multiplicity``.
        """
        coeffs = [1 + 0j]
        for root, mult in self.roots:
            for _ in range(mult):
                coeffs = _multiply_linear(coeffs, root)
        return coeffs

def _initial_guesses(coeffs, rng):
    n = len(coeffs) - 1
    lead = coeffs[-1]
    # Fujiwara's bound on root moduli
    radius = 2 * max(abs(coeffs[n - j] / lead) ** (1.0 / j) for j in range(1, n + 1))
    radius = max(radius, 1e-3)
    offset = rng.uniform(0, 2 * math.pi)
    return [0.5 * radius * (1 + 0.1 * rng.random()) *
            cmath.exp(1j * (2 * math.pi * i / n + offset))
            for i in range(n)]

def _aberth(coeffs, rng):
    n = len(coeffs) - 1
    z = _initial_guesses(coeffs, rng)
    done = [False] * n

    for iteration in range(MAX_ITERATIONS):
        for i in range(n):
            if done[i]:
                continue
            value, deriv, bound = _horner_with_derivative(coeffs, z[i])
            if abs(value) <= 8 * EPS * bound:
                done[i] = True
                continue
            repulsion = 0j
            for j in range(n):
                if j != i:
                    gap = z[i] - z[j]
                    if gap == 0:
                        gap = EPS * max(1.0, abs(z[i]))
                    repulsion += 1.0 / gap
            if deriv == 0:
                z[i] += EPS * max(1.0, abs(z[i])) * (1 + 1j)
                continue
            w = value / deriv
            denom = 1 - w * repulsion
            step = w / denom if denom != 0 else w
            z[i] -= step
            if abs(step) <= 4 * EPS * abs(z[i]):
                done[i] = True
        if all(done):
            logger.debug("Aberth iteration converged after %d sweeps", iteration + 1)
            return z
    return None

def _clusters(z):
    # single linkage over the candidate radius
    groups = []
    for x in z:
        hit = [g for g in groups
               if any(abs(x - y) <= CLUSTER_RADIUS * max(1.0, abs(x)) for y in g)]
        merged = [x]
        for g in hit:
            merged.extend(g)
            groups.remove(g)
        groups.append(merged)
    return groups

def _confirms_multiplicity(coeffs, root, mult):
    try:
        for _ in range(mult):
            scale = max(max(abs(x) for x in coeffs), _magnitude(coeffs, root))
            coeffs, remainder = _divide_linear(coeffs, root)
            if abs(remainder) > DEFLATION_TOL * scale:
                return False
    except (ZeroDivisionError, OverflowError):
        return False
    return True

def _polish(coeffs, root):
    for _ in range(3):
        value, deriv, _ = _horner_with_derivative(coeffs, root)
        if deriv == 0 or value == 0:
            break
        better = root - value / deriv
        if abs(_horner(coeffs, better)) >= abs(value):
            break
        root = better
    return root

def _snap_root(root):
    scale = max(1.0, abs(root))
    re, im = root.real, root.imag
    if abs(im) <= SNAP_TOL * scale:
        im = 0.0
    if abs(re) <= SNAP_TOL * scale:
        re = 0.0
    return complex(re, im)

def _conjugate_close(roots):
    # real operators: pair each upper half-plane root with its mirror
    upper = [(r, m) for (r, m) in roots if r.imag > 0]
    lower = [(r, m) for (r, m) in roots if r.imag < 0]
    real = [(r, m) for (r, m) in roots if r.imag == 0]
    if len(upper) != len(lower):
        return roots
    paired = []
    remaining = list(lower)
    for r, m in upper:
        best = min(remaining, key=lambda item: abs(item[0] - r.conjugate()))
        if best[1] != m:
            return roots
        remaining.remove(best)
        mean = 0.5 * (r + best[0].conjugate())
        paired.append((mean, m))
        paired.append((mean.conjugate(), m))
    return real + paired

def _derivative(coeffs, order):
    out = list(coeffs)
    for _ in range(order):
        out = [j * out[j] for j in range(1, len(out))]
    return out

def _refine_center(coeffs, center, mult):
    # a root of multiplicity r is a simple root of the (r-1)-th derivative
    return _polish(_derivative(coeffs, mult - 1), center)

def char_roots(op, seed=0):
    """
    All roots of the characteristic polynomial ``sum c_j m^j`` with
    their multiplicities, as a :class:`RootSet`.

    Exact zero roots are split off first. The remaining roots come
    from Aberth's iteration; clusters are refined with Newton's method
    on the matching derivative and kept merged only when repeated
    synthetic division confirms the multiplicity.

    Raises :exc:`fde4py.exc.RootFindingError` if the simultaneous
    iteration keeps failing after random restarts or a root misses
    the residual bound.
    """
    n = op.degree
    if n < 1:
        raise ValueError('a degree 0 operator has no characteristic roots')

    zeros = 0
    while op.coeffs[zeros] == 0:
        zeros += 1
    coeffs = list(op.coeffs[zeros:])
    roots = [(0j, zeros)] if zeros else []

    if len(coeffs) == 2:
        roots.append((-coeffs[0] / coeffs[1], 1))
    elif len(coeffs) > 2:
        rng = random.Random(seed)
        for attempt in range(MAX_RESTARTS):
            z = _aberth(coeffs, rng)
            if z is not None:
                break
            logger.debug("Aberth iteration restarted (attempt %d)", attempt + 1)
        else:
            raise RootFindingError("Root finding did not converge within %d iterations" % MAX_ITERATIONS)

        for group in _clusters(z):
            if len(group) > 1:
                center = _refine_center(coeffs, sum(group) / len(group), len(group))
                if _confirms_multiplicity(coeffs, center, len(group)):
                    roots.append((center, len(group)))
                    continue
            roots.extend((_polish(coeffs, x), 1) for x in group)

    roots = [(_snap_root(r), m) for (r, m) in roots]
    if op.is_real:
        roots = _conjugate_close(roots)
    roots.sort(key=lambda item: (item[0].real, item[0].imag))

    norm = op.norm()
    for root, mult in roots:
        residual = abs(eval_poly(op, root))
        if residual > RESIDUAL_TOL * norm * max(1.0, abs(root)) ** n:
            raise RootFindingError("Root %s misses the residual bound (%g)" % (format_complex(root), residual))
        logger.debug("characteristic root %s, multiplicity %d", format_complex(root), mult)

    return RootSet(roots)
