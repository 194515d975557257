# -*- coding: utf-8 -*-
__doc__ = """
Problem files.

JSON is the canonical format:

.. code-block:: json

   {
     "alpha": "1/3",
     "operator": [6, -5, 1],
     "forcing": [{"coeff": 1, "k": 6, "rate_re": 0, "rate_im": 0}]
   }

``operator`` lists ``c_0 .. c_n`` of ``sum c_j D^(j alpha)``. Complex
numbers are written ``{"re": x, "im": y}``. Besides raw atoms the
forcing accepts the sugar kinds::

    {"kind": "ml", "coeff": C, "rate": c, "k": 0}
    {"kind": "power", "coeff": C, "k": 6}     or  {"kind": "power", "p": 2}
    {"kind": "cos", "coeff": C, "rate": b}
    {"kind": "sin", "coeff": C, "rate": b}

A plain exponent ``p`` is accepted only when ``p / alpha`` is an
integer. Instead of ``operator`` and ``forcing`` a file may carry an
``equation`` string in the DSL of :mod:`fde4py.dsl`, with optional
``bindings``.

:func:`dumps` writes JSON with a fixed key order and every float
printed with 17 significant digits, so output files are byte for byte
reproducible.
"""
from fractions import Fraction
import json
import math

from fde4py.exc import ParseError, ValidationError
from fde4py.operators import OperatorPoly
from fde4py.solver import Problem
from fde4py.terms import TermSum, FracTerm, fractional_cos, fractional_sin

__all__ = ['parse_problem', 'problem_from_json', 'problem_to_json',
           'exponent_to_k', 'parse_alpha', 'dumps']

# p / alpha must be this close to an integer
EXPONENT_TOL = 1e-9

FORCING_KINDS = ('ml', 'power', 'cos', 'sin')

def parse_problem(text, format='json', bindings=None, alpha=None):
    """
    Parses ``text`` into a validated :class:`fde4py.solver.Problem`.

    ``alpha`` overrides the order given in ``text``.

    Raises :exc:`fde4py.exc.ParseError` for malformed input and
    :exc:`fde4py.exc.ValidationError` for well formed input
    describing an invalid problem.
    """
    if format == 'dsl':
        from fde4py.dsl import parse_equation
        return parse_equation(text, alpha=alpha, bindings=bindings)
    if format != 'json':
        raise ValueError("format must be 'json' or 'dsl', got %r" % format)

    try:
        data = json.loads(text)
    except ValueError as e:
        raise ParseError(getattr(e, 'msg', str(e)), getattr(e, 'lineno', None),
                         getattr(e, 'colno', None))
    except RecursionError:
        raise ParseError('JSON nested too deeply')
    return problem_from_json(data, bindings, alpha)

def parse_alpha(value):
    """
    ``alpha`` as a float from a number or a ``"p/q"`` string.
    """
    if isinstance(value, bool):
        raise ValidationError('alpha must be a number, got %r' % value)
    if isinstance(value, str):
        try:
            value = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValidationError('alpha must be a number or a fraction, got %r' % value)
    try:
        alpha = float(value)
    except (TypeError, ValueError):
        raise ValidationError('alpha must be a number, got %r' % (value,))
    if not 0 < alpha <= 1:
        raise ValidationError('alpha must lie in (0, 1], got %r' % alpha)
    return alpha

def exponent_to_k(p, alpha):
    """
    Converts the plain exponent of ``t^p`` to ``k`` with
    ``t^p = t^(k alpha)``.
    """
    ratio = p / alpha
    if not math.isfinite(ratio):
        raise ValidationError("t^%r is not a non-negative integer power of t^%r" % (p, alpha))
    k = int(round(ratio))
    if abs(ratio - k) > EXPONENT_TOL * max(1.0, abs(ratio)) or k < 0:
        raise ValidationError("t^%r is not a non-negative integer power of t^%r" % (p, alpha))
    return k

def _number(value, what):
    if isinstance(value, bool):
        raise ValidationError('%s must be a number, got %r' % (what, value))
    if isinstance(value, dict):
        unknown = set(value) - set(('re', 'im'))
        if unknown:
            raise ValidationError('%s: unexpected keys %s' % (what, ', '.join(sorted(unknown))))
        return complex(_number(value.get('re', 0.0), what).real,
                       _number(value.get('im', 0.0), what).real)
    if isinstance(value, (int, float)):
        z = complex(value)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ValidationError('%s must be finite' % what)
        return z
    raise ValidationError('%s must be a number, got %r' % (what, value))

def _integer(value, what):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or \
       int(value) != value or value < 0:
        raise ValidationError('%s must be a non-negative integer, got %r' % (what, value))
    return int(value)

def _real(value, what):
    z = _number(value, what)
    if z.imag:
        raise ValidationError('%s must be real' % what)
    return z.real

def _k_of(item, alpha):
    if 'k' in item and 'p' in item:
        raise ValidationError("give either 'k' or 'p', not both")
    if 'p' in item:
        return exponent_to_k(_real(item['p'], 'p'), alpha)
    return _integer(item.get('k', 0), 'k')

def _forcing_atom(item, alpha):
    if not isinstance(item, dict):
        raise ValidationError('forcing atoms must be objects, got %r' % (item,))
    coeff = _number(item.get('coeff', 1.0), 'coeff')
    kind = item.get('kind')

    if kind is None:
        rate = complex(_real(item.get('rate_re', 0.0), 'rate_re'),
                       _real(item.get('rate_im', 0.0), 'rate_im'))
        return TermSum(alpha, [FracTerm(coeff, _k_of(item, alpha), rate)])
    if kind == 'ml':
        return TermSum.ml(alpha, _number(item.get('rate', 0.0), 'rate'), coeff, _k_of(item, alpha))
    if kind == 'power':
        return TermSum.power(alpha, _k_of(item, alpha), coeff)
    if kind in ('cos', 'sin'):
        b = _real(item.get('rate', 0.0), 'rate')
        build = fractional_cos if kind == 'cos' else fractional_sin
        return build(alpha, b, coeff)
    raise ValidationError('unknown forcing kind %r, expected one of %s' % (kind, ', '.join(FORCING_KINDS)))

def problem_from_json(data, bindings=None, alpha=None):
    """
    Builds a :class:`fde4py.solver.Problem` from decoded JSON.
    """
    if not isinstance(data, dict):
        raise ValidationError('a problem must be a JSON object')

    if 'equation' in data:
        if 'operator' in data or 'forcing' in data:
            raise ValidationError("give either 'equation' or 'operator' and 'forcing', not both")
        from fde4py.dsl import parse_equation
        merged = dict(data.get('bindings') or {})
        merged.update(bindings or {})
        if alpha is None and 'alpha' in data:
            alpha = data['alpha']
        if alpha is not None:
            alpha = parse_alpha(alpha)
        return parse_equation(data['equation'], alpha=alpha, bindings=merged)

    if 'operator' not in data:
        raise ValidationError("a problem needs 'operator' or 'equation'")
    if alpha is None:
        if 'alpha' not in data:
            raise ValidationError("a problem needs 'alpha'")
        alpha = data['alpha']
    alpha = parse_alpha(alpha)

    coeffs = data['operator']
    if not isinstance(coeffs, list) or len(coeffs) < 2:
        raise ValidationError('the operator needs at least two coefficients c_0 and c_1')
    coeffs = [_number(c, 'operator coefficient') for c in coeffs]
    if coeffs[-1] == 0:
        raise ValidationError('the leading operator coefficient must be non-zero')

    forcing = TermSum.zero(alpha)
    for item in data.get('forcing', []) or []:
        forcing = forcing + _forcing_atom(item, alpha)

    try:
        op = OperatorPoly(alpha, coeffs)
    except ValueError as e:
        raise ValidationError(str(e))
    return Problem(alpha, op, forcing)

def _complex_json(z):
    z = complex(z)
    if z.imag == 0:
        return z.real
    return {'re': z.real, 'im': z.imag}

def problem_to_json(problem):
    """
    Canonical JSON form of a symbolic problem, the inverse of
    :func:`problem_from_json`.
    """
    return {
        'alpha': problem.alpha,
        'operator': [_complex_json(c) for c in problem.op.coeffs],
        'forcing': [{'coeff': _complex_json(t.coeff), 'k': t.k,
                     'rate_re': t.rate.real, 'rate_im': t.rate.imag}
                    for t in problem.forcing.terms],
    }

def _encode(obj, indent, level):
    pad = ' ' * (indent * (level + 1))
    end = ' ' * (indent * level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError('cannot encode %r as JSON' % obj)
        text = '%.17g' % obj
        if text == '-0':
            text = '0'
        return text
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return '{}'
        items = ['%s%s: %s' % (pad, json.dumps(str(k)), _encode(v, indent, level + 1))
                 for k, v in obj.items()]
        return '{\n%s\n%s}' % (',\n'.join(items), end)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return '[]'
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return '[\n%s\n%s]' % (',\n'.join(items), end)
    raise TypeError('cannot encode %r as JSON' % (obj,))

def dumps(obj, indent=2):
    """
    Deterministic JSON text: keys keep their insertion order and floats
    are printed with ``%.17g``.
    """
    return _encode(obj, indent, 0) + '\n'
