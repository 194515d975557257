# -*- coding: utf-8 -*-
__doc__ = """
A small equation language for problems with real coefficients.

.. code-block:: text

   # forced oscillator
   alpha = 0.5
   let w = 2
   D^2a y + w^2 y = 3 cos(1)

A program is a list of statements separated by newlines or ``;``:

* ``alpha = <expr>`` sets the order,
* ``let <name> = <expr>`` binds a name,
* exactly one equation ``<lhs> = <rhs>``.

On the left ``D^ja y`` (or ``D^j y``, ``D y``) is ``D^(j alpha) y``
and a bare ``y`` has order 0; each may carry a real coefficient. On
the right the atoms are ``E(c)`` for ``E_alpha(c t^alpha)``,
``cos(b)`` and ``sin(b)`` for ``cos_alpha(b t^alpha)`` and
``sin_alpha(b t^alpha)``, ``t^ka`` for ``t^(k alpha)`` and ``t^p``
for a plain power. A ``t`` power may be followed by an ``E`` atom,
and a term without atom is a constant. Coefficients are arithmetic
expressions over numbers and bound names.

The grammar is LL(1). Errors raise :exc:`fde4py.exc.ParseError` with
the line, the column and the set of tokens that would have been
accepted.
"""
from collections import namedtuple
import logging
import math
import re

from fde4py.exc import ParseError, ValidationError
from fde4py.operators import OperatorPoly
from fde4py.terms import TermSum, fractional_cos, fractional_sin

__all__ = ['Token', 'tokenize', 'EquationParser', 'parse_equation']

logger = logging.getLogger('fde4py')

KEYWORDS = frozenset(['y', 'D', 't', 'E', 'cos', 'sin', 'let', 'alpha'])
# atoms ending a coefficient
LHS_ATOMS = frozenset(['y', 'D'])
RHS_ATOMS = frozenset(['t', 'E', 'cos', 'sin'])
# marks an exponent as a multiple of alpha: D^2a, t^6a
ALPHA_MARK = 'a'
# highest accepted D power
MAX_ORDER = 64
# deepest accepted nesting of parentheses and powers
MAX_NESTING = 100

SYMBOLS = '+-*/^()=;'
TOKEN_STARTS = ['number', 'name', 'end of line'] + [repr(c) for c in SYMBOLS]
FACTOR_STARTS = ['number', 'name', "'('"]

Token = namedtuple('Token', 'kind value line column')

_NUMBER = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?", re.ASCII)
_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*", re.ASCII)

def tokenize(text):
    """
    Generator of :class:`Token` objects. Kinds are ``NUMBER``,
    ``NAME``, ``SYMBOL``, ``NEWLINE`` and a final ``EOF``. Numbers
    directly followed by ``a`` (``2a``) yield two tokens.
    """
    line, start, pos = 1, 0, 0
    while pos < len(text):
        c = text[pos]
        column = pos - start + 1
        if c == '\n':
            yield Token('NEWLINE', c, line, column)
            line += 1
            pos += 1
            start = pos
        elif c.isspace():
            pos += 1
        elif c == '#':
            while pos < len(text) and text[pos] != '\n':
                pos += 1
        elif _NUMBER.match(text, pos):
            match = _NUMBER.match(text, pos)
            yield Token('NUMBER', float(match.group(0)), line, column)
            pos = match.end()
        elif _NAME.match(text, pos):
            match = _NAME.match(text, pos)
            yield Token('NAME', match.group(0), line, column)
            pos = match.end()
        elif c in SYMBOLS:
            yield Token('SYMBOL', c, line, column)
            pos += 1
        else:
            raise ParseError("unexpected character %r" % c, line, column, TOKEN_STARTS)
    yield Token('EOF', '', line, pos - start + 1)

def _describe(token):
    if token.kind == 'EOF':
        return 'end of input'
    if token.kind == 'NEWLINE':
        return 'end of line'
    if token.kind == 'NUMBER':
        return 'number %g' % token.value
    return repr(token.value)

class EquationParser(object):
    def __init__(self, text, alpha=None, bindings=None):
        """
        Parses ``text`` in one pass over :func:`tokenize`. The
        ``alpha`` argument takes precedence over an ``alpha``
        statement, ``bindings`` seed the ``let`` names.
        """
        self.tokens = tokenize(text)
        self.current = next(self.tokens)
        self.alpha = alpha
        self.explicit_alpha = alpha is not None
        self.names = {}
        bindings = dict(bindings or {})
        if 'alpha' in bindings and alpha is None:
            self.alpha = bindings.pop('alpha')
            self.explicit_alpha = True
        bindings.pop('alpha', None)
        for name, value in bindings.items():
            if name in KEYWORDS:
                raise ValidationError('%r is reserved and cannot be bound' % name)
            try:
                self.names[name] = float(value)
            except (TypeError, ValueError):
                raise ValidationError('binding %s=%r is not a number' % (name, value))

        self.equation = None
        self.depth = 0
        # order of the D power -> coefficient
        self.operator = {}
        # (kind, coefficient, payload, token) resolved once alpha is known
        self.forcing = []

    # token helpers

    def advance(self):
        token = self.current
        self.current = next(self.tokens)
        return token

    def error(self, msg, expected, token=None):
        token = token or self.current
        return ParseError(msg, token.line, token.column, expected)

    def at(self, kind, value=None):
        return self.current.kind == kind and (value is None or self.current.value == value)

    def at_symbol(self, value):
        return self.at('SYMBOL', value)

    def at_name(self, names):
        return self.current.kind == 'NAME' and self.current.value in names

    def expect_symbol(self, value):
        if not self.at_symbol(value):
            raise self.error('unexpected %s' % _describe(self.current), [repr(value)])
        return self.advance()

    def expect_name(self, value):
        if not self.at('NAME', value):
            raise self.error('unexpected %s' % _describe(self.current), [repr(value)])
        return self.advance()

    # statements

    def parse(self):
        while True:
            while self.at('NEWLINE') or self.at_symbol(';'):
                self.advance()
            if self.at('EOF'):
                break
            self.statement()
            if not (self.at('NEWLINE') or self.at_symbol(';') or self.at('EOF')):
                raise self.error('unexpected %s' % _describe(self.current),
                                 ['end of line', "';'", 'end of input'])
        if self.equation is None:
            raise self.error('no equation found', ["'y'", "'D'"])
        return self.build()

    def statement(self):
        if self.at('NAME', 'let'):
            self.advance()
            if self.current.kind != 'NAME':
                raise self.error('unexpected %s' % _describe(self.current), ['name'])
            token = self.advance()
            if token.value in KEYWORDS:
                raise self.error('%r is reserved and cannot be bound' % token.value, ['name'], token=token)
            self.expect_symbol('=')
            self.names[token.value] = self.expression()
        elif self.at('NAME', 'alpha'):
            token = self.advance()
            self.expect_symbol('=')
            value = self.expression()
            if self.explicit_alpha:
                logger.debug("alpha statement at line %d overridden by %r", token.line, self.alpha)
            else:
                self.alpha = value
        else:
            if self.equation is not None:
                raise self.error('only one equation is allowed', ["'let'", "'alpha'", 'end of input'])
            self.equation = self.current
            self.lhs()
            self.expect_symbol('=')
            self.rhs()

    # left hand side: sum of [coef] D^j y

    def lhs(self):
        sign = self.sign()
        self.lhs_term(sign)
        while self.at_symbol('+') or self.at_symbol('-'):
            self.lhs_term(self.sign())

    def sign(self):
        sign = 1.0
        while self.at_symbol('+') or self.at_symbol('-'):
            if self.advance().value == '-':
                sign = -sign
        return sign

    def lhs_term(self, sign):
        coeff = sign
        if not self.at_name(LHS_ATOMS):
            value, starred = self.product(LHS_ATOMS)
            coeff *= value
            if not self.at_name(LHS_ATOMS):
                raise self.error('unexpected %s' % _describe(self.current), ["'y'", "'D'"])
        order = self.derivative()
        self.operator[order] = self.operator.get(order, 0.0) + coeff

    def derivative(self):
        if self.at('NAME', 'y'):
            self.advance()
            return 0
        self.expect_name('D')
        order = 1
        if self.at_symbol('^'):
            self.advance()
            token = self.current
            order = self.alpha_exponent(require_mark=False)[0]
            if order < 1:
                raise self.error('the order of D must be at least 1', ['number', repr(ALPHA_MARK)], token=token)
            if order > MAX_ORDER:
                raise self.error('the order of D must be at most %d' % MAX_ORDER,
                                 ['number', repr(ALPHA_MARK)], token=token)
        self.expect_name('y')
        return order

    def alpha_exponent(self, require_mark):
        """
        ``j``, ``ja``, ``a`` or ``(expr)``. Returns ``(value, marked)``;
        ``marked`` tells whether the exponent counts multiples of
        alpha.
        """
        token = self.current
        if self.at('NAME', ALPHA_MARK):
            self.advance()
            return 1, True
        if self.at('NUMBER'):
            value = self.advance().value
            marked = False
            if self.at('NAME', ALPHA_MARK):
                self.advance()
                marked = True
            elif require_mark is None:
                return value, False
            if math.isinf(value) or value != int(value):
                raise self.error('the exponent must be an integer', ['integer'], token=token)
            return int(value), marked
        if self.at_symbol('(') and require_mark is None:
            self.advance()
            value = self.expression()
            self.expect_symbol(')')
            return value, False
        expected = ['number', repr(ALPHA_MARK)]
        if require_mark is None:
            expected.append("'('")
        raise self.error('unexpected %s' % _describe(self.current), expected)

    # right hand side: sum of forcing atoms

    def rhs(self):
        self.rhs_term(self.sign())
        while self.at_symbol('+') or self.at_symbol('-'):
            self.rhs_term(self.sign())

    def rhs_term(self, sign):
        coeff = sign
        token = self.current
        if not self.at_name(RHS_ATOMS):
            value, starred = self.product(RHS_ATOMS)
            coeff *= value
            if not self.at_name(RHS_ATOMS):
                if starred:
                    raise self.error('unexpected %s' % _describe(self.current),
                                     ["'E'", "'t'", "'cos'", "'sin'"])
                self.forcing.append(('const', coeff, None, token))
                return
        self.forcing_atom(coeff)

    def forcing_atom(self, coeff):
        token = self.current
        if self.at('NAME', 'cos') or self.at('NAME', 'sin'):
            kind = self.advance().value
            self.forcing.append((kind, coeff, self.call_argument(), token))
            return

        power = None
        if self.at('NAME', 't'):
            self.advance()
            power = (1.0, False)
            if self.at_symbol('^'):
                self.advance()
                power = self.alpha_exponent(require_mark=None)
            if self.at_symbol('*'):
                self.advance()
                if not self.at('NAME', 'E'):
                    raise self.error('unexpected %s' % _describe(self.current), ["'E'"])

        rate = 0.0
        if self.at('NAME', 'E'):
            self.advance()
            rate = self.call_argument()
        elif power is None:
            raise self.error('unexpected %s' % _describe(self.current),
                             ["'E'", "'t'", "'cos'", "'sin'"])

        self.forcing.append(('ml', coeff, (power, rate), token))

    def call_argument(self):
        self.expect_symbol('(')
        value = self.expression()
        self.expect_symbol(')')
        return value

    # arithmetic over numbers and bound names

    def expression(self):
        value = self.sign() * self.product(())[0]
        while self.at_symbol('+') or self.at_symbol('-'):
            op = self.advance().value
            term = self.sign() * self.product(())[0]
            value = value + term if op == '+' else value - term
        return value

    def starts_factor(self):
        if self.at('NUMBER') or self.at_symbol('('):
            return True
        return self.current.kind == 'NAME' and \
            (self.current.value not in KEYWORDS or self.current.value == 'alpha')

    def product(self, atoms):
        """
        Parses a coefficient and stops in front of an atom keyword.
        Returns ``(value, starred)`` where ``starred`` is set when the
        coefficient ended with ``*``.
        """
        value = self.power()
        while True:
            if self.at_symbol('*'):
                self.advance()
                if self.at_name(atoms):
                    return value, True
                value *= self.power()
            elif self.at_symbol('/'):
                token = self.advance()
                divisor = self.power()
                if divisor == 0:
                    raise self.error('division by zero', FACTOR_STARTS, token=token)
                value /= divisor
            elif self.starts_factor():
                value *= self.power()
            else:
                return value, False

    def power(self):
        # every nested parenthesis and exponent passes through here
        if self.depth >= MAX_NESTING:
            raise self.error('expression nested deeper than %d levels' % MAX_NESTING, ['number', 'name'])
        self.depth += 1
        try:
            base = self.factor()
            if self.at_symbol('^'):
                token = self.advance()
                exponent = self.sign() * self.power()
                try:
                    return float(base ** exponent)
                except (OverflowError, ZeroDivisionError, TypeError):
                    raise self.error('cannot raise %g to %g' % (base, exponent), FACTOR_STARTS, token=token)
            return base
        finally:
            self.depth -= 1

    def factor(self):
        token = self.current
        if self.at('NUMBER'):
            return self.advance().value
        if self.at_symbol('('):
            self.advance()
            value = self.expression()
            self.expect_symbol(')')
            return value
        if self.at('NAME', 'alpha'):
            self.advance()
            if self.alpha is None:
                raise self.error('alpha is used before it is set', ['number', "'('"], token=token)
            return float(self.alpha)
        if self.current.kind == 'NAME' and self.current.value not in KEYWORDS:
            name = self.advance().value
            if name not in self.names:
                raise self.error('unbound name %r' % name, ['bound name', 'number', "'('"], token=token)
            return self.names[name]
        raise self.error('unexpected %s' % _describe(self.current), FACTOR_STARTS)

    # lowering

    def build(self):
        from fde4py.problem import exponent_to_k, parse_alpha
        from fde4py.solver import Problem

        if self.alpha is None:
            raise ValidationError('alpha is not set, add an alpha statement or pass it explicitly')
        alpha = parse_alpha(self.alpha)

        degree = max(self.operator)
        coeffs = [self.operator.get(j, 0.0) for j in range(degree + 1)]
        if degree < 1 or coeffs[-1] == 0:
            raise ValidationError('the equation needs a non-vanishing D^(j alpha) y term with j >= 1')

        try:
            op = OperatorPoly(alpha, coeffs)
            forcing = TermSum.zero(alpha)
            for kind, coeff, payload, token in self.forcing:
                if kind == 'const':
                    forcing = forcing + TermSum.constant(alpha, coeff)
                elif kind == 'cos':
                    forcing = forcing + fractional_cos(alpha, payload, coeff)
                elif kind == 'sin':
                    forcing = forcing + fractional_sin(alpha, payload, coeff)
                else:
                    power, rate = payload
                    k = 0
                    if power is not None:
                        value, marked = power
                        k = value if marked else exponent_to_k(value, alpha)
                    forcing = forcing + TermSum.ml(alpha, rate, coeff, k)
        except ValidationError:
            raise
        except ValueError as e:
            # non-finite coefficients from overflowing arithmetic
            raise ValidationError(str(e))

        logger.debug("parsed equation at line %d: %d operator terms, %d forcing atoms",
                     self.equation.line, len(self.operator), len(self.forcing))
        return Problem(alpha, op, forcing)

def parse_equation(text, alpha=None, bindings=None):
    """
    Parses a DSL program into a :class:`fde4py.solver.Problem`.
    """
    return EquationParser(text, alpha, bindings).parse()
