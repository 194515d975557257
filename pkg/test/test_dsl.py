# -*- coding: utf-8 -*-
import random
import unittest

from mock import patch

from fde4py.dsl import Token, tokenize, EquationParser, parse_equation
from fde4py.exc import ParseError, ValidationError
from fde4py.operators import OperatorPoly
from fde4py.solver import Problem
from fde4py.terms import TermSum, fractional_cos, fractional_sin

# pieces the fuzzer glues together
FUZZ_ALPHABET = ['D', 'y', 't', 'E', 'cos', 'sin', 'let', 'alpha', 'w', 'q',
                 '(', ')', '^', '2a', 'a', '+', '-', '*', '/', '=', ';', '\n',
                 '1', '0', '0.5', '3', '#x\n', '$', 'D^2a y', 'y =', '= E(1)']

class FDETokenizerTest(unittest.TestCase):
    def test_tokens(self):
        tokens = list(tokenize("D^2a y # comment\n  + 1.5e1"))
        self.assertEqual(tokens, [
            Token('NAME', 'D', 1, 1),
            Token('SYMBOL', '^', 1, 2),
            Token('NUMBER', 2.0, 1, 3),
            Token('NAME', 'a', 1, 4),
            Token('NAME', 'y', 1, 6),
            Token('NEWLINE', '\n', 1, 17),
            Token('SYMBOL', '+', 2, 3),
            Token('NUMBER', 15.0, 2, 5),
            Token('EOF', '', 2, 10),
        ])

    def test_numbers(self):
        values = [t.value for t in tokenize(".5 3. 2e-1 10") if t.kind == 'NUMBER']
        self.assertEqual(values, [0.5, 3.0, 0.2, 10.0])

    def test_names(self):
        names = [t.value for t in tokenize("a0 _w cos") if t.kind == 'NAME']
        self.assertEqual(names, ['a0', '_w', 'cos'])

    def test_unexpected_character(self):
        try:
            list(tokenize("D y = 1\n y $ 2"))
        except ParseError as e:
            self.assertEqual((e.line, e.column), (2, 4))
        else:
            self.fail('ParseError not raised')

    def test_non_ascii_is_rejected(self):
        self.assertRaises(ParseError, list, tokenize(u"D y = é"))
        self.assertRaises(ParseError, list, tokenize(u"D y = ²"))

class FDEEquationTest(unittest.TestCase):
    def test_example_1(self):
        alpha = 1 / 3.
        expected = Problem(alpha, OperatorPoly(alpha, [6, -5, 1]), TermSum.power(alpha, 6))
        self.assertEqual(parse_equation("alpha = 1/3\nD^2a y - 5 D y + 6 y = t^6a"), expected)
        self.assertEqual(parse_equation("alpha = 1/3\nD^2a y - 5 D y + 6 y = t^2"), expected)

    def test_example_2(self):
        expected = Problem(0.5, OperatorPoly(0.5, [4, 0, 1]), fractional_cos(0.5, 1.0, 3.0))
        bindings = {'w': 2, 'F': 3, 'a0': 1, 'alpha': 0.5}
        self.assertEqual(parse_equation("D^2a y + w^2 y = F cos(a0)", bindings=bindings), expected)
        text = "# forced oscillator\nalpha = 0.5; let w = 2\n\nD^2a y + w^2 y = 3 cos(1)\n"
        self.assertEqual(parse_equation(text), expected)

    def test_explicit_alpha_wins(self):
        problem = parse_equation("alpha = 0.5; D y = 1", alpha=0.25)
        self.assertEqual(problem.alpha, 0.25)
        problem = parse_equation("alpha = 0.5; D y = 1", bindings={'alpha': 0.75})
        self.assertEqual(problem.alpha, 0.75)

    def test_override_is_logged(self):
        with patch('fde4py.dsl.logger') as logger:
            parse_equation("alpha = 0.5; D y = 1", alpha=0.25)
            self.assertTrue(logger.debug.called)

    def test_power_times_ml(self):
        problem = parse_equation("D^a y + y = t^a * E(2)", alpha=0.5)
        self.assertEqual(problem.op, OperatorPoly(0.5, [1, 1]))
        self.assertEqual(problem.forcing, TermSum.ml(0.5, 2.0, 1.0, 1))

    def test_forcing_sum(self):
        problem = parse_equation("D y = 2*E(-1) - t", alpha=0.5)
        expected = TermSum.ml(0.5, -1.0, 2.0) + TermSum.power(0.5, 2, -1.0)
        self.assertEqual(problem.forcing, expected)

    def test_constants_and_trig(self):
        problem = parse_equation("D y + y = 4", alpha=0.5)
        self.assertEqual(problem.forcing, TermSum.constant(0.5, 4))

        problem = parse_equation("2 * D y = sin(2)", alpha=0.5)
        self.assertEqual(problem.op, OperatorPoly(0.5, [0, 2]))
        self.assertEqual(problem.forcing, fractional_sin(0.5, 2.0, 1.0))

        problem = parse_equation("D^2 y = alpha", alpha=0.5)
        self.assertEqual(problem.op, OperatorPoly(0.5, [0, 0, 1]))
        self.assertEqual(problem.forcing, TermSum.constant(0.5, 0.5))

    def test_parenthesized_exponents(self):
        problem = parse_equation("D^2a y + (1 + 1) y = t^(1/2)", alpha=0.5)
        self.assertEqual(problem.op, OperatorPoly(0.5, [2, 0, 1]))
        self.assertEqual(problem.forcing, TermSum.power(0.5, 1))

    def test_terms_merge(self):
        problem = parse_equation("D y + D y + y - 0.5 y = 1", alpha=0.5)
        self.assertEqual(problem.op, OperatorPoly(0.5, [0.5, 2]))

    def test_parser_object(self):
        parser = EquationParser("let w = 3\nD y = w", alpha=0.5)
        problem = parser.parse()
        self.assertEqual(parser.names, {'w': 3.0})
        self.assertEqual(parser.equation.line, 2)
        self.assertEqual(problem.forcing, TermSum.constant(0.5, 3))

class FDEEquationErrorTest(unittest.TestCase):
    def assertParseError(self, text, line, column, expected=None, alpha=0.5, bindings=None):
        try:
            parse_equation(text, alpha=alpha, bindings=bindings)
        except ParseError as e:
            self.assertEqual((e.line, e.column), (line, column), str(e))
            self.assertTrue(e.expected, str(e))
            if expected is not None:
                self.assertEqual(e.expected, expected)
            return e
        self.fail('ParseError not raised for %r' % text)

    def test_missing_coefficient(self):
        e = self.assertParseError("D^2a y + = 1", 1, 10, ("'('", 'name', 'number'))
        self.assertTrue("unexpected '='" in str(e))

    def test_error_on_second_line(self):
        self.assertParseError("alpha = 0.5\nD y = E(1) +\n", 2, 13)

    def test_call_without_parenthesis(self):
        e = self.assertParseError("D y = cos 1", 1, 11, ("'('",))
        self.assertTrue('number 1' in str(e))

    def test_unbound_name(self):
        e = self.assertParseError("D y = q E(1)", 1, 7, ("'('", "bound name", "number"))
        self.assertTrue("unbound name 'q'" in str(e))

    def test_statements(self):
        e = self.assertParseError("alpha = 0.5", 1, 12)
        self.assertTrue('no equation found' in str(e))
        e = self.assertParseError("D y = 1\ny = 2", 2, 1, ("'alpha'", "'let'", "end of input"))
        self.assertTrue('only one equation' in str(e))
        self.assertParseError("D y = 1 )", 1, 9, ("';'", 'end of input', 'end of line'))

    def test_reserved_names(self):
        e = self.assertParseError("let alpha = 1\nD y = 1", 1, 5)
        self.assertTrue('reserved' in str(e))
        self.assertParseError("let = 1", 1, 5, ('name',))
        self.assertRaises(ValidationError, parse_equation, "D y = 1", 0.5, {'y': 1})
        self.assertRaises(ValidationError, parse_equation, "D y = 1", 0.5, {'w': 'x'})

    def test_orders(self):
        e = self.assertParseError("D^0 y = 1", 1, 3, ("'a'", "number"))
        self.assertTrue("at least 1" in str(e))
        e = self.assertParseError("D^2.5a y = 1", 1, 3)
        self.assertTrue('integer' in str(e))
        self.assertParseError("D^100 y = 1", 1, 3, ("'a'", "number"))
        self.assertParseError("D^1e999 y = 1", 1, 3)

    def test_arithmetic(self):
        e = self.assertParseError("D y = 1 / 0", 1, 9, ("'('", "name", "number"))
        self.assertTrue('division by zero' in str(e))
        self.assertParseError("D y = (0-8)^(1/3)", 1, 12)
        self.assertParseError("D y = 10^400", 1, 9)
        self.assertParseError("D y = 2*", 1, 9)
        e = self.assertParseError("D y = alpha", 1, 7, alpha=None)
        self.assertTrue('before it is set' in str(e))

    def test_trailing_star(self):
        self.assertParseError("D y = 2 * 3 *", 1, 14)

    def test_nesting_limit(self):
        text = "alpha = 0.5\nD y = " + "(" * 5000 + "1" + ")" * 5000
        e = self.assertParseError(text, 2, 107, ("name", "number"))
        self.assertTrue("nested deeper" in str(e))
        self.assertParseError("D y = " + "2^" * 3000 + "1", 1, 207)
        self.assertParseError("D y = E(" + "(" * 200 + "1" + ")" * 200 + ")", 1, 109)

        problem = parse_equation("D y = " + "(" * 50 + "2" + ")" * 50, alpha=0.5)
        self.assertEqual(problem.forcing, TermSum.constant(0.5, 2))

    def test_invalid_problems(self):
        self.assertRaises(ValidationError, parse_equation, "D y = 1")
        self.assertRaises(ValidationError, parse_equation, "y = 1", 0.5)
        self.assertRaises(ValidationError, parse_equation, "D y - D y + y = 1", 0.5)
        self.assertRaises(ValidationError, parse_equation, "D y = t^2", 0.3)
        self.assertRaises(ValidationError, parse_equation, "D y = 1e308 * 10 E(1)", 0.5)
        self.assertRaises(ValidationError, parse_equation, "D y = t^(1e308*10)", 0.5)
        self.assertRaises(ValidationError, parse_equation, "alpha = 2\nD y = 1")

    def test_fuzz(self):
        rng = random.Random(17)
        parsed = 0
        for _ in range(500):
            text = ' '.join(rng.choice(FUZZ_ALPHABET) for _ in range(rng.randint(1, 20)))
            alpha = rng.choice((None, 0.5))
            try:
                problem = parse_equation(text, alpha=alpha, bindings={'w': 2})
            except ParseError as e:
                self.assertTrue(e.line >= 1 and e.column >= 1, text)
                self.assertTrue(e.expected, text)
            except ValidationError:
                pass
            else:
                self.assertTrue(isinstance(problem, Problem), text)
                parsed += 1
        self.assertTrue(parsed < 500)

        # deep nesting ends in a located error, never in a crash
        for _ in range(20):
            depth = rng.randint(90, 4000)
            opener = rng.choice(("(", "-(", "2^", "E("))
            text = "D y = " + opener * depth + "1" + ")" * depth
            try:
                parse_equation(text, alpha=0.5)
            except ParseError as e:
                self.assertEqual(e.line, 1, text[:20])
                self.assertTrue(e.expected)
            except ValidationError:
                pass

if __name__ == '__main__':
    suite = unittest.TestSuite()
    loader = unittest.TestLoader()
    for testcase in [FDETokenizerTest, FDEEquationTest, FDEEquationErrorTest]:
        tests = loader.loadTestsFromTestCase(testcase)
        suite.addTests(tests)
    unittest.TextTestRunner(verbosity=2).run(suite)
