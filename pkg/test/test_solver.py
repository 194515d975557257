# -*- coding: utf-8 -*-
import math
import random
import unittest

from mock import patch
import mpmath
import numpy as np

from fde4py.exc import ConsistencyError, DegenerateOperatorError, EvaluationRangeError, \
     ValidationError, NotARootError
from fde4py.operators import OperatorPoly, RootSet, apply, char_roots, eval_poly
from fde4py.oracle import OracleConfig, SampledFunction, gl_operator_residual, residual
from fde4py.solver import Problem, complementary, particular_atom, \
     particular, solve, solve_alpha_order_quadrature, reciprocal_series
from fde4py.special import gamma, mittag_leffler, frac_cos
from fde4py.terms import TermSum, FracTerm, to_real, integrate_alpha, \
     fractional_cos, fractional_sin

mpmath.mp.dps = 40

# integer lattice points with |m| <= 3: two distinct points are at
# least 1 apart, which keeps 1/psi series coefficients bounded
LATTICE = [complex(x, y) for x in range(-3, 4) for y in range(-2, 3) if abs(complex(x, y)) <= 3]
REAL_LATTICE = [complex(x, 0) for x in range(-3, 4)]

def undetermined_coefficients_2a(a, b, c, alpha):
    """
    Particular integral of ``(D^alpha - a)(D^alpha - b) y = E_alpha(c t^alpha)``
    as ``(coeff, k)`` for ``coeff * t^(k alpha) * E_alpha(c t^alpha)``.
    """
    if c != a and c != b:
        return 1.0 / ((c - a) * (c - b)), 0
    if a == b:
        return 1.0 / gamma(1 + 2 * alpha), 2
    other = b if c == a else a
    return 1.0 / ((c - other) * gamma(1 + alpha)), 1

def random_operator(rng, alpha, real=False):
    degree = rng.randint(1, 4)
    roots = []
    used = set()
    total = 0
    while total < degree:
        if real and degree - total >= 2 and rng.random() < 0.5:
            root = complex(rng.randint(-2, 2), rng.randint(1, 2))
            if root in used:
                continue
            used.update((root, root.conjugate()))
            roots.extend([(root, 1), (root.conjugate(), 1)])
            total += 2
            continue
        root = rng.choice(REAL_LATTICE if real else LATTICE)
        if root in used:
            continue
        used.add(root)
        mult = min(rng.randint(1, 2), degree - total)
        roots.append((root, mult))
        total += mult
    op = OperatorPoly.from_roots(alpha, roots, lead=rng.choice((1.0, 2.0, -0.5)))
    if real:
        # products of conjugate factors can leave rounding noise in the imaginary parts
        op = OperatorPoly(alpha, [c.real for c in op.coeffs])
    return op

def random_forcing(rng, alpha, size=3):
    terms = [FracTerm(complex(rng.uniform(-2, 2), rng.uniform(-2, 2)),
                      rng.randint(0, 2), rng.choice(LATTICE + [0j]))
             for _ in range(size)]
    return TermSum(alpha, terms)

def random_real_forcing(rng, alpha):
    s = fractional_cos(alpha, rng.randint(1, 3), rng.uniform(-2, 2))
    s = s + fractional_sin(alpha, rng.randint(1, 3), rng.uniform(-2, 2))
    s = s + TermSum.ml(alpha, rng.choice(REAL_LATTICE), rng.uniform(-2, 2))
    return s + TermSum.power(alpha, rng.randint(0, 3), rng.uniform(-2, 2))

class FDEProblemTest(unittest.TestCase):
    def test_validation(self):
        op = OperatorPoly(0.5, [1, 1])
        self.assertRaises(ValidationError, Problem, 0, op, TermSum.zero(0.5))
        self.assertRaises(ValidationError, Problem, 1.5, op, TermSum.zero(0.5))
        self.assertRaises(ValidationError, Problem, 0.4, op, TermSum.zero(0.4))
        self.assertRaises(ValidationError, Problem, 0.5, OperatorPoly(0.5, [2]), TermSum.zero(0.5))
        self.assertRaises(ValidationError, Problem, 0.5, op)
        samples = SampledFunction(0.1, [0.0, 1.0])
        self.assertRaises(ValidationError, Problem, 0.5, op, TermSum.zero(0.5), samples)
        self.assertRaises(ValidationError, Problem, 0.5, op, TermSum.zero(0.4))

    def test_variants(self):
        op = OperatorPoly(0.5, [1, 1])
        self.assertTrue(Problem(0.5, op, TermSum.zero(0.5)).is_symbolic)
        self.assertFalse(Problem(0.5, op, samples=SampledFunction(0.1, [0.0, 1.0])).is_symbolic)

    def test_equality(self):
        op = OperatorPoly(0.5, [1, 1])
        self.assertEqual(Problem(0.5, op, TermSum.power(0.5, 2)),
                         Problem(0.5, OperatorPoly(0.5, [1, 1]), TermSum.power(0.5, 2)))
        self.assertNotEqual(Problem(0.5, op, TermSum.power(0.5, 2)),
                            Problem(0.5, op, TermSum.power(0.5, 1)))

class FDEGoldenTest(unittest.TestCase):
    def test_first_example_particular_integral(self):
        alpha = 1 / 3.
        op = OperatorPoly(alpha, [6, -5, 1])
        yp = particular(op, TermSum.power(alpha, 6))
        self.assertEqual(len(yp), 7)
        self.assertEqual(sorted(t.k for t in yp.terms), list(range(7)))

        # 1/(6 - 5x + x^2) = sum (3^(j+1) - 2^(j+1)) / 6^(j+1) x^j, all positive.
        # a minus sign on the t^(4/3) coefficient fails the numeric
        # residual, see test_first_example_sign_adjudication
        third = mpmath.mpf(1) / 3
        for t in yp.terms:
            j = 6 - t.k
            series = mpmath.mpf(3 ** (j + 1) - 2 ** (j + 1)) / 6 ** (j + 1)
            expected = float(series * 2 / mpmath.gamma(1 + t.k * third))
            self.assertGreater(expected, 0)
            self.assertEqual(t.rate, 0)
            self.assertLess(abs(t.coeff - expected) / expected, 1e-10, t)

        self.assertAlmostEqual(yp.terms[0].coeff.real, 1 / 6., places=14)
        self.assertAlmostEqual(yp.terms[-1].coeff.real, 4118. / 6 ** 7, places=14)

    def test_first_example_sign_adjudication(self):
        alpha = 1 / 3.
        op = OperatorPoly(alpha, [6, -5, 1])
        forcing = TermSum.power(alpha, 6)
        yp = particular(op, forcing)
        flipped = TermSum(alpha, [FracTerm(-t.coeff, t.k, t.rate) if t.k == 4 else t
                                  for t in yp.terms])

        times = (0.5, 1.0, 1.5)
        ours = [gl_operator_residual(op, yp, forcing, t) for t in times]
        others = [gl_operator_residual(op, flipped, forcing, t) for t in times]
        self.assertLessEqual(max(ours), 1e-2)
        self.assertGreater(max(others), 1e-2)

    def test_first_example_solution(self):
        alpha = 1 / 3.
        op = OperatorPoly(alpha, [6, -5, 1])
        solution = solve(Problem(alpha, op, TermSum.power(alpha, 6)))
        rates = [b.terms[0].rate for b in solution.complementary]
        self.assertEqual(len(rates), 2)
        self.assertAlmostEqual(rates[0], 2, places=12)
        self.assertAlmostEqual(rates[1], 3, places=12)
        self.assertEqual(len(solution.particular), 7)
        self.assertLessEqual(residual(Problem(alpha, op, TermSum.power(alpha, 6)), solution,
                                      (0.25, 0.5, 1, 2)), 1e-9)

    def test_second_example(self):
        alpha, omega, a, F = 0.5, 2.0, 1.0, 3.0
        problem = Problem(alpha, OperatorPoly(alpha, [omega ** 2, 0, 1]),
                          fractional_cos(alpha, a, F))
        solution = solve(problem)

        real = to_real(solution.particular)
        self.assertEqual(len(real), 1)
        self.assertLess(abs(real.find('cos', q=a) - F / (omega ** 2 - a ** 2)), 1e-12)

        rates = sorted((b.terms[0].rate for b in solution.complementary), key=lambda r: r.imag)
        self.assertAlmostEqual(rates[0], -2j, places=12)
        self.assertAlmostEqual(rates[1], 2j, places=12)
        # the two conjugate basis elements span cos_alpha and sin_alpha
        basis = solution.complementary
        cos_part = to_real(0.5 * (basis[0] + basis[1]))
        self.assertAlmostEqual(cos_part.find('cos', q=omega), 1.0, places=12)

        self.assertLessEqual(residual(problem, solution, (0.25, 0.5, 1, 2)), 1e-9)

    def test_third_example(self):
        alpha, c, omega, a, F = 0.6, 0.5, 2.0, 1.0, 1.0
        op = OperatorPoly(alpha, [c ** 2 + omega ** 2, 2 * c, 1])
        problem = Problem(alpha, op, fractional_cos(alpha, a, F))
        solution = solve(problem)

        # X = c^2 - a^2 + omega^2 and Delta = X^2 + 4 c^2 a^2 = 11.5625;
        # the PI is F (X cos + 2ca sin) / Delta
        x = c ** 2 - a ** 2 + omega ** 2
        delta = x ** 2 + 4 * c ** 2 * a ** 2
        self.assertEqual((x, delta), (3.25, 11.5625))
        real = to_real(solution.particular)
        self.assertLess(abs(real.find('cos', q=a) - F * x / delta), 1e-12)
        self.assertLess(abs(real.find('sin', q=a) - F * 2 * c * a / delta), 1e-12)
        self.assertLessEqual(residual(problem, solution, (0.25, 0.5, 1, 2)), 1e-9)

        rendered = solution.render()
        self.assertIn('cos_alpha(1*t^alpha)', rendered)
        self.assertIn('sin_alpha(1*t^alpha)', rendered)

    def test_third_example_wrong_delta_fails(self):
        alpha, c, omega, a = 0.6, 0.5, 2.0, 1.0
        op = OperatorPoly(alpha, [c ** 2 + omega ** 2, 2 * c, 1])
        forcing = fractional_cos(alpha, a)
        # Delta = 12.5625 with a negative sine coefficient
        wrong = fractional_cos(alpha, a, 3.25 / 12.5625) + fractional_sin(alpha, a, -1 / 12.5625)
        self.assertGreater((apply(op, wrong) - forcing).max_coeff(), 1e-2)

    def test_third_example_complementary_follows_roots(self):
        alpha, c, omega = 0.6, 0.5, 2.0
        op = OperatorPoly(alpha, [c ** 2 + omega ** 2, 2 * c, 1])
        rates = sorted((b.terms[0].rate for b in complementary(op)), key=lambda r: r.imag)
        self.assertAlmostEqual(rates[0], -c - 2j, places=12)
        self.assertAlmostEqual(rates[1], -c + 2j, places=12)
        # the damping sign +c does not annihilate the operator
        self.assertFalse(apply(op, TermSum.ml(alpha, c + 1j * omega)).is_zero)

    def test_third_example_complementary_rendering(self):
        alpha, c, omega = 0.6, 0.5, 2.0
        op = OperatorPoly(alpha, [c ** 2 + omega ** 2, 2 * c, 1])
        basis = sorted(complementary(op), key=lambda b: b.terms[0].rate.imag)

        # each basis element alone is complex and keeps its complex form
        rendered = solve(Problem(alpha, op, TermSum.zero(alpha))).render()
        self.assertIn('E_alpha((-0.5', rendered)
        self.assertNotIn('cos_alpha', rendered)

        # the real combination is Re E_alpha((p + iq) t^alpha), which is not
        # E_alpha(p t^alpha) cos_alpha(q t^alpha) when alpha < 1
        real = to_real(0.5 * (basis[0] + basis[1]))
        self.assertIn('Re E_alpha((-0.5+2i)*t^alpha)', real.render())
        self.assertNotIn('cos_alpha', real.render())
        self.assertAlmostEqual(real.find('cos', p=-c, q=omega), 1.0, places=12)

        t = 0.05
        ta = t ** alpha
        exact = mittag_leffler(alpha, complex(-c, omega) * ta).real
        factored = mittag_leffler(alpha, -c * ta).real * frac_cos(alpha, omega, t)
        self.assertAlmostEqual(real.evaluate(t), exact, places=12)
        self.assertGreater(abs(exact - factored), 1e-3)

    def test_first_order_cases(self):
        alpha, a = 0.4, 1.5
        op = OperatorPoly(alpha, [-a, 1])
        yp = particular(op, TermSum.ml(alpha, 0.5))
        self.assertTrue(yp.isclose(TermSum.ml(alpha, 0.5, -1.0), rel_tol=1e-12))

        yp = particular(op, TermSum.ml(alpha, a))
        self.assertTrue(yp.isclose(TermSum.ml(alpha, a, 1 / gamma(1.4), k=1), rel_tol=1e-12))

    def test_second_order_theorem_cases(self):
        for alpha in (0.5, 0.7):
            for a, b, c in ((2, 3, 1), (2, 3, 2), (2, 2, 2)):
                op = OperatorPoly.from_roots(alpha, [a, b])
                yp = particular(op, TermSum.ml(alpha, c))
                coeff, k = undetermined_coefficients_2a(a, b, c, alpha)
                self.assertEqual(len(yp), 1)
                self.assertEqual(yp.terms[0].k, k)
                self.assertLess(abs(yp.terms[0].coeff - coeff), 1e-12 * abs(coeff), (a, b, c))

class FDEParticularAtomTest(unittest.TestCase):
    def test_non_resonant_exponential(self):
        op = OperatorPoly(0.5, [-2, 1])
        yp = particular_atom(op, 1, 0, 0.5)
        self.assertTrue(yp.isclose(TermSum.ml(0.5, 0.5, 1 / (0.5 - 2)), rel_tol=1e-14))

    def test_resonant_exponential(self):
        op = OperatorPoly(0.5, [-2, 1])
        yp = particular_atom(op, 1, 0, 2)
        self.assertTrue(yp.isclose(TermSum.ml(0.5, 2, 1 / gamma(1.5), k=1), rel_tol=1e-14))

        op = OperatorPoly.from_roots(0.3, [(2, 2)])
        yp = particular_atom(op, 3, 0, 2)
        self.assertTrue(yp.isclose(TermSum.ml(0.3, 2, 3 / gamma(1.6), k=2), rel_tol=1e-13))

    def test_power(self):
        alpha, a = 0.5, 2.0
        op = OperatorPoly(alpha, [-a, 1])
        yp = particular_atom(op, 1, 1, 0)
        expected = TermSum(alpha, [FracTerm(-1 / a, 1, 0), FracTerm(-gamma(1 + alpha) / a ** 2, 0, 0)])
        self.assertTrue(yp.isclose(expected, rel_tol=1e-14))

    def test_sine_pair(self):
        alpha, a, c = 0.5, 1.5, 2.0
        op = OperatorPoly(alpha, [-a ** 2, 0, 1])
        yp = particular(op, fractional_sin(alpha, c))
        self.assertTrue(yp.isclose(fractional_sin(alpha, c, 1 / (-c ** 2 - a ** 2)), rel_tol=1e-13))

    def test_zero_forcing(self):
        op = OperatorPoly(0.5, [1, 1])
        self.assertTrue(particular(op, TermSum.zero(0.5)).is_zero)

    def test_misjudged_multiplicity(self):
        op = OperatorPoly.from_roots(0.5, [(2, 2)])
        self.assertRaises(DegenerateOperatorError, particular_atom, op, 1, 0, 2, RootSet([(2, 1)]))
        self.assertRaises(NotARootError, particular_atom, op, 1, 0, 3, RootSet([(3, 1)]))

    def test_reciprocal_series(self):
        out = reciprocal_series([6, -5, 1], 3)
        for j, value in enumerate(out):
            self.assertAlmostEqual(value, (3. ** (j + 1) - 2 ** (j + 1)) / 6 ** (j + 1), places=15)
        self.assertEqual(reciprocal_series([2], 2), [0.5, 0, 0])

class FDESolverPropertiesTest(unittest.TestCase):
    def test_annihilation(self):
        rng = random.Random(21)
        for _ in range(200):
            op = random_operator(rng, rng.choice((0.3, 0.5, 0.75, 1.0)))
            basis = complementary(op)
            self.assertEqual(len(basis), op.degree)
            for b in basis:
                rate = b.terms[0].rate
                limit = 1e-9 * max(1.0, op.norm()) * max(1.0, abs(rate)) ** op.degree
                self.assertLessEqual(apply(op, b).max_coeff(), limit, (op, b))

    def test_residual_exactness(self):
        rng = random.Random(22)
        for _ in range(200):
            alpha = rng.choice((0.25, 0.5, 0.8, 1.0))
            op = random_operator(rng, alpha)
            g = random_forcing(rng, alpha)
            yp = particular(op, g)
            self.assertTrue(apply(op, yp).isclose(g, rel_tol=1e-9), (op, g))

    def test_linearity(self):
        rng = random.Random(23)
        for _ in range(200):
            alpha = rng.choice((0.25, 0.5, 0.8))
            op = random_operator(rng, alpha)
            roots = char_roots(op)
            g1, g2 = random_forcing(rng, alpha), random_forcing(rng, alpha)
            whole = particular(op, g1 + g2, roots)
            parts = particular(op, g1, roots) + particular(op, g2, roots)
            self.assertTrue(whole.isclose(parts, rel_tol=1e-9), (op, g1, g2))

    def test_reality(self):
        rng = random.Random(24)
        for _ in range(200):
            alpha = rng.choice((0.3, 0.5, 0.9))
            op = random_operator(rng, alpha, real=True)
            self.assertTrue(op.is_real)
            yp = particular(op, random_real_forcing(rng, alpha))
            to_real(yp)

    def test_case_agreement(self):
        rng = random.Random(25)
        for _ in range(200):
            op = random_operator(rng, 0.5)
            roots = char_roots(op)
            c = rng.choice(LATTICE)
            if roots.multiplicity_of(c):
                continue
            yp = particular_atom(op, 1, 0, c, roots)
            expected = 1 / eval_poly(op, c)
            self.assertEqual(len(yp), 1)
            self.assertLess(abs(yp.terms[0].coeff - expected), 1e-10 * abs(expected), (op, c))

class FDESolveTest(unittest.TestCase):
    def test_homogeneous(self):
        op = OperatorPoly.from_roots(0.5, [(1, 2)])
        solution = solve(Problem(0.5, op, TermSum.zero(0.5)))
        self.assertTrue(solution.particular.is_zero)
        self.assertEqual(solution.constants, ['A_1', 'A_2'])
        self.assertTrue(solution.complementary[0].isclose(TermSum.ml(0.5, 1.0)))
        self.assertTrue(solution.complementary[1].isclose(TermSum.ml(0.5, 1.0, k=1)))

    def test_needs_symbolic_forcing(self):
        op = OperatorPoly(0.5, [1, 1])
        problem = Problem(0.5, op, samples=SampledFunction(0.1, [0.0, 1.0]))
        self.assertRaises(ValidationError, solve, problem)

    def test_inconsistent_particular(self):
        op = OperatorPoly(0.5, [1, 1])
        problem = Problem(0.5, op, TermSum.power(0.5, 1))
        with patch('fde4py.solver.particular', return_value=TermSum.power(0.5, 2)):
            self.assertRaises(ConsistencyError, solve, problem)

    def test_inconsistent_basis(self):
        op = OperatorPoly(0.5, [1, 1])
        problem = Problem(0.5, op, TermSum.zero(0.5))
        with patch('fde4py.solver.complementary', return_value=[TermSum.ml(0.5, 5.0)]):
            self.assertRaises(ConsistencyError, solve, problem)

class FDESolutionTest(unittest.TestCase):
    def setUp(self):
        alpha = 0.5
        self.solution = solve(Problem(alpha, OperatorPoly(alpha, [6, -5, 1]), TermSum.power(alpha, 1)))

    def test_general(self):
        s = self.solution
        self.assertEqual(s.general(), s.particular)
        y = s.general({'A_1': 2.0})
        self.assertTrue(y.isclose(s.particular + 2 * s.complementary[0]))
        y = s.general([1.0, -1.0])
        self.assertTrue(y.isclose(s.particular + s.complementary[0] - s.complementary[1]))
        self.assertRaises(ValueError, s.general, {'A_3': 1.0})

    def test_to_json(self):
        data = self.solution.to_json()
        self.assertEqual(sorted(data), ['alpha', 'complementary', 'particular', 'rendered'])
        self.assertEqual(len(data['complementary']), 2)
        self.assertEqual(TermSum.from_json(data['particular']), self.solution.particular)

    def test_render(self):
        text = self.solution.render()
        self.assertTrue(text.startswith('y = A_1*[1*E_alpha(2*t^alpha)] + A_2*[1*E_alpha(3*t^alpha)] + '))
        self.assertIn('t^alpha', text)

    def test_render_falls_back_to_complex_form(self):
        op = OperatorPoly(0.5, [-1j, 1])
        solution = solve(Problem(0.5, op, TermSum.zero(0.5)))
        self.assertEqual(solution.render(), 'y = A_1*[1*E_alpha(1i*t^alpha)] + 0')

class FDEQuadratureTest(unittest.TestCase):
    def test_power_forcing(self):
        alpha = 0.5
        g = SampledFunction.from_function(lambda t: t ** alpha, 1e-3, 2.0)
        y = solve_alpha_order_quadrature(0.0, g, alpha)
        self.assertFalse(np.iscomplexobj(y.values))
        self.assertEqual(len(y), len(g))

        expected = integrate_alpha(TermSum.power(alpha, 1)).evaluate_array(y.times()).real
        mask = y.times() >= 0.1
        err = np.max(np.abs(y.values[mask] - expected[mask]) / np.abs(expected[mask]))
        self.assertLessEqual(err, 1e-2)
        self.assertLess(y.error_estimate, 1e-2)

    def test_classical_order(self):
        a, c = -1.0, 0.5
        g = SampledFunction.from_function(lambda t: np.exp(c * t), 1e-3, 2.0)
        y = solve_alpha_order_quadrature(a, g, 1.0)

        # the definite integral starts at y(0) = 0, the symbolic path
        # leaves that constant to the complementary function
        yp = particular(OperatorPoly(1.0, [-a, 1]), TermSum.ml(1.0, c))
        exact = yp + TermSum.ml(1.0, a, -yp.evaluate(0))
        expected = exact.evaluate_array(y.times()).real
        mask = y.times() >= 0.1
        err = np.max(np.abs(y.values[mask] - expected[mask]) / np.abs(expected[mask]))
        self.assertLessEqual(err, 1e-2)
        self.assertAlmostEqual(y.values[-1], (math.exp(1.0) - math.exp(-2.0)) / 1.5, places=5)

    def test_zero_forcing(self):
        g = SampledFunction(1e-2, np.zeros(101))
        y = solve_alpha_order_quadrature(1.5, g, 0.5)
        self.assertTrue(np.all(y.values == 0))
        self.assertEqual(y.error_estimate, 0.0)

    def test_non_finite_samples(self):
        values = np.ones(21)
        values[3] = np.nan
        self.assertRaises(EvaluationRangeError, solve_alpha_order_quadrature, -1.0,
                          SampledFunction(0.05, values), 0.5)

        g = SampledFunction(0.05, 1j * np.ones(21))
        y = solve_alpha_order_quadrature(1.0, g, 0.5)
        self.assertTrue(np.iscomplexobj(y.values))
        self.assertTrue(np.all(np.isfinite(y.values)))
        self.assertTrue(np.all(y.values.real == 0))

    def test_coarse_grid_warning(self):
        g = SampledFunction.from_function(lambda t: t ** 0.5, 0.25, 2.0)
        with patch('fde4py.solver.logger') as logger:
            y = solve_alpha_order_quadrature(-1.0, g, 0.5, OracleConfig(quad_tol=1e-12))
        self.assertTrue(logger.warning.called)
        self.assertGreater(y.error_estimate, 1e-12)

if __name__ == '__main__':
    suite = unittest.TestSuite()
    loader = unittest.TestLoader()
    for testcase in [FDEProblemTest, FDEGoldenTest, FDEParticularAtomTest,
                     FDESolverPropertiesTest, FDESolveTest, FDESolutionTest,
                     FDEQuadratureTest]:
        tests = loader.loadTestsFromTestCase(testcase)
        suite.addTests(tests)
    unittest.TextTestRunner(verbosity=2).run(suite)
