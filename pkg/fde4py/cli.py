# -*- coding: utf-8 -*-
__doc__ = """
Command line front end.

.. code-block:: console

   $ fde4py solve example1.json --tol 1e-8 --samples samples.csv
   residual ... over 4 points (tol 1e-08): ok

The closed form goes to ``solution.json`` and ``solution.txt`` in the
output directory. Exit codes: 0 success, 2 parse error, 3 invalid
problem, 4 solver failure, 5 residual above ``--tol``.
"""
import argparse
import logging
import os
import re
import sys

import numpy as np

from fde4py import __version__, configure_logger
from fde4py.exc import FDEException, ParseError, ValidationError
from fde4py.oracle import OracleConfig, SampledFunction, residual
from fde4py.problem import dumps, parse_alpha, parse_problem
from fde4py.solver import solve, solve_alpha_order_quadrature

__all__ = ['build_parser', 'run', 'main',
           'EXIT_OK', 'EXIT_PARSE', 'EXIT_VALIDATION', 'EXIT_SOLVER', 'EXIT_RESIDUAL']

logger = logging.getLogger('fde4py')

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_SOLVER = 4
EXIT_RESIDUAL = 5

DEFAULT_TOL = 1e-8
DEFAULT_T_MAX = 2.0
DEFAULT_POINTS = 401
DEFAULT_RESIDUAL_GRID = '0.25,0.5,1,2'

_CONSTANT_RE = re.compile(r'^A_?(\d+)$')

def build_parser():
    parser = argparse.ArgumentParser(prog='fde4py',
                                     description='Closed-form solutions of linear fractional '
                                                 'differential equations with constant coefficients')
    parser.add_argument('problem', help="problem file, '-' reads standard input")
    parser.add_argument('--format', choices=('json', 'dsl'), default='json')
    parser.add_argument('--tol', type=float, default=DEFAULT_TOL,
                        help='largest accepted residual')
    parser.add_argument('--samples', metavar='PATH',
                        help='write the solution sampled over [0, t-max] as CSV')
    parser.add_argument('--t-max', type=float, default=DEFAULT_T_MAX)
    parser.add_argument('--points', type=int, default=DEFAULT_POINTS)
    parser.add_argument('--residual-grid', default=DEFAULT_RESIDUAL_GRID, metavar='T1,T2,...')
    parser.add_argument('--quadrature', action='store_true',
                        help='solve a degree one operator against a sampled forcing')
    parser.add_argument('--forcing-csv', metavar='PATH',
                        help='sampled forcing for --quadrature, columns t,y')
    parser.add_argument('--output-dir', default='.')
    parser.add_argument('--alpha', help='order, overrides the problem file')
    parser.add_argument('--bind', action='append', default=[], metavar='NAME=VALUE',
                        help='binds a name used by the equation')
    parser.add_argument('--const', action='append', default=[], metavar='A1=VALUE',
                        help='value of a free constant in the sampled solution')
    parser.add_argument('-v', '--verbose', action='store_true')
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    return parser

def _pairs(items, what):
    pairs = {}
    for item in items:
        name, sep, value = item.partition('=')
        if not sep or not name.strip():
            raise ValidationError('%s must look like NAME=VALUE, got %r' % (what, item))
        try:
            pairs[name.strip()] = float(value)
        except ValueError:
            raise ValidationError('%s %s=%r is not a number' % (what, name, value))
    return pairs

def _constants(items):
    constants = {}
    for name, value in _pairs(items, '--const').items():
        match = _CONSTANT_RE.match(name)
        if not match:
            raise ValidationError('constants are named A1, A2, ..., got %r' % name)
        constants['A_%s' % match.group(1)] = value
    return constants

def _grid(text):
    try:
        grid = [float(t) for t in text.split(',') if t.strip()]
    except ValueError:
        raise ValidationError('--residual-grid must be a comma separated list of times')
    if not grid or any(t < 0 for t in grid):
        raise ValidationError('--residual-grid needs non-negative times')
    return grid

def _read(path):
    if path == '-':
        return sys.stdin.read()
    with open(path) as f:
        return f.read()

def _load_problem(args):
    bindings = _pairs(args.bind, '--bind')
    alpha = parse_alpha(args.alpha) if args.alpha is not None else None
    return parse_problem(_read(args.problem), args.format, bindings, alpha)

def _write(path, text):
    with open(path, 'w') as f:
        f.write(text)
    logger.info("Wrote %s", path)

def _run_quadrature(args, problem):
    if problem.op.degree != 1:
        raise ValidationError('--quadrature needs a degree one operator, got degree %d' % problem.op.degree)
    if not args.forcing_csv:
        raise ValidationError('--quadrature needs --forcing-csv')
    if not problem.forcing.is_zero:
        logger.warning("The symbolic forcing is ignored in quadrature mode")

    c0, c1 = problem.op.coeffs
    a = -c0 / c1
    if a.imag:
        raise ValidationError('--quadrature needs a real operator')
    g = SampledFunction.from_csv(args.forcing_csv)
    # complex leading coefficients keep the samples complex
    g = SampledFunction(g.h, g.values / (c1.real if c1.imag == 0 else c1))

    y = solve_alpha_order_quadrature(a.real, g, problem.alpha, OracleConfig())
    path = args.samples or os.path.join(args.output_dir, 'samples.csv')
    y.to_csv(path)
    logger.info("Wrote %s", path)
    print("quadrature: %d samples, self-convergence estimate %.3g" % (len(y), y.error_estimate))
    return EXIT_OK

def _run_symbolic(args, problem):
    grid = _grid(args.residual_grid)
    constants = _constants(args.const)

    solution = solve(problem)
    _write(os.path.join(args.output_dir, 'solution.json'), dumps(solution.to_json()))
    text = solution.render() + '\n'
    if solution.constants:
        text += 'free constants: %s\n' % ', '.join(solution.constants)
    _write(os.path.join(args.output_dir, 'solution.txt'), text)

    if args.samples:
        if args.points < 2 or not args.t_max > 0:
            raise ValidationError('--points must be >= 2 and --t-max positive')
        try:
            y = solution.general(constants)
        except ValueError as e:
            raise ValidationError(str(e))
        times = np.linspace(0.0, args.t_max, args.points)
        SampledFunction(times[1], y.evaluate_array(times)).to_csv(args.samples)
        logger.info("Wrote %s", args.samples)

    worst = residual(problem, solution, grid)
    ok = worst <= args.tol
    print("residual %.3g over %d points (tol %.3g): %s" % (worst, len(grid), args.tol,
                                                         'ok' if ok else 'FAILED'))
    if ok and worst > 0.1 * args.tol:
        logger.warning("Residual %g is close to the tolerance %g", worst, args.tol)
    return EXIT_OK if ok else EXIT_RESIDUAL

def run(args):
    """
    Runs a parsed command line and returns the exit status.
    """
    try:
        problem = _load_problem(args)
    except ParseError as e:
        sys.stderr.write('%s: parse error: %s\n' % (args.problem, e))
        return EXIT_PARSE
    except ValidationError as e:
        sys.stderr.write('%s: invalid problem: %s\n' % (args.problem, e))
        return EXIT_VALIDATION
    except (IOError, OSError) as e:
        sys.stderr.write('%s: %s\n' % (args.problem, e))
        return EXIT_PARSE

    try:
        if not os.path.isdir(args.output_dir):
            os.makedirs(args.output_dir)
        if args.quadrature:
            return _run_quadrature(args, problem)
        return _run_symbolic(args, problem)
    except ValidationError as e:
        sys.stderr.write('invalid input: %s\n' % e)
        return EXIT_VALIDATION
    except FDEException as e:
        logger.debug("solver failure", exc_info=True)
        sys.stderr.write('solver error: %s: %s\n' % (e.__class__.__name__, e))
        return EXIT_SOLVER

def main(argv=None):
    """
    Console entry point, ``solve`` is the only command and may be
    omitted.
    """
    configure = argv is None or '-v' in argv or '--verbose' in argv
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] == 'solve':
        argv = argv[1:]
    args = build_parser().parse_args(argv)
    if configure:
        configure_logger(stream=sys.stderr, level=logging.DEBUG if args.verbose else logging.WARNING)
    return run(args)

if __name__ == '__main__':
    sys.exit(main())
