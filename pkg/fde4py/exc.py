# -*- coding: utf-8 -*-

__all__ = ['FDEException', 'GammaDomainError', 'GammaOverflowError',
           'EvaluationRangeError', 'ArgumentTooLargeError',
           'SeriesNonConvergenceError', 'NotRealError', 'AlphaMismatchError',
           'RootFindingError', 'NotARootError', 'DegenerateOperatorError',
           'ConsistencyError', 'StepUnderflowError', 'ParseError',
           'ValidationError']

class FDEException(Exception): pass

class GammaDomainError(FDEException, ValueError): pass

class GammaOverflowError(FDEException, OverflowError): pass

class EvaluationRangeError(FDEException): pass

class ArgumentTooLargeError(EvaluationRangeError): pass

class SeriesNonConvergenceError(EvaluationRangeError): pass

class NotRealError(FDEException): pass

class AlphaMismatchError(FDEException, ValueError): pass

class RootFindingError(FDEException): pass

class NotARootError(FDEException): pass

class DegenerateOperatorError(FDEException): pass

class ConsistencyError(FDEException): pass

class StepUnderflowError(FDEException): pass

class ValidationError(FDEException, ValueError): pass

class ParseError(FDEException):
    def __init__(self, msg, line=None, column=None, expected=None):
        self.msg = msg
        self.line = line
        self.column = column
        self.expected = tuple(sorted(expected)) if expected else ()

    def __str__(self):
        where = ''
        if self.line is not None:
            where = 'line %d, column %d: ' % (self.line, self.column)
        msg = where + self.msg
        if self.expected:
            msg += ' (expected one of: %s)' % ', '.join(self.expected)
        return msg
