class CubicError(Exception):
    """Base exception for every domain error raised by the cubic helpers"""
    pass

class DimensionError(CubicError):
    """Raised when a matrix operation receives incompatible dimensions"""
    pass

class UndefinedValuationError(CubicError):
    """Raised when the p-adic valuation of zero is requested"""
    pass

class ZeroPolynomialError(CubicError):
    """Raised when root finding is asked for the zero polynomial"""
    pass

class FieldMismatchError(CubicError):
    """Raised when elements or points of different fields are combined"""
    pass

class CurveError(CubicError):
    """Raised when a cubic form or curve input is malformed"""
    pass

class PointNotOnCurveError(CurveError):
    """Raised when a point is required to lie on the curve but does not"""
    pass

class BadReductionError(CubicError):
    """Raised when an operation needs a prime of good reduction"""
    pass

class SingularPointError(CubicError):
    """Raised when a tangent is requested at a singular point"""
    pass

class LineInCurveError(CubicError):
    """Raised when a chord or tangent line is contained in the curve"""
    pass

class SampleExhaustionError(CubicError):
    """Raised when not enough X(F_q) sample points can be generated"""
    pass

class BasisDeficiencyError(CubicError):
    """Raised when fewer than 3(m^2 a + b) independent monomials are certified"""
    pass

class NonvanishingInconclusiveError(CubicError):
    """Raised when an auxiliary form vanishes at every X(F_q) sample"""
    pass

class BoundInputError(CubicError):
    """Raised when bound formulas receive inputs outside their range"""
    pass

class FixtureError(CubicError):
    """Raised when a curve fixture file is missing or invalid"""
    pass
