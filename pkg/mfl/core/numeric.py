import math

from django.conf import settings


def tolerance():
    return settings.MFL_TOLERANCE


def leq(a: float, b: float, rel_tol: float | None = None) -> bool:
    """``a <= b`` up to a relative tolerance (absolute near zero)."""
    if rel_tol is None:
        rel_tol = tolerance()
    if math.isinf(b) and b > 0:
        return True
    return a <= b + rel_tol * max(1.0, abs(a), abs(b))


def close(a: float, b: float, rel_tol: float | None = None) -> bool:
    if rel_tol is None:
        rel_tol = tolerance()
    return math.isclose(a, b, rel_tol=rel_tol, abs_tol=rel_tol)


def scaled(value: float, factor: float) -> float:
    """``value * factor`` where an unbounded factor stays unbounded, even for a zero value."""
    if math.isinf(factor):
        return math.inf
    return value * factor


def ratio(numerator: float, denominator: float) -> float:
    if denominator == 0:
        return 1.0 if numerator == 0 else math.inf
    return numerator / denominator
