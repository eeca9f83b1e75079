"""Deviation bounds that transfer detection probabilities between nearby states.

Given two pure states A and R with overlap |<A|R>| >= y, and any operator
0 <= M <= 1, the probability <R|M|R> is pinned to an interval around the
known probability x = <A|M|A>:

    g_lower(x, y) <= <R|M|R> <= g_upper(x, y)

Both bounds are piecewise: g_lower is 0 below x = 1 - y^2 and g_upper
saturates at 1 above x = y^2. On the analytic branch they read

    x + (1 - y^2)(1 - 2x) -/+ 2y sqrt((1 - y^2) x (1 - x))

with - for the lower and + for the upper bound. -g_lower and g_upper are
concave in x; g_lower is nondecreasing and g_upper nonincreasing in y.
"""

import math

__all__ = ["g_lower", "g_upper"]


def _check_unit_interval(value, name):
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")


def _branch(x, y, sign):
    # sqrt argument can stray to ~-1e-16 at the endpoints
    root = math.sqrt(max((1.0 - y * y) * x * (1.0 - x), 0.0))
    return x + (1.0 - y * y) * (1.0 - 2.0 * x) + sign * 2.0 * y * root


def g_lower(x, y):
    """Lower bound on <R|M|R> given x = <A|M|A> and overlap y = |<A|R>|.

    Returns 0 when x < 1 - y^2; otherwise the analytic branch, clamped
    to [0, 1] against floating-point dust.
    """
    _check_unit_interval(x, "x")
    _check_unit_interval(y, "y")
    if x < 1.0 - y * y:
        return 0.0
    return min(max(_branch(x, y, -1.0), 0.0), 1.0)


def g_upper(x, y):
    """Upper bound on <R|M|R> given x = <A|M|A> and overlap y = |<A|R>|.

    Returns 1 when x > y^2; otherwise the analytic branch, clamped to
    [0, 1].
    """
    _check_unit_interval(x, "x")
    _check_unit_interval(y, "y")
    if x > y * y:
        return 1.0
    return min(max(_branch(x, y, +1.0), 0.0), 1.0)
