"""Chebyshev polynomials of both kinds and geometric trigonometric sums.

Evaluation runs the three-term recurrence P_{n+1} = 2x P_n - P_{n-1} with
(T_0, T_1) = (1, x) and (U_0, U_1) = (1, 2x), so arguments outside [-1, 1]
are legal.  Negative indices are mapped first:

    T_{-i} = T_i          U_{-1} = 0,  U_{-i} = -U_{i-2}  (i >= 2)

which is exactly what the recurrence run backwards produces.

The geometric sums evaluate sum_{n>=0} rho^n cos(n*alpha + beta) (and the
sin analog) in closed form, and their multi-index generalization over subset
expansions of any number of geometric directions.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence

from .errors import ArityError, DomainError
from .poly import Poly

MAX_MULTI_DIRECTIONS = 24


class ChebIndex(NamedTuple):
    kind: str  # "T" or "U"
    index: int


def _mapped(kind: str, n: int) -> tuple[int, int]:
    """(sign, nonnegative index) after the negative-index rules."""
    if kind == "T":
        return 1, abs(n)
    if kind == "U":
        if n >= 0:
            return 1, n
        if n == -1:
            return 0, 0
        return -1, -n - 2
    raise ValueError(f"kind must be T or U, got {kind!r}")


def cheb_eval(c: ChebIndex, x):
    """Value of T_n or U_n at x, exact when x is exact."""
    sign, n = _mapped(c.kind, c.index)
    if sign == 0:
        return 0 * x
    p0 = 1
    p1 = x if c.kind == "T" else 2 * x
    if n == 0:
        return sign * p0
    for _ in range(n - 1):
        p0, p1 = p1, 2 * x * p1 - p0
    return sign * p1


def cheb_seq(kind: str, start: int, count: int, x) -> list:
    """[P_{start}, ..., P_{start+count-1}] via one rolling recurrence.

    Works across negative indices because the recurrence holds for all
    integer n once the first two values are seeded with the mapping rules.
    """
    if count <= 0:
        return []
    v0 = cheb_eval(ChebIndex(kind, start), x)
    if count == 1:
        return [v0]
    v1 = cheb_eval(ChebIndex(kind, start + 1), x)
    out = [v0, v1]
    for _ in range(count - 2):
        v0, v1 = v1, 2 * x * v1 - v0
        out.append(v1)
    return out


@lru_cache(maxsize=None)
def _cheb_poly_cached(kind: str, n: int, var: str) -> Poly:
    sign, m = _mapped(kind, n)
    if sign == 0:
        return Poly.zero((var,))
    x = Poly.variable(var)
    p0 = Poly.const(1, (var,))
    p1 = x if kind == "T" else 2 * x
    if m == 0:
        return sign * p0
    for _ in range(m - 1):
        p0, p1 = p1, 2 * x * p1 - p0
    return sign * p1


def cheb_poly(c: ChebIndex, var: str = "x1") -> Poly:
    """T_n or U_n as an exact univariate polynomial in ``var``."""
    return _cheb_poly_cached(c.kind, c.index, var)


def cheb_linearize_UU(n: int, m: int) -> list[int]:
    """Indices in the product expansion U_n U_m = sum_j U_{n+m-2j}, j = 0..min(n,m)."""
    if n < 0 or m < 0:
        raise ValueError("linearization indices must be nonnegative")
    return [n + m - 2 * j for j in range(min(n, m) + 1)]


def geom_trig_sum(kind: str, rho: float, alpha: float, beta: float) -> float:
    """Closed form of sum_{n>=0} rho^n trig(n*alpha + beta) for |rho| < 1."""
    if kind not in ("sin", "cos"):
        raise ValueError(f"kind must be sin or cos, got {kind!r}")
    if abs(rho) >= 1:
        raise DomainError(f"|rho| must be < 1, got {rho}")
    f = math.sin if kind == "sin" else math.cos
    den = 1 - 2 * rho * math.cos(alpha) + rho * rho
    return (f(beta) - rho * f(beta - alpha)) / den


def multi_trig_sum(kind: str, rhos: Sequence[float], alphas: Sequence[float],
                   beta: float) -> float:
    """Closed form of the multi-geometric sum

        sum_{k_1..k_n >= 0} (prod rho_i^{k_i}) trig(beta + sum k_i alpha_i)

    as a signed subset sum over the direction set divided by the product of
    the individual geometric denominators.  Subsets are walked in Gray-code
    order so each step updates the running product and angle by one factor.
    """
    if kind not in ("sin", "cos"):
        raise ValueError(f"kind must be sin or cos, got {kind!r}")
    if len(rhos) != len(alphas):
        raise ArityError(f"{len(rhos)} ratios vs {len(alphas)} angles")
    if len(rhos) > MAX_MULTI_DIRECTIONS:
        raise DomainError(f"at most {MAX_MULTI_DIRECTIONS} directions supported")
    for r in rhos:
        if abs(r) >= 1:
            raise DomainError(f"|rho_i| must be < 1, got {r}")
    f = math.sin if kind == "sin" else math.cos
    den = 1.0
    for r, a in zip(rhos, alphas):
        den *= 1 + r * r - 2 * r * math.cos(a)
    # Directions with rho = 0 only contribute through the empty subset.
    live = [(r, a) for r, a in zip(rhos, alphas) if r != 0]
    m = len(live)
    total = f(beta)  # empty subset
    prod = 1.0
    angle = 0.0
    parity = 1
    gray = 0
    for i in range(1, 2 ** m):
        new_gray = i ^ (i >> 1)
        bit = (gray ^ new_gray).bit_length() - 1
        r, a = live[bit]
        if new_gray & (1 << bit):
            prod *= r
            angle += a
            parity = -parity
        else:
            prod /= r
            angle -= a
            parity = -parity
        gray = new_gray
        total += parity * prod * f(beta - angle)
    return total / den


def cheb_pell_residual(n: int, x: Fraction) -> Fraction:
    """T_n(x)^2 - (x^2 - 1) U_{n-1}(x)^2 - 1, identically zero."""
    t = cheb_eval(ChebIndex("T", n), x)
    u = cheb_eval(ChebIndex("U", n - 1), x)
    return t * t - (x * x - 1) * u * u - 1


def cheb_values_row(kind: str, x: float, count: int) -> "object":
    """numpy array [P_0(x), ..., P_{count-1}(x)] for lattice summations."""
    import numpy as np

    out = np.empty(count)
    out[0] = 1.0
    if count > 1:
        out[1] = x if kind == "T" else 2 * x
        for i in range(2, count):
            out[i] = 2 * x * out[i - 1] - out[i - 2]
    return out


def cheb_seq_grid(kind: str, start: int, count: int, x):
    """Rolling recurrence over a numpy array of arguments; returns (count, *x.shape)."""
    import numpy as np

    x = np.asarray(x, dtype=float)
    out = np.empty((count,) + x.shape)
    sign0, n0 = _mapped(kind, start)
    sign1, n1 = _mapped(kind, start + 1)
    out[0] = sign0 * _cheb_grid_single(kind, n0, x) if sign0 else 0.0
    if count > 1:
        out[1] = sign1 * _cheb_grid_single(kind, n1, x) if sign1 else 0.0
        for i in range(2, count):
            out[i] = 2 * x * out[i - 1] - out[i - 2]
    return out


def _cheb_grid_single(kind: str, n: int, x):
    p0 = 1.0 + 0.0 * x
    p1 = x if kind == "T" else 2 * x
    if n == 0:
        return p0
    for _ in range(n - 1):
        p0, p1 = p1, 2 * x * p1 - p0
    return p1
