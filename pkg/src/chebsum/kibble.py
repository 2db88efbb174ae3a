"""Chebyshev lattice sums over symmetric correlation matrices.

For a symmetric n x n matrix with zero diagonal and entries rho_ij, the sums

    f_T = sum_S prod rho_ij^{s_ij} * prod_m T_{s_m}(x_m)
    f_U = sum_S prod rho_ij^{s_ij} * prod_m U_{s_m}(x_m)

run over all symmetric nonnegative-integer matrices S with zero diagonal,
where s_m is the m-th row sum.  Both are rational in the x_m with common
denominator prod_{i<j} w_2(x_i, x_j | rho_ij).

Closed-form evaluation composes the product-to-sum expansion with the
multi-geometric subset sums: each of the 2^n sign vectors contributes one
multi-direction geometric sum whose directions are the n(n-1)/2 pairs with
angles beta_ij = i_i*a_i + i_j*a_j.  The f_U branch uses the sin sum with
beta = sum i_j*a_j when n is odd and the cos sum when n is even (the parity
of the number of sine factors in the product-to-sum step).

The oracle sums the defining lattice directly.  It is organized as a
vertex-elimination pass: pair exponents are accumulated axis by axis with
per-level partial products, and a vertex's Chebyshev factor is contracted as
soon as all its pairs have been absorbed.  This is an exact reorganization
of the nested loops over the truncated lattice (associativity only, no
closed-form shortcuts), with per-pair caps chosen so the dropped geometric
tails are negligible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Mapping, Sequence

from .cheb import cheb_values_row, multi_trig_sum
from .denom import build_w
from .errors import DomainError, ScaleError, SingularAngle
from .poly import Poly

MAX_KIBBLE_N = 5
DEFAULT_BUDGET = 6.0e8
CAP_EPS = 1e-16


@dataclass(frozen=True)
class CorrMatrix:
    """Upper-triangular store of pairwise correlations rho_ij, |rho_ij| < 1."""

    n: int
    entries: tuple[tuple[tuple[int, int], object], ...]

    @classmethod
    def from_dict(cls, n: int, values: Mapping[tuple[int, int], object]) -> CorrMatrix:
        if n < 1:
            raise DomainError("matrix dimension must be >= 1")
        ent = {}
        for (i, j), v in values.items():
            if not 1 <= i < j <= n:
                raise DomainError(f"pair ({i},{j}) out of range for n={n}")
            if abs(v) >= 1:
                raise DomainError(f"|rho_{i}{j}| must be < 1, got {v}")
            ent[(i, j)] = v
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                ent.setdefault((i, j), 0)
        return cls(n, tuple(sorted(ent.items())))

    def rho(self, i: int, j: int):
        if i == j:
            return 0
        if i > j:
            i, j = j, i
        return dict(self.entries)[(i, j)]

    def pairs(self) -> list[tuple[int, int]]:
        return [p for p, _ in self.entries]

    def values(self) -> list:
        return [v for _, v in self.entries]

    def principal_minors(self) -> list[Fraction]:
        """Leading principal minors of K + I, computed exactly."""
        m = [[Fraction(0)] * self.n for _ in range(self.n)]
        for i in range(self.n):
            m[i][i] = Fraction(1)
        for (i, j), v in self.entries:
            m[i - 1][j - 1] = m[j - 1][i - 1] = Fraction(v)
        minors = []
        for k in range(1, self.n + 1):
            minors.append(_det_fraction([row[:k] for row in m[:k]]))
        return minors

    def is_positive_definite(self) -> bool:
        """Whether K + I is positive definite; reported, never enforced."""
        return all(d > 0 for d in self.principal_minors())


def _det_fraction(m: list[list[Fraction]]) -> Fraction:
    m = [row[:] for row in m]
    k = len(m)
    det = Fraction(1)
    for c in range(k):
        pivot = next((r for r in range(c, k) if m[r][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, k):
            if m[r][c]:
                f = m[r][c] * inv
                for cc in range(c, k):
                    m[r][cc] -= f * m[c][cc]
    return det


# --------------------------------------------------------------- closed form


def kibble_closed_eval(kind: str, alphas: Sequence[float], K: CorrMatrix) -> float:
    """Sign-vector plus subset-sum evaluation of f_T / f_U at x_m = cos(a_m)."""
    if kind not in ("T", "U"):
        raise ValueError(f"kind must be T or U, got {kind!r}")
    n = K.n
    if len(alphas) != n:
        raise DomainError(f"need {n} angles, got {len(alphas)}")
    if n == 1:
        return 1.0
    pairs = K.pairs()
    rhos = [float(v) for v in K.values()]
    sin_prod = 1.0
    if kind == "U":
        for a in alphas:
            sa = math.sin(a)
            if sa == 0.0:
                raise SingularAngle("f_U needs sin(a_j) != 0 for every angle")
            sin_prod *= sa
    trig = "sin" if n % 2 else "cos"
    total = 0.0
    for bits in range(2 ** n):
        signs = [1 if (bits >> s) & 1 else -1 for s in range(n)]
        betas = [signs[i - 1] * alphas[i - 1] + signs[j - 1] * alphas[j - 1]
                 for (i, j) in pairs]
        if kind == "T":
            total += multi_trig_sum("cos", rhos, betas, 0.0)
        else:
            big_b = sum(s * a for s, a in zip(signs, alphas))
            parity = sum((s + 1) // 2 for s in signs)
            total += (-1) ** parity * multi_trig_sum(trig, rhos, betas, big_b)
    if kind == "T":
        return total / 2 ** n
    sign_n = (-1) ** ((n + 1) // 2) if n % 2 else (-1) ** (n // 2)
    return sign_n * total / (2 ** n * sin_prod)


# -------------------------------------------------------------------- oracle


def _edge_caps(K: CorrMatrix, cutoff: int, cap_eps: float) -> dict[tuple[int, int], int]:
    caps = {}
    for (i, j), v in K.entries:
        r = abs(float(v))
        if r == 0.0:
            caps[(i, j)] = 0
        else:
            caps[(i, j)] = min(cutoff, max(1, math.ceil(math.log(cap_eps) / math.log(r))))
    return caps


def _plan_cost(n: int, order: list[int], caps: dict) -> float:
    """Work estimate for the elimination pass under a vertex order."""
    extents = {v: 1 for v in order}
    done = set()
    cost = 0.0
    for v in order:
        done.add(v)
        for u in order:
            if u in done or u == v:
                continue
            e = (min(v, u), max(v, u))
            c = caps[e]
            extents[v] += c
            extents[u] += c
            size = reduce(lambda a, b: a * b, (extents[w] for w in order if w not in done or w == v), 1.0)
            cost += (c + 1) * size
        extents.pop(v)
    return cost


def kibble_series_oracle(kind: str, xs: Sequence[float], K: CorrMatrix,
                         cutoff: int, budget: float = DEFAULT_BUDGET,
                         cap_eps: float = CAP_EPS) -> float:
    """Direct truncated lattice sum of the defining series.

    Every pair exponent runs from 0 up to min(cutoff, the point where the
    geometric factor |rho_ij|^s drops below cap_eps).  The dropped tail is
    geometrically dominated: per pair it is at most
    |rho|^{cap+1} / (1 - |rho|) times the largest surviving row product.
    ScaleError is raised when the elimination-pass work estimate exceeds
    ``budget`` elementary operations.
    """
    import numpy as np

    if kind not in ("T", "U"):
        raise ValueError(f"kind must be T or U, got {kind!r}")
    n = K.n
    if len(xs) != n:
        raise DomainError(f"need {n} coordinates, got {len(xs)}")
    for x in xs:
        if abs(x) > 1:
            raise DomainError(f"|x_m| must be <= 1, got {x}")
    if n > MAX_KIBBLE_N:
        raise ScaleError(f"n = {n} exceeds the supported maximum {MAX_KIBBLE_N}")
    if n == 1:
        return 1.0
    if cutoff < 0:
        raise DomainError("cutoff must be nonnegative")
    caps = _edge_caps(K, cutoff, cap_eps)
    order = sorted(range(1, n + 1),
                   key=lambda v: sum(c for e, c in caps.items() if v in e))
    cost = _plan_cost(n, order, caps)
    if cost > budget:
        raise ScaleError(f"estimated work {cost:.3g} exceeds budget {budget:.3g}")

    rho = {e: float(v) for e, v in K.entries}
    arr = np.ones((1,) * n)
    axis_of = {v: i for i, v in enumerate(order)}
    for stage, v in enumerate(order):
        for u in order[stage + 1:]:
            e = (min(v, u), max(v, u))
            cap = caps[e]
            if cap == 0:
                continue
            ax_v, ax_u = axis_of[v], axis_of[u]
            sa, sb = arr.shape[ax_v], arr.shape[ax_u]
            shape = list(arr.shape)
            shape[ax_v] = sa + cap
            shape[ax_u] = sb + cap
            out = np.zeros(shape)
            w = 1.0
            for s in range(cap + 1):
                sl = [slice(None)] * arr.ndim
                sl[ax_v] = slice(s, s + sa)
                sl[ax_u] = slice(s, s + sb)
                out[tuple(sl)] += w * arr
                w *= rho[e]
            arr = out
        row = cheb_values_row(kind, float(xs[v - 1]), arr.shape[axis_of[v]])
        arr = np.tensordot(arr, row, axes=([axis_of[v]], [0]))
        dropped = axis_of.pop(v)
        for u in axis_of:
            if axis_of[u] > dropped:
                axis_of[u] -= 1
    return float(arr)


# --------------------------------------------------------------- denominator


def kibble_denominator(K: CorrMatrix, symbolic: bool = False) -> Poly:
    """prod over pairs of w_2(x_i, x_j | rho_ij) as an exact polynomial.

    With ``symbolic`` the correlations stay as variables rho_ij; otherwise
    the matrix entries (which must then be exact) are substituted.
    """
    if K.n > MAX_KIBBLE_N:
        raise ScaleError(f"n = {K.n} exceeds the supported maximum {MAX_KIBBLE_N}")
    if K.n == 1:
        return Poly.const(1, ("x1",))
    w2 = build_w(2).poly
    out = Poly.const(1)
    for (i, j), v in K.entries:
        factor = w2.rename({"x1": f"x{i}", "x2": f"x{j}"})
        if symbolic:
            factor = factor.rename({"rho": f"rho{i}{j}"})
        else:
            factor = factor.subs("rho", v if isinstance(v, (int, Fraction)) else Fraction(v))
        out = out * factor
    return out


# ----------------------------------------------------- published n=3 formula


def f_U3_closed(x: float, y: float, z: float,
                r12: float, r13: float, r23: float) -> float:
    """The published explicit three-variable f_U expression, transcribed literally.

    Known to deviate from the closed evaluator and the oracle away from
    symmetric special cases; ``f_U3_compare`` reports the discrepancy.
    """
    for r in (r12, r13, r23):
        if abs(r) >= 1:
            raise DomainError(f"|rho| must be < 1, got {r}")
    p = r12 * r13 * r23
    num = (4 * r12 * r13 * (r23 - r12 * r13) * (1 - r23 ** 2) * x ** 2
           + 4 * r12 * r23 * (r13 - r12 * r23) * (1 - r13 ** 2) * y ** 2
           + 4 * r13 * r23 * (r12 - r12 * r23) * (1 - r12 ** 2) * z ** 2
           - 4 * (r13 - r12 * r23) * (r23 - r12 * r13) * (1 + p) * x * y
           - 4 * (r12 - r13 * r23) * (r23 - r12 * r13) * (1 + p) * x * z
           - 4 * (r13 - r12 * r23) * (r12 - r23 * r13) * (1 + p) * y * z
           + (1 - r12 ** 2) * (1 - r13 ** 2) * (1 - r23 ** 2) * (1 - p))
    w2 = build_w(2).poly
    den = (w2.eval({"x1": x, "x2": y, "rho": r12})
           * w2.eval({"x1": x, "x2": z, "rho": r13})
           * w2.eval({"x1": y, "x2": z, "rho": r23}))
    return num / den


def f_U3_symmetrized(x: float, y: float, z: float,
                     r12: float, r13: float, r23: float) -> float:
    """The symmetry-consistent reading of the published expression.

    Identical to ``f_U3_closed`` except that the z**2 coefficient uses
    (r12 - r13*r23), the value forced by coordinate-permutation symmetry.
    Used only inside comparison reports; it matches the closed evaluator to
    rounding at every sampled point.
    """
    for r in (r12, r13, r23):
        if abs(r) >= 1:
            raise DomainError(f"|rho| must be < 1, got {r}")
    p = r12 * r13 * r23
    num = (4 * r12 * r13 * (r23 - r12 * r13) * (1 - r23 ** 2) * x ** 2
           + 4 * r12 * r23 * (r13 - r12 * r23) * (1 - r13 ** 2) * y ** 2
           + 4 * r13 * r23 * (r12 - r13 * r23) * (1 - r12 ** 2) * z ** 2
           - 4 * (r13 - r12 * r23) * (r23 - r12 * r13) * (1 + p) * x * y
           - 4 * (r12 - r13 * r23) * (r23 - r12 * r13) * (1 + p) * x * z
           - 4 * (r13 - r12 * r23) * (r12 - r23 * r13) * (1 + p) * y * z
           + (1 - r12 ** 2) * (1 - r13 ** 2) * (1 - r23 ** 2) * (1 - p))
    w2 = build_w(2).poly
    den = (w2.eval({"x1": x, "x2": y, "rho": r12})
           * w2.eval({"x1": x, "x2": z, "rho": r13})
           * w2.eval({"x1": y, "x2": z, "rho": r23}))
    return num / den


@dataclass(frozen=True)
class FU3Comparison:
    point: tuple[float, ...]
    published: float
    symmetrized: float
    closed: float
    oracle: float

    @property
    def published_deviation(self) -> float:
        return abs(self.published - self.closed)

    @property
    def symmetrized_deviation(self) -> float:
        return abs(self.symmetrized - self.closed)


def f_U3_compare(x: float, y: float, z: float, r12: float, r13: float, r23: float,
                 cutoff: int = 120) -> FU3Comparison:
    """Published formula vs its symmetrized reading vs closed form vs oracle."""
    K = CorrMatrix.from_dict(3, {(1, 2): r12, (1, 3): r13, (2, 3): r23})
    alphas = [math.acos(x), math.acos(y), math.acos(z)]
    return FU3Comparison(
        (x, y, z, r12, r13, r23),
        f_U3_closed(x, y, z, r12, r13, r23),
        f_U3_symmetrized(x, y, z, r12, r13, r23),
        kibble_closed_eval("U", alphas, K),
        kibble_series_oracle("U", [x, y, z], K, cutoff),
    )
