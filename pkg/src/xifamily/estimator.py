"""Correlation coefficients built from kernel variation along the x-ordering.

Given pairs (x_i, y_i), reorder so the x's are nondecreasing (ties broken
uniformly at random from an explicit seed) and write y_[1], ..., y_[n] for
the reordered responses. For a kernel h and a monotone map F into [0,1] the
plugin coefficient is

    zeta = (1/n)   * sum_{i<n}  h(F(y_[i]), F(y_[i+1]))     (variation)
    chi  = (1/n^2) * sum_{i,j}  h(F(y_i),  F(y_j))          (normalization)
    xi   = 1 - zeta / chi,      with xi = 1 when chi = 0.

zeta is small when y tracks x; chi calibrates xi to 0 under independence.
The rank variant substitutes the empirical CDF (F(y) = rank/n), and the
simplified variant replaces chi by the constant C_h = integral of h over
the unit square, valid for continuous y, dropping the cost from O(n^2) to
O(n log n). With h = |y - z| the simplified variant is, up to the
(n^2-1)/3 vs n^2/3 denominator, Chatterjee's rank correlation, which is
also provided directly as a reference.

All operations are pure functions of (sample, seed). The O(n^2) chi sum is
accumulated with exact compensated summation (math.fsum per row, then
across rows), so results do not depend on internal evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .cdf import DistMap, empirical_map
from .errors import DegenerateDataError, NumericError
from .kernels import Kernel, normalization_constant

__all__ = [
    "PairedSample",
    "OrderedSample",
    "CoefficientResult",
    "order_by_x",
    "ranks",
    "xi_plugin",
    "xi_rank",
    "xi_simplified",
    "chatterjee_reference",
    "pearson",
    "spearman",
]


@dataclass(frozen=True)
class PairedSample:
    """n paired observations with finite coordinates, n >= 2."""

    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        ys = np.asarray(self.ys, dtype=float)
        if xs.ndim != 1 or ys.ndim != 1:
            raise ValueError("xs and ys must be one-dimensional")
        if xs.size != ys.size:
            raise ValueError(f"length mismatch: {xs.size} xs vs {ys.size} ys")
        if xs.size < 2:
            raise ValueError(f"need at least 2 observations, got {xs.size}")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise ValueError("xs and ys must be finite")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @property
    def n(self) -> int:
        return self.xs.size


@dataclass(frozen=True)
class OrderedSample:
    """Responses reordered so the paired x's are nondecreasing."""

    y_ordered: np.ndarray
    permutation: np.ndarray
    tie_seed: int


@dataclass(frozen=True)
class CoefficientResult:
    """A coefficient value together with its numerator and denominator.

    For the plugin and rank variants ``xi = 1 - zeta / normalization`` when
    the normalization is positive and 1 when it is zero; for the simplified
    variant the normalization is C_h. For the Chatterjee reference, zeta is
    the raw consecutive rank-gap sum and the normalization is (n^2 - 1) / 3.
    """

    xi: float
    zeta: float
    normalization: float
    variant: str
    n: int
    tie_seed: int


def order_by_x(sample: PairedSample, tie_seed: int = 0) -> OrderedSample:
    """Sort pairs by x, breaking tied x's uniformly at random.

    The tie-break draws one uniform key per observation from ``tie_seed``
    and sorts lexicographically by (x, key), which shuffles each maximal
    tied block uniformly. Deterministic given (sample, tie_seed); when the
    x's are distinct the permutation does not depend on the seed.
    """
    keys = np.random.default_rng(tie_seed).random(sample.n)
    perm = np.lexsort((keys, sample.xs))
    return OrderedSample(
        y_ordered=sample.ys[perm],
        permutation=perm,
        tie_seed=tie_seed,
    )


def ranks(ys) -> np.ndarray:
    """Max-rank of each value: R_i = #{j : y_j <= y_i}, in O(n log n)."""
    ys = np.asarray(ys, dtype=float)
    return np.searchsorted(np.sort(ys), ys, side="right")


def _fsum(values: np.ndarray) -> float:
    # math.fsum is exactly rounded, hence order-independent; tolist() keeps
    # it on the fast C path.
    return math.fsum(values.tolist())


def _consecutive_mean(u_ordered: np.ndarray, kernel: Kernel) -> float:
    """zeta: mean kernel value over consecutive entries, normalized by n."""
    n = u_ordered.size
    return _fsum(np.asarray(kernel.eval(u_ordered[:-1], u_ordered[1:]), dtype=float)) / n


def _pair_mean(u: np.ndarray, kernel: Kernel) -> float:
    """chi: mean kernel value over all n^2 ordered pairs (diagonal included)."""
    n = u.size
    row_totals = np.empty(n)
    for i in range(n):
        row_totals[i] = _fsum(np.asarray(kernel.eval(u[i], u), dtype=float))
    return _fsum(row_totals) / (n * n)


def _coefficient_from_u(
    u: np.ndarray,
    permutation: np.ndarray,
    kernel: Kernel,
    variant: str,
    n: int,
    tie_seed: int,
) -> CoefficientResult:
    zeta = _consecutive_mean(u[permutation], kernel)
    chi = _pair_mean(u, kernel)
    xi = 1.0 if chi == 0.0 else 1.0 - zeta / chi
    return CoefficientResult(
        xi=xi, zeta=zeta, normalization=chi, variant=variant, n=n, tie_seed=tie_seed
    )


def xi_plugin(
    sample: PairedSample,
    kernel: Kernel,
    dist: DistMap,
    tie_seed: int = 0,
) -> CoefficientResult:
    """Plugin coefficient with a prespecified monotone map F.

    Computes zeta over consecutive F(y)'s in x-order and chi over all pairs
    (O(n^2)); xi = 1 - zeta/chi, set to 1 when chi = 0.
    """
    ordered = order_by_x(sample, tie_seed)
    u = np.asarray(dist.eval(sample.ys), dtype=float)
    return _coefficient_from_u(u, ordered.permutation, kernel, "plugin", sample.n, tie_seed)


def xi_rank(sample: PairedSample, kernel: Kernel, tie_seed: int = 0) -> CoefficientResult:
    """Rank-based coefficient: the plugin form with F the empirical CDF.

    Uses u_i = R_i / n with the max-rank convention; agrees exactly with
    ``xi_plugin(sample, kernel, empirical_map(sample.ys))``.
    """
    ordered = order_by_x(sample, tie_seed)
    u = ranks(sample.ys) / sample.n
    return _coefficient_from_u(u, ordered.permutation, kernel, "rank", sample.n, tie_seed)


def xi_simplified(
    sample: PairedSample,
    kernel: Kernel,
    tie_seed: int = 0,
    quadrature_tol: float = 1e-8,
) -> CoefficientResult:
    """Simplified rank coefficient: xi = 1 - zeta_rank / C_h, O(n log n).

    Valid when y is continuous, where the pairwise normalization converges
    to the constant C_h and need not be estimated.
    """
    c_h = normalization_constant(kernel, quadrature_tol)
    if c_h <= 0.0:
        raise NumericError(f"kernel {kernel.label()} has non-positive C_h = {c_h}")
    ordered = order_by_x(sample, tie_seed)
    u_ordered = ranks(sample.ys)[ordered.permutation] / sample.n
    zeta = _consecutive_mean(u_ordered, kernel)
    return CoefficientResult(
        xi=1.0 - zeta / c_h,
        zeta=zeta,
        normalization=c_h,
        variant="simplified",
        n=sample.n,
        tie_seed=tie_seed,
    )


def chatterjee_reference(sample: PairedSample, tie_seed: int = 0) -> CoefficientResult:
    """Chatterjee's rank correlation, 1 - 3 * sum|R_[i+1] - R_[i]| / (n^2 - 1).

    The (n^2 - 1)/3 denominator assumes no ties among the x's; tied x's are
    rejected (use ``xi_rank`` there, which handles ties by construction).
    """
    xs = sample.xs
    if np.unique(xs).size != xs.size:
        raise DegenerateDataError(
            "tied X values: the (n^2-1)/3 normalization does not apply, use xi_rank"
        )
    ordered = order_by_x(sample, tie_seed)
    rank_gaps = np.abs(np.diff(ranks(sample.ys)[ordered.permutation]))
    gap_sum = _fsum(rank_gaps.astype(float))
    normalization = (sample.n**2 - 1) / 3.0
    return CoefficientResult(
        xi=1.0 - gap_sum / normalization,
        zeta=gap_sum,
        normalization=normalization,
        variant="chatterjee",
        n=sample.n,
        tie_seed=tie_seed,
    )


def pearson(sample: PairedSample) -> float:
    """Product-moment correlation; rejects zero-variance coordinates."""
    xc = sample.xs - np.mean(sample.xs)
    yc = sample.ys - np.mean(sample.ys)
    sx = math.sqrt(float(xc @ xc))
    sy = math.sqrt(float(yc @ yc))
    if sx == 0.0 or sy == 0.0:
        raise DegenerateDataError("zero variance: correlation undefined")
    return float(xc @ yc) / (sx * sy)


def spearman(sample: PairedSample) -> float:
    """Pearson correlation of mid-ranks (average rank on ties)."""
    rx = rankdata(sample.xs, method="average")
    ry = rankdata(sample.ys, method="average")
    return pearson(PairedSample(xs=rx, ys=ry))
