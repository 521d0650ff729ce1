"""Analytic latency quantities for uniform random-walk routing.

Mean latency of a connected graph is T = 2/(n-1) * Tr(L+), the trace of the
Laplacian pseudoinverse scaled over node pairs.  For cycle and torus
families T evaluates through the closed-form spectra; for arbitrary graphs
through the numeric spectrum, with an independent dense-pseudoinverse route
kept as an oracle.

Per-pair hitting times come from the normalized-Laplacian eigendecomposition

    H_st = 2m * sum_{lam_k > 0} (1/lam_k) * (v_kt^2 / d_t - v_ks v_kt / sqrt(d_s d_t))

with a first-step-analysis linear-system solver shipped alongside as the
second route.  Expected packet delay (EPD) is the average hitting time over
all ordered pairs.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import spectral
from .errors import DisconnectedGraphError, ParameterError
from .graphs import Graph, TorusSpec
from .spectral import (
    ZERO_EIGENVALUE_RTOL,
    cycle_laplacian_eigenvalues,
    normalized_laplacian,
    pinv_trace,
    symmetric_eigendecomposition,
    torus_laplacian_eigenvalues,
)

__all__ = [
    "LatencyReport",
    "HittingMatrix",
    "mean_latency_spectral",
    "mean_latency_pinv",
    "mean_latency_cycle",
    "mean_latency_torus",
    "latency_bounds",
    "cycle_latency_bounds",
    "torus_latency_bounds",
    "hitting_times",
    "hitting_times_linear_system",
    "expected_packet_delay",
]


@dataclass(frozen=True)
class LatencyReport:
    """One latency result with its bounds and optional cross-checks."""

    analytic: float
    lower_bound: float
    upper_bound: float
    oracle: float | None = None
    mc_mean: float | None = None
    mc_ci_halfwidth: float | None = None
    mc_trials: int | None = None

    def csv_row(self, family: str, params: str) -> str:
        """Row in the fixed schema
        family,params,analytic,lower,upper,oracle,mc_mean,mc_ci,trials."""
        def fmt(v):
            return "" if v is None else f"{v:.12g}"
        return ",".join([family, params] + [fmt(v) for v in (
            self.analytic, self.lower_bound, self.upper_bound, self.oracle,
            self.mc_mean, self.mc_ci_halfwidth, self.mc_trials)])


@dataclass(frozen=True)
class HittingMatrix:
    """h[s, t] = expected hops from s to t; zero diagonal, asymmetric."""

    h: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.h, dtype=float)
        h.setflags(write=False)
        object.__setattr__(self, "h", h)

    @property
    def n(self) -> int:
        return self.h.shape[0]


def _require_connected(g: Graph) -> None:
    if not g.is_connected():
        raise DisconnectedGraphError(
            "latency quantities are undefined on disconnected graphs"
        )


def mean_latency_spectral(g: Graph) -> float:
    """T = 2/(n-1) * Tr(L+), via the numeric Laplacian spectrum."""
    if g.n < 2:
        raise ParameterError("mean latency needs n >= 2")
    _require_connected(g)
    spec = spectral.laplacian_spectrum(g)
    return 2.0 / (g.n - 1) * pinv_trace(spec)


def mean_latency_pinv(g: Graph) -> float:
    """Oracle route: trace of the explicitly assembled Moore-Penrose
    pseudoinverse of the Laplacian (SVD-based, independent of eigh)."""
    if g.n < 2:
        raise ParameterError("mean latency needs n >= 2")
    _require_connected(g)
    return 2.0 / (g.n - 1) * float(np.trace(np.linalg.pinv(g.laplacian())))


def mean_latency_cycle(n: int, r: int) -> float:
    """Closed-form mean latency of the r-nearest-neighbor cycle."""
    vals = cycle_laplacian_eigenvalues(n, r)
    return 2.0 / (n - 1) * float(np.sum(1.0 / vals[1:]))


def mean_latency_torus(spec: TorusSpec) -> float:
    """Closed-form mean latency of the m-dimensional torus.

    Sums 1/lambda over every index tuple except the all-zero one and scales
    by 2/(n-1) with n = prod(k_i).
    """
    vals = torus_laplacian_eigenvalues(spec)
    return 2.0 / (spec.n - 1) * float(np.sum(1.0 / vals[1:]))


def _bounds_from_lam1(n: int, lam1: float) -> tuple[float, float]:
    return 2.0 / ((n - 1) * lam1), 2.0 / lam1


def cycle_latency_bounds(n: int, r: int) -> tuple[float, float]:
    """Closed-form sandwich bounds for the cycle:
    2 sin(pi/n) / ((n-1) * ((2r+1) sin(pi/n) - sin((2r+1) pi/n)))  <=  T
    <=  2 sin(pi/n) / ((2r+1) sin(pi/n) - sin((2r+1) pi/n)).
    """
    n, r = int(n), int(r)
    if n < 3 or r < 1 or 2 * r + 1 > n:
        raise ParameterError(
            f"cycle bounds need n >= 3, r >= 1, 2r+1 <= n (got n={n}, r={r})"
        )
    s = np.sin(np.pi / n)
    denom = (2 * r + 1) * s - np.sin((2 * r + 1) * np.pi / n)
    return 2.0 * s / ((n - 1) * denom), 2.0 * s / denom


def torus_latency_bounds(spec: TorusSpec) -> tuple[float, float]:
    """Sandwich bounds from the smallest nonzero closed-form eigenvalue."""
    lam1 = min(
        float(cycle_laplacian_eigenvalues(k, spec.r)[1:].min())
        for k in spec.dims
    )
    return _bounds_from_lam1(spec.n, lam1)


def latency_bounds(g_or_spec) -> tuple[float, float]:
    """(lower, upper) = (2/((n-1) lam_1), 2/lam_1) with lam_1 the algebraic
    connectivity; closed-form lam_1 for TorusSpec, numeric for Graph."""
    if isinstance(g_or_spec, TorusSpec):
        return torus_latency_bounds(g_or_spec)
    g = g_or_spec
    lam1 = spectral.algebraic_connectivity(g)
    return _bounds_from_lam1(g.n, lam1)


def hitting_times(g: Graph) -> HittingMatrix:
    """All-pairs expected hitting times via the normalized-Laplacian
    eigendecomposition."""
    _require_connected(g)
    d = g.degrees
    two_m = float(d.sum())
    spec = symmetric_eigendecomposition(normalized_laplacian(g), want_vectors=True)
    vals, vecs = spec.values, spec.vectors
    tol = ZERO_EIGENVALUE_RTOL * np.abs(vals).max()
    keep = vals > tol
    w = 1.0 / vals[keep]
    # U[i, k] = v_k(i) / sqrt(d_i); H[s, t] = 2m * (q_t - (U W U^T)[s, t])
    U = vecs[:, keep] / np.sqrt(d)[:, None]
    M = (U * w) @ U.T
    q = np.einsum("ik,k,ik->i", U, w, U)
    h = two_m * (q[None, :] - M)
    np.fill_diagonal(h, 0.0)
    return HittingMatrix(h=h)


def hitting_times_linear_system(g: Graph) -> HittingMatrix:
    """First-step-analysis oracle: for each target t solve
    (I - P restricted to s != t) h = 1 with P = D^{-1} A."""
    _require_connected(g)
    n = g.n
    P = g.weights / g.degrees[:, None]
    h = np.zeros((n, n))
    idx_all = np.arange(n)
    for t in range(n):
        idx = idx_all[idx_all != t]
        A = np.eye(n - 1) - P[np.ix_(idx, idx)]
        h[idx, t] = np.linalg.solve(A, np.ones(n - 1))
    return HittingMatrix(h=h)


def expected_packet_delay(g: Graph, method: str = "spectral") -> float:
    """Average hitting time over all ordered pairs i != j (hops)."""
    if method == "spectral":
        hm = hitting_times(g)
    elif method == "linear-system":
        hm = hitting_times_linear_system(g)
    else:
        raise ParameterError(f"unknown hitting-time method {method!r}")
    n = g.n
    return float(hm.h.sum()) / (n * (n - 1))
