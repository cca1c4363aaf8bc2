"""Log-spaced quadrature on (0, inf) with power-law tail corrections."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np


class InvalidSpecError(ValueError):
    """Raised when a quadrature specification is malformed."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Log-uniform node set on [t_min, t_max].

    Attributes:
        t_min: Smallest node, positive.
        t_max: Largest node.
        n_nodes: Number of nodes (at least 16).
        rule: Only ``"log-trapezoid"`` is supported.
        rel_tol: Relative tolerance used by refinement verdicts.
    """

    t_min: float = 1e-6
    t_max: float = 1e6
    n_nodes: int = 4096
    rule: str = "log-trapezoid"
    rel_tol: float = 1e-3

    def __post_init__(self):
        if not (self.t_min > 0 and math.isfinite(self.t_min)):
            raise InvalidSpecError(f"t_min must be positive, got {self.t_min}")
        if not (self.t_max > self.t_min and math.isfinite(self.t_max)):
            raise InvalidSpecError("t_max must exceed t_min")
        if int(self.n_nodes) < 16:
            raise InvalidSpecError("n_nodes must be at least 16")
        if self.rule != "log-trapezoid":
            raise InvalidSpecError(f"unsupported rule {self.rule!r}")
        if not self.rel_tol > 0:
            raise InvalidSpecError("rel_tol must be positive")

    @property
    def log_step(self) -> float:
        return (math.log(self.t_max) - math.log(self.t_min)) / (self.n_nodes - 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.exp(math.log(self.t_min) + self.log_step * np.arange(self.n_nodes))

    def extended_nodes(self, decades: float) -> tuple[np.ndarray, int]:
        """Nodes padded by ``decades`` on both sides at the same log step.

        Returns the padded nodes and the offset of ``t_min`` inside them, so
        ``padded[offset:offset + n_nodes]`` reproduces :attr:`nodes`.
        """
        pad = int(math.ceil(decades * math.log(10.0) / self.log_step))
        j = np.arange(-pad, self.n_nodes + pad)
        return np.exp(math.log(self.t_min) + self.log_step * j), pad

    def widened(self, factor: float = 2.0) -> "QuadratureSpec":
        """Multiply t_max and divide t_min by ``factor`` keeping the log step."""
        extra = int(round(math.log(factor) / self.log_step))
        h = self.log_step
        return replace(
            self,
            t_min=math.exp(math.log(self.t_min) - extra * h),
            t_max=math.exp(math.log(self.t_max) + extra * h),
            n_nodes=self.n_nodes + 2 * extra,
        )

    def scaled(self, c: float) -> "QuadratureSpec":
        """Same node count with the range multiplied by ``c``."""
        return replace(self, t_min=self.t_min * c, t_max=self.t_max * c)

    def with_nodes(self, n_nodes: int) -> "QuadratureSpec":
        return replace(self, n_nodes=int(n_nodes))

    def to_dict(self) -> dict:
        return {
            "t_min": self.t_min,
            "t_max": self.t_max,
            "n_nodes": self.n_nodes,
            "rule": self.rule,
            "rel_tol": self.rel_tol,
        }


# Exponents this close to -1 are treated as the borderline (divergent) case.
_BORDER = 1e-8


def _log_slope(t0, t1, g0, g1):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log(g1 / g0) / np.log(t1 / t0)


def lower_tail(t: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Integral of g over (0, t[0]) assuming g is a power law near 0.

    The exponent is read off the first two samples. A non-integrable
    exponent (<= -1) gives +inf. Works along the last axis.
    """
    g0, g1 = np.abs(g[..., 0]), np.abs(g[..., 1])
    sign = np.sign(g[..., 0])
    p = _log_slope(t[0], t[1], g0, g1)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.where(p > -1.0 + _BORDER, g0 * t[0] / (p + 1.0), np.inf)
    val = np.where((g0 == 0) | (g1 == 0), g0 * t[0], val)
    return sign * val


def upper_tail(t: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Integral of g over (t[-1], inf) assuming a power law at infinity."""
    g0, g1 = np.abs(g[..., -2]), np.abs(g[..., -1])
    sign = np.sign(g[..., -1])
    p = _log_slope(t[-2], t[-1], g0, g1)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.where(p < -1.0 - _BORDER, g1 * t[-1] / (-p - 1.0), np.inf)
    val = np.where(g1 == 0, 0.0, val)
    val = np.where((g0 == 0) & (g1 != 0), np.inf, val)
    return sign * val


def trapezoid_weights(t: np.ndarray) -> np.ndarray:
    """Trapezoid weights in u = ln t for integrating g(t) dt = g t du."""
    u = np.log(t)
    du = np.diff(u)
    w = np.zeros_like(t)
    w[:-1] += 0.5 * du
    w[1:] += 0.5 * du
    return w * t


def integrate(values, t, lower=True, upper=True):
    """Integrate samples over (0, inf) (or the node range) on log nodes.

    Args:
        values: Samples of the integrand, shape (..., len(t)).
        t: Increasing positive nodes.
        lower: Add the power-law extrapolation below ``t[0]``.
        upper: Add the power-law extrapolation above ``t[-1]``.
    """
    values = np.asarray(values, dtype=float)
    total = values @ trapezoid_weights(t)
    with np.errstate(invalid="ignore"):
        if lower:
            total = total + lower_tail(t, values)
        if upper:
            total = total + upper_tail(t, values)
    return total


def cumulative(values, t, lower=True):
    """Running integrals from 0 (or t[0]) up to every node."""
    values = np.asarray(values, dtype=float)
    u = np.log(t)
    gt = values * t
    seg = 0.5 * (gt[..., 1:] + gt[..., :-1]) * np.diff(u)
    out = np.concatenate([np.zeros(values.shape[:-1] + (1,)), np.cumsum(seg, axis=-1)], axis=-1)
    if lower:
        with np.errstate(invalid="ignore"):
            out = out + lower_tail(t, values)[..., None]
    return out


def tail_cumulative(values, t, upper=True):
    """Integrals from every node up to infinity (or t[-1])."""
    values = np.asarray(values, dtype=float)
    u = np.log(t)
    gt = values * t
    seg = 0.5 * (gt[..., 1:] + gt[..., :-1]) * np.diff(u)
    rev = np.cumsum(seg[..., ::-1], axis=-1)[..., ::-1]
    out = np.concatenate([rev, np.zeros(values.shape[:-1] + (1,))], axis=-1)
    if upper:
        with np.errstate(invalid="ignore"):
            out = out + upper_tail(t, values)[..., None]
    return out


def integrate_callable(fn: Callable[[np.ndarray], np.ndarray], q: QuadratureSpec) -> float:
    """Integrate a vectorized callable over (0, inf) on the nodes of ``q``."""
    t = q.nodes
    return float(integrate(fn(t), t))


def refinement_verdict(estimator: Callable[[QuadratureSpec], float], q: QuadratureSpec,
                       factor: float = 2.0) -> tuple[float, str, list[float]]:
    """Run ``estimator`` on q and two widened specs and classify the result.

    A quantity is "diverging" when it is non-finite, or when both widenings
    increase it by more than ``q.rel_tol`` relative. It is "finite" when the
    last widening changes it by at most ``rel_tol``.
    """
    estimates = [estimator(q)]
    spec = q
    for _ in range(2):
        if not np.isfinite(estimates[-1]):
            break
        spec = spec.widened(factor)
        estimates.append(estimator(spec))
    if not all(np.isfinite(e) for e in estimates):
        return math.inf, "diverging", estimates
    e0, e1, e2 = estimates
    tol = q.rel_tol
    grew1 = e1 - e0 > tol * abs(e0)
    grew2 = e2 - e1 > tol * abs(e1)
    if grew1 and grew2:
        return e0, "diverging", estimates
    if abs(e2 - e1) <= tol * max(abs(e1), 1e-300):
        return e0, "finite", estimates
    return e0, "inconclusive", estimates
