"""Weights on the half line, Hardy-type operators and their boundedness constants."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .quadrature import (
    InvalidSpecError,
    QuadratureSpec,
    cumulative,
    integrate,
    lower_tail,
    refinement_verdict,
    tail_cumulative,
    trapezoid_weights,
    upper_tail,
)

# Decades added on both sides of the node range when an inner integral needs
# to see beyond the reported nodes.
PAD_DECADES = 4.0


class DomainError(ValueError):
    """Input outside the domain of an operation (e.g. not quasi-concave)."""


@dataclass(frozen=True, eq=False)
class FunctionOnHalfLine:
    """A nonnegative function on (0, inf).

    Either a closed-form member of a small family or a sampled table that is
    interpolated linearly in log-log coordinates and extrapolated by the
    boundary power laws.

    Attributes:
        family: One of ``power``, ``exp``, ``capped_power``, ``sampled``,
            ``callable``.
        params: Family parameters, see the constructors.
        nodes: Sample abscissae for ``sampled``.
        values: Sample values for ``sampled``.
    """

    family: str
    params: tuple = ()
    nodes: np.ndarray | None = None
    values: np.ndarray | None = None
    fn: Callable | None = field(default=None, repr=False)

    # constructors -------------------------------------------------------
    @classmethod
    def power(cls, exponent: float, scale: float = 1.0) -> "FunctionOnHalfLine":
        """scale * t**exponent"""
        if not scale > 0:
            raise ValueError("scale must be positive")
        return cls("power", (float(exponent), float(scale)))

    @classmethod
    def constant(cls, c: float = 1.0) -> "FunctionOnHalfLine":
        return cls.power(0.0, c)

    @classmethod
    def exponential(cls, rate: float = 1.0) -> "FunctionOnHalfLine":
        """exp(-rate * t)"""
        return cls("exp", (float(rate),))

    @classmethod
    def capped_power(cls, exponent: float = 1.0) -> "FunctionOnHalfLine":
        """min(t, 1)**exponent"""
        return cls("capped_power", (float(exponent),))

    @classmethod
    def sampled(cls, nodes, values) -> "FunctionOnHalfLine":
        nodes = np.asarray(nodes, dtype=float)
        values = np.asarray(values, dtype=float)
        if nodes.ndim != 1 or nodes.shape != values.shape or nodes.size < 2:
            raise ValueError("sampled function needs matching 1-D nodes and values (>= 2)")
        if np.any(nodes <= 0) or np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must be positive and strictly increasing")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise ValueError("values must be finite and nonnegative")
        return cls("sampled", (), nodes.copy(), values.copy())

    @classmethod
    def from_callable(cls, fn: Callable[[np.ndarray], np.ndarray], name: str = "callable"):
        return cls("callable", (name,), fn=fn)

    # evaluation ---------------------------------------------------------
    def log(self, t) -> np.ndarray:
        """Natural log of the function, -inf where it vanishes."""
        t = np.asarray(t, dtype=float)
        lt = np.log(t)
        if self.family == "power":
            mu, c = self.params
            return math.log(c) + mu * lt
        if self.family == "exp":
            return -self.params[0] * t
        if self.family == "capped_power":
            return self.params[0] * np.minimum(lt, 0.0)
        with np.errstate(divide="ignore"):
            return np.log(self(t))

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.family in ("power", "exp", "capped_power"):
            return np.exp(self.log(t))
        if self.family == "callable":
            return np.asarray(self.fn(t), dtype=float) * np.ones_like(t)
        if self.family == "sampled":
            return _loglog_interp(t, self.nodes, self.values)
        raise ValueError(f"unknown family {self.family!r}")

    def reciprocal(self) -> "FunctionOnHalfLine":
        if self.family == "power":
            mu, c = self.params
            return FunctionOnHalfLine.power(-mu, 1.0 / c)
        return FunctionOnHalfLine.from_callable(lambda t: 1.0 / self(t), "reciprocal")

    def describe(self) -> dict:
        if self.family == "sampled":
            return {"family": "sampled", "n_samples": int(self.nodes.size)}
        return {"family": self.family, "params": list(self.params)}

    def to_csv(self, path, q: QuadratureSpec | None = None) -> None:
        """Write ``t,value`` rows on the sample nodes (or the nodes of q)."""
        if q is None and self.family == "sampled":
            t, v = self.nodes, self.values
        else:
            t = (q or QuadratureSpec()).nodes
            v = self(t)
        rows = np.column_stack([t, v])
        np.savetxt(path, rows, delimiter=",", header="t,value", comments="", fmt="%.17g")

    @classmethod
    def from_csv(cls, path) -> "FunctionOnHalfLine":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls.sampled(data[:, 0], data[:, 1])


def _loglog_interp(t, nodes, values):
    """Log-log linear interpolation with boundary power-law extrapolation."""
    u = np.log(nodes)
    x = np.log(t)
    j = np.clip(np.searchsorted(u, x) , 1, u.size - 1)
    u0, u1 = u[j - 1], u[j]
    v0, v1 = values[j - 1], values[j]
    lam = (x - u0) / (u1 - u0)
    pos = (v0 > 0) & (v1 > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        logv = np.log(np.where(pos, v0, 1.0)) + lam * (
            np.log(np.where(pos, v1, 1.0)) - np.log(np.where(pos, v0, 1.0)))
        out = np.where(pos, np.exp(logv), 0.0)
    # segments touching a zero: plain linear interpolation inside, zero outside
    inside = (lam >= 0) & (lam <= 1)
    lin = v0 + lam * (v1 - v0)
    out = np.where(~pos & inside, np.maximum(lin, 0.0), out)
    return out


# ---------------------------------------------------------------------------
# reports

@dataclass(frozen=True)
class ConditionReport:
    """Boundedness constant estimate with truncation metadata."""

    constant_estimate: float
    arg_sup: float
    truncation: QuadratureSpec
    verdict: str
    flags: tuple = ()

    def __post_init__(self):
        if self.verdict not in ("finite", "diverging", "inconclusive"):
            raise ValueError(f"bad verdict {self.verdict!r}")
        if self.verdict == "finite" and not math.isfinite(self.constant_estimate):
            raise ValueError("finite verdict with non-finite constant")

    def to_dict(self) -> dict:
        c = self.constant_estimate
        return {
            "constant": c if math.isfinite(c) else "inf",
            "arg_sup": self.arg_sup,
            "t_min": self.truncation.t_min,
            "t_max": self.truncation.t_max,
            "n_nodes": self.truncation.n_nodes,
            "verdict": self.verdict,
            "flags": list(self.flags),
        }


# ---------------------------------------------------------------------------
# integral operators on padded node sets

def _padded(q: QuadratureSpec, decades: float = PAD_DECADES):
    t, offset = q.extended_nodes(decades)
    return t, slice(offset, offset + q.n_nodes)


def _averages(vals: np.ndarray, t: np.ndarray) -> np.ndarray:
    """(1/t) * integral_0^t of the samples, at every padded node."""
    return cumulative(vals, t) / t


def _tails(vals: np.ndarray, t: np.ndarray) -> np.ndarray:
    """integral_t^inf vals(s)/s ds at every padded node."""
    return tail_cumulative(vals / t, t)


def hardy_apply(f: FunctionOnHalfLine, q: QuadratureSpec) -> FunctionOnHalfLine:
    """Averaging operator (1/t) * int_0^t f, sampled on the nodes of q.

    The integral below the padded node range is closed with the boundary
    power law of f.
    """
    t, inner = _padded(q)
    vals = f(t)
    if np.any(vals < 0):
        raise DomainError("hardy_apply expects a nonnegative function")
    return FunctionOnHalfLine.sampled(t[inner], _averages(vals, t)[inner])


def adjoint_apply(f: FunctionOnHalfLine, q: QuadratureSpec) -> FunctionOnHalfLine:
    """Tail operator int_t^inf f(s) ds/s, sampled on the nodes of q."""
    t, inner = _padded(q)
    vals = f(t)
    if np.any(vals < 0):
        raise DomainError("adjoint_apply expects a nonnegative function")
    return FunctionOnHalfLine.sampled(t[inner], _tails(vals, t)[inner])


def _stieltjes_rows(vals: np.ndarray, s: np.ndarray, t_eval: np.ndarray,
                    chunk: int = 512) -> np.ndarray:
    w = trapezoid_weights(s)
    out = np.empty(t_eval.size)
    for i in range(0, t_eval.size, chunk):
        tt = t_eval[i:i + chunk, None]
        g = vals[None, :] / (tt + s[None, :])
        with np.errstate(invalid="ignore"):
            out[i:i + chunk] = g @ w + lower_tail(s, g) + upper_tail(s, g)
    return out


def stieltjes(w: FunctionOnHalfLine, t, q: QuadratureSpec):
    """Stieltjes transform int_0^inf w(s)/(t+s) ds on the nodes of q.

    ``t`` may be a scalar or an array inside [t_min, t_max].
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr < q.t_min * (1 - 1e-12)) or np.any(t_arr > q.t_max * (1 + 1e-12)):
        raise InvalidSpecError("t outside the quadrature range")
    s, _ = _padded(q)
    out = _stieltjes_rows(w(s), s, t_arr)
    return float(out[0]) if np.ndim(t) == 0 else out


def stieltjes_sandwich(w: FunctionOnHalfLine, q: QuadratureSpec):
    """Return (S w, P w + Q w) on the nodes of q using one shared rule.

    P w + Q w is the integral of w(s) / max(t, s). Both transforms use the
    same node weights, and their tails share one power-law extrapolation of
    w with the kernel frozen at the boundary node. The kernels satisfy
    1/(t+s) <= 1/max(t,s) <= 2/(t+s) term by term, so
    S w <= Pw + Qw <= 2 S w holds for the discrete values as well.
    """
    s, inner = _padded(q)
    vals = w(s)
    t = s[inner, None]
    wts = trapezoid_weights(s)
    with np.errstate(invalid="ignore", divide="ignore"):
        low = lower_tail(s, vals)
        high = upper_tail(s, vals / s)
    sw = (vals / (t + s)) @ wts + low / (t[:, 0] + s[0]) + high * s[-1] / (t[:, 0] + s[-1])
    pq = (vals / np.maximum(t, s)) @ wts + low / np.maximum(t[:, 0], s[0]) \
        + high * s[-1] / np.maximum(t[:, 0], s[-1])
    return sw, pq


# ---------------------------------------------------------------------------
# boundedness constants

def _ratio_sup(ratio: np.ndarray, t: np.ndarray):
    bad = ~np.isfinite(ratio)
    if np.any(bad):
        return math.inf, float(t[np.argmax(bad)])
    j = int(np.argmax(ratio))
    return float(ratio[j]), float(t[j])


def _condition(w: FunctionOnHalfLine, q: QuadratureSpec, expr) -> ConditionReport:
    def estimate(spec):
        s, inner = _padded(spec)
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            vals = w(s)
            ratio = expr(vals, s)[inner]
        return _ratio_sup(ratio, s[inner])

    value, arg = estimate(q)
    flags = []
    s, inner = _padded(q)
    with np.errstate(over="ignore", divide="ignore"):
        wv = w(s)
    if np.any(~np.isfinite(wv)) or np.any(wv <= 0) or np.any(~np.isfinite(1.0 / wv)):
        flags.append("overflow")
    if w.family == "sampled":
        flags.append("node-max")
    if not math.isfinite(value):
        return ConditionReport(math.inf, arg, q, "diverging", tuple(flags))
    _, verdict, _ = refinement_verdict(lambda spec: estimate(spec)[0], q)
    return ConditionReport(value, arg, q, verdict, tuple(flags))


def bound_P_L1(w: FunctionOnHalfLine, q: QuadratureSpec = QuadratureSpec()) -> ConditionReport:
    """sup_t (1/w(t)) int_t^inf w(s)/s ds"""
    return _condition(w, q, lambda v, s: _tails(v, s) / v)


def bound_Q_L1(w: FunctionOnHalfLine, q: QuadratureSpec = QuadratureSpec()) -> ConditionReport:
    """sup_t (1/(t w(t))) int_0^t w"""
    return _condition(w, q, lambda v, s: _averages(v, s) / v)


def bound_P_Linf(w: FunctionOnHalfLine, q: QuadratureSpec = QuadratureSpec()) -> ConditionReport:
    """sup_t (w(t)/t) int_0^t 1/w"""
    return _condition(w, q, lambda v, s: v * _averages(1.0 / v, s))


def bound_Q_Linf(w: FunctionOnHalfLine, q: QuadratureSpec = QuadratureSpec()) -> ConditionReport:
    """sup_t w(t) int_t^inf ds/(s w(s))"""
    return _condition(w, q, lambda v, s: v * _tails(1.0 / v, s))


def calderon_bound_L1(w: FunctionOnHalfLine, q: QuadratureSpec = QuadratureSpec()) -> ConditionReport:
    """sup_t (1/w(t)) int_0^inf w(s)/(t+s) ds"""
    def expr(v, s):
        out = np.full(s.shape, np.nan)
        inner = _padded_inner(s)
        out[inner] = _stieltjes_rows(v, s, s[inner]) / v[inner]
        return out
    return _condition(w, q, expr)


def calderon_bound_Linf(w: FunctionOnHalfLine, q: QuadratureSpec = QuadratureSpec()) -> ConditionReport:
    """sup_t w(t) int_0^inf ds/((t+s) w(s))"""
    def expr(v, s):
        out = np.full(s.shape, np.nan)
        inner = _padded_inner(s)
        out[inner] = _stieltjes_rows(1.0 / v, s, s[inner]) * v[inner]
        return out
    return _condition(w, q, expr)


def _padded_inner(s: np.ndarray) -> slice:
    # recover the reported range from a padded node set
    h = math.log(s[1] / s[0])
    pad = int(math.ceil(PAD_DECADES * math.log(10.0) / h - 1e-9))
    return slice(pad, s.size - pad)


# ---------------------------------------------------------------------------
# quasi-concave functions

def quasiconcave_check(phi: FunctionOnHalfLine, q: QuadratureSpec = QuadratureSpec(),
                       tol: float = 1e-9) -> bool:
    """phi non-decreasing and phi(t)/t non-increasing on the nodes."""
    t = phi.nodes if phi.family == "sampled" else q.nodes
    v = phi(t)
    if np.any(v <= 0) or not np.all(np.isfinite(v)):
        return False
    inc = np.all(np.diff(v) >= -tol * v[:-1])
    r = v / t
    dec = np.all(np.diff(r) <= tol * r[:-1])
    return bool(inc and dec)


def _require_quasiconcave(phi, q):
    if not quasiconcave_check(phi, q):
        raise DomainError("function is not quasi-concave on the nodes")


def dilation_function(phi: FunctionOnHalfLine, tau, q: QuadratureSpec = QuadratureSpec()):
    """s(tau) = sup_r phi(r tau)/phi(r), with r over the nodes of q."""
    r = q.nodes
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    lr = phi.log(r)
    out = np.empty(tau.size)
    for i, c in enumerate(tau):
        out[i] = np.max(phi.log(r * c) - lr)
    return np.exp(out)


def dilation_indices(phi: FunctionOnHalfLine, q: QuadratureSpec = QuadratureSpec(),
                     points_per_decade: int = 20) -> tuple[float, float]:
    """Lower and upper dilation indices (alpha, beta).

    ln s(tau) / ln tau is fitted by least squares over the outermost decade
    of tau at each end. Results are clipped to [0, 1].
    """
    _require_quasiconcave(phi, q)
    r = QuadratureSpec(q.t_min, q.t_max, max(q.n_nodes // 4, 16))
    decades = math.log10(q.t_max / q.t_min) / 2
    lo = np.logspace(-decades, -decades + 1, points_per_decade)
    hi = np.logspace(decades - 1, decades, points_per_decade)
    slopes = []
    for taus in (lo, hi):
        ls = np.log(dilation_function(phi, taus, r))
        lt = np.log(taus)
        a = np.polyfit(lt, ls, 1)[0]
        slopes.append(float(np.clip(a, 0.0, 1.0)))
    return slopes[0], slopes[1]


class IndexCheck(NamedTuple):
    sup_value: float
    verdict: str
    index_condition: bool
    consistent: bool


def integral_index_check(phi: FunctionOnHalfLine, q: QuadratureSpec = QuadratureSpec(),
                         part: int = 1, index_tol: float = 0.02) -> IndexCheck:
    """Integral tests tied to the dilation indices.

    part 1: sup_t (1/phi(t)) int_0^t phi(s)/s ds, finite iff alpha > 0.
    part 2: sup_t (t/phi(t)) int_t^inf phi(s)/s^2 ds, finite iff beta < 1.
    """
    _require_quasiconcave(phi, q)
    if part == 1:
        rep = _condition(phi, q, lambda v, s: cumulative(v / s, s) / v)
    elif part == 2:
        rep = _condition(phi, q, lambda v, s: s * tail_cumulative(v / s ** 2, s) / v)
    else:
        raise ValueError("part must be 1 or 2")
    alpha, beta = dilation_indices(phi, q)
    cond = alpha > index_tol if part == 1 else beta < 1 - index_tol
    finite = rep.verdict == "finite"
    return IndexCheck(rep.constant_estimate, rep.verdict, cond, finite == cond)


def least_concave_majorant(phi: FunctionOnHalfLine, q: QuadratureSpec | None = None) -> FunctionOnHalfLine:
    """Upper concave envelope of the samples, evaluated at the same nodes."""
    t = phi.nodes if phi.family == "sampled" else (q or QuadratureSpec()).nodes
    if t.size < 3:
        raise InvalidSpecError("need at least 3 nodes")
    _require_quasiconcave(phi, q or QuadratureSpec())
    v = phi(t)
    hull = upper_hull(t, v)
    return FunctionOnHalfLine.sampled(t, np.interp(t, t[hull], v[hull]))


def upper_hull(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Indices of the upper convex hull of points sorted by x (monotone chain)."""
    idx: list[int] = []
    for i in range(x.size):
        while len(idx) >= 2:
            a, b = idx[-2], idx[-1]
            cross = (x[b] - x[a]) * (y[i] - y[a]) - (y[b] - y[a]) * (x[i] - x[a])
            if cross >= 0:
                idx.pop()
            else:
                break
        idx.append(i)
    return np.array(idx)


def linf_phi_representation(w: FunctionOnHalfLine, q: QuadratureSpec = QuadratureSpec()) -> FunctionOnHalfLine:
    """phi(t) = inf_s max(1, t/s) s / w(s) with s over the nodes."""
    t = q.nodes
    g = t / w(t)
    right = np.minimum.accumulate(g[::-1])[::-1]
    left = t * np.minimum.accumulate(1.0 / w(t))
    return FunctionOnHalfLine.sampled(t, np.minimum(left, right))


def fundamental_weight(w: FunctionOnHalfLine, q: QuadratureSpec = QuadratureSpec()) -> FunctionOnHalfLine:
    """v(t) = (1/t) int_0^t w + int_t^inf w(s)/s ds on the nodes of q."""
    rep = calderon_bound_L1(w, q)
    if rep.verdict != "finite":
        raise DomainError("weight fails the Calderon condition")
    t, inner = _padded(q)
    vals = w(t)
    return FunctionOnHalfLine.sampled(t[inner], (_averages(vals, t) + _tails(vals, t))[inner])


# ---------------------------------------------------------------------------
# weights for the weighted Kalton-Portal condition

def ratio_monotone_check(v: FunctionOnHalfLine, t: float, q: QuadratureSpec = QuadratureSpec(),
                         tol: float = 1e-12) -> bool:
    """Is s -> v(t+s)/v(s) non-decreasing on the nodes?"""
    s = q.nodes
    lr = v.log(t + s) - v.log(s)
    return bool(np.all(np.diff(lr) >= -tol * np.maximum(1.0, np.abs(lr[:-1]))))


def log_convexity_check(v: FunctionOnHalfLine, q: QuadratureSpec = QuadratureSpec(),
                        strides=(1, 16, 256), tol: float = 1e-10) -> bool:
    """Midpoint test log v((a+b)/2) <= (log v(a) + log v(b)) / 2 over node pairs."""
    t = q.nodes
    lv = v.log(t)
    for k in strides:
        if k >= t.size:
            continue
        a, b = t[:-k], t[k:]
        mid = v.log(0.5 * (a + b))
        rhs = 0.5 * (lv[:-k] + lv[k:])
        if np.any(mid > rhs + tol * np.maximum(1.0, np.abs(rhs))):
            return False
    return True


def nonincreasing_check(v: FunctionOnHalfLine, q: QuadratureSpec = QuadratureSpec()) -> bool:
    lv = v.log(q.nodes)
    return bool(np.all(np.diff(lv) <= 1e-12 * np.maximum(1.0, np.abs(lv[:-1]))))


class TailRatio(NamedTuple):
    value: float
    stable: bool


def tail_ratio(v: FunctionOnHalfLine, t: float, q: QuadratureSpec = QuadratureSpec()) -> TailRatio:
    """v(t+s)/v(s) at the largest node, with a two-refinement stability flag."""
    vals = []
    s = q.t_max
    for _ in range(3):
        vals.append(float(np.exp(v.log(t + s) - v.log(s))))
        s *= 2.0
    stable = all(abs(vals[i + 1] - vals[i]) <= q.rel_tol * max(abs(vals[i]), 1e-300)
                 for i in range(2))
    return TailRatio(vals[0], stable)
