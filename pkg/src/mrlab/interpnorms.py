"""K-functional surrogates, K_Phi norms and semigroup seminorms."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .calculus import (
    DiagonalOperator,
    GridField,
    HeatModel,
    Kernel,
    PsiSymbol,
    ETA,
    generator_kernel,
    increment_kernel,
    psi_kernel,
    semigroup_kernel,
)
from .quadrature import QuadratureSpec, integrate, cumulative
from .weightlab import FunctionOnHalfLine


class ResolutionError(ValueError):
    """A requested step is below the grid resolution."""


class AdmissibilityError(ValueError):
    """A K-curve is not non-decreasing with K(t)/t non-increasing."""


# ---------------------------------------------------------------------------
# function parameters

@dataclass(frozen=True)
class LebesgueParameter:
    """Weighted Lebesgue aggregation of a function of t > 0.

    ``kind="L1"`` means (int g(t)^q w(t) dt)^(1/q); ``kind="Linf"`` means
    sup_t w(t) g(t). ``q_exp`` is 1 for the plain weighted L1 case.
    """

    kind: str
    weight: FunctionOnHalfLine
    q_exp: float = 1.0
    theta: float | None = None

    def __post_init__(self):
        if self.kind not in ("L1", "Linf"):
            raise ValueError("kind must be 'L1' or 'Linf'")
        if self.kind == "L1" and not self.q_exp >= 1:
            raise ValueError("q_exp must be >= 1")

    @classmethod
    def power(cls, theta: float, q: float = 1.0) -> "LebesgueParameter":
        """Real-interpolation parameter (theta, q)."""
        if q == math.inf:
            return cls("Linf", FunctionOnHalfLine.power(1.0 - theta), math.inf, theta)
        return cls("L1", FunctionOnHalfLine.power(q * (1.0 - theta) - 1.0), q, theta)

    @classmethod
    def unweighted_L1(cls) -> "LebesgueParameter":
        return cls("L1", FunctionOnHalfLine.constant(1.0), 1.0, 0.0)

    def describe(self) -> dict:
        return {"phi_kind": self.kind, "q": self.q_exp if self.kind == "L1" else "inf",
                "theta_or_weight": self.theta if self.theta is not None else self.weight.describe()}

    def aggregate(self, values, t, tails: bool = True) -> float:
        """Apply the aggregation to samples ``values`` of g on nodes ``t``."""
        values = np.abs(np.asarray(values, dtype=float))
        w = np.exp(self.weight.log(t))
        if self.kind == "Linf":
            return float(np.max(w * values))
        g = values ** self.q_exp * w
        total = float(integrate(g, t, lower=tails, upper=tails))
        return total ** (1.0 / self.q_exp)

    def trivial_check(self, q: QuadratureSpec | None = None) -> bool:
        """True when min(1, 1/t) has finite norm, i.e. K_Phi is nontrivial."""
        q = q or QuadratureSpec()
        t = q.nodes
        return bool(np.isfinite(self.aggregate(np.minimum(1.0, 1.0 / t), t)))


def power_L(theta: float, q: float = 1.0) -> LebesgueParameter:
    return LebesgueParameter.power(theta, q)


# ---------------------------------------------------------------------------
# K-curves

_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class KCurve:
    """Samples of a K-functional t -> K(t, x)."""

    nodes: np.ndarray
    values: np.ndarray
    source: str = "scalar_exact"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.nodes, dtype=float)
        k = np.asarray(self.values, dtype=float)
        if t.shape != k.shape or t.ndim != 1 or t.size < 2:
            raise ValueError("nodes and values must be matching 1-d arrays")
        if np.any(np.diff(t) <= 0) or t[0] <= 0:
            raise ValueError("nodes must be positive and increasing")
        if self.source not in ("scalar_exact", "thermic", "modulus", "smoothness2"):
            raise ValueError(f"unknown source {self.source!r}")
        object.__setattr__(self, "nodes", t)
        object.__setattr__(self, "values", k)
        ok, why = admissibility(t, k)
        if not ok:
            raise AdmissibilityError(why)

    def to_csv(self, path) -> None:
        np.savetxt(Path(path), np.column_stack([self.nodes, self.values]), delimiter=",",
                   header="t,K", comments="", fmt="%.17g")

    @classmethod
    def from_csv(cls, path, source: str = "scalar_exact") -> "KCurve":
        data = np.loadtxt(Path(path), delimiter=",", skiprows=1, ndmin=2)
        return cls(data[:, 0], data[:, 1], source)


def admissibility(t, k, slack: float = _SLACK) -> tuple[bool, str]:
    """Check K non-decreasing and K/t non-increasing up to relative slack."""
    t = np.asarray(t, dtype=float)
    k = np.asarray(k, dtype=float)
    if np.any(k < 0) or not np.all(np.isfinite(k)):
        return False, "values must be finite and nonnegative"
    scale = max(float(k.max()), 1e-300)
    if np.any(np.diff(k) < -slack * scale):
        return False, "K is decreasing somewhere"
    r = k / t
    if np.any(np.diff(r) > slack * np.maximum(r[:-1], r[1:]) + 1e-300):
        return False, "K(t)/t is increasing somewhere"
    return True, ""


def concave_regularize(t, upper) -> np.ndarray:
    """Largest admissible minorant of an upper bound for K.

    q(t) = min(min_{s >= t} U(s), t * min_{s <= t} U(s)/s) is non-decreasing,
    has q/t non-increasing and still bounds K from above whenever U does.
    """
    t = np.asarray(t, dtype=float)
    u = np.asarray(upper, dtype=float)
    right_min = np.minimum.accumulate(u[::-1])[::-1]
    slope_min = np.minimum.accumulate(u / t)
    q = np.minimum(right_min, t * slope_min)
    # the two envelopes interact, a second pass settles rounding
    q = np.minimum(np.minimum.accumulate(q[::-1])[::-1], t * np.minimum.accumulate(q / t))
    return np.maximum.accumulate(q)


def k_scalar(t_couple: float, h: float, r: float) -> float:
    """K(h, r; t R, R) = min(t, h) |r|."""
    if not (t_couple > 0 and h > 0):
        raise ValueError("t_couple and h must be positive")
    return min(t_couple, h) * abs(r)


def k_scalar_curve(t_couple: float, r: float, nodes) -> KCurve:
    nodes = np.asarray(nodes, dtype=float)
    return KCurve(nodes, np.minimum(t_couple, nodes) * abs(r), "scalar_exact")


def _model_norm(model, x) -> float:
    return float(model.norm(x))


def _analytic_constants(model) -> tuple[float, float]:
    """(sup ||T(t)||, sup ||t A T(t)||) for the true generator."""
    return float(model.semigroup_bound), float(model.analytic_bound)


def k_thermic_bracket(model, x, times, q: QuadratureSpec | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Lower and upper bounds of K(t, x; X, D_A) at every time.

    lower = c t ||A T(t) x|| with c = 1 / max(M0, M1) from the model's
    semigroup and analyticity constants; upper = int_0^t ||A T(s) x|| ds +
    t ||A T(t) x|| + t ||T(t) x||.
    """
    q = q or QuadratureSpec()
    times = np.asarray(times, dtype=float)
    if np.any(times <= 0):
        raise ValueError("times must be positive")
    m0, m1 = _analytic_constants(model)
    c = 1.0 / max(m0, m1)
    # one log grid covering every requested time plus a margin below
    lo = min(q.t_min, float(times.min()) * 1e-6)
    hi = float(times.max())
    n = max(q.n_nodes, 64)
    grid = np.exp(np.linspace(math.log(lo), math.log(hi), n))
    grid = np.union1d(grid, times)
    at = model.kernel_norms(x, generator_kernel(), grid)
    if not np.all(np.isfinite(at)):
        raise ArithmeticError("non-integrable or unresolved sample in ||A T(s) x||")
    tx = model.kernel_norms(x, semigroup_kernel(), times)
    running = cumulative(at, grid, lower=True)
    idx = np.searchsorted(grid, times)
    at_t = at[idx]
    lower = c * times * at_t
    upper = running[idx] + times * at_t + times * tx
    return lower, upper


def k_thermic(model, x, t: float, q: QuadratureSpec | None = None) -> tuple[float, float]:
    """Two-sided bracket for K(t, x; X, D_A) at one time."""
    if not t > 0:
        raise ValueError("t must be positive")
    lo, up = k_thermic_bracket(model, x, np.array([t]), q)
    return float(lo[0]), float(up[0])


def k_thermic_curve(model, x, nodes, q: QuadratureSpec | None = None) -> KCurve:
    """Admissible curve built from the upper thermic bound."""
    nodes = np.asarray(nodes, dtype=float)
    _, up = k_thermic_bracket(model, x, nodes, q)
    return KCurve(nodes, concave_regularize(nodes, up), "thermic")


def k_modulus_values(model, x, nodes) -> np.ndarray:
    """omega_A(t, x) = sup_{0 < s <= t} ||T(s) x - x|| as a running node max."""
    nodes = np.asarray(nodes, dtype=float)
    inc = model.kernel_norms(x, increment_kernel(), nodes)
    return np.maximum.accumulate(np.nan_to_num(inc, nan=0.0))


def k_modulus(model, x, t: float, q: QuadratureSpec | None = None) -> float:
    """Modulus of continuity of the orbit at scale t."""
    if not t > 0:
        raise ValueError("t must be positive")
    q = q or QuadratureSpec()
    lo = min(q.t_min, t * 1e-6)
    s = np.exp(np.linspace(math.log(lo), math.log(t), max(64, q.n_nodes // 8)))
    return float(k_modulus_values(model, x, s)[-1])


def k_modulus_curve(model, x, nodes) -> KCurve:
    nodes = np.asarray(nodes, dtype=float)
    vals = k_modulus_values(model, x, nodes)
    return KCurve(nodes, concave_regularize(nodes, vals), "modulus")


# ---------------------------------------------------------------------------
# second-order modulus of smoothness

def _second_difference(v: np.ndarray, shift: tuple[int, ...]) -> np.ndarray:
    axes = tuple(range(v.ndim))
    s1 = np.roll(v, shift, axis=axes)
    s2 = np.roll(v, tuple(2 * c for c in shift), axis=axes)
    return v - 2.0 * s1 + s2


def _lp_samples(v, cell, p):
    a = np.abs(v)
    if p == np.inf:
        return float(a.max())
    return float((np.sum(a ** p) * cell) ** (1.0 / p))


def modulus_smoothness2(f: GridField, h: float, p: float = 1.0, direction=None) -> tuple[float, float, int]:
    """Norm of the second difference f - 2 f(. - h) + f(. - 2h).

    The shift is rounded to whole cells. Returns (value, h_used, cells).
    In 2-D ``direction`` is an integer pair, default the first axis.
    """
    if p not in (1, 2, np.inf):
        raise ValueError("p must be 1, 2 or inf")
    if abs(h) >= f.L / 4:
        raise ValueError("|h| must be below L/4")
    cells = int(round(h / f.space_step))
    if cells == 0:
        raise ResolutionError(f"shift {h} is below one grid cell ({f.space_step})")
    if f.n == 1:
        shift = (cells,)
        h_used = cells * f.space_step
    else:
        d = (1, 0) if direction is None else tuple(int(c) for c in direction)
        shift = (cells * d[0], cells * d[1])
        h_used = abs(cells) * f.space_step * math.hypot(*d)
    val = _lp_samples(_second_difference(f.values, shift), f.cell_volume, p)
    return val, h_used, cells


def modulus_smoothness2_sup(f: GridField, r: float, p: float = 1.0) -> float:
    """sup over shifts with |h| <= r (axis and diagonal directions in 2-D)."""
    max_cells = int(math.floor(r / f.space_step + 1e-9))
    if max_cells < 1:
        raise ResolutionError(f"radius {r} is below one grid cell ({f.space_step})")
    max_cells = min(max_cells, f.N // 4 - 1)
    best = 0.0
    if f.n == 1:
        for c in range(1, max_cells + 1):
            best = max(best, _lp_samples(_second_difference(f.values, (c,)), f.cell_volume, p))
        return best
    for d in ((1, 0), (0, 1), (1, 1), (1, -1)):
        for c in range(1, max_cells + 1):
            if c * math.hypot(*d) > r / f.space_step + 1e-9:
                break
            val = _lp_samples(_second_difference(f.values, (c * d[0], c * d[1])), f.cell_volume, p)
            best = max(best, val)
    return best


def smoothness2_curve(f: GridField, nodes, p: float = 1.0) -> KCurve:
    """t -> sup_{|h| <= sqrt(t)} second-difference norm, regularized."""
    nodes = np.asarray(nodes, dtype=float)
    vals = []
    for t in nodes:
        try:
            vals.append(modulus_smoothness2_sup(f, math.sqrt(t), p))
        except ResolutionError:
            vals.append(0.0)
    vals = np.maximum.accumulate(np.array(vals))
    keep = vals > 0
    if keep.sum() < 2:
        raise ResolutionError("no node exceeds the grid resolution")
    return KCurve(nodes[keep], concave_regularize(nodes[keep], vals[keep]), "smoothness2")


# ---------------------------------------------------------------------------
# norms and seminorms

def kphi_norm(curve: KCurve, phi: LebesgueParameter, q: QuadratureSpec | None = None) -> float:
    """Norm of t -> K(t)/t in the parameter space, with power-law tails."""
    return phi.aggregate(curve.values / curve.nodes, curve.nodes)


@dataclass(frozen=True)
class SeminormResult:
    value: float
    verdict: str
    truncated_value: float
    estimates: tuple = ()
    flags: tuple = ()
    t_range: tuple = ()

    def __float__(self) -> float:
        return float(self.value)

    def to_dict(self, phi: LebesgueParameter | None = None, q: QuadratureSpec | None = None) -> dict:
        out = {"value": self.value, "verdict": self.verdict,
               "truncated_value": self.truncated_value, "flags": list(self.flags)}
        if phi is not None:
            out.update(phi.describe())
        if q is not None:
            out["quadrature"] = q.to_dict()
        return out


def _finite_window(values: np.ndarray) -> slice:
    ok = np.isfinite(values)
    if ok.all():
        return slice(0, values.size)
    if not ok.any():
        return slice(0, 0)
    # longest run of finite samples
    best, start, cur = (0, 0), None, 0
    for i, f in enumerate(np.append(ok, False)):
        if f and start is None:
            start = i
        if not f and start is not None:
            if i - start > best[1] - best[0]:
                best = (start, i)
            start = None
    return slice(*best)


def aggregate_with_verdict(norms_fn: Callable[[np.ndarray], np.ndarray], phi: LebesgueParameter,
                           q: QuadratureSpec) -> SeminormResult:
    """Aggregate g(t) = norms_fn(t) over q and two widened node sets.

    The widest node set is sampled once and restricted for the narrower
    ones. Samples that a model could not resolve (NaN) shrink the range;
    this is reported in ``flags``.
    """
    q1 = q.widened()
    q2 = q1.widened()
    wide = q2.nodes
    vals = np.asarray(norms_fn(wide), dtype=float)
    flags = []
    win = _finite_window(vals)
    if win.stop - win.start < 16:
        return SeminormResult(math.nan, "inconclusive", math.nan, (), ("unresolved",))
    if win.start > 0 or win.stop < wide.size:
        flags.append("time-range-truncated")
    estimates = []
    off = [q2.n_nodes - q.n_nodes, q2.n_nodes - q1.n_nodes, 0]
    for spec, o in zip((q, q1, q2), off):
        lo = max(o // 2, win.start)
        hi = min(o // 2 + spec.n_nodes, win.stop)
        estimates.append(phi.aggregate(vals[lo:hi], wide[lo:hi]))
    base_lo = max(off[0] // 2, win.start)
    base_hi = min(off[0] // 2 + q.n_nodes, win.stop)
    truncated = phi.aggregate(vals[base_lo:base_hi], wide[base_lo:base_hi], tails=False)
    e0, e1, e2 = estimates
    if phi.kind == "L1" and not math.isfinite(e0):
        verdict = "diverging"
    elif phi.kind == "Linf" and not all(math.isfinite(e) for e in estimates):
        verdict = "diverging"
    else:
        tol = q.rel_tol
        if e1 - e0 > tol * abs(e0) and e2 - e1 > tol * abs(e1):
            verdict = "diverging"
        elif abs(e2 - e1) <= tol * max(abs(e1), 1e-300):
            verdict = "finite"
        else:
            verdict = "inconclusive"
    if phi.kind == "Linf":
        flags.append("node-max")
    return SeminormResult(e0, verdict, truncated, tuple(estimates), tuple(flags),
                          (float(wide[win.start]), float(wide[win.stop - 1])))


def homogeneous_seminorm(model, x, phi: LebesgueParameter,
                         q: QuadratureSpec | None = None) -> SeminormResult:
    """Parameter-space norm of t -> ||A T(t) x|| (in the model's measuring scale)."""
    q = q or QuadratureSpec()
    kern = generator_kernel()
    scale = model.measure_scale
    return aggregate_with_verdict(lambda t: model.kernel_norms(x, kern, t, scale=scale), phi, q)


def psi_seminorm(model, x, phi: LebesgueParameter, psi: PsiSymbol,
                 q: QuadratureSpec | None = None) -> SeminormResult:
    """Parameter-space norm of t -> ||psi(tA) x|| / t."""
    q = q or QuadratureSpec()
    kern = psi_kernel(psi)
    scale = model.measure_scale
    return aggregate_with_verdict(lambda t: model.kernel_norms(x, kern, t, scale=scale), phi, q)


def equivalence_ratio(seminorm_a: Callable, seminorm_b: Callable, family: Sequence) -> tuple[float, float]:
    """Extremal ratios seminorm_a(x) / seminorm_b(x) over a family."""
    ratios = []
    for x in family:
        a, b = float(seminorm_a(x)), float(seminorm_b(x))
        if b == 0:
            ratios.append(math.inf if a > 0 else 1.0)
        else:
            ratios.append(a / b)
    return float(min(ratios)), float(max(ratios))
