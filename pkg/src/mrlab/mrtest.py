"""Maximal-regularity testers, the solution operator and growth classification."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .calculus import (
    DiagonalOperator,
    GridField,
    HeatModel,
    RadialHeatModel,
    RadialProfile,
    Kernel,
    gamma_kernel,
    generator_kernel,
    resolvent_kernel,
    semigroup_kernel,
)
from .interpnorms import LebesgueParameter, _finite_window, homogeneous_seminorm
from .quadrature import QuadratureSpec, cumulative, integrate
from .weightlab import DomainError, FunctionOnHalfLine


# ---------------------------------------------------------------------------
# reports

@dataclass(frozen=True)
class Growth:
    """Asymptotic shape of a running integral I(T)."""

    tag: str
    slope: float = math.nan
    alpha: float = math.nan
    limit: float = math.nan
    residual: float = math.nan

    def to_dict(self) -> dict:
        return {"tag": self.tag, "slope": self.slope, "alpha": self.alpha, "limit": self.limit}


@dataclass
class MRReport:
    test: str
    model: str
    constant: float
    components: dict = field(default_factory=dict)
    growth: Growth | None = None
    certificates: list = field(default_factory=list)
    verdict: str = "finite"
    phi: str | None = None
    weight: str | None = None
    quadrature: QuadratureSpec | None = None
    notes: list = field(default_factory=list)
    curve: tuple | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "test": self.test,
            "model": self.model,
            "phi": self.phi,
            "weight": self.weight,
            "constant": self.constant,
            "verdict": self.verdict,
            "components": dict(self.components),
            "growth": self.growth.to_dict() if self.growth else None,
            "certificates": [{"certificate": c, "value": v} for c, v in self.certificates],
            "quadrature": self.quadrature.to_dict() if self.quadrature else None,
            "notes": list(self.notes),
        }


# ---------------------------------------------------------------------------
# growth classification

def _lsq(cols, y):
    A = np.column_stack(cols)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    res = y - A @ coef
    return coef, float(np.sqrt(np.mean(res ** 2)))


def divergence_fit(T, I, rel_tol: float = 1e-3, decades: float = 2.0) -> Growth:
    """Classify I(T) over its last ``decades`` decades as bounded, log or power.

    The local exponent gamma of dI/dlnT decides the shape: negative means
    I saturates, near zero means logarithmic growth, positive means a power
    law T^gamma. The chosen model is compared with the closest competitor
    and the result is "inconclusive" when their residuals are within 10%.
    """
    T = np.asarray(T, dtype=float)
    I = np.asarray(I, dtype=float)
    ok = np.isfinite(I) & np.isfinite(T) & (T > 0)
    T, I = T[ok], I[ok]
    if T.size < 8:
        return Growth("inconclusive")
    win = T >= T[-1] / 10.0 ** decades
    if win.sum() < 8:
        win = np.zeros_like(win)
        win[-8:] = True
    t, y = T[win], I[win]
    scale = max(float(np.abs(y).max()), 1e-300)
    if y[-1] - y[0] <= rel_tol * scale:
        return Growth("bounded", limit=float(y[-1]), residual=float(np.std(y)) / scale)
    lt = np.log(t)
    d = np.gradient(y, lt)
    pos = d > 0
    if pos.sum() < 4:
        return Growth("inconclusive")
    gamma = float(np.polyfit(lt[pos], np.log(d[pos]), 1)[0])
    one = np.ones_like(t)
    (c0,), r_const = _lsq([one], y)
    (a_log, b_log), r_log = _lsq([one, lt], y)
    g_eff = gamma if abs(gamma) > 1e-6 else 1e-6
    (a_pow, c_pow), r_pow = _lsq([one, t ** g_eff], y)
    floor = 1e-9 * scale
    if gamma < -0.1:
        chosen, rival = r_pow, r_log
        out = Growth("bounded", alpha=gamma, limit=float(a_pow), residual=r_pow / scale)
    elif gamma <= 0.1:
        chosen, rival = r_log, r_const
        out = Growth("log", slope=float(b_log), alpha=gamma, residual=r_log / scale)
    else:
        chosen, rival = r_pow, r_log
        out = Growth("power", alpha=gamma, residual=r_pow / scale)
    if min(chosen, rival) > floor and abs(chosen - rival) <= 0.1 * max(chosen, rival):
        return Growth("inconclusive", out.slope, gamma, out.limit, out.residual)
    return out


# ---------------------------------------------------------------------------
# time paths and the solution operator

@dataclass(frozen=True, eq=False)
class TimeSampledPath:
    """Values of a model element at increasing times starting at 0.

    ``values`` has shape (len(nodes),) + element shape; for heat models
    ``like`` carries the grid geometry.
    """

    nodes: np.ndarray
    values: np.ndarray
    interpolation: str = "linear"
    like: GridField | None = None

    def __post_init__(self):
        t = np.asarray(self.nodes, dtype=float)
        if t.ndim != 1 or t.size < 2 or t[0] != 0 or np.any(np.diff(t) <= 0):
            raise ValueError("nodes must increase strictly from 0")
        if self.interpolation not in ("linear", "constant"):
            raise ValueError("interpolation must be 'linear' or 'constant'")
        v = np.asarray(self.values)
        if v.shape[0] != t.size:
            raise ValueError("one value per node is required")
        object.__setattr__(self, "nodes", t)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, fn: Callable[[float], object], nodes, interpolation: str = "linear",
                      like: GridField | None = None) -> "TimeSampledPath":
        vals = []
        for t in nodes:
            v = fn(float(t))
            vals.append(v.values if isinstance(v, GridField) else np.asarray(v))
            if isinstance(v, GridField) and like is None:
                like = v
        return cls(np.asarray(nodes, dtype=float), np.array(vals), interpolation, like)

    def element(self, j: int):
        if self.like is not None:
            return self.like.with_values(self.values[j])
        return self.values[j]

    def with_values(self, values) -> "TimeSampledPath":
        return TimeSampledPath(self.nodes, values, self.interpolation, self.like)


def _phi1(z):
    z = np.asarray(z)
    small = np.abs(z) < 1e-8
    safe = np.where(small, 1.0, z)
    return np.where(small, 1.0 + z / 2.0, np.expm1(safe) / safe)


def _phi2(z):
    z = np.asarray(z)
    small = np.abs(z) < 1e-2
    safe = np.where(small, 1.0, z)
    series = 0.5 + z / 6.0 + z ** 2 / 24.0 + z ** 3 / 120.0
    return np.where(small, series, (np.expm1(safe) - safe) / safe ** 2)


def _spectral(model, path: TimeSampledPath):
    """Spectral coefficients (m, K) and eigenvalues (K,) of a path."""
    if isinstance(model, DiagonalOperator):
        return path.values.reshape(path.nodes.size, -1).astype(float), model.spectrum
    if isinstance(model, HeatModel):
        axes = tuple(range(1, model.n + 1))
        c = np.fft.fftn(path.values, axes=axes).reshape(path.nodes.size, -1)
        return c, model.eigenvalues().ravel()
    raise TypeError(f"unsupported model {type(model).__name__}")


def _from_spectral(model, coeffs, like_path: TimeSampledPath):
    if isinstance(model, DiagonalOperator):
        return coeffs.reshape(like_path.values.shape)
    shape = (coeffs.shape[0],) + (model.N,) * model.n
    axes = tuple(range(1, model.n + 1))
    return np.fft.ifftn(coeffs.reshape(shape), axes=axes)


def solution_operator(model, f: TimeSampledPath, x0=None) -> TimeSampledPath:
    """u(t) = T(t) x0 + int_0^t T(t - s) f(s) ds at the nodes of f.

    Each step integrates the exponential exactly against the declared
    interpolation of f (exponential-integrator segments).
    """
    c, lam = _spectral(model, f)
    u = np.zeros_like(c, dtype=complex if np.iscomplexobj(c) else float)
    if x0 is not None:
        x_path = f.with_values(np.broadcast_to(
            x0.values if isinstance(x0, GridField) else np.asarray(x0), f.values.shape))
        u[0] = _spectral(model, x_path)[0][0]
    for j in range(f.nodes.size - 1):
        h = f.nodes[j + 1] - f.nodes[j]
        z = -lam * h
        step = np.exp(z) * u[j] + h * _phi1(z) * c[j]
        if f.interpolation == "linear":
            step = step + h * _phi2(z) * (c[j + 1] - c[j])
        u[j + 1] = step
    vals = _from_spectral(model, u, f)
    if isinstance(model, DiagonalOperator) and not np.iscomplexobj(f.values):
        vals = np.real(vals)
    return f.with_values(vals)


def _apply_generator_path(model, path: TimeSampledPath, scale: float = 1.0) -> np.ndarray:
    c, lam = _spectral(model, path)
    return _from_spectral(model, scale * c * lam, path)


def residual_check(model, u: TimeSampledPath, f: TimeSampledPath) -> float:
    """max over interior nodes of |u' + Au - f| (central differences, sup norm)."""
    if u.nodes.size < 3:
        raise ValueError("need at least three nodes")
    t = u.nodes
    vals = u.values
    shape = (-1,) + (1,) * (vals.ndim - 1)
    du = (vals[2:] - vals[:-2]) / (t[2:] - t[:-2]).reshape(shape)
    au = _apply_generator_path(model, u)[1:-1]
    res = du + au - f.values[1:-1]
    return float(np.abs(res).max())


# ---------------------------------------------------------------------------
# integral tests

def _default_quadrature(model) -> QuadratureSpec:
    if isinstance(model, DiagonalOperator):
        return QuadratureSpec()
    return QuadratureSpec(1e-5, 1e6, 512)


def _is_zero(model, x) -> bool:
    return float(model.norm(x)) == 0.0


def _integral_test(name: str, model, x, kernel: Kernel, q: QuadratureSpec,
                   per_norm: bool = True) -> MRReport:
    t = q.nodes
    g = model.kernel_norms(x, kernel, t, scale=model.measure_scale)
    notes = []
    win = _finite_window(g)
    if win.stop - win.start < g.size:
        notes.append(f"time range truncated to [{t[win.start]:.3g}, {t[win.stop - 1]:.3g}] "
                     "by the lattice budget")
    t, g = t[win], g[win]
    xn = float(model.norm(x))
    running = cumulative(g, t, lower=True)
    growth = divergence_fit(t, running, q.rel_tol)
    total = float(integrate(g, t, lower=True, upper=True))
    if growth.tag == "bounded" and math.isfinite(total):
        const, verdict = total / xn, "finite"
    elif growth.tag in ("log", "power") or not math.isfinite(total):
        const, verdict = math.inf, "diverging"
    else:
        const, verdict = total / xn, "inconclusive"
    if growth.tag == "log" and per_norm:
        growth = Growth("log", growth.slope / xn, growth.alpha, growth.limit, growth.residual)
    rep = MRReport(name, getattr(model, "label", type(model).__name__), const,
                   {"integral": total, "x_norm": xn, "truncated_integral": float(running[-1])},
                   growth, verdict=verdict, quadrature=q, notes=notes)
    rep.curve = (t, running)
    return rep


def kp_l1_test(model, x, q: QuadratureSpec | None = None) -> MRReport:
    """Running integral of ||A T(t) x|| and its growth.

    Heat models measure with the unit Laplacian (``model.measure_scale``).
    """
    if _is_zero(model, x):
        raise DomainError("the certificate must be nonzero")
    return _integral_test("kp_l1", model, x, generator_kernel(), q or _default_quadrature(model),
                          per_norm=False)


def resolvent_l1_test(model, x, q: QuadratureSpec | None = None) -> MRReport:
    """Running integral of ||A (1 + tA)^-1 x||; the log slope is reported per unit norm."""
    if _is_zero(model, x):
        raise DomainError("the certificate must be nonzero")
    return _integral_test("resolvent_l1", model, x, resolvent_kernel(), q or _default_quadrature(model))


def gamma_l1_test(model, x, eps: float = 1.0, q: QuadratureSpec | None = None) -> MRReport:
    """Running integral of ||(1/t) gamma(tA) x|| with gamma(z) = z (1+z)^(-1-eps)."""
    q = q or _default_quadrature(model)
    if _is_zero(model, x):
        return MRReport("gamma_l1", getattr(model, "label", ""), 0.0, {"integral": 0.0},
                        Growth("bounded", limit=0.0), verdict="finite", quadrature=q,
                        notes=["zero certificate"])
    return _integral_test("gamma_l1", model, x, gamma_kernel(eps), q, per_norm=False)


def default_s_grid(lo: float = 1e-4, hi: float = 1e4, per_decade: int = 20) -> np.ndarray:
    n = int(round(math.log10(hi / lo) * per_decade)) + 1
    return np.logspace(math.log10(lo), math.log10(hi), n)


def weighted_l1_test(model, x, v: FunctionOnHalfLine, s_grid=None,
                     q: QuadratureSpec | None = None) -> MRReport:
    """sup_s (1 / (v(s) ||x||)) int_0^inf ||A T(t) x|| v(t + s) dt.

    The s-dependence is classified at both ends (s -> 0 through 1/s and
    s -> inf); growth at either end means the constant diverges.
    """
    q = q or _default_quadrature(model)
    s = default_s_grid() if s_grid is None else np.asarray(s_grid, dtype=float)
    if _is_zero(model, x):
        raise DomainError("the certificate must be nonzero")
    t = q.nodes
    g = model.kernel_norms(x, generator_kernel(), t, scale=model.measure_scale)
    win = _finite_window(g)
    t, g = t[win], g[win]
    xn = float(model.norm(x))
    with np.errstate(over="ignore", invalid="ignore"):
        ratio = np.exp(v.log(t[None, :] + s[:, None]) - v.log(s)[:, None])
        J = integrate(g[None, :] * ratio, t) / xn
    notes = []
    if not np.all(np.isfinite(J)):
        const, verdict = math.inf, "diverging"
        growth = Growth("power", alpha=math.inf)
        notes.append("inner integral diverges for some s")
    else:
        hi = divergence_fit(s, J, q.rel_tol)
        lo = divergence_fit(1.0 / s[::-1], J[::-1], q.rel_tol)
        const = float(J.max())
        tags = {hi.tag, lo.tag}
        if tags & {"log", "power"}:
            verdict, const = "diverging", math.inf
            growth = hi if hi.tag in ("log", "power") else lo
            notes.append("growth as s -> inf" if growth is hi else "growth as s -> 0")
        elif "inconclusive" in tags:
            verdict = "inconclusive"
            growth = Growth("inconclusive")
        else:
            verdict, growth = "finite", Growth("bounded", limit=const)
    rep = MRReport("weighted_l1", getattr(model, "label", ""), const,
                   {"x_norm": xn, "s_argmax": float(s[int(np.nanargmax(J))]) if np.any(np.isfinite(J)) else math.nan},
                   growth, verdict=verdict, weight=str(v.describe()), quadrature=q, notes=notes)
    rep.curve = (s, J)
    return rep


def linf_test(model, x, q: QuadratureSpec | None = None) -> MRReport:
    """Smallest C with ||x|| <= C sup_t ||t A T(t) x|| + limsup_t ||T(t) x||."""
    q = q or _default_quadrature(model)
    label = getattr(model, "label", "")
    xn = float(model.norm(x))
    if xn == 0:
        return MRReport("linf", label, 0.0, {"x_norm": 0.0}, None, verdict="finite",
                        quadrature=q, notes=["zero certificate: condition holds trivially"])
    t = q.nodes
    tat = t * model.kernel_norms(x, generator_kernel(), t, scale=model.measure_scale)
    j = int(np.nanargmax(tat))
    S = float(tat[j])
    if 0 < j < t.size - 1:
        # parabola through the peak in ln t
        y0, y1, y2 = tat[j - 1], tat[j], tat[j + 1]
        den = y0 - 2 * y1 + y2
        if den < 0:
            S = float(y1 - 0.125 * (y2 - y0) ** 2 / den)
    def tail_max(spec):
        tt = spec.nodes
        tt = tt[tt >= spec.t_max / 10.0]
        return float(np.max(model.kernel_norms(x, semigroup_kernel(), tt)))
    lim = tail_max(q)
    lim2 = tail_max(q.widened())
    stable = abs(lim2 - lim) <= q.rel_tol * max(lim, xn * 1e-12, 1e-300)
    notes = [] if stable else ["tail maximum not stable under widening"]
    if S == 0:
        const = math.inf if xn > lim else 0.0
    else:
        const = max(0.0, xn - lim) / S
    return MRReport("linf", label, const, {"x_norm": xn, "sup_tAT": S, "limsup_T": lim},
                    None, verdict="finite" if stable else "inconclusive", quadrature=q, notes=notes)


# ---------------------------------------------------------------------------
# estimates along solutions

@dataclass(frozen=True)
class TimeNorm:
    """L^p(0, tau; v) in time; ``p`` is 1 or inf."""

    p: float = 1.0
    weight: FunctionOnHalfLine | None = None

    def __call__(self, t, vals) -> float:
        vals = np.abs(np.asarray(vals, dtype=float))
        w = np.ones_like(t) if self.weight is None else self.weight(np.maximum(t, 1e-300))
        if self.p == math.inf:
            return float(np.max(vals * w))
        return float(np.trapezoid(vals * w, t))


def _path_norms(model, vals, like: GridField | None, space_norm) -> np.ndarray:
    if space_norm is None:
        if like is not None:
            return np.array([model.norm(like.with_values(v)) for v in vals])
        return model.norms(vals)
    if like is not None:
        return np.array([space_norm(like.with_values(v)) for v in vals])
    return np.array([space_norm(v) for v in vals])


def mre_ratio(model, f: TimeSampledPath, time_norm: TimeNorm | None = None, x0=None,
              space_norm: Callable | None = None) -> MRReport:
    """(||u'|| + ||Au||) / ||f|| in L^p(0, tau; v; X) for u = U f (+ T(.) x0).

    The variant with ||u|| added to the numerator is reported as
    ``constant_with_u``. A zero forcing makes the ratio vacuous.
    """
    time_norm = time_norm or TimeNorm()
    u = solution_operator(model, f, x0)
    au = _apply_generator_path(model, u)
    du = f.values - au
    t = f.nodes
    norms = {}
    for key, vals in (("f_norm", f.values), ("Au_norm", au), ("deriv_norm", du), ("u_norm", u.values)):
        norms[key] = time_norm(t, _path_norms(model, vals, f.like, space_norm))
    label = getattr(model, "label", "")
    if norms["f_norm"] == 0:
        return MRReport("mre_ratio", label, math.nan, norms, verdict="vacuous",
                        notes=["zero forcing: the ratio is 0/0"])
    const = (norms["deriv_norm"] + norms["Au_norm"]) / norms["f_norm"]
    norms["constant_with_u"] = (norms["deriv_norm"] + norms["Au_norm"] + norms["u_norm"]) / norms["f_norm"]
    return MRReport("mre_ratio", label, const, norms, verdict="finite")


def homogeneous_mre(model, f: TimeSampledPath, phi: LebesgueParameter, time_norm: str = "L1",
                    x0=None, q: QuadratureSpec | None = None) -> MRReport:
    """Estimate with every space norm replaced by the homogeneous seminorm.

    Returns the ratio ([u'] + [Au]) / ([f] + [x0]) with the chosen time norm.
    """
    q = q or _default_quadrature(model)
    if time_norm not in ("L1", "Linf"):
        raise ValueError("time_norm must be 'L1' or 'Linf'")
    u = solution_operator(model, f, x0)
    au = _apply_generator_path(model, u)
    du = f.values - au
    tn = TimeNorm(1.0 if time_norm == "L1" else math.inf)

    def semi(v):
        return homogeneous_seminorm(model, v, phi, q).value

    comps = {}
    for key, vals in (("f_seminorm", f.values), ("Au_seminorm", au), ("deriv_seminorm", du)):
        comps[key] = tn(f.nodes, _path_norms(model, vals, f.like, semi))
    comps["x_seminorm"] = 0.0 if x0 is None else float(semi(x0))
    den = comps["f_seminorm"] + comps["x_seminorm"]
    label = getattr(model, "label", "")
    if den == 0:
        return MRReport("homogeneous_mre", label, math.nan, comps, verdict="vacuous")
    const = (comps["deriv_seminorm"] + comps["Au_seminorm"]) / den
    return MRReport("homogeneous_mre", label, const, comps, verdict="finite",
                    phi=phi.kind, quadrature=q)


def remark_example_integrals(theta: float, q: QuadratureSpec | None = None,
                             outer_nodes: int = 160) -> dict:
    """Double and single time integrals for the forcing
    f(t) = 1_{t > 1} t^-2 exp(-y^2 / (2 t^2)) on the line.

    ``double`` is int_1^inf [f(t)] dt with [.] the homogeneous seminorm for
    the power parameter theta (inner heat time scaled by t^2), and
    ``single`` is the growth of int_1^T ||f(t)||_1 dt.
    """
    if not 0 < theta < 1:
        raise ValueError("theta must lie in (0, 1)")
    q = q or QuadratureSpec(1e-6, 1e6, 1024)
    model = RadialHeatModel(1, n_gl=96)
    phi = LebesgueParameter.power(theta, 1.0)
    outer = QuadratureSpec(1.0, 1e6, outer_nodes).nodes
    inner = np.empty(outer.size)
    l1 = np.empty(outer.size)
    kern = generator_kernel()
    for j, t in enumerate(outer):
        x = RadialProfile.remark_example(max(t, np.nextafter(1.0, 2.0)), 0.0)
        qs = q.scaled(t * t)
        s = qs.nodes
        g = model.kernel_norms(x, kern, s, scale=model.measure_scale)
        inner[j] = phi.aggregate(g, s)
        l1[j] = model.norm(x)
    double = float(integrate(inner, outer, lower=False, upper=True))
    running = cumulative(l1, outer, lower=False)
    growth = divergence_fit(outer, running, q.rel_tol)
    return {"theta": theta, "double": double, "single_growth": growth,
            "single_truncated": float(running[-1]), "outer": outer, "inner": inner}


# ---------------------------------------------------------------------------
# certificate families

def band_packet(model: HeatModel, center: float = 2.0) -> GridField:
    """Real field whose Fourier transform is a smooth bump on |xi| in [center/2, 2 center]."""
    from .besov import bump

    probe = model.gaussian()
    xi = np.sqrt(probe.xi2())
    vals = np.fft.ifftn(bump(xi / center)).real
    vals = vals / np.abs(vals).max()
    # centre the packet in the box
    vals = np.fft.fftshift(vals)
    return probe.with_values(vals)


def certificate_family(model, seed: int = 0) -> list[tuple[str, object]]:
    """Fixed, versioned list of certificates for a model (version 1)."""
    if isinstance(model, DiagonalOperator):
        m = model.dim
        out = [(f"basis:{k}", np.eye(m)[k]) for k in range(m)]
        out.append(("ones", np.ones(m)))
        rng = np.random.default_rng(seed)
        out.append(("random", rng.uniform(0.1, 1.0, m)))
        return out
    if isinstance(model, HeatModel):
        g = model.gaussian()
        out = [("gaussian", g), ("gaussian_dilated2", model.gaussian(0.5)),
               ("modulated_gaussian", model.field(lambda *c: np.cos(2 * c[0]) * np.exp(-sum(ci ** 2 for ci in c) / 2))),
               ("meanzero", model.field(lambda *c: -c[0] * np.exp(-sum(ci ** 2 for ci in c) / 2))),
               ("band_packet", band_packet(model))]
        return out
    raise TypeError(f"unsupported model {type(model).__name__}")


def certificate(model, spec: str, seed: int = 0):
    """Parse ``gaussian``, ``basis:k``, ``meanzero``, ``packet`` or ``file:path``."""
    if spec.startswith("basis:"):
        if not isinstance(model, DiagonalOperator):
            raise ValueError("basis certificates need a diagonal model")
        k = int(spec.split(":", 1)[1])
        if not 0 <= k < model.dim:
            raise ValueError(f"basis index {k} out of range")
        return np.eye(model.dim)[k]
    if spec.startswith("file:"):
        path = spec.split(":", 1)[1]
        if isinstance(model, DiagonalOperator):
            return np.loadtxt(path, delimiter=",", ndmin=1)
        return GridField.from_csv(path)
    if isinstance(model, HeatModel):
        fams = dict(certificate_family(model, seed))
        key = {"gaussian": "gaussian", "meanzero": "meanzero", "packet": "band_packet"}.get(spec)
        if key is None:
            raise ValueError(f"unknown certificate {spec!r}")
        return fams[key]
    if isinstance(model, DiagonalOperator):
        if spec in ("ones", "gaussian"):
            return np.ones(model.dim)
        if spec == "meanzero":
            raise ValueError("meanzero certificates need a heat model")
    raise ValueError(f"unknown certificate {spec!r}")
