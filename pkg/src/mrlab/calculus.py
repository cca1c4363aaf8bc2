"""Concrete sectorial models and their functional calculus.

Three models are provided:

* :class:`DiagonalOperator` - a positive diagonal generator on l1 or linf.
* :class:`HeatModel` - the heat semigroup on R^n (n = 1, 2) acting on
  :class:`GridField` samples through Fourier multipliers.
* :class:`RadialHeatModel` - the same semigroup restricted to radial
  Gaussians, evaluated in closed form plus a radial quadrature.

All models expose ``kernel_norms(x, kernel, times)``, the norm of
``m(t, A) x`` for a scalar symbol ``m`` at many times, which is what the
seminorm and maximal-regularity tests consume.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.signal import czt
from scipy.special import gamma as gamma_fn

from .quadrature import QuadratureSpec
from .weightlab import DomainError


class NumericError(ArithmeticError):
    """A symbol or integrand produced non-finite values."""


# ---------------------------------------------------------------------------
# psi symbols

@dataclass(frozen=True)
class PsiSymbol:
    """Scalar function on [0, inf) applied to the generator.

    Tags: ``psi1`` (e^-z - 1), ``psi2`` (z/(1+z)), ``psi3`` (z/(1+z)^2),
    ``eta`` (z e^-z) and ``frac_eps`` (z (1+z)^(-1-eps)).
    """

    tag: str
    eps: float = 0.0

    def __post_init__(self):
        if self.tag not in ("psi1", "psi2", "psi3", "eta", "frac_eps"):
            raise ValueError(f"unknown psi tag {self.tag!r}")
        if self.tag == "frac_eps" and not self.eps > 0:
            raise ValueError("frac_eps needs eps > 0")

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        if self.tag == "psi1":
            return np.expm1(-z)
        if self.tag == "psi2":
            return z / (1.0 + z)
        if self.tag == "psi3":
            return z / (1.0 + z) ** 2
        if self.tag == "eta":
            return z * np.exp(-z)
        return z * (1.0 + z) ** (-1.0 - self.eps)

    @property
    def name(self) -> str:
        return f"frac_eps({self.eps:g})" if self.tag == "frac_eps" else self.tag


PSI1 = PsiSymbol("psi1")
PSI2 = PsiSymbol("psi2")
PSI3 = PsiSymbol("psi3")
ETA = PsiSymbol("eta")


def frac_eps(eps: float) -> PsiSymbol:
    return PsiSymbol("frac_eps", eps)


# ---------------------------------------------------------------------------
# kernels m(t, lambda)

# Half-widths (in units of sqrt(kappa * t)) beyond which a kernel's spatial
# tail is below ~1e-16: Gaussian kernels vs. exponentially decaying ones.
_GAUSS_SPREAD = 15.0
_EXP_SPREAD = 38.0


@dataclass(frozen=True)
class Kernel:
    """Scalar symbol m(t, lam) evaluated on the spectrum of the generator.

    Attributes:
        name: Label used in reports.
        symbol: Vectorized callable of (t, lam).
        band_limiting: True when m decays like exp(-t lam), letting the
            whole-space evaluator coarsen the grid at large t.
        spread: Spatial reach of the kernel in units of sqrt(kappa t).
    """

    name: str
    symbol: Callable[[np.ndarray, np.ndarray], np.ndarray]
    band_limiting: bool = False
    spread: float = _EXP_SPREAD

    def scaled(self, c: float) -> "Kernel":
        if c == 1.0:
            return self
        sym = self.symbol
        return Kernel(self.name, lambda t, lam: c * sym(t, lam), self.band_limiting, self.spread)


def semigroup_kernel() -> Kernel:
    return Kernel("semigroup", lambda t, lam: np.exp(-t * lam), True, _GAUSS_SPREAD)


def generator_kernel() -> Kernel:
    """lam e^{-t lam}: the action of A T(t)."""
    return Kernel("generator", lambda t, lam: lam * np.exp(-t * lam), True, _GAUSS_SPREAD)


def increment_kernel() -> Kernel:
    """e^{-t lam} - 1: the action of T(t) - I."""
    return Kernel("increment", lambda t, lam: np.expm1(-t * lam), False, _GAUSS_SPREAD)


def psi_kernel(psi: PsiSymbol) -> Kernel:
    """psi(t lam) / t."""
    limiting = psi.tag == "eta"
    spread = _GAUSS_SPREAD if psi.tag in ("eta", "psi1") else _EXP_SPREAD
    return Kernel(f"psi:{psi.name}", lambda t, lam: psi(t * lam) / t, limiting, spread)


def resolvent_kernel() -> Kernel:
    """lam / (1 + t lam): the action of A (1 + tA)^-1."""
    return Kernel("resolvent", lambda t, lam: lam / (1.0 + t * lam), False, _EXP_SPREAD)


def gamma_kernel(eps: float) -> Kernel:
    """lam (1 + t lam)^(-1-eps): the action of (1/t) gamma(tA)."""
    return Kernel(f"gamma({eps:g})", lambda t, lam: lam * (1.0 + t * lam) ** (-1.0 - eps),
                  False, _EXP_SPREAD)


# ---------------------------------------------------------------------------
# diagonal model

@dataclass(frozen=True, eq=False)
class DiagonalOperator:
    """Diagonal generator with positive spectrum on l1 or linf."""

    spectrum: np.ndarray
    ambient_norm: str = "l1"

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.spectrum, dtype=float))
        if a.ndim != 1 or a.size < 1 or np.any(a <= 0) or not np.all(np.isfinite(a)):
            raise ValueError("spectrum must be a nonempty sequence of positive reals")
        if self.ambient_norm not in ("l1", "linf"):
            raise ValueError("ambient_norm must be 'l1' or 'linf'")
        object.__setattr__(self, "spectrum", a)

    measure_scale = 1.0
    semigroup_bound = 1.0
    analytic_bound = math.exp(-1.0)

    @property
    def label(self) -> str:
        return "diag:" + ",".join(f"{a:g}" for a in self.spectrum)

    @property
    def dim(self) -> int:
        return self.spectrum.size

    def norm(self, x) -> float:
        x = np.asarray(x)
        return float(np.abs(x).sum() if self.ambient_norm == "l1" else np.abs(x).max())

    def norms(self, xs) -> np.ndarray:
        xs = np.abs(np.asarray(xs))
        return xs.sum(axis=-1) if self.ambient_norm == "l1" else xs.max(axis=-1)

    def eigenvalues(self, x=None) -> np.ndarray:
        return self.spectrum

    def to_spectral(self, x):
        return np.asarray(x, dtype=complex if np.iscomplexobj(x) else float)

    def from_spectral(self, c):
        return c

    def semigroup(self, t: float, x):
        return diag_semigroup(self, t, x)

    def AT(self, t: float, x):
        return diag_AT(self, t, x)

    def apply_generator(self, x):
        return self.spectrum * np.asarray(x)

    def kernel_norms(self, x, kernel: Kernel, times, scale: float = 1.0) -> np.ndarray:
        x = np.asarray(x)
        times = np.asarray(times, dtype=float)
        out = np.empty(times.size)
        chunk = max(1, 2 ** 22 // max(self.dim, 1))
        for i in range(0, times.size, chunk):
            tt = times[i:i + chunk, None]
            vals = scale * kernel.symbol(tt, self.spectrum[None, :]) * x[None, :]
            out[i:i + chunk] = self.norms(vals)
        return out


def diag_semigroup(A: DiagonalOperator, t: float, x):
    """e^{-t a_k} x_k componentwise."""
    if t < 0:
        raise DomainError("t must be nonnegative")
    return np.exp(-t * A.spectrum) * np.asarray(x)


def diag_AT(A: DiagonalOperator, t: float, x):
    """a_k e^{-t a_k} x_k componentwise."""
    if t < 0:
        raise DomainError("t must be nonnegative")
    return A.spectrum * np.exp(-t * A.spectrum) * np.asarray(x)


# ---------------------------------------------------------------------------
# grid fields

def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True, eq=False)
class GridField:
    """Complex samples on the periodic box [-L, L)^n with N points per axis."""

    n: int
    L: float
    N: int
    values: np.ndarray
    _fft: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.n not in (1, 2):
            raise ValueError("only n = 1 or 2 is supported")
        if not (_is_pow2(int(self.N)) and self.N >= 32):
            raise ValueError("N must be a power of two >= 32")
        if not self.L > 0:
            raise ValueError("L must be positive")
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.N,) * self.n:
            raise ValueError(f"values must have shape {(self.N,) * self.n}")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    # geometry -----------------------------------------------------------
    @property
    def space_step(self) -> float:
        return 2.0 * self.L / self.N

    @property
    def cell_volume(self) -> float:
        return self.space_step ** self.n

    @property
    def axis(self) -> np.ndarray:
        return -self.L + self.space_step * np.arange(self.N)

    @property
    def frequencies(self) -> np.ndarray:
        """Per-axis frequencies pi k / L in FFT order."""
        return np.pi * np.fft.fftfreq(self.N, d=1.0 / self.N) / self.L

    def coords(self):
        if self.n == 1:
            return (self.axis,)
        return tuple(np.meshgrid(self.axis, self.axis, indexing="ij"))

    def xi2(self) -> np.ndarray:
        k = self.frequencies
        if self.n == 1:
            return k ** 2
        return k[:, None] ** 2 + k[None, :] ** 2

    @property
    def fft(self) -> np.ndarray:
        if self._fft is None:
            f = np.fft.fftn(self.values)
            f.setflags(write=False)
            object.__setattr__(self, "_fft", f)
        return self._fft

    # constructors -------------------------------------------------------
    @classmethod
    def from_function(cls, fn, n: int = 1, L: float = 40.0, N: int | None = None) -> "GridField":
        N = N or default_points(n)
        probe = cls(n, L, N, np.zeros((N,) * n))
        return cls(n, L, N, fn(*probe.coords()))

    @classmethod
    def gaussian(cls, n: int = 1, L: float = 40.0, N: int | None = None,
                 width: float = 1.0) -> "GridField":
        """exp(-|y|^2 / (2 width^2))"""
        return cls.from_function(
            lambda *c: np.exp(-sum(ci ** 2 for ci in c) / (2.0 * width ** 2)), n, L, N)

    def with_values(self, values) -> "GridField":
        return GridField(self.n, self.L, self.N, values)

    # measurements -------------------------------------------------------
    def lp_norm(self, p: float = 1.0) -> float:
        a = np.abs(self.values)
        if p == np.inf:
            return float(a.max())
        return float((np.sum(a ** p) * self.cell_volume) ** (1.0 / p))

    def integral(self) -> complex:
        return complex(self.values.sum() * self.cell_volume)

    def roundtrip_error(self) -> float:
        back = np.fft.ifftn(self.fft)
        return float(np.abs(back - self.values).max())

    def is_real(self, tol: float = 1e-12) -> bool:
        return float(np.abs(self.values.imag).max()) <= tol * max(float(np.abs(self.values).max()), 1e-300)

    # io -----------------------------------------------------------------
    def to_csv(self, path) -> None:
        """Write ``index,re,im`` rows plus a JSON sidecar with {n, L, N}."""
        path = Path(path)
        flat = self.values.ravel()
        rows = np.column_stack([np.arange(flat.size), flat.real, flat.imag])
        np.savetxt(path, rows, delimiter=",", header="index,re,im", comments="",
                   fmt=["%d", "%.17g", "%.17g"])
        path.with_suffix(".json").write_text(
            json.dumps({"n": self.n, "L": self.L, "N": self.N}, sort_keys=True))

    @classmethod
    def from_csv(cls, path) -> "GridField":
        path = Path(path)
        meta = json.loads(path.with_suffix(".json").read_text())
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        n, N = int(meta["n"]), int(meta["N"])
        vals = np.zeros(N ** n, dtype=complex)
        vals[data[:, 0].astype(int)] = data[:, 1] + 1j * data[:, 2]
        return cls(n, float(meta["L"]), N, vals.reshape((N,) * n))


def default_points(n: int) -> int:
    return 4096 if n == 1 else 512


def heat_multiplier_apply(f: GridField, symbol: Callable, t: float = 0.0) -> GridField:
    """Multiply the Fourier transform of f by symbol(|xi|^2, t) and invert."""
    m = np.asarray(symbol(f.xi2(), t))
    if not np.all(np.isfinite(m)):
        raise NumericError("symbol is not finite on the grid frequencies")
    return f.with_values(np.fft.ifftn(f.fft * m))


# ---------------------------------------------------------------------------
# heat model

@dataclass(frozen=True, eq=False)
class HeatModel:
    """Heat semigroup T(t) = exp(t * kappa * Laplacian) on R^n.

    The generator is A = -kappa * Laplacian. With the default kappa = 1/2 the
    unit Gaussian evolves into the profile (t+1)^(-n/2) exp(-|y|^2 / (2(t+1))).
    Measurements in the seminorm and maximal-regularity tests use
    ``measure_scale = 1/kappa``, i.e. they report norms of the unit
    Laplacian applied to T(t)x.

    ``domain="whole_space"`` evaluates norms on time-adapted boxes so that
    spreading solutions are not wrapped by the periodic grid;
    ``domain="torus"`` keeps the native periodic grid.
    """

    n: int = 1
    L: float = 40.0
    N: int | None = None
    diffusivity: float = 0.5
    domain: str = "whole_space"
    max_points: int = 2 ** 21

    def __post_init__(self):
        if self.N is None:
            object.__setattr__(self, "N", default_points(self.n))
        if self.domain not in ("whole_space", "torus"):
            raise ValueError("domain must be 'whole_space' or 'torus'")
        if not self.diffusivity > 0:
            raise ValueError("diffusivity must be positive")

    semigroup_bound = 1.0

    @property
    def label(self) -> str:
        return f"heat{self.n}d"

    @property
    def measure_scale(self) -> float:
        return 1.0 / self.diffusivity

    @property
    def analytic_bound(self) -> float:
        """sup_t ||t A T(t)|| on L1 (exact heat-kernel value)."""
        if self.n == 1:
            return 2.0 * math.exp(-0.5) / math.sqrt(2.0 * math.pi)
        return 2.0 / math.e

    def field(self, fn) -> GridField:
        return GridField.from_function(fn, self.n, self.L, self.N)

    def gaussian(self, width: float = 1.0) -> GridField:
        return GridField.gaussian(self.n, self.L, self.N, width)

    def _check(self, x: GridField):
        if (x.n, x.N) != (self.n, self.N) or not math.isclose(x.L, self.L):
            raise ValueError("field geometry does not match the model")

    def norm(self, x: GridField, p: float = 1.0) -> float:
        return x.lp_norm(p)

    def norms(self, xs) -> np.ndarray:
        return np.array([self.norm(x) for x in xs])

    def eigenvalues(self, x: GridField | None = None) -> np.ndarray:
        probe = x if x is not None else GridField(self.n, self.L, self.N, np.zeros((self.N,) * self.n))
        return self.diffusivity * probe.xi2()

    def to_spectral(self, x: GridField) -> np.ndarray:
        return np.fft.fftn(x.values)

    def from_spectral(self, c) -> GridField:
        return GridField(self.n, self.L, self.N, np.fft.ifftn(c))

    def semigroup(self, t: float, x: GridField) -> GridField:
        if t < 0:
            raise DomainError("t must be nonnegative")
        return heat_multiplier_apply(x, lambda xi2, s: np.exp(-s * self.diffusivity * xi2), t)

    def AT(self, t: float, x: GridField) -> GridField:
        k = self.diffusivity
        return heat_multiplier_apply(x, lambda xi2, s: k * xi2 * np.exp(-s * k * xi2), t)

    def apply_generator(self, x: GridField) -> GridField:
        k = self.diffusivity
        return heat_multiplier_apply(x, lambda xi2, s: k * xi2)

    def laplacian(self, x: GridField) -> GridField:
        return heat_multiplier_apply(x, lambda xi2, s: -xi2)

    def kernel_norms(self, x: GridField, kernel: Kernel, times, scale: float = 1.0,
                     p: float = 1.0) -> np.ndarray:
        """||scale * m(t, A) x||_p for every t; NaN where the box budget is exceeded."""
        self._check(x)
        times = np.asarray(times, dtype=float)
        if self.domain == "torus":
            return _torus_norms(x, kernel.scaled(scale), times, self.diffusivity, p)
        return _whole_space_norms(x, kernel.scaled(scale), times, self.diffusivity, p,
                                  self.max_points)


def _torus_norms(x: GridField, kernel: Kernel, times, kappa, p) -> np.ndarray:
    lam = kappa * x.xi2()
    F = x.fft
    out = np.empty(times.size)
    chunk = max(1, 2 ** 23 // F.size)
    axes = tuple(range(1, x.n + 1))
    for i in range(0, times.size, chunk):
        tt = times[i:i + chunk].reshape((-1,) + (1,) * x.n)
        g = np.fft.ifftn(F[None] * kernel.symbol(tt, lam[None]), axes=axes)
        out[i:i + chunk] = _lp(g, x.cell_volume, p, axes)
    return out


def _lp(g, cell, p, axes):
    a = np.abs(g)
    if p == np.inf:
        return a.max(axis=axes)
    return (np.sum(a ** p, axis=axes) * cell) ** (1.0 / p)


def effective_extent(x: GridField, rel: float = 1e-13) -> tuple[float, float]:
    """Half-width of the region where |x| matters and its per-axis bandwidth."""
    a = np.abs(x.values)
    mask = a > rel * a.max() if a.max() > 0 else np.zeros_like(a, bool)
    if not mask.any():
        return 0.0, 0.0
    coords = x.coords()
    radius = max(float(np.abs(c[mask]).max()) for c in coords)
    F = np.abs(x.fft)
    fm = F > rel * F.max()
    k = x.frequencies
    if x.n == 1:
        band = float(np.abs(k[fm]).max())
    else:
        kx, ky = np.meshgrid(k, k, indexing="ij")
        band = float(np.maximum(np.abs(kx), np.abs(ky))[fm].max())
    return radius, max(band, np.pi / x.L)


class _Lattice:
    """Spectrum of a field on a coarser or wider periodic lattice."""

    def __init__(self, x: GridField, J: int, i: int):
        self.n = x.n
        self.L = x.L * 2 ** J
        self.N = x.N * 2 ** J // 2 ** i
        self.dx = 2 * self.L / self.N
        ks = np.fft.fftfreq(self.N, d=1.0 / self.N)
        self.xi = np.pi * ks / self.L
        sign = np.where(ks.astype(np.int64) % 2 == 0, 1.0, -1.0)
        if x.n == 1:
            self.lam_xi2 = self.xi ** 2
            self.sign = sign
        else:
            self.lam_xi2 = self.xi[:, None] ** 2 + self.xi[None, :] ** 2
            self.sign = sign[:, None] * sign[None, :]
        self.spectrum = self._spectrum(x, J, i, ks)

    def _spectrum(self, x: GridField, J: int, i: int, ks) -> np.ndarray:
        dx = x.space_step
        if J == 0:
            # native transform, then drop frequencies beyond the coarse Nyquist
            kn = np.fft.fftfreq(x.N, d=1.0 / x.N)
            signn = np.where(kn.astype(np.int64) % 2 == 0, 1.0, -1.0)
            full = np.fft.fftn(x.values)
            idx = (ks.astype(np.int64)) % x.N
            if x.n == 1:
                return dx * (signn * full)[idx]
            return dx ** 2 * (signn[:, None] * signn[None, :] * full)[np.ix_(idx, idx)]
        # chirp-z transform restricted to samples where the field is not negligible
        a = np.abs(x.values)
        marginal = a if x.n == 1 else np.maximum(a.max(axis=0), a.max(axis=1))
        keep = np.nonzero(marginal > 1e-17 * max(float(a.max()), 1e-300))[0]
        if keep.size == 0:
            return np.zeros((self.N,) * x.n, dtype=complex)
        lo, hi = int(keep[0]), int(keep[-1]) + 1
        sub = x.values[(slice(lo, hi),) * x.n]
        step = np.pi / self.L
        k0 = -self.N // 2
        w = np.exp(-1j * step * dx)
        start = np.exp(1j * step * dx * k0)
        phase = np.exp(-1j * self.xi * x.axis[lo])
        out = sub
        for ax in range(x.n):
            out = czt(out, m=self.N, w=w, a=start, axis=ax)
            out = np.fft.ifftshift(out, axes=ax)
            shape = [1] * x.n
            shape[ax] = self.N
            out = out * phase.reshape(shape)
        return dx ** x.n * out


def lattice_norms(x: GridField, bands, reaches, multiplier, p: float = 1.0,
                  max_points: int = 2 ** 21) -> np.ndarray:
    """Norms of F^-1(m_j F x) on boxes sized for each item j.

    Item j needs per-axis frequencies up to ``bands[j]`` and a box half-width
    of at least ``reaches[j]``. The spacing is chosen with 4x oversampling of
    the band, the box by doubling L. Items sharing a lattice are batched;
    ``multiplier(indices, xi2)`` returns the symbols for those items on the
    lattice (shape ``(len(indices),) + xi2.shape``). Items whose lattice
    exceeds ``max_points`` samples are returned as NaN.
    """
    bands = np.asarray(bands, dtype=float)
    reaches = np.asarray(reaches, dtype=float)
    dx = x.space_step
    out = np.full(bands.size, np.nan)
    groups: dict[tuple[int, int], list[int]] = {}
    floor_i = int(math.log2(x.N // 64))
    for idx in range(bands.size):
        band = max(float(bands[idx]), 1e-300)
        i = max(0, int(math.floor(math.log2(math.pi / (4.0 * band) / dx))))
        J = max(0, int(math.ceil(math.log2(max(float(reaches[idx]), 1e-300) / x.L))))
        # keep at least 64 points per axis
        i = min(i, J + floor_i)
        N_t = x.N * 2 ** J // 2 ** i
        if N_t ** x.n > max_points:
            continue
        groups.setdefault((J, i), []).append(idx)
    axes = tuple(range(1, x.n + 1))
    for (J, i), members in sorted(groups.items()):
        try:
            lat = _Lattice(x, J, i)
        except MemoryError:
            continue
        base = lat.spectrum * lat.sign
        chunk = max(1, 2 ** 23 // base.size)
        sel = np.array(members)
        for c in range(0, sel.size, chunk):
            ii = sel[c:c + chunk]
            G = base[None] * multiplier(ii, lat.lam_xi2)
            g = np.fft.ifftn(G, axes=axes) / lat.dx ** x.n
            out[ii] = _lp(g, lat.dx ** x.n, p, axes)
    return out


def _whole_space_norms(x: GridField, kernel: Kernel, times, kappa, p, max_points) -> np.ndarray:
    radius, band_x = effective_extent(x)
    bands = np.full(times.size, band_x)
    if kernel.band_limiting:
        with np.errstate(divide="ignore"):
            cap = np.sqrt(40.0 / (kappa * np.maximum(times, 1e-300)))
        bands = np.minimum(bands, cap)
    reaches = radius + kernel.spread * np.sqrt(kappa * np.maximum(times, 0.0))

    def multiplier(ii, xi2):
        tt = times[ii].reshape((-1,) + (1,) * x.n)
        return kernel.symbol(tt, kappa * xi2[None])

    return lattice_norms(x, bands, reaches, multiplier, p, max_points)


# ---------------------------------------------------------------------------
# radial Gaussians

@dataclass(frozen=True)
class RadialProfile:
    """amplitude * exp(-r^2 / (2 variance)) on R^n."""

    n: int
    amplitude: float
    variance: float
    family: str = "gaussian"
    params: tuple = ()

    def __post_init__(self):
        if self.n < 1 or not self.variance > 0:
            raise ValueError("need n >= 1 and positive variance")

    @classmethod
    def gaussian_heat(cls, n: int, t: float) -> "RadialProfile":
        """Unit Gaussian after time t of the kappa = 1/2 heat flow."""
        if t < 0:
            raise DomainError("t must be nonnegative")
        return cls(n, (t + 1.0) ** (-n / 2.0), t + 1.0, "gaussian_heat", (n, t))

    @classmethod
    def remark_example(cls, t: float, s: float = 0.0) -> "RadialProfile":
        """t^-2 exp(-y^2 / (2 t^2)) on R after heat time s (t > 1)."""
        if not t > 1 or s < 0:
            raise DomainError("need t > 1 and s >= 0")
        v = s + t * t
        return cls(1, 1.0 / (t * math.sqrt(v)), v, "remark_example", (t, s))

    def value(self, r):
        r = np.asarray(r, dtype=float)
        return self.amplitude * np.exp(-r ** 2 / (2.0 * self.variance))

    def laplacian_value(self, r):
        r = np.asarray(r, dtype=float)
        v = self.variance
        return self.value(r) * (r ** 2 / v ** 2 - self.n / v)

    def evolve(self, s: float, kappa: float = 0.5) -> "RadialProfile":
        """Apply the heat semigroup exp(s kappa Laplacian)."""
        v = self.variance + 2.0 * kappa * s
        amp = self.amplitude * (self.variance / v) ** (self.n / 2.0)
        return RadialProfile(self.n, amp, v, self.family, self.params)


def sphere_area(n: int) -> float:
    """Surface measure of the unit sphere in R^n (2 for n = 1)."""
    return 2.0 * math.pi ** (n / 2.0) / gamma_fn(n / 2.0)


def _radial_l1(n, kind, amplitude, variance, n_gl):
    amplitude = np.atleast_1d(np.asarray(amplitude, dtype=float))
    variance = np.atleast_1d(np.asarray(variance, dtype=float))
    x, w = np.polynomial.legendre.leggauss(n_gl)
    cut = math.sqrt(n) if kind == "laplacian" else None
    pieces = [(0.0, cut), (cut, 40.0)] if cut else [(0.0, 40.0)]
    sq = np.sqrt(variance)[:, None]
    total = np.zeros(variance.size)
    for a, b in pieces:
        u = 0.5 * (b - a) * x + 0.5 * (b + a)
        r = sq * u[None, :]
        wr = sq * (0.5 * (b - a) * w)[None, :]
        g = amplitude[:, None] * np.exp(-r ** 2 / (2.0 * variance[:, None]))
        if kind == "laplacian":
            v = variance[:, None]
            g = g * (r ** 2 / v ** 2 - n / v)
        total += np.sum(wr * r ** (n - 1) * np.abs(g), axis=1)
    return sphere_area(n) * total


def radial_lp_norm(p: float, profile: RadialProfile, kind: str = "value",
                   q: QuadratureSpec | None = None) -> float:
    """L1 norm on R^n of a radial Gaussian profile or of its Laplacian.

    The radial integral is split at the sign change of the Laplacian and
    each piece is integrated with Gauss-Legendre nodes (n_nodes // 16 per
    piece, at least 64).
    """
    if p != 1:
        raise ValueError("only p = 1 is supported for radial profiles")
    if kind not in ("value", "laplacian"):
        raise ValueError("kind must be 'value' or 'laplacian'")
    n_gl = max(64, (q or QuadratureSpec()).n_nodes // 16)
    return float(_radial_l1(profile.n, kind, profile.amplitude, profile.variance, n_gl)[0])


@dataclass(frozen=True)
class RadialHeatModel:
    """Heat semigroup on radial Gaussians, evaluated in closed form."""

    n: int = 1
    diffusivity: float = 0.5
    n_gl: int = 256

    semigroup_bound = 1.0

    @property
    def label(self) -> str:
        return f"radial{self.n}d"

    @property
    def measure_scale(self) -> float:
        return 1.0 / self.diffusivity

    def norm(self, x: RadialProfile) -> float:
        return radial_lp_norm(1, x, "value")

    def kernel_norms(self, x: RadialProfile, kernel: Kernel, times, scale: float = 1.0) -> np.ndarray:
        times = np.asarray(times, dtype=float)
        k = self.diffusivity
        v = x.variance + 2.0 * k * times
        amp = x.amplitude * (x.variance / v) ** (self.n / 2.0)
        if kernel.name == "semigroup":
            return scale * _radial_l1(self.n, "value", amp, v, self.n_gl)
        if kernel.name == "generator":
            return scale * k * _radial_l1(self.n, "laplacian", amp, v, self.n_gl)
        raise ValueError(f"kernel {kernel.name!r} is not available in closed form")


# ---------------------------------------------------------------------------
# functional calculus

def psi_calculus(model, psi: PsiSymbol, t: float, x):
    """psi(tA) x on a diagonal or heat model."""
    if not t > 0:
        raise DomainError("t must be positive")
    if isinstance(model, DiagonalOperator):
        return psi(t * model.spectrum) * np.asarray(x)
    if isinstance(model, HeatModel):
        k = model.diffusivity
        return heat_multiplier_apply(x, lambda xi2, s: psi(s * k * xi2), t)
    raise TypeError(f"unsupported model {type(model).__name__}")
