"""Scalar profile functions f: I -> R and the open intervals they live on."""

import math
from dataclasses import dataclass

import numpy as np

from . import tolerances as tl
from .errors import ConstantProfile, OutOfInterval


@dataclass(frozen=True)
class Interval:
    """Open interval (lo, hi); either end may be infinite."""

    lo: float = -math.inf
    hi: float = math.inf

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty interval ({self.lo}, {self.hi})")

    @classmethod
    def real_line(cls):
        return cls(-math.inf, math.inf)

    @classmethod
    def positive(cls):
        return cls(0.0, math.inf)

    @property
    def kind(self):
        if self.lo == -math.inf and self.hi == math.inf:
            return "real"
        if self.lo == 0.0 and self.hi == math.inf:
            return "positive"
        return "bounded" if math.isfinite(self.lo) and math.isfinite(self.hi) else "half_line"

    def __contains__(self, t):
        return self.lo < t < self.hi

    def require(self, t):
        if not (self.lo < t < self.hi):
            raise OutOfInterval(f"t = {t} is outside ({self.lo}, {self.hi})")

    def image(self, q, p):
        """The interval {q t + p : t in I}."""
        a, b = q * self.lo + p, q * self.hi + p
        if q < 0:
            a, b = b, a
        return a, b

    def sample(self, k=64):
        """A deterministic grid of k interior points."""
        if self.kind == "real":
            return np.linspace(-4.0, 4.0, k)
        if math.isfinite(self.lo) and math.isfinite(self.hi):
            w = self.hi - self.lo
            return np.linspace(self.lo + w / (k + 1), self.hi - w / (k + 1), k)
        if math.isfinite(self.lo):
            return self.lo + np.geomspace(0.05, 20.0, k)
        return self.hi - np.geomspace(0.05, 20.0, k)[::-1]


class FourierSeries:
    """Real trigonometric polynomial of period ``period``.

    x(t) = a0 + sum_k a[k] cos(2 pi k t / period) + b[k] sin(2 pi k t / period)
    """

    def __init__(self, period, a0=0.0, cos=(), sin=()):
        if not period > 0:
            raise ValueError("period must be positive")
        n = max(len(cos), len(sin))
        self.period = float(period)
        self.a0 = float(a0)
        self.cos = np.zeros(n)
        self.sin = np.zeros(n)
        self.cos[: len(cos)] = cos
        self.sin[: len(sin)] = sin

    @property
    def omega(self):
        return 2.0 * math.pi / self.period

    @property
    def modes(self):
        return len(self.cos)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        k = np.arange(1, self.modes + 1)
        ang = self.omega * np.multiply.outer(t, k)
        return self.a0 + np.cos(ang) @ self.cos + np.sin(ang) @ self.sin

    def derivative(self):
        k = np.arange(1, self.modes + 1) * self.omega
        return FourierSeries(self.period, 0.0, k * self.sin, -k * self.cos)

    def mean(self):
        return self.a0

    def integral_over_period(self):
        return self.a0 * self.period

    def __add__(self, other):
        if isinstance(other, FourierSeries):
            self._same_period(other)
            n = max(self.modes, other.modes)
            return FourierSeries(
                self.period,
                self.a0 + other.a0,
                _pad(self.cos, n) + _pad(other.cos, n),
                _pad(self.sin, n) + _pad(other.sin, n),
            )
        return FourierSeries(self.period, self.a0 + float(other), self.cos, self.sin)

    __radd__ = __add__

    def __mul__(self, other):
        if not isinstance(other, FourierSeries):
            c = float(other)
            return FourierSeries(self.period, c * self.a0, c * self.cos, c * self.sin)
        self._same_period(other)
        # exact product: sample on enough points to resolve all 2N modes
        n = self.modes + other.modes
        k = 2 * n + 1
        t = self.period * np.arange(k) / k
        return FourierSeries.fit_samples(self.period, self(t) * other(t), n)

    __rmul__ = __mul__

    def trim(self, rel=1e-15):
        """Drop trailing modes that are negligible."""
        amp = np.hypot(self.cos, self.sin)
        scale = max(abs(self.a0), amp.max() if amp.size else 0.0, 1e-300)
        keep = np.nonzero(amp > rel * scale)[0]
        n = int(keep[-1]) + 1 if keep.size else 0
        return FourierSeries(self.period, self.a0, self.cos[:n], self.sin[:n])

    @classmethod
    def fit_samples(cls, period, values, modes=None):
        """Fourier coefficients of equispaced samples on [0, period)."""
        values = np.asarray(values, dtype=float)
        k = values.size
        c = np.fft.rfft(values) / k
        nmax = (k - 1) // 2
        modes = nmax if modes is None else min(modes, nmax)
        return cls(period, c[0].real, 2.0 * c[1 : modes + 1].real, -2.0 * c[1 : modes + 1].imag)

    def _same_period(self, other):
        if abs(self.period - other.period) > 1e-14 * self.period:
            raise ValueError("Fourier series with different periods")

    def to_json(self):
        return {"period": self.period, "a0": self.a0, "cos": self.cos.tolist(), "sin": self.sin.tolist()}

    @classmethod
    def from_json(cls, d):
        return cls(d["period"], d.get("a0", 0.0), d.get("cos", ()), d.get("sin", ()))

    def __repr__(self):
        return f"FourierSeries(period={self.period}, a0={self.a0}, modes={self.modes})"


def _pad(x, n):
    out = np.zeros(n)
    out[: len(x)] = x
    return out


class Profile:
    """Base class: subclasses give ``f(t)``, ``df(t)``, and the natural domain."""

    kind = None

    def f(self, t):
        raise NotImplementedError

    def df(self, t):
        raise NotImplementedError

    def domain(self):
        raise NotImplementedError

    def __call__(self, t):
        return self.f(t)

    def covers(self, interval):
        d = self.domain()
        return d.lo <= interval.lo and interval.hi <= d.hi

    def check_nonconstant(self, interval, k=64):
        vals = self.f(interval.sample(k))
        spread = float(np.max(vals) - np.min(vals))
        if spread <= tl.tol(1e-8) * (1.0 + abs(float(np.mean(vals)))):
            raise ConstantProfile("profile is constant on the interval")


class InverseSquare(Profile):
    """f(t) = coeff / (t - pole)^2 on the half line to the right of ``pole``."""

    kind = "inverse_square"

    def __init__(self, coeff, pole=0.0):
        self.coeff = float(coeff)
        self.pole = float(pole)

    def f(self, t):
        return self.coeff / (np.asarray(t, dtype=float) - self.pole) ** 2

    def df(self, t):
        return -2.0 * self.coeff / (np.asarray(t, dtype=float) - self.pole) ** 3

    def domain(self):
        return Interval(self.pole, math.inf)

    def params(self):
        return {"coeff": self.coeff, "pole": self.pole}


class FourierProfile(Profile):
    """Periodic profile given by a :class:`FourierSeries` on all of R."""

    kind = "fourier"

    def __init__(self, series):
        self.series = series

    @property
    def period(self):
        return self.series.period

    def f(self, t):
        return self.series(t)

    def df(self, t):
        return self.series.derivative()(t)

    def domain(self):
        return Interval.real_line()

    def params(self):
        return self.series.to_json()


class LogPeriodic(Profile):
    """f(t) = F(log(t - pole)) / (t - pole)^2 with F a Fourier series.

    With F constant this is an inverse-square profile. When the period of F is
    log q the relation f(t) = q^2 f(q (t - pole) + pole) holds exactly.
    """

    kind = "log_periodic"

    def __init__(self, series, pole=0.0):
        self.series = series
        self.pole = float(pole)

    def f(self, t):
        x = np.asarray(t, dtype=float) - self.pole
        return self.series(np.log(x)) / x**2

    def df(self, t):
        x = np.asarray(t, dtype=float) - self.pole
        s = np.log(x)
        return (self.series.derivative()(s) - 2.0 * self.series(s)) / x**3

    def domain(self):
        return Interval(self.pole, math.inf)

    def params(self):
        return dict(self.series.to_json(), pole=self.pole)


def profile_from_json(d):
    kind = d["kind"]
    params = d.get("params", {})
    if kind == "inverse_square":
        return InverseSquare(params["coeff"], params.get("pole", 0.0))
    if kind == "fourier":
        return FourierProfile(FourierSeries.from_json(params))
    if kind == "log_periodic":
        return LogPeriodic(FourierSeries.from_json(params), params.get("pole", 0.0))
    raise ValueError(f"unknown profile kind {kind!r}")


def profile_to_json(profile):
    return {"kind": profile.kind, "params": profile.params()}
