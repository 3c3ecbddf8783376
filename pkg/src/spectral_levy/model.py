"""Process law for finite-activity Levy processes.

A triplet ``(gamma, sigma2, rho)`` with ``rho = lam * f`` fixes the law of the
unit increment through its characteristic function

    phi_X(t) = exp(i*gamma*t - sigma2*t**2/2 + lam*(phi_f(t) - 1)).

Jump densities are restricted to families with closed-form characteristic
functions so that every estimator can be checked against exact values.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np
from scipy import integrate

FAMILIES = ("gaussian", "laplace", "bilateral_exponential", "uniform_sym")

_PARAM_NAMES = {
    "gaussian": ("mean", "sd"),
    "laplace": ("location", "scale"),
    "bilateral_exponential": ("rate",),
    "uniform_sym": ("halfwidth",),
}


@dataclass(frozen=True)
class JumpDensity:
    """Jump-size density ``f`` from one of the shipped families.

    Use the constructors ``gaussian``, ``laplace``, ``bilateral_exponential``
    and ``uniform_sym`` rather than building instances by hand.
    """

    family: str
    params: tuple[float, ...]

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown jump family {self.family!r}")
        names = _PARAM_NAMES[self.family]
        if len(self.params) != len(names):
            raise ValueError(f"{self.family} takes parameters {names}")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        # every family but the Gaussian mean/Laplace location needs a positive scale
        if any(p <= 0 for p in self.params[-1:]):
            raise ValueError(f"{names[-1]} must be positive")

    @classmethod
    def gaussian(cls, mean=0.0, sd=1.0):
        return cls("gaussian", (mean, sd))

    @classmethod
    def laplace(cls, location=0.0, scale=1.0):
        return cls("laplace", (location, scale))

    @classmethod
    def bilateral_exponential(cls, rate=1.0):
        return cls("bilateral_exponential", (rate,))

    @classmethod
    def uniform_sym(cls, halfwidth=1.0):
        return cls("uniform_sym", (halfwidth,))

    @property
    def is_symmetric(self) -> bool:
        if self.family in ("gaussian", "laplace"):
            return self.params[0] == 0.0
        return True

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        fam, p = self.family, self.params
        if fam == "gaussian":
            mu, sd = p
            return np.exp(-0.5 * ((x - mu) / sd) ** 2) / (sd * math.sqrt(2 * math.pi))
        if fam == "laplace":
            mu, b = p
            return np.exp(-np.abs(x - mu) / b) / (2 * b)
        if fam == "bilateral_exponential":
            (a,) = p
            return 0.5 * a * np.exp(-a * np.abs(x))
        (w,) = p
        return np.where(np.abs(x) <= w, 0.5 / w, 0.0)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        fam, p = self.family, self.params
        if fam == "gaussian":
            from scipy.special import ndtr

            return ndtr((x - p[0]) / p[1])
        if fam in ("laplace", "bilateral_exponential"):
            mu, b = (p[0], p[1]) if fam == "laplace" else (0.0, 1.0 / p[0])
            z = (x - mu) / b
            return np.where(z < 0, 0.5 * np.exp(np.minimum(z, 0)), 1 - 0.5 * np.exp(-np.maximum(z, 0)))
        (w,) = p
        return np.clip((x + w) / (2 * w), 0.0, 1.0)

    def cf(self, t):
        """Closed-form characteristic function ``phi_f(t)``."""
        t = np.asarray(t, dtype=float)
        fam, p = self.family, self.params
        if fam == "gaussian":
            mu, sd = p
            return np.exp(1j * mu * t - 0.5 * (sd * t) ** 2)
        if fam == "laplace":
            mu, b = p
            return np.exp(1j * mu * t) / (1 + (b * t) ** 2)
        if fam == "bilateral_exponential":
            (a,) = p
            return (a * a / (a * a + t * t)).astype(complex)
        (w,) = p
        return np.sinc(w * t / np.pi).astype(complex)

    def second_moment(self) -> float:
        fam, p = self.family, self.params
        if fam == "gaussian":
            return p[0] ** 2 + p[1] ** 2
        if fam == "laplace":
            return p[0] ** 2 + 2 * p[1] ** 2
        if fam == "bilateral_exponential":
            return 2 / p[0] ** 2
        return p[0] ** 2 / 3

    def to_dict(self) -> dict[str, Any]:
        return {"family": self.family, "params": dict(zip(_PARAM_NAMES[self.family], self.params))}

    @classmethod
    def from_dict(cls, d) -> "JumpDensity":
        fam = d["family"]
        if fam not in FAMILIES:
            raise ValueError(f"unknown jump family {fam!r}")
        params = d.get("params", {})
        if isinstance(params, dict):
            params = tuple(params[k] for k in _PARAM_NAMES[fam])
        return cls(fam, tuple(params))


@dataclass(frozen=True)
class LevyTriplet:
    gamma: float
    sigma2: float
    lam: float
    jump_density: JumpDensity = field(default_factory=JumpDensity.gaussian)

    def __post_init__(self):
        if self.sigma2 < 0:
            raise ValueError("sigma2 must be nonnegative")
        if self.lam < 0:
            raise ValueError("lambda must be nonnegative")

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)

    def to_dict(self) -> dict[str, Any]:
        return {
            "gamma": self.gamma,
            "sigma2": self.sigma2,
            "lambda": self.lam,
            "jump_density": self.jump_density.to_dict(),
        }

    @classmethod
    def from_dict(cls, d) -> "LevyTriplet":
        return cls(
            gamma=float(d["gamma"]),
            sigma2=float(d["sigma2"]),
            lam=float(d["lambda"]),
            jump_density=JumpDensity.from_dict(d["jump_density"]),
        )


@dataclass(frozen=True)
class ClassParams:
    """Bounds describing the nonparametric class the theory works over.

    ``beta`` is the smoothness index, ``L`` bounds the weighted L1 norm of
    ``phi_f``, ``Lambda`` the intensity, ``K`` the jump second moment,
    ``Sigma`` the volatility, ``Gamma`` the absolute drift, and ``C`` the
    weighted L2 norm of ``phi_f``.
    """

    beta: float
    L: float
    Lambda: float
    K: float
    Sigma: float
    Gamma: float
    C: float

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not value > 0:
                raise ValueError(f"class parameter {name} must be strictly positive")

    def to_dict(self) -> dict[str, float]:
        return asdict(self)

    @classmethod
    def from_dict(cls, d) -> "ClassParams":
        return cls(**{k: float(d[k]) for k in ("beta", "L", "Lambda", "K", "Sigma", "Gamma", "C")})


def char_fn_f(t, density: JumpDensity):
    return density.cf(t)


def char_fn_X(t, triplet: LevyTriplet):
    """Characteristic function of a unit increment (Levy-Khintchine)."""
    t = np.asarray(t, dtype=float)
    exponent = 1j * triplet.gamma * t - 0.5 * triplet.sigma2 * t * t
    if triplet.lam != 0:
        exponent = exponent + triplet.lam * (triplet.jump_density.cf(t) - 1)
    return np.exp(exponent)


def log_modulus_X(t, triplet: LevyTriplet):
    """Exact ``log|phi_X(t)|``; avoids taking the log of a rounded modulus."""
    t = np.asarray(t, dtype=float)
    re_f = triplet.jump_density.cf(t).real
    return -triplet.lam + triplet.lam * re_f - 0.5 * triplet.sigma2 * t * t


def arg_X(t, triplet: LevyTriplet):
    """Distinguished argument ``gamma*t + lam*Im phi_f(t)``."""
    t = np.asarray(t, dtype=float)
    return triplet.gamma * t + triplet.lam * triplet.jump_density.cf(t).imag


def levy_density(x, triplet: LevyTriplet):
    return triplet.lam * triplet.jump_density.pdf(x)


# ---------------------------------------------------------------------------
# class membership


@dataclass
class ConditionResult:
    name: str
    value: float
    bound: float
    passed: bool
    diverged: bool = False


@dataclass
class MembershipReport:
    conditions: list[ConditionResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    @property
    def diverged(self) -> bool:
        return any(c.diverged for c in self.conditions)

    def __getitem__(self, name) -> ConditionResult:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self):
        return {
            "passed": self.passed,
            "conditions": [asdict(c) for c in self.conditions],
        }


def _tail_integral(g, t_start=4.0, t_cap=2.0**40, tol=1e-14):
    """Integrate an even-symmetric, nonnegative integrand ``g`` over the line.

    The range ``[0, T]`` is doubled until either ``g`` has dropped below
    ``tol`` and the last doubling added a relative amount below 1e-10, or the
    per-doubling increments shrink geometrically (power-law tail) and the
    geometric remainder is below a relative 1e-10, in which case that
    remainder is added. Increments that stop shrinking mean divergence.
    Returns ``(value, converged)``.
    """
    total, _ = integrate.quad(g, 0.0, t_start, limit=400, epsabs=1e-13, epsrel=1e-12)
    T = t_start
    pieces = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        while T < t_cap:
            piece, _ = integrate.quad(g, T, 2 * T, limit=1000, epsabs=1e-13, epsrel=1e-12)
            total += piece
            pieces.append(piece)
            T *= 2
            if max(abs(g(T)), abs(g(0.75 * T))) < tol and abs(piece) <= 1e-10 * total:
                return 2 * total, True
            if len(pieces) >= 4:
                ratios = [b / a if a > 0 else 1.0 for a, b in zip(pieces[-4:], pieces[-3:])]
                r = ratios[-1]
                if max(ratios) < 0.9 and max(ratios) - min(ratios) < 1e-4:
                    return 2 * (total + piece * r / (1 - r)), True
                elif len(pieces) >= 12 and min(ratios) > 0.95:
                    break
    return 2 * total, False


def check_class_membership(triplet: LevyTriplet, params: ClassParams) -> MembershipReport:
    """Compare a triplet against the class bounds, one condition at a time.

    The frequency-domain integrals are improper; their truncation point is
    doubled until the integrand is negligible. An integral that never
    settles is reported as diverged (and failed).
    """
    f = triplet.jump_density
    beta = params.beta

    def weighted_l1(t):
        return abs(t) ** beta * abs(complex(f.cf(t)))

    def weighted_l2(t):
        return abs(t) ** (2 * beta) * abs(complex(f.cf(t))) ** 2

    l1, l1_ok = _tail_integral(weighted_l1)
    l2, l2_ok = _tail_integral(weighted_l2)

    # second moment by quadrature, split at the family's center
    center = f.params[0] if f.family in ("gaussian", "laplace") else 0.0
    m2 = 0.0
    if f.family == "uniform_sym":
        w = f.params[0]
        m2 = integrate.quad(lambda x: x * x * float(f.pdf(x)), -w, w)[0]
    else:
        for a, b in ((-np.inf, center), (center, np.inf)):
            m2 += integrate.quad(lambda x: x * x * float(f.pdf(x)), a, b, limit=200)[0]

    conds = [
        ConditionResult("L", l1, params.L, l1_ok and l1 <= params.L, diverged=not l1_ok),
        ConditionResult("C", l2, params.C, l2_ok and l2 <= params.C, diverged=not l2_ok),
        ConditionResult("K", m2, params.K, m2 <= params.K),
        ConditionResult("Lambda", triplet.lam, params.Lambda, 0 < triplet.lam <= params.Lambda),
        ConditionResult("Sigma", triplet.sigma, params.Sigma, 0 < triplet.sigma <= params.Sigma),
        ConditionResult("Gamma", abs(triplet.gamma), params.Gamma, abs(triplet.gamma) <= params.Gamma),
    ]
    return MembershipReport(conds)
