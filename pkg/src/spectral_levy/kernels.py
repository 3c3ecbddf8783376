"""Polynomial spectral kernels on [-1, 1] and closed-form Dirichlet terms.

Three kernels isolate the triplet components when integrated against the
log-modulus or argument of a characteristic function:

* ``V``: int v = 0, int (-t^2/2) v = 1  (recovers sigma^2)
* ``U``: int u = -1, int t^2 u = 0      (recovers lambda)
* ``W``: int t w = 1                    (recovers gamma)

Each must vanish like ``|t|^beta`` at the origin. We take the lowest-degree
polynomials that do so: two even monomials for V and U, one odd monomial
for W. Coefficients are solved in exact rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import simpson

KINDS = ("V", "U", "W")

# bandwidth scaling: v^h(t) = h^3 v(ht), u^h(t) = h u(ht), w^h(t) = h^2 w(ht)
_SCALE_POWER = {"V": 3, "U": 1, "W": 2}


@dataclass(frozen=True)
class SpectralKernel:
    kind: str
    terms: tuple[tuple[int, float], ...]
    beta: float
    exact_terms: tuple[tuple[int, Fraction], ...] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kernel kind must be one of {KINDS}")
        terms = tuple((int(e), float(c)) for e, c in self.terms)
        object.__setattr__(self, "terms", terms)
        if any(e < 0 for e, _ in terms):
            raise ValueError("exponents must be nonnegative")
        parity = 1 if self.kind == "W" else 0
        if any(e % 2 != parity for e, _ in terms):
            raise ValueError(f"kind {self.kind} needs {'odd' if parity else 'even'} exponents")

    @property
    def min_exponent(self) -> int:
        return min(e for e, _ in self.terms)

    def __call__(self, t, h=None):
        """Evaluate the kernel; with ``h`` given, evaluate its scaled version."""
        t = np.asarray(t, dtype=float)
        s = t if h is None else h * t
        out = np.zeros_like(s)
        inside = np.abs(s) <= 1.0
        # powers of |s| keep even kernels exactly even and odd ones exactly odd
        mag = np.abs(s[inside])
        out[inside] = sum(c * mag**e for e, c in self.terms)
        if self.kind == "W":
            out[inside] *= np.sign(s[inside])
        if h is not None:
            out *= h ** _SCALE_POWER[self.kind]
        return out

    def to_dict(self):
        return {"kind": self.kind, "beta": self.beta, "terms": [[e, c] for e, c in self.terms]}

    @classmethod
    def from_dict(cls, d) -> "SpectralKernel":
        return cls(d["kind"], tuple((int(e), float(c)) for e, c in d["terms"]), float(d["beta"]))


def _min_even_power(beta) -> int:
    if not beta > 0:
        raise ValueError("beta must be positive")
    return int(math.ceil(beta / 2))


def _even_moment(k: int) -> Fraction:
    """Exact integral of t**k over [-1, 1]."""
    return Fraction(0) if k % 2 else Fraction(2, k + 1)


def _solve_two_term(p: int, weights: tuple[int, int], targets: tuple[int, int]):
    # unknowns a, b for a t^{2p} + b t^{2p+2}; row i imposes
    # int t^{weights[i]} (a t^{2p} + b t^{2p+2}) dt = targets[i]
    e0, e1 = 2 * p, 2 * p + 2
    m = [[_even_moment(w + e0), _even_moment(w + e1)] for w in weights]
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    r0, r1 = Fraction(targets[0]), Fraction(targets[1])
    a = (r0 * m[1][1] - m[0][1] * r1) / det
    b = (m[0][0] * r1 - m[1][0] * r0) / det
    return ((e0, a), (e1, b))


def _from_exact(kind, exact, beta):
    return SpectralKernel(kind, tuple((e, float(c)) for e, c in exact), float(beta), tuple(exact))


def build_kernel_v(beta) -> SpectralKernel:
    p = _min_even_power(beta)
    # int v = 0 and int (-t^2/2) v = 1  <=>  int t^2 v = -2
    exact = _solve_two_term(p, (0, 2), (0, -2))
    return _from_exact("V", exact, beta)


def build_kernel_u(beta) -> SpectralKernel:
    p = _min_even_power(beta)
    exact = _solve_two_term(p, (0, 2), (-1, 0))
    return _from_exact("U", exact, beta)


def build_kernel_w(beta) -> SpectralKernel:
    # Same p as the even kernels, so beta <= 2 gives the cubic (5/2) t^3.
    p = _min_even_power(beta)
    e = 2 * p + 1
    return _from_exact("W", ((e, Fraction(2 * p + 3, 2)),), beta)


def build_kernels(beta):
    return build_kernel_v(beta), build_kernel_u(beta), build_kernel_w(beta)


# ---------------------------------------------------------------------------
# moment verification

# (weight exponent, target, factor): factor * int t^power k(t) dt == target
MOMENT_CONDITIONS = {
    "V": ((0, 0.0, 1.0), (2, 1.0, -0.5)),
    "U": ((0, -1.0, 1.0), (2, 0.0, 1.0)),
    "W": ((1, 1.0, 1.0),),
}


@dataclass
class MomentReport:
    kind: str
    residuals: list[float]
    min_exponent_ok: bool
    tol: float = 1e-10

    @property
    def passed(self) -> bool:
        return self.min_exponent_ok and all(r < self.tol for r in self.residuals)

    def to_dict(self):
        return {
            "kind": self.kind,
            "residuals": self.residuals,
            "min_exponent_ok": self.min_exponent_ok,
            "passed": self.passed,
        }


def verify_moments(kernel: SpectralKernel, points=10001, tol=1e-10) -> MomentReport:
    """Check the kind's moment conditions by composite Simpson on [-1, 1]."""
    t = np.linspace(-1.0, 1.0, points)
    k = kernel(t)
    residuals = []
    for power, target, factor in MOMENT_CONDITIONS[kernel.kind]:
        value = factor * simpson(t**power * k, x=t)
        residuals.append(abs(value - target))
    return MomentReport(kernel.kind, residuals, kernel.min_exponent >= kernel.beta, tol)


# ---------------------------------------------------------------------------
# Dirichlet terms

_SERIES_Z = 0.5
_SERIES_TERMS = 30


def _dirichlet_series(order, z):
    # (1/2) int_{-1}^{1} s^order e^{-isz} ds, expanded in powers of z
    total = np.zeros_like(z, dtype=complex)
    for k in range(_SERIES_TERMS):
        if (order + k) % 2:
            continue
        total += (-1j * z) ** k / math.factorial(k) / (order + k + 1)
    return total


def _dirichlet_closed(order, z):
    s, c = np.sin(z), np.cos(z)
    if order == 0:
        return (s / z).astype(complex)
    if order == 1:
        return 1j * (z * c - s) / z**2
    return (z * z * s + 2 * z * c - 2 * s) / z**3 + 0j


def dirichlet_term(order: int, x, cutoff: float):
    """``(1/2pi) * int_{-T}^{T} exp(-itx) t**order dt`` in closed form.

    Order 0 and 2 are real, order 1 is purely imaginary; the result is always
    complex. Near ``x*T = 0`` a power series replaces the closed form.
    """
    if order not in (0, 1, 2):
        raise ValueError("order must be 0, 1 or 2")
    if not cutoff > 0:
        raise ValueError("cutoff must be positive")
    x = np.asarray(x, dtype=float)
    z = x * cutoff
    small = np.abs(z) < _SERIES_Z
    g = np.empty(z.shape, dtype=complex)
    g[small] = _dirichlet_series(order, z[small])
    g[~small] = _dirichlet_closed(order, z[~small])
    out = cutoff ** (order + 1) / math.pi * g
    return out[()] if out.ndim == 0 else out
