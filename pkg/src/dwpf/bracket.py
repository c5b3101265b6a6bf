"""Bracket arithmetic for trigonometric vertex models.

The bracket of a complex number is ``[x] = sinh(lam*x)`` for a fixed
crossing parameter ``lam``.  Everything downstream -- vertex weights,
determinant prefactors, the kernel ``phi(x) = 1/([x][x+1])`` and its
derivatives -- is built from brackets, so this module also fixes the
floating representation: plain complex doubles, or mpmath arbitrary
precision when cancellation gets dangerous.

Derivatives of ``phi`` are obtained from truncated Taylor series (jets):
the jet of ``sinh(lam*(x+t))`` in ``t`` is known in closed form, jets
multiply and invert by exact recurrences, and the n-th derivative is
``n!`` times the n-th jet coefficient.  No finite differences, no
symbolic expression swell.
"""

from __future__ import annotations

import cmath
import math
from contextlib import nullcontext
from dataclasses import dataclass
from functools import lru_cache

import mpmath

from .errors import SingularArgument

PRECISIONS = ("complex128", "extended")

# Working digits of the extended mode.  50 digits leaves >30 guard digits
# over a complex-double target, enough for every matrix size this package
# builds (kL <= 12).
EXTENDED_DPS = 50


@dataclass(frozen=True)
class BracketParams:
    """Crossing parameter and numeric policy for bracket arithmetic.

    lam            -- crossing parameter, must be nonzero
    precision      -- "complex128" or "extended" (mpmath at EXTENDED_DPS)
    genericity_tol -- relative threshold below which a bracket counts as zero
    """

    lam: complex = 1.0
    precision: str = "complex128"
    genericity_tol: float = 1e-10

    def __post_init__(self):
        object.__setattr__(self, "lam", complex(self.lam))
        if self.lam == 0:
            raise ValueError("crossing parameter lam must be nonzero")
        if self.precision not in PRECISIONS:
            raise ValueError(f"precision must be one of {PRECISIONS}")
        if not self.genericity_tol > 0:
            raise ValueError("genericity_tol must be positive")

    @property
    def extended(self) -> bool:
        return self.precision == "extended"

    def with_precision(self, precision: str) -> "BracketParams":
        return BracketParams(self.lam, precision, self.genericity_tol)


def precision_scope(p: BracketParams):
    """Context manager activating the working precision of ``p``."""
    return mpmath.mp.workdps(EXTENDED_DPS) if p.extended else nullcontext()


def promote(p: BracketParams, z):
    """Coerce one number to the working scalar type of ``p``.

    In extended mode every rapidity must be promoted before forming
    differences: subtracting nearly equal values in double precision first
    would scatter the arguments off the rapidity manifold and destroy the
    cancellations that near-confluent determinants rely on.
    """
    return mpmath.mpc(z) if p.extended else complex(z)


def bracket(p: BracketParams, x) -> complex:
    """The bracket [x] = sinh(lam*x).  Entire function, no failure modes."""
    with precision_scope(p):
        if p.extended:
            return mpmath.sinh(mpmath.mpc(p.lam) * x)
        return cmath.sinh(p.lam * complex(x))


def _cosh(p: BracketParams, x):
    with precision_scope(p):
        if p.extended:
            return mpmath.cosh(mpmath.mpc(p.lam) * x)
        return cmath.cosh(p.lam * complex(x))


def bracket_falling(p: BracketParams, x, m: int) -> complex:
    """Falling bracket product [x]_m = [x][x-1]...[x-m+1]; [x]_0 = 1."""
    if m < 0:
        raise ValueError("falling-product length m must be >= 0")
    with precision_scope(p):
        out = mpmath.mpc(1) if p.extended else complex(1.0)
        for t in range(m):
            out = out * bracket(p, x - t)
        return out


def is_singular_bracket(p: BracketParams, x) -> bool:
    """True when [x] vanishes within the genericity tolerance.

    Near a zero of sinh, |sinh| ~ distance * |cosh| with |cosh| = 1 at the
    zero, so the test is relative to max(1, |cosh|).
    """
    with precision_scope(p):
        scale = max(1.0, float(abs(_cosh(p, x))))
        return float(abs(bracket(p, x))) <= p.genericity_tol * scale


def phi(p: BracketParams, x) -> complex:
    """The kernel phi(x) = 1 / ([x] [x+1])."""
    _require_phi_regular(p, x)
    with precision_scope(p):
        x = promote(p, x)
        return 1 / (bracket(p, x) * bracket(p, x + 1))


def _require_phi_regular(p: BracketParams, x):
    for shift in (0, 1):
        if is_singular_bracket(p, x + shift):
            raise SingularArgument(
                f"phi undefined: bracket [{x} + {shift}] vanishes within tolerance"
            )


@dataclass(frozen=True)
class Jet:
    """Truncated Taylor series sum_n coeffs[n] * t**n about t = 0.

    Arithmetic requires equal orders and preserves the order exactly;
    nothing is silently truncated below the requested N.
    """

    coeffs: tuple

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def _check(self, other: "Jet"):
        if self.order != other.order:
            raise ValueError("jet arithmetic requires equal orders")

    def __add__(self, other: "Jet") -> "Jet":
        self._check(other)
        return Jet(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Jet") -> "Jet":
        self._check(other)
        return Jet(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: "Jet") -> "Jet":
        self._check(other)
        n = self.order
        out = []
        for total in range(n + 1):
            acc = self.coeffs[0] * other.coeffs[total]
            for m in range(1, total + 1):
                acc = acc + self.coeffs[m] * other.coeffs[total - m]
            out.append(acc)
        return Jet(tuple(out))

    def scale(self, factor) -> "Jet":
        return Jet(tuple(factor * c for c in self.coeffs))

    def reciprocal(self) -> "Jet":
        """Power-series inverse; requires a nonzero constant term."""
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("jet has zero constant term")
        inv = [1 / c0]
        for n in range(1, self.order + 1):
            acc = self.coeffs[1] * inv[n - 1]
            for m in range(2, n + 1):
                acc = acc + self.coeffs[m] * inv[n - m]
            inv.append(-acc / c0)
        return Jet(tuple(inv))


def bracket_jet(p: BracketParams, x, order: int) -> Jet:
    """Jet of t -> [x + t] to the given order.

    sinh(lam*(x+t)) = sinh(lam*x)*cosh(lam*t) + cosh(lam*x)*sinh(lam*t),
    so coefficient n is lam^n/n! times sinh or cosh of lam*x by parity.
    """
    if order < 0:
        raise ValueError("jet order must be >= 0")
    with precision_scope(p):
        s = bracket(p, x)
        c = _cosh(p, x)
        lam = mpmath.mpc(p.lam) if p.extended else p.lam
        coeffs = []
        lam_pow = 1
        for n in range(order + 1):
            base = s if n % 2 == 0 else c
            coeffs.append(base * lam_pow / math.factorial(n))
            lam_pow = lam_pow * lam
        return Jet(tuple(coeffs))


def phi_jet(p: BracketParams, x, order: int) -> Jet:
    """Jet of t -> phi(x + t)."""
    _require_phi_regular(p, x)
    with precision_scope(p):
        x = promote(p, x)
        prod = bracket_jet(p, x, order) * bracket_jet(p, x + 1, order)
        return prod.reciprocal()


def phi_derivatives(p: BracketParams, x, n_max: int) -> list:
    """[phi(x), phi'(x), ..., phi^(n_max)(x)] via jet arithmetic."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    jet = phi_jet(p, x, n_max)
    with precision_scope(p):
        return [jet.coeffs[n] * math.factorial(n) for n in range(n_max + 1)]


@lru_cache(maxsize=None)
def _int_factorial(n: int) -> int:
    return math.factorial(n)
