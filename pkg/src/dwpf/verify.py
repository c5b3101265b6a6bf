"""Orchestrated cross-checks: formula-vs-oracle equivalence sweeps, the
spin-1 corner recursions, the Laurent-degree property, and homogeneous
limit comparisons, all reported in a machine-readable form.

Every suite draws rapidities from a fixed box (real parts in [-1, 1],
imaginary parts in [-1/2, 1/2]), rejection-sampled against the genericity
tolerance, with the crossing parameter cycling through real, complex and
pure-imaginary presets.  Reports are deterministic given (seed, spec,
precision policy).
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass

import numpy as np

from .bracket import BracketParams
from .determinant import _require_generic, fused_pf, homogeneous_pf, ik_pf, \
    semi_homogeneous_pf, spin1_pf
from .enumeration import brute_force_pf
from .errors import DegenerateRapidities, GenericityExhausted, SingularArgument
from .model import V1_ALIGNED, V1_CPLUS, V1_OPPOSED, c_plus_weight, \
    spin1_closed_form

LAMBDA_PRESETS = (1.0 + 0j, 0.7 + 0.2j, 1j * math.pi / 5)
ABS_FLOOR = 1e-14
REJECT_LIMIT = 100

# Richardson extrapolation oracle: cluster separations and the loosened
# tolerance that lets the formulas accept nearly coincident rapidities.
_EXTRAP_EPS = (1e-5, 1e-6)
_EXTRAP_TOL = 1e-40


@dataclass(frozen=True)
class CheckSpec:
    """What to check: (k, L) combinations, sample count, seed, tolerance."""

    name: str
    ks: tuple = (1,)
    Ls: tuple = (2,)
    draws: int = 5
    seed: int = 0
    tolerance: float = 1e-9
    precision: str = "complex128"

    def __post_init__(self):
        object.__setattr__(self, "ks", _as_tuple(self.ks))
        object.__setattr__(self, "Ls", _as_tuple(self.Ls))
        if self.draws < 1:
            raise ValueError("draws must be >= 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")


def _as_tuple(v):
    return (v,) if isinstance(v, int) else tuple(v)


@dataclass(frozen=True)
class CheckCase:
    inputs: dict
    lhs: complex
    rhs: complex
    rel_err: float
    cond: float
    passed: bool


@dataclass(frozen=True)
class CheckReport:
    spec: CheckSpec
    cases: tuple
    verdict: bool
    elapsed_ms: float

    def to_dict(self):
        return {
            "name": self.spec.name,
            "seed": self.spec.seed,
            "cases": [{
                "inputs": c.inputs,
                "lhs": _pair(c.lhs),
                "rhs": _pair(c.rhs),
                "rel_err": c.rel_err,
                "cond": c.cond,
            } for c in self.cases],
            "verdict": "pass" if self.verdict else "fail",
            "elapsed_ms": self.elapsed_ms,
        }


def _pair(z):
    z = complex(z)
    return [z.real, z.imag]


def _case(inputs, lhs, rhs, cond, tol):
    lhs, rhs = complex(lhs), complex(rhs)
    denom = max(abs(lhs), abs(rhs))
    diff = abs(lhs - rhs)
    rel = diff / denom if denom > 0 else (0.0 if diff == 0 else math.inf)
    passed = diff <= max(tol * denom, ABS_FLOOR)
    return CheckCase(inputs, lhs, rhs, rel, float(cond), passed)


def _zero_case(inputs, magnitude, cond, tol):
    """A quantity that must vanish; it is already normalized by its scale."""
    mag = abs(complex(magnitude))
    return CheckCase(inputs, complex(mag), 0j, mag, float(cond), mag <= tol)


def _finish(spec, cases, t0):
    verdict = all(c.passed for c in cases)
    return CheckReport(spec, tuple(cases), verdict,
                       (time.perf_counter() - t0) * 1e3)


def _preset_params(spec, counter):
    lam = LAMBDA_PRESETS[counter % len(LAMBDA_PRESETS)]
    return BracketParams(lam=lam, precision=spec.precision)


def _draw_box(rng):
    return complex(rng.uniform(-1.0, 1.0), rng.uniform(-0.5, 0.5))


def _draw_generic(rng, p, k, L):
    """Rapidity sets accepted by the k-dependent genericity test."""
    for _ in range(REJECT_LIMIT):
        xs = [_draw_box(rng) for _ in range(L)]
        ys = [_draw_box(rng) for _ in range(L)]
        try:
            _require_generic(p, k, xs, ys)
        except DegenerateRapidities:
            continue
        return xs, ys
    raise GenericityExhausted(
        f"{REJECT_LIMIT} consecutive draws rejected at k={k}, L={L}")


METHOD_NAMES = ("ik", "fused", "spin1", "brute_force", "c_plus")


def _method_value(name, p, k, xs, ys):
    if name == "ik":
        if k != 1:
            raise ValueError("method 'ik' requires k = 1")
        r = ik_pf(p, xs, ys)
        return r.value, r.condition_estimate
    if name == "fused":
        r = fused_pf(p, k, xs, ys)
        return r.value, r.condition_estimate
    if name == "spin1":
        if k != 2:
            raise ValueError("method 'spin1' requires k = 2")
        r = spin1_pf(p, xs, ys)
        return r.value, r.condition_estimate
    if name == "brute_force":
        return brute_force_pf(p, k, len(xs), xs, ys), 1.0
    if name == "c_plus":
        return complex(c_plus_weight(p, k)), 1.0
    raise ValueError(f"unknown method {name!r}; pick one of {METHOD_NAMES}")


def run_equivalence(spec: CheckSpec, lhs: str = "fused",
                    rhs: str = "brute_force") -> CheckReport:
    """Evaluate two partition-function methods on shared random draws."""
    t0 = time.perf_counter()
    rng = random.Random(spec.seed)
    cases = []
    for k in spec.ks:
        for L in spec.Ls:
            for _ in range(spec.draws):
                p = _preset_params(spec, len(cases))
                xs, ys = _draw_generic(rng, p, k, L)
                lv, lc = _method_value(lhs, p, k, xs, ys)
                rv, rc = _method_value(rhs, p, k, xs, ys)
                inputs = {"k": k, "L": L, "lambda": _pair(p.lam),
                          "xs": [_pair(x) for x in xs],
                          "ys": [_pair(y) for y in ys],
                          "lhs_method": lhs, "rhs_method": rhs}
                cases.append(_case(inputs, lv, rv, max(lc, rc), spec.tolerance))
    return _finish(spec, cases, t0)


def _reduced(seq, skip):
    return [v for t, v in enumerate(seq) if t != skip]


def _recursion_sides(p, L, xs, ys, i, j, kind):
    """LHS/RHS of one corner recursion at x_i = y_j + shift.

    kind "opposed": shift 1; the frozen row and column carry weights of the
    horizontally-opposed vertex at every other column/row index.
    kind "aligned": shift 0; same with the fully aligned vertex.
    The factor indices follow the lattice geometry (the frozen corner's own
    row and column are excluded), which the enumeration oracle confirms.
    """
    closed = V1_OPPOSED if kind == "opposed" else V1_ALIGNED
    shift = 1 if kind == "opposed" else 0
    xs = list(xs)
    xs[i] = ys[j] + shift
    lhs = brute_force_pf(p, 2, L, xs, ys)
    reduced = spin1_pf(p, _reduced(xs, i), _reduced(ys, j))
    rhs = spin1_closed_form(p, V1_CPLUS, 0)
    for t in range(L):
        if t != j:
            rhs *= spin1_closed_form(p, closed, -xs[i] + ys[t])
        if t != i:
            rhs *= spin1_closed_form(p, closed, -xs[t] + ys[j])
    rhs *= reduced.value
    inputs = {"k": 2, "L": L, "lambda": _pair(p.lam), "kind": kind,
              "i": i, "j": j,
              "xs": [_pair(x) for x in xs], "ys": [_pair(y) for y in ys]}
    return inputs, lhs, rhs, reduced.condition_estimate


def run_recursion_suite(spec: CheckSpec) -> CheckReport:
    """Both spin-1 corner recursions, at the base corners and at random
    permuted indices (the symmetry transfers the relation to any i, j)."""
    if any(k != 2 for k in spec.ks):
        raise ValueError("the corner recursions are stated for k = 2 only")
    if any(L < 2 for L in spec.Ls):
        raise ValueError("recursions need L >= 2")
    t0 = time.perf_counter()
    rng = random.Random(spec.seed)
    cases = []
    for L in spec.Ls:
        for _ in range(spec.draws):
            p = _preset_params(spec, len(cases))
            corners = [("opposed", 0, 0), ("aligned", 0, L - 1),
                       ("opposed", rng.randrange(L), rng.randrange(L)),
                       ("aligned", rng.randrange(L), rng.randrange(L))]
            for kind, i, j in corners:
                for _ in range(REJECT_LIMIT):
                    xs, ys = _draw_generic(rng, p, 2, L)
                    try:
                        inputs, lhs, rhs, cond = _recursion_sides(
                            p, L, xs, ys, i, j, kind)
                    except (DegenerateRapidities, SingularArgument):
                        continue
                    break
                else:
                    raise GenericityExhausted("recursion draw kept degenerating")
                cases.append(_case(inputs, lhs, rhs, cond, spec.tolerance))
    return _finish(spec, cases, t0)


def _fit_nodes(rng, p, degree, xs_rest, ys):
    """Laurent sample nodes: w = exp(lam*x1) on a scaled root-of-unity grid,
    which keeps the Vandermonde solve unitary up to scaling."""
    n = 2 * degree + 2  # fit nodes plus one held-out node
    for _ in range(REJECT_LIMIT):
        r0 = rng.uniform(0.05, 0.35)
        nodes = [(r0 + 2j * math.pi * q / n) / p.lam for q in range(n)]
        try:
            for x1 in nodes:
                _require_generic(p, 2, [x1] + list(xs_rest), ys)
        except DegenerateRapidities:
            continue
        return nodes
    raise GenericityExhausted("no generic Laurent node set found")


def _laurent_fit(p, nodes, values, degree):
    w = np.array([np.exp(complex(p.lam) * complex(x)) for x in nodes])
    powers = np.arange(-degree, degree + 1)
    v = w[:, None] ** powers[None, :]
    return powers, np.linalg.solve(v, np.array(values))


def run_degree_check(spec: CheckSpec) -> CheckReport:
    """The partition function is a Laurent polynomial of degree 2L-2 in
    exp(lam*x1): an exact-degree fit predicts a held-out sample, and a
    generous degree-2L fit has vanishing top coefficients."""
    if any(k != 2 for k in spec.ks):
        raise ValueError("the degree property is checked for k = 2 only")
    t0 = time.perf_counter()
    rng = random.Random(spec.seed)
    cases = []
    for L in spec.Ls:
        for _ in range(spec.draws):
            p = _preset_params(spec, len(cases))
            xs, ys = _draw_generic(rng, p, 2, L)
            degree = 2 * L - 2

            def sample(x1, q=p):
                return spin1_pf(q, [x1] + xs[1:], ys).value

            inputs = {"k": 2, "L": L, "lambda": _pair(p.lam), "degree": degree,
                      "xs": [_pair(x) for x in xs],
                      "ys": [_pair(y) for y in ys]}
            # held-out prediction at the exact degree
            nodes = _fit_nodes(rng, p, degree, xs[1:], ys)
            values = [sample(x1) for x1 in nodes]
            powers, coeffs = _laurent_fit(p, nodes[:-1], values[:-1], degree)
            w_out = np.exp(complex(p.lam) * complex(nodes[-1]))
            predicted = complex(np.sum(coeffs * w_out ** powers))
            cases.append(_case({**inputs, "kind": "held_out"},
                               predicted, values[-1], 1.0, spec.tolerance))
            # top coefficients of a degree-2L fit must cancel
            wide = 2 * L
            nodes2 = _fit_nodes(rng, p, wide, xs[1:], ys)
            values2 = [sample(x1) for x1 in nodes2]
            powers2, coeffs2 = _laurent_fit(p, nodes2[:-1], values2[:-1], wide)
            scale = float(np.max(np.abs(coeffs2)))
            top = float(max(abs(coeffs2[np.abs(powers2) >= wide - 1])))
            cases.append(_zero_case({**inputs, "kind": "top_coefficients"},
                                    top / scale if scale else 0.0, 1.0,
                                    spec.tolerance))
    return _finish(spec, cases, t0)


def _richardson(f):
    e1, e2 = _EXTRAP_EPS
    return (e1 / e2 * f(e2) - f(e1)) / (e1 / e2 - 1)


def run_homogeneous_suite(spec: CheckSpec,
                          modes=("brute", "extrapolated", "extrapolated_full")
                          ) -> CheckReport:
    """Homogeneous-limit checks.

    brute              -- fully homogeneous formula against equal-rapidity
                          exhaustive enumeration.
    extrapolated       -- semi-homogeneous formula against Richardson
                          extrapolation of the inhomogeneous determinant
                          with a collapsing x-cluster.
    extrapolated_full  -- fully homogeneous formula against Richardson
                          extrapolation of the semi-homogeneous one with a
                          collapsing y-cluster.
    """
    if any(k > 3 for k in spec.ks) or any(L > 3 for L in spec.Ls):
        raise ValueError("homogeneous checks are desk-scale: k <= 3, L <= 3")
    t0 = time.perf_counter()
    rng = random.Random(spec.seed)
    cases = []
    for k in spec.ks:
        for L in spec.Ls:
            for _ in range(spec.draws):
                p = _preset_params(spec, len(cases))
                oracle = BracketParams(p.lam, "extended", _EXTRAP_TOL)
                xs, ys = _draw_generic(rng, p, k, L)
                x, y = xs[0], ys[0]
                u = -x + y
                base = {"k": k, "L": L, "lambda": _pair(p.lam)}
                if "brute" in modes:
                    hom = homogeneous_pf(p, k, L, u)
                    bf = brute_force_pf(p, k, L, [x] * L, [y] * L)
                    cases.append(_case(
                        {**base, "kind": "hom_vs_brute", "u": _pair(u)},
                        hom.value, bf, hom.condition_estimate, spec.tolerance))
                if "extrapolated" in modes:
                    semi = semi_homogeneous_pf(p, k, x, ys)

                    def clustered(eps, kk=k):
                        pts = [x + i * eps for i in range(L)]
                        if kk == 1:
                            return ik_pf(oracle, pts, ys).value
                        return fused_pf(oracle, kk, pts, ys).value

                    cases.append(_case(
                        {**base, "kind": "semi_vs_extrapolated",
                         "x": _pair(x), "ys": [_pair(v) for v in ys],
                         "eps": list(_EXTRAP_EPS)},
                        semi.value, _richardson(clustered),
                        semi.condition_estimate, spec.tolerance))
                if "extrapolated_full" in modes:
                    hom = homogeneous_pf(p, k, L, u)

                    def y_clustered(eps):
                        pts = [y + j * eps for j in range(L)]
                        return semi_homogeneous_pf(oracle, k, x, pts).value

                    cases.append(_case(
                        {**base, "kind": "hom_vs_extrapolated", "u": _pair(u),
                         "eps": list(_EXTRAP_EPS)},
                        hom.value, _richardson(y_clustered),
                        hom.condition_estimate, spec.tolerance))
    return _finish(spec, cases, t0)
