"""Vertex-model definitions: spins on bonds, six-vertex weights, and the
fusion of k x k spin-1/2 blocks into spin-k/2 vertex weights.

Conventions (used consistently across the package):

* Spins live on bonds and are stored in doubled-integer units, so a
  spin-k/2 bond carries a value in {-k, -k+2, ..., +k}.  The sign is
  measured along the rapidity flow of the bond's line (west->east for
  horizontal bonds, south->north for vertical bonds).
* A vertex is the tuple (west2, south2, east2, north2); west and south
  are the inflow bonds, east and north the outflow bonds.  Nonzero
  weight requires conservation west2 + south2 == east2 + north2.
* Vertex weights depend on the rapidity difference u = -x + y of the
  horizontal line x and vertical line y through the vertex.

Fusion of a spin-k/2 vertex sums a k x k block of spin-1/2 vertices with
stacked rapidities: rows carry x, x+1, ..., x+k-1 from the bottom up and
columns carry y+k-1, ..., y+1, y from the left (descending column order is
what makes the resulting table invariant under reversing all arrows).  All
boundary configurations of the prescribed total spin are summed on the two
inflow sides, the two outflow sides are pinned to canonical
representatives, and the result is divided by the normalization that makes
the all-inward vertex weigh [k]_k.

On top of that, weights are expressed in the normalized symmetric basis:
bond states of total doubled spin s2 get the factor 1/sqrt(B) with B the
q-binomial (k choose (k+s2)/2) at q = exp(lam), i.e. B = prod_t
[k-m+t]/[t].  This per-bond rescaling cancels on every internal bond (no
partition function changes) and is exactly what aligns the fused spin-1
table with the published closed forms; the raw summed weights differ from
them by such multiplicity factors.
"""

from __future__ import annotations

import cmath
import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import mpmath

from .bracket import BracketParams, Jet, bracket, bracket_falling, bracket_jet, \
    is_singular_bracket, precision_scope
from .errors import NotInTable, SingularNormalization, UnreachableSigma


def spin_values(k: int) -> tuple:
    """All doubled spin values a spin-k/2 bond can carry, descending."""
    return tuple(range(k, -k - 1, -2))


def is_valid_spin2(k: int, s2: int) -> bool:
    return abs(s2) <= k and (s2 - k) % 2 == 0


@dataclass(frozen=True)
class VertexSpins:
    """Doubled spins around one vertex; west/south inflow, east/north outflow."""

    west2: int
    south2: int
    east2: int
    north2: int

    def as_tuple(self):
        return (self.west2, self.south2, self.east2, self.north2)

    @property
    def conserves(self) -> bool:
        return self.west2 + self.south2 == self.east2 + self.north2


def _spins_tuple(v) -> tuple:
    if isinstance(v, VertexSpins):
        return v.as_tuple()
    t = tuple(v)
    if len(t) != 4:
        raise ValueError("vertex spins must have four components")
    return t


def conserving_vertices(k: int):
    """All spin tuples with west2+south2 == east2+north2, for a spin-k/2 model."""
    vals = spin_values(k)
    for w, s, e, n in itertools.product(vals, repeat=4):
        if w + s == e + n:
            yield (w, s, e, n)


# --- six-vertex (spin-1/2) weights -----------------------------------------

_SIX_CLASS = {
    (1, 1, 1, 1): "a", (-1, -1, -1, -1): "a",
    (1, -1, 1, -1): "b", (-1, 1, -1, 1): "b",
    (1, -1, -1, 1): "c", (-1, 1, 1, -1): "c",
}

CPLUS_HALF = (1, -1, -1, 1)  # the all-inward spin-1/2 vertex


def six_vertex_class(w2: int, s2: int, e2: int, n2: int):
    """'a' | 'b' | 'c' for the six admissible spin-1/2 vertices, else None."""
    return _SIX_CLASS.get((w2, s2, e2, n2))


def six_vertex_weight(p: BracketParams, v, u) -> complex:
    """Weight of a spin-1/2 vertex: a = [u+1], b = [u], c = [1]; 0 otherwise."""
    cls = six_vertex_class(*_spins_tuple(v))
    if cls == "a":
        return bracket(p, u + 1)
    if cls == "b":
        return bracket(p, u)
    if cls == "c":
        return bracket(p, 1)
    return 0j


def c_plus_weight(p: BracketParams, k: int) -> complex:
    """Normalized weight [k]_k of the spin-k/2 all-inward vertex."""
    return bracket_falling(p, k, k)


# --- boundaries and their representatives -----------------------------------

@dataclass(frozen=True)
class BoundarySigma:
    """Spins on one boundary, listed west->east (horizontal boundaries) or
    south->north (vertical ones)."""

    length: int
    spins2: tuple
    orientation: str
    k: int = 1

    @property
    def total2(self) -> int:
        return sum(self.spins2)


def sigma_representative(length: int, sigma2: int, orientation: str,
                         k: int = 1) -> BoundarySigma:
    """Canonical boundary configuration of total doubled spin ``sigma2``.

    Larger spins sit to the left on horizontal boundaries and lower on
    vertical ones; with the storage order above both cases are simply the
    non-increasing arrangement, built greedily from the largest values.
    """
    if orientation not in ("horizontal", "vertical"):
        raise ValueError("orientation must be 'horizontal' or 'vertical'")
    if abs(sigma2) > k * length or (sigma2 - k * length) % 2 != 0:
        raise UnreachableSigma(
            f"total spin {sigma2}/2 unreachable on a length-{length} spin-{k}/2 boundary"
        )
    spins = []
    remaining = sigma2
    for pos in range(length):
        slots_left = length - pos - 1
        for s2 in spin_values(k):
            rest = remaining - s2
            if abs(rest) <= k * slots_left and (rest - k * slots_left) % 2 == 0:
                spins.append(s2)
                remaining = rest
                break
    return BoundarySigma(length, tuple(spins), orientation, k)


def sigma_set(length: int, sigma2: int):
    """All spin-1/2 boundary configurations of total doubled spin sigma2."""
    if abs(sigma2) > length or (sigma2 - length) % 2 != 0:
        return
    ups = (length + sigma2) // 2
    for up_positions in itertools.combinations(range(length), ups):
        cfg = [-1] * length
        for pos in up_positions:
            cfg[pos] = 1
        yield tuple(cfg)


def stack_rapidities(xs, k: int) -> tuple:
    """Expand each rapidity x into the k-stack (x, x+1, ..., x+k-1)."""
    return tuple(x + t for x in xs for t in range(k))


# --- fusion ------------------------------------------------------------------

def _block_paths(k, left_cfg, bottom_cfg, right_cfg, top_cfg):
    """All conserving spin-1/2 fillings of the k x k block with the given
    boundary, each reduced to a multiset of (class, rapidity offset).

    Vertex (r, s) sees the rapidity difference u + (k-1-s) - r: rows
    ascend from the bottom, columns descend from the left.
    """
    fillings = []

    def walk(r, s, w_carry, v_carry, acc):
        if r == k:
            fillings.append(tuple(sorted(Counter(acc).items())))
            return
        w = w_carry if s > 0 else left_cfg[r]
        sv = v_carry[s]
        east_options = (right_cfg[r],) if s == k - 1 else (1, -1)
        for e in east_options:
            n = w + sv - e
            if n not in (-1, 1):
                continue
            if r == k - 1 and n != top_cfg[s]:
                continue
            cls = _SIX_CLASS[(w, sv, e, n)]
            acc.append((cls, (k - 1 - s) - r))
            v_carry[s] = n
            if s == k - 1:
                walk(r + 1, 0, 0, v_carry, acc)
            else:
                walk(r, s + 1, e, v_carry, acc)
            v_carry[s] = sv
            acc.pop()

    walk(0, 0, 0, list(bottom_cfg), [])
    return fillings


@lru_cache(maxsize=None)
def _fused_fillings(k, alpha2, beta2, right_cfg, top_cfg):
    """Filling multisets (with multiplicity) for a fused vertex: inflow
    boundaries summed over their whole sigma-sets, outflow pinned."""
    tally = Counter()
    for left_cfg in sigma_set(k, alpha2):
        for bottom_cfg in sigma_set(k, beta2):
            for filling in _block_paths(k, left_cfg, bottom_cfg, right_cfg, top_cfg):
                tally[filling] += 1
    return tuple(tally.items())


def _class_bracket(p, cls, v):
    if cls == "a":
        return bracket(p, v + 1)
    if cls == "b":
        return bracket(p, v)
    return bracket(p, 1)


def _class_jet(p, cls, v, order):
    if cls == "a":
        return bracket_jet(p, v + 1, order)
    if cls == "b":
        return bracket_jet(p, v, order)
    const = bracket(p, 1)
    zero = const * 0
    return Jet((const,) + (zero,) * order)


def _normalization_shifts(k):
    # [u+q]_{k-1} for q = 0..k-1 unpacks into brackets [u + q - t], t < k-1
    return [q - t for q in range(k) for t in range(k - 1)]


def _fused_weight(p, k, u, fillings):
    """Sum the block fillings at rapidity difference u and divide by the
    normalization; removable 0/0 points are resolved exactly by jets."""
    shifts = _normalization_shifts(k)
    vanishing = sum(1 for d in shifts if is_singular_bracket(p, u + d))
    with precision_scope(p):
        if vanishing == 0:
            norm = mpmath.mpc(1) if p.extended else complex(1.0)
            for d in shifts:
                norm = norm * bracket(p, u + d)
            cache = {}
            total = 0
            for filling, mult in fillings:
                w = mult + 0j
                for (cls, d), cnt in filling:
                    if (cls, d) not in cache:
                        cache[(cls, d)] = _class_bracket(p, cls, u + d)
                    w = w * cache[(cls, d)] ** cnt
                total = total + w
            return total / norm
        # The divisor vanishes; expand both sides in a formal offset t and
        # match leading orders.  The normalized weight is a polynomial in
        # brackets, so the limit always exists for admissible vertices.
        order = vanishing + 2
        norm_jet = None
        for d in shifts:
            factor = bracket_jet(p, u + d, order)
            norm_jet = factor if norm_jet is None else norm_jet * factor
        num_jet = None
        cache = {}
        for filling, mult in fillings:
            term = None
            for (cls, d), cnt in filling:
                if (cls, d) not in cache:
                    cache[(cls, d)] = _class_jet(p, cls, u + d, order)
                for _ in range(cnt):
                    term = cache[(cls, d)] if term is None else term * cache[(cls, d)]
            term = term.scale(mult)
            num_jet = term if num_jet is None else num_jet + term
        return _leading_ratio(p, num_jet, norm_jet)


def _leading_ratio(p, num_jet, den_jet):
    tol = p.genericity_tol
    den_scale = max(float(abs(c)) for c in den_jet.coeffs)
    if den_scale == 0.0:
        raise SingularNormalization("normalization vanishes identically")
    lead = next(i for i, c in enumerate(den_jet.coeffs)
                if float(abs(c)) > tol * den_scale)
    num_scale = max(float(abs(c)) for c in num_jet.coeffs)
    if num_scale == 0.0:
        return 0j
    for c in num_jet.coeffs[:lead]:
        if float(abs(c)) > 1e-6 * num_scale:
            raise SingularNormalization(
                "block sum vanishes slower than its normalization; "
                "no finite fused weight at this rapidity difference"
            )
    return num_jet.coeffs[lead] / den_jet.coeffs[lead]


def q_multiplicity(p: BracketParams, k: int, s2: int) -> complex:
    """q-binomial (k choose (k+s2)/2) at q = exp(lam), in bracket form
    prod_t [k-m+t]/[t]: the deformed size of the sigma-set of a spin-k/2
    bond state.  Equals the binomial coefficient as lam -> 0."""
    m = (k + s2) // 2
    out = 1 + 0j
    with precision_scope(p):
        for t in range(1, m + 1):
            out = out * bracket(p, k - m + t) / bracket(p, t)
    return out


def fuse_block(p: BracketParams, k: int, v, x, y) -> complex:
    """Weight of the spin-k/2 vertex ``v`` synthesized from a k x k
    spin-1/2 block at stacked rapidities; the all-inward vertex gets [k]_k."""
    w2, s2, e2, n2 = _spins_tuple(v)
    return fuse_block_with_outflow(p, k, (w2, s2, e2, n2), x, y)


def fuse_block_with_outflow(p: BracketParams, k: int, v, x, y,
                            east_spins2=None, north_spins2=None) -> complex:
    """Like fuse_block, but lets tests pin the outflow boundaries to any
    member of the correct sigma-set instead of the representative."""
    w2, s2, e2, n2 = _spins_tuple(v)
    for s in (w2, s2, e2, n2):
        if not is_valid_spin2(k, s):
            raise ValueError(f"doubled spin {s} invalid for a spin-{k}/2 bond")
    if w2 + s2 != e2 + n2:
        return 0j
    east = tuple(east_spins2) if east_spins2 is not None \
        else sigma_representative(k, e2, "vertical").spins2
    north = tuple(north_spins2) if north_spins2 is not None \
        else sigma_representative(k, n2, "horizontal").spins2
    if sum(east) != e2 or sum(north) != n2:
        raise ValueError("outflow configuration has the wrong total spin")
    # vertical boundaries put larger spins lower: storage is south->north,
    # so the representative (non-increasing) already matches row order 0..k-1
    fillings = _fused_fillings(k, w2, s2, east, north)
    u = -x + y
    raw = _fused_weight(p, k, u, fillings)
    # basis normalization: inflow bonds divide by sqrt(B), outflow bonds
    # multiply; per-spin square roots keep the factor exactly telescoping
    chi = {}
    for s in {w2, s2, e2, n2}:
        b = q_multiplicity(p, k, s)
        chi[s] = (mpmath.sqrt(b) if p.extended else cmath.sqrt(complex(b)))
    return raw * chi[e2] * chi[n2] / (chi[w2] * chi[s2])


# --- the spin-1 closed-form table -------------------------------------------

V1_ALIGNED = (2, 2, 2, 2)       # all bonds spin +1 along flow
V1_OPPOSED = (-2, 2, -2, 2)     # horizontal spins against flow
V1_THROUGH = (0, 2, 0, 2)       # vertical +1 passes through, horizontals empty
V1_SPLIT = (2, 0, 0, 2)         # full west inflow leaves through the top
V1_MERGE = (0, 0, -2, 2)        # both horizontals inward-empty, verticals full
V1_CPLUS = (2, -2, -2, 2)       # the spin-1 all-inward vertex

_SPIN1_FORMS = {
    V1_ALIGNED: (("u", 1), ("u", 2)),
    V1_OPPOSED: (("u", -1), ("u", 0)),
    V1_THROUGH: (("u", 0), ("u", 1)),
    V1_SPLIT: (("u", 1), ("const", 2)),
    V1_MERGE: (("u", 0), ("const", 2)),
    V1_CPLUS: (("const", 1), ("const", 2)),
}


def spin1_closed_form(p: BracketParams, key, u) -> complex:
    """Evaluate one of the six tabulated spin-1 weight classes at u."""
    out = 1 + 0j
    for kind, shift in _SPIN1_FORMS[tuple(key)]:
        out = out * (bracket(p, u + shift) if kind == "u" else bracket(p, shift))
    return out


def spin1_table_weight(p: BracketParams, v, u) -> complex:
    """Closed-form spin-1 weight for the 12 tabulated vertices (the six
    classes and their arrow reversals).  Admissible vertices outside the
    table raise NotInTable; non-conserving tuples weigh 0."""
    t = _spins_tuple(v)
    if t[0] + t[1] != t[2] + t[3]:
        return 0j
    if t in _SPIN1_FORMS:
        return spin1_closed_form(p, t, u)
    neg = tuple(-s for s in t)
    if neg in _SPIN1_FORMS:
        return spin1_closed_form(p, neg, u)
    raise NotInTable(f"spin-1 vertex {t} has no tabulated closed form")


# --- full weight tables -------------------------------------------------------

@dataclass(frozen=True)
class VertexWeightTable:
    """All admissible spin-k/2 vertex weights at one (lam, u)."""

    k: int
    lam: complex
    u: complex
    entries: dict

    def records(self):
        """JSON-ready records, one per admissible vertex."""
        out = []
        for (w2, s2, e2, n2), weight in sorted(self.entries.items(), reverse=True):
            out.append({
                "alpha2": w2, "beta2": s2, "gamma2": e2, "delta2": n2,
                "weight_re": float(weight.real), "weight_im": float(weight.imag),
            })
        return out


def weight_table(p: BracketParams, k: int, u,
                 source: str = "fused") -> VertexWeightTable:
    """Weights of every admissible vertex at rapidity difference u.

    source = "fused" synthesizes all of them by fusion; "spin1_table"
    (k = 2 only) takes the 12 tabulated closed forms and falls back to
    fusion for the rest.
    """
    if source not in ("fused", "spin1_table"):
        raise ValueError("source must be 'fused' or 'spin1_table'")
    if source == "spin1_table" and k != 2:
        raise ValueError("the closed-form table only covers k = 2")
    cast = (lambda w: w) if p.extended else complex
    entries = {}
    for v in conserving_vertices(k):
        if source == "spin1_table":
            try:
                entries[v] = cast(spin1_table_weight(p, v, u))
                continue
            except NotInTable:
                pass
        entries[v] = cast(fuse_block(p, k, v, 0.0, u))
    return VertexWeightTable(k, p.lam, complex(u), entries)
