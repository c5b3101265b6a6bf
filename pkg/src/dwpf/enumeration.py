"""Ground-truth oracle: exhaustive sums over domain-wall configurations.

A configuration assigns a doubled spin to every bond of an L x L lattice
such that every vertex conserves spin flow and the boundary is domain
wall: measured along the rapidity flow, west boundary bonds carry +k,
east bonds -k, south bonds -k and north bonds +k (all side arrows point
into the lattice, all top/bottom arrows point out).

Rows are indexed 0..L-1 from the bottom, columns 0..L-1 from the left;
vertex (i, j) sits on horizontal line i (rapidity x_i) and vertical
line j (rapidity y_j).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .bracket import BracketParams
from .errors import BudgetExceeded
from .model import conserving_vertices, six_vertex_weight, spin_values, weight_table

DEFAULT_NODE_BUDGET = 2_000_000


@dataclass(frozen=True)
class LatticeConfig:
    """Bond spins of one DW configuration, in doubled units.

    h_bonds[i][j] is the bond west of vertex (i, j); index j = L is the
    east boundary.  v_bonds[i][j] is the bond south of vertex (i, j);
    index i = L is the north boundary.
    """

    k: int
    L: int
    h_bonds: tuple
    v_bonds: tuple

    def vertex(self, i: int, j: int) -> tuple:
        return (self.h_bonds[i][j], self.v_bonds[i][j],
                self.h_bonds[i][j + 1], self.v_bonds[i + 1][j])

    def check(self):
        k, L = self.k, self.L
        if len(self.h_bonds) != L or any(len(r) != L + 1 for r in self.h_bonds):
            raise ValueError("h_bonds must be L rows of L+1 bonds")
        if len(self.v_bonds) != L + 1 or any(len(r) != L for r in self.v_bonds):
            raise ValueError("v_bonds must be L+1 rows of L bonds")
        for row in self.h_bonds + self.v_bonds:
            for s in row:
                if abs(s) > k or (s - k) % 2:
                    raise ValueError(f"doubled spin {s} invalid for k={k}")
        for i in range(L):
            if self.h_bonds[i][0] != k or self.h_bonds[i][L] != -k:
                raise ValueError("west/east boundary must carry +k/-k along flow")
        for j in range(L):
            if self.v_bonds[0][j] != -k or self.v_bonds[L][j] != k:
                raise ValueError("south/north boundary must carry -k/+k along flow")
        for i in range(L):
            for j in range(L):
                w, s, e, n = self.vertex(i, j)
                if w + s != e + n:
                    raise ValueError(f"vertex ({i},{j}) violates conservation")

    def to_dict(self):
        return {"k": self.k, "L": self.L,
                "h_bonds": [list(r) for r in self.h_bonds],
                "v_bonds": [list(r) for r in self.v_bonds]}


@dataclass(frozen=True)
class ExtendedASM:
    """L x L integer matrix with entries in [-k, k], row and column sums k,
    and every partial row/column sum (from either end) within [0, k]."""

    k: int
    entries: tuple

    @property
    def L(self) -> int:
        return len(self.entries)

    def check(self):
        k, L = self.k, self.L
        if any(len(r) != L for r in self.entries):
            raise ValueError("matrix must be square")
        if any(abs(e) > k for r in self.entries for e in r):
            raise ValueError(f"entries must lie in [-{k}, {k}]")
        rows = [list(r) for r in self.entries]
        cols = [[rows[i][j] for i in range(L)] for j in range(L)]
        for line in rows + cols:
            if sum(line) != k:
                raise ValueError("row and column sums must equal k")
            for seq in (line, line[::-1]):
                acc = 0
                for e in seq:
                    acc += e
                    if not 0 <= acc <= k:
                        raise ValueError("partial sums must stay within [0, k]")


class _Budget:
    __slots__ = ("left", "cap")

    def __init__(self, cap):
        self.cap = cap if cap is not None else DEFAULT_NODE_BUDGET
        self.left = self.cap

    def spend(self):
        self.left -= 1
        if self.left < 0:
            raise BudgetExceeded(f"search exceeded the node budget of {self.cap}")


def _east_options(k, vals, w, s, j, L):
    if j == L - 1:
        opts = (-k,)
    else:
        opts = vals
    for e in opts:
        n = w + s - e
        if -k <= n <= k:
            yield e, n


def enumerate_configs(k: int, L: int, budget=None):
    """Yield every DW configuration exactly once, row by row from the bottom."""
    vals = spin_values(k)
    tally = _Budget(budget)
    suffix_of = lambda v_in: tuple(itertools.accumulate(v_in[::-1]))[::-1] + (0,)

    def rows(i, v_in, h_done, v_done):
        if i == L:
            if all(s == k for s in v_in):
                yield LatticeConfig(k, L, tuple(h_done), tuple(v_done) + (tuple(v_in),))
            return
        suffix = suffix_of(v_in)
        yield from cols(i, 0, k, v_in, [k], [], suffix, h_done, v_done)

    def cols(i, j, w, v_in, row_h, n_out, suffix, h_done, v_done):
        if j == L:
            yield from rows(i + 1, tuple(n_out), h_done + [tuple(row_h)],
                            v_done + [tuple(v_in)])
            return
        # the remaining north spins in this row are forced in total
        need = w + k + suffix[j]
        span = k * (L - j)
        if need < -span or need > span:
            return
        for e, n in _east_options(k, vals, w, v_in[j], j, L):
            tally.spend()
            yield from cols(i, j + 1, e, v_in, row_h + [e], n_out + [n],
                            suffix, h_done, v_done)

    yield from rows(0, tuple([-k] * L), [], [])


def _sum_over_configs(k, L, tables, budget):
    """Weighted sum over all DW configurations; tables=None counts them."""
    vals = spin_values(k)
    tally = _Budget(budget)

    def rows(i, v_in, acc):
        if i == L:
            return acc if all(s == k for s in v_in) else 0
        suffix = tuple(itertools.accumulate(v_in[::-1]))[::-1] + (0,)
        return cols(i, 0, k, v_in, [], suffix, acc)

    def cols(i, j, w, v_in, n_out, suffix, acc):
        if j == L:
            return rows(i + 1, tuple(n_out), acc)
        need = w + k + suffix[j]
        span = k * (L - j)
        if need < -span or need > span:
            return 0
        total = 0
        for e, n in _east_options(k, vals, w, v_in[j], j, L):
            tally.spend()
            if tables is None:
                branch = acc
            else:
                weight = tables[i][j][(w, v_in[j], e, n)]
                if weight == 0:
                    continue
                branch = acc * weight
            total += cols(i, j + 1, e, v_in, n_out + [n], suffix, branch)
        return total

    return rows(0, tuple([-k] * L), 1 if tables is None else 1 + 0j)


def count_configs(k: int, L: int, budget=None) -> int:
    """Number of DW configurations of the spin-k/2 L x L lattice."""
    return _sum_over_configs(k, L, None, budget)


def brute_force_pf(p: BracketParams, k: int, L: int, xs, ys,
                   weights: str = "auto", budget=None) -> complex:
    """Partition function by exhaustive weighted enumeration.

    weights selects the vertex-weight source: "six_vertex" (k = 1),
    "fused" (any k), "spin1_table" (k = 2; closed forms with fusion
    fallback), or "ones" (every admissible vertex weighs 1, so the sum
    equals count_configs).  "auto" picks six_vertex/fused by k.
    """
    xs, ys = tuple(map(complex, xs)), tuple(map(complex, ys))
    if len(xs) != L or len(ys) != L:
        raise ValueError("need exactly L horizontal and L vertical rapidities")
    if weights == "auto":
        weights = "six_vertex" if k == 1 else "fused"
    tables = []
    for i in range(L):
        row = []
        for j in range(L):
            u = -xs[i] + ys[j]
            if weights == "six_vertex":
                if k != 1:
                    raise ValueError("six_vertex weights require k = 1")
                row.append({v: six_vertex_weight(p, v, u)
                            for v in conserving_vertices(1)})
            elif weights == "ones":
                row.append({v: 1 + 0j for v in conserving_vertices(k)})
            elif weights in ("fused", "spin1_table"):
                row.append(weight_table(p, k, u, source=weights).entries)
            else:
                raise ValueError(f"unknown weight source {weights!r}")
        tables.append(row)
    return complex(_sum_over_configs(k, L, tables, budget))


# --- the configuration <-> extended-ASM bijection ----------------------------

def asm_of_config(c: LatticeConfig) -> ExtendedASM:
    """Matrix entry (i, j) = west spin minus east spin of vertex (i, j),
    in single-spin units.  Reduces to the usual six-vertex/ASM map at k=1."""
    entries = tuple(
        tuple((c.h_bonds[i][j] - c.h_bonds[i][j + 1]) // 2 for j in range(c.L))
        for i in range(c.L))
    return ExtendedASM(c.k, entries)


def config_of_asm(a: ExtendedASM) -> LatticeConfig:
    """Inverse map: bond spins are boundary values minus doubled partial sums."""
    k, L = a.k, a.L
    h = []
    for i in range(L):
        row = [k]
        for j in range(L):
            row.append(row[-1] - 2 * a.entries[i][j])
        h.append(tuple(row))
    v = [tuple([-k] * L)]
    for i in range(L):
        v.append(tuple(v[-1][j] + 2 * a.entries[i][j] for j in range(L)))
    config = LatticeConfig(k, L, tuple(h), tuple(v))
    config.check()
    return config


@lru_cache(maxsize=None)
def _asm_row_candidates(k: int, L: int) -> tuple:
    rows = []

    def grow(prefix, acc):
        if len(prefix) == L:
            if acc == k:
                rows.append(tuple(prefix))
            return
        for e in range(-k, k + 1):
            # partial sums from the left stay in [0, k]; with a row total of
            # k that bounds the right-end partial sums too
            if 0 <= acc + e <= k:
                grow(prefix + [e], acc + e)

    grow([], 0)
    return tuple(rows)


def enumerate_asms(k: int, L: int):
    """Direct matrix enumeration of extended ASMs, independent of the
    lattice scan; used to cross-check counts and the bijection."""
    candidates = _asm_row_candidates(k, L)

    def grow(rows, col_acc):
        if len(rows) == L:
            if all(c == k for c in col_acc):
                yield ExtendedASM(k, tuple(rows))
            return
        remaining = L - len(rows) - 1
        for row in candidates:
            acc = tuple(a + e for a, e in zip(col_acc, row))
            # column partial sums from the top stay in [0, k] and must be
            # able to reach k with the rows still to come
            if all(0 <= c <= k and c + k * remaining >= k for c in acc):
                yield from grow(rows + [row], acc)

    yield from grow([], tuple([0] * L))
