"""Hermitean root-of-unity matrices, Seidel matrices, and their graphs.

A matrix H with every entry a q-th root of unity is stored by exponent codes:
the off-diagonal entry (i, j) is zeta^code[i][j], and the diagonal carries a
sign in {+1, -1} (-1 only for even q, so the diagonal stays real).  Entries
are materialised as exact ring elements on demand.

The weighted walk matrix of H is A = (J - H)/(1 - zeta), computed entrywise
by exact division.  Two graphs are derived from A: the underlying graph
(edges and loops where A is nonzero) and the residue graph (edges where the
entry is a unit modulo (1 - zeta)).  Diagonal switching H -> D H D^(-1) acts
on exponent codes, preserving the characteristic polynomial.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .cyclotomic import CycElem, RingContext, make_ring
from .errors import (
    BudgetError,
    DomainError,
    InternalInvariantError,
    TheoremViolationError,
)

__all__ = [
    "Graph",
    "HermitianRootMatrix",
    "SeidelMatrix",
    "WalkMatrix",
    "a_transform",
    "enumerate_matrices",
    "find_euler_switching",
    "parse_matrix_text",
    "residue_graph",
    "sample",
    "sample_stream",
    "seidel_embed",
    "switch",
    "switching_class_residue_graphs",
    "underlying_graph",
    "write_matrix_text",
]

DEFAULT_BUDGET = 10**6


def _validate_codes(n: int, q: int, codes: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    if len(codes) != n or any(len(r) != n for r in codes):
        raise DomainError("exponent grid must be n x n")
    out = [[int(c) % q for c in row] for row in codes]
    for i in range(n):
        out[i][i] = 0
        for j in range(i + 1, n):
            if (out[i][j] + out[j][i]) % q:
                raise DomainError(
                    f"entries ({i},{j}) and ({j},{i}) are not conjugate exponents"
                )
    return tuple(tuple(r) for r in out)


@dataclass(frozen=True)
class HermitianRootMatrix:
    """H with off-diagonal entries zeta^code and a +-1 diagonal."""

    n: int
    q: int
    codes: tuple[tuple[int, ...], ...]
    diag: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "codes", _validate_codes(self.n, self.q, self.codes))
        if len(self.diag) != self.n:
            raise DomainError("diagonal length must be n")
        if any(d not in (1, -1) for d in self.diag):
            raise DomainError("diagonal entries must be +1 or -1")
        if self.q % 2 and any(d == -1 for d in self.diag):
            raise DomainError("-1 diagonal requires even q")
        object.__setattr__(self, "diag", tuple(int(d) for d in self.diag))

    @property
    def ring(self) -> RingContext:
        return make_ring(self.q)

    @property
    def family(self) -> str:
        return "hermitian"

    def entry(self, i: int, j: int) -> CycElem:
        ring = self.ring
        if i == j:
            return ring.from_int(self.diag[i])
        return ring.zeta(self.codes[i][j])

    def cells(self) -> list[list[CycElem]]:
        return [[self.entry(i, j) for j in range(self.n)] for i in range(self.n)]


@dataclass(frozen=True)
class SeidelMatrix:
    """Hermitean root-of-unity matrix with identically zero diagonal."""

    n: int
    q: int
    codes: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "codes", _validate_codes(self.n, self.q, self.codes))

    @property
    def ring(self) -> RingContext:
        return make_ring(self.q)

    @property
    def family(self) -> str:
        return "seidel"

    def entry(self, i: int, j: int) -> CycElem:
        ring = self.ring
        if i == j:
            return ring.zero
        return ring.zeta(self.codes[i][j])

    def cells(self) -> list[list[CycElem]]:
        return [[self.entry(i, j) for j in range(self.n)] for i in range(self.n)]


def seidel_embed(s: SeidelMatrix) -> HermitianRootMatrix:
    """H = S + I: adds the identity, making every entry a root of unity."""
    return HermitianRootMatrix(s.n, s.q, s.codes, (1,) * s.n)


@dataclass(frozen=True)
class WalkMatrix:
    """A = (J - H)/(1 - zeta), the weighted walk matrix, as exact cells."""

    n: int
    ring: RingContext
    rows: tuple[tuple[CycElem, ...], ...]

    def cell(self, i: int, j: int) -> CycElem:
        return self.rows[i][j]


def a_transform(h: HermitianRootMatrix | SeidelMatrix) -> WalkMatrix:
    """Entrywise exact (J - H)/(1 - zeta); Seidel input is embedded first.

    Off-diagonal quotients are geometric sums 1 + zeta + ... + zeta^(k-1); a
    -1 diagonal entry yields 2/(1 - zeta), which exists for every even q.
    """
    if isinstance(h, SeidelMatrix):
        h = seidel_embed(h)
    ring = h.ring
    q = h.q
    geo = [ring.zero]
    for k in range(1, q):
        geo.append(geo[-1] + ring.zeta(k - 1))
    rows = []
    for i in range(h.n):
        row = []
        for j in range(h.n):
            if i == j:
                if h.diag[i] == 1:
                    row.append(ring.zero)
                else:
                    try:
                        row.append(ring.from_int(2).divide_by_one_minus_zeta())
                    except Exception as exc:  # invariant: even q makes this exact
                        raise InternalInvariantError(
                            "diagonal quotient 2/(1-zeta) failed"
                        ) from exc
            else:
                row.append(geo[h.codes[i][j]])
        rows.append(tuple(row))
    return WalkMatrix(h.n, ring, tuple(rows))


@dataclass(frozen=True)
class Graph:
    """Loopy multigraph-free graph on {0..n-1}: bitmask rows plus loop flags."""

    n: int
    rows: tuple[int, ...]
    loops: int = 0

    def __post_init__(self):
        for i, r in enumerate(self.rows):
            if r & (1 << i):
                raise DomainError("diagonal bits belong in the loop mask")
            for j in range(self.n):
                if ((r >> j) & 1) != ((self.rows[j] >> i) & 1):
                    raise DomainError("adjacency must be symmetric")

    @classmethod
    def from_edges(cls, n: int, edges: Sequence[tuple[int, int]], loops: Sequence[int] = ()) -> "Graph":
        rows = [0] * n
        for i, j in edges:
            if i == j:
                raise DomainError("use the loops argument for loops")
            rows[i] |= 1 << j
            rows[j] |= 1 << i
        mask = 0
        for v in loops:
            mask |= 1 << v
        return cls(n, tuple(rows), mask)

    def has_edge(self, i: int, j: int) -> bool:
        if i == j:
            return bool((self.loops >> i) & 1)
        return bool((self.rows[i] >> j) & 1)

    def has_loop(self, i: int) -> bool:
        return bool((self.loops >> i) & 1)

    def neighbors(self, i: int) -> list[int]:
        """Walk successors of i, including i itself when looped."""
        out = [j for j in range(self.n) if (self.rows[i] >> j) & 1]
        if self.has_loop(i):
            out.append(i)
        return sorted(out)

    def degree(self, i: int) -> int:
        """Number of non-loop edges at i (loops tracked separately)."""
        return bin(self.rows[i]).count("1")

    def edges(self) -> list[tuple[int, int]]:
        return [
            (i, j)
            for i in range(self.n)
            for j in range(i + 1, self.n)
            if (self.rows[i] >> j) & 1
        ]

    def loop_vertices(self) -> list[int]:
        return [i for i in range(self.n) if (self.loops >> i) & 1]

    def is_euler(self) -> bool:
        """Every vertex has even (non-loop) degree."""
        return all(self.degree(i) % 2 == 0 for i in range(self.n))

    def adjacency(self, include_loops: bool = True) -> list[list[int]]:
        out = [[(self.rows[i] >> j) & 1 for j in range(self.n)] for i in range(self.n)]
        if include_loops:
            for i in range(self.n):
                if self.has_loop(i):
                    out[i][i] = 1
        return out


def underlying_graph(h: HermitianRootMatrix | SeidelMatrix) -> Graph:
    """Edges and loops exactly where the walk matrix is nonzero."""
    if isinstance(h, SeidelMatrix):
        h = seidel_embed(h)
    n = h.n
    rows = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if h.codes[i][j] != 0:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    loops = 0
    for i in range(n):
        if h.diag[i] == -1:
            loops |= 1 << i
    return Graph(n, tuple(rows), loops)


def _walk_entry_valuation(ring: RingContext, code: int):
    """(1-zeta)-adic valuation of (1 - zeta^code)/(1 - zeta), cached per ring."""
    cache = _WALK_VAL_CACHE.setdefault(ring.q, {})
    v = cache.get(code)
    if v is None:
        elem = (ring.one - ring.zeta(code)).divide_by_one_minus_zeta() if code else ring.zero
        v = elem.valuation_one_minus_zeta()
        cache[code] = v
    return v


_WALK_VAL_CACHE: dict[int, dict[int, object]] = {}


def residue_graph(h: HermitianRootMatrix | SeidelMatrix) -> Graph:
    """Edges where the walk-matrix entry is a unit modulo (1 - zeta).

    Loopless by construction: for q a power of 2 the diagonal quotients lie
    in (1 - zeta) Z[zeta], and for other q the diagonal of A is zero.
    """
    if isinstance(h, SeidelMatrix):
        h = seidel_embed(h)
    ring = h.ring
    n = h.n
    rows = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if _walk_entry_valuation(ring, h.codes[i][j]) == 0:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    return Graph(n, tuple(rows), 0)


def switch(h: HermitianRootMatrix, d: Sequence[int]) -> HermitianRootMatrix:
    """Diagonal conjugation: entry (i,j) is scaled by zeta^(d_i - d_j).

    Similarity, so the characteristic polynomial is unchanged.
    """
    if len(d) != h.n:
        raise DomainError("switching vector length must be n")
    q = h.q
    codes = [
        [(h.codes[i][j] + d[i] - d[j]) % q if i != j else 0 for j in range(h.n)]
        for i in range(h.n)
    ]
    return HermitianRootMatrix(h.n, q, tuple(map(tuple, codes)), h.diag)


def normalized_switchings(n: int, q: int) -> Iterator[tuple[int, ...]]:
    """All switching vectors with first coordinate 0 (global phase fixed)."""
    for rest in product(range(q), repeat=n - 1):
        yield (0,) + rest


def switching_class_residue_graphs(
    h: HermitianRootMatrix, budget: int = DEFAULT_BUDGET
) -> set[Graph]:
    """Residue graphs of all diagonal conjugates of H, deduplicated."""
    if h.q ** (h.n - 1) > budget:
        raise BudgetError(
            f"switching class of size {h.q}^{h.n - 1} exceeds budget {budget}"
        )
    return {residue_graph(switch(h, d)) for d in normalized_switchings(h.n, h.q)}


def find_euler_switching(
    h: HermitianRootMatrix, budget: int = DEFAULT_BUDGET
) -> tuple[int, ...]:
    """Switching vector whose switched residue graph is the Euler graph.

    Requires odd n and q > 2 a power of 2, in which case the switching class
    contains exactly one Euler graph; finding none or several distinct ones is
    reported as a theorem violation carrying the whole switching class.
    """
    if h.n % 2 == 0:
        raise DomainError("Euler normalization requires odd n")
    if h.q <= 2 or (h.q & (h.q - 1)) != 0:
        raise DomainError("Euler normalization requires q > 2 a power of 2")
    if h.q ** (h.n - 1) > budget:
        raise BudgetError(
            f"switching class of size {h.q}^{h.n - 1} exceeds budget {budget}"
        )
    found: dict[Graph, tuple[int, ...]] = {}
    ring = h.ring
    q = h.q
    n = h.n
    val0 = [m for m in range(q) if _walk_entry_valuation(ring, m) == 0]
    unit_mask = [m in val0 for m in range(q)]
    base = h.codes
    for d in normalized_switchings(n, q):
        rows = [0] * n
        for i in range(n):
            di = d[i]
            row = 0
            for j in range(n):
                if j != i and unit_mask[(base[i][j] + di - d[j]) % q]:
                    row |= 1 << j
            rows[i] = row
        if all(bin(r).count("1") % 2 == 0 for r in rows):
            g = Graph(n, tuple(rows), 0)
            found.setdefault(g, d)
    if len(found) != 1:
        dump = sorted(
            (g.rows, g.loops) for g in switching_class_residue_graphs(h, budget)
        )
        raise TheoremViolationError(
            f"switching class contains {len(found)} Euler graphs, expected exactly 1; "
            f"full switching class: {dump}",
            witness={"matrix": write_matrix_text(h),
                     "euler_graphs": sorted(g.rows for g in found)},
        )
    return next(iter(found.values()))


# -- sampling and enumeration --------------------------------------------------------


def _generator(seed: int, worker: int = 0) -> np.random.Generator:
    """Counter-based Philox stream; workers get jumped substreams."""
    bits = np.random.Philox(key=seed)
    if worker:
        bits = bits.jumped(worker)
    return np.random.Generator(bits)


def sample(
    n: int,
    q: int,
    seed: int,
    family: str = "hermitian",
    rng: np.random.Generator | None = None,
) -> HermitianRootMatrix | SeidelMatrix:
    """One uniform matrix: i.i.d. exponents above the diagonal, uniform
    diagonal signs for the hermitian family (even q), deterministic per seed."""
    if rng is None:
        rng = _generator(seed)
    codes = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            c = int(rng.integers(0, q))
            codes[i][j] = c
            codes[j][i] = (-c) % q
    grid = tuple(map(tuple, codes))
    if family == "seidel":
        return SeidelMatrix(n, q, grid)
    if family != "hermitian":
        raise DomainError(f"unknown family {family!r}")
    if q % 2 == 0:
        diag = tuple(1 if int(b) == 0 else -1 for b in rng.integers(0, 2, size=n))
    else:
        diag = (1,) * n
    return HermitianRootMatrix(n, q, grid, diag)


def sample_stream(
    n: int,
    q: int,
    seed: int,
    family: str,
    count: int,
    worker: int = 0,
) -> Iterator[HermitianRootMatrix | SeidelMatrix]:
    """Deterministic stream of `count` samples from worker substream `worker`."""
    rng = _generator(seed, worker)
    for _ in range(count):
        yield sample(n, q, seed, family, rng=rng)


def enumerate_matrices(
    n: int,
    q: int,
    family: str = "hermitian",
    budget: int = DEFAULT_BUDGET,
) -> Iterator[HermitianRootMatrix | SeidelMatrix]:
    """Exhaustive duplicate-free stream in deterministic lexicographic order."""
    pairs = n * (n - 1) // 2
    total = q**pairs
    if family == "hermitian" and q % 2 == 0:
        total *= 2**n
    elif family not in ("hermitian", "seidel"):
        raise DomainError(f"unknown family {family!r}")
    if total > budget:
        raise BudgetError(f"enumeration of {total} matrices exceeds budget {budget}")
    idx = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for upper in product(range(q), repeat=pairs):
        codes = [[0] * n for _ in range(n)]
        for (i, j), c in zip(idx, upper):
            codes[i][j] = c
            codes[j][i] = (-c) % q
        grid = tuple(map(tuple, codes))
        if family == "seidel":
            yield SeidelMatrix(n, q, grid)
        elif q % 2 == 0:
            for bits in product((1, -1), repeat=n):
                yield HermitianRootMatrix(n, q, grid, bits)
        else:
            yield HermitianRootMatrix(n, q, grid, (1,) * n)


# -- text and JSON formats ------------------------------------------------------------


def write_matrix_text(m: HermitianRootMatrix | SeidelMatrix) -> str:
    """First line "n q family"; then n rows of exponent codes, with the
    diagonal position carrying the sign code (or 0 for the seidel family)."""
    lines = [f"{m.n} {m.q} {m.family}"]
    for i in range(m.n):
        toks = []
        for j in range(m.n):
            if i == j:
                toks.append(str(m.diag[i]) if m.family == "hermitian" else "0")
            else:
                toks.append(str(m.codes[i][j]))
        lines.append(" ".join(toks))
    return "\n".join(lines) + "\n"


def parse_matrix_text(text: str) -> HermitianRootMatrix | SeidelMatrix:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise DomainError("empty matrix file")
    head = lines[0].split()
    if len(head) != 3:
        raise DomainError("header must be 'n q family'")
    n, q, family = int(head[0]), int(head[1]), head[2]
    if len(lines) != n + 1:
        raise DomainError(f"expected {n} matrix rows, got {len(lines) - 1}")
    grid = [[0] * n for _ in range(n)]
    diag = [1] * n
    for i, ln in enumerate(lines[1:]):
        toks = ln.split()
        if len(toks) != n:
            raise DomainError(f"row {i} has {len(toks)} entries, expected {n}")
        for j, t in enumerate(toks):
            v = int(t)
            if i == j:
                if family == "hermitian" and v not in (1, -1):
                    raise DomainError(f"diagonal sign at row {i} must be +-1, got {v}")
                diag[i] = v if v in (1, -1) else 1
            else:
                grid[i][j] = v % q
    grid_t = tuple(map(tuple, grid))
    if family == "seidel":
        return SeidelMatrix(n, q, grid_t)
    if family == "hermitian":
        return HermitianRootMatrix(n, q, grid_t, tuple(diag))
    raise DomainError(f"unknown family {family!r}")


def matrix_to_json(m: HermitianRootMatrix | SeidelMatrix) -> str:
    obj = {"n": m.n, "q": m.q, "family": m.family, "codes": [list(r) for r in m.codes]}
    if m.family == "hermitian":
        obj["diag"] = list(m.diag)
    return json.dumps(obj, sort_keys=True)


def matrix_from_json(text: str) -> HermitianRootMatrix | SeidelMatrix:
    obj = json.loads(text)
    grid = tuple(tuple(r) for r in obj["codes"])
    if obj["family"] == "seidel":
        return SeidelMatrix(obj["n"], obj["q"], grid)
    return HermitianRootMatrix(obj["n"], obj["q"], grid, tuple(obj["diag"]))
