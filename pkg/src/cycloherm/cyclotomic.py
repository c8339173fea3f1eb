"""Exact arithmetic in Z[zeta_q] and its maximal real subring.

Elements of Z[zeta_q] are stored as integer coordinate vectors in the power
basis {1, zeta, ..., zeta^(phi(q)-1)}, always reduced modulo the q-th
cyclotomic polynomial, so equality is coordinate equality and all arithmetic
is exact at arbitrary precision.

The module also provides the (1-zeta)-adic valuation, coordinates in the real
subring Z[zeta + zeta^(-1)] = Z[rho] with rho = (1-zeta)(1-zeta^(-1)), and
canonical reduction modulo the ideals rho^e Z[rho], realised as integer
lattices in Hermite normal form.

Two ring-specific conventions, both deliberate:

* q = 2: reductions "modulo rho^e" are performed modulo 2^e (even though
  rho = 4 there), matching how real symmetric sign matrices are counted.
* non-prime-power q: (1-zeta) is a unit, so valuations of nonzero elements
  are 0 and every residue lattice is the unit lattice.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import (
    ContextMismatchError,
    DivisibilityError,
    DomainError,
    NotRealError,
)

__all__ = [
    "CycElem",
    "RealCoords",
    "ResidueLattice",
    "RingContext",
    "cyclotomic_polynomial",
    "hermite_normal_form",
    "make_ring",
    "rational_intersection_exponent",
]

INFINITY = math.inf


def _prime_power_split(q: int) -> tuple[int, int] | None:
    """Return (p, f) with q = p^f, or None if q is not a prime power."""
    for p in range(2, q + 1):
        if p * p > q and p != q:
            break
        if q % p:
            continue
        f = 0
        m = q
        while m % p == 0:
            m //= p
            f += 1
        return (p, f) if m == 1 else None
    return (q, 1)


def _poly_exact_div(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials in ascending-coefficient form."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        if c % den[-1]:
            raise ArithmeticError("inexact polynomial division")
        c //= den[-1]
        out[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(q: int) -> tuple[int, ...]:
    """Ascending integer coefficients of the q-th cyclotomic polynomial."""
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    poly = [-1] + [0] * (q - 1) + [1]  # x^q - 1
    for d in range(1, q):
        if q % d == 0:
            poly = _poly_exact_div(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


class RingContext:
    """Immutable description of Z[zeta_q] with precomputed reduction data."""

    __slots__ = (
        "q",
        "p",
        "f",
        "phi",
        "cyclo",
        "is_prime_power",
        "real_dim",
        "_red",
        "_zeta_pow",
        "_div_adj",
        "_div_const",
        "_rho_pows",
        "_real_rows",
        "_real_inv",
        "zero",
        "one",
    )

    def __init__(self, q: int):
        if q < 2:
            raise DomainError(f"q must be >= 2, got {q}")
        self.q = q
        self.cyclo = cyclotomic_polynomial(q)
        self.phi = len(self.cyclo) - 1
        pp = _prime_power_split(q)
        self.is_prime_power = pp is not None
        self.p, self.f = pp if pp else (None, None)
        self.real_dim = self.phi // 2 if q > 2 else 1

        self._red = self._reduction_table()
        self._zeta_pow = tuple(self._xpow_reduced(m) for m in range(q))
        self.zero = CycElem(self, (0,) * self.phi)
        self.one = CycElem(self, self._zeta_pow[0])

        # (1 - zeta)^(-1) = G(zeta) / Phi_q(1), with G = (Phi_q - Phi_q(1))/(x-1).
        self._div_const = sum(self.cyclo)
        num = list(self.cyclo)
        num[0] -= self._div_const
        g = [0] * (len(num) - 1)
        carry = 0
        for i in range(len(num) - 1, 0, -1):
            carry += num[i]
            g[i - 1] = carry
        self._div_adj = CycElem(self, self._reduce_poly(g))

        rho = self.rho()
        pows = [self.one]
        for _ in range(1, self.real_dim):
            pows.append(pows[-1] * rho)
        self._rho_pows = tuple(pows)
        self._real_rows, self._real_inv = self._real_solver()

    # -- construction of elements ------------------------------------------------

    def element(self, coords: Iterable[int]) -> CycElem:
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.phi:
            raise DomainError(
                f"expected {self.phi} coordinates for q={self.q}, got {len(coords)}"
            )
        return CycElem(self, coords)

    def from_int(self, k: int) -> CycElem:
        return CycElem(self, (int(k),) + (0,) * (self.phi - 1))

    def zeta(self, k: int = 1) -> CycElem:
        """zeta^k as a reduced element."""
        return CycElem(self, self._zeta_pow[k % self.q])

    def one_minus_zeta(self) -> CycElem:
        return self.one - self.zeta(1)

    def rho(self) -> CycElem:
        """(1 - zeta)(1 - zeta^(-1)) = 2 - zeta - zeta^(-1)."""
        return self.from_int(2) - self.zeta(1) - self.zeta(-1)

    def rho_power(self, k: int) -> CycElem:
        out = self.one
        rho = self.rho()
        for _ in range(k):
            out = out * rho
        return out

    # -- internal tables -----------------------------------------------------------

    def _reduction_table(self) -> tuple[tuple[int, ...], ...]:
        phi = self.phi
        red = [tuple(1 if i == m else 0 for i in range(phi)) for m in range(phi)]
        for m in range(phi, 2 * phi - 1):
            prev = red[m - 1]
            top = prev[-1]
            vec = [0] * phi
            for i in range(phi):
                vec[i] = (prev[i - 1] if i else 0) - top * self.cyclo[i]
            red.append(tuple(vec))
        return tuple(red)

    def _xpow_reduced(self, m: int) -> tuple[int, ...]:
        if m < len(self._red):
            return self._red[m]
        vec = list(self._red[-1])
        for _ in range(m - (len(self._red) - 1)):
            top = vec[-1]
            vec = [(vec[i - 1] if i else 0) - top * self.cyclo[i] for i in range(self.phi)]
        return tuple(vec)

    def _reduce_poly(self, poly: Sequence[int]) -> tuple[int, ...]:
        vec = [0] * self.phi
        for m, c in enumerate(poly):
            if c:
                row = self._xpow_reduced(m)
                for i in range(self.phi):
                    vec[i] += c * row[i]
        return tuple(vec)

    def _real_solver(self):
        """Pivot rows and exact inverse for solving in the rho-power basis."""
        cols = [p.coords for p in self._rho_pows]
        dim = self.real_dim
        # Gaussian elimination over Q to pick phi x dim -> dim x dim invertible rows.
        work = [[Fraction(cols[j][i]) for j in range(dim)] for i in range(self.phi)]
        chosen: list[int] = []
        used = [False] * self.phi
        for j in range(dim):
            pivot = next(
                i for i in range(self.phi) if not used[i] and work[i][j] != 0
            )
            chosen.append(pivot)
            used[pivot] = True
            inv = 1 / work[pivot][j]
            work[pivot] = [v * inv for v in work[pivot]]
            for i in range(self.phi):
                if i != pivot and work[i][j] != 0:
                    factor = work[i][j]
                    work[i] = [a - factor * b for a, b in zip(work[i], work[pivot])]
        chosen_sorted = sorted(chosen)
        sq = [[Fraction(cols[j][i]) for j in range(dim)] for i in chosen_sorted]
        inv = _fraction_inverse(sq)
        return tuple(chosen_sorted), inv

    # -- misc ----------------------------------------------------------------------

    def __repr__(self) -> str:
        return f"RingContext(q={self.q})"

    def __eq__(self, other) -> bool:
        return isinstance(other, RingContext) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("RingContext", self.q))


def _fraction_inverse(m: list[list[Fraction]]) -> tuple[tuple[Fraction, ...], ...]:
    n = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


@lru_cache(maxsize=None)
def make_ring(q: int) -> RingContext:
    """Build (and cache) the ring context for Z[zeta_q]."""
    return RingContext(q)


class CycElem:
    """Element of Z[zeta_q] in the reduced power basis. Immutable."""

    __slots__ = ("ring", "coords")

    def __init__(self, ring: RingContext, coords: tuple[int, ...]):
        self.ring = ring
        self.coords = coords

    # -- ring operations -------------------------------------------------------

    def _check(self, other: "CycElem") -> None:
        if other.ring is not self.ring and other.ring != self.ring:
            raise ContextMismatchError(
                f"mixing elements of q={self.ring.q} and q={other.ring.q}"
            )

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        elif not isinstance(other, CycElem):
            return NotImplemented
        self._check(other)
        return CycElem(self.ring, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        elif not isinstance(other, CycElem):
            return NotImplemented
        self._check(other)
        return CycElem(self.ring, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return CycElem(self.ring, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, int):
            return CycElem(self.ring, tuple(other * a for a in self.coords))
        if not isinstance(other, CycElem):
            return NotImplemented
        self._check(other)
        ring = self.ring
        phi = ring.phi
        a = self.coords
        b = other.coords
        prod = [0] * (2 * phi - 1)
        for i in range(phi):
            ai = a[i]
            if ai:
                for j in range(phi):
                    bj = b[j]
                    if bj:
                        prod[i + j] += ai * bj
        vec = list(prod[:phi])
        red = ring._red
        for m in range(phi, 2 * phi - 1):
            c = prod[m]
            if c:
                row = red[m]
                for i in range(phi):
                    vec[i] += c * row[i]
        return CycElem(ring, tuple(vec))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative powers are not defined in Z[zeta]")
        out = self.ring.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self == self.ring.from_int(other)
        return (
            isinstance(other, CycElem)
            and other.ring == self.ring
            and other.coords == self.coords
        )

    def __hash__(self) -> int:
        return hash((self.ring.q, self.coords))

    def __repr__(self) -> str:
        return f"CycElem(q={self.ring.q}, {list(self.coords)})"

    def is_zero(self) -> bool:
        return not any(self.coords)

    def to_json(self) -> str:
        """Canonical serialization: decimal integer array, platform-stable."""
        return "[" + ", ".join(str(c) for c in self.coords) + "]"

    @classmethod
    def from_json(cls, ring: RingContext, text: str) -> "CycElem":
        import json

        return ring.element(json.loads(text))

    # -- structure maps ----------------------------------------------------------

    def conj(self) -> "CycElem":
        """Image under the ring automorphism zeta -> zeta^(-1)."""
        ring = self.ring
        vec = [0] * ring.phi
        for j, c in enumerate(self.coords):
            if c:
                row = ring._zeta_pow[(ring.q - j) % ring.q]
                for i in range(ring.phi):
                    vec[i] += c * row[i]
        return CycElem(ring, tuple(vec))

    def is_real(self) -> bool:
        return self.conj() == self

    def divide_by_one_minus_zeta(self) -> "CycElem":
        """Exact quotient by (1 - zeta); DivisibilityError if not a multiple.

        Failure of this division is precisely failure of membership in the
        ideal (1 - zeta) Z[zeta].
        """
        ring = self.ring
        t = self * ring._div_adj
        c = ring._div_const
        if any(x % c for x in t.coords):
            raise DivisibilityError("element is not divisible by (1 - zeta)")
        return CycElem(ring, tuple(x // c for x in t.coords))

    def divide_exact_int(self, k: int) -> "CycElem":
        """Exact quotient by a rational integer k."""
        if any(x % k for x in self.coords):
            raise DivisibilityError(f"element is not divisible by {k}")
        return CycElem(self.ring, tuple(x // k for x in self.coords))

    def valuation_one_minus_zeta(self) -> int | float:
        """Largest k with self in (1-zeta)^k Z[zeta]; inf for 0.

        For non-prime-power q the element (1 - zeta) is a unit, so nonzero
        elements have valuation 0.
        """
        if self.is_zero():
            return INFINITY
        if not self.ring.is_prime_power:
            return 0
        v = 0
        cur = self
        while True:
            try:
                cur = cur.divide_by_one_minus_zeta()
            except DivisibilityError:
                return v
            v += 1

    def in_one_minus_zeta_power(self, k: int) -> bool:
        """Membership in (1-zeta)^k Z[zeta] by k exact division attempts."""
        if k <= 0 or self.is_zero():
            return True
        if not self.ring.is_prime_power:
            return True
        cur = self
        for _ in range(k):
            try:
                cur = cur.divide_by_one_minus_zeta()
            except DivisibilityError:
                return False
        return True

    def to_real_coords(self) -> "RealCoords":
        """Coordinates in the basis {1, rho, ..., rho^(phi/2 - 1)} of Z[rho].

        Raises NotRealError unless the element is fixed by conjugation.
        """
        ring = self.ring
        if not self.is_real():
            raise NotRealError(f"{self!r} is not fixed by zeta -> zeta^(-1)")
        rows, inv = ring._real_rows, ring._real_inv
        rhs = [self.coords[r] for r in rows]
        sol = []
        for invrow in inv:
            v = sum(c * b for c, b in zip(invrow, rhs))
            if v.denominator != 1:
                raise NotRealError(f"{self!r} has no integral rho-power coordinates")
            sol.append(int(v))
        # Full verification guards against a consistent-looking partial solve.
        check = ring.zero
        for c, pw in zip(sol, ring._rho_pows):
            check = check + c * pw
        if check != self:
            raise NotRealError(f"{self!r} is not in Z[rho]")
        return RealCoords(ring, tuple(sol))


class RealCoords:
    """Element of Z[zeta + zeta^(-1)] in the rho-power basis. Immutable."""

    __slots__ = ("ring", "coords")

    def __init__(self, ring: RingContext, coords: tuple[int, ...]):
        if len(coords) != ring.real_dim:
            raise DomainError(
                f"expected {ring.real_dim} real coordinates for q={ring.q}"
            )
        self.ring = ring
        self.coords = tuple(int(c) for c in coords)

    def to_cyc(self) -> CycElem:
        out = self.ring.zero
        for c, pw in zip(self.coords, self.ring._rho_pows):
            out = out + c * pw
        return out

    def is_zero(self) -> bool:
        return not any(self.coords)

    def to_json(self) -> str:
        return "[" + ", ".join(str(c) for c in self.coords) + "]"

    @classmethod
    def from_json(cls, ring: RingContext, text: str) -> "RealCoords":
        import json

        return cls(ring, tuple(json.loads(text)))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RealCoords)
            and other.ring == self.ring
            and other.coords == self.coords
        )

    def __hash__(self) -> int:
        return hash((self.ring.q, "real", self.coords))

    def __repr__(self) -> str:
        return f"RealCoords(q={self.ring.q}, {list(self.coords)})"


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Row-style HNF of a nonsingular square integer matrix.

    Output is upper triangular with positive diagonal and entries above each
    pivot reduced into [0, pivot). Deterministic: plain Euclidean row
    reduction with columns processed left to right.
    """
    m = [list(map(int, r)) for r in rows]
    nrows = len(m)
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        while True:
            nz = [r for r in range(rank, nrows) if m[r][col]]
            if not nz:
                break
            r_min = min(nz, key=lambda r: (abs(m[r][col]), r))
            m[rank], m[r_min] = m[r_min], m[rank]
            done = True
            for r in range(rank + 1, nrows):
                if m[r][col]:
                    qd = m[r][col] // m[rank][col]
                    m[r] = [a - qd * b for a, b in zip(m[r], m[rank])]
                    if m[r][col]:
                        done = False
            if done:
                break
        if rank < nrows and m[rank][col]:
            if m[rank][col] < 0:
                m[rank] = [-a for a in m[rank]]
            for r in range(rank):
                qd = m[r][col] // m[rank][col]
                if qd:
                    m[r] = [a - qd * b for a, b in zip(m[r], m[rank])]
            rank += 1
    if rank != nrows:
        raise DomainError("matrix is singular; HNF basis would not be square")
    return tuple(tuple(r) for r in m)


class ResidueLattice:
    """Integer row lattice rho^e Z[rho] in rho-power coordinates, in HNF."""

    __slots__ = ("ring", "e", "basis")

    def __init__(self, ring: RingContext, e: int, basis: tuple[tuple[int, ...], ...]):
        self.ring = ring
        self.e = e
        self.basis = basis

    @property
    def index(self) -> int:
        """Number of residue classes (product of the HNF diagonal)."""
        out = 1
        for i, row in enumerate(self.basis):
            out *= row[i]
        return out

    def reduce(self, x: RealCoords) -> RealCoords:
        """Canonical representative of x modulo the lattice.

        Each coordinate lands in [0, d_i) against the HNF diagonal; the map is
        idempotent and constant on cosets.
        """
        if x.ring != self.ring:
            raise ContextMismatchError("lattice and element rings differ")
        v = list(x.coords)
        for i, row in enumerate(self.basis):
            d = row[i]
            k = v[i] // d
            if k:
                v = [a - k * b for a, b in zip(v, row)]
        return RealCoords(self.ring, tuple(v))

    def contains(self, x: RealCoords) -> bool:
        return self.reduce(x).is_zero()

    def all_residues(self) -> list[RealCoords]:
        """Every canonical residue (intended for small indices in tests)."""
        out: list[RealCoords] = []

        def rec(i: int, v: list[int]):
            if i == len(self.basis):
                out.append(self.reduce(RealCoords(self.ring, tuple(v))))
                return
            for c in range(self.basis[i][i]):
                rec(i + 1, v + [c])

        rec(0, [])
        return sorted(set(out), key=lambda r: r.coords)

    def __repr__(self) -> str:
        return f"ResidueLattice(q={self.ring.q}, e={self.e}, basis={self.basis})"


@lru_cache(maxsize=None)
def residue_lattice(ring: RingContext, e: int) -> ResidueLattice:
    """HNF row basis of rho^e Z[rho] as an integer lattice in RealCoords.

    For q = 2 the lattice is 2^e Z; for non-prime-power q it is the unit
    lattice (the ideal is the whole ring).
    """
    if e < 1:
        raise DomainError(f"e must be >= 1, got {e}")
    dim = ring.real_dim
    if ring.q == 2:
        return ResidueLattice(ring, e, ((2**e,),))
    if not ring.is_prime_power:
        ident = tuple(
            tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)
        )
        return ResidueLattice(ring, e, ident)
    rows = [ring.rho_power(e + i).to_real_coords().coords for i in range(dim)]
    return ResidueLattice(ring, e, hermite_normal_form(rows))


def rational_intersection_exponent(ring: RingContext, e: int) -> int:
    """The t with (rho^e Z[rho]) cap Z = 2^t Z, for q = 2^f with f > 1.

    Writes e = 2^(f-2) g + h with 0 <= h < 2^(f-2) and returns
    g + ceil(h / 2^(f-2)), i.e. g plus one when h > 0.
    """
    if ring.p != 2 or ring.f is None or ring.f <= 1:
        raise DomainError("requires q = 2^f with f > 1")
    if e < 0:
        raise DomainError("e must be >= 0")
    block = 2 ** (ring.f - 2)
    g, h = divmod(e, block)
    return g + (1 if h else 0)
