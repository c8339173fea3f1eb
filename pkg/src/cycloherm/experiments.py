"""Residue-class collection and the counting bounds it is measured against.

A characteristic polynomial is keyed by the canonical residues of its
coefficients a_1..a_n modulo the lattice rho^e Z[rho] (a_0 is always 1 and is
omitted).  Streams of matrices are folded into a deduplicating key set and
compared against the closed-form class-count bounds; exceeding a bound is a
release-blocking theorem violation, while failing to *reach* it is only
reported (sharpness is a conjecture, not a theorem).

For q = 2 the polynomial coefficients are only ever needed modulo 2^e, so
sampling runs use a batched integer Berkowitz evaluation with all arithmetic
reduced modulo 2^e (a ring homomorphism, hence exact); the generic exact path
remains the reference and the two are cross-checked in the tests.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .charpoly import CharPoly, charpoly_real
from .cyclotomic import make_ring, residue_lattice
from .errors import BudgetError, DomainError
from .matrices import (
    HermitianRootMatrix,
    SeidelMatrix,
    enumerate_matrices,
    sample_stream,
)

__all__ = [
    "ExperimentReport",
    "collect_classes",
    "residue_key",
    "run_experiment",
    "sharpness_probe",
    "theorem_bound",
]

DEFAULT_KEY_CAP = 2_000_000


def theorem_bound(q: int, e: int, n_parity: str | None, family: str) -> int:
    """Closed-form upper bound for the number of residue classes at level e.

    Returns 1 for non-prime-power q (the ideal is the whole ring). For q = 2
    and q = 2^f the bound depends on the parity of the matrix order, so
    n_parity ("even" or "odd") is required there.
    """
    if e < 1:
        raise DomainError("e must be >= 1")
    if family not in ("hermitian", "seidel"):
        raise DomainError(f"unknown family {family!r}")
    ring = make_ring(q)
    if not ring.is_prime_power:
        return 1
    p, f = ring.p, ring.f
    if p != 2:
        return p ** ((e - 1) ** 2)
    if n_parity not in ("even", "odd"):
        raise DomainError("n_parity ('even'|'odd') is required for q a power of 2")
    even = n_parity == "even"
    if f == 1:
        if family == "hermitian":
            exp = (e * e // 2) - e + 1 if even else -(e * e // -2) - e + 1
        else:
            exp = (e - 2) * (e - 3) // 2 if even else (e * e - 5 * e + 8) // 2
        return 2**exp
    ceil_term = -((4 * e) // -(2**f))  # ceil(2^(2-f) e)
    if family == "hermitian":
        if even:
            exp = (e - 1) * (e - 2) + ceil_term - 1
        else:
            exp = (e - 1) ** 2 + ceil_term - 1 - e // 4
    else:
        exp = (e - 1) * (e - 2) if even else (e - 1) ** 2 - e // 4
    return 2**exp


def residue_key(cp: CharPoly, e: int) -> str:
    """Deterministic byte-exact key: reduced coordinates of a_1..a_n joined
    with ':' in row-major order (identical keys iff congruent mod rho^e)."""
    lattice = residue_lattice(cp.ring, e)
    parts: list[str] = []
    for i in range(1, cp.n + 1):
        parts.extend(str(c) for c in lattice.reduce(cp.coeff(i)).coords)
    return ":".join(parts)


@dataclass
class ExperimentReport:
    n: int
    q: int
    e: int
    family: str
    mode: str
    processed: int
    distinct: int
    bound: int | None
    saturated: bool
    elapsed: float
    seed: int | None
    workers: int = 1
    bound_violated: bool = False
    coverage: list[tuple[int, int]] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "e": self.e,
            "family": self.family,
            "mode": self.mode,
            "processed": self.processed,
            "distinct": self.distinct,
            "bound": self.bound,
            "saturated": self.saturated,
            "bound_violated": self.bound_violated,
            "elapsed": round(self.elapsed, 3),
            "seed": self.seed,
            "workers": self.workers,
            "coverage": [list(p) for p in self.coverage],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)

    CSV_HEADER = "n,q,e,family,mode,draws,distinct,bound,saturated,seconds"

    def to_csv_row(self) -> str:
        return (
            f"{self.n},{self.q},{self.e},{self.family},{self.mode},{self.processed},"
            f"{self.distinct},{self.bound if self.bound is not None else ''},"
            f"{int(self.saturated)},{self.elapsed:.3f}"
        )


def collect_classes(
    matrices: Iterable[HermitianRootMatrix | SeidelMatrix],
    e: int,
    *,
    n: int,
    q: int,
    family: str,
    mode: str,
    seed: int | None = None,
    workers: int = 1,
    key_cap: int = DEFAULT_KEY_CAP,
    stop_at_bound: bool = False,
) -> ExperimentReport:
    """Fold a matrix stream into distinct residue keys and compare with the bound."""
    t0 = time.time()
    parity = "even" if n % 2 == 0 else "odd"
    bound = theorem_bound(q, e, parity, family)
    keys: set[str] = set()
    coverage: list[tuple[int, int]] = []
    processed = 0
    for m in matrices:
        processed += 1
        key = residue_key(charpoly_real(m), e)
        if key not in keys:
            keys.add(key)
            coverage.append((processed, len(keys)))
            if len(keys) > key_cap:
                raise BudgetError(f"distinct-key set exceeded cap {key_cap}")
        if stop_at_bound and len(keys) >= bound:
            break
    distinct = len(keys)
    return ExperimentReport(
        n=n,
        q=q,
        e=e,
        family=family,
        mode=mode,
        processed=processed,
        distinct=distinct,
        bound=bound,
        saturated=distinct == bound,
        bound_violated=distinct > bound,
        elapsed=time.time() - t0,
        seed=seed,
        workers=workers,
        coverage=coverage,
    )


# -- batched mod-2^e fast path for q = 2 ---------------------------------------------


def _berkowitz_batch_mod(mats: np.ndarray, mod: int) -> np.ndarray:
    """Characteristic polynomials of a batch of integer matrices, mod `mod`.

    mats: (B, n, n) int64. Returns (B, n+1) coefficients of det(xI - M) with
    leading 1, every value reduced modulo `mod`. Berkowitz is division-free,
    so reducing after each ring operation is exact modulo `mod`.
    """
    b, n, _ = mats.shape
    mats = np.mod(mats, mod)
    poly = np.zeros((b, 2), dtype=np.int64)
    poly[:, 0] = 1
    poly[:, 1] = np.mod(-mats[:, 0, 0], mod)
    for r in range(1, n):
        row = mats[:, r, :r]
        col = mats[:, :r, r]
        lead = mats[:, :r, :r]
        toep = np.zeros((b, r + 2), dtype=np.int64)
        toep[:, 0] = 1
        toep[:, 1] = np.mod(-mats[:, r, r], mod)
        v = col
        for step in range(r):
            dot = np.mod(np.einsum("bi,bi->b", row, v), mod)
            toep[:, step + 2] = np.mod(-dot, mod)
            if step < r - 1:
                v = np.mod(np.einsum("bij,bj->bi", lead, v), mod)
        new = np.zeros((b, r + 2), dtype=np.int64)
        for i in range(r + 2):
            lo = max(0, i - r)
            hi = min(i, r + 1)
            acc = np.zeros(b, dtype=np.int64)
            for k in range(lo, hi + 1):
                if i - k < poly.shape[1]:
                    acc = acc + toep[:, k] * poly[:, i - k]
            new[:, i] = np.mod(acc, mod)
        poly = new
    return poly


def _sample_batch_q2(
    rng: np.random.Generator, batch: int, n: int, family: str
) -> np.ndarray:
    """Batch of symmetric +-1 matrices (diag +-1 for hermitian, 0 for seidel)."""
    signs = 1 - 2 * rng.integers(0, 2, size=(batch, n, n), dtype=np.int64)
    upper = np.triu(signs, k=1)
    mats = upper + upper.transpose(0, 2, 1)
    if family == "hermitian":
        diag = 1 - 2 * rng.integers(0, 2, size=(batch, n), dtype=np.int64)
        idx = np.arange(n)
        mats[:, idx, idx] = diag
    return mats


def _keys_q2_batch(mats: np.ndarray, e: int) -> list[str]:
    mod = 2**e
    polys = _berkowitz_batch_mod(mats, mod)
    return [":".join(str(int(c)) for c in row[1:]) for row in polys]


def _collect_q2_sampled(
    n: int,
    e: int,
    family: str,
    draws: int,
    seed: int,
    workers: int,
    batch: int = 4096,
    key_cap: int = DEFAULT_KEY_CAP,
) -> ExperimentReport:
    t0 = time.time()
    parity = "even" if n % 2 == 0 else "odd"
    bound = theorem_bound(2, e, parity, family)
    keys: set[str] = set()
    coverage: list[tuple[int, int]] = []
    processed = 0
    per_worker = [draws // workers + (1 if w < draws % workers else 0) for w in range(workers)]
    for w, quota in enumerate(per_worker):
        bits = np.random.Philox(key=seed)
        rng = np.random.Generator(bits.jumped(w) if w else bits)
        left = quota
        while left > 0:
            cur = min(batch, left)
            mats = _sample_batch_q2(rng, cur, n, family)
            for key in _keys_q2_batch(mats, e):
                processed += 1
                if key not in keys:
                    keys.add(key)
                    coverage.append((processed, len(keys)))
                    if len(keys) > key_cap:
                        raise BudgetError(f"distinct-key set exceeded cap {key_cap}")
            left -= cur
    distinct = len(keys)
    return ExperimentReport(
        n=n,
        q=2,
        e=e,
        family=family,
        mode="sample",
        processed=processed,
        distinct=distinct,
        bound=bound,
        saturated=distinct == bound,
        bound_violated=distinct > bound,
        elapsed=time.time() - t0,
        seed=seed,
        workers=workers,
        coverage=coverage,
    )


def run_experiment(
    *,
    n: int,
    q: int,
    e: int,
    family: str = "hermitian",
    mode: str = "exhaustive",
    budget: int | None = None,
    seed: int | None = None,
    workers: int = 1,
    key_cap: int = DEFAULT_KEY_CAP,
    enum_budget: int = 10**6,
) -> ExperimentReport:
    """One residue-class collection run, dispatching to the q=2 fast path.

    mode="exhaustive" walks every matrix (budget-guarded); mode="sample"
    draws `budget` matrices from the seeded Philox stream.
    """
    if mode == "exhaustive":
        stream = enumerate_matrices(n, q, family, budget=enum_budget)
        return collect_classes(
            stream, e, n=n, q=q, family=family, mode=mode, seed=seed,
            workers=workers, key_cap=key_cap,
        )
    if mode != "sample":
        raise DomainError(f"unknown mode {mode!r}")
    if seed is None:
        raise DomainError("sampling requires an explicit seed")
    if budget is None or budget < 0:
        raise DomainError("sampling requires a nonnegative --budget (draw count)")
    if q == 2 and budget > 0:
        return _collect_q2_sampled(n, e, family, budget, seed, workers, key_cap=key_cap)
    per_worker = [budget // workers + (1 if w < budget % workers else 0) for w in range(workers)]
    def stream() -> Iterator:
        for w, quota in enumerate(per_worker):
            yield from sample_stream(n, q, seed, family, quota, worker=w)
    return collect_classes(
        stream(), e, n=n, q=q, family=family, mode=mode, seed=seed,
        workers=workers, key_cap=key_cap,
    )


def sharpness_probe(
    n: int,
    q: int,
    e: int,
    budget: int,
    seed: int,
    family: str = "hermitian",
    workers: int = 1,
) -> ExperimentReport:
    """Sample until the class count saturates the bound or the budget runs out.

    Saturation is soft evidence for the sharpness conjecture: the report says
    whether it happened, never fails on an unsaturated run. The coverage
    curve (draws vs distinct) is embedded in the report.
    """
    if e < 3:
        raise DomainError("the sharpness conjecture concerns e >= 3")
    report = run_experiment(
        n=n, q=q, e=e, family=family, mode="sample", budget=budget,
        seed=seed, workers=workers,
    )
    report.mode = "sharpness"
    return report
