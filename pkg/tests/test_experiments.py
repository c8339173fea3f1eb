import json
import random

import numpy as np
import pytest

from cycloherm.charpoly import charpoly_real
from cycloherm.errors import DomainError
from cycloherm.experiments import (
    _berkowitz_batch_mod,
    collect_classes,
    residue_key,
    run_experiment,
    sharpness_probe,
    theorem_bound,
)
from cycloherm.matrices import enumerate_matrices, sample, sample_stream, switch


# -- bounds ----------------------------------------------------------------------------


@pytest.mark.parametrize(
    "q,e,parity,family,expected",
    [
        (2, 3, "even", "hermitian", 4),        # 2^(floor(9/2) - 3 + 1)
        (2, 3, "odd", "hermitian", 8),         # 2^(ceil(9/2) - 3 + 1)
        (4, 4, "odd", "hermitian", 2**11),     # 2^(9 + 4 - 1 - 1)
        (4, 2, "even", "hermitian", 2),
        (4, 3, "even", "hermitian", 16),
        (4, 2, "odd", "hermitian", 4),
        (4, 3, "odd", "hermitian", 64),
        (2, 3, "odd", "seidel", 2),            # 2^((9 - 15 + 8)/2)
        (2, 4, "odd", "seidel", 4),
        (2, 4, "even", "seidel", 2),           # 2^((2)(1)/2)
        (9, 2, None, "hermitian", 3),          # 3^(1)
        (3, 3, None, "seidel", 81),  # 3^((3-1)^2)
        (5, 2, "odd", "hermitian", 5),
        (6, 7, None, "hermitian", 1),
        (12, 2, None, "seidel", 1),
        (8, 3, "odd", "hermitian", 2**5),      # 4 + ceil(3/2) - 1 - 0
        (8, 3, "even", "seidel", 4),
    ],
)
def test_theorem_bound_values(q, e, parity, family, expected):
    assert theorem_bound(q, e, parity, family) == expected


def test_theorem_bound_requires_parity_for_two_powers():
    with pytest.raises(DomainError):
        theorem_bound(2, 3, None, "hermitian")


def test_theorem_bound_rejects_bad_args():
    with pytest.raises(DomainError):
        theorem_bound(4, 0, "even", "hermitian")
    with pytest.raises(DomainError):
        theorem_bound(4, 2, "even", "other")


# -- residue keys ----------------------------------------------------------------------


def test_key_invariant_under_switching():
    rnd = random.Random(1)
    for _ in range(10):
        q = rnd.choice([2, 4, 8])
        h = sample(5, q, seed=rnd.randint(0, 10**6))
        d = tuple(rnd.randrange(q) for _ in range(5))
        e = rnd.randint(1, 3)
        assert residue_key(charpoly_real(h), e) == residue_key(charpoly_real(switch(h, d)), e)


def test_key_single_class_for_non_prime_power():
    a = sample(4, 6, seed=1)
    b = sample(4, 6, seed=2)
    assert residue_key(charpoly_real(a), 3) == residue_key(charpoly_real(b), 3)


def test_key_distinguishes_at_large_e():
    # with e beyond every coefficient valuation, keys separate exactly as
    # the unreduced polynomials do
    rnd = random.Random(5)
    seen = {}
    for s in range(30):
        h = sample(4, 2, seed=s)
        cp = charpoly_real(h)
        raw = tuple(c.coords for c in cp.coeffs)
        key = residue_key(cp, 12)
        if raw in seen:
            assert seen[raw] == key
        else:
            assert key not in seen.values()
            seen[raw] = key


def test_key_encoding_shape():
    h = sample(3, 8, seed=9)
    key = residue_key(charpoly_real(h), 2)
    parts = key.split(":")
    assert len(parts) == 3 * 2  # n coefficients, real dimension 2
    assert all(p.lstrip("-").isdigit() for p in parts)


# -- collection ------------------------------------------------------------------------


def test_exhaustive_h4_q2_within_bound():
    rep = run_experiment(n=4, q=2, e=3, family="hermitian", mode="exhaustive")
    assert rep.processed == 1024
    assert rep.distinct <= 4
    assert not rep.bound_violated


def test_exhaustive_small_seidel():
    rep = run_experiment(n=3, q=2, e=3, family="seidel", mode="exhaustive")
    assert rep.processed == 8
    assert rep.distinct <= rep.bound


def test_distinct_nonincreasing_in_e():
    mats = list(enumerate_matrices(3, 4, "hermitian"))
    previous = None
    for e in (4, 3, 2, 1):
        rep = collect_classes(
            iter(mats), e, n=3, q=4, family="hermitian", mode="exhaustive"
        )
        if previous is not None:
            assert rep.distinct <= previous
        previous = rep.distinct


def test_report_determinism():
    kw = dict(n=4, q=4, e=2, family="hermitian", mode="sample", budget=300, seed=11)
    a = run_experiment(**kw)
    b = run_experiment(**kw)
    da, db = a.as_dict(), b.as_dict()
    da.pop("elapsed"), db.pop("elapsed")
    assert da == db


def test_budget_zero_gives_empty_report():
    rep = run_experiment(n=4, q=4, e=2, family="hermitian", mode="sample", budget=0, seed=1)
    assert rep.processed == 0 and rep.distinct == 0


def test_sample_requires_seed():
    with pytest.raises(DomainError):
        run_experiment(n=4, q=4, e=2, mode="sample", budget=10)


def test_worker_partition_same_total():
    one = run_experiment(n=4, q=4, e=2, mode="sample", budget=200, seed=5, workers=1)
    two = run_experiment(n=4, q=4, e=2, mode="sample", budget=200, seed=5, workers=2)
    assert one.processed == two.processed == 200
    assert not one.bound_violated and not two.bound_violated


def test_report_json_and_csv():
    rep = run_experiment(n=3, q=2, e=2, family="seidel", mode="exhaustive")
    obj = json.loads(rep.to_json())
    assert obj["n"] == 3 and obj["family"] == "seidel"
    row = rep.to_csv_row()
    assert row.startswith("3,2,2,seidel,exhaustive,")


# -- fast path --------------------------------------------------------------------------


def test_batched_berkowitz_matches_generic_on_all_h4():
    mats = []
    keys = []
    for m in enumerate_matrices(4, 2, "hermitian"):
        mats.append(
            [
                [m.diag[i] if i == j else (1 if m.codes[i][j] == 0 else -1) for j in range(4)]
                for i in range(4)
            ]
        )
        keys.append(residue_key(charpoly_real(m), 3))
    polys = _berkowitz_batch_mod(np.array(mats, dtype=np.int64), 8)
    for key, row in zip(keys, polys):
        assert key == ":".join(str(int(c)) for c in row[1:])


def test_batched_berkowitz_seidel_cross_check():
    rnd = random.Random(3)
    mats = []
    keys = []
    for s in list(sample_stream(6, 2, seed=21, family="seidel", count=50)):
        grid = [[0 if i == j else (1 if s.codes[i][j] == 0 else -1) for j in range(6)] for i in range(6)]
        mats.append(grid)
        keys.append(residue_key(charpoly_real(s), 4))
    polys = _berkowitz_batch_mod(np.array(mats, dtype=np.int64), 16)
    for key, row in zip(keys, polys):
        assert key == ":".join(str(int(c)) for c in row[1:])


def test_fast_path_reports_are_reproducible():
    kw = dict(n=21, q=2, e=3, family="seidel", mode="sample", budget=2000, seed=9)
    a = run_experiment(**kw)
    b = run_experiment(**kw)
    da, db = a.as_dict(), b.as_dict()
    da.pop("elapsed"), db.pop("elapsed")
    assert da == db
    assert not a.bound_violated


# -- sharpness probe --------------------------------------------------------------------


def test_sharpness_probe_requires_e3():
    with pytest.raises(DomainError):
        sharpness_probe(5, 2, 2, budget=10, seed=1)


def test_sharpness_probe_small_q2():
    rep = sharpness_probe(9, 2, 3, budget=3000, seed=13, family="seidel")
    assert rep.mode == "sharpness"
    assert rep.distinct <= rep.bound
    assert rep.coverage and rep.coverage[0][1] == 1
    draws = [d for d, _ in rep.coverage]
    counts = [c for _, c in rep.coverage]
    assert draws == sorted(draws) and counts == sorted(counts)
