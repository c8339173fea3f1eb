import math
import random
from itertools import product

import pytest

from cycloherm.errors import BudgetError, DomainError
from cycloherm.matrices import (
    Graph,
    HermitianRootMatrix,
    SeidelMatrix,
    a_transform,
    enumerate_matrices,
    find_euler_switching,
    matrix_from_json,
    matrix_to_json,
    normalized_switchings,
    parse_matrix_text,
    residue_graph,
    sample,
    sample_stream,
    seidel_embed,
    switch,
    switching_class_residue_graphs,
    underlying_graph,
    write_matrix_text,
)
from cycloherm.charpoly import charpoly_real


def all_ones(n, q):
    return HermitianRootMatrix(n, q, tuple(tuple(0 for _ in range(n)) for _ in range(n)), (1,) * n)


# -- construction and embedding --------------------------------------------------------


def test_hermitean_constraint_enforced():
    with pytest.raises(DomainError):
        HermitianRootMatrix(2, 4, ((0, 1), (1, 0)), (1, 1))  # 1 + 1 != 0 mod 4


def test_odd_q_rejects_negative_diagonal():
    with pytest.raises(DomainError):
        HermitianRootMatrix(2, 3, ((0, 1), (0, 2)), (1, -1))


def test_seidel_embed_order_one():
    s = SeidelMatrix(1, 4, ((0,),))
    h = seidel_embed(s)
    assert h.diag == (1,) and h.n == 1


def test_seidel_embed_all_zero_codes_gives_all_ones():
    s = SeidelMatrix(3, 2, tuple(tuple(0 for _ in range(3)) for _ in range(3)))
    h = seidel_embed(s)
    assert h.codes == s.codes and all(d == 1 for d in h.diag)
    assert all(h.entry(i, j) == h.ring.one for i in range(3) for j in range(3))


def test_seidel_embed_q4_entry():
    s = SeidelMatrix(2, 4, ((0, 1), (3, 0)))
    h = seidel_embed(s)
    r = h.ring
    assert h.entry(0, 1) == r.zeta()
    assert h.entry(1, 0) == r.zeta(-1)
    assert h.entry(0, 0) == r.one


# -- the walk-matrix transform ---------------------------------------------------------


def test_a_transform_geometric_entry():
    h = HermitianRootMatrix(2, 4, ((0, 2), (2, 0)), (1, 1))
    a = a_transform(h)
    r = h.ring
    assert a.cell(0, 1) == r.one + r.zeta()  # (1 - z^2)/(1 - z)


def test_a_transform_diagonal():
    h = HermitianRootMatrix(2, 8, ((0, 1), (7, 0)), (1, -1))
    a = a_transform(h)
    assert a.cell(0, 0).is_zero()
    loop = a.cell(1, 1)
    assert loop * h.ring.one_minus_zeta() == h.ring.from_int(2)
    assert loop.valuation_one_minus_zeta() >= 1


def test_a_transform_q2_is_01_matrix():
    h = sample(4, 2, seed=1)
    a = a_transform(h)
    for i in range(4):
        for j in range(4):
            assert a.cell(i, j).coords[0] in (0, 1)


def test_a_transform_exactness_roundtrip():
    rnd = random.Random(7)
    for q in (3, 4, 8, 9):
        h = sample(4, q, seed=rnd.randint(0, 10**6))
        a = a_transform(h)
        r = h.ring
        omz = r.one_minus_zeta()
        for i in range(4):
            for j in range(4):
                assert a.cell(i, j) * omz == r.one - h.entry(i, j)


# -- derived graphs --------------------------------------------------------------------


def test_underlying_graph_odd_prime_power_loopless():
    h = sample(5, 3, seed=4)
    g = underlying_graph(h)
    assert g.loops == 0


def test_underlying_graph_all_ones_is_empty():
    g = underlying_graph(all_ones(4, 4))
    assert g.rows == (0, 0, 0, 0) and g.loops == 0


def test_underlying_graph_loop_at_negative_diagonal():
    h = HermitianRootMatrix(3, 4, tuple(tuple(0 for _ in range(3)) for _ in range(3)), (1, -1, 1))
    g = underlying_graph(h)
    assert g.loop_vertices() == [1]


def test_residue_graph_q2_edges_at_minus_one():
    rnd = random.Random(9)
    h = sample(5, 2, seed=17)
    g = residue_graph(h)
    for i in range(5):
        for j in range(i + 1, 5):
            expect = h.codes[i][j] == 1  # exponent 1 encodes the entry -1
            assert g.has_edge(i, j) == expect


def test_residue_graph_all_ones_empty():
    assert residue_graph(all_ones(4, 8)).rows == (0, 0, 0, 0)


def test_residue_graph_unit_entry_edge():
    h = HermitianRootMatrix(2, 4, ((0, 1), (3, 0)), (1, 1))
    assert residue_graph(h).has_edge(0, 1)


def test_residue_graph_loopless_even_with_loops_underlying():
    h = HermitianRootMatrix(2, 4, ((0, 1), (3, 0)), (-1, -1))
    assert residue_graph(h).loops == 0
    assert underlying_graph(h).loops != 0


# -- switching -------------------------------------------------------------------------


def test_switch_identity():
    h = sample(4, 4, seed=2)
    assert switch(h, (0, 0, 0, 0)) == h


def test_switch_two_by_two():
    h = HermitianRootMatrix(2, 4, ((0, 0), (0, 0)), (1, 1))
    moved = switch(h, (0, 1))
    assert moved.codes[0][1] == 3  # zeta^0 * zeta^(-1)
    assert moved.codes[1][0] == 1


def test_switch_preserves_charpoly():
    rnd = random.Random(13)
    for _ in range(25):
        q = rnd.choice([2, 3, 4, 8])
        h = sample(4, q, seed=rnd.randint(0, 10**6))
        d = tuple(rnd.randrange(q) for _ in range(4))
        assert charpoly_real(switch(h, d)).coeffs == charpoly_real(h).coeffs


def test_switching_class_single_vertex():
    h = all_ones(1, 4)
    graphs = switching_class_residue_graphs(h)
    assert len(graphs) == 1 and next(iter(graphs)).n == 1


def test_switching_class_q2_all_ones_n3():
    # oracle: brute force over the 4 normalized switchings of the empty
    # residue graph on 3 vertices (Seidel switching of the empty graph)
    h = all_ones(3, 2)
    graphs = switching_class_residue_graphs(h)
    oracle = set()
    for d in product((0, 1), repeat=2):
        oracle.add(residue_graph(switch(h, (0,) + d)))
    assert graphs == oracle
    assert len(graphs) <= 2**2


def test_switching_class_budget():
    h = sample(9, 4, seed=1)
    with pytest.raises(BudgetError):
        switching_class_residue_graphs(h, budget=100)


def test_q2_switching_is_seidel_switching():
    # switching by a 0/1 vector complements residue edges across the cut
    rnd = random.Random(31)
    for _ in range(20):
        h = sample(5, 2, seed=rnd.randint(0, 10**6))
        d = tuple(rnd.randrange(2) for _ in range(5))
        base = residue_graph(h)
        moved = residue_graph(switch(h, d))
        for i in range(5):
            for j in range(i + 1, 5):
                if d[i] == d[j]:
                    assert moved.has_edge(i, j) == base.has_edge(i, j)
                else:
                    assert moved.has_edge(i, j) != base.has_edge(i, j)


# -- Euler normalization ---------------------------------------------------------------


def test_find_euler_switching_n3_q4_unique():
    rnd = random.Random(77)
    for _ in range(10):
        h = sample(3, 4, seed=rnd.randint(0, 10**6))
        euler_graphs = set()
        for d in normalized_switchings(3, 4):
            g = residue_graph(switch(h, d))
            if g.is_euler():
                euler_graphs.add(g)
        assert len(euler_graphs) == 1
        d = find_euler_switching(h)
        assert residue_graph(switch(h, d)) in euler_graphs


def test_find_euler_switching_q8():
    rnd = random.Random(79)
    for n in (3, 5):
        for _ in range(4):
            h = sample(n, 8, seed=rnd.randint(0, 10**6))
            d = find_euler_switching(h)
            assert residue_graph(switch(h, d)).is_euler()


def test_find_euler_switching_identity_when_already_euler():
    rnd = random.Random(78)
    for _ in range(10):
        h = sample(5, 4, seed=rnd.randint(0, 10**6))
        he = switch(h, find_euler_switching(h))
        again = find_euler_switching(he)
        assert residue_graph(switch(he, again)) == residue_graph(he)


def test_find_euler_switching_rejects_even_n():
    with pytest.raises(DomainError):
        find_euler_switching(sample(4, 4, seed=3))


def test_find_euler_switching_rejects_bad_q():
    with pytest.raises(DomainError):
        find_euler_switching(sample(3, 3, seed=3))
    with pytest.raises(DomainError):
        find_euler_switching(sample(3, 2, seed=3))


def test_residue_graph_euler_iff_row_sums_in_ideal():
    def row_sums_in_ideal(h):
        a = a_transform(h)
        r = h.ring
        return all(
            sum((a.cell(i, j) for j in range(h.n)), r.zero).in_one_minus_zeta_power(1)
            for i in range(h.n)
        )

    rnd = random.Random(83)
    seen_noneuler = False
    for _ in range(20):
        q = rnd.choice([4, 8])
        h = sample(5, q, seed=rnd.randint(0, 10**6))
        euler = residue_graph(h).is_euler()
        assert euler == row_sums_in_ideal(h)
        seen_noneuler |= not euler
    assert seen_noneuler
    # and the Euler side, via a normalized matrix
    h = sample(5, 4, seed=84)
    he = switch(h, find_euler_switching(h))
    assert residue_graph(he).is_euler() and row_sums_in_ideal(he)


# -- sampling and enumeration ----------------------------------------------------------


def test_sample_deterministic():
    a = sample(5, 8, seed=123)
    b = sample(5, 8, seed=123)
    assert a == b


def test_sample_uniformity_q2():
    n, draws = 6, 400
    plus = 0
    total = 0
    for m in sample_stream(n, 2, seed=99, family="hermitian", count=draws):
        for i in range(n):
            for j in range(i + 1, n):
                total += 1
                plus += m.codes[i][j] == 0
    freq = plus / total
    sigma = math.sqrt(0.25 / total)
    assert abs(freq - 0.5) <= 3 * sigma


def test_sample_seidel_diag_zero():
    s = sample(4, 4, seed=5, family="seidel")
    assert isinstance(s, SeidelMatrix)
    assert all(s.entry(i, i).is_zero() for i in range(4))


def test_worker_streams_differ_and_are_deterministic():
    a = list(sample_stream(4, 4, seed=7, family="hermitian", count=3, worker=0))
    b = list(sample_stream(4, 4, seed=7, family="hermitian", count=3, worker=1))
    a2 = list(sample_stream(4, 4, seed=7, family="hermitian", count=3, worker=0))
    assert a == a2
    assert a != b


def test_enumerate_counts():
    assert sum(1 for _ in enumerate_matrices(2, 2, "hermitian")) == 8
    assert sum(1 for _ in enumerate_matrices(3, 2, "seidel")) == 8
    assert sum(1 for _ in enumerate_matrices(4, 2, "hermitian")) == 1024
    assert sum(1 for _ in enumerate_matrices(3, 3, "hermitian")) == 27


def test_enumerate_duplicate_free():
    seen = set(enumerate_matrices(3, 4, "seidel"))
    assert len(seen) == 4**3


def test_enumerate_budget():
    with pytest.raises(BudgetError):
        list(enumerate_matrices(8, 4, "hermitian", budget=1000))


# -- text and JSON formats -------------------------------------------------------------


def test_text_roundtrip_hermitian():
    h = sample(5, 8, seed=21)
    assert parse_matrix_text(write_matrix_text(h)) == h


def test_text_roundtrip_seidel():
    s = sample(4, 4, seed=22, family="seidel")
    assert parse_matrix_text(write_matrix_text(s)) == s


def test_text_header():
    h = sample(3, 4, seed=1)
    first = write_matrix_text(h).splitlines()[0]
    assert first == "3 4 hermitian"


def test_parse_rejects_garbage():
    with pytest.raises(DomainError):
        parse_matrix_text("")
    with pytest.raises(DomainError):
        parse_matrix_text("2 4 hermitian\n1 0\n")
    with pytest.raises(DomainError):
        parse_matrix_text("2 4 wat\n1 0\n0 1\n")


def test_json_roundtrip():
    h = sample(4, 4, seed=3)
    assert matrix_from_json(matrix_to_json(h)) == h
    s = sample(4, 4, seed=3, family="seidel")
    assert matrix_from_json(matrix_to_json(s)) == s


# -- graphs ----------------------------------------------------------------------------


def test_graph_rejects_asymmetric():
    with pytest.raises(DomainError):
        Graph(2, (1 << 1, 0), 0)


def test_graph_euler_flag():
    assert Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)]).is_euler()
    assert not Graph.from_edges(3, [(0, 1)]).is_euler()


def test_graph_neighbors_include_loops():
    g = Graph.from_edges(3, [(0, 1)], loops=[0])
    assert g.neighbors(0) == [0, 1]
    assert g.neighbors(1) == [0]
