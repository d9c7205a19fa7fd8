import itertools
import threading

import pytest

from dihom import cube_model as cm
from dihom.errors import CapExceeded, IndexOutOfRange, MixedLength, NotComposable, ZeroDimensional

import oracles

R = cm.closure


def test_enumerate_faces_small():
    assert cm.enumerate_faces(0) == ("",)
    assert sorted(cm.enumerate_faces(1)) == ["+", "-", "0"]
    dims = [cm.face_dim(w) for w in cm.enumerate_faces(2)]
    assert (dims.count(0), dims.count(1), dims.count(2)) == (4, 4, 1)
    assert len(cm.enumerate_faces(4)) == 81


def test_boundary_faces_examples():
    assert cm.boundary_faces("00", "-") == {"-0", "0+"}
    assert cm.boundary_faces("00", "+") == {"0-", "+0"}
    assert cm.boundary_faces("000", "-") == {"-00", "0+0", "00-"}
    with pytest.raises(ZeroDimensional):
        cm.boundary_faces("-+", "-")


def test_closure_examples():
    assert R({"00"}).faces == frozenset(cm.enumerate_faces(2))
    assert R({"-0", "0+"}).faces == {"-0", "0+", "--", "-+", "++"}
    assert R(set()).faces == frozenset()
    with pytest.raises(MixedLength):
        R({"0", "00"})


def test_source_target_examples():
    assert cm.source(R({"00"}), 1) == R({"-0", "0+"})
    assert cm.target(R({"00"}), 1) == R({"0-", "+0"})
    assert cm.source(R({"000"}), 2) == R({"-00", "0+0", "00-"})
    c = R({"0"})
    assert cm.source(c, 1) == c and cm.target(c, 5) == c


def test_compose_examples():
    assert cm.compose_cells(R({"-0"}), R({"0+"}), 0) == R({"-0", "0+"})
    a = R({"-0"})
    assert cm.compose_cells(cm.source(a, 0), a, 0) == a
    with pytest.raises(NotComposable) as exc:
        cm.compose_cells(R({"-0"}), R({"+0"}), 0)
    assert exc.value.p == 0


def test_i2_matches_listed_cells():
    cells = cm.enumerate_In(2)
    listed = [R({w}) for w in ["--", "-+", "+-", "++", "-0", "0-", "+0", "0+", "00"]]
    listed += [R({"-0", "0+"}), R({"0-", "+0"})]
    assert set(cells) == set(listed) and len(cells) == 11


@pytest.mark.parametrize("n,count", [(0, 1), (1, 3), (2, 11), (3, 57)])
def test_counts_pinned(n, count):
    assert len(cm.enumerate_In(n)) == count


def test_i3_bijects_with_chain_tables():
    tables = set(oracles.steiner_tables(3))
    mine = set()
    for c in cm.enumerate_In(3):
        m = c.dim
        row = []
        for k in range(m):
            row.append(frozenset(w for w in cm.source(c, k).faces if cm.face_dim(w) == k))
            row.append(frozenset(w for w in cm.target(c, k).faces if cm.face_dim(w) == k))
        row.append(frozenset(w for w in c.faces if cm.face_dim(w) == m))
        mine.add(tuple(row))
    assert mine == tables


def test_i4_sanity():
    cells = cm.enumerate_In(4)
    by_dim = [sum(1 for c in cells if c.dim == d) for d in range(5)]
    assert by_dim == [16, 152, 286, 66, 1]


def test_cap():
    with pytest.raises(CapExceeded):
        cm.enumerate_In(5)


@pytest.mark.parametrize("n", [2, 3])
def test_globular_equations(n):
    for c in cm.enumerate_In(n):
        for p in range(c.dim - 1):
            for q in range(p + 1, c.dim):
                for st in (cm.source, cm.target):
                    assert cm.source(st(c, q), p) == cm.source(c, p)
                    assert cm.target(st(c, q), p) == cm.target(c, p)


@pytest.mark.parametrize("n", [2, 3])
def test_closed_under_operations(n):
    cells = cm.enumerate_In(n)
    cset = set(cells)
    for c in cells:
        for p in range(c.dim):
            assert cm.source(c, p) in cset and cm.target(c, p) in cset
    for a, b in itertools.product(cells, repeat=2):
        for p in range(min(a.dim, b.dim)):
            if cm.target(a, p) != cm.source(b, p):
                continue
            ab = cm.compose_cells(a, b, p)
            assert ab in cset
            assert cm.source(ab, p) == cm.source(a, p) and cm.target(ab, p) == cm.target(b, p)
            for m in range(p + 1, ab.dim):
                for st in (cm.source, cm.target):
                    assert st(ab, m) == cm.compose_cells(st(a, m), st(b, m), p)


def test_delta_examples():
    assert cm.delta_image(1, "-", R({"0"})) == R({"-0"})
    assert cm.delta_image(2, "+", R({"00"})) == R({"0+0"})
    c = R({"00"})
    assert cm.delta_image(1, "-", cm.source(c, 1)) == cm.source(cm.delta_image(1, "-", c), 1)
    with pytest.raises(IndexOutOfRange):
        cm.delta_image(4, "-", c)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_delta_is_functorial(n):
    cells = cm.enumerate_In(n)
    for i in range(1, n + 2):
        for side in "-+":
            d = lambda c: cm.delta_image(i, side, c)
            for c in cells:
                for p in range(c.dim):
                    assert d(cm.source(c, p)) == cm.source(d(c), p)
                    assert d(cm.target(c, p)) == cm.target(d(c), p)
            if n <= 2:
                for a, b in itertools.product(cells, repeat=2):
                    for p in range(min(a.dim, b.dim)):
                        if cm.target(a, p) == cm.source(b, p):
                            assert d(cm.compose_cells(a, b, p)) == cm.compose_cells(d(a), d(b), p)


def test_expression_round_trip():
    for c in cm.enumerate_In(3):
        assert cm.expression(c)
    assert cm.expression(R({"-0", "0+"})) == "(-0 *0 0+)"


def test_concurrent_enumeration():
    results = []

    def work():
        results.append(tuple(cm.enumerate_In(3)))

    ts = [threading.Thread(target=work) for _ in range(4)]
    for t in ts:
        t.start()
    for t in ts:
        t.join()
    assert len(set(results)) == 1
