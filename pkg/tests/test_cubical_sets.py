import json

import pytest

from dihom import fixtures
from dihom.cubical_sets import (Cell, CubicalSet, Polygraph2, compile_to_polygraph, cube_skeleton, grid,
                                grid_complex, model_from_dict, read_model, validate, validate_any,
                                write_model)
from dihom.errors import DegenerateGrid, InvalidModel, ParseError, SchemaError, UnsupportedDimension


def counts(K):
    return [len(K.of_dim(d)) for d in range(3)]


def square_set(bottom_src="v(0,0)"):
    return CubicalSet((
        Cell("v(0,0)", 0), Cell("v(1,0)", 0), Cell("v(0,1)", 0), Cell("v(1,1)", 0),
        Cell("ex(0,0)", 1, ((1, "-", bottom_src), (1, "+", "v(1,0)"))),
        Cell("ex(0,1)", 1, ((1, "-", "v(0,1)"), (1, "+", "v(1,1)"))),
        Cell("ey(0,0)", 1, ((1, "-", "v(0,0)"), (1, "+", "v(0,1)"))),
        Cell("ey(1,0)", 1, ((1, "-", "v(1,0)"), (1, "+", "v(1,1)"))),
        Cell("sq(0,0)", 2, ((1, "-", "ex(0,0)"), (1, "+", "ex(0,1)"), (2, "-", "ey(0,0)"), (2, "+", "ey(1,0)"))),
    ))


def test_square_valid():
    assert validate(square_set()).ok
    assert square_set().cells == grid_complex(grid(1, 1)).cells


def test_broken_relation_reported_once():
    rep = validate(square_set(bottom_src="v(0,1)"))
    assert [v["relation"] for v in rep.violations] == [1]


def test_missing_face_is_data():
    K = CubicalSet((Cell("a", 1, ((1, "-", "p"), (1, "+", "q"))),))
    rep = validate(K)
    assert not rep.ok and rep.violations[0]["relation"] == "faces"


def rect_area(holes):
    cells = set()
    for x0, y0, x1, y1 in holes:
        cells |= {(x, y) for x in range(x0, x1) for y in range(y0, y1)}
    return len(cells)


def oracle_counts(w, h, holes):
    """Vertices/edges/squares by counting the closure of the kept squares."""
    sq = {(x, y) for x in range(w) for y in range(h)}
    for x0, y0, x1, y1 in holes:
        sq -= {(x, y) for x in range(x0, x1) for y in range(y0, y1)}
    vs = {(x + a, y + b) for x, y in sq for a in (0, 1) for b in (0, 1)}
    es = {("h", x, y + b) for x, y in sq for b in (0, 1)} | {("v", x + a, y) for x, y in sq for a in (0, 1)}
    return [len(vs), len(es), len(sq)]


@pytest.mark.parametrize("w,h,holes", [(1, 1, []), (3, 3, [[1, 1, 2, 2]]), (5, 5, list(fixtures.SWISSFLAG_HOLES)),
                                       (2, 2, [[1, 0, 2, 1]]), (4, 2, [[1, 0, 3, 2]])])
def test_grid_counts_and_validity(w, h, holes):
    K = grid_complex(grid(w, h, holes))
    assert validate(K).ok
    assert counts(K) == oracle_counts(w, h, holes)


def test_pinned_grid_counts():
    assert counts(grid_complex(fixtures.single_square())) == [4, 4, 1]
    assert counts(grid_complex(fixtures.trou())) == [16, 24, 8]
    K = grid_complex(fixtures.swissflag())
    assert len(K.of_dim(2)) == 25 - rect_area(fixtures.SWISSFLAG_HOLES) == 20


def test_degenerate_grids():
    with pytest.raises(DegenerateGrid):
        grid(0, 3)
    with pytest.raises(InvalidModel):
        grid(2, 2, [[1, 1, 1, 2]])
    with pytest.raises(InvalidModel):
        grid(2, 2, [[1, 1, 3, 2]])


def test_compile_square():
    P = compile_to_polygraph(grid_complex(grid(1, 1)))
    (g, src, tgt), = P.gen2
    assert g == "sq(0,0)"
    assert src == ("ex(0,0)", "ey(1,0)") and tgt == ("ey(0,0)", "ex(0,1)")
    assert compile_to_polygraph(CubicalSet(())) == Polygraph2((), (), ())


@pytest.mark.parametrize("name", sorted(fixtures.NAMED))
def test_compiled_boundaries_parallel(name):
    m = fixtures.NAMED[name]()
    P = m if isinstance(m, Polygraph2) else compile_to_polygraph(grid_complex(m) if not isinstance(m, CubicalSet) else m)
    assert P.validate() == []
    ends = P.edge_map()
    for _, s, t in P.gen2:
        assert ends[s[0]][0] == ends[t[0]][0] and ends[s[-1]][1] == ends[t[-1]][1]


def test_trou_has_eight_generators():
    assert len(compile_to_polygraph(grid_complex(fixtures.trou())).gen2) == 8


def test_three_cells_rejected():
    with pytest.raises(UnsupportedDimension):
        compile_to_polygraph(cube_skeleton(3, top=3))
    assert validate(cube_skeleton(3, top=3)).ok


@pytest.mark.parametrize("name", sorted(fixtures.NAMED))
def test_round_trip(tmp_path, name):
    m = fixtures.NAMED[name]()
    p = tmp_path / "m.json"
    write_model(m, p)
    assert read_model(p) == m


def test_round_trip_cubical(tmp_path):
    K = grid_complex(fixtures.trou())
    write_model(K, tmp_path / "k.json")
    assert read_model(tmp_path / "k.json") == K


def test_grid_json():
    assert model_from_dict({"type": "grid2", "width": 1, "height": 1, "holes": []}) == grid(1, 1, [])


def test_parse_errors(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"type": "grid2",\n "width": 1,,}')
    with pytest.raises(ParseError) as exc:
        read_model(p)
    assert "line 2" in str(exc.value)
    with pytest.raises(ParseError):
        model_from_dict({"type": "grid2", "height": 1})
    with pytest.raises(SchemaError) as exc:
        model_from_dict({"type": "grid2", "width": 1, "height": 1, "colour": "red"})
    assert "colour" in str(exc.value)
    with pytest.raises(SchemaError):
        model_from_dict({"type": "hypergraph"})


def test_polygraph_problems():
    P = Polygraph2(("a", "b"), (("u", "a", "b"),), (("A", ("u",), ("w",)),))
    assert validate_any(P)
    Q = Polygraph2(("a", "b", "c"), (("u", "a", "b"), ("v", "a", "c")), (("A", ("u",), ("v",)),))
    assert any("non-parallel" in p for p in validate_any(Q))


def test_json_files_are_plain(tmp_path):
    write_model(fixtures.swissflag(), tmp_path / "s.json")
    d = json.loads((tmp_path / "s.json").read_text())
    assert d["type"] == "grid2" and d["width"] == 5
