"""Finite precubical sets, grid models, polygraphs and their JSON form.

Orientation: face index 1 is the vertical direction and index 2 the
horizontal one.  A grid square ``sq(x,y)`` has bottom edge ``ex(x,y)``
(its 1- face), top ``ex(x,y+1)`` (1+), left ``ey(x,y)`` (2-) and right
``ey(x+1,y)`` (2+).  Compiled 2-generators go from bottom-then-right to
left-then-top, the orientation of the standard square.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path as FsPath

from .errors import DegenerateGrid, InvalidModel, ParseError, SchemaError, UnsupportedDimension


@dataclass(frozen=True)
class Cell:
    id: str
    dim: int
    faces: tuple = ()  # ((index, side, face_id), ...) sorted

    def __post_init__(self):
        object.__setattr__(self, "faces", tuple(sorted(self.faces)))

    def face(self, i, side):
        for j, s, f in self.faces:
            if j == i and s == side:
                return f
        return None


@dataclass(frozen=True)
class CubicalSet:
    cells: tuple  # of Cell, in input order
    intended_initial: tuple = ()
    intended_final: tuple = ()

    @property
    def dim(self) -> int:
        return max((c.dim for c in self.cells), default=-1)

    def by_id(self) -> dict:
        return {c.id: c for c in self.cells}

    def of_dim(self, d) -> list:
        return [c for c in self.cells if c.dim == d]

    def face(self, cid, i, side):
        return self.by_id()[cid].face(i, side)


@dataclass(frozen=True)
class GridModel:
    width: int
    height: int
    holes: tuple = ()
    intended_initial: tuple = ()
    intended_final: tuple = ()

    def hole_squares(self) -> set:
        out = set()
        for x0, y0, x1, y1 in self.holes:
            for x in range(x0, x1):
                for y in range(y0, y1):
                    out.add((x, y))
        return out

    def kept_squares(self) -> list:
        gone = self.hole_squares()
        return [(x, y) for y in range(self.height) for x in range(self.width) if (x, y) not in gone]


@dataclass(frozen=True)
class Polygraph2:
    vertices: tuple
    gen1: tuple  # ((id, src, tgt), ...)
    gen2: tuple = ()  # ((id, (edge, ...), (edge, ...)), ...)
    intended_initial: tuple = ()
    intended_final: tuple = ()

    def edge_map(self) -> dict:
        return {e: (s, t) for e, s, t in self.gen1}

    def validate(self) -> list:
        """Problems as strings; empty when the polygraph is well formed."""
        problems = []
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            problems.append("duplicate vertex ids")
        edges = {}
        for e, s, t in self.gen1:
            if e in edges or e in vs:
                problems.append(f"duplicate id {e}")
            if s not in vs or t not in vs:
                problems.append(f"edge {e} references an unknown vertex")
            edges[e] = (s, t)
        seen = set()
        for g, src, tgt in self.gen2:
            if g in seen or g in edges or g in vs:
                problems.append(f"duplicate id {g}")
            seen.add(g)
            ends = []
            for side, path in (("source", src), ("target", tgt)):
                if not path:
                    problems.append(f"2-generator {g} has an empty {side}")
                    ends.append(None)
                    continue
                if any(e not in edges for e in path):
                    problems.append(f"2-generator {g} {side} uses an unknown edge")
                    ends.append(None)
                    continue
                for a, b in zip(path, path[1:]):
                    if edges[a][1] != edges[b][0]:
                        problems.append(f"2-generator {g} {side} is not a path at {a},{b}")
                ends.append((edges[path[0]][0], edges[path[-1]][1]))
            if None not in ends and ends[0] != ends[1]:
                problems.append(f"2-generator {g} has non-parallel source and target")
        for v in self.intended_initial + self.intended_final:
            if v not in vs:
                problems.append(f"intended state {v} is not a vertex")
        return problems


# ----------------------------------------------------------------- validation

@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, relation, *cells, detail=""):
        self.violations.append({"relation": relation, "cells": list(cells), "detail": detail})


def validate(K: CubicalSet) -> ValidationReport:
    rep = ValidationReport()
    cells = {}
    for c in K.cells:
        if c.id in cells:
            rep.add("ids", c.id, detail="duplicate id")
        cells[c.id] = c
    for c in K.cells:
        if c.dim < 0:
            rep.add("dimension", c.id, detail="negative dimension")
        wanted = {(i, s) for i in range(1, c.dim + 1) for s in "-+"}
        have = {(i, s) for i, s, _ in c.faces}
        if wanted != have:
            rep.add("faces", c.id, detail=f"expected faces {sorted(wanted)}, got {sorted(have)}")
        for i, s, f in c.faces:
            if f not in cells:
                rep.add("faces", c.id, f, detail=f"face {i}{s} is unknown")
            elif cells[f].dim != c.dim - 1:
                rep.add("faces", c.id, f, detail=f"face {i}{s} has dimension {cells[f].dim}")
    if rep.violations:
        return rep
    # d_i^a d_j^b = d_{j-1}^b d_i^a for i < j
    for c in K.cells:
        for j in range(2, c.dim + 1):
            for i in range(1, j):
                for a in "-+":
                    for b in "-+":
                        lhs = cells[c.face(j, b)].face(i, a)
                        rhs = cells[c.face(i, a)].face(j - 1, b)
                        if lhs != rhs:
                            rep.add(1, c.id, lhs, rhs, detail=f"d{i}{a} d{j}{b} != d{j - 1}{b} d{i}{a}")
    for v in K.intended_initial + K.intended_final:
        if v not in cells or cells[v].dim != 0:
            rep.add("intended", v, detail="intended state is not a vertex")
    return rep


# ---------------------------------------------------------------- builders

def vname(x, y):
    return f"v({x},{y})"


def exname(x, y):
    return f"ex({x},{y})"


def eyname(x, y):
    return f"ey({x},{y})"


def sqname(x, y):
    return f"sq({x},{y})"


def grid(width, height, holes=(), intended_initial=None, intended_final=None) -> GridModel:
    holes = tuple(tuple(int(v) for v in h) for h in holes)
    g = GridModel(int(width), int(height), holes,
                  tuple(intended_initial) if intended_initial is not None else (vname(0, 0),),
                  tuple(intended_final) if intended_final is not None else (vname(width, height),))
    check_grid(g)
    return g


def check_grid(g: GridModel):
    if g.width <= 0 or g.height <= 0:
        raise DegenerateGrid(f"grid {g.width}x{g.height} has no squares")
    for h in g.holes:
        if len(h) != 4:
            raise InvalidModel(f"hole {list(h)} is not [x0,y0,x1,y1]")
        x0, y0, x1, y1 = h
        if not (0 <= x0 < x1 <= g.width and 0 <= y0 < y1 <= g.height):
            raise InvalidModel(f"hole {list(h)} is empty or leaves the grid")


def grid_complex(g: GridModel) -> CubicalSet:
    check_grid(g)
    squares = g.kept_squares()
    verts, hor, ver = set(), set(), set()
    for x, y in squares:
        verts.update({(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)})
        hor.update({(x, y), (x, y + 1)})
        ver.update({(x, y), (x + 1, y)})
    cells = [Cell(vname(x, y), 0) for x, y in sorted(verts, key=lambda p: (p[1], p[0]))]
    for x, y in sorted(hor, key=lambda p: (p[1], p[0])):
        cells.append(Cell(exname(x, y), 1, ((1, "-", vname(x, y)), (1, "+", vname(x + 1, y)))))
    for x, y in sorted(ver, key=lambda p: (p[1], p[0])):
        cells.append(Cell(eyname(x, y), 1, ((1, "-", vname(x, y)), (1, "+", vname(x, y + 1)))))
    for x, y in squares:
        cells.append(Cell(sqname(x, y), 2, (
            (1, "-", exname(x, y)), (1, "+", exname(x, y + 1)),
            (2, "-", eyname(x, y)), (2, "+", eyname(x + 1, y)))))
    return CubicalSet(tuple(cells), g.intended_initial, g.intended_final)


def cube_skeleton(n: int, top: int = 2) -> CubicalSet:
    """Faces of the n-cube up to dimension ``top`` as a precubical set."""
    from .cube_model import enumerate_faces, face_dim, face_key

    cells = []
    words = sorted((w for w in enumerate_faces(n) if face_dim(w) <= top),
                   key=lambda w: (face_dim(w), face_key(w)))
    for w in words:
        zeros = [k for k, c in enumerate(w) if c == "0"]
        faces = tuple((i, s, w[:z] + s + w[z + 1:]) for i, z in enumerate(zeros, start=1) for s in "-+")
        cells.append(Cell(w, face_dim(w), faces))
    return CubicalSet(tuple(cells))


def compile_to_polygraph(K: CubicalSet) -> Polygraph2:
    if K.dim >= 3:
        raise UnsupportedDimension(f"cells of dimension {K.dim} cannot be compiled at truncation 2")
    rep = validate(K)
    if not rep.ok:
        raise InvalidModel(f"not a cubical set: {rep.violations[0]}")
    verts = tuple(c.id for c in K.of_dim(0))
    gen1 = tuple((c.id, c.face(1, "-"), c.face(1, "+")) for c in K.of_dim(1))
    gen2 = tuple((c.id, (c.face(1, "-"), c.face(2, "+")), (c.face(2, "-"), c.face(1, "+")))
                 for c in K.of_dim(2))
    return Polygraph2(verts, gen1, gen2, K.intended_initial, K.intended_final)


def as_polygraph(model) -> Polygraph2:
    if isinstance(model, Polygraph2):
        problems = model.validate()
        if problems:
            raise InvalidModel("; ".join(problems))
        return model
    if isinstance(model, GridModel):
        model = grid_complex(model)
    return compile_to_polygraph(model)


def validate_any(model) -> list:
    """Human-readable problems for any supported model kind."""
    if isinstance(model, Polygraph2):
        return model.validate()
    if isinstance(model, GridModel):
        try:
            check_grid(model)
        except (DegenerateGrid, InvalidModel) as exc:
            return [str(exc)]
        model = grid_complex(model)
    return [f"relation {v['relation']}: {v['detail']} ({', '.join(map(str, v['cells']))})"
            for v in validate(model).violations]


# ---------------------------------------------------------------------- JSON

_KEYS = {
    "cubical": {"type", "dim", "cells", "intended_initial", "intended_final"},
    "grid2": {"type", "width", "height", "holes", "intended_initial", "intended_final"},
    "polygraph2": {"type", "vertices", "gen1", "gen2", "intended_initial", "intended_final"},
}


def model_to_dict(m) -> dict:
    if isinstance(m, GridModel):
        d = {"type": "grid2", "width": m.width, "height": m.height, "holes": [list(h) for h in m.holes]}
    elif isinstance(m, CubicalSet):
        d = {"type": "cubical", "dim": m.dim, "cells": [
            {"id": c.id, "dim": c.dim, "faces": {f"{i}{s}": f for i, s, f in c.faces}} for c in m.cells]}
    elif isinstance(m, Polygraph2):
        d = {"type": "polygraph2", "vertices": list(m.vertices),
             "gen1": [{"id": e, "src": s, "tgt": t} for e, s, t in m.gen1],
             "gen2": [{"id": g, "src": list(s), "tgt": list(t)} for g, s, t in m.gen2]}
    else:
        raise TypeError(f"unsupported model {type(m).__name__}")
    d["intended_initial"] = list(m.intended_initial)
    d["intended_final"] = list(m.intended_final)
    return d


def _need(d, key, kind, where):
    if key not in d:
        raise ParseError(f"{where}: missing field '{key}'")
    v = d[key]
    if not isinstance(v, kind) or isinstance(v, bool):
        raise ParseError(f"{where}: field '{key}' has the wrong type")
    return v


def _strs(v, where):
    if not isinstance(v, list) or not all(isinstance(x, str) for x in v):
        raise ParseError(f"{where}: expected a list of strings")
    return tuple(v)


def model_from_dict(d):
    if not isinstance(d, dict):
        raise ParseError("top level: expected a JSON object")
    kind = _need(d, "type", str, "top level")
    if kind not in _KEYS:
        raise SchemaError(f"unknown model type '{kind}'")
    unknown = sorted(set(d) - _KEYS[kind])
    if unknown:
        raise SchemaError("unknown keys: " + ", ".join(unknown))
    ini = _strs(d.get("intended_initial", []), "intended_initial")
    fin = _strs(d.get("intended_final", []), "intended_final")
    if kind == "grid2":
        w = _need(d, "width", int, "grid2")
        h = _need(d, "height", int, "grid2")
        holes = d.get("holes", [])
        if not isinstance(holes, list) or not all(
                isinstance(r, list) and all(isinstance(v, int) and not isinstance(v, bool) for v in r)
                for r in holes):
            raise ParseError("grid2: field 'holes' must be a list of integer rectangles")
        return grid(w, h, holes, ini if "intended_initial" in d else None,
                    fin if "intended_final" in d else None)
    if kind == "polygraph2":
        verts = _strs(_need(d, "vertices", list, "polygraph2"), "vertices")
        gen1 = []
        for k, e in enumerate(_need(d, "gen1", list, "polygraph2")):
            where = f"gen1[{k}]"
            if not isinstance(e, dict):
                raise ParseError(f"{where}: expected an object")
            extra = sorted(set(e) - {"id", "src", "tgt"})
            if extra:
                raise SchemaError(f"{where}: unknown keys: " + ", ".join(extra))
            gen1.append((_need(e, "id", str, where), _need(e, "src", str, where), _need(e, "tgt", str, where)))
        gen2 = []
        for k, g in enumerate(d.get("gen2", [])):
            where = f"gen2[{k}]"
            if not isinstance(g, dict):
                raise ParseError(f"{where}: expected an object")
            extra = sorted(set(g) - {"id", "src", "tgt"})
            if extra:
                raise SchemaError(f"{where}: unknown keys: " + ", ".join(extra))
            gen2.append((_need(g, "id", str, where), _strs(_need(g, "src", list, where), where + ".src"),
                         _strs(_need(g, "tgt", list, where), where + ".tgt")))
        return Polygraph2(verts, tuple(gen1), tuple(gen2), ini, fin)
    _need(d, "dim", int, "cubical")
    cells = []
    for k, c in enumerate(_need(d, "cells", list, "cubical")):
        where = f"cells[{k}]"
        if not isinstance(c, dict):
            raise ParseError(f"{where}: expected an object")
        extra = sorted(set(c) - {"id", "dim", "faces"})
        if extra:
            raise SchemaError(f"{where}: unknown keys: " + ", ".join(extra))
        faces = c.get("faces", {})
        if not isinstance(faces, dict):
            raise ParseError(f"{where}: field 'faces' must be an object")
        parsed = []
        for key, f in faces.items():
            if len(key) < 2 or key[-1] not in "-+" or not key[:-1].isdigit() or not isinstance(f, str):
                raise ParseError(f"{where}: bad face entry '{key}'")
            parsed.append((int(key[:-1]), key[-1], f))
        cells.append(Cell(_need(c, "id", str, where), _need(c, "dim", int, where), tuple(sorted(parsed))))
    return CubicalSet(tuple(cells), ini, fin)


def read_model(path):
    text = FsPath(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return model_from_dict(data)


def write_model(m, path):
    FsPath(path).write_text(json.dumps(model_to_dict(m), indent=2) + "\n", encoding="utf-8")
