"""Faces of the n-cube and the free omega-category I^n they generate.

A face is a word over ``-``, ``0``, ``+``; its dimension is the number of
zeros.  A cell of I^n is stored as its full downward-closed face set, so
composition is set union and equality is set equality.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from functools import lru_cache

from .errors import CapExceeded, IndexOutOfRange, MixedLength, NotComposable, ZeroDimensional

LETTERS = ("-", "0", "+")
_RANK = {"-": 0, "0": 1, "+": 2}
MAX_ENUMERATION_DIM = 4


def face_dim(word: str) -> int:
    return word.count("0")


def face_key(word: str):
    return tuple(_RANK[c] for c in word)


def sign(k: int) -> str:
    """(-)^k as a letter."""
    return "-" if k % 2 else "+"


def enumerate_faces(n: int) -> tuple:
    if n < 0:
        raise IndexOutOfRange("n must be nonnegative")
    return _faces(n)


@lru_cache(maxsize=None)
def _faces(n):
    return tuple("".join(t) for t in itertools.product(LETTERS, repeat=n))


def faces_by_dim(n: int) -> dict:
    out = {}
    for w in enumerate_faces(n):
        out.setdefault(face_dim(w), []).append(w)
    return out


@lru_cache(maxsize=None)
def boundary_faces(x: str, side: str) -> frozenset:
    """Codimension-one source (side '-') or target (side '+') faces of x.

    The l-th zero (1-based) becomes (-)^l for the source side and
    (-)^(l+1) for the target side.
    """
    zeros = [i for i, c in enumerate(x) if c == "0"]
    if not zeros:
        raise ZeroDimensional(f"face {x!r} has dimension 0")
    shift = 0 if side == "-" else 1
    out = set()
    for l, pos in enumerate(zeros, start=1):
        out.add(x[:pos] + sign(l + shift) + x[pos + 1:])
    return frozenset(out)


@lru_cache(maxsize=None)
def _all_faces(x: str) -> frozenset:
    """Every face of x, x included."""
    choices = [("-", "0", "+") if c == "0" else (c,) for c in x]
    return frozenset("".join(t) for t in itertools.product(*choices))


@dataclass(frozen=True)
class CubeCell:
    n: int
    faces: frozenset

    @property
    def dim(self) -> int:
        return max((face_dim(w) for w in self.faces), default=-1)

    def sorted_faces(self) -> list:
        return sorted(self.faces, key=face_key)

    def maximal_faces(self) -> list:
        """Faces not strictly contained in another face of the cell."""
        covered = set()
        for w in self.faces:
            covered.update(_all_faces(w) - {w})
        return [w for w in self.sorted_faces() if w not in covered]

    def __str__(self):
        return "R({" + ",".join(self.maximal_faces()) + "})"

    def __repr__(self):
        return f"CubeCell({self})"


def closure(X, n: int | None = None) -> CubeCell:
    words = list(X)
    lengths = {len(w) for w in words}
    if len(lengths) > 1:
        raise MixedLength(f"face words of lengths {sorted(lengths)}")
    if n is None:
        n = lengths.pop() if lengths else 0
    elif lengths and lengths.pop() != n:
        raise MixedLength("face length differs from the ambient dimension")
    out = set()
    for w in words:
        if any(c not in _RANK for c in w):
            raise MixedLength(f"bad letter in {w!r}")
        out |= _all_faces(w)
    return CubeCell(n, frozenset(out))


def atom(word: str) -> CubeCell:
    return closure([word])


def top_cell(n: int) -> CubeCell:
    return atom("0" * n)


@lru_cache(maxsize=None)
def cell_source_target(c: CubeCell, p: int, side: str) -> CubeCell:
    """s_p(c) for side '-', t_p(c) for side '+'.

    Keeps the faces of dimension at most p that are not an opposite-side
    boundary face of a face of c one dimension higher.
    """
    if p >= c.dim:
        return c
    opposite = "+" if side == "-" else "-"
    by_dim = {}
    for w in c.faces:
        by_dim.setdefault(face_dim(w), []).append(w)
    keep = []
    for k in range(p + 1):
        hidden = set()
        for y in by_dim.get(k + 1, ()):
            hidden |= boundary_faces(y, opposite)
        keep.extend(w for w in by_dim.get(k, ()) if w not in hidden)
    return closure(keep, c.n)


def source(c: CubeCell, p: int) -> CubeCell:
    return cell_source_target(c, p, "-")


def target(c: CubeCell, p: int) -> CubeCell:
    return cell_source_target(c, p, "+")


def compose_cells(a: CubeCell, b: CubeCell, p: int) -> CubeCell:
    if a.n != b.n:
        raise MixedLength("cells live in different cubes")
    if target(a, p) != source(b, p):
        raise NotComposable(p, f"{target(a, p)} != {source(b, p)}")
    return CubeCell(a.n, a.faces | b.faces)


# A decomposition records how a cell was first reached during enumeration:
# ("atom", word) or ("comp", left, right, p).
_ENUM_LOCK = threading.Lock()
_ENUM_CACHE: dict = {}


def enumerate_In(n: int, cap: int = MAX_ENUMERATION_DIM) -> list:
    return list(_enumerate(n, cap)[0])


def decompositions(n: int, cap: int = MAX_ENUMERATION_DIM) -> dict:
    return _enumerate(n, cap)[1]


def _enumerate(n, cap):
    if n < 0:
        raise IndexOutOfRange("n must be nonnegative")
    if n > cap:
        raise CapExceeded(f"enumeration of I^{n} exceeds the dimension cap {cap}")
    with _ENUM_LOCK:
        if n in _ENUM_CACHE:
            return _ENUM_CACHE[n]
    order = []
    decomp = {}
    by_src = {}
    by_tgt = {}

    def add(cell, how):
        if cell in decomp:
            return
        decomp[cell] = how
        order.append(cell)
        for p in range(cell.dim):
            by_src.setdefault((p, source(cell, p)), []).append(cell)
            by_tgt.setdefault((p, target(cell, p)), []).append(cell)

    for w in sorted(enumerate_faces(n), key=lambda w: (face_dim(w), face_key(w))):
        add(atom(w), ("atom", w))
    i = 0
    while i < len(order):
        c = order[i]
        i += 1
        for p in range(c.dim):
            for b in list(by_src.get((p, target(c, p)), ())):
                add(CubeCell(n, c.faces | b.faces), ("comp", c, b, p))
            for a in list(by_tgt.get((p, source(c, p)), ())):
                add(CubeCell(n, a.faces | c.faces), ("comp", a, c, p))
    result = (tuple(sorted(order, key=cell_sort_key)), decomp)
    with _ENUM_LOCK:
        _ENUM_CACHE[n] = result
    return result


def cell_sort_key(c: CubeCell):
    return (c.dim, len(c.faces), [face_key(w) for w in c.sorted_faces()])


def expression(c: CubeCell) -> str:
    """A composition expression for c built from the recorded decomposition."""
    how = decompositions(c.n)[c]
    if how[0] == "atom":
        return how[1] if how[1] else "()"
    _, a, b, p = how
    return f"({expression(a)} *{p} {expression(b)})"


def delta_image(i: int, side: str, c: CubeCell) -> CubeCell:
    """Image of c under the coface functor inserting ``side`` at position i."""
    if not 1 <= i <= c.n + 1:
        raise IndexOutOfRange(f"coface index {i} outside 1..{c.n + 1}")
    return closure([w[: i - 1] + side + w[i - 1:] for w in c.faces], c.n + 1)
