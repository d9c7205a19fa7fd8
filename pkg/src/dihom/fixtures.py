"""Small models used by the tests, the acceptance script and the CLI."""

from __future__ import annotations

from .cubical_sets import Polygraph2, cube_skeleton, compile_to_polygraph, exname, eyname, grid, vname
from .free_cat import FreeTwoCategory, GlobeCategory, globe_functor, polygraph_functor

SWISSFLAG_HOLES = ((2, 1, 3, 4), (1, 2, 4, 3))


def single_square():
    return grid(1, 1, [])


def square_column():
    """Two squares stacked in direction 1."""
    return grid(1, 2, [])


def square_row():
    return grid(2, 1, [])


def trou():
    return grid(3, 3, [[1, 1, 2, 2]])


def swissflag():
    return grid(5, 5, [list(h) for h in SWISSFLAG_HOLES])


SWISSFLAG_STATES = {"alpha": vname(0, 0), "beta": vname(5, 5), "deadlock": vname(2, 2), "unreachable": vname(3, 3)}


def three_squares():
    return grid(2, 2, [[1, 0, 2, 1]])


def cube3():
    """The 2-skeleton of the 3-cube as a polygraph."""
    return compile_to_polygraph(cube_skeleton(3))


def whiskered_pair():
    """A: u => v on a -> b and B: x => y on b -> c."""
    return Polygraph2(("a", "b", "c"),
                      (("u", "a", "b"), ("v", "a", "b"), ("x", "b", "c"), ("y", "b", "c")),
                      (("A", ("u",), ("v",)), ("B", ("x",), ("y",))))


def coin2():
    """Two squares sharing the branching u, v out of a."""
    return Polygraph2(("a", "b", "c", "d1", "d2"),
                      (("u", "a", "b"), ("v", "a", "c"), ("x", "b", "d1"), ("y", "c", "d1"),
                       ("z", "b", "d2"), ("t", "c", "d2")),
                      (("A", ("u", "x"), ("v", "y")), ("B", ("u", "z"), ("v", "t"))))


def bord():
    """Three parallel edges with A: u => v and B: v => w."""
    return Polygraph2(("a", "b"), (("u", "a", "b"), ("v", "a", "b"), ("w", "a", "b")),
                      (("A", ("u",), ("v",)), ("B", ("v",), ("w",))))


def g1():
    """Two parallel 1-generators."""
    return Polygraph2(("a", "b"), (("A", "a", "b"), ("B", "a", "b")), ())


def g2():
    """Two parallel 2-generators between distinct paths u, v."""
    return Polygraph2(("a", "b"), (("u", "a", "b"), ("v", "a", "b")),
                      (("A", ("u",), ("v",)), ("B", ("u",), ("v",))))


def homotopy_target():
    """Edges u, v, w from a to b with X: u => v."""
    return Polygraph2(("a", "b"), (("u", "a", "b"), ("v", "a", "b"), ("w", "a", "b")),
                      (("X", ("u",), ("v",)),))


def homotopic_functors():
    """f, g: G1 -> homotopy_target, f(A) = u, g(A) = v, both send B to w."""
    C, D = FreeTwoCategory(g1()), FreeTwoCategory(homotopy_target())
    verts = {"a": D.path([], "a"), "b": D.path([], "b")}
    f = polygraph_functor(C, D, verts, {"A": D.path(["u"]), "B": D.path(["w"])}, {}, "f")
    g = polygraph_functor(C, D, verts, {"A": D.path(["v"]), "B": D.path(["w"])}, {}, "g")
    return f, g


def globe_pair(p, q):
    """(g o f, id) on 2_p for p > q: f(A) = B, g(B) = s_q A."""
    P, Q = GlobeCategory(p), GlobeCategory(q)
    f = globe_functor(P, Q, Q.top, "f")
    g = globe_functor(Q, P, P.source(P.top, q), "g")
    from .free_cat import Functor
    return f.then(g), Functor.identity(P)


# Named paths of the trou model.
TROU_LETTERS = {
    "u": eyname(0, 0), "v": exname(0, 1), "w": eyname(1, 1), "x": exname(1, 2), "y": eyname(2, 2),
    "z": exname(2, 3), "a": eyname(0, 1), "b": exname(0, 2), "c": exname(2, 2), "d": eyname(3, 2),
    "e": exname(0, 0), "f": exname(1, 0), "g": exname(2, 0), "h": eyname(3, 0), "i": eyname(3, 1),
}


def trou_path(word):
    """A trou path spelled with the letters above, e.g. 'uvwxyz'."""
    return FreeTwoCategory(trou()).path([TROU_LETTERS[ch] for ch in word])


TROU_GAMMA = {1: "uvwxyz", 2: "uabxcd", 4: "efghid"}

NAMED = {
    "square": single_square, "column": square_column, "row": square_row, "trou": trou,
    "swissflag": swissflag, "three-squares": three_squares, "cube3": cube3, "coin2": coin2,
    "bord": bord, "g1": g1, "g2": g2, "whiskered-pair": whiskered_pair,
}
