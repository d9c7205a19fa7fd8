"""Drawings of a model's 1-skeleton: DOT text and matplotlib PNG files."""

from __future__ import annotations

import re

from .cubical_sets import as_polygraph

_GRID_NAME = re.compile(r"^v\((-?\d+),(-?\d+)\)$")


def layout(P):
    """Vertex positions: grid coordinates when every name is v(x,y),
    otherwise (longest-path depth, rank within the depth)."""
    pos = {}
    for v in P.vertices:
        m = _GRID_NAME.match(v)
        if not m:
            break
        pos[v] = (int(m.group(1)), int(m.group(2)))
    else:
        return pos
    preds = {v: [] for v in P.vertices}
    for _, s, t in P.gen1:
        preds[t].append(s)
    depth = {}

    def dep(v, seen=()):
        if v not in depth:
            depth[v] = 0 if not preds[v] else 1 + max(dep(u) for u in preds[v])
        return depth[v]

    rows = {}
    for v in P.vertices:
        rows.setdefault(dep(v), []).append(v)
    return {v: (d, -i) for d, vs in rows.items() for i, v in enumerate(vs)}


def _edge_ends(P):
    return {e: (s, t) for e, s, t in P.gen1}


def _square_polygon(P, pos, gen):
    """Corner points of a 2-generator: its source path then its reversed target."""
    ends = _edge_ends(P)
    _, src, tgt = gen
    pts = [pos[ends[src[0]][0]]] + [pos[ends[e][1]] for e in src]
    pts += [pos[ends[e][0]] for e in reversed(tgt)]
    return pts


def to_dot(model, deadlocks=(), unreachable=()) -> str:
    P = as_polygraph(model)
    pos = layout(P)
    lines = ["digraph model {", "  node [shape=circle, fontsize=9];"]
    for g in P.gen2:
        pts = _square_polygon(P, pos, g)
        cx = sum(p[0] for p in pts) / len(pts)
        cy = sum(p[1] for p in pts) / len(pts)
        lines.append(f'  "{g[0]}" [shape=box, style=filled, fillcolor=lightgray, label="{g[0]}", '
                     f'pos="{cx:g},{cy:g}!"];')
    for v in P.vertices:
        x, y = pos[v]
        attrs = [f'pos="{x:g},{y:g}!"']
        if v in deadlocks:
            attrs.append("style=filled, fillcolor=red")
        elif v in unreachable:
            attrs.append("style=filled, fillcolor=orange")
        lines.append(f'  "{v}" [{", ".join(attrs)}];')
    for e, s, t in P.gen1:
        lines.append(f'  "{s}" -> "{t}" [label="{e}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_png(model, path, deadlocks=(), unreachable=(), title=None):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.patches import Polygon

    P = as_polygraph(model)
    pos = layout(P)
    fig, ax = plt.subplots(figsize=(5, 5))
    for g in P.gen2:
        ax.add_patch(Polygon(_square_polygon(P, pos, g), closed=True, facecolor="0.85", edgecolor="none"))
    for _, s, t in P.gen1:
        (x0, y0), (x1, y1) = pos[s], pos[t]
        ax.annotate("", xy=(x1, y1), xytext=(x0, y0),
                    arrowprops=dict(arrowstyle="->", color="0.3", shrinkA=4, shrinkB=4))
    colors = [("red" if v in deadlocks else "orange" if v in unreachable else "black") for v in P.vertices]
    ax.scatter([pos[v][0] for v in P.vertices], [pos[v][1] for v in P.vertices], c=colors, s=24, zorder=3)
    for v in list(deadlocks) + list(unreachable):
        ax.annotate(v, pos[v], textcoords="offset points", xytext=(5, 5), fontsize=8)
    ax.set_aspect("equal")
    ax.set_axis_off()
    if title:
        ax.set_title(title)
    fig.savefig(path, dpi=100, bbox_inches="tight", metadata={"Software": None})
    plt.close(fig)
