"""``dihom``: homology-based analysis of cubical concurrency models.

Text output is tab-delimited, one record per line.  ``--json`` switches to
a single JSON document tagged ``"schema": "dihom/1"``.

Exit codes: 0 success, 1 bad input, 2 enumeration cap hit (partial
output printed), 3 internal consistency failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import cube_model as cm
from . import fixtures
from . import invariants as inv
from . import nerve as N
from .cubical_sets import as_polygraph, read_model, validate_any
from .errors import CapExceeded, DihomError, InputError
from .free_cat import Caps, FreeTwoCategory, bilocalize, sorted_morphisms
from .plotting import render_png, to_dot

SCHEMA = "dihom/1"
THEORIES = {"gl": None, "neg": "-", "pos": "+"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _caps(text):
    try:
        words, length = (int(t) for t in text.split(","))
        return Caps(words, length)
    except ValueError:
        raise InputError("--caps expects two positive integers: max_words,max_len") from None


def _load(source):
    if source.startswith("builtin:"):
        name = source.split(":", 1)[1]
        if name not in fixtures.NAMED:
            raise InputError(f"unknown builtin model {name!r}; known: {', '.join(sorted(fixtures.NAMED))}")
        return fixtures.NAMED[name]()
    try:
        return read_model(source)
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from None


def _group(h):
    return {"rank": h.rank, "torsion": list(h.torsion), "group": str(h),
            "witnesses": [{str(k): v for k, v in sorted(w.items(), key=lambda kv: str(kv[0]))}
                          for w in h.witnesses]}


def _group_lines(tag, label, h):
    out = [f"{tag}\t{label}\t{h}"]
    out += [f"witness\t{label}\t{inv.format_chain(w)}" for w in h.witnesses]
    return out


# ------------------------------------------------------------ subcommands


def cmd_validate(args):
    model = _load(args.model)
    problems = validate_any(model)
    if args.dot and not problems:
        _write(args.dot, to_dot(model))
    doc = {"valid": not problems, "problems": problems}
    lines = ["valid"] if not problems else [f"problem\t{p}" for p in problems]
    return doc, lines, (0 if not problems else 1)


def cmd_in(args):
    if args.n is None:
        raise InputError("in requires --n")
    cells = cm.enumerate_In(args.n)
    doc = {"n": args.n, "count": len(cells),
           "cells": [{"dim": c.dim, "cell": str(c), "expression": cm.expression(c)} for c in cells]}
    lines = [f"count\t{len(cells)}"] + [f"{c.dim}\t{c}\t{cm.expression(c)}" for c in cells]
    return doc, lines, 0


def _category(args):
    model = _load(args.model)
    C = FreeTwoCategory(as_polygraph(model))
    C.check_acyclic()
    if args.bilocalize:
        C = bilocalize(C, C.initial_states(), C.final_states())
    return model, C


def cmd_paths(args):
    model, C = _category(args)
    ps = C.paths(args.frm, args.to)
    if args.dot:
        _write(args.dot, to_dot(model))
    doc = {"count": len(ps), "paths": [str(p) for p in ps]}
    return doc, [f"count\t{len(ps)}"] + [f"path\t{p}" for p in ps], 0


def cmd_cells(args):
    _, C = _category(args)
    cells, exhaustive = C.two_cells(args.caps)
    doc = {"count": len(cells), "exhaustive": exhaustive,
           "cells": [{"source": "·".join(c.source), "target": "·".join(c.target),
                      "word": [[o, g] for o, g in c.word]} for c in cells]}
    lines = [f"count\t{len(cells)}", f"exhaustive\t{str(exhaustive).lower()}"]
    lines += ["cell\t" + "·".join(c.source) + "\t" + "·".join(c.target) + "\t"
              + " ".join(f"{g}@{o}" for o, g in c.word) for c in cells]
    return doc, lines, (0 if exhaustive else 2)


def cmd_homology(args):
    _, C = _category(args)
    alpha = THEORIES[args.theory]
    if alpha is None:
        h = inv.globular_homology(C, args.degree, args.caps)
    else:
        h = inv.corner_homology(C, alpha, args.degree, args.caps)
    label = f"H{args.degree}{ {'gl': 'gl', 'neg': '-', 'pos': '+'}[args.theory] }"
    doc = {"theory": args.theory, "degree": args.degree, "homology": _group(h)}
    return doc, _group_lines("homology", label, h), 0


def cmd_hurewicz(args):
    _, C = _category(args)
    alpha = THEORIES[args.theory]
    if alpha is None:
        raise InputError("hurewicz needs --theory neg or pos")
    h = inv.hurewicz_cokernel(C, alpha, args.degree, args.caps)
    label = f"coker h{args.degree}{alpha}"
    doc = {"theory": args.theory, "degree": args.degree, "cokernel": _group(h)}
    return doc, _group_lines("cokernel", label, h), 0


def cmd_deadlocks(args):
    model = _load(args.model)
    name = args.model.split("/")[-1]
    rep = inv.deadlock_report(model, args.caps, name=name)
    if args.dot:
        _write(args.dot, to_dot(model, rep.deadlocks, rep.unreachable))
    if args.figure:
        render_png(model, args.figure, rep.deadlocks, rep.unreachable, title=name)
    doc = rep.to_dict()
    doc.pop("schema")
    doc.pop("kind")
    return doc, rep.to_text().rstrip("\n").split("\n"), 0


def cmd_cubes(args):
    _, C = _category(args)
    alpha = THEORIES[args.corner]
    g = N.enumerate_corner_generators(C, alpha, args.degree, args.caps)
    cubes = N.sorted_cubes(g.cubes)
    doc = {"corner": args.corner, "degree": args.degree, "count": len(cubes), "exhaustive": g.exhaustive,
           "cubes": [str(x) for x in cubes]}
    lines = [f"count\t{len(cubes)}", f"exhaustive\t{str(g.exhaustive).lower()}"]
    lines += [f"cube\t{x}" for x in cubes]
    return doc, lines, (0 if g.exhaustive else 2)


def _write(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# ------------------------------------------------------------ parser


def build_parser():
    p = _Parser(prog="dihom", description="Globular and corner homology of cubical concurrency models.")
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON document (schema dihom/1)")
    common.add_argument("--caps", type=_caps, default=Caps(),
                        help="enumeration caps max_words,max_len (default 20000,64)")
    common.add_argument("--dot", metavar="PATH", help="also write the 1-skeleton as Graphviz DOT")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    def model_cmd(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("model", help="model JSON file, or builtin:NAME")
        sp.add_argument("--bilocalize", action="store_true",
                        help="restrict to morphisms from initial to final states")
        sp.set_defaults(fn=fn)
        return sp

    sp = sub.add_parser("validate", parents=[common], help="check a model")
    sp.add_argument("model")
    sp.set_defaults(fn=cmd_validate)
    sp = sub.add_parser("in", parents=[common], help="list the cells of I^n")
    sp.add_argument("--n", type=int, help="cube dimension (at most 4)")
    sp.set_defaults(fn=cmd_in)
    sp = model_cmd("paths", cmd_paths, "list directed paths")
    sp.add_argument("--from", dest="frm")
    sp.add_argument("--to")
    model_cmd("cells", cmd_cells, "list 2-morphisms")
    for name, fn, default in (("homology", cmd_homology, "gl"), ("hurewicz", cmd_hurewicz, "neg")):
        sp = model_cmd(name, fn, f"compute {name}")
        sp.add_argument("--theory", choices=sorted(THEORIES), default=default,
                        help=f"gl, neg or pos (default {default})")
        sp.add_argument("--degree", type=int, default=1, help="0..2 (default 1)")
    sp = sub.add_parser("deadlocks", parents=[common], help="deadlock and unreachable-state report")
    sp.add_argument("model")
    sp.add_argument("--figure", metavar="PNG", help="also draw the model with flagged states")
    sp.set_defaults(fn=cmd_deadlocks)
    sp = model_cmd("cubes", cmd_cubes, "list corner cubes")
    sp.add_argument("--degree", type=int, default=1, help="0..3 (default 1)")
    sp.add_argument("--corner", choices=["neg", "pos"], default="neg")
    return p


def _check(args):
    if args.command in ("homology", "hurewicz") and not 0 <= args.degree <= inv.MAX_DEGREE:
        raise InputError(f"--degree must lie in 0..{inv.MAX_DEGREE}")
    if args.command == "cubes" and not 0 <= args.degree <= 3:
        raise InputError("--degree must lie in 0..3")


def _emit(args_json, command, doc, lines, out):
    if args_json:
        payload = {"schema": SCHEMA, "kind": command}
        payload.update(doc)
        out.write(json.dumps(payload, indent=2, sort_keys=False) + "\n")
    else:
        out.write("\n".join(lines) + "\n")


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    want_json = "--json" in (argv if argv is not None else sys.argv[1:])
    try:
        args = build_parser().parse_args(argv)
        if not args.command:
            raise InputError("a command is required (see --help)")
        _check(args)
        doc, lines, code = args.fn(args)
        _emit(args.json, args.command, doc, lines, out)
        return code
    except CapExceeded as exc:
        _report(err, want_json, exc, partial=exc.partial)
        return exc.exit_code
    except DihomError as exc:
        _report(err, want_json, exc)
        return exc.exit_code
    except ValueError as exc:
        _report(err, want_json, InputError(str(exc)))
        return 1


def _report(err, want_json, exc, partial=None):
    if want_json:
        doc = {"schema": SCHEMA, "kind": "error", "error": type(exc).__name__, "message": str(exc),
               "exit_code": exc.exit_code}
        if partial is not None:
            doc["partial_count"] = len(partial)
        err.write(json.dumps(doc) + "\n")
    else:
        err.write(f"error\t{type(exc).__name__}\t{exc}\n")
        if partial is not None:
            err.write(f"partial\t{len(partial)} items before the cap\n")


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
