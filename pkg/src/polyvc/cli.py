"""Command-line front end.

Every subcommand prints CSV (preceded by a ``# schema=1`` line) or JSON.
Exit codes: 0 ok, 1 selftest failure, 2 parse error, 3 precondition
failure, 4 numerical failure; errors go to stderr as one JSON object.
"""
import argparse
import cmath
import json
import math
import os
import sys
import time

import mpmath

from . import conjecture as C
from . import graphs as G
from . import hypgeom as H
from . import recursion as R
from . import selftest
from . import spinnet as S
from .errors import GraphFormatError, PolyVCError, PreconditionError
from .qarith import DEFAULT_PRECISION, EvalPoint, HalfInt

SCHEMA = "# schema=1"
BUILTIN = {"tetra": G.tetrahedron, "tetrahedron": G.tetrahedron, "theta": G.theta,
           "cube": G.cube, "prism": G.prism}
# which module's invariant suite each subcommand runs under --selftest
SELFTEST_FOR = {
    "sixj": ["qarith", "spinnet"], "bracket": ["graphs", "spinnet"],
    "ev": ["qarith", "spinnet"], "volume": ["hypgeom"],
    "face-residual": ["hypgeom"], "recursion-check": ["recursion"],
    "gs-check": ["recursion"], "conjecture-scan": ["conjecture"],
    "family": ["graphs", "hypgeom"], "factasymp": ["qarith", "conjecture"],
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise GraphFormatError(message)


# ---------------------------------------------------------------------------
# argument parsing helpers

def _num(x):
    """JSON/CSV-friendly float from mpf, mpc-with-zero-imaginary, or float."""
    return float(x)


def _split(s):
    return [x for x in (p.strip() for p in s.split(",")) if x]


def _edge_values(spec, g, conv, what):
    """'all=v', 'v0,v1,...' (edge order) or 'e:v,e:v'."""
    if spec is None:
        return None
    spec = spec.strip()
    if spec.startswith("all="):
        v = conv(spec[4:])
        return {e: v for e in g.edges}
    items = _split(spec)
    if items and all(":" in x for x in items):
        out = {}
        for x in items:
            k, v = x.split(":", 1)
            try:
                out[int(k)] = conv(v)
            except ValueError:
                raise GraphFormatError("bad edge id in %s: %r" % (what, k)) from None
        missing = set(g.edges) - set(out)
        if missing:
            raise PreconditionError("%s missing for edges %s" % (what, sorted(missing)))
        return out
    if len(items) != len(g.edges):
        raise GraphFormatError("%s: expected %d values, got %d" % (what, len(g.edges), len(items)))
    return {e: conv(v) for e, v in zip(g.edges, items)}


def _color(s):
    try:
        return HalfInt.of(s)
    except PreconditionError as exc:
        raise GraphFormatError(str(exc)) from None


def _angle(s):
    try:
        return G.parse_angle(s)
    except PreconditionError as exc:
        raise GraphFormatError(str(exc)) from None


def _ints(s):
    try:
        return [int(x) for x in _split(s)]
    except ValueError:
        raise GraphFormatError("expected a comma-separated list of integers, got %r" % s) from None


def _complex(s):
    try:
        return complex(s.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise GraphFormatError("cannot parse %r as a complex number" % s) from None


def _load(args):
    """(graph, colors from file, angles from file)."""
    src = args.graph
    if src in BUILTIN:
        return BUILTIN[src](), None, None
    try:
        with open(src) as fh:
            text = fh.read()
    except OSError as exc:
        raise GraphFormatError("cannot read graph file: %s" % exc.strerror) from None
    return G.load_graph(text)


def _colors(args, g, from_file):
    c = _edge_values(args.colors, g, _color, "colors") if args.colors else from_file
    if c is None:
        raise PreconditionError("no colors given")
    return c


def _angles(args, g, from_file):
    a = _edge_values(args.angles, g, _angle, "angles") if args.angles else from_file
    if a is None:
        raise PreconditionError("no angles given")
    return a


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise GraphFormatError("the following arguments are required: --%s" % n)


def _point(args):
    """Either a numeric A (--A) or an evaluation point (--n)."""
    if getattr(args, "A", None) is not None:
        A = _complex(args.A)
        if args.n is not None:
            raise GraphFormatError("give either --A or --n, not both")
        return A
    if args.n is None:
        raise GraphFormatError("one of --A or --n is required")
    return EvalPoint(args.n, args.precision)


def _circle_A(args):
    if getattr(args, "A", None) is not None:
        return _complex(args.A)
    if args.n is None:
        raise GraphFormatError("one of --A or --n is required")
    return cmath.exp(1j * math.pi / (2 * args.n))


# ---------------------------------------------------------------------------
# subcommands; each returns (columns, rows, summary)

def _value_row(v):
    if isinstance(v, (mpmath.mpc, mpmath.mpf, complex, float, int)):
        z = complex(v)
        return [z.real, z.imag, abs(z)]
    raise TypeError(v)


def _six(spec, conv, what):
    """Six values for a tetrahedron: 'all=v' or a list of six."""
    spec = spec.strip()
    vals = [conv(spec[4:])] * 6 if spec.startswith("all=") else [conv(x) for x in _split(spec)]
    if len(vals) != 6:
        raise GraphFormatError("%s: expected six values, got %d" % (what, len(vals)))
    return vals


def cmd_sixj(args):
    _need(args, "colors")
    colors = _six(args.colors, _color, "colors")
    pt = _point(args)
    if isinstance(pt, EvalPoint):
        v = S.ev_sixj(colors, pt)
        return (["order", "re", "im", "abs"],
                [[float(v.order), *_value_row(v.coeff if not v.is_zero else 0)]], None)
    return ["re", "im", "abs"], [_value_row(S.sixj(colors, pt))], None


def cmd_bracket(args):
    _need(args, "A")
    g, cf, _ = _load(args)
    c = _colors(args, g, cf)
    A = _complex(args.A)
    return ["re", "im", "abs"], [_value_row(S.shadow_bracket(g, c, A, args.ext))], None


def cmd_ev(args):
    _need(args, "n")
    g, cf, _ = _load(args)
    c = _colors(args, g, cf)
    pt = EvalPoint(args.n, args.precision)
    v = S.ev_bracket(g, c, pt)
    coeff = 0 if v.is_zero else v.coeff
    return (["order", "re", "im", "abs", "method"],
            [[float(v.order), *_value_row(coeff), v.method]], None)


def cmd_volume(args):
    _need(args, "angles")
    t = H.TetAngles(*_six(args.angles, _angle, "angles"))
    return ["volume"], [[_num(H.tet_volume(t))]], None


def cmd_face_residual(args):
    g, _, af = _load(args)
    gamma = _angles(args, g, af)
    if args.lengths:
        lengths = _edge_values(args.lengths, g, float, "lengths")
    elif C._is_tetra(g):
        edges = G.tetra_edge_order(g)
        t = H.tet_angles_from_edges(gamma, edges)
        lengths = dict(zip(edges, H.schlafli_lengths(t, args.h)))
    else:
        raise PreconditionError("interior lengths are only derived for tetrahedra; pass --lengths")
    faces = [args.face] if args.face is not None else range(len(g.faces()))
    rows = []
    for f in faces:
        fd = H.face_cycle_data(g, gamma, f, lengths, args.basepoint, args.orient or 1)
        rows.append([f, _num(H.face_equation_residual(fd)), _num(R.main_equation_residual(fd))])
    return ["face", "face_residual", "main_residual"], rows, None


def cmd_recursion_check(args):
    g, cf, _ = _load(args)
    c = _colors(args, g, cf)
    A = _circle_A(args)
    faces = [args.face] if args.face is not None else range(len(g.faces()))
    orients = [args.orient] if args.orient else [1, -1]
    rows = []
    for f in faces:
        for o in orients:
            r = R.check_circle_recursion(g, c, f, args.basepoint, o, A)
            rows.append([f, o, r])
    return ["face", "orientation", "residual"], rows, None


def cmd_gs_check(args):
    g, cf, _ = _load(args)
    c = _colors(args, g, cf)
    A = _circle_A(args)
    faces = [args.face] if args.face is not None else [
        f for f in range(len(g.faces())) if len(g.face_edges(f)) == 3]
    rows = [[f, R.gordon_schulten_check(g, c, f, A, basepoint=args.basepoint)] for f in faces]
    return ["face", "residual"], rows, None


def _family(args):
    return G.Family(_ints(args.moves)) if args.moves else None


def cmd_conjecture_scan(args):
    fam = _family(args)
    if fam is not None:
        g, af = fam.graph, None
    else:
        g, _, af = _load(args)
    gamma = _angles(args, g, af)
    rows = C.convergence_scan(g, gamma, _ints(args.n), family=fam,
                              target=args.target, precision_bits=args.precision)
    cols = ["n", "growth", "target", "gap", "method"] + (["wall_time"] if args.timing else [])
    out = [[r.as_dict(args.timing)[k] for k in cols] for r in rows]
    errs = [{"n": r.n, "error": r.error} for r in rows if r.error]
    return cols, out, {"errors": errs} if errs else None


def cmd_family(args):
    fam = G.Family(_ints(args.moves) if args.moves else [])
    g = fam.graph
    gamma = _edge_values(args.angles, g, _angle, "angles") if args.angles else None
    rows = []
    summary = {"moves": list(fam.moves), "graph": json.loads(G.dump_graph(g))}
    if gamma is not None:
        vols = [_num(H.tet_volume(t)) for t in H.constituent_angles(fam, gamma)]
        for i, v in enumerate(vols):
            rows.append(["tetrahedron", i, v])
        rows.append(["glued_volume", -1, _num(H.glued_volume(fam, gamma))])
    if args.colors:
        c = _edge_values(args.colors, g, _color, "colors")
        v = S.bracket_family(fam, c, _complex(args.A or "1j"))
        rows.append(["bracket_abs", -1, abs(complex(v))])
    return ["quantity", "index", "value"], rows, summary


def cmd_factasymp(args):
    _need(args, "alpha")
    rows = C.factasymp_check(float(args.alpha), _ints(args.n), args.precision)
    return (["n", "a", "value", "target", "deviation", "phase_error"],
            [[r.n, r.a, r.value, r.target, r.deviation, r.phase_error] for r in rows], None)


COMMANDS = {
    "sixj": cmd_sixj, "bracket": cmd_bracket, "ev": cmd_ev, "volume": cmd_volume,
    "face-residual": cmd_face_residual, "recursion-check": cmd_recursion_check,
    "gs-check": cmd_gs_check, "conjecture-scan": cmd_conjecture_scan,
    "family": cmd_family, "factasymp": cmd_factasymp,
}


# ---------------------------------------------------------------------------
# output

def _fmt(x):
    if isinstance(x, float):
        return repr(x)
    return str(x)


def emit(out, cols, rows, summary, fmt):
    if fmt == "json":
        obj = {"schema": 1, "columns": cols, "rows": rows}
        if summary:
            obj["summary"] = summary
        out.write(json.dumps(obj, sort_keys=True, default=_fmt) + "\n")
        return
    out.write(SCHEMA + "\n")
    out.write(",".join(cols) + "\n")
    for r in rows:
        out.write(",".join(_fmt(x) for x in r) + "\n")
    if summary:
        out.write("# " + json.dumps(summary, sort_keys=True) + "\n")


def build_parser():
    p = _Parser(prog="polyvc", description=__doc__.splitlines()[0])
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--precision", type=int,
                        default=int(os.environ.get("POLYVC_PRECISION", DEFAULT_PRECISION)),
                        help="working precision in bits (env POLYVC_PRECISION)")
    common.add_argument("--timing", action="store_true", help="include wall times")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--selftest", action="store_true",
                        help="run the invariant suite behind this subcommand")
    sub = p.add_subparsers(dest="cmd", parser_class=_Parser)
    sub.required = True

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    def graph_opts(sp, colors=True, angles=False):
        sp.add_argument("--graph", default="tetra",
                        help="graph JSON file or one of %s" % ", ".join(sorted(BUILTIN)))
        if colors:
            sp.add_argument("--colors", help="'all=v', 'v0,v1,...' or 'e:v,...'; k/2 allowed")
        if angles:
            sp.add_argument("--angles", help="'all=3pi/4', list in edge order, or 'e:angle,...'")

    def face_opts(sp):
        sp.add_argument("--face", type=int)
        sp.add_argument("--basepoint", type=int, help="edge id of e_0")
        sp.add_argument("--orient", type=int, choices=(1, -1))

    sp = add("sixj", "6j-symbol of six colors at A or at the n-th evaluation point")
    sp.add_argument("--colors", default="0,0,0,0,0,0")
    sp.add_argument("--A")
    sp.add_argument("--n", type=int)

    sp = add("bracket", "shadow state sum of a colored graph at A")
    graph_opts(sp)
    sp.add_argument("--A")
    sp.add_argument("--ext", type=int, help="external region")

    sp = add("ev", "leading coefficient at the n-th evaluation point")
    graph_opts(sp)
    sp.add_argument("--n", type=int)

    sp = add("volume", "volume of the truncated tetrahedron with six exterior angles")
    sp.add_argument("--angles")

    sp = add("face-residual", "face equation residuals with Schlafli or given lengths")
    graph_opts(sp, colors=False, angles=True)
    face_opts(sp)
    sp.add_argument("--lengths")
    sp.add_argument("--h", type=float, default=1e-4)

    for name, help_ in (("recursion-check", "circle recursion residuals on faces"),
                        ("gs-check", "three-term recursion residual on triangular faces")):
        sp = add(name, help_)
        graph_opts(sp)
        face_opts(sp)
        sp.add_argument("--n", type=int)
        sp.add_argument("--A")

    sp = add("conjecture-scan", "growth rates against volume over an n ladder")
    graph_opts(sp, colors=False, angles=True)
    sp.add_argument("--n", default="100,200,400,800,1600")
    sp.add_argument("--moves", help="triangle moves from the tetrahedron (vertex ids)")
    sp.add_argument("--target", type=float)

    sp = add("family", "graph, volumes and bracket of a triangle-move family")
    sp.add_argument("--moves", default="")
    sp.add_argument("--angles")
    sp.add_argument("--colors")
    sp.add_argument("--A")

    sp = add("factasymp", "q-factorial growth against -Lambda(pi alpha)")
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--n", default="100,400,1600")
    return p


def _fail(exc, err):
    d = exc.to_json() if isinstance(exc, PolyVCError) else {"error": "numerical", "message": str(exc)}
    err.write(json.dumps(d, sort_keys=True) + "\n")
    return exc.exit_code if isinstance(exc, PolyVCError) else 4


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.precision < 64:
            raise PreconditionError("precision must be at least 64 bits")
        if args.threads < 1:
            raise PreconditionError("thread count must be >= 1")
    except PolyVCError as exc:
        return _fail(exc, err)
    if args.selftest:
        ok, rows = selftest.run(SELFTEST_FOR[args.cmd])
        emit(out, ["module", "check", "ok", "detail"], [list(r) for r in rows], None, args.format)
        return 0 if ok else 1
    t0 = time.perf_counter()
    try:
        with mpmath.workprec(args.precision):
            cols, rows, summary = COMMANDS[args.cmd](args)
    except PolyVCError as exc:
        return _fail(exc, err)
    except (ArithmeticError, mpmath.libmp.NoConvergence) as exc:
        return _fail(exc, err)
    if args.timing and args.cmd != "conjecture-scan":
        summary = dict(summary or {}, wall_time=time.perf_counter() - t0)
    emit(out, cols, rows, summary, args.format)
    return 0


if __name__ == "__main__":
    sys.exit(main())
