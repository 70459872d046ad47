"""Planar trivalent graphs given by rotation systems, colorings, dual graphs and
the vertex-to-triangle move.

A rotation lists the edge ids at a vertex in counterclockwise order. Loops are
rejected, so an edge id names an edge-end at each of its two vertices. A dart
(e, u) is edge e traversed away from u; faces are traced by leaving each
vertex along the rotation successor of the edge we arrived on.
"""
import itertools
import json
import math
import re
from fractions import Fraction

from .errors import GraphFormatError, InadmissibleError, PreconditionError
from .qarith import HalfInt


class PlanarGraph:
    def __init__(self, rotations, ends, check=True):
        self.rotation = {int(v): tuple(int(e) for e in r) for v, r in rotations.items()}
        self.ends = {int(e): (int(a), int(b)) for e, (a, b) in ends.items()}
        if check:
            self._validate()
        self._trace()

    # -- construction checks -------------------------------------------------
    def _validate(self):
        for v, rot in self.rotation.items():
            if len(rot) != 3:
                raise GraphFormatError("vertex %d has degree %d, expected 3" % (v, len(rot)),
                                       field="vertices[%d].rotation" % v)
            if len(set(rot)) != 3:
                raise GraphFormatError("vertex %d lists an edge twice (loops are not allowed)" % v,
                                       field="vertices[%d].rotation" % v)
            for e in rot:
                if e not in self.ends:
                    raise GraphFormatError("vertex %d uses unknown edge %d" % (v, e),
                                           field="vertices[%d].rotation" % v)
                if v not in self.ends[e]:
                    raise GraphFormatError("edge %d does not end at vertex %d" % (e, v),
                                           field="edges[%d].ends" % e)
        for e, (a, b) in self.ends.items():
            if a == b:
                raise GraphFormatError("edge %d is a loop" % e, field="edges[%d].ends" % e)
            for u in (a, b):
                if u not in self.rotation or e not in self.rotation[u]:
                    raise GraphFormatError("edge %d is missing from the rotation at %d" % (e, u),
                                           field="edges[%d].ends" % e)

    def _trace(self):
        darts = sorted((e, u) for e, ends in self.ends.items() for u in ends)
        seen = {}
        faces = []
        for d in darts:
            if d in seen:
                continue
            cyc = []
            cur = d
            while cur not in seen:
                seen[cur] = len(faces)
                cyc.append(cur)
                cur = self.next_dart(cur)
            if cur != d:
                raise GraphFormatError("inconsistent rotation data: face tracing did not close")
            faces.append(tuple(cyc))
        self._faces = faces
        self._face_of = seen
        V, E, F = len(self.rotation), len(self.ends), len(faces)
        if V - E + F != 2:
            raise GraphFormatError(
                "rotation system is not planar: V-E+F = %d-%d+%d != 2" % (V, E, F))

    # -- basic queries -------------------------------------------------------
    def other(self, e, u):
        a, b = self.ends[e]
        return b if u == a else a

    def next_dart(self, dart):
        e, u = dart
        v = self.other(e, u)
        rot = self.rotation[v]
        return (rot[(rot.index(e) + 1) % 3], v)

    @property
    def vertices(self):
        return sorted(self.rotation)

    @property
    def edges(self):
        return sorted(self.ends)

    def faces(self):
        return list(self._faces)

    def face_of(self, dart):
        return self._face_of[dart]

    def edge_faces(self, e):
        a, b = self.ends[e]
        return self._face_of[(e, a)], self._face_of[(e, b)]

    def corner_face(self, v, x):
        """Face occupying the corner at v between x and its rotation successor."""
        return self._face_of[(x, self.other(x, v))]

    def vertex_data(self, v):
        """(a, b, c, d, e, f): the edges at v in rotation order and the faces
        opposite them, i.e. d between b and c, e between c and a, f between a and b."""
        a, b, c = self.rotation[v]
        return (a, b, c, self.corner_face(v, b), self.corner_face(v, c),
                self.corner_face(v, a))

    def face_edges(self, face):
        return [e for e, _ in self._faces[face]]

    def face_cycle(self, face, basepoint=None, orientation=1):
        """Ordered boundary of a face: list of (e_i, b_i) where b_i is the third
        edge at the vertex shared by e_i and e_{i+1}.

        ``basepoint`` is the edge id of e_0; ``orientation`` -1 walks the
        boundary the other way round.
        """
        darts = list(self._faces[face])
        p = len(darts)
        if p < 3:
            raise PreconditionError("face %d has %d edges; need at least 3" % (face, p))
        # corner vertex after dart i
        steps = [(e, self.other(e, u)) for e, u in darts]
        if orientation == -1:
            edges = [e for e, _ in darts][::-1]
            corners = [darts[i][1] for i in range(p)][::-1]
            steps = list(zip(edges, corners))
        elif orientation != 1:
            raise PreconditionError("orientation must be +1 or -1")
        if basepoint is not None:
            idx = [e for e, _ in steps]
            if basepoint not in idx:
                raise PreconditionError("edge %s is not on face %d" % (basepoint, face))
            i0 = idx.index(basepoint)
            steps = steps[i0:] + steps[:i0]
        out = []
        for i, (e, w) in enumerate(steps):
            nxt = steps[(i + 1) % p][0]
            third = [x for x in self.rotation[w] if x not in (e, nxt)]
            if len(third) != 1:
                raise PreconditionError("degenerate face boundary at vertex %d" % w)
            out.append((e, third[0]))
        return out

    def dual(self):
        """Dual multigraph: dict edge -> (face, face)."""
        return {e: self.edge_faces(e) for e in self.edges}

    def is_dual_3connected(self):
        return is_3connected(range(len(self._faces)), self.dual().values())

    def __repr__(self):
        return "PlanarGraph(V=%d, E=%d, F=%d)" % (
            len(self.rotation), len(self.ends), len(self._faces))

    # -- serialization -------------------------------------------------------
    def to_json_obj(self):
        return {"vertices": [{"id": v, "rotation": list(self.rotation[v])} for v in self.vertices],
                "edges": [{"id": e, "ends": list(self.ends[e])} for e in self.edges]}


def is_3connected(nodes, edge_pairs):
    nodes = list(nodes)
    adj = {v: set() for v in nodes}
    for a, b in edge_pairs:
        if a != b:
            adj[a].add(b)
            adj[b].add(a)
    if len(nodes) < 4:
        return len(nodes) >= 1 and all(len(adj[v]) == len(nodes) - 1 for v in nodes)

    def connected(removed):
        rest = [v for v in nodes if v not in removed]
        stack, seen = [rest[0]], {rest[0]}
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in removed and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(rest)

    return all(connected(set(r)) for k in (0, 1, 2) for r in itertools.combinations(nodes, k))


# ---------------------------------------------------------------------------
# builders

def from_embedding(coords, edge_list):
    """Straight-line planar drawing -> rotation system (counterclockwise)."""
    ends = {i: tuple(e) for i, e in enumerate(edge_list)}
    rot = {}
    for v, (x, y) in coords.items():
        inc = [e for e, (a, b) in ends.items() if v in (a, b)]
        def ang(e):
            w = ends[e][1] if ends[e][0] == v else ends[e][0]
            return math.atan2(coords[w][1] - y, coords[w][0] - x)
        rot[v] = sorted(inc, key=ang)
    return PlanarGraph(rot, ends)


def tetrahedron():
    c = {0: (0.0, 0.0), 1: (0.0, 1.0),
         2: (math.cos(7 * math.pi / 6), math.sin(7 * math.pi / 6)),
         3: (math.cos(-math.pi / 6), math.sin(-math.pi / 6))}
    return from_embedding(c, [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)])


def theta():
    return PlanarGraph({0: (0, 1, 2), 1: (2, 1, 0)}, {0: (0, 1), 1: (0, 1), 2: (0, 1)})


def cube():
    c = {0: (-2, -2), 1: (2, -2), 2: (2, 2), 3: (-2, 2),
         4: (-1, -1), 5: (1, -1), 6: (1, 1), 7: (-1, 1)}
    el = [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4),
          (0, 4), (1, 5), (2, 6), (3, 7)]
    return from_embedding(c, el)


def prism():
    return triangle_move(tetrahedron(), 0)[0]


# ---------------------------------------------------------------------------
# colorings

def admissible_triple(a, b, c):
    """Admissibility of a triple of doubled colors."""
    return (a >= 0 and b >= 0 and c >= 0 and (a + b + c) % 2 == 0
            and a <= b + c and b <= a + c and c <= a + b)


def coloring(values):
    """Normalize a mapping edge -> color (int, str like '3/2', HalfInt)."""
    return {int(e): HalfInt.of(v) for e, v in values.items()}


def uniform(g, value):
    v = HalfInt.of(value)
    return {e: v for e in g.edges}


def twice_map(g, c):
    out = {}
    for e in g.edges:
        if e not in c:
            raise PreconditionError("edge %d has no color" % e)
        t = HalfInt.of(c[e]).twice
        if t < 0:
            raise PreconditionError("edge %d has a negative color" % e)
        out[e] = t
    return out


def is_admissible(g, c):
    t = twice_map(g, c)
    for v in g.vertices:
        a, b, cc = g.rotation[v]
        if not admissible_triple(t[a], t[b], t[cc]):
            return False
    return True


def require_admissible(g, c):
    if not is_admissible(g, c):
        raise InadmissibleError("coloring is not admissible")


def enumerate_colorings(g, max_twice):
    """All admissible colorings with doubled colors <= max_twice (as dicts of
    doubled values), by backtracking over edges."""
    edges = g.edges
    pos = {e: i for i, e in enumerate(edges)}
    # vertices become checkable once their last edge is assigned
    due = {i: [] for i in range(len(edges))}
    for v in g.vertices:
        due[max(pos[e] for e in g.rotation[v])].append(g.rotation[v])
    vals = [0] * len(edges)

    def rec(i):
        if i == len(edges):
            yield dict(zip(edges, vals))
            return
        for t in range(max_twice + 1):
            vals[i] = t
            if all(admissible_triple(*(vals[pos[e]] for e in tri)) for tri in due[i]):
                yield from rec(i + 1)

    yield from rec(0)


def coloring_from_angles(gamma, n):
    """c_n(e) = floor(n (1 - gamma(e)/2pi)).

    A product landing within 1e-9 of an integer is snapped to it, so that
    symbolic angles such as 2pi/3 give the exact integer despite rounding.
    """
    n = int(n)
    if n < 2:
        raise PreconditionError("n must be >= 2")
    out = {}
    for e, g in gamma.items():
        g = float(g)
        if not 0 < g <= math.pi + 1e-12:
            raise PreconditionError("angle %r on edge %s is outside (0, pi]" % (g, e))
        x = n * (1 - g / (2 * math.pi))
        r = round(x)
        out[e] = HalfInt(r if abs(x - r) < 1e-9 else math.floor(x))
    return out


def admissible_perturbations(g, c, face, d0, dlast, basepoint=None, orientation=1):
    """All delta: face edges -> {+-1/2} with fixed end values keeping c + delta admissible."""
    require_admissible(g, c)
    cyc = g.face_cycle(face, basepoint, orientation)
    fe = [e for e, _ in cyc]
    t0, tl = HalfInt.of(d0).twice, HalfInt.of(dlast).twice
    if abs(t0) != 1 or abs(tl) != 1:
        raise PreconditionError("d0 and dlast must be +1/2 or -1/2")
    base = twice_map(g, c)
    out = []
    for mid in itertools.product((1, -1), repeat=len(fe) - 2):
        signs = (t0,) + mid + (tl,)
        t = dict(base)
        for e, s in zip(fe, signs):
            t[e] += s
        if all(admissible_triple(*(t[x] for x in g.rotation[v])) for v in g.vertices):
            out.append({e: HalfInt(twice=s) for e, s in zip(fe, signs)})
    return out


def shifted(c, delta):
    out = dict(c)
    for e, d in delta.items():
        out[e] = HalfInt.of(out[e]) + d
    return out


# ---------------------------------------------------------------------------
# triangle move

class MoveRecord:
    """One vertex-to-triangle move: the old vertex, its rotation (x, y, z), the
    new vertices (v_x, v_y, v_z) and triangle edges (t_yz, t_zx, t_xy), i.e.
    each triangle edge listed opposite the attachment of x, y, z."""

    def __init__(self, vertex, rotation, new_vertices, triangle):
        self.vertex = vertex
        self.rotation = tuple(rotation)
        self.new_vertices = tuple(new_vertices)
        self.triangle = tuple(triangle)

    def sixj_edges(self):
        """Edge ids (a, b, c, d, e, f) of the tetrahedron this move contributes."""
        return self.rotation + self.triangle

    def to_json_obj(self):
        return {"vertex": self.vertex, "rotation": list(self.rotation),
                "new_vertices": list(self.new_vertices), "triangle": list(self.triangle)}

    def __repr__(self):
        return "MoveRecord(v=%d, rotation=%s, triangle=%s)" % (
            self.vertex, self.rotation, self.triangle)


def triangle_move(g, v):
    """Replace vertex v by a triangle. Returns (new graph, MoveRecord)."""
    if v not in g.rotation:
        raise PreconditionError("no vertex %r" % (v,))
    x, y, z = g.rotation[v]
    nv = max(g.rotation) + 1
    ne = max(g.ends) + 1
    vx, vy, vz = nv, nv + 1, nv + 2
    t_xy, t_yz, t_zx = ne, ne + 1, ne + 2
    rot = {u: r for u, r in g.rotation.items() if u != v}
    rot[vx] = (x, t_xy, t_zx)
    rot[vy] = (y, t_yz, t_xy)
    rot[vz] = (z, t_zx, t_yz)
    ends = dict(g.ends)
    for e, w in ((x, vx), (y, vy), (z, vz)):
        a, b = ends[e]
        ends[e] = (w, b) if a == v else (a, w)
    ends[t_xy] = (vx, vy)
    ends[t_yz] = (vy, vz)
    ends[t_zx] = (vz, vx)
    return PlanarGraph(rot, ends), MoveRecord(v, (x, y, z), (vx, vy, vz), (t_yz, t_zx, t_xy))


class Family:
    """A graph reached from the standard tetrahedron by a sequence of moves."""

    def __init__(self, moves=()):
        g = tetrahedron()
        self.base = g
        self.records = []
        for v in moves:
            g, rec = triangle_move(g, v)
            self.records.append(rec)
        self.graph = g
        self.moves = tuple(moves)

    def __repr__(self):
        return "Family(moves=%s)" % (list(self.moves),)


def tetra_edge_order(g):
    """Edge ids (a, b, c, d, e, f) of a tetrahedron graph arranged so that
    (a,b,c) meet at a vertex and d, e, f are opposite a, b, c."""
    if len(g.rotation) != 4 or len(g.ends) != 6:
        raise PreconditionError("not a tetrahedron graph")
    v0 = min(g.rotation)
    a, b, c = g.rotation[v0]

    def opp(x):
        ex = set(g.ends[x])
        cand = [e for e in g.edges if not ex & set(g.ends[e])]
        if len(cand) != 1:
            raise PreconditionError("not a tetrahedron graph")
        return cand[0]

    return (a, b, c, opp(a), opp(b), opp(c))


# ---------------------------------------------------------------------------
# text formats

_ANGLE_RE = re.compile(r"^\s*([-+]?[0-9./]*)\s*\*?\s*pi\s*(?:/\s*([0-9.]+))?\s*$", re.I)


def parse_angle(s):
    """Radians from a decimal or a symbolic multiple of pi ('3pi/4', 'pi', '2*pi/3')."""
    if isinstance(s, (int, float)):
        return float(s)
    s = str(s).strip()
    m = _ANGLE_RE.match(s)
    if m:
        coef = m.group(1)
        coef = Fraction(coef) if coef not in ("", "+", "-") else Fraction(-1 if coef == "-" else 1)
        den = Fraction(m.group(2)) if m.group(2) else 1
        return float(coef / den) * math.pi
    try:
        return float(s)
    except ValueError:
        raise PreconditionError("cannot parse angle %r" % s) from None


def load_graph(text):
    """Parse the JSON graph format; returns (graph, colors or None, angles or None)."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError("invalid JSON: %s" % exc.msg, line=exc.lineno) from None
    return graph_from_obj(obj)


def graph_from_obj(obj):
    if not isinstance(obj, dict):
        raise GraphFormatError("top level must be an object")
    for key in ("vertices", "edges"):
        if not isinstance(obj.get(key), list):
            raise GraphFormatError("missing list %r" % key, field=key)
    rot, ends = {}, {}
    for i, rec in enumerate(obj["vertices"]):
        try:
            rot[int(rec["id"])] = [int(e) for e in rec["rotation"]]
        except (KeyError, TypeError, ValueError):
            raise GraphFormatError("bad vertex record", field="vertices[%d]" % i) from None
    for i, rec in enumerate(obj["edges"]):
        try:
            a, b = rec["ends"]
            ends[int(rec["id"])] = (int(a), int(b))
        except (KeyError, TypeError, ValueError):
            raise GraphFormatError("bad edge record", field="edges[%d]" % i) from None
    g = PlanarGraph(rot, ends)
    colors = angles = None
    if "colors" in obj:
        colors = _edge_map(obj["colors"], "colors", HalfInt.of, g)
    if "angles" in obj:
        angles = _edge_map(obj["angles"], "angles", parse_angle, g)
    return g, colors, angles


def _edge_map(raw, field, conv, g):
    try:
        if isinstance(raw, dict):
            m = {int(k): conv(v) for k, v in raw.items()}
        else:
            m = {e: conv(v) for e, v in zip(g.edges, raw)}
    except (ValueError, TypeError, PreconditionError) as exc:
        raise GraphFormatError(str(exc), field=field) from None
    return m


def dump_graph(g, colors=None, angles=None):
    obj = g.to_json_obj()
    if colors is not None:
        obj["colors"] = {str(e): str(HalfInt.of(v)) for e, v in sorted(colors.items())}
    if angles is not None:
        obj["angles"] = {str(e): float(v) for e, v in sorted(angles.items())}
    return json.dumps(obj, indent=1)
