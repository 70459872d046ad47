"""Compiled batch evaluation of shadow state sums and circle-recursion
residuals over many colorings of one graph at one double-precision A.

The 6j-symbols, unknot values and recursion matrices are tabulated once by
the Python routines in spinnet and recursion; the kernels only walk states
and assemble products.
"""
import itertools

import numpy as np
from numba import njit

from . import graphs as G
from . import recursion as Rc
from . import spinnet as S
from .errors import PreconditionError
from .qarith import HalfInt, qtable


@njit(cache=True)
def _adm(x, y, z):
    return x + y >= z and y + z >= x and z + x >= y and (x + y + z) % 2 == 0


@njit(cache=True)
def _valid(t, vtx):
    for v in range(vtx.shape[0]):
        if not _adm(t[vtx[v, 0]], t[vtx[v, 1]], t[vtx[v, 2]]):
            return False
    return True


@njit(cache=True)
def _bracket(t, cptr, cedge, cother, vtx, SJ, UNK, smax):
    """(state sum, sum of |weights|) for doubled coloring t; regions are
    numbered in plan order with the external region first."""
    R = cptr.shape[0] - 1
    s = np.zeros(R, np.int64)
    cur = np.zeros(R, np.int64)
    top = np.zeros(R, np.int64)
    total = 0j
    mag = 0.0
    if R == 1:
        return total, mag
    i = 1
    while True:
        # open region i
        lo = 0
        hi = 1 << 30
        par = 0
        for k in range(cptr[i], cptr[i + 1]):
            so = s[cother[k]]
            ce = t[cedge[k]]
            d = so - ce if so >= ce else ce - so
            if d > lo:
                lo = d
            if so + ce < hi:
                hi = so + ce
            par = (so + ce) & 1
        if (lo & 1) != par:
            lo += 1
        if hi > smax:
            hi = smax
        cur[i] = lo
        top[i] = hi
        # advance
        while True:
            if cur[i] > top[i]:
                i -= 1
                if i == 0:
                    return total, mag
                cur[i] += 2
                continue
            s[i] = cur[i]
            if i == R - 1:
                w = 1.0 + 0j
                for r in range(1, R):
                    w *= UNK[s[r]]
                for v in range(vtx.shape[0]):
                    w *= SJ[t[vtx[v, 0]], t[vtx[v, 1]], t[vtx[v, 2]],
                            s[vtx[v, 3]], s[vtx[v, 4]], s[vtx[v, 5]]]
                    if w == 0:
                        break
                total += w
                mag += abs(w)
                cur[i] += 2
                continue
            i += 1
            break


@njit(cache=True)
def _brackets(cols, cptr, cedge, cother, vtx, SJ, UNK, smax):
    out = np.empty(cols.shape[0], np.complex128)
    for j in range(cols.shape[0]):
        out[j] = _bracket(cols[j], cptr, cedge, cother, vtx, SJ, UNK, smax)[0]
    return out


@njit(cache=True)
def _count_or_fill(E, maxt, epos_checks, vtx, out, fill):
    """Backtracking over edges 0..E-1; vertex triples are tested as soon as
    their last edge is set (epos_checks[e] lists vertices closing at e)."""
    t = np.zeros(E, np.int64)
    n = 0
    i = 0
    t[0] = -1
    while i >= 0:
        t[i] += 1
        if t[i] > maxt:
            i -= 1
            continue
        ok = True
        for k in range(epos_checks.shape[1]):
            v = epos_checks[i, k]
            if v < 0:
                break
            if not _adm(t[vtx[v, 0]], t[vtx[v, 1]], t[vtx[v, 2]]):
                ok = False
                break
        if not ok:
            continue
        if i == E - 1:
            if fill:
                out[n, :] = t
            n += 1
        else:
            i += 1
            t[i] = -1
    return n


@njit(cache=True)
def _recursion(cols, cptr, cedge, cother, vtx, SJ, UNK, smax,
               fedges, fcyc_pos, fcyc_b, fp, VT, floor):
    """Per-coloring worst relative residual of the circle recursion over all
    faces, both orientations (rows of fcyc_*) and the four (d0, dlast),
    normalized as in recursion.check_circle_recursion."""
    N = cols.shape[0]
    F = fedges.shape[0]
    P = fedges.shape[1]
    out = np.zeros(N, np.float64)
    nb = 1 << P
    br = np.zeros(nb, np.complex128)
    bm = np.zeros(nb, np.float64)
    ok = np.zeros(nb, np.bool_)
    sg = np.zeros(P, np.int64)
    for j in range(N):
        t = cols[j]
        base, bmag = _bracket(t, cptr, cedge, cother, vtx, SJ, UNK, smax)
        worst = 0.0
        for f in range(F):
            p = fp[f]
            tt = t.copy()
            for m in range(1 << p):
                neg = False
                for q in range(p):
                    d = 1 if (m >> q) & 1 == 0 else -1
                    tt[fedges[f, q]] = t[fedges[f, q]] + d
                    if tt[fedges[f, q]] < 0:
                        neg = True
                if neg or not _valid(tt, vtx):
                    ok[m] = False
                    br[m] = 0
                else:
                    ok[m] = True
                    br[m], bm[m] = _bracket(tt, cptr, cedge, cother, vtx, SJ, UNK, smax)
            for o in range(2):
                row = 2 * f + o
                for d0 in range(2):
                    for dl in range(2):
                        lhs = 0j
                        scale = 0.0
                        for mid in range(1 << (p - 2)):
                            # signs along the cycle: index 0 is +1/2, 1 is -1/2
                            sg[0] = d0
                            sg[p - 1] = dl
                            for q in range(p - 2):
                                sg[q + 1] = (mid >> q) & 1
                            m = 0
                            for q in range(p):
                                m |= sg[q] << fcyc_pos[row, q]
                            if not ok[m]:
                                continue
                            k = 1.0 + 0j
                            for q in range(p - 1):
                                a = t[fedges[f, fcyc_pos[row, q]]]
                                a1 = t[fedges[f, fcyc_pos[row, q + 1]]]
                                b = t[fcyc_b[row, q]]
                                k *= VT[a, a1, b, sg[q + 1], sg[q]]
                            lhs += k * br[m]
                            scale += abs(k) * bm[m]
                        a = t[fedges[f, fcyc_pos[row, p - 1]]]
                        a0 = t[fedges[f, fcyc_pos[row, 0]]]
                        b = t[fcyc_b[row, p - 1]]
                        z = VT[a, a0, b, d0, dl]
                        rhs = z * base
                        scale += abs(z) * bmag
                        den = max(abs(lhs), abs(rhs), floor, scale)
                        r = abs(lhs - rhs) / den
                        if r > worst:
                            worst = r
        out[j] = worst
    return out


class BatchEngine:
    """Tables and plan arrays for one graph at one numeric A (complex128).

    ``emax`` bounds doubled edge colors (after perturbation); states are
    bounded by ``smax`` and checked against the plan's depth.
    """

    def __init__(self, g, A, emax, ext=0, smax=None):
        self.g = g
        self.A = complex(A)
        self.emax = int(emax)
        self.edges = list(g.edges)
        if self.edges != list(range(len(self.edges))):
            raise PreconditionError("batch engine expects edges numbered 0..E-1")
        plan = S._plan(g, ext)
        order = plan.order
        pos = {r: i for i, r in enumerate(order)}
        bound = [0] * len(order)
        cptr, cedge, cother = [0], [], []
        for i, r in enumerate(order):
            b = None
            for e, o in plan.cons[i]:
                if o == r:
                    continue
                cedge.append(e)
                cother.append(pos[o])
                x = bound[pos[o]] + self.emax
                b = x if b is None else min(b, x)
            if i:
                bound[i] = b
            cptr.append(len(cedge))
        # a state never exceeds a neighbor's state plus the shared edge color
        self.smax = int(smax if smax is not None else max(bound + [1]))
        self.cptr = np.array(cptr, np.int64)
        self.cedge = np.array(cedge, np.int64)
        self.cother = np.array(cother, np.int64)
        vt = []
        for v in sorted(g.vertices):
            a, b, c, d, e, f = g.vertex_data(v)
            vt.append((a, b, c, pos[d], pos[e], pos[f]))
        self.vtx = np.array(vt, np.int64)
        self._tables()
        self._faces()

    def _tables(self):
        em, sm = self.emax, self.smax
        A = self.A
        SJ = np.zeros((em + 1,) * 3 + (sm + 1,) * 3, np.complex128)
        for a, b, c in itertools.product(range(em + 1), repeat=3):
            if not G.admissible_triple(a, b, c):
                continue
            for d, e, f in itertools.product(range(sm + 1), repeat=3):
                if not (G.admissible_triple(a, e, f) and G.admissible_triple(d, b, f)
                        and G.admissible_triple(d, e, c)):
                    continue
                try:
                    six = S.SixJInput([HalfInt(twice=x) for x in (a, b, c, d, e, f)])
                except PreconditionError:
                    continue
                SJ[a, b, c, d, e, f] = complex(S.sixj(six, A))
        self.SJ = SJ
        tab = qtable(A)
        self.UNK = np.array([complex(-tab.qint(x + 1) if x % 2 else tab.qint(x + 1))
                             for x in range(sm + 1)], np.complex128)
        VT = np.zeros((em + 1,) * 3 + (2, 2), np.complex128)
        for a, a1, b in itertools.product(range(em + 1), repeat=3):
            if not G.admissible_triple(a, a1, b):
                continue
            V = Rc.v_matrix(HalfInt(twice=a), HalfInt(twice=a1), HalfInt(twice=b), A)
            for i in range(2):
                for j in range(2):
                    VT[a, a1, b, i, j] = complex(V.m[i][j])
        self.VT = VT

    def _faces(self):
        g = self.g
        nf = len(g.faces())
        P = max(len(g.face_edges(f)) for f in range(nf))
        fedges = -np.ones((nf, P), np.int64)
        pos = np.zeros((2 * nf, P), np.int64)
        bs = np.zeros((2 * nf, P), np.int64)
        fp = np.zeros(nf, np.int64)
        for f in range(nf):
            canon = [e for e, _ in g.face_cycle(f)]
            fp[f] = len(canon)
            fedges[f, :len(canon)] = canon
            for o, orient in enumerate((1, -1)):
                cyc = g.face_cycle(f, None, orient)
                for q, (e, b) in enumerate(cyc):
                    pos[2 * f + o, q] = canon.index(e)
                    bs[2 * f + o, q] = b
        if (fp != P).any():
            raise PreconditionError("batch recursion expects faces of equal length")
        self.fedges, self.fcyc_pos, self.fcyc_b, self.fp = fedges, pos, bs, fp

    # -- public -----------------------------------------------------------

    def colorings(self, max_twice):
        """All admissible colorings with doubled colors <= max_twice as an
        (N, E) int64 array."""
        E = len(self.edges)
        closes = [[] for _ in range(E)]
        for v in range(self.vtx.shape[0]):
            closes[max(self.vtx[v, :3])].append(v)
        width = max(1, max(len(c) for c in closes))
        ec = -np.ones((E, width), np.int64)
        for e, lst in enumerate(closes):
            ec[e, :len(lst)] = lst
        n = _count_or_fill(E, int(max_twice), ec, self.vtx, np.zeros((1, E), np.int64), False)
        out = np.zeros((n, E), np.int64)
        _count_or_fill(E, int(max_twice), ec, self.vtx, out, True)
        return out

    def _check(self, cols):
        cols = np.ascontiguousarray(cols, np.int64)
        if cols.size and cols.max() > self.emax:
            raise PreconditionError("color exceeds the tabulated range")
        return cols

    def brackets(self, cols):
        cols = self._check(cols)
        return _brackets(cols, self.cptr, self.cedge, self.cother, self.vtx,
                         self.SJ, self.UNK, self.smax)

    def recursion_residuals(self, cols, floor=1e-300):
        cols = self._check(cols)
        if cols.size and cols.max() + 1 > self.emax:
            raise PreconditionError("perturbed colors exceed the tabulated range")
        return _recursion(cols, self.cptr, self.cedge, self.cother, self.vtx, self.SJ,
                          self.UNK, self.smax, self.fedges, self.fcyc_pos, self.fcyc_b,
                          self.fp, self.VT, floor)
