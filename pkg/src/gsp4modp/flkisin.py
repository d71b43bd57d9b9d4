"""Mod-p Galois parameter dictionary: filtered-module data, duality and
symplecticity, the associated Frobenius matrix over F_p[v, 1/v], its Iwahori
double-coset shape, and the two scalar invariants with their inverse recipe.

All arithmetic is exact over F_p.  Laurent-polynomial matrices are dense
4x4 arrays of {exponent: coefficient} dicts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import rootdata as rd


class GenericityError(ValueError):
    pass


class NoSolution(ValueError):
    pass


class SingularError(ValueError):
    pass


@dataclass(frozen=True)
class GenericityReport:
    depth: int
    per_root_margins: dict
    weak: bool
    strong: bool


@dataclass(frozen=True)
class FLData:
    """Parameters (weights a3 > a2 > a1 > a0, diagonal units, extension
    classes) of an upper-triangular maximally nonsplit symplectic mod-p
    representation."""

    p: int
    weights: tuple          # (a3, a2, a1, a0)
    xi: tuple               # (xi0, xi1, xi2, xi3) in F_p^x
    x02: int
    x03: int
    x13: int

    def __post_init__(self):
        p = self.p
        a3, a2, a1, a0 = self.weights
        if not (a3 > a2 > a1 > a0):
            raise ValueError("weights must be strictly decreasing")
        if a0 + a3 != a1 + a2:
            raise ValueError("weights must satisfy a0 + a3 = a1 + a2")
        xs = [x % p for x in self.xi]
        if any(x == 0 for x in xs):
            raise ValueError("diagonal entries must be units")
        if (xs[0] * xs[3] - xs[1] * xs[2]) % p:
            raise ValueError("similitude constraint xi0 xi3 = xi1 xi2 fails")

    @property
    def b(self):
        return self.weights[0] + self.weights[3]

    @property
    def similitude(self):
        return self.xi[0] * self.xi[3] % self.p

    def is_symplectic(self):
        p = self.p
        return (self.xi[1] * self.x02 + self.xi[2] * self.x13 - 1) % p == 0

    def to_json(self):
        return {"p": self.p, "weights": list(self.weights),
                "xi": [x % self.p for x in self.xi],
                "x02": self.x02 % self.p, "x03": self.x03 % self.p,
                "x13": self.x13 % self.p}

    @staticmethod
    def from_json(obj):
        return FLData(obj["p"], tuple(obj["weights"]), tuple(obj["xi"]),
                      obj["x02"], obj["x03"], obj["x13"])


def check_genericity(fl, delta):
    """Inertial depth plus the weak/strong open conditions."""
    p = fl.p
    a3, a2, a1, a0 = fl.weights
    margins = {}
    depth = None
    pairs = {"a1-a0": a1 - a0, "a2-a1": a2 - a1, "a3-a2": a3 - a2,
             "a2-a0": a2 - a0, "a3-a1": a3 - a1, "a3-a0": a3 - a0}
    for name, gap in pairs.items():
        m = min(gap, p - gap) - 1 if 0 < gap < p else -1
        margins[name] = m
        depth = m if depth is None else min(depth, m)
    xi0, xi1, xi2, xi3 = (x % p for x in fl.xi)
    weak = (fl.x03 % p != 0) and ((xi1 * fl.x03 - fl.x13) % p != 0)
    strong = weak and (((a3 - a0) * xi2 * fl.x03 - (a2 - a1) * fl.x02) % p != 0)
    report = GenericityReport(depth, margins, weak, strong)
    if depth < delta:
        return report
    return report


def is_inertially_generic(fl, delta):
    a3, a2, a1, a0 = fl.weights
    return all(delta < hi - lo < fl.p - delta
               for hi, lo in [(a1, a0), (a2, a1), (a3, a2),
                              (a2, a0), (a3, a1), (a3, a0)])


def require_generic(fl, delta, strong=False):
    rep = check_genericity(fl, delta)
    if not is_inertially_generic(fl, delta):
        raise GenericityError("inertial %d-genericity fails: margins %r"
                              % (delta, rep.per_root_margins))
    if not rep.weak:
        raise GenericityError("weak genericity fails (x03 or xi1 x03 - x13)")
    if strong and not rep.strong:
        raise GenericityError("strong genericity fails "
                              "((a3-a0) xi2 x03 - (a2-a1) x02 = 0)")
    return rep


# ---------------------------------------------------------------------------
# filtered-module matrices over F_p

def fl_matrix(fl):
    """Frobenius matrix in the distinguished basis: upper triangular with
    diagonal xi, superdiagonal ones, and corner entries x02, x13, x03."""
    p = fl.p
    xi0, xi1, xi2, xi3 = (x % p for x in fl.xi)
    return ((xi0, 1, fl.x02 % p, fl.x03 % p),
            (0, xi1, 1, fl.x13 % p),
            (0, 0, xi2, 1),
            (0, 0, 0, xi3))


def fl_dual(fl):
    """Frobenius matrix of the twisted dual module in its normalized basis.

    Fixed points of this construction are exactly the symplectic parameter
    tuples (xi1 x02 + xi2 x13 = 1).
    """
    p = fl.p
    xi0, xi1, xi2, xi3 = (x % p for x in fl.xi)
    xi = fl.similitude
    i = lambda u: pow(u, -1, p)
    e02 = i(xi1) * (1 - xi2 * fl.x13) % p
    e13 = i(xi2) * (1 - xi1 * fl.x02) % p
    e03 = (fl.x03 - i(xi1) * fl.x13 - i(xi2) * fl.x02 + i(xi)) % p
    return ((xi0, 1, e02, e03),
            (0, xi1, 1, e13),
            (0, 0, xi2, 1),
            (0, 0, 0, xi3))


def fl_dual_data(fl):
    """fl_dual repackaged as FLData (same p, weights, diagonal)."""
    m = fl_dual(fl)
    return FLData(fl.p, fl.weights, fl.xi,
                  x02=m[0][2], x03=m[0][3], x13=m[1][3])


# ---------------------------------------------------------------------------
# Laurent-polynomial matrices

def lp(*pairs):
    """Laurent polynomial from (exponent, coeff) pairs."""
    out = {}
    for e, c in pairs:
        if c:
            out[e] = out.get(e, 0) + c
    return out


def lp_add(a, b, p):
    out = dict(a)
    for e, c in b.items():
        v = (out.get(e, 0) + c) % p
        if v:
            out[e] = v
        elif e in out:
            del out[e]
    return {e: c % p for e, c in out.items() if c % p}


def lp_mul(a, b, p):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            out[e] = (out.get(e, 0) + c1 * c2) % p
    return {e: c for e, c in out.items() if c}


def lp_scale(a, c, p):
    return {e: (v * c) % p for e, v in a.items() if (v * c) % p}


def lp_val(a):
    return min(a) if a else None


class LaurentMatrix:
    """4x4 matrix over F_p[v, 1/v]."""

    def __init__(self, p, entries=None):
        self.p = p
        self.m = [[dict() for _ in range(4)] for _ in range(4)]
        if entries:
            for i in range(4):
                for j in range(4):
                    self.m[i][j] = {e: c % p for e, c in entries[i][j].items()
                                    if c % p}

    def copy(self):
        return LaurentMatrix(self.p, self.m)

    def transpose(self):
        out = LaurentMatrix(self.p)
        for i in range(4):
            for j in range(4):
                out.m[i][j] = dict(self.m[j][i])
        return out

    def mul(self, other):
        p = self.p
        out = LaurentMatrix(p)
        for i in range(4):
            for j in range(4):
                acc = {}
                for k in range(4):
                    acc = lp_add(acc, lp_mul(self.m[i][k], other.m[k][j], p), p)
                out.m[i][j] = acc
        return out

    def scale(self, poly):
        out = LaurentMatrix(self.p)
        for i in range(4):
            for j in range(4):
                out.m[i][j] = lp_mul(self.m[i][j], poly, self.p)
        return out

    def __eq__(self, other):
        return self.p == other.p and self.m == other.m

    def minor(self, rows, cols):
        """Determinant of the square submatrix."""
        p = self.p
        n = len(rows)
        if n == 1:
            return dict(self.m[rows[0]][cols[0]])
        acc = {}
        for idx, r in enumerate(rows):
            sub = self.minor(rows[:idx] + rows[idx + 1:], cols[1:])
            term = lp_mul(self.m[r][cols[0]], sub, p)
            if idx % 2:
                term = lp_scale(term, p - 1, p)
            acc = lp_add(acc, term, p)
        return acc

    def det(self):
        return self.minor((0, 1, 2, 3), (0, 1, 2, 3))

    def entry_val(self, i, j):
        return lp_val(self.m[i][j])


def j_form(p):
    one = lambda: lp((0, 1))
    neg = lambda: lp((0, p - 1))
    out = LaurentMatrix(p)
    out.m[0][3] = one()
    out.m[1][2] = one()
    out.m[2][1] = neg()
    out.m[3][0] = neg()
    return out


def kisin_matrix(fl):
    """The Frobenius matrix in the gauge basis attached to a weakly
    4-generic parameter tuple."""
    require_generic(fl, 4)
    p = fl.p
    xi0, xi1, xi2, xi3 = (x % p for x in fl.xi)
    xi = fl.similitude
    i = lambda u: pow(u % p, -1, p)
    x02, x03, x13 = fl.x02 % p, fl.x03 % p, fl.x13 % p
    d = (xi1 * x03 - x13) % p
    a = LaurentMatrix(p)
    # the (1,3) and (2,3) coefficients carry a similitude factor forced by
    # the pairing identity A^t J A = xi v^3 J (column-2/3 and column-1/3
    # pairings); without it the identity only holds when xi = 1
    a.m[0][3] = lp((2, (-xi * i(x03)) % p))
    a.m[1][1] = lp((2, xi * x03 * i(d) % p))
    a.m[1][3] = lp((2, xi * xi0 * i(d) % p))
    a.m[2][1] = lp((2, (-xi1 * i(xi0) * (1 - x13 * x02 * i(x03))) % p))
    a.m[2][2] = lp((1, d * i(x03) % p))
    a.m[2][3] = lp((2, (-xi * x13 * i(x03)) % p))
    a.m[3][0] = lp((1, x03))
    a.m[3][1] = lp((2, (-xi1 * x02) % p))
    a.m[3][2] = lp((1, xi0))
    a.m[3][3] = lp((2, xi0))
    return a


@dataclass(frozen=True)
class Shape:
    """Monomial matrix v^mu sigma: entry (perm[j], j) carries v^exps[j]."""

    perm: tuple            # column j has its entry in row perm[j]
    exps: tuple            # exponent of the entry in column j

    def row_exponents(self):
        out = [None] * 4
        for j in range(4):
            out[self.perm[j]] = self.exps[j]
        return tuple(out)

    def to_matrix(self, p):
        out = LaurentMatrix(p)
        for j in range(4):
            out.m[self.perm[j]][j] = lp((self.exps[j], 1))
        return out


def shape_of(a):
    """Iwahori double-coset invariant of an invertible Laurent matrix,
    extracted by legal valuation pivoting.

    At each step the pivot is the (bottom row, leftmost column) extremal
    entry among those of minimal valuation; this makes every clearing
    operation land in the upper-triangular-mod-v subgroup on both sides.
    """
    p = a.p
    work = a.copy()
    active_rows = set(range(4))
    active_cols = set(range(4))
    perm = [None] * 4
    exps = [None] * 4
    for _ in range(4):
        best = None
        for i in active_rows:
            for j in active_cols:
                v = work.entry_val(i, j)
                if v is None:
                    continue
                if best is None or v < best[0]:
                    best = (v, i, j)
        if best is None:
            raise SingularError("matrix not invertible over F((v))")
        m = best[0]
        level = [(i, j) for i in active_rows for j in active_cols
                 if work.entry_val(i, j) == m]
        jmin = min(j for _i, j in level)
        imax = max(i for i, j in level if j == jmin)
        i0, j0 = imax, jmin
        piv = work.m[i0][j0]
        piv_inv_lead = pow(piv[m], -1, p)
        # clear the rest of column j0 by row operations, and row i0 by
        # column operations; multipliers are legal Iwahori entries
        for i in list(active_rows):
            if i == i0 or not work.m[i][j0]:
                continue
            mult = _lp_div(work.m[i][j0], piv, p)
            for j in active_cols:
                delta = lp_scale(lp_mul(mult, work.m[i0][j], p), p - 1, p)
                work.m[i][j] = _lp_trunc(lp_add(work.m[i][j], delta, p))
        for j in list(active_cols):
            if j == j0 or not work.m[i0][j]:
                continue
            mult = _lp_div(work.m[i0][j], piv, p)
            for i in active_rows:
                delta = lp_scale(lp_mul(work.m[i][j0], mult, p), p - 1, p)
                work.m[i][j] = _lp_trunc(lp_add(work.m[i][j], delta, p))
        perm[j0] = i0
        exps[j0] = m
        active_rows.remove(i0)
        active_cols.remove(j0)
    return Shape(tuple(perm), tuple(exps))


# Laurent arithmetic during pivoting is truncated above this exponent; the
# shape's pivot valuations are bounded by the determinant valuation, so any
# cap comfortably above it is exact for shape extraction.
_SHAPE_PRECISION = 16


def _lp_div(num, den, p, cap=_SHAPE_PRECISION):
    """Power-series quotient num/den of Laurent polynomials (den with unit
    leading coefficient), truncated above exponent `cap`."""
    num = dict(num)
    dval = lp_val(den)
    lead_inv = pow(den[dval], -1, p)
    out = {}
    while num:
        nval = lp_val(num)
        if nval - dval > cap:
            break
        e = nval - dval
        c = num[nval] * lead_inv % p
        out[e] = c
        num = lp_add(num, {k + e: (-v * c) % p for k, v in den.items()}, p)
    return out


def _lp_trunc(a, cap=_SHAPE_PRECISION):
    return {e: c for e, c in a.items() if e <= cap}


def check_symplectic_shape(shape, p):
    """Monomial-matrix identity: w = v^3 w0 w^{-t} w0."""
    w = shape.to_matrix(p)
    w0 = LaurentMatrix(p)
    for k in range(4):
        w0.m[k][3 - k] = lp((0, 1))
    # inverse-transpose of a monomial matrix: entry (j, i) = 1/entry(i, j)
    inv_t = LaurentMatrix(p)
    for j in range(4):
        i = shape.perm[j]
        c = w.m[i][j]
        e = lp_val(c)
        inv_t.m[i][j] = lp((-e, pow(c[e], -1, p)))
    rhs = w0.mul(inv_t).mul(w0).scale(lp((3, 1)))
    return w == rhs


# ---------------------------------------------------------------------------
# scalar invariants

def zeta_invariants(fl, delta=7):
    """(zeta1, zeta2) of a strongly generic parameter tuple."""
    require_generic(fl, delta, strong=True)
    p = fl.p
    a3, a2, a1, a0 = fl.weights
    xi0, xi1, xi2, xi3 = (x % p for x in fl.xi)
    xi = fl.similitude
    if (a3 - a0 + 2) % p == 0:
        raise GenericityError("a3 - a0 + 2 vanishes mod p")
    i = lambda u: pow(u % p, -1, p)
    zeta2 = (xi1 - fl.x13 * i(fl.x03)) % p
    bracket = ((a3 - a0) * xi0 - (a2 - a1) * xi0 * fl.x02 * i(xi2 * fl.x03)) % p
    zeta1 = bracket * i(xi * (a3 - a0 + 2)) % p
    if zeta1 == 0 or zeta2 == 0:
        raise GenericityError("vanishing invariant")
    return zeta1, zeta2


def recover_fl(p, weights, xi, zeta1, zeta2, delta=7):
    """The unique (x02, x03, x13) with the given invariants; inverse of
    zeta_invariants on strongly generic data."""
    a3, a2, a1, a0 = weights
    xi0, xi1, xi2, xi3 = (x % p for x in xi)
    xim = xi0 * xi3 % p
    i = lambda u: pow(u % p, -1, p)
    if (a3 - a0 + 2) % p == 0 or (a2 - a1) % p == 0:
        raise NoSolution("excluded weight configuration")
    # zeta2 determines x13 / x03; symplecticity determines x02 from x13;
    # zeta1 then pins x03 through a single linear relation.
    t = (xi1 - zeta2) % p                      # x13 = t x03
    u = (zeta1 * xim * (a3 - a0 + 2)) % p      # = xi0 [ (a3-a0) - (a2-a1) x02/(xi2 x03) ]
    # x02 = (1 - xi2 t x03) / xi1
    # substitute: u = xi0 (a3-a0) - xi0 (a2-a1)/(xi2 x03) * (1 - xi2 t x03)/xi1
    # solve for 1/x03:
    lhs = (u - xi0 * (a3 - a0) - xi0 * (a2 - a1) * i(xi1) * t) % p
    coef = (-xi0 * (a2 - a1) * i(xi1 * xi2)) % p
    if coef % p == 0:
        raise NoSolution("degenerate linear system")
    inv_x03 = lhs * i(coef) % p
    if inv_x03 == 0:
        raise NoSolution("invariants outside the strongly generic image")
    x03 = i(inv_x03)
    x13 = t * x03 % p
    x02 = (1 - xi2 * x13) * i(xi1) % p
    fl = FLData(p, tuple(weights), tuple(xi), x02, x03, x13)
    require_generic(fl, delta, strong=True)
    return fl


def types_and_weights(fl):
    """(lowest-alcove type weight, distinguished Serre-weight parameter)."""
    if not is_inertially_generic(fl, 2):
        raise GenericityError("inertial 2-genericity required")
    a3, a2, a1, a0 = fl.weights
    mu0 = (a2 - a0, a1 - a0 + 1, a0 + a3 - 3)
    mu_rho = (a2 - a0 - 2, a1 - a0 - 1, a0 + a3 - 3)
    return mu0, mu_rho
