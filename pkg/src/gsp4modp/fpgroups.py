"""Brute-force principal-series oracle over Z/p^N.

Realizes M(lambda) = Ind_{B(F_p)}^{G(F_p)} of the Teichmueller lift of a
torus character, the intertwiners T_w attached to Weyl elements, their
Smith normal form over the local ring Z/p^N, and the resulting filtration
layer dimensions.

Conventions fixed once:

* The module M(lambda) is A[G]/I_lambda with its left G-action; basis
  vectors are classes [g_i] of canonical coset representatives of G/B,
  which satisfy [g b] = lam~(b) [g] for b in B.
* Operators are written on coordinate columns: the matrix T of an operator
  has T[k, i] = coefficient of e_k in the image of e_i, so composition of
  operators is the usual matrix product acting on the left.
* The double-coset operator attached to a simple reflection s with root
  subgroup x(t) is normalized by 1/|U|, which makes it the p-term sum
  e_i -> sum_t [g_i x(t) sdot^{-1}].  With this normalization T_id = id and
  lengths-additive composites agree with single double-coset sums.
"""

from __future__ import annotations

import numpy as np

from . import rootdata as rd
from .rootdata import vec_scale


class BudgetExceeded(Exception):
    pass


class ModulusTooSmall(Exception):
    pass


# ---------------------------------------------------------------------------
# concrete matrix groups

def _gsp4_j():
    return np.array([[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]],
                    dtype=np.int64)


class FiniteGroupContext:
    """Matrix-level data for one (group, p)."""

    def __init__(self, group_id, p):
        if group_id == "SL3":
            group_id = "GL3"
        self.group_id = group_id
        self.p = p
        self.datum = rd.datum(group_id)
        if group_id == "SL2":
            self.n = 2
            self.simple_lifts = [np.array([[0, -1], [1, 0]], dtype=np.int64)]
            self._root_pos = {0: [(0, 1)]}
        elif group_id == "GL3":
            self.n = 3
            s1 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=np.int64)
            s2 = np.array([[1, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=np.int64)
            self.simple_lifts = [s1, s2]
            # positive roots in datum order: e1-e2, e2-e3, e1-e3
            self._root_pos = {0: [(0, 1)], 1: [(1, 2)], 2: [(0, 2)]}
        elif group_id == "GSp4":
            self.n = 4
            s0 = np.array([[0, 1, 0, 0], [1, 0, 0, 0],
                           [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.int64)
            s1 = np.array([[1, 0, 0, 0], [0, 0, -1, 0],
                           [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.int64)
            self.simple_lifts = [s0, s1]
            # root subgroup occupancy, datum order a0, a1, 2a0+a1, a0+a1
            self._root_pos = {0: [(0, 1), (2, 3, -1)], 1: [(1, 2)],
                              2: [(0, 3)], 3: [(0, 2), (1, 3)]}
        else:
            raise ValueError("unsupported oracle group %r" % (group_id,))
        for s in self.simple_lifts:
            self._check_in_group(s)

    def _check_in_group(self, m):
        p = self.p
        if self.group_id == "GSp4":
            j = _gsp4_j()
            lhs = (m.T @ j @ m) % p
            nu = None
            for (r, c) in ((0, 3), (1, 2)):
                if j[r, c]:
                    nu = lhs[r, c] * pow(int(j[r, c]), -1, p) % p
            if not np.array_equal(lhs % p, (nu * j) % p):
                raise AssertionError("matrix not in GSp4")
        # SL2/GL3 lifts are visibly invertible

    def root_element(self, root_index, t):
        """x_alpha(t) for alpha = datum.positive_roots[root_index]."""
        m = np.eye(self.n, dtype=np.int64)
        for pos in self._root_pos[root_index]:
            if len(pos) == 2:
                r, c = pos
                m[r, c] = t % self.p
            else:
                r, c, sgn = pos
                m[r, c] = (sgn * t) % self.p
        return m

    def unipotent_elements(self):
        """All of U(F_p), as products of root elements in datum order."""
        from itertools import product as iproduct
        p = self.p
        k = len(self.datum.positive_roots)
        out = []
        for ts in iproduct(range(p), repeat=k):
            m = np.eye(self.n, dtype=np.int64)
            for i, t in enumerate(ts):
                m = (m @ self.root_element(i, t)) % p
            out.append(m % p)
        return out

    def torus_coords(self, b):
        """Character coordinates of the torus part of b in B(F_p)."""
        if self.group_id == "SL2":
            return (int(b[0, 0]) % self.p,)
        if self.group_id == "GL3":
            return tuple(int(b[i, i]) % self.p for i in range(3))
        t1 = int(b[0, 0]) % self.p
        t2 = int(b[1, 1]) % self.p
        nu = int(b[0, 0]) * int(b[3, 3]) % self.p
        return (t1, t2, nu)

    def torus_matrix(self, coords):
        p = self.p
        if self.group_id == "SL2":
            t = coords[0] % p
            return np.array([[t, 0], [0, pow(t, -1, p)]], dtype=np.int64)
        if self.group_id == "GL3":
            return np.diag(np.array([c % p for c in coords], dtype=np.int64))
        t1, t2, nu = (c % p for c in coords)
        return np.diag(np.array(
            [t1, t2, nu * pow(t2, -1, p) % p, nu * pow(t1, -1, p) % p],
            dtype=np.int64))

    def char_exponents(self, lam):
        """Integer exponents of lam against torus_coords."""
        if self.group_id == "SL2":
            return (lam[0],)
        if self.group_id == "GL3":
            return tuple(lam)
        a, b, c = rd.check_parity(lam)
        return (a, b, (c - a - b) // 2)

    def char_value(self, lam, coords, modulus, p_power):
        """Teichmueller-lifted value of lam at the torus point, mod p^N."""
        val = 1
        for x, e in zip(coords, self.char_exponents(lam)):
            w = teichmuller(x, self.p, p_power, modulus)
            if e < 0:
                w = pow(w, -1, modulus)
                e = -e
            val = val * pow(w, e, modulus) % modulus
        return val


def teichmuller(x, p, n_exp, modulus):
    """Teichmueller representative of x mod p^n_exp (modulus = p**n_exp)."""
    return pow(x % modulus, p ** (n_exp - 1), modulus)


# ---------------------------------------------------------------------------
# flag enumeration

def canonical_flag(m, p):
    """Canonical representative of the coset m B as a GL-flag.

    Column operations only ever add earlier columns into later ones (that is
    right multiplication by invertible upper-triangular matrices); pivots are
    chosen bottommost.  Returns an immutable key.
    """
    a = [[int(x) % p for x in row] for row in m]
    n = len(a)
    piv = []
    for j in range(n):
        for i, r in zip(range(j), piv):
            f = a[r][j]
            if f:
                for k in range(n):
                    a[k][j] = (a[k][j] - f * a[k][i]) % p
        r = max(k for k in range(n) if a[k][j])
        inv = pow(a[r][j], -1, p)
        for k in range(n):
            a[k][j] = a[k][j] * inv % p
        piv.append(r)
    return tuple(tuple(row) for row in a)


class InducedLattice:
    """Enumerated flags of one (group, p) plus cached reduction tables.

    The basis of every M(lambda) is the fixed list of coset representatives,
    in discovery (BFS) order; only the character values depend on lambda.
    """

    def __init__(self, ctx, budget=10 ** 6):
        self.ctx = ctx
        d = ctx.datum
        expected = sum(ctx.p ** w.length for w in d.weyl)
        if expected > budget:
            raise BudgetExceeded("flag count %d exceeds budget %d"
                                 % (expected, budget))
        self.reps = []
        self._index = {}
        self._enumerate()
        if len(self.reps) != expected:
            raise AssertionError("Bruhat count mismatch: %d != %d"
                                 % (len(self.reps), expected))
        self.size = len(self.reps)
        self._simple_tables = {}

    def _enumerate(self):
        ctx = self.ctx
        p = ctx.p
        gens = list(ctx.simple_lifts)
        for i in range(len(ctx.datum.simple_roots)):
            gens.append(ctx.root_element(i, 1))
        ident = np.eye(ctx.n, dtype=np.int64)
        key = canonical_flag(ident, p)
        self.reps.append(ident)
        self._index[key] = 0
        frontier = [ident]
        while frontier:
            nxt = []
            for m in frontier:
                for g in gens:
                    h = (g @ m) % p
                    k = canonical_flag(h, p)
                    if k not in self._index:
                        self._index[k] = len(self.reps)
                        self.reps.append(h)
                        nxt.append(h)
            frontier = nxt

    def reduce(self, h):
        """Index k and torus coordinates t with h = reps[k] * b, b in B,
        torus part t."""
        p = self.ctx.p
        k = self._index[canonical_flag(h, p)]
        rep = self.reps[k]
        b = (_inv_mod_matrix(rep, p) @ h) % p
        if np.any(np.tril(b, -1) % p):
            raise AssertionError("reduction left lower-triangular residue")
        return k, self.ctx.torus_coords(b)

    def simple_table(self, i):
        """For each basis index i0 the list over t in F_p of (k, coords) with
        reps[i0] x_i(t) sdot_i^{-1} = reps[k] b."""
        if i not in self._simple_tables:
            ctx = self.ctx
            p = ctx.p
            sdot_inv = _inv_mod_matrix(ctx.simple_lifts[i], p)
            root_idx = self._simple_root_index(i)
            table = []
            for rep in self.reps:
                row = []
                for t in range(p):
                    h = (rep @ ctx.root_element(root_idx, t) @ sdot_inv) % p
                    row.append(self.reduce(h))
                table.append(row)
            self._simple_tables[i] = table
        return self._simple_tables[i]

    def _simple_root_index(self, i):
        alpha = self.ctx.datum.simple_roots[i]
        return self.ctx.datum.positive_roots.index(alpha)

    # -- operators -----------------------------------------------------------

    def action_matrix(self, g, lam, N):
        """Matrix of the left action of g on M(lambda) over Z/p^N."""
        ctx = self.ctx
        mod = ctx.p ** N
        out = np.zeros((self.size, self.size), dtype=np.int64)
        for i0, rep in enumerate(self.reps):
            k, coords = self.reduce((g @ rep) % ctx.p)
            out[k, i0] = ctx.char_value(lam, coords, mod, N)
        return out

    def simple_intertwiner(self, i, lam, N):
        """Matrix of the normalized T_{sdot_i}: M(lambda) -> M(s_i lambda)."""
        ctx = self.ctx
        mod = ctx.p ** N
        target = ctx.datum.simple(i).act(lam)
        out = np.zeros((self.size, self.size), dtype=np.int64)
        for i0, row in enumerate(self.simple_table(i)):
            for k, coords in row:
                out[k, i0] = (out[k, i0]
                              + ctx.char_value(target, coords, mod, N)) % mod
        return out

    def intertwiner(self, lam, w, N):
        """Matrix of the normalized T_w: M(lambda) -> M(w lambda), built by
        composing simple factors along a reduced word."""
        ctx = self.ctx
        if N < w.length + 1:
            raise ModulusTooSmall("need N >= l(w)+1 = %d" % (w.length + 1))
        mod = ctx.p ** N
        total = np.eye(self.size, dtype=np.int64)
        cur = lam
        for i in reversed(w.word):
            m = self.simple_intertwiner(i, cur, N)
            total = (m @ total) % mod
            cur = ctx.datum.simple(i).act(cur)
        return total

    def intertwiner_direct(self, lam, w, N):
        """T_w from the literal double-coset sum (1/|U|) sum_{g in U wdot U}
        of right translation by g^{-1}.  Exponential in p; testing only."""
        ctx = self.ctx
        p = ctx.p
        mod = p ** N
        wdot = np.eye(ctx.n, dtype=np.int64)
        for i in w.word:
            wdot = (wdot @ ctx.simple_lifts[i]) % p
        target = w.act(lam)
        us = self.ctx.unipotent_elements()
        seen = set()
        coset_reps = []
        for u2 in us:
            g = (wdot @ u2) % p
            key = g.tobytes()
            if key in seen:
                continue
            # mark the whole left coset U g
            new = True
            for u1 in us:
                h = (u1 @ g) % p
                hk = h.tobytes()
                if hk in seen:
                    new = False
                seen.add(hk)
            if new:
                coset_reps.append(g)
        out = np.zeros((self.size, self.size), dtype=np.int64)
        for i0, rep in enumerate(self.reps):
            for g in coset_reps:
                h = (rep @ _inv_mod_matrix(g, p)) % p
                k, coords = self.reduce(h)
                out[k, i0] = (out[k, i0]
                              + ctx.char_value(target, coords, mod, N)) % mod
        return out


def _inv_mod_matrix(m, p):
    a = [[int(x) % p for x in row] for row in m]
    n = len(a)
    inv = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] % p)
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        f = pow(a[col][col], -1, p)
        a[col] = [x * f % p for x in a[col]]
        inv[col] = [x * f % p for x in inv[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[col])]
                inv[r] = [(x - f * y) % p for x, y in zip(inv[r], inv[col])]
    return np.array(inv, dtype=np.int64)


# ---------------------------------------------------------------------------
# Smith normal form over Z/p^N

def smith_exponents(mat, p, N):
    """Multiset (sorted list) of elementary divisor exponents of a square
    matrix over Z/p^N.  Raises ModulusTooSmall if an exponent reaches N."""
    a = np.array(mat, dtype=np.int64) % (p ** N)
    n = a.shape[0]
    if a.shape[0] != a.shape[1]:
        raise ValueError("square matrix required")
    exps = []
    level = 0
    k = 0
    while k < n:
        sub = a[k:, k:]
        units = np.argwhere(sub % p != 0)
        if units.size == 0:
            if not sub.any():
                raise ModulusTooSmall(
                    "residual block vanishes mod p^%d" % (N - level))
            level += 1
            if level >= N:
                raise ModulusTooSmall("exponent reached N = %d" % N)
            a[k:, k:] = sub // p
            continue
        r, c = units[0]          # first unit in row-major order
        r, c = int(r) + k, int(c) + k
        if r != k:
            a[[k, r], :] = a[[r, k], :]
        if c != k:
            a[:, [k, c]] = a[:, [c, k]]
        mod = p ** (N - level)
        piv_inv = pow(int(a[k, k]) % mod, -1, mod)
        col = (a[k + 1:, k] * piv_inv) % mod
        if col.any():
            a[k + 1:, k:] = (a[k + 1:, k:] - np.outer(col, a[k, k:])) % mod
        row = (a[k, k + 1:] * piv_inv) % mod
        if row.any():
            a[k:, k + 1:] = (a[k:, k + 1:] - np.outer(a[k:, k], row)) % mod
        exps.append(level)
        k += 1
    return sorted(exps)


def smith_with_transforms(mat, p, N):
    """(exponents, U, Q) with mat = U . diag(p^{e_k}) . Q^{-1}, both
    transforms invertible over Z/p^N.  Plain minimal-valuation pivoting with
    first (row-major) tie-break; intended for the moderate sizes used by
    normalized_intertwiner.
    """
    modN = p ** N
    a = np.array(mat, dtype=np.int64) % modN
    n = a.shape[0]
    uinv = np.eye(n, dtype=np.int64)   # running U
    q = np.eye(n, dtype=np.int64)      # running V^{-1}
    exps = []
    for k in range(n):
        sub = a[k:, k:]
        best = None
        for e in range(N):
            cand = np.argwhere(sub % (p ** (e + 1)) != 0)
            if e:
                mask = sub % (p ** e) == 0
                cand = np.array([rc for rc in cand if mask[rc[0], rc[1]]])
            if cand.size:
                best = (e, int(cand[0][0]) + k, int(cand[0][1]) + k)
                break
        if best is None:
            raise ModulusTooSmall("exponent reached N = %d" % N)
        e, r, c = best
        if r != k:
            a[[k, r], :] = a[[r, k], :]
            uinv[:, [k, r]] = uinv[:, [r, k]]
        if c != k:
            a[:, [k, c]] = a[:, [c, k]]
            q[:, [k, c]] = q[:, [c, k]]
        piv_unit_inv = pow(int(a[k, k]) // (p ** e), -1, modN)
        # normalize the pivot row so the diagonal entry is exactly p^e
        a[k, :] = (a[k, :] * piv_unit_inv) % modN
        uinv[:, k] = (uinv[:, k] * pow(piv_unit_inv, -1, modN)) % modN
        for i in range(k + 1, n):
            x = int(a[i, k])
            if x:
                m = x // (p ** e)
                a[i, :] = (a[i, :] - m * a[k, :]) % modN
                uinv[:, k] = (uinv[:, k] + m * uinv[:, i]) % modN
        for j in range(k + 1, n):
            x = int(a[k, j])
            if x:
                m = x // (p ** e)
                a[:, j] = (a[:, j] - m * a[:, k]) % modN
                q[:, j] = (q[:, j] - m * q[:, k]) % modN
        exps.append(e)
    return exps, uinv % modN, q % modN


def elementary_divisors(mat, p, N):
    """Smith-normal-form exponent multiset over Z/p^N (sorted ascending)."""
    return smith_exponents(mat, p, N)


def filtration_dims(lattice, lam, w, N):
    """d_i = dim of filtration step i of the reduction of M(lambda), read off
    the elementary divisors of the intertwiner to M(w lambda)."""
    t = lattice.intertwiner(lam, w, N)
    exps = smith_exponents(t, lattice.ctx.p, N)
    top = max(exps)
    return [sum(1 for e in exps if e >= i) for i in range(top + 1)]


def normalized_intertwiner(lattice, lam, w, i, N):
    """Matrix of p^{-i} (T_w restricted to the i-th filtration sublattice),
    over Z/p^{N-i}.

    Columns follow the Smith basis of the sublattice ordered with exponents
    descending, so the leading d_i columns span the mod-p filtration step.
    Returns (matrix, exponents_desc).
    """
    if i > w.length:
        raise ValueError("i exceeds l(w)")
    ctx = lattice.ctx
    p = ctx.p
    t = lattice.intertwiner(lam, w, N)
    exps, u, _q = smith_with_transforms(t, p, N)
    order = sorted(range(len(exps)), key=lambda j: -exps[j])
    mod_out = p ** (N - i)
    cols = []
    for j in order:
        scale = p ** max(exps[j] - i, 0)
        cols.append((u[:, j] * scale) % mod_out)
    mat = np.stack(cols, axis=1)
    return mat, [exps[j] for j in order]
