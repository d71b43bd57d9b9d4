"""Root data, Weyl groups (finite and extended affine), alcove geometry.

Weights are integer coordinate tuples:

* ``GSp4``: ``(a, b, c)`` with the parity constraint ``c = a + b (mod 2)``;
  the torus is ``diag(t1, t2, nu/t2, nu/t1)`` and ``(a, b, c)`` sends it to
  ``t1^a t2^b nu^((c-a-b)/2)``.
* ``SL2``: ``(a,)``.
* ``GL3`` / ``SL3``: ``(x1, x2, x3)``.
* ``GL4``: ``(x1, x2, x3, x4)``.

Weyl elements act on weight tuples through integer matrices
(``w(lam) = M_w . lam`` with ``lam`` a column).  Cocharacters of GSp4 are kept
in GL4 coordinates, i.e. quadruples ``(m1, m2, m3, m4)`` with
``m1 + m4 = m2 + m3``; the finite Weyl group permutes those coordinates
through its embedding into S4 as the permutations commuting with the longest
element.
"""

from __future__ import annotations

from dataclasses import dataclass


Weight = tuple  # integer tuple, length = datum.rank


def vec_add(x, y):
    return tuple(a + b for a, b in zip(x, y))


def vec_sub(x, y):
    return tuple(a - b for a, b in zip(x, y))


def vec_scale(k, x):
    return tuple(k * a for a in x)


def vec_dot(x, y):
    return sum(a * b for a, b in zip(x, y))


def mat_apply(m, x):
    return tuple(vec_dot(row, x) for row in m)


def mat_mul(m, n):
    cols = list(zip(*n))
    return tuple(tuple(vec_dot(row, col) for col in cols) for row in m)


def perm_matrix(perm):
    """Matrix sending e_j to e_{perm^{-1}(j)}-coordinates: (M x)_i = x_{perm[i]}."""
    n = len(perm)
    return tuple(tuple(1 if j == perm[i] else 0 for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class WeylElt:
    """Finite Weyl group element.

    Canonical form is the integer matrix acting on weight coordinates; the
    reduced word (over simple generator indices) and the matrix action on
    cocharacter coordinates are carried along.
    """

    matrix: tuple            # action on X*(T) coordinates
    word: tuple              # reduced word, e.g. (0, 1, 0)
    cmat: tuple              # action on cocharacter coordinates

    @property
    def length(self):
        return len(self.word)

    @property
    def sign(self):
        return -1 if self.length % 2 else 1

    def act(self, lam):
        return mat_apply(self.matrix, lam)

    def act_cochar(self, mu):
        return mat_apply(self.cmat, mu)

    def __repr__(self):
        return "W[%s]" % ("".join("s%d" % i for i in self.word) or "id")


class RootDatum:
    """Root datum plus enumerated Weyl group for one of the supported groups."""

    def __init__(self, group_id, rank, crank, simple_refl_mats, simple_refl_cmats,
                 simple_roots, positive_roots, coroot_vecs, cochar_pairing_vecs,
                 rho_prime):
        self.group_id = group_id
        self.rank = rank
        self.crank = crank
        self.simple_roots = tuple(simple_roots)
        self.positive_roots = tuple(positive_roots)
        # coroot_vecs[i] pairs weights against positive_roots[i]
        self.coroot_vecs = tuple(coroot_vecs)
        # cochar_pairing_vecs[i] pairs cocharacter tuples against positive_roots[i]
        self.cochar_pairing_vecs = tuple(cochar_pairing_vecs)
        self.rho_prime = tuple(rho_prime)
        self._elements = self._close(simple_refl_mats, simple_refl_cmats)
        self._by_matrix = {w.matrix: w for w in self._elements}
        self._by_word = {w.word: w for w in self._elements}
        self._inv = {}
        for w in self._elements:
            for x in self._elements:
                if mat_mul(w.matrix, x.matrix) == self.identity.matrix:
                    self._inv[w.matrix] = x
                    break

    def _close(self, gen_mats, gen_cmats):
        n, cn = self.rank, self.crank
        ident = WeylElt(
            tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)),
            (),
            tuple(tuple(1 if i == j else 0 for j in range(cn)) for i in range(cn)),
        )
        seen = {ident.matrix: ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for w in frontier:
                for i, (m, cm) in enumerate(zip(gen_mats, gen_cmats)):
                    # left multiplication: (s_i w)(lam) = s_i(w(lam))
                    mat = mat_mul(m, w.matrix)
                    if mat not in seen:
                        elt = WeylElt(mat, (i,) + w.word, mat_mul(cm, w.cmat))
                        seen[mat] = elt
                        nxt.append(elt)
            frontier = nxt
        return sorted(seen.values(), key=lambda w: (w.length, w.word))

    # -- Weyl group access -------------------------------------------------

    @property
    def weyl(self):
        """All Weyl elements, sorted by length then word."""
        return self._elements

    @property
    def identity(self):
        return self._elements[0]

    def simple(self, i):
        return self._by_word[(i,)]

    def from_word(self, word):
        """Element s_{word[0]} s_{word[1]} ... (word need not be reduced)."""
        w = self.identity
        for i in word:
            w = self.mul(w, self.simple(i))
        return w

    def mul(self, w1, w2):
        return self._by_matrix[mat_mul(w1.matrix, w2.matrix)]

    def inv(self, w):
        return self._inv[w.matrix]

    def longest(self):
        return max(self._elements, key=lambda w: w.length)

    # -- pairings and actions ----------------------------------------------

    def pairing(self, lam, root_index):
        """<lam, alpha^vee> for the root positive_roots[root_index]."""
        return vec_dot(self.coroot_vecs[root_index], lam)

    def pairings(self, lam):
        return tuple(vec_dot(cv, lam) for cv in self.coroot_vecs)

    def cochar_pairing(self, mu, root_index):
        """<mu, alpha> for a cocharacter tuple mu."""
        return vec_dot(self.cochar_pairing_vecs[root_index], mu)

    def dot(self, w, lam):
        """Dot action ``w . lam = w(lam + rho') - rho'``."""
        return vec_sub(w.act(vec_add(lam, self.rho_prime)), self.rho_prime)

    def act_on_root(self, w, root_index):
        """Image of positive_roots[root_index] under w, as a weight tuple."""
        return w.act(self.positive_roots[root_index])

    def inversion_set(self, w):
        """Indices of positive roots alpha with w(alpha) < 0 (that is, R_w^+)."""
        out = []
        for i in range(len(self.positive_roots)):
            img = self.act_on_root(w, i)
            if img not in self.positive_roots:
                if vec_scale(-1, img) not in self.positive_roots:
                    raise AssertionError("root image is not a root")
                out.append(i)
        return tuple(out)

    def reflection(self, root_index):
        """The reflection s_alpha as a WeylElt."""
        alpha = self.positive_roots[root_index]
        cv = self.coroot_vecs[root_index]
        n = self.rank
        mat = tuple(
            tuple((1 if i == j else 0) - alpha[i] * cv[j] for j in range(n))
            for i in range(n)
        )
        return self._by_matrix[mat]


def _build_gsp4():
    # s0: (a,b,c) -> (b,a,c);  s1: (a,b,c) -> (a,-b,c)
    s0 = ((0, 1, 0), (1, 0, 0), (0, 0, 1))
    s1 = ((1, 0, 0), (0, -1, 0), (0, 0, 1))
    # embedding into S4 on cocharacter quadruples: s0 = (12)(34), s1 = (23)
    c0 = perm_matrix((1, 0, 3, 2))
    c1 = perm_matrix((0, 2, 1, 3))
    a0 = (1, -1, 0)
    a1 = (0, 2, 0)
    positive = (a0, a1, vec_add(vec_scale(2, a0), a1), vec_add(a0, a1))
    # coroot functionals against (a,b,c): a0: a-b; a1: b; 2a0+a1: a; a0+a1: a+b
    coroots = ((1, -1, 0), (0, 1, 0), (1, 0, 0), (1, 1, 0))
    # cocharacter pairings in GL4 coordinates: a0 = e1-e2, a1 = e2-e3,
    # 2a0+a1 = e1-e4, a0+a1 = e1-e3
    cpair = ((1, -1, 0, 0), (0, 1, -1, 0), (1, 0, 0, -1), (1, 0, -1, 0))
    return RootDatum("GSp4", 3, 4, (s0, s1), (c0, c1), (a0, a1), positive,
                     coroots, cpair, (2, 1, 1))


def _build_sl2():
    s = ((-1,),)
    return RootDatum("SL2", 1, 1, (s,), (s,), ((2,),), ((2,),), ((1,),),
                     ((2,),), (1,))


def _build_gl3():
    s1 = ((0, 1, 0), (1, 0, 0), (0, 0, 1))
    s2 = ((1, 0, 0), (0, 0, 1), (0, 1, 0))
    positive = ((1, -1, 0), (0, 1, -1), (1, 0, -1))
    return RootDatum("GL3", 3, 3, (s1, s2), (s1, s2),
                     ((1, -1, 0), (0, 1, -1)), positive, positive, positive,
                     (1, 0, -1))


def _build_gl4():
    def swap(i):
        m = [[1 if r == c else 0 for c in range(4)] for r in range(4)]
        m[i][i] = m[i + 1][i + 1] = 0
        m[i][i + 1] = m[i + 1][i] = 1
        return tuple(tuple(r) for r in m)

    gens = tuple(swap(i) for i in range(3))
    positive = tuple(
        tuple(1 if k == i else (-1 if k == j else 0) for k in range(4))
        for i in range(4) for j in range(i + 1, 4)
    )
    simples = (positive[0], positive[3], positive[5])
    return RootDatum("GL4", 4, 4, gens, gens, simples, positive, positive,
                     positive, (3, 2, 1, 0))


_DATA = {}


def datum(group_id):
    """Root datum singleton for 'GSp4', 'SL2', 'SL3', 'GL3' or 'GL4'."""
    gid = "GL3" if group_id == "SL3" else group_id
    if gid not in _DATA:
        _DATA[gid] = {"GSp4": _build_gsp4, "SL2": _build_sl2,
                      "GL3": _build_gl3, "GL4": _build_gl4}[gid]()
    return _DATA[gid]


# ---------------------------------------------------------------------------
# GSp4-specific alcove geometry (pairing order: a0, a1, 2a0+a1, a0+a1)

ALCOVE_LABELS = ("C0", "C1", "C2", "C3", "D0", "D1", "E0", "E1", "E2", "E3")

# For each alcove, the integer k per pairing such that the pairing of
# lam + rho' lies in (k p, (k+1) p).
ALCOVE_WINDOWS = {
    "C0": (0, 0, 0, 0),
    "C1": (0, 0, 0, 1),
    "C2": (0, 0, 1, 1),
    "C3": (0, 0, 1, 2),
    "D0": (0, 1, 1, 2),
    "D1": (0, 1, 1, 3),
    "E0": (1, 0, 1, 1),
    "E1": (1, 0, 1, 2),
    "E2": (1, 0, 2, 2),
    "E3": (2, 0, 2, 2),
}

RESTRICTED_ALCOVES = ("C0", "C1", "C2", "C3")


def check_parity(lam):
    a, b, c = lam
    if (c - a - b) % 2:
        raise ValueError("invalid GSp4 weight %r: c != a+b mod 2" % (lam,))
    return lam


def alcove_of(lam, p):
    """Alcove label of a GSp4 weight, or 'NotListed'."""
    d = datum("GSp4")
    pr = d.pairings(vec_add(lam, d.rho_prime))
    for label, ks in ALCOVE_WINDOWS.items():
        if all(k * p < v < (k + 1) * p for v, k in zip(pr, ks)):
            return label
    return "NotListed"


def depth_of(lam, p):
    """Largest delta >= 0 with all pairings of lam+rho' in (delta, p-delta)
    mod p; -1 if lam lies on a wall mod p."""
    d = datum("GSp4")
    best = None
    for v in d.pairings(vec_add(lam, d.rho_prime)):
        r = v % p
        if r == 0:
            return -1
        m = min(r, p - r) - 1
        best = m if best is None else min(best, m)
    return best


def is_restricted(lam, p):
    """p-restricted: both simple pairings of lam in [0, p-1]."""
    a, b, _ = lam
    return 0 <= a - b <= p - 1 and 0 <= b <= p - 1


def find_deep_witness(alcove, delta, p):
    """First weight (lex order in (x, y), c = x + y) lying in `alcove` with
    depth >= delta; None if the search box is exhausted."""
    for x in range(4 * p):
        for y in range(x + 1):
            lam = (x, y, x + y)
            if alcove_of(lam, p) == alcove and depth_of(lam, p) >= delta:
                return lam
    return None


# ---------------------------------------------------------------------------
# Extended affine Weyl group elements t_mu w

@dataclass(frozen=True)
class AffineWeylElt:
    """Element t_mu w of the extended affine Weyl group.

    For GSp4 the translation mu is a GL4-coordinate quadruple
    (m1, m2, m3, m4) with m1 + m4 = m2 + m3.
    """

    group_id: str
    mu: tuple
    w: WeylElt

    def __post_init__(self):
        if self.group_id == "GSp4":
            m1, m2, m3, m4 = self.mu
            if m1 + m4 != m2 + m3:
                raise ValueError("not a GSp4 cocharacter: %r" % (self.mu,))

    def __repr__(self):
        return "t%r%r" % (self.mu, self.w)


def affine_mul(x, y):
    """(t_mu w)(t_nu v) = t_{mu + w(nu)} (w v)."""
    d = datum(x.group_id)
    return AffineWeylElt(x.group_id, vec_add(x.mu, x.w.act_cochar(y.mu)),
                         d.mul(x.w, y.w))


def affine_inv(x):
    d = datum(x.group_id)
    wi = d.inv(x.w)
    return AffineWeylElt(x.group_id, vec_scale(-1, wi.act_cochar(x.mu)), wi)


def affine_length(x):
    """Iwahori-Matsumoto length of t_mu w.

    l(t_mu w) = sum_{alpha>0, w^{-1} alpha>0} |<mu, alpha>|
              + sum_{alpha>0, w^{-1} alpha<0} |<mu, alpha> + 1|.

    The orientation is the one in which, with mu = (0, 0, -1, -1),
    l(t_mu) = 3 and l(t_{-mu} s1 s0 s1) = 0.
    """
    d = datum(x.group_id)
    wi = d.inv(x.w)
    inv_set = set(d.inversion_set(wi))
    total = 0
    for i in range(len(d.positive_roots)):
        v = d.cochar_pairing(x.mu, i)
        total += abs(v + 1) if i in inv_set else abs(v)
    return total
