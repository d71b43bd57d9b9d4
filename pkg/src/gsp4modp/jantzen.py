"""Filtration sum formula, layer solver, and the layer table generator.

The filtration of the reduction of an induced module M(lambda) attached to a
Weyl element w has layer sum

    nu(lambda, w) = sum over alpha in R_w^+ of
        [ Rbar_{s_alpha}(lambda + m_alpha alpha)
          - 1/2 sum_{j=1}^{r_alpha - 1} ( Rbar_1(lambda - j alpha)
                - Rbar_{s_alpha}(lambda - (j - m_alpha) alpha) ) ]

with <lambda, alpha^vee> = r_alpha + m_alpha (p-1), 0 < r_alpha <= p-1.  The
half is handled by accumulating twice the sum and asserting evenness
termwise.  Twisted characters are normalized positively (a reflection twist
has degree p^4 - 1 for GSp4), which is the normalization under which layer
dimensions match elementary divisors.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import charring as ch
from . import rootdata as rd
from .charring import DepthError, VirtualCharacter
from .rootdata import vec_add, vec_sub, vec_scale


class HalfIntegerError(ArithmeticError):
    """The even-coefficient cancellation of the half in the sum formula
    failed; indicates corrupted decomposition data."""


class MultiplicityError(ValueError):
    """Layer assignment requires the multiplicity-one property."""


def split_pairing(n, p):
    """n = r + m (p-1) with 0 < r <= p-1; requires n > 0."""
    if n <= 0:
        raise ValueError("pairing %d not positive" % n)
    m, r = divmod(n, p - 1)
    if r == 0:
        r, m = p - 1, m - 1
    return r, m


def sum_formula(lam, w, p):
    """nu(lam, w) as a virtual character in F symbols (requires lam deep
    enough for the full symbolic reduction; otherwise DepthError)."""
    d = ch.DATUM
    twice = VirtualCharacter()
    for ri in d.inversion_set(w):
        alpha = d.positive_roots[ri]
        r, m = split_pairing(d.pairing(lam, ri), p)
        refl = d.reflection(ri)
        # individual terms may sit on affine walls and cancel in the total,
        # so the alcove check is deferred to the expansion stage
        twice = twice + ch.dl_reduce(
            refl, vec_add(lam, vec_scale(m, alpha)), p,
            require_listed=False).scale(2)
        for j in range(1, r):
            twice = twice - ch.dl_reduce(
                d.identity, vec_sub(lam, vec_scale(j, alpha)), p,
                require_listed=False)
            twice = twice + ch.dl_reduce(
                refl, vec_sub(lam, vec_scale(j - m, alpha)), p,
                require_listed=False)
    serre2 = ch.chi_to_serre(twice, p)
    out = VirtualCharacter()
    for sym, c in serre2.items():
        if c % 2:
            raise HalfIntegerError("odd coefficient %d at %r" % (c, sym))
        out.add_term(sym, c // 2)
    return out


def dl_degree(datum, sigma, p):
    """Degree of the positively-normalized sigma-twisted character: the
    prime-to-p part of the group order divided by the order of the twisted
    torus, which is |det(p sigma - 1)| on the cocharacter lattice."""
    if datum.group_id == "GSp4":
        torus = abs(_int_det(_restrict_gsp4(sigma, p)))
        gp = (p - 1) * (p * p - 1) * (p ** 4 - 1)
    else:
        n = datum.crank
        mat = [[p * sigma.cmat[i][j] - (1 if i == j else 0) for j in range(n)]
               for i in range(n)]
        torus = abs(_int_det(mat))
        if datum.group_id == "SL2":
            gp = (p - 1) * (p + 1)
        elif datum.group_id == "GL3":
            gp = (p - 1) * (p * p - 1) * (p ** 3 - 1)
        else:
            raise ValueError(datum.group_id)
    if gp % torus:
        raise ArithmeticError("torus order %d does not divide %d" % (torus, gp))
    return gp // torus


# cocharacter basis of GSp4 and the exact inverse of its leading 3x3 block
_GSP4_COCHAR_BASIS = ((1, 1, 1, 1), (1, 1, 0, 0), (2, 1, 1, 0))
_GSP4_BASIS_INV3 = ((-1, 1, 1), (0, 1, -1), (1, -1, 0))  # inverse of rows 0..2


def _restrict_gsp4(sigma, p):
    """Matrix of p*sigma - 1 on the cocharacter basis, exact integers."""
    cols = []
    for b in _GSP4_COCHAR_BASIS:
        img = [p * v - bv for v, bv in zip(sigma.act_cochar(b), b)]
        sol = [sum(_GSP4_BASIS_INV3[i][j] * img[j] for j in range(3))
               for i in range(3)]
        chk = [sum(_GSP4_COCHAR_BASIS[k][i] * sol[k] for k in range(3))
               for i in range(4)]
        if chk != img:
            raise ArithmeticError("image outside the cocharacter lattice")
        cols.append(sol)
    return [list(row) for row in zip(*cols)]


def _int_det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    tot = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        tot += (-1) ** j * m[0][j] * _int_det(minor)
    return tot


def dim_nu(group_id, lam, w, p):
    """Dimension of nu(lam, w) in closed form from the twisted-character
    degrees; exact for every lambda with positive pairings on R_w^+."""
    d = rd.datum(group_id)
    d1 = dl_degree(d, d.identity, p)
    tot = 0
    for ri in d.inversion_set(w):
        r, _m = split_pairing(d.pairing(lam, ri), p)
        ds = dl_degree(d, d.reflection(ri), p)
        t2 = 2 * ds - (r - 1) * (d1 - ds)
        if t2 % 2:
            raise HalfIntegerError("odd degree combination")
        tot += t2 // 2
    return tot


@dataclass
class FiltrationProfile:
    """Layer data of the filtration of M(lam) for one Weyl element."""

    lam: tuple
    w_word: tuple
    layers: dict          # i -> VirtualCharacter (F symbols, coeff 1)

    def layer_symbols(self, i):
        return sorted(w for (k, w), c in self.layers.get(i, VirtualCharacter()).items())

    def counts(self):
        return {i: len(vc) for i, vc in sorted(self.layers.items())}

    def to_json(self):
        return {
            "lambda": list(self.lam),
            "w": list(self.w_word),
            "layers": {str(i): vc.to_json() for i, vc in sorted(self.layers.items())},
        }


def graded_pieces(lam, w, p):
    """Assign each constituent of the reduction of M(lam) to its layer: the
    coefficient in nu(lam, w).  Requires the multiplicity-one regime (deep
    restricted lam); raises MultiplicityError otherwise."""
    if rd.alcove_of(lam, p) not in rd.RESTRICTED_ALCOVES:
        raise MultiplicityError("weight %r not in a restricted alcove" % (lam,))
    if rd.depth_of(lam, p) < 7:
        raise MultiplicityError("weight %r not 7-deep" % (lam,))
    full = ch.principal_series_serre(lam, p)
    if any(c != 1 for _s, c in full.items()):
        raise MultiplicityError("constituents of %r not multiplicity-free"
                                % (lam,))
    nu = sum_formula(lam, w, p)
    for sym, c in nu.items():
        if sym not in full.terms:
            raise MultiplicityError("layer sum has foreign constituent %r"
                                    % (sym,))
        if c < 0 or c > w.length:
            raise MultiplicityError("coefficient %d of %r out of range"
                                    % (c, sym))
    layers = {i: VirtualCharacter() for i in range(w.length + 1)}
    for sym, _c in full.items():
        layers[nu.coefficient(sym)].add_term(sym, 1)
    return FiltrationProfile(lam, w.word, layers)


def table_a3(p):
    """Layer profiles at the deterministic 7-deep witness of each restricted
    alcove, for the length-three element s1 s0 s1."""
    d = ch.DATUM
    w = d.from_word((1, 0, 1))
    out = {}
    for alcove in rd.RESTRICTED_ALCOVES:
        lam = rd.find_deep_witness(alcove, 7, p)
        if lam is None:
            raise DepthError("no 7-deep witness in %s for p=%d" % (alcove, p))
        out[alcove] = graded_pieces(lam, w, p)
    return out
