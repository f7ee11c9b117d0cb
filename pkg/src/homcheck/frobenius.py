"""Characteristic-p toolkit.

Frobenius bracket powers of ideals, the Fedder-style F-purity test at the
origin, the twisted splitting criterion (multiply by an element before
taking p-th roots), presentations of the p^e-th root ring as a module over
itself, and the regularity check via freeness of that module.

All splitting notions are tested locally at the irrelevant maximal ideal
m = (x_1..x_d); coefficients live in the prime field F_p, which is perfect,
so p-th roots of constants are trivial.
"""

from __future__ import annotations

from itertools import product

from .errors import InputError
from .groebner import Ideal, dimension, ideal_quotient, membership
from .modules import FPModule, ModuleMap, minimalize_presentation
from .poly import mono_scale


class FrobeniusContext:
    """Ambient data for char-p checks: the prime, the polynomial ring over
    F_p, the quotient ideal defining S, and the iterate bound."""

    __slots__ = ("p", "ring", "quotient", "e_max")

    def __init__(self, ring, quotient=(), e_max=3):
        if ring.char == 0:
            raise InputError("Frobenius toolkit needs characteristic p > 0")
        self.p = ring.char
        self.ring = ring
        self.quotient = tuple(quotient)
        for q in self.quotient:
            if q.ring != ring:
                raise InputError("quotient generator outside the ambient ring")
        self.e_max = e_max

    def __repr__(self):
        return "FrobeniusContext(p=%d, %r)" % (self.p, self.ring)


def frobenius_power(ideal, e):
    """The bracket power I^[p^e], generated by the p^e-th powers of the
    generators.  Over the prime field this is a termwise exponent scaling,
    because the Frobenius is additive and fixes constants."""
    ring = ideal.ring
    if ring.char == 0:
        raise InputError("bracket powers need characteristic p > 0")
    if e < 1:
        raise InputError("bracket exponent must be >= 1")
    q = ring.char ** e
    gens = []
    for g in ideal.gens:
        gens.append(ring.from_dict({mono_scale(m, q): c for m, c in g.terms}))
    return Ideal(ring, gens)


def _witness_below(poly, bound):
    """A monomial of the polynomial with every exponent < bound, or None.
    Existence is exactly non-membership in (x_1^bound, ..., x_d^bound)."""
    for e, _ in poly.terms:
        if all(k < bound for k in e):
            return e
    return None


class FPurityReport:
    __slots__ = ("f_pure", "witness", "p")

    def __init__(self, f_pure, witness, p):
        self.f_pure = f_pure
        self.witness = witness
        self.p = p

    def __repr__(self):
        return "FPurityReport(f_pure=%s)" % self.f_pure


def _bracket_colon(ideal, e, caps=None):
    """(I^[p^e] : I); for the zero ideal this is the whole ring."""
    ring = ideal.ring
    if not ideal.gens:
        return Ideal(ring, [ring.one()])
    return ideal_quotient(frobenius_power(ideal, e), ideal, caps)


def fedder_f_pure(ideal, caps=None):
    """F-purity of R/I at the origin by the colon criterion: the quotient
    (I^[p] : I) must not be contained in (x_1^p, ..., x_d^p).  The witness
    is a colon-generator monomial with all exponents below p."""
    ring = ideal.ring
    p = ring.char
    if p == 0:
        raise InputError("F-purity needs characteristic p > 0")
    if ideal.is_unit():
        raise InputError("quotient ideal must be proper")
    colon = _bracket_colon(ideal, 1, caps)
    for g in colon.groebner(caps):
        w = _witness_below(g, p)
        if w is not None:
            return FPurityReport(True, w, p)
    return FPurityReport(False, None, p)


class TwistedSplitReport:
    __slots__ = ("splits", "e", "witness", "searched", "p")

    def __init__(self, splits, e, witness, searched, p):
        self.splits = splits
        self.e = e
        self.witness = witness
        self.searched = searched
        self.p = p

    def __repr__(self):
        if self.searched:
            return "TwistedSplitReport(first_e=%s)" % (self.e,)
        return "TwistedSplitReport(e=%d, splits=%s)" % (self.e, self.splits)


def twisted_split_check(ideal, s, e=None, e_max=3, caps=None):
    """Does multiplication by s^(1/p^e) composed with the root embedding
    split at the origin?  Colon test: s * (I^[p^e] : I) not contained in
    (x_1^{p^e}, ..).  With e=None, searches the smallest splitting e up to
    e_max and reports 'none' as e=None with searched=True."""
    ring = ideal.ring
    p = ring.char
    if p == 0:
        raise InputError("twisted splitting needs characteristic p > 0")
    if membership(s, ideal, caps):
        raise InputError("twist element lies in the quotient ideal")
    if e is not None:
        q = p ** e
        colon = _bracket_colon(ideal, e, caps)
        for g in colon.groebner(caps):
            w = _witness_below(s * g, q)
            if w is not None:
                return TwistedSplitReport(True, e, w, False, p)
        return TwistedSplitReport(False, e, None, False, p)
    for cand in range(1, e_max + 1):
        rep = twisted_split_check(ideal, s, cand, e_max, caps)
        if rep.splits:
            return TwistedSplitReport(True, cand, rep.witness, True, p)
    return TwistedSplitReport(False, None, None, True, p)


# ---------------------------------------------------------------------------
# Frobenius pushforward and the regularity check
# ---------------------------------------------------------------------------

class PushforwardModule:
    """S^(1/p^e) as an S-module: one generator per root monomial x^(a/q),
    relations from the quotient generators re-expanded in root coordinates."""

    __slots__ = ("module", "basis", "e", "q")

    def __init__(self, module, basis, e, q):
        self.module = module
        self.basis = basis
        self.e = e
        self.q = q

    def __repr__(self):
        return "PushforwardModule(e=%d, %d generators)" % (
            self.e, len(self.basis))


def frobenius_pushforward(ctx, e, caps=None):
    """Present S^(1/q), q = p^e, over S = R/I.

    Generators are indexed by exponent vectors 0 <= a < q; each quotient
    generator g and each root monomial x^(b/q) yields a relation by sorting
    the exponents of g^(1/q) * x^(b/q) into residue classes mod q."""
    if e < 1:
        raise InputError("pushforward iterate must be >= 1")
    ring = ctx.ring
    p = ctx.p
    q = p ** e
    d = ring.nvars
    basis = sorted(product(range(q), repeat=d))
    index = {b: i for i, b in enumerate(basis)}
    qgens = tuple(groebner_gens(ctx, caps))
    cols = []
    for g in qgens:
        for b in basis:
            vec = {}
            for m, c in g.terms:
                total = tuple(mi + bi for mi, bi in zip(m, b))
                alpha = tuple(t // q for t in total)
                beta = tuple(t % q for t in total)
                key = (index[beta], alpha)
                if key in vec:
                    nc = ring.field.add(vec[key], c)
                    if nc:
                        vec[key] = nc
                    else:
                        del vec[key]
                else:
                    vec[key] = c
            if vec:
                cols.append(vec)
    columns = []
    from .vecgb import vec_to_polys
    for v in cols:
        columns.append(vec_to_polys(v, len(basis), ring))
    pres = ModuleMap.from_columns(ring, ctx.quotient, len(basis), columns)
    return PushforwardModule(FPModule(pres.reduced(caps)), tuple(basis), e, q)


def groebner_gens(ctx, caps=None):
    """Reduced-basis generators of the quotient ideal (canonical input for
    pushforward presentations); empty for a polynomial ring."""
    if not ctx.quotient:
        return []
    return list(Ideal(ctx.ring, list(ctx.quotient)).groebner(caps))


class KunzReport:
    __slots__ = ("regular", "rank", "generators", "basis", "obstruction")

    def __init__(self, regular, rank, generators, basis, obstruction):
        self.regular = regular
        self.rank = rank
        self.generators = generators
        self.basis = basis
        self.obstruction = obstruction

    def __repr__(self):
        return "KunzReport(regular=%s, gens=%d)" % (self.regular,
                                                    self.generators)


def kunz_check(ctx, caps=None):
    """Regularity at the origin via Frobenius: S is regular iff S^(1/p) is
    a free S-module, decided by a zero minimal presentation.  Reports the
    free basis, or the first nonzero minimal relation as the obstruction."""
    push = frobenius_pushforward(ctx, 1, caps)
    pres_min, kept, _ = minimalize_presentation(push.module.presentation, caps)
    regular = pres_min.cols == 0
    basis = tuple(push.basis[i] for i in kept)
    obstruction = None
    if not regular:
        obstruction = pres_min.column(0)
    if ctx.quotient:
        dim = dimension(Ideal(ctx.ring, list(ctx.quotient)), caps)
    else:
        dim = ctx.ring.nvars
    rank = ctx.p ** dim if dim >= 0 else 0
    return KunzReport(regular, rank, pres_min.rows, basis, obstruction)
