"""Reduced Groebner bases and the ideal-theoretic toolkit.

Membership, elimination, quotient, saturation, intersection, Krull
dimension and radical membership, all exact.  The reduced basis of an
ideal under a fixed order is canonical, so ideal equality is decided by
comparing reduced bases.
"""

from __future__ import annotations

from itertools import combinations, combinations_with_replacement

from .errors import CrossCheckError, InputError, RingMismatchError
from .poly import BlockElim, GrLex, GRevLex, Lex, Polynomial, PolyRing, normal_form, transport
from .vecgb import (
    DEFAULT_CAPS,
    GBCaps,
    PosOverTerm,
    express_member,
    lift_kernel,
    module_buchberger,
    tagged_basis,
    vec_from_polys,
)


class GroebnerBasis:
    """Canonical reduced basis: monic, mutually tail-reduced, sorted
    descending by leading term under the ring order."""

    __slots__ = ("order_tag", "polys")

    def __init__(self, order_tag, polys):
        self.order_tag = order_tag
        self.polys = tuple(polys)

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def __getitem__(self, i):
        return self.polys[i]

    def __eq__(self, other):
        return (isinstance(other, GroebnerBasis)
                and self.order_tag == other.order_tag
                and self.polys == other.polys)

    def __hash__(self):
        return hash((self.order_tag, self.polys))

    def __repr__(self):
        return "GB[%s]{%s}" % (self.order_tag,
                               "; ".join(str(p) for p in self.polys))


class Ideal:
    """Ideal in a polynomial ring: generator list plus cached reduced basis."""

    __slots__ = ("ring", "gens", "_gb")

    def __init__(self, ring, gens):
        self.ring = ring
        cleaned = []
        for g in gens:
            if g.ring != ring:
                raise RingMismatchError("generator in a different ring")
            if not g.is_zero():
                cleaned.append(g)
        self.gens = tuple(cleaned)
        self._gb = None

    def groebner(self, caps=None):
        if self._gb is None:
            self._gb = groebner_basis(self, caps)
        return self._gb

    def is_zero(self):
        return not self.groebner().polys

    def is_unit(self):
        gb = self.groebner().polys
        return len(gb) == 1 and gb[0].is_constant()

    def __repr__(self):
        return "Ideal(%s)" % ", ".join(str(g) for g in self.gens)


def _to_vec(p):
    return {(0, e): c for e, c in p.terms}

def _from_vec(v, ring):
    return ring.from_dict({e: c for (_, e), c in v.items()})


def groebner_basis(ideal, caps=None):
    """Canonical reduced Groebner basis of an Ideal (or generator list)."""
    if isinstance(ideal, Ideal):
        ring, gens = ideal.ring, ideal.gens
    else:
        gens = list(ideal)
        if not gens:
            raise InputError("cannot infer the ring of an empty generator list")
        ring = gens[0].ring
    morder = PosOverTerm(ring.order, 1)
    basis = module_buchberger([_to_vec(g) for g in gens], morder, ring,
                              caps=caps, product_criterion=True)
    return GroebnerBasis(ring.order.tag, [_from_vec(v, ring) for v in basis])


def s_polynomial(f, g):
    if f.is_zero() or g.is_zero():
        raise InputError("S-polynomial of a zero polynomial")
    from .poly import mono_div, mono_lcm
    lcm = mono_lcm(f.lm(), g.lm())
    uf = mono_div(lcm, f.lm())
    ug = mono_div(lcm, g.lm())
    field = f.ring.field
    return f.mul_term(uf, field.inv(f.lc())) - g.mul_term(ug, field.inv(g.lc()))


def membership(f, ideal, caps=None):
    """True iff f reduces to zero against the reduced basis of the ideal."""
    if f.ring != ideal.ring:
        raise RingMismatchError("polynomial and ideal in different rings")
    if f.is_zero():
        return True
    return normal_form(f, list(ideal.groebner(caps))).is_zero()


def lift_coefficients(f, gens, ring, caps=None):
    """Express f as an explicit combination of the given generators, or
    return None if f is not a member.  Exact: f == sum(c_i * g_i)."""
    vecs = [_to_vec(g) for g in gens if not g.is_zero()]
    live = [g for g in gens if not g.is_zero()]
    gb, tags = tagged_basis(vecs, 1, ring, caps=caps)
    coeffs = express_member(_to_vec(f), gb, tags, 1, ring)
    if coeffs is None:
        return None
    out = [ring.zero()] * len(gens)
    k = 0
    for i, g in enumerate(gens):
        if not g.is_zero():
            out[i] = coeffs[k]
            k += 1
    return out


# ---------------------------------------------------------------------------
# ring extension / elimination
# ---------------------------------------------------------------------------

def _fresh_name(base, taken):
    name = base
    while name in taken:
        name += "_"
    return name


def with_aux_var(ring, base="t"):
    """Extended ring with one auxiliary variable in front, under an
    elimination order for it.  Returns (extended_ring, aux_name)."""
    name = _fresh_name(base, set(ring.vars))
    ext = PolyRing(ring.char, (name,) + ring.vars, BlockElim(1))
    return ext, name


def _restrict(poly, target_ring, drop_first):
    """Drop the first `drop_first` variables (which must not occur)."""
    d = {}
    for e, c in poly.terms:
        if any(e[:drop_first]):
            raise CrossCheckError("restriction of a polynomial using dropped variables")
        d[e[drop_first:]] = c
    return target_ring.from_dict(d)


def eliminate(ideal, var_names, caps=None):
    """Eliminate the named variables: returns the contraction to the
    polynomial ring in the remaining variables (same order family)."""
    ring = ideal.ring
    gone = list(var_names)
    for v in gone:
        if v not in ring._index:
            raise InputError("cannot eliminate unknown variable %r" % v)
    keep = [v for v in ring.vars if v not in gone]
    perm_ring = PolyRing(ring.char, tuple(gone) + tuple(keep),
                         BlockElim(len(gone)))
    moved = [transport(g, perm_ring) for g in ideal.gens]
    basis = groebner_basis(Ideal(perm_ring, moved), caps)
    if isinstance(ring.order, (Lex, GrLex)):
        rest_order = ring.order
    else:
        rest_order = GRevLex()
    rest = PolyRing(ring.char, tuple(keep), rest_order)
    out = []
    for g in basis:
        if not any(e[: len(gone)] != (0,) * len(gone) for e, _ in g.terms):
            out.append(_restrict(g, rest, len(gone)))
    return Ideal(rest, out)


# ---------------------------------------------------------------------------
# quotient, saturation, intersection
# ---------------------------------------------------------------------------

def ideal_quotient(I, J, caps=None, check=True):
    """The colon ideal (I : J) = {f : f*J inside I}.

    Computed as the kernel of R -> (R/I)^k, f -> (f*g_1, ..., f*g_k); the
    result is verified post hoc by membership of every f*g in I.
    """
    if I.ring != J.ring:
        raise RingMismatchError("ideals in different rings")
    ring = I.ring
    jgens = list(J.gens)
    if not jgens:
        raise InputError("colon by the zero ideal")
    k = len(jgens)
    stacked = {}
    for j, g in enumerate(jgens):
        for e, c in g.terms:
            stacked[(j, e)] = c
    igb = list(I.groebner(caps))
    untagged = [{(j, e): c for e, c in g.terms}
                for g in igb for j in range(k)]
    tags = lift_kernel([stacked], untagged, k, ring, caps=caps)
    result = Ideal(ring, [t[0] for t in tags])
    if check:
        for f in result.gens:
            for g in jgens:
                if not membership(f * g, I, caps):
                    raise CrossCheckError("colon ideal verification failed")
    return result


def saturation(I, f, caps=None, oneshot=False):
    """The saturation (I : f^infinity).

    Default: iterate colon by (f) until two consecutive reduced bases are
    equal (that equality is the stabilization certificate).  With
    `oneshot=True` uses the auxiliary-variable construction
    (I + (1 - t*f)) contracted back, for cross-checking.
    """
    if f.is_zero():
        raise InputError("saturation by zero")
    ring = I.ring
    if oneshot:
        ext, aux = with_aux_var(ring)
        up = [transport(g, ext) for g in I.gens]
        t = ext.var(0)
        up.append(ext.one() - t * transport(f, ext))
        elim = groebner_basis(Ideal(ext, up), caps)
        out = []
        for g in elim:
            if not any(e[0] for e, _ in g.terms):
                out.append(_restrict(g, ring, 1))
        return Ideal(ring, out)
    current = Ideal(ring, I.gens)
    fid = Ideal(ring, [f])
    while True:
        nxt = ideal_quotient(current, fid, caps)
        if nxt.groebner(caps) == current.groebner(caps):
            return current
        current = nxt


def intersection(I, J, caps=None):
    """I intersect J via the one-auxiliary-variable construction
    t*I + (1-t)*J followed by elimination of t."""
    if I.ring != J.ring:
        raise RingMismatchError("ideals in different rings")
    ring = I.ring
    ext, aux = with_aux_var(ring)
    t = ext.var(0)
    one_minus_t = ext.one() - t
    up = [t * transport(g, ext) for g in I.gens]
    up += [one_minus_t * transport(g, ext) for g in J.gens]
    basis = groebner_basis(Ideal(ext, up), caps)
    out = []
    for g in basis:
        if not any(e[0] for e, _ in g.terms):
            out.append(_restrict(g, ring, 1))
    return Ideal(ring, out)


def ideal_sum(I, J):
    if I.ring != J.ring:
        raise RingMismatchError("ideals in different rings")
    return Ideal(I.ring, I.gens + J.gens)


def ideal_product(I, J):
    if I.ring != J.ring:
        raise RingMismatchError("ideals in different rings")
    return Ideal(I.ring, [f * g for f in I.gens for g in J.gens])


def ideal_power(I, n):
    if n < 0:
        raise InputError("negative ideal power")
    if n == 0:
        return Ideal(I.ring, [I.ring.one()])
    gens = [p for p in I.gens]
    out = []
    for combo in combinations_with_replacement(gens, n):
        prod = I.ring.one()
        for g in combo:
            prod = prod * g
        out.append(prod)
    return Ideal(I.ring, out)


def ideal_equal(I, J, caps=None):
    return I.groebner(caps) == J.groebner(caps)


# ---------------------------------------------------------------------------
# dimension and radical membership
# ---------------------------------------------------------------------------

def dimension(I, caps=None):
    """Krull dimension of R/I, combinatorially from the leading-term ideal:
    the largest size of a variable subset containing no leading-monomial
    support.  The empty set (1 in I) reports -1."""
    gb = I.groebner(caps).polys
    if len(gb) == 1 and gb[0].is_constant():
        return -1
    n = I.ring.nvars
    supports = [frozenset(i for i, e in enumerate(g.lm()) if e) for g in gb]
    for size in range(n, 0, -1):
        for S in combinations(range(n), size):
            sset = frozenset(S)
            if all(not sup <= sset for sup in supports):
                return size
    return 0


def codimension(I, caps=None):
    """nvars - dimension; for the unit ideal this yields nvars + 1, which
    callers treat as 'infinite'."""
    return I.ring.nvars - dimension(I, caps)


def radical_membership(f, I, caps=None):
    """True iff some power of f lies in I, by the auxiliary-variable trick:
    1 in I + (1 - t*f)."""
    if f.is_zero():
        raise InputError("radical membership of the zero polynomial")
    ring = I.ring
    ext, aux = with_aux_var(ring)
    up = [transport(g, ext) for g in I.gens]
    up.append(ext.one() - ext.var(0) * transport(f, ext))
    return Ideal(ext, up).is_unit()
