"""Symbolic powers of prime ideals in polynomial rings.

The n-th symbolic power is computed as the saturation of the ordinary
power at a separating element f (an element vanishing on the singular
locus of the variety but not on the variety itself); the result is then
certified a posteriori: it must contain the ordinary power, be contained
in the prime, have radical equal to the prime, and be unchanged by
quotienting with elements outside the prime.  Certification failure is
reported, never silently patched.
"""

from __future__ import annotations

from itertools import combinations

from .errors import CrossCheckError, InputError
from .groebner import (
    Ideal,
    codimension,
    ideal_equal,
    ideal_power,
    ideal_quotient,
    membership,
    radical_membership,
    saturation,
)
from .resolutions import determinant


class SymbolicPowerResult:
    """Computed symbolic power with its certification transcript."""

    __slots__ = ("prime", "n", "ideal", "separating", "certificates")

    def __init__(self, prime, n, ideal, separating, certificates):
        self.prime = prime
        self.n = n
        self.ideal = ideal
        self.separating = separating
        self.certificates = certificates

    def __repr__(self):
        return "SymbolicPowerResult(n=%d, %d generators)" % (
            self.n, len(self.ideal.groebner()))


def jacobian_matrix(gens, ring):
    return [[g.derivative(i) for i in range(ring.nvars)] for g in gens]


def separating_candidates(prime, caps=None):
    """Size-codim minors of the Jacobian of the generators, in lexicographic
    row/column order.  Away from such a minor the variety is smooth, which
    makes the ordinary power primary there."""
    ring = prime.ring
    gens = list(prime.gens)
    c = codimension(prime, caps)
    if c <= 0:
        raise InputError("prime must be a proper nonzero ideal")
    jac = jacobian_matrix(gens, ring)
    if c > len(gens) or c > ring.nvars:
        return []
    out = []
    for rset in combinations(range(len(gens)), c):
        for cset in combinations(range(ring.nvars), c):
            sub = [[jac[i][j] for j in cset] for i in rset]
            d = determinant(sub, ring)
            if not d.is_zero():
                out.append(d)
    return out


def choose_separating(prime, caps=None):
    for cand in separating_candidates(prime, caps):
        if not membership(cand, prime, caps):
            return cand
    raise InputError(
        "no separating element found among Jacobian minors; supply one")


def symbolic_power(prime, n, f=None, caps=None, certify=True):
    """The n-th symbolic power of a prime-certified ideal.

    `f` is the separating element; `None` selects the first Jacobian minor
    of size codim(prime) outside the prime.  Raises InputError
    ("separating element insufficient") when post-certification fails.
    """
    ring = prime.ring
    if n < 1:
        raise InputError("symbolic power exponent must be >= 1")
    if prime.is_unit():
        raise InputError("prime must be proper")
    if f is None:
        f = choose_separating(prime, caps)
    elif membership(f, prime, caps):
        raise InputError("separating element lies in the prime")
    pn = ideal_power(prime, n)
    result = saturation(pn, f, caps)
    certificates = {"separating": str(f), "saturation_stable": True}
    if certify:
        for g in pn.gens:
            if not membership(g, result, caps):
                raise CrossCheckError("saturation lost the ordinary power")
        certificates["contains_ordinary_power"] = True
        for g in result.gens:
            if not membership(g, prime, caps):
                raise InputError(
                    "separating element insufficient: result leaves the prime")
        certificates["inside_prime"] = True
        for g in prime.gens:
            if not radical_membership(g, result, caps):
                raise InputError(
                    "separating element insufficient: radical too small")
        certificates["radical_is_prime"] = True
        probes = [f]
        for i in range(ring.nvars):
            v = ring.var(i)
            if not membership(v, prime, caps):
                probes.append(v)
        for g in probes:
            if not ideal_equal(ideal_quotient(result, Ideal(ring, [g]), caps),
                               result, caps):
                raise InputError(
                    "separating element insufficient: not primary against %s" % g)
        certificates["primary_probe"] = [str(g) for g in probes]
    return SymbolicPowerResult(prime, n, result, f, certificates)


class ContainmentReport:
    __slots__ = ("prime", "n", "d", "holds", "per_generator", "symbolic")

    def __init__(self, prime, n, d, holds, per_generator, symbolic):
        self.prime = prime
        self.n = n
        self.d = d
        self.holds = holds
        self.per_generator = per_generator
        self.symbolic = symbolic

    def __repr__(self):
        return "ContainmentReport(d=%d, n=%d, holds=%s)" % (
            self.d, self.n, self.holds)


def containment_check(prime, n, f=None, caps=None):
    """Check p^(dn) inside p^n for d = ambient dimension.

    The containment is a theorem for regular ambient rings, so a failure is
    a contradiction trap (CrossCheckError), not a reportable verdict.
    """
    ring = prime.ring
    d = ring.nvars
    sym = symbolic_power(prime, d * n, f, caps)
    target = ideal_power(prime, n)
    per_gen = []
    holds = True
    for g in sym.ideal.groebner(caps):
        ok = membership(g, target, caps)
        per_gen.append((str(g), ok))
        if not ok:
            holds = False
    if not holds:
        raise CrossCheckError(
            "symbolic-power containment failed on a regular ring; this "
            "contradicts a theorem and indicates an engine bug")
    return ContainmentReport(prime, n, d, holds, per_gen, sym)
