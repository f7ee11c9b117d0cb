"""Theorem-level verifiers.

Direct-summand splitting of finite ring extensions (with the trace map as
an independent splitting construction), Buchsbaum-Eisenbud acyclicity with
a direct homology oracle, syzygy/Betti bound verification, depth and
Cohen-Macaulayness via Auslander-Buchsbaum, and regular-sequence testing.

Splitting verdicts over a polynomial base are guarded by a contradiction
trap: a finite extension of a regular ring always splits, so a
does-not-split verdict there aborts as an engine bug.
"""

from __future__ import annotations

from .errors import CrossCheckError, InputError, RingMismatchError
from .groebner import (
    GroebnerBasis,
    Ideal,
    codimension,
    dimension,
    eliminate,
    groebner_basis,
    ideal_equal,
    lift_coefficients,
    membership,
)
from .modules import (
    FPModule,
    ModuleMap,
    minimalize_presentation,
    module_colon,
    quotient_cols,
    quotient_gb,
    reduce_entry,
    submodule_reducer,
)
from .poly import BlockElim, Polynomial, PolyRing, normal_form, transport
from .resolutions import (
    Complex,
    complex_homology,
    fitting_ideal,
    hom_module,
    minimal_resolution,
    rank_of_map,
    resolution_ranks,
)
from .vecgb import vec_from_polys


# ---------------------------------------------------------------------------
# finite extensions
# ---------------------------------------------------------------------------

class FiniteExtension:
    """S = R[y_1..y_m]/J, module-finite over the base R (optionally a
    quotient R_0/I_0 to host counter-examples).

    The finiteness certificate demands, for every adjoined variable, a
    Groebner basis element of J whose leading term under the y-dominant
    block order is a pure power of that variable.
    """

    __slots__ = ("base_ring", "base_quotient", "ext_vars", "ext_ring",
                 "relations", "_gb")

    def __init__(self, base_ring, base_quotient, ext_vars, relations):
        self.base_ring = base_ring
        self.base_quotient = tuple(base_quotient)
        for q in self.base_quotient:
            if q.ring != base_ring:
                raise RingMismatchError("base quotient outside the base ring")
        if self.base_quotient and Ideal(base_ring,
                                        list(self.base_quotient)).is_unit():
            raise InputError("base quotient is the unit ideal")
        self.ext_vars = tuple(ext_vars)
        if not self.ext_vars:
            raise InputError("an extension must adjoin at least one variable")
        self.ext_ring = PolyRing(
            base_ring.char, self.ext_vars + base_ring.vars,
            BlockElim(len(self.ext_vars)))
        rels = []
        for r in relations:
            if r.ring != self.ext_ring:
                raise RingMismatchError("relation outside the extension ring")
            if not r.is_zero():
                rels.append(r)
        for q in self.base_quotient:
            rels.append(transport(q, self.ext_ring))
        self.relations = tuple(rels)
        self._gb = None

    @property
    def num_ext(self):
        return len(self.ext_vars)

    def relation_basis(self, caps=None):
        if self._gb is None:
            self._gb = groebner_basis(Ideal(self.ext_ring, list(self.relations)),
                                      caps)
        return self._gb

    def finiteness_certificate(self, caps=None):
        """Pure-power leading exponents per adjoined variable, or an error
        naming the first variable without one."""
        m = self.num_ext
        found = {}
        for g in self.relation_basis(caps):
            lm = g.lm()
            if any(lm[m:]):
                continue
            support = [j for j in range(m) if lm[j]]
            if len(support) == 1:
                j = support[0]
                found[j] = min(found.get(j, lm[j]), lm[j])
        for j in range(m):
            if j not in found:
                raise InputError(
                    "extension is not certified finite: no pure power of %r "
                    "leads any relation" % self.ext_vars[j])
        return found

    def __repr__(self):
        return "FiniteExtension(adjoin %s over %r)" % (
            ",".join(self.ext_vars), self.base_ring)


class ExtensionModule:
    """The extension as a base-ring module: presentation on standard
    monomial generators, with normal-form coordinates for multiplication."""

    __slots__ = ("extension", "module", "basis", "_gb")

    def __init__(self, extension, module, basis, gb):
        self.extension = extension
        self.module = module
        self.basis = basis        # tuple of y-exponent tuples; index 0 is 1_S
        self._gb = gb

    def monomial(self, beta):
        m = self.extension.num_ext
        exp = tuple(beta) + (0,) * self.extension.base_ring.nvars
        return self.extension.ext_ring.monomial(exp)

    def nf_coords(self, p):
        """Coordinates of the class of p over the standard generators, as
        base-ring polynomials."""
        ext = self.extension
        m = ext.num_ext
        nf = normal_form(p, list(self._gb))
        buckets = {beta: {} for beta in self.basis}
        for e, c in nf.terms:
            beta, alpha = e[:m], e[m:]
            if beta not in buckets:
                raise CrossCheckError("normal form left the standard basis")
            buckets[beta][alpha] = c
        return tuple(ext.base_ring.from_dict(buckets[beta])
                     for beta in self.basis)


def as_module(extension, caps=None):
    """Base-ring module presentation of the extension, with a distinguished
    generator mapping to 1."""
    ext = extension
    m = ext.num_ext
    base = ext.base_ring
    ring = ext.ext_ring
    gb = tuple(ext.relation_basis(caps))
    if len(gb) == 1 and gb[0].is_constant():
        raise InputError("extension relations generate the unit ideal")
    pure = ext.finiteness_certificate(caps)
    # faithfulness: the relations must contract exactly to the base quotient
    contracted = []
    for g in gb:
        if not any(any(e[:m]) for e, _ in g.terms):
            contracted.append(_drop_front_vars(g, m, base))
    if not ideal_equal(Ideal(base, contracted),
                       Ideal(base, list(ext.base_quotient)), caps):
        raise InputError(
            "extension is not faithful: it collapses base-ring elements")
    # standard module generators: y-monomials under the pure-y staircase
    pure_y_lms = []
    for g in gb:
        lm = g.lm()
        if not any(lm[m:]) and any(lm[:m]):
            pure_y_lms.append(lm[:m])
    box = [pure[j] for j in range(m)]
    basis = []
    for beta in _box_exponents(box):
        if not any(all(b >= l for b, l in zip(beta, lm)) for lm in pure_y_lms):
            basis.append(beta)
    basis.sort(key=lambda b: ring.order.key(b + (0,) * base.nvars))
    if basis[0] != (0,) * m:
        raise CrossCheckError("distinguished generator 1 fell out of the basis")
    # relations: kernel of (base ring)^basis -> S, two elimination steps
    from .vecgb import TermOverPos, lift_kernel, module_buchberger
    tagged = [{(0, beta + (0,) * base.nvars): ring.field.one} for beta in basis]
    untagged = [{(0, e): c for e, c in g.terms} for g in gb]
    kp = lift_kernel(tagged, untagged, 1, ring, caps=caps)
    morder = TermOverPos(ring.order, len(basis))
    vecs = [vec_from_polys(t) for t in kp]
    kp_gb = module_buchberger(vecs, morder, ring, caps=caps)
    columns = []
    for v in kp_gb:
        if any(any(e[:m]) for (_, e) in v):
            continue
        col = [dict() for _ in range(len(basis))]
        for (pos, e), c in v.items():
            col[pos][e[m:]] = c
        columns.append(tuple(base.from_dict(d) for d in col))
    pres = ModuleMap.from_columns(base, ext.base_quotient, len(basis), columns)
    module = FPModule(pres.reduced(caps))
    return ExtensionModule(ext, module, tuple(basis), gb)


def _box_exponents(box):
    out = [()]
    for b in box:
        out = [e + (k,) for e in out for k in range(b)]
    return out


def _drop_front_vars(poly, m, target_ring):
    d = {}
    for e, c in poly.terms:
        if any(e[:m]):
            raise CrossCheckError("cannot drop variables that still occur")
        d[e[m:]] = c
    return target_ring.from_dict(d)


# ---------------------------------------------------------------------------
# splitting
# ---------------------------------------------------------------------------

class SplitReport:
    """Outcome of a splitting check, with a replayable witness."""

    __slots__ = ("verdict", "witness", "basis", "evaluation_ideal", "method")

    def __init__(self, verdict, witness, basis, evaluation_ideal, method):
        self.verdict = verdict
        self.witness = witness              # values on the module generators
        self.basis = basis                  # y-exponent labels of generators
        self.evaluation_ideal = evaluation_ideal
        self.method = method

    def __repr__(self):
        return "SplitReport(%s)" % self.verdict


def _verify_witness(em, witness, caps=None):
    """Replay a splitting witness: linear over the presentation and sends
    1 to 1.  Raises CrossCheckError on failure."""
    base = em.module.ring
    qgb = quotient_gb(base, em.module.quotient, caps)
    lam_one = reduce_entry(witness[0] - base.one(), qgb)
    if not lam_one.is_zero():
        raise CrossCheckError("splitting witness does not send 1 to 1")
    pres = em.module.presentation
    for j in range(pres.cols):
        acc = base.zero()
        for i in range(pres.rows):
            acc = acc + witness[i] * pres.entries[i][j]
        if not reduce_entry(acc, qgb).is_zero():
            raise CrossCheckError("splitting witness is not well defined")


def split_check(extension, caps=None):
    """Does the base ring split off the extension as a module summand?

    Computes Hom(S, R), forms the evaluation ideal {lambda(1)}, and decides:
    'splits' when 1 lies in it, 'splits-locally-at-m' when it is not
    contained in the irrelevant maximal ideal, else 'does-not-split'.
    Over a polynomial base the last verdict contradicts the direct summand
    theorem and raises CrossCheckError.
    """
    em = as_module(extension, caps)
    base = em.module.ring
    quot = em.module.quotient
    free_rank_one = FPModule.free(base, 1, quot)
    hom = hom_module(em.module, free_rank_one, caps)
    qgb = quotient_gb(base, quot, caps)
    pairs = []
    for h in hom.generators:
        val = reduce_entry(h.entries[0][0], qgb)
        if not val.is_zero():
            pairs.append((h, val))
    eval_gens = [val for _, val in pairs]
    eval_ideal = Ideal(base, eval_gens)
    combined = list(eval_gens) + list(quot)
    verdict = "does-not-split"
    witness = None
    if pairs and membership(base.one(), Ideal(base, combined), caps):
        coeffs = lift_coefficients(base.one(), combined, base, caps)
        if coeffs is None:
            raise CrossCheckError("membership certificate lift failed")
        witness_vals = [base.zero()] * em.module.ngens
        for (h, _), c in zip(pairs, coeffs):
            if c.is_zero():
                continue
            for i in range(em.module.ngens):
                witness_vals[i] = witness_vals[i] + c * h.entries[0][i]
        witness = tuple(reduce_entry(w, qgb) for w in witness_vals)
        _verify_witness(em, witness, caps)
        verdict = "splits"
    elif any(g.constant_coeff() for g in eval_gens):
        verdict = "splits-locally-at-m"
    if verdict == "does-not-split" and not extension.base_quotient:
        raise CrossCheckError(
            "a certified-finite extension of a polynomial ring reported "
            "does-not-split; this contradicts the direct summand theorem "
            "and indicates an engine bug")
    return SplitReport(verdict, witness, em.basis, eval_ideal, "hom-evaluation")


def trace_splitting(extension, caps=None):
    """Splitting via the normalized trace, for extensions free over the
    base in characteristic zero (or degree prime to p)."""
    em = as_module(extension, caps)
    base = em.module.ring
    qgb = quotient_gb(base, em.module.quotient, caps)
    pres_min, kept, express = minimalize_presentation(em.module.presentation,
                                                      caps)
    if pres_min.cols != 0:
        raise InputError("extension is not free over the base; "
                         "the trace construction needs a free module")
    deg = len(kept)
    field = base.field
    if base.char and deg % base.char == 0:
        raise InputError(
            "trace degenerate: module degree %d vanishes in characteristic %d"
            % (deg, base.char))
    kept_basis = [em.basis[i] for i in kept]
    inv_deg = field.inv(field.from_int(deg))
    witness = []
    for l, beta_l in enumerate(kept_basis):
        trace = base.zero()
        for mpos, beta_m in enumerate(kept_basis):
            prod = em.monomial(beta_l) * em.monomial(beta_m)
            coords = em.nf_coords(prod)
            diag = base.zero()
            for orig, c in enumerate(coords):
                if c.is_zero():
                    continue
                w = express[orig].get(mpos)
                if w is not None:
                    diag = diag + c * w
            trace = trace + diag
        witness.append(reduce_entry(trace.scale(inv_deg), qgb))
    # replay: lambda(1) = 1, where 1 is expressed over the kept generators
    lam_one = base.zero()
    for pos, c in express[0].items():
        lam_one = lam_one + c * witness[pos]
    if not reduce_entry(lam_one - base.one(), qgb).is_zero():
        raise CrossCheckError("trace witness does not send 1 to 1")
    return SplitReport("splits", tuple(witness), tuple(kept_basis),
                       None, "trace/degree")


# ---------------------------------------------------------------------------
# Buchsbaum-Eisenbud acyclicity
# ---------------------------------------------------------------------------

class BEReport:
    __slots__ = ("applicable", "spots", "rank_condition", "fitting_verdict",
                 "homology_zero", "oracle_verdict")

    def __init__(self, applicable, spots, rank_condition, fitting_verdict,
                 homology_zero, oracle_verdict):
        self.applicable = applicable
        self.spots = spots
        self.rank_condition = rank_condition
        self.fitting_verdict = fitting_verdict
        self.homology_zero = homology_zero
        self.oracle_verdict = oracle_verdict

    def __repr__(self):
        return "BEReport(fitting=%s, oracle=%s)" % (
            self.fitting_verdict, self.oracle_verdict)


def be_acyclicity_check(cx, domain_certified=False, caps=None):
    """Rank/Fitting-codimension acyclicity conditions against the direct
    homology oracle.

    The determinantal verdict is only issued over polynomial ambient rings
    ('criterion-not-applicable' otherwise); the homology oracle always
    runs, and any disagreement between the two is an engine bug.
    """
    if cx.quotient and not domain_certified:
        raise InputError("Buchsbaum-Eisenbud ranks need a domain certificate "
                         "over a quotient ring")
    applicable = not cx.quotient
    s = cx.length
    ranks = [rank_of_map(cx.map(i), domain_certified, caps)
             for i in range(1, s + 1)]
    spots = []
    rank_ok = True
    codim_ok = True
    for i in range(1, s + 1):
        r_i = ranks[i - 1]
        r_next = ranks[i] if i < s else 0
        additive = (r_i + r_next == cx.rank(i))
        if not additive:
            rank_ok = False
        entry = {"i": i, "b_i": cx.rank(i), "r_i": r_i,
                 "rank_additive": additive}
        if applicable:
            if r_i == 0:
                entry["codim"] = None
                entry["codim_ok"] = True
            else:
                fit = fitting_ideal(cx.map(i), r_i, caps)
                if fit.is_unit():
                    entry["codim"] = "infinite"
                    entry["codim_ok"] = True
                else:
                    cd = codimension(fit, caps)
                    entry["codim"] = cd
                    entry["codim_ok"] = cd >= i
            if not entry["codim_ok"]:
                codim_ok = False
        spots.append(entry)
    fitting_verdict = (rank_ok and codim_ok) if applicable else None
    homology_zero = []
    for i in range(1, s + 1):
        homology_zero.append(complex_homology(cx, i, caps).is_zero(caps))
    oracle_verdict = all(homology_zero)
    if applicable and fitting_verdict != oracle_verdict:
        raise CrossCheckError(
            "Buchsbaum-Eisenbud verdict (%s) disagrees with the homology "
            "oracle (%s); this is a library bug"
            % (fitting_verdict, oracle_verdict))
    return BEReport(applicable, spots, rank_ok, fitting_verdict,
                    homology_zero, oracle_verdict)


def is_acyclic(cx, caps=None):
    return all(complex_homology(cx, i, caps).is_zero(caps)
               for i in range(1, cx.length + 1))


def tensor_complex(cx, target_ring, quotient=(), var_map=None):
    """Base change of a free complex along ring.vars -> target_ring (a
    finitely presented algebra given by its polynomial ring and quotient)."""
    maps = []
    for phi in cx.maps:
        entries = [[transport(p, target_ring, var_map) for p in row]
                   for row in phi.entries]
        maps.append(ModuleMap(target_ring, quotient, phi.rows, phi.cols,
                              entries))
    return Complex(maps, check=True)


# ---------------------------------------------------------------------------
# syzygy bounds
# ---------------------------------------------------------------------------

class SyzygyBoundReport:
    __slots__ = ("length", "betti", "syzygy_ranks", "checks", "holds")

    def __init__(self, length, betti, syzygy_ranks, checks, holds):
        self.length = length
        self.betti = betti
        self.syzygy_ranks = syzygy_ranks
        self.checks = checks
        self.holds = holds

    def __repr__(self):
        return "SyzygyBoundReport(s=%d, betti=%s, holds=%s)" % (
            self.length, list(self.betti), self.holds)


def syzygy_bound_check(module, caps=None):
    """Verify the syzygy-rank and Betti-number bounds on the minimal free
    resolution: the i-th syzygy has rank >= i for i <= s-1, b_i >= 2i+1
    for i < s-1, and b_{s-1} >= s.  These are unconditional theorems, so
    the report is expected to hold on every input."""
    if module.quotient:
        raise InputError("syzygy bounds need a polynomial ambient ring")
    res = minimal_resolution(module, caps=caps)
    s = res.length
    ranks = resolution_ranks(res, caps)
    checks = []
    holds = True
    for i in range(1, s):
        ok = ranks[i - 1] >= i
        checks.append({"kind": "syzygy-rank", "i": i, "value": ranks[i - 1],
                       "bound": i, "ok": ok, "margin": ranks[i - 1] - i})
        holds = holds and ok
    for i in range(0, max(s - 1, 0)):
        ok = res.betti[i] >= 2 * i + 1
        checks.append({"kind": "betti", "i": i, "value": res.betti[i],
                       "bound": 2 * i + 1, "ok": ok,
                       "margin": res.betti[i] - (2 * i + 1)})
        holds = holds and ok
    if s >= 1:
        ok = res.betti[s - 1] >= s
        checks.append({"kind": "betti-top", "i": s - 1,
                       "value": res.betti[s - 1], "bound": s, "ok": ok,
                       "margin": res.betti[s - 1] - s})
        holds = holds and ok
    return SyzygyBoundReport(s, res.betti, tuple(ranks), checks, holds)


# ---------------------------------------------------------------------------
# depth / Cohen-Macaulay
# ---------------------------------------------------------------------------

class CMReport:
    __slots__ = ("pd", "depth", "ambient_dim", "module_dim", "is_cm", "codim")

    def __init__(self, pd, depth, ambient_dim, module_dim, is_cm, codim):
        self.pd = pd
        self.depth = depth
        self.ambient_dim = ambient_dim
        self.module_dim = module_dim
        self.is_cm = is_cm
        self.codim = codim

    def __repr__(self):
        return "CMReport(pd=%d, depth=%d, dim=%d, CM=%s)" % (
            self.pd, self.depth, self.module_dim, self.is_cm)


def depth_and_cm_check(module, caps=None):
    """Projective dimension from the minimal resolution, depth via the
    Auslander-Buchsbaum formula, Cohen-Macaulayness by depth = dimension.
    The module dimension is read off the zeroth Fitting ideal, whose
    vanishing locus is the support."""
    if module.quotient:
        raise InputError("depth is computed over polynomial rings only")
    ring = module.ring
    d = ring.nvars
    res = minimal_resolution(module, caps=caps)
    pd = res.length
    depth = d - pd
    pres, _, _ = minimalize_presentation(module.presentation, caps)
    t = pres.rows
    if t == 0:
        raise InputError("depth of the zero module is undefined")
    if pres.cols < t:
        fit0 = Ideal(ring, [])
    else:
        fit0 = fitting_ideal(pres, t, caps)
    module_dim = dimension(fit0, caps)
    codim = None
    if module.ngens == 1:
        codim = codimension(Ideal(ring, list(module.presentation.entries[0])),
                            caps)
    return CMReport(pd, depth, d, module_dim, depth == module_dim, codim)


# ---------------------------------------------------------------------------
# regular sequences
# ---------------------------------------------------------------------------

class RegSeqReport:
    __slots__ = ("status", "failure_index", "witness", "nakayama_ok")

    def __init__(self, status, failure_index, witness, nakayama_ok):
        self.status = status
        self.failure_index = failure_index
        self.witness = witness
        self.nakayama_ok = nakayama_ok

    def __repr__(self):
        if self.status == "pass":
            return "RegSeqReport(pass, nakayama=%s)" % self.nakayama_ok
        return "RegSeqReport(fail at %d)" % self.failure_index


def regular_sequence_check(module, seq, caps=None):
    """Is the sequence regular on the module?  Tests each colon
    ((x_1..x_i)M : x_{i+1}) = (x_1..x_i)M in order and finishes with the
    Nakayama nondegeneracy check M != (x_1..x_d)M."""
    ring = module.ring
    t = module.ngens
    for f in seq:
        if f.ring != ring:
            raise RingMismatchError("sequence element outside the ambient ring")
    prior_cols = []
    for i, f in enumerate(seq):
        colon = module_colon(prior_cols, f, module, caps)
        member = submodule_reducer(
            [vec_from_polys(c) for c in prior_cols] + module.relation_vecs(caps),
            t, ring, (), caps)
        for g in colon:
            if not member(vec_from_polys(g)):
                return RegSeqReport("fail", i + 1, tuple(g), None)
        for k in range(t):
            col = [ring.zero()] * t
            col[k] = f
            prior_cols.append(tuple(col))
    quot_pres = ModuleMap.from_columns(
        ring, module.quotient, t,
        module.presentation.columns() + prior_cols)
    nak = FPModule(quot_pres).min_gens_count(caps) > 0
    return RegSeqReport("pass", None, None, nak)
