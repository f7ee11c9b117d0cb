"""Buchberger engine for submodules of free modules R^k.

One engine serves both layers above it: ideals are the rank-1 case, and
syzygies, kernels, module membership and colon ideals all reduce to Groebner
bases of tagged vectors in higher rank.  A vector is a dict mapping
(position, exponent tuple) to a nonzero coefficient.

Pair handling follows the Gebauer-Moeller update (Becker & Weispfenning,
"Groebner Bases", p. 230) with the normal selection strategy (smallest lcm
in the module order).  The product criterion is only applied in rank 1,
where it is valid; for modules only the lcm-based chain criteria are used.
"""

from __future__ import annotations

import heapq
from itertools import count

from .errors import CrossCheckError, ResourceCapError
from .poly import mono_div, mono_divides, mono_lcm, mono_mul


class GBCaps:
    """Resource caps; exceeding one aborts with ResourceCapError so callers
    never report on truncated computations."""

    __slots__ = ("max_basis", "max_degree")

    def __init__(self, max_basis=4000, max_degree=3000):
        self.max_basis = max_basis
        self.max_degree = max_degree


DEFAULT_CAPS = GBCaps()


class PosOverTerm:
    """Position-over-term order: lower positions dominate, ties broken by
    the ring order.  Used for kernel/elimination computations where the
    leading block must outrank the tag block."""

    def __init__(self, ring_order, rank):
        self.ring_order = ring_order
        self.rank = rank
        self.tag = "pot(%s)" % ring_order.tag

    def key(self, term):
        pos, exp = term
        return (self.rank - pos,) + tuple(self.ring_order.key(exp))

    def nkey(self, term):
        return tuple(-v for v in self.key(term))


class TermOverPos:
    """Term-over-position order: the ring order dominates, position breaks
    ties.  With a block-elimination ring order this gives module
    elimination of the block variables."""

    def __init__(self, ring_order, rank):
        self.ring_order = ring_order
        self.rank = rank
        self.tag = "top(%s)" % ring_order.tag

    def key(self, term):
        pos, exp = term
        return tuple(self.ring_order.key(exp)) + (self.rank - pos,)

    def nkey(self, term):
        return tuple(-v for v in self.key(term))


# ---------------------------------------------------------------------------
# vector helpers
# ---------------------------------------------------------------------------

def vec_from_polys(polys):
    """Build a vector dict from a sequence of Polynomials (one per position)."""
    v = {}
    for pos, p in enumerate(polys):
        for e, c in p.terms:
            v[(pos, e)] = c
    return v

def vec_to_polys(v, rank, ring):
    buckets = [dict() for _ in range(rank)]
    for (pos, e), c in v.items():
        buckets[pos][e] = c
    return tuple(ring.from_dict(b) for b in buckets)

def vec_lt(v, morder):
    return max(v, key=morder.key)

def vec_scale(v, coeff, field):
    return {t: field.mul(c, coeff) for t, c in v.items()}

def vec_monic(v, morder, field):
    lt = vec_lt(v, morder)
    lc = v[lt]
    if lc == field.one:
        return v
    inv = field.inv(lc)
    return vec_scale(v, inv, field)


def make_reducers(vecs, morder):
    """Bucket (lt_exp, lt_coeff, tail, lt_degree, handle) entries by leading
    position, preserving list order."""
    by_pos = {}
    for i, v in enumerate(vecs):
        lt = vec_lt(v, morder)
        tail = [(t, c) for t, c in v.items() if t != lt]
        by_pos.setdefault(lt[0], []).append((lt[1], v[lt], tail, sum(lt[1]), i))
    return by_pos


def vec_reduce(v, reducers_by_pos, morder, field, with_expr=False, alive=None):
    """Fully reduce the vector v against reducers.

    Reduction always uses the first live reducer in list order whose
    leading term divides the current maximal unprocessed term, so results
    are deterministic.  Returns the remainder dict, or with `with_expr` a
    pair (remainder, {handle: quotient_dict}) recording the trace.
    """
    work = dict(v)
    heap = [(morder.nkey(t), t) for t in work]
    heapq.heapify(heap)
    rem = {}
    expr = {} if with_expr else None
    nkey = morder.nkey
    while heap:
        _, t = heapq.heappop(heap)
        c = work.pop(t, None)
        if not c:
            continue
        pos, e = t
        edeg = sum(e)
        hit = None
        for r in reducers_by_pos.get(pos, ()):
            if r[3] <= edeg and mono_divides(r[0], e):
                if alive is not None and not alive[r[4]]:
                    continue
                hit = r
                break
        if hit is None:
            rem[t] = c
            continue
        glm, glc, gtail, _, handle = hit
        shift = mono_div(e, glm)
        factor = field.div(c, glc)
        if with_expr:
            q = expr.setdefault(handle, {})
            q[shift] = field.add(q[shift], factor) if shift in q else factor
        for te, tc in gtail:
            nt = (te[0], mono_mul(te[1], shift))
            delta = field.mul(factor, tc)
            prev = work.get(nt)
            if prev is None:
                nc = field.neg(delta)
                if nc:
                    work[nt] = nc
                    heapq.heappush(heap, (nkey(nt), nt))
            else:
                nc = field.sub(prev, delta)
                if nc:
                    work[nt] = nc
                else:
                    del work[nt]
    if with_expr:
        return rem, expr
    return rem


# ---------------------------------------------------------------------------
# Buchberger with Gebauer-Moeller update
# ---------------------------------------------------------------------------

def module_buchberger(vecs, morder, ring, caps=None, product_criterion=False):
    """Return the canonical interreduced Groebner basis of the module
    generated by `vecs` (vector dicts), monic and sorted descending by
    leading term."""
    caps = caps or DEFAULT_CAPS
    field = ring.field
    basis = []       # list of vector dicts, monic
    lts = []         # cached leading terms (pos, exp)
    alive = []       # redundancy flags; dead entries are skipped as reducers
    by_pos = {}      # incremental reducer buckets
    pairs = {}       # (i, j) -> lcm exponents, with i < j, same position
    heap = []
    tick = count()

    def add(v):
        """Gebauer-Moeller UPDATE of the pair set with the new element v."""
        t = len(basis)
        lt = vec_lt(v, morder)
        if sum(lt[1]) > caps.max_degree:
            raise ResourceCapError(
                "basis element degree %d exceeds cap %d"
                % (sum(lt[1]), caps.max_degree))
        if t + 1 > caps.max_basis:
            raise ResourceCapError("basis size exceeds cap %d" % caps.max_basis)
        basis.append(v)
        lts.append(lt)
        alive.append(True)
        tail = [(tm, c) for tm, c in v.items() if tm != lt]
        by_pos.setdefault(lt[0], []).append((lt[1], v[lt], tail, sum(lt[1]), t))
        # candidate new pairs, pruned by the lcm (chain) criteria
        cand = []
        for i in range(t):
            if lts[i][0] == lt[0]:
                cand.append((i, mono_lcm(lts[i][1], lt[1])))
        kept = []
        for idx, (i, lcm) in enumerate(cand):
            drop = False
            for jdx, (j, lcm2) in enumerate(cand):
                if jdx == idx:
                    continue
                if mono_divides(lcm2, lcm) and (lcm2 != lcm or jdx < idx):
                    drop = True
                    break
            if not drop:
                kept.append((i, lcm))
        # prune queued pairs made redundant by t
        for (i, j), lcm in list(pairs.items()):
            if (lts[i][0] == lt[0] and mono_divides(lt[1], lcm)
                    and mono_lcm(lts[i][1], lt[1]) != lcm
                    and mono_lcm(lts[j][1], lt[1]) != lcm):
                del pairs[(i, j)]
        for i, lcm in kept:
            if product_criterion and mono_mul(lts[i][1], lt[1]) == lcm:
                continue
            pairs[(i, t)] = lcm
            heapq.heappush(heap, (morder.key((lt[0], lcm)), next(tick), i, t))
        # superseded leading terms stop acting as reducers
        for i in range(t):
            if alive[i] and lts[i][0] == lt[0] and lts[i][1] != lt[1] \
                    and mono_divides(lt[1], lts[i][1]):
                alive[i] = False

    for v in vecs:
        if v:
            red = vec_reduce(v, by_pos, morder, field, alive=alive)
            if red:
                add(vec_monic(red, morder, field))

    while heap:
        _, _, i, j = heapq.heappop(heap)
        if pairs.pop((i, j), None) is None:
            continue
        (pos, ei), (_, ej) = lts[i], lts[j]
        lcm = mono_lcm(ei, ej)
        si = mono_div(lcm, ei)
        sj = mono_div(lcm, ej)
        s = {}
        for (p, e), c in basis[i].items():
            s[(p, mono_mul(e, si))] = c
        for (p, e), c in basis[j].items():
            t = (p, mono_mul(e, sj))
            prev = s.get(t)
            if prev is None:
                s[t] = field.neg(c)
            else:
                nc = field.sub(prev, c)
                if nc:
                    s[t] = nc
                else:
                    del s[t]
        if not s:
            continue
        red = vec_reduce(s, by_pos, morder, field, alive=alive)
        if red:
            add(vec_monic(red, morder, field))

    return interreduce([v for v, a in zip(basis, alive) if a], morder, ring)


def interreduce(vecs, morder, ring):
    """Canonical reduced basis: minimal leading terms, fully tail-reduced,
    monic, sorted descending by leading term."""
    field = ring.field
    vecs = [v for v in vecs if v]
    lts = [vec_lt(v, morder) for v in vecs]
    keep = []
    for i, lt in enumerate(lts):
        redundant = False
        for j, lt2 in enumerate(lts):
            if i == j or lt2[0] != lt[0]:
                continue
            if mono_divides(lt2[1], lt[1]) and (lt2[1] != lt[1] or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(i)
    kept = [vecs[i] for i in keep]
    out = []
    for idx in range(len(kept)):
        others = make_reducers(
            [kept[j] for j in range(len(kept)) if j != idx], morder)
        red = vec_reduce(kept[idx], others, morder, field)
        if red:
            out.append(vec_monic(red, morder, field))
    out.sort(key=lambda v: morder.key(vec_lt(v, morder)), reverse=True)
    return out


# ---------------------------------------------------------------------------
# tagged bases and syzygies (two-phase extended Buchberger)
# ---------------------------------------------------------------------------

def _tag_combination(base_tag, expr, tags, field):
    """base_tag - sum over expr of quotient * tags[handle], as a vector dict
    keyed (input_index, exponents)."""
    out = dict(base_tag)
    for handle, quot in expr.items():
        tg = tags[handle]
        for shift, coeff in quot.items():
            for (k, e), c in tg.items():
                t = (k, mono_mul(e, shift))
                delta = field.mul(coeff, c)
                prev = out.get(t)
                if prev is None:
                    out[t] = field.neg(delta)
                else:
                    nc = field.sub(prev, delta)
                    if nc:
                        out[t] = nc
                    else:
                        del out[t]
    return out


def tagged_gb(vecs, target_rank, ring, caps=None, product_criterion=False):
    """Groebner basis of the span of `vecs` with expression tags.

    Returns (basis, tags): basis is a list of monic vector dicts in
    R^target_rank whose leading terms are mutually minimal; tags[k] is a
    vector dict over the input indices with basis[k] = sum tag * input.
    Tags ride along through every reduction; S-pairs are formed on the
    target block only, which is what makes this cheaper than a Groebner
    basis of the graph module.
    """
    caps = caps or DEFAULT_CAPS
    field = ring.field
    morder = TermOverPos(ring.order, target_rank)
    basis, tags, lts, alive = [], [], [], []
    by_pos = {}
    pairs = {}
    heap = []
    tick = count()

    def add(v, tag):
        t = len(basis)
        lt = vec_lt(v, morder)
        if sum(lt[1]) > caps.max_degree:
            raise ResourceCapError(
                "basis element degree %d exceeds cap %d"
                % (sum(lt[1]), caps.max_degree))
        if t + 1 > caps.max_basis:
            raise ResourceCapError("basis size exceeds cap %d" % caps.max_basis)
        lc = v[lt]
        if lc != field.one:
            inv = field.inv(lc)
            v = vec_scale(v, inv, field)
            tag = vec_scale(tag, inv, field)
        basis.append(v)
        tags.append(tag)
        lts.append(lt)
        alive.append(True)
        tail = [(tm, c) for tm, c in v.items() if tm != lt]
        by_pos.setdefault(lt[0], []).append((lt[1], v[lt], tail, sum(lt[1]), t))
        cand = []
        for i in range(t):
            if lts[i][0] == lt[0]:
                cand.append((i, mono_lcm(lts[i][1], lt[1])))
        kept = []
        for idx, (i, lcm) in enumerate(cand):
            drop = False
            for jdx, (j, lcm2) in enumerate(cand):
                if jdx == idx:
                    continue
                if mono_divides(lcm2, lcm) and (lcm2 != lcm or jdx < idx):
                    drop = True
                    break
            if not drop:
                kept.append((i, lcm))
        for (i, j), lcm in list(pairs.items()):
            if (lts[i][0] == lt[0] and mono_divides(lt[1], lcm)
                    and mono_lcm(lts[i][1], lt[1]) != lcm
                    and mono_lcm(lts[j][1], lt[1]) != lcm):
                del pairs[(i, j)]
        for i, lcm in kept:
            if product_criterion and mono_mul(lts[i][1], lt[1]) == lcm:
                continue
            pairs[(i, t)] = lcm
            heapq.heappush(heap, (morder.key((lt[0], lcm)), next(tick), i, t))
        for i in range(t):
            if alive[i] and lts[i][0] == lt[0] and lts[i][1] != lt[1] \
                    and mono_divides(lt[1], lts[i][1]):
                alive[i] = False

    unit = (0,) * ring.nvars
    for k, v in enumerate(vecs):
        if not v:
            continue
        rem, expr = vec_reduce(v, by_pos, morder, field, with_expr=True,
                               alive=alive)
        tag = _tag_combination({(k, unit): field.one}, expr, tags, field)
        if rem:
            add(rem, tag)

    while heap:
        _, _, i, j = heapq.heappop(heap)
        if pairs.pop((i, j), None) is None:
            continue
        (pos, ei), (_, ej) = lts[i], lts[j]
        lcm = mono_lcm(ei, ej)
        si = mono_div(lcm, ei)
        sj = mono_div(lcm, ej)
        s = {}
        for (p, e), c in basis[i].items():
            s[(p, mono_mul(e, si))] = c
        for (p, e), c in basis[j].items():
            t = (p, mono_mul(e, sj))
            prev = s.get(t)
            if prev is None:
                s[t] = field.neg(c)
            else:
                nc = field.sub(prev, c)
                if nc:
                    s[t] = nc
                else:
                    del s[t]
        stag = {}
        for (k, e), c in tags[i].items():
            stag[(k, mono_mul(e, si))] = c
        for (k, e), c in tags[j].items():
            t = (k, mono_mul(e, sj))
            prev = stag.get(t)
            if prev is None:
                stag[t] = field.neg(c)
            else:
                nc = field.sub(prev, c)
                if nc:
                    stag[t] = nc
                else:
                    del stag[t]
        if not s:
            continue
        rem, expr = vec_reduce(s, by_pos, morder, field, with_expr=True,
                               alive=alive)
        tag = _tag_combination(stag, expr, tags, field)
        if rem:
            add(rem, tag)

    out_basis, out_tags = [], []
    for v, tg, a in zip(basis, tags, alive):
        if a:
            out_basis.append(v)
            out_tags.append(tg)
    return out_basis, out_tags


def _chain_pruned_pairs(lts):
    """Same-position pair set pruned by the lcm chain criteria (the
    Gebauer-Moeller update applied to a static list): the syzygies of the
    surviving pairs still generate the full syzygy module of the basis."""
    pairs = {}
    for t in range(len(lts)):
        lt = lts[t]
        cand = []
        for i in range(t):
            if lts[i][0] == lt[0]:
                cand.append((i, mono_lcm(lts[i][1], lt[1])))
        kept = []
        for idx, (i, lcm) in enumerate(cand):
            drop = False
            for jdx, (j, lcm2) in enumerate(cand):
                if jdx == idx:
                    continue
                if mono_divides(lcm2, lcm) and (lcm2 != lcm or jdx < idx):
                    drop = True
                    break
            if not drop:
                kept.append((i, lcm))
        for (i, j), lcm in list(pairs.items()):
            if (lts[i][0] == lt[0] and mono_divides(lt[1], lcm)
                    and mono_lcm(lts[i][1], lt[1]) != lcm
                    and mono_lcm(lts[j][1], lt[1]) != lcm):
                del pairs[(i, j)]
        for i, lcm in kept:
            pairs[(i, t)] = lcm
    return sorted(pairs)


def syzygy_generators(vecs, target_rank, ring, caps=None):
    """Generators of { a in R^m : sum a_k * vecs[k] = 0 }.

    Two phases: a tagged Groebner basis G of the span, then one syzygy per
    input (its zero-reduction against G) and one per surviving
    same-position pair of G (whose S-vector must reduce to zero).
    Returned as vector dicts over the input indices.
    """
    field = ring.field
    live = [(k, v) for k, v in enumerate(vecs) if v]
    if not live:
        return []
    gvecs, gtags = tagged_gb([v for _, v in live], target_rank, ring, caps)
    # re-key tags to original input indices
    remap = {i: k for i, (k, _) in enumerate(live)}
    gtags = [{(remap[k], e): c for (k, e), c in tg.items()} for tg in gtags]
    morder = TermOverPos(ring.order, target_rank)
    reducers = make_reducers(gvecs, morder)
    unit = (0,) * ring.nvars
    syz = []
    for k, v in live:
        rem, expr = vec_reduce(v, reducers, morder, field, with_expr=True)
        if rem:
            raise CrossCheckError("input failed to reduce against its own "
                                  "Groebner basis")
        tag = _tag_combination({(k, unit): field.one}, expr, gtags, field)
        if tag:
            syz.append(tag)
    lts = [vec_lt(v, morder) for v in gvecs]
    for i, j in _chain_pruned_pairs(lts):
        (pos, ei), (_, ej) = lts[i], lts[j]
        lcm = mono_lcm(ei, ej)
        si = mono_div(lcm, ei)
        sj = mono_div(lcm, ej)
        s = {}
        for (p, e), c in gvecs[i].items():
            s[(p, mono_mul(e, si))] = c
        for (p, e), c in gvecs[j].items():
            t = (p, mono_mul(e, sj))
            prev = s.get(t)
            if prev is None:
                s[t] = field.neg(c)
            else:
                nc = field.sub(prev, c)
                if nc:
                    s[t] = nc
                else:
                    del s[t]
        base = {}
        for (k, e), c in gtags[i].items():
            base[(k, mono_mul(e, si))] = c
        for (k, e), c in gtags[j].items():
            t = (k, mono_mul(e, sj))
            prev = base.get(t)
            if prev is None:
                base[t] = field.neg(c)
            else:
                nc = field.sub(prev, c)
                if nc:
                    base[t] = nc
                else:
                    del base[t]
        if not s:
            if base:
                syz.append(base)
            continue
        rem, expr = vec_reduce(s, reducers, morder, field, with_expr=True)
        if rem:
            raise CrossCheckError("S-vector of a Groebner basis failed "
                                  "to reduce to zero")
        tag = _tag_combination(base, expr, gtags, field)
        if tag:
            syz.append(tag)
    return syz


# ---------------------------------------------------------------------------
# derived computations
# ---------------------------------------------------------------------------

def lift_kernel(tagged, untagged, target_rank, ring, caps=None):
    """Generators of { a : sum_j a_j * tagged_j lies in <untagged> }.

    Computed as syzygies of the combined column list (tagged first),
    projected onto the tagged coordinates; duplicates and zero projections
    are dropped.  Each generator is a tuple of Polynomials of length
    len(tagged).
    """
    ntags = len(tagged)
    cols = [dict(v) for v in tagged]
    offset = len(cols)
    for v in untagged:
        if v:
            cols.append(dict(v))
    syz = syzygy_generators(cols, target_rank, ring, caps)
    out = []
    seen = set()
    for tag in syz:
        proj = {(k, e): c for (k, e), c in tag.items() if k < ntags}
        if not proj:
            continue
        polys = vec_to_polys(proj, ntags, ring)
        key = tuple(p.terms for p in polys)
        if key not in seen:
            seen.add(key)
            out.append(polys)
    return out


def tagged_basis(vecs, target_rank, ring, quotient_cols=(), caps=None):
    """Groebner basis of the span of `vecs` (+ quotient columns) with
    expression tags over the `vecs` only: quotient-column coefficients are
    projected away, so expressions hold modulo them."""
    ntags = len(vecs)
    cols = [dict(v) for v in vecs]
    for v in quotient_cols:
        if v:
            cols.append(dict(v))
    gvecs, gtags = tagged_gb(cols, target_rank, ring, caps)
    gb, tags = [], []
    for v, tg in zip(gvecs, gtags):
        proj = {(k, e): c for (k, e), c in tg.items() if k < ntags}
        gb.append(v)
        tags.append(vec_to_polys(proj, ntags, ring))
    return gb, tags


def express_member(v, gb, tags, target_rank, ring):
    """If v lies in the span of the tagged basis, return coefficients on the
    ORIGINAL generators (length = tag width); otherwise None.

    The expression satisfies v = sum_k coeff_k * gen_k modulo whatever
    untagged (quotient) columns entered the tagged basis.
    """
    ntags = len(tags[0]) if tags else 0
    if not v:
        return tuple(ring.zero() for _ in range(ntags))
    field = ring.field
    morder = TermOverPos(ring.order, target_rank)
    rem, expr = vec_reduce(dict(v), make_reducers(gb, morder), morder, field,
                           with_expr=True)
    if rem:
        return None
    acc = [dict() for _ in range(ntags)]
    for handle, quot in expr.items():
        tg = tags[handle]
        for shift, coeff in quot.items():
            for k in range(ntags):
                for e, c in tg[k].terms:
                    t = mono_mul(e, shift)
                    prev = acc[k].get(t)
                    nc = field.mul(coeff, c)
                    if prev is None:
                        acc[k][t] = nc
                    else:
                        tot = field.add(prev, nc)
                        if tot:
                            acc[k][t] = tot
                        else:
                            del acc[k][t]
    return tuple(ring.from_dict(d) for d in acc)
