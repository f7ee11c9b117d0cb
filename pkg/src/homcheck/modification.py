"""Degree-truncated algebra modifications.

Given a module and a parameter sequence, detect the first bad relation
x_{i+1} t_{i+1} = sum_{j<=i} x_j t_j whose witness is not already in
(x_1..x_i)M, then force it to become trivial by adjoining truncated
polynomial variables T_1..T_i: the modified module is spanned by
(T-monomials of degree <= n) x (generators of M), with the old relations
distributed over the T-monomials plus, for every T-monomial of degree
<= n-1, the expansion of mu * (t_{i+1} - sum x_j T_j) anchored at the
witness.  The true construction is a colimit; this engine truncates at a
degree bound and a step cap and reports an explicit status instead.

Of the two readings of the multiplier in the modification formula (span of
the single relation element versus the full module), this module uses the
single-element reading; see the package docs.
"""

from __future__ import annotations

from itertools import count

from .errors import CrossCheckError, InputError, RingMismatchError
from .modules import (
    FPModule,
    ModuleMap,
    module_colon,
    quotient_cols,
    submodule_reducer,
)
from .vecgb import express_member, tagged_basis, vec_from_polys


class BadRelation:
    """A verified relation x_{i+1} t_{i+1} = sum_{j<=i} x_j t_j together
    with the non-triviality certificate t_{i+1} not in (x_1..x_i)M."""

    __slots__ = ("index", "witness", "companions", "params")

    def __init__(self, index, witness, companions, params):
        self.index = index          # number of parameters already processed
        self.witness = witness      # t_{i+1}, as a vector over M's generators
        self.companions = companions  # t_1..t_i, same representation
        self.params = tuple(params)

    def __repr__(self):
        return "BadRelation(i=%d)" % self.index


def _scaled_gen_cols(module, params):
    """Columns x_j * e_k spanning (x_1..x_i)M inside the free cover."""
    ring = module.ring
    cols = []
    for f in params:
        for k in range(module.ngens):
            col = [ring.zero()] * module.ngens
            col[k] = f
            cols.append(tuple(col))
    return cols


def find_bad_relation(module, params, caps=None):
    """Scan i = 0..d-1 for the first parameter that is a zerodivisor modulo
    its predecessors; the first strict colon witness (in deterministic
    generator order) is packaged with its expressing coefficients.  Returns
    None iff every colon check passes."""
    ring = module.ring
    for f in params:
        if f.ring != ring:
            raise RingMismatchError("parameter outside the ambient ring")
    t = module.ngens
    for i in range(len(params)):
        prior = list(params[:i])
        sub_cols = _scaled_gen_cols(module, prior)
        colon = module_colon(sub_cols, params[i], module, caps)
        member = submodule_reducer(
            [vec_from_polys(c) for c in sub_cols] + module.relation_vecs(caps),
            t, ring, (), caps)
        for g in colon:
            if member(vec_from_polys(g)):
                continue
            # express x_{i+1} * g over the submodule columns (mod relations)
            companions = [tuple(ring.zero() for _ in range(t))
                          for _ in range(i)]
            if sub_cols:
                gb, tags = tagged_basis(
                    [vec_from_polys(c) for c in sub_cols], t, ring,
                    quotient_cols=module.relation_vecs(caps), caps=caps)
                target = vec_from_polys([params[i] * p for p in g])
                coeffs = express_member(target, gb, tags, t, ring)
                if coeffs is None:
                    raise CrossCheckError(
                        "colon witness lost its expressing combination")
                for col_idx, c in enumerate(coeffs):
                    j, k = divmod(col_idx, t)
                    if not c.is_zero():
                        comp = list(companions[j])
                        comp[k] = comp[k] + c
                        companions[j] = tuple(comp)
            rel = BadRelation(i, tuple(g), tuple(companions), params)
            _verify_relation(module, rel, caps)
            return rel
    return None


def _verify_relation(module, rel, caps=None):
    """Replay the identity x_{i+1} t_{i+1} - sum x_j t_j = 0 in M and the
    non-membership of the witness."""
    ring = module.ring
    t = module.ngens
    i = rel.index
    acc = [rel.params[i] * p for p in rel.witness]
    for j in range(i):
        for k in range(t):
            acc[k] = acc[k] - rel.params[j] * rel.companions[j][k]
    member = submodule_reducer(module.relation_vecs(caps), t, ring, (), caps)
    if not member(vec_from_polys(acc)):
        raise InputError("relation is stale: its identity fails to reduce")
    sub_cols = _scaled_gen_cols(module, rel.params[:i])
    member2 = submodule_reducer(
        [vec_from_polys(c) for c in sub_cols] + module.relation_vecs(caps),
        t, ring, (), caps)
    if member2(vec_from_polys(rel.witness)):
        raise InputError("relation is stale: witness became trivial")


def _t_monomials(i, bound):
    """Exponent tuples in i variables of total degree <= bound, ordered by
    degree then lexicographically (deterministic)."""
    if i == 0:
        return [()] if bound >= 0 else []

    def level(total, slots):
        if slots == 1:
            return [(total,)]
        out = []
        for k in range(total + 1):
            out.extend((k,) + rest for rest in level(total - k, slots - 1))
        return out

    mons = []
    for total in range(bound + 1):
        mons.extend(sorted(level(total, i)))
    return mons


def partial_modification(module, rel, n, caps=None):
    """The degree-n truncated modification M'.

    Generators are (T-monomial, old generator) pairs, C(n+i, i) * gens(M)
    of them, ordered T-monomial-major.  Returns (M', embed) where embed
    maps an old generator index to its image index at T-degree 0.
    """
    if n < 1:
        raise InputError("truncation degree must be >= 1")
    _verify_relation(module, rel, caps)
    ring = module.ring
    t = module.ngens
    i = rel.index
    mons = _t_monomials(i, n)
    mon_index = {m: idx for idx, m in enumerate(mons)}
    new_rank = len(mons) * t

    def slot(mon, k):
        return mon_index[mon] * t + k

    z = ring.zero()
    columns = []
    # old relations distributed over the T-monomials
    old_cols = module.presentation.columns()
    for mon in mons:
        for col in old_cols:
            newcol = [z] * new_rank
            for k in range(t):
                newcol[slot(mon, k)] = col[k]
            columns.append(tuple(newcol))
    # forcing relations: mu * (t_{i+1} - sum_j x_j T_j), anchored at the witness
    low_mons = [m for m in mons if sum(m) <= n - 1]
    for mon in low_mons:
        newcol = [z] * new_rank
        for k in range(t):
            if not rel.witness[k].is_zero():
                newcol[slot(mon, k)] = newcol[slot(mon, k)] + rel.witness[k]
        for j in range(i):
            shifted = list(mon)
            shifted[j] += 1
            shifted = tuple(shifted)
            for k in range(t):
                if not rel.witness[k].is_zero():
                    newcol[slot(shifted, k)] = (newcol[slot(shifted, k)]
                                                - rel.params[j] * rel.witness[k])
        columns.append(tuple(newcol))
    pres = ModuleMap.from_columns(ring, module.quotient, new_rank, columns)
    zero_mon = (0,) * i
    embed = {k: slot(zero_mon, k) for k in range(t)}
    return FPModule(pres), embed


class ModificationState:
    """Transcript of a truncated modification run."""

    __slots__ = ("module", "steps", "degree_bound", "history", "status")

    def __init__(self, module, steps, degree_bound, history, status):
        self.module = module
        self.steps = steps
        self.degree_bound = degree_bound
        self.history = tuple(history)
        self.status = status

    def __repr__(self):
        return "ModificationState(steps=%d, status=%s)" % (self.steps,
                                                           self.status)


def nakayama_check(module, params, caps=None):
    """True iff M/(params)M still has a nonzero minimal generator (degree-0
    Nakayama at the irrelevant maximal ideal)."""
    if module.ngens == 0:
        return False
    cols = module.presentation.columns() + _scaled_gen_cols(module, params)
    pres = ModuleMap.from_columns(module.ring, module.quotient,
                                  module.ngens, cols)
    return FPModule(pres).min_gens_count(caps) > 0


def modification_run(module, params, n, step_cap, caps=None):
    """Iterate find-and-modify until the sequence is regular at this
    truncation, the step cap is reached, or the module degenerates.

    The history records each bad relation with the image of its witness in
    the final module, so trivialization can be replayed: every recorded
    witness ends up inside (x_1..x_i) times the final module.
    """
    if n < 1 or step_cap < 0:
        raise InputError("caps must be positive")
    current = module
    history = []
    steps = 0
    while True:
        rel = find_bad_relation(current, params, caps)
        if rel is None:
            status = ("sequence-regular-at-truncation"
                      if nakayama_check(current, params, caps)
                      else "degenerated")
            break
        if steps >= step_cap:
            status = "step-cap-reached"
            break
        modified, embed = partial_modification(current, rel, n, caps)
        # push forward the previously recorded witnesses, then record this one
        for item in history:
            item["witness_image"] = _push_vector(item["witness_image"], embed,
                                                 modified.ngens,
                                                 current.ring)
        history.append({
            "index": rel.index,
            "witness": rel.witness,
            "witness_image": _push_vector(rel.witness, embed, modified.ngens,
                                          current.ring),
        })
        current = modified
        steps += 1
    return ModificationState(current, steps, n, history, status)


def _push_vector(vec, embed, new_rank, ring):
    out = [ring.zero()] * new_rank
    for k, p in enumerate(vec):
        if not p.is_zero():
            out[embed[k]] = p
    return tuple(out)


def replay_trivializations(state, params, caps=None):
    """Check that every recorded witness image lies in (x_1..x_i) times the
    final module; returns True or raises CrossCheckError."""
    module = state.module
    ring = module.ring
    t = module.ngens
    for item in state.history:
        i = item["index"]
        sub_cols = _scaled_gen_cols(module, params[:i])
        member = submodule_reducer(
            [vec_from_polys(c) for c in sub_cols] + module.relation_vecs(caps),
            t, ring, (), caps)
        if not member(vec_from_polys(item["witness_image"])):
            raise CrossCheckError(
                "recorded bad relation at i=%d is not trivialized in the "
                "final module" % i)
    return True
