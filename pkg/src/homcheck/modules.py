"""Finitely presented modules over polynomial rings and their quotients.

A module is the cokernel of a matrix of polynomials (generators = rows,
relations = columns).  Working over a quotient ring S = R/I is handled by
carrying the quotient ideal along and appending the columns q*e_i to every
submodule computation; matrices themselves stay over R with entries reduced
to normal form against the quotient basis.
"""

from __future__ import annotations

from .errors import CrossCheckError, InputError, RingMismatchError
from .groebner import GroebnerBasis, Ideal, groebner_basis
from .poly import Polynomial, mono_mul, normal_form
from .vecgb import (
    PosOverTerm,
    TermOverPos,
    express_member,
    lift_kernel,
    make_reducers,
    module_buchberger,
    tagged_basis,
    vec_from_polys,
    vec_reduce,
    vec_to_polys,
)

_QGB_CACHE = {}


def quotient_gb(ring, quotient, caps=None):
    """Reduced basis of the ambient quotient ideal (cached)."""
    if not quotient:
        return ()
    key = (ring, tuple(quotient))
    got = _QGB_CACHE.get(key)
    if got is None:
        got = tuple(groebner_basis(Ideal(ring, list(quotient)), caps))
        _QGB_CACHE[key] = got
    return got


def reduce_entry(p, qgb):
    return normal_form(p, list(qgb)) if qgb else p


def quotient_cols(ring, quotient, rank, caps=None):
    """Vectors q*e_i over all quotient basis elements and positions."""
    cols = []
    for q in quotient_gb(ring, quotient, caps):
        for i in range(rank):
            cols.append({(i, e): c for e, c in q.terms})
    return cols


class ModuleMap:
    """Matrix of polynomials mapping R^cols -> R^rows over ring/quotient."""

    __slots__ = ("ring", "quotient", "rows", "cols", "entries")

    def __init__(self, ring, quotient, rows, cols, entries):
        self.ring = ring
        self.quotient = tuple(quotient)
        self.rows = rows
        self.cols = cols
        entries = tuple(tuple(row) for row in entries)
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise InputError("matrix shape mismatch")
        for row in entries:
            for p in row:
                if p.ring != ring:
                    raise RingMismatchError("matrix entry in a different ring")
        self.entries = entries

    @classmethod
    def zero(cls, ring, quotient, rows, cols):
        z = ring.zero()
        return cls(ring, quotient, rows, cols,
                   [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, ring, quotient, n):
        z, one = ring.zero(), ring.one()
        return cls(ring, quotient, n, n,
                   [[one if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, ring, quotient, rows, columns):
        z = ring.zero()
        entries = [[z] * len(columns) for _ in range(rows)]
        for j, col in enumerate(columns):
            for i, p in enumerate(col):
                entries[i][j] = p
        return cls(ring, quotient, rows, len(columns), entries)

    def column(self, j):
        return tuple(self.entries[i][j] for i in range(self.rows))

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def column_vecs(self):
        out = []
        for j in range(self.cols):
            v = {}
            for i in range(self.rows):
                for e, c in self.entries[i][j].terms:
                    v[(i, e)] = c
            out.append(v)
        return out

    def compose(self, other):
        """self after other: (self . other)(x) = self(other(x))."""
        if other.rows != self.cols:
            raise InputError("non-composable maps: %d vs %d" % (other.rows, self.cols))
        if self.ring != other.ring or self.quotient != other.quotient:
            raise RingMismatchError("maps over different rings")
        z = self.ring.zero()
        entries = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = z
                for k in range(self.cols):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                row.append(acc)
            entries.append(row)
        return ModuleMap(self.ring, self.quotient, self.rows, other.cols, entries)

    def reduced(self, caps=None):
        qgb = quotient_gb(self.ring, self.quotient, caps)
        if not qgb:
            return self
        entries = [[reduce_entry(p, qgb) for p in row] for row in self.entries]
        return ModuleMap(self.ring, self.quotient, self.rows, self.cols, entries)

    def is_zero(self, caps=None):
        qgb = quotient_gb(self.ring, self.quotient, caps)
        return all(reduce_entry(p, qgb).is_zero()
                   for row in self.entries for p in row)

    def kron_identity(self, d):
        """The map self (tensor) id on a rank-d module: block matrix with
        basis ordering e_i (x) n_a at index i*d + a."""
        z = self.ring.zero()
        rows, cols = self.rows * d, self.cols * d
        entries = [[z] * cols for _ in range(rows)]
        for i in range(self.rows):
            for j in range(self.cols):
                p = self.entries[i][j]
                if not p.is_zero():
                    for a in range(d):
                        entries[i * d + a][j * d + a] = p
        return ModuleMap(self.ring, self.quotient, rows, cols, entries)

    def __eq__(self, other):
        return (isinstance(other, ModuleMap) and self.ring == other.ring
                and self.quotient == other.quotient
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.ring, self.quotient, self.entries))

    def __repr__(self):
        body = "; ".join(",".join(str(p) for p in row) for row in self.entries)
        return "ModuleMap(%dx%d)[%s]" % (self.rows, self.cols, body)


class FPModule:
    """Finitely presented module: cokernel of its presentation matrix."""

    __slots__ = ("presentation",)

    def __init__(self, presentation):
        self.presentation = presentation

    @classmethod
    def free(cls, ring, rank, quotient=()):
        return cls(ModuleMap.zero(ring, quotient, rank, 0))

    @classmethod
    def cyclic(cls, ring, ideal_gens, quotient=()):
        """R/(ideal_gens) as a module over ring/quotient."""
        return cls(ModuleMap(ring, quotient, 1, len(ideal_gens),
                             [list(ideal_gens)]))

    @property
    def ring(self):
        return self.presentation.ring

    @property
    def quotient(self):
        return self.presentation.quotient

    @property
    def ngens(self):
        return self.presentation.rows

    def relation_vecs(self, caps=None):
        return (self.presentation.column_vecs()
                + quotient_cols(self.ring, self.quotient, self.ngens, caps))

    def gen_vector(self, k):
        return {(k, (0,) * self.ring.nvars): self.ring.field.one}

    def is_zero(self, caps=None):
        """Honest global zero test: every generator lies in the relations."""
        if self.ngens == 0:
            return True
        rels = self.relation_vecs(caps)
        morder = TermOverPos(self.ring.order, self.ngens)
        basis = module_buchberger(rels, morder, self.ring, caps=caps)
        red = make_reducers(basis, morder)
        for k in range(self.ngens):
            if vec_reduce(self.gen_vector(k), red, morder, self.ring.field):
                return False
        return True

    def min_gens_count(self, caps=None):
        """Number of minimal generators locally at (x_1..x_d): the number of
        generators minus the k-rank of the presentation modulo the maximal
        ideal."""
        qgb = quotient_gb(self.ring, self.quotient, caps)
        consts = []
        for row in self.presentation.entries:
            consts.append([reduce_entry(p, qgb).constant_coeff() for p in row])
        return self.ngens - field_matrix_rank(consts, self.ring.field)

    def __repr__(self):
        return "FPModule(gens=%d, rels=%d over %r%s)" % (
            self.ngens, self.presentation.cols, self.ring,
            " / quotient" if self.quotient else "")


def field_matrix_rank(rows, field):
    """Rank of a matrix of field elements by Gaussian elimination."""
    mat = [list(r) for r in rows]
    if not mat or not mat[0]:
        return 0
    nrows, ncols = len(mat), len(mat[0])
    rank = 0
    col = 0
    for col in range(ncols):
        pivot = None
        for i in range(rank, nrows):
            if mat[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = field.inv(mat[rank][col])
        mat[rank] = [field.mul(inv, v) for v in mat[rank]]
        for i in range(nrows):
            if i != rank and mat[i][col]:
                f = mat[i][col]
                mat[i] = [field.sub(a, field.mul(f, b))
                          for a, b in zip(mat[i], mat[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


# ---------------------------------------------------------------------------
# submodule computations
# ---------------------------------------------------------------------------

def submodule_membership(vec, cols, rank, ring, quotient=(), caps=None):
    """Is the vector in the span of cols (+ quotient relations)?"""
    all_cols = list(cols) + quotient_cols(ring, quotient, rank, caps)
    morder = TermOverPos(ring.order, rank)
    basis = module_buchberger(all_cols, morder, ring, caps=caps)
    red = make_reducers(basis, morder)
    return not vec_reduce(dict(vec), red, morder, ring.field)


def submodule_reducer(cols, rank, ring, quotient=(), caps=None):
    """Precomputed membership tester for one submodule (many queries)."""
    all_cols = list(cols) + quotient_cols(ring, quotient, rank, caps)
    morder = TermOverPos(ring.order, rank)
    basis = module_buchberger(all_cols, morder, ring, caps=caps)
    red = make_reducers(basis, morder)
    field = ring.field

    def member(vec):
        return not vec_reduce(dict(vec), red, morder, field)

    def reduce(vec):
        return vec_reduce(dict(vec), red, morder, field)

    member.reduce = reduce
    member.basis = basis
    return member


def syzygy_module(phi, caps=None):
    """The kernel of a map of free modules, presented by its generators:
    returns psi with Im(psi) = ker(phi) and phi . psi = 0 exactly (over the
    ambient quotient when present)."""
    ring = phi.ring
    if phi.cols == 0:
        return ModuleMap.zero(ring, phi.quotient, 0, 0)
    tagged = phi.column_vecs()
    untagged = quotient_cols(ring, phi.quotient, phi.rows, caps)
    tags = lift_kernel(tagged, untagged, phi.rows, ring, caps=caps)
    qgb = quotient_gb(ring, phi.quotient, caps)
    columns = [tuple(reduce_entry(p, qgb) for p in t) for t in tags]
    columns = [c for c in columns if any(not p.is_zero() for p in c)]
    psi = ModuleMap.from_columns(ring, phi.quotient, phi.cols, columns)
    if not phi.compose(psi).is_zero(caps):
        raise CrossCheckError("syzygy composite is nonzero")
    return psi


def module_colon(sub_cols, f, module, caps=None):
    """Generators of (N :_M f) = {m : f*m in N}, where N is spanned inside
    M = coker(presentation) by sub_cols.  Returned as vectors in the free
    cover of M."""
    ring = module.ring
    t = module.ngens
    tagged = [{(k, e): c for e, c in f.terms} for k in range(t)]
    subs = [c if isinstance(c, dict) else vec_from_polys(c) for c in sub_cols]
    untagged = subs + module.relation_vecs(caps)
    tags = lift_kernel(tagged, untagged, t, ring, caps=caps)
    qgb = quotient_gb(ring, module.quotient, caps)
    out = []
    for tup in tags:
        col = tuple(reduce_entry(p, qgb) for p in tup)
        if any(not p.is_zero() for p in col):
            out.append(col)
    return out


def _homogeneous_degree(p):
    """Total degree if homogeneous, None otherwise; zero polynomial -> 'any'."""
    if p.is_zero():
        return "any"
    degs = {sum(e) for e, _ in p.terms}
    return degs.pop() if len(degs) == 1 else None


def infer_shifts(cols, rank):
    """Row degree shifts making every column homogeneous, or None.

    Solves s_i + deg(entry_i) = d_col by propagation over the bipartite
    row/column incidence graph, anchoring the first row of each connected
    component at shift 0."""
    entry_deg = []
    for c in cols:
        col = []
        for i, p in enumerate(c):
            d = _homogeneous_degree(p)
            if d is None:
                return None
            if d != "any":
                col.append((i, d))
        entry_deg.append(col)
    shifts = [None] * rank
    coldeg = [None] * len(cols)
    for start in range(rank):
        if shifts[start] is not None:
            continue
        shifts[start] = 0
        changed = True
        while changed:
            changed = False
            for j, col in enumerate(entry_deg):
                known = [(i, d) for i, d in col if shifts[i] is not None]
                if not known:
                    continue
                i0, d0 = known[0]
                dj = shifts[i0] + d0
                if coldeg[j] is None:
                    coldeg[j] = dj
                    changed = True
                elif coldeg[j] != dj:
                    return None
                for i, d in col:
                    if shifts[i] is None:
                        shifts[i] = coldeg[j] - d
                        changed = True
                    elif shifts[i] + d != coldeg[j]:
                        return None
    return [s if s is not None else 0 for s in shifts]


def _graded_trim(cols, rank, ring, shifts, qgens, caps):
    """Minimal generators of a homogeneous submodule by degree-by-degree
    linear algebra over the coefficient field: a candidate is kept iff its
    class survives modulo (maximal ideal)*(span) + (quotient)*(free cover).
    Returns None when the input is not homogeneous for the given shifts."""
    from itertools import combinations_with_replacement
    field = ring.field
    morder = TermOverPos(ring.order, rank)
    degs = []
    for c in cols:
        dc = None
        for i, p in enumerate(c):
            d = _homogeneous_degree(p)
            if d is None:
                return None
            if d == "any":
                continue
            total = shifts[i] + d
            if dc is None:
                dc = total
            elif dc != total:
                return None
        degs.append(dc)
    qdegs = []
    for q in qgens:
        d = _homogeneous_degree(q)
        if d is None or d == "any":
            return None
        qdegs.append(d)

    def monomials(total):
        n = ring.nvars
        if total < 0:
            return []
        out = []
        for combo in combinations_with_replacement(range(n), total):
            e = [0] * n
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
        return out

    order_idx = sorted(range(len(cols)), key=lambda j: degs[j])
    kept = []
    pivots = {}
    done_degree = None

    def insert(vec):
        work = dict(vec)
        while work:
            lt = max(work, key=morder.key)
            c = work[lt]
            row = pivots.get(lt)
            if row is None:
                inv = field.inv(c)
                pivots[lt] = {t: field.mul(v, inv) for t, v in work.items()}
                return True
            for t, v in row.items():
                delta = field.mul(c, v)
                prev = work.get(t)
                nc = field.neg(delta) if prev is None else field.sub(prev, delta)
                if nc:
                    work[t] = nc
                elif t in work:
                    del work[t]
        return False

    def fill_span(upto):
        """Insert the degree-`upto` pieces of m*(span of all candidates) and
        of quotient*(free cover)."""
        for j, c in enumerate(cols):
            if degs[j] is None or not (0 < upto - degs[j]):
                continue
            for mono in monomials(upto - degs[j]):
                vec = {}
                for i, p in enumerate(c):
                    for e, coeff in p.terms:
                        vec[(i, mono_mul(e, mono))] = coeff
                insert(vec)
        for q, dq in zip(qgens, qdegs):
            for i in range(rank):
                delta = upto - dq - shifts[i]
                if delta < 0:
                    continue
                for mono in monomials(delta):
                    vec = {}
                    for e, coeff in q.terms:
                        vec[(i, mono_mul(e, mono))] = coeff
                    insert(vec)

    for j in order_idx:
        d = degs[j]
        if d is None:
            continue
        if d != done_degree:
            pivots.clear()
            fill_span(d)
            done_degree = d
        if insert(vec_from_polys(cols[j])):
            kept.append(cols[j])
    return kept


def minimal_generators(cols, rank, ring, quotient=(), caps=None):
    """Deterministic trimmed generating set of the submodule spanned by the
    columns (modulo quotient relations on the free cover).

    Homogeneous input (row shifts inferable) is trimmed by exact graded
    linear algebra, which gives a minimal generating set; anything else
    falls back to greedy span-membership tests by ascending degree."""
    current = [tuple(c) for c in cols]
    current = [c for c in current if any(not p.is_zero() for p in c)]
    if not current:
        return []
    qgens = list(quotient_gb(ring, quotient, caps))
    shifts = infer_shifts(current, rank)
    if shifts is not None:
        kept = _graded_trim(current, rank, ring, shifts, qgens, caps)
        if kept is not None:
            return kept
    current.sort(key=lambda c: max(p.total_degree() for p in c
                                   if not p.is_zero()))
    morder = TermOverPos(ring.order, rank)
    field = ring.field
    ambient = quotient_cols(ring, quotient, rank, caps)
    accepted = []
    basis = module_buchberger(list(ambient), morder, ring, caps=caps)
    red = make_reducers(basis, morder)
    for cand in current:
        if vec_reduce(vec_from_polys(cand), red, morder, field):
            accepted.append(cand)
            basis = module_buchberger(
                [vec_from_polys(c) for c in accepted] + list(ambient),
                morder, ring, caps=caps)
            red = make_reducers(basis, morder)
    return accepted


def minimalize_presentation(pres, caps=None):
    """Cancel unit entries of a presentation by row/column pivoting.

    Returns (new_presentation, kept_rows, express) where express maps each
    original generator index to a dict {kept_position: coefficient} writing
    its class in terms of the surviving generators.  Pivot choice is the
    first constant invertible entry in row-major scan, so the result is
    deterministic.
    """
    ring = pres.ring
    field = ring.field
    qgb = quotient_gb(ring, pres.quotient, caps)
    rows = [[reduce_entry(p, qgb) for p in row] for row in pres.entries]
    row_ids = list(range(pres.rows))
    # expressions of original generators over current generators
    express = {i: {i: ring.one()} for i in range(pres.rows)}

    def drop_zero_columns():
        nonlocal rows
        if not rows:
            return
        ncols = len(rows[0])
        keep = [j for j in range(ncols)
                if any(not rows[i][j].is_zero() for i in range(len(rows)))]
        rows = [[row[j] for j in keep] for row in rows]

    drop_zero_columns()
    while True:
        pivot = None
        for i in range(len(rows)):
            for j in range(len(rows[i]) if rows else 0):
                p = rows[i][j]
                if not p.is_zero() and p.is_constant():
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        r, c = pivot
        u = rows[r][c].constant_coeff()
        uinv = field.inv(u)
        # g_r = -u^{-1} * sum_{i != r} rows[i][c] g_i
        combo = {}
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                combo[row_ids[i]] = rows[i][c].scale(field.neg(uinv))
        # update expressions referencing g_r
        gone = row_ids[r]
        for orig, expr in express.items():
            coeff = expr.pop(gone, None)
            if coeff is not None and not coeff.is_zero():
                for tgt, w in combo.items():
                    add = coeff * w
                    if tgt in expr:
                        tot = expr[tgt] + add
                        if tot.is_zero():
                            del expr[tgt]
                        else:
                            expr[tgt] = tot
                    elif not add.is_zero():
                        expr[tgt] = add
        # update matrix: eliminate row r and column c
        new_rows = []
        new_ids = []
        for i in range(len(rows)):
            if i == r:
                continue
            new_row = []
            for j in range(len(rows[i])):
                if j == c:
                    continue
                val = rows[i][j] - rows[r][j] * rows[i][c].scale(uinv)
                new_row.append(reduce_entry(val, qgb))
            new_rows.append(new_row)
            new_ids.append(row_ids[i])
        rows = new_rows
        row_ids = new_ids
        drop_zero_columns()

    pos_of = {rid: k for k, rid in enumerate(row_ids)}
    expr_out = []
    for orig in range(pres.rows):
        expr_out.append({pos_of[r]: p for r, p in express[orig].items()
                         if not p.is_zero()})
    ncols = len(rows[0]) if rows else 0
    new_pres = ModuleMap(ring, pres.quotient, len(rows), ncols, rows)
    return new_pres, list(row_ids), expr_out


def submodules_equal(cols_a, cols_b, rank, ring, quotient=(), caps=None):
    member_a = submodule_reducer(cols_a, rank, ring, quotient, caps)
    member_b = submodule_reducer(cols_b, rank, ring, quotient, caps)
    return (all(member_b(v) for v in cols_a)
            and all(member_a(v) for v in cols_b))
