"""Free complexes, minimal resolutions, Betti numbers, Hom, Tor and the
determinantal toolkit (ranks of maps, Fitting ideals).

Resolutions are computed by iterated syzygies with generator trimming at
every step; for graded input this produces the minimal graded free
resolution, which is verified post hoc (every differential entry must lie
in the irrelevant maximal ideal).
"""

from __future__ import annotations

from itertools import combinations

from .errors import CrossCheckError, InputError, ResourceCapError
from .groebner import Ideal
from .modules import (
    FPModule,
    ModuleMap,
    minimal_generators,
    minimalize_presentation,
    quotient_cols,
    quotient_gb,
    reduce_entry,
    syzygy_module,
)
from .poly import normal_form
from .vecgb import lift_kernel, vec_from_polys


# ---------------------------------------------------------------------------
# complexes
# ---------------------------------------------------------------------------

class Complex:
    """Chain of maps phi_1..phi_s with phi_i : F_i -> F_{i-1}; consecutive
    composites are verified to vanish at construction."""

    __slots__ = ("maps",)

    def __init__(self, maps, check=True):
        maps = list(maps)
        if not maps:
            raise InputError("a complex needs at least one map")
        ring, quot = maps[0].ring, maps[0].quotient
        for i in range(len(maps) - 1):
            if maps[i].cols != maps[i + 1].rows:
                raise InputError("rank mismatch between spots %d and %d" % (i + 1, i + 2))
            if maps[i].ring != ring or maps[i].quotient != quot:
                raise InputError("complex maps over different rings")
        if check:
            for i in range(len(maps) - 1):
                if not maps[i].compose(maps[i + 1]).is_zero():
                    raise InputError("composite at spot %d is nonzero" % (i + 1))
        self.maps = tuple(maps)

    @property
    def ring(self):
        return self.maps[0].ring

    @property
    def quotient(self):
        return self.maps[0].quotient

    @property
    def length(self):
        return len(self.maps)

    def rank(self, i):
        """Rank of the free module F_i, 0 <= i <= length."""
        if i == 0:
            return self.maps[0].rows
        return self.maps[i - 1].cols

    def map(self, i):
        """phi_i: F_i -> F_{i-1}, for 1 <= i <= length."""
        return self.maps[i - 1]

    def __repr__(self):
        ranks = [self.rank(i) for i in range(self.length + 1)]
        return "Complex(%s)" % " <- ".join(str(r) for r in ranks)


def koszul_complex(elements, ring, quotient=()):
    """The Koszul complex on the given ring elements: F_k has basis indexed
    by k-subsets, and the differential sends e_T to the signed sum of
    elements times the facets of T."""
    n = len(elements)
    if n == 0:
        raise InputError("Koszul complex needs at least one element")
    maps = []
    for k in range(1, n + 1):
        src = list(combinations(range(n), k))
        dst = list(combinations(range(n), k - 1))
        dst_index = {t: i for i, t in enumerate(dst)}
        z = ring.zero()
        entries = [[z] * len(src) for _ in range(len(dst))]
        for j, subset in enumerate(src):
            for pos in range(k):
                face = subset[:pos] + subset[pos + 1:]
                coeff = elements[subset[pos]]
                if pos % 2 == 1:
                    coeff = -coeff
                entries[dst_index[face]][j] = coeff
        maps.append(ModuleMap(ring, quotient, len(dst), len(src), entries))
    return Complex(maps, check=True)


def complex_homology(cx, i, caps=None):
    """ker(phi_i) / Im(phi_{i+1}) as a finitely presented module; at the
    ends the missing maps are zero."""
    if i < 0 or i > cx.length:
        raise InputError("homology index %d out of range 0..%d" % (i, cx.length))
    ring, quot = cx.ring, cx.quotient
    mid_rank = cx.rank(i)
    u = cx.map(i) if i >= 1 else None
    v = cx.map(i + 1) if i + 1 <= cx.length else None
    extra_mid = ()
    extra_left = ()
    return _homology_of(u, v, mid_rank, ring, quot, extra_mid, extra_left, caps)


def _homology_of(u, v, mid_rank, ring, quot, extra_mid, extra_left, caps):
    """Homology at a spot of a (possibly tensored) complex.

    u: map out of the middle free module (or None for zero), v: map into it
    (or None).  extra_mid/extra_left are relation columns presenting the
    actual modules sitting on the free covers (used by Tor).
    """
    qgb = quotient_gb(ring, quot, caps)
    if u is None:
        kernel_gens = [tuple(ring.one() if i == k else ring.zero()
                             for i in range(mid_rank)) for k in range(mid_rank)]
    else:
        tagged = u.column_vecs()
        untagged = list(extra_left) + quotient_cols(ring, quot, u.rows, caps)
        kernel_gens = lift_kernel(tagged, untagged, u.rows, ring, caps=caps)
        kernel_gens = [tuple(reduce_entry(p, qgb) for p in t) for t in kernel_gens]
        kernel_gens = [t for t in kernel_gens if any(not p.is_zero() for p in t)]
    if not kernel_gens:
        return FPModule(ModuleMap.zero(ring, quot, 0, 0))
    tagged = [vec_from_polys(t) for t in kernel_gens]
    untagged = list(extra_mid) + quotient_cols(ring, quot, mid_rank, caps)
    if v is not None:
        untagged = v.column_vecs() + untagged
    rel_tuples = lift_kernel(tagged, untagged, mid_rank, ring, caps=caps)
    rel_cols = []
    for t in rel_tuples:
        col = tuple(reduce_entry(p, qgb) for p in t)
        if any(not p.is_zero() for p in col):
            rel_cols.append(col)
    pres = ModuleMap.from_columns(ring, quot, len(kernel_gens), rel_cols)
    return FPModule(pres)


# ---------------------------------------------------------------------------
# minimal resolutions
# ---------------------------------------------------------------------------

class Resolution:
    """Minimal free resolution data: maps phi_1..phi_s, Betti numbers
    b_0..b_s, and a truncation status ('complete' or 'truncated')."""

    __slots__ = ("maps", "betti", "status", "minimal")

    def __init__(self, maps, betti, status, minimal):
        self.maps = tuple(maps)
        self.betti = tuple(betti)
        self.status = status
        self.minimal = minimal

    @property
    def length(self):
        return len(self.maps)

    def as_complex(self):
        if not self.maps:
            raise InputError("length-0 resolution has no maps")
        return Complex(self.maps, check=False)

    def __repr__(self):
        return "Resolution(betti=%s, %s)" % (list(self.betti), self.status)


def _entries_in_max_ideal(mm, qgb):
    for row in mm.entries:
        for p in row:
            if not reduce_entry(p, qgb).constant_coeff() == p.ring.field.zero:
                return False
    return True


def minimal_resolution(module, length_cap=12, caps=None):
    """Minimal free resolution of a finitely presented graded module.

    Over a polynomial ring the computation always completes (within the
    number of variables many steps); over a quotient ring it may be cut off
    at length_cap, in which case the status is 'truncated', never silent.
    """
    ring, quot = module.ring, module.quotient
    qgb = quotient_gb(ring, quot, caps)
    pres, kept, express = minimalize_presentation(module.presentation, caps)
    b = [pres.rows]
    maps = []
    current_cols = pres.columns()
    status = "complete"
    step = 0
    while True:
        gens = minimal_generators(current_cols, b[-1], ring, quot, caps=caps)
        if not gens:
            break
        step += 1
        if step > length_cap:
            if not quot:
                raise CrossCheckError(
                    "resolution over a polynomial ring exceeded its cap")
            status = "truncated"
            break
        phi = ModuleMap.from_columns(ring, quot, b[-1], gens).reduced(caps)
        maps.append(phi)
        b.append(phi.cols)
        psi = syzygy_module(phi, caps)
        current_cols = psi.columns() if psi.cols else []
    minimal = all(_entries_in_max_ideal(mm, qgb) for mm in maps)
    if not minimal:
        raise InputError(
            "module presentation is not graded: trimmed differentials still "
            "carry unit entries, so Betti numbers would be meaningless")
    return Resolution(maps, b, status, minimal)


def projective_dimension(module, caps=None):
    res = minimal_resolution(module, caps=caps)
    if res.status != "complete":
        raise ResourceCapError("resolution truncated; pd unknown")
    return res.length


# ---------------------------------------------------------------------------
# determinants, ranks, Fitting ideals
# ---------------------------------------------------------------------------

def poly_exact_div(num, den):
    """Exact quotient num/den; raises if den does not divide num."""
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if num.is_zero():
        return num
    r, qs = normal_form(num, [den], with_quotients=True)
    if not r.is_zero():
        raise CrossCheckError("inexact polynomial division")
    return qs[0]


def determinant(rows, ring):
    """Determinant of a square polynomial matrix by memoized cofactor
    expansion along rows."""
    n = len(rows)
    if n == 0:
        return ring.one()
    memo = {}

    def rec(cols):
        if len(cols) == 1:
            return rows[n - 1][cols[0]]
        got = memo.get(cols)
        if got is not None:
            return got
        r = n - len(cols)
        acc = ring.zero()
        for k, c in enumerate(cols):
            e = rows[r][c]
            if e.is_zero():
                continue
            sub = rec(cols[:k] + cols[k + 1:])
            if sub.is_zero():
                continue
            term = e * sub
            acc = acc - term if k % 2 else acc + term
        memo[cols] = acc
        return acc

    return rec(tuple(range(n)))


def _bareiss_rank(entries, ring):
    """Rank over the fraction field of a polynomial domain, fraction-free."""
    m = [list(row) for row in entries]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    prev = ring.one()
    rank = 0
    k = 0
    while k < min(nrows, ncols):
        pivot = None
        best = None
        for i in range(k, nrows):
            for j in range(k, ncols):
                if not m[i][j].is_zero():
                    size = len(m[i][j].terms)
                    if best is None or size < best:
                        best = size
                        pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        if pi != k:
            m[k], m[pi] = m[pi], m[k]
        if pj != k:
            for row in m:
                row[k], row[pj] = row[pj], row[k]
        for i in range(k + 1, nrows):
            for j in range(k + 1, ncols):
                m[i][j] = poly_exact_div(m[k][k] * m[i][j] - m[i][k] * m[k][j],
                                         prev)
            m[i][k] = ring.zero()
        prev = m[k][k]
        rank += 1
        k += 1
    return rank


def _eval_rank_lower(phi, tries=5):
    """Certified lower bound for the rank over the fraction field: the rank
    of the matrix evaluated at deterministic pseudo-random points (a nonzero
    scalar minor witnesses a nonzero minor polynomial)."""
    import random as _random
    from .modules import field_matrix_rank
    ring = phi.ring
    field = ring.field
    best = 0
    bound = min(phi.rows, phi.cols)
    for attempt in range(tries):
        rng = _random.Random(0xC0FFEE + 1009 * attempt)
        if ring.char:
            point = [field.from_int(rng.randrange(ring.char))
                     for _ in range(ring.nvars)]
        else:
            point = [field.from_int(rng.randrange(1, 1 << 16))
                     for _ in range(ring.nvars)]
        scalar = [[p.evaluate(point) for p in row] for row in phi.entries]
        best = max(best, field_matrix_rank(scalar, field))
        if best == bound:
            break
    return best


def rank_of_map(phi, domain_certified=False, caps=None):
    """Largest r such that some r x r minor of the matrix is nonzero in the
    ambient ring.  Over a quotient this requires the caller to certify that
    the quotient is a domain."""
    ring = phi.ring
    if phi.quotient:
        if not domain_certified:
            raise InputError(
                "rank over a quotient ring needs a domain certificate")
        qgb = quotient_gb(ring, phi.quotient, caps)
        n = min(phi.rows, phi.cols)
        for r in range(n, 0, -1):
            for rset in combinations(range(phi.rows), r):
                for cset in combinations(range(phi.cols), r):
                    sub = [[phi.entries[i][j] for j in cset] for i in rset]
                    d = reduce_entry(determinant(sub, ring), qgb)
                    if not d.is_zero():
                        return r
        return 0
    if phi.rows == 0 or phi.cols == 0:
        return 0
    lower = _eval_rank_lower(phi)
    if lower == min(phi.rows, phi.cols):
        return lower
    return _bareiss_rank(phi.entries, ring)


def resolution_ranks(res, caps=None):
    """Ranks of the differentials of a verified-exact resolution.

    Exactness forces rank(phi_i) + rank(phi_{i+1}) = b_i, so the ranks are
    the alternating partial Betti sums from the top; each value is then
    confirmed by an evaluation witness (a nonzero minor of that size), with
    a fraction-free elimination as the arbiter when the witness search
    falls short.  A genuine mismatch means the resolution was not exact,
    which is an engine bug."""
    s = len(res.maps)
    expected = [0] * (s + 2)
    for i in range(s, 0, -1):
        expected[i] = res.betti[i] - expected[i + 1]
    ranks = []
    for i in range(1, s + 1):
        phi = res.maps[i - 1]
        lower = _eval_rank_lower(phi)
        if lower == expected[i]:
            ranks.append(lower)
            continue
        exact = _bareiss_rank(phi.entries, phi.ring) if not phi.quotient \
            else rank_of_map(phi, True, caps)
        if exact != expected[i]:
            raise CrossCheckError(
                "differential rank %d contradicts exactness value %d; the "
                "resolution is not exact" % (exact, expected[i]))
        ranks.append(exact)
    return ranks


def fitting_ideal(phi, r, caps=None):
    """Ideal generated by all r x r minors, enumerated in lexicographic
    row/column index order so generator lists are reproducible."""
    ring = phi.ring
    if r == 0:
        return Ideal(ring, [ring.one()])
    if r < 0 or r > min(phi.rows, phi.cols):
        raise InputError("minor size %d out of range for a %dx%d matrix"
                         % (r, phi.rows, phi.cols))
    qgb = quotient_gb(ring, phi.quotient, caps)
    gens = []
    for rset in combinations(range(phi.rows), r):
        for cset in combinations(range(phi.cols), r):
            sub = [[phi.entries[i][j] for j in cset] for i in rset]
            d = reduce_entry(determinant(sub, ring), qgb)
            if not d.is_zero():
                gens.append(d)
    return Ideal(ring, gens)


# ---------------------------------------------------------------------------
# Hom and Tor
# ---------------------------------------------------------------------------

class HomModule:
    """Hom(M, N) as a module, together with evaluation data: generator k is
    an actual map, recorded as a (gens(N) x gens(M)) matrix over the ring."""

    __slots__ = ("module", "generators")

    def __init__(self, module, generators):
        self.module = module
        self.generators = tuple(generators)

    def __repr__(self):
        return "HomModule(%d generators)" % len(self.generators)


def hom_module(M, N, caps=None):
    """Presentation of Hom(M, N) with per-generator evaluation matrices.

    A homomorphism is a (d x b) matrix H over the ring (b = gens of M,
    d = gens of N) with H * (relations of M) contained in the relations of
    N; H is trivial when every column lies in the relations of N.  Positions
    flatten column-major: (row i, col j) -> j*d + i.
    """
    if M.ring != N.ring or M.quotient != N.quotient:
        raise InputError("Hom of modules over different rings")
    ring, quot = M.ring, M.quotient
    qgb = quotient_gb(ring, quot, caps)
    b = M.ngens
    d = N.ngens
    A = M.presentation
    C = N.presentation
    if b == 0 or d == 0:
        return HomModule(FPModule(ModuleMap.zero(ring, quot, 0, 0)), [])
    dim = d * b
    # the map H -> H * A, columns indexed by the flattened H-basis
    target = d * A.cols
    tagged = []
    for j in range(b):
        for i in range(d):
            vec = {}
            for k in range(A.cols):
                p = A.entries[j][k]
                for e, c in p.terms:
                    vec[(k * d + i, e)] = c
            tagged.append(vec)
    untagged = []
    for k in range(A.cols):
        for col in range(C.cols):
            vec = {}
            for i in range(d):
                p = C.entries[i][col]
                for e, c in p.terms:
                    vec[(k * d + i, e)] = c
            if vec:
                untagged.append(vec)
    untagged += quotient_cols(ring, quot, target, caps)
    if A.cols == 0:
        kgens = [tuple(ring.one() if t == s else ring.zero() for t in range(dim))
                 for s in range(dim)]
    else:
        kgens = lift_kernel(tagged, untagged, target, ring, caps=caps)
        kgens = [tuple(reduce_entry(p, qgb) for p in t) for t in kgens]
        kgens = [t for t in kgens if any(not p.is_zero() for p in t)]
    # trivial homs: every column of H lies in Im(C)
    lcols = []
    for j in range(b):
        for col in range(C.cols):
            vec = {}
            for i in range(d):
                p = C.entries[i][col]
                for e, c in p.terms:
                    vec[(j * d + i, e)] = c
            if vec:
                lcols.append(vec)
    lcols += quotient_cols(ring, quot, dim, caps)
    if not kgens:
        return HomModule(FPModule(ModuleMap.zero(ring, quot, 0, 0)), [])
    rel_tuples = lift_kernel([vec_from_polys(t) for t in kgens], lcols,
                             dim, ring, caps=caps)
    rel_cols = []
    for t in rel_tuples:
        col = tuple(reduce_entry(p, qgb) for p in t)
        if any(not p.is_zero() for p in col):
            rel_cols.append(col)
    pres = ModuleMap.from_columns(ring, quot, len(kgens), rel_cols)
    matrices = []
    for t in kgens:
        entries = [[t[j * d + i] for j in range(b)] for i in range(d)]
        matrices.append(ModuleMap(ring, quot, d, b, entries))
    return HomModule(FPModule(pres), matrices)


def tensor_modules(M, N, caps=None):
    """M (x) N presented on the b*d tensor generators."""
    if M.ring != N.ring or M.quotient != N.quotient:
        raise InputError("tensor of modules over different rings")
    ring, quot = M.ring, M.quotient
    b, d = M.ngens, N.ngens
    cols = []
    a_tensor = M.presentation.kron_identity(d)
    cols.extend(a_tensor.columns())
    for j in range(b):
        for col in range(N.presentation.cols):
            vec = [ring.zero()] * (b * d)
            for i in range(d):
                vec[j * d + i] = N.presentation.entries[i][col]
            cols.append(tuple(vec))
    pres = ModuleMap.from_columns(ring, quot, b * d, cols).reduced(caps)
    return FPModule(pres)


def tor_modules(M, N, i, caps=None, length_cap=12):
    """Tor_i(M, N): resolve M up to the needed length, tensor with N, take
    homology."""
    if i < 0:
        raise InputError("Tor index must be >= 0")
    if M.ring != N.ring or M.quotient != N.quotient:
        raise InputError("Tor of modules over different rings")
    if i == 0:
        return tensor_modules(M, N, caps)
    ring, quot = M.ring, M.quotient
    res = minimal_resolution(M, length_cap=max(length_cap, i + 1), caps=caps)
    if res.status != "complete" and res.length < i + 1:
        raise ResourceCapError("resolution too short for Tor_%d" % i)
    if i > res.length:
        return FPModule(ModuleMap.zero(ring, quot, 0, 0))
    d = N.ngens
    C = N.presentation
    u = res.maps[i - 1].kron_identity(d)
    v = res.maps[i].kron_identity(d) if i < res.length else None
    mid_rank = res.betti[i] * d

    def c_blocks(rank_free):
        cols = []
        for j in range(rank_free):
            for col in range(C.cols):
                vec = {}
                for a in range(d):
                    p = C.entries[a][col]
                    for e, c in p.terms:
                        vec[(j * d + a, e)] = c
                if vec:
                    cols.append(vec)
        return cols

    extra_mid = c_blocks(res.betti[i])
    extra_left = c_blocks(res.betti[i - 1])
    return _homology_of(u, v, mid_rank, ring, quot, extra_mid, extra_left, caps)
