"""Sparse exact multivariate polynomials over Q and F_p.

Everything downstream (Groebner bases, modules, resolutions, the checkers)
is built on the four types in this module: coefficient fields, exponent
tuples, monomial orders and `Polynomial`.  All arithmetic is exact; there
is no floating point anywhere in the package.

Representation choices:
  * a monomial is a plain tuple of non-negative ints, one per ring variable;
    exponent arithmetic is checked against a 32-bit limit and fails loudly;
  * a polynomial stores its terms as a tuple of (exponents, coefficient)
    pairs sorted strictly descending in the ambient order, with no zero
    coefficients; the zero polynomial is the empty tuple;
  * rational coefficients are gmpy2.mpq (fractions.Fraction as fallback),
    prime-field coefficients are canonical ints in [0, p).
"""

from __future__ import annotations

import heapq
import operator
from typing import Iterable, Sequence

from .errors import (
    ExponentOverflowError,
    InputError,
    ParseError,
    RingMismatchError,
)

try:
    from gmpy2 import mpq as _mpq
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as _mpq

EXP_LIMIT = 2**31 - 1


# ---------------------------------------------------------------------------
# coefficient fields
# ---------------------------------------------------------------------------

class RationalField:
    """The field Q.  Elements are exact rationals in lowest terms."""

    char = 0
    __slots__ = ()

    @property
    def zero(self):
        return _mpq(0)

    @property
    def one(self):
        return _mpq(1)

    def from_int(self, n):
        return _mpq(n)

    def from_ratio(self, num, den):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        return _mpq(num, den)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in Q")
        return a / b

    def inv(self, a):
        return self.div(self.one, a)

    def coeff_str(self, a):
        num, den = a.numerator, a.denominator
        return str(num) if den == 1 else "%d/%d" % (num, den)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """The field F_p for a machine-word prime p; elements canonical in [0, p)."""

    __slots__ = ("char",)

    def __init__(self, p):
        self.char = p

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def from_int(self, n):
        return n % self.char

    def from_ratio(self, num, den):
        d = den % self.char
        if d == 0:
            raise ZeroDivisionError("denominator divisible by %d" % self.char)
        return (num * pow(d, self.char - 2, self.char)) % self.char

    def add(self, a, b):
        c = a + b
        return c - self.char if c >= self.char else c

    def sub(self, a, b):
        c = a - b
        return c + self.char if c < 0 else c

    def mul(self, a, b):
        return (a * b) % self.char

    def neg(self, a):
        return self.char - a if a else 0

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.char)
        return (a * pow(b, self.char - 2, self.char)) % self.char

    def inv(self, a):
        return self.div(1, a)

    def coeff_str(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.char == self.char

    def __hash__(self):
        return hash(("GF", self.char))

    def __repr__(self):
        return "GF(%d)" % self.char


def _is_prime(n):
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    # deterministic Miller-Rabin for n < 3,215,031,751 > 2^31
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# monomials
# ---------------------------------------------------------------------------

def mono_mul(a, b):
    c = tuple(map(operator.add, a, b))
    if c and max(c) > EXP_LIMIT:
        raise ExponentOverflowError(
            "monomial exponent %d exceeds the 32-bit limit" % max(c))
    return c

def mono_div(a, b):
    """Return a/b as an exponent tuple, or None if b does not divide a."""
    c = tuple(map(operator.sub, a, b))
    if c and min(c) < 0:
        return None
    return c

def mono_divides(b, a):
    return all(map(operator.le, b, a))

def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))

def mono_gcd(a, b):
    return tuple(min(x, y) for x, y in zip(a, b))

def mono_scale(a, k):
    c = tuple(x * k for x in a)
    for e in c:
        if e > EXP_LIMIT:
            raise ExponentOverflowError(
                "monomial exponent %d exceeds the 32-bit limit" % e)
    return c


# ---------------------------------------------------------------------------
# monomial orders
# ---------------------------------------------------------------------------

class MonomialOrder:
    """Total, multiplicative, well-founded order on exponent tuples.

    Subclasses provide `key(exp)` returning an int tuple such that
    exp1 > exp2 in the order iff key(exp1) > key(exp2) lexicographically.
    """

    tag = "?"

    def key(self, exp):  # pragma: no cover - abstract
        raise NotImplementedError

    def nkey(self, exp):
        """Negated key, so a min-heap on nkeys pops the largest monomial."""
        return tuple(-v for v in self.key(exp))

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and other.tag == self.tag

    def __hash__(self):
        return hash(self.tag)

    def __repr__(self):
        return self.tag


class Lex(MonomialOrder):
    tag = "lex"

    def key(self, exp):
        return exp


class GrLex(MonomialOrder):
    tag = "grlex"

    def key(self, exp):
        return (sum(exp),) + exp


class GRevLex(MonomialOrder):
    tag = "grevlex"

    def key(self, exp):
        return (sum(exp),) + tuple(-e for e in reversed(exp))


class BlockElim(MonomialOrder):
    """Elimination order: grevlex on the first `split` variables, then on
    the rest; the first block dominates, so it gets eliminated."""

    def __init__(self, split):
        if split < 0:
            raise InputError("block split index must be >= 0")
        self.split = split
        self.tag = "elim(%d)" % split

    def key(self, exp):
        head, tail = exp[: self.split], exp[self.split:]
        return ((sum(head),) + tuple(-e for e in reversed(head))
                + (sum(tail),) + tuple(-e for e in reversed(tail)))


def order_from_tag(tag):
    tag = tag.strip()
    if tag == "lex":
        return Lex()
    if tag == "grlex":
        return GrLex()
    if tag == "grevlex":
        return GRevLex()
    if tag.startswith("elim(") and tag.endswith(")"):
        return BlockElim(int(tag[5:-1]))
    raise InputError("unknown monomial order %r" % tag)


def compare(u, v, order):
    """Compare two exponent tuples; returns 'less', 'equal' or 'greater'."""
    if len(u) != len(v):
        raise InputError("monomial length mismatch: %d vs %d" % (len(u), len(v)))
    ku, kv = order.key(u), order.key(v)
    if ku < kv:
        return "less"
    if ku > kv:
        return "greater"
    return "equal"


# ---------------------------------------------------------------------------
# rings and polynomials
# ---------------------------------------------------------------------------

class PolyRing:
    """Ambient ring descriptor: coefficient characteristic, variable names
    and monomial order.  Immutable; compared structurally."""

    __slots__ = ("char", "vars", "order", "field", "_index")

    def __init__(self, char, variables, order=None):
        if char != 0:
            if char > EXP_LIMIT or not _is_prime(char):
                raise InputError(
                    "characteristic must be 0 or a prime < 2^31, got %r" % char)
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise InputError("duplicate variable names: %r" % (variables,))
        self.char = char
        self.vars = variables
        self.order = order if order is not None else GRevLex()
        self.field = RationalField() if char == 0 else PrimeField(char)
        self._index = {v: i for i, v in enumerate(variables)}

    @property
    def nvars(self):
        return len(self.vars)

    def zero(self):
        return Polynomial(self, ())

    def one(self):
        return self.constant(1)

    def constant(self, c):
        coeff = self.field.from_int(c) if isinstance(c, int) else c
        if not coeff:
            return Polynomial(self, ())
        return Polynomial(self, (((0,) * self.nvars, coeff),))

    def var(self, i):
        if isinstance(i, str):
            i = self._index[i]
        exp = [0] * self.nvars
        exp[i] = 1
        return Polynomial(self, ((tuple(exp), self.field.one),))

    def monomial(self, exp, coeff=None):
        coeff = self.field.one if coeff is None else coeff
        if not coeff:
            return Polynomial(self, ())
        return Polynomial(self, ((tuple(exp), coeff),))

    def from_dict(self, d):
        items = [(e, c) for e, c in d.items() if c]
        items.sort(key=lambda t: self.order.key(t[0]), reverse=True)
        return Polynomial(self, tuple(items))

    def with_order(self, order):
        return PolyRing(self.char, self.vars, order)

    def extended(self, new_vars, order, front=True):
        """Ring with extra variables prepended (default) or appended."""
        new_vars = tuple(new_vars)
        for v in new_vars:
            if v in self._index:
                raise InputError("variable %r already present" % v)
        allv = new_vars + self.vars if front else self.vars + new_vars
        return PolyRing(self.char, allv, order)

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and other.char == self.char
                and other.vars == self.vars and other.order == self.order)

    def __hash__(self):
        return hash((self.char, self.vars, self.order))

    def __repr__(self):
        k = "Q" if self.char == 0 else "F_%d" % self.char
        return "%s[%s;%s]" % (k, ",".join(self.vars), self.order.tag)


class Polynomial:
    """Immutable sparse polynomial; see module docstring for representation."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    # -- basic queries ----------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or sum(self.terms[0][0]) == 0

    def constant_coeff(self):
        if self.terms and sum(self.terms[-1][0]) == 0:
            return self.terms[-1][1]
        return self.ring.field.zero

    def lt(self):
        """Leading (exponents, coefficient) pair; error on the zero polynomial."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return self.terms[0]

    def lm(self):
        return self.lt()[0]

    def lc(self):
        return self.lt()[1]

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e, _ in self.terms)

    def as_dict(self):
        return dict(self.terms)

    # -- arithmetic --------------------------------------------------------

    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatchError(
                "operands in different rings: %r vs %r" % (self.ring, other.ring))

    def __add__(self, other):
        self._check(other)
        d = dict(self.terms)
        for e, c in other.terms:
            nc = d.get(e)
            nc = c if nc is None else self.ring.field.add(nc, c)
            if nc:
                d[e] = nc
            elif e in d:
                del d[e]
        return self.ring.from_dict(d)

    def __sub__(self, other):
        self._check(other)
        f = self.ring.field
        d = dict(self.terms)
        for e, c in other.terms:
            nc = d.get(e)
            nc = f.neg(c) if nc is None else f.sub(nc, c)
            if nc:
                d[e] = nc
            elif e in d:
                del d[e]
        return self.ring.from_dict(d)

    def __neg__(self):
        f = self.ring.field
        return Polynomial(self.ring, tuple((e, f.neg(c)) for e, c in self.terms))

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(self.ring.field.from_int(other))
        self._check(other)
        f = self.ring.field
        d = {}
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        for e1, c1 in a:
            for e2, c2 in b:
                e = mono_mul(e1, e2)
                c = f.mul(c1, c2)
                nc = d.get(e)
                nc = c if nc is None else f.add(nc, c)
                if nc:
                    d[e] = nc
                elif e in d:
                    del d[e]
        return self.ring.from_dict(d)

    __rmul__ = __mul__

    def scale(self, coeff):
        if not coeff:
            return self.ring.zero()
        f = self.ring.field
        return Polynomial(self.ring,
                          tuple((e, f.mul(c, coeff)) for e, c in self.terms))

    def mul_term(self, exp, coeff):
        """Multiply by the single term coeff * x^exp."""
        if not coeff:
            return self.ring.zero()
        f = self.ring.field
        return Polynomial(self.ring, tuple(
            (mono_mul(e, exp), f.mul(c, coeff)) for e, c in self.terms))

    def __pow__(self, n):
        if n < 0:
            raise InputError("negative polynomial power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def monic(self):
        if not self.terms:
            return self
        c = self.lc()
        if c == self.ring.field.one:
            return self
        return self.scale(self.ring.field.inv(c))

    def derivative(self, i):
        if isinstance(i, str):
            i = self.ring._index[i]
        f = self.ring.field
        d = {}
        for e, c in self.terms:
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                nc = f.mul(c, f.from_int(e[i]))
                if nc:
                    d[ne] = f.add(d[ne], nc) if ne in d else nc
        return self.ring.from_dict(d)

    def evaluate(self, values):
        """Evaluate at a point given by one field element per variable."""
        field = self.ring.field
        powers = [dict() for _ in range(self.ring.nvars)]

        def power(i, k):
            got = powers[i].get(k)
            if got is None:
                got = field.one
                base = values[i]
                kk = k
                while kk:
                    if kk & 1:
                        got = field.mul(got, base)
                    kk >>= 1
                    if kk:
                        base = field.mul(base, base)
                powers[i][k] = got
            return got

        acc = field.zero
        for e, c in self.terms:
            term = c
            for i, k in enumerate(e):
                if k:
                    term = field.mul(term, power(i, k))
            acc = field.add(acc, term)
        return acc

    def subs(self, target_ring, images):
        """Evaluate by substituting images[i] (a target_ring Polynomial or an
        int) for variable i."""
        imgs = [target_ring.constant(v) if isinstance(v, int) else v
                for v in images]
        out = target_ring.zero()
        for e, c in self.terms:
            term = target_ring.constant(1).scale(_coerce_coeff(self.ring, target_ring, c))
            for i, k in enumerate(e):
                if k:
                    term = term * imgs[i] ** k
            out = out + term
        return out

    # -- comparisons / hashing ----------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, Polynomial) and self.ring == other.ring
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ring, self.terms))

    def sort_key(self):
        """Key ordering polynomials by leading term (zero first)."""
        if not self.terms:
            return (0,)
        return (1,) + tuple(self.ring.order.key(self.terms[0][0]))

    # -- printing ------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        field = self.ring.field
        parts = []
        for idx, (e, c) in enumerate(self.terms):
            monos = []
            for name, k in zip(self.ring.vars, e):
                if k == 1:
                    monos.append(name)
                elif k:
                    monos.append("%s^%d" % (name, k))
            if self.ring.char == 0:
                neg = c < 0
                mag = -c if neg else c
            else:
                neg = False
                mag = c
            cs = field.coeff_str(mag)
            if monos:
                body = "*".join(monos) if cs == "1" else cs + "*" + "*".join(monos)
            else:
                body = cs
            if idx == 0:
                parts.append("-" + body if neg else body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    def __repr__(self):
        return "<%s in %r>" % (self, self.ring)


def _coerce_coeff(src_ring, dst_ring, c):
    if src_ring.char == dst_ring.char:
        return c
    raise RingMismatchError("cannot move coefficients between characteristics")


def transport(poly, target_ring, var_map=None):
    """Re-express `poly` in `target_ring`, matching variables by name unless
    an explicit name map is given.  Monomial data is copied exactly."""
    if var_map is None:
        var_map = {v: v for v in poly.ring.vars}
    positions = []
    for v in poly.ring.vars:
        w = var_map[v]
        if w not in target_ring._index:
            raise RingMismatchError("variable %r missing in target ring" % w)
        positions.append(target_ring._index[w])
    n = target_ring.nvars
    d = {}
    for e, c in poly.terms:
        ne = [0] * n
        for pos, k in zip(positions, e):
            ne[pos] = k
        key = tuple(ne)
        if key in d:
            raise RingMismatchError("variable collision while transporting")
        d[key] = _coerce_coeff(poly.ring, target_ring, c)
    return target_ring.from_dict(d)


# ---------------------------------------------------------------------------
# division with remainder
# ---------------------------------------------------------------------------

def normal_form(f, divisors, with_quotients=False):
    """Full multivariate division of f by an ordered list of divisors.

    Returns r with f - r in the ideal generated by the divisors and no term
    of r divisible by any divisor leading term.  Reduction always uses the
    first divisor in list order whose leading term divides the current
    maximal unprocessed term, so the result is deterministic for a fixed
    term order and list.  With `with_quotients=True` returns (r, [q_i]) such
    that f = sum(q_i * g_i) + r exactly.
    """
    ring = f.ring
    order = ring.order
    field = ring.field
    red = []
    for g in divisors:
        if g.is_zero():
            red.append(None)
            continue
        if g.ring != ring:
            raise RingMismatchError("divisor in a different ring")
        red.append((g.terms[0][0], g.terms[0][1], g.terms[1:], sum(g.terms[0][0])))
    work = dict(f.terms)
    heap = [(order.nkey(e), e) for e in work]
    heapq.heapify(heap)
    remainder = {}
    quotients = [dict() for _ in divisors] if with_quotients else None
    nkey = order.nkey
    while heap:
        _, e = heapq.heappop(heap)
        c = work.pop(e, None)
        if not c:
            continue
        edeg = sum(e)
        hit = -1
        for i, r in enumerate(red):
            if r is not None and r[3] <= edeg and mono_divides(r[0], e):
                hit = i
                break
        if hit < 0:
            remainder[e] = c
            continue
        glm, glc, gtail, _ = red[hit]
        shift = mono_div(e, glm)
        factor = field.div(c, glc)
        if with_quotients:
            q = quotients[hit]
            q[shift] = field.add(q[shift], factor) if shift in q else factor
        for te, tc in gtail:
            ne = mono_mul(te, shift)
            delta = field.mul(factor, tc)
            prev = work.get(ne)
            if prev is None:
                nc = field.neg(delta)
                if nc:
                    work[ne] = nc
                    heapq.heappush(heap, (nkey(ne), ne))
            else:
                nc = field.sub(prev, delta)
                if nc:
                    work[ne] = nc
                else:
                    del work[ne]
    r = ring.from_dict(remainder)
    if with_quotients:
        return r, [ring.from_dict(q) for q in quotients]
    return r


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN_CHARS = set("+-*^()")


def _tokenize(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in _TOKEN_CHARS:
            tokens.append(ch)
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("num", int(text[i:j])))
            i = j
        elif ch == "/":
            tokens.append("/")
            i += 1
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j]))
            i = j
        else:
            raise ParseError("unexpected character %r at position %d" % (ch, i))
    return tokens


class _Parser:
    def __init__(self, tokens, ring):
        self.tokens = tokens
        self.pos = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, tok):
        got = self.next()
        if got != tok:
            raise ParseError("expected %r, got %r" % (tok, got))

    def parse_expr(self):
        sign = 1
        while self.peek() in ("+", "-"):
            if self.next() == "-":
                sign = -sign
        out = self.parse_term()
        if sign < 0:
            out = -out
        while self.peek() in ("+", "-"):
            op = self.next()
            sign = 1 if op == "+" else -1
            while self.peek() in ("+", "-"):
                if self.next() == "-":
                    sign = -sign
            term = self.parse_term()
            out = out + term if sign > 0 else out - term
        return out

    def parse_term(self):
        out = self.parse_factor()
        while self.peek() == "*":
            self.next()
            out = out * self.parse_factor()
        return out

    def parse_factor(self):
        base = self.parse_base()
        if self.peek() == "^":
            self.next()
            tok = self.next()
            if not (isinstance(tok, tuple) and tok[0] == "num"):
                raise ParseError("exponent must be a natural number")
            base = base ** tok[1]
        return base

    def parse_base(self):
        tok = self.next()
        if tok == "(":
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if tok == "-":
            return -self.parse_base()
        if isinstance(tok, tuple) and tok[0] == "num":
            num = tok[1]
            if self.peek() == "/":
                self.next()
                dtok = self.next()
                if not (isinstance(dtok, tuple) and dtok[0] == "num"):
                    raise ParseError("malformed rational literal")
                try:
                    return self.ring.constant(
                        self.ring.field.from_ratio(num, dtok[1]))
                except ZeroDivisionError as exc:
                    raise ParseError(str(exc)) from None
            return self.ring.constant(num)
        if isinstance(tok, tuple) and tok[0] == "name":
            name = tok[1]
            if name not in self.ring._index:
                raise ParseError("unknown variable %r" % name)
            return self.ring.var(name)
        raise ParseError("unexpected token %r" % (tok,))


def parse_polynomial(text, ring):
    """Parse an expression over declared variable names into canonical form.

    Grammar: +, -, *, ^, parentheses, integer and rational literals.
    parse -> print -> parse is the identity.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty polynomial text")
    parser = _Parser(tokens, ring)
    out = parser.parse_expr()
    if parser.peek() is not None:
        raise ParseError("trailing input at token %d" % parser.pos)
    return out
