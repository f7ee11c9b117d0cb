"""Line-oriented declaration language for workspaces.

A workspace document declares named rings, ideals, modules, extensions,
parameter sequences, ring elements and complexes; every later object
references a previously declared ring.  Statements end with ';' and '#'
starts a comment.  A JSON equivalent of the same statements is accepted
and produced for machine integration.

    ring R = poly(char=0, vars=[x,y,z], order=grevlex);
    ring S = quotient(R, ["x*y"]);
    ideal P over R = ["y^2 - x*z", "x^3 - y*z", "x^2*y - z^2"];
    module M over R = coker [["x1","x2","x3"]];
    extension E = base S, adjoin [e], relations ["e^2 - e", "e*y"];
    sequence s over R = ["x - z", "y - w"];
    element f over R = "x + y";
    complex K over R = koszul ["x", "y"];
"""

from __future__ import annotations

import json

from .checks import FiniteExtension
from .errors import InputError, ParseError
from .groebner import Ideal
from .modules import FPModule, ModuleMap
from .poly import BlockElim, PolyRing, order_from_tag, parse_polynomial
from .resolutions import Complex, koszul_complex


class RingDecl:
    __slots__ = ("name", "ring", "quotient", "base_name")

    def __init__(self, name, ring, quotient=(), base_name=None):
        self.name = name
        self.ring = ring
        self.quotient = tuple(quotient)
        self.base_name = base_name


class Workspace:
    """Parsed document: named objects plus the statement list that
    reproduces it exactly on serialization."""

    def __init__(self):
        self.rings = {}
        self.ideals = {}
        self.modules = {}
        self.extensions = {}
        self.sequences = {}
        self.elements = {}
        self.complexes = {}
        self.statements = []
        self._names = set()

    def _declare(self, name):
        if name in self._names:
            raise ParseError("duplicate name %r" % name)
        self._names.add(name)

    def ring_decl(self, name):
        if name not in self.rings:
            raise InputError("unknown ring %r" % name)
        return self.rings[name]


# ---------------------------------------------------------------------------
# tokenizer
# ---------------------------------------------------------------------------

def _strip_comments(text):
    lines = []
    for line in text.splitlines():
        if "#" in line:
            line = line[: line.index("#")]
        lines.append(line)
    return "\n".join(lines)


def _tokenize(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise ParseError("unterminated string literal")
            tokens.append(("str", text[i + 1: j]))
            i = j + 1
        elif ch in "()[]=,;":
            tokens.append(ch)
            i += 1
        elif ch == "-" or ch.isdigit():
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("num", int(text[i:j])))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("id", text[i:j]))
            i = j
        else:
            raise ParseError("unexpected character %r in workspace text" % ch)
    return tokens


class _Stream:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of document")
        self.pos += 1
        return tok

    def expect(self, want):
        tok = self.next()
        if tok != want:
            raise ParseError("expected %r, got %r" % (want, tok))

    def ident(self):
        tok = self.next()
        if not (isinstance(tok, tuple) and tok[0] == "id"):
            raise ParseError("expected an identifier, got %r" % (tok,))
        return tok[1]

    def string(self):
        tok = self.next()
        if not (isinstance(tok, tuple) and tok[0] == "str"):
            raise ParseError("expected a string literal, got %r" % (tok,))
        return tok[1]

    def number(self):
        tok = self.next()
        if not (isinstance(tok, tuple) and tok[0] == "num"):
            raise ParseError("expected a number, got %r" % (tok,))
        return tok[1]

    def id_list(self):
        self.expect("[")
        out = []
        while self.peek() != "]":
            out.append(self.ident())
            if self.peek() == ",":
                self.next()
        self.expect("]")
        return out

    def str_list(self):
        self.expect("[")
        out = []
        while self.peek() != "]":
            out.append(self.string())
            if self.peek() == ",":
                self.next()
        self.expect("]")
        return out

    def str_matrix(self):
        self.expect("[")
        rows = []
        while self.peek() != "]":
            rows.append(self.str_list())
            if self.peek() == ",":
                self.next()
        self.expect("]")
        return rows

    def str_matrix_list(self):
        self.expect("[")
        mats = []
        while self.peek() != "]":
            mats.append(self.str_matrix())
            if self.peek() == ",":
                self.next()
        self.expect("]")
        return mats


# ---------------------------------------------------------------------------
# statement parsing
# ---------------------------------------------------------------------------

def parse_workspace(text, default_order="grevlex"):
    """Parse a text document (or its JSON equivalent) into a Workspace."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return workspace_from_json(json.loads(text), default_order)
    ws = Workspace()
    toks = _Stream(_tokenize(_strip_comments(text)))
    while toks.peek() is not None:
        kind = toks.ident()
        if kind == "ring":
            _parse_ring(toks, ws, default_order)
        elif kind == "ideal":
            _parse_ideal(toks, ws)
        elif kind == "module":
            _parse_module(toks, ws)
        elif kind == "extension":
            _parse_extension(toks, ws)
        elif kind == "sequence":
            _parse_sequence(toks, ws)
        elif kind == "element":
            _parse_element(toks, ws)
        elif kind == "complex":
            _parse_complex(toks, ws)
        else:
            raise ParseError("unknown declaration kind %r" % kind)
    return ws


def _parse_ring(toks, ws, default_order):
    name = toks.ident()
    toks.expect("=")
    head = toks.ident()
    if head == "poly":
        toks.expect("(")
        char = None
        variables = None
        order_tag = default_order
        while toks.peek() != ")":
            key = toks.ident()
            toks.expect("=")
            if key == "char":
                char = toks.number()
            elif key == "vars":
                variables = toks.id_list()
            elif key == "order":
                order_tag = toks.ident()
                if toks.peek() == "(":
                    toks.expect("(")
                    order_tag += "(%d)" % toks.number()
                    toks.expect(")")
            else:
                raise ParseError("unknown ring option %r" % key)
            if toks.peek() == ",":
                toks.next()
        toks.expect(")")
        toks.expect(";")
        if char is None or variables is None:
            raise ParseError("ring %r needs char= and vars=" % name)
        ring = PolyRing(char, variables, order_from_tag(order_tag))
        ws._declare(name)
        ws.rings[name] = RingDecl(name, ring)
        ws.statements.append(("ring-poly", name))
    elif head == "quotient":
        toks.expect("(")
        base_name = toks.ident()
        toks.expect(",")
        gens = toks.str_list()
        toks.expect(")")
        toks.expect(";")
        base = ws.ring_decl(base_name)
        if base.quotient:
            raise ParseError("quotient of a quotient ring is not supported")
        quot = tuple(parse_polynomial(s, base.ring) for s in gens)
        ws._declare(name)
        ws.rings[name] = RingDecl(name, base.ring, quot, base_name)
        ws.statements.append(("ring-quotient", name))
    else:
        raise ParseError("unknown ring constructor %r" % head)


def _parse_ideal(toks, ws):
    name = toks.ident()
    over = toks.ident()
    if over != "over":
        raise ParseError("expected 'over' in ideal declaration")
    ring_name = toks.ident()
    toks.expect("=")
    gens = toks.str_list()
    toks.expect(";")
    decl = ws.ring_decl(ring_name)
    ideal = Ideal(decl.ring, [parse_polynomial(s, decl.ring) for s in gens])
    ws._declare(name)
    ws.ideals[name] = (ring_name, ideal)
    ws.statements.append(("ideal", name))


def _parse_module(toks, ws):
    name = toks.ident()
    if toks.ident() != "over":
        raise ParseError("expected 'over' in module declaration")
    ring_name = toks.ident()
    toks.expect("=")
    if toks.ident() != "coker":
        raise ParseError("modules are declared as coker of a matrix")
    rows = toks.str_matrix()
    toks.expect(";")
    decl = ws.ring_decl(ring_name)
    if rows:
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ParseError("ragged presentation matrix for module %r" % name)
    entries = [[parse_polynomial(s, decl.ring) for s in row] for row in rows]
    pres = ModuleMap(decl.ring, decl.quotient, len(entries),
                     len(entries[0]) if entries else 0, entries)
    ws._declare(name)
    ws.modules[name] = (ring_name, FPModule(pres))
    ws.statements.append(("module", name))


def _parse_extension(toks, ws):
    name = toks.ident()
    toks.expect("=")
    if toks.ident() != "base":
        raise ParseError("expected 'base' in extension declaration")
    ring_name = toks.ident()
    toks.expect(",")
    if toks.ident() != "adjoin":
        raise ParseError("expected 'adjoin' in extension declaration")
    adjoin = toks.id_list()
    toks.expect(",")
    if toks.ident() != "relations":
        raise ParseError("expected 'relations' in extension declaration")
    rel_strs = toks.str_list()
    toks.expect(";")
    decl = ws.ring_decl(ring_name)
    ext_ring = PolyRing(decl.ring.char, tuple(adjoin) + decl.ring.vars,
                        BlockElim(len(adjoin)))
    rels = [parse_polynomial(s, ext_ring) for s in rel_strs]
    ext = FiniteExtension(decl.ring, decl.quotient, adjoin, rels)
    ws._declare(name)
    ws.extensions[name] = (ring_name, ext)
    ws.statements.append(("extension", name))


def _parse_sequence(toks, ws):
    name = toks.ident()
    if toks.ident() != "over":
        raise ParseError("expected 'over' in sequence declaration")
    ring_name = toks.ident()
    toks.expect("=")
    elems = toks.str_list()
    toks.expect(";")
    decl = ws.ring_decl(ring_name)
    seq = tuple(parse_polynomial(s, decl.ring) for s in elems)
    ws._declare(name)
    ws.sequences[name] = (ring_name, seq)
    ws.statements.append(("sequence", name))


def _parse_element(toks, ws):
    name = toks.ident()
    if toks.ident() != "over":
        raise ParseError("expected 'over' in element declaration")
    ring_name = toks.ident()
    toks.expect("=")
    s = toks.string()
    toks.expect(";")
    decl = ws.ring_decl(ring_name)
    ws._declare(name)
    ws.elements[name] = (ring_name, parse_polynomial(s, decl.ring))
    ws.statements.append(("element", name))


def _parse_complex(toks, ws):
    name = toks.ident()
    if toks.ident() != "over":
        raise ParseError("expected 'over' in complex declaration")
    ring_name = toks.ident()
    toks.expect("=")
    head = toks.ident()
    decl = ws.ring_decl(ring_name)
    if head == "koszul":
        elems = toks.str_list()
        toks.expect(";")
        polys = [parse_polynomial(s, decl.ring) for s in elems]
        cx = koszul_complex(polys, decl.ring, decl.quotient)
    elif head == "maps":
        mats = toks.str_matrix_list()
        toks.expect(";")
        maps = []
        for rows in mats:
            entries = [[parse_polynomial(s, decl.ring) for s in row]
                       for row in rows]
            maps.append(ModuleMap(decl.ring, decl.quotient, len(entries),
                                  len(entries[0]) if entries else 0, entries))
        cx = Complex(maps, check=True)
    else:
        raise ParseError("unknown complex constructor %r" % head)
    ws._declare(name)
    ws.complexes[name] = (ring_name, cx)
    ws.statements.append(("complex", name))


# ---------------------------------------------------------------------------
# serialization (canonical re-print; parse -> print -> parse is identity)
# ---------------------------------------------------------------------------

def _order_text(order):
    return order.tag


def serialize_workspace(ws):
    out = []
    for kind, name in ws.statements:
        if kind == "ring-poly":
            decl = ws.rings[name]
            out.append("ring %s = poly(char=%d, vars=[%s], order=%s);" % (
                name, decl.ring.char, ",".join(decl.ring.vars),
                _order_text(decl.ring.order)))
        elif kind == "ring-quotient":
            decl = ws.rings[name]
            out.append("ring %s = quotient(%s, [%s]);" % (
                name, decl.base_name,
                ", ".join('"%s"' % g for g in decl.quotient)))
        elif kind == "ideal":
            ring_name, ideal = ws.ideals[name]
            out.append("ideal %s over %s = [%s];" % (
                name, ring_name, ", ".join('"%s"' % g for g in ideal.gens)))
        elif kind == "module":
            ring_name, module = ws.modules[name]
            rows = module.presentation.entries
            body = ", ".join("[%s]" % ", ".join('"%s"' % p for p in row)
                             for row in rows)
            out.append("module %s over %s = coker [%s];" % (name, ring_name,
                                                            body))
        elif kind == "extension":
            ring_name, ext = ws.extensions[name]
            user_rels = ext.relations[: len(ext.relations)
                                      - len(ext.base_quotient)]
            out.append("extension %s = base %s, adjoin [%s], relations [%s];"
                       % (name, ring_name, ",".join(ext.ext_vars),
                          ", ".join('"%s"' % r for r in user_rels)))
        elif kind == "sequence":
            ring_name, seq = ws.sequences[name]
            out.append("sequence %s over %s = [%s];" % (
                name, ring_name, ", ".join('"%s"' % f for f in seq)))
        elif kind == "element":
            ring_name, f = ws.elements[name]
            out.append('element %s over %s = "%s";' % (name, ring_name, f))
        elif kind == "complex":
            ring_name, cx = ws.complexes[name]
            mats = []
            for mm in cx.maps:
                mats.append("[%s]" % ", ".join(
                    "[%s]" % ", ".join('"%s"' % p for p in row)
                    for row in mm.entries))
            out.append("complex %s over %s = maps [%s];" % (
                name, ring_name, ", ".join(mats)))
        else:
            raise InputError("unknown statement kind %r" % kind)
    return "\n".join(out) + "\n"


def workspace_to_json(ws):
    stmts = []
    for kind, name in ws.statements:
        if kind == "ring-poly":
            decl = ws.rings[name]
            stmts.append({"kind": "ring", "name": name, "constructor": "poly",
                          "char": decl.ring.char,
                          "vars": list(decl.ring.vars),
                          "order": decl.ring.order.tag})
        elif kind == "ring-quotient":
            decl = ws.rings[name]
            stmts.append({"kind": "ring", "name": name,
                          "constructor": "quotient", "base": decl.base_name,
                          "generators": [str(g) for g in decl.quotient]})
        elif kind == "ideal":
            ring_name, ideal = ws.ideals[name]
            stmts.append({"kind": "ideal", "name": name, "ring": ring_name,
                          "generators": [str(g) for g in ideal.gens]})
        elif kind == "module":
            ring_name, module = ws.modules[name]
            stmts.append({"kind": "module", "name": name, "ring": ring_name,
                          "rows": [[str(p) for p in row]
                                   for row in module.presentation.entries]})
        elif kind == "extension":
            ring_name, ext = ws.extensions[name]
            user_rels = ext.relations[: len(ext.relations)
                                      - len(ext.base_quotient)]
            stmts.append({"kind": "extension", "name": name,
                          "base": ring_name, "adjoin": list(ext.ext_vars),
                          "relations": [str(r) for r in user_rels]})
        elif kind == "sequence":
            ring_name, seq = ws.sequences[name]
            stmts.append({"kind": "sequence", "name": name, "ring": ring_name,
                          "elements": [str(f) for f in seq]})
        elif kind == "element":
            ring_name, f = ws.elements[name]
            stmts.append({"kind": "element", "name": name, "ring": ring_name,
                          "value": str(f)})
        elif kind == "complex":
            ring_name, cx = ws.complexes[name]
            stmts.append({"kind": "complex", "name": name, "ring": ring_name,
                          "maps": [[[str(p) for p in row]
                                    for row in mm.entries]
                                   for mm in cx.maps]})
    return {"schema": "homcheck-workspace/1", "statements": stmts}


def workspace_from_json(doc, default_order="grevlex"):
    ws = Workspace()
    for st in doc.get("statements", []):
        kind = st["kind"]
        name = st["name"]
        if kind == "ring" and st.get("constructor", "poly") == "poly":
            ring = PolyRing(st["char"], st["vars"],
                            order_from_tag(st.get("order", default_order)))
            ws._declare(name)
            ws.rings[name] = RingDecl(name, ring)
            ws.statements.append(("ring-poly", name))
        elif kind == "ring":
            base = ws.ring_decl(st["base"])
            if base.quotient:
                raise ParseError("quotient of a quotient ring is not supported")
            quot = tuple(parse_polynomial(s, base.ring)
                         for s in st["generators"])
            ws._declare(name)
            ws.rings[name] = RingDecl(name, base.ring, quot, st["base"])
            ws.statements.append(("ring-quotient", name))
        elif kind == "ideal":
            decl = ws.ring_decl(st["ring"])
            ideal = Ideal(decl.ring, [parse_polynomial(s, decl.ring)
                                      for s in st["generators"]])
            ws._declare(name)
            ws.ideals[name] = (st["ring"], ideal)
            ws.statements.append(("ideal", name))
        elif kind == "module":
            decl = ws.ring_decl(st["ring"])
            entries = [[parse_polynomial(s, decl.ring) for s in row]
                       for row in st["rows"]]
            pres = ModuleMap(decl.ring, decl.quotient, len(entries),
                             len(entries[0]) if entries else 0, entries)
            ws._declare(name)
            ws.modules[name] = (st["ring"], FPModule(pres))
            ws.statements.append(("module", name))
        elif kind == "extension":
            decl = ws.ring_decl(st["base"])
            adjoin = st["adjoin"]
            ext_ring = PolyRing(decl.ring.char,
                                tuple(adjoin) + decl.ring.vars,
                                BlockElim(len(adjoin)))
            rels = [parse_polynomial(s, ext_ring) for s in st["relations"]]
            ext = FiniteExtension(decl.ring, decl.quotient, adjoin, rels)
            ws._declare(name)
            ws.extensions[name] = (st["base"], ext)
            ws.statements.append(("extension", name))
        elif kind == "sequence":
            decl = ws.ring_decl(st["ring"])
            seq = tuple(parse_polynomial(s, decl.ring)
                        for s in st["elements"])
            ws._declare(name)
            ws.sequences[name] = (st["ring"], seq)
            ws.statements.append(("sequence", name))
        elif kind == "element":
            decl = ws.ring_decl(st["ring"])
            ws._declare(name)
            ws.elements[name] = (st["ring"],
                                 parse_polynomial(st["value"], decl.ring))
            ws.statements.append(("element", name))
        elif kind == "complex":
            decl = ws.ring_decl(st["ring"])
            maps = []
            for rows in st["maps"]:
                entries = [[parse_polynomial(s, decl.ring) for s in row]
                           for row in rows]
                maps.append(ModuleMap(decl.ring, decl.quotient, len(entries),
                                      len(entries[0]) if entries else 0,
                                      entries))
            cx = Complex(maps, check=True)
            ws._declare(name)
            ws.complexes[name] = (st["ring"], cx)
            ws.statements.append(("complex", name))
        else:
            raise ParseError("unknown statement kind %r" % kind)
    return ws
