"""Textual syntax: parsing and canonical printing for all three calculi.

Formulas use `*` (tensor, left-associative), `/` and `\\` (the two ordered
implications, same precedence, non-associative), `-o` (linear implication,
right-associative, lowest precedence), `!` (tightest), and `I` for the unit.
Terms are keyword-prefix forms whose compound arguments are parenthesized;
splice indices and binder names that cannot be recovered from subterms are
printed in brackets.  Parsing then printing is the identity on parser output,
and printing is canonical: one space between tokens, minimal parentheses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import dill as dl
from . import mill as ml
from . import nf as nfm
from . import syntax as lk
from .mill import Lolli
from .dill import Bang
from .syntax import Atom, Formula, Over, Tensor, Under, Unit


class ParseError(Exception):
    def __init__(self, line: int, col: int, expected: str):
        super().__init__(f"{line}:{col}: expected {expected}")
        self.line = line
        self.col = col
        self.expected = expected


_TOKEN = re.compile(
    r"""(?P<ws>\s+|\#[^\n]*)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<int>[0-9]+)
      | (?P<lolli>-o)
      | (?P<punct>[()\[\]*/\\!,.:])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(src: str) -> list[_Tok]:
    out = []
    pos, line, col = 0, 1, 1
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ParseError(line, col, f"a token (found {src[pos]!r})")
        text = m.group(0)
        if m.lastgroup != "ws":
            kind = m.lastgroup if m.lastgroup != "punct" else text
            if m.lastgroup == "lolli":
                kind = "-o"
            out.append(_Tok(kind, text, line, col))
        nl = text.count("\n")
        if nl:
            line += nl
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    out.append(_Tok("eof", "", line, col))
    return out


class _Parser:
    def __init__(self, src: str, calculus: str):
        self.toks = _tokenize(src)
        self.i = 0
        self.calculus = calculus

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, expected: str):
        t = self.peek()
        raise ParseError(t.line, t.col, expected)

    def expect(self, kind: str) -> _Tok:
        if self.peek().kind != kind:
            self.fail(f"{kind!r}")
        return self.next()

    # -- formulas ---------------------------------------------------------

    def formula(self) -> Formula:
        return self._lolli()

    def _lolli(self) -> Formula:
        left = self._residual()
        if self.peek().kind == "-o":
            if self.calculus == "lambek":
                self.fail("no '-o' in the ordered calculus")
            self.next()
            return Lolli(left, self._lolli())
        return left

    def _residual(self) -> Formula:
        left = self._tensor()
        k = self.peek().kind
        if k not in ("/", "\\"):
            return left
        self.next()
        right = self._tensor()
        if self.peek().kind in ("/", "\\"):
            self.fail("parentheses ('/' and '\\' do not associate)")
        if self.calculus != "lambek":
            self.fail("no ordered implications outside the ordered calculus")
        return Over(left, right) if k == "/" else Under(left, right)

    def _tensor(self) -> Formula:
        left = self._prefix()
        while self.peek().kind == "*":
            self.next()
            left = Tensor(left, self._prefix())
        return left

    def _prefix(self) -> Formula:
        if self.peek().kind == "!":
            if self.calculus != "dill":
                self.fail("no '!' outside dill")
            self.next()
            return Bang(self._prefix())
        return self._fatom()

    def _fatom(self) -> Formula:
        t = self.peek()
        if t.kind == "(":
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        if t.kind == "ident":
            if t.text == "I":
                self.next()
                return Unit()
            if re.fullmatch(r"[a-z][A-Za-z0-9_]*", t.text):
                self.next()
                return Atom(t.text)
        self.fail("a formula")

    def fprimary(self) -> Formula:
        """A formula argument: an atom, I, !-form, or parenthesized formula."""
        if self.peek().kind == "!":
            return self._prefix()
        t = self.peek()
        if t.kind == "(" or t.kind == "ident":
            if t.kind == "ident" and t.text != "I" and not re.fullmatch(r"[a-z][A-Za-z0-9_]*", t.text):
                self.fail("a formula")
            return self._fatom()
        self.fail("a formula")

    # -- helpers for terms ------------------------------------------------

    def name(self) -> str:
        t = self.peek()
        if t.kind != "ident":
            self.fail("a hypothesis name")
        return self.next().text

    def index(self) -> int:
        self.expect("[")
        t = self.expect("int")
        self.expect("]")
        return int(t.text)


# ---------------------------------------------------------------------------
# Ordered-calculus terms

_L_KEYWORDS = ("ax", "lamr", "laml", "appr", "appl", "unit", "letu", "pair", "lett", "sw")


def _l_term(p: _Parser) -> lk.Derivation:
    t = p.peek()
    if t.kind == "(":
        p.next()
        out = _l_term(p)
        p.expect(")")
        return out
    if t.kind != "ident":
        p.fail("a term")
    kw = t.text
    if kw == "ax":
        p.next()
        return lk.Ax(p.fprimary())
    if kw == "lamr":
        p.next()
        return lk.IOver(_l_primary(p))
    if kw == "laml":
        p.next()
        return lk.IUnder(_l_primary(p))
    if kw == "appr":
        p.next()
        return lk.EOver(_l_primary(p), _l_primary(p))
    if kw == "appl":
        p.next()
        return lk.EUnder(_l_primary(p), _l_primary(p))
    if kw == "unit":
        p.next()
        return lk.IUnit()
    if kw == "letu":
        p.next()
        k = p.index()
        return lk.EUnit(k, _l_primary(p), _l_primary(p))
    if kw == "pair":
        p.next()
        return lk.ITensor(_l_primary(p), _l_primary(p))
    if kw == "lett":
        p.next()
        k = p.index()
        return lk.ETensor(k, _l_primary(p), _l_primary(p))
    p.fail("a term keyword")


def _l_primary(p: _Parser) -> lk.Derivation:
    t = p.peek()
    if t.kind == "(":
        p.next()
        out = _l_term(p)
        p.expect(")")
        return out
    if t.kind == "ident" and t.text == "unit":
        p.next()
        return lk.IUnit()
    p.fail("'(' or 'unit'")


def _l_nf(p: _Parser) -> nfm.Nf:
    t = p.peek()
    if t.kind == "(":
        p.next()
        out = _l_nf(p)
        p.expect(")")
        return out
    if t.kind != "ident":
        p.fail("a normal form")
    kw = t.text
    if kw == "lamr":
        p.next()
        return nfm.NIOver(_l_nf_primary(p))
    if kw == "laml":
        p.next()
        return nfm.NIUnder(_l_nf_primary(p))
    if kw == "unit":
        p.next()
        return nfm.NIUnit()
    if kw == "letu":
        p.next()
        k = p.index()
        return nfm.NEUnit(k, _l_ne_primary(p), _l_nf_primary(p))
    if kw == "pair":
        p.next()
        return nfm.NITensor(_l_nf_primary(p), _l_nf_primary(p))
    if kw == "lett":
        p.next()
        k = p.index()
        return nfm.NETensor(k, _l_ne_primary(p), _l_nf_primary(p))
    if kw == "sw":
        p.next()
        return nfm.NSw(_l_ne_primary(p))
    p.fail("a normal-form keyword")


def _l_nf_primary(p: _Parser) -> nfm.Nf:
    t = p.peek()
    if t.kind == "(":
        p.next()
        out = _l_nf(p)
        p.expect(")")
        return out
    if t.kind == "ident" and t.text == "unit":
        p.next()
        return nfm.NIUnit()
    p.fail("'(' or 'unit'")


def _l_ne(p: _Parser) -> nfm.Ne:
    t = p.peek()
    if t.kind == "(":
        p.next()
        out = _l_ne(p)
        p.expect(")")
        return out
    if t.kind != "ident":
        p.fail("a neutral")
    kw = t.text
    if kw == "ax":
        p.next()
        return nfm.NAx(p.fprimary())
    if kw == "appr":
        p.next()
        return nfm.NEOver(_l_ne_primary(p), _l_nf_primary(p))
    if kw == "appl":
        p.next()
        return nfm.NEUnder(_l_nf_primary(p), _l_ne_primary(p))
    p.fail("a neutral keyword")


def _l_ne_primary(p: _Parser) -> nfm.Ne:
    t = p.peek()
    if t.kind == "(":
        p.next()
        out = _l_ne(p)
        p.expect(")")
        return out
    p.fail("'('")


# ---------------------------------------------------------------------------
# Named-binder terms (mill and dill share machinery)

def _m_term(p: _Parser, dill: bool):
    t = p.peek()
    if t.kind == "(":
        p.next()
        out = _m_term(p, dill)
        p.expect(")")
        return out
    if t.kind != "ident":
        p.fail("a term")
    kw = t.text
    mk = dl if dill else ml
    if kw == "ax":
        p.next()
        x = p.name()
        p.expect(":")
        f = p.formula()
        return dl.DAxLin(x, f) if dill else ml.MAx(x, f)
    if kw == "axint" and dill:
        p.next()
        x = p.name()
        p.expect(":")
        return dl.DAxInt(x, p.formula())
    if kw == "lam":
        p.next()
        x = p.name()
        p.expect(".")
        body = _m_primary(p, dill)
        return dl.DILolli(x, body) if dill else ml.MILolli(x, body)
    if kw == "app":
        p.next()
        a = _m_primary(p, dill)
        b = _m_primary(p, dill)
        return dl.DELolli(a, b) if dill else ml.MELolli(a, b)
    if kw == "unit":
        p.next()
        return dl.DIUnit() if dill else ml.MIUnit()
    if kw == "letu":
        p.next()
        a = _m_primary(p, dill)
        b = _m_primary(p, dill)
        return dl.DEUnit(a, b) if dill else ml.MEUnit(a, b)
    if kw == "pair":
        p.next()
        a = _m_primary(p, dill)
        b = _m_primary(p, dill)
        return dl.DITensor(a, b) if dill else ml.MITensor(a, b)
    if kw == "lett":
        p.next()
        p.expect("[")
        x = p.name()
        p.expect(",")
        y = p.name()
        p.expect("]")
        a = _m_primary(p, dill)
        b = _m_primary(p, dill)
        return dl.DETensor(x, y, a, b) if dill else ml.METensor(x, y, a, b)
    if kw == "bang" and dill:
        p.next()
        return dl.DIBang(_m_primary(p, dill))
    if kw == "letb" and dill:
        p.next()
        p.expect("[")
        x = p.name()
        p.expect("]")
        return dl.DEBang(x, _m_primary(p, dill), _m_primary(p, dill))
    p.fail("a term keyword")


def _m_primary(p: _Parser, dill: bool):
    t = p.peek()
    if t.kind == "(":
        p.next()
        out = _m_term(p, dill)
        p.expect(")")
        return out
    if t.kind == "ident" and t.text == "unit":
        p.next()
        return dl.DIUnit() if dill else ml.MIUnit()
    p.fail("'(' or 'unit'")


def _m_nf(p: _Parser, dill: bool):
    t = p.peek()
    if t.kind == "(":
        p.next()
        out = _m_nf(p, dill)
        p.expect(")")
        return out
    if t.kind != "ident":
        p.fail("a normal form")
    kw = t.text
    if kw == "lam":
        p.next()
        x = p.name()
        p.expect(".")
        body = _m_nf_primary(p, dill)
        return dl.DNILolli(x, body) if dill else ml.MNILolli(x, body)
    if kw == "unit":
        p.next()
        return dl.DNIUnit() if dill else ml.MNIUnit()
    if kw == "letu":
        p.next()
        a = _m_ne_primary(p, dill)
        b = _m_nf_primary(p, dill)
        return dl.DNEUnit(a, b) if dill else ml.MNEUnit(a, b)
    if kw == "pair":
        p.next()
        a = _m_nf_primary(p, dill)
        b = _m_nf_primary(p, dill)
        return dl.DNITensor(a, b) if dill else ml.MNITensor(a, b)
    if kw == "lett":
        p.next()
        p.expect("[")
        x = p.name()
        p.expect(",")
        y = p.name()
        p.expect("]")
        a = _m_ne_primary(p, dill)
        b = _m_nf_primary(p, dill)
        return dl.DNETensor(x, y, a, b) if dill else ml.MNETensor(x, y, a, b)
    if kw == "sw":
        p.next()
        ne = _m_ne_primary(p, dill)
        return dl.DNSw(ne) if dill else ml.MNSw(ne)
    if kw == "bang" and dill:
        p.next()
        return dl.DNIBang(_m_nf_primary(p, dill))
    if kw == "letb" and dill:
        p.next()
        p.expect("[")
        x = p.name()
        p.expect("]")
        return dl.DNEBang(x, _m_ne_primary(p, dill), _m_nf_primary(p, dill))
    p.fail("a normal-form keyword")


def _m_nf_primary(p: _Parser, dill: bool):
    t = p.peek()
    if t.kind == "(":
        p.next()
        out = _m_nf(p, dill)
        p.expect(")")
        return out
    if t.kind == "ident" and t.text == "unit":
        p.next()
        return dl.DNIUnit() if dill else ml.MNIUnit()
    p.fail("'(' or 'unit'")


def _m_ne(p: _Parser, dill: bool):
    t = p.peek()
    if t.kind == "(":
        p.next()
        out = _m_ne(p, dill)
        p.expect(")")
        return out
    if t.kind != "ident":
        p.fail("a neutral")
    kw = t.text
    if kw == "ax":
        p.next()
        x = p.name()
        p.expect(":")
        f = p.formula()
        return dl.DNAxLin(x, f) if dill else ml.MNAx(x, f)
    if kw == "axint" and dill:
        p.next()
        x = p.name()
        p.expect(":")
        return dl.DNAxInt(x, p.formula())
    if kw == "app":
        p.next()
        a = _m_ne_primary(p, dill)
        b = _m_nf_primary(p, dill)
        return dl.DNELolli(a, b) if dill else ml.MNELolli(a, b)
    p.fail("a neutral keyword")


def _m_ne_primary(p: _Parser, dill: bool):
    t = p.peek()
    if t.kind == "(":
        p.next()
        out = _m_ne(p, dill)
        p.expect(")")
        return out
    p.fail("'('")


# ---------------------------------------------------------------------------
# Public parse entry points

def _run_parser(src: str, calculus: str, entry):
    p = _Parser(src, calculus)
    out = entry(p)
    if p.peek().kind != "eof":
        p.fail("end of input")
    return out


def parse_formula(src: str, calculus: str = "lambek") -> Formula:
    return _run_parser(src, calculus, lambda p: p.formula())


def parse_derivation(src: str, calculus: str = "lambek"):
    if calculus == "lambek":
        return _run_parser(src, calculus, _l_term)
    return _run_parser(src, calculus, lambda p: _m_term(p, calculus == "dill"))


def parse_nf(src: str, calculus: str = "lambek"):
    if calculus == "lambek":
        return _run_parser(src, calculus, _l_nf)
    return _run_parser(src, calculus, lambda p: _m_nf(p, calculus == "dill"))


# ---------------------------------------------------------------------------
# Printing

_PREC = {Tensor: 3, Over: 2, Under: 2, Lolli: 1, Bang: 4}


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), 5)


def print_formula(f: Formula) -> str:
    match f:
        case Atom(name):
            return name
        case Unit():
            return "I"
        case Tensor(l, r):
            ls = print_formula(l) if _prec(l) >= 3 else f"({print_formula(l)})"
            rs = print_formula(r) if _prec(r) > 3 else f"({print_formula(r)})"
            return f"{ls}*{rs}"
        case Over(result, arg):
            ls = print_formula(result) if _prec(result) > 2 else f"({print_formula(result)})"
            rs = print_formula(arg) if _prec(arg) > 2 else f"({print_formula(arg)})"
            return f"{ls}/{rs}"
        case Under(arg, result):
            ls = print_formula(arg) if _prec(arg) > 2 else f"({print_formula(arg)})"
            rs = print_formula(result) if _prec(result) > 2 else f"({print_formula(result)})"
            return f"{ls}\\{rs}"
        case Lolli(arg, result):
            ls = print_formula(arg) if _prec(arg) > 1 else f"({print_formula(arg)})"
            rs = print_formula(result) if _prec(result) >= 1 else f"({print_formula(result)})"
            return f"{ls}-o{rs}"
        case Bang(inner):
            s = print_formula(inner) if _prec(inner) >= 4 else f"({print_formula(inner)})"
            return f"!{s}"
    raise TypeError(f"not a formula: {f!r}")


def _fprim(f: Formula) -> str:
    s = print_formula(f)
    return s if isinstance(f, (Atom, Unit, Bang)) else f"({s})"


def _paren(s: str) -> str:
    return s if s == "unit" else f"({s})"


def print_derivation(t) -> str:
    match t:
        case lk.Ax(f):
            return f"ax {_fprim(f)}"
        case lk.IOver(b):
            return f"lamr {_paren(print_derivation(b))}"
        case lk.IUnder(b):
            return f"laml {_paren(print_derivation(b))}"
        case lk.EOver(f, a):
            return f"appr {_paren(print_derivation(f))} {_paren(print_derivation(a))}"
        case lk.EUnder(a, f):
            return f"appl {_paren(print_derivation(a))} {_paren(print_derivation(f))}"
        case lk.IUnit():
            return "unit"
        case lk.EUnit(k, s, c):
            return f"letu[{k}] {_paren(print_derivation(s))} {_paren(print_derivation(c))}"
        case lk.ITensor(l, r):
            return f"pair {_paren(print_derivation(l))} {_paren(print_derivation(r))}"
        case lk.ETensor(k, s, c):
            return f"lett[{k}] {_paren(print_derivation(s))} {_paren(print_derivation(c))}"
        # named calculi
        case ml.MAx(x, f):
            return f"ax {x} : {print_formula(f)}"
        case ml.MILolli(x, b):
            return f"lam {x}. {_paren(print_derivation(b))}"
        case ml.MELolli(f, a):
            return f"app {_paren(print_derivation(f))} {_paren(print_derivation(a))}"
        case ml.MIUnit():
            return "unit"
        case ml.MEUnit(s, c):
            return f"letu {_paren(print_derivation(s))} {_paren(print_derivation(c))}"
        case ml.MITensor(l, r):
            return f"pair {_paren(print_derivation(l))} {_paren(print_derivation(r))}"
        case ml.METensor(x, y, s, c):
            return f"lett[{x},{y}] {_paren(print_derivation(s))} {_paren(print_derivation(c))}"
        case dl.DAxLin(x, f):
            return f"ax {x} : {print_formula(f)}"
        case dl.DAxInt(x, f):
            return f"axint {x} : {print_formula(f)}"
        case dl.DILolli(x, b):
            return f"lam {x}. {_paren(print_derivation(b))}"
        case dl.DELolli(f, a):
            return f"app {_paren(print_derivation(f))} {_paren(print_derivation(a))}"
        case dl.DIUnit():
            return "unit"
        case dl.DEUnit(s, c):
            return f"letu {_paren(print_derivation(s))} {_paren(print_derivation(c))}"
        case dl.DITensor(l, r):
            return f"pair {_paren(print_derivation(l))} {_paren(print_derivation(r))}"
        case dl.DETensor(x, y, s, c):
            return f"lett[{x},{y}] {_paren(print_derivation(s))} {_paren(print_derivation(c))}"
        case dl.DIBang(b):
            return f"bang {_paren(print_derivation(b))}"
        case dl.DEBang(x, s, c):
            return f"letb[{x}] {_paren(print_derivation(s))} {_paren(print_derivation(c))}"
    raise TypeError(f"not a derivation: {t!r}")


def print_nf(n) -> str:
    match n:
        case nfm.NSw(ne):
            return f"sw {_paren(print_nf(ne))}"
        case nfm.NAx(f):
            return f"ax {_fprim(f)}"
        case nfm.NEOver(f, a):
            return f"appr {_paren(print_nf(f))} {_paren(print_nf(a))}"
        case nfm.NEUnder(a, f):
            return f"appl {_paren(print_nf(a))} {_paren(print_nf(f))}"
        case nfm.NIOver(b):
            return f"lamr {_paren(print_nf(b))}"
        case nfm.NIUnder(b):
            return f"laml {_paren(print_nf(b))}"
        case nfm.NIUnit():
            return "unit"
        case nfm.NEUnit(k, s, c):
            return f"letu[{k}] {_paren(print_nf(s))} {_paren(print_nf(c))}"
        case nfm.NITensor(l, r):
            return f"pair {_paren(print_nf(l))} {_paren(print_nf(r))}"
        case nfm.NETensor(k, s, c):
            return f"lett[{k}] {_paren(print_nf(s))} {_paren(print_nf(c))}"
        # named calculi
        case ml.MNSw(ne):
            return f"sw {_paren(print_nf(ne))}"
        case ml.MNAx(x, f):
            return f"ax {x} : {print_formula(f)}"
        case ml.MNELolli(f, a):
            return f"app {_paren(print_nf(f))} {_paren(print_nf(a))}"
        case ml.MNILolli(x, b):
            return f"lam {x}. {_paren(print_nf(b))}"
        case ml.MNIUnit():
            return "unit"
        case ml.MNEUnit(s, c):
            return f"letu {_paren(print_nf(s))} {_paren(print_nf(c))}"
        case ml.MNITensor(l, r):
            return f"pair {_paren(print_nf(l))} {_paren(print_nf(r))}"
        case ml.MNETensor(x, y, s, c):
            return f"lett[{x},{y}] {_paren(print_nf(s))} {_paren(print_nf(c))}"
        case dl.DNSw(ne):
            return f"sw {_paren(print_nf(ne))}"
        case dl.DNAxLin(x, f):
            return f"ax {x} : {print_formula(f)}"
        case dl.DNAxInt(x, f):
            return f"axint {x} : {print_formula(f)}"
        case dl.DNELolli(f, a):
            return f"app {_paren(print_nf(f))} {_paren(print_nf(a))}"
        case dl.DNILolli(x, b):
            return f"lam {x}. {_paren(print_nf(b))}"
        case dl.DNIUnit():
            return "unit"
        case dl.DNEUnit(s, c):
            return f"letu {_paren(print_nf(s))} {_paren(print_nf(c))}"
        case dl.DNITensor(l, r):
            return f"pair {_paren(print_nf(l))} {_paren(print_nf(r))}"
        case dl.DNETensor(x, y, s, c):
            return f"lett[{x},{y}] {_paren(print_nf(s))} {_paren(print_nf(c))}"
        case dl.DNIBang(b):
            return f"bang {_paren(print_nf(b))}"
        case dl.DNEBang(x, s, c):
            return f"letb[{x}] {_paren(print_nf(s))} {_paren(print_nf(c))}"
    raise TypeError(f"not a normal form: {n!r}")


def print_sequent(seq) -> str:
    match seq:
        case lk.Sequent(ante, succ):
            left = ", ".join(print_formula(f) for f in ante)
            return f"{left} |- {print_formula(succ)}" if left else f"|- {print_formula(succ)}"
        case ml.MSequent(cxt, succ):
            left = ", ".join(f"{x} : {print_formula(f)}" for x, f in cxt)
            return f"{left} |- {print_formula(succ)}" if left else f"|- {print_formula(succ)}"
        case dl.DSequent(icxt, lcxt, succ):
            ip = ", ".join(f"{x} : {print_formula(f)}" for x, f in icxt)
            lp = ", ".join(f"{x} : {print_formula(f)}" for x, f in lcxt)
            return f"{ip} ; {lp} |- {print_formula(succ)}"
    raise TypeError(f"not a sequent: {seq!r}")
