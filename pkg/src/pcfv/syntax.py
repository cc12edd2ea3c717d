"""Abstract syntax, parser and pretty-printer for fine-grained call-by-value PCF.

Variables are stored as de Bruijn indices (0 = innermost binder).  Surface
names ride along on binders and variables for printing only; they take no
part in equality or hashing, so ``==`` on terms is alpha-equivalence.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union


# ---------------------------------------------------------------------------
# Types

@dataclass(frozen=True)
class Type:
    pass


@dataclass(frozen=True)
class Nat(Type):
    pass


@dataclass(frozen=True)
class Zero(Type):
    """The empty type."""


@dataclass(frozen=True)
class One(Type):
    """The unit type."""


@dataclass(frozen=True)
class TyConst(Type):
    name: str


@dataclass(frozen=True)
class Sum(Type):
    left: Type
    right: Type


@dataclass(frozen=True)
class Prod(Type):
    left: Type
    right: Type


@dataclass(frozen=True)
class Arrow(Type):
    dom: Type
    cod: Type


NAT, ZERO, ONE = Nat(), Zero(), One()


def is_ground(ty: Type) -> bool:
    return isinstance(ty, (Nat, TyConst))


def type_contains(ty: Type, pred) -> bool:
    if pred(ty):
        return True
    if isinstance(ty, (Sum, Prod)):
        return type_contains(ty.left, pred) or type_contains(ty.right, pred)
    if isinstance(ty, Arrow):
        return type_contains(ty.dom, pred) or type_contains(ty.cod, pred)
    return False


# ---------------------------------------------------------------------------
# Terms

@dataclass(frozen=True, eq=False)
class Term:
    # `free` bounds the free de Bruijn indices: every free Var has index < free.
    _hash: int = field(init=False, repr=False, default=0)
    free: int = field(init=False, repr=False, default=0)

    _fields = ()

    def __post_init__(self):
        key = (type(self).__name__,) + tuple(getattr(self, f) for f in self._fields)
        object.__setattr__(self, "_hash", hash(key))
        object.__setattr__(self, "free", self._free())

    def _free(self) -> int:
        return max((getattr(self, f).free for f in self._fields
                    if isinstance(getattr(self, f), Term)), default=0)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or self._hash != other._hash:
            return False
        return all(getattr(self, f) == getattr(other, f) for f in self._fields)

    def __ne__(self, other):
        return not self == other

    def __str__(self):
        return pretty(self)


class Value(Term):
    pass


class Comp(Term):
    pass


@dataclass(frozen=True, eq=False, repr=False)
class Var(Value):
    index: int
    name: str = "x"
    _fields = ("index",)

    def _free(self):
        return self.index + 1

    def __repr__(self):
        return f"Var({self.index}, {self.name!r})"


@dataclass(frozen=True, eq=False)
class Unit(Value):
    pass


@dataclass(frozen=True, eq=False)
class ZeroLit(Value):
    pass


@dataclass(frozen=True, eq=False)
class Suc(Value):
    pred: Value
    _fields = ("pred",)

    def __eq__(self, other):
        # iterative so long numerals do not exhaust the recursion limit
        a, b = self, other
        while isinstance(a, Suc) and isinstance(b, Suc):
            if a is b:
                return True
            if a._hash != b._hash:
                return False
            a, b = a.pred, b.pred
        return a == b

    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=False)
class Inl(Value):
    value: Value
    ann: Optional[Type] = None   # full sum type, when written
    _fields = ("value", "ann")


@dataclass(frozen=True, eq=False)
class Inr(Value):
    value: Value
    ann: Optional[Type] = None
    _fields = ("value", "ann")


@dataclass(frozen=True, eq=False)
class Pair(Value):
    left: Value
    right: Value
    _fields = ("left", "right")


@dataclass(frozen=True, eq=False)
class Lam(Value):
    body: Comp
    name: str = "x"
    ann: Optional[Type] = None   # argument type
    _fields = ("body", "ann")

    def _free(self):
        return max(self.body.free - 1, 0)


@dataclass(frozen=True, eq=False)
class Rec(Value):
    """``rec f x. body``; the body sees f at index 1 and x at index 0."""
    body: Comp
    fname: str = "f"
    name: str = "x"
    ann: Optional[Arrow] = None  # full arrow type
    _fields = ("body", "ann")

    def _free(self):
        return max(self.body.free - 2, 0)


@dataclass(frozen=True, eq=False)
class Const(Value):
    name: str
    _fields = ("name",)


@dataclass(frozen=True, eq=False)
class Lit(Value):
    name: str
    tyconst: str
    _fields = ("name", "tyconst")


@dataclass(frozen=True, eq=False)
class Ret(Comp):
    value: Value
    _fields = ("value",)


@dataclass(frozen=True, eq=False)
class App(Comp):
    fun: Value
    arg: Value
    _fields = ("fun", "arg")


@dataclass(frozen=True, eq=False)
class Let(Comp):
    bound: Comp
    body: Comp
    name: str = "x"
    _fields = ("bound", "body")

    def _free(self):
        return max(self.bound.free, self.body.free - 1)


@dataclass(frozen=True, eq=False)
class CaseNat(Comp):
    scrut: Value
    if_zero: Comp
    if_suc: Comp
    name: str = "n"
    _fields = ("scrut", "if_zero", "if_suc")

    def _free(self):
        return max(self.scrut.free, self.if_zero.free, self.if_suc.free - 1)


@dataclass(frozen=True, eq=False)
class CaseSum(Comp):
    scrut: Value
    if_inl: Comp
    if_inr: Comp
    lname: str = "x"
    rname: str = "y"
    _fields = ("scrut", "if_inl", "if_inr")

    def _free(self):
        return max(self.scrut.free, self.if_inl.free - 1, self.if_inr.free - 1)


@dataclass(frozen=True, eq=False)
class CaseEmpty(Comp):
    scrut: Value
    ann: Optional[Type] = None   # result type, when written
    _fields = ("scrut", "ann")


@dataclass(frozen=True, eq=False)
class Fst(Comp):
    value: Value
    _fields = ("value",)


@dataclass(frozen=True, eq=False)
class Snd(Comp):
    value: Value
    _fields = ("value",)


ZERO_V = ZeroLit()
UNIT_V = Unit()


def numeral(n: int) -> Value:
    v: Value = ZERO_V
    for _ in range(n):
        v = Suc(v)
    return v


def numeral_value(v: Value) -> Optional[int]:
    """Inverse of `numeral`; None when v is not a closed numeral."""
    n = 0
    while isinstance(v, Suc):
        v, n = v.pred, n + 1
    return n if isinstance(v, ZeroLit) else None


def term_size(t: Term) -> int:
    """AST node count; type annotations and binder names do not count."""
    n = 0
    stack = [t]
    while stack:
        x = stack.pop()
        n += 1
        for f in x._fields:
            c = getattr(x, f)
            if isinstance(c, Term):
                stack.append(c)
    return n


# ---------------------------------------------------------------------------
# Signatures

@dataclass(frozen=True)
class TypeConstDecl:
    name: str
    values: tuple[str, ...]


@dataclass(frozen=True)
class TermConstDecl:
    """A partial function between ground types, given by its graph.

    Graph keys are ints for ``nat`` and literal names for type constants.
    """
    name: str
    src: Type
    tgt: Type
    graph: tuple[tuple[Union[int, str], Union[int, str]], ...]

    def lookup(self, key):
        for k, w in self.graph:
            if k == key:
                return w
        return None


@dataclass
class Signature:
    type_consts: dict[str, TypeConstDecl] = field(default_factory=dict)
    term_consts: dict[str, TermConstDecl] = field(default_factory=dict)

    def literal_type(self, name: str) -> Optional[str]:
        for tc in self.type_consts.values():
            if name in tc.values:
                return tc.name
        return None

    def ground_key(self, v: Value):
        """Semantic key of a closed ground value (int or literal name)."""
        if isinstance(v, Lit):
            return v.name
        return numeral_value(v)

    def ground_value(self, ty: Type, key) -> Value:
        if isinstance(ty, Nat):
            return numeral(int(key))
        return Lit(str(key), ty.name)


@dataclass(frozen=True)
class Definition:
    name: str
    type: Optional[Type]
    body: Comp


@dataclass
class Program:
    signature: Signature
    defs: list[Definition]

    def get(self, name: str) -> Definition:
        for d in self.defs:
            if d.name == name:
                return d
        raise KeyError(name)


# ---------------------------------------------------------------------------
# Lexer

KEYWORDS = {
    "typeconst", "const", "def", "nat", "unit", "empty", "zero", "suc", "inl",
    "inr", "fun", "rec", "ret", "let", "in", "fst", "snd", "case", "of", "absurd",
}

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>--[^\n]*)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>->|[{}(),:.|=+*])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str     # "ident" | "num" | "kw" | "sym" | "eof"
    text: str
    line: int
    col: int


class ParseError(Exception):
    def __init__(self, message, line=0, col=0, expected=()):
        self.line, self.col, self.expected = line, col, tuple(expected)
        where = f"{line}:{col}: " if line else ""
        exp = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"{where}{message}{exp}")


def tokenize(text: str) -> list[Token]:
    toks = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind, s = m.lastgroup, m.group()
        if kind == "ident" and s in KEYWORDS:
            kind = "kw"
        if kind not in ("ws", "comment"):
            toks.append(Token(kind, s, line, col))
        nl = s.count("\n")
        if nl:
            line += nl
            col = len(s) - s.rfind("\n")
        else:
            col += len(s)
        pos = m.end()
    toks.append(Token("eof", "<eof>", line, col))
    return toks


# ---------------------------------------------------------------------------
# Parser

_VALUE_START = {"zero", "suc", "inl", "inr", "fun", "rec"}


class _Parser:
    def __init__(self, text: str, sig: Optional[Signature] = None):
        self.toks = tokenize(text)
        self.pos = 0
        self.sig = sig if sig is not None else Signature()
        self.scope: list[str] = []

    # token helpers
    def peek(self, k=0) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        t = self.peek()
        return t.kind in ("kw", "sym") and t.text == text

    def advance(self) -> Token:
        t = self.peek()
        self.pos += 1
        return t

    def error(self, msg, *expected):
        t = self.peek()
        raise ParseError(f"{msg}, found {t.text!r}", t.line, t.col, expected)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error("syntax error", repr(text))
        return self.advance()

    def ident(self) -> str:
        t = self.peek()
        if t.kind != "ident":
            self.error("syntax error", "identifier")
        self.pos += 1
        return t.text

    # program level
    def program(self) -> Program:
        defs: list[Definition] = []
        while self.at("typeconst") or self.at("const"):
            self.decl()
        while self.at("def"):
            tok = self.advance()
            name = self.ident()
            if any(d.name == name for d in defs):
                raise ParseError(f"duplicate declaration {name!r}", tok.line, tok.col)
            ty = None
            if self.at(":"):
                self.advance()
                ty = self.type()
            self.expect("=")
            defs.append(Definition(name, ty, self.comp()))
        if self.peek().kind != "eof":
            self.error("syntax error", "'def'", "'typeconst'", "'const'")
        if not defs:
            self.error("program has no definitions", "'def'")
        return Program(self.sig, defs)

    def _check_fresh(self, name: str, tok: Token):
        sig = self.sig
        if name in sig.type_consts or name in sig.term_consts or sig.literal_type(name):
            raise ParseError(f"duplicate declaration {name!r}", tok.line, tok.col)

    def decl(self):
        tok = self.advance()
        if tok.text == "typeconst":
            ntok = self.peek()
            name = self.ident()
            self._check_fresh(name, ntok)
            self.expect("{")
            vals = []
            while True:
                vtok = self.peek()
                v = self.ident()
                if v in vals:
                    raise ParseError(f"duplicate declaration {v!r}", vtok.line, vtok.col)
                self._check_fresh(v, vtok)
                vals.append(v)
                if not self.at(","):
                    break
                self.advance()
            self.expect("}")
            self.sig.type_consts[name] = TypeConstDecl(name, tuple(vals))
            return
        ntok = self.peek()
        name = self.ident()
        self._check_fresh(name, ntok)
        self.expect(":")
        src = self.gtype()
        self.expect("->")
        tgt = self.gtype()
        self.expect("{")
        rows = []
        while not self.at("}"):
            k = self.ground_key(src)
            self.expect("->")
            w = self.ground_key(tgt)
            rows.append((k, w))
            if self.at(","):
                self.advance()
        self.expect("}")
        self.sig.term_consts[name] = TermConstDecl(name, src, tgt, tuple(rows))

    def gtype(self) -> Type:
        if self.at("nat"):
            self.advance()
            return NAT
        tok = self.peek()
        name = self.ident()
        if name not in self.sig.type_consts:
            raise ParseError(f"unknown type constant {name!r}", tok.line, tok.col)
        return TyConst(name)

    def ground_key(self, ty: Type):
        tok = self.advance()
        if isinstance(ty, Nat):
            if tok.kind == "num":
                return int(tok.text)
            if tok.text == "zero":
                return 0
            raise ParseError("expected a numeral", tok.line, tok.col, ("number",))
        if tok.kind != "ident" or tok.text not in self.sig.type_consts[ty.name].values:
            raise ParseError(f"unknown literal {tok.text!r} of type {ty.name}", tok.line, tok.col)
        return tok.text

    # types
    def type(self) -> Type:
        left = self.sum_type()
        if self.at("->"):
            self.advance()
            return Arrow(left, self.type())
        return left

    def sum_type(self) -> Type:
        ty = self.prod_type()
        while self.at("+"):
            self.advance()
            ty = Sum(ty, self.prod_type())
        return ty

    def prod_type(self) -> Type:
        ty = self.atom_type()
        while self.at("*"):
            self.advance()
            ty = Prod(ty, self.atom_type())
        return ty

    def atom_type(self) -> Type:
        t = self.peek()
        if self.at("nat"):
            self.advance()
            return NAT
        if self.at("unit"):
            self.advance()
            return ONE
        if self.at("empty"):
            self.advance()
            return ZERO
        if self.at("("):
            self.advance()
            ty = self.type()
            self.expect(")")
            return ty
        if t.kind == "ident":
            self.advance()
            if t.text not in self.sig.type_consts:
                raise ParseError(f"unknown type constant {t.text!r}", t.line, t.col)
            return TyConst(t.text)
        self.error("syntax error", "type")

    # binders
    def bind(self, *names: str):
        self.scope.extend(names)

    def unbind(self, n: int):
        del self.scope[len(self.scope) - n:]

    def binder(self) -> tuple[str, Optional[Type]]:
        if self.at("("):
            self.advance()
            x = self.ident()
            self.expect(":")
            ty = self.type()
            self.expect(")")
            return x, ty
        return self.ident(), None

    # values
    def starts_value(self) -> bool:
        t = self.peek()
        if t.kind in ("ident", "num"):
            return True
        return (t.kind == "kw" and t.text in _VALUE_START) or self.at("(")

    def value(self) -> Value:
        t = self.peek()
        if t.kind == "num":
            self.advance()
            return numeral(int(t.text))
        if t.kind == "ident":
            self.advance()
            return self.resolve(t)
        if self.at("zero"):
            self.advance()
            return ZERO_V
        if self.at("suc"):
            self.advance()
            return Suc(self.value())
        if self.at("inl"):
            self.advance()
            return Inl(self.value())
        if self.at("inr"):
            self.advance()
            return Inr(self.value())
        if self.at("fun"):
            self.advance()
            x, ann = self.binder()
            self.expect(".")
            self.bind(x)
            body = self.comp()
            self.unbind(1)
            return Lam(body, x, ann)
        if self.at("rec"):
            self.advance()
            f = self.ident()
            x, arg = self.binder()
            res = None
            if self.at(":"):
                self.advance()
                res = self.type()
            self.expect(".")
            ann = None
            if arg is not None and res is not None:
                ann = Arrow(arg, res)
            elif arg is not None or res is not None:
                self.error("rec needs both argument and result annotations, or neither")
            self.bind(f, x)
            body = self.comp()
            self.unbind(2)
            return Rec(body, f, x, ann)
        if self.at("("):
            self.advance()
            if self.at(")"):
                self.advance()
                return UNIT_V
            v = self.value()
            if self.at(","):
                self.advance()
                w = self.value()
                self.expect(")")
                return Pair(v, w)
            if self.at(":"):
                tok = self.advance()
                ty = self.type()
                self.expect(")")
                if isinstance(v, Inl):
                    return Inl(v.value, ty)
                if isinstance(v, Inr):
                    return Inr(v.value, ty)
                raise ParseError("type ascription is only allowed on inl/inr", tok.line, tok.col)
            self.expect(")")
            return v
        self.error("syntax error", "value")

    def resolve(self, t: Token) -> Value:
        name = t.text
        for i in range(len(self.scope) - 1, -1, -1):
            if self.scope[i] == name:
                return Var(len(self.scope) - 1 - i, name)
        tc = self.sig.literal_type(name)
        if tc is not None:
            return Lit(name, tc)
        if name in self.sig.term_consts:
            return Const(name)
        raise ParseError(f"unbound identifier or unknown literal {name!r}", t.line, t.col)

    # computations
    def comp(self) -> Comp:
        if self.at("ret"):
            self.advance()
            return Ret(self.value())
        if self.at("let"):
            self.advance()
            x = self.ident()
            self.expect("=")
            bound = self.comp()
            self.expect("in")
            self.bind(x)
            body = self.comp()
            self.unbind(1)
            return Let(bound, body, x)
        if self.at("fst"):
            self.advance()
            return Fst(self.value())
        if self.at("snd"):
            self.advance()
            return Snd(self.value())
        if self.at("absurd"):
            self.advance()
            scrut = self.value()
            ann = None
            if self.at(":"):
                self.advance()
                ann = self.type()
            return CaseEmpty(scrut, ann)
        if self.at("case"):
            self.advance()
            scrut = self.value()
            self.expect("of")
            self.expect("{")
            if self.at("zero"):
                self.advance()
                self.expect("->")
                z = self.comp()
                self.expect("|")
                self.expect("suc")
                n = self.ident()
                self.expect("->")
                self.bind(n)
                s = self.comp()
                self.unbind(1)
                self.expect("}")
                return CaseNat(scrut, z, s, n)
            if self.at("inl"):
                self.advance()
                x = self.ident()
                self.expect("->")
                self.bind(x)
                left = self.comp()
                self.unbind(1)
                self.expect("|")
                self.expect("inr")
                y = self.ident()
                self.expect("->")
                self.bind(y)
                right = self.comp()
                self.unbind(1)
                self.expect("}")
                return CaseSum(scrut, left, right, x, y)
            self.error("syntax error", "'zero'", "'inl'")
        if self.starts_value():
            f = self.value()
            if not self.starts_value():
                self.error("syntax error", "argument value")
            return App(f, self.value())
        self.error("syntax error", "computation")


def parse_program(text: str) -> Program:
    """Parse a ``.pcfv`` source text into its signature and definitions."""
    return _Parser(text).program()


def _parse_whole(text, sig, method, scope=()):
    p = _Parser(text, sig)
    p.scope = list(scope)
    out = getattr(p, method)()
    if p.peek().kind != "eof":
        p.error("trailing input", "<eof>")
    return out


def parse_comp(text: str, sig: Optional[Signature] = None, scope=()) -> Comp:
    return _parse_whole(text, sig, "comp", scope)


def parse_value(text: str, sig: Optional[Signature] = None, scope=()) -> Value:
    return _parse_whole(text, sig, "value", scope)


def parse_type(text: str, sig: Optional[Signature] = None) -> Type:
    return _parse_whole(text, sig, "type")


# ---------------------------------------------------------------------------
# Pretty-printer

def pretty_type(ty: Type, prec: int = 0) -> str:
    if isinstance(ty, Nat):
        return "nat"
    if isinstance(ty, One):
        return "unit"
    if isinstance(ty, Zero):
        return "empty"
    if isinstance(ty, TyConst):
        return ty.name
    if isinstance(ty, Arrow):
        s, p = f"{pretty_type(ty.dom, 1)} -> {pretty_type(ty.cod, 0)}", 0
    elif isinstance(ty, Sum):
        s, p = f"{pretty_type(ty.left, 1)} + {pretty_type(ty.right, 2)}", 1
    elif isinstance(ty, Prod):
        s, p = f"{pretty_type(ty.left, 2)} * {pretty_type(ty.right, 3)}", 2
    else:
        raise TypeError(f"not a type: {ty!r}")
    return f"({s})" if p < prec else s


class _Printer:
    def __init__(self, reserved=(), numerals=False):
        self.reserved = set(reserved) | KEYWORDS
        self.numerals = numerals
        self.names: list[str] = []

    def fresh(self, hint: str) -> str:
        base = hint if hint and hint not in KEYWORDS else "x"
        name, i = base, 0
        while name in self.reserved or name in self.names:
            i += 1
            name = f"{base}{i}"
        return name

    def var(self, v: Var) -> str:
        if v.index < len(self.names):
            return self.names[len(self.names) - 1 - v.index]
        return v.name  # free variable of an open term

    def under(self, hints, body_fn):
        # pick sequentially so two binders of one node never collide
        chosen = []
        for h in hints:
            n = self.fresh(h)
            chosen.append(n)
            self.names.append(n)
        out = body_fn(chosen)
        del self.names[len(self.names) - len(chosen):]
        return out

    def value(self, v: Value, atomic=False) -> str:
        if isinstance(v, Var):
            return self.var(v)
        if isinstance(v, Unit):
            return "()"
        if isinstance(v, ZeroLit):
            return "zero"
        if isinstance(v, Suc):
            n = numeral_value(v)
            if self.numerals and n is not None:
                return str(n)
            depth, base = 0, v
            while isinstance(base, Suc):
                depth, base = depth + 1, base.pred
            return "suc " * depth + self.value(base, True)
        if isinstance(v, Const) or isinstance(v, Lit):
            return v.name
        if isinstance(v, Pair):
            return f"({self.value(v.left)}, {self.value(v.right)})"
        if isinstance(v, (Inl, Inr)):
            kw = "inl" if isinstance(v, Inl) else "inr"
            s = f"{kw} {self.value(v.value, True)}"
            if v.ann is not None:
                return f"({s} : {pretty_type(v.ann)})"
            return s
        if isinstance(v, Lam):
            def body(ns):
                b = ns[0] if v.ann is None else f"({ns[0]} : {pretty_type(v.ann)})"
                return f"fun {b}. {self.comp(v.body)}"
            s = self.under([v.name], body)
            return f"({s})" if atomic else s
        if isinstance(v, Rec):
            def body(ns):
                if v.ann is None:
                    head = f"rec {ns[0]} {ns[1]}"
                else:
                    head = (f"rec {ns[0]} ({ns[1]} : {pretty_type(v.ann.dom)})"
                            f" : {pretty_type(v.ann.cod)}")
                return f"{head}. {self.comp(v.body)}"
            s = self.under([v.fname, v.name], body)
            return f"({s})" if atomic else s
        raise TypeError(f"not a value: {v!r}")

    def comp(self, t: Comp) -> str:
        if isinstance(t, Ret):
            return f"ret {self.value(t.value)}"
        if isinstance(t, App):
            return f"{self.value(t.fun, True)} {self.value(t.arg, True)}"
        if isinstance(t, Let):
            bound = self.comp(t.bound)
            return self.under([t.name], lambda ns: f"let {ns[0]} = {bound} in {self.comp(t.body)}")
        if isinstance(t, Fst):
            return f"fst {self.value(t.value, True)}"
        if isinstance(t, Snd):
            return f"snd {self.value(t.value, True)}"
        if isinstance(t, CaseEmpty):
            ann = "" if t.ann is None else f" : {pretty_type(t.ann)}"
            return f"absurd {self.value(t.scrut, True)}{ann}"
        if isinstance(t, CaseNat):
            scrut, z = self.value(t.scrut), self.comp(t.if_zero)
            s = self.under([t.name], lambda ns: f"suc {ns[0]} -> {self.comp(t.if_suc)}")
            return f"case {scrut} of {{ zero -> {z} | {s} }}"
        if isinstance(t, CaseSum):
            scrut = self.value(t.scrut)
            left = self.under([t.lname], lambda ns: f"inl {ns[0]} -> {self.comp(t.if_inl)}")
            right = self.under([t.rname], lambda ns: f"inr {ns[0]} -> {self.comp(t.if_inr)}")
            return f"case {scrut} of {{ {left} | {right} }}"
        raise TypeError(f"not a computation: {t!r}")


def _reserved(sig: Optional[Signature]) -> set[str]:
    if sig is None:
        return set()
    names = set(sig.term_consts)
    for tc in sig.type_consts.values():
        names.update(tc.values)
    return names


def pretty(term: Term, sig: Optional[Signature] = None, numerals: bool = False,
           scope: tuple = ()) -> str:
    """Render a term as ``.pcfv`` concrete syntax.

    Binder names are kept when possible and renamed only to avoid capture or a
    clash with a declared literal/constant, so the output always reparses to
    an alpha-equivalent term.
    """
    p = _Printer(_reserved(sig), numerals)
    p.names = list(scope)
    if isinstance(term, Value):
        return p.value(term)
    return p.comp(term)


def pretty_program(prog: Program) -> str:
    sig = prog.signature
    lines = []
    for tc in sig.type_consts.values():
        lines.append(f"typeconst {tc.name} {{ {', '.join(tc.values)} }}")
    for c in sig.term_consts.values():
        rows = " ".join(f"{k} -> {w}" for k, w in c.graph)
        lines.append(f"const {c.name} : {pretty_type(c.src)} -> {pretty_type(c.tgt)} {{ {rows} }}")
    for d in prog.defs:
        ann = f" : {pretty_type(d.type)}" if d.type is not None else ""
        lines.append(f"def {d.name}{ann} = {pretty(d.body, sig)}")
    return "\n".join(lines) + "\n"


def subterms(t: Term) -> Iterator[tuple[Term, int]]:
    """Yield (subterm, number of binders crossed) in pre-order."""
    stack = [(t, 0)]
    binders = {Lam: {"body": 1}, Rec: {"body": 2}, Let: {"body": 1},
               CaseNat: {"if_suc": 1}, CaseSum: {"if_inl": 1, "if_inr": 1}}
    while stack:
        x, depth = stack.pop()
        yield x, depth
        extra = binders.get(type(x), {})
        for f in reversed(x._fields):
            c = getattr(x, f)
            if isinstance(c, Term):
                stack.append((c, depth + extra.get(f, 0)))
