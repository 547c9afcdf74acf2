"""Text syntax for programs (.gdl), databases (.facts), choice files and
distribution tables (.dist.json).

Program grammar::

    rule    := body? "->" head "."
    body    := literal ("," literal)*
    literal := "not"? atom
    head    := atom-with-delta-terms | "false"
    delta   := IDENT "<" term ("," term)* ">" ("[" term ("," term)* "]")?

Variables start with an uppercase letter or ``?``.  Constants are integers,
decimals (read exactly, ``0.1`` is 1/10), fractions ``1/10``, lowercase
symbols or double-quoted strings.  ``%`` starts a comment.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .dist import BUILTINS, DistributionRegistry, table_distribution
from .errors import DistributionError, InputError, ParseError, SourceSpan
from .model import Atom, Const, Database, DeltaTerm, GProgram, GRule, GroundRule, Var, desugar_bot

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>%[^\n]*)
  | (?P<arrow>->)
  | (?P<num>-?\d+(?:\.\d+)?(?:/\d+)?)
  | (?P<str>"(?:[^"\\\n]|\\.)*")
  | (?P<var>\?[A-Za-z0-9_]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[(),.<>\[\]])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int

    def span(self, file: str) -> SourceSpan:
        return SourceSpan(file, self.line, self.col, self.col + max(len(self.text), 1) - 1)


def tokenize(text: str, file: str = "<input>") -> list:
    tokens, pos, line, line_start = [], 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", SourceSpan(file, line, col, col))
        kind = m.lastgroup
        if kind == "nl":
            line, line_start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, file: str, registry: Mapping | None):
        self.file = file
        self.tokens = tokenize(text, file)
        self.i = 0
        self.registry = registry

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        return ParseError(msg, tok.span(self.file))

    def at(self, text: str) -> bool:
        return self.tok.kind in ("punct", "arrow", "ident") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        tok = self.tok
        self.i += 1
        return tok

    def at_eof(self) -> bool:
        return self.tok.kind == "eof"

    # terms -------------------------------------------------------------
    def term(self, allow_delta: bool = False):
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return Const(parse_rational(tok.text))
        if tok.kind == "str":
            self.i += 1
            return Const(json.loads(tok.text))
        if tok.kind == "var":
            self.i += 1
            return Var(tok.text)
        if tok.kind == "ident":
            nxt = self.tokens[self.i + 1]
            if nxt.kind == "punct" and nxt.text == "<":
                if not allow_delta:
                    raise self.error("delta term outside a rule head")
                return self.delta_term()
            self.i += 1
            if tok.text[0].isupper():
                return Var(tok.text)
            if tok.text[0] == "_" or tok.text in ("not", "false"):
                raise self.error(f"{tok.text!r} cannot be used as a term", tok)
            return Const(tok.text)
        raise self.error(f"expected a term, found {tok.text or 'end of input'!r}")

    def delta_term(self) -> DeltaTerm:
        name_tok = self.tok
        self.i += 1
        self.expect("<")
        params = self.term_list(">")
        self.expect(">")
        sig = ()
        if self.at("["):
            self.i += 1
            sig = self.term_list("]")
            self.expect("]")
        if self.registry is not None:
            if name_tok.text not in self.registry:
                raise self.error(f"unknown distribution {name_tok.text!r}", name_tok)
            dim = self.registry[name_tok.text].dimension
            if len(params) != dim:
                raise self.error(f"{name_tok.text} takes {dim} parameter(s), got {len(params)}", name_tok)
            if params and all(isinstance(t, Const) and t.is_numeric for t in params):
                try:
                    self.registry[name_tok.text].support(params)
                except DistributionError as exc:
                    raise DistributionError(str(exc), name_tok.span(self.file)) from None
        if not params:
            raise self.error("a delta term needs at least one parameter", name_tok)
        return DeltaTerm(name_tok.text, tuple(params), tuple(sig))

    def term_list(self, closer: str, allow_delta: bool = False) -> list:
        out = []
        if self.at(closer):
            return out
        out.append(self.term(allow_delta))
        while self.at(","):
            self.i += 1
            out.append(self.term(allow_delta))
        return out

    def atom(self, allow_delta: bool = False) -> Atom:
        tok = self.tok
        if tok.kind != "ident" or tok.text in ("not", "false"):
            raise self.error(f"expected a predicate, found {tok.text or 'end of input'!r}")
        self.i += 1
        args = []
        if self.at("("):
            self.i += 1
            args = self.term_list(")", allow_delta)
            self.expect(")")
        return Atom(tok.text, tuple(args))

    # rules ---------------------------------------------------------------
    def rule(self) -> GRule:
        start = self.tok
        pos, neg = [], []
        if not self.at("->"):
            while True:
                if self.at("not"):
                    self.i += 1
                    neg.append(self.atom())
                else:
                    pos.append(self.atom())
                if self.at(","):
                    self.i += 1
                    continue
                break
        self.expect("->")
        if self.at("false"):
            self.i += 1
            head = None
        else:
            head = self.atom(allow_delta=True)
        self.expect(".")
        try:
            return GRule(tuple(pos), tuple(neg), head)
        except InputError as exc:
            raise type(exc)(str(exc), start.span(self.file)) from None

    def program(self) -> list:
        rules = []
        while not self.at_eof():
            rules.append(self.rule())
        return rules

    def fact(self) -> Atom:
        start = self.tok
        a = self.atom()
        self.expect(".")
        if not a.is_ground:
            raise ParseError(f"database fact {a} is not ground", start.span(self.file))
        return a


def parse_rational(text: str) -> Fraction:
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise ValueError("zero denominator")
        return Fraction(Fraction(num), int(den))
    return Fraction(text)


def parse_program(text: str, registry: Mapping | None = BUILTINS, file: str = "<program>",
                  desugar: bool = True) -> GProgram:
    """Parse a .gdl program.  ``false`` heads are desugared unless ``desugar=False``."""
    p = _Parser(text, file, registry)
    prog = GProgram(tuple(p.program()))
    return desugar_bot(prog) if desugar else prog


def parse_database(text: str, file: str = "<database>") -> Database:
    p = _Parser(text, file, None)
    facts = []
    while not p.at_eof():
        facts.append(p.fact())
    return Database(frozenset(facts))


def parse_atom(text: str) -> Atom:
    p = _Parser(text, "<atom>", None)
    a = p.atom()
    if not p.at_eof():
        raise p.error("trailing input after atom")
    return a


def parse_ground_rules(text: str, file: str = "<rules>") -> list:
    """Parse ground rules such as ``Active(1/2,1) -> Result(1/2,1,0).``"""
    p = _Parser(text, file, None)
    out = []
    while not p.at_eof():
        start = p.tok
        r = p.rule()
        if r.head is None:
            raise ParseError("ground rules cannot have a false head", start.span(file))
        try:
            out.append(GroundRule(r.pos, r.neg, r.head))
        except ValueError as exc:
            raise ParseError(str(exc), start.span(file)) from None
    return out


def parse_distributions(text: str, base: DistributionRegistry = BUILTINS) -> DistributionRegistry:
    """Load user categoricals from a .dist.json document and add them to ``base``."""
    try:
        doc = json.loads(text, parse_float=Fraction, parse_int=Fraction)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid distribution JSON: {exc.msg}",
                         SourceSpan("<distributions>", exc.lineno, exc.colno, exc.colno)) from None
    if not isinstance(doc, dict):
        raise DistributionError("distribution document must be a JSON object")
    dists = []
    for name, spec in doc.items():
        try:
            dim = int(spec["dimension"])
            rows = {}
            for row in spec["table"]:
                params = tuple(_json_rational(p) for p in row["params"])
                if params in rows:
                    raise DistributionError(f"{name}: duplicate row for parameters {list(params)}")
                rows[params] = [(_json_value(e["value"]), _json_rational(e["prob"])) for e in row["support"]]
        except (KeyError, TypeError) as exc:
            raise DistributionError(f"malformed entry for distribution {name!r}: {exc}") from None
        dists.append(table_distribution(name, dim, rows))
    return base.extend(dists)


def _json_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        try:
            return parse_rational(x.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise DistributionError(f"not a rational number: {x!r}")


def _json_value(x) -> Const:
    if isinstance(x, Fraction):
        return Const(x)
    if isinstance(x, str):
        tok = x.strip()
        if re.fullmatch(r"-?\d+(?:\.\d+)?(?:/\d+)?", tok):
            return Const(parse_rational(tok))
        return Const(x)
    raise DistributionError(f"invalid outcome value {x!r}")
