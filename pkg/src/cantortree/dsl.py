"""Textual notation for class expressions.

Grammar (whitespace insignificant outside words):

    expr := "full" | "ex3" | "ex6" | "ahomdiag"
          | "point(" [word] "(" word ")*" ")" | "point(" word "*" ")"
          | "sft{" word ("," word)* "}"
          | "sep(" natlist ";" natlist ")"
          | "prod(" expr "," expr ")" | "dsum(" expr "," expr ")"
          | "union(" expr "," expr ")" | "cyl(" word "," expr ")"
          | "diag(" nat ")"
    word := [01]+ | "e"            -- "e" is the empty word

"ex3" expands to its union-of-cylinders form; all other names parse to
dedicated nodes.  parse and format_expr are mutually inverse on syntax trees.
"""

from __future__ import annotations

from .classes import (AHomDiag, ClassExpr, Cyl, Diag, DSum, Ex6, Full, Point,
                      Prod, Sep, Sft, Union, ex3)
from .errors import ParseError


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            raise ParseError(f"found {self.text[self.pos:self.pos + 1]!r}", self.pos, repr(ch))
        self.pos += 1

    def try_char(self, ch: str) -> bool:
        self.skip_ws()
        if self.pos < len(self.text) and self.text[self.pos] == ch:
            self.pos += 1
            return True
        return False

    def ident(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum()):
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected a name", start, "identifier")
        return self.text[start:self.pos]

    def word(self) -> str:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] == "e":
            self.pos += 1
            return ""
        while self.pos < len(self.text) and self.text[self.pos] in "01":
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected a binary word", start, "[01]+ or 'e'")
        return self.text[start:self.pos]

    def nat(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected a natural number", start, "digits")
        return int(self.text[start:self.pos])

    def natlist(self, stop: str) -> frozenset[int]:
        items: set[int] = set()
        if self.peek() in stop:
            return frozenset()
        items.add(self.nat())
        while self.try_char(","):
            items.add(self.nat())
        return frozenset(items)


def parse(text: str) -> ClassExpr:
    """Parse the notation above into an expression tree."""
    sc = _Scanner(text)
    expr = _parse_expr(sc)
    sc.skip_ws()
    if sc.pos != len(sc.text):
        raise ParseError("trailing input", sc.pos, "end of input")
    return expr


def _parse_expr(sc: _Scanner) -> ClassExpr:
    sc.skip_ws()
    at = sc.pos
    name = sc.ident()
    if name == "full":
        return Full()
    if name == "ex3":
        return ex3()
    if name == "ex6":
        return Ex6()
    if name == "ahomdiag":
        return AHomDiag()
    if name == "point":
        return _parse_point(sc)
    if name == "sft":
        sc.expect("{")
        blocks = {sc.word()}
        while sc.try_char(","):
            blocks.add(sc.word())
        sc.expect("}")
        try:
            return Sft(frozenset(blocks))
        except ValueError as exc:
            raise ParseError(str(exc), at) from exc
    if name == "sep":
        sc.expect("(")
        ones = sc.natlist(";")
        sc.expect(";")
        zeros = sc.natlist(")")
        sc.expect(")")
        try:
            return Sep(ones, zeros)
        except ValueError as exc:
            raise ParseError(str(exc), at) from exc
    if name in ("prod", "dsum", "union"):
        sc.expect("(")
        left = _parse_expr(sc)
        sc.expect(",")
        right = _parse_expr(sc)
        sc.expect(")")
        node = {"prod": Prod, "dsum": DSum, "union": Union}[name]
        return node(left, right)
    if name == "cyl":
        sc.expect("(")
        prefix = sc.word()
        sc.expect(",")
        body = _parse_expr(sc)
        sc.expect(")")
        return Cyl(prefix, body)
    if name == "diag":
        sc.expect("(")
        n = sc.nat()
        sc.expect(")")
        try:
            return Diag(n)
        except ValueError as exc:
            raise ParseError(str(exc), at) from exc
    raise ParseError(f"unknown name {name!r}", at, "an expression")


def _parse_point(sc: _Scanner) -> ClassExpr:
    sc.expect("(")
    at = sc.pos
    pre = ""
    if sc.peek() != "(":
        pre = sc.word()
        if sc.try_char("*"):
            sc.expect(")")
            pre, per = "", pre
            try:
                return Point(pre, per)
            except ValueError as exc:
                raise ParseError(str(exc), at) from exc
    sc.expect("(")
    per = sc.word()
    sc.expect(")")
    sc.expect("*")
    sc.expect(")")
    try:
        return Point(pre, per)
    except ValueError as exc:
        raise ParseError(str(exc), at) from exc


def _word_text(w: str) -> str:
    return w if w else "e"


def format_expr(e: ClassExpr) -> str:
    """Canonical text for an expression; parse(format_expr(e)) == e."""
    if isinstance(e, Full):
        return "full"
    if isinstance(e, Ex6):
        return "ex6"
    if isinstance(e, AHomDiag):
        return "ahomdiag"
    if isinstance(e, Point):
        if e.pre:
            return f"point({e.pre}({e.per})*)"
        return f"point({e.per}*)"
    if isinstance(e, Sft):
        return "sft{" + ",".join(sorted(e.blocks)) + "}"
    if isinstance(e, Sep):
        ones = ",".join(str(i) for i in sorted(e.ones))
        zeros = ",".join(str(i) for i in sorted(e.zeros))
        return f"sep({ones};{zeros})"
    if isinstance(e, Prod):
        return f"prod({format_expr(e.left)},{format_expr(e.right)})"
    if isinstance(e, DSum):
        return f"dsum({format_expr(e.left)},{format_expr(e.right)})"
    if isinstance(e, Union):
        return f"union({format_expr(e.left)},{format_expr(e.right)})"
    if isinstance(e, Cyl):
        return f"cyl({_word_text(e.prefix)},{format_expr(e.body)})"
    if isinstance(e, Diag):
        return f"diag({e.n})"
    raise TypeError(f"unknown expression node: {e!r}")


def builtin_classes() -> dict[str, ClassExpr]:
    """The named expressions the verification suites sweep over."""
    texts = {
        "full": "full",
        "point0": "point(0*)",
        "point0110": "point(01(10)*)",
        "sft00-11": "sft{00,11}",
        "sft00-01-11": "sft{00,01,11}",
        "sep03-1": "sep(0,3;1)",
        "sep-empty": "sep(;)",
        "cyl01-full": "cyl(01,full)",
        "union-cyl00-cyl1": "union(cyl(00,full),cyl(1,full))",
        "union-overlap": "union(cyl(0,full),full)",
        "dsum-full-point0": "dsum(full,point(0*))",
        "prod-full-sft": "prod(full,sft{00,11})",
        "diag2": "diag(2)",
        "diag3": "diag(3)",
        "ex3": "ex3",
        "ex6": "ex6",
        "ahomdiag": "ahomdiag",
    }
    return {name: parse(text) for name, text in texts.items()}
