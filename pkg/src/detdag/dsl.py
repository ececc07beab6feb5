"""Textual description language for deterministic-variable DAGs.

The language is line-oriented and diff-friendly::

    dag "diet" {
      # parts and their whole
      node X1 [label="carbohydrate intake"]
      node X2 [label="protein intake"]
      X := sum(X1, X2)
      node Y
      X1 -> Y [coef=0.4]
      X2 -> Y
    }

Statements either declare a probabilistic node (``node ID``), define a
deterministic node (``ID := form(...)``, which implicitly declares ID and its
incoming deterministic arcs), or add a probabilistic arc (``A -> B``).
Attributes ride in square brackets: ``label`` (string), ``time``, ``mean``,
``sd`` (numbers), ``fixed`` (true/false) on nodes and ``coef`` on arcs.
Numbers are plain decimals with optional sign and fraction; ``#`` starts a
comment.  Forward references are resolved in a second pass, so statement
order is free.

``parse`` returns a fully validated :class:`~detdag.graph.Dag` or raises
:class:`DslError` carrying every positioned :class:`ParseError` found.
``serialize`` emits the canonical form; parse-serialize-parse is identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .graph import (
    AggMean,
    AggPrev,
    Dag,
    Difference,
    EdgeDef,
    FunctionalForm,
    NodeDef,
    Power,
    Product,
    Ratio,
    Scale,
    SimAttrs,
    Sum,
    Threshold,
    _fmt_number,
    validate,
)

__all__ = ["ParseError", "DslError", "parse", "try_parse", "serialize"]


@dataclass(frozen=True)
class ParseError:
    line: int
    column: int
    message: str
    snippet: str
    category: str = "syntax"  # lexical | syntax | semantic

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"


class DslError(ValueError):
    """Parse failure; ``errors`` holds every positioned problem found."""

    def __init__(self, errors: list[ParseError]):
        self.errors = errors
        super().__init__("; ".join(str(e) for e in errors))


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

_PUNCT = {"{", "}", "[", "]", "(", ")", ",", "="}


@dataclass(frozen=True)
class _Token:
    kind: str  # ident | string | number | punct | assign | arrow | eof
    text: str
    line: int
    column: int


class _Lexer:
    def __init__(self, source: str):
        self.source = source
        self.lines = source.split("\n")
        self.errors: list[ParseError] = []

    def snippet(self, line: int) -> str:
        if 1 <= line <= len(self.lines):
            return self.lines[line - 1]
        return ""

    def tokens(self) -> list[_Token]:
        out: list[_Token] = []
        i, line, col = 0, 1, 1
        src = self.source
        n = len(src)
        while i < n:
            c = src[i]
            if c == "\n":
                i += 1
                line += 1
                col = 1
                continue
            if c in " \t\r":
                i += 1
                col += 1
                continue
            if c == "#":
                while i < n and src[i] != "\n":
                    i += 1
                continue
            start_col = col
            if c == ":" and src[i : i + 2] == ":=":
                out.append(_Token("assign", ":=", line, start_col))
                i += 2
                col += 2
                continue
            if c == "-" and src[i : i + 2] == "->":
                out.append(_Token("arrow", "->", line, start_col))
                i += 2
                col += 2
                continue
            if c in _PUNCT:
                out.append(_Token("punct", c, line, start_col))
                i += 1
                col += 1
                continue
            if c == '"':
                j = i + 1
                while j < n and src[j] not in '"\n':
                    j += 1
                if j >= n or src[j] == "\n":
                    self.errors.append(
                        ParseError(line, start_col, "unterminated string", self.snippet(line), "lexical")
                    )
                    text = src[i + 1 : j]
                    i = j
                    col = start_col + (j - i)
                else:
                    text = src[i + 1 : j]
                    col += j + 1 - i
                    i = j + 1
                out.append(_Token("string", text, line, start_col))
                continue
            if c.isdigit() or (c in "+-." and _starts_number(src, i)):
                j = i
                if src[j] in "+-":
                    j += 1
                while j < n and src[j].isdigit():
                    j += 1
                if j < n and src[j] == ".":
                    j += 1
                    while j < n and src[j].isdigit():
                        j += 1
                text = src[i:j]
                if text in {"+", "-", ".", "+.", "-."}:
                    self.errors.append(
                        ParseError(line, start_col, f"malformed number {text!r}", self.snippet(line), "lexical")
                    )
                else:
                    out.append(_Token("number", text, line, start_col))
                col += j - i
                i = j
                continue
            if c.isalpha() or c == "_":
                j = i
                while j < n and (src[j].isalnum() or src[j] == "_"):
                    j += 1
                out.append(_Token("ident", src[i:j], line, start_col))
                col += j - i
                i = j
                continue
            self.errors.append(
                ParseError(line, start_col, f"unexpected character {c!r}", self.snippet(line), "lexical")
            )
            i += 1
            col += 1
        out.append(_Token("eof", "", line, col))
        return out


def _starts_number(src: str, i: int) -> bool:
    j = i
    if src[j] in "+-":
        j += 1
    if j < len(src) and src[j] == ".":
        j += 1
    return j < len(src) and src[j].isdigit()


# ---------------------------------------------------------------------------
# Statement AST
# ---------------------------------------------------------------------------

_FORM_NAMES = {
    "sum",
    "product",
    "diff",
    "ratio",
    "power",
    "scale",
    "threshold",
    "aggmean",
    "aggprev",
}

_NODE_ATTR_KEYS = {"label", "time", "mean", "sd", "fixed"}
_DEF_ATTR_KEYS = {"label", "time", "fixed"}
_EDGE_ATTR_KEYS = {"coef"}


@dataclass
class _FormAst:
    name: str
    ident_args: list[_Token]
    numbers: list[float]


@dataclass
class _Stmt:
    kind: str  # node | def | edge
    token: _Token  # the leading identifier token (position anchor)
    ident: str
    form: Optional[_FormAst] = None
    dst: Optional[_Token] = None
    attrs: Optional[dict[str, object]] = None


class _Parser:
    def __init__(self, source: str):
        self.lexer = _Lexer(source)
        self.toks = self.lexer.tokens()
        self.pos = 0
        self.errors: list[ParseError] = list(self.lexer.errors)

    # -- token plumbing ------------------------------------------------------

    def peek(self) -> _Token:
        return self.toks[self.pos]

    def advance(self) -> _Token:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def error(self, tok: _Token, message: str, category: str = "syntax") -> None:
        self.errors.append(
            ParseError(tok.line, tok.column, message, self.lexer.snippet(tok.line), category)
        )

    def expect(self, kind: str, text: Optional[str] = None) -> Optional[_Token]:
        t = self.peek()
        if t.kind == kind and (text is None or t.text == text):
            return self.advance()
        want = text or kind
        got = t.text or t.kind
        self.error(t, f"expected {want!r}, found {got!r}")
        return None

    def sync_statement(self) -> None:
        """Skip to the next line (or closing brace) after a bad statement."""
        bad_line = self.peek().line
        while True:
            t = self.peek()
            if t.kind == "eof" or t.line > bad_line:
                return
            if t.kind == "punct" and t.text == "}":
                return
            self.advance()

    # -- grammar -------------------------------------------------------------

    def parse_dag(self) -> tuple[str, list[_Stmt]]:
        self.expect("ident", "dag")
        name_tok = self.peek()
        name = "unnamed"
        if name_tok.kind in ("string", "ident"):
            name = self.advance().text
        else:
            self.error(name_tok, "expected graph name after 'dag'")
        self.expect("punct", "{")
        stmts: list[_Stmt] = []
        while True:
            t = self.peek()
            if t.kind == "eof":
                self.error(t, "missing closing '}'")
                break
            if t.kind == "punct" and t.text == "}":
                self.advance()
                break
            before = self.pos
            stmt = self.parse_stmt()
            if stmt is not None:
                stmts.append(stmt)
            else:
                if self.pos == before:
                    self.advance()  # guarantee progress on garbage
                self.sync_statement()
        t = self.peek()
        if t.kind != "eof":
            self.error(t, f"unexpected trailing input {t.text!r}")
        return name, stmts

    def parse_stmt(self) -> Optional[_Stmt]:
        t = self.peek()
        if t.kind == "ident" and t.text == "node":
            self.advance()
            ident = self.expect("ident")
            if ident is None:
                return None
            attrs = self.parse_attrs()
            return _Stmt("node", ident, ident.text, attrs=attrs)
        if t.kind == "ident":
            ident = self.advance()
            nxt = self.peek()
            if nxt.kind == "assign":
                self.advance()
                form = self.parse_form()
                if form is None:
                    return None
                attrs = self.parse_attrs()
                return _Stmt("def", ident, ident.text, form=form, attrs=attrs)
            if nxt.kind == "arrow":
                self.advance()
                dst = self.expect("ident")
                if dst is None:
                    return None
                attrs = self.parse_attrs()
                return _Stmt("edge", ident, ident.text, dst=dst, attrs=attrs)
            self.error(nxt, f"expected ':=' or '->' after {ident.text!r}")
            return None
        self.error(t, f"expected statement, found {t.text or t.kind!r}")
        return None

    def parse_form(self) -> Optional[_FormAst]:
        t = self.peek()
        if t.kind != "ident" or t.text not in _FORM_NAMES:
            self.error(t, f"expected a form name {sorted(_FORM_NAMES)}, found {t.text or t.kind!r}")
            return None
        name = self.advance().text
        if self.expect("punct", "(") is None:
            return None
        shapes = {
            "sum": ("i+",),
            "product": ("i+",),
            "diff": ("i", "i"),
            "ratio": ("i", "i"),
            "power": ("i", "n"),
            "scale": ("i", "n"),
            "threshold": ("i", "n"),
            "aggmean": ("i", "i"),
            "aggprev": ("i", "n", "i"),
        }[name]
        idents: list[_Token] = []
        numbers: list[float] = []
        for k, shape in enumerate(shapes):
            if k > 0 and self.expect("punct", ",") is None:
                return None
            if shape == "n":
                num = self.expect("number")
                if num is None:
                    return None
                numbers.append(float(num.text))
            else:
                ident = self.expect("ident")
                if ident is None:
                    return None
                idents.append(ident)
                if shape == "i+":
                    while self.peek().kind == "punct" and self.peek().text == ",":
                        self.advance()
                        extra = self.expect("ident")
                        if extra is None:
                            return None
                        idents.append(extra)
                    if len(idents) < 2:
                        self.error(ident, f"{name} needs at least two arguments")
                        return None
        if self.expect("punct", ")") is None:
            return None
        return _FormAst(name, idents, numbers)

    def parse_attrs(self) -> Optional[dict[str, object]]:
        t = self.peek()
        if not (t.kind == "punct" and t.text == "["):
            return None
        self.advance()
        attrs: dict[str, object] = {}
        while True:
            key = self.expect("ident")
            if key is None:
                return attrs
            val_ok = self.expect("punct", "=")
            if val_ok is None:
                return attrs
            v = self.peek()
            value: object
            if v.kind == "number":
                value = float(self.advance().text)
            elif v.kind == "string":
                value = self.advance().text
            elif v.kind == "ident" and v.text in ("true", "false"):
                value = self.advance().text == "true"
            else:
                self.error(v, f"expected attribute value, found {v.text or v.kind!r}")
                return attrs
            if key.text in attrs:
                self.error(key, f"attribute {key.text!r} given twice", "semantic")
            attrs[key.text] = value
            attrs.setdefault("__tokens__", {})[key.text] = key  # type: ignore[index]
            nxt = self.peek()
            if nxt.kind == "punct" and nxt.text == ",":
                self.advance()
                continue
            self.expect("punct", "]")
            return attrs


# ---------------------------------------------------------------------------
# Semantic pass and graph assembly
# ---------------------------------------------------------------------------


def _build_form(ast: _FormAst) -> FunctionalForm:
    ids = [t.text for t in ast.ident_args]
    if ast.name == "sum":
        return Sum(tuple(ids))
    if ast.name == "product":
        return Product(tuple(ids))
    if ast.name == "diff":
        return Difference(ids[0], ids[1])
    if ast.name == "ratio":
        return Ratio(ids[0], ids[1])
    if ast.name == "power":
        return Power(ids[0], ast.numbers[0])
    if ast.name == "scale":
        return Scale(ids[0], ast.numbers[0])
    if ast.name == "threshold":
        return Threshold(ids[0], ast.numbers[0])
    if ast.name == "aggmean":
        return AggMean(ids[0], ids[1])
    return AggPrev(ids[0], ast.numbers[0], ids[1])


class _Assembler:
    def __init__(self, parser: _Parser, name: str, stmts: list[_Stmt]):
        self.parser = parser
        self.name = name
        self.stmts = stmts
        self.anchor: dict[str, _Stmt] = {}

    def err(self, tok: _Token, message: str) -> None:
        self.parser.error(tok, message, "semantic")

    def check_attr_keys(self, stmt: _Stmt, allowed: set[str], what: str) -> None:
        if not stmt.attrs:
            return
        tokens = stmt.attrs.get("__tokens__", {})
        for key in list(stmt.attrs):
            if key == "__tokens__":
                continue
            if key not in allowed:
                tok = tokens.get(key, stmt.token)  # type: ignore[union-attr]
                self.err(tok, f"attribute {key!r} not allowed on {what}")
                del stmt.attrs[key]
                continue
            val = stmt.attrs[key]
            if key in ("time", "mean", "sd", "coef") and not isinstance(val, float):
                tok = tokens.get(key, stmt.token)  # type: ignore[union-attr]
                self.err(tok, f"attribute {key!r} must be a number")
                del stmt.attrs[key]
            if key == "label" and not isinstance(val, str):
                tok = tokens.get(key, stmt.token)  # type: ignore[union-attr]
                self.err(tok, f"attribute {key!r} must be a string")
                del stmt.attrs[key]
            if key == "fixed" and not isinstance(val, bool):
                tok = tokens.get(key, stmt.token)  # type: ignore[union-attr]
                self.err(tok, f"attribute {key!r} must be true or false")
                del stmt.attrs[key]

    def assemble(self) -> Optional[Dag]:
        # First pass: collect declarations; 'node' may pre-declare a node that
        # a later ':=' turns deterministic.
        node_stmts: dict[str, _Stmt] = {}
        def_stmts: dict[str, _Stmt] = {}
        order: list[str] = []
        for stmt in self.stmts:
            if stmt.kind == "node":
                self.check_attr_keys(stmt, _NODE_ATTR_KEYS, "a node declaration")
                if stmt.ident in node_stmts:
                    self.err(stmt.token, f"node {stmt.ident!r} declared twice")
                    continue
                node_stmts[stmt.ident] = stmt
                if stmt.ident not in self.anchor:
                    self.anchor[stmt.ident] = stmt
                    order.append(stmt.ident)
            elif stmt.kind == "def":
                self.check_attr_keys(stmt, _DEF_ATTR_KEYS, "a deterministic definition")
                if stmt.ident in def_stmts:
                    self.err(stmt.token, f"duplicate definition of {stmt.ident!r}")
                    continue
                def_stmts[stmt.ident] = stmt
                if stmt.ident not in self.anchor:
                    self.anchor[stmt.ident] = stmt
                    order.append(stmt.ident)
            else:
                self.check_attr_keys(stmt, _EDGE_ATTR_KEYS, "an arc")

        declared = set(order)

        # Second pass: resolve identifier references.
        for stmt in self.stmts:
            if stmt.kind == "def" and stmt.ident in def_stmts and def_stmts[stmt.ident] is stmt:
                for tok in stmt.form.ident_args:  # type: ignore[union-attr]
                    if tok.text not in declared:
                        self.err(tok, f"unknown identifier {tok.text!r}")
            elif stmt.kind == "edge":
                if stmt.ident not in declared:
                    self.err(stmt.token, f"unknown identifier {stmt.ident!r}")
                if stmt.dst is not None and stmt.dst.text not in declared:
                    self.err(stmt.dst, f"unknown identifier {stmt.dst.text!r}")

        if self.parser.errors:
            return None

        nodes: list[NodeDef] = []
        for nid in order:
            merged: dict[str, object] = {}
            for src_stmt in (node_stmts.get(nid), def_stmts.get(nid)):
                if src_stmt is not None and src_stmt.attrs:
                    merged.update(
                        {k: v for k, v in src_stmt.attrs.items() if k != "__tokens__"}
                    )
            dstmt = def_stmts.get(nid)
            nstmt = node_stmts.get(nid)
            if dstmt is not None:
                form = _build_form(dstmt.form)  # type: ignore[arg-type]
                if nstmt is not None and nstmt.attrs:
                    for key in ("mean", "sd"):
                        if key in nstmt.attrs:
                            tokens = nstmt.attrs.get("__tokens__", {})
                            self.err(
                                tokens.get(key, nstmt.token),  # type: ignore[union-attr]
                                f"deterministic node {nid!r} cannot carry {key!r}",
                            )
                            merged.pop(key, None)
            else:
                form = None
            mean = merged.get("mean")
            sd = merged.get("sd")
            sim = (
                SimAttrs(mean, sd)  # type: ignore[arg-type]
                if (mean is not None or sd is not None)
                else None
            )
            nodes.append(
                NodeDef(
                    nid,
                    label=merged.get("label"),  # type: ignore[arg-type]
                    form=form,
                    time=merged.get("time"),  # type: ignore[arg-type]
                    sim=sim,
                    fixed=bool(merged.get("fixed", False)),
                )
            )

        # Edges: deterministic arcs ride with their definition statement,
        # probabilistic arcs with their own statements, in source order.
        edge_list: list[EdgeDef] = []
        edge_anchor: dict[tuple[str, str], _Stmt] = {}
        for stmt in self.stmts:
            if stmt.kind == "def" and def_stmts.get(stmt.ident) is stmt:
                form = _build_form(stmt.form)  # type: ignore[arg-type]
                for arg in form.arguments():
                    e = EdgeDef(arg, stmt.ident, deterministic=True)
                    edge_list.append(e)
                    edge_anchor.setdefault((e.src, e.dst), stmt)
            elif stmt.kind == "edge":
                coef = None
                if stmt.attrs and "coef" in stmt.attrs:
                    coef = stmt.attrs["coef"]
                e = EdgeDef(stmt.ident, stmt.dst.text, coef=coef)  # type: ignore[union-attr]
                edge_list.append(e)
                edge_anchor.setdefault((e.src, e.dst), stmt)

        dag = Dag(self.name, tuple(nodes), tuple(edge_list))

        for v in validate(dag):
            stmt = None
            if "->" in v.location:
                src, dst = v.location.split("->", 1)
                stmt = edge_anchor.get((src, dst))
            if stmt is None:
                stmt = self.anchor.get(v.location)
            tok = stmt.token if stmt is not None else _Token("eof", "", 1, 1)
            self.err(tok, f"{v.code}: {v.message}")

        if self.parser.errors:
            return None
        return dag


def try_parse(source: str) -> tuple[Optional[Dag], list[ParseError]]:
    """Parse, collecting every error instead of raising."""
    parser = _Parser(source)
    name, stmts = parser.parse_dag()
    if parser.errors:
        return None, _dedup(parser.errors)
    dag = _Assembler(parser, name, stmts).assemble()
    return dag, _dedup(parser.errors)


def parse(source: str) -> Dag:
    """Parse DSL text into a validated Dag; raise DslError on any problem."""
    dag, errors = try_parse(source)
    if dag is None:
        raise DslError(errors or [ParseError(1, 1, "empty input", "", "syntax")])
    return dag


def _dedup(errors: list[ParseError]) -> list[ParseError]:
    seen: set[tuple] = set()
    out = []
    for e in sorted(errors, key=lambda e: (e.line, e.column)):
        key = (e.line, e.column, e.message)
        if key not in seen:
            seen.add(key)
            out.append(e)
    return out


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def serialize(dag: Dag) -> str:
    """Emit the canonical DSL text for a graph.

    Nodes appear first in declaration order (probabilistic ones as ``node``
    statements, deterministic ones as definitions), then probabilistic arcs
    in declaration order.  Deterministic arcs are implied by definitions and
    not written.  ``parse(serialize(d))`` is structurally identical to ``d``.
    """
    lines = [f'dag "{dag.name}" {{']
    for n in dag.nodes:
        attrs = []
        if n.label is not None:
            _check_text(n.label, f"label of {n.id!r}")
            attrs.append(f'label="{n.label}"')
        if n.time is not None:
            attrs.append(f"time={_fmt_number(n.time)}")
        if n.fixed:
            attrs.append("fixed=true")
        if n.sim is not None:
            if n.sim.mean is not None:
                attrs.append(f"mean={_fmt_number(n.sim.mean)}")
            if n.sim.sd is not None:
                attrs.append(f"sd={_fmt_number(n.sim.sd)}")
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        if n.deterministic:
            lines.append(f"  {n.id} := {n.form.dsl()}{suffix}")
        else:
            lines.append(f"  node {n.id}{suffix}")
    for e in dag.edges:
        if e.deterministic:
            continue
        suffix = f" [coef={_fmt_number(e.coef)}]" if e.coef is not None else ""
        lines.append(f"  {e.src} -> {e.dst}{suffix}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _check_text(text: str, what: str) -> None:
    if '"' in text or "\n" in text:
        raise ValueError(f"{what} cannot contain quotes or newlines: {text!r}")
