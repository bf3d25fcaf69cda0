"""Recursive-descent parser producing :mod:`dmm.lang.syntax` statements.

Grammar (``;`` terminates every statement)::

    #kind NAME (, NAME)*
    #newcelltype NAME (#input KIND:FIELD)* (#output KIND:FIELD)+
    #neuron TYPE:CELL
    #neuron TYPE:ID FIELD:ID (, FIELD:ID)* = #transformof [FIELD:ID (, FIELD:ID)*]
    #stream KIND:ID = #neuroninput ID.FIELD
    #weight REF REF = NUMBER
    #updateweights TERMS += TERMS
    #updateweights TERMS += [TERMS] * [TERMS]
    #step [INT]    #show WHAT    #seed INT    #gc

    REF   := NAME:NAME:NAME | NAME.NAME | NAME
    TERMS := TERM (+ TERM)*
    TERM  := [COEF *] REF          COEF := NUMBER | ( NUMBER )
"""

from __future__ import annotations

from ..core import is_name
from ..errors import ParseError
from .lexer import KW, NAME, NUMBER, PUNCT, Token, tokenize
from .syntax import (
    SHOW_WORDS,
    Dotted,
    Gc,
    Ident,
    KindDecl,
    NeuronDecl,
    NeuronName,
    NewCellType,
    Seed,
    Show,
    Step,
    StreamDecl,
    Term,
    Triple,
    UpdateWeightsStmt,
    Weight,
)


class Parser:
    def __init__(self, tokens: list[Token], eof_pos=(1, 1)):
        self.toks = tokens
        self.i = 0
        self.eof_pos = tokens[-1].pos if tokens else eof_pos

    # token helpers

    def peek(self, k=0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def pos(self):
        t = self.peek()
        return t.pos if t else self.eof_pos

    def error(self, expected):
        t = self.peek()
        found = "end of input" if t is None else repr(t.text)
        raise ParseError(f"expected {' or '.join(expected)}, found {found}", self.pos(), expected)

    def at(self, type_, text=None):
        t = self.peek()
        return t is not None and t.type == type_ and (text is None or t.text == text)

    def at_punct(self, text):
        return self.at(PUNCT, text)

    def expect_punct(self, text):
        if not self.at_punct(text):
            self.error([repr(text)])
        self.i += 1

    def expect_kw(self, word):
        if not self.at(KW, word):
            self.error([f"#{word}"])
        self.i += 1

    def name(self, what="name"):
        t = self.peek()
        # a bare digit string is a valid name but lexes as a number
        if t is not None and (t.type == NAME or t.type == NUMBER and is_name(t.text)):
            self.i += 1
            return t.text
        self.error([what])

    def number(self):
        if self.at_punct("+"):
            self.i += 1
        t = self.peek()
        if t is None or t.type != NUMBER:
            self.error(["number"])
        self.i += 1
        return float(t.text)

    def integer(self):
        t = self.peek()
        v = self.number()
        if not float(v).is_integer():
            raise ParseError(f"expected an integer, found {t.text!r}", t.pos, ["integer"])
        return int(v)

    # grammar

    def program(self):
        out = []
        while self.peek() is not None:
            out.append(self.statement())
        return out

    def statement(self):
        t = self.peek()
        if t.type != KW:
            self.error(["statement keyword"])
        handler = getattr(self, f"_stmt_{t.text}", None)
        if handler is None:
            raise ParseError(f"unknown keyword #{t.text}", t.pos, ["statement keyword"])
        self.i += 1
        stmt = handler(t.pos)
        self.expect_punct(";")
        return stmt

    def _stmt_kind(self, pos):
        names = [self.name("kind name")]
        while self.at_punct(","):
            self.i += 1
            names.append(self.name("kind name"))
        return KindDecl(tuple(names), pos=pos)

    def _stmt_newcelltype(self, pos):
        type_name = self.name("type name")
        inputs, outputs = [], []
        while self.at(KW, "input"):
            self.i += 1
            inputs.append(self._pair())
        while self.at(KW, "output"):
            self.i += 1
            outputs.append(self._pair())
        if not outputs:
            self.error(["#output"])
        return NewCellType(type_name, tuple(inputs), tuple(outputs), pos=pos)

    def _pair(self):
        a = self.name()
        self.expect_punct(":")
        return a, self.name()

    def _pairs(self):
        pairs = [self._pair()]
        while self.at_punct(","):
            self.i += 1
            pairs.append(self._pair())
        return tuple(pairs)

    def _stmt_neuron(self, pos):
        type_name, ident = self._pair()
        if self.at_punct(";"):
            return NeuronName(type_name, ident, pos=pos)
        outputs = self._pairs()
        self.expect_punct("=")
        self.expect_kw("transformof")
        inputs = () if self.at_punct(";") else self._pairs()
        return NeuronDecl(type_name, ident, outputs, inputs, pos=pos)

    def _stmt_stream(self, pos):
        kind_name, stream_id = self._pair()
        self.expect_punct("=")
        self.expect_kw("neuroninput")
        neuron = self.name("neuron identifier")
        self.expect_punct(".")
        return StreamDecl(kind_name, stream_id, neuron, self.name("field name"), pos=pos)

    def ref(self):
        a = self.name("port reference")
        if self.at_punct(":"):
            self.i += 1
            b = self.name("cell name")
            self.expect_punct(":")
            return Triple(a, b, self.name("field name"))
        if self.at_punct("."):
            self.i += 1
            return Dotted(a, self.name("field name"))
        return Ident(a)

    def _stmt_weight(self, pos):
        dst = self.ref()
        src = self.ref()
        self.expect_punct("=")
        return Weight(dst, src, self.number(), pos=pos)

    def term(self):
        coef = 1.0
        if self.at_punct("("):
            self.i += 1
            coef = self.number()
            self.expect_punct(")")
            self.expect_punct("*")
        elif self.at(NUMBER) and self.at_punct_at(1, "*"):
            coef = self.number()
            self.expect_punct("*")
        return Term(coef, self.ref())

    def terms(self):
        out = [self.term()]
        while self.at_punct("+"):
            self.i += 1
            out.append(self.term())
        return tuple(out)

    def _stmt_updateweights(self, pos):
        target = self.terms()
        self.expect_punct("+=")
        if self.at_punct("["):
            self.i += 1
            cols = self.terms()
            self.expect_punct("]")
            self.expect_punct("*")
            self.expect_punct("[")
            rows = self.terms()
            self.expect_punct("]")
            return UpdateWeightsStmt(target, cols, rows, pos=pos)
        return UpdateWeightsStmt(target, self.terms(), pos=pos)

    def _stmt_step(self, pos):
        if self.at_punct(";"):
            return Step(1, pos=pos)
        n = self.integer()
        if n < 0:
            raise ParseError("step count must be non-negative", pos, ["integer"])
        return Step(n, pos=pos)

    def _stmt_show(self, pos):
        t = self.peek()
        if t is not None and t.type == NAME and t.text in SHOW_WORDS and self.at_punct_at(1, ";"):
            self.i += 1
            return Show(t.text, pos=pos)
        return Show(self.ref(), pos=pos)

    def at_punct_at(self, k, text):
        t = self.peek(k)
        return t is not None and t.type == PUNCT and t.text == text

    def _stmt_seed(self, pos):
        return Seed(self.integer(), pos=pos)

    def _stmt_gc(self, pos):
        return Gc(pos=pos)


def parse_program(text: str):
    return Parser(tokenize(text)).program()


def parse_statement(text: str):
    stmts = parse_program(text)
    if len(stmts) != 1:
        raise ParseError(f"expected one statement, found {len(stmts)}", (1, 1), ["statement"])
    return stmts[0]
