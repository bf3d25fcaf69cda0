"""Tokenizer for the machine description language."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import LexError

KW, NAME, NUMBER, PUNCT = "kw", "name", "number", "punct"

_NUMBER = re.compile(r"-?\d+(?:\.\d*)?(?:[eE][+-]?\d+)?")
_NAME = re.compile(r"[A-Za-z0-9_]+")
_PUNCT = ("+=", ":", ",", "=", ";", ".", "*", "+", "(", ")", "[", "]")
_NAME_CHARS = set("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_")


@dataclass(frozen=True)
class Token:
    type: str
    text: str
    pos: tuple = field(compare=False)

    def __repr__(self):
        return f"{self.type}({self.text})"


def tokenize(text: str) -> list[Token]:
    tokens = []
    i, line, col = 0, 1, 1
    n = len(text)

    def advance(k):
        nonlocal i, line, col
        for ch in text[i:i + k]:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        i += k

    while i < n:
        ch = text[i]
        pos = (line, col)
        if ch in " \t\r\n":
            advance(1)
            continue
        if text.startswith("//", i):
            end = text.find("\n", i)
            advance((n if end < 0 else end) - i)
            continue
        if ch == "#":
            m = _NAME.match(text, i + 1)
            if not m:
                raise LexError("'#' must start a keyword", pos)
            tokens.append(Token(KW, m.group(), pos))
            advance(m.end() - i)
            continue
        if ch.isdigit() or ch == "-" and i + 1 < n and text[i + 1].isdigit():
            m = _NUMBER.match(text, i)
            if m and not (m.end() < n and text[m.end()] in _NAME_CHARS):
                tokens.append(Token(NUMBER, m.group(), pos))
                advance(m.end() - i)
                continue
            if ch.isdigit():
                m = _NAME.match(text, i)
                tokens.append(Token(NAME, m.group(), pos))
                advance(m.end() - i)
                continue
        if ch in _NAME_CHARS:
            m = _NAME.match(text, i)
            tokens.append(Token(NAME, m.group(), pos))
            advance(m.end() - i)
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                tokens.append(Token(PUNCT, p, pos))
                advance(len(p))
                break
        else:
            raise LexError(f"unexpected character {ch!r}", pos)
    return tokens
