"""Description language: tokenizer, parser, printer and interpreter."""

from .interp import Env, Interpreter
from .lexer import Token, tokenize
from .parser import parse_program, parse_statement
from .syntax import print_program, print_statement
