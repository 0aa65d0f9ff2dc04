"""The ``.ptree`` text format, plus DOT and JSON exports.

The format is a small s-expression language::

    tree     := node
    node     := "(" IDENT branch+ ")" | "(leaf)"
    branch   := "(" IDENT prob child? ")"        ; no child means a leaf
    prob     := INT "/" INT | INT | DECIMAL
    IDENT    := [A-Za-z_~][A-Za-z0-9_~]*

Whitespace is insignificant and ``;`` starts a comment that runs to the end
of the line. Decimals are converted exactly (``0.25`` is ``1/4``).
Variable domains are inferred from the branches.
"""

from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
import json
import logging
import re
from typing import Any, Dict, List, NamedTuple, Optional, Tuple

import graphviz

from ptree.errors import ProbabilityFormatError, TreeSyntaxError, TreeValidationError
from ptree.tree import (
    LEAF,
    ONE,
    Assignment,
    Branch,
    Node,
    ProbabilityTree,
    Violation,
    validate,
)

# The keyword of an explicit leaf
_LEAF_KEYWORD: str = "leaf"
# Indentation used by serialize()
_INDENT: str = "  "

_TOKEN_RE: re.Pattern = re.compile(
    r"""
    (?P<space>[ \t\r\n]+)
    |(?P<comment>;[^\n]*)
    |(?P<open>\()
    |(?P<close>\))
    |(?P<number>-?[0-9.][0-9./]*)
    |(?P<ident>[A-Za-z_~][A-Za-z0-9_~]*)
    """,
    re.VERBOSE,
)
_RE_RATIO: re.Pattern = re.compile(r"^([0-9]+)/([0-9]+)$")
_RE_INTEGER: re.Pattern = re.compile(r"^[0-9]+$")
_RE_DECIMAL: re.Pattern = re.compile(r"^([0-9]+\.[0-9]*|\.[0-9]+)$")

_LOGGER: logging.Logger = logging.getLogger(__name__)


class _Token(NamedTuple):
    kind: str
    text: str
    line: int
    column: int


@dataclass(frozen=True)
class TreeDocument:
    """A parsed document.

    :param text: The source text
    :param tree: The validated tree
    :param spans: The (line, column) of the opening parenthesis of every
        internal node, keyed by the path to the node
    """

    text: str
    tree: ProbabilityTree
    spans: Dict[Assignment, Tuple[int, int]] = field(default_factory=dict)


def _tokenize(text: str) -> List[_Token]:
    tokens: List[_Token] = []
    position: int = 0
    line: int = 1
    line_start: int = 0
    while position < len(text):
        match = _TOKEN_RE.match(text, position)
        column: int = position - line_start + 1
        if not match:
            raise TreeSyntaxError(
                f"unexpected character {text[position]!r}", line, column
            )
        kind: str = str(match.lastgroup)
        if kind not in ("space", "comment"):
            tokens.append(_Token(kind, match.group(), line, column))
        newlines: int = match.group().count("\n")
        if newlines:
            line += newlines
            line_start = match.start() + match.group().rindex("\n") + 1
        position = match.end()
    column = position - line_start + 1
    tokens.append(_Token("end", "", line, column))
    return tokens


def _parse_probability(token: _Token) -> Fraction:
    text: str = token.text
    ratio = _RE_RATIO.match(text)
    if ratio:
        if int(ratio.group(2)) == 0:
            raise ProbabilityFormatError(
                f"'{text}' has a zero denominator", token.line, token.column
            )
        return Fraction(int(ratio.group(1)), int(ratio.group(2)))
    if _RE_INTEGER.match(text):
        return Fraction(int(text))
    if _RE_DECIMAL.match(text):
        return Fraction(Decimal(text))
    raise ProbabilityFormatError(
        f"'{text}' is not a rational probability", token.line, token.column
    )


class _Parser:
    """A recursive-descent parser over the token list."""

    def __init__(self, text: str):
        self.tokens: List[_Token] = _tokenize(text)
        self.index: int = 0
        self.spans: Dict[Assignment, Tuple[int, int]] = {}

    def peek(self) -> _Token:
        return self.tokens[self.index]

    def take(self, kind: str, expected: str) -> _Token:
        token: _Token = self.peek()
        if token.kind != kind:
            found: str = "end of input" if token.kind == "end" else repr(token.text)
            raise TreeSyntaxError(
                f"expected {expected}, found {found}", token.line, token.column
            )
        self.index += 1
        return token

    def document(self) -> Node:
        root: Node = self.node(())
        self.take("end", "end of input")
        return root

    def node(self, path: Assignment) -> Node:
        opening: _Token = self.take("open", "'('")
        variable: _Token = self.take("ident", "a variable name or 'leaf'")
        if variable.text == _LEAF_KEYWORD and self.peek().kind == "close":
            self.index += 1
            return LEAF

        self.spans[path] = (opening.line, opening.column)
        branches: List[Branch] = []
        while self.peek().kind == "open":
            branches.append(self.branch(variable.text, path))
        if not branches:
            token: _Token = self.peek()
            raise TreeSyntaxError(
                f"'{variable.text}' needs at least one branch", token.line, token.column
            )
        self.take("close", "')'")
        return Node(variable=variable.text, branches=tuple(branches))

    def branch(self, variable: str, path: Assignment) -> Branch:
        self.take("open", "'('")
        value: _Token = self.take("ident", "a value name")
        probability: Fraction = _parse_probability(
            self.take("number", "a probability")
        )
        child: Node = LEAF
        if self.peek().kind == "open":
            child = self.node(path + ((variable, value.text),))
        self.take("close", "')'")
        return Branch(value=value.text, prob=probability, child=child)


def parse_document(text: str) -> TreeDocument:
    """Parses and validates ``text``, keeping the source positions.

    :param text: A ``.ptree`` document
    """
    parser = _Parser(text)
    tree = ProbabilityTree(root=parser.document())

    violations: List[Violation] = validate(tree)
    if violations:
        first: Violation = violations[0]
        line, column = parser.spans.get(first.path, (1, 1))
        raise TreeValidationError(violations, f"line {line}, column {column}: {first}")

    _LOGGER.debug("Parsed tree over %s", ",".join(tree.variables))
    return TreeDocument(text=text, tree=tree, spans=parser.spans)


def parse(text: str) -> ProbabilityTree:
    """Parses and validates ``text``, returning the tree."""
    return parse_document(text).tree


def format_probability(probability: Fraction) -> str:
    """Lowest terms, integers without a denominator: ``1/2``, ``0``, ``1``."""
    return str(Fraction(probability))


def serialize(tree: ProbabilityTree) -> str:
    """Renders ``tree`` in canonical form: two-space indentation, rationals
    in lowest terms and branches in their authored order.
    """

    def _node(node: Node, depth: int) -> str:
        text: str = f"({node.variable}"
        for branch in node.branches:
            text += (
                f"\n{_INDENT * (depth + 1)}({branch.value}"
                f" {format_probability(branch.prob)}"
            )
            if not branch.child.is_leaf:
                text += " " + _node(branch.child, depth + 1)
            text += ")"
        return text + ")"

    if tree.root.is_leaf:
        return f"({_LEAF_KEYWORD})"
    return _node(tree.root, 0)


def export_dot(tree: ProbabilityTree) -> str:
    """A graphviz document with one graph node per tree node. Internal nodes
    are labelled with their variable, leaves with their path probability, and
    edges with ``value probability``.
    """
    graph = graphviz.Digraph(name="ptree")
    counter: List[int] = [0]

    def _node(node: Node, probability: Fraction) -> str:
        name: str = f"n{counter[0]}"
        counter[0] += 1
        if node.is_leaf:
            graph.node(name, label=format_probability(probability), shape="box")
            return name
        graph.node(name, label=str(node.variable))
        for branch in node.branches:
            child: str = _node(branch.child, probability * branch.prob)
            graph.edge(
                name, child, label=f"{branch.value} {format_probability(branch.prob)}"
            )
        return name

    _node(tree.root, ONE)
    return graph.source


def _json_node(node: Node) -> Optional[Dict[str, Any]]:
    if node.is_leaf:
        return None
    return {
        "var": node.variable,
        "branches": [
            {
                "value": branch.value,
                "prob": f"{branch.prob.numerator}/{branch.prob.denominator}",
                "child": _json_node(branch.child),
            }
            for branch in node.branches
        ],
    }


def export_json(tree: ProbabilityTree) -> str:
    """A JSON rendering. Rationals are ``"num/den"`` strings and leaves are
    ``null`` children. A single-leaf tree is ``{"var": null, "branches": []}``.
    """
    document = _json_node(tree.root) or {"var": None, "branches": []}
    return json.dumps(document, indent=2)
