"""Text formats for instances, weights, matchings and fractional points.

Instance:  ``<agent>: <n1> <n2> ...`` (most preferred first), ``#`` comments.
Weights:   ``<u> <v> <weight>`` with a nonnegative decimal or ``p/q``.
Matching:  ``<u> <v>``.
Point:     ``<u> <v> <p/q>``; absent coordinates are 0.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from fractions import Fraction

from .errors import InvalidInstance, ParseError
from .model import Edge, EdgeWeights, Matching, PreferenceSystem, as_matching, edge


def _data_lines(text: str) -> Iterator[tuple[int, str]]:
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _int(tok: str, no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an agent id, got {tok!r}", no) from None


def _rational(tok: str, no: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"expected a decimal or p/q number, got {tok!r}", no) from None


def parse_instance(text: str) -> PreferenceSystem:
    prefs: dict[int, list[int]] = {}
    for no, line in _data_lines(text):
        head, sep, tail = line.partition(":")
        if not sep:
            raise ParseError("expected '<agent>: <neighbours>'", no)
        a = _int(head.strip(), no)
        if a in prefs:
            raise ParseError(f"agent {a} listed twice", no)
        prefs[a] = [_int(t, no) for t in tail.split()]
    try:
        return PreferenceSystem(prefs)
    except InvalidInstance as exc:
        raise ParseError(str(exc)) from None


def format_instance(P: PreferenceSystem) -> str:
    return "".join(f"{a}:{''.join(f' {b}' for b in P.prefs(a))}\n" for a in P.agents)


def _edge_lines(text: str, width: int) -> Iterator[tuple[int, Edge, list[str]]]:
    for no, line in _data_lines(text):
        toks = line.split()
        if len(toks) != width:
            raise ParseError(f"expected {width} fields, got {len(toks)}", no)
        u, v = _int(toks[0], no), _int(toks[1], no)
        if u == v:
            raise ParseError(f"self-loop {u}-{v}", no)
        yield no, edge(u, v), toks[2:]


def parse_weights(text: str, P: PreferenceSystem) -> EdgeWeights:
    values: dict[Edge, Fraction] = {}
    for no, e, (tok,) in _edge_lines(text, 3):
        if not P.has_edge(*e):
            raise ParseError(f"edge {e[0]}-{e[1]} is not in the instance", no)
        if e in values:
            raise ParseError(f"edge {e[0]}-{e[1]} weighted twice", no)
        val = _rational(tok, no)
        if val < 0:
            raise ParseError(f"negative weight on {e[0]}-{e[1]}", no)
        values[e] = val
    return EdgeWeights(P, values)


def format_weights(w: EdgeWeights) -> str:
    return "".join(f"{u} {v} {w[(u, v)]}\n" for u, v in w)


def parse_matching(text: str, P: PreferenceSystem) -> Matching:
    pairs = [e for _, e, _ in _edge_lines(text, 2)]
    try:
        return as_matching(P, pairs)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def format_matching(M: Iterable[Edge]) -> str:
    return "".join(f"{u} {v}\n" for u, v in sorted(M))


def parse_point(text: str) -> dict[Edge, Fraction]:
    """Coordinates as a dict; pair it with a domain via FractionalPoint."""
    coords: dict[Edge, Fraction] = {}
    for no, e, (tok,) in _edge_lines(text, 3):
        if e in coords:
            raise ParseError(f"coordinate {e[0]}-{e[1]} given twice", no)
        coords[e] = _rational(tok, no)
    return coords


def format_point(coords: dict[Edge, Fraction]) -> str:
    return "".join(f"{u} {v} {x.numerator}/{x.denominator}\n" for (u, v), x in sorted(coords.items()) if x)
