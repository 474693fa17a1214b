"""Text format for a single quadratic-ratio claim.

::

    # comment
    variables: p0 sl su
    p0 <= sl
    N: (0,0,4) (0,1,8) (1,1,4)
    D: (0,0,1) (0,1,2)
    bound: 3/2
    strict: no
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..algebra.textio import ParseError
from .cone import ConeRegion
from .forms import QuadForm
from .ratio import QuadraticRatioClaim

_TERM = re.compile(r"([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?([A-Za-z_]\w*)?")
_TRIPLE = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*,\s*([+-]?\d+(?:/\d+)?)\s*\)")


def _linear(text: str, names: tuple, line: int) -> list:
    coeffs = [Fraction(0)] * len(names)
    s = text.strip()
    if not s:
        raise ParseError("empty side of constraint", line)
    pos = 0
    first = True
    while pos < len(s):
        while pos < len(s) and s[pos] == " ":
            pos += 1
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse linear expression {text!r}", line)
        sign, num, name = m.groups()
        if sign is None and not first:
            raise ParseError(f"missing operator in {text!r}", line)
        if num is None and name is None:
            raise ParseError(f"cannot parse linear expression {text!r}", line)
        c = Fraction(num) if num else Fraction(1)
        if sign == "-":
            c = -c
        if name is None:
            if c != 0:
                raise ParseError("constraints must be homogeneous", line)
        else:
            if name not in names:
                raise ParseError(f"unknown variable {name!r}", line)
            coeffs[names.index(name)] += c
        pos = m.end()
        first = False
    return coeffs


def _triples(text: str, n: int, line: int) -> list:
    out = []
    rest = _TRIPLE.sub("", text).strip()
    if rest:
        raise ParseError(f"unexpected text {rest!r} in quadratic form", line)
    for i, j, c in _TRIPLE.findall(text):
        i, j = int(i), int(j)
        if not (0 <= i < n and 0 <= j < n):
            raise ParseError(f"index ({i}, {j}) out of range", line)
        out.append((i, j, Fraction(c)))
    return out


def parse_claim(text: str) -> QuadraticRatioClaim:
    names = None
    region = None
    N, D, bound, strict, label = [], [], None, False, ""
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition(":")
        key = key.strip().lower()
        words = line.split()
        if (sep and key == "variables") or words[0] == "variables":
            names = tuple(val.split()) if sep else tuple(words[1:])
            if not names or len(set(names)) != len(names):
                raise ParseError("variables must be distinct and nonempty", lineno)
            region = ConeRegion.orthant(names)
            continue
        if names is None:
            raise ParseError("the variables line must come first", lineno)
        if "<=" in line and not sep:
            lhs, rhs = line.split("<=", 1)
            region = region.le(_linear(lhs, names, lineno), _linear(rhs, names, lineno), label=line)
        elif sep and key == "n":
            N += _triples(val, len(names), lineno)
        elif sep and key == "d":
            D += _triples(val, len(names), lineno)
        elif sep and key == "bound":
            try:
                bound = Fraction(val.strip())
            except ValueError:
                raise ParseError(f"bad bound {val.strip()!r}", lineno) from None
            if "." in val:
                raise ParseError("bound must be an integer or a/b rational", lineno)
        elif sep and key == "strict":
            v = val.strip().lower()
            if v not in ("yes", "no"):
                raise ParseError("strict must be yes or no", lineno)
            strict = v == "yes"
        elif sep and key == "label":
            label = val.strip()
        else:
            raise ParseError(f"unrecognized line {raw.strip()!r}", lineno)
    if names is None:
        raise ParseError("missing variables line")
    if bound is None:
        raise ParseError("missing bound")
    n = len(names)
    return QuadraticRatioClaim(region, QuadForm.from_triples(n, N), QuadForm.from_triples(n, D),
                               bound, strict, label)


def format_claim(claim: QuadraticRatioClaim) -> str:
    region = claim.region
    names = region.names
    lines = [f"variables: {' '.join(names)}"]
    for g in region.extra:
        neg = [-c if c < 0 else 0 for c in g.coeffs]
        pos = [c if c > 0 else 0 for c in g.coeffs]
        lines.append(f"{_side(neg, names)} <= {_side(pos, names)}")

    def trip(q):
        return " ".join(f"({i},{j},{c})" for i, j, c in q.triples())

    lines += [f"N: {trip(claim.N)}", f"D: {trip(claim.D)}", f"bound: {claim.bound}",
              f"strict: {'yes' if claim.strict else 'no'}"]
    if claim.label:
        lines.append(f"label: {claim.label}")
    return "\n".join(lines) + "\n"


def _side(coeffs, names) -> str:
    parts = [(v if c == 1 else f"{c}*{v}") for c, v in zip(coeffs, names) if c != 0]
    return " + ".join(parts) if parts else "0"
