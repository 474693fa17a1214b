"""Polynomial text format: one term per line, ``coeff  e1 e2 ... eN``; ``#`` starts a comment.

Coefficients are integers or ``a/b`` rationals.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .fields import QQ
from .polynomial import Polynomial


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def parse_polynomial(text: str | Iterable[str], field=QQ, nvars: int | None = None,
                     first_line: int = 1) -> Polynomial:
    lines = text.splitlines() if isinstance(text, str) else list(text)
    terms: dict = {}
    for offset, raw in enumerate(lines):
        lineno = first_line + offset
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        try:
            coeff = Fraction(fields[0])
            exps = tuple(int(x) for x in fields[1:])
        except ValueError as exc:
            raise ParseError(f"cannot parse term {line!r}", lineno) from exc
        if "." in fields[0] or "e" in fields[0].lower():
            raise ParseError("floating-point coefficient", lineno)
        if any(e < 0 for e in exps):
            raise ParseError("negative exponent", lineno)
        if nvars is None:
            nvars = len(exps)
        elif len(exps) != nvars:
            raise ParseError(f"expected {nvars} exponents, got {len(exps)}", lineno)
        c = field(coeff)
        F = field
        v = F.add(terms.get(exps, F.zero), c)
        if v == 0:
            terms.pop(exps, None)
        else:
            terms[exps] = v
    if nvars is None:
        raise ParseError("empty polynomial block needs an explicit variable count")
    return Polynomial(nvars, terms, field)


def format_polynomial(f: Polynomial) -> str:
    out = []
    for e, c in f.sorted_terms():
        out.append(f"{c}  " + " ".join(str(x) for x in e))
    return "\n".join(out) + ("\n" if out else "")
