"""Element literal grammar shared by the CLI, fixtures and both arithmetic engines.

    1                         identity
    x3 * x0^2 * z(1,4)^2      product of terms

Parsing yields raw letters in the order written; normalising is up to the
arithmetic engine that consumes them.
"""
from __future__ import annotations

import re
from typing import NamedTuple, Union


class X(NamedTuple):
    """Generator letter ``x_i^e``."""
    i: int
    e: int = 1


class Z(NamedTuple):
    """Commutator letter ``[x_r, x_s]^e``."""
    r: int
    s: int
    e: int = 1


Letter = Union[X, Z]

_TERM = re.compile(
    r"""^(?:x(?P<i>\d+)|z\(\s*(?P<r>\d+)\s*,\s*(?P<s>\d+)\s*\))(?:\^(?P<e>-?\d+))?$"""
)


def parse_word(text: str) -> tuple[Letter, ...]:
    text = text.strip()
    if text == "1":
        return ()
    if not text:
        raise ValueError("empty element literal")
    letters: list[Letter] = []
    for raw in text.split("*"):
        term = raw.strip()
        if term == "1":
            continue
        m = _TERM.match(term)
        if m is None:
            raise ValueError(f"bad term {term!r}")
        e = int(m["e"]) if m["e"] is not None else 1
        if m["i"] is not None:
            letters.append(X(int(m["i"]), e))
        else:
            r, s = int(m["r"]), int(m["s"])
            if r == s:
                raise ValueError(f"z({r},{s}) needs two distinct indices")
            letters.append(Z(r, s, e))
    return tuple(letters)


def _power(base: str, e: int) -> str:
    return base if e == 1 else f"{base}^{e}"


def format_word(central: dict, vector: dict) -> str:
    """Serialise a normal form: central terms by (r, s), then generators by i."""
    terms = [_power(f"z({r},{s})", e) for (r, s), e in sorted(central.items())]
    terms += [_power(f"x{i}", e) for i, e in sorted(vector.items())]
    return "*".join(terms) if terms else "1"
