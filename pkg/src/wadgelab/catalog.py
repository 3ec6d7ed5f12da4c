"""Canonical sets for the finite levels of the difference hierarchy.

``U_k`` is "at least k occurrences of letter 1".  The nested difference
``U_1 - (U_2 - (... U_n))`` is the set of words whose count of ones,
saturated at n, is odd; these are the sigma-complete sets.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

from .automata import OmegaAutomaton, Parity, complement, empty, full
from .errors import LevelOutOfRange
from .realfun import char_fun, constant, function_join, interleave, make_function, negate, scale
from .wadge import join, shift

DEFAULT_CAP = 5
FAMILIES = ("sigma_complete", "pi_complete", "delta_jr", "delta_ji", "E")


def level_cap() -> int:
    raw = os.environ.get("WADGE_LAB_CAP")
    if raw is None:
        return DEFAULT_CAP
    try:
        return int(raw)
    except ValueError:
        raise LevelOutOfRange(f"WADGE_LAB_CAP must be an integer, got {raw!r}") from None


def _check(n: int, low: int = 0) -> None:
    cap = level_cap()
    if not low <= n <= cap:
        raise LevelOutOfRange(f"level {n} outside {low}..{cap}")


def sigma_complete(n: int, k: int = 2) -> OmegaAutomaton:
    _check(n)
    if n == 0:
        return empty(k)
    delta = tuple(
        tuple(min(c + 1, n) if a == 1 else c for a in range(k)) for c in range(n + 1)
    )
    prios = tuple(0 if c % 2 else 1 for c in range(n + 1))
    return OmegaAutomaton(k, delta, 0, Parity(prios))


def pi_complete(n: int, k: int = 2) -> OmegaAutomaton:
    _check(n)
    if n == 0:
        return full(k)
    return complement(sigma_complete(n, k))


def delta_jr(n: int, k: int = 2) -> OmegaAutomaton:
    """Join of the sigma and pi sets one level down; at level 1 the join of ∅ and the full space."""
    _check(n, 1)
    return join([sigma_complete(n - 1, k), pi_complete(n - 1, k)])


def delta_ji(n: int, k: int = 2) -> OmegaAutomaton:
    return shift(0, delta_jr(n, k))


E = delta_ji

_BUILDERS = {
    "sigma_complete": sigma_complete,
    "pi_complete": pi_complete,
    "delta_jr": delta_jr,
    "delta_ji": delta_ji,
    "E": delta_ji,
}


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    level: int
    automaton: OmegaAutomaton

    @property
    def label(self) -> str:
        return f"{self.name}({self.level})"


def catalog(name: str, level: int, k: int = 2) -> CatalogEntry:
    if name not in _BUILDERS:
        raise KeyError(f"unknown catalog family {name!r}; expected one of {', '.join(FAMILIES)}")
    _check(level, 1)
    return CatalogEntry(name, level, _BUILDERS[name](level, k))


def entries(max_level: int | None = None, k: int = 2, names=("sigma_complete", "pi_complete", "delta_jr", "delta_ji")):
    top = level_cap() if max_level is None else max_level
    return [catalog(name, n, k) for n in range(1, top + 1) for name in names]


# -- function catalog ---------------------------------------------------------------


def ladder(level: int) -> dict:
    """The four degree representatives at a rank ``level >= 2``.

    Indicators of sigma/pi sets one level down give the left/right-sided
    classes; interleaving them gives the one-sided class and joining them
    the two-sided one.
    """
    s, p = char_fun(sigma_complete(level - 1)), char_fun(pi_complete(level - 1))
    return {
        f"L{level}": s,
        f"R{level}": p,
        f"O{level}": interleave([s, p], [Fraction(x) for x in (6, 5, 4, 3, 2, 1)]),
        f"T{level}": function_join([s, p]),
    }


def function_catalog(max_level: int = 4) -> dict:
    """Named function automata spanning ranks 1..max_level and every realisable type."""
    half = Fraction(1, 2)
    fns = {
        "const0": constant(0),
        "const_half": constant(half),
        "cont2": make_function(2, [(1, 2), (1, 1), (2, 2)], [0, 0, 1]),
        "cont3": make_function(2, [(1, 2), (1, 1), (3, 4), (3, 3), (4, 4)], [0, 0, 0, half, 1]),
    }
    for n in range(2, max_level + 1):
        fns.update(ladder(n))
    fns["staircase"] = make_function(2, [(0, 1), (1, 2), (2, 2)], [0, half, 1])
    fns["two_ones"] = make_function(2, [(0, 1), (1, 2), (2, 2)], [0, 0, 1])
    fns["neg_sigma1"] = negate(char_fun(sigma_complete(1)))
    if max_level >= 3:
        fns["scaled_sigma2"] = scale(char_fun(sigma_complete(2)), Fraction(3, 2), half)
    if max_level >= 4:
        fns["neg_sigma3"] = negate(char_fun(sigma_complete(3)))
    return fns
