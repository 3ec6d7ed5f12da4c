"""Finite-range functions on sequence space given by eventually-stable output automata.

Every cyclic strongly connected component carries a single output value, so
the output along any run is eventually constant; that constant is f(x).
Such functions are Baire class one with finitely many values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .automata import (
    LassoWord,
    OmegaAutomaton,
    Parity,
    WeakOutput,
    compress_priorities,
    format_rational,
    reduce,
    run_lasso,
    weak_bits,
    word_between,
)
from .errors import (
    NotBooleanValued,
    NotDecreasing,
    NotWeaklyRepresentable,
    StableViolation,
)
from .graphs import is_cyclic, reachable, tarjan
from .wadge import IndexedFamily, TwoBotPair, pair_leq


@dataclass(frozen=True)
class Violation:
    component: tuple[int, ...]
    states: tuple[int, int]
    outputs: tuple[Fraction, Fraction]
    lasso: LassoWord

    def __str__(self) -> str:
        q, r = self.states
        return (
            f"states {q} and {r} share a cycle but output {self.outputs[0]} and {self.outputs[1]}; "
            f"the output oscillates on {self.lasso}"
        )

    def to_dict(self) -> dict:
        return {
            "component": list(self.component),
            "states": list(self.states),
            "outputs": [format_rational(x) for x in self.outputs],
            "lasso": {"prefix": list(self.lasso.prefix), "cycle": list(self.lasso.cycle)},
        }


def validate_stable(aut: OmegaAutomaton) -> Violation | None:
    """None if every reachable cyclic SCC is single-valued, else a witness."""
    if aut.is_parity:
        raise TypeError("expected a weak-output automaton")
    outs = aut.acceptance.outputs
    succ = aut.successors()
    live = reachable(succ, [aut.initial])
    for comp in tarjan(succ, live):
        if not is_cyclic(comp, succ):
            continue
        comp = sorted(comp)
        q = comp[0]
        r = next((s for s in comp if outs[s] != outs[q]), None)
        if r is None:
            continue
        inside = set(comp)
        prefix = word_between(aut, aut.initial, q, None)
        there = word_between(aut, q, r, inside)
        back = word_between(aut, r, q, inside, nonempty=True)
        return Violation(tuple(comp), (q, r), (outs[q], outs[r]), LassoWord(prefix, there + back))
    return None


@dataclass(frozen=True)
class FunctionAutomaton:
    automaton: OmegaAutomaton

    def __post_init__(self):
        if self.automaton.is_parity:
            raise TypeError("a function automaton needs WeakOutput acceptance")
        bad = validate_stable(self.automaton)
        if bad is not None:
            raise StableViolation(bad)

    @property
    def alphabet(self) -> int:
        return self.automaton.alphabet

    @property
    def range(self) -> tuple[Fraction, ...]:
        """Values attained, i.e. outputs of reachable cyclic components."""
        aut = self.automaton
        succ = aut.successors()
        live = reachable(succ, [aut.initial])
        vals = set()
        for comp in tarjan(succ, live):
            if is_cyclic(comp, succ):
                vals.add(aut.acceptance.outputs[comp[0]])
        return tuple(sorted(vals))

    def __call__(self, w: LassoWord) -> Fraction:
        return run_lasso(self.automaton, w)


def eval_fn(f: FunctionAutomaton, w: LassoWord) -> Fraction:
    return run_lasso(f.automaton, w)


def make_function(alphabet: int, delta, outputs, initial: int = 0) -> FunctionAutomaton:
    outs = tuple(Fraction(x) for x in outputs)
    return FunctionAutomaton(OmegaAutomaton(alphabet, tuple(map(tuple, delta)), initial, WeakOutput(outs)))


def constant(value, alphabet: int = 2) -> FunctionAutomaton:
    return make_function(alphabet, [(0,) * alphabet], [value])


# -- thresholds and level sets -------------------------------------------------


class ThresholdPair(NamedTuple):
    p: Fraction
    q: Fraction

    @classmethod
    def of(cls, p, q) -> "ThresholdPair":
        p, q = Fraction(p), Fraction(q)
        if not p < q:
            raise ValueError(f"threshold pair needs p < q, got {p}, {q}")
        return cls(p, q)

    def __str__(self) -> str:
        return f"({self.p}, {self.q})"


def indicator(f: FunctionAutomaton, test) -> OmegaAutomaton:
    """Parity automaton for ``{x : test(f(x))}``."""
    return _indicator(f.automaton, test)


def _indicator(aut: OmegaAutomaton, test) -> OmegaAutomaton:
    prios = tuple(0 if test(v) else 1 for v in aut.acceptance.outputs)
    return reduce(OmegaAutomaton(aut.alphabet, aut.delta, aut.initial, Parity(prios)))


def level_sets(f: FunctionAutomaton, t: ThresholdPair) -> TwoBotPair:
    """``({f <= p}, {f >= q})``."""
    p, q = t
    aut = f.automaton
    return TwoBotPair(_indicator(aut, lambda v: v <= p), _indicator(aut, lambda v: v >= q))


def _gap_points(values: Sequence[Fraction]) -> list[tuple[Fraction, Fraction]]:
    """Two rationals strictly inside each gap of the range, in increasing order."""
    if not values:
        return [(Fraction(0), Fraction(1))]
    gaps = [(values[0] - 3, values[0])]
    gaps += [(lo, hi) for lo, hi in zip(values, values[1:])]
    gaps.append((values[-1], values[-1] + 3))
    return [(lo + (hi - lo) / 3, lo + 2 * (hi - lo) / 3) for lo, hi in gaps]


def critical_pairs(f: FunctionAutomaton) -> list[ThresholdPair]:
    """One pair per choice of gaps ``i <= j`` holding p and q respectively.

    Level sets only change when p or q crosses a value of f, so every
    rational pair has the same level sets as one of these.
    """
    pts = _gap_points(f.range)
    return [ThresholdPair(pts[i][0], pts[j][1]) for i in range(len(pts)) for j in range(i, len(pts))]


def representative(f: FunctionAutomaton, t: ThresholdPair) -> ThresholdPair:
    """The critical pair with the same level sets as ``t``."""
    values = f.range
    pts = _gap_points(values)
    i = sum(1 for v in values if v <= t.p)
    j = sum(1 for v in values if v < t.q)
    return ThresholdPair(pts[i][0], pts[j][1])


def sep(f: FunctionAutomaton) -> dict[ThresholdPair, TwoBotPair]:
    return {t: level_sets(f, t) for t in critical_pairs(f)}


def sep_family(f: FunctionAutomaton) -> IndexedFamily:
    return IndexedFamily(tuple(level_sets(f, t) for t in critical_pairs(f)))


# -- m-reducibility -----------------------------------------------------------------


class MVerdict(NamedTuple):
    holds: bool
    certificate: dict | None  # ThresholdPair -> (ThresholdPair, MealyStrategy)
    failing: ThresholdPair | None = None


def m_reducible(f: FunctionAutomaton, g: FunctionAutomaton) -> MVerdict:
    """Every level pair of f pair-reduces to some level pair of g."""
    targets = [(s, level_sets(g, s)) for s in critical_pairs(g)]
    cert = {}
    for t in critical_pairs(f):
        src = level_sets(f, t)
        for s, dst in targets:
            verdict = pair_leq(src, dst)
            if verdict.holds:
                cert[t] = (s, verdict.certificate)
                break
        else:
            return MVerdict(False, None, t)
    return MVerdict(True, cert)


# -- constructions ------------------------------------------------------------------


def char_fun(a: OmegaAutomaton) -> FunctionAutomaton:
    """Indicator of a set whose acceptance is decided by the final SCC."""
    if not a.is_parity:
        raise TypeError("char_fun expects a parity automaton")
    prios = compress_priorities(a.acceptance.priorities)
    bits = weak_bits(a.delta, prios)
    if bits is None:
        raise NotWeaklyRepresentable("acceptance is not determined by the final SCC")
    outs = tuple(Fraction(int(b)) for b in bits)
    return FunctionAutomaton(OmegaAutomaton(a.alphabet, a.delta, a.initial, WeakOutput(outs)))


def negate(f: FunctionAutomaton) -> FunctionAutomaton:
    return scale(f, -1)


def scale(f: FunctionAutomaton, factor, offset=0) -> FunctionAutomaton:
    aut = f.automaton
    factor, offset = Fraction(factor), Fraction(offset)
    outs = tuple(factor * v + offset for v in aut.acceptance.outputs)
    return FunctionAutomaton(OmegaAutomaton(aut.alphabet, aut.delta, aut.initial, WeakOutput(outs)))


def _graft(root_rows, parts: Sequence[OmegaAutomaton], root_outputs):
    """Root states followed by copies of ``parts``; ``root_rows`` may name ("part", i)."""
    offsets, rows, outs = [], [], []
    base = len(root_rows)
    for aut in parts:
        offsets.append(base + len(rows))
        rows.extend(tuple(offsets[-1] + t for t in row) for row in aut.delta)
        outs.extend(aut.acceptance.outputs)

    def target(t):
        if isinstance(t, tuple):
            i = t[1]
            return offsets[i] + parts[i].initial
        return t

    head = [tuple(target(t) for t in row) for row in root_rows]
    return tuple(head + rows), tuple(root_outputs) + tuple(outs)


def function_join(fs: Sequence[FunctionAutomaton]) -> FunctionAutomaton:
    """``g(a x) = f_a(x)``; extra first letters select the last function."""
    k = fs[0].alphabet
    if len(fs) > k or any(f.alphabet != k for f in fs):
        raise ValueError("function_join needs at most k functions over one alphabet k")
    root = [tuple(("part", min(a, len(fs) - 1)) for a in range(k))]
    delta, outs = _graft(root, [f.automaton for f in fs], [Fraction(0)])
    return FunctionAutomaton(reduce(OmegaAutomaton(k, delta, 0, WeakOutput(outs))))


def interleave(fs: Sequence[FunctionAutomaton], a: Sequence) -> FunctionAutomaton:
    """Binary function with ``g(0^n 1 x) = a[2n + 1 - f_n(x)]`` for n < len(fs), else 0."""
    a = [Fraction(x) for x in a]
    if len(a) < 2 * len(fs):
        raise ValueError(f"need at least {2 * len(fs)} values, got {len(a)}")
    if any(x <= 0 for x in a) or any(x <= y for x, y in zip(a, a[1:])):
        raise NotDecreasing("values must be positive and strictly decreasing")
    parts = []
    for n, f in enumerate(fs):
        if f.alphabet != 2:
            raise ValueError("interleave works over the binary alphabet")
        if not set(f.automaton.acceptance.outputs) <= {0, 1}:
            raise NotBooleanValued(f"component {n} is not {{0,1}}-valued")
        outs = tuple(a[2 * n + 1 - int(v)] for v in f.automaton.acceptance.outputs)
        parts.append(OmegaAutomaton(2, f.automaton.delta, f.automaton.initial, WeakOutput(outs)))
    m = len(fs)
    # counter states 0..m-1 read the leading zeros; state m is the zero-valued sink
    root = [((n + 1), ("part", n)) for n in range(m)] + [(m, m)]
    delta, outs = _graft(root, parts, [Fraction(0)] * (m + 1))
    return FunctionAutomaton(reduce(OmegaAutomaton(2, delta, 0, WeakOutput(outs))))
