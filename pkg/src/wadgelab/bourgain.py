"""Bourgain derivative, ranks and sided types for finite-range function automata.

For a closed set P and thresholds p < q the derivative keeps the points of
P near which f restricted to P takes values both <= p and >= q.  With finitely
many values the lower and upper envelopes are attained, so this is

    P ∩ cl(P ∩ {f <= p}) ∩ cl(P ∩ {f >= q}).
"""

from __future__ import annotations

import json
from functools import lru_cache
from dataclasses import dataclass, field
from enum import Enum

from .automata import (
    LassoWord,
    OmegaAutomaton,
    closure,
    format_rational,
    full,
    intersect,
    is_closed,
    is_empty,
    nonempty_states,
    reduce,
    run_lasso,
    subset,
)
from .catalog import E, level_cap
from .errors import InconsistentRankType, LevelOutOfRange, NotClosed, RankOverflow
from .graphs import is_cyclic, reachable, tarjan
from .realfun import FunctionAutomaton, ThresholdPair, critical_pairs, indicator, level_sets, sep_family
from .wadge import TwoBotPair, decompose, m_leq

RANK_CAP = 64


def derivative_step(f: FunctionAutomaton, t: ThresholdPair, stage: OmegaAutomaton, check: bool = True) -> OmegaAutomaton:
    if check and not is_closed(stage):
        raise NotClosed("derivative is only defined on closed sets")
    low, high = level_sets(f, t).zero_part, level_sets(f, t).one_part
    near_low = closure(intersect(stage, low))
    near_high = closure(intersect(stage, high))
    return reduce(intersect(stage, intersect(near_low, near_high)))


@dataclass
class DerivativeChain:
    pair: ThresholdPair
    stages: list  # stages[nu] is P^nu; the last one is empty
    rank: int


def rank_chain(f: FunctionAutomaton, t: ThresholdPair, cap: int = RANK_CAP) -> DerivativeChain:
    stages = [full(f.alphabet)]
    while not is_empty(stages[-1]):
        if len(stages) > cap:
            raise RankOverflow(f"derivative did not vanish within {cap} steps")
        stages.append(derivative_step(f, t, stages[-1], check=False))
    return DerivativeChain(t, stages, len(stages) - 1)


def chains(f: FunctionAutomaton) -> list[DerivativeChain]:
    return [rank_chain(f, t) for t in critical_pairs(f)]


def bourgain_rank(f: FunctionAutomaton) -> int:
    return max(c.rank for c in chains(f))


def point_rank(f: FunctionAutomaton, t: ThresholdPair, w: LassoWord) -> int:
    """Least nu with w outside P^nu."""
    for nu, stage in enumerate(rank_chain(f, t).stages):
        if not run_lasso(stage, w):
            return nu
    raise AssertionError("the last stage of a chain is empty")


# -- sided types ---------------------------------------------------------------------


class SidedType(Enum):
    F = "F"
    L = "L"
    R = "R"
    O = "O"  # noqa: E741
    T = "T"

    def __le__(self, other: "SidedType") -> bool:
        if self is other:
            return True
        height = {"F": 0, "L": 1, "R": 1, "O": 2, "T": 3}
        return height[self.value] < height[other.value]

    def __lt__(self, other: "SidedType") -> bool:
        return self is not other and self <= other


def _meets(stage: OmegaAutomaton, part: OmegaAutomaton) -> bool:
    return not is_empty(intersect(stage, part))


@dataclass
class TypeAnalysis:
    alpha: int
    chains: list
    achieving: list
    two_sided: bool
    left_sided: bool
    right_sided: bool

    @property
    def type(self) -> SidedType:
        if self.two_sided:
            return SidedType.T
        if self.left_sided and self.right_sided:
            return SidedType.F
        if self.left_sided:
            return SidedType.L
        if self.right_sided:
            return SidedType.R
        return SidedType.O


@lru_cache(maxsize=None)
def analyse(f: FunctionAutomaton) -> TypeAnalysis:
    """Evaluate the two-, left- and right-sided conditions over achieving pairs."""
    cs = chains(f)
    alpha = max(c.rank for c in cs)
    achieving = [c for c in cs if c.rank == alpha]
    two = False
    left = right = True
    for c in achieving:
        pair = level_sets(f, c.pair)
        p, q = c.pair
        below_p = indicator(f, lambda v: v < p)
        above_q = indicator(f, lambda v: v > q)
        stages = c.stages[:alpha]
        if all(_meets(s, pair.zero_part) and _meets(s, pair.one_part) for s in stages):
            two = True
        if not any(subset(s, below_p) for s in stages):
            left = False
        if not any(subset(s, above_q) for s in stages):
            right = False
    return TypeAnalysis(alpha, cs, [c.pair for c in achieving], two, left, right)


def sided_type(f: FunctionAutomaton) -> SidedType:
    return analyse(f).type


def rank_from(alpha: int, kind: SidedType) -> int:
    """m-rank of a function with Bourgain rank ``alpha`` and the given type."""
    if kind is SidedType.O and alpha >= 1:
        return 3 * (alpha - 1)
    if kind is SidedType.T and alpha >= 1:
        return 3 * (alpha - 1) + 1
    if kind in (SidedType.L, SidedType.R) and alpha >= 2:
        return 3 * (alpha - 2) + 2
    raise InconsistentRankType(f"no finite m-rank for rank {alpha} with type {kind.value}")


def m_rank(f: FunctionAutomaton) -> int:
    a = analyse(f)
    return rank_from(a.alpha, a.type)


def decide_m_by_rank(f: FunctionAutomaton, g: FunctionAutomaton) -> bool:
    """f <=_m g read off ranks and types."""
    a, b = analyse(f), analyse(g)
    return a.alpha < b.alpha or (a.alpha == b.alpha and a.type <= b.type)


def sep_rank(f: FunctionAutomaton, cap: int | None = None) -> int:
    """Least n whose m-join-irreducible Delta_n set m-bounds the level pairs of f."""
    top = level_cap() if cap is None else cap
    family = sep_family(f)
    for n in range(1, top + 1):
        target = decompose(TwoBotPair.of_set(E(n, f.alphabet)))
        if m_leq(family, target):
            return n
    raise LevelOutOfRange(f"separation rank exceeds the level cap {top}")


@dataclass
class RankReport:
    alpha: int
    per_pair: list  # [(ThresholdPair, rank)]
    type: SidedType
    m_rank: int
    sep_rank: int | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        doc = {
            "alpha": self.alpha,
            "per_pair": [
                {"p": format_rational(t.p), "q": format_rational(t.q), "rank": r} for t, r in self.per_pair
            ],
            "type": self.type.value,
            "m_rank": self.m_rank,
            "sep_rank": self.sep_rank,
        }
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)


def rank_report(f: FunctionAutomaton, with_sep: bool = True) -> RankReport:
    a = analyse(f)
    per_pair = [(c.pair, c.rank) for c in a.chains]
    sr = sep_rank(f) if with_sep else None
    return RankReport(a.alpha, per_pair, a.type, rank_from(a.alpha, a.type), sr)


# -- brute-force oracle on prefix trees -------------------------------------------------


def _surviving(succ, allowed: set) -> set:
    """States in `allowed` with an infinite path staying in `allowed`."""
    cyc = set()
    for comp in tarjan(succ, allowed):
        if is_cyclic(comp, succ):
            cyc.update(comp)
    back: list[list[int]] = [[] for _ in succ]
    for v in allowed:
        for w in succ[v]:
            if w in allowed:
                back[w].append(v)
    return reachable(back, cyc) if cyc else set()


def _ends_in(aut: OmegaAutomaton, allowed: set, test) -> set:
    """States with a run that stays in `allowed` and settles in a cyclic SCC whose output passes `test`."""
    succ = aut.successors()
    good = set()
    for comp in tarjan(succ, allowed):
        if is_cyclic(comp, succ) and test(aut.acceptance.outputs[comp[0]]):
            good.update(comp)
    back: list[list[int]] = [[] for _ in succ]
    for v in allowed:
        for w in succ[v]:
            if w in allowed:
                back[w].append(v)
    return reachable(back, good) if good else set()


def brute_force_trees(f: FunctionAutomaton, t: ThresholdPair, depth: int = 12) -> list[set]:
    """Prefix trees (up to `depth`) of the derivative stages, computed on states.

    ``H`` tracks the states whose residual stage is nonempty around them: a
    state stays iff, within the current ``H``, it can still reach both a
    component with value <= p and one with value >= q.  A prefix belongs to a
    stage iff its run stays in ``H`` and can continue forever inside ``H``.
    """
    aut = f.automaton
    succ = aut.successors()
    h = set(range(aut.state_count))
    trees = []
    while True:
        alive = _surviving(succ, h)
        trees.append(_prefixes(aut, alive, depth))
        if aut.initial not in alive:
            return trees
        low = _ends_in(aut, h, lambda v: v <= t.p)
        high = _ends_in(aut, h, lambda v: v >= t.q)
        h = h & low & high


def _prefixes(aut: OmegaAutomaton, alive: set, depth: int) -> set:
    out = set()
    if aut.initial not in alive:
        return out
    layer = [((), aut.initial)]
    for _ in range(depth + 1):
        nxt = []
        for word, q in layer:
            out.add(word)
            for a in range(aut.alphabet):
                r = aut.delta[q][a]
                if r in alive:
                    nxt.append((word + (a,), r))
        layer = nxt
    return out


def stage_tree(stage: OmegaAutomaton, depth: int = 12) -> set:
    live = nonempty_states(stage.delta, stage.acceptance.priorities)
    return _prefixes(stage, live, depth)


def stages_dot(chain: DerivativeChain) -> str:
    lines = ["digraph stages {"]
    for nu, stage in enumerate(chain.stages):
        lines.append(f"  subgraph cluster_{nu} {{")
        lines.append(f'    label="P^{nu}";')
        for q, row in enumerate(stage.delta):
            shape = "doublecircle" if stage.acceptance.priorities[q] % 2 == 0 else "circle"
            lines.append(f'    s{nu}_{q} [shape={shape}, label="{q}"];')
        for q, row in enumerate(stage.delta):
            for a, r in enumerate(row):
                lines.append(f'    s{nu}_{q} -> s{nu}_{r} [label="{a}"];')
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines)
