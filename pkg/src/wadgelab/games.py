"""Finite two-player parity games.

Player II (index 0) wins a play when the least priority seen infinitely often
is even; player I (index 1) wins otherwise.  Positional strategies are dicts
from a player's node to the chosen successor.
"""

from __future__ import annotations

import itertools
import json
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable

from .errors import ArenaTooLarge, MalformedArena, NotWinning
from .graphs import is_cyclic, predecessors, reachable, tarjan

II = 0
I = 1
PLAYER_NAMES = {I: "I", II: "II"}


@dataclass(frozen=True)
class GameArena:
    owner: tuple[int, ...]
    succ: tuple[tuple[int, ...], ...]
    priority: tuple[int, ...]
    start: int = 0
    # optional move label per edge, aligned with succ
    labels: tuple[tuple, ...] | None = None

    def __post_init__(self):
        n = len(self.owner)
        if len(self.succ) != n or len(self.priority) != n:
            raise MalformedArena("owner, succ and priority must have equal length")
        for v, ws in enumerate(self.succ):
            if not ws:
                raise MalformedArena(f"node {v} is a dead end")
            if any(not 0 <= w < n for w in ws):
                raise MalformedArena(f"node {v} has an out-of-range successor")
        if self.owner and not 0 <= self.start < n:
            raise MalformedArena("start node out of range")

    def __len__(self) -> int:
        return len(self.owner)

    def restrict(self, strategy: dict[int, int]) -> "GameArena":
        """Same arena with the strategy's nodes reduced to their chosen edge."""
        succ = tuple((strategy[v],) if v in strategy else ws for v, ws in enumerate(self.succ))
        return GameArena(self.owner, succ, self.priority, self.start)


@dataclass
class Solution:
    regions: tuple[frozenset, frozenset]  # indexed by player (II, I)
    strategies: tuple[dict, dict]

    def winner(self, v: int) -> int:
        return II if v in self.regions[II] else I


# -- Zielonka ---------------------------------------------------------------


def _attractor(arena: GameArena, pred, nodes: set, target: set, player: int):
    """Attractor of `target` for `player` inside the subgame `nodes`.

    Returns the set and an attractor strategy for the player's added nodes,
    choosing the lowest-numbered successor already attracted.
    """
    attr = set(target)
    strat: dict[int, int] = {}
    count = {v: sum(1 for w in arena.succ[v] if w in nodes) for v in nodes if v not in attr}
    queue = deque(sorted(target))
    while queue:
        w = queue.popleft()
        for v in pred[w]:
            if v not in nodes or v in attr:
                continue
            if arena.owner[v] == player:
                strat[v] = min(x for x in arena.succ[v] if x in attr)
                attr.add(v)
                queue.append(v)
            else:
                count[v] -= 1
                if count[v] == 0:
                    attr.add(v)
                    queue.append(v)
    return attr, strat


def _zielonka(arena: GameArena, pred, nodes: set):
    if not nodes:
        return [set(), set()], [{}, {}]
    d = min(arena.priority[v] for v in nodes)
    p = d % 2
    top = {v for v in nodes if arena.priority[v] == d}
    attr, attr_strat = _attractor(arena, pred, nodes, top, p)
    win, strat = _zielonka(arena, pred, nodes - attr)
    if not win[1 - p]:
        region = [set(), set()]
        region[p] = set(nodes)
        strategies = [{}, {}]
        s = dict(strat[p])
        s.update(attr_strat)
        for v in top:
            if arena.owner[v] == p:
                s[v] = min(w for w in arena.succ[v] if w in nodes)
        strategies[p] = s
        return region, strategies
    back, back_strat = _attractor(arena, pred, nodes, win[1 - p], 1 - p)
    win2, strat2 = _zielonka(arena, pred, nodes - back)
    region = [set(), set()]
    region[1 - p] = win2[1 - p] | back
    region[p] = win2[p]
    strategies = [{}, {}]
    so = dict(strat2[1 - p])
    so.update({v: w for v, w in strat[1 - p].items() if v in win[1 - p]})
    so.update(back_strat)
    strategies[1 - p] = so
    strategies[p] = dict(strat2[p])
    return region, strategies


def solve_parity(arena: GameArena) -> Solution:
    """Winning regions and positional winning strategies of both players."""
    pred = predecessors(arena.succ)
    region, strategies = _zielonka(arena, pred, set(range(len(arena))))
    strategies = [
        {v: w for v, w in strategies[pl].items() if v in region[pl] and arena.owner[v] == pl}
        for pl in (II, I)
    ]
    return Solution((frozenset(region[II]), frozenset(region[I])), (strategies[II], strategies[I]))


# -- brute force oracle -------------------------------------------------------


def _one_player_wins(succ, priority, parity: int) -> set[int]:
    """Nodes from which some path reaches a cycle whose least priority has `parity`."""
    good: set[int] = set()
    n = len(succ)
    for e in sorted({p for p in priority if p % 2 == parity}):
        allowed = [v for v in range(n) if priority[v] >= e]
        for comp in tarjan(succ, allowed):
            if is_cyclic(comp, succ) and any(priority[v] == e for v in comp):
                good.update(comp)
    if not good:
        return set()
    return reachable(predecessors(succ), good)


BRUTE_FORCE_LIMIT = 12


def brute_force_solve(arena: GameArena) -> tuple[frozenset, frozenset]:
    """Regions by enumerating every positional strategy of one player.

    Positional determinacy makes this exact: a node is won by the enumerating
    player iff some fixed strategy leaves the opponent no cycle of the
    opponent's parity.
    """
    n = len(arena)
    if n > BRUTE_FORCE_LIMIT:
        raise ArenaTooLarge(f"{n} nodes exceeds the brute-force limit {BRUTE_FORCE_LIMIT}")
    cost = {
        pl: _product(len(arena.succ[v]) for v in range(n) if arena.owner[v] == pl) for pl in (II, I)
    }
    player = II if cost[II] <= cost[I] else I
    mine = [v for v in range(n) if arena.owner[v] == player]
    won: set[int] = set()
    for choice in itertools.product(*(arena.succ[v] for v in mine)):
        succ = list(arena.succ)
        for v, w in zip(mine, choice):
            succ[v] = (w,)
        lost = _one_player_wins(succ, arena.priority, 1 - player)
        won.update(v for v in range(n) if v not in lost)
        if len(won) == n:
            break
    other = frozenset(range(n)) - won
    regions = [None, None]
    regions[player] = frozenset(won)
    regions[1 - player] = other
    return regions[II], regions[I]


def _product(xs) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


def random_arena(rng: random.Random, max_nodes: int = 8, max_priority: int = 4, max_out: int = 3) -> GameArena:
    n = rng.randint(1, max_nodes)
    owner = tuple(rng.randrange(2) for _ in range(n))
    priority = tuple(rng.randrange(max_priority) for _ in range(n))
    succ = tuple(tuple(sorted(rng.sample(range(n), rng.randint(1, min(max_out, n))))) for _ in range(n))
    return GameArena(owner, succ, priority, 0)


# -- certificates -------------------------------------------------------------


def certify_positional(arena: GameArena, player: int, strategy: dict[int, int], region) -> bool:
    """Restrict the player's nodes in `region` to the strategy and re-solve."""
    restricted = arena.restrict({v: w for v, w in strategy.items() if v in region})
    sol = solve_parity(restricted)
    return set(region) <= sol.regions[player]


@dataclass
class MealyStrategy:
    """Finite-memory transducer: (memory, opponent move) -> (memory, own move).

    ``opening`` is the move made before any input (used when the strategy's
    owner moves first, as player I does in reduction games).
    """

    memory: int
    initial: int
    update: dict[tuple[int, Hashable], int]
    output: dict[tuple[int, Hashable], Hashable]
    opening: Hashable = None
    player: int = II
    meta: dict = field(default_factory=dict)

    def run(self, moves):
        """Yield own moves answering the opponent's `moves`."""
        m = self.initial
        for x in moves:
            yield self.output[(m, x)]
            m = self.update[(m, x)]

    def to_dict(self) -> dict:
        keys = sorted(self.update, key=lambda t: (t[0], _sort_key(t[1])))
        doc = {
            "memory": self.memory,
            "initial": self.initial,
            "update": [[m, x, self.update[(m, x)]] for m, x in keys],
            "output": [[m, x, self.output[(m, x)]] for m, x in keys],
        }
        if self.player == I:
            doc["opening"] = self.opening
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "MealyStrategy":
        update = {(m, x): t for m, x, t in doc["update"]}
        output = {(m, x): y for m, x, y in doc["output"]}
        player = I if "opening" in doc else II
        return cls(doc["memory"], doc["initial"], update, output, doc.get("opening"), player)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _sort_key(x):
    return (-1, 0) if x is None else (0, x)


def extract_strategy(arena: GameArena, player: int, solution: Solution | None = None) -> MealyStrategy:
    """Transducer form of the player's positional strategy from the start node.

    Memory is the current node; the input is the opponent's chosen successor
    (None when it is the owner's turn), the output the owner's successor
    (None on opponent nodes).
    """
    sol = solution or solve_parity(arena)
    if arena.start not in sol.regions[player]:
        raise NotWinning(f"player {PLAYER_NAMES[player]} does not win from the start node")
    strat = sol.strategies[player]
    update: dict = {}
    output: dict = {}
    seen = {arena.start}
    queue = deque([arena.start])
    while queue:
        v = queue.popleft()
        if arena.owner[v] == player:
            w = strat[v]
            update[(v, None)] = w
            output[(v, None)] = w
            nxt = [w]
        else:
            nxt = list(arena.succ[v])
            for w in nxt:
                update[(v, w)] = w
                output[(v, w)] = None
        for w in nxt:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return MealyStrategy(len(arena), arena.start, update, output, None, player)


def replay_in_region(arena: GameArena, strategy: MealyStrategy, region, rng: random.Random, steps: int = 64) -> bool:
    """Play `steps` moves against a random opponent; False if the play leaves `region`."""
    v = strategy.initial
    for _ in range(steps):
        if v not in region:
            return False
        if arena.owner[v] == strategy.player:
            v = strategy.update[(v, None)]
        else:
            w = rng.choice(arena.succ[v])
            v = strategy.update[(v, w)]
    return v in region


def to_dot(arena: GameArena, solution: Solution | None = None) -> str:
    lines = ["digraph arena {"]
    for v in range(len(arena)):
        shape = "circle" if arena.owner[v] == II else "box"
        extra = ""
        if solution is not None:
            extra = ', style=filled, fillcolor="%s"' % ("palegreen" if v in solution.regions[II] else "lightpink")
        lines.append(f'  n{v} [shape={shape}, label="{v}:{arena.priority[v]}"{extra}];')
    for v, ws in enumerate(arena.succ):
        for w in ws:
            lines.append(f"  n{v} -> n{w};")
    lines.append("}")
    return "\n".join(lines)
