"""Reducibility games between regular sets and between disjoint pairs of sets.

In a reduction game player I writes x one letter per round and player II
answers with a letter of y (or, in Wadge mode, passes).  II wins when it
moves infinitely often and the verdicts on x and y satisfy the game's
condition.  Sets are compared with the condition ``A(x) == B(y)``; pairs
``(A0, A1)`` with ``x in A_i  =>  y in B_i`` for i = 0, 1.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

from .automata import (
    LassoWord,
    OmegaAutomaton,
    Parity,
    complement,
    empty,
    full,
    is_closed,
    nonempty_states,
    reduce,
    compress_priorities,
    explore,
    intersect,
    is_empty,
    quotient,
    run_lasso,
    sample_lassos,
    weak_bits,
)
from .errors import (
    AlphabetMismatch,
    CertificateMismatch,
    DepthExceeded,
    DisjointnessViolated,
    EmptyJoin,
    NotClosed,
    NotDisjoint,
    SelfDualInput,
)
from .games import I, II, GameArena, MealyStrategy, Solution, solve_parity
from .record import RecordMonitor

WADGE = "wadge"
LIPSCHITZ = "lipschitz"
PASS = None


@dataclass(frozen=True)
class TwoBotPair:
    """A 2_⊥-valued function: 0 on ``zero_part``, 1 on ``one_part``, ⊥ elsewhere."""

    zero_part: OmegaAutomaton
    one_part: OmegaAutomaton

    def __post_init__(self):
        if self.zero_part.alphabet != self.one_part.alphabet:
            raise AlphabetMismatch(
                f"pair parts use alphabets {self.zero_part.alphabet} and {self.one_part.alphabet}"
            )
        if not is_empty(intersect(self.zero_part, self.one_part)):
            raise DisjointnessViolated("zero_part and one_part intersect")

    @classmethod
    def of_set(cls, aut: OmegaAutomaton) -> "TwoBotPair":
        return cls(complement(aut), aut)

    @property
    def alphabet(self) -> int:
        return self.zero_part.alphabet

    def dual(self) -> "TwoBotPair":
        return TwoBotPair(self.one_part, self.zero_part)

    def value(self, w: LassoWord):
        if run_lasso(self.one_part, w):
            return 1
        if run_lasso(self.zero_part, w):
            return 0
        return None


@dataclass(frozen=True)
class IndexedFamily:
    """Components indexed by first letter; each is a set or a TwoBotPair."""

    components: tuple

    def __post_init__(self):
        if not self.components:
            raise EmptyJoin("a family needs at least one component")
        ks = {_alphabet(c) for c in self.components}
        if len(ks) != 1:
            raise AlphabetMismatch(f"family mixes alphabets {sorted(ks)}")

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]


def _alphabet(x) -> int:
    return x.alphabet


def _parts(x) -> list[OmegaAutomaton]:
    return [x.zero_part, x.one_part] if isinstance(x, TwoBotPair) else [x]


# -- synchronised structures ---------------------------------------------------


@dataclass(frozen=True)
class Side:
    """Several parity conditions over one shared transition structure."""

    alphabet: int
    delta: tuple
    prios: tuple  # one compressed priority vector per component
    bits: tuple  # weak SCC bits per component, or None

    @property
    def key(self) -> tuple:
        return (self.alphabet, self.delta, self.prios)


def make_side(parts: Sequence[OmegaAutomaton]) -> Side:
    k = parts[0].alphabet
    if any(p.alphabet != k for p in parts):
        raise AlphabetMismatch("components of one side must share an alphabet")
    delta, labels, _ = explore(
        k,
        tuple(p.initial for p in parts),
        lambda qs, a: tuple(p.delta[q][a] for p, q in zip(parts, qs)),
        lambda qs: tuple(p.acceptance.priorities[q] for p, q in zip(parts, qs)),
    )
    prios = [compress_priorities([lab[i] for lab in labels]) for i in range(len(parts))]
    norm = []
    for i in range(len(parts)):
        bits = weak_bits(delta, prios[i])
        norm.append([int(not b) for b in bits] if bits is not None else prios[i])
    rows = [tuple(v[q] for v in norm) for q in range(len(delta))]
    delta, rows, _ = quotient(k, delta, 0, rows)
    prios = tuple(compress_priorities([r[i] for r in rows]) for i in range(len(parts)))
    bits = tuple(weak_bits(delta, p) for p in prios)
    return Side(k, tuple(tuple(r) for r in delta), prios, bits)


# -- the reduction game ---------------------------------------------------------


def set_condition(lv, rv) -> bool:
    return lv[0] == rv[0]


def pair_condition(lv, rv) -> bool:
    return (not lv[0] or rv[0]) and (not lv[1] or rv[1])


CONDITIONS: dict[str, Callable] = {"set": set_condition, "pair": pair_condition}


@dataclass
class ReductionGame:
    left: Side
    right: Side
    kind: str
    mode: str
    arena: GameArena
    positions: list  # node -> position tuple
    i_moves: dict  # I-node -> {letter: II-node}
    ii_moves: dict  # II-node -> {move: I-node}, move is a letter or PASS
    solution: Solution | None = None

    @property
    def holds(self) -> bool:
        return self.arena.start in self.solution.regions[II]


def build_game(left: Side, right: Side, kind: str, mode: str = WADGE) -> ReductionGame:
    """Arena whose I-nodes are ``(qL, qR, record, prio)`` and II-nodes ``(qL, qR, record)``."""
    if mode not in (WADGE, LIPSCHITZ):
        raise ValueError(f"unknown mode {mode!r}")
    cond = CONDITIONS[kind]
    strong_l = [i for i, b in enumerate(left.bits) if b is None]
    strong_r = [i for i, b in enumerate(right.bits) if b is None]
    items = [("L", i, p) for i in strong_l for p in set(left.prios[i])]
    items += [("R", i, p) for i in strong_r for p in set(right.prios[i])]
    if mode == WADGE:
        items.append(("M", 0, 0))
    mon = RecordMonitor(items)
    top = mon.neutral if items else 3

    def verdicts(side, tag, q, hit_set):
        out = []
        for i, b in enumerate(side.bits):
            if b is not None:
                out.append(b[q])
            else:
                ps = [p for (t, c, p) in hit_set if t == tag and c == i]
                out.append(bool(ps) and min(ps) % 2 == 0)
        return out

    def answer(qL, qR, rec, move):
        moved = move is not PASS
        if moved:
            qR = right.delta[qR][move]
        if not items:
            ok = moved and cond(verdicts(left, "L", qL, ()), verdicts(right, "R", qR, ()))
            return (qL, qR, rec, 0 if ok else 1)
        visited = [("L", i, left.prios[i][qL]) for i in strong_l]
        if moved:
            visited += [("R", i, right.prios[i][qR]) for i in strong_r]
            if mode == WADGE:
                visited.append(("M", 0, 0))
        rec2, hit, hit_set = mon.visit(rec, visited)
        ok = (mode == LIPSCHITZ or ("M", 0, 0) in hit_set) and cond(
            verdicts(left, "L", qL, hit_set), verdicts(right, "R", qR, hit_set)
        )
        return (qL, qR, rec2, mon.priority(hit, ok))

    ii_letters = list(range(right.alphabet)) + ([PASS] if mode == WADGE else [])
    start = ("I", 0, 0, mon.initial, top)
    index = {start: 0}
    positions = [start]
    queue = deque([start])
    owner, succ, prio = [], [], []
    i_moves: dict = {}
    ii_moves: dict = {}

    def node(pos):
        if pos not in index:
            index[pos] = len(positions)
            positions.append(pos)
            queue.append(pos)
        return index[pos]

    while queue:
        pos = queue.popleft()
        v = index[pos]
        if pos[0] == "I":
            _, qL, qR, rec, p = pos
            moves = {a: node(("II", left.delta[qL][a], qR, rec)) for a in range(left.alphabet)}
            i_moves[v] = moves
            owner.append(I)
            prio.append(p)
        else:
            _, qL, qR, rec = pos
            moves = {}
            for b in ii_letters:
                moves[b] = node(("I",) + answer(qL, qR, rec, b))
            ii_moves[v] = moves
            owner.append(II)
            prio.append(top)
        succ.append(tuple(sorted(set(moves.values()))))
    arena = GameArena(tuple(owner), tuple(succ), tuple(prio), 0)
    return ReductionGame(left, right, kind, mode, arena, positions, i_moves, ii_moves)


# -- solving and certificates ------------------------------------------------------

_GAMES: dict = {}


def clear_cache() -> None:
    _GAMES.clear()


def solved_game(left_parts, right_parts, kind: str, mode: str = WADGE) -> ReductionGame:
    left, right = make_side(left_parts), make_side(right_parts)
    key = (left.key, right.key, kind, mode)
    game = _GAMES.get(key)
    if game is None:
        game = build_game(left, right, kind, mode)
        game.solution = solve_parity(game.arena)
        _GAMES[key] = game
    return game


def _label(moves: dict, target: int):
    return next(m for m, w in moves.items() if w == target)


def reduction_strategy(game: ReductionGame) -> MealyStrategy:
    """II's winning strategy as a transducer from I's letters to II's moves."""
    strat = game.solution.strategies[II]
    update, output = {}, {}
    seen = {0}
    queue = deque([0])
    while queue:
        m = queue.popleft()
        for a, u in game.i_moves[m].items():
            w = strat[u]
            update[(m, a)] = w
            output[(m, a)] = _label(game.ii_moves[u], w)
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return MealyStrategy(len(game.arena), 0, update, output, None, II, {"kind": game.kind, "mode": game.mode})


def counter_strategy(game: ReductionGame) -> MealyStrategy:
    """I's winning strategy: an opening letter, then letters answering II's moves."""
    strat = game.solution.strategies[I]
    update, output = {}, {}
    seen = {0}
    queue = deque([0])
    while queue:
        m = queue.popleft()
        u = strat[m]
        for b, w in game.ii_moves[u].items():
            update[(m, b)] = w
            output[(m, b)] = _label(game.i_moves[w], strat[w])
            if w not in seen:
                seen.add(w)
                queue.append(w)
    opening = _label(game.i_moves[0], strat[0])
    return MealyStrategy(len(game.arena), 0, update, output, opening, I, {"kind": game.kind, "mode": game.mode})


class Verdict(NamedTuple):
    holds: bool
    certificate: MealyStrategy


def _decide(left_parts, right_parts, kind, mode) -> Verdict:
    game = solved_game(left_parts, right_parts, kind, mode)
    if game.holds:
        return Verdict(True, reduction_strategy(game))
    return Verdict(False, counter_strategy(game))


def leq_w(a: OmegaAutomaton, b: OmegaAutomaton, mode: str = WADGE) -> Verdict:
    """Decide ``a <=_w b`` (or Lipschitz reducibility) by solving the reduction game."""
    return _decide([a], [b], "set", mode)


def pair_leq(p: TwoBotPair, q: TwoBotPair, mode: str = WADGE) -> Verdict:
    """Decide reducibility of 2_⊥-valued functions given as disjoint pairs."""
    return _decide([p.zero_part, p.one_part], [q.zero_part, q.one_part], "pair", mode)


def reducible(x, y, mode: str = WADGE) -> Verdict:
    """``leq_w`` for sets, ``pair_leq`` for pairs."""
    if isinstance(x, TwoBotPair) != isinstance(y, TwoBotPair):
        raise TypeError("cannot compare a set with a pair")
    return pair_leq(x, y, mode) if isinstance(x, TwoBotPair) else leq_w(x, y, mode)


def equivalent_w(x, y) -> bool:
    return reducible(x, y).holds and reducible(y, x).holds


def is_self_dual(a: OmegaAutomaton) -> bool:
    return leq_w(a, complement(a)).holds


# -- replay ------------------------------------------------------------------------


def apply_strategy(strategy: MealyStrategy, x: LassoWord) -> LassoWord | None:
    """The image of a lasso under II's transducer; None if II eventually only passes."""
    m = strategy.initial
    seen: dict = {}
    moves = []
    i = 0
    n0, n1 = len(x.prefix), len(x.cycle)
    while True:
        if i >= n0:
            key = (m, (i - n0) % n1)
            if key in seen:
                start = seen[key]
                break
            seen[key] = i
        a = x.letter(i)
        moves.append(strategy.output[(m, a)])
        m = strategy.update[(m, a)]
        i += 1
    head = [b for b in moves[:start] if b is not PASS]
    loop = [b for b in moves[start:] if b is not PASS]
    if not loop:
        return None
    return LassoWord(head, loop)


def _verdicts(x, w):
    return [bool(run_lasso(p, w)) for p in _parts(x)]


def replay_reduction(strategy: MealyStrategy, x, y, words: Sequence[LassoWord]) -> list[LassoWord]:
    """Lassos on which the transducer fails to reduce ``x`` to ``y``."""
    cond = pair_condition if isinstance(x, TwoBotPair) else set_condition
    bad = []
    for w in words:
        image = apply_strategy(strategy, w)
        if image is None or not cond(_verdicts(x, w), _verdicts(y, image)):
            bad.append(w)
    return bad


def certify_reduction(strategy: MealyStrategy, x, y, seed: int = 0, count: int = 1000) -> int:
    """Number of violations over ``count`` seeded random lassos."""
    words = sample_lassos(seed, _alphabet(x), count)
    return len(replay_reduction(strategy, x, y, words))


def play_counter(strategy: MealyStrategy, answers: LassoWord | None, pass_cycle: bool = False):
    """Let I's strategy face II moves fixed in advance; returns ``(x, y)``.

    ``answers`` lists II's letters; with ``pass_cycle`` II passes forever
    after its prefix instead.  ``y`` is None when II moves finitely often.
    """
    m = strategy.initial
    xs = [strategy.opening]
    ys = []
    seen: dict = {}
    i = 0
    while True:
        if answers is None or pass_cycle:
            prefix = answers.prefix if answers is not None else ()
            b = prefix[i] if i < len(prefix) else PASS
            phase = 0 if i >= len(prefix) else None
        else:
            b = answers.letter(i)
            phase = (i - len(answers.prefix)) % len(answers.cycle) if i >= len(answers.prefix) else None
        if phase is not None:
            key = (m, phase)
            if key in seen:
                start = seen[key]
                break
            seen[key] = i
        ys.append(b)
        xs.append(strategy.output[(m, b)])
        m = strategy.update[(m, b)]
        i += 1
    # xs[j] is I's letter of round j; rounds start..i-1 repeat
    x = LassoWord(xs[:start], xs[start:i])
    head = [b for b in ys[:start] if b is not PASS]
    loop = [b for b in ys[start:] if b is not PASS]
    return x, (LassoWord(head, loop) if loop else None)


def counter_violations(strategy: MealyStrategy, x, y, words: Sequence[LassoWord]) -> list[LassoWord]:
    """II move sequences against which I's strategy fails to refute the reduction."""
    cond = pair_condition if isinstance(x, TwoBotPair) else set_condition
    bad = []
    for w in words:
        xw, yw = play_counter(strategy, w)
        if yw is not None and cond(_verdicts(x, xw), _verdicts(y, yw)):
            bad.append(w)
    return bad


# -- joins, shifts and families -------------------------------------------------------


def widen(aut: OmegaAutomaton, k: int) -> OmegaAutomaton:
    """Same set over a larger alphabet, reading the extra letters as 0."""
    if k == aut.alphabet:
        return aut
    if k < aut.alphabet:
        raise AlphabetMismatch(f"cannot narrow alphabet {aut.alphabet} to {k}")
    delta = tuple(tuple(row) + (row[0],) * (k - aut.alphabet) for row in aut.delta)
    return OmegaAutomaton(k, delta, aut.initial, aut.acceptance)


def _disjoint_sum(auts: Sequence[OmegaAutomaton]):
    """Concatenate state spaces; returns (delta rows, priorities, offsets)."""
    delta, prios, offsets = [], [], []
    for a in auts:
        off = len(delta) + 1  # state 0 is reserved for the new root
        offsets.append(off)
        delta.extend(tuple(off + q for q in row) for row in a.delta)
        prios.extend(a.acceptance.priorities)
    return delta, prios, offsets


def _join_sets(parts: Sequence[OmegaAutomaton]) -> OmegaAutomaton:
    k = max(max(p.alphabet for p in parts), len(parts))
    parts = [widen(p, k) for p in parts]
    delta, prios, offsets = _disjoint_sum(parts)
    root = tuple(offsets[min(a, len(parts) - 1)] + parts[min(a, len(parts) - 1)].initial for a in range(k))
    top = max(prios) | 1
    return OmegaAutomaton(k, (root,) + tuple(delta), 0, Parity((top,) + tuple(prios)))


def join(parts: Sequence):
    """``(⊕ A_i)(a x) = A_a(x)``; first letters past the last part select the last part."""
    parts = list(parts)
    if not parts:
        raise EmptyJoin("join of an empty list")
    if all(isinstance(p, TwoBotPair) for p in parts):
        return TwoBotPair(
            _join_sets([p.zero_part for p in parts]), _join_sets([p.one_part for p in parts])
        )
    if any(isinstance(p, TwoBotPair) for p in parts):
        raise TypeError("cannot join sets with pairs")
    return _join_sets(parts)


def shift(a: int, x):
    """``a⌢A``: words starting with ``a`` whose tail lies in A."""
    if isinstance(x, TwoBotPair):
        return TwoBotPair(shift(a, x.zero_part), shift(a, x.one_part))
    if not 0 <= a < x.alphabet:
        raise ValueError(f"letter {a} outside alphabet {x.alphabet}")
    n = x.state_count
    sink = n + 1
    delta = [tuple(n + 1 if b != a else x.initial + 1 for b in range(x.alphabet))]
    delta += [tuple(q + 1 for q in row) for row in x.delta]
    delta.append((sink,) * x.alphabet)
    prios = (1,) + tuple(x.acceptance.priorities) + (max(x.acceptance.priorities) | 1,)
    return OmegaAutomaton(x.alphabet, tuple(delta), 0, Parity(prios))


def _residual_start(aut: OmegaAutomaton, a: int) -> OmegaAutomaton:
    return aut.with_initial(aut.delta[aut.initial][a])


def decompose(x) -> IndexedFamily:
    """Components ``x↾a`` for every first letter a."""
    if isinstance(x, TwoBotPair):
        comps = [
            TwoBotPair(_residual_start(x.zero_part, a), _residual_start(x.one_part, a))
            for a in range(x.alphabet)
        ]
    else:
        comps = [_residual_start(x, a) for a in range(x.alphabet)]
    return IndexedFamily(tuple(comps))


def family_join(f: IndexedFamily):
    return join(list(f.components))


def m_reduction(f: IndexedFamily, g: IndexedFamily) -> dict | None:
    """For each component of f a pair ``(m, strategy)`` reducing it into g's m-th component."""
    witnesses = {}
    for n, c in enumerate(f.components):
        for m, d in enumerate(g.components):
            verdict = reducible(c, d)
            if verdict.holds:
                witnesses[n] = (m, verdict.certificate)
                break
        else:
            return None
    return witnesses


def m_leq(f: IndexedFamily, g: IndexedFamily) -> bool:
    return m_reduction(f, g) is not None


def is_m_sigma_ji(f: IndexedFamily) -> bool:
    """Some component is already equivalent to the join of the whole family."""
    if len(f) == 1:
        return True
    whole = family_join(f)
    return any(reducible(whole, c).holds for c in f.components)


# -- pass encoding -------------------------------------------------------------------


def pass_encode(a: OmegaAutomaton, verify: bool = True) -> OmegaAutomaton:
    """A binary-alphabet set Wadge-equivalent to the non-self-dual set ``a``.

    Player I wins G(¬a, a); following I's strategy against II moves decoded
    from bits (a 0 is a pass, a 1 plays the number of zeros before it) yields
    the encoded set.
    """
    game = solved_game([complement(a)], [a], "set", WADGE)
    if game.holds:
        raise SelfDualInput("the set reduces to its complement")
    strat = game.solution.strategies[I]
    k = a.alphabet
    left = game.left

    def step(pos, bit):
        v, c = pos
        u = strat[v]
        if bit == 0:
            return game.ii_moves[u][PASS], min(c + 1, k - 1)
        return game.ii_moves[u][c], 0

    def label(pos):
        q_left = game.positions[pos[0]][1]
        return left.prios[0][q_left] + 1

    delta, prios, _ = explore(2, (0, 0), step, label)
    b = reduce(OmegaAutomaton(2, delta, 0, Parity(tuple(prios))))
    if verify and not equivalent_w(a, b):
        raise CertificateMismatch("pass encoding is not Wadge-equivalent to its input")
    return b


# -- clopen separation ---------------------------------------------------------------

DEFAULT_SEPARATION_DEPTH = 20


def separate_closed(a: OmegaAutomaton, b: OmegaAutomaton, max_depth: int = DEFAULT_SEPARATION_DEPTH) -> OmegaAutomaton:
    """A clopen C with ``a ⊆ C`` and ``C ∩ b = ∅``, as a finite prefix tree."""
    for name, x in (("first", a), ("second", b)):
        if not is_closed(x):
            raise NotClosed(f"{name} set is not closed")
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch(f"alphabets {a.alphabet} and {b.alphabet} differ")
    if not is_empty(intersect(a, b)):
        raise NotDisjoint("the sets intersect")
    k = a.alphabet
    live_a = nonempty_states(a.delta, a.acceptance.priorities)
    live_b = nonempty_states(b.delta, b.acceptance.priorities)

    def decided(pair):
        qa, qb = pair
        if qa not in live_a:
            return "out"
        if qb not in live_b:
            return "in"
        return None

    root = (a.initial, b.initial)
    if decided(root) == "out":
        return empty(k)
    if decided(root) == "in":
        return full(k)
    # nodes are prefixes; a prefix tree keeps the result a finite union of cylinders
    delta = [None]
    prios = [1]
    layer = [(0, root)]
    depth = 0
    while layer:
        depth += 1
        if depth > max_depth:
            raise DepthExceeded(f"no separating prefix tree of depth <= {max_depth}")
        nxt = []
        for node, (qa, qb) in layer:
            row = []
            for c in range(k):
                child = (a.delta[qa][c], b.delta[qb][c])
                verdict = decided(child)
                if verdict is None:
                    delta.append(None)
                    prios.append(1)
                    nxt.append((len(delta) - 1, child))
                    row.append(len(delta) - 1)
                else:
                    row.append(verdict)
            delta[node] = row
        layer = nxt
    accept, reject = len(delta), len(delta) + 1
    fix = {"in": accept, "out": reject}
    rows = [tuple(fix.get(t, t) for t in row) for row in delta]
    rows += [(accept,) * k, (reject,) * k]
    prios += [0, 1]
    return reduce(OmegaAutomaton(k, tuple(rows), 0, Parity(tuple(prios))))
