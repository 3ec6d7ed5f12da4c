"""Deterministic omega-automata over the finite alphabets {0, .., k-1}.

Acceptance is either a min-even parity condition or a weak output labelling
(rational value per state).  All automata are complete, deterministic and
immutable; every operation returns a fresh automaton.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence, Union

from .errors import AlphabetMismatch, ParseError
from .graphs import is_cyclic, predecessors, reachable, tarjan
from .record import RecordMonitor


@dataclass(frozen=True)
class LassoWord:
    """The ultimately periodic word ``prefix . cycle^omega``."""

    prefix: tuple[int, ...]
    cycle: tuple[int, ...]

    def __init__(self, prefix: Iterable[int], cycle: Iterable[int]):
        object.__setattr__(self, "prefix", tuple(prefix))
        object.__setattr__(self, "cycle", tuple(cycle))
        if not self.cycle:
            raise ValueError("lasso cycle must be nonempty")
        if any(a < 0 for a in self.prefix + self.cycle):
            raise ValueError("letters are nonnegative integers")

    def letter(self, i: int) -> int:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.cycle[(i - len(self.prefix)) % len(self.cycle)]

    def take(self, n: int) -> tuple[int, ...]:
        return tuple(self.letter(i) for i in range(n))

    def max_letter(self) -> int:
        return max(self.prefix + self.cycle)

    def __str__(self) -> str:
        pre = "".join(map(str, self.prefix))
        return f"{pre}({''.join(map(str, self.cycle))})^w"


@dataclass(frozen=True)
class Parity:
    priorities: tuple[int, ...]


@dataclass(frozen=True)
class WeakOutput:
    outputs: tuple[Fraction, ...]


Acceptance = Union[Parity, WeakOutput]


@dataclass(frozen=True)
class OmegaAutomaton:
    alphabet: int
    delta: tuple[tuple[int, ...], ...]
    initial: int
    acceptance: Acceptance

    def __post_init__(self):
        if self.alphabet < 2:
            raise ValueError("alphabet size must be at least 2")
        n = len(self.delta)
        if n == 0:
            raise ValueError("automaton needs at least one state")
        if not 0 <= self.initial < n:
            raise ValueError("initial state out of range")
        for row in self.delta:
            if len(row) != self.alphabet:
                raise ValueError("transition table is not complete")
            if any(not 0 <= t < n for t in row):
                raise ValueError("transition target out of range")
        labels = self.labels
        if len(labels) != n:
            raise ValueError("acceptance labelling has wrong length")

    @property
    def state_count(self) -> int:
        return len(self.delta)

    @property
    def labels(self) -> tuple:
        acc = self.acceptance
        return acc.priorities if isinstance(acc, Parity) else acc.outputs

    @property
    def is_parity(self) -> bool:
        return isinstance(self.acceptance, Parity)

    def step(self, q: int, word: Iterable[int]) -> int:
        for a in word:
            q = self.delta[q][a]
        return q

    def successors(self) -> list[list[int]]:
        return [sorted(set(row)) for row in self.delta]

    def with_initial(self, q: int) -> "OmegaAutomaton":
        return OmegaAutomaton(self.alphabet, self.delta, q, self.acceptance)

    def with_priorities(self, prios: Sequence[int]) -> "OmegaAutomaton":
        return OmegaAutomaton(self.alphabet, self.delta, self.initial, Parity(tuple(prios)))


# -- runs -------------------------------------------------------------------


def lasso_loop(aut: OmegaAutomaton, w: LassoWord) -> list[int]:
    """States visited infinitely often by the run of `aut` on `w`."""
    if w.max_letter() >= aut.alphabet:
        raise AlphabetMismatch(f"letter {w.max_letter()} outside alphabet {aut.alphabet}")
    q = aut.step(aut.initial, w.prefix)
    seen: dict[tuple[int, int], int] = {}
    trace: list[int] = []
    i = 0
    while (q, i) not in seen:
        seen[(q, i)] = len(trace)
        trace.append(q)
        q = aut.delta[q][w.cycle[i]]
        i = (i + 1) % len(w.cycle)
    return trace[seen[(q, i)]:]


def run_lasso(aut: OmegaAutomaton, w: LassoWord):
    """Acceptance (bool) for parity automata, stabilised output for weak-output ones."""
    loop = lasso_loop(aut, w)
    if isinstance(aut.acceptance, Parity):
        return min(aut.acceptance.priorities[q] for q in loop) % 2 == 0
    values = {aut.acceptance.outputs[q] for q in loop}
    if len(values) != 1:
        raise ValueError("output does not stabilise on this word (automaton not SCC-homogeneous)")
    return values.pop()


def random_lasso(rng: random.Random, alphabet: int, max_prefix: int = 6, max_cycle: int = 4) -> LassoWord:
    pre = [rng.randrange(alphabet) for _ in range(rng.randint(0, max_prefix))]
    cyc = [rng.randrange(alphabet) for _ in range(rng.randint(1, max_cycle))]
    return LassoWord(pre, cyc)


def sample_lassos(seed: int, alphabet: int, count: int, max_prefix: int = 6, max_cycle: int = 4) -> list[LassoWord]:
    rng = random.Random(seed)
    return [random_lasso(rng, alphabet, max_prefix, max_cycle) for _ in range(count)]


# -- constructors -----------------------------------------------------------


def full(alphabet: int) -> OmegaAutomaton:
    return OmegaAutomaton(alphabet, ((0,) * alphabet,), 0, Parity((0,)))


def empty(alphabet: int) -> OmegaAutomaton:
    return OmegaAutomaton(alphabet, ((0,) * alphabet,), 0, Parity((1,)))


def cylinder(alphabet: int, prefix: Sequence[int]) -> OmegaAutomaton:
    """The clopen set [prefix]."""
    n = len(prefix)
    accept, reject = n, n + 1
    delta = []
    for i, a in enumerate(prefix):
        delta.append(tuple(i + 1 if b == a else reject for b in range(alphabet)))
    delta.append((accept,) * alphabet)
    delta.append((reject,) * alphabet)
    prios = [1] * n + [0, 1]
    return OmegaAutomaton(alphabet, tuple(delta), 0, Parity(tuple(prios)))


def explore(
    alphabet: int,
    start: Hashable,
    step: Callable[[Hashable, int], Hashable],
    label: Callable[[Hashable], object],
) -> tuple[tuple[tuple[int, ...], ...], list, list[Hashable]]:
    """Breadth-first construction of an automaton over hashable positions.

    Letters are explored in increasing order, which fixes state numbering.
    """
    index = {start: 0}
    positions = [start]
    rows: list[tuple[int, ...]] = []
    i = 0
    while i < len(positions):
        pos = positions[i]
        row = []
        for a in range(alphabet):
            nxt = step(pos, a)
            if nxt not in index:
                index[nxt] = len(positions)
                positions.append(nxt)
            row.append(index[nxt])
        rows.append(tuple(row))
        i += 1
    labels = [label(p) for p in positions]
    return tuple(rows), labels, positions


# -- structure --------------------------------------------------------------


def compress_priorities(prios: Sequence[int]) -> tuple[int, ...]:
    """Smallest priorities with the same order and parities (same min-even language)."""
    mapping: dict[int, int] = {}
    current = None
    last = None
    for p in sorted(set(prios)):
        if current is None:
            current = p % 2
        elif p % 2 != last % 2:
            current += 1
        mapping[p] = current
        last = p
    return tuple(mapping[p] for p in prios)


def weak_bits(delta: Sequence[Sequence[int]], prios: Sequence[int]) -> tuple[bool, ...] | None:
    """Per-state acceptance bit when every cyclic SCC has priorities of one parity.

    A run ends inside one SCC, so for such labellings acceptance only depends
    on that SCC.  Returns None for genuinely non-weak labellings.
    """
    succ = [sorted(set(row)) for row in delta]
    bits = [p % 2 == 0 for p in prios]
    for comp in tarjan(succ):
        if not is_cyclic(comp, succ):
            continue
        parities = {prios[q] % 2 for q in comp}
        if len(parities) > 1:
            return None
    return tuple(bits)


def nonempty_states(delta: Sequence[Sequence[int]], prios: Sequence[int]) -> set[int]:
    """States from which some word is accepted (min-even)."""
    succ = [sorted(set(row)) for row in delta]
    good: set[int] = set()
    for e in sorted({p for p in prios if p % 2 == 0}):
        allowed = [q for q in range(len(succ)) if prios[q] >= e]
        for comp in tarjan(succ, allowed):
            if is_cyclic(comp, succ) and any(prios[q] == e for q in comp):
                good.update(comp)
    if not good:
        return set()
    return reachable(predecessors(succ), good)


def _require_parity(aut: OmegaAutomaton, what: str) -> None:
    if not aut.is_parity:
        raise TypeError(f"{what} requires parity acceptance")


def is_empty(aut: OmegaAutomaton) -> bool:
    _require_parity(aut, "is_empty")
    return aut.initial not in nonempty_states(aut.delta, aut.acceptance.priorities)


def accepted_lasso(aut: OmegaAutomaton) -> LassoWord | None:
    """Some accepted lasso, or None when the language is empty."""
    _require_parity(aut, "accepted_lasso")
    prios = aut.acceptance.priorities
    succ = aut.successors()
    for e in sorted({p for p in prios if p % 2 == 0}):
        allowed = [q for q in range(aut.state_count) if prios[q] >= e]
        for comp in tarjan(succ, allowed):
            if not is_cyclic(comp, succ):
                continue
            hits = [q for q in comp if prios[q] == e]
            if not hits:
                continue
            target = hits[0]
            prefix = word_between(aut, aut.initial, target, None)
            if prefix is None:
                continue
            cycle = word_between(aut, target, target, set(comp), nonempty=True)
            return LassoWord(prefix, cycle)
    return None


def word_between(aut, src, dst, allowed, nonempty=False):
    """Shortest letter sequence driving src to dst inside `allowed` (nonempty if asked)."""
    if src == dst and not nonempty:
        return []
    parent: dict[int, tuple[int, int]] = {}
    queue = deque([src])
    visited = {src}
    while queue:
        q = queue.popleft()
        for a in range(aut.alphabet):
            t = aut.delta[q][a]
            if allowed is not None and t not in allowed:
                continue
            if t == dst:
                word = [a]
                while q != src:
                    q, b = parent[q]
                    word.append(b)
                return word[::-1]
            if t not in visited:
                visited.add(t)
                parent[t] = (q, a)
                queue.append(t)
    return None


# -- boolean structure -------------------------------------------------------

_OPS: dict[str, Callable[[bool, bool], bool]] = {
    "and": lambda x, y: x and y,
    "or": lambda x, y: x or y,
    "minus": lambda x, y: x and not y,
    "xor": lambda x, y: x != y,
}


def complement(aut: OmegaAutomaton) -> OmegaAutomaton:
    _require_parity(aut, "complement")
    return aut.with_priorities([p + 1 for p in aut.acceptance.priorities])


def combine(auts: Sequence[OmegaAutomaton], cond: Callable[[list[bool]], bool]) -> OmegaAutomaton:
    """Deterministic product accepting exactly when `cond` holds of the component verdicts.

    Components whose labelling is weak contribute their current SCC bit.  The
    remaining ones feed tagged priorities into a last-appearance record, so
    the result is again a single min-even parity automaton.
    """
    k = auts[0].alphabet
    for x in auts:
        _require_parity(x, "combine")
        if x.alphabet != k:
            raise AlphabetMismatch(f"alphabets {k} and {x.alphabet} differ")
    prios = [compress_priorities(x.acceptance.priorities) for x in auts]
    bits = [weak_bits(x.delta, p) for x, p in zip(auts, prios)]
    strong = [i for i, b in enumerate(bits) if b is None]
    start_states = tuple(x.initial for x in auts)

    def move(states, a):
        return tuple(x.delta[q][a] for x, q in zip(auts, states))

    if not strong:
        def label(states):
            return 0 if cond([bits[i][q] for i, q in enumerate(states)]) else 1

        delta, labels, _ = explore(k, start_states, move, label)
    else:
        mon = RecordMonitor((i, p) for i in strong for p in set(prios[i]))

        def enter(states, record):
            visited = [(i, prios[i][states[i]]) for i in strong]
            rec, hit, hit_set = mon.visit(record, visited)
            verdicts = []
            for i, q in enumerate(states):
                if bits[i] is not None:
                    verdicts.append(bits[i][q])
                else:
                    verdicts.append(bool(min((p for (c, p) in hit_set if c == i), default=1) % 2 == 0))
            return states, rec, mon.priority(hit, cond(verdicts))

        delta, labels, _ = explore(
            k,
            enter(start_states, mon.initial),
            lambda pos, a: enter(move(pos[0], a), pos[1]),
            lambda pos: pos[2],
        )
    return reduce(OmegaAutomaton(k, delta, 0, Parity(tuple(labels))))


def product_combine(a: OmegaAutomaton, b: OmegaAutomaton, op: str) -> OmegaAutomaton:
    """L(a) op L(b) for op in and / or / minus (xor also accepted)."""
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch(f"alphabets {a.alphabet} and {b.alphabet} differ")
    fn = _OPS[op]
    return combine([a, b], lambda v: fn(v[0], v[1]))


def intersect(a: OmegaAutomaton, b: OmegaAutomaton) -> OmegaAutomaton:
    return product_combine(a, b, "and")


def union(a: OmegaAutomaton, b: OmegaAutomaton) -> OmegaAutomaton:
    return product_combine(a, b, "or")


def difference(a: OmegaAutomaton, b: OmegaAutomaton) -> OmegaAutomaton:
    return product_combine(a, b, "minus")


def subset(a: OmegaAutomaton, b: OmegaAutomaton) -> bool:
    return is_empty(difference(a, b))


def equivalent(a: OmegaAutomaton, b: OmegaAutomaton) -> bool:
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch(f"alphabets {a.alphabet} and {b.alphabet} differ")
    return is_empty(difference(a, b)) and is_empty(difference(b, a))


def closure(aut: OmegaAutomaton) -> OmegaAutomaton:
    """Safety automaton for the topological closure of L(aut)."""
    _require_parity(aut, "closure")
    live = nonempty_states(aut.delta, aut.acceptance.priorities)
    k = aut.alphabet
    if aut.initial not in live:
        return empty(k)
    sink = aut.state_count
    delta = []
    for q, row in enumerate(aut.delta):
        if q in live:
            delta.append(tuple(t if t in live else sink for t in row))
        else:
            delta.append((sink,) * k)
    delta.append((sink,) * k)
    prios = [0 if q in live else 1 for q in range(aut.state_count)] + [1]
    return reduce(OmegaAutomaton(k, tuple(delta), aut.initial, Parity(tuple(prios))))


def is_closed(aut: OmegaAutomaton) -> bool:
    return equivalent(aut, closure(aut))


def is_clopen(aut: OmegaAutomaton) -> bool:
    return is_closed(aut) and is_closed(complement(aut))


def residual(aut: OmegaAutomaton, word: Sequence[int]) -> OmegaAutomaton:
    """{X : word^X in L(aut)}."""
    return reduce(aut.with_initial(aut.step(aut.initial, word)))


# -- reduction ---------------------------------------------------------------


def _normal_labels(aut: OmegaAutomaton) -> tuple:
    if not aut.is_parity:
        return aut.acceptance.outputs
    prios = compress_priorities(aut.acceptance.priorities)
    bits = weak_bits(aut.delta, prios)
    if bits is not None:
        return tuple(0 if b else 1 for b in bits)
    return prios


def quotient(alphabet: int, delta, initial: int, labels: Sequence[Hashable]):
    """Coarsest label-respecting congruence on the reachable part, renumbered canonically.

    Returns ``(delta, labels, state_map)``; the new initial state is 0 and
    ``state_map`` sends each reachable old state to its class.
    """
    succ = [sorted(set(row)) for row in delta]
    order = sorted(reachable(succ, [initial]))
    ids0: dict = {}
    block = {q: ids0.setdefault(labels[q], len(ids0)) for q in order}
    count = len(ids0)
    while True:
        ids: dict = {}
        new_block = {}
        for q in order:
            sig = (block[q],) + tuple(block[delta[q][a]] for a in range(alphabet))
            new_block[q] = ids.setdefault(sig, len(ids))
        block = new_block
        if len(ids) == count:
            break
        count = len(ids)
    rep: dict[int, int] = {}
    for q in order:
        rep.setdefault(block[q], q)
    new_delta, out, positions = explore(
        alphabet,
        block[initial],
        lambda b, a: block[delta[rep[b]][a]],
        lambda b: labels[rep[b]],
    )
    renumber = {b: i for i, b in enumerate(positions)}
    return new_delta, out, {q: renumber[block[q]] for q in order}


def reduce(aut: OmegaAutomaton) -> OmegaAutomaton:
    """Drop unreachable states and merge states with equal labels and successor classes.

    Refinement starts from the (normalised) acceptance labels, so merged
    states accept the same language; breadth-first renumbering makes the
    result a canonical form usable as a cache key.
    """
    delta, out, _ = quotient(aut.alphabet, aut.delta, aut.initial, _normal_labels(aut))
    acc = Parity(tuple(out)) if aut.is_parity else WeakOutput(tuple(out))
    return OmegaAutomaton(aut.alphabet, delta, 0, acc)


def canonical_key(aut: OmegaAutomaton) -> tuple:
    r = reduce(aut)
    return (r.alphabet, r.delta, r.labels, r.is_parity)


# -- JSON --------------------------------------------------------------------


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    if not isinstance(text, str) or text.count("/") != 1:
        raise ParseError(f"rational must be a 'num/den' string, got {text!r}")
    num_s, den_s = text.split("/")
    try:
        num, den = int(num_s), int(den_s)
    except ValueError:
        raise ParseError(f"rational must be a 'num/den' string, got {text!r}") from None
    if den <= 0 or den_s.startswith(("+", "-")):
        raise ParseError(f"denominator must be positive in {text!r}")
    x = Fraction(num, den)
    if x.numerator != num or x.denominator != den:
        raise ParseError(f"rational {text!r} is not in reduced form")
    return x


def to_dict(aut: OmegaAutomaton) -> dict:
    if aut.is_parity:
        acc = {"kind": "parity", "priorities": list(aut.acceptance.priorities)}
    else:
        acc = {"kind": "weak-output", "outputs": [format_rational(x) for x in aut.acceptance.outputs]}
    return {
        "alphabet": aut.alphabet,
        "states": aut.state_count,
        "initial": aut.initial,
        "delta": [list(row) for row in aut.delta],
        "acceptance": acc,
    }


def to_json(aut: OmegaAutomaton) -> str:
    return json.dumps(to_dict(aut))


_FIELDS = ("alphabet", "states", "initial", "delta", "acceptance")


def from_dict(doc) -> OmegaAutomaton:
    if not isinstance(doc, dict):
        raise ParseError("automaton document must be a JSON object")
    keys = set(doc)
    missing = [f for f in _FIELDS if f not in keys]
    extra = sorted(keys - set(_FIELDS))
    if missing:
        raise ParseError(f"missing field(s): {', '.join(missing)}")
    if extra:
        raise ParseError(f"unexpected field(s): {', '.join(extra)}")
    k, n, init = doc["alphabet"], doc["states"], doc["initial"]
    for name, v in (("alphabet", k), ("states", n), ("initial", init)):
        if not isinstance(v, int) or isinstance(v, bool):
            raise ParseError(f"field '{name}' must be an integer")
    if k < 2:
        raise ParseError("field 'alphabet' must be at least 2")
    if n < 1 or not 0 <= init < n:
        raise ParseError("field 'states'/'initial' out of range")
    rows = doc["delta"]
    if not isinstance(rows, list) or len(rows) != n:
        raise ParseError(f"field 'delta' must list {n} rows")
    acc = doc["acceptance"]
    if not isinstance(acc, dict) or acc.get("kind") not in ("parity", "weak-output"):
        raise ParseError("field 'acceptance.kind' must be 'parity' or 'weak-output'")
    parity = acc["kind"] == "parity"
    want = "priorities" if parity else "outputs"
    if set(acc) != {"kind", want}:
        raise ParseError(f"field 'acceptance' must hold exactly 'kind' and '{want}'")
    labels = acc[want]
    if not isinstance(labels, list) or len(labels) != n:
        raise ParseError(f"field 'acceptance.{want}' must have {n} entries")
    sink_needed = False
    delta = []
    for s, row in enumerate(rows):
        if not isinstance(row, list) or len(row) > k:
            raise ParseError(f"delta[{s}] must be a list of at most {k} targets")
        row = row + [None] * (k - len(row))
        out = []
        for a, t in enumerate(row):
            if t is None:
                sink_needed = True
                out.append(n)
            elif not isinstance(t, int) or isinstance(t, bool) or not 0 <= t < n:
                raise ParseError(f"delta[{s}][{a}] = {t!r} is not a state")
            else:
                out.append(t)
        delta.append(tuple(out))
    if parity:
        if any(not isinstance(p, int) or isinstance(p, bool) or p < 0 for p in labels):
            raise ParseError("priorities must be natural numbers")
        if sink_needed:
            delta.append((n,) * k)
            labels = labels + [max(labels) | 1]
        return OmegaAutomaton(k, tuple(delta), init, Parity(tuple(labels)))
    if sink_needed:
        raise ParseError("weak-output automata must have a complete transition table")
    return OmegaAutomaton(k, tuple(delta), init, WeakOutput(tuple(parse_rational(x) for x in labels)))


def from_json(text: str) -> OmegaAutomaton:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_dict(doc)


def load(path) -> OmegaAutomaton:
    with open(path, encoding="utf-8") as fh:
        return from_json(fh.read())


def dump(aut: OmegaAutomaton, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(to_json(aut) + "\n")
