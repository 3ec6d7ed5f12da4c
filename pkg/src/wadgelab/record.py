"""Last-appearance records turning Muller-style conditions into parity.

A record is a permutation of a small item alphabet, most recent first.
Visiting an item moves it to the front; the position it was found at is
the *hit*.  Along an infinite run the largest hit seen infinitely often is
``|Inf| - 1`` and the record prefix at those hits is exactly the set of
items visited infinitely often, so emitting

    2 * (n - 1 - hit) + (0 if accepted(prefix) else 1)

as a min-even priority realises any condition on that set.
"""

from __future__ import annotations

from typing import Callable, Hashable, Iterable, Sequence

Item = Hashable


class RecordMonitor:
    def __init__(self, items: Iterable[Item]):
        self.items: tuple[Item, ...] = tuple(sorted(set(items), key=repr))
        self.size = len(self.items)

    @property
    def initial(self) -> tuple[Item, ...]:
        return self.items

    @property
    def neutral(self) -> int:
        """Odd priority above every hit priority; used on steps visiting nothing."""
        return 2 * self.size + 1

    def visit(self, record: Sequence[Item], visited: Iterable[Item]):
        """Return ``(new_record, hit, hit_set)``; ``hit`` is -1 if nothing was visited."""
        rec = list(record)
        hit = -1
        hit_set: frozenset = frozenset()
        for item in visited:
            h = rec.index(item)
            if h >= hit:
                hit = h
                hit_set = frozenset(rec[: h + 1])
            del rec[h]
            rec.insert(0, item)
        return tuple(rec), hit, hit_set

    def priority(self, hit: int, accepted: bool) -> int:
        if hit < 0:
            return self.neutral
        return 2 * (self.size - 1 - hit) + (0 if accepted else 1)


def min_even(priorities: Iterable[int]) -> bool:
    return min(priorities) % 2 == 0


def component_accepts(hit_set: frozenset, component: Hashable) -> bool | None:
    """Min-even verdict of one tagged parity component inside a record prefix.

    Items are ``(component, priority)`` pairs; None if the component is absent.
    """
    prios = [p for (c, p) in hit_set if c == component]
    if not prios:
        return None
    return min(prios) % 2 == 0


Condition = Callable[[frozenset], bool]
