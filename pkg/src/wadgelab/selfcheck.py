"""The acceptance suite, shared by the test-suite and ``wadgelab selfcheck``."""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from .automata import (
    canonical_key,
    cylinder,
    intersect,
    is_clopen,
    is_closed,
    is_empty,
    sample_lassos,
    subset,
)
from .bourgain import (
    analyse,
    bourgain_rank,
    brute_force_trees,
    decide_m_by_rank,
    rank_from,
    rank_chain,
    sep_rank,
    stage_tree,
)
from .catalog import delta_ji, delta_jr, function_catalog, pi_complete, sigma_complete
from .games import brute_force_solve, random_arena, solve_parity
from .realfun import char_fun, constant, critical_pairs, interleave, level_sets, m_reducible, make_function, sep_family
from .wadge import (
    TwoBotPair,
    decompose,
    is_self_dual,
    leq_w,
    m_leq,
    m_reduction,
    pass_encode,
    replay_reduction,
    separate_closed,
    shift,
)


@dataclass
class Result:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number}: {self.title} -- {self.detail} ({self.seconds:.2f}s)"


@dataclass
class Certificates:
    """Positive verdicts collected for replay, deduplicated by structure."""

    items: dict = field(default_factory=dict)

    def add(self, x, y, strategy) -> None:
        key = (_key(x), _key(y))
        self.items.setdefault(key, (x, y, strategy))

    def __len__(self) -> int:
        return len(self.items)


def _key(x):
    if isinstance(x, TwoBotPair):
        return ("pair", canonical_key(x.zero_part), canonical_key(x.one_part))
    return ("set", canonical_key(x))


def _timed(number: int, title: str, body: Callable[[], tuple[bool, str]], limit: float | None = None) -> Result:
    t0 = time.perf_counter()
    ok, detail = body()
    dt = time.perf_counter() - t0
    if limit is not None and dt >= limit:
        ok = False
        detail += f"; took {dt:.1f}s, limit {limit:.0f}s"
    return Result(number, title, ok, detail, dt)


# -- 1: solver against brute force ---------------------------------------------------


def check_solver(seed: int = 0, count: int = 500) -> Result:
    def body():
        rng = random.Random(seed)
        agree = 0
        for _ in range(count):
            arena = random_arena(rng, max_nodes=8, max_priority=4)
            sol = solve_parity(arena)
            if brute_force_solve(arena) == sol.regions:
                agree += 1
        return agree == count, f"{agree}/{count} arenas agree"

    return _timed(1, "Zielonka matches brute force", body, limit=10)


# -- 2: catalog order ------------------------------------------------------------------


def catalog_table():
    """``(left name, right name, left, right, expected)`` for the 30 catalog comparisons."""
    rows = []
    for n in range(1, 5):
        s, s1, p, d1 = sigma_complete(n), sigma_complete(n + 1), pi_complete(n), delta_jr(n + 1)
        names = (f"sigma{n}", f"sigma{n + 1}", f"pi{n}", f"djr{n + 1}")
        rows += [
            (names[0], names[1], s, s1, True),
            (names[1], names[0], s1, s, False),
            (names[0], names[2], s, p, False),
            (names[2], names[0], p, s, False),
            (names[3], names[1], d1, s1, True),
            (names[1], names[3], s1, d1, False),
            (names[0], names[3], s, d1, True),
        ]
    rows += [
        ("djr1", "sigma1", delta_jr(1), sigma_complete(1), True),
        ("sigma1", "djr1", sigma_complete(1), delta_jr(1), False),
    ]
    return rows


def check_catalog_order(certs: Certificates | None = None) -> Result:
    def body():
        wrong = []
        for ln, rn, a, b, expected in catalog_table():
            verdict = leq_w(a, b)
            if verdict.holds != expected:
                wrong.append(f"{ln}<={rn}")
            if verdict.holds and certs is not None:
                certs.add(a, b, verdict.certificate)
        n = len(catalog_table())
        return not wrong, f"{n - len(wrong)}/{n} comparisons as expected" + (f"; wrong: {wrong}" if wrong else "")

    return _timed(2, "catalog order truth table", body, limit=30)


# -- 3: replay of reduction strategies --------------------------------------------------


def replay_job(job) -> int:
    """Violations of one strategy on its seeded lassos; top-level so worker processes can run it."""
    strategy, x, y, seed, count = job
    return len(replay_reduction(strategy, x, y, sample_lassos(seed, x.alphabet, count)))


def check_certificates(certs: Certificates, seed: int = 0, count: int = 1000, jobs: int = 1) -> Result:
    def body():
        work = [(s, x, y, seed, count) for x, y, s in certs.items.values()]
        if jobs > 1:
            with ProcessPoolExecutor(jobs) as pool:
                counts = list(pool.map(replay_job, work, chunksize=8))
        else:
            counts = [replay_job(w) for w in work]
        failures = sum(1 for c in counts if c)
        n = len(certs)
        return n > 0 and failures == 0, f"{n} distinct strategies x {count} lassos, {failures} with violations"

    return _timed(3, "strategies replay without violations", body)


# -- 4-6: m-degrees of the function catalog ----------------------------------------------


def m_matrix(fs: dict, certs: Certificates | None = None) -> dict:
    out = {}
    for a, f in fs.items():
        for b, g in fs.items():
            verdict = m_reducible(f, g)
            out[(a, b)] = verdict.holds
            if verdict.holds and certs is not None:
                for t, (s, strategy) in verdict.certificate.items():
                    certs.add(level_sets(f, t), level_sets(g, s), strategy)
    return out


def check_rank_rule(fs: dict, certs: Certificates | None = None) -> Result:
    def body():
        matrix = m_matrix(fs, certs)
        wrong = [(a, b) for (a, b), v in matrix.items() if v != decide_m_by_rank(fs[a], fs[b])]
        ranks = sorted({analyse(f).alpha for f in fs.values()})
        types = sorted({analyse(f).type.value for f in fs.values()})
        n = len(matrix)
        detail = f"{n - len(wrong)}/{n} ordered pairs agree over {len(fs)} functions, ranks {ranks}, types {types}"
        ok = not wrong and len(fs) >= 20 and n >= 380 and ranks == [1, 2, 3, 4]
        return ok, detail + (f"; disagree: {wrong[:5]}" if wrong else "")

    return _timed(4, "m-reducibility equals the rank/type rule", body, limit=300)


def m_classes(fs: dict, matrix: dict) -> list[list[str]]:
    classes: list[list[str]] = []
    for name in fs:
        for c in classes:
            if matrix[(name, c[0])] and matrix[(c[0], name)]:
                c.append(name)
                break
        else:
            classes.append([name])
    return classes


def _strictly_below(matrix, c, d) -> bool:
    return matrix[(c[0], d[0])] and not matrix[(d[0], c[0])]


def check_intro_structure(fs: dict) -> Result:
    def body():
        matrix = m_matrix(fs)
        classes = m_classes(fs, matrix)
        by_rank: dict = {}
        for c in classes:
            by_rank.setdefault(bourgain_rank(fs[c[0]]), []).append(c)
        problems = []
        low = by_rank.get(1, [])
        if len(low) != 2:
            problems.append(f"rank 1 has {len(low)} classes")
        else:
            const = next((c for c in low if "const0" in c), None)
            other = next((c for c in low if c is not const), None)
            if const is None or not _strictly_below(matrix, const, other) or "cont2" not in other:
                problems.append("rank 1 is not constants below continuous")
        for r in range(2, 5):
            cs = by_rank.get(r, [])
            if len(cs) != 4:
                problems.append(f"rank {r} has {len(cs)} classes")
                continue
            names = {x: next(c for c in cs if x in c) for x in (f"L{r}", f"R{r}", f"O{r}", f"T{r}")}
            lc, rc, oc, tc = (names[f"{t}{r}"] for t in "LROT")
            if len({id(c) for c in (lc, rc, oc, tc)}) != 4:
                problems.append(f"rank {r}: ladder functions collapse")
                continue
            incomparable = not matrix[(lc[0], rc[0])] and not matrix[(rc[0], lc[0])]
            chain = all(_strictly_below(matrix, x, oc) for x in (lc, rc)) and _strictly_below(matrix, oc, tc)
            if not (incomparable and chain):
                problems.append(f"rank {r}: expected L,R incomparable below O below T")
        for r in range(1, 4):
            for c in by_rank.get(r, []):
                for d in by_rank.get(r + 1, []):
                    if not _strictly_below(matrix, c, d):
                        problems.append(f"{c[0]} not below {d[0]}")
        counts = {r: len(cs) for r, cs in sorted(by_rank.items())}
        return not problems, f"classes per rank {counts}" + (f"; {problems}" if problems else "")

    return _timed(5, "degree structure of ranks 1-4", body)


def class_heights(fs: dict, matrix: dict) -> dict[str, int]:
    """Length of the longest strictly increasing chain of classes ending at each function."""
    classes = m_classes(fs, matrix)
    height: dict[int, int] = {}

    def h(i):
        if i not in height:
            below = [j for j in range(len(classes)) if _strictly_below(matrix, classes[j], classes[i])]
            height[i] = max((h(j) + 1 for j in below), default=0)
        return height[i]

    return {name: h(i) for i, c in enumerate(classes) for name in c}


def check_rank_formula(fs: dict) -> Result:
    def body():
        matrix = m_matrix(fs)
        heights = class_heights(fs, matrix)
        wrong = []
        for name, f in fs.items():
            a = analyse(f)
            if rank_from(a.alpha, a.type) != heights[name]:
                wrong.append(name)
        return not wrong, f"{len(fs) - len(wrong)}/{len(fs)} functions match" + (f"; wrong: {wrong}" if wrong else "")

    return _timed(6, "m-rank formula equals chain height", body)


# -- 7: separation rank ------------------------------------------------------------------


def check_sep_rank(fs: dict, certs: Certificates | None = None) -> Result:
    def body():
        wrong = []
        for name, f in fs.items():
            n = sep_rank(f)
            if n != bourgain_rank(f):
                wrong.append(name)
            if certs is not None:
                family = sep_family(f)
                target = decompose(TwoBotPair.of_set(delta_ji(n, f.alphabet)))
                for i, (m, strategy) in m_reduction(family, target).items():
                    certs.add(family[i], target[m], strategy)
        return not wrong, f"{len(fs) - len(wrong)}/{len(fs)} functions have equal ranks" + (
            f"; wrong: {wrong}" if wrong else ""
        )

    return _timed(7, "separation rank equals Bourgain rank", body)


# -- 8: derivative against a brute-force computation ---------------------------------------


def oracle_functions() -> dict:
    from fractions import Fraction

    return {
        "constant": constant(0),
        "chi_open": char_fun(sigma_complete(1)),
        "staircase": make_function(2, [(0, 1), (1, 2), (2, 2)], [0, Fraction(1, 2), 1]),
    }


def check_derivative_oracle(depth: int = 12) -> Result:
    def body():
        compared = mismatched = 0
        for f in oracle_functions().values():
            for t in critical_pairs(f):
                chain = rank_chain(f, t)
                symbolic = [stage_tree(s, depth) for s in chain.stages]
                compared += 1
                if symbolic != brute_force_trees(f, t, depth):
                    mismatched += 1
        return mismatched == 0, f"{compared - mismatched}/{compared} chains match on depth-{depth} prefix trees"

    return _timed(8, "symbolic derivative equals brute force", body)


# -- 9: pass encoding ---------------------------------------------------------------------


def check_pass_encoding(k: int = 3) -> Result:
    def body():
        inputs = [f(n, k) for n in range(1, 6) for f in (sigma_complete, pi_complete)]
        good = 0
        for a in inputs:
            if is_self_dual(a):
                continue
            b = pass_encode(a, verify=False)
            if b.alphabet == 2 and leq_w(a, b).holds and leq_w(b, a).holds:
                good += 1
        return good == len(inputs), f"{good}/{len(inputs)} encodings equivalent to their input"

    return _timed(9, "pass encoding preserves the Wadge degree", body)


# -- 10: truncated interleave ---------------------------------------------------------------


def interleave_level(n: int):
    """Interleaving of the sigma and pi indicators one level down (constant 0 at level 1)."""
    from fractions import Fraction

    fs = [] if n == 1 else [char_fun(sigma_complete(n - 1)), char_fun(pi_complete(n - 1))]
    return interleave(fs, [Fraction(x) for x in (6, 5, 4, 3, 2, 1)])


def check_interleave(levels: int = 3) -> Result:
    def body():
        good = 0
        for n in range(1, levels + 1):
            g = interleave_level(n)
            target = decompose(TwoBotPair.of_set(delta_jr(n)))
            family = sep_family(g)
            if m_leq(family, target) and m_leq(target, family):
                good += 1
        return good == levels, f"{good}/{levels} levels m-equivalent to the join-reducible Delta set"

    return _timed(10, "interleave is join-reducible complete at its level", body)


# -- 11: clopen separation ------------------------------------------------------------------


def closed_catalog():
    """Closed sets built from catalog pieces over alphabets 2 and 3."""
    out = []
    for k in (2, 3):
        zeros = pi_complete(1, k)
        out.append(zeros)
        out += [shift(a, zeros) for a in range(k)]
        out += [cylinder(k, [a, b]) for a in range(k) for b in range(k)]
        out.append(delta_ji(1, k))
    return out


def disjoint_closed_pairs(count: int = 20):
    sets = closed_catalog()
    pairs = []
    for i, a in enumerate(sets):
        for b in sets[i + 1:]:
            if a.alphabet == b.alphabet and is_empty(intersect(a, b)):
                pairs.append((a, b))
    # spread the choice over the whole list
    step = max(1, len(pairs) // count)
    return pairs[::step][:count]


def check_separation(count: int = 20, max_depth: int = 20) -> Result:
    def body():
        pairs = disjoint_closed_pairs(count)
        good = 0
        for a, b in pairs:
            assert is_closed(a) and is_closed(b)
            c = separate_closed(a, b, max_depth)
            if subset(a, c) and is_empty(intersect(c, b)) and is_clopen(c):
                good += 1
        return good == count == len(pairs), f"{good}/{count} separators verified"

    return _timed(11, "clopen separation of disjoint closed sets", body)


# -- driver -----------------------------------------------------------------------------------


def run_all(seed: int = 0, jobs: int = 1, report: Callable[[Result], None] | None = None) -> list[Result]:
    certs = Certificates()
    fs = function_catalog()
    steps = [
        lambda: check_solver(seed),
        lambda: check_catalog_order(certs),
        lambda: check_rank_rule(fs, certs),
        lambda: check_intro_structure(fs),
        lambda: check_rank_formula(fs),
        lambda: check_sep_rank(fs, certs),
        lambda: check_derivative_oracle(),
        lambda: check_pass_encoding(),
        lambda: check_interleave(),
        lambda: check_separation(),
        lambda: check_certificates(certs, seed, jobs=jobs),
    ]
    results = []
    for step in steps:
        r = step()
        results.append(r)
        if report is not None:
            report(r)
    return sorted(results, key=lambda r: r.number)
