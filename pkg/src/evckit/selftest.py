"""The acceptance sweep: every cross-check the package promises, in one run.

The sweep walks a corpus (exhaustive small graphs plus seeded random ones)
and, per graph, compares the fixpoint decider against the game oracle,
checks the Koenig characterization against an independent cover-counting
route, verifies pairwise cover compatibility, replays every emitted defense,
cross-checks the rainbow reducer against brute-force matching enumeration,
and runs the goodness implications.  Results aggregate into one pass/fail
line per criterion.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from multiprocessing import Pool

from .corpus import exhaustive_connected, fixtures, random_connected
from .covers import enumerate_min_vcs, mvc_mask
from .decider import is_spartan, validate_defense_family
from .defense import DefenseStats
from .game import evc, is_spartan_by_game, play_session
from .goodness import is_strongly_good, is_weakly_good, necessary_conditions_report
from .graph import Graph, OddCycle, bipartition, bits, cut_vertices, mask_of
from .matching import hopcroft_karp, max_matching_size
from .reachability import GuardConfiguration

DEFAULT_SEED = 20240

_WORK_KEYS = (
    "graphs",
    "decider_oracle_mismatches",
    "konig_graphs",
    "konig_mismatches",
    "cover_pairs",
    "cover_pair_failures",
    "oracle_spartan",
    "battery_failures",
    "covers_checked",
    "sgwg_violations",
    "cut_violations",
    "replay_failures",
    "rainbow_instances",
    "rainbow_mismatches",
    "families_emitted",
)


def _elementary_by_cover_count(g: Graph) -> bool:
    """Independent route for the Koenig check: a connected bipartite component
    is elementary iff it has exactly two minimum covers (its sides)."""
    from .graph import connected_components

    for comp in connected_components(g):
        sub = g.induced(comp)
        if isinstance(bipartition(sub), OddCycle):
            return False
        cs = enumerate_min_vcs(sub, cap=8)
        sides = bipartition(sub)
        expected = {tuple(sides[0]), tuple(sides[1])}
        if set(cs.covers) != expected:
            return False
    return True


def _examine_graph(payload) -> dict:
    labels, edges = payload
    g = Graph(labels, edges)
    out = {k: 0 for k in _WORK_KEYS}
    out["graphs"] = 1
    out["weak_not_strong"] = None

    stats = DefenseStats()
    verdict = is_spartan(g, stats=stats)
    oracle = is_spartan_by_game(g)
    out["rainbow_instances"] = stats.instances
    out["rainbow_mismatches"] = stats.mismatches
    if verdict.spartan != oracle:
        out["decider_oracle_mismatches"] = 1

    k = mvc_mask(g, g.full_mask)
    if max_matching_size(g) == k:
        out["konig_graphs"] = 1
        if verdict.spartan != _elementary_by_cover_count(g):
            out["konig_mismatches"] = 1

    cs = enumerate_min_vcs(g)
    covers = cs.covers
    # pairwise compatibility via a direct perfect matching between differences
    for i in range(len(covers)):
        mi = mask_of(covers[i])
        for j in range(i + 1, len(covers)):
            mj = mask_of(covers[j])
            t1 = tuple(bits(mi & ~mj))
            t2m = mj & ~mi
            adj = {a: tuple(bits(g.adj_mask[a] & t2m)) for a in t1}
            out["cover_pairs"] += 1
            if len(hopcroft_karp(t1, adj)) != len(t1):
                out["cover_pair_failures"] += 1

    if oracle:
        out["oracle_spartan"] = 1
        battery = necessary_conditions_report(g, k)
        if battery["conclusive_failure"]:
            out["battery_failures"] = 1

    cut_set = set(cut_vertices(g))
    for cover in covers:
        out["covers_checked"] += 1
        cfg = GuardConfiguration.from_vertices(g, cover)
        weak, _ = is_weakly_good(g, cfg)
        strong, _ = is_strongly_good(g, cfg)
        if strong and not weak:
            out["sgwg_violations"] += 1
        if cut_set - set(cover) and weak:
            out["cut_violations"] += 1
        if weak and not strong and out["weak_not_strong"] is None:
            out["weak_not_strong"] = (labels, edges, cover)

    if verdict.spartan and verdict.family is not None:
        out["families_emitted"] = 1
        if validate_defense_family(g, verdict.family):
            out["replay_failures"] = 1
    return out


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number} [{status}] {self.name}: {self.detail}"


@dataclass
class SelftestReport:
    criteria: list[CriterionResult] = field(default_factory=list)
    corpus_size: int = 0
    seed: int = DEFAULT_SEED
    weak_not_strong_instance: tuple | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.criteria)

    def lines(self) -> list[str]:
        out = [c.line() for c in self.criteria]
        out.append(
            f"selftest: {'PASS' if self.passed else 'FAIL'} "
            f"({self.corpus_size} corpus graphs, seed {self.seed})"
        )
        return out


def build_corpus(max_n: int, samples: int, seed: int):
    payloads = []
    for n in range(2, max_n + 1):
        for g in exhaustive_connected(n):
            payloads.append((g.labels, g.edges))
    for idx, n in enumerate((7, 8)):
        for g in random_connected(n, 0.4, samples, seed + idx):
            payloads.append((g.labels, g.edges))
    for g in fixtures().values():
        payloads.append((g.labels, g.edges))
    return payloads


def run_selftest(
    max_n: int = 6,
    samples: int = 300,
    seed: int = DEFAULT_SEED,
    jobs: int | None = None,
    progress=None,
) -> SelftestReport:
    payloads = build_corpus(max_n, samples, seed)
    totals = {k: 0 for k in _WORK_KEYS}
    weak_not_strong = None
    jobs = jobs if jobs is not None else (os.cpu_count() or 1)
    if jobs > 1:
        with Pool(jobs) as pool:
            results = pool.imap(_examine_graph, payloads, chunksize=256)
            weak_not_strong = _accumulate(results, totals, progress)
    else:
        weak_not_strong = _accumulate(
            map(_examine_graph, payloads), totals, progress
        )

    report = SelftestReport(corpus_size=len(payloads), seed=seed)
    report.weak_not_strong_instance = weak_not_strong
    add = report.criteria.append
    add(
        CriterionResult(
            1,
            "characterization equivalence (decider vs game oracle)",
            totals["decider_oracle_mismatches"] == 0,
            f"{totals['graphs']} graphs, "
            f"{totals['decider_oracle_mismatches']} mismatches",
        )
    )
    add(
        CriterionResult(
            2,
            "Koenig characterization (bipartite + essentially elementary)",
            totals["konig_mismatches"] == 0,
            f"{totals['konig_graphs']} Koenig graphs, "
            f"{totals['konig_mismatches']} mismatches",
        )
    )
    add(
        CriterionResult(
            3,
            "minimum-cover pairs joined by a direct perfect matching",
            totals["cover_pair_failures"] == 0,
            f"{totals['cover_pairs']} pairs, "
            f"{totals['cover_pair_failures']} failures",
        )
    )
    add(
        CriterionResult(
            4,
            "necessary-condition battery on oracle-confirmed graphs",
            totals["battery_failures"] == 0,
            f"{totals['oracle_spartan']} graphs confirmed by the game oracle, "
            f"{totals['battery_failures']} battery failures",
        )
    )
    add(
        CriterionResult(
            5,
            "strongly good implies weakly good; covers missing a cut vertex "
            "are not weakly good",
            totals["sgwg_violations"] == 0 and totals["cut_violations"] == 0,
            f"{totals['covers_checked']} covers, "
            f"{totals['sgwg_violations']} implication violations, "
            f"{totals['cut_violations']} cut-vertex violations",
        )
    )
    add(
        CriterionResult(
            6,
            "rainbow reducer agrees with exhaustive matching enumeration",
            totals["rainbow_mismatches"] == 0,
            f"{totals['rainbow_instances']} instances, "
            f"{totals['rainbow_mismatches']} mismatches",
        )
    )
    fixed_pass, fixed_detail = _fixed_values()
    add(CriterionResult(7, "fixed solver values on the named graphs", fixed_pass, fixed_detail))
    add(
        CriterionResult(
            8,
            "defense replays are legal moves crossing the attacked edge",
            totals["replay_failures"] == 0,
            f"{totals['families_emitted']} families + scripted sessions, "
            f"{totals['replay_failures']} replay failures",
        )
    )
    return report


def _accumulate(results, totals, progress):
    weak_not_strong = None
    for i, rec in enumerate(results):
        for k in _WORK_KEYS:
            totals[k] += rec[k]
        if weak_not_strong is None and rec.get("weak_not_strong"):
            weak_not_strong = rec["weak_not_strong"]
        if progress is not None and (i + 1) % 2000 == 0:
            progress(i + 1)
    return weak_not_strong


def _fixed_values() -> tuple[bool, str]:
    fx = fixtures()
    checks = []
    checks.append(("evc(K2)=1", evc(fx["K2"]).value == 1))
    checks.append(("evc(P3)=2", evc(fx["P3"]).value == 2))
    checks.append(("evc(C4)=2", evc(fx["C4"]).value == 2))
    checks.append(("evc(C5)=3", evc(fx["C5"]).value == 3))
    foot = fx["footnote"]
    checks.append(
        (
            "footnote not Spartan, needs more than 2 guards",
            (not is_spartan(foot).spartan) and evc(foot).value > 2,
        )
    )
    checks.append(("P5 not Spartan", not is_spartan(fx["P5"]).spartan))
    # scripted session exercising a live defense replay (raises on violation)
    out = io.StringIO()
    play_session(fx["C4"], 2, io.StringIO("attack a b\nquit\n"), out)
    checks.append(("C4 session defends the first attack", "defense:" in out.getvalue()))
    failed = [name for name, ok in checks if not ok]
    if failed:
        return False, "failed: " + ", ".join(failed)
    return True, f"{len(checks)} fixed checks"
