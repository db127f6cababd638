"""Weakly/strongly good covers and configurations, plus the full necessary-condition battery.

A guard arrangement is *weakly good* when no subset T of the unoccupied
vertices leaves some component of G - T holding only exactly as many guards
as that component's cover number (the attacker could then drag a guard out of
the component and win).  *Strongly good* additionally demands that after the
forced exit of any frontier guard, the remaining guards inside the component
can still reach some cover of the component in a single simultaneous step.

Searches enumerate candidate subsets of the independent side exhaustively
(sound but exponential; sizes are capped and refusals are explicit).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .covers import enumerate_covers_up_to, enumerate_min_vcs, min_vc_containing, mvc_mask
from .errors import PreconditionError, ResourceLimitError
from .graph import Graph, bits, mask_components, mask_of, neighbors_of_set
from .matching import HallWitness, hall_check
from .reachability import GuardConfiguration, move_feasible_counts

BAD_SET_SEARCH_CAP = 16  # max size of the unoccupied side we will enumerate
INDEPENDENT_SET_CAP = 18  # exhaustive non-maximal independent set scans


@dataclass(frozen=True)
class BadSetCertificate:
    """Evidence that a guard arrangement is not weakly/strongly good."""

    kind: str  # "weakly_bad" | "strongly_bad"
    support: tuple[int, ...]
    counts: tuple[int, ...]
    bad_set: tuple[int, ...]
    component: tuple[int, ...]
    exit_vertex: int | None = None


def _as_config(g: Graph, c) -> GuardConfiguration:
    if isinstance(c, GuardConfiguration):
        return c
    return GuardConfiguration.from_vertices(g, c)


def _require_cover_support(g: Graph, cfg: GuardConfiguration) -> int:
    sup = cfg.support_mask
    for u, v in g.edges:
        if not (sup >> u & 1) and not (sup >> v & 1):
            raise PreconditionError(
                f"guard support leaves edge {g.labels[u]} {g.labels[v]} uncovered"
            )
    return sup


def _unoccupied_subsets(g: Graph, sup: int):
    """Non-empty subsets of the unoccupied side, by (size, lex) order."""
    free = [v for v in range(g.n) if not (sup >> v & 1)]
    if len(free) > BAD_SET_SEARCH_CAP:
        raise ResourceLimitError(
            f"bad-set search over {len(free)} unoccupied vertices exceeds the cap "
            f"({BAD_SET_SEARCH_CAP})"
        )
    for size in range(1, len(free) + 1):
        for combo in itertools.combinations(free, size):
            yield mask_of(combo)


def _guards_in(cfg: GuardConfiguration, comp_mask: int) -> int:
    return sum(cfg.counts[v] for v in bits(comp_mask))


def is_weakly_good(g: Graph, config) -> tuple[bool, BadSetCertificate | None]:
    """No removable subset of unoccupied vertices pins a component at exactly
    its cover number of guards."""
    cfg = _as_config(g, config)
    sup = _require_cover_support(g, cfg)
    for t_mask in _unoccupied_subsets(g, sup):
        rem = g.full_mask & ~t_mask
        for comp in mask_components(g, rem):
            guards = _guards_in(cfg, comp)
            need = mvc_mask(g, comp)
            assert guards >= need, "cover support cannot under-fill a component"
            if guards == need:
                return False, BadSetCertificate(
                    kind="weakly_bad",
                    support=cfg.support,
                    counts=cfg.counts,
                    bad_set=tuple(bits(t_mask)),
                    component=tuple(bits(comp)),
                )
    return True, None


def _replacement_reachable(
    g: Graph, comp_mask: int, residual: tuple[int, ...], guards_left: int
) -> bool:
    """Can ``residual`` (guards inside the component, one already gone) reach
    some configuration of ``guards_left`` guards whose support covers the
    component?  Movement is confined to the component automatically because
    every target guard sits inside it."""
    comp_vertices = tuple(bits(comp_mask))
    sub = g.induced(comp_vertices)
    back = {i: v for i, v in enumerate(comp_vertices)}
    covers, _ = enumerate_covers_up_to(sub, guards_left)
    for cover_mask in covers:
        support = [back[i] for i in bits(cover_mask)]
        if not support:
            if guards_left == 0:
                return True
            continue
        extra = guards_left - len(support)
        if extra < 0:
            continue
        for distribution in itertools.combinations_with_replacement(support, extra):
            target = [0] * g.n
            for v in support:
                target[v] = 1
            for v in distribution:
                target[v] += 1
            if move_feasible_counts(g, residual, tuple(target)):
                return True
    return False


def is_strongly_good(g: Graph, config) -> tuple[bool, BadSetCertificate | None]:
    """No subset T of unoccupied vertices admits a component and a frontier
    guard whose forced exit strands the remaining guards (no one-step move to
    a cover of the component with one guard fewer).

    Strongly good implies weakly good; that implication is re-asserted as an
    internal cross-check.
    """
    cfg = _as_config(g, config)
    sup = _require_cover_support(g, cfg)
    certificate = None
    for t_mask in _unoccupied_subsets(g, sup):
        rem = g.full_mask & ~t_mask
        nt = neighbors_of_set(g, t_mask)
        for comp in mask_components(g, rem):
            exits = nt & comp & sup
            if not exits:
                continue
            guards = _guards_in(cfg, comp)
            need = mvc_mask(g, comp)
            if guards == need:
                # the exit leaves too few guards to cover the component at all
                certificate = BadSetCertificate(
                    kind="strongly_bad",
                    support=cfg.support,
                    counts=cfg.counts,
                    bad_set=tuple(bits(t_mask)),
                    component=tuple(bits(comp)),
                    exit_vertex=next(bits(exits)),
                )
                break
            for v in bits(exits):
                residual = list(cfg.counts)
                for w in range(g.n):
                    if not (comp >> w & 1):
                        residual[w] = 0
                residual[v] -= 1
                if not _replacement_reachable(g, comp, tuple(residual), guards - 1):
                    certificate = BadSetCertificate(
                        kind="strongly_bad",
                        support=cfg.support,
                        counts=cfg.counts,
                        bad_set=tuple(bits(t_mask)),
                        component=tuple(bits(comp)),
                        exit_vertex=v,
                    )
                    break
            if certificate:
                break
        if certificate:
            break
    if certificate is None:
        ok, _ = is_weakly_good(g, cfg)
        if not ok:
            raise AssertionError(
                "strongly good arrangement failed the weakly-good cross-check"
            )
        return True, None
    return False, certificate


def revalidate_bad_set(g: Graph, cert: BadSetCertificate) -> bool:
    """Recompute everything a certificate claims, independently of the search."""
    cfg = GuardConfiguration(cert.counts)
    sup = cfg.support_mask
    t_mask = mask_of(cert.bad_set)
    if t_mask & sup or not t_mask:
        return False
    comp_mask = mask_of(cert.component)
    if comp_mask not in mask_components(g, g.full_mask & ~t_mask):
        return False
    guards = _guards_in(cfg, comp_mask)
    if cert.kind == "weakly_bad":
        return guards == mvc_mask(g, comp_mask)
    if cert.kind == "strongly_bad":
        v = cert.exit_vertex
        if v is None or not (comp_mask >> v & 1) or cfg.counts[v] < 1:
            return False
        if not (neighbors_of_set(g, t_mask) >> v & 1):
            return False
        residual = list(cfg.counts)
        for w in range(g.n):
            if not (comp_mask >> w & 1):
                residual[w] = 0
        residual[v] -= 1
        return not _replacement_reachable(g, comp_mask, tuple(residual), guards - 1)
    return False


# -- the necessary-condition battery ---------------------------------------


CONFIG_ENUMERATION_LIMIT = 200_000


def count_configurations(g: Graph, k: int) -> int:
    """Number of k-guard configurations whose support is a vertex cover."""
    import math

    covers, _ = enumerate_covers_up_to(g, k)
    total = 0
    for cover_mask in covers:
        s = cover_mask.bit_count()
        if 0 < s <= k:
            total += math.comb(k - 1, s - 1)
    return total


def _enumerate_configurations(g: Graph, k: int):
    """All k-guard configurations whose support is a vertex cover."""
    covers, _ = enumerate_covers_up_to(g, k)
    for cover_mask in covers:
        support = tuple(bits(cover_mask))
        if not support:
            continue
        extra = k - len(support)
        if extra < 0:
            continue
        for distribution in itertools.combinations_with_replacement(support, extra):
            counts = [0] * g.n
            for v in support:
                counts[v] = 1
            for v in distribution:
                counts[v] += 1
            yield GuardConfiguration(tuple(counts))


def necessary_conditions_report(
    g: Graph,
    k: int,
    *,
    cover_cap: int = 10_000,
    independent_cap: int = INDEPENDENT_SET_CAP,
    config_vertex_cap: int = 10,
) -> dict:
    """Evaluate every necessary condition for the eternal vertex cover number
    to equal ``k``, with certificates for each failure.

    At ``k == mvc(g)`` this is the Spartan-mode battery.  Any failed condition
    is conclusive: the graph needs more than ``k`` guards.
    """
    from .graph import is_connected, require_analysis_ready

    require_analysis_ready(g)
    if not is_connected(g):
        raise PreconditionError("the condition battery expects a connected graph")
    cs = enumerate_min_vcs(g, cap=cover_cap)
    if k < cs.size:
        raise PreconditionError(f"k={k} is below the cover number {cs.size}")
    spartan_mode = k == cs.size
    conditions = []

    def add(
        cid,
        description,
        passed,
        certificate=None,
        partial=False,
        details=None,
        conclusive=True,
    ):
        # the first four conditions witness necessity only at k = mvc; above
        # that they stay informational (their failure does not bound evc by k)
        conditions.append(
            {
                "id": cid,
                "description": description,
                "passed": bool(passed),
                "partial": bool(partial),
                "conclusive_at_k": bool(conclusive),
                "certificate": certificate,
                "details": details,
            }
        )

    # (a) every vertex lies in some minimum cover
    failed_vertex = None
    for v in range(g.n):
        if min_vc_containing(g, v) is None:
            failed_vertex = v
            break
    add(
        "vertex-in-min-cover",
        "every vertex belongs to some minimum vertex cover",
        failed_vertex is None,
        certificate=None
        if failed_vertex is None
        else {"kind": "vertex_in_no_min_cover", "vertex": failed_vertex},
        conclusive=spartan_mode,
    )

    # (b) every maximum independent set is saturated into its complement
    sat_cert = None
    partial_b = cs.truncated
    for cover in cs.covers:
        ind = tuple(sorted(set(range(g.n)) - set(cover)))
        if not ind:
            continue
        res = hall_check(g, ind, cover)
        if isinstance(res, HallWitness):
            _check_cover_claim(g, res, cs)
            sat_cert = {
                "kind": "hall_violator",
                "independent_set": ind,
                "violator": res.violator,
                "neighborhood": res.neighborhood,
            }
            break
    add(
        "independent-set-saturation",
        "every maximum independent set has a matching saturating it into its complement",
        sat_cert is None,
        certificate=sat_cert,
        partial=partial_b,
        conclusive=spartan_mode,
    )

    # (c) cover number at least half the vertex count
    ok_half = 2 * cs.size >= g.n
    add(
        "cover-at-least-half",
        "minimum vertex cover size is at least n/2",
        ok_half,
        certificate=None
        if ok_half
        else {"kind": "mvc_below_half", "mvc": cs.size, "n": g.n},
        conclusive=spartan_mode,
    )

    # (d) no non-maximal independent set with |N(I)| = |I|
    tight_cert = None
    partial_d = g.n > independent_cap
    if not partial_d:
        tight_cert = _find_tight_independent(g)
    add(
        "no-tight-non-maximal-independent-set",
        "no non-maximal independent set I has |N(I)| = |I|",
        tight_cert is None,
        certificate=tight_cert,
        partial=partial_d,
        conclusive=spartan_mode,
    )

    # (e)/(f) every vertex in the support of a weakly / strongly good k-config
    for cid, desc, checker in (
        ("weakly-good-coverage", "weakly good", is_weakly_good),
        ("strongly-good-coverage", "strongly good", is_strongly_good),
    ):
        cert = None
        partial = False
        if spartan_mode:
            good_cache: dict[tuple[int, ...], bool] = {}
            for v in range(g.n):
                holding = [c for c in cs.covers if v in c]
                found = False
                for cover in holding:
                    if cover not in good_cache:
                        good_cache[cover], _ = checker(
                            g, GuardConfiguration.from_vertices(g, cover)
                        )
                    if good_cache[cover]:
                        found = True
                        break
                if not found:
                    cert = {
                        "kind": f"no_{cid.replace('-', '_')}",
                        "k": k,
                        "vertex": v,
                        "covers_containing": holding,
                    }
                    break
            partial = cs.truncated
        else:
            if (
                g.n > config_vertex_cap
                or count_configurations(g, k) > CONFIG_ENUMERATION_LIMIT
            ):
                partial = True
            else:
                covered = set()
                for cfg in _enumerate_configurations(g, k):
                    ok, _ = checker(g, cfg)
                    if ok:
                        covered.update(cfg.support)
                        if len(covered) == g.n:
                            break
                missing = sorted(set(range(g.n)) - covered)
                if missing:
                    cert = {
                        "kind": f"no_{cid.replace('-', '_')}",
                        "k": k,
                        "vertex": missing[0],
                    }
        add(
            cid,
            f"every vertex is in the support of some {desc} {k}-guard configuration",
            cert is None,
            certificate=cert,
            partial=partial,
        )

    failed = [c for c in conditions if not c["passed"] and c["conclusive_at_k"]]
    return {
        "k": k,
        "mvc": cs.size,
        "spartan_mode": spartan_mode,
        "conditions": conditions,
        "verdict": "exceeds_k" if failed else "necessary_conditions_hold",
        "conclusive_failure": bool(failed),
    }


def _check_cover_claim(g: Graph, witness: HallWitness, cs) -> None:
    # with a deficient set X on the independent side, no minimum cover can
    # take more than |N(X)| vertices from X u N(X) (otherwise swapping the
    # X-part for N(X) would shrink it); a violation means the enumeration or
    # the Hall search is broken
    pool = set(witness.violator) | set(witness.neighborhood)
    bound = len(witness.neighborhood)
    for cover in cs.covers:
        if len(pool & set(cover)) > bound:
            raise AssertionError("minimum cover exceeds the deficiency ceiling")


def _find_tight_independent(g: Graph) -> dict | None:
    """Smallest non-empty, non-maximal independent set with |N(I)| = |I|."""
    n = g.n
    adj = g.adj_mask
    for size in range(1, n + 1):
        for combo in itertools.combinations(range(n), size):
            m = mask_of(combo)
            independent = all(not (adj[v] & m) for v in combo)
            if not independent:
                continue
            nb = neighbors_of_set(g, m)
            # non-maximal: some vertex outside I u N(I) stays independent of I
            if (g.full_mask & ~m & ~nb) == 0:
                continue
            if nb.bit_count() == size:
                return {
                    "kind": "tight_independent_set",
                    "independent_set": combo,
                    "neighborhood": tuple(bits(nb)),
                }
    return None
