"""Exact eternal-vertex-cover game solver: safety fixpoint over guard multisets.

State space for k guards: every k-multiset of vertices whose support is a
vertex cover.  The attacker picks any edge; edges with both endpoints guarded
are answered by swapping the two guards (the position is unchanged), so the
solve iterates only over attacks with exactly one guarded endpoint.  A
defender response is any state reachable by a simultaneous one-step movement
in which some guard crosses the attacked edge; states that lose every
response are removed in synchronous rounds until the set stabilizes.

This solver is the package's independent ground truth: it shares the
one-step-movement primitive with the reachability module but none of the
matching-based decision machinery.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field

from .covers import enumerate_covers_up_to, mvc_mask
from .errors import IntegrityError, PreconditionError, ResourceLimitError
from .graph import Graph, bits, connected_components, is_connected
from .reachability import (
    GuardConfiguration,
    compatible_configs,
    move_feasible_counts,
)

DEFAULT_STATE_BUDGET = 5_000_000
STATE_BUDGET_ENV = "EVCKIT_STATE_BUDGET"

Counts = tuple[int, ...]


def _state_budget(budget: int | None) -> int:
    if budget is not None:
        return budget
    env = os.environ.get(STATE_BUDGET_ENV)
    return int(env) if env else DEFAULT_STATE_BUDGET


def enumerate_states(g: Graph, k: int, budget: int | None = None) -> list[Counts]:
    """All k-guard configurations whose support covers the graph, canonical order."""
    limit = _state_budget(budget)
    covers, truncated = enumerate_covers_up_to(g, k)
    if truncated:
        raise ResourceLimitError("cover scan exceeded its limit")
    states: list[Counts] = []
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
            states.append(tuple(counts))
            if len(states) > limit:
                raise ResourceLimitError(
                    f"state space exceeds the budget of {limit} states"
                )
    return sorted(states)


@dataclass
class GameOutcome:
    k: int
    defender_wins: bool
    states: list[Counts]
    survivors: list[Counts]
    ranks: dict[Counts, int]  # removal round; survivors are absent
    removal_trace: list[tuple[Counts, tuple[int, int]]]
    _graph: Graph = field(repr=False, default=None)

    def strategy_response(self, counts: Counts, attack: tuple[int, int]):
        """Deterministic surviving response (target, moves) or None."""
        return _best_response(
            self._graph, self, counts, attack, surviving_only=True
        )


def _oriented_threats(g: Graph, counts: Counts):
    for a, b in g.edges:
        ga, gb = counts[a] > 0, counts[b] > 0
        if ga and not gb:
            yield a, b
        elif gb and not ga:
            yield b, a


def _feasible(g, memo, c_from: Counts, c_to: Counts) -> bool:
    key = (c_from, c_to)
    got = memo.get(key)
    if got is None:
        got = move_feasible_counts(g, c_from, c_to)
        memo[key] = got
    return got


def _minus(counts: Counts, v: int) -> Counts:
    lst = list(counts)
    lst[v] -= 1
    return tuple(lst)


def solve_guard_game(
    g: Graph, k: int, *, budget: int | None = None, prune_weakly_bad: bool = False
) -> GameOutcome:
    """Solve the k-guard safety game on a connected graph.

    ``prune_weakly_bad`` pre-removes configurations that are provably losing
    because some removable set of unoccupied vertices pins a component at its
    cover number; it is a sound optimization, off by default, and verified
    not to change outcomes on small corpora.
    """
    if not is_connected(g):
        raise PreconditionError("the game solver expects a connected graph")
    if k < 1:
        raise PreconditionError("at least one guard is required")
    states = enumerate_states(g, k, budget)
    if prune_weakly_bad:
        from .goodness import is_weakly_good

        states = [
            c for c in states if is_weakly_good(g, GuardConfiguration(c))[0]
        ]
    index = {c: i for i, c in enumerate(states)}
    n_states = len(states)
    if n_states == 0:
        return GameOutcome(
            k=k,
            defender_wins=False,
            states=[],
            survivors=[],
            ranks={},
            removal_trace=[],
            _graph=g,
        )

    # candidate responders per vertex: states with a guard on v
    with_guard: dict[int, list[int]] = {v: [] for v in range(g.n)}
    for j, c in enumerate(states):
        for v in range(g.n):
            if c[v]:
                with_guard[v].append(j)

    memo: dict = {}
    threats: list[list[tuple[int, int]]] = []
    responders: list[list[list[int]]] = []
    rev: dict[int, list[tuple[int, int]]] = {j: [] for j in range(n_states)}
    for i, c in enumerate(states):
        tlist = list(_oriented_threats(g, c))
        threats.append(tlist)
        per_threat = []
        for t_idx, (u, v) in enumerate(tlist):
            c_from = _minus(c, u)
            resp = []
            for j in with_guard[v]:
                if _feasible(g, memo, c_from, _minus(states[j], v)):
                    resp.append(j)
                    rev[j].append((i, t_idx))
            per_threat.append(resp)
        responders.append(per_threat)

    alive = [True] * n_states
    counts_left = [[len(r) for r in per] for per in responders]
    ranks: dict[Counts, int] = {}
    trace: list[tuple[Counts, tuple[int, int]]] = []
    round_no = 0
    pending = [
        i
        for i in range(n_states)
        if any(cnt == 0 for cnt in counts_left[i])
    ]
    while pending:
        for i in pending:
            alive[i] = False
            ranks[states[i]] = round_no
            t_idx = next(
                t for t, cnt in enumerate(counts_left[i]) if cnt == 0
            )
            trace.append((states[i], threats[i][t_idx]))
        for i in pending:
            for (who, t_idx) in rev[i]:
                if alive[who]:
                    counts_left[who][t_idx] -= 1
        round_no += 1
        pending = [
            i
            for i in range(n_states)
            if alive[i] and any(cnt == 0 for cnt in counts_left[i])
        ]
    survivors = [states[i] for i in range(n_states) if alive[i]]
    return GameOutcome(
        k=k,
        defender_wins=bool(survivors),
        states=states,
        survivors=survivors,
        ranks=ranks,
        removal_trace=trace,
        _graph=g,
    )


def _best_response(
    g: Graph,
    outcome: GameOutcome,
    counts: Counts,
    attack: tuple[int, int],
    *,
    surviving_only: bool,
):
    """Deterministic response to an attack from an arbitrary configuration.

    Prefers surviving states; otherwise (lost positions) the latest-removed
    reachable state, which maximizes the rounds the defender can still hold.
    """
    a, b = attack
    if counts[a] and counts[b]:
        return counts, ((a, b), (b, a))
    if counts[a]:
        u, v = a, b
    elif counts[b]:
        u, v = b, a
    else:
        return None
    memo: dict = {}
    c_from = _minus(counts, u)
    survivors_set = {tuple(s) for s in outcome.survivors}
    best = None
    best_key = None
    for target in outcome.states:
        if target[v] == 0:
            continue
        if not _feasible(g, memo, c_from, _minus(target, v)):
            continue
        surviving = target in survivors_set
        if surviving_only and not surviving:
            continue
        rank = outcome.ranks.get(target, 1 << 30)  # survivors rank highest
        key = (0 if surviving else 1, -rank, target)
        if best_key is None or key < best_key:
            best_key = key
            best = target
    if best is None:
        return None
    moves = transition_moves(g, counts, best, u, v)
    return best, moves


def transition_moves(
    g: Graph, c_from: Counts, c_to: Counts, u: int, v: int
) -> tuple[tuple[int, int], ...]:
    """Simultaneous one-step moves realizing c_from -> c_to with a guard
    crossing u -> v; stationary guards are omitted."""
    ok, ps = compatible_configs(
        g, GuardConfiguration(_minus(c_from, u)), GuardConfiguration(_minus(c_to, v))
    )
    if not ok:
        raise IntegrityError("transition re-validation failed")
    return ((u, v),) + ps.moves()


def replay_moves(g: Graph, counts: Counts, moves) -> Counts:
    """Apply simultaneous one-step moves; raises when illegal."""
    outs = [0] * g.n
    ins = [0] * g.n
    for x, y in moves:
        if not g.has_edge(x, y):
            raise IntegrityError(f"move along non-edge {g.labels[x]} {g.labels[y]}")
        outs[x] += 1
        ins[y] += 1
    result = []
    for w in range(g.n):
        if outs[w] > counts[w]:
            raise IntegrityError(f"more guards leave {g.labels[w]} than stand there")
        result.append(counts[w] - outs[w] + ins[w])
    return tuple(result)


@dataclass
class EvcResult:
    value: int
    mvc: int
    per_component: list[dict]
    outcomes: dict[int, bool]  # k -> defender wins (for the largest component run)


def evc(g: Graph, *, budget: int | None = None) -> EvcResult:
    """Exact eternal vertex cover number, summed over components.

    For each component, k runs upward from the cover number; a win at
    2 * mvc is guaranteed (guarding both endpoints of a maximum matching),
    so failing that bound raises an integrity error.
    """
    total = 0
    total_mvc = 0
    per_component = []
    outcomes: dict[int, bool] = {}
    for comp in connected_components(g):
        sub = g.induced(comp)
        k0 = mvc_mask(sub, sub.full_mask)
        total_mvc += k0
        if sub.n == 1 or sub.m == 0:
            per_component.append(
                {"vertices": list(g.labels_of(comp)), "mvc": 0, "evc": 0}
            )
            continue
        value = None
        tried = {}
        for k in range(max(k0, 1), 2 * k0 + 1):
            try:
                outcome = solve_guard_game(sub, k, budget=budget)
            except ResourceLimitError as exc:
                raise ResourceLimitError(
                    f"state budget exhausted while solving k={k}",
                    bracket=(k, 2 * k0),
                ) from exc
            tried[k] = outcome.defender_wins
            if outcome.defender_wins:
                value = k
                break
        if value is None:
            raise IntegrityError(
                "defender must win with twice the cover number of guards"
            )
        total += value
        per_component.append(
            {"vertices": list(g.labels_of(comp)), "mvc": k0, "evc": value}
        )
        if sub.n == max(len(c) for c in connected_components(g)):
            outcomes = tried
    return EvcResult(
        value=total, mvc=total_mvc, per_component=per_component, outcomes=outcomes
    )


def is_spartan_by_game(g: Graph, *, budget: int | None = None) -> bool:
    """Defender holds with mvc guards on every component (the oracle route)."""
    for comp in connected_components(g):
        sub = g.induced(comp)
        if sub.m == 0:
            continue
        k = mvc_mask(sub, sub.full_mask)
        if not solve_guard_game(sub, k, budget=budget).defender_wins:
            return False
    return True


# -- interactive session -----------------------------------------------------


def play_session(g: Graph, k: int, in_stream, out_stream) -> list[dict]:
    """Line-oriented attacker REPL over the solved strategy.

    Commands: ``attack U V``, ``hint``, ``quit``.  Returns the event log;
    every defense event re-validates during the session.
    """
    outcome = solve_guard_game(g, k)
    events: list[dict] = []

    def say(line: str) -> None:
        out_stream.write(line + "\n")

    def show_guards(counts: Counts) -> None:
        labels = []
        for v in range(g.n):
            labels.extend([g.labels[v]] * counts[v])
        say("guards: " + " ".join(labels))

    if outcome.defender_wins:
        current = outcome.survivors[0]
        say(f"(defender holds with {k} guards)")
    else:
        if outcome.states:
            best_rank = max(outcome.ranks.get(s, -1) for s in outcome.states)
            current = next(
                s for s in outcome.states if outcome.ranks.get(s, -1) == best_rank
            )
        else:
            say(f"no cover-supported placement of {k} guards exists; "
                "the attacker wins immediately")
            events.append({"event": "immediate_loss", "k": k})
            return events
        say(f"warning: the defender cannot hold with {k} guards")
    show_guards(current)
    events.append({"event": "start", "guards": current, "winning": outcome.defender_wins})

    while True:
        out_stream.write("> ")
        try:
            out_stream.flush()
        except AttributeError:
            pass
        line = in_stream.readline()
        if not line:
            break
        tokens = line.split()
        if not tokens:
            continue
        cmd = tokens[0].lower()
        if cmd == "quit":
            say("bye")
            events.append({"event": "quit"})
            break
        if cmd == "hint":
            wins = _winning_attacks(g, outcome, current)
            if wins:
                say(
                    "winning attacks: "
                    + ", ".join(f"{g.labels[a]} {g.labels[b]}" for a, b in wins)
                )
            else:
                say("winning attacks: none")
            events.append({"event": "hint", "attacks": wins})
            continue
        if cmd == "attack" and len(tokens) == 3:
            try:
                a = g.index(tokens[1])
                b = g.index(tokens[2])
            except Exception:
                say(f"unknown vertex in: {tokens[1]} {tokens[2]}")
                continue
            if not g.has_edge(a, b):
                say(f"not an edge: {tokens[1]} {tokens[2]}")
                continue
            if current[a] == 0 and current[b] == 0:
                say(f"attacker wins: edge {tokens[1]} {tokens[2]} is unguarded")
                events.append({"event": "attacker_win", "edge": (a, b)})
                break
            if current[a] and current[b]:
                say(f"defense: swap {tokens[1]} <-> {tokens[2]}")
                show_guards(current)
                events.append(
                    {"event": "swap", "edge": (a, b), "guards": current}
                )
                continue
            response = _best_response(
                g, outcome, current, (a, b), surviving_only=False
            )
            if response is None:
                # forced crossing into a non-cover position
                u, v = (a, b) if current[a] else (b, a)
                nxt = list(current)
                nxt[u] -= 1
                nxt[v] += 1
                nxt = tuple(nxt)
                say(f"defense: {g.labels[u]}->{g.labels[v]}")
                show_guards(nxt)
                events.append(
                    {
                        "event": "defense",
                        "edge": (a, b),
                        "moves": ((u, v),),
                        "guards": nxt,
                        "cover": False,
                    }
                )
                current = nxt
                continue
            target, moves = response
            validated = replay_moves(g, current, moves)
            if validated != target:
                raise IntegrityError("session defense failed replay validation")
            say(
                "defense: "
                + " ".join(f"{g.labels[x]}->{g.labels[y]}" for x, y in moves)
            )
            show_guards(target)
            events.append(
                {
                    "event": "defense",
                    "edge": (a, b),
                    "moves": moves,
                    "guards": target,
                    "cover": True,
                }
            )
            current = target
            continue
        say(f"cannot parse command: {line.strip()}")
    return events


def _winning_attacks(g: Graph, outcome: GameOutcome, counts: Counts):
    survivors_set = {tuple(s) for s in outcome.survivors}
    wins = []
    memo: dict = {}
    for a, b in g.edges:
        ga, gb = counts[a] > 0, counts[b] > 0
        if not ga and not gb:
            wins.append((a, b))
            continue
        if ga and gb:
            continue
        u, v = (a, b) if ga else (b, a)
        c_from = _minus(counts, u)
        defended = False
        for target in outcome.survivors:
            if target[v] == 0:
                continue
            if _feasible(g, memo, c_from, _minus(target, v)):
                defended = True
                break
        if not defended:
            wins.append((a, b))
    return wins
