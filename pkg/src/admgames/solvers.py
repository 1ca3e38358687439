"""Zero-sum and one-player value engines over finite arenas.

One coalition game pits a distinguished maximizing player against all other
players merged into a single minimizer.  For INF/SUP/LIMINF/LIMSUP the
per-vertex game value always belongs to the finite set of edge weights, so
values are computed by sweeping threshold games (safety, reachability,
Buchi, coBuchi) over that set.  Mean-payoff values are computed by bounded
horizon value iteration on integer-scaled weights followed by rounding to
the unique rational with denominator bounded by the vertex count; positional
mean-payoff strategies come from an energy-style progress measure.

One-player optima (all players cooperating, or the coalition minimizing
against a fixed strategy) reduce to cycle analysis: strongly connected
components, per-component cycle metrics, and propagation over the
condensation.  `solve_parity` is a recursive attractor-based solver used by
the synthesis layer.

INF (SUP) arenas are handled with LIMINF (LIMSUP) cycle semantics; callers
pass prefix-independence rebuilds for those measures, on which the two
coincide because weight sequences are monotone along every play.
"""

from __future__ import annotations

import sys
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .games import Game, Lasso, PayoffKind, payoff_of_lasso

__all__ = [
    "CoalitionGame",
    "ParityGame",
    "Region",
    "attractor",
    "solve_threshold",
    "zero_sum_value",
    "one_player_max_value",
    "one_player_values",
    "solve_parity",
    "fixed_strategy_extremes",
    "worst_case_strategy",
    "cooperative_witness_lasso",
]


def _key(x):
    """Total deterministic ordering for heterogeneous state values."""
    return repr(x)


@dataclass(frozen=True)
class CoalitionGame:
    """An arena viewed as max player `player` against the merged coalition."""

    game: Game
    player: int

    def is_max(self, v) -> bool:
        return self.game.owner[v] == self.player

    def weight(self, u, v) -> Fraction:
        return self.game.weight(u, v, self.player)


@dataclass(frozen=True)
class Region:
    """Winning vertex set plus a memoryless strategy on it for the winner."""

    vertices: frozenset
    strategy: dict


@dataclass(frozen=True)
class ParityGame:
    """Two-player arena with vertex priorities.

    Player 0 wins a play iff the maximum priority seen infinitely often is
    even.
    """

    owner: dict  # vertex -> 0 | 1
    priority: dict  # vertex -> int >= 0
    succ: dict  # vertex -> tuple of successors
    init: object = None

    @property
    def vertices(self):
        return sorted(self.owner)


# ---------------------------------------------------------------------------
# basic graph machinery


def tarjan_sccs(nodes, succ):
    """Iterative Tarjan; components are emitted in reverse topological order."""
    index = {}
    low = {}
    onstack = set()
    stack = []
    comps = []
    counter = [0]

    for root in nodes:
        if root in index:
            continue
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        onstack.add(root)
        work = [(root, iter(succ(root)))]
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    onstack.add(w)
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if w in onstack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    onstack.remove(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def reachable_from(start, succ):
    seen = {start}
    todo = [start]
    while todo:
        v = todo.pop()
        for w in succ(v):
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def bfs_path(start, goal_pred, succ):
    """Canonical shortest path (successors explored in sorted order)."""
    if goal_pred(start):
        return [start]
    parent = {start: None}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for w in sorted(succ(v), key=_key):
                if w in parent:
                    continue
                parent[w] = v
                if goal_pred(w):
                    path = [w]
                    cur = v
                    while cur is not None:
                        path.append(cur)
                        cur = parent[cur]
                    path.reverse()
                    return path
                nxt.append(w)
        frontier = nxt
    return None


def _shortest_cycle_through(u, succ):
    """Canonical shortest cycle through u, as a vertex list starting at u."""
    if u in succ(u):
        return [u]
    parent = {}
    frontier = []
    for w in sorted(succ(u), key=_key):
        if w not in parent:
            parent[w] = None
            frontier.append(w)
    while frontier:
        nxt = []
        for v in frontier:
            for w in sorted(succ(v), key=_key):
                if w == u:
                    path = [v]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    path.reverse()
                    return [u] + path
                if w not in parent:
                    parent[w] = v
                    nxt.append(w)
        frontier = nxt
    return None


# ---------------------------------------------------------------------------
# attractors


def _attr(is_mine, succ_map, targets, within, target_edges=frozenset()):
    """Least set `mine` can force into the targets or across a target edge.

    Returns (attractor set, strategy moves recorded for `mine` vertices added
    outside the vertex targets).  Deterministic: vertices seed in sorted
    order and propagate breadth-first.
    """
    within = set(within)
    moves = {v: [w for w in succ_map[v] if w in within] for v in within}
    preds: dict = {v: [] for v in within}
    for v in sorted(within, key=_key):
        for w in moves[v]:
            preds[w].append(v)

    att = set()
    strat = {}
    queue = deque()

    def activate(v, move=None):
        att.add(v)
        if move is not None and is_mine(v):
            strat[v] = move
        queue.append(v)

    target_set = set(targets) & within
    remaining = {}
    for v in sorted(within, key=_key):
        if v in target_set:
            activate(v)
            continue
        sat = [w for w in moves[v] if (v, w) in target_edges]
        if is_mine(v):
            if sat:
                activate(v, min(sat, key=_key))
        else:
            remaining[v] = len(moves[v]) - len(sat)
            if moves[v] and remaining[v] == 0:
                activate(v)

    while queue:
        u = queue.popleft()
        for v in preds[u]:
            if v in att:
                continue
            if (v, u) in target_edges:
                continue  # already counted at seed time
            if is_mine(v):
                activate(v, u)
            else:
                remaining[v] -= 1
                if remaining[v] == 0:
                    activate(v)
    return att, strat


def attractor(g: Game, player: int, targets=(), target_edges=()) -> Region:
    """Attractor of `player` to a vertex set and/or an edge set."""
    att, strat = _attr(
        lambda v: g.owner[v] == player, g.succ, set(targets), set(g.owner),
        set(target_edges),
    )
    return Region(vertices=frozenset(att), strategy=strat)


# ---------------------------------------------------------------------------
# threshold games


def _buchi(is_reacher, succ_map, target_edges, within):
    """Winning set and positional strategy for traversing target edges i.o."""
    V = set(within)
    while V:
        te = {(u, w) for (u, w) in target_edges if u in V and w in V}
        att, strat = _attr(is_reacher, succ_map, set(), V, te)
        rest = V - att
        if not rest:
            return V, strat
        esc, _ = _attr(lambda v: not is_reacher(v), succ_map, rest, V)
        V -= esc
    return set(), {}


def _cobuchi(is_mine, succ_map, good_edges, within):
    """Winning set/strategy for eventually traversing only good edges.

    Two-level fixpoint: the inner stage computes the largest set the player
    can hold using good edges or one-step drops into the already-won set;
    drops strictly decrease the inclusion level, so only finitely many
    non-good edges occur along any play following the recorded moves.
    """
    within = set(within)
    won: set = set()
    strat = {}
    while True:
        y = set(within)
        changed = True
        while changed:
            changed = False
            for v in sorted(y, key=_key):
                ins = [u for u in succ_map[v] if u in within]
                if not ins:
                    ok = False
                elif is_mine(v):
                    ok = any(
                        u in won or ((v, u) in good_edges and u in y) for u in ins
                    )
                else:
                    ok = all(
                        u in won or ((v, u) in good_edges and u in y) for u in ins
                    )
                if not ok:
                    y.discard(v)
                    changed = True
        if y == won:
            break
        for v in sorted(y - won, key=_key):
            if is_mine(v):
                good = [
                    u for u in sorted(succ_map[v], key=_key)
                    if u in y and (v, u) in good_edges
                ]
                drop = [u for u in sorted(succ_map[v], key=_key) if u in won]
                strat[v] = good[0] if good else drop[0]
        won = y

    bad = {
        (u, w) for u in within for w in succ_map[u] if w in within
    } - good_edges
    loser_win, _ = _buchi(lambda v: not is_mine(v), succ_map, bad, within)
    assert won == within - loser_win, "coBuchi region must complement the Buchi dual"
    return won, strat


def solve_threshold(cg: CoalitionGame, measure: PayoffKind, theta: Fraction) -> Region:
    """Exact winning region of "payoff >= theta" for the maximizing player.

    SUP is reachability of a heavy edge, INF safety against light edges,
    LIMSUP a Buchi condition on heavy edges, LIMINF the dual coBuchi
    condition.  Mean-payoff thresholds are not handled here.
    """
    if measure.is_mean_payoff:
        raise ValueError("mean-payoff thresholds are solved by zero_sum_value")
    g = cg.game
    within = set(g.owner)
    heavy = {e for e, w in g.weights.items() if w[cg.player - 1] >= theta}

    if measure is PayoffKind.SUP:
        att, strat = _attr(cg.is_max, g.succ, set(), within, heavy)
        return Region(frozenset(att), strat)
    if measure is PayoffKind.INF:
        safe = set(within)
        changed = True
        while changed:
            changed = False
            for v in sorted(safe, key=_key):
                if cg.is_max(v):
                    ok = any(w in safe and (v, w) in heavy for w in g.succ[v])
                else:
                    ok = all(w in safe and (v, w) in heavy for w in g.succ[v])
                if not ok:
                    safe.discard(v)
                    changed = True
        strat = {
            v: min((w for w in g.succ[v] if w in safe and (v, w) in heavy), key=_key)
            for v in sorted(safe, key=_key)
            if cg.is_max(v)
        }
        return Region(frozenset(safe), strat)
    if measure is PayoffKind.LIMSUP:
        win, strat = _buchi(cg.is_max, g.succ, heavy, within)
        return Region(frozenset(win), strat)
    win, strat = _cobuchi(cg.is_max, g.succ, heavy, within)
    return Region(frozenset(win), strat)


# ---------------------------------------------------------------------------
# zero-sum values


def _scaled_int_weights(g: Game, player: int):
    denom = lcm(*(w[player - 1].denominator for w in g.weights.values()))
    intw = {e: int(w[player - 1] * denom) for e, w in g.weights.items()}
    return intw, denom


def _mp_value_iteration(cg: CoalitionGame) -> dict:
    """Exact mean-payoff game values via bounded-horizon iteration.

    After K > 4n^2(n-1)W steps the K-step average is within 1/(2n(n-1)) of
    the game value, which pins down the unique rational with denominator
    at most n.
    """
    g = cg.game
    verts = sorted(g.owner)
    n = len(verts)
    intw, denom = _scaled_int_weights(g, cg.player)
    wmax = max(1, max(abs(w) for w in intw.values()))
    steps = 4 * n * n * max(1, n - 1) * wmax + 1

    idx = {v: i for i, v in enumerate(verts)}
    edges = [[(idx[u2], intw[(v, u2)]) for u2 in g.succ[v]] for v in verts]
    maxer = [cg.is_max(v) for v in verts]
    nu = [0] * n
    for _ in range(steps):
        nxt = [0] * n
        for i in range(n):
            vals = [w + nu[j] for (j, w) in edges[i]]
            nxt[i] = max(vals) if maxer[i] else min(vals)
        nu = nxt

    out = {}
    for v, i in idx.items():
        approx = Fraction(nu[i], steps)
        val = approx.limit_denominator(n)
        if n > 1:
            assert abs(val - approx) < Fraction(1, 2 * n * (n - 1))
        out[v] = val / denom
    return out


def zero_sum_value(cg: CoalitionGame, measure: PayoffKind) -> dict:
    """Per-vertex value of the max player against the merged coalition."""
    if measure.is_mean_payoff:
        return _mp_value_iteration(cg)
    weights = sorted({w[cg.player - 1] for w in cg.game.weights.values()})
    vals = {}
    for theta in weights:
        region = solve_threshold(cg, measure, theta)
        for v in region.vertices:
            vals[v] = theta
    assert set(vals) == set(cg.game.owner), "every play reaches the minimum weight"
    return vals


# ---------------------------------------------------------------------------
# one-player optima (cooperative values, fixed-strategy extremes)


def _effective(measure: PayoffKind) -> PayoffKind:
    # INF/SUP callers pass prefix-independence rebuilds, where cycle
    # semantics are exact because weights are monotone along plays.
    if measure is PayoffKind.INF:
        return PayoffKind.LIMINF
    if measure is PayoffKind.SUP:
        return PayoffKind.LIMSUP
    if measure is PayoffKind.MP_SUP:
        return PayoffKind.MP_INF
    return measure


def _has_cycle(nodes, edges):
    nodeset = set(nodes)
    adj = {v: [] for v in nodeset}
    for (u, v) in edges:
        if u in nodeset and v in nodeset:
            adj[u].append(v)
    for comp in tarjan_sccs(sorted(nodeset), lambda v: adj[v]):
        if len(comp) > 1 or comp[0] in adj[comp[0]]:
            return True
    return False


def _karp_min_mean(comp, edges):
    """Karp's minimum cycle mean inside one strongly connected component."""
    comp = sorted(comp)
    n = len(comp)
    idx = {v: i for i, v in enumerate(comp)}
    inc = [[] for _ in comp]  # incoming: (src index, weight)
    for (u, v, w) in edges:
        inc[idx[v]].append((idx[u], w))
    d = [[None] * n for _ in range(n + 1)]
    d[0][0] = Fraction(0)  # root = comp[0]
    for k in range(1, n + 1):
        for v in range(n):
            best = None
            for (u, w) in inc[v]:
                if d[k - 1][u] is not None:
                    cand = d[k - 1][u] + w
                    if best is None or cand < best:
                        best = cand
            d[k][v] = best
    mu = None
    for v in range(n):
        if d[n][v] is None:
            continue
        worst = None
        for k in range(n):
            if d[k][v] is None:
                continue
            cand = Fraction(d[n][v] - d[k][v], n - k)
            if worst is None or cand > worst:
                worst = cand
        if worst is not None and (mu is None or worst < mu):
            mu = worst
    return mu


def _scc_metric(comp, internal_edges, measure: PayoffKind, maximize: bool):
    """Best (or worst) cycle payoff inside one SCC, None if it has no cycle."""
    if not internal_edges:
        return None
    ws = sorted({w for (_, _, w) in internal_edges})
    if measure is PayoffKind.LIMINF:
        if maximize:
            for theta in reversed(ws):
                sub = [(u, v) for (u, v, w) in internal_edges if w >= theta]
                if _has_cycle(comp, sub):
                    return theta
            return None
        return min(ws)  # every internal edge of an SCC lies on a cycle
    if measure is PayoffKind.LIMSUP:
        if maximize:
            return max(ws)
        for theta in ws:
            sub = [(u, v) for (u, v, w) in internal_edges if w <= theta]
            if _has_cycle(comp, sub):
                return theta
        return None
    if maximize:
        neg = [(u, v, -w) for (u, v, w) in internal_edges]
        mu = _karp_min_mean(comp, neg)
        return None if mu is None else -mu
    return _karp_min_mean(comp, internal_edges)


def one_player_values(nodes, succ, wfun, measure: PayoffKind, maximize: bool) -> dict:
    """Optimal payoff from every node when a single controller picks all moves.

    For prefix-independent cycle measures this is the best (worst) reachable
    cycle metric; nodes that reach no cycle get None.
    """
    measure = _effective(measure)
    nodes = sorted(nodes, key=_key)
    comps = tarjan_sccs(nodes, succ)
    comp_of = {}
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci

    best = {}
    for ci, comp in enumerate(comps):
        cs = set(comp)
        internal = [
            (u, v, wfun(u, v)) for u in comp for v in succ(u)
            if v in cs and (len(comp) > 1 or u == v)
        ]
        value = _scc_metric(comp, internal, measure, maximize)
        for u in comp:
            for v in succ(u):
                cj = comp_of[v]
                if cj != ci and best[cj] is not None:
                    if value is None:
                        value = best[cj]
                    else:
                        value = max(value, best[cj]) if maximize else min(value, best[cj])
        best[ci] = value
    return {v: best[comp_of[v]] for v in nodes}


def one_player_max_value(g: Game, player: int) -> dict:
    """Cooperative optimum per vertex: all players maximize player's payoff."""
    w = g.player_weights(player)
    return one_player_values(
        g.owner, lambda v: g.succ[v], lambda u, v: w[(u, v)], g.measure, True
    )


def fixed_strategy_extremes(prod, player: int) -> dict:
    """Adversary-minimized and -maximized payoff per product state.

    Under a fixed strategy the product is a one-player arena of the
    coalition, so both extremes are plain cycle optimizations.
    """
    arena = prod.arena

    def wfun(s, t):
        return arena.weight(s[0], t[0], player)

    lo = one_player_values(prod.states, lambda s: prod.succ[s], wfun, arena.measure, False)
    hi = one_player_values(prod.states, lambda s: prod.succ[s], wfun, arena.measure, True)
    return {s: (lo[s], hi[s]) for s in prod.states}


# ---------------------------------------------------------------------------
# positional worst-case-optimal strategies


def _mp_threshold_strategy(cg: CoalitionGame, lam: Fraction):
    """Energy progress measure for "mean payoff >= lam"; returns (set, moves)."""
    g = cg.game
    intw, denom = _scaled_int_weights(g, cg.player)
    # weights relative to the threshold, as exact integers
    w2 = {e: intw[e] * lam.denominator - lam.numerator * denom for e in intw}
    verts = sorted(g.owner)
    cap = len(verts) * max(1, max(abs(x) for x in w2.values()))
    top = cap + 1
    f = {v: 0 for v in verts}

    def need(v, u):
        return min(top, max(0, f[u] - w2[(v, u)]))

    changed = True
    while changed:
        changed = False
        for v in verts:
            cands = [need(v, u) for u in g.succ[v]]
            t = min(cands) if cg.is_max(v) else max(cands)
            if t > f[v]:
                f[v] = t
                changed = True

    win = {v for v in verts if f[v] <= cap}
    strat = {}
    for v in sorted(win):
        if cg.is_max(v):
            strat[v] = min(u for u in g.succ[v] if need(v, u) == f[v])
    return win, strat


def worst_case_strategy(g: Game, player: int, aval: dict) -> dict:
    """One memoryless strategy achieving aval(v) from every vertex at once.

    Built level by level: each vertex follows the witness strategy of the
    threshold game at its own value; the guaranteed level never drops along
    induced plays, so the guarantees compose.
    """
    cg = CoalitionGame(g, player)
    per_level = {}
    for lam in sorted(set(aval.values())):
        if g.measure.is_mean_payoff:
            win, strat = _mp_threshold_strategy(cg, lam)
        else:
            region = solve_threshold(cg, g.measure, lam)
            win, strat = region.vertices, region.strategy
        per_level[lam] = (win, strat)

    out = {}
    for v in sorted(g.owner):
        if g.owner[v] != player:
            continue
        win, strat = per_level[aval[v]]
        assert v in win, f"vertex {v} must win its own value threshold"
        out[v] = strat[v]
    return out


# ---------------------------------------------------------------------------
# parity games


def solve_parity(pg: ParityGame) -> tuple[Region, Region]:
    """Recursive attractor-based solver; returns regions for players 0 and 1."""
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * len(pg.owner) + 1000))

    succ = pg.succ
    owner = pg.owner
    prio = pg.priority

    def attr(player, targets, within):
        return _attr(lambda v: owner[v] == player, succ, targets, within)

    def solve(within):
        if not within:
            return (set(), {}), (set(), {})
        d = max(prio[v] for v in within)
        p = 0 if d % 2 == 0 else 1
        top = {v for v in within if prio[v] == d}
        a, a_strat = attr(p, top, within)
        sub = solve(within - a)
        wq_sub, sq_sub = sub[1 - p]
        if not wq_sub:
            strat = dict(sub[p][1])
            strat.update(a_strat)
            for v in sorted(top, key=_key):
                if owner[v] == p and v not in strat:
                    strat[v] = min((w for w in succ[v] if w in within), key=_key)
            win = (set(within), strat)
            return (win, (set(), {})) if p == 0 else ((set(), {}), win)
        b, b_strat = attr(1 - p, wq_sub, within)
        sub2 = solve(within - b)
        q_strat = dict(sub2[1 - p][1])
        q_strat.update(b_strat)
        q_strat.update(sq_sub)
        q_win = (sub2[1 - p][0] | b, q_strat)
        p_win = sub2[p]
        return (p_win, q_win) if p == 0 else (q_win, p_win)

    (w0, s0), (w1, s1) = solve(set(pg.owner))
    r0 = Region(frozenset(w0), {v: s0[v] for v in s0 if owner[v] == 0})
    r1 = Region(frozenset(w1), {v: s1[v] for v in s1 if owner[v] == 1})
    return r0, r1


# ---------------------------------------------------------------------------
# cooperative witness lassos


def cooperative_witness_lasso(
    g: Game, player: int, start, value: Fraction, allowed=None
) -> Lasso:
    """Deterministic lasso from `start` with the given cooperative payoff.

    The whole lasso stays inside `allowed` (default: all vertices).  Prefers
    the shortest canonical prefix and cycle found by breadth-first search.
    """
    allowed = set(g.owner) if allowed is None else set(allowed)
    w = g.player_weights(player)

    def sub_succ(v):
        return tuple(t for t in g.succ[v] if t in allowed)

    measure = _effective(g.measure)
    if measure is PayoffKind.LIMINF:
        def good_succ(v):
            return tuple(t for t in sub_succ(v) if w[(v, t)] >= value)

        cyclic = set()
        for comp in tarjan_sccs(sorted(allowed), good_succ):
            if len(comp) > 1 or comp[0] in good_succ(comp[0]):
                cyclic |= set(comp)
        path = bfs_path(start, lambda v: v in cyclic, sub_succ)
        assert path is not None, "cooperative value must be realizable"
        entry = path[-1]
        cycle = _shortest_cycle_through(
            entry, lambda v: tuple(t for t in good_succ(v) if t in cyclic)
        )
    elif measure is PayoffKind.LIMSUP:
        reach = reachable_from(start, sub_succ)
        target = None
        for comp in tarjan_sccs(sorted(allowed & reach), sub_succ):
            cs = set(comp)
            for u in sorted(cs & reach):
                for v in sorted(sub_succ(u)):
                    if v in cs and w[(u, v)] == value and (len(comp) > 1 or u == v):
                        if target is None or (u, v) < target:
                            target = (u, v)
        assert target is not None, "cooperative value must be realizable"
        entry = target[0]
        path = bfs_path(start, lambda v: v == entry, sub_succ)
        if target[0] == target[1]:
            cycle = [entry]
        else:
            back = bfs_path(target[1], lambda v: v == entry, sub_succ)
            cycle = [entry] + back[:-1]
    else:
        cycle = None
        for comp in tarjan_sccs(sorted(reachable_from(start, sub_succ)), sub_succ):
            cs = set(comp)
            internal = [
                (u, v, w[(u, v)]) for u in comp for v in sub_succ(u)
                if v in cs and (len(comp) > 1 or u == v)
            ]
            metric = _scc_metric(comp, internal, PayoffKind.MP_INF, True)
            if metric == value:
                cycle = _critical_cycle(comp, internal, value)
                break
        assert cycle is not None, "cooperative value must be realizable"
        entry = cycle[0]
        path = bfs_path(start, lambda v: v == entry, sub_succ)

    assert cycle is not None and cycle[0] == entry
    lasso = Lasso(prefix=tuple(path[:-1]), cycle=tuple(cycle))
    got = payoff_of_lasso(g.measure, g, player, lasso)
    assert got == value, f"witness payoff {got} != {value}"
    return lasso


def _critical_cycle(comp, internal_edges, mu: Fraction):
    """A cycle of mean exactly mu inside an SCC whose max cycle mean is mu."""
    comp = sorted(comp)
    root = comp[0]
    adj = {v: [] for v in comp}
    for (u, v, w) in internal_edges:
        adj[u].append((v, w - mu))
    dist = {v: None for v in comp}
    dist[root] = Fraction(0)
    changed = True
    for _ in range(len(comp) + 2):
        if not changed:
            break
        changed = False
        for u in comp:
            if dist[u] is None:
                continue
            for (v, dw) in adj[u]:
                cand = dist[u] + dw
                if dist[v] is None or cand > dist[v]:
                    dist[v] = cand
                    changed = True
    assert not changed, "no positive cycles exist after shifting by the mean"
    tight = {v: [] for v in comp}
    for u in comp:
        if dist[u] is None:
            continue
        for (v, dw) in adj[u]:
            if dist[v] == dist[u] + dw:
                tight[u].append(v)
    for c in tarjan_sccs(comp, lambda v: tight[v]):
        cs = set(c)
        if len(c) > 1 or c[0] in tight[c[0]]:
            entry = min(c)
            return _shortest_cycle_through(
                entry, lambda v: tuple(t for t in tight[v] if t in cs)
            )
    raise AssertionError("critical cycle must exist")
