"""Shared test utilities: fixtures, play simulation, dominance probes."""

from __future__ import annotations

from itertools import product as iproduct
from pathlib import Path

from admgames import Game, Lasso, MooreStrategy, payoff_of_lasso
from admgames.solvers import cooperative_witness_lasso, worst_case_strategy

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


def load_game(name: str) -> Game:
    from admgames import parse_game

    return parse_game(fixture_text(name))


def load_strategy(name: str):
    from admgames import parse_strategy

    return parse_strategy(fixture_text(name))


def memoryless(player: int, moves: dict) -> MooreStrategy:
    return MooreStrategy(
        player=player,
        memory=1,
        init_mem=0,
        update={},
        moves={(0, v): t for v, t in moves.items()},
    )


def profiles(g: Game, verts):
    """All assignments of one successor to each of the given vertices."""
    verts = sorted(verts)
    for combo in iproduct(*(g.succ[v] for v in verts)):
        yield dict(zip(verts, combo))


def own_vertices(g: Game, player: int):
    return [v for v in g.owner if g.owner[v] == player]


def other_vertices(g: Game, player: int):
    return [v for v in g.owner if g.owner[v] != player]


def lasso_of_choice(g: Game, choice: dict) -> Lasso:
    """Play induced from init by a total memoryless successor choice."""
    seq = [g.init]
    seen = {g.init: 0}
    while True:
        v = choice[seq[-1]]
        if v in seen:
            k = seen[v]
            return Lasso(prefix=tuple(seq[:k]), cycle=tuple(seq[k:]))
        seen[v] = len(seq)
        seq.append(v)


def run_moore(g: Game, s: MooreStrategy, tau: dict) -> Lasso:
    """Play a Moore strategy against a memoryless adversary profile."""
    v, m = g.init, s.init_mem
    seq = [(v, m)]
    seen = {(v, m): 0}
    while True:
        v2 = s.moves[(m, v)] if g.owner[v] == s.player else tau[v]
        m2 = s.next_memory(m, v2)
        key = (v2, m2)
        if key in seen:
            k = seen[key]
            verts = [x[0] for x in seq]
            return Lasso(prefix=tuple(verts[:k]), cycle=tuple(verts[k:]))
        seen[key] = len(seq)
        seq.append(key)
        v, m = v2, m2


def switch_dominator(g: Game, table, player: int, sigma_moves: dict, verdict):
    """Strategy that weakly dominates a rejected memoryless strategy.

    Follows sigma until the violation history has been traced, then switches:
    to uniform worst-case play when the rejection was a value drop, or to a
    guarantee-preserving cooperative pursuit when the payoff was pinned.
    Only supports prefix-independent arenas (identity rebuild).
    """
    arena = table.arena
    assert table.transformed.identity
    h = verdict.witness
    aval = {v: table.aval[(player, v)] for v in arena.owner}
    wco = worst_case_strategy(arena, player, aval)

    if verdict.violated == "eq4":
        anchor = h[-1]
        allowed = {u for u in arena.owner if aval[u] >= aval[anchor]}
        lasso = cooperative_witness_lasso(
            arena, player, anchor, table.acval[(player, anchor)], allowed
        )
        nodes = lasso.prefix + lasso.cycle
        cstart = len(lasso.prefix)
        switch_entry = ("L", 0)
    else:
        nodes, cstart = None, None
        switch_entry = ("W", None)

    def nxt_pos(p):
        return p + 1 if p + 1 < len(nodes) else cstart

    ids = {}
    order = []

    def mid(mode):
        if mode not in ids:
            ids[mode] = len(order)
            order.append(mode)
        return ids[mode]

    start = switch_entry if len(h) == 1 else ("f", 0)
    update = {}
    moves_tbl = {}
    todo = [start]
    mid(start)
    seen = {start}
    while todo:
        mode = todo.pop()
        m = ids[mode]
        kind = mode[0]
        if kind in ("W", "free"):
            src = sigma_moves if kind == "free" else wco
            for v in sorted(arena.owner):
                if arena.owner[v] == player:
                    moves_tbl[(m, v)] = src[v]
            continue
        if kind == "f":
            k = mode[1]
            cur = h[k]
            if arena.owner[cur] == player:
                moves_tbl[(m, cur)] = sigma_moves[cur]
            for v2 in arena.successors(cur):
                if v2 == h[k + 1]:
                    nmode = switch_entry if k + 1 == len(h) - 1 else ("f", k + 1)
                else:
                    nmode = ("free", None)
                if nmode not in seen:
                    seen.add(nmode)
                    todo.append(nmode)
                update[(m, v2)] = mid(nmode)
        else:  # pursuing the cooperative lasso
            p = mode[1]
            cur = nodes[p]
            if arena.owner[cur] == player:
                moves_tbl[(m, cur)] = nodes[nxt_pos(p)]
            for v2 in arena.successors(cur):
                nmode = ("L", nxt_pos(p)) if v2 == nodes[nxt_pos(p)] else ("W", None)
                if nmode not in seen:
                    seen.add(nmode)
                    todo.append(nmode)
                update[(m, v2)] = mid(nmode)

    for v in sorted(arena.owner):
        if arena.owner[v] == player:
            for m in range(len(order)):
                moves_tbl.setdefault((m, v), arena.successors(v)[0])
    return MooreStrategy(
        player=player,
        memory=len(order),
        init_mem=ids[start],
        update={k: v for k, v in update.items() if v != k[0]},
        moves=moves_tbl,
    )


def weakly_dominates(g: Game, player: int, new: MooreStrategy, old_moves: dict, taus) -> bool:
    """old is memoryless; compare against every memoryless adversary profile."""
    some_better = False
    for tau in taus:
        p_old = payoff_of_lasso(
            g.measure, g, player, lasso_of_choice(g, {**old_moves, **tau})
        )
        p_new = payoff_of_lasso(g.measure, g, player, run_moore(g, new, tau))
        if p_new < p_old:
            return False
        if p_new > p_old:
            some_better = True
    return some_better
