"""Prefix-independence transform and strategy-game products.

INF and SUP payoffs depend on the whole play, including its finite prefix.
`make_prefix_independent` rebuilds such an arena so that every vertex also
records, per player, the extremum weight seen so far; edge weights are
folded into the running extremum.  On the rebuilt arena the weight sequence
of any play is monotone, so its INF (resp. SUP) value equals its eventual
stable weight and the measure becomes prefix-independent while every play
keeps its original payoff.  The other four measures pass through untouched.

`product_with_strategy` synchronizes a finite-state Moore strategy with an
arena: the strategy owner's choices are resolved by the transducer, all
other players keep their choices, and memory advances on every traversed
edge.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .games import Game, GameFormatError, PayoffKind

__all__ = [
    "TransformedGame",
    "MooreStrategy",
    "ProductGame",
    "make_prefix_independent",
    "product_with_strategy",
    "parse_strategy",
    "serialize_strategy",
    "validate_strategy",
    "lift_lasso",
]


def _rec_token(q: Fraction | None) -> str:
    if q is None:
        return "x"
    sign = "m" if q < 0 else ""
    q = abs(q)
    return f"{sign}{q.numerator}" + ("" if q.denominator == 1 else f"_{q.denominator}")


@dataclass(frozen=True)
class TransformedGame:
    """Arena with prefix-independent payoff semantics plus its origin map.

    `back` maps each rebuilt vertex to (original vertex, per-player recorded
    extremum vector); `step[(tv, original successor)]` resolves one move of
    the original game inside the rebuilt arena.  For already
    prefix-independent measures the transform is the identity.
    """

    game: Game
    back: dict[str, tuple[str, tuple[Fraction | None, ...]]]
    step: dict[tuple[str, str], str]
    identity: bool

    def origin(self, tv: str) -> str:
        return self.back[tv][0]

    def walk(self, history) -> str:
        """Transformed vertex reached by running a history of the original game."""
        tv = self.game.init
        for v in history[1:]:
            tv = self.step[(tv, v)]
        return tv


def make_prefix_independent(g: Game) -> TransformedGame:
    """Record per-player extremum weights so INF/SUP become prefix-independent.

    Only the part reachable from the initial vertex is built.  Weight output
    on an edge is the extremum of the recorded value and the original weight,
    which also becomes the new record.
    """
    if g.measure.prefix_independent:
        back = {v: (v, ()) for v in g.owner}
        step = {(u, v): v for (u, v) in g.weights}
        return TransformedGame(game=g, back=back, step=step, identity=True)

    fold = min if g.measure is PayoffKind.INF else max

    def fold1(rec: Fraction | None, w: Fraction) -> Fraction:
        return w if rec is None else fold(rec, w)

    taken = set()

    def name(v: str, recs: tuple[Fraction | None, ...]) -> str:
        base = v + "__" + "_".join(_rec_token(r) for r in recs)
        fresh = base
        bump = 2
        while fresh in taken:  # defensive: token joins could collide
            fresh = f"{base}__{bump}"
            bump += 1
        taken.add(fresh)
        return fresh

    init_state = (g.init, tuple(None for _ in range(g.players)))
    owner: dict[str, int] = {}
    weights: dict[tuple[str, str], tuple[Fraction, ...]] = {}
    back: dict[str, tuple[str, tuple[Fraction | None, ...]]] = {}
    step: dict[tuple[str, str], str] = {}

    queue = deque([init_state])
    seen = {init_state: name(*init_state)}
    while queue:
        state = queue.popleft()
        v, recs = state
        tv = seen[state]
        owner[tv] = g.owner[v]
        back[tv] = state
        for v2 in g.successors(v):
            out = tuple(
                fold1(recs[i], g.weight(v, v2, i + 1)) for i in range(g.players)
            )
            state2 = (v2, out)
            if state2 not in seen:
                seen[state2] = name(*state2)
                queue.append(state2)
            tv2 = seen[state2]
            weights[(tv, tv2)] = out
            step[(tv, v2)] = tv2

    tg = Game(
        players=g.players,
        owner=owner,
        weights=weights,
        init=seen[init_state],
        measure=g.measure,
    )
    return TransformedGame(game=tg, back=back, step=step, identity=False)


def lift_lasso(tg: TransformedGame, lasso):
    """Image of an original-game lasso in the rebuilt arena.

    The cycle may unroll several times until the recorded extrema stabilize;
    the result is again ultimately periodic.
    """
    from .games import Lasso

    if tg.identity:
        return lasso
    start = lasso.prefix[0] if lasso.prefix else lasso.cycle[0]
    if start != tg.origin(tg.game.init):
        raise ValueError("lifted lassos must start at the initial vertex")
    trace = [tg.game.init]
    for v in (lasso.prefix + lasso.cycle)[1:]:
        trace.append(tg.step[(trace[-1], v)])
    cyc = lasso.cycle
    pos = 0  # index in cyc of the vertex entered next
    seen = {}
    while True:
        key = (pos, trace[-1])
        if key in seen:
            k = seen[key]
            return Lasso(prefix=tuple(trace[:k]), cycle=tuple(trace[k:-1]))
        seen[key] = len(trace) - 1
        trace.append(tg.step[(trace[-1], cyc[pos])])
        pos = (pos + 1) % len(cyc)


@dataclass(frozen=True)
class MooreStrategy:
    """Finite-state transducer strategy for one player.

    Memory states are 0..memory-1.  The memory starts at `init_mem` on the
    initial vertex and advances by `update` on every vertex entered
    afterwards; entries missing from `update` leave the memory unchanged.
    At a vertex owned by the player, the move taken is `moves[(mem, vertex)]`.
    """

    player: int
    memory: int
    init_mem: int
    update: dict[tuple[int, str], int] = field(default_factory=dict)
    moves: dict[tuple[int, str], str] = field(default_factory=dict)

    def next_memory(self, mem: int, vertex: str) -> int:
        return self.update.get((mem, vertex), mem)

    def move(self, mem: int, vertex: str) -> str:
        return self.moves[(mem, vertex)]


def validate_strategy(g: Game, s: MooreStrategy) -> list[str]:
    """Report strategy/table defects relative to a game."""
    problems = []
    if not 1 <= s.player <= g.players:
        problems.append(f"player {s.player} not in 1..{g.players}")
        return problems
    if not 0 <= s.init_mem < s.memory:
        problems.append(f"initial memory {s.init_mem} not in 0..{s.memory - 1}")
    for (m, v), m2 in sorted(s.update.items()):
        if not (0 <= m < s.memory and 0 <= m2 < s.memory):
            problems.append(f"update ({m}, {v}) -> {m2} out of memory range")
        if v not in g.owner:
            problems.append(f"update references unknown vertex {v}")
    owned = [v for v in sorted(g.owner) if g.owner[v] == s.player]
    for m in range(s.memory):
        for v in owned:
            t = s.moves.get((m, v))
            if t is None:
                problems.append(f"missing move for memory {m} at vertex {v}")
            elif not g.has_edge(v, t):
                problems.append(f"move ({m}, {v}) -> {t} is not an edge")
    for (m, v) in sorted(s.moves):
        if v in g.owner and g.owner[v] != s.player:
            problems.append(f"move declared at vertex {v} not owned by player {s.player}")
    return problems


@dataclass(frozen=True)
class ProductGame:
    """Reachable synchronized product of an arena and one player's strategy.

    States are (arena vertex, memory).  At states whose vertex the strategy
    owner controls there is exactly one outgoing edge (the strategy's move);
    everywhere else all arena moves remain.
    """

    arena: Game
    player: int
    init: tuple[str, int]
    states: tuple[tuple[str, int], ...]
    succ: dict[tuple[str, int], tuple[tuple[str, int], ...]]

    def owner(self, state: tuple[str, int]) -> int:
        return self.arena.owner[state[0]]


def product_with_strategy(
    g: Game, s: MooreStrategy, observe: dict[str, str] | None = None
) -> ProductGame:
    """Build the reachable strategy-arena product.

    `observe` optionally maps arena vertices to the vertex names the
    transducer actually reads (used when the arena is a prefix-independence
    rebuild of the game the strategy was written for).
    """
    problems = []
    if observe is None:
        problems = validate_strategy(g, s)
    if problems:
        raise GameFormatError("; ".join(problems))

    def obs(v: str) -> str:
        return observe[v] if observe is not None else v

    # Resolve a move given in observed names back to an arena successor.
    succ_by_obs: dict[tuple[str, str], str] = {}
    for (u, v) in g.weights:
        succ_by_obs[(u, obs(v))] = v

    init = (g.init, s.init_mem)
    succ: dict[tuple[str, int], tuple[tuple[str, int], ...]] = {}
    queue = deque([init])
    seen = {init}
    while queue:
        state = queue.popleft()
        v, m = state
        if g.owner[v] == s.player:
            target = s.moves.get((m, obs(v)))
            if target is None or (v, target) not in succ_by_obs:
                raise GameFormatError(
                    f"strategy move at memory {m}, vertex {obs(v)} "
                    f"({'missing' if target is None else target!r}) is not an edge"
                )
            nexts = [succ_by_obs[(v, target)]]
        else:
            nexts = list(g.successors(v))
        out = []
        for v2 in nexts:
            state2 = (v2, s.next_memory(m, obs(v2)))
            out.append(state2)
            if state2 not in seen:
                seen.add(state2)
                queue.append(state2)
        succ[state] = tuple(out)

    states = tuple(sorted(seen))
    return ProductGame(arena=g, player=s.player, init=init, states=states, succ=succ)


def parse_strategy(text: str) -> MooreStrategy:
    """Parse the strategy file format (strategy/memory/initmem/update/move)."""
    player = None
    memory = None
    init_mem = None
    update: dict[tuple[int, str], int] = {}
    moves: dict[tuple[int, str], str] = {}

    def need_int(tok: str, lineno: int) -> int:
        try:
            return int(tok)
        except ValueError:
            raise GameFormatError(f"expected integer, got {tok!r}", lineno) from None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind, args = parts[0], parts[1:]
        if kind == "strategy" and len(args) == 1:
            player = need_int(args[0], lineno)
        elif kind == "memory" and len(args) == 1:
            memory = need_int(args[0], lineno)
        elif kind == "initmem" and len(args) == 1:
            init_mem = need_int(args[0], lineno)
        elif kind == "update" and len(args) == 3:
            m, v, m2 = need_int(args[0], lineno), args[1], need_int(args[2], lineno)
            update[(m, v)] = m2
        elif kind == "move" and len(args) == 3:
            m, v, t = need_int(args[0], lineno), args[1], args[2]
            moves[(m, v)] = t
        else:
            raise GameFormatError(f"bad strategy directive {line!r}", lineno)
    if player is None:
        raise GameFormatError("missing strategy player")
    if memory is None:
        memory = 1
    if init_mem is None:
        init_mem = 0
    return MooreStrategy(
        player=player, memory=memory, init_mem=init_mem, update=update, moves=moves
    )


def serialize_strategy(s: MooreStrategy) -> str:
    lines = [f"strategy {s.player}", f"memory {s.memory}", f"initmem {s.init_mem}"]
    for (m, v) in sorted(s.update):
        m2 = s.update[(m, v)]
        if m2 != m:
            lines.append(f"update {m} {v} {m2}")
    for (m, v) in sorted(s.moves):
        lines.append(f"move {m} {v} {s.moves[(m, v)]}")
    return "\n".join(lines) + "\n"
