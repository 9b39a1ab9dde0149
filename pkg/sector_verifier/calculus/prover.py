"""A budgeted equality prover.

Both sides are normalized by a fixed rule priority, recording every step
together with its inverse. Equal normal forms give a script: the steps
of the left side followed by the inverted steps of the right side in
reverse. Otherwise a two-sided search over locality swaps runs until the
budget is spent. Every proof is replayed through the script checker
before it is reported.
"""

import logging
from collections import Counter, deque
from dataclasses import dataclass

from sector_verifier.calculus.membership import ill_formed, region_of
from sector_verifier.calculus.netspec import NetSpec, disjoint
from sector_verifier.calculus.rules import apply_rule
from sector_verifier.calculus.scripts import REJECTIONS, Script, ScriptStep, Verdict, format_script, run_script
from sector_verifier.calculus.terms import App, Path, Star, Term, Uni, format_term, generators

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 2000
MAX_NORMAL_STEPS = 10_000


@dataclass(frozen=True)
class Move:
    """A checked step and the step undoing it."""

    step: ScriptStep
    inverse: ScriptStep


def _step(rule: str, path: Path, **bindings: str) -> ScriptStep:
    return ScriptStep(rule, path, tuple(bindings.items()))


def _try(net: NetSpec, term: Term, step: ScriptStep) -> Term | None:
    """The result of step when it matches, all its facts hold and the result is well formed."""
    try:
        rewrite = apply_rule(net, term, step.rule, step.path, dict(step.bindings))
        if not all(net.holds(f) for f in rewrite.facts):
            return None
        if ill_formed(net, rewrite.term) is not None:
            return None
    except REJECTIONS:
        return None
    return rewrite.term


def _intertwiner(atom) -> tuple[str, bool] | None:
    if isinstance(atom, Uni):
        return atom.name, False
    if isinstance(atom, Star) and isinstance(atom.atom, Uni):
        return atom.atom.name, True
    return None


def _word_candidates(net: NetSpec, word: Term, prefix: Path):
    """Normalizing moves on one word, highest priority first."""
    n = len(word)
    for i in range(n - 1):
        x = _intertwiner(word[i])
        if x is not None and _intertwiner(word[i + 1]) == (x[0], not x[1]):
            order = "u*u" if x[1] else "uu*"
            yield Move(_step("unit", prefix + (i,)), _step("unit-intro", prefix + (i,), unitary=x[0], order=order))
    for i, a in enumerate(word):
        if isinstance(a, App) and not a.body.factors:
            undo = _step("hom-unit", prefix + (i,), sector=a.sector, region=str(a.region))
            yield Move(_step("hom-split", prefix + (i,)), undo)
    for i in range(n - 1):
        a, b = word[i], word[i + 1]
        if isinstance(a, App) and isinstance(b, App) and (a.sector, a.region) == (b.sector, b.region):
            sizes = f"{len(a.body)}+{len(b.body)}"
            yield Move(_step("hom-merge", prefix + (i,), count="2"), _step("hom-split", prefix + (i,), sizes=sizes))
    for i in range(n - 2):
        x = _intertwiner(word[i])
        if x is not None and isinstance(word[i + 1], App) and _intertwiner(word[i + 2]) == (x[0], not x[1]):
            form = "star" if x[1] else "direct"
            yield Move(_step("int", prefix + (i,)), _step("int-rev", prefix + (i,), unitary=x[0], form=form))
    for i in range(n - 1):
        if _intertwiner(word[i]) is not None and isinstance(word[i + 1], App):
            yield Move(_step("shift", prefix + (i,)), _step("shift", prefix + (i,)))
    for i, a in enumerate(word):
        if isinstance(a, App):
            for via in [a.region, *net.refs()]:
                count = str(len(a.body))
                yield Move(
                    _step("loc", prefix + (i,), via=str(via)),
                    _step("loc-intro", prefix + (i,), sector=a.sector, region=str(a.region), count=count, via=str(via)),
                )


def _candidates(net: NetSpec, word: Term, prefix: Path = ()):
    for i, a in enumerate(word):
        if isinstance(a, App):
            yield from _candidates(net, a.body, prefix + (i,))
    yield from _word_candidates(net, word, prefix)


def normalize(net: NetSpec, term: Term) -> tuple[Term, list[Move]]:
    """Rewrites term until no normalizing move applies; bodies go first."""
    moves: list[Move] = []
    for _ in range(MAX_NORMAL_STEPS):
        for move in _candidates(net, term):
            new = _try(net, term, move.step)
            if new is not None:
                moves.append(move)
                term = new
                break
        else:
            return term, moves
    logger.warning("normalization stopped after %d steps", MAX_NORMAL_STEPS)
    return term, moves


def _swaps(net: NetSpec, term: Term, prefix: Path = ()):
    """Locality swaps of adjacent factors, at every depth."""
    for i, a in enumerate(term):
        if isinstance(a, App):
            yield from _swaps(net, a.body, prefix + (i,))
    for i in range(len(term) - 1):
        try:
            left, right = region_of(net, term[i : i + 1]), region_of(net, term[i + 1 : i + 2])
            if not net.holds(disjoint(left, right)):
                continue
        except REJECTIONS:
            continue
        yield Move(
            _step("comm", prefix + (i,), left=str(left), right=str(right)),
            _step("comm", prefix + (i,), left=str(right), right=str(left)),
        )


def _search(net: NetSpec, a: Term, b: Term, budget: int) -> list[Move] | None:
    """Two-sided breadth-first search over swaps followed by normalization."""
    seen = [{a: []}, {b: []}]
    queues = [deque([a]), deque([b])]
    spent = 0
    while any(queues) and spent < budget:
        side = 0 if queues[0] and (not queues[1] or len(queues[0]) <= len(queues[1])) else 1
        state = queues[side].popleft()
        spent += 1
        for swap in _swaps(net, state):
            swapped = _try(net, state, swap.step)
            if swapped is None:
                continue
            normal, tail = normalize(net, swapped)
            if normal in seen[side]:
                continue
            path = seen[side][state] + [swap, *tail]
            seen[side][normal] = path
            if normal in seen[1 - side]:
                forward, backward = (path, seen[1][normal]) if side == 0 else (seen[0][normal], path)
                return forward + [Move(m.inverse, m.step) for m in reversed(backward)]
            queues[side].append(normal)
    return None


def check_equal(net: NetSpec, t1: Term, t2: Term, budget: int = DEFAULT_BUDGET, name: str = "check-equal") -> Verdict:
    """Decides t1 = t2 by normalization and a budgeted swap search.

    Returns a Verdict with status ``proved`` (with a replayable script),
    ``refuted-by-invariant`` when the generator multisets differ, or
    ``unknown`` when the budget runs out.
    """
    if Counter(generators(t1)) != Counter(generators(t2)):
        return Verdict(status="refuted-by-invariant", name=name, reason="the sides use different generators")
    n1, moves1 = normalize(net, t1)
    n2, moves2 = normalize(net, t2)
    if n1 == n2:
        middle: list[Move] | None = []
    else:
        middle = _search(net, n1, n2, budget)
    if middle is None:
        reason = f"normal forms {format_term(n1)} and {format_term(n2)} not joined within budget {budget}"
        return Verdict(status="unknown", name=name, reason=reason, notes=list(net.notes))
    steps = [m.step for m in moves1] + [m.step for m in middle] + [m.inverse for m in reversed(moves2)]
    script = Script(name, net.name, t1, t2, tuple(steps))
    replay = run_script(script, net)
    if not replay.accepted:
        return Verdict(status="unknown", name=name, reason=f"proof did not replay: {replay.reason}")
    return Verdict(status="proved", name=name, script=format_script(script), notes=list(net.notes))
