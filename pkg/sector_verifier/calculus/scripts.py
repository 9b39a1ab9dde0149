"""Proof scripts: a line format, the checker, and the mutation harness.

A script names a net, two endpoint terms and the rewrite steps between
them::

    script <name>
    net <net>
    from <term>
    to <term>
    override <region> = [~]<ref>
    apply <rule> at <path> with k=v, k=v ; requires leq(a, b'), !disjoint(c, d)
    end

The canonical text produced by ``format_script`` parses back to an equal
script and formats to the same bytes.
"""

import logging
import re
from dataclasses import dataclass, field, replace
from pathlib import Path as FilePath
from typing import Iterable

from pydantic import BaseModel, Field

from sector_verifier.calculus.membership import ill_formed
from sector_verifier.calculus.netspec import Fact, NetSpec, Override, load_net, save_net
from sector_verifier.calculus.rules import apply_rule, check_bindings
from sector_verifier.calculus.terms import Path, RegionRef, Term, format_path, format_term, parse_path, parse_term
from sector_verifier.errors import (
    DegenerateGeometry,
    MalformedScript,
    NoCommonRegion,
    PreconditionViolated,
    RewriteError,
)

logger = logging.getLogger(__name__)

REJECTIONS = (RewriteError, PreconditionViolated, NoCommonRegion, DegenerateGeometry)

_APPLY = re.compile(r"^apply (\S+) at (\S+)(?: with (.*?))?(?: ; requires (.*))?$")
_OVERRIDE = re.compile(r"^override (\S+) = (~?)(\S+)$")
_FACTS = re.compile(r"!?(?:leq|disjoint)\([^()]*\)")


@dataclass(frozen=True)
class ScriptStep:
    rule: str
    path: Path
    bindings: tuple[tuple[str, str], ...] = ()
    requires: tuple[Fact, ...] = ()

    def format(self) -> str:
        line = f"apply {self.rule} at {format_path(self.path)}"
        if self.bindings:
            line += " with " + ", ".join(f"{k}={v}" for k, v in self.bindings)
        if self.requires:
            line += " ; requires " + ", ".join(str(f) for f in self.requires)
        return line


@dataclass(frozen=True)
class Script:
    name: str
    net: str
    start: Term
    end: Term
    steps: tuple[ScriptStep, ...] = ()
    overrides: tuple[Override, ...] = field(default=())


class Verdict(BaseModel):
    """Outcome of checking a script or comparing two terms.

    ``step`` is the 1-based step that failed; 0 means the initial term
    was already ill formed.
    """

    status: str
    name: str = ""
    step: int | None = None
    reason: str = ""
    script: str | None = None
    notes: list[str] = Field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return self.status == "accepted"


def format_script(script: Script) -> str:
    lines = [
        f"script {script.name}",
        f"net {script.net}",
        f"from {format_term(script.start)}",
        f"to {format_term(script.end)}",
        *(str(o) for o in script.overrides),
        *(s.format() for s in script.steps),
        "end",
    ]
    return "\n".join(lines) + "\n"


def _header(lines: list[str], index: int, keyword: str) -> str:
    if index >= len(lines) or not lines[index].startswith(keyword + " "):
        raise MalformedScript(f"expected '{keyword} ...'", index + 1)
    return lines[index][len(keyword) + 1 :].strip()


def _bindings(text: str | None, line: int) -> tuple[tuple[str, str], ...]:
    if not text:
        return ()
    out: list[tuple[str, str]] = []
    for part in text.split(","):
        key, sep, value = part.strip().partition("=")
        if not sep or not key or not value:
            raise MalformedScript(f"bad binding {part.strip()!r}", line)
        if any(k == key for k, _ in out):
            raise MalformedScript(f"binding {key} given twice", line)
        out.append((key, value))
    return tuple(out)


def _requires(text: str | None, line: int) -> tuple[Fact, ...]:
    if not text:
        return ()
    found = _FACTS.findall(text)
    if ", ".join(found) != text.strip():
        raise MalformedScript(f"bad requires list {text!r}", line)
    try:
        return tuple(Fact.parse(f) for f in found)
    except MalformedScript as e:
        raise MalformedScript(str(e), line) from e


def parse_script(text: str) -> Script:
    """Parses one script.

    Raises:
        MalformedScript: With the offending line for syntax errors, unknown
            rule ids and unknown binding keys.
    """
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    name = _header(lines, 0, "script")
    net = _header(lines, 1, "net")
    try:
        start = parse_term(_header(lines, 2, "from"))
        end = parse_term(_header(lines, 3, "to"))
    except MalformedScript as e:
        raise MalformedScript(str(e), e.line or 3) from e
    overrides: list[Override] = []
    steps: list[ScriptStep] = []
    index = 4
    while index < len(lines) and lines[index] != "end":
        line, number = lines[index], index + 1
        index += 1
        if m := _OVERRIDE.match(line):
            if steps:
                raise MalformedScript("overrides come before steps", number)
            try:
                overrides.append(Override(m.group(1), RegionRef.parse(m.group(3)), bool(m.group(2))))
            except MalformedScript as e:
                raise MalformedScript(str(e), number) from e
            continue
        m = _APPLY.match(line)
        if not m:
            raise MalformedScript(f"cannot parse {line!r}", number)
        try:
            path = parse_path(m.group(2))
            bindings = _bindings(m.group(3), number)
            check_bindings(m.group(1), dict(bindings))
        except MalformedScript as e:
            raise MalformedScript(str(e).removeprefix(f"line {number}: "), number) from e
        steps.append(ScriptStep(m.group(1), path, bindings, _requires(m.group(4), number)))
    if index >= len(lines):
        raise MalformedScript("missing 'end'", len(lines))
    if index != len(lines) - 1:
        raise MalformedScript("text after 'end'", index + 2)
    return Script(name, net, start, end, tuple(steps), tuple(overrides))


def _reject(script: Script, step: int, reason: str, notes: list[str] | None = None) -> Verdict:
    logger.info("script %s rejected at step %d: %s", script.name, step, reason)
    return Verdict(
        status="rejected", name=script.name, step=step, reason=reason, script=format_script(script), notes=notes or []
    )


def run_script(script: Script, net: NetSpec) -> Verdict:
    """Replays a script against a net and checks every fact along the way.

    A step is accepted when its rule matches, every fact it relies on and
    every ``requires`` fact holds, and the new term is well formed. The
    final term must equal the declared endpoint exactly.
    """
    if script.net != net.name:
        return _reject(script, 0, f"script is for net {script.net}, not {net.name}")
    try:
        net = net.with_overrides(script.overrides)
        bad = ill_formed(net, script.start)
    except REJECTIONS as e:
        return _reject(script, 0, f"{type(e).__name__}: {e}")
    if bad is not None:
        return _reject(script, 0, f"initial term is ill formed: {bad} fails")
    term = script.start
    for number, step in enumerate(script.steps, start=1):
        try:
            rewrite = apply_rule(net, term, step.rule, step.path, dict(step.bindings))
            failed = next((f for f in [*rewrite.facts, *step.requires] if not net.holds(f)), None)
            if failed is not None:
                return _reject(script, number, f"{step.rule}: {failed} does not hold", net.notes)
            bad = ill_formed(net, rewrite.term)
        except REJECTIONS as e:
            return _reject(script, number, f"{step.rule}: {type(e).__name__}: {e}", net.notes)
        if bad is not None:
            return _reject(script, number, f"{step.rule}: result is ill formed: {bad} fails", net.notes)
        term = rewrite.term
    if term != script.end:
        return _reject(script, len(script.steps), f"final term {format_term(term)} differs from the declared end")
    logger.debug("script %s accepted after %d step(s)", script.name, len(script.steps))
    return Verdict(status="accepted", name=script.name, script=format_script(script), notes=list(net.notes))


def collect_facts(script: Script, net: NetSpec) -> list[tuple[int, Fact]]:
    """The facts each step relies on, with their 1-based step numbers.

    Replays the script without checking; stops at the first step whose
    rule does not match.
    """
    net = net.with_overrides(script.overrides)
    term = script.start
    out: list[tuple[int, Fact]] = []
    for number, step in enumerate(script.steps, start=1):
        try:
            rewrite = apply_rule(net, term, step.rule, step.path, dict(step.bindings))
        except REJECTIONS:
            break
        out.extend((number, f) for f in [*rewrite.facts, *step.requires])
        term = rewrite.term
    return out


def mutation_target(script: Script, net: NetSpec) -> tuple[int, Fact]:
    """The fact a mutation breaks: the first side condition between two
    different regions, or failing that the first such membership fact.

    Raises:
        PreconditionViolated: If no fact relates two different regions.
    """
    facts = [(n, f) for n, f in collect_facts(script, net) if not f.negated and f.left.name != f.right.name]
    for origin in ("side", "member"):
        for n, f in facts:
            if f.origin == origin:
                return n, f
    raise PreconditionViolated(f"script {script.name} has no fact between two different regions")


def mutate(script: Script, net: NetSpec) -> Script:
    """A copy of script whose net override makes one of its facts false.

    For ``leq(X, Y)`` the region X is rebound to the complement of Y; for
    ``disjoint(X, Y)`` it is rebound to Y itself. Inverted references
    flip the rebinding so the fact is false as written.
    """
    _, fact = mutation_target(script, net)
    x, y = fact.left, fact.right
    inverted = not x.inv if fact.kind == "leq" else x.inv
    override = Override(x.name, y, inverted)
    return replace(script, name=f"{script.name}-mutated", overrides=script.overrides + (override,))


# corpus files ------------------------------------------------------------------


def save_scripts(pairs: Iterable[tuple[Script, NetSpec]], directory: str | FilePath) -> list[FilePath]:
    """Writes each script to ``<name>.script`` and its net to ``nets/<net>.json``."""
    root = FilePath(directory)
    (root / "nets").mkdir(parents=True, exist_ok=True)
    written = []
    for script, net in pairs:
        path = root / f"{script.name}.script"
        path.write_text(format_script(script))
        save_net(net, root / "nets" / f"{net.name}.json")
        written.append(path)
    return written


def load_scripts(directory: str | FilePath) -> list[tuple[Script, NetSpec]]:
    """Reads every ``*.script`` file of a directory, in name order.

    Raises:
        MalformedScript: If a script does not parse or its net file is missing.
    """
    root = FilePath(directory)
    nets: dict[str, NetSpec] = {}
    out = []
    for path in sorted(root.glob("*.script")):
        try:
            script = parse_script(path.read_text())
        except MalformedScript as e:
            raise MalformedScript(f"{path.name}: {e}") from e
        if script.net not in nets:
            net_path = root / "nets" / f"{script.net}.json"
            if not net_path.exists():
                raise MalformedScript(f"{path.name}: no net file {net_path}")
            nets[script.net] = load_net(net_path)
        out.append((script, nets[script.net]))
    return out
