"""Boundary unions: concatenate two decompositions along matched components.

The construction mirrors how the inequality for unions is proved: take a
decomposition of the first part over base A, a decomposition of the second
part over base B + C where C is the interface, identify C with the first
part's final free boundary, and run all of the first part's handles before
all of the second part's.  The composite is an ordinary decomposition over
A + B, so everything downstream (replay, ordering values, search) applies
to it unchanged.

The checker compares the composite's ordering value against the maximum of
the two parts' ordering values.  A failure of that comparison is impossible
for well-formed inputs; when it happens it signals an engine bug and
callers are expected to fail hard.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .homology import desc_equal, pretty, total_betti
from .nu import NuEvaluation, e_mu, nu_of_ordering
from .trace import (
    Declared,
    Dim3One,
    Dim3Three,
    Dim3Two,
    HandleRecord,
    OrderedHandleDecomposition,
    replay,
)


class GlueError(ValueError):
    """Raised when a glue specification does not fit the two parts."""


@dataclass(frozen=True)
class GlueSpec:
    """Pairs (first part's final component id, second part's base id).

    The pairing must be injective on both sides and pair components with
    equal descriptors.  Any number of interface components is allowed.
    """

    pairs: tuple[tuple[str, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((str(a), str(b)) for a, b in self.pairs))
        if not self.pairs:
            raise GlueError("glue specification needs at least one pair")
        left = [a for a, _ in self.pairs]
        right = [b for _, b in self.pairs]
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            raise GlueError(f"glue pairing must be injective on both sides: {self.pairs}")


def compose(
    dm: OrderedHandleDecomposition,
    dn: OrderedHandleDecomposition,
    glue: GlueSpec,
) -> OrderedHandleDecomposition:
    """Concatenate: first part's handles, then the second part's, re-anchored.

    The second part's base splits into glued components (matched against the
    first part's final free boundary) and the rest, which joins the composite
    base.  Anchors into glued base components are rewritten to the matching
    first-part ids; internal second-part anchors shift past the first part's
    handles, so id collisions cannot occur.  Declared records in the second
    part additionally carry the unglued first-part remainder, which stays
    free boundary throughout the suffix.
    """
    if dm.m != dn.m:
        raise GlueError(f"ambient dimensions differ: {dm.m} vs {dn.m}")
    final = replay(dm)[-1]
    final_by_id = {c.id: c for c in final.components}
    n_base_count = len(dn.base)

    glued_m_ids = set()
    base_map: dict[str, str] = {}
    for m_id, n_id in glue.pairs:
        if m_id not in final_by_id:
            raise GlueError(
                f"first part has no final boundary component {m_id!r}; "
                f"components: {sorted(final_by_id)}"
            )
        if not n_id.startswith("base:"):
            raise GlueError(f"second-side glue target must be a base id, got {n_id!r}")
        idx = int(n_id[5:])
        if not 0 <= idx < n_base_count:
            raise GlueError(f"second part base has no component {n_id!r}")
        if not desc_equal(final_by_id[m_id].desc, dn.base[idx]):
            raise GlueError(
                f"descriptor mismatch on pair ({m_id}, {n_id}): "
                f"{pretty(final_by_id[m_id].desc)} vs {pretty(dn.base[idx])}"
            )
        glued_m_ids.add(m_id)
        base_map[n_id] = m_id

    kept_base = []
    for i, desc in enumerate(dn.base):
        n_id = f"base:{i}"
        if n_id not in base_map:
            base_map[n_id] = f"base:{len(dm.base) + len(kept_base)}"
            kept_base.append(desc)

    remainder = tuple(c.desc for c in final.components if c.id not in glued_m_ids)
    alpha = dm.delta
    relabel = {f"h:{j}": f"h:{alpha + j}" for j in range(1, dn.delta + 1)}

    def remap(anchor: str) -> str:
        main, sep, sub = anchor.partition("/")
        if main in relabel:
            return relabel[main] + sep + sub
        if main in base_map:
            return base_map[main] + sep + sub
        raise GlueError(f"second part anchors unknown component {anchor!r}")

    handles = list(dm.handles)
    for handle in dn.handles:
        att = handle.attachment
        if isinstance(att, Dim3One):
            att = Dim3One(remap(att.a), remap(att.b))
        elif isinstance(att, Dim3Two):
            att = Dim3Two(remap(att.anchor), att.curve)
        elif isinstance(att, Dim3Three):
            att = Dim3Three(remap(att.anchor))
        elif isinstance(att, Declared):
            att = Declared(att.components + remainder)
        handles.append(HandleRecord(handle.index, att))
    return OrderedHandleDecomposition(dm.m, dm.base + tuple(kept_base), tuple(handles))


@dataclass(frozen=True)
class InequalityReport:
    """Outcome of checking the composite against max of the parts.

    ``case`` tells where the composite's maximum was attained:
    ``second-suffix`` (inside the second part's handles), ``first-prefix``
    (inside the first part's replay), or ``base-component`` (a preserved
    base component of the second part, bounded through that part's initial
    boundary).  All values are ordering-level numbers; none of them is the
    minimized invariant of the underlying manifolds.
    """

    lhs: int
    rhs: int
    nu_first: int
    nu_second: int
    holds: bool
    case: str
    argmax_mu: int | None
    argmax_component: str | None
    steps: tuple[str, ...]
    composite: OrderedHandleDecomposition
    evaluation: NuEvaluation


def check_key_inequality(
    dm: OrderedHandleDecomposition,
    dn: OrderedHandleDecomposition,
    glue: GlueSpec,
) -> InequalityReport:
    """Build the concatenated ordering and verify lhs <= max(parts)."""
    nu_first = nu_of_ordering(dm).nu
    nu_second = nu_of_ordering(dn).nu
    composite = compose(dm, dn, glue)
    evaluation = nu_of_ordering(composite)
    lhs = evaluation.nu
    rhs = max(nu_first, nu_second)
    alpha = dm.delta

    steps = [
        f"first part ordering value = {nu_first}",
        f"second part ordering value = {nu_second}",
        f"composite ordering value = {lhs} at prefix {evaluation.argmax_mu} "
        f"(component {evaluation.argmax_component})",
    ]
    mu = evaluation.argmax_mu
    comp_id = evaluation.argmax_component
    if mu is None:
        case = "degenerate"
        steps.append("composite has no considered prefixes; value 0")
    elif mu > alpha:
        case = "second-suffix"
        steps.append(
            f"maximum sits after the first part's {alpha} handles, so it is one of "
            f"the second part's boundary values: {lhs} <= {nu_second}"
        )
    elif comp_id is not None and comp_id.startswith("base:") and int(comp_id[5:]) >= len(dm.base):
        case = "base-component"
        e0_second = e_mu(replay(dn)[0])
        base_total = total_betti(composite.base[int(comp_id[5:])])
        steps.append(
            f"maximum is a preserved base component of the second part with total "
            f"Betti {base_total}; it already appears in that part's initial boundary, "
            f"so {base_total} <= {e0_second} <= {nu_second}"
        )
        steps.append(f"chain checks: {base_total <= e0_second} and {e0_second <= nu_second}")
    else:
        case = "first-prefix"
        steps.append(
            f"maximum sits inside the first part's replay, so {lhs} <= {nu_first}"
        )
    holds = lhs <= rhs
    steps.append(f"{lhs} <= max({nu_first}, {nu_second}) = {rhs}: {holds}")
    return InequalityReport(
        lhs=lhs,
        rhs=rhs,
        nu_first=nu_first,
        nu_second=nu_second,
        holds=holds,
        case=case,
        argmax_mu=mu,
        argmax_component=comp_id,
        steps=tuple(steps),
        composite=composite,
        evaluation=evaluation,
    )


@dataclass(frozen=True)
class ChainReport:
    """Fold of compose over a list of parts, checked against their maximum."""

    lhs: int
    rhs: int
    part_values: tuple[int, ...]
    holds: bool
    composite: OrderedHandleDecomposition
    stages: tuple[str, ...]


def check_chain(
    parts: Sequence[OrderedHandleDecomposition],
    glues: Sequence[GlueSpec],
) -> ChainReport:
    """Left fold of compose; one glue per junction; a single part is its own union."""
    if not parts:
        raise GlueError("need at least one part")
    if len(glues) != len(parts) - 1:
        raise GlueError(f"{len(parts)} parts need {len(parts) - 1} glue specs, got {len(glues)}")
    accumulated = parts[0]
    stages = [f"stage 1: part with {parts[0].delta} handles"]
    for stage, (nxt, glue) in enumerate(zip(parts[1:], glues), start=2):
        try:
            accumulated = compose(accumulated, nxt, glue)
        except GlueError as exc:
            raise GlueError(f"stage {stage}: {exc}") from exc
        stages.append(f"stage {stage}: composite now has {accumulated.delta} handles")
    part_values = tuple(nu_of_ordering(p).nu for p in parts)
    lhs = nu_of_ordering(accumulated).nu
    rhs = max(part_values)
    return ChainReport(lhs, rhs, part_values, lhs <= rhs, accumulated, tuple(stages))
