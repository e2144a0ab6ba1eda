"""The boundary-complexity invariant: per-prefix values and ordering search.

For a replayed decomposition, ``e_mu`` is the largest total Betti number of
any single free-boundary component after mu handles, and the ordering value
is the maximum of the ``e_mu``.  The prefix mu = 0 participates exactly when
the base is non-empty: the initial collar already shows the base as free
boundary, and the concatenation argument in the union checker relies on
counting it.

The true invariant of a manifold minimizes over all decompositions and then
maximizes over all bases; neither extreme is computable in general, so
results are reported as :class:`Bound` values whose lower side carries its
justification and whose upper side carries a replayable witness.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterator, Sequence

from .homology import betti, total_betti
from .trace import (
    BoundaryState,
    Declared,
    Dim3One,
    Dim3Two,
    NonSeparating,
    OrderedHandleDecomposition,
    TraceError,
    anchors_of,
    id_sort_key,
    reorder,
    replay,
)


def e_mu(state: BoundaryState) -> int:
    """Largest total Betti number over the state's components; 0 when empty."""
    return max((total_betti(c.desc) for c in state.components), default=0)


@dataclass(frozen=True)
class NuEvaluation:
    """Per-prefix values and their maximum for one fixed ordering."""

    e_values: tuple[int, ...]
    mu_start: int
    nu: int
    argmax_mu: int | None
    argmax_component: str | None

    def __post_init__(self):
        considered = self.e_values[self.mu_start:]
        if considered and self.nu != max(considered):
            raise ValueError("nu must equal the maximum of the considered e values")


def nu_of_ordering(d: OrderedHandleDecomposition) -> NuEvaluation:
    """Evaluate one ordering.  Ties break to the smallest prefix, then the
    smallest component id."""
    states = replay(d)
    e_values = tuple(e_mu(s) for s in states)
    mu_start = 0 if d.base else 1
    considered = e_values[mu_start:]
    if not considered:
        return NuEvaluation(e_values, mu_start, 0, None, None)
    nu = max(considered)
    argmax_mu = next(i for i in range(mu_start, len(e_values)) if e_values[i] == nu)
    comp = next(
        (c.id for c in states[argmax_mu].components if total_betti(c.desc) == nu),
        None,
    )
    return NuEvaluation(e_values, mu_start, nu, argmax_mu, comp)


@dataclass(frozen=True)
class LowerBound:
    value: int
    reasons: tuple[str, ...]


def _forces_positive_genus(d: OrderedHandleDecomposition) -> bool:
    # A 1-handle with both feet on one component always creates genus, and a
    # 2-handle only ever attaches to a positive-genus surface (a separating
    # curve on a sphere splits (0, 0) and forces nothing).  Either way some
    # state shows total Betti >= 4 in every admissible order of these handles.
    for h in d.handles:
        att = h.attachment
        if isinstance(att, Dim3One) and att.a == att.b:
            return True
        if isinstance(att, Dim3Two):
            if isinstance(att.curve, NonSeparating) or att.curve.g1 + att.curve.g2 >= 1:
                return True
    return False


def _declared_floor(d: OrderedHandleDecomposition) -> int:
    # Declared records are order-pinned (see iter_linear_extensions), so each
    # declared component appears in every enumerated ordering.
    floor = 0
    for h in d.handles:
        if isinstance(h.attachment, Declared):
            for desc in h.attachment.components:
                floor = max(floor, total_betti(desc))
    return floor


def lower_bound_rules(
    m: int,
    *,
    closed: bool = False,
    oriented: bool = True,
    trace: OrderedHandleDecomposition | None = None,
    raw_floor: int = 0,
) -> LowerBound:
    """Best provable floor for the invariant in the given context.

    With a trace supplied, the trace-derived rules apply to reorderings of
    that fixed handle multiset; the justification strings say which kind of
    floor fired.  Without a trace the caller vouches for the flags.
    """
    floor = max(0, int(raw_floor))
    reasons: list[str] = []
    if raw_floor > 0:
        reasons.append(f"caller-supplied floor {raw_floor}")

    visible = True
    orientable_ok = oriented
    evenness_ok = oriented and m == 3
    if trace is not None:
        states = replay(trace)
        comps = [c for s in states for c in s.components]
        visible = bool(comps)
        orientable_ok = oriented and all(betti(c.desc).palindromic for c in comps)
        evenness_ok = (
            orientable_ok
            and m == 3
            and all(total_betti(c.desc) % 2 == 0 for c in comps)
        )

    if closed and m >= 3 and visible and orientable_ok:
        if floor < 2:
            floor = 2
            reasons.append(
                "closed trace: some prefix shows a closed orientable boundary "
                "component, which has total Betti number at least 2"
            )
    if trace is not None and m == 3 and orientable_ok and _forces_positive_genus(trace):
        if floor < 4:
            floor = 4
            reasons.append(
                "fixed handles force a positive-genus surface boundary in every "
                "admissible order"
            )
    if trace is not None:
        declared = _declared_floor(trace)
        if declared > floor:
            floor = declared
            reasons.append(
                "an order-pinned declared boundary component has total Betti "
                f"number {declared}"
            )
    if m == 3 and evenness_ok and floor % 2 == 1:
        floor += 1
        reasons.append(
            "orientable surface boundaries have even total Betti number; "
            "floor rounded up"
        )
    return LowerBound(floor, tuple(reasons))


def heegaard_upper(genus: int) -> int:
    """Upper certificate 2g + 2 from a splitting of the stated genus.

    Splitting a closed oriented 3-manifold along a genus-g surface gives a
    decomposition whose intermediate boundaries never exceed that surface,
    so the invariant is at most 2g + 2.  The genus itself is user-asserted.
    """
    if genus < 0:
        raise ValueError(f"genus must be non-negative, got {genus}")
    return 2 * genus + 2


# --- enumeration of admissible orders ---------------------------------------


def _dependencies(d: OrderedHandleDecomposition) -> dict[int, set[int]]:
    deps: dict[int, set[int]] = {j: set() for j in range(1, d.delta + 1)}
    declared_at: list[int] = []
    for j, handle in enumerate(d.handles, start=1):
        for anchor in anchors_of(handle):
            if anchor.startswith("h:"):
                i = int(anchor[2:].partition("/")[0])
                if not 1 <= i < j:
                    raise TraceError(
                        f"handle {j} anchors {anchor!r}, which is not an earlier handle"
                    )
                deps[j].add(i)
        if isinstance(handle.attachment, Declared):
            declared_at.append(j)
    # A declared record asserts the whole boundary after it, so it cannot move
    # relative to anything: pin it between all earlier and all later handles.
    for p in declared_at:
        deps[p].update(range(1, p))
        for k in range(p + 1, d.delta + 1):
            deps[k].add(p)
    return deps


def iter_linear_extensions(d: OrderedHandleDecomposition) -> Iterator[tuple[int, ...]]:
    """All admissible orders of the handles, depth-first, lexicographically
    smallest original positions first.  Deterministic."""
    deps = _dependencies(d)
    delta = d.delta
    placed: list[int] = []
    placed_set: set[int] = set()

    def extend() -> Iterator[tuple[int, ...]]:
        if len(placed) == delta:
            yield tuple(placed)
            return
        for j in range(1, delta + 1):
            if j not in placed_set and deps[j] <= placed_set:
                placed.append(j)
                placed_set.add(j)
                yield from extend()
                placed.pop()
                placed_set.remove(j)

    return extend()


@dataclass(frozen=True)
class Bound:
    """Certified range for the invariant, with provenance on both sides."""

    lower: int
    upper: int
    exhaustive: bool
    enumerated: int
    lower_reasons: tuple[str, ...] = ()
    witness: OrderedHandleDecomposition | None = None
    witness_order: tuple[int, ...] | None = None
    witness_note: str = ""

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"inconsistent bound: lower {self.lower} exceeds upper {self.upper}")


def search_min_nu(d: OrderedHandleDecomposition, budget: int | None = None) -> Bound:
    """Minimize the ordering value over admissible orders of the fixed handles.

    Enumeration is depth-first lexicographic; ``budget`` caps the number of
    replayed orderings, and ``exhaustive`` reports whether the whole space
    fit inside it.  The witness is a replayable decomposition attaining the
    upper value.
    """
    if budget is not None and budget < 1:
        raise ValueError(f"budget must be a positive number of orderings, got {budget}")
    states = replay(d)

    best: int | None = None
    best_order: tuple[int, ...] | None = None
    enumerated = 0
    exhaustive = True
    for order in iter_linear_extensions(d):
        if budget is not None and enumerated >= budget:
            exhaustive = False
            break
        enumerated += 1
        evaluation = nu_of_ordering(reorder(d, order))
        if best is None or evaluation.nu < best:
            best = evaluation.nu
            best_order = order
    if best is None or best_order is None:
        # Unreachable: a positive budget always admits the first extension,
        # and even a handle-free trace has the empty ordering.
        raise RuntimeError("no admissible ordering enumerated")

    closed = not d.base and not states[-1].components
    lb = lower_bound_rules(d.m, closed=closed, trace=d)
    return Bound(
        lower=lb.value,
        upper=best,
        exhaustive=exhaustive,
        enumerated=enumerated,
        lower_reasons=lb.reasons,
        witness=reorder(d, best_order) if best_order else d,
        witness_order=best_order,
    )


# --- per-base bookkeeping ----------------------------------------------------


@dataclass(frozen=True)
class NuBoundsReport:
    """Bounds per candidate base plus the max-over-bases summary.

    The summary upper is only populated when the caller asserts the base
    list is complete; maximizing over a partial list certifies nothing.
    """

    per_base: tuple[tuple[str, Bound], ...]
    summary_lower: int
    summary_lower_reasons: tuple[str, ...]
    summary_upper: int | None
    bases_complete: bool

    def bound_for(self, label: str) -> Bound:
        for name, bound in self.per_base:
            if name == label:
                return bound
        raise KeyError(label)


def nu_bounds(
    presentations: Sequence[tuple[str, OrderedHandleDecomposition]],
    *,
    heegaard_genus: int | None = None,
    bases_complete: bool = False,
    budget: int | None = None,
) -> NuBoundsReport:
    """Run the ordering search per base and combine into a manifold summary.

    Repeated base labels merge (best upper, best lower); passing several
    presentations under one label asserts they present the same pair.
    """
    if not presentations:
        raise ValueError("need at least one (base label, decomposition) pair")
    combined: dict[str, Bound] = {}
    for label, d in presentations:
        bound = search_min_nu(d, budget=budget)
        if heegaard_genus is not None and d.m == 3:
            cap = heegaard_upper(heegaard_genus)
            if cap < bound.upper:
                bound = replace(
                    bound,
                    upper=cap,
                    exhaustive=False,
                    witness=None,
                    witness_order=None,
                    witness_note=f"splitting-genus certificate 2*{heegaard_genus}+2",
                )
        prev = combined.get(label)
        if prev is not None:
            bound = Bound(
                lower=max(prev.lower, bound.lower),
                upper=min(prev.upper, bound.upper),
                exhaustive=prev.exhaustive if prev.upper <= bound.upper else bound.exhaustive,
                enumerated=prev.enumerated + bound.enumerated,
                lower_reasons=tuple(dict.fromkeys(prev.lower_reasons + bound.lower_reasons)),
                witness=prev.witness if prev.upper <= bound.upper else bound.witness,
                witness_order=(
                    prev.witness_order if prev.upper <= bound.upper else bound.witness_order
                ),
                witness_note=prev.witness_note if prev.upper <= bound.upper else bound.witness_note,
            )
        combined[label] = bound

    per_base = tuple(combined.items())
    lower_label, lower_bound_entry = max(per_base, key=lambda kv: kv[1].lower)
    summary_lower = lower_bound_entry.lower
    reasons = tuple(
        f"base {lower_label}: {reason}" for reason in lower_bound_entry.lower_reasons
    )
    summary_upper = max(b.upper for _, b in per_base) if bases_complete else None
    return NuBoundsReport(per_base, summary_lower, reasons, summary_upper, bases_complete)


def smallest_component_key(comp_id: str) -> tuple:
    """Sort key re-export for report consumers."""
    return id_sort_key(comp_id)
