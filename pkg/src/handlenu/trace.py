"""Ordered handle decompositions and replay of their free-boundary states.

A decomposition is a base (a possibly empty disjoint union of closed
(m-1)-manifolds) together with an ordered list of handle records.
Replaying the records produces, for every prefix length mu, the multiset
of connected closed components of the free boundary -- the part of the
boundary still available for later attachments.  The base itself is kept
on the fixed side of a collar and never consumed.

Two attachment styles exist:

* dimension-3 surface calculus (``Dim3Zero`` .. ``Dim3Three``): every
  boundary component is an orientable surface tracked by genus, and each
  record rewrites genera locally;
* ``Declared`` records, which state the complete post-attachment free
  boundary outright.  These carry any ambient dimension; the author of the
  trace vouches for geometric realizability, and the engine checks only
  dimensions and connectivity.

Component identifiers name the event that produced them: base components
are ``base:i``; the component created or rewritten by the j-th handle is
``h:j``; events producing several components append ``/0``, ``/1``, ...
(a separating split and every ``Declared`` list, including one-element
lists).  Attachment anchors refer to these identifiers, so a record stays
meaningful when the surrounding order changes; :func:`reorder` rewrites
anchors consistently when handles move.

Trace files are JSON documents ``{"m": ..., "base": [descriptor, ...],
"handles": [{"index": k, "attachment": {...}}, ...]}`` and round-trip
bit-exactly through :func:`canonical_dumps`.
"""

from __future__ import annotations

from dataclasses import dataclass
import json
from typing import Iterator, Sequence, Union

from .homology import (
    Descriptor,
    DescriptorError,
    Sphere,
    Surface,
    betti,
    descriptor_from_json,
    descriptor_to_json,
    dimension,
    normalize,
    pretty,
)


class TraceError(ValueError):
    """Raised for malformed decompositions or trace documents."""


class AttachError(TraceError):
    """A single handle attachment is illegal for the current state."""


class ReplayError(TraceError):
    """Replay failed; carries the 1-based prefix index of the failing handle."""

    def __init__(self, mu: int, message: str):
        self.mu = mu
        super().__init__(f"prefix {mu}: {message}")


@dataclass(frozen=True)
class BoundaryComponent:
    """One connected closed component of a free boundary."""

    id: str
    desc: Descriptor
    origin: str


def id_sort_key(comp_id: str) -> tuple:
    """Deterministic order on component ids: base:i first, then h:j, then /sub."""
    kind, _, rest = comp_id.partition(":")
    main, _, sub = rest.partition("/")
    return (0 if kind == "base" else 1, int(main), int(sub) if sub else -1)


@dataclass(frozen=True)
class BoundaryState:
    """Free boundary after mu handles: a finite set of connected components."""

    mu: int
    components: tuple[BoundaryComponent, ...]

    def __post_init__(self):
        ordered = tuple(sorted(self.components, key=lambda c: id_sort_key(c.id)))
        object.__setattr__(self, "components", ordered)
        ids = [c.id for c in ordered]
        if len(set(ids)) != len(ids):
            raise TraceError(f"duplicate component ids in state {self.mu}: {ids}")

    def ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.components)

    def find(self, comp_id: str) -> BoundaryComponent | None:
        for c in self.components:
            if c.id == comp_id:
                return c
        return None

    def descriptors(self) -> tuple[Descriptor, ...]:
        return tuple(c.desc for c in self.components)


@dataclass(frozen=True)
class Dim3Zero:
    """0-handle in dimension 3: a new sphere boundary component appears."""


@dataclass(frozen=True)
class Dim3One:
    """1-handle: both feet on one component (genus +1) or a tube merging two."""

    a: str
    b: str


@dataclass(frozen=True)
class NonSeparating:
    """Surgery curve that does not separate its surface; genus drops by one."""


@dataclass(frozen=True)
class Separating:
    """Surgery curve splitting a genus g1+g2 surface into genus g1 and g2 pieces."""

    g1: int
    g2: int

    def __post_init__(self):
        if self.g1 < 0 or self.g2 < 0:
            raise TraceError(f"split genera must be non-negative: ({self.g1}, {self.g2})")


@dataclass(frozen=True)
class Dim3Two:
    """2-handle attached along a curve on one boundary surface."""

    anchor: str
    curve: Union[NonSeparating, Separating]


@dataclass(frozen=True)
class Dim3Three:
    """3-handle capping off a sphere component."""

    anchor: str


@dataclass(frozen=True)
class Declared:
    """Full replacement of the free boundary by a stated component list."""

    components: tuple[Descriptor, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))


Attachment = Union[Dim3Zero, Dim3One, Dim3Two, Dim3Three, Declared]

_DIM3_INDEX = {Dim3Zero: 0, Dim3One: 1, Dim3Two: 2, Dim3Three: 3}


@dataclass(frozen=True)
class HandleRecord:
    """A handle of the given index together with its attachment data."""

    index: int
    attachment: Attachment


def anchors_of(record: HandleRecord) -> tuple[str, ...]:
    att = record.attachment
    if isinstance(att, Dim3One):
        return (att.a, att.b) if att.a != att.b else (att.a,)
    if isinstance(att, Dim3Two):
        return (att.anchor,)
    if isinstance(att, Dim3Three):
        return (att.anchor,)
    return ()


@dataclass(frozen=True)
class OrderedHandleDecomposition:
    """Base manifold plus handles in attachment order."""

    m: int
    base: tuple[Descriptor, ...]
    handles: tuple[HandleRecord, ...]

    def __post_init__(self):
        if self.m < 1:
            raise TraceError(f"ambient dimension must be >= 1, got {self.m}")
        object.__setattr__(self, "base", tuple(self.base))
        object.__setattr__(self, "handles", tuple(self.handles))

    @property
    def delta(self) -> int:
        return len(self.handles)

    def labels(self) -> tuple[str, ...]:
        return tuple(f"h:{j}" for j in range(1, self.delta + 1))


def _surface(genus: int) -> Descriptor:
    return Sphere(2) if genus == 0 else Surface(genus)


def _genus_of(comp: BoundaryComponent) -> int:
    desc = normalize(comp.desc)
    if isinstance(desc, Sphere) and desc.n == 2:
        return 0
    if isinstance(desc, Surface):
        return desc.genus
    raise AttachError(
        f"component {comp.id} ({pretty(comp.desc)}) is not an orientable surface"
    )


def _resolve(state: BoundaryState, anchor: str) -> BoundaryComponent:
    comp = state.find(anchor)
    if comp is None:
        raise AttachError(f"dangling anchor {anchor!r}; live components: {list(state.ids())}")
    return comp


def attach(state: BoundaryState, handle: HandleRecord, *, label: str, m: int) -> BoundaryState:
    """Apply one handle record to a boundary state.

    ``label`` is the event id the new components are named after.  Components
    not referenced by an anchor pass through untouched, ids included (a
    ``Declared`` record replaces everything by definition).
    """
    att = handle.attachment
    if not isinstance(att, Declared) and m != 3:
        raise AttachError(
            f"surface-calculus attachments need ambient dimension 3, trace has m={m}"
        )
    keep = {c.id: c for c in state.components}

    if isinstance(att, Dim3Zero):
        new = [BoundaryComponent(label, Sphere(2), label)]
    elif isinstance(att, Dim3One):
        ca = _resolve(state, att.a)
        if att.a == att.b:
            genus = _genus_of(ca) + 1
            del keep[ca.id]
        else:
            cb = _resolve(state, att.b)
            genus = _genus_of(ca) + _genus_of(cb)
            del keep[ca.id], keep[cb.id]
        new = [BoundaryComponent(label, _surface(genus), label)]
    elif isinstance(att, Dim3Two):
        ca = _resolve(state, att.anchor)
        genus = _genus_of(ca)
        del keep[ca.id]
        if isinstance(att.curve, NonSeparating):
            if genus < 1:
                raise AttachError(
                    f"non-separating surgery needs genus >= 1; {ca.id} is a sphere"
                )
            new = [BoundaryComponent(label, _surface(genus - 1), label)]
        else:
            if att.curve.g1 + att.curve.g2 != genus:
                raise AttachError(
                    f"separating split ({att.curve.g1}, {att.curve.g2}) does not add up "
                    f"to genus {genus} of {ca.id}"
                )
            new = [
                BoundaryComponent(f"{label}/0", _surface(att.curve.g1), label),
                BoundaryComponent(f"{label}/1", _surface(att.curve.g2), label),
            ]
    elif isinstance(att, Dim3Three):
        ca = _resolve(state, att.anchor)
        if _genus_of(ca) != 0:
            raise AttachError(f"a cap may only close a sphere; {ca.id} is {pretty(ca.desc)}")
        del keep[ca.id]
        new = []
    elif isinstance(att, Declared):
        keep = {}
        new = [
            BoundaryComponent(f"{label}/{i}", desc, label)
            for i, desc in enumerate(att.components)
        ]
    else:
        raise AttachError(f"unknown attachment {att!r}")

    return BoundaryState(state.mu + 1, tuple(keep.values()) + tuple(new))


def base_state(d: OrderedHandleDecomposition) -> BoundaryState:
    comps = tuple(
        BoundaryComponent(f"base:{i}", desc, f"base:{i}") for i, desc in enumerate(d.base)
    )
    return BoundaryState(0, comps)


def replay(d: OrderedHandleDecomposition) -> tuple[BoundaryState, ...]:
    """States for mu = 0..delta; deterministic, raises ReplayError on failure."""
    states = [base_state(d)]
    for j, handle in enumerate(d.handles, start=1):
        try:
            states.append(attach(states[-1], handle, label=f"h:{j}", m=d.m))
        except AttachError as exc:
            raise ReplayError(j, str(exc)) from exc
    return tuple(states)


def _remap_anchor(anchor: str, relabel: dict[str, str]) -> str:
    main, sep, sub = anchor.partition("/")
    if main in relabel:
        return relabel[main] + sep + sub
    return anchor


def _remap_record(record: HandleRecord, relabel: dict[str, str]) -> HandleRecord:
    att = record.attachment
    if isinstance(att, Dim3One):
        att = Dim3One(_remap_anchor(att.a, relabel), _remap_anchor(att.b, relabel))
    elif isinstance(att, Dim3Two):
        att = Dim3Two(_remap_anchor(att.anchor, relabel), att.curve)
    elif isinstance(att, Dim3Three):
        att = Dim3Three(_remap_anchor(att.anchor, relabel))
    return HandleRecord(record.index, att)


def reorder(d: OrderedHandleDecomposition, order: Sequence[int]) -> OrderedHandleDecomposition:
    """Permute handles; ``order[i]`` is the original 1-based position placed i-th.

    Anchors are rewritten to the new positional labels, so the result is a
    self-contained decomposition.  The caller is responsible for picking an
    order whose replay succeeds (any linear extension of the anchor
    dependencies does).
    """
    if sorted(order) != list(range(1, d.delta + 1)):
        raise TraceError(f"order must be a permutation of 1..{d.delta}, got {list(order)}")
    relabel = {f"h:{orig}": f"h:{new}" for new, orig in enumerate(order, start=1)}
    handles = tuple(_remap_record(d.handles[orig - 1], relabel) for orig in order)
    return OrderedHandleDecomposition(d.m, d.base, handles)


def dualize(d: OrderedHandleDecomposition) -> OrderedHandleDecomposition:
    """Turn the decomposition around: base becomes the final free boundary.

    Handles run in reverse with index k mapped to m - k, and attachment data
    is recomputed so that the dual's replay walks the original state sequence
    backwards.  Declared records declare the pre-attachment state of their
    original counterpart.
    """
    states = replay(d)
    final = states[-1]
    dual_base = tuple(c.desc for c in final.components)
    dmap = {c.id: f"base:{i}" for i, c in enumerate(final.components)}
    dual_handles = []
    for new_pos, orig_pos in enumerate(range(d.delta, 0, -1), start=1):
        handle = d.handles[orig_pos - 1]
        label = f"h:{new_pos}"
        before = states[orig_pos - 1]
        att = handle.attachment
        if isinstance(att, Dim3Zero):
            datt = Dim3Three(dmap.pop(f"h:{orig_pos}"))
        elif isinstance(att, Dim3Three):
            datt = Dim3Zero()
            dmap[att.anchor] = label
        elif isinstance(att, Dim3One):
            anchor = dmap.pop(f"h:{orig_pos}")
            if att.a == att.b:
                datt = Dim3Two(anchor, NonSeparating())
                dmap[att.a] = label
            else:
                g1 = _genus_of(_resolve(before, att.a))
                g2 = _genus_of(_resolve(before, att.b))
                datt = Dim3Two(anchor, Separating(g1, g2))
                dmap[att.a] = f"{label}/0"
                dmap[att.b] = f"{label}/1"
        elif isinstance(att, Dim3Two):
            if isinstance(att.curve, NonSeparating):
                anchor = dmap.pop(f"h:{orig_pos}")
                datt = Dim3One(anchor, anchor)
            else:
                datt = Dim3One(dmap.pop(f"h:{orig_pos}/0"), dmap.pop(f"h:{orig_pos}/1"))
            dmap[att.anchor] = label
        else:
            datt = Declared(tuple(c.desc for c in before.components))
            dmap = {c.id: f"{label}/{i}" for i, c in enumerate(before.components)}
        dual_handles.append(HandleRecord(d.m - handle.index, datt))
    return OrderedHandleDecomposition(d.m, dual_base, tuple(dual_handles))


# --- validation ------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    mu: int | None
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]
    warnings: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(d: OrderedHandleDecomposition) -> ValidationReport:
    """Diagnostics only; never raises.  Empty violations iff replay succeeds
    and the structural checks pass."""
    violations: list[Violation] = []
    warnings: list[str] = []

    for i, desc in enumerate(d.base):
        try:
            if dimension(desc) != d.m - 1:
                violations.append(
                    Violation(0, f"base:{i} has dimension {dimension(desc)}, need {d.m - 1}")
                )
            elif betti(desc).betti[0] != 1:
                violations.append(Violation(0, f"base:{i}: components must be connected"))
        except DescriptorError as exc:
            violations.append(Violation(0, f"base:{i}: {exc}"))

    for j, handle in enumerate(d.handles, start=1):
        if not 0 <= handle.index <= d.m:
            violations.append(
                Violation(j, f"handle index {handle.index} outside 0..{d.m}")
            )
        att = handle.attachment
        if isinstance(att, Declared):
            for i, desc in enumerate(att.components):
                try:
                    if dimension(desc) != d.m - 1:
                        violations.append(
                            Violation(
                                j,
                                f"declared component {i} has dimension {dimension(desc)}, "
                                f"need {d.m - 1}",
                            )
                        )
                    elif betti(desc).betti[0] != 1:
                        violations.append(Violation(j, "components must be connected"))
                except DescriptorError as exc:
                    violations.append(Violation(j, f"declared component {i}: {exc}"))
        else:
            if d.m != 3:
                violations.append(
                    Violation(j, f"surface-calculus attachment in an m={d.m} trace")
                )
            expected = _DIM3_INDEX[type(att)]
            if handle.index != expected:
                violations.append(
                    Violation(
                        j,
                        f"attachment {type(att).__name__} needs index {expected}, "
                        f"got {handle.index}",
                    )
                )

    if not violations:
        try:
            states = replay(d)
        except ReplayError as exc:
            violations.append(Violation(exc.mu, str(exc)))
        else:
            closed = not d.base and not states[-1].components
            if closed and d.m == 3:
                euler = sum((-1) ** h.index for h in d.handles)
                if euler != 0:
                    warnings.append(
                        "closed trace has handle-count alternating sum "
                        f"{euler}, expected 0"
                    )
    return ValidationReport(tuple(violations), tuple(warnings))


# --- JSON ------------------------------------------------------------------


def _attachment_to_json(att: Attachment) -> dict:
    if isinstance(att, Dim3Zero):
        return {"type": "zero"}
    if isinstance(att, Dim3One):
        return {"type": "one", "a": att.a, "b": att.b}
    if isinstance(att, Dim3Two):
        if isinstance(att.curve, NonSeparating):
            curve = {"kind": "nonseparating"}
        else:
            curve = {"kind": "separating", "g1": att.curve.g1, "g2": att.curve.g2}
        return {"type": "two", "anchor": att.anchor, "curve": curve}
    if isinstance(att, Dim3Three):
        return {"type": "three", "anchor": att.anchor}
    if isinstance(att, Declared):
        return {"type": "declared", "components": [descriptor_to_json(c) for c in att.components]}
    raise TraceError(f"unknown attachment {att!r}")


def _attachment_from_json(data) -> Attachment:
    if not isinstance(data, dict) or "type" not in data:
        raise TraceError(f"attachment must be an object with a 'type' tag: {data!r}")
    kind = data["type"]
    try:
        if kind == "zero":
            return Dim3Zero()
        if kind == "one":
            return Dim3One(str(data["a"]), str(data["b"]))
        if kind == "two":
            curve_data = data["curve"]
            if curve_data["kind"] == "nonseparating":
                curve = NonSeparating()
            elif curve_data["kind"] == "separating":
                curve = Separating(int(curve_data["g1"]), int(curve_data["g2"]))
            else:
                raise TraceError(f"unknown curve kind {curve_data['kind']!r}")
            return Dim3Two(str(data["anchor"]), curve)
        if kind == "three":
            return Dim3Three(str(data["anchor"]))
        if kind == "declared":
            return Declared(tuple(descriptor_from_json(c) for c in data["components"]))
    except KeyError as exc:
        raise TraceError(f"attachment of type {kind!r} is missing field {exc}") from exc
    raise TraceError(f"unknown attachment type {kind!r}")


def trace_to_json(d: OrderedHandleDecomposition) -> dict:
    return {
        "m": d.m,
        "base": [descriptor_to_json(desc) for desc in d.base],
        "handles": [
            {"index": h.index, "attachment": _attachment_to_json(h.attachment)}
            for h in d.handles
        ],
    }


def trace_from_json(data) -> OrderedHandleDecomposition:
    if not isinstance(data, dict):
        raise TraceError("trace document must be a JSON object")
    try:
        m = int(data["m"])
        if not isinstance(data["base"], list) or not isinstance(data["handles"], list):
            raise TraceError("'base' and 'handles' must be arrays")
        base = tuple(descriptor_from_json(desc) for desc in data["base"])
        handles = tuple(
            HandleRecord(int(h["index"]), _attachment_from_json(h["attachment"]))
            for h in data["handles"]
        )
    except KeyError as exc:
        raise TraceError(f"trace document is missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, TraceError):
            raise
        raise TraceError(f"malformed trace document: {exc}") from exc
    return OrderedHandleDecomposition(m, base, handles)


def canonical_dumps(obj) -> str:
    """Stable JSON rendering; byte-identical across runs for equal inputs."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def iter_states_pretty(states: Sequence[BoundaryState]) -> Iterator[str]:
    for state in states:
        if not state.components:
            yield f"mu={state.mu}: (empty)"
        else:
            comps = ", ".join(f"{c.id} {pretty(c.desc)}" for c in state.components)
            yield f"mu={state.mu}: {comps}"
