"""Piece-counting obstructions for boundary-union decompositions.

Pure integer arithmetic on the bookkeeping of a decomposition into pieces:
w pieces, rho glued interface pairs, z free boundary components.  The rank
inequalities come from the connectivity tail of a Mayer-Vietoris sequence
(Q^l -> Q^rho -> Q^w -> Q -> 0 for a connected total space) and combine
into a ceiling on the number of pieces; together with a per-piece handle
budget this refutes families whose minimal handle counts grow without
bound while l and z stay fixed.

Every piece is required to have at least three boundary components; the
interface floor below is exactly what that hypothesis buys.
"""

from __future__ import annotations

from dataclasses import dataclass

from .trace import OrderedHandleDecomposition


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@dataclass(frozen=True)
class DecompositionGraph:
    """Pieces, glued interfaces, and free boundary counts of a decomposition.

    ``interfaces`` lists edges (piece i, piece j, number of glued boundary
    pairs) with i != j.  The identity 2*rho + z = sum of boundary counts is
    enforced at construction.
    """

    boundary_counts: tuple[int, ...]
    interfaces: tuple[tuple[int, int, int], ...]
    z: int
    handle_costs: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "boundary_counts", tuple(int(c) for c in self.boundary_counts))
        object.__setattr__(
            self, "interfaces", tuple((int(i), int(j), int(c)) for i, j, c in self.interfaces)
        )
        w = len(self.boundary_counts)
        if w < 1:
            raise ValueError("need at least one piece")
        if any(c < 0 for c in self.boundary_counts):
            raise ValueError(f"boundary counts must be non-negative: {self.boundary_counts}")
        glued = [0] * w
        for i, j, count in self.interfaces:
            if not (0 <= i < w and 0 <= j < w):
                raise ValueError(f"interface ({i}, {j}) references a missing piece")
            if i == j:
                raise ValueError(f"piece {i} cannot be glued to itself")
            if count < 1:
                raise ValueError(f"interface ({i}, {j}) needs a positive count, got {count}")
            glued[i] += count
            glued[j] += count
        for i, (total, used) in enumerate(zip(self.boundary_counts, glued)):
            if used > total:
                raise ValueError(
                    f"piece {i} glues {used} boundary components but only has {total}"
                )
        if self.z != sum(self.boundary_counts) - 2 * self.rho:
            raise ValueError(
                f"free boundary count {self.z} breaks 2*rho + z = total boundary "
                f"({2 * self.rho} + {self.z} != {sum(self.boundary_counts)})"
            )
        if self.handle_costs is not None:
            costs = tuple(int(c) for c in self.handle_costs)
            object.__setattr__(self, "handle_costs", costs)
            if len(costs) != w:
                raise ValueError(f"need {w} handle costs, got {len(costs)}")
            if any(c < 0 for c in costs):
                raise ValueError(f"handle costs must be non-negative: {costs}")

    @property
    def w(self) -> int:
        return len(self.boundary_counts)

    @property
    def rho(self) -> int:
        return sum(count for _, _, count in self.interfaces)


@dataclass(frozen=True)
class InterfaceBound:
    rho: int
    floor: int
    holds: bool


def interface_lower_bound(g: DecompositionGraph) -> InterfaceBound:
    """rho >= ceil((3w - z) / 2); requires every piece to have >= 3 boundaries."""
    bad = [i for i, c in enumerate(g.boundary_counts) if c < 3]
    if bad:
        raise ValueError(
            f"pieces {bad} have fewer than three boundary components; "
            "the counting argument assumes at least three"
        )
    floor = _ceil_div(3 * g.w - g.z, 2)
    return InterfaceBound(g.rho, floor, g.rho >= floor)


def betti1_floor(g: DecompositionGraph) -> int:
    """Lower bound on the first rational Betti number of the glued total space."""
    return max(g.rho - g.w + 1, _ceil_div(g.w - g.z + 2, 2), 0)


def pieces_ceiling(l: int, z: int) -> int:
    """Most pieces any qualifying decomposition can have: 2l + z - 2.

    A negative value means no decomposition satisfying the three-boundary
    hypothesis exists at all.
    """
    if l < 0 or z < 0:
        raise ValueError(f"l and z must be non-negative, got ({l}, {z})")
    return 2 * l + z - 2


@dataclass(frozen=True)
class HandleBudget:
    """Fixed data of a refutation instance: piece budget h_max, rank l, free z."""

    h_max: int
    l: int
    z: int

    def __post_init__(self):
        if self.h_max < 0 or self.l < 0 or self.z < 0:
            raise ValueError(f"budget fields must be non-negative: {self}")


@dataclass(frozen=True)
class RefutationVerdict:
    decomposable_possible: bool
    max_pieces: int
    max_handles: int


def refute(budget: HandleBudget, h_w: int) -> RefutationVerdict:
    """Compare a target's minimal handle count against the fixed ceiling.

    The piece ceiling 2l + z - 2 is constant in the target, so any family
    with fixed l and z but unbounded minimal handle counts is eventually
    refuted.
    """
    max_pieces = pieces_ceiling(budget.l, budget.z)
    max_handles = max_pieces * budget.h_max
    possible = max_pieces >= 1 and h_w <= max_handles
    return RefutationVerdict(possible, max_pieces, max_handles)


def h_upper(d: OrderedHandleDecomposition) -> int:
    """Witness upper bound for the minimal handle count: this trace's handle
    count (a non-empty base rides a collar and costs nothing)."""
    return d.delta


def graph_to_json(g: DecompositionGraph) -> dict:
    data = {
        "boundary_counts": list(g.boundary_counts),
        "interfaces": [{"i": i, "j": j, "count": c} for i, j, c in g.interfaces],
        "z": g.z,
    }
    if g.handle_costs is not None:
        data["handle_costs"] = list(g.handle_costs)
    return data


def graph_from_json(data) -> DecompositionGraph:
    try:
        return DecompositionGraph(
            tuple(int(c) for c in data["boundary_counts"]),
            tuple((int(e["i"]), int(e["j"]), int(e["count"])) for e in data["interfaces"]),
            int(data["z"]),
            tuple(int(c) for c in data["handle_costs"]) if "handle_costs" in data else None,
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed decomposition-graph document: {exc}") from exc
