"""Dedekind-MacNeille completion by cuts.

A cut is a subset A with A = L(U(A)). The completion is the lattice of all
cuts ordered by inclusion, with x embedded as the principal cut L(x).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import OrdkitError, PreconditionError
from .poset import FinitePoset, bits
from .secpc import ClassificationReport, classify


@dataclass(frozen=True)
class DMResult:
    """Completion lattice plus the canonical embedding.

    ``cuts[i]`` is the member bitmask of cut i over the base poset,
    ``embed[x]`` the index of the principal cut L(x), and ``principal[i]``
    whether cut i is principal. Labels of principal cuts reuse the element
    name; non-principal cuts are labeled L_x_y_... from the minimal
    generating antichain.
    """

    base: FinitePoset
    lattice: FinitePoset
    cuts: tuple[int, ...]
    embed: tuple[int, ...]
    principal: tuple[bool, ...]


def cut_closure(P: FinitePoset, mask: int) -> int:
    """L(U(mask)); idempotent, and mask is a cut iff it is a fixpoint."""
    return P.lower_cone(P.upper_cone(mask))


def dm_cuts(P: FinitePoset) -> tuple[int, ...]:
    """The cut set, as closures L(U(S)) of subsets with duplicates removed.

    Organized as a worklist over intersections of principal down-cones
    (every closure is such an intersection, with L(U(S)) = P for unbounded
    S), so the enumeration stays proportional to the number of cuts instead
    of 2^n.
    """
    found = {P.full}
    frontier = [P.full]
    while frontier:
        m = frontier.pop()
        for x in range(P.size):
            t = m & P.down[x]
            if t not in found:
                found.add(t)
                frontier.append(t)
    return tuple(sorted(found, key=lambda m: (m.bit_count(), m)))


def dm_cuts_bruteforce(P: FinitePoset) -> tuple[int, ...]:
    """Oracle: scan all 2^n subsets for fixpoints of the cut closure."""
    out = [m for m in range(P.full + 1) if cut_closure(P, m) == m]
    return tuple(sorted(out, key=lambda m: (m.bit_count(), m)))


def _cut_labels(P: FinitePoset, cuts, principal_of) -> tuple[str, ...]:
    labels = []
    used = set()
    for i, mask in enumerate(cuts):
        x = principal_of[i]
        if x is not None:
            label = P.names[x]
        else:
            gens = P.minimal_elements(P.upper_cone(mask))
            label = "L_" + "_".join(P.names[g] for g in gens)
        while label in used:
            label += "_"
        used.add(label)
        labels.append(label)
    return tuple(labels)


@lru_cache(maxsize=None)
def dm_completion(P: FinitePoset) -> DMResult:
    """Completion lattice with all invariants verified before returning:
    the result is a lattice, the embedding preserves and reflects order, and
    every cut is a join of embedded elements below it and a meet of embedded
    elements above it."""
    cuts = dm_cuts(P)
    index = {m: i for i, m in enumerate(cuts)}
    embed = tuple(index[P.down[x]] for x in range(P.size))
    principal_of: list[int | None] = [None] * len(cuts)
    for x in range(P.size):
        principal_of[embed[x]] = x
    labels = _cut_labels(P, cuts, principal_of)
    k = len(cuts)
    rows = []
    for a in cuts:
        row = 0
        for j, b in enumerate(cuts):
            if a & ~b == 0:
                row |= 1 << j
        rows.append(row)
    lattice = FinitePoset(labels, tuple(rows))

    if not lattice.is_lattice or (k and (lattice.top is None or lattice.bottom is None)):
        raise OrdkitError("cut order is not a complete lattice")
    for x in range(P.size):
        for y in range(P.size):
            if P.leq(x, y) != lattice.leq(embed[x], embed[y]):
                raise OrdkitError(
                    "embedding does not preserve order", (P.names[x], P.names[y])
                )
    for i, mask in enumerate(cuts):
        below = 0
        for x in bits(mask):
            below |= 1 << embed[x]
        if lattice.least(lattice.upper_cone(below)) != i:
            raise OrdkitError("cut is not a join of embedded elements", (labels[i],))
        above = 0
        for y in bits(P.upper_cone(mask)):
            above |= 1 << embed[y]
        if lattice.greatest(lattice.lower_cone(above)) != i:
            raise OrdkitError("cut is not a meet of embedded elements", (labels[i],))

    return DMResult(
        base=P,
        lattice=lattice,
        cuts=cuts,
        embed=embed,
        principal=tuple(p is not None for p in principal_of),
    )


@dataclass(frozen=True)
class PreservationReport:
    """Whether the completion of a sectionally pseudocomplemented poset is
    itself sectionally pseudocomplemented."""

    preserved: bool
    witness: tuple[str, ...] | None
    completion: DMResult
    classification: ClassificationReport


def dm_preserves_secpc(P: FinitePoset) -> PreservationReport:
    if not classify(P).is_sec_pc:
        raise PreconditionError("input poset is not sectionally pseudocomplemented")
    dm = dm_completion(P)
    rep = classify(dm.lattice)
    witness = None
    if not rep.is_sec_pc:
        for prop, els in rep.witnesses:
            if prop.startswith("sec_pc"):
                witness = els
                break
    return PreservationReport(rep.is_sec_pc, witness, dm, rep)


def completion_sidecar(dm: DMResult) -> dict:
    """JSON sidecar mapping cut labels to member lists and principal flags."""
    return {
        "base_elements": list(dm.base.names),
        "cuts": [
            {
                "label": dm.lattice.names[i],
                "members": list(dm.base.names_of(dm.cuts[i])),
                "principal": dm.principal[i],
            }
            for i in range(len(dm.cuts))
        ],
    }
