"""Generalized ordinal sums and completion-compatible summand families.

A sum family stacks posets along a finite chain of indices; adjacent
summands may share one glue element (greatest of the lower, least of the
upper). The yoked construction completes each summand and then identifies
boundary elements so that the sum of the completions is the completion of
the sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

from .completion import dm_completion
from .errors import (
    HypothesisViolated,
    InvalidFamily,
    ParseError,
    PreconditionError,
    YokedConditionFailed,
)
from .poset import FinitePoset, bits, is_isomorphic, parse_poset_text
from .reports import CheckResult, PropertyReport
from .secpc import classify, sec_table

# Element identities across summands, sums, and completions: original
# elements carry their global index in the base sum, new completion elements
# carry their source summand and cut mask.
PID = "p"
CUT = "c"


@dataclass(frozen=True)
class SumFamily:
    """Finite chain of summands with optional glue between adjacent ones.

    glue[k], when present, names (top element of summand k, bottom element
    of summand k+1); the two are identified in the sum. Glue is always
    explicit, never inferred from equal labels.
    """

    index_labels: tuple[str, ...]
    summands: tuple[FinitePoset, ...]
    glue: tuple[tuple[str, str] | None, ...]

    def __post_init__(self):
        if len(self.index_labels) != len(self.summands):
            raise ValueError("one index label per summand required")
        if len(self.glue) != max(len(self.summands) - 1, 0):
            raise ValueError("one glue slot per adjacent pair required")
        if len(set(self.index_labels)) != len(self.index_labels):
            raise ValueError("index labels must be distinct")


def validate_family(F: SumFamily):
    """Check the construction conditions; raises InvalidFamily."""
    if not F.summands:
        raise InvalidFamily("(i)", ("empty family",))
    for k, P in enumerate(F.summands):
        if not any(P.lt(a, b) for a in range(P.size) for b in range(P.size)):
            raise InvalidFamily("(i)", (F.index_labels[k],))
    if F.summands[-1].top is None:
        raise InvalidFamily("top", (F.index_labels[-1],))
    for k, g in enumerate(F.glue):
        if g is None:
            continue
        lower, upper = F.summands[k], F.summands[k + 1]
        lo_name, hi_name = g
        lo = lower.index(lo_name)
        hi = upper.index(hi_name)
        if lower.top != lo:
            raise InvalidFamily("(iv)", (F.index_labels[k], lo_name))
        if upper.bottom != hi:
            raise InvalidFamily("(iv)", (F.index_labels[k + 1], hi_name))


@dataclass(frozen=True)
class SumPoset:
    """A built sum: the poset plus, per summand, the local-to-global map."""

    family: SumFamily
    poset: FinitePoset
    member_map: tuple[tuple[int, ...], ...]

    @cached_property
    def max_index(self) -> tuple[int, ...]:
        out = [0] * self.poset.size
        for k, members in enumerate(self.member_map):
            for g in members:
                out[g] = max(out[g], k)
        return tuple(out)

    @cached_property
    def min_index(self) -> tuple[int, ...]:
        out = [len(self.member_map)] * self.poset.size
        for k, members in enumerate(self.member_map):
            for g in members:
                out[g] = min(out[g], k)
        return tuple(out)

    @cached_property
    def _locals(self) -> tuple[dict, ...]:
        return tuple(
            {g: l for l, g in enumerate(members)} for members in self.member_map
        )

    def local_index(self, k: int, g: int) -> int | None:
        return self._locals[k].get(g)


def _global_names(F: SumFamily, member_map, count: int) -> tuple[str, ...]:
    owner = [None] * count
    for k, members in enumerate(member_map):
        for l, g in enumerate(members):
            if owner[g] is None:
                owner[g] = (k, l)
    bare = [F.summands[k].names[l] for k, l in owner]
    if len(set(bare)) == count:
        names = bare
    else:
        names = [f"{F.index_labels[k]}_{F.summands[k].names[l]}" for k, l in owner]
    used = set()
    out = []
    for nm in names:
        while nm in used:
            nm += "_"
        used.add(nm)
        out.append(nm)
    return tuple(out)


def build_sum(F: SumFamily) -> SumPoset:
    """Disjoint union modulo glue, ordered within summands and across
    increasing indices. The result always has a greatest element."""
    validate_family(F)
    member_map = []
    next_id = 0
    for k, P in enumerate(F.summands):
        ids = []
        shared_local = None
        if k > 0 and F.glue[k - 1] is not None:
            shared_local = P.index(F.glue[k - 1][1])
        for l in range(P.size):
            if shared_local == l:
                prev = F.summands[k - 1]
                ids.append(member_map[k - 1][prev.index(F.glue[k - 1][0])])
            else:
                ids.append(next_id)
                next_id += 1
        member_map.append(tuple(ids))
    n = next_id
    names = _global_names(F, member_map, n)

    min_pos = [len(F.summands)] * n
    max_pos = [-1] * n
    for k, members in enumerate(member_map):
        for g in members:
            min_pos[g] = min(min_pos[g], k)
            max_pos[g] = max(max_pos[g], k)

    rows = [1 << g for g in range(n)]
    for k, P in enumerate(F.summands):
        ids = member_map[k]
        for a in range(P.size):
            for b in bits(P.up[a]):
                rows[ids[a]] |= 1 << ids[b]
    for ga in range(n):
        for gb in range(n):
            if min_pos[ga] < max_pos[gb]:
                rows[ga] |= 1 << gb
    try:
        poset = FinitePoset(names, tuple(rows))
    except ValueError as exc:
        raise InvalidFamily("order", (str(exc),)) from None
    assert poset.top is not None, "a valid sum always has a greatest element"
    return SumPoset(F, poset, tuple(member_map))


# -- section complements on sums ---------------------------------------------


@lru_cache(maxsize=None)
def _summand_star_gap(F: SumFamily):
    """First (summand, a, b) with a not<= b whose complement is undefined.

    The case formula consults summand complements only at pairs a not<= b
    (comparable pairs resolve to the sum's top), so this is the exact
    definedness the sum construction needs: a summand with a bottom but no
    top is acceptable even though its x*x entries at the bottom are
    undefined.
    """
    for k, P in enumerate(F.summands):
        T = sec_table(P)
        for a in range(P.size):
            for b in range(P.size):
                if not P.leq(a, b) and T.star[a][b] is None:
                    return (k, P.names[a], P.names[b])
    return None


def check_sum_hypothesis(F: SumFamily):
    """A summand without a least element forces its predecessor to lack a
    greatest element; vacuous for the first summand."""
    for j in range(1, len(F.summands)):
        if F.summands[j].bottom is None and F.summands[j - 1].top is not None:
            raise HypothesisViolated(F.index_labels[j], F.index_labels[j - 1])


def _formula_star(sp: SumPoset, a: int, b: int) -> int:
    """Case formula for a*b on the sum, with indices maximal for a and b:
    top when a <= b, the summand complement when both live at the same
    maximal index, and b itself when a sits strictly higher."""
    P = sp.poset
    if P.leq(a, b):
        return P.top
    i = sp.max_index[a]
    j = sp.max_index[b]
    if i == j:
        T = sec_table(sp.family.summands[i])
        la = sp.local_index(i, a)
        lb = sp.local_index(i, b)
        v = T.value(la, lb)
        return sp.member_map[i][v]
    assert i > j, "a above b across summands would force a <= b"
    return b


def _check_summand_stars(F: SumFamily):
    gap = _summand_star_gap(F)
    if gap is not None:
        k, a, b = gap
        raise PreconditionError(
            f"summand {F.index_labels[k]!r} is not sectionally pseudocomplemented "
            f"at {a}*{b}"
        )


def sum_sec_pc(F: SumFamily, a: str, b: str, sum_poset: SumPoset | None = None) -> str:
    """Section complement on the sum by the case formula; requires every
    summand complement defined where the formula consults it and the
    bottom/top hypothesis."""
    sp = sum_poset if sum_poset is not None else build_sum(F)
    _check_summand_stars(F)
    check_sum_hypothesis(F)
    g = _formula_star(sp, sp.poset.index(a), sp.poset.index(b))
    return sp.poset.names[g]


# -- completed families --------------------------------------------------------


@dataclass(frozen=True)
class CompletedSummand:
    poset: FinitePoset
    ids: tuple[tuple, ...]


@dataclass(frozen=True)
class YokedFamily:
    """Per-index completions whose boundary elements have been identified so
    that their sum completes the base sum."""

    base: SumFamily
    sum: SumPoset
    summands: tuple[FinitePoset, ...]
    ids: tuple[tuple[tuple, ...], ...]

    def to_sum_family(self) -> SumFamily:
        glue = []
        for k in range(len(self.summands) - 1):
            shared = set(self.ids[k]) & set(self.ids[k + 1])
            if shared:
                sid = shared.pop()
                lo = self.summands[k].names[self.ids[k].index(sid)]
                hi = self.summands[k + 1].names[self.ids[k + 1].index(sid)]
                glue.append((lo, hi))
            else:
                glue.append(None)
        return SumFamily(self.base.index_labels, self.summands, tuple(glue))


def _related_ids(sp: SumPoset) -> list[CompletedSummand]:
    """Per summand: its completion, original elements keeping their sum
    identity and each non-principal cut tagged with its source index."""
    out = []
    for k, P in enumerate(sp.family.summands):
        dm = dm_completion(P)
        rev = {ci: x for x, ci in enumerate(dm.embed)}
        ids = []
        for ci in range(len(dm.cuts)):
            if dm.principal[ci]:
                ids.append((PID, sp.member_map[k][rev[ci]]))
            else:
                ids.append((CUT, k, dm.cuts[ci]))
        out.append(CompletedSummand(dm.lattice, tuple(ids)))
    return out


def _apply_step1(related, F: SumFamily):
    """Replace the top of each completion of a topless summand by the bottom
    of its successor's completion (disjoint adjacent summands only)."""
    ids = [list(cs.ids) for cs in related]
    for k in range(len(related) - 1):
        if F.glue[k] is None and F.summands[k].top is None:
            t = related[k].poset.top
            b = related[k + 1].poset.bottom
            ids[k][t] = related[k + 1].ids[b]
    return [CompletedSummand(cs.poset, tuple(i)) for cs, i in zip(related, ids)]


def _apply_step2(stepped, F: SumFamily):
    """Replace the bottom of each completion of a bottomless summand by the
    (post step 1) top of its predecessor."""
    ids = [list(cs.ids) for cs in stepped]
    for j in range(1, len(stepped)):
        if F.glue[j - 1] is None and F.summands[j].bottom is None:
            b = stepped[j].poset.bottom
            t = stepped[j - 1].poset.top
            ids[j][b] = stepped[j - 1].ids[t]
    return [CompletedSummand(cs.poset, tuple(i)) for cs, i in zip(stepped, ids)]


def _finalize(sp: SumPoset, stepped) -> YokedFamily:
    F = sp.family
    name_of = {}
    for k, cs in enumerate(stepped):
        for id_ in cs.ids:
            if id_ in name_of:
                continue
            if id_[0] == PID:
                name_of[id_] = sp.poset.names[id_[1]]
            else:
                _, src, mask = id_
                src_dm = dm_completion(F.summands[src])
                ci = src_dm.cuts.index(mask)
                name_of[id_] = f"{src_dm.lattice.names[ci]}__{F.index_labels[src]}"
    posets = []
    for cs in stepped:
        names = tuple(name_of[id_] for id_ in cs.ids)
        posets.append(cs.poset.relabeled(names))
    return YokedFamily(
        base=F,
        sum=sp,
        summands=tuple(posets),
        ids=tuple(cs.ids for cs in stepped),
    )


def dm_related_family(F: SumFamily) -> tuple[CompletedSummand, ...]:
    """Completions of the summands with tagged new elements, before any
    boundary identification."""
    sp = build_sum(F)
    related = _related_ids(sp)
    named = _finalize(sp, related)
    return tuple(
        CompletedSummand(named.summands[k], related[k].ids)
        for k in range(len(related))
    )


def dm_yoked_family(F: SumFamily) -> YokedFamily:
    """Two-step boundary identification over the related family; all yoked
    conditions are verified on the result."""
    sp = build_sum(F)
    related = _related_ids(sp)
    fam = _finalize(sp, _apply_step2(_apply_step1(related, F), F))
    check_yoked_family(fam)
    return fam


def check_yoked_family(fam: YokedFamily):
    """Verify conditions (y1)-(y8); raises YokedConditionFailed."""
    F = fam.base
    sp = fam.sum
    m = len(fam.summands)
    idsets = [set(ids) for ids in fam.ids]

    for k in range(m):
        Q = fam.summands[k]
        ids = fam.ids[k]
        P = F.summands[k]
        pos = {id_: i for i, id_ in enumerate(ids)}
        emb = []
        for l in range(P.size):
            id_ = (PID, sp.member_map[k][l])
            if id_ not in pos:
                raise YokedConditionFailed("(y1)", (F.index_labels[k], P.names[l]))
            emb.append(pos[id_])
        for a in range(P.size):
            for b in range(P.size):
                if P.leq(a, b) != Q.leq(emb[a], emb[b]):
                    raise YokedConditionFailed(
                        "(y1)", (F.index_labels[k], P.names[a], P.names[b])
                    )
        if is_isomorphic(Q, dm_completion(P).lattice) is None:
            raise YokedConditionFailed("(y1)", (F.index_labels[k], "not a completion"))
        for q in range(Q.size):
            below = 0
            above = 0
            for e in emb:
                if Q.leq(e, q):
                    below |= 1 << e
                if Q.leq(q, e):
                    above |= 1 << e
            if Q.least(Q.upper_cone(below)) != q or Q.greatest(Q.lower_cone(above)) != q:
                raise YokedConditionFailed(
                    "(y1)", (F.index_labels[k], Q.names[q], "not dense")
                )

    for i in range(m):
        for j in range(i + 2, m):
            if idsets[i] & idsets[j]:
                raise YokedConditionFailed("(y2)", (F.index_labels[i], F.index_labels[j]))
    for i in range(m):
        for j in range(i + 1, m):
            if len(idsets[i] & idsets[j]) > 1:
                raise YokedConditionFailed("(y3)", (F.index_labels[i], F.index_labels[j]))

    for i in range(m - 1):
        j = i + 1
        if F.glue[i] is not None:
            continue
        Pi, Pj = F.summands[i], F.summands[j]
        Qi, Qj = fam.summands[i], fam.summands[j]
        top_id = fam.ids[i][Qi.top]
        bot_id = fam.ids[j][Qj.bottom]
        if Pi.top is not None and Pj.bottom is not None:
            if idsets[i] & idsets[j]:
                raise YokedConditionFailed("(y4)", (F.index_labels[i], F.index_labels[j]))
        elif Pi.top is None and Pj.bottom is not None:
            want = (PID, sp.member_map[j][Pj.bottom])
            if top_id != want:
                raise YokedConditionFailed("(y5)", (F.index_labels[i], F.index_labels[j]))
        elif Pi.top is not None and Pj.bottom is None:
            want = (PID, sp.member_map[i][Pi.top])
            if bot_id != want:
                raise YokedConditionFailed("(y6)", (F.index_labels[i], F.index_labels[j]))
        else:
            if top_id != bot_id:
                raise YokedConditionFailed("(y7)", (F.index_labels[i], F.index_labels[j]))

    for i in range(m):
        for j in range(i + 1, m):
            shared = idsets[i] & idsets[j]
            if not shared:
                continue
            sid = shared.pop()
            Qi, Qj = fam.summands[i], fam.summands[j]
            if fam.ids[i][Qi.top] != sid or fam.ids[j][Qj.bottom] != sid:
                raise YokedConditionFailed("(y8)", (F.index_labels[i], F.index_labels[j]))


# -- verification of the completion and complement theorems -------------------


def _completion_vs_yoked(F: SumFamily):
    sp = build_sum(F)
    yoked = dm_yoked_family(F)
    G = yoked.to_sum_family()
    sq = build_sum(G)
    dm = dm_completion(sp.poset)
    pinned = {}
    for k in range(len(G.summands)):
        for l, id_ in enumerate(yoked.ids[k]):
            if id_[0] == PID:
                pinned[dm.embed[id_[1]]] = sq.member_map[k][l]
    witness = is_isomorphic(dm.lattice, sq.poset, pinned=pinned)
    return sp, yoked, sq, dm, pinned, witness


def verify_sum_completion(F: SumFamily) -> PropertyReport:
    """The completion of the sum is isomorphic to the sum of the yoked
    completions, by an isomorphism fixing the embedded elements."""
    sp, yoked, sq, dm, pinned, witness = _completion_vs_yoked(F)
    checks = [
        CheckResult(
            "completion-isomorphic-to-yoked-sum",
            witness is not None,
            None if witness is not None else (dm.lattice.size, sq.poset.size),
            f"{dm.lattice.size} cuts vs {sq.poset.size} summed elements",
        )
    ]
    labels_ok = all(
        dm.lattice.names[ci] == sq.poset.names[t] for ci, t in pinned.items()
    )
    checks.append(CheckResult("embedded-labels-preserved", labels_ok, None))
    return PropertyReport("sum-completion", tuple(checks))


def verify_sum_secpc(F: SumFamily) -> PropertyReport:
    """Three-way agreement: the case formula matches the direct table on the
    sum, the completion of the sum is sectionally pseudocomplemented, and
    its table matches the case formula over the yoked family."""
    for k, P in enumerate(F.summands):
        if not classify(dm_completion(P).lattice).is_sec_pc:
            raise PreconditionError(
                f"completion of summand {F.index_labels[k]!r} is not "
                "sectionally pseudocomplemented"
            )
    sp = build_sum(F)
    _check_summand_stars(F)
    check_sum_hypothesis(F)

    checks = []
    T = sec_table(sp.poset)
    w = None
    for a in range(sp.poset.size):
        for b in range(sp.poset.size):
            if T.star[a][b] != _formula_star(sp, a, b):
                w = (sp.poset.names[a], sp.poset.names[b])
                break
        if w:
            break
    checks.append(CheckResult("formula-matches-direct-table", w is None, w))

    _, yoked, sq, dm, pinned, witness = _completion_vs_yoked(F)
    dm_rep = classify(dm.lattice)
    checks.append(
        CheckResult(
            "completion-sectionally-pseudocomplemented",
            dm_rep.is_sec_pc,
            None if dm_rep.is_sec_pc else dm_rep.witnesses[0][1],
        )
    )

    w = None
    if witness is None:
        w = ("no isomorphism",)
    else:
        TD = sec_table(dm.lattice)
        check_sum_hypothesis(sq.family)
        for u in range(dm.lattice.size):
            for v in range(dm.lattice.size):
                val = TD.star[u][v]
                if val is None or witness[val] != _formula_star(
                    sq, witness[u], witness[v]
                ):
                    w = (dm.lattice.names[u], dm.lattice.names[v])
                    break
            if w:
                break
    checks.append(CheckResult("completion-table-matches-yoked-formula", w is None, w))

    return PropertyReport("sum-section-complements", tuple(checks))


# -- text format ----------------------------------------------------------------


def parse_sum_family_text(text: str) -> SumFamily:
    """Parse the sum-family format: repeated poset blocks prefixed by
    ``summand <index-label>``, then optional ``glue: <i>.<top> = <j>.<bottom>``
    lines. Index order is file order."""
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    blocks: list[tuple[str, list[str]]] = []
    glue_lines = []
    current: list[str] | None = None
    for line in lines:
        if line.startswith("summand"):
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(f"expected 'summand <index-label>', got {line!r}")
            current = []
            blocks.append((parts[1], current))
        elif line.startswith("glue:"):
            current = None
            glue_lines.append(line[len("glue:") :].strip())
        else:
            if current is None:
                raise ParseError(f"unexpected line outside a summand block: {line!r}")
            current.append(line)
    if not blocks:
        raise ParseError("no summand blocks found")
    index_labels = []
    summands = []
    for label, body in blocks:
        index_labels.append(label)
        _, poset = parse_poset_text("\n".join(body))
        summands.append(poset)
    if len(set(index_labels)) != len(index_labels):
        raise ParseError("duplicate summand index label")

    glue: list[tuple[str, str] | None] = [None] * (len(summands) - 1)
    pos = {label: k for k, label in enumerate(index_labels)}
    for spec in glue_lines:
        try:
            left, right = (side.strip() for side in spec.split("="))
            li, le = left.split(".")
            ri, re_ = right.split(".")
        except ValueError:
            raise ParseError(f"bad glue line {spec!r}") from None
        if li not in pos or ri not in pos:
            raise ParseError(f"glue references unknown summand in {spec!r}")
        if pos[ri] != pos[li] + 1:
            raise ParseError(f"glue must join adjacent summands: {spec!r}")
        glue[pos[li]] = (le, re_)
    return SumFamily(tuple(index_labels), tuple(summands), tuple(glue))


def load_sum_family(path) -> SumFamily:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_sum_family_text(fh.read())
