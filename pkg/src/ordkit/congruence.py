"""Congruences of the section operation, quotient posets, and their laws."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import (
    ClassWithoutGreatest,
    NotCongruence,
    NotConvex,
    NotStronglySecPc,
    OrdkitError,
    PreconditionError,
    SizeCapExceeded,
)
from .poset import FinitePoset, bits
from .reports import CheckResult, PropertyReport
from .secpc import SectionTable, classify, sec_table


def _canon(seq) -> tuple[int, ...]:
    remap: dict = {}
    out = []
    for c in seq:
        if c not in remap:
            remap[c] = len(remap)
        out.append(remap[c])
    return tuple(out)


@dataclass(frozen=True)
class Partition:
    """Equivalence relation as a class-id per element.

    Ids are contiguous from 0 in order of first occurrence, so equal
    partitions compare equal. Use the classmethods to build from other
    shapes; the constructor rejects non-canonical id sequences.
    """

    class_of: tuple[int, ...]

    def __post_init__(self):
        if self.class_of != _canon(self.class_of):
            raise ValueError("class ids must be canonical (first occurrence order)")

    @classmethod
    def from_class_of(cls, seq) -> "Partition":
        return cls(_canon(seq))

    @classmethod
    def from_classes(cls, classes, n: int) -> "Partition":
        ids = [-1] * n
        for k, members in enumerate(classes):
            for x in members:
                if not 0 <= x < n or ids[x] != -1:
                    raise ValueError("classes must partition 0..n-1")
                ids[x] = k
        if -1 in ids:
            raise ValueError("classes must cover every element")
        return cls(_canon(ids))

    @classmethod
    def identity(cls, n: int) -> "Partition":
        return cls(tuple(range(n)))

    @classmethod
    def single_class(cls, n: int) -> "Partition":
        return cls((0,) * max(n, 0))

    @property
    def size(self) -> int:
        return len(self.class_of)

    @property
    def num_classes(self) -> int:
        return max(self.class_of) + 1 if self.class_of else 0

    def same(self, a: int, b: int) -> bool:
        return self.class_of[a] == self.class_of[b]

    def classes(self) -> tuple[tuple[int, ...], ...]:
        out = [[] for _ in range(self.num_classes)]
        for x, c in enumerate(self.class_of):
            out[c].append(x)
        return tuple(tuple(c) for c in out)

    def class_mask(self, cid: int) -> int:
        m = 0
        for x, c in enumerate(self.class_of):
            if c == cid:
                m |= 1 << x
        return m


@dataclass(frozen=True)
class QuotientStructure:
    """Quotient poset on the classes; star is present only for strong
    congruences and one_class is the class of the top element."""

    poset: FinitePoset
    star: tuple[tuple[int, ...], ...] | None
    one_class: int


def _require_total(T: SectionTable):
    if not T.is_total:
        raise PreconditionError("section table must be total")


def is_congruence(T: SectionTable, part: Partition) -> tuple[bool, tuple | None]:
    """Compatibility of the partition with * in both arguments."""
    _require_total(T)
    star = T.star
    nm = T.base.names
    n = T.base.size
    for members in part.classes():
        for x, y in combinations(members, 2):
            for z in range(n):
                if not part.same(star[x][z], star[y][z]):
                    return False, (nm[x], nm[y], nm[z], "right")
                if not part.same(star[z][x], star[z][y]):
                    return False, (nm[x], nm[y], nm[z], "left")
    return True, None


def _closure(T: SectionTable, pairs) -> Partition:
    """Least congruence containing the given pairs, by union-find with a
    work queue of newly merged pairs. Merges only decrease the class count,
    so the fixpoint is reached after at most n-1 rounds."""
    star = T.star
    n = T.base.size
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx == ry:
            return False
        parent[ry] = rx
        return True

    work = []
    for a, b in pairs:
        if union(a, b):
            work.append((a, b))
    while work:
        x, y = work.pop()
        for z in range(n):
            for u, v in ((star[x][z], star[y][z]), (star[z][x], star[z][y])):
                if union(u, v):
                    work.append((u, v))
    return Partition.from_class_of(find(i) for i in range(n))


def principal_congruence(T: SectionTable, a: int, b: int) -> Partition:
    """Least congruence identifying a and b."""
    _require_total(T)
    return _closure(T, [(a, b)])


def congruence_join(T: SectionTable, p: Partition, q: Partition) -> Partition:
    """Join inside the congruence lattice: closure of the union."""
    _require_total(T)
    pairs = []
    for part in (p, q):
        for members in part.classes():
            pairs.extend(zip(members, members[1:]))
    return _closure(T, pairs)


def all_congruences(T: SectionTable, cap: int = 12) -> tuple[Partition, ...]:
    """Every congruence of (P,*), as the join closure of the principal
    congruences together with the identity."""
    _require_total(T)
    n = T.base.size
    if n > cap:
        raise SizeCapExceeded(f"size {n} exceeds cap {cap}")
    found = {Partition.identity(n)}
    for a in range(n):
        for b in range(a + 1, n):
            found.add(principal_congruence(T, a, b))
    frontier = list(found)
    while frontier:
        p = frontier.pop()
        for q in list(found):
            j = congruence_join(T, p, q)
            if j not in found:
                found.add(j)
                frontier.append(j)
    return tuple(sorted(found, key=lambda part: part.class_of))


def iter_partitions(n: int):
    """All partitions of 0..n-1 via restricted growth strings."""
    ids = [0] * n

    def rec(i, maxid):
        if i == n:
            yield Partition(tuple(ids))
            return
        for c in range(maxid + 2):
            ids[i] = c
            yield from rec(i + 1, max(maxid, c))

    if n == 0:
        yield Partition(())
        return
    yield from rec(1, 0)


def all_congruences_bruteforce(T: SectionTable) -> tuple[Partition, ...]:
    """Oracle: filter every set partition by the compatibility check."""
    _require_total(T)
    out = [p for p in iter_partitions(T.base.size) if is_congruence(T, p)[0]]
    return tuple(sorted(out, key=lambda part: part.class_of))


def is_convex(P: FinitePoset, part: Partition) -> tuple[bool, tuple | None]:
    """No a < b < c with a, c in one class and b outside it."""
    nm = P.names
    for cid, members in enumerate(part.classes()):
        for a in members:
            for c in members:
                if not P.lt(a, c):
                    continue
                mids = P.up[a] & P.down[c] & ~(1 << a) & ~(1 << c)
                for b in bits(mids):
                    if part.class_of[b] != cid:
                        return False, (nm[a], nm[b], nm[c])
    return True, None


def is_strong(P: FinitePoset, T: SectionTable, part: Partition) -> tuple[bool, tuple | None]:
    """Whether class-greatest representatives are closed under the operation.

    Requires every class to have a greatest element; raises
    ClassWithoutGreatest otherwise.
    """
    _require_total(T)
    nm = P.names
    greatest = []
    for members in part.classes():
        mask = 0
        for x in members:
            mask |= 1 << x
        g = P.greatest(mask)
        if g is None:
            raise ClassWithoutGreatest(
                f"class {{{','.join(nm[x] for x in members)}}} has no greatest element",
                tuple(nm[x] for x in members),
            )
        greatest.append(g)
    for ga in greatest:
        for gb in greatest:
            v = T.star[ga][gb]
            if v != greatest[part.class_of[v]]:
                return False, (nm[ga], nm[gb], nm[v])
    return True, None


def quotient(P: FinitePoset, T: SectionTable, part: Partition) -> QuotientStructure:
    """Quotient of a strongly sectionally pseudocomplemented poset by a
    convex congruence: classes ordered by [x] <= [y] iff x*y lands in the
    top class. The class operation is exposed only when the congruence is
    strong."""
    ok, w = is_congruence(T, part)
    if not ok:
        raise NotCongruence(f"partition is not a congruence at {w}", w)
    ok, w = is_convex(P, part)
    if not ok:
        raise NotConvex(f"partition has a non-convex class at {w}", w)
    rep = classify(P)
    if not rep.is_strongly_sec_pc:
        raise NotStronglySecPc(
            "quotient requires a strongly sectionally pseudocomplemented poset",
            rep.witnesses,
        )
    one = T.top
    one_class = part.class_of[one]
    k = part.num_classes
    classes = part.classes()
    reps = [members[0] for members in classes]

    rows = [0] * k
    for ca in range(k):
        for cb in range(k):
            if part.class_of[T.star[reps[ca]][reps[cb]]] == one_class:
                rows[ca] |= 1 << cb
    labels = tuple("{" + ",".join(P.names[x] for x in members) + "}" for members in classes)
    qposet = FinitePoset(labels, tuple(rows))

    # compatibility with the original order
    for a in range(P.size):
        for b in range(P.size):
            if P.leq(a, b) and not qposet.leq(part.class_of[a], part.class_of[b]):
                raise OrdkitError(
                    "quotient order does not extend the original order",
                    (P.names[a], P.names[b]),
                )
    for a in range(P.size):
        ca = part.class_of[a]
        for cb in range(k):
            if qposet.leq(ca, cb) and not any(P.leq(a, d) for d in classes[cb]):
                raise OrdkitError(
                    "quotient order lacks a dominating representative",
                    (P.names[a], labels[cb]),
                )

    strong, _ = is_strong(P, T, part)
    star = None
    if strong:
        gmask = [0] * k
        for x, c in enumerate(part.class_of):
            gmask[c] |= 1 << x
        greatest = [P.greatest(m) for m in gmask]
        star = tuple(
            tuple(part.class_of[T.star[greatest[ca]][greatest[cb]]] for cb in range(k))
            for ca in range(k)
        )
        for ca in range(k):
            for cb in range(k):
                if qposet.leq(ca, cb) != (star[ca][cb] == one_class):
                    raise OrdkitError(
                        "class order disagrees with the class operation",
                        (labels[ca], labels[cb]),
                    )
    return QuotientStructure(qposet, star, one_class)


def verify_congruence_structure(P: FinitePoset) -> PropertyReport:
    """Congruence laws of a strongly sectionally pseudocomplemented poset:
    convexity, up-directed classes with greatest elements, and the principal
    congruence reduction theta(b*a, 1) = theta(a, b) for comparable pairs.

    Also evaluates, informationally, whether theta(x, y) collapses the whole
    poset for every x < y < 1 with y not covering x and x < y*x; the
    conclusion is one-directional so this is reported, never asserted.
    """
    rep = classify(P)
    if not rep.is_strongly_sec_pc:
        raise PreconditionError(
            "poset must be strongly sectionally pseudocomplemented"
        )
    T = sec_table(P)
    star = T.star
    one = T.top
    n = P.size
    nm = P.names
    congruences = all_congruences(T)
    checks = []

    w = None
    for theta in congruences:
        ok, wc = is_convex(P, theta)
        if not ok:
            w = wc
            break
    checks.append(CheckResult("congruences-convex", w is None, w))

    w = None
    for theta in congruences:
        for cid, members in enumerate(theta.classes()):
            mask = theta.class_mask(cid)
            if P.greatest(mask) is None:
                w = tuple(nm[x] for x in members)
                break
            for b in members:
                for c in members:
                    d = star[star[b][c]][c]
                    if theta.class_of[d] != cid or not (P.leq(b, d) and P.leq(c, d)):
                        w = (nm[b], nm[c])
                        break
                if w:
                    break
            if w:
                break
        if w:
            break
    checks.append(CheckResult("classes-up-directed-with-greatest", w is None, w))

    w = None
    for a in range(n):
        for b in range(n):
            if not P.leq(a, b):
                continue
            if principal_congruence(T, star[b][a], one) != principal_congruence(T, a, b):
                w = (nm[a], nm[b])
                break
        if w:
            break
    checks.append(CheckResult("principal-reduction theta(b*a,1)=theta(a,b)", w is None, w))

    all_pairs = Partition.single_class(n)
    notes = []
    for x in range(n):
        for y in range(n):
            if not (P.lt(x, y) and y != one):
                continue
            covers = (P.up[x] & P.down[y] & ~(1 << x) & ~(1 << y)) == 0
            if covers or not P.lt(x, star[y][x]):
                continue
            collapses = principal_congruence(T, x, y) == all_pairs
            notes.append(f"theta({nm[x]},{nm[y]}) {'=' if collapses else '!='} all")
    checks.append(
        CheckResult(
            "collapse-hypothesis-instances",
            True,
            None,
            "; ".join(notes) if notes else "no qualifying pairs",
        )
    )

    return PropertyReport("congruence-structure", tuple(checks))


# -- serialization -----------------------------------------------------------


def partition_to_json(part: Partition, P: FinitePoset) -> dict:
    return {"classes": [[P.names[x] for x in members] for members in part.classes()]}


def partition_from_json(data: dict, P: FinitePoset) -> Partition:
    classes = [[P.index(name) for name in members] for members in data["classes"]]
    return Partition.from_classes(classes, P.size)
