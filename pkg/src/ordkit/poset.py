"""Finite partially ordered sets over bitmask subsets.

Elements of a poset are the indices 0..n-1; subsets of the universe are
plain Python ints used as bitmasks (bit x set iff element x belongs to the
subset). The order relation is stored fully closed, so the cone operators
reduce to row/column mask intersections, which dominate the workload of
every other module.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

from .errors import CycleError, ParseError, UnknownLabel

LABEL_PATTERN = re.compile(r"[A-Za-z0-9_]+\Z")
_COVER_TOKEN = re.compile(r"([A-Za-z0-9_]+)<([A-Za-z0-9_]+)\Z")


def bits(mask: int):
    """Yield the set bit positions of mask in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class FinitePoset:
    """Immutable finite poset: element names plus the closed order relation.

    ``up[x]`` is the bitmask of ``{y : x <= y}``. Construction validates
    reflexivity, antisymmetry, transitivity and name distinctness, so every
    live instance is a genuine poset. All derived data is cached; instances
    are safe to share between threads.
    """

    names: tuple[str, ...]
    up: tuple[int, ...]

    def __post_init__(self):
        n = len(self.names)
        if len(self.up) != n:
            raise ValueError("relation size does not match element count")
        if len(set(self.names)) != n:
            raise ValueError("element names must be pairwise distinct")
        full = (1 << n) - 1
        for x, row in enumerate(self.up):
            if row & ~full:
                raise ValueError("relation row exceeds the universe")
            if not (row >> x) & 1:
                raise ValueError(f"relation not reflexive at {self.names[x]}")
        for x in range(n):
            for y in bits(self.up[x]):
                if y != x and (self.up[y] >> x) & 1:
                    raise ValueError(
                        f"relation not antisymmetric at {self.names[x]},{self.names[y]}"
                    )
                if self.up[y] & ~self.up[x]:
                    raise ValueError(
                        f"relation not transitive at {self.names[x]},{self.names[y]}"
                    )

    # -- basic structure ---------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.names)

    @cached_property
    def full(self) -> int:
        return (1 << self.size) - 1

    @cached_property
    def down(self) -> tuple[int, ...]:
        cols = [0] * self.size
        for x, row in enumerate(self.up):
            for y in bits(row):
                cols[y] |= 1 << x
        return tuple(cols)

    @cached_property
    def _index(self) -> dict:
        return {name: i for i, name in enumerate(self.names)}

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownLabel(f"no element named {name!r}") from None

    def leq(self, x: int, y: int) -> bool:
        return bool((self.up[x] >> y) & 1)

    def lt(self, x: int, y: int) -> bool:
        return x != y and self.leq(x, y)

    def mask_of(self, names) -> int:
        m = 0
        for name in names:
            m |= 1 << self.index(name)
        return m

    def names_of(self, mask: int) -> tuple[str, ...]:
        return tuple(self.names[x] for x in bits(mask))

    # -- cones and bounds ---------------------------------------------------

    def lower_cone(self, mask: int) -> int:
        """All common lower bounds of the subset; the empty subset gives P."""
        out = self.full
        for a in bits(mask):
            out &= self.down[a]
        return out

    def upper_cone(self, mask: int) -> int:
        out = self.full
        for a in bits(mask):
            out &= self.up[a]
        return out

    def down_closure(self, mask: int) -> int:
        """All elements below some member of the subset."""
        out = 0
        for a in bits(mask):
            out |= self.down[a]
        return out

    def greatest(self, mask: int) -> int | None:
        """The member of the subset dominating all members, if any."""
        for g in bits(mask):
            if mask & ~self.down[g] == 0:
                return g
        return None

    def least(self, mask: int) -> int | None:
        for l in bits(mask):
            if mask & ~self.up[l] == 0:
                return l
        return None

    def meet(self, a: int, b: int) -> int | None:
        return self.greatest(self.down[a] & self.down[b])

    def join(self, a: int, b: int) -> int | None:
        return self.least(self.up[a] & self.up[b])

    @cached_property
    def top(self) -> int | None:
        return self.greatest(self.full)

    @cached_property
    def bottom(self) -> int | None:
        return self.least(self.full)

    @cached_property
    def is_lattice(self) -> bool:
        n = self.size
        for a in range(n):
            for b in range(a + 1, n):
                if self.meet(a, b) is None or self.join(a, b) is None:
                    return False
        return True

    def non_lattice_witness(self) -> tuple[int, int] | None:
        for a in range(self.size):
            for b in range(a + 1, self.size):
                if self.meet(a, b) is None or self.join(a, b) is None:
                    return (a, b)
        return None

    # -- covers --------------------------------------------------------------

    def hasse_covers(self) -> tuple[tuple[int, int], ...]:
        """Pairs (a, b) with a < b and nothing strictly between."""
        out = []
        for x in range(self.size):
            strict = self.up[x] & ~(1 << x)
            for y in bits(strict):
                between = strict & self.down[y] & ~(1 << y)
                if not between:
                    out.append((x, y))
        return tuple(out)

    def minimal_elements(self, mask: int) -> tuple[int, ...]:
        """Minimal elements of the subset."""
        return tuple(x for x in bits(mask) if self.down[x] & mask == 1 << x)

    # -- relabelings ----------------------------------------------------------

    def relabeled(self, names) -> "FinitePoset":
        return FinitePoset(tuple(names), self.up)

    def permuted(self, perm) -> "FinitePoset":
        """Relabel so old element x becomes element perm[x]."""
        n = self.size
        names = [""] * n
        rows = [0] * n
        for x in range(n):
            names[perm[x]] = self.names[x]
            rows[perm[x]] = sum(1 << perm[y] for y in bits(self.up[x]))
        return FinitePoset(tuple(names), tuple(rows))

    @classmethod
    def from_covers(cls, labels, covers) -> "FinitePoset":
        """Build from cover pairs by reflexive-transitive closure.

        Raises UnknownLabel for pairs outside the label set and CycleError
        when the closure would violate antisymmetry.
        """
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            raise ValueError("labels must be distinct")
        idx = {lab: i for i, lab in enumerate(labels)}
        n = len(labels)
        rows = [1 << i for i in range(n)]
        for a, b in covers:
            if a not in idx or b not in idx:
                raise UnknownLabel(f"cover {a}<{b} references an unknown label", (a, b))
            rows[idx[a]] |= 1 << idx[b]
        # closure by iterated row absorption (boolean matrix powering)
        changed = True
        while changed:
            changed = False
            for x in range(n):
                acc = rows[x]
                for y in bits(rows[x]):
                    acc |= rows[y]
                if acc != rows[x]:
                    rows[x] = acc
                    changed = True
        for x in range(n):
            for y in bits(rows[x]):
                if y != x and (rows[y] >> x) & 1:
                    raise CycleError(
                        f"covers induce a cycle through {labels[x]} and {labels[y]}",
                        (labels[x], labels[y]),
                    )
        return cls(labels, tuple(rows))


def build_poset(labels, covers) -> FinitePoset:
    """Construct a poset from distinct labels and cover pairs."""
    return FinitePoset.from_covers(labels, covers)


# -- isomorphism ----------------------------------------------------------


def _signatures(P: FinitePoset, rounds: int = 3) -> list:
    """Permutation-invariant element signatures by neighborhood refinement."""
    sig = [(P.down[x].bit_count(), P.up[x].bit_count()) for x in range(P.size)]
    for _ in range(rounds):
        sig = [
            (
                sig[x],
                tuple(sorted(sig[y] for y in bits(P.down[x]) if y != x)),
                tuple(sorted(sig[y] for y in bits(P.up[x]) if y != x)),
            )
            for x in range(P.size)
        ]
    return sig


def is_isomorphic(P: FinitePoset, Q: FinitePoset, pinned: dict | None = None):
    """Order isomorphism P -> Q as an index mapping, or None.

    ``pinned`` constrains selected P-elements to fixed Q-images; the search
    is a backtracking over signature-compatible candidates and is
    deterministic for fixed inputs.
    """
    n = P.size
    if n != Q.size:
        return None
    sp = _signatures(P)
    sq = _signatures(Q)
    if sorted(sp) != sorted(sq):
        return None
    cand = []
    for x in range(n):
        if pinned is not None and x in pinned:
            ys = [pinned[x]] if sq[pinned[x]] == sp[x] else []
        else:
            ys = [y for y in range(n) if sq[y] == sp[x]]
        if not ys:
            return None
        cand.append(ys)
    order = sorted(range(n), key=lambda x: (len(cand[x]), x))
    mapping = [-1] * n
    used = [False] * n

    def assign(k: int) -> bool:
        if k == n:
            return True
        x = order[k]
        for y in cand[x]:
            if used[y]:
                continue
            ok = True
            for x2 in order[:k]:
                y2 = mapping[x2]
                if P.leq(x, x2) != Q.leq(y, y2) or P.leq(x2, x) != Q.leq(y2, y):
                    ok = False
                    break
            if ok:
                mapping[x] = y
                used[y] = True
                if assign(k + 1):
                    return True
                used[y] = False
                mapping[x] = -1
        return False

    return tuple(mapping) if assign(0) else None


# -- text format ------------------------------------------------------------


def parse_poset_text(text: str) -> tuple[str, FinitePoset]:
    """Parse the poset text format; returns (name, poset).

    Format: line 1 ``poset <name>``, line 2 ``elements: <labels>``, then one
    or more ``covers:`` lines of ``a<b`` tokens. ``#`` starts a comment.
    Labels match [A-Za-z0-9_]+.
    """
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise ParseError("empty poset description")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "poset" or not LABEL_PATTERN.match(head[1]):
        raise ParseError(f"expected 'poset <name>', got {lines[0]!r}")
    name = head[1]
    if len(lines) < 2 or not lines[1].startswith("elements:"):
        raise ParseError("second line must start with 'elements:'")
    labels = lines[1][len("elements:") :].split()
    if not labels:
        raise ParseError("no elements declared")
    for lab in labels:
        if not LABEL_PATTERN.match(lab):
            raise ParseError(f"bad element label {lab!r}")
    if len(set(labels)) != len(labels):
        raise ParseError("duplicate element label")
    if len(lines) < 3:
        raise ParseError("missing covers line")
    covers = []
    for line in lines[2:]:
        if not line.startswith("covers:"):
            raise ParseError(f"unexpected line {line!r}")
        for tok in line[len("covers:") :].split():
            m = _COVER_TOKEN.match(tok)
            if not m:
                raise ParseError(f"bad cover token {tok!r}")
            covers.append((m.group(1), m.group(2)))
    try:
        poset = build_poset(labels, covers)
    except UnknownLabel as exc:
        raise ParseError(str(exc), exc.witness) from None
    return name, poset


def format_poset_text(P: FinitePoset, name: str = "p") -> str:
    covers = " ".join(f"{P.names[a]}<{P.names[b]}" for a, b in P.hasse_covers())
    return (
        f"poset {name}\n"
        f"elements: {' '.join(P.names)}\n"
        f"covers:{(' ' + covers) if covers else ''}\n"
    )


def load_poset(path) -> tuple[str, FinitePoset]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_poset_text(fh.read())


def to_dot(P: FinitePoset, name: str = "p") -> str:
    """Hasse diagram in DOT format; layout is left to the DOT consumer."""
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for nm in P.names:
        lines.append(f'  "{nm}";')
    for a, b in P.hasse_covers():
        lines.append(f'  "{P.names[a]}" -> "{P.names[b]}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
