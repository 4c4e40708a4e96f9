"""Sectional and relative pseudocomplements on finite posets.

The section complement a*b is the greatest c with L(U(a,b), c) = L(b);
the relative complement is the greatest d with L(a,d) <= L(b). Besides the
table builders this module classifies posets and checks the arithmetic laws
the section operation satisfies on concrete instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import AxiomViolation, PreconditionError, SizeCapExceeded
from .poset import FinitePoset, bits
from .reports import CheckResult, PropertyReport


@dataclass(frozen=True)
class SectionTable:
    """Partial binary operation a*b on a poset; None marks undefined entries."""

    base: FinitePoset
    star: tuple[tuple[int | None, ...], ...]
    top: int | None

    def defined(self, a: int, b: int) -> bool:
        return self.star[a][b] is not None

    @property
    def is_total(self) -> bool:
        return all(v is not None for row in self.star for v in row)

    def value(self, a: int, b: int) -> int:
        v = self.star[a][b]
        if v is None:
            nm = self.base.names
            raise PreconditionError(f"{nm[a]}*{nm[b]} is undefined")
        return v


@dataclass(frozen=True)
class ClassificationReport:
    """Flags are independent; witnesses hold the first counterexample found
    per failed property as (property, element labels)."""

    is_sec_pc: bool
    is_strongly_sec_pc: bool
    is_rel_pc: bool
    is_lattice: bool
    has_top: bool
    witnesses: tuple[tuple[str, tuple[str, ...]], ...]


def section_candidates(P: FinitePoset, a: int, b: int) -> int:
    """Bitmask of all c satisfying L(U(a,b) with c) = L(b)."""
    lu = P.lower_cone(P.up[a] & P.up[b])
    target = P.down[b]
    out = 0
    for c in range(P.size):
        if lu & P.down[c] == target:
            out |= 1 << c
    return out


def sec_pc(P: FinitePoset, a: int, b: int) -> int | None:
    """Section complement of a with respect to b, absent when the satisfier
    set is empty or has no greatest element."""
    return P.greatest(section_candidates(P, a, b))


def rel_pc(P: FinitePoset, a: int, b: int) -> int | None:
    """Relative complement: greatest d with L(a,d) contained in L(b)."""
    da = P.down[a]
    db = P.down[b]
    out = 0
    for d in range(P.size):
        if da & P.down[d] & ~db == 0:
            out |= 1 << d
    return P.greatest(out)


@lru_cache(maxsize=None)
def sec_table(P: FinitePoset) -> SectionTable:
    """Section complements for all pairs; row a, column b holds a*b."""
    n = P.size
    star = tuple(tuple(sec_pc(P, a, b) for b in range(n)) for a in range(n))
    return SectionTable(P, star, P.top)


@lru_cache(maxsize=None)
def classify(P: FinitePoset) -> ClassificationReport:
    """Classification flags plus first witnesses for the failed ones."""
    T = sec_table(P)
    n = P.size
    witnesses = []

    is_sec = True
    for a in range(n):
        for b in range(n):
            if T.star[a][b] is None:
                kind = (
                    "sec_pc_no_satisfier"
                    if section_candidates(P, a, b) == 0
                    else "sec_pc_no_greatest"
                )
                witnesses.append((kind, (P.names[a], P.names[b])))
                is_sec = False
                break
        if not is_sec:
            break

    has_top = P.top is not None
    strongly = is_sec and has_top
    if is_sec and not has_top:
        witnesses.append(("strong_no_top", ()))
    if strongly:
        for x in range(n):
            for y in range(n):
                if not P.leq(x, T.star[T.star[x][y]][y]):
                    witnesses.append(("strong_condition", (P.names[x], P.names[y])))
                    strongly = False
                    break
            if not strongly:
                break

    is_rel = True
    for a in range(n):
        for b in range(n):
            if rel_pc(P, a, b) is None:
                witnesses.append(("rel_pc_undefined", (P.names[a], P.names[b])))
                is_rel = False
                break
        if not is_rel:
            break

    is_lat = P.is_lattice
    if not is_lat:
        w = P.non_lattice_witness()
        witnesses.append(("not_lattice", (P.names[w[0]], P.names[w[1]])))

    return ClassificationReport(
        is_sec_pc=is_sec,
        is_strongly_sec_pc=strongly,
        is_rel_pc=is_rel,
        is_lattice=is_lat,
        has_top=has_top,
        witnesses=tuple(witnesses),
    )


def verify_star_properties(T: SectionTable) -> PropertyReport:
    """Check the eight arithmetic laws of a total section table with top.

    (i)   x <= y iff x*y = 1
    (ii)  x*x = x*1 = 1
    (iii) 1*x = x
    (iv)  x*(y*x) = 1
    (v)   x*((y*x)*x) = 1
    (vi)  x*y = 1 or y*x = 1 implies x*((x*y)*y) = 1
    (vii) x*y = 1 implies (y*z)*(x*z) = 1
    (viii) L(U(x,y), x*y) = L(y)
    """
    if not T.is_total:
        raise PreconditionError("section table must be total")
    if T.top is None:
        raise PreconditionError("poset must have a greatest element")
    P, star, one = T.base, T.star, T.top
    n = P.size
    nm = P.names

    def first(pred, arity):
        idx = [0] * arity

        def rec(k):
            if k == arity:
                return None if pred(*idx) else tuple(idx)
            for v in range(n):
                idx[k] = v
                w = rec(k + 1)
                if w is not None:
                    return w
            return None

        return rec(0)

    checks = []

    w = first(lambda x, y: P.leq(x, y) == (star[x][y] == one), 2)
    checks.append(CheckResult("(i) x<=y iff x*y=1", w is None, w and (nm[w[0]], nm[w[1]])))

    w = first(lambda x: star[x][x] == one and star[x][one] == one, 1)
    checks.append(CheckResult("(ii) x*x=x*1=1", w is None, w and (nm[w[0]],)))

    w = first(lambda x: star[one][x] == x, 1)
    checks.append(CheckResult("(iii) 1*x=x", w is None, w and (nm[w[0]],)))

    w = first(lambda x, y: star[x][star[y][x]] == one, 2)
    checks.append(CheckResult("(iv) x*(y*x)=1", w is None, w and (nm[w[0]], nm[w[1]])))

    w = first(lambda x, y: star[x][star[star[y][x]][x]] == one, 2)
    checks.append(CheckResult("(v) x*((y*x)*x)=1", w is None, w and (nm[w[0]], nm[w[1]])))

    def vi(x, y):
        if star[x][y] != one and star[y][x] != one:
            return True
        return star[x][star[star[x][y]][y]] == one

    w = first(vi, 2)
    checks.append(
        CheckResult("(vi) comparable implies x*((x*y)*y)=1", w is None, w and (nm[w[0]], nm[w[1]]))
    )

    def vii(x, y, z):
        if star[x][y] != one:
            return True
        return star[star[y][z]][star[x][z]] == one

    w = first(vii, 3)
    checks.append(
        CheckResult(
            "(vii) x*y=1 implies (y*z)*(x*z)=1",
            w is None,
            w and (nm[w[0]], nm[w[1]], nm[w[2]]),
        )
    )

    def viii(x, y):
        lu = P.lower_cone(P.up[x] & P.up[y])
        return lu & P.down[star[x][y]] == P.down[y]

    w = first(viii, 2)
    checks.append(
        CheckResult("(viii) L(U(x,y),x*y)=L(y)", w is None, w and (nm[w[0]], nm[w[1]]))
    )

    return PropertyReport("star-properties", tuple(checks))


def recover_from_groupoid(star, one: int, names=None) -> FinitePoset:
    """Organize a total table with constant ``one`` into a poset.

    Checks the five axioms that characterize section tables, with the cones
    re-expressed through the operation itself: L(B) = {x : x*y = 1 for all
    y in B} and U(B) dually. On success returns the poset with x <= y iff
    x*y = 1, whose section table reproduces the input.
    """
    n = len(star)
    star = tuple(tuple(row) for row in star)
    for row in star:
        if len(row) != n or any(not (0 <= v < n) for v in row):
            raise ValueError("table must be square over 0..n-1")
    if not 0 <= one < n:
        raise ValueError("constant out of range")
    names = tuple(names) if names is not None else tuple(f"e{i}" for i in range(n))

    for x in range(n):
        if star[x][x] != one:
            raise AxiomViolation("(i)", (x,))
    for x in range(n):
        for y in range(n):
            if x != y and star[x][y] == one and star[y][x] == one:
                raise AxiomViolation("(ii)", (x, y))
    for x in range(n):
        for y in range(n):
            if star[x][y] != one:
                continue
            for z in range(n):
                if star[y][z] == one and star[x][z] != one:
                    raise AxiomViolation("(iii)", (x, y, z))

    # cone masks from the operation: low[y] = {x : x*y=1}, upm[y] = {x : y*x=1}
    low = [0] * n
    upm = [0] * n
    for x in range(n):
        for y in range(n):
            if star[x][y] == one:
                low[y] |= 1 << x
                upm[x] |= 1 << y
    full = (1 << n) - 1

    def lower_of(mask):
        out = full
        for t in bits(mask):
            out &= low[t]
        return out

    for x in range(n):
        for y in range(n):
            lu = lower_of(upm[x] & upm[y])
            if lu & low[star[x][y]] != low[y]:
                raise AxiomViolation("(iv)", (x, y))
            for z in range(n):
                if lu & low[z] == low[y] and star[z][star[x][y]] != one:
                    raise AxiomViolation("(v)", (x, y, z))

    P = FinitePoset(names, tuple(upm))
    T = sec_table(P)
    assert all(
        T.star[x][y] == star[x][y] for x in range(n) for y in range(n)
    ), "axioms hold but the table is not reproduced"
    return P


def verify_lattice_identities(P: FinitePoset) -> PropertyReport:
    """Check the two lattice identities characterizing section complements,
    plus the converse: the table value is the greatest c with
    (a v b) ^ c = b."""
    rep = classify(P)
    if not (rep.is_lattice and rep.is_sec_pc):
        raise PreconditionError("poset must be a sectionally pseudocomplemented lattice")
    T = sec_table(P)
    star = T.star
    n = P.size
    nm = P.names
    checks = []

    w = None
    for x in range(n):
        for y in range(n):
            for z in range(n):
                zy = P.join(z, y)
                d = P.meet(P.join(x, y), zy)
                if not P.leq(zy, star[x][d]):
                    w = (nm[x], nm[y], nm[z])
                    break
            if w:
                break
        if w:
            break
    checks.append(CheckResult("residual-lower-bound", w is None, w))

    w = None
    for x in range(n):
        for y in range(n):
            if P.meet(P.join(x, y), star[x][y]) != y:
                w = (nm[x], nm[y])
                break
        if w:
            break
    checks.append(CheckResult("section-identity", w is None, w))

    w = None
    for a in range(n):
        for b in range(n):
            sat = 0
            for c in range(n):
                if P.meet(P.join(a, b), c) == b:
                    sat |= 1 << c
            if P.greatest(sat) != star[a][b]:
                w = (nm[a], nm[b])
                break
        if w:
            break
    checks.append(CheckResult("table-matches-lattice-rule", w is None, w))

    return PropertyReport("lattice-identities", tuple(checks))


def verify_maltsev_weak_regularity(P: FinitePoset) -> PropertyReport:
    """Check the Mal'cev term p(x,y,z) = ((x*y)*z) ^ ((z*y)*x), the unit-pair
    separation x*y = y*x = 1 iff x = y, and instance weak regularity: any two
    congruences with equal top classes coincide."""
    rep = classify(P)
    if not (rep.is_lattice and rep.is_sec_pc and rep.has_top):
        raise PreconditionError(
            "poset must be a sectionally pseudocomplemented lattice with top"
        )
    from .congruence import all_congruences  # deferred: congruence imports this module

    T = sec_table(P)
    star = T.star
    one = T.top
    n = P.size
    nm = P.names

    def p(x, y, z):
        return P.meet(star[star[x][y]][z], star[star[z][y]][x])

    checks = []
    w = next(
        ((nm[x], nm[y]) for x in range(n) for y in range(n) if p(x, x, y) != y), None
    )
    checks.append(CheckResult("maltsev p(x,x,y)=y", w is None, w))
    w = next(
        ((nm[x], nm[y]) for x in range(n) for y in range(n) if p(y, x, x) != y), None
    )
    checks.append(CheckResult("maltsev p(y,x,x)=y", w is None, w))

    w = next(
        (
            (nm[x], nm[y])
            for x in range(n)
            for y in range(n)
            if ((star[x][y] == one and star[y][x] == one) != (x == y))
        ),
        None,
    )
    checks.append(CheckResult("x*y=y*x=1 iff x=y", w is None, w))

    by_one_class = {}
    w = None
    for theta in all_congruences(T):
        key = tuple(i for i in range(n) if theta.class_of[i] == theta.class_of[one])
        other = by_one_class.setdefault(key, theta)
        if other != theta:
            w = (str(other.class_of), str(theta.class_of))
            break
    checks.append(CheckResult("weak regularity (equal top classes)", w is None, w))

    return PropertyReport("maltsev-weak-regularity", tuple(checks))


def is_completely_l_semidistributive(
    P: FinitePoset, cap: int = 12, force: bool = False
) -> tuple[bool, tuple | None]:
    """Whether L(x,a) = L(b) for all x in a nonempty M always forces
    L(U(M), a) = L(b). Exhaustive over subsets, hence 2^n; guarded by a size
    cap unless force is set."""
    n = P.size
    if n > cap and not force:
        raise SizeCapExceeded(f"size {n} exceeds cap {cap}; pass force=True to override")
    for a in range(n):
        da = P.down[a]
        for b in range(n):
            target = P.down[b]
            sat = 0
            for x in range(n):
                if P.down[x] & da == target:
                    sat |= 1 << x
            m = sat
            while m:
                if P.lower_cone(P.upper_cone(m)) & da != target:
                    return False, (P.names_of(m), P.names[a], P.names[b])
                m = (m - 1) & sat
    return True, None


# -- serialization -----------------------------------------------------------


def table_to_json(T: SectionTable) -> dict:
    nm = T.base.names
    return {
        "elements": list(nm),
        "star": [
            [nm[v] if v is not None else None for v in row] for row in T.star
        ],
        "defined": [[v is not None for v in row] for row in T.star],
        "top": nm[T.top] if T.top is not None else None,
    }


def table_from_json(data: dict) -> dict:
    """Normalized dict form {(row_label, col_label): value_label_or_None}."""
    elements = data["elements"]
    out = {}
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            v = data["star"][i][j]
            if not data["defined"][i][j]:
                v = None
            out[(a, b)] = v
    return out


def format_table_grid(T: SectionTable) -> str:
    """Text grid, rows and columns in element order; undefined entries as em dash."""
    nm = T.base.names
    undef = "—"
    cells = [["*"] + list(nm)]
    for a in range(T.base.size):
        row = [nm[a]]
        for b in range(T.base.size):
            v = T.star[a][b]
            row.append(nm[v] if v is not None else undef)
        cells.append(row)
    width = max(len(c) for row in cells for c in row)
    lines = []
    for i, row in enumerate(cells):
        text = " | ".join([row[0].ljust(width)] + [c.ljust(width) for c in row[1:]])
        lines.append(text.rstrip())
        if i == 0:
            lines.append("-" * len(text))
    return "\n".join(lines) + "\n"


def classification_to_json(rep: ClassificationReport) -> dict:
    return {
        "sectionally_pseudocomplemented": rep.is_sec_pc,
        "strongly_sectionally_pseudocomplemented": rep.is_strongly_sec_pc,
        "relatively_pseudocomplemented": rep.is_rel_pc,
        "lattice": rep.is_lattice,
        "has_top": rep.has_top,
        "witnesses": [
            {"property": prop, "elements": list(els)} for prop, els in rep.witnesses
        ],
    }


def format_classification(rep: ClassificationReport, name: str = "") -> str:
    def wit(prop_prefixes):
        for prop, els in rep.witnesses:
            if any(prop.startswith(p) for p in prop_prefixes):
                return f" (witness: {','.join(els)})" if els else " (no top)"
        return ""

    yes_no = lambda v: "yes" if v else "no"
    lines = []
    if name:
        lines.append(f"poset: {name}")
    lines.append(f"sectionally pseudocomplemented: {yes_no(rep.is_sec_pc)}{'' if rep.is_sec_pc else wit(['sec_pc'])}")
    lines.append(
        f"strongly sectionally pseudocomplemented: {yes_no(rep.is_strongly_sec_pc)}"
        f"{'' if rep.is_strongly_sec_pc else wit(['strong'])}"
    )
    lines.append(
        f"relatively pseudocomplemented: {yes_no(rep.is_rel_pc)}{'' if rep.is_rel_pc else wit(['rel_pc'])}"
    )
    lines.append(f"lattice: {yes_no(rep.is_lattice)}{'' if rep.is_lattice else wit(['not_lattice'])}")
    lines.append(f"top: {yes_no(rep.has_top)}")
    return "\n".join(lines) + "\n"
