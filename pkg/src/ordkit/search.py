"""Exhaustive enumeration of small posets and the classification census."""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations, permutations, product
from pathlib import Path

from .completion import dm_completion
from .congruence import all_congruences, is_convex
from .errors import SizeCapExceeded, UnknownPredicate
from .poset import FinitePoset, _signatures, bits
from .secpc import (
    ClassificationReport,
    classify,
    sec_table,
    verify_lattice_identities,
)

CODE_VERSION = "1"
DEFAULT_CAP = 7

# Class counts for cross-checking only; the brute-force enumerator is the
# ground truth at small sizes.
KNOWN_CLASS_COUNTS = {1: 1, 2: 2, 3: 5, 4: 16, 5: 63, 6: 318, 7: 2045}


# -- canonical forms ----------------------------------------------------------


def _signature_classes(P: FinitePoset) -> list[list[int]]:
    sig = _signatures(P)
    groups: dict = {}
    for x in range(P.size):
        groups.setdefault(sig[x], []).append(x)
    return [groups[s] for s in sorted(groups)]


def canonical_rows(P: FinitePoset) -> tuple[int, ...]:
    """Lexicographically minimal relation encoding over all permutations
    compatible with the signature classes (exact: any isomorphism respects
    the classes)."""
    classes = _signature_classes(P)
    best = None
    for per_class in product(*(permutations(c) for c in classes)):
        order = [x for group in per_class for x in group]
        pos = {old: i for i, old in enumerate(order)}
        rows = tuple(
            sum(1 << pos[y] for y in bits(P.up[old])) for old in order
        )
        if best is None or rows < best:
            best = rows
    return best


def canonical_key(P: FinitePoset) -> str:
    rows = canonical_rows(P)
    return f"{P.size}:" + ".".join(format(r, "x") for r in rows)


def poset_from_key(key: str) -> FinitePoset:
    head, _, body = key.partition(":")
    n = int(head)
    rows = tuple(int(tok, 16) for tok in body.split(".")) if body else ()
    assert len(rows) == n
    return FinitePoset(tuple(f"x{i}" for i in range(n)), rows)


# -- enumeration ----------------------------------------------------------------


def down_set_masks(P: FinitePoset) -> list[int]:
    return [
        m
        for m in range(P.full + 1)
        if all(P.down[x] & ~m == 0 for x in bits(m))
    ]


def _grow(P: FinitePoset, dmask: int) -> FinitePoset:
    """Add one maximal element strictly above the given down-set."""
    n = P.size
    rows = [P.up[x] | ((1 << n) if (dmask >> x) & 1 else 0) for x in range(n)]
    rows.append(1 << n)
    return FinitePoset(tuple(f"x{i}" for i in range(n + 1)), tuple(rows))


_ENUM_CACHE: dict[int, tuple[FinitePoset, ...]] = {}


def enumerate_posets(n: int, cap: int = DEFAULT_CAP) -> tuple[FinitePoset, ...]:
    """One representative per isomorphism class of n-element posets,
    generated level by level by attaching a new maximal element above every
    down-set, with canonical-form rejection."""
    if n < 1:
        raise ValueError("need at least one element")
    if n > cap:
        raise SizeCapExceeded(f"{n} exceeds cap {cap}")
    if n in _ENUM_CACHE:
        return _ENUM_CACHE[n]
    if n == 1:
        result = (FinitePoset(("x0",), (1,)),)
    else:
        seen: dict[str, FinitePoset] = {}
        for P in enumerate_posets(n - 1, cap=cap):
            for d in down_set_masks(P):
                Q = _grow(P, d)
                key = canonical_key(Q)
                if key not in seen:
                    seen[key] = Q
        result = tuple(seen[k] for k in sorted(seen))
    _ENUM_CACHE[n] = result
    return result


def enumerate_posets_bruteforce(n: int):
    """Oracle: assign each unordered pair one of {incomparable, <, >} and
    keep the transitive outcomes. Returns (labeled count, canonical keys)."""
    pairs = list(combinations(range(n), 2))
    keys = set()
    labeled = 0
    names = tuple(f"x{i}" for i in range(n))
    for assign in product((0, 1, 2), repeat=len(pairs)):
        rows = [1 << i for i in range(n)]
        for (i, j), s in zip(pairs, assign):
            if s == 1:
                rows[i] |= 1 << j
            elif s == 2:
                rows[j] |= 1 << i
        ok = True
        for i in range(n):
            acc = 0
            for j in bits(rows[i]):
                acc |= rows[j]
            if acc & ~rows[i]:
                ok = False
                break
        if not ok:
            continue
        labeled += 1
        keys.add(canonical_key(FinitePoset(names, tuple(rows))))
    return labeled, frozenset(keys)


# -- census ---------------------------------------------------------------------


@dataclass(frozen=True)
class CensusEntry:
    """Classification of one isomorphism class plus derived flags; flags are
    None when their precondition (a total section table) is not met."""

    key: str
    report: ClassificationReport
    second_arg_monotone: bool | None
    dm_preserves_secpc: bool | None
    congruences_convex: bool | None


@dataclass(frozen=True)
class Census:
    n: int
    entries: tuple[CensusEntry, ...]


def _second_arg_monotone(P: FinitePoset, T) -> bool:
    for x in range(P.size):
        for y in range(P.size):
            if not P.leq(x, y):
                continue
            for z in range(P.size):
                if not P.leq(T.star[z][x], T.star[z][y]):
                    return False
    return True


def census_entry(P: FinitePoset) -> CensusEntry:
    rep = classify(P)
    mono = dm_flag = convex = None
    if rep.is_sec_pc:
        T = sec_table(P)
        mono = _second_arg_monotone(P, T)
        dm_flag = classify(dm_completion(P).lattice).is_sec_pc
        convex = all(is_convex(P, theta)[0] for theta in all_congruences(T))
    return CensusEntry(canonical_key(P), rep, mono, dm_flag, convex)


def _census_entry_from_key(key: str) -> CensusEntry:
    return census_entry(poset_from_key(key))


_CENSUS_MEMO: dict[int, Census] = {}


def cache_directory(cache_dir=None) -> Path:
    if cache_dir is not None:
        return Path(cache_dir)
    env = os.environ.get("ORDKIT_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "ordkit"


def _cache_path(n: int, cache_dir) -> Path:
    return cache_directory(cache_dir) / f"census_n{n}_v{CODE_VERSION}.json"


def run_census(n: int, jobs: int = 1, cache_dir=None) -> Census:
    """Classify every isomorphism class of size n; results are cached in
    memory and on disk keyed by (n, code version), and classification across
    classes may be parallelized with jobs > 1 (output is identical)."""
    if n in _CENSUS_MEMO:
        return _CENSUS_MEMO[n]
    path = _cache_path(n, cache_dir)
    if path.exists():
        try:
            census = census_from_json(json.loads(path.read_text()))
            if census.n == n:
                _CENSUS_MEMO[n] = census
                return census
        except (KeyError, ValueError, json.JSONDecodeError):
            pass
    posets = enumerate_posets(n)
    if jobs > 1:
        keys = [canonical_key(P) for P in posets]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(_census_entry_from_key, keys, chunksize=8))
    else:
        entries = [census_entry(P) for P in posets]
    entries.sort(key=lambda e: e.key)
    census = Census(n, tuple(entries))
    _CENSUS_MEMO[n] = census
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(census_to_json(census)))
        tmp.replace(path)
    except OSError:
        pass
    return census


# -- counterexample mining --------------------------------------------------------


def _pred_sec_not_strong(P, e: CensusEntry) -> bool:
    r = e.report
    return r.is_sec_pc and r.has_top and not r.is_strongly_sec_pc


def _pred_dm_lost(P, e: CensusEntry) -> bool:
    return e.report.is_sec_pc and e.dm_preserves_secpc is False


def _pred_nonmonotone(P, e: CensusEntry) -> bool:
    return e.report.is_sec_pc and e.second_arg_monotone is False


def _pred_strong_not_rel(P, e: CensusEntry) -> bool:
    r = e.report
    return r.is_strongly_sec_pc and not r.is_rel_pc


def _pred_lattice_identity_violation(P, e: CensusEntry) -> bool:
    r = e.report
    if not (r.is_lattice and r.is_sec_pc):
        return False
    return not verify_lattice_identities(P).passed


PREDICATES = {
    "sec-not-strong": _pred_sec_not_strong,
    "secpc-lost-under-DM": _pred_dm_lost,
    "second-arg-nonmonotone": _pred_nonmonotone,
    "strong-not-relpc": _pred_strong_not_rel,
    "lattice-identity-violation": _pred_lattice_identity_violation,
}


def find_counterexample(n: int, predicate: str, jobs: int = 1) -> FinitePoset | None:
    """Smallest witness of the named predicate at or below size n, scanning
    censuses in increasing size; absence is a value, not an error."""
    if predicate not in PREDICATES:
        raise UnknownPredicate(
            f"unknown predicate {predicate!r}; known: {sorted(PREDICATES)}"
        )
    fn = PREDICATES[predicate]
    for k in range(1, n + 1):
        for e in run_census(k, jobs=jobs).entries:
            P = poset_from_key(e.key)
            if fn(P, e):
                return P
    return None


# -- serialization ------------------------------------------------------------


def _report_to_json(rep: ClassificationReport) -> dict:
    return {
        "sec_pc": rep.is_sec_pc,
        "strongly": rep.is_strongly_sec_pc,
        "rel_pc": rep.is_rel_pc,
        "lattice": rep.is_lattice,
        "has_top": rep.has_top,
        "witnesses": [[prop, list(els)] for prop, els in rep.witnesses],
    }


def _report_from_json(data: dict) -> ClassificationReport:
    return ClassificationReport(
        is_sec_pc=data["sec_pc"],
        is_strongly_sec_pc=data["strongly"],
        is_rel_pc=data["rel_pc"],
        is_lattice=data["lattice"],
        has_top=data["has_top"],
        witnesses=tuple((prop, tuple(els)) for prop, els in data["witnesses"]),
    )


def census_to_json(census: Census) -> dict:
    return {
        "n": census.n,
        "version": CODE_VERSION,
        "entries": [
            {
                "key": e.key,
                "report": _report_to_json(e.report),
                "second_arg_monotone": e.second_arg_monotone,
                "dm_preserves_secpc": e.dm_preserves_secpc,
                "congruences_convex": e.congruences_convex,
            }
            for e in census.entries
        ],
    }


def census_from_json(data: dict) -> Census:
    if data.get("version") != CODE_VERSION:
        raise ValueError("census cache version mismatch")
    entries = tuple(
        CensusEntry(
            key=e["key"],
            report=_report_from_json(e["report"]),
            second_arg_monotone=e["second_arg_monotone"],
            dm_preserves_secpc=e["dm_preserves_secpc"],
            congruences_convex=e["congruences_convex"],
        )
        for e in data["entries"]
    )
    return Census(data["n"], entries)
