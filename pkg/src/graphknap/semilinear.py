"""Linear and semilinear subsets of N^k and minimal-solution machinery.

Everything here runs on plain Python integers; the magnitude recurrences used
by the bound calculator overflow fixed-width arithmetic quickly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .errors import BoundError

IntVector = Tuple[int, ...]


def l1_norm(x: Sequence[int]) -> int:
    return sum(abs(c) for c in x)


def max_norm(x: Sequence[int]) -> int:
    return max((abs(c) for c in x), default=0)


def vec_add(x: Sequence[int], y: Sequence[int]) -> IntVector:
    return tuple(a + b for a, b in zip(x, y))


def vec_scale(c: int, x: Sequence[int]) -> IntVector:
    return tuple(c * a for a in x)


def dot(u: Sequence[int], x: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, x))


@dataclass(frozen=True)
class LinearSet:
    """base + N-combinations of periods; all entries nonnegative."""

    base: IntVector
    periods: Tuple[IntVector, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.base):
            raise ValueError(f"negative base entry in {self.base}")
        for p in self.periods:
            if len(p) != len(self.base):
                raise ValueError("period dimension mismatch")
            if any(c < 0 for c in p):
                raise ValueError(f"negative period entry in {p}")

    @classmethod
    def make(cls, base: Sequence[int], periods: Iterable[Sequence[int]]) -> "LinearSet":
        """Normalized constructor: drops zero periods, deduplicates, sorts."""
        cleaned = sorted({tuple(p) for p in periods if any(p)})
        return cls(tuple(base), tuple(cleaned))

    def magnitude(self) -> int:
        return max(max_norm(self.base), max((max_norm(p) for p in self.periods), default=0))


@dataclass(frozen=True)
class SemilinearSet:
    """Finite union of linear sets (possibly empty)."""

    components: Tuple[LinearSet, ...]

    def __post_init__(self):
        dims = {len(c.base) for c in self.components}
        if len(dims) > 1:
            raise ValueError("mixed dimensions in semilinear set")

    @classmethod
    def empty(cls) -> "SemilinearSet":
        return cls(())

    def is_empty(self) -> bool:
        return not self.components


def magnitude(s: SemilinearSet) -> int:
    """Largest entry over all bases and periods; 0 for the empty representation."""
    return max((c.magnitude() for c in s.components), default=0)


# -- minimal nonnegative solutions of one linear equation ----------------------


def _cd_minimal_homogeneous(u: IntVector, coord_caps: Optional[Tuple[Optional[int], ...]] = None) -> List[IntVector]:
    """Minimal nontrivial solutions of u.x = 0 by frontier completion.

    Vectors grow one unit at a time, only ever in a coordinate whose
    coefficient moves the running value toward zero; vectors dominating an
    already-found solution are discarded.  Every minimal solution admits such
    a growth path (order its letters so no proper prefix sums to zero), so the
    completion is exact; the l1 bound 1 + |u|_1 on minimal solutions caps the
    frontier as a termination certificate.  ``coord_caps`` restricts single
    coordinates when the caller only needs solutions below a cap there.
    """
    k = len(u)
    if k == 0:
        return []
    cap = 1 + l1_norm(u)
    caps = coord_caps or (None,) * k
    minimal: List[IntVector] = []
    frontier: List[Tuple[IntVector, int]] = []
    seen = set()
    for i, coeff in enumerate(u):
        if caps[i] == 0:
            continue
        e = tuple(1 if j == i else 0 for j in range(k))
        if coeff == 0:
            minimal.append(e)
        else:
            frontier.append((e, coeff))
            seen.add(e)

    def dominates_found(x: IntVector) -> bool:
        for s in minimal:
            if all(a >= c for a, c in zip(x, s)):
                return True
        return False

    level = 1
    while frontier and level < cap:
        level += 1
        grown: List[Tuple[IntVector, int]] = []
        for x, value in frontier:
            for j in range(k):
                if u[j] * value >= 0:
                    continue
                if caps[j] is not None and x[j] >= caps[j]:
                    continue
                y = tuple(c + 1 if idx == j else c for idx, c in enumerate(x))
                if y in seen:
                    continue
                seen.add(y)
                if dominates_found(y):
                    continue
                new_value = value + u[j]
                if new_value == 0:
                    minimal.append(y)
                else:
                    grown.append((y, new_value))
        frontier = grown
    return sorted(minimal)


def _minimal_solutions(u: IntVector, b: int) -> Tuple[IntVector, ...]:
    """All <=-minimal x in N^k with u.x == b, excluding x = 0.

    The inhomogeneous case lifts to (u, -b): the minimal x with u.x = b are
    exactly the projections of the lifted minimal solutions whose last
    coordinate is 1.
    """
    if len(u) == 0:
        return ()
    if b == 0:
        return tuple(_cd_minimal_homogeneous(u))
    caps = (None,) * len(u) + (1,)
    lifted = _cd_minimal_homogeneous(u + (-b,), coord_caps=caps)
    return tuple(sorted(x[:-1] for x in lifted if x[-1] == 1))


def minimal_solutions_homogeneous(u: Sequence[int]) -> List[IntVector]:
    """Minimal nontrivial x in N^k with u.x = 0; each has |x|_1 <= 1 + |u|_1."""
    return list(_minimal_solutions(tuple(u), 0))


def minimal_solutions_inhom(u: Sequence[int], b: int) -> List[IntVector]:
    """Minimal x in N^k with u.x = b; for b = 0 this is just the zero vector."""
    u = tuple(u)
    if b == 0:
        return [(0,) * len(u)]
    return list(_minimal_solutions(u, b))


@lru_cache(maxsize=None)
def decompose_hyperplane_solutions(u: IntVector, b: int) -> SemilinearSet:
    """{x in N^k : u.x = b} as bases = minimal inhomogeneous solutions with the
    shared period set of minimal homogeneous solutions."""
    u = tuple(u)
    bases = minimal_solutions_inhom(u, b)
    if not bases:
        return SemilinearSet.empty()
    periods = tuple(minimal_solutions_homogeneous(u))
    return SemilinearSet(tuple(LinearSet.make(c, periods) for c in bases))


def _compositions(total: int, parts: int) -> Iterable[Tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def _fibers(y: IntVector, values: IntVector, coords_by_value: Dict[int, List[int]], k: int) -> List[IntVector]:
    """All x in N^k whose per-value coordinate sums match y."""
    results: List[List[int]] = [[0] * k]
    for i, count in enumerate(y):
        js = coords_by_value.get(values[i], [])
        if not js:
            if count:
                return []
            continue
        grown: List[List[int]] = []
        for comp in _compositions(count, len(js)):
            for vec in results:
                new = vec.copy()
                for j, c in zip(js, comp):
                    new[j] = c
                grown.append(new)
        results = grown
    return [tuple(r) for r in results]


@lru_cache(maxsize=None)
def decompose_onedim_bounded(u: IntVector, b: int, M: int) -> SemilinearSet:
    """Same solution set as decompose_hyperplane_solutions, built through the
    bounded detour: solve over the value vector (-M..M) and pull the result
    back through the fibers of the 0/1 value-indicator matrix.  All base l1
    norms and period column sums stay <= 1 + (M+2)M."""
    u = tuple(u)
    if max_norm(u) > M or abs(b) > M:
        raise BoundError(f"entries of {u} / {b} exceed the stated bound {M}")
    k = len(u)
    values = tuple(range(-M, M + 1))
    inner = decompose_hyperplane_solutions(values, b)
    if inner.is_empty():
        return SemilinearSet.empty()
    coords_by_value: Dict[int, List[int]] = {}
    for j, val in enumerate(u):
        coords_by_value.setdefault(val, []).append(j)
    bases: Set[IntVector] = set()
    for comp in inner.components:
        bases.update(_fibers(comp.base, values, coords_by_value, k))
    if not bases:
        return SemilinearSet.empty()
    periods: Set[IntVector] = set()
    for p in inner.components[0].periods:
        periods.update(_fibers(p, values, coords_by_value, k))
    period_tuple = tuple(sorted(periods))
    return SemilinearSet(tuple(LinearSet.make(c, period_tuple) for c in sorted(bases)))


def intersect_linear_with_hyperplane(L: LinearSet, u: Sequence[int], b: int, m: int) -> SemilinearSet:
    """{x in L : u.x = b} via the pulled-back one-dimensional decomposition.

    Requires |u|_inf <= m and |b| <= m; the result's magnitude is at most
    2M + M(m + kmM)(m + kmM + 2) for M the magnitude of L.
    """
    u = tuple(u)
    if max_norm(u) > m or abs(b) > m:
        raise BoundError(f"entries of {u} / {b} exceed the stated bound {m}")
    k = len(L.base)
    if len(u) != k:
        raise ValueError("dimension mismatch")
    if not L.periods:
        if dot(u, L.base) == b:
            return SemilinearSet((L,))
        return SemilinearSet.empty()
    M = L.magnitude()
    bound = m + k * m * M
    uA = tuple(dot(u, p) for p in L.periods)
    b_prime = b - dot(u, L.base)
    # the bounded detour only pays off when the mapped row's l1 norm exceeds
    # what the direct decomposition already guarantees
    if 1 + l1_norm(uA) + abs(b_prime) <= 1 + (bound + 2) * bound:
        inner = decompose_hyperplane_solutions(uA, b_prime)
    else:
        inner = decompose_onedim_bounded(uA, b_prime, bound)
    components = []
    for comp in inner.components:
        base = L.base
        for coeff, period in zip(comp.base, L.periods):
            base = vec_add(base, vec_scale(coeff, period))
        mapped_periods = []
        for p in comp.periods:
            vec = (0,) * k
            for coeff, period in zip(p, L.periods):
                vec = vec_add(vec, vec_scale(coeff, period))
            mapped_periods.append(vec)
        components.append(LinearSet.make(base, mapped_periods))
    return SemilinearSet(tuple(components))


def intersect_with_hyperplane(s: SemilinearSet, u: Sequence[int], b: int, m: int) -> SemilinearSet:
    """Componentwise union of intersect_linear_with_hyperplane."""
    out: List[LinearSet] = []
    for comp in s.components:
        out.extend(intersect_linear_with_hyperplane(comp, u, b, m).components)
    return SemilinearSet(tuple(dict.fromkeys(out)))


def _member_linear(L: LinearSet, x: IntVector) -> bool:
    target = tuple(a - c for a, c in zip(x, L.base))
    if any(c < 0 for c in target):
        return False
    periods = L.periods

    def dfs(idx: int, t: IntVector) -> bool:
        if not any(t):
            return True
        if idx == len(periods):
            return False
        p = periods[idx]
        limit = min((tc // pc for tc, pc in zip(t, p) if pc > 0), default=0)
        for c in range(limit + 1):
            rest = tuple(tc - c * pc for tc, pc in zip(t, p))
            if all(r >= 0 for r in rest) and dfs(idx + 1, rest):
                return True
        return False

    return dfs(0, target)


def semilinear_member(s: SemilinearSet, x: Sequence[int]) -> bool:
    """Membership test by bounded search over period multiplicities; each
    nonzero period strictly increases some coordinate, so the search is
    finite once zero periods are normalized away."""
    x = tuple(x)
    for comp in s.components:
        if len(x) != len(comp.base):
            raise ValueError("dimension mismatch")
        if _member_linear(comp, x):
            return True
    return False


def members_up_to(s: SemilinearSet, bound: int) -> Set[IntVector]:
    """All members with every coordinate <= bound (test oracle)."""
    out: Set[IntVector] = set()
    for comp in s.components:
        if any(c > bound for c in comp.base):
            continue
        frontier = {comp.base}
        seen = {comp.base}
        while frontier:
            nxt = set()
            for vec in frontier:
                for p in comp.periods:
                    grown = vec_add(vec, p)
                    if grown not in seen and all(c <= bound for c in grown):
                        seen.add(grown)
                        nxt.add(grown)
            frontier = nxt
        out |= seen
    return out
