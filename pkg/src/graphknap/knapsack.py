"""Exponent equations over graph groups and the dispatching solver.

An exponent equation is h0 g1^x1 h1 ... gk^xk hk = 1 with exponents over N.
Solving dispatches on the alphabet class: complete graphs go through
abelianization and hyperplane decompositions (exact); non-complete transitive
forests get an exact sweep up to the magnitude bound of their class when that
bound is small enough (the acyclic-automaton reduction evaluated row by row),
otherwise iterative deepening; general alphabets get search only, so
"unsolvable" is never claimed without a completeness certificate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .alphabet import (
    COMPLETE,
    GENERAL,
    DecompositionNode,
    DirectZ,
    FreeProduct,
    IndependenceAlphabet,
    Trivial,
    classify,
    decompose,
)
from .automata import WordAutomaton
from .errors import EquationError, ResourceExhaustedError
from .group import (
    EMPTY_WORD,
    FreeProductSplit,
    GroupWord,
    append_reduced,
    canonical_order,
    concat,
    cyclically_reduce,
    invert_word,
    is_identity,
    reduce_word,
    word_power,
)
from .semilinear import (
    LinearSet,
    SemilinearSet,
    decompose_hyperplane_solutions,
    intersect_with_hyperplane,
    max_norm,
)

MODE_KNAPSACK = "knapsack"
MODE_SUBSETSUM = "subsetsum"
MODE_INTEGER = "integer"

SOLVABLE = "solvable"
UNSOLVABLE = "unsolvable"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class ExponentEquation:
    """h0 g1^x1 h1 ... gk^xk hk = 1; variable names may repeat."""

    alphabet: IndependenceAlphabet
    constants: Tuple[GroupWord, ...]
    cycles: Tuple[GroupWord, ...]
    variables: Tuple[str, ...]
    mode: str = MODE_KNAPSACK
    free_variables: Tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.constants) != len(self.cycles) + 1:
            raise EquationError("need exactly one constant more than cycles")
        if len(self.variables) != len(self.cycles):
            raise EquationError("need one variable per cycle")
        if self.mode not in (MODE_KNAPSACK, MODE_SUBSETSUM, MODE_INTEGER):
            raise EquationError(f"unknown mode {self.mode!r}")
        for word in self.constants + self.cycles:
            for gen, sign in word:
                if gen not in self.alphabet:
                    raise EquationError(f"unknown generator {gen!r} in equation")

    @property
    def size(self) -> int:
        return sum(len(w) for w in self.constants) + sum(len(w) for w in self.cycles)

    @property
    def k(self) -> int:
        return len(self.cycles)

    @property
    def distinct_names(self) -> Tuple[str, ...]:
        return tuple(dict.fromkeys(self.variables))

    @property
    def knapsack_shape(self) -> bool:
        return len(self.distinct_names) == len(self.variables)

    @property
    def all_names(self) -> Tuple[str, ...]:
        return self.distinct_names + tuple(
            v for v in self.free_variables if v not in self.distinct_names
        )


def substitute(eq: ExponentEquation, assignment: Dict[str, int]) -> GroupWord:
    """The word h0 g1^x1 h1 ... with the assignment's exponents filled in."""
    parts: List[GroupWord] = [eq.constants[0]]
    for i, cycle in enumerate(eq.cycles):
        exponent = assignment.get(eq.variables[i], 0)
        parts.append(word_power(cycle, exponent))
        parts.append(eq.constants[i + 1])
    return concat(*parts)


def verify_solution(eq: ExponentEquation, assignment: Dict[str, int]) -> bool:
    return is_identity(substitute(eq, assignment), eq.alphabet)


def preprocess(eq: ExponentEquation, split: Optional[FreeProductSplit] = None) -> ExponentEquation:
    """Reduce all words, delete trivial cycles (their variables become free),
    and, given a free-product split, cyclically reduce each cycle folding the
    conjugators into the neighboring constants."""
    alpha = eq.alphabet
    constants = [reduce_word(w, alpha) for w in eq.constants]
    cycles = [reduce_word(w, alpha) for w in eq.cycles]

    new_constants: List[GroupWord] = [constants[0]]
    new_cycles: List[GroupWord] = []
    new_vars: List[str] = []
    dropped: List[str] = []
    for i, cycle in enumerate(cycles):
        if not cycle:
            dropped.append(eq.variables[i])
            new_constants[-1] = reduce_word(concat(new_constants[-1], constants[i + 1]), alpha)
        else:
            new_cycles.append(cycle)
            new_vars.append(eq.variables[i])
            new_constants.append(constants[i + 1])

    if split is not None:
        for i, cycle in enumerate(new_cycles):
            conj, core = cyclically_reduce(cycle, split, alpha)
            if conj:
                new_constants[i] = reduce_word(concat(new_constants[i], invert_word(conj)), alpha)
                new_constants[i + 1] = reduce_word(concat(conj, new_constants[i + 1]), alpha)
            new_cycles[i] = core

    free = tuple(
        dict.fromkeys(
            list(eq.free_variables) + [v for v in dropped if v not in new_vars]
        )
    )
    return ExponentEquation(
        alphabet=alpha,
        constants=tuple(new_constants),
        cycles=tuple(new_cycles),
        variables=tuple(new_vars),
        mode=eq.mode,
        free_variables=free,
    )


# -- tameness bound -------------------------------------------------------------


@dataclass(frozen=True)
class TamenessBound:
    """Magnitude bound for solution sets over a transitive forest, with the
    per-node values of the structural recursion."""

    value: int
    n: int
    k: int
    nodes: Tuple[Tuple[str, int], ...]


def _q_poly(n: int, k: int) -> int:
    return (n + 3 * k + 1) + k * n * n


def tameness_bound_value(node: DecompositionNode, n: int, k: int) -> TamenessBound:
    """Pure structural recursion: trivial nodes contribute 0; a bare integer
    factor contributes 1 + 2n; a direct product with one integer factor maps a
    child bound M to 2M + M(n + knM)(n + knM + 2); a free product of bounds
    p0, p1 contributes q(n) + p0 + p1 + n with q(n) = (n + 3k + 1) + kn^2,
    nested left-to-right for more than two factors."""
    trace: List[Tuple[str, int]] = []

    def walk(nd: DecompositionNode, path: str) -> int:
        if isinstance(nd, Trivial):
            value = 0
            trace.append((f"{path}:trivial", value))
            return value
        if isinstance(nd, DirectZ):
            if isinstance(nd.child, Trivial):
                value = 1 + 2 * n
                trace.append((f"{path}:z[{nd.apex}]", value))
                return value
            m_child = walk(nd.child, path + ".child")
            shift = n + k * n * m_child
            value = 2 * m_child + m_child * shift * (shift + 2)
            trace.append((f"{path}:directz[{nd.apex}]", value))
            return value
        values = [walk(child, f"{path}.{i}") for i, child in enumerate(nd.children)]
        q = _q_poly(n, k)
        acc = values[-1]
        for v in reversed(values[:-1]):
            acc = q + v + acc + n
        trace.append((f"{path}:freeproduct", acc))
        return acc

    total = walk(node, "root")
    return TamenessBound(value=total, n=n, k=k, nodes=tuple(trace))


def tameness_bound(eq: ExponentEquation, tree: Optional[DecompositionNode] = None) -> TamenessBound:
    """Bound for the (preprocessed) equation along the alphabet's tree."""
    if tree is None:
        tree = decompose(eq.alphabet)
    return tameness_bound_value(tree, eq.size, eq.k)


# -- automaton reduction --------------------------------------------------------


def knapsack_to_automaton(eq: ExponentEquation, bound: Union[int, Sequence[int]]) -> WordAutomaton:
    """Acyclic automaton accepting exactly the substituted words with every
    exponent at most the bound (uniform or per cycle).

    Uniform bounds use the full (k+2) x (bound+1) state grid; membership of a
    trivial word is equivalent to solvability within the bound.
    """
    automaton, _ = _knapsack_automaton_with_roles(eq, bound)
    return automaton


def _knapsack_automaton_with_roles(
    eq: ExponentEquation, bound: Union[int, Sequence[int]]
) -> Tuple[WordAutomaton, List[Tuple[str, int]]]:
    if not eq.knapsack_shape:
        raise EquationError("automaton reduction needs pairwise distinct variables")
    k = eq.k
    uniform = isinstance(bound, int)
    bounds = [bound] * k if uniform else [int(b) for b in bound]
    if len(bounds) != k or any(b < 0 for b in bounds):
        raise EquationError(f"bad exponent bound {bound!r}")

    transitions: List[Tuple[int, GroupWord, int]] = []
    roles: List[Tuple[str, int]] = []

    if uniform:
        b = bounds[0] if k else 0
        width = b + 1

        def state(i: int, j: int) -> int:
            return i * width + j

        n_states = (k + 2) * width
        transitions.append((state(0, 0), eq.constants[0], state(1, 0)))
        roles.append(("v", 0))
        for i in range(1, k + 1):
            for j in range(b):
                transitions.append((state(i, j), eq.cycles[i - 1], state(i, j + 1)))
                roles.append(("u", i - 1))
                transitions.append((state(i, j), EMPTY_WORD, state(i, j + 1)))
                roles.append(("eps", i - 1))
            transitions.append((state(i, b), eq.constants[i], state(i + 1, 0)))
            roles.append(("v", i))
        initial = state(0, 0)
        final = state(k + 1, 0)
    else:
        counter = itertools.count()
        start = next(counter)
        current = next(counter)
        transitions.append((start, eq.constants[0], current))
        roles.append(("v", 0))
        for i in range(1, k + 1):
            for _ in range(bounds[i - 1]):
                nxt = next(counter)
                transitions.append((current, eq.cycles[i - 1], nxt))
                roles.append(("u", i - 1))
                transitions.append((current, EMPTY_WORD, nxt))
                roles.append(("eps", i - 1))
                current = nxt
            nxt = next(counter)
            transitions.append((current, eq.constants[i], nxt))
            roles.append(("v", i))
            current = nxt
        initial = start
        final = current
        n_states = next(counter)

    automaton = WordAutomaton(
        n_states=n_states,
        initial=initial,
        finals=frozenset({final}),
        transitions=tuple(transitions),
    )
    return automaton, roles


# -- outcomes and limits ---------------------------------------------------------


@dataclass
class SolveOutcome:
    status: str
    assignment: Optional[Dict[str, int]] = None
    bound: Optional[int] = None
    bound_provenance: Optional[str] = None
    budget: Optional[int] = None
    method: str = ""

    def to_json_dict(self) -> dict:
        return {
            "status": self.status,
            "assignment": self.assignment,
            "bound": self.bound,
            "budget": self.budget,
        }


@dataclass(frozen=True)
class SolverLimits:
    automaton_states: int = 100_000
    search_ceiling: int = 1024
    enumeration_cap: int = 500_000
    node_cap: int = 2_000_000
    subset_vars_cap: int = 22
    brute_cap: int = 2_000_000
    cover_base_cap: int = 2048


DEFAULT_LIMITS = SolverLimits()


def _full_assignment(eq: ExponentEquation, partial: Dict[str, int]) -> Dict[str, int]:
    out = {name: 0 for name in eq.all_names}
    out.update(partial)
    return out


def brute_force_solutions(
    eq: ExponentEquation, bound: int, limits: SolverLimits = DEFAULT_LIMITS
) -> List[Dict[str, int]]:
    """All assignments with every exponent <= bound, verified by the word
    problem; lexicographic order over the distinct variable names."""
    names = eq.distinct_names
    r = len(names)
    if (bound + 1) ** r > limits.brute_cap:
        raise ResourceExhaustedError(
            f"brute-force sweep of ({bound}+1)^{r} assignments exceeds the cap"
        )
    out = []
    for combo in itertools.product(range(bound + 1), repeat=r):
        assignment = dict(zip(names, combo))
        if verify_solution(eq, assignment):
            out.append(_full_assignment(eq, assignment))
    return out


# -- the solver -------------------------------------------------------------------


def _abelianize(eq: ExponentEquation) -> Tuple[List[Tuple[int, ...]], Tuple[int, ...]]:
    """Per distinct variable the exponent-sum column of its cycles, plus the
    right-hand side -sum over constants."""
    gens = eq.alphabet.generators
    gen_index = {g: i for i, g in enumerate(gens)}
    m = len(gens)

    def exponent_vector(word: GroupWord) -> List[int]:
        vec = [0] * m
        for gen, sign in word:
            vec[gen_index[gen]] += sign
        return vec

    names = eq.distinct_names
    columns = {name: [0] * m for name in names}
    for i, cycle in enumerate(eq.cycles):
        vec = exponent_vector(cycle)
        col = columns[eq.variables[i]]
        for j in range(m):
            col[j] += vec[j]
    rhs = [0] * m
    for word in eq.constants:
        vec = exponent_vector(word)
        for j in range(m):
            rhs[j] -= vec[j]
    return [tuple(columns[name]) for name in names], tuple(rhs)


def _papadimitriou_bound(columns, rhs, m: int) -> int:
    entries = [abs(c) for col in columns for c in col] + [abs(c) for c in rhs]
    a = max(entries, default=0)
    n_vars = len(columns)
    if m == 0 or n_vars == 0:
        return 0
    return n_vars * (m * a) ** (2 * m + 1)


def _abelian_solution_set(eq: ExponentEquation) -> SemilinearSet:
    """Exact solution set of the abelianized equation over N (empty iff the
    exponent-sum system has no nonnegative solution)."""
    columns, rhs = _abelianize(eq)
    r = len(columns)
    solutions = SemilinearSet((LinearSet.make((0,) * r, [
        tuple(1 if j == i else 0 for j in range(r)) for i in range(r)
    ]),))
    for row_index in range(len(rhs)):
        row = tuple(col[row_index] for col in columns)
        b = rhs[row_index]
        bound_m = max(max_norm(row), abs(b), 1)
        solutions = intersect_with_hyperplane(solutions, row, b, bound_m)
        if solutions.is_empty():
            break
    return solutions


def _solve_complete(eq: ExponentEquation, limits: SolverLimits) -> SolveOutcome:
    columns, rhs = _abelianize(eq)
    names = eq.distinct_names
    r = len(names)
    m = len(eq.alphabet.generators)
    t = _papadimitriou_bound(columns, rhs, m)
    if r == 0:
        if all(c == 0 for c in rhs):
            return SolveOutcome(
                SOLVABLE, assignment=_full_assignment(eq, {}), bound=t,
                bound_provenance="no variables: constant part is trivial",
                method="abelian",
            )
        return SolveOutcome(
            UNSOLVABLE, bound=0,
            bound_provenance="no variables: constant part is nontrivial",
            method="abelian",
        )
    solutions = _abelian_solution_set(eq)
    if solutions.is_empty():
        return SolveOutcome(
            UNSOLVABLE, bound=t,
            bound_provenance="abelianization: hyperplane decomposition is exhaustive "
            f"(integer-programming sweep bound {t})",
            method="abelian",
        )
    witness = min((c.base for c in solutions.components), key=lambda v: (sum(v), v))
    assignment = _full_assignment(eq, dict(zip(names, witness)))
    assert verify_solution(eq, assignment)
    # sanity cross-check: the integer-programming sweep bound must cover the
    # least base of the exact decomposition
    least_entry_bound = min(max_norm(c.base) for c in solutions.components)
    assert least_entry_bound <= t
    return SolveOutcome(SOLVABLE, assignment=assignment, bound=t,
                        bound_provenance="abelianization", method="abelian")


def _sweep(eq: ExponentEquation, budget: int) -> Optional[Dict[str, int]]:
    names = eq.distinct_names
    for combo in itertools.product(range(budget + 1), repeat=len(names)):
        assignment = dict(zip(names, combo))
        if verify_solution(eq, assignment):
            return assignment
    return None


def _abelian_feasible(target: Tuple[int, ...], zs: List[Tuple[int, ...]], bound: int) -> bool:
    """Exact test for: some t in [0, bound]^r has sum_j t_j z_j == target."""
    r = len(zs)
    if r == 0:
        return all(c == 0 for c in target)
    if r == 1:
        z = zs[0]
        pivot = next((i for i, c in enumerate(z) if c != 0), None)
        if pivot is None:
            return all(c == 0 for c in target)
        num, den = target[pivot], z[pivot]
        if num % den:
            return False
        t = num // den
        return 0 <= t <= bound and all(t * a == c for a, c in zip(z, target))
    if r == 2:
        z1, z2 = zs
        m = len(target)
        for d1 in range(m):
            for d2 in range(d1 + 1, m):
                det = z1[d1] * z2[d2] - z1[d2] * z2[d1]
                if det:
                    n1 = target[d1] * z2[d2] - target[d2] * z2[d1]
                    n2 = z1[d1] * target[d2] - z1[d2] * target[d1]
                    if n1 % det or n2 % det:
                        return False
                    t1, t2 = n1 // det, n2 // det
                    if not (0 <= t1 <= bound and 0 <= t2 <= bound):
                        return False
                    return all(t1 * a + t2 * b == c for a, b, c in zip(z1, z2, target))
        if all(c == 0 for c in z1):
            return _abelian_feasible(target, [z2], bound)
    z1 = zs[0]
    for t1 in range(bound + 1):
        rest = tuple(c - t1 * a for c, a in zip(target, z1))
        if _abelian_feasible(rest, zs[1:], bound):
            return True
    return False


def _decide_bounded_chain(
    eq: ExponentEquation, bound: Union[int, Sequence[int]], limits: SolverLimits
) -> Optional[Dict[str, int]]:
    """Exact decision of solvability with every exponent <= its bound
    (uniform integer or one bound per cycle).

    Sweeps the equation row by row (one row per cycle), keeping the set of
    canonical reduced prefixes reachable after each row.  Deduplicating on the
    group element collapses the exponent counter; prefixes are dropped when
    their geodesic is longer than every possible suffix or when the remaining
    rows cannot repair their exponent sums (exact bounded feasibility over the
    abelianization).  Raises ResourceExhaustedError past the node cap.
    """
    alpha = eq.alphabet
    gens = alpha.generators
    gen_index = {g: i for i, g in enumerate(gens)}
    m = len(gens)
    k = eq.k
    bounds = [bound] * k if isinstance(bound, int) else [int(b) for b in bound]
    if len(bounds) != k or any(b < 0 for b in bounds):
        raise EquationError(f"bad exponent bound {bound!r}")
    max_bound = max(bounds, default=0)

    def ab(word: GroupWord) -> Tuple[int, ...]:
        vec = [0] * m
        for gen, sign in word:
            vec[gen_index[gen]] += sign
        return tuple(vec)

    z = [ab(cycle) for cycle in eq.cycles]
    ab_const = [ab(word) for word in eq.constants]
    # rest_const[i] = exponent sums of v_{i+1} .. v_k
    rest_const = [(0,) * m] * (k + 1)
    acc = (0,) * m
    for i in range(k, 0, -1):
        acc = tuple(a + b for a, b in zip(acc, ab_const[i]))
        rest_const[i - 1] = acc
    # suffix_letters[i] = most letters any completion after row i can still use
    suffix_letters = [0] * (k + 1)
    for i in range(k, 0, -1):
        suffix_letters[i - 1] = (
            suffix_letters[i] + bounds[i - 1] * len(eq.cycles[i - 1]) + len(eq.constants[i])
        )

    start = reduce_word(eq.constants[0], alpha)
    if k == 0:
        return {} if not start else None
    if len(start) > suffix_letters[0]:
        return None
    target0 = tuple(-(a + b) for a, b in zip(ab(start), rest_const[0]))
    if not _abelian_feasible(target0, z, max_bound):
        return None

    frontier: Dict[GroupWord, Tuple[Optional[GroupWord], int]] = {start: (None, 0)}
    rows: List[Dict[GroupWord, Tuple[Optional[GroupWord], int]]] = [frontier]
    stored = 1
    for i in range(1, k + 1):
        cycle = eq.cycles[i - 1]
        tail = eq.constants[i]
        zs_rest = z[i:]
        rest_bound = max(bounds[i:], default=0)
        nxt: Dict[GroupWord, Tuple[GroupWord, int]] = {}
        for prefix in rows[i - 1]:
            buf = list(prefix)
            ab_base = ab(prefix)
            for t in range(bounds[i - 1] + 1):
                if t > 0:
                    for letter in cycle:
                        append_reduced(buf, letter, alpha)
                sums = tuple(
                    a + t * b + c + d
                    for a, b, c, d in zip(ab_base, z[i - 1], ab_const[i], rest_const[i])
                )
                if not _abelian_feasible(tuple(-s for s in sums), zs_rest, rest_bound):
                    continue
                word = list(buf)
                for letter in tail:
                    append_reduced(word, letter, alpha)
                if len(word) > suffix_letters[i]:
                    continue
                if i == k:
                    if not word:
                        assignment = {eq.variables[i - 1]: t}
                        key = prefix
                        for row in range(i - 1, 0, -1):
                            prev, used = rows[row][key]
                            assignment[eq.variables[row - 1]] = used
                            key = prev
                        return assignment
                    continue
                nf = canonical_order(word, alpha)
                if nf not in nxt:
                    nxt[nf] = (prefix, t)
                    stored += 1
                    if stored > limits.node_cap:
                        raise ResourceExhaustedError(
                            f"bounded chain sweep exceeded {limits.node_cap} stored prefixes"
                        )
        if i < k and not nxt:
            return None
        rows.append(nxt)
    return None


def solve_within_bounds(
    eq: ExponentEquation,
    bound: Union[int, Sequence[int]],
    limits: SolverLimits = DEFAULT_LIMITS,
) -> Optional[Dict[str, int]]:
    """Exact bounded solvability (uniform or per-cycle exponent bounds);
    returns a verified assignment or None.  Needs pairwise distinct variables."""
    if not eq.knapsack_shape:
        raise EquationError("bounded decision needs pairwise distinct variables")
    eq2 = preprocess(eq)
    bounds = bound
    if not isinstance(bound, int):
        kept = [i for i, name in enumerate(eq.variables) if name in eq2.variables]
        bounds = [bound[i] for i in kept]
    found = _decide_bounded_chain(eq2, bounds, limits)
    if found is None:
        return None
    assignment = _full_assignment(eq2, found)
    assert verify_solution(eq, assignment)
    return assignment


def _solve_by_search(
    eq: ExponentEquation, limits: SolverLimits, certified_bound: Optional[int], method: str
) -> SolveOutcome:
    """Iterative deepening with doubling budgets; an exact Unsolvable needs a
    completed sweep up to the certified bound."""
    names = eq.distinct_names
    r = len(names)
    target = certified_bound
    ceiling = limits.search_ceiling
    budget = 0 if target == 0 else 1
    last_complete: Optional[int] = None
    while True:
        if eq.knapsack_shape:
            try:
                found = _decide_bounded_chain(eq, budget, limits)
            except ResourceExhaustedError:
                return SolveOutcome(UNKNOWN, budget=last_complete, method=method)
        else:
            if (budget + 1) ** r > limits.enumeration_cap:
                return SolveOutcome(UNKNOWN, budget=last_complete, method=method)
            found = _sweep(eq, budget)
        if found is not None:
            assignment = _full_assignment(eq, found)
            assert verify_solution(eq, assignment)
            return SolveOutcome(SOLVABLE, assignment=assignment, budget=budget, method=method)
        last_complete = budget
        if target is not None and budget >= target:
            return SolveOutcome(
                UNSOLVABLE, bound=target,
                bound_provenance="complete sweep up to the certified bound",
                budget=last_complete, method=method,
            )
        if budget >= ceiling:
            return SolveOutcome(UNKNOWN, budget=last_complete, method=method)
        nxt = budget * 2 if budget else 1
        if target is not None:
            nxt = min(nxt, target)
        budget = min(nxt, ceiling)


def _solve_transitive_forest(eq: ExponentEquation, limits: SolverLimits) -> SolveOutcome:
    tree = decompose(eq.alphabet)
    split = None
    if isinstance(tree, FreeProduct):
        left = frozenset(tree.children[0].generator_set())
        right = frozenset(eq.alphabet.generators) - left
        split = FreeProductSplit(left, right)
    eq2 = preprocess(eq, split)
    if _abelian_solution_set(eq2).is_empty():
        return SolveOutcome(
            UNSOLVABLE, bound=0,
            bound_provenance="abelianized equation has no solution over the naturals",
            method="abelian-precheck",
        )
    bound = tameness_bound(eq2, tree).value
    k = eq2.k
    if eq2.knapsack_shape and (k + 2) * (bound + 1) <= limits.automaton_states:
        try:
            found = _decide_bounded_chain(eq2, bound, limits)
        except ResourceExhaustedError:
            return _solve_by_search(eq2, limits, None, method="search(after sweep cap)")
        if found is None:
            return SolveOutcome(
                UNSOLVABLE, bound=bound,
                bound_provenance="tameness bound swept exhaustively (exponents above it "
                "are never needed for solvability)",
                method="certified-sweep",
            )
        assignment = _full_assignment(eq2, found)
        assert verify_solution(eq2, assignment)
        return SolveOutcome(SOLVABLE, assignment=assignment, bound=bound,
                            bound_provenance="tameness bound", method="certified-sweep")
    certified = bound if eq2.knapsack_shape else None
    return _solve_by_search(eq2, limits, certified, method="search")


def solve(eq: ExponentEquation, limits: SolverLimits = DEFAULT_LIMITS) -> SolveOutcome:
    """Decide solvability over N. Every Solvable outcome carries a verified
    assignment; Unsolvable is only reported with a completeness certificate."""
    graph_class = classify(eq.alphabet)
    eq2 = preprocess(eq)
    if graph_class.kind == COMPLETE:
        return _solve_complete(eq2, limits)
    if graph_class.kind == GENERAL:
        if not eq2.cycles:
            if is_identity(eq2.constants[0], eq2.alphabet):
                return SolveOutcome(SOLVABLE, assignment=_full_assignment(eq2, {}),
                                    bound=0, bound_provenance="no variables", method="search")
            return SolveOutcome(UNSOLVABLE, bound=0,
                                bound_provenance="no variables: constant part is nontrivial",
                                method="search")
        return _solve_by_search(eq2, limits, None, method="search")
    return _solve_transitive_forest(eq, limits)


def solve_subset_sum(eq: ExponentEquation, limits: SolverLimits = DEFAULT_LIMITS) -> SolveOutcome:
    """Exhaustive binary sweep; always exact."""
    names = eq.distinct_names
    if len(names) > limits.subset_vars_cap:
        raise ResourceExhaustedError(
            f"{len(names)} binary variables exceed the subset-sum cap"
        )
    for combo in itertools.product((0, 1), repeat=len(names)):
        assignment = dict(zip(names, combo))
        if verify_solution(eq, assignment):
            return SolveOutcome(
                SOLVABLE, assignment=_full_assignment(eq, assignment),
                bound=1, bound_provenance="exhaustive binary sweep", method="subsetsum",
            )
    return SolveOutcome(UNSOLVABLE, bound=1,
                        bound_provenance="exhaustive binary sweep", method="subsetsum")


def integer_valued_rewrite(eq: ExponentEquation) -> Tuple[ExponentEquation, Dict[str, Tuple[str, str]]]:
    """Replace each power g^x by g^x_pos (g^-1)^x_neg with one shared fresh
    pair per distinct variable; a Z-solution is read back as pos - neg."""
    taken = set(eq.variables) | set(eq.free_variables)
    pair_names: Dict[str, Tuple[str, str]] = {}
    for name in eq.distinct_names:
        pos, neg = name + "_pos", name + "_neg"
        while pos in taken or neg in taken:
            pos, neg = pos + "_", neg + "_"
        taken.update((pos, neg))
        pair_names[name] = (pos, neg)
    constants: List[GroupWord] = [eq.constants[0]]
    cycles: List[GroupWord] = []
    variables: List[str] = []
    for i, cycle in enumerate(eq.cycles):
        pos, neg = pair_names[eq.variables[i]]
        cycles.append(cycle)
        variables.append(pos)
        constants.append(EMPTY_WORD)
        cycles.append(invert_word(cycle))
        variables.append(neg)
        constants.append(eq.constants[i + 1])
    rewritten = ExponentEquation(
        alphabet=eq.alphabet,
        constants=tuple(constants),
        cycles=tuple(cycles),
        variables=tuple(variables),
        mode=MODE_KNAPSACK,
        free_variables=eq.free_variables,
    )
    return rewritten, pair_names


def solve_integer_valued(eq: ExponentEquation, limits: SolverLimits = DEFAULT_LIMITS) -> SolveOutcome:
    """Solvability with exponents over Z, via the doubled rewrite."""
    rewritten, pair_names = integer_valued_rewrite(eq)
    outcome = solve(rewritten, limits)
    if outcome.status != SOLVABLE:
        return outcome
    assignment = {}
    for name in eq.distinct_names:
        pos, neg = pair_names[name]
        assignment[name] = outcome.assignment[pos] - outcome.assignment[neg]
    for name in eq.free_variables:
        assignment.setdefault(name, 0)
    return SolveOutcome(SOLVABLE, assignment=assignment, bound=outcome.bound,
                        bound_provenance=outcome.bound_provenance,
                        budget=outcome.budget, method=outcome.method + "+integer-rewrite")


# -- solution sets (factor solver for the free-product cover) ---------------------


def _cylinderize(core: SemilinearSet, kept: Sequence[int], k: int) -> SemilinearSet:
    """Embed a solution set over the kept coordinates into N^k, leaving the
    dropped coordinates free (unit periods)."""
    dropped = [j for j in range(k) if j not in set(kept)]
    components = []
    for comp in core.components:
        base = [0] * k
        for pos, value in zip(kept, comp.base):
            base[pos] = value
        periods = []
        for p in comp.periods:
            vec = [0] * k
            for pos, value in zip(kept, p):
                vec[pos] = value
            periods.append(tuple(vec))
        periods.extend(tuple(1 if j == d else 0 for j in range(k)) for d in dropped)
        components.append(LinearSet.make(tuple(base), periods))
    return SemilinearSet(tuple(dict.fromkeys(components)))


def _project_word(word: GroupWord, keep: frozenset) -> GroupWord:
    return tuple(letter for letter in word if letter[0] in keep)


def solution_set(
    eq: ExponentEquation,
    tree: Optional[DecompositionNode] = None,
    limits: SolverLimits = DEFAULT_LIMITS,
) -> SemilinearSet:
    """Solution set over N^k (coordinates in variable order) for equations over
    transitive forests with pairwise distinct variables.

    Exact for alphabets whose decomposition stacks integer factors (trivial
    and direct-product nodes); at free-product nodes the set is assembled from
    local covers of the solutions found up to the tameness bound, which keeps
    every returned vector a genuine solution.
    """
    if not eq.knapsack_shape:
        raise EquationError("solution_set needs pairwise distinct variables")
    if tree is None:
        tree = decompose(eq.alphabet)
    return _solution_set_node(eq, tree, limits)


def _solution_set_node(
    eq: ExponentEquation, node: DecompositionNode, limits: SolverLimits
) -> SemilinearSet:
    alpha = eq.alphabet
    k = len(eq.cycles)
    reduced = preprocess(eq)
    kept = [i for i, name in enumerate(eq.variables) if name in reduced.variables]

    if not reduced.cycles:
        if is_identity(reduced.constants[0], alpha):
            core = SemilinearSet((LinearSet.make((), ()),))
        else:
            core = SemilinearSet.empty()
        return _cylinderize(core, [], k) if not core.is_empty() else SemilinearSet.empty()

    if isinstance(node, Trivial):
        raise EquationError("nontrivial cycle over the trivial group")

    if isinstance(node, DirectZ):
        apex = node.apex

        def apex_sum(word: GroupWord) -> int:
            return sum(sign for gen, sign in word if gen == apex)

        z = tuple(apex_sum(c) for c in reduced.cycles)
        y = -sum(apex_sum(c) for c in reduced.constants)
        if isinstance(node.child, Trivial):
            core = decompose_hyperplane_solutions(z, y)
        else:
            keep = frozenset(node.child.generator_set())
            sub = ExponentEquation(
                alphabet=alpha,
                constants=tuple(_project_word(w, keep) for w in reduced.constants),
                cycles=tuple(_project_word(w, keep) for w in reduced.cycles),
                variables=reduced.variables,
                mode=reduced.mode,
            )
            base_set = _solution_set_node(sub, node.child, limits)
            bound_m = max(max_norm(z), abs(y), 1)
            core = intersect_with_hyperplane(base_set, z, y, bound_m)
        return _cylinderize(core, kept, k)

    # free product: assemble from local covers over bounded base solutions
    from .cancellation import local_semilinear_cover

    left = frozenset(node.children[0].generator_set())
    right = frozenset().union(*(c.generator_set() for c in node.children[1:]))
    split = FreeProductSplit(left, right)
    prepared = preprocess(reduced, split)
    bound = tameness_bound(prepared, node).value
    if bound > limits.cover_base_cap:
        raise ResourceExhaustedError(
            f"free-product solution-set enumeration bound {bound} exceeds the cap"
        )
    names = prepared.distinct_names
    r = len(names)
    if (bound + 1) ** r > limits.enumeration_cap:
        raise ResourceExhaustedError("free-product solution-set enumeration too large")
    components: List[LinearSet] = []
    for combo in itertools.product(range(bound + 1), repeat=r):
        assignment = dict(zip(names, combo))
        if not verify_solution(prepared, assignment):
            continue
        vector = tuple(assignment[name] for name in prepared.variables)
        cover = local_semilinear_cover(prepared, vector, node=node, limits=limits)
        components.extend(cover.components)
    core = SemilinearSet(tuple(dict.fromkeys(components)))
    return _cylinderize(core, kept, k)
