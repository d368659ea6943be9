"""Acyclic (loop) automata over group alphabets and the membership-of-1 solver.

States are integers 0..n-1.  Plain acyclic automata forbid every cycle
including self-loops; loop automata additionally allow at most one self-loop
per state, which ``unroll_loops`` expands into an acyclic automaton up to a
budget.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .alphabet import DecompositionNode, IndependenceAlphabet
from .errors import AutomatonError, ResourceExhaustedError
from .group import (
    GroupWord,
    append_reduced,
    canonical_order,
    concat,
    is_identity,
    is_identity_stacked,
)

Transition = Tuple[int, GroupWord, int]
Loop = Tuple[int, GroupWord]

DEFAULT_NODE_CAP = 2_000_000
DEFAULT_PATH_CAP = 2_000_000


@dataclass(frozen=True)
class WordAutomaton:
    """Word-labeled automaton with one initial state and a set of finals."""

    n_states: int
    initial: int
    finals: frozenset
    transitions: Tuple[Transition, ...]
    loops: Tuple[Loop, ...] = ()

    def __post_init__(self):
        states = range(self.n_states)
        if self.initial not in states:
            raise AutomatonError(f"initial state {self.initial} out of range")
        for q in self.finals:
            if q not in states:
                raise AutomatonError(f"final state {q} out of range")
        for src, _, dst in self.transitions:
            if src not in states or dst not in states:
                raise AutomatonError(f"transition endpoint out of range: {(src, dst)}")
        for q, _ in self.loops:
            if q not in states:
                raise AutomatonError(f"loop state {q} out of range")


@dataclass(frozen=True)
class AcyclicityEvidence:
    """Either a topological order of the states or a cycle witness."""

    order: Optional[Tuple[int, ...]] = None
    cycle: Optional[Tuple[int, ...]] = None

    @property
    def acyclic(self) -> bool:
        return self.order is not None


def _topological_evidence(n: int, edges: Sequence[Tuple[int, int]]) -> AcyclicityEvidence:
    succ: Dict[int, List[int]] = {q: [] for q in range(n)}
    indeg = [0] * n
    for src, dst in edges:
        succ[src].append(dst)
        indeg[dst] += 1
    queue = deque(sorted(q for q in range(n) if indeg[q] == 0))
    order = []
    while queue:
        q = queue.popleft()
        order.append(q)
        for r in sorted(succ[q]):
            indeg[r] -= 1
            if indeg[r] == 0:
                queue.append(r)
    if len(order) == n:
        return AcyclicityEvidence(order=tuple(order))
    # extract a cycle from the leftover subgraph by walking until a repeat
    leftover = {q for q in range(n) if indeg[q] > 0}
    start = min(leftover)
    walk = [start]
    seen = {start}
    while True:
        nxt = min(r for r in succ[walk[-1]] if r in leftover)
        if nxt in seen:
            cycle = walk[walk.index(nxt):] + [nxt]
            return AcyclicityEvidence(cycle=tuple(cycle))
        walk.append(nxt)
        seen.add(nxt)


def check_acyclic(automaton: WordAutomaton) -> AcyclicityEvidence:
    """Topological order of a plain acyclic automaton, or a cycle witness.

    Self-loops (whether stored as transitions or in the loops field) count as
    cycles here.
    """
    for q, _ in automaton.loops:
        return AcyclicityEvidence(cycle=(q, q))
    for src, _, dst in automaton.transitions:
        if src == dst:
            return AcyclicityEvidence(cycle=(src, src))
    return _topological_evidence(
        automaton.n_states, [(src, dst) for src, _, dst in automaton.transitions]
    )


def check_acyclic_loop(automaton: WordAutomaton) -> AcyclicityEvidence:
    """Acyclicity evidence for loop automata: at most one self-loop per state
    and no other cycles."""
    loop_count: Dict[int, int] = {}
    for q, _ in automaton.loops:
        loop_count[q] = loop_count.get(q, 0) + 1
    non_loop_edges = []
    for src, _, dst in automaton.transitions:
        if src == dst:
            loop_count[src] = loop_count.get(src, 0) + 1
        else:
            non_loop_edges.append((src, dst))
    for q, count in loop_count.items():
        if count > 1:
            raise AutomatonError(f"state {q} carries {count} self-loops; at most one is allowed")
    evidence = _topological_evidence(automaton.n_states, non_loop_edges)
    if not evidence.acyclic:
        raise AutomatonError(f"non-loop cycle through states {evidence.cycle}")
    return evidence


def max_letters_to_final(automaton: WordAutomaton, order: Sequence[int]) -> List[int]:
    """Per state, the largest total label length over paths to a final state;
    -1 where no final is reachable.  One backward pass in topological order."""
    best = [-1] * automaton.n_states
    for q in automaton.finals:
        best[q] = 0
    outgoing: Dict[int, List[Tuple[int, int]]] = {q: [] for q in range(automaton.n_states)}
    for src, label, dst in automaton.transitions:
        outgoing[src].append((len(label), dst))
    for q in reversed(list(order)):
        for length, dst in outgoing[q]:
            if best[dst] >= 0 and length + best[dst] > best[q]:
                best[q] = length + best[dst]
    return best


def _abelian_windows(
    automaton: WordAutomaton, alpha: IndependenceAlphabet, order: Sequence[int]
) -> Tuple[List[Optional[List[int]]], List[Optional[List[int]]], Dict[str, int]]:
    """Per state, a coordinatewise interval hull of the achievable suffix
    letter-count offsets (exponent sums).  A prefix can only extend to a
    trivial word if the negated exponent sums of its reduced form fall in the
    hull, which prunes unbalanced branches immediately."""
    gen_index = {g: i for i, g in enumerate(alpha.generators)}
    m = len(gen_index)

    def vector(word: GroupWord) -> List[int]:
        vec = [0] * m
        for gen, sign in word:
            vec[gen_index[gen]] += sign
        return vec

    lo: List[Optional[List[int]]] = [None] * automaton.n_states
    hi: List[Optional[List[int]]] = [None] * automaton.n_states
    for q in automaton.finals:
        lo[q] = [0] * m
        hi[q] = [0] * m
    outgoing: Dict[int, List[Tuple[List[int], int]]] = {q: [] for q in range(automaton.n_states)}
    for src, label, dst in automaton.transitions:
        outgoing[src].append((vector(label), dst))
    for q in reversed(list(order)):
        for vec, dst in outgoing[q]:
            if lo[dst] is None:
                continue
            cand_lo = [a + b for a, b in zip(vec, lo[dst])]
            cand_hi = [a + b for a, b in zip(vec, hi[dst])]
            if lo[q] is None:
                lo[q] = cand_lo
                hi[q] = cand_hi
            else:
                lo[q] = [min(a, b) for a, b in zip(lo[q], cand_lo)]
                hi[q] = [max(a, b) for a, b in zip(hi[q], cand_hi)]
    return lo, hi, gen_index


def membership_one(
    automaton: WordAutomaton,
    alpha: IndependenceAlphabet,
    tree: Optional[DecompositionNode] = None,
    node_cap: int = DEFAULT_NODE_CAP,
    order: Optional[Sequence[int]] = None,
    prune: bool = True,
) -> Optional[List[int]]:
    """Search for a path whose label concatenation is trivial in the group.

    Returns the witness as a list of transition indices, or None.  The search
    runs forward in topological order over pairs (state, canonical reduced
    prefix), memoized on the canonical form; branches whose geodesic prefix is
    longer than every remaining suffix are pruned (a geodesic of length L
    needs at least L further letters to cancel).  ``order`` lets callers
    supply an alternative topological order; ``tree``, when given, is used to
    double-check the witness with the stacked word problem.
    """
    evidence = check_acyclic(automaton)
    if not evidence.acyclic:
        raise AutomatonError(f"automaton has a cycle through {evidence.cycle}")
    topo = tuple(order) if order is not None else evidence.order
    if order is not None:
        position = {q: i for i, q in enumerate(topo)}
        if sorted(position) != list(range(automaton.n_states)):
            raise AutomatonError("supplied order is not a permutation of the states")
        for src, _, dst in automaton.transitions:
            if position[src] >= position[dst]:
                raise AutomatonError("supplied order is not topological")
    suffix = max_letters_to_final(automaton, topo)
    win_lo, win_hi, gen_index = _abelian_windows(automaton, alpha, topo)

    def window_ok(state: int, buf: List) -> bool:
        lo, hi = win_lo[state], win_hi[state]
        if lo is None:
            return False
        sums = [0] * len(gen_index)
        for gen, sign in buf:
            sums[gen_index[gen]] += sign
        return all(l <= -s <= h for s, l, h in zip(sums, lo, hi))

    outgoing: Dict[int, List[Tuple[int, GroupWord, int]]] = {q: [] for q in range(automaton.n_states)}
    for idx, (src, label, dst) in enumerate(automaton.transitions):
        outgoing[src].append((idx, label, dst))

    parents: Dict[Tuple[int, GroupWord], Optional[Tuple[int, GroupWord, int]]] = {}
    forms: Dict[int, List[GroupWord]] = {q: [] for q in range(automaton.n_states)}

    def witness(state: int, form: GroupWord) -> List[int]:
        path: List[int] = []
        key = (state, form)
        while parents[key] is not None:
            prev_state, prev_form, idx = parents[key]
            path.append(idx)
            key = (prev_state, prev_form)
        path.reverse()
        if tree is not None:
            label = concat(*(automaton.transitions[i][1] for i in path))
            assert is_identity_stacked(label, tree)
        return path

    start = (automaton.initial, ())
    if suffix[automaton.initial] < 0:
        return None
    if prune and not window_ok(automaton.initial, []):
        return None
    parents[start] = None
    forms[automaton.initial].append(())
    if automaton.initial in automaton.finals:
        return witness(automaton.initial, ())
    inserted = 1
    for q in topo:
        for form in forms[q]:
            for idx, label, dst in outgoing[q]:
                if suffix[dst] < 0:
                    continue
                buf = list(form)
                for letter in label:
                    append_reduced(buf, letter, alpha)
                if prune and (len(buf) > suffix[dst] or not window_ok(dst, buf)):
                    continue
                nf = canonical_order(buf, alpha)
                key = (dst, nf)
                if key in parents:
                    continue
                parents[key] = (q, form, idx)
                forms[dst].append(nf)
                inserted += 1
                if inserted > node_cap:
                    raise ResourceExhaustedError(
                        f"membership search exceeded {node_cap} memoized states"
                    )
                if dst in automaton.finals and not nf:
                    return witness(dst, nf)
    return None


def membership_one_brute(
    automaton: WordAutomaton,
    alpha: IndependenceAlphabet,
    path_cap: int = DEFAULT_PATH_CAP,
) -> bool:
    """Enumerate every path and reduce its full label (oracle for
    membership_one).  Raises ResourceExhaustedError past the path cap."""
    evidence = check_acyclic(automaton)
    if not evidence.acyclic:
        raise AutomatonError(f"automaton has a cycle through {evidence.cycle}")
    outgoing: Dict[int, List[Tuple[GroupWord, int]]] = {q: [] for q in range(automaton.n_states)}
    for src, label, dst in automaton.transitions:
        outgoing[src].append((label, dst))
    count = 0

    def dfs(state: int, prefix: GroupWord) -> bool:
        nonlocal count
        count += 1
        if count > path_cap:
            raise ResourceExhaustedError(f"path enumeration exceeded {path_cap} nodes")
        if state in automaton.finals and is_identity(prefix, alpha):
            return True
        for label, dst in outgoing[state]:
            if dfs(dst, concat(prefix, label)):
                return True
        return False

    return dfs(automaton.initial, ())


def unroll_loops(automaton: WordAutomaton, budget: int) -> WordAutomaton:
    """Acyclic automaton accepting exactly the words of the loop automaton
    that use each self-loop at most ``budget`` times.

    Loop states become budget+1 copies chained by the loop label; incoming
    transitions enter copy 0 and outgoing transitions leave every copy.
    """
    if budget < 0:
        raise AutomatonError("loop budget must be nonnegative")
    check_acyclic_loop(automaton)
    loops: Dict[int, GroupWord] = {}
    plain: List[Transition] = []
    for src, label, dst in automaton.transitions:
        if src == dst:
            loops[src] = label
        else:
            plain.append((src, label, dst))
    for q, label in automaton.loops:
        loops[q] = label

    index: Dict[Tuple[int, int], int] = {}
    for q in range(automaton.n_states):
        copies = budget + 1 if q in loops else 1
        for j in range(copies):
            index[(q, j)] = len(index)

    transitions: List[Transition] = []
    for q, label in sorted(loops.items()):
        for j in range(budget):
            transitions.append((index[(q, j)], label, index[(q, j + 1)]))
    for src, label, dst in plain:
        copies = budget + 1 if src in loops else 1
        for j in range(copies):
            transitions.append((index[(src, j)], label, index[(dst, 0)]))

    finals = set()
    for q in automaton.finals:
        copies = budget + 1 if q in loops else 1
        finals.update(index[(q, j)] for j in range(copies))

    return WordAutomaton(
        n_states=len(index),
        initial=index[(automaton.initial, 0)],
        finals=frozenset(finals),
        transitions=tuple(transitions),
        loops=(),
    )
