import itertools

import pytest

from graphknap import (
    BoundError,
    LinearSet,
    SemilinearSet,
    decompose_hyperplane_solutions,
    decompose_onedim_bounded,
    intersect_linear_with_hyperplane,
    magnitude,
    members_up_to,
    minimal_solutions_homogeneous,
    minimal_solutions_inhom,
    semilinear_member,
)
from graphknap.semilinear import dot, l1_norm


def test_minimal_homogeneous_examples():
    assert minimal_solutions_homogeneous((1, -1)) == [(1, 1)]
    assert minimal_solutions_homogeneous((1, 1)) == []
    assert minimal_solutions_homogeneous((2, -3)) == [(3, 2)]


def test_minimal_inhom_examples():
    assert minimal_solutions_inhom((1, -2), 1) == [(1, 0)]
    assert minimal_solutions_inhom((1,), 0) == [(0,)]
    assert minimal_solutions_inhom((2,), 1) == []


def _solutions_grid(u, b, radius):
    k = len(u)
    return {
        x
        for x in itertools.product(range(radius + 1), repeat=k)
        if dot(u, x) == b
    }


def _enumerate_all_minimal(u, b):
    """Independent oracle: sweep the l1 ball up to the Pottier cap and filter."""
    k = len(u)
    cap = 1 + l1_norm(u) + abs(b)
    sols = []

    def walk(prefix, remaining):
        if len(prefix) == k:
            x = tuple(prefix)
            if dot(u, x) == b and any(x):
                sols.append(x)
            return
        for c in range(remaining + 1):
            walk(prefix + [c], remaining - c)

    walk([], cap)
    if b == 0:
        candidates = sols
    else:
        candidates = sols
    return sorted(
        x
        for x in candidates
        if not any(y != x and all(a <= c for a, c in zip(y, x)) for y in candidates)
    )


@pytest.mark.parametrize("u", [(1, -1), (2, -3), (3, 2), (-2, 0), (2, -2, 1)])
@pytest.mark.parametrize("b", [0, 1, 3, -2])
def test_minimal_solutions_match_bounded_enumeration(u, b):
    if b == 0:
        assert minimal_solutions_homogeneous(u) == _enumerate_all_minimal(u, 0)
    else:
        got = minimal_solutions_inhom(u, b)
        assert got == _enumerate_all_minimal(u, b)
    for x in minimal_solutions_homogeneous(u):
        assert l1_norm(x) <= 1 + l1_norm(u)
    for x in minimal_solutions_inhom(u, b):
        assert l1_norm(x) <= 1 + l1_norm(u) + abs(b)


def test_hyperplane_decomposition_examples():
    s = decompose_hyperplane_solutions((1, -1), 0)
    assert [c.base for c in s.components] == [(0, 0)]
    assert s.components[0].periods == ((1, 1),)

    s = decompose_hyperplane_solutions((1, -1), 1)
    assert [c.base for c in s.components] == [(1, 0)]
    assert s.components[0].periods == ((1, 1),)

    s = decompose_hyperplane_solutions((1, 1), 2)
    assert sorted(c.base for c in s.components) == [(0, 2), (1, 1), (2, 0)]
    assert all(not c.periods for c in s.components)


@pytest.mark.parametrize("u,b", [((1, -1), 0), ((1, -1), 1), ((1, 1), 2), ((2, -3), 1)])
def test_hyperplane_decomposition_set_equality(u, b):
    s = decompose_hyperplane_solutions(u, b)
    assert members_up_to(s, 8) == _solutions_grid(u, b, 8)


def test_onedim_bounded_examples():
    s = decompose_onedim_bounded((1, -1), 0, 1)
    assert members_up_to(s, 6) == _solutions_grid((1, -1), 0, 6)
    assert magnitude(s) <= 1 + (1 + 2) * 1

    s = decompose_onedim_bounded((0,), 0, 0)
    assert [c.base for c in s.components] == [(0,)]
    assert s.components[0].periods == ((1,),)

    s = decompose_onedim_bounded((1, 1), 2, 2)
    assert sorted(c.base for c in s.components) == [(0, 2), (1, 1), (2, 0)]


def test_onedim_bounded_rejects_oversized_entries():
    with pytest.raises(BoundError):
        decompose_onedim_bounded((5,), 0, 2)
    with pytest.raises(BoundError):
        decompose_onedim_bounded((1,), 4, 2)


def test_onedim_bounded_l1_bounds():
    for u in itertools.product(range(-3, 4), repeat=2):
        for b in range(-3, 4):
            M = max(max(abs(c) for c in u), abs(b), 1)
            s = decompose_onedim_bounded(u, b, M)
            limit = 1 + (M + 2) * M
            for comp in s.components:
                assert l1_norm(comp.base) <= limit
                for p in comp.periods:
                    assert l1_norm(p) <= limit


def test_intersect_linear_examples():
    free = LinearSet.make((0, 0), [(1, 0), (0, 1)])
    s = intersect_linear_with_hyperplane(free, (1, 1), 2, 2)
    assert members_up_to(s, 8) == {(0, 2), (1, 1), (2, 0)}
    assert magnitude(s) == 2

    point = LinearSet.make((1, 1), [])
    s = intersect_linear_with_hyperplane(point, (1, -1), 0, 1)
    assert members_up_to(s, 4) == {(1, 1)}

    even = LinearSet.make((0, 0), [(2, 0)])
    s = intersect_linear_with_hyperplane(even, (1, 0), 3, 3)
    assert s.is_empty()


def test_intersect_linear_magnitude_bound():
    L = LinearSet.make((2, 1), [(1, 2), (3, 0)])
    M = L.magnitude()
    k = 2
    for u in [(1, -1), (2, 1), (0, -2)]:
        for b in [-2, 0, 3]:
            m = max(max(abs(c) for c in u), abs(b), 1)
            s = intersect_linear_with_hyperplane(L, u, b, m)
            shift = m + k * m * M
            assert magnitude(s) <= 2 * M + M * shift * (shift + 2)
            grid = {
                x
                for x in members_up_to(SemilinearSet((L,)), 12)
                if dot(u, x) == b
            }
            assert members_up_to(s, 12) == grid


def test_semilinear_member():
    s = SemilinearSet((LinearSet.make((0, 0), [(1, 1)]),))
    assert semilinear_member(s, (3, 3))
    assert not semilinear_member(s, (2, 3))


def test_zero_period_normalized_away():
    withzero = LinearSet.make((1, 0), [(0, 0), (1, 1)])
    assert withzero.periods == ((1, 1),)
    s = SemilinearSet((withzero,))
    assert semilinear_member(s, (2, 1))
    assert not semilinear_member(s, (1, 1))


def test_magnitude_examples():
    assert magnitude(SemilinearSet((LinearSet.make((0, 0), [(1, 1)]),))) == 1
    assert magnitude(SemilinearSet((LinearSet.make((2, 0), [(0, 3)]),))) == 3
    assert magnitude(SemilinearSet.empty()) == 0


def test_onedim_and_direct_decompositions_agree():
    # the bounded detour and the direct route represent the same set
    for u in itertools.product(range(-3, 4), repeat=2):
        for b in (-2, 0, 1, 3):
            M = max(max(abs(c) for c in u), abs(b), 1)
            via_detour = decompose_onedim_bounded(u, b, M)
            direct = decompose_hyperplane_solutions(u, b)
            assert members_up_to(via_detour, 7) == members_up_to(direct, 7)
