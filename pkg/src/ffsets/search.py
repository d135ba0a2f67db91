"""Empirical search for avoiding sets: subsets A of F_q^n whose difference
set meets a map image only at 0.

An instance is the Cayley graph on (F_q^n, +) whose connection set is the
symmetrised nonzero image (A - A is symmetric, so forbidding im(Phi) and
forbidding im(Phi) united with -im(Phi) constrain A identically); avoiding
sets are its independent sets.  The exhaustive search decomposes the graph
into connected components first.  Components are the cosets of the subgroup
generated by the connection set, so they are pairwise isomorphic translates:
the first coset is solved outright and the others only need to recover a
set of the known optimal size.

Within a component the search is depth-first branch and bound over bitsets,
branching on the lowest-index candidate with the include branch explored
first and pruning at current size + remaining candidates.  With that order,
the first optimal set encountered is the lexicographically least one, which
is what makes the returned set canonical.  Pinning the least vertex of each
coset is sound for the same reason: translating any maximum set moves it
onto one that contains the least vertex and is lexicographically no larger.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, ResourceGuardError
from .field import Field, point_add, point_neg, point_sub
from .rankbound import PointSet
from .witness import PolynomialMap

EXHAUSTIVE_CAP = 1 << 14
GREEDY_CAP = 1 << 24


def enumerate_image(phi: PolynomialMap) -> np.ndarray:
    """Sorted distinct point indices of {Phi(a) : a in F_q^m}."""
    return np.unique(phi.image_indices())


@dataclass(frozen=True, eq=False)
class AvoidanceInstance:
    """A forbidden-difference constraint on subsets of F_q^n."""
    field: Field
    n: int
    forbidden: np.ndarray            # sorted, nonzero, closed under negation
    phi: PolynomialMap | None = None
    image_size: int | None = None    # |im(Phi)| including 0, before symmetrising
    image_is_symmetric: bool | None = None

    @classmethod
    def from_map(cls, phi: PolynomialMap) -> "AvoidanceInstance":
        image = enumerate_image(phi)
        negs = np.sort(point_neg(phi.field, phi.n, image))
        sym = np.union1d(image, negs)
        forb = sym[sym != 0]
        return cls(field=phi.field, n=phi.n, forbidden=forb, phi=phi,
                   image_size=int(image.size),
                   image_is_symmetric=bool(np.array_equal(image, negs)))

    @classmethod
    def from_forbidden(cls, field: Field, n: int, points) -> "AvoidanceInstance":
        pts = np.unique(np.asarray(list(points), dtype=np.int64))
        if pts.size and (pts.min() < 0 or pts.max() >= field.q ** n):
            raise ContractError("forbidden point out of range")
        sym = np.union1d(pts, np.sort(point_neg(field, n, pts)))
        return cls(field=field, n=n, forbidden=sym[sym != 0])

    @property
    def symmetric_forbidden_size(self) -> int:
        return int(self.forbidden.size)


@dataclass
class SearchResult:
    best_set: PointSet
    best_size: int
    optimal: bool
    nodes_explored: int


def verify_avoiding(points: PointSet, inst: AvoidanceInstance) -> bool:
    """True iff no difference of two distinct points lies in the forbidden set."""
    if len(points) <= 1 or inst.forbidden.size == 0:
        return True
    space = inst.field.q ** inst.n
    if space > GREEDY_CAP:
        raise ResourceGuardError("verification table too large")
    bad = np.zeros(space, dtype=bool)
    bad[inst.forbidden] = True
    idx = np.asarray(points.indices, dtype=np.int64)
    diffs = point_sub(inst.field, inst.n, idx[:, None], idx[None, :])
    return not bool(bad[diffs].any())


def greedy_avoiding(inst: AvoidanceInstance, seed: int | None = None) -> SearchResult:
    """One greedy pass in index order (or a seeded shuffle), never optimal."""
    space = inst.field.q ** inst.n
    if space > GREEDY_CAP:
        raise ResourceGuardError(f"greedy needs q^n <= {GREEDY_CAP}")
    if seed is None:
        order = range(space)
    else:
        order = np.random.default_rng(seed).permutation(space)
    blocked = np.zeros(space, dtype=bool)
    chosen = []
    forb = inst.forbidden
    for v in order:
        if not blocked[v]:
            chosen.append(int(v))
            if forb.size:
                blocked[point_add(inst.field, inst.n, forb, int(v))] = True
    return SearchResult(
        best_set=PointSet(inst.field, inst.n, chosen),
        best_size=len(chosen), optimal=False, nodes_explored=space)


# ---------------------------------------------------------------------------
# Exact maximum by branch and bound.
# ---------------------------------------------------------------------------

ALPHA_PROOF_SLICE = 300_000  # node slice for the optimality-proof attempt


class _BudgetExhausted(Exception):
    pass


def _charge(nodes: int, budget: list[int], best_list) -> None:
    budget[0] -= nodes
    if budget[0] < 0:
        budget[0] = 0
        exc = _BudgetExhausted()
        exc.best_list = best_list
        raise exc


def _greedy_pass(nbr: list[int], order) -> list[int]:
    blocked = 0
    out = []
    for v in order:
        v = int(v)
        if not (blocked >> v) & 1:
            out.append(v)
            blocked |= nbr[v] | (1 << v)
    return out


def _best_greedy(nbr: list[int], restarts: int = 48) -> list[int]:
    """Multi-restart greedy independent set, deterministic via fixed seeds."""
    best = _greedy_pass(nbr, range(len(nbr)))
    rng = np.random.default_rng(0x5EED)
    for _ in range(restarts):
        got = _greedy_pass(nbr, rng.permutation(len(nbr)))
        if len(got) > len(best):
            best = got
    return best


def _clique_cover_order(cand: int, nbr: list[int]):
    """Greedy clique cover of the candidate set.

    Returns (vertices, labels) with labels nondecreasing.  An independent
    set inside the candidates takes at most one vertex per clique, so
    current size + label is an upper bound once every unprocessed vertex
    has a smaller or equal label.
    """
    commons: list[int] = []        # per clique: candidates adjacent to all members
    members: list[list[int]] = []
    rest = cand
    while rest:
        vbit = rest & -rest
        v = vbit.bit_length() - 1
        rest ^= vbit
        placed = False
        for i, com in enumerate(commons):
            if com & vbit:
                members[i].append(v)
                commons[i] = com & nbr[v]
                placed = True
                break
        if not placed:
            commons.append(nbr[v])
            members.append([v])
    order: list[int] = []
    labels: list[int] = []
    for i, ms in enumerate(members):
        for v in ms:
            order.append(v)
            labels.append(i + 1)
    return order, labels


def _alpha_component(nbr: list[int], budget: list[int]) -> int:
    """Exact independence number of one component, or _BudgetExhausted.

    Branch and bound in the style of bitset max-clique solvers: candidates
    are covered greedily by cliques and the cover size bounds any
    extension.  Seeded with multi-restart randomised greedy so pruning
    starts near the optimum.  Used as a bounded optimality-proof attempt;
    sparse triangle-free instances may well exceed any sensible budget.
    """
    size = len(nbr)
    full = (1 << size) - 1
    best_box = [len(_best_greedy(nbr))]

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 2 * size + 1000))

    def expand(r: int, csize: int) -> None:
        _charge(1, budget, None)
        order, labels = _clique_cover_order(r, nbr)
        for i in range(len(order) - 1, -1, -1):
            if csize + labels[i] <= best_box[0]:
                return
            v = order[i]
            vbit = 1 << v
            child = r & ~nbr[v] & ~vbit
            if child:
                expand(child, csize + 1)
            elif csize + 1 > best_box[0]:
                best_box[0] = csize + 1
            r &= ~vbit

    try:
        expand(full, 0)
    finally:
        sys.setrecursionlimit(limit)
    return best_box[0]


def _solve_component(nbr: list[int], budget: list[int], target: int | None):
    """Lexicographically least maximum independent set of one component.

    Depth-first over bitsets, branching on the lowest-index candidate with
    the include branch explored first and pruning at current size +
    remaining candidates: the first set of record size found in that order
    is the lexicographically least one of that size.  The least vertex is
    pinned, which is sound by translation invariance.  With target set
    (the known optimum), stops at the first set of that size; without it,
    runs to exhaustion, so a normal return proves optimality.  Raises
    _BudgetExhausted with the incumbent attached when the shared node
    budget runs out.
    """
    size = len(nbr)
    full = (1 << size) - 1
    if target is None:
        seed = _best_greedy(nbr)
        best = len(seed) - 1
        best_list: tuple[int, ...] = tuple(sorted(seed))
    else:
        best = target - 1
        best_list = (0,)
    nodes = 0
    stack = [((full & ~nbr[0]) & ~1, (0,))]
    while stack:
        cand, chosen = stack.pop()
        nodes += 1
        if nodes > budget[0]:
            budget[0] = 0
            exc = _BudgetExhausted()
            exc.best_list = best_list
            raise exc
        csize = len(chosen)
        if csize > best:
            best = csize
            best_list = chosen
            if target is not None and best >= target:
                break
        if not cand or csize + cand.bit_count() <= best:
            continue
        v = (cand & -cand).bit_length() - 1
        nb = nbr[v] & cand
        bit = 1 << v
        if nb == 0:
            # The lowest candidate is isolated among candidates: every
            # maximum completion contains it, so the include branch alone
            # preserves both size and lex order.
            stack.append((cand & ~bit, chosen + (v,)))
            continue
        stack.append((cand & ~bit, chosen))
        stack.append(((cand & ~nb) & ~bit, chosen + (v,)))
    budget[0] -= nodes
    return best_list


def _component_masks(field: Field, n: int, comp: np.ndarray,
                     forb: np.ndarray) -> list[int]:
    """Per-vertex neighbour bitsets in local (sorted) coordinates."""
    targets = point_add(field, n, comp[:, None], forb[None, :])
    local = np.searchsorted(comp, targets)
    size = len(comp)
    masks = []
    bits = np.zeros(size, dtype=np.uint8)
    for i in range(size):
        bits[:] = 0
        bits[local[i]] = 1
        bits[i] = 0
        masks.append(int.from_bytes(
            np.packbits(bits, bitorder="little").tobytes(), "little"))
    return masks


def _closure(field: Field, n: int, gens: list[int], space: int) -> np.ndarray:
    """Subgroup of (F_q^n, +) generated by gens, as sorted indices."""
    member = np.zeros(space, dtype=bool)
    member[0] = True
    frontier = np.array([0], dtype=np.int64)
    gen_arr = np.asarray(gens, dtype=np.int64)
    while frontier.size and gen_arr.size:
        nxt = np.unique(point_add(field, n, frontier[:, None],
                                  gen_arr[None, :]).reshape(-1))
        nxt = nxt[~member[nxt]]
        member[nxt] = True
        frontier = nxt
    return np.nonzero(member)[0]


def max_avoiding_exhaustive(inst: AvoidanceInstance,
                            budget: int = 100_000_000) -> SearchResult:
    """Maximum avoiding set by branch and bound over graph components.

    Components are the cosets of the subgroup generated by the connection
    set, hence pairwise isomorphic translates.  A bounded clique-cover
    branch and bound first tries to prove the optimal size on one
    component; when it succeeds, the canonical set of that size is
    recovered per component by a lex-first target search.  Otherwise the
    plain candidate-count search burns the remaining budget and the best
    assembly found is returned with optimal=False (sparse triangle-free
    instances can exceed any desk-scale budget).
    """
    space = inst.field.q ** inst.n
    if space > EXHAUSTIVE_CAP:
        raise ResourceGuardError(f"exhaustive search needs q^n <= {EXHAUSTIVE_CAP}")
    forb = inst.forbidden
    if forb.size == 0:
        return SearchResult(PointSet(inst.field, inst.n, range(space)),
                            space, True, 0)

    subgroup = _closure(inst.field, inst.n, [int(x) for x in forb], space)
    assigned = np.zeros(space, dtype=bool)
    components = []
    for v in range(space):
        if not assigned[v]:
            coset = np.sort(point_add(inst.field, inst.n, subgroup, v))
            assigned[coset] = True
            components.append(coset)

    chosen_global: list[int] = []
    remaining = [budget]
    alpha: int | None = None
    solved = 0
    try:
        for comp in components:
            masks = _component_masks(inst.field, inst.n, comp, forb)
            if alpha is None:
                slice_box = [min(ALPHA_PROOF_SLICE, remaining[0])]
                before = slice_box[0]
                try:
                    alpha = _alpha_component(masks, slice_box)
                except _BudgetExhausted:
                    alpha = None
                finally:
                    remaining[0] = max(remaining[0] - (before - slice_box[0]), 0)
            local = _solve_component(masks, remaining, alpha)
            if alpha is None:
                # The unbounded search returned normally, so it explored
                # everything: the size it found is the exact optimum.
                alpha = len(local)
            chosen_global.extend(int(comp[i]) for i in local)
            solved += 1
    except _BudgetExhausted as exc:
        if exc.best_list is not None and solved < len(components):
            comp = components[solved]
            masks = _component_masks(inst.field, inst.n, comp, forb)
            incumbent = list(exc.best_list)
            greedy = _best_greedy(masks)
            pick = incumbent if len(incumbent) >= len(greedy) else greedy
            chosen_global.extend(int(comp[i]) for i in pick)
            solved += 1
        for comp in components[solved:]:
            masks = _component_masks(inst.field, inst.n, comp, forb)
            chosen_global.extend(int(comp[i]) for i in _best_greedy(masks))
        return SearchResult(PointSet(inst.field, inst.n, chosen_global),
                            len(chosen_global), False, budget - remaining[0])

    return SearchResult(PointSet(inst.field, inst.n, chosen_global),
                        len(chosen_global), True, budget - remaining[0])
