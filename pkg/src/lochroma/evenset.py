"""Even independent set extraction for the high-degree regime.

Two complementary constructions, both verified before returning:

* Link seeding: in a linear hypergraph the edges through one vertex touch
  pairwise-disjoint pairs, so seeding with all of a hub's pairs makes every
  edge through the hub intersect the set exactly twice; a repair loop then
  removes whole pairs until no other edge is met an odd number of times.
* Parity kernel: a set meets every edge 0 or 2 times exactly when its
  indicator lies in the GF(2) kernel of the edge incidence matrix, because a
  3-element edge has even intersection iff the three indicator bits XOR to
  zero.  Any 2-color LO coloring's base class is such a vector, so on promise
  instances the kernel is nontrivial; a hill climb over the kernel basis
  looks for a heavy vector.

The repair loop alone can collapse to the empty set on instances whose hub
links are heavily crossed; the kernel phase then still produces a nonempty
set whenever one exists.
"""

from __future__ import annotations

from .hypercore import Hypergraph, check_even_is, is_linear
from .oracle import brute_max_even_is


def _repair(H: Hypergraph, pairs) -> set[int]:
    """Remove whole pairs until every edge is evenly intersected.

    Pair choice: fix the most currently-violated edges, ties broken by the
    smallest vertex id in the pair.  Each step removes one pair, so the loop
    always terminates (possibly at the empty set).
    """
    pair_sets = [set(p) for p in pairs]
    S: set[int] = set()
    for p in pair_sets:
        S |= p
    while True:
        violated = [e for e in H.edges if len(S.intersection(e)) % 2 == 1]
        if not violated:
            return S
        best_idx = None
        best_key = None
        for idx, p in enumerate(pair_sets):
            if not p or not p <= S:
                continue
            if not any(p.intersection(e) for e in violated):
                continue
            trial = S - p
            fixed = sum(1 for e in violated if len(trial.intersection(e)) % 2 == 0)
            key = (-fixed, min(p))
            if best_key is None or key < best_key:
                best_key, best_idx = key, idx
        if best_idx is None:
            return set()
        S -= pair_sets[best_idx]
        pair_sets[best_idx] = set()


def _link_phase(H: Hypergraph, max_seeds: int) -> set[int]:
    degrees = H.degrees()
    seeds = sorted(
        (v for v in range(H.n) if degrees[v] > 0),
        key=lambda v: (-degrees[v], v),
    )[:max_seeds]
    best: set[int] = set()
    for v in seeds:
        pairs = [
            tuple(sorted(u for u in e if u != v)) for e in H.edges if v in e
        ]
        candidate = _repair(H, pairs)
        if len(candidate) > len(best):
            best = candidate
    return best


def _solve_kernel(rows: list[int], n: int) -> list[int]:
    """GF(2) kernel basis, rows as bitmasks, fully reduced elimination."""
    echelon: list[tuple[int, int]] = []  # (pivot column, row); RREF
    for row in rows:
        r = row
        for lead, er in echelon:
            if (r >> lead) & 1:
                r ^= er
        if r:
            p = r.bit_length() - 1
            echelon = [
                (lead, er ^ r if (er >> p) & 1 else er) for lead, er in echelon
            ]
            echelon.append((p, r))
    pivot_cols = {lead for lead, _ in echelon}
    basis = []
    for free in range(n):
        if free in pivot_cols:
            continue
        vec = 1 << free
        # In reduced form each pivot bit appears in exactly one row, so the
        # per-row parity fixes are independent of each other.
        for lead, er in echelon:
            if bin(er & vec).count("1") % 2 == 1:
                vec ^= 1 << lead
        basis.append(vec)
    return basis


def _kernel_phase(H: Hypergraph) -> set[int]:
    """Heaviest kernel vector found by a deterministic XOR hill climb."""
    rows = [(1 << a) | (1 << b) | (1 << c) for a, b, c in H.edges]
    basis = _solve_kernel(rows, H.n)
    if not basis:
        return set()
    current = max(basis, key=lambda v: (bin(v).count("1"), -v))
    improved = True
    while improved:
        improved = False
        weight = bin(current).count("1")
        for b in basis:
            trial = current ^ b
            if bin(trial).count("1") > weight:
                current = trial
                improved = True
                weight = bin(current).count("1")
    return {v for v in range(H.n) if (current >> v) & 1}


def even_independent_set(
    H: Hypergraph,
    delta: float | None = None,
    *,
    max_seeds: int = 20,
) -> frozenset[int]:
    """Best even independent set found; nonempty whenever one exists.

    Requires a linear hypergraph.  Tries the hub-link repair construction,
    then the parity-kernel hill climb, then (for tiny instances) the exact
    search; the largest result wins with earlier phases preferred on ties.
    """
    if not is_linear(H):
        raise ValueError("even independent set extraction requires a linear hypergraph")
    if H.m == 0:
        return frozenset()
    best = _link_phase(H, max_seeds)
    kernel = _kernel_phase(H)
    if len(kernel) > len(best):
        best = kernel
    if H.n <= 16:
        exact = set(brute_max_even_is(H))
        if len(exact) > len(best):
            best = exact
    assert check_even_is(H, best)
    return frozenset(best)


def even_is_quality(H: Hypergraph, S, delta: float) -> float:
    """|S| / sqrt(|V| * Delta), the empirical quality ratio."""
    S = frozenset(S)
    if not check_even_is(H, S):
        raise ValueError("set fails the even intersection property")
    denom = (H.n * float(delta)) ** 0.5
    if denom == 0.0:
        return 0.0 if not S else float("inf")
    return len(S) / denom
