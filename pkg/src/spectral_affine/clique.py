"""Largest mutually orthogonal frequency sets inside an integer box.

Vertices are the nonzero integer points ``v`` of ``[-R, R]^2`` with ``v`` in
the zero set of the transform (so ``v`` is orthogonal to ``0``); ``u ~ v`` when
``u - v`` is also a zero.  A maximum clique plus the origin is a largest
orthogonal set containing ``0``.  The search is a bitset branch and bound with
greedy-coloring bounds.
"""

from __future__ import annotations

from .digits import DigitSet4
from .errors import ResourceCap
from .zeros import _scanner

RADIUS_CAP = 30
KMAX_CAP = 64


def compatibility_graph(m, d: DigitSet4, radius: int):
    """Vertices (sorted) and adjacency bitsets of the orthogonality graph."""
    sc = _scanner(m, d)
    memo: dict = {}

    def is_zero(x):
        # the zero set is symmetric under x -> -x
        key = max(x, (-x[0], -x[1]))
        if key not in memo:
            memo[key] = key in sc
        return memo[key]

    pts = [(i, j) for i in range(-radius, radius + 1) for j in range(-radius, radius + 1) if (i, j) != (0, 0)]
    verts = [v for v in pts if is_zero(v)]
    adj = [0] * len(verts)
    for a in range(len(verts)):
        for b in range(a + 1, len(verts)):
            u, v = verts[a], verts[b]
            if is_zero((u[0] - v[0], u[1] - v[1])):
                adj[a] |= 1 << b
                adj[b] |= 1 << a
    return verts, adj


def _max_clique(adj: list[int], limit: int) -> list[int]:
    n = len(adj)
    best: list[int] = []

    # greedy seed: repeatedly take the first remaining vertex
    cand, seed = (1 << n) - 1, []
    while cand and len(seed) < limit:
        v = (cand & -cand).bit_length() - 1
        seed.append(v)
        cand &= adj[v]
    best = seed

    def color_sort(p: int):
        order, colors, k, u = [], [], 0, p
        while u:
            k += 1
            q = u
            while q:
                low = q & -q
                v = low.bit_length() - 1
                u &= ~low
                q &= ~low & ~adj[v]
                order.append(v)
                colors.append(k)
        return order, colors

    def expand(p: int, current: list[int]) -> bool:
        nonlocal best
        order, colors = color_sort(p)
        for idx in range(len(order) - 1, -1, -1):
            if len(current) + colors[idx] <= len(best):
                return False
            v = order[idx]
            current.append(v)
            np_ = p & adj[v]
            if np_ and len(current) < limit:
                if expand(np_, current):
                    return True
            elif len(current) > len(best):
                best = list(current)
                if len(best) >= limit:
                    return True
            current.pop()
            p &= ~(1 << v)
        return False

    if len(best) < limit:
        expand((1 << n) - 1, [])
    return best


def orthogonal_clique_search(m, d: DigitSet4, radius: int, kmax: int = KMAX_CAP) -> list[tuple[int, int]]:
    """A maximum orthogonal set in ``Z^2 cap [-radius, radius]^2`` containing 0.

    ``kmax`` caps the size of the returned set; the result is exact whenever
    it is smaller than ``kmax``.  Vertices are ranked by degree (ties broken
    lexicographically), so the output is deterministic; it is returned sorted.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if radius > RADIUS_CAP or kmax > KMAX_CAP:
        raise ResourceCap(f"radius <= {RADIUS_CAP} and kmax <= {KMAX_CAP} required")
    if kmax < 1:
        raise ValueError("kmax must be positive")
    verts, adj = compatibility_graph(m, d, radius)
    rank = sorted(range(len(verts)), key=lambda i: (-bin(adj[i]).count("1"), verts[i]))
    pos = {old: new for new, old in enumerate(rank)}
    radj = []
    for old in rank:
        bits, a = 0, adj[old]
        while a:
            low = a & -a
            bits |= 1 << pos[low.bit_length() - 1]
            a &= ~low
        radj.append(bits)
    clique = _max_clique(radj, kmax - 1)
    return sorted([(0, 0)] + [verts[rank[i]] for i in clique])
