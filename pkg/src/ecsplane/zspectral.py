"""Search for Z-spectral systems (m, k, E, J) and an independent verifier.

The relations E(i) + E(i') = -1 for i + i' = 2m + 1 and E(i) - E(i+1) = k for
odd i link the indices into components; within a component every value is
determined by one of them. The component of index 1 is pinned by
k + 1 = 2 E(1). J flips along the same edges, so it is one bit per component.
"""

import itertools
from dataclasses import dataclass

from .errors import NoSystemFound


@dataclass(frozen=True)
class ZSpectralSystem:
    m: int
    k: int
    E: tuple
    J: tuple

    @property
    def selector(self):
        """S_1 = J^-1(1), 1-based."""
        return tuple(i + 1 for i, j in enumerate(self.J) if j == 1)

    @property
    def Y(self):
        return sorted({-1} | {self.E[i - 1] for i in self.selector})

    def to_json(self):
        return {"m": self.m, "k": self.k, "E": list(self.E), "J": list(self.J)}


def _edges(m, k):
    """(i, i', kind) with 0-based indices; kind 'sum' means E(i) + E(i') = -1, 'diff' means E(i) - E(i') = k."""
    out = []
    for i in range(m):
        out.append((i, 2 * m - 1 - i, "sum"))
    for i in range(0, 2 * m, 2):
        out.append((i, i + 1, "diff"))
    return out


def _components(m, k):
    """Components as (root, maps, fixed): E(j) = s_j E(root) + c_j for j in maps.

    A cycle mixing both kinds of relation pins E(root) to ``fixed``; a cycle
    that contradicts itself makes the whole system inconsistent (None).
    """
    n = 2 * m
    adj = {i: [] for i in range(n)}
    for i, j, kind in _edges(m, k):
        if kind == "sum":
            # E(j) = -1 - E(i)
            adj[i].append((j, -1, -1))
            adj[j].append((i, -1, -1))
        else:
            # E(j) = E(i) - k and E(i) = E(j) + k
            adj[i].append((j, 1, -k))
            adj[j].append((i, 1, k))
    seen = set()
    comps = []
    for root in range(n):
        if root in seen:
            continue
        maps = {root: (1, 0)}
        fixed = None
        stack = [root]
        while stack:
            a = stack.pop()
            sa, ca = maps[a]
            for b, s, c in adj[a]:
                new = (s * sa, s * ca + c)
                if b not in maps:
                    maps[b] = new
                    stack.append(b)
                    continue
                (s1, c1), (s2, c2) = maps[b], new
                if s1 == s2:
                    if c1 != c2:
                        return None
                    continue
                num, den = c2 - c1, s1 - s2
                if num % den:
                    return None
                x = num // den
                if fixed is not None and fixed != x:
                    return None
                fixed = x
        seen.update(maps)
        comps.append((root, maps, fixed))
    return comps


def search_zspectral(m, k, max_bound=None):
    """First Z-spectral system for (m, k).

    Free values are enumerated in growing boxes |x| <= B; inside a box the
    candidates are compared lexicographically by the tuple (E, J).
    """
    if m < 2 or k < 2:
        raise NoSystemFound("need m >= 2 and k >= 2")
    if (k + 1) % 2:
        raise NoSystemFound(f"k + 1 = 2 E(1) has no integer solution for k = {k}")
    comps = _components(m, k)
    if comps is None:
        raise NoSystemFound("the defining relations are inconsistent")
    e1 = (k + 1) // 2
    pinned = comps[0]  # index 1 is the root of its component
    if pinned[2] is not None and pinned[2] != e1:
        raise NoSystemFound("the relations pin E(1) to a value other than (k + 1) / 2")
    comps = [(pinned[0], pinned[1], e1)] + comps[1:]
    free = [c for c in comps if c[2] is None]
    max_bound = max_bound if max_bound is not None else 4 * (k + m)
    for bound in range(0, max_bound + 1):
        found = []
        for xs in itertools.product(range(-bound, bound + 1), repeat=len(free)):
            if max((abs(x) for x in xs), default=0) != bound:
                continue
            E = [None] * (2 * m)
            values = iter(xs)
            for root, maps, fixed in comps:
                x = fixed if fixed is not None else next(values)
                for j, (s, c) in maps.items():
                    E[j] = s * x + c
            if -1 in E or len(set(E)) != len(E):
                continue
            for J in _j_assignments(m, k, comps):
                sys = ZSpectralSystem(m, k, tuple(E), tuple(J))
                if _y_symmetric(sys):
                    found.append(sys)
        if found:
            return min(found, key=lambda s: (s.E, s.J))
    raise NoSystemFound(f"no Z-spectral system with free values up to {max_bound}")


def _j_assignments(m, k, comps):
    for bits in itertools.product((0, 1), repeat=len(comps)):
        J = _fill_j(m, k, comps, bits)
        if J is not None:
            yield J


def _fill_j(m, k, comps, bits):
    n = 2 * m
    adj = {i: [] for i in range(n)}
    for i, j, _ in _edges(m, k):
        adj[i].append(j)
        adj[j].append(i)
    J = [None] * n
    for (root, _, _), b in zip(comps, bits):
        J[root] = b
        stack = [root]
        while stack:
            a = stack.pop()
            for c in adj[a]:
                if J[c] is None:
                    J[c] = 1 - J[a]
                    stack.append(c)
                elif J[c] == J[a]:
                    return None
    return J


def _y_symmetric(sys):
    Y = set(sys.Y)
    return all(-y in Y for y in Y)


def check_zspectral(sys):
    """Re-check every defining condition directly; returns {name: bool}."""
    m, k, E, J = sys.m, sys.k, sys.E, sys.J
    n = 2 * m
    out = {}
    out["shape"] = len(E) == n and len(J) == n and all(j in (0, 1) for j in J)
    out["E_injective"] = len(set(E)) == n
    out["E_avoids_minus_one"] = -1 not in E
    out["i"] = k + 1 == 2 * E[0]
    out["ii"] = all(
        E[i - 1] + E[ip - 1] == -1 and J[i - 1] + J[ip - 1] == 1
        for i in range(1, n + 1)
        for ip in range(1, n + 1)
        if i + ip == n + 1
    )
    out["iii"] = all(
        E[i - 1] - E[i] == k and J[i - 1] + J[i] == 1 for i in range(1, n + 1) if (i + 1) % 2 == 0 and i + 1 <= n
    )
    Y = {-1} | {E[i] for i in range(n) if J[i] == 1}
    out["iv"] = all(-y in Y for y in Y)
    S1 = {i for i in range(1, n + 1) if J[i - 1] == 1}
    fam_sum = [{i, n + 1 - i} for i in range(1, m + 1)]
    fam_diff = [{i, i + 1} for i in range(1, n, 2)]
    out["selector_sum"] = all(len(S1 & pair) == 1 for pair in fam_sum)
    out["selector_diff"] = all(len(S1 & pair) == 1 for pair in fam_diff)
    return out
