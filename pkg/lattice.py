"""
Lattices as subgroups of Z_N^2, their fundamental domains, volumes and
adjoint (commutant) lattices.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from errors import LatticeError
from phase_space import PhasePoint
from unified_logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class Lattice:
    """
    A subgroup of Z_N^2. `elements` is the sorted tuple of all members;
    equality ignores which generators were used.
    """
    n: int
    elements: Tuple[PhasePoint, ...]
    generators: Tuple[PhasePoint, ...] = field(compare=False)

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def volume(self) -> Fraction:
        """s(L) = N^2 / |L|; equals a*b for a separable lattice aZ x bZ."""
        return Fraction(self.n * self.n, self.size)

    @cached_property
    def points(self) -> np.ndarray:
        """Elements as an (|L|, 2) integer array, same order as `elements`."""
        return np.array(self.elements, dtype=int).reshape(-1, 2)

    @cached_property
    def _index(self) -> Dict[PhasePoint, int]:
        return {z: i for i, z in enumerate(self.elements)}

    def contains(self, z) -> bool:
        return PhasePoint(*z).canonical(self.n) in self._index

    def index_of(self, z) -> int:
        key = PhasePoint(*z).canonical(self.n)
        if key not in self._index:
            raise LatticeError(f"{tuple(key)} is not an element of the lattice")
        return self._index[key]

    def is_separable(self) -> Optional[Tuple[int, int]]:
        """Returns (a, b) when the lattice equals aZ_N x bZ_N, otherwise None."""
        n = self.n
        a = min((k for k, l in self.elements if l == 0 and k > 0), default=n)
        b = min((l for k, l in self.elements if k == 0 and l > 0), default=n)
        if self.size == (n // a) * (n // b) and all(k % a == 0 and l % b == 0 for k, l in self.elements):
            return a, b
        return None

    def __repr__(self):
        gens = ", ".join(f"({k},{l})" for k, l in self.generators)
        return f"Lattice(n={self.n}, generators=[{gens}], size={self.size})"


@dataclass(frozen=True)
class CellMap:
    """
    A fundamental domain Q of a lattice: owner[k, l] is the index of the
    lattice element whose cell lambda + Q contains (k, l).
    """
    lattice: Lattice
    offsets: Tuple[PhasePoint, ...]
    owner: np.ndarray = field(compare=False, repr=False)

    @property
    def cell_size(self) -> int:
        return len(self.offsets)

    def representative(self, z) -> PhasePoint:
        k, l = PhasePoint(*z).canonical(self.lattice.n)
        return self.lattice.elements[self.owner[k, l]]

    def cell(self, lam) -> List[PhasePoint]:
        n = self.lattice.n
        k0, l0 = PhasePoint(*lam).canonical(n)
        return [PhasePoint((k0 + q.k) % n, (l0 + q.l) % n) for q in self.offsets]


# --- CONSTRUCTION ---

def _encode(points: np.ndarray, n: int) -> np.ndarray:
    return points[:, 0] * n + points[:, 1]


def _closure(n: int, gens: Iterable) -> np.ndarray:
    """All distinct sums of multiples of the generators, sorted lexicographically."""
    members = np.zeros((1, 2), dtype=int)
    for k, l in gens:
        order = n // math.gcd(k % n, l % n, n)
        multiples = np.outer(np.arange(order), [k, l])
        members = (members[:, None, :] + multiples[None, :, :]).reshape(-1, 2) % n
        members = np.unique(members, axis=0)
    return members


def _make(n: int, members: np.ndarray, gens) -> Lattice:
    elements = tuple(PhasePoint(int(k), int(l)) for k, l in members)
    return Lattice(n=n, elements=elements, generators=tuple(PhasePoint(*g) for g in gens))


def _from_elements(n: int, members: np.ndarray) -> Lattice:
    """Builds a Lattice from a known subgroup, picking a small generator set greedily."""
    target = set(_encode(members, n).tolist())
    gens = []
    reached = {0}
    for k, l in members:
        if int(k * n + l) not in reached:
            gens.append((int(k), int(l)))
            reached = set(_encode(_closure(n, gens), n).tolist())
        if reached == target:
            break
    return _make(n, members, gens or [(0, 0)])


def separable_lattice(n: int, a: int, b: int) -> Lattice:
    """aZ_N x bZ_N; requires a | N and b | N."""
    if a < 1 or b < 1 or n % a or n % b:
        raise LatticeError(f"separable lattice needs a | N and b | N, got N={n}, a={a}, b={b}")
    return _make(n, _closure(n, [(a, 0), (0, b)]), [(a, 0), (0, b)])


def lattice_from_generators(n: int, gens) -> Lattice:
    """The subgroup of Z_N^2 generated by `gens`."""
    gens = [PhasePoint(*g).canonical(n) for g in gens]
    if not gens:
        raise LatticeError("at least one generator is required")
    return _make(n, _closure(n, gens), gens)


def full_lattice(n: int) -> Lattice:
    return separable_lattice(n, 1, 1)


def trivial_lattice(n: int) -> Lattice:
    return lattice_from_generators(n, [(0, 0)])


def adjoint_lattice(lat: Lattice) -> Lattice:
    """
    L° = {mu : pi(lambda) pi(mu) = pi(mu) pi(lambda) for all lambda in L},
    i.e. l1*k2 - l2*k1 == 0 mod N against every generator (k1, l1).
    """
    n = lat.n
    grid = np.array([(k, l) for k in range(n) for l in range(n)], dtype=int)
    mask = np.ones(len(grid), dtype=bool)
    for k1, l1 in lat.generators:
        mask &= (l1 * grid[:, 0] - grid[:, 1] * k1) % n == 0
    return _from_elements(n, grid[mask])


def fundamental_domain(lat: Lattice) -> CellMap:
    """
    Greedy coset representatives: the lexicographically smallest unassigned
    point starts a new offset q, and q + lambda is assigned to lambda. For a
    separable lattice this yields Q = {0..a-1} x {0..b-1}.
    """
    n = lat.n
    owner = np.full((n, n), -1, dtype=int)
    offsets = []
    pts = lat.points
    for k in range(n):
        for l in range(n):
            if owner[k, l] >= 0:
                continue
            offsets.append(PhasePoint(k, l))
            owner[(pts[:, 0] + k) % n, (pts[:, 1] + l) % n] = np.arange(lat.size)
    owner.setflags(write=False)
    return CellMap(lattice=lat, offsets=tuple(offsets), owner=owner)


def coset_representatives(fine: Lattice, coarse: Lattice) -> List[PhasePoint]:
    """Representatives mu of fine / coarse, so fine = union of (mu + coarse)."""
    if fine.n != coarse.n or not all(fine.contains(z) for z in coarse.elements):
        raise LatticeError("coarse lattice must be a subgroup of the fine lattice")
    n = fine.n
    covered = set()
    reps = []
    for mu in fine.elements:
        if mu in covered:
            continue
        reps.append(mu)
        covered.update(PhasePoint((mu.k + k) % n, (mu.l + l) % n) for k, l in coarse.elements)
    return reps


def enumerate_lattices(n: int) -> List[Lattice]:
    """
    Every subgroup of Z_N^2 exactly once, ordered by size and then elements.
    Subgroups of Z_N^2 are generated by at most two elements, so scanning
    generator pairs is exhaustive.
    """
    points = [(k, l) for k in range(n) for l in range(n)]
    found = {}
    i_idx, j_idx = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    i_idx, j_idx = i_idx.ravel(), j_idx.ravel()
    for a, g1 in enumerate(points):
        for g2 in points[a:]:
            combos = (np.outer(i_idx, g1) + np.outer(j_idx, g2)) % n
            members = np.unique(combos, axis=0)
            key = tuple(_encode(members, n).tolist())
            if key not in found:
                gens = [g for g in (g1, g2) if g != (0, 0)] or [(0, 0)]
                found[key] = _make(n, members, gens)
    lattices = sorted(found.values(), key=lambda lat: (lat.size, lat.elements))
    logger.info(f"Enumerated {len(lattices)} subgroups of Z_{n}^2")
    return lattices
