"""Structural quantities of a network: stoichiometry, linkage classes, deficiency."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .network import Complex, Network

GUARANTEED = "guaranteed"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class StoichiometryDecomposition:
    s_basis: Tuple[Tuple[int, ...], ...]
    sperp_basis: Tuple[Tuple[int, ...], ...]
    dim_s: int


@dataclass(frozen=True)
class LinkageStructure:
    complexes: Tuple[Complex, ...]
    classes: Tuple[Tuple[int, ...], ...]
    class_reactions: Tuple[Tuple[int, ...], ...]
    reactant_index: Tuple[int, ...]
    product_index: Tuple[int, ...]


def stoichiometric_matrix(net: Network) -> np.ndarray:
    """Integer ``n x r`` matrix whose column ``i`` is product minus reactant."""
    gamma = np.zeros((net.n, net.r), dtype=np.int64)
    for i, rxn in enumerate(net.reactions):
        gamma[:, i] = rxn.vector
    return gamma


def reaction_vectors(net: Network, reactions: Optional[Sequence[int]] = None) -> List[List[int]]:
    idx = range(net.r) if reactions is None else reactions
    return [list(net.reactions[i].vector) for i in idx]


def stoichiometry_decomposition(net: Network) -> StoichiometryDecomposition:
    rows = reaction_vectors(net)
    s_basis, _ = linalg.echelon(rows)
    # S-perp is the null space of the matrix whose rows are reaction vectors
    sperp = linalg.nullspace(rows, net.n)
    return StoichiometryDecomposition(
        s_basis=tuple(tuple(v) for v in s_basis),
        sperp_basis=tuple(tuple(v) for v in sperp),
        dim_s=len(s_basis),
    )


def subspace_rank(net: Network, reactions: Optional[Sequence[int]] = None, rows: Optional[Sequence[int]] = None) -> int:
    """Rank of the stoichiometric matrix, optionally cut to some reactions and species rows."""
    vecs = reaction_vectors(net, reactions)
    if not vecs:
        return 0
    if rows is not None:
        if not rows:
            return 0
        vecs = [[v[j] for j in rows] for v in vecs]
    return linalg.rank(vecs)


def linkage_classes(net: Network) -> LinkageStructure:
    complexes: List[Complex] = []
    lookup: Dict[Complex, int] = {}

    def idx(c: Complex) -> int:
        if c not in lookup:
            lookup[c] = len(complexes)
            complexes.append(c)
        return lookup[c]

    reactant_index = []
    product_index = []
    for rxn in net.reactions:
        reactant_index.append(idx(rxn.reactant))
        product_index.append(idx(rxn.product))

    parent = list(range(len(complexes)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in zip(reactant_index, product_index):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    roots: Dict[int, List[int]] = {}
    for c in range(len(complexes)):
        roots.setdefault(find(c), []).append(c)
    classes = sorted(roots.values(), key=lambda members: members[0])
    class_of = {c: k for k, members in enumerate(classes) for c in members}
    class_reactions: List[List[int]] = [[] for _ in classes]
    for i, a in enumerate(reactant_index):
        class_reactions[class_of[a]].append(i)
    return LinkageStructure(
        complexes=tuple(complexes),
        classes=tuple(tuple(m) for m in classes),
        class_reactions=tuple(tuple(r) for r in class_reactions),
        reactant_index=tuple(reactant_index),
        product_index=tuple(product_index),
    )


def is_weakly_reversible(net: Network) -> bool:
    """Every reaction lies on a directed cycle of the complex graph."""
    links = linkage_classes(net)
    succ: Dict[int, set] = {}
    for a, b in zip(links.reactant_index, links.product_index):
        succ.setdefault(a, set()).add(b)
    for a, b in zip(links.reactant_index, links.product_index):
        seen = {b}
        queue = deque([b])
        while queue and a not in seen:
            for nxt in succ.get(queue.popleft(), ()):
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        if a not in seen:
            return False
    return True


def deficiency(net: Network) -> int:
    links = linkage_classes(net)
    return len(links.complexes) - len(links.classes) - subspace_rank(net)


def complex_balanced_eligibility(net: Network) -> str:
    """``"guaranteed"`` for weakly reversible deficiency-zero networks, else ``"unknown"``."""
    if is_weakly_reversible(net) and deficiency(net) == 0:
        return GUARANTEED
    return UNKNOWN


def positive_conservation_law(net: Network) -> Optional[List[int]]:
    """A strictly positive integer vector orthogonal to every reaction vector, if one exists."""
    basis = [list(v) for v in stoichiometry_decomposition(net).sperp_basis]
    return linalg.nonnegative_combination(basis, net.n, lower=1)
