"""Semilocking sets, boundary classification and persistence certificates.

Boundaries are classified by exact rank computations. The kinds, in the
order they are tried:

``empty``
    a non-negative conservation law supported inside W exists, so the
    boundary misses every compatibility class of a positive history;
``facet``
    dim(S restricted to W^c) == dim S - 1;
``vertex``
    dim(S restricted to W^c) == 0;
``independent_decomposable``
    W splits into non-interacting components, each empty/facet/vertex for
    the full network (parts are tested facet, then empty, then vertex);
``subsystem_decomposable``
    some grouping of whole linkage classes into subsystems gives parts
    W^(p) = W & species(M^(p)) that are empty/facet/vertex for their
    subsystem, with species(M^(p)) disjoint from W - W^(p) and no reaction
    mixing W-species from different parts;
``unknown``
    none of the above.

"S restricted to A" always means the intersection of S with the
coordinate subspace on A, never the projection.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from . import linalg
from .network import Network, NetworkError
from .structure import (
    GUARANTEED,
    complex_balanced_eligibility,
    deficiency,
    is_weakly_reversible,
    linkage_classes,
    positive_conservation_law,
    subspace_rank,
)

EMPTY = "empty"
FACET = "facet"
VERTEX = "vertex"
INDEPENDENT = "independent_decomposable"
SUBSYSTEM = "subsystem_decomposable"
UNKNOWN_KIND = "unknown"

PERSISTENT = "persistent"
INCONCLUSIVE = "inconclusive"

DEFAULT_SEMILOCKING_CAP = 20
DEFAULT_CLASS_CAP = 8

BOUNDEDNESS_CAVEAT = (
    "boundedness not established: no strictly positive conservation law exists, "
    "so the verdict is persistence for bounded trajectories"
)


class CapExceededError(NetworkError):
    """An exhaustive search would exceed its configured size cap."""


@dataclass(frozen=True)
class SemilockingSet:
    members: Tuple[int, ...]
    is_locking: bool

    @classmethod
    def from_subset(cls, net: Network, subset: Iterable) -> "SemilockingSet":
        w = _subset(net, subset)
        if not is_semilocking(net, w):
            raise NetworkError(f"{net.format_subset(w)} is not a semilocking set")
        return cls(w, is_locking(net, w))


@dataclass(frozen=True)
class DecompositionPart:
    members: Tuple[int, ...]
    reactions: Tuple[int, ...]
    part_kind: str
    restricted_dim: int
    subsystem_dim: int
    own_dim: int
    witness: Optional[Tuple[int, ...]] = None
    semilocking_in_subsystem: bool = True


@dataclass(frozen=True)
class DecompositionRecord:
    mode: str
    parts: Tuple[DecompositionPart, ...]
    idle_reactions: Tuple[int, ...] = ()


@dataclass(frozen=True)
class BoundaryClassification:
    kind: str
    evidence: Dict = field(default_factory=dict, compare=False)
    decomposition: Optional[DecompositionRecord] = None
    warnings: Tuple[str, ...] = ()


@dataclass(frozen=True)
class PersistenceCertificate:
    network_summary: Dict
    semilocking_verdicts: Tuple[Tuple[SemilockingSet, BoundaryClassification], ...]
    overall: str
    caveats: Tuple[str, ...]
    species: Tuple[str, ...] = ()


def _subset(net: Network, w) -> Tuple[int, ...]:
    if isinstance(w, SemilockingSet):
        return w.members
    return net.subset(w)


def _nonempty(net: Network, w) -> Tuple[int, ...]:
    idx = _subset(net, w)
    if not idx:
        raise NetworkError("species subset must be non-empty")
    return idx


# -- semilocking / locking -------------------------------------------------


def _masks(net: Network) -> List[Tuple[int, int]]:
    out = []
    for rxn in net.reactions:
        rm = sum(1 << j for j in rxn.reactant.support)
        pm = sum(1 << j for j in rxn.product.support)
        out.append((rm, pm))
    return out


def _is_semilocking_mask(masks: Sequence[Tuple[int, int]], w: int) -> bool:
    return all(not (pm & w) or (rm & w) for rm, pm in masks)


def is_semilocking(net: Network, w) -> bool:
    """Whenever a reaction produces a W-species, its reactant contains a W-species."""
    idx = _nonempty(net, w)
    return _is_semilocking_mask(_masks(net), sum(1 << j for j in idx))


def is_locking(net: Network, w) -> bool:
    idx = set(_nonempty(net, w))
    return all(rxn.reactant.support & idx for rxn in net.reactions)


def enumerate_semilocking(net: Network, cap: int = DEFAULT_SEMILOCKING_CAP) -> List[SemilockingSet]:
    """All semilocking sets, ordered by size and then lexicographically."""
    if net.n > cap:
        raise CapExceededError(f"{net.n} species exceeds the semilocking enumeration cap of {cap}")
    masks = _masks(net)
    out = []
    for size in range(1, net.n + 1):
        for combo in combinations(range(net.n), size):
            w = sum(1 << j for j in combo)
            if _is_semilocking_mask(masks, w):
                locking = all(rm & w for rm, _ in masks)
                out.append(SemilockingSet(combo, locking))
    return out


# -- dimensions -------------------------------------------------------------


def restricted_subspace_dim(net: Network, a, reactions: Optional[Sequence[int]] = None) -> int:
    """dim of {v in S : v_j = 0 for j outside A}.

    ``reactions`` restricts S to the span of a subset of reaction vectors
    (a subsystem). Uses dim = rank(G) - rank(G rows outside A).
    """
    inside = set(_subset(net, a))
    outside = [j for j in range(net.n) if j not in inside]
    return subspace_rank(net, reactions) - subspace_rank(net, reactions, rows=outside)


def _complement(net: Network, w: Sequence[int]) -> Tuple[int, ...]:
    ws = set(w)
    return tuple(j for j in range(net.n) if j not in ws)


def is_facet(net: Network, w, reactions: Optional[Sequence[int]] = None) -> bool:
    idx = _nonempty(net, w)
    return restricted_subspace_dim(net, _complement(net, idx), reactions) == subspace_rank(net, reactions) - 1


def is_vertex(net: Network, w, reactions: Optional[Sequence[int]] = None) -> bool:
    idx = _nonempty(net, w)
    return restricted_subspace_dim(net, _complement(net, idx), reactions) == 0


def boundary_empty_by_conservation(
    net: Network, w, reactions: Optional[Sequence[int]] = None
) -> Optional[List[int]]:
    """Non-negative, non-zero conservation law supported inside W, or ``None``.

    Such a law ``a`` vanishes on the boundary but is positive on every
    positive history, so the boundary meets no positive compatibility class.
    """
    idx = _nonempty(net, w)
    vecs = [list(net.reactions[i].vector) for i in (range(net.r) if reactions is None else reactions)]
    # a supported on W with a . v = 0 for every reaction vector v
    rows = [[v[j] for j in idx] for v in vecs]
    basis = linalg.nullspace(rows, len(idx)) if rows else [
        [1 if k == j else 0 for k in range(len(idx))] for j in range(len(idx))
    ]
    local = linalg.nonnegative_combination(basis, len(idx), lower=0)
    if local is None:
        return None
    full = [0] * net.n
    for j, val in zip(idx, local):
        full[j] = val
    return full


# -- decompositions ---------------------------------------------------------


def interaction_components(net: Network, w) -> List[Tuple[int, ...]]:
    """Connected components of W under 'both species appear in one reaction'."""
    idx = _nonempty(net, w)
    parent = {j: j for j in idx}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for rxn in net.reactions:
        touched = sorted((rxn.reactant.support | rxn.product.support) & set(idx))
        for other in touched[1:]:
            ra, rb = find(touched[0]), find(other)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: Dict[int, List[int]] = {}
    for j in idx:
        groups.setdefault(find(j), []).append(j)
    return sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])


def _reaction_species(net: Network, reactions: Iterable[int]) -> frozenset:
    out = set()
    for i in reactions:
        rxn = net.reactions[i]
        out |= rxn.reactant.support | rxn.product.support
    return frozenset(out)


def _part_kind(net: Network, part: Tuple[int, ...], reactions: Optional[Sequence[int]]):
    # a part that is both a facet and conservation-empty reports as a facet
    if is_facet(net, part, reactions):
        return FACET, None
    witness = boundary_empty_by_conservation(net, part, reactions)
    if witness is not None:
        return EMPTY, witness
    if is_vertex(net, part, reactions):
        return VERTEX, None
    return None, None


def _make_part(net, part, reactions, kind, witness, scope) -> DecompositionPart:
    return DecompositionPart(
        members=tuple(part),
        reactions=tuple(reactions),
        part_kind=kind,
        restricted_dim=restricted_subspace_dim(net, _complement(net, part), scope),
        subsystem_dim=subspace_rank(net, scope),
        own_dim=restricted_subspace_dim(net, part, scope),
        witness=tuple(witness) if witness is not None else None,
        semilocking_in_subsystem=_semilocking_within(net, part, reactions),
    )


def _semilocking_within(net: Network, part: Sequence[int], reactions: Sequence[int]) -> bool:
    ws = set(part)
    for i in reactions:
        rxn = net.reactions[i]
        if rxn.product.support & ws and not rxn.reactant.support & ws:
            return False
    return True


def try_independent_decomposition(net: Network, w) -> Optional[DecompositionRecord]:
    """Split W into interaction components, each empty, a facet or a vertex of the full network."""
    idx = _nonempty(net, w)
    parts = []
    for comp in interaction_components(net, idx):
        kind, witness = _part_kind(net, comp, None)
        if kind is None:
            return None
        cs = set(comp)
        touching = [
            i for i, rxn in enumerate(net.reactions) if (rxn.reactant.support | rxn.product.support) & cs
        ]
        parts.append(_make_part(net, comp, touching, kind, witness, None))
    return DecompositionRecord(mode="independent", parts=tuple(parts))


def _set_partitions(items: Sequence[int]) -> Iterator[List[List[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1 :]


def class_partitions(n_classes: int) -> List[Tuple[Tuple[int, ...], ...]]:
    """Set partitions of ``range(n_classes)``: fewest blocks first, then lexicographic."""
    canon = set()
    for p in _set_partitions(list(range(n_classes))):
        canon.add(tuple(sorted(tuple(sorted(b)) for b in p)))
    return sorted(canon, key=lambda p: (len(p), p))


def try_subsystem_decomposition(
    net: Network, w, max_classes: int = DEFAULT_CLASS_CAP
) -> Optional[DecompositionRecord]:
    """Search groupings of linkage classes into subsystems that decompose W."""
    idx = _nonempty(net, w)
    links = linkage_classes(net)
    if len(links.classes) > max_classes:
        raise CapExceededError(
            f"{len(links.classes)} linkage classes exceeds the subsystem search cap of {max_classes}"
        )
    wset = set(idx)
    # pairs of W-species that co-occur in some reaction
    together = set()
    for rxn in net.reactions:
        touched = sorted((rxn.reactant.support | rxn.product.support) & wset)
        together.update(combinations(touched, 2))

    for partition in class_partitions(len(links.classes)):
        parts = []
        idle: List[int] = []
        ok = True
        for block in partition:
            reactions = tuple(sorted(i for c in block for i in links.class_reactions[c]))
            species = _reaction_species(net, reactions)
            part = tuple(sorted(wset & species))
            if not part:
                idle.extend(reactions)
                continue
            if species & (wset - set(part)):
                ok = False
                break
            kind, witness = _part_kind(net, part, reactions)
            if kind is None:
                ok = False
                break
            parts.append(_make_part(net, part, reactions, kind, witness, reactions))
        if not ok:
            continue
        share = {}
        for p, part in enumerate(parts):
            for j in part.members:
                share.setdefault(j, set()).add(p)
        if any(not share[a] & share[b] for a, b in together):
            continue
        return DecompositionRecord(mode="subsystem", parts=tuple(parts), idle_reactions=tuple(sorted(idle)))
    return None


# -- classification and certificate ----------------------------------------


def _part_evidence(net: Network, rec: DecompositionRecord) -> Dict:
    parts = []
    for part in rec.parts:
        entry = {
            "W": net.format_subset(part.members),
            "reactions": list(part.reactions),
            "part_kind": part.part_kind,
            "restricted_dim": part.restricted_dim,
            "subsystem_dim": part.subsystem_dim,
            "own_dim": part.own_dim,
            "semilocking_in_subsystem": part.semilocking_in_subsystem,
        }
        if part.witness is not None:
            entry["witness"] = list(part.witness)
        parts.append(entry)
    out = {"mode": rec.mode, "parts": parts}
    if rec.mode == "subsystem":
        out["idle_reactions"] = list(rec.idle_reactions)
    return out


def classify_boundary(net: Network, w, max_classes: int = DEFAULT_CLASS_CAP) -> BoundaryClassification:
    idx = _nonempty(net, w)
    dim_s = subspace_rank(net)
    restricted = restricted_subspace_dim(net, _complement(net, idx))
    dims = {"dim_s": dim_s, "restricted_dim": restricted}

    witness = boundary_empty_by_conservation(net, idx)
    if witness is not None:
        return BoundaryClassification(EMPTY, {"witness": witness, **dims})
    if restricted == dim_s - 1:
        return BoundaryClassification(FACET, dims)
    if restricted == 0:
        return BoundaryClassification(VERTEX, dims)
    rec = try_independent_decomposition(net, idx)
    if rec is not None:
        return BoundaryClassification(INDEPENDENT, {**dims, **_part_evidence(net, rec)}, rec)
    rec = try_subsystem_decomposition(net, idx, max_classes)
    if rec is not None:
        warnings = tuple(
            f"part {net.format_subset(p.members)} is not semilocking within its subsystem"
            for p in rec.parts
            if not p.semilocking_in_subsystem
        )
        return BoundaryClassification(SUBSYSTEM, {**dims, **_part_evidence(net, rec)}, rec, warnings)
    return BoundaryClassification(UNKNOWN_KIND, dims)


def network_summary(net: Network) -> Dict:
    return {
        "species": list(net.names),
        "dim_s": subspace_rank(net),
        "deficiency": deficiency(net),
        "weakly_reversible": is_weakly_reversible(net),
        "eligibility": complex_balanced_eligibility(net),
    }


def certify_persistence(
    net: Network, cap: int = DEFAULT_SEMILOCKING_CAP, max_classes: int = DEFAULT_CLASS_CAP
) -> PersistenceCertificate:
    summary = network_summary(net)
    verdicts = tuple((s, classify_boundary(net, s, max_classes)) for s in enumerate_semilocking(net, cap))
    eligible = summary["eligibility"] == GUARANTEED
    unresolved = [s for s, v in verdicts if v.kind == UNKNOWN_KIND]
    overall = PERSISTENT if eligible and not unresolved else INCONCLUSIVE
    caveats = []
    if not eligible:
        caveats.append("complex balance not guaranteed: network is not weakly reversible with deficiency zero")
    if unresolved:
        caveats.append(f"{len(unresolved)} semilocking set(s) have unresolved boundaries")
    if positive_conservation_law(net) is None:
        caveats.append(BOUNDEDNESS_CAVEAT)
    return PersistenceCertificate(summary, verdicts, overall, tuple(caveats), net.names)


def certificate_to_dict(cert: PersistenceCertificate) -> Dict:
    names = cert.species
    return {
        "network": dict(cert.network_summary),
        "semilocking": [
            {
                "W": [names[j] for j in s.members],
                "kind": v.kind,
                "evidence": v.evidence,
                "warnings": list(v.warnings),
            }
            for s, v in cert.semilocking_verdicts
        ],
        "overall": cert.overall,
        "caveats": list(cert.caveats),
    }


def certificate_json(cert: PersistenceCertificate) -> str:
    return json.dumps(certificate_to_dict(cert), indent=2) + "\n"
