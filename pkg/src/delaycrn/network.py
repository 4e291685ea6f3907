"""Delayed mass-action network types and the line-oriented text format.

A network file holds one directed reaction per line::

    # comment
    species: X1 X2 X3 Xi
    2 X1 -> 3 X1 + Xi | k=1, tau=0.5
    Xi -> X3 | k=2
    0 -> A | k=1

Reversible pairs are written as two lines. ``tau`` defaults to 0.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple


class NetworkError(ValueError):
    """Invalid network content."""


class ParseError(NetworkError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class SpeciesTable:
    names: Tuple[str, ...]
    index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise NetworkError(f"duplicate species names in {self.names}")
        object.__setattr__(self, "index", {name: i for i, name in enumerate(self.names)})

    def __len__(self) -> int:
        return len(self.names)

    def indices(self, names: Iterable[str]) -> Tuple[int, ...]:
        try:
            return tuple(sorted(self.index[n] for n in names))
        except KeyError as exc:
            raise NetworkError(f"unknown species {exc.args[0]!r}") from None


@dataclass(frozen=True)
class Complex:
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        for c in self.coeffs:
            if not isinstance(c, int) or isinstance(c, bool) or c < 0:
                raise NetworkError(f"complex coefficients must be non-negative integers, got {self.coeffs}")

    @property
    def support(self) -> frozenset:
        return frozenset(j for j, c in enumerate(self.coeffs) if c)

    def restrict(self, keep: Sequence[int]) -> "Complex":
        return Complex(tuple(self.coeffs[j] for j in keep))

    def format(self, names: Sequence[str]) -> str:
        terms = []
        for name, c in zip(names, self.coeffs):
            if c == 1:
                terms.append(name)
            elif c > 1:
                terms.append(f"{c} {name}")
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class Reaction:
    reactant: Complex
    product: Complex
    rate_k: float
    delay_tau: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.rate_k) and self.rate_k > 0):
            raise NetworkError(f"rate constant must be positive, got {self.rate_k}")
        if not (math.isfinite(self.delay_tau) and self.delay_tau >= 0):
            raise NetworkError(f"delay must be non-negative, got {self.delay_tau}")
        if len(self.reactant.coeffs) != len(self.product.coeffs):
            raise NetworkError("reactant and product complexes have different lengths")
        if self.reactant == self.product:
            raise NetworkError("reactant equals product")

    @property
    def vector(self) -> Tuple[int, ...]:
        return tuple(b - a for a, b in zip(self.reactant.coeffs, self.product.coeffs))


@dataclass(frozen=True)
class Network:
    species: SpeciesTable
    reactions: Tuple[Reaction, ...]

    def __post_init__(self):
        if not self.reactions:
            raise NetworkError("network has no reactions")
        n = len(self.species)
        for rxn in self.reactions:
            if len(rxn.reactant.coeffs) != n:
                raise NetworkError("complex length does not match species count")

    @property
    def n(self) -> int:
        return len(self.species)

    @property
    def r(self) -> int:
        return len(self.reactions)

    @property
    def names(self) -> Tuple[str, ...]:
        return self.species.names

    @property
    def tau_max(self) -> float:
        return max(rxn.delay_tau for rxn in self.reactions)

    def subset(self, names_or_indices: Iterable) -> Tuple[int, ...]:
        """Normalise a species subset given as names or indices to sorted indices."""
        items = list(names_or_indices)
        if all(isinstance(x, str) for x in items):
            return self.species.indices(items)
        idx = tuple(sorted(set(int(x) for x in items)))
        if any(not 0 <= i < self.n for i in idx):
            raise NetworkError(f"species index out of range in {items}")
        return idx

    def format_subset(self, subset: Iterable[int]) -> List[str]:
        return [self.names[i] for i in sorted(subset)]


@dataclass(frozen=True)
class ReactionSpec:
    """Convenience input for :func:`build_network`."""

    reactant: Dict[str, int]
    product: Dict[str, int]
    k: float
    tau: float = 0.0


def build_network(species: Sequence[str], reactions: Sequence[ReactionSpec]) -> Network:
    table = SpeciesTable(tuple(species))

    def cx(d: Dict[str, int]) -> Complex:
        coeffs = [0] * len(table)
        for name, c in d.items():
            coeffs[table.index[name]] += c
        return Complex(tuple(coeffs))

    return Network(
        table,
        tuple(Reaction(cx(r.reactant), cx(r.product), float(r.k), float(r.tau)) for r in reactions),
    )


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TERM = re.compile(r"\s*(?P<coef>[-+]?\d+(?:\.\d*)?(?:[eE][-+]?\d+)?)?\s*(?P<name>[A-Za-z_][A-Za-z0-9_]*)\s*$")


def _parse_side(text: str, lineno: int, col0: int) -> Tuple[Dict[str, int], List[str]]:
    stripped = text.strip()
    if not stripped:
        raise ParseError("empty reaction side (use 0 for the zero complex)", lineno, col0 + 1)
    if stripped == "0":
        return {}, []
    coeffs: Dict[str, int] = {}
    order: List[str] = []
    offset = 0
    for piece in text.split("+"):
        col = col0 + offset + (len(piece) - len(piece.lstrip())) + 1
        offset += len(piece) + 1
        m = _TERM.match(piece)
        if not piece.strip():
            raise ParseError("missing term around '+'", lineno, col)
        if m is None:
            bad = piece.strip()
            if bad.startswith("-"):
                raise ParseError(f"negative stoichiometric coefficient in {bad!r}", lineno, col)
            raise ParseError(f"cannot parse term {bad!r}", lineno, col)
        coef_text, name = m.group("coef"), m.group("name")
        if coef_text is None:
            coef = 1
        else:
            if coef_text.startswith("-"):
                raise ParseError(f"negative stoichiometric coefficient {coef_text}", lineno, col)
            try:
                coef = int(coef_text)
            except ValueError:
                raise ParseError(f"non-integer stoichiometric coefficient {coef_text}", lineno, col) from None
            if coef == 0:
                raise ParseError("stoichiometric coefficient must be positive", lineno, col)
        if name not in coeffs:
            coeffs[name] = 0
            order.append(name)
        coeffs[name] += coef
    return coeffs, order


def _parse_params(text: str, lineno: int, col0: int) -> Tuple[float, float]:
    params: Dict[str, float] = {}
    offset = 0
    for piece in text.split(","):
        col = col0 + offset + (len(piece) - len(piece.lstrip())) + 1
        offset += len(piece) + 1
        if "=" not in piece:
            raise ParseError(f"expected key=value, got {piece.strip()!r}", lineno, col)
        key, _, value = piece.partition("=")
        key = key.strip()
        if key not in ("k", "tau"):
            raise ParseError(f"unknown parameter {key!r}", lineno, col)
        if key in params:
            raise ParseError(f"duplicate parameter {key!r}", lineno, col)
        try:
            val = float(value)
        except ValueError:
            raise ParseError(f"invalid number {value.strip()!r} for {key}", lineno, col) from None
        if not math.isfinite(val):
            raise ParseError(f"{key} must be finite", lineno, col)
        params[key] = val
    if "k" not in params:
        raise ParseError("rate constant k is required", lineno, col0 + 1)
    if params["k"] <= 0:
        raise ParseError(f"k must be positive, got {params['k']}", lineno, col0 + 1)
    tau = params.get("tau", 0.0)
    if tau < 0:
        raise ParseError(f"tau must be non-negative, got {tau}", lineno, col0 + 1)
    return params["k"], tau


def parse_network(text: str) -> Network:
    """Parse the network text format; see the module docstring."""
    declared: Optional[List[str]] = None
    seen: List[str] = []
    raw = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        if body.strip().startswith("species:"):
            if declared is not None:
                raise ParseError("duplicate species declaration", lineno, 1)
            if raw:
                raise ParseError("species declaration must precede reactions", lineno, 1)
            names = body.split(":", 1)[1].split()
            if not names:
                raise ParseError("empty species declaration", lineno, 1)
            for name in names:
                if not _NAME.fullmatch(name):
                    raise ParseError(f"invalid species name {name!r}", lineno, body.index(name) + 1)
            if len(set(names)) != len(names):
                raise ParseError("species declared twice", lineno, 1)
            declared = names
            continue
        arrow = body.find("->")
        if arrow < 0:
            raise ParseError("expected '->'", lineno, 1)
        bar = body.find("|", arrow)
        if bar < 0:
            raise ParseError("expected '|' followed by rate parameters", lineno, len(body.rstrip()) + 1)
        lhs, lorder = _parse_side(body[:arrow], lineno, 0)
        rhs, rorder = _parse_side(body[arrow + 2 : bar], lineno, arrow + 2)
        k, tau = _parse_params(body[bar + 1 :], lineno, bar + 1)
        for name in lorder + rorder:
            if declared is not None and name not in declared:
                raise ParseError(f"species {name!r} not declared", lineno, 1)
            if name not in seen:
                seen.append(name)
        if lhs == rhs:
            raise ParseError("reactant equals product", lineno, 1)
        raw.append((lineno, lhs, rhs, k, tau))
    if not raw:
        raise ParseError("no reactions found", max(1, len(text.splitlines())), 1)
    names = declared if declared is not None else seen
    specs = [ReactionSpec(lhs, rhs, k, tau) for _, lhs, rhs, k, tau in raw]
    return build_network(names, specs)


def _fmt_float(x: float) -> str:
    return repr(float(x))


def format_network(net: Network) -> str:
    """Render ``net`` in the text format; ``parse_network`` inverts it exactly."""
    lines = ["species: " + " ".join(net.names)]
    for rxn in net.reactions:
        line = f"{rxn.reactant.format(net.names)} -> {rxn.product.format(net.names)} | k={_fmt_float(rxn.rate_k)}"
        if rxn.delay_tau:
            line += f", tau={_fmt_float(rxn.delay_tau)}"
        lines.append(line)
    return "\n".join(lines) + "\n"
