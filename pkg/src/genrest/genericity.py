"""Linear characters of U, their genericity, and Whittaker dimensions."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .classfun import TOL, ClassFunction, induce_values, to_integer
from .errors import StructureError, VerificationError
from .field import additive_character
from .groups import EnumeratedGroup

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class UnipotentCharacter:
    """u -> psi0(sum_i a_i x_i(u)) with x_i the simple-root coordinates of u."""

    group: EnumeratedGroup
    coeffs: tuple

    def __repr__(self):
        return f"psi{self.coeffs}"

    def __eq__(self, other):
        return (isinstance(other, UnipotentCharacter) and other.group is self.group
                and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash((id(self.group), self.coeffs))

    def evaluate(self, idx) -> np.ndarray:
        """Values at element indices of G, which must lie in U."""
        G = self.group
        sd = G.subgroup_data
        idx = np.atleast_1d(np.asarray(idx))
        if not np.isin(idx, sd.U).all():
            raise StructureError("unipotent character evaluated outside U")
        F = G.field
        coords = sd.coordinates(idx)
        s = np.zeros(len(idx), dtype=np.int64)
        for a, col in zip(self.coeffs, coords.T):
            s = F.add(s, F.mul(a, col))
        return np.asarray(additive_character(F, 1)(s))

    @cached_property
    def on_U(self) -> np.ndarray:
        return self.evaluate(self.group.subgroup_data.U)

    def conjugate_by(self, t: int) -> "UnipotentCharacter":
        """The character u -> psi(t^-1 u t) for a torus element t."""
        G = self.group
        F = G.field
        m = G.mats[t]
        if np.count_nonzero(m - np.diag(np.diagonal(m))):
            raise ValueError("conjugating element is not diagonal")
        coeffs = tuple(int(F.mul(a, F.mul(F.inv(int(m[i, i])), int(m[j, j]))))
                       for a, (i, j) in zip(self.coeffs, G.root_positions))
        return UnipotentCharacter(G, coeffs)

    @cached_property
    def report(self) -> "GenericityReport":
        return is_generic(self)

    @property
    def generic(self) -> bool:
        return self.report.generic


@dataclass(frozen=True)
class GenericityReport:
    """Outcome of the three genericity tests for one character of U.

    ``generic`` is the nondegeneracy decision (every simple-root coefficient
    nonzero).  It coincides with the stabilizer tests whenever T is large
    enough to see every root; over F_2 the torus is trivial and the stabilizer
    tests accept every character, which ``criteria_agree`` exposes.
    """
    coeffs: tuple
    stabilizer: tuple
    stabilizer_size: int
    center_size: int
    stabilizer_generic: bool
    tad_generic: bool
    coordinate_generic: bool

    @property
    def generic(self) -> bool:
        return self.coordinate_generic

    @property
    def criteria_agree(self) -> bool:
        return self.stabilizer_generic == self.tad_generic == self.coordinate_generic

    def to_json(self) -> dict:
        return {"psi": list(self.coeffs), "stabilizer_size": self.stabilizer_size,
                "center_size": self.center_size, "generic": self.generic,
                "stabilizer_generic": self.stabilizer_generic,
                "tad_generic": self.tad_generic,
                "coordinate_generic": self.coordinate_generic,
                "criteria_agree": self.criteria_agree}


def enumerate_u_characters(G: EnumeratedGroup) -> list:
    r = len(G.root_positions)
    return [UnipotentCharacter(G, c) for c in itertools.product(range(G.q), repeat=r)]


def generic_characters(G: EnumeratedGroup) -> list:
    return [psi for psi in enumerate_u_characters(G) if psi.generic]


def stabilizer(psi: UnipotentCharacter) -> np.ndarray:
    """Elements t of T with psi(t^-1 u t) = psi(u) for every u in U (brute force)."""
    G = psi.group
    sd = G.subgroup_data
    F = G.field
    base = psi.on_U
    keep = []
    for t in sd.T:
        conj = G.conjugate(F.matinv(G.mats[t]), sd.U)
        if np.abs(psi.evaluate(conj) - base).max(initial=0.0) < TOL:
            keep.append(t)
    return np.asarray(keep, dtype=np.int64)


def is_generic(psi: UnipotentCharacter, strict: bool = False) -> GenericityReport:
    """Run the stabilizer-equals-center, trivial T/Z-stabilizer and coordinate tests.

    Disagreement is logged, and raised when ``strict``.
    """
    G = psi.group
    sd = G.subgroup_data
    stab = stabilizer(psi)
    generic = np.array_equal(np.sort(stab), np.sort(sd.Z))

    labels, _ = sd.T_ad
    in_stab = np.isin(sd.T, stab)
    for lab in np.unique(labels):
        block = in_stab[labels == lab]
        if block.any() and not block.all():
            raise VerificationError("torus action on psi does not factor through T/Z")
    z_label = labels[np.searchsorted(sd.T, G.identity)]
    stab_cosets = set(labels[in_stab].tolist())
    tad_generic = stab_cosets == {int(z_label)}

    coordinate_generic = all(a != 0 for a in psi.coeffs)
    report = GenericityReport(psi.coeffs, tuple(int(t) for t in stab), len(stab), len(sd.Z),
                              bool(generic), bool(tad_generic), bool(coordinate_generic))
    if not report.criteria_agree:
        msg = f"genericity criteria disagree on {G.name} for {psi}: {report.to_json()}"
        if strict:
            raise VerificationError(msg)
        log.info(msg)
    return report


def whittaker_dim(pi: ClassFunction, psi: UnipotentCharacter) -> int:
    """dim Hom_U(pi, psi) = (1/|U|) sum_u pi(u) conj(psi(u))."""
    G = psi.group
    if pi.group is not G:
        raise ValueError("character and unipotent character live on different groups")
    U = G.subgroup_data.U
    val = np.sum(pi.at(U) * psi.on_U.conj()) / len(U)
    d = to_integer(val, "Whittaker dimension")
    if d < 0:
        raise VerificationError(f"negative Whittaker dimension {d}")
    return d


def gelfand_graev(G: EnumeratedGroup, psi: UnipotentCharacter) -> ClassFunction:
    if psi.group is not G:
        raise ValueError("unipotent character lives on a different group")
    if not psi.generic:
        raise ValueError(f"{psi} is not generic")
    out = induce_values(G, G.subgroup_data.U, psi.on_U)
    return out.relabel(f"gelfand-graev{psi.coeffs}")


def torus_orbits(G: EnumeratedGroup, characters=None) -> list:
    """Orbits of T on the given unipotent characters (all generic ones by default)."""
    chars = list(characters if characters is not None else generic_characters(G))
    remaining = {c.coeffs for c in chars}
    orbits = []
    for c in chars:
        if c.coeffs not in remaining:
            continue
        orbit = {c.conjugate_by(t).coeffs for t in G.subgroup_data.T}
        remaining -= orbit
        orbits.append(sorted(orbit))
    return orbits
