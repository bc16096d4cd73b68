"""Class functions: inner products, (Harish-Chandra) induction and restriction."""

from __future__ import annotations

import numpy as np

from .errors import StructureError, VerificationError
from .groups import EnumeratedGroup, ParabolicRecord, levi_decompose

TOL = 1e-6


class ClassFunction:
    """Complex values on the conjugacy classes of a group (in its class order)."""

    __slots__ = ("group", "values", "label")

    def __init__(self, group: EnumeratedGroup, values, label: str | None = None):
        values = np.asarray(values, dtype=np.complex128)
        if values.shape != (group.num_classes,):
            raise ValueError(f"expected {group.num_classes} class values, got {values.shape}")
        self.group = group
        self.values = values
        self.values.setflags(write=False)
        self.label = label

    @classmethod
    def trivial(cls, G: EnumeratedGroup) -> "ClassFunction":
        return cls(G, np.ones(G.num_classes), label="trivial")

    @classmethod
    def zero(cls, G: EnumeratedGroup) -> "ClassFunction":
        return cls(G, np.zeros(G.num_classes))

    @classmethod
    def from_element_values(cls, G: EnumeratedGroup, vals, label=None) -> "ClassFunction":
        vals = np.asarray(vals, dtype=np.complex128)
        out = vals[G.class_reps]
        if np.abs(vals - out[G.class_of]).max(initial=0.0) > TOL:
            raise ValueError("function is not constant on conjugacy classes")
        return cls(G, out, label=label)

    def __repr__(self):
        name = self.label or "ClassFunction"
        return f"<{name} on {self.group.name}, degree {self.degree:.6g}>"

    @property
    def degree(self) -> complex:
        return complex(self.values[0])

    def at(self, idx) -> np.ndarray:
        """Values at the given element indices."""
        return self.values[self.group.class_of[np.asarray(idx)]]

    def _check(self, other):
        if isinstance(other, ClassFunction) and other.group is not self.group:
            raise ValueError("class functions live on different groups")

    def __add__(self, other):
        self._check(other)
        return ClassFunction(self.group, self.values + other.values)

    def __sub__(self, other):
        self._check(other)
        return ClassFunction(self.group, self.values - other.values)

    def __neg__(self):
        return ClassFunction(self.group, -self.values)

    def __mul__(self, other):
        if isinstance(other, ClassFunction):
            self._check(other)
            return ClassFunction(self.group, self.values * other.values)
        return ClassFunction(self.group, self.values * other)

    __rmul__ = __mul__

    def conjugate(self) -> "ClassFunction":
        return ClassFunction(self.group, self.values.conj(), label=self.label)

    def relabel(self, label) -> "ClassFunction":
        return ClassFunction(self.group, self.values, label=label)

    def is_zero(self, tol=TOL) -> bool:
        return bool(np.abs(self.values).max(initial=0.0) < tol)

    def allclose(self, other, tol=TOL) -> bool:
        self._check(other)
        return bool(np.abs(self.values - other.values).max(initial=0.0) < tol)

    def norm2(self) -> complex:
        return inner(self, self)

    def is_irreducible(self, tol=TOL) -> bool:
        return abs(self.norm2() - 1) < tol and self.degree.real > 0


def inner(f: ClassFunction, g: ClassFunction) -> complex:
    """(1/|G|) sum over classes of |C| f(C) conj(g(C))."""
    if f.group is not g.group:
        raise ValueError("inner product of class functions on different groups")
    G = f.group
    return complex(np.sum(G.class_sizes * f.values * g.values.conj()) / G.order)


def to_integer(x, what="value", tol=TOL) -> int:
    """Round to the nearest integer, refusing anything that is not one."""
    x = complex(x)
    n = round(x.real)
    if abs(x - n) > tol:
        raise VerificationError(f"{what} = {x} is not an integer within {tol}")
    return int(n)


def multiplicity(f: ClassFunction, chi: ClassFunction) -> int:
    m = to_integer(inner(f, chi), "multiplicity")
    if m < 0:
        raise VerificationError(f"negative multiplicity {m}")
    return m


def embedding(H: EnumeratedGroup, G: EnumeratedGroup) -> np.ndarray:
    """Indices in G of the elements of H."""
    if H is G:
        return np.arange(G.order)
    if H.q != G.q or H.n != G.n:
        raise StructureError(f"{H.name} and {G.name} are over different matrix rings")
    idx = G.locate_keys(H.keys, strict=False)
    if (idx < 0).any():
        raise StructureError(f"{H.name} is not a subgroup of {G.name}: element not found")
    return idx


def induce_values(G: EnumeratedGroup, idx, vals) -> ClassFunction:
    """Induce a class function of the subgroup on element indices ``idx`` of G.

    Ind f(g) = |C_G(g)| / |H| * sum of f over H meet the class of g.
    """
    idx = np.asarray(idx)
    vals = np.asarray(vals, dtype=np.complex128)
    cls = G.class_of[idx]
    k = G.num_classes
    buckets = (np.bincount(cls, weights=vals.real, minlength=k)
               + 1j * np.bincount(cls, weights=vals.imag, minlength=k))
    return ClassFunction(G, buckets * G.centralizer_orders / len(idx))


def induce(f: ClassFunction, G: EnumeratedGroup) -> ClassFunction:
    H = f.group
    if H is G:
        return f
    idx = embedding(H, G)
    return induce_values(G, idx, f.at(np.arange(H.order)))


def restrict(f: ClassFunction, H: EnumeratedGroup) -> ClassFunction:
    G = f.group
    if H is G:
        return f
    idx = embedding(H, G)
    return ClassFunction(H, f.at(idx[H.class_reps]),
                         label=f"Res {f.label}" if f.label else None)


def _levi_of_P(rec: ParabolicRecord) -> np.ndarray:
    cached = getattr(rec, "_m_of_P", None)
    if cached is None:
        cached, _ = levi_decompose(rec, rec.P)
        rec._m_of_P = cached
    return cached


def inflate(rec: ParabolicRecord, sigma: ClassFunction) -> np.ndarray:
    """Values of sigma inflated to P (per element of rec.P), p = m n -> sigma(m)."""
    if sigma.group is not rec.M:
        raise StructureError(f"input does not live on the {rec.tag} Levi")
    return sigma.at(_levi_of_P(rec))


def hc_induce(rec: ParabolicRecord, sigma: ClassFunction) -> ClassFunction:
    """Harish-Chandra induction: inflate through P = M N, then induce to G."""
    if rec.M is rec.group:
        if sigma.group is not rec.M:
            raise StructureError("input does not live on the Levi")
        return sigma
    out = induce_values(rec.group, rec.P, inflate(rec, sigma))
    return out.relabel(f"R[{rec.tag}]({sigma.label})" if sigma.label else None)


def hc_restrict(rec: ParabolicRecord, pi: ClassFunction) -> ClassFunction:
    """Harish-Chandra restriction: m -> (1/|N|) sum_n pi(m n)."""
    G = rec.group
    if pi.group is not G:
        raise ValueError("character does not live on the parent group")
    M = rec.M
    if M is G:
        return pi
    F = G.field
    reps = rec.M_in_G[M.class_reps]
    prods = F.matmul(G.mats[reps][:, None], G.mats[rec.N][None])
    vals = pi.at(G.locate(prods.reshape(-1, G.n, G.n))).reshape(len(reps), len(rec.N))
    return ClassFunction(M, vals.mean(axis=1))


def is_cuspidal(sigma: ClassFunction, tol=TOL) -> bool:
    M = sigma.group
    for rec in M.subgroup_data.parabolics:
        if rec.proper and not hc_restrict(rec, sigma).is_zero(tol):
            return False
    return True


def decompose(f: ClassFunction, irreducibles) -> list:
    """Integer multiplicities of each irreducible in f; checks nothing is left over."""
    mults = [multiplicity(f, chi) for chi in irreducibles]
    rest = f - sum((m * chi for m, chi in zip(mults, irreducibles)), ClassFunction.zero(f.group))
    if not rest.is_zero():
        raise VerificationError("decomposition leaves a nonzero residual")
    return mults
