"""Enumerated matrix groups over F_q and their Borel / parabolic data.

Elements are n x n matrices (n in {2, 4}) with entries given as field
indices.  A matrix is packed into an int64 key by reading its row-major
entries as base-q digits, first entry most significant.  Groups keep their
elements sorted by key, so element indices are reproducible.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import StructureError
from .field import FieldTable, gf

log = logging.getLogger(__name__)

DEFAULT_BOUND = 200_000

# families are named by string constants; elements by their index in the sorted key array
GroupFamily = str
GroupElement = int

GL2 = "GL2"
SP4 = "SP4"
GSP4 = "GSP4"
PARAMODULAR_LEVI = "PARAMODULAR_LEVI"
# full product GL(2,q)^2 in block-diagonal form; ambient group of the paramodular Levi quotient
GL2_PAIR = "GL2_PAIR"

FAMILIES = (GL2, SP4, GSP4, PARAMODULAR_LEVI, GL2_PAIR)

FAMILY_ALIASES = {
    "gl2": GL2,
    "sp4": SP4,
    "gsp4": GSP4,
    "paramodular-levi": PARAMODULAR_LEVI,
    "paramodular_levi": PARAMODULAR_LEVI,
    "gl2-pair": GL2_PAIR,
    "gl2xgl2": GL2_PAIR,
}

_DIMENSION = {GL2: 2, SP4: 4, GSP4: 4, PARAMODULAR_LEVI: 4, GL2_PAIR: 4}

# standard parabolics as block partitions of the matrix, with Levi names
_PARTITIONS = {
    GL2: {(1, 1): "torus", (2,): "group"},
    SP4: {(1, 1, 1, 1): "torus", (2, 2): "siegel", (1, 2, 1): "klingen", (4,): "group"},
    GSP4: {(1, 1, 1, 1): "torus", (2, 2): "siegel", (1, 2, 1): "klingen", (4,): "group"},
    PARAMODULAR_LEVI: {(1, 1, 1, 1): "torus", (2, 1, 1): "first-block",
                       (1, 1, 2): "second-block", (2, 2): "group"},
    GL2_PAIR: {(1, 1, 1, 1): "torus", (2, 1, 1): "first-block",
               (1, 1, 2): "second-block", (2, 2): "group"},
}

# matrix positions (row, col) carrying the simple-root coordinates of U
_ROOT_POSITIONS = {
    GL2: ((0, 1),),
    SP4: ((0, 1), (1, 2)),
    GSP4: ((0, 1), (1, 2)),
    PARAMODULAR_LEVI: ((0, 1), (2, 3)),
    GL2_PAIR: ((0, 1), (2, 3)),
}


def canonical_family(name: str) -> str:
    if name in FAMILIES:
        return name
    try:
        return FAMILY_ALIASES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown group family {name!r}") from None


def order_formula(family: str, q: int) -> int:
    gl2 = (q * q - 1) * (q * q - q)
    sp4 = q ** 4 * (q * q - 1) * (q ** 4 - 1)
    return {
        GL2: gl2,
        SP4: sp4,
        GSP4: sp4 * (q - 1),
        PARAMODULAR_LEVI: gl2 * gl2 // (q - 1),
        GL2_PAIR: gl2 * gl2,
    }[family]


# packing ----------------------------------------------------------------------

def _weights(q: int, n: int) -> np.ndarray:
    return q ** np.arange(n * n - 1, -1, -1, dtype=np.int64)


def pack(mats, q: int) -> np.ndarray:
    mats = np.asarray(mats, dtype=np.int64)
    n = mats.shape[-1]
    return mats.reshape(mats.shape[:-2] + (n * n,)) @ _weights(q, n)


def unpack(keys, q: int, n: int) -> np.ndarray:
    keys = np.asarray(keys, dtype=np.int64)
    digits = (keys[..., None] // _weights(q, n)) % q
    return digits.reshape(keys.shape + (n, n))


# family matrices ------------------------------------------------------------

def symplectic_form(F: FieldTable) -> np.ndarray:
    """antidiag(w, -w) with w = antidiag(1, 1)."""
    m1 = F.neg(1)
    J = np.zeros((4, 4), dtype=np.int64)
    J[0, 3] = J[1, 2] = 1
    J[2, 1] = J[3, 0] = m1
    return J


def _diag(F, entries):
    return np.diag(np.asarray(entries, dtype=np.int64))


def _elementary(F, n, i, j, t, extra=()):
    m = np.eye(n, dtype=np.int64)
    m[i, j] = t
    for (a, b, v) in extra:
        m[a, b] = v
    return m


def _blockdiag(x, y):
    m = np.zeros((4, 4), dtype=np.int64)
    m[:2, :2] = x
    m[2:, 2:] = y
    return m


def _field_basis(F):
    # polynomial basis 1, x, ..., x^{k-1}
    return [F.p ** i for i in range(F.k)]


def _similitude_factor(F, mats):
    """lambda with g^T J g = lambda J, or -1 where g is not a similitude."""
    J = symplectic_form(F)
    mats = np.asarray(mats, dtype=np.int64)
    gt = np.swapaxes(mats, -1, -2)
    lhs = F.matmul(F.matmul(gt, J), mats)
    lam = lhs[..., 0, 3]
    scaled = F.mul(lam[..., None, None], J)
    ok = (lhs == scaled).all(axis=(-1, -2)) & (lam != 0)
    return np.where(ok, lam, -1)


def satisfies_family(family: str, F: FieldTable, mats) -> np.ndarray:
    """Vectorized defining-equation check."""
    mats = np.asarray(mats, dtype=np.int64)
    if mats.ndim == 2:
        mats = mats[None]
    if family == GL2:
        return F.det(mats) != 0
    if family in (SP4, GSP4):
        lam = _similitude_factor(F, mats)
        return (lam == 1) if family == SP4 else (lam > 0)
    off = np.concatenate([mats[:, :2, 2:].reshape(len(mats), -1),
                          mats[:, 2:, :2].reshape(len(mats), -1)], axis=1)
    d1 = F.det(mats[:, :2, :2])
    d2 = F.det(mats[:, 2:, 2:])
    ok = (off == 0).all(axis=1) & (d1 != 0) & (d2 != 0)
    if family == PARAMODULAR_LEVI:
        ok &= d1 == d2
    return ok


def _x_alpha(F, t):
    # short simple root element for the form antidiag(w, -w): I + t(E01 - E23)
    m = np.eye(4, dtype=np.int64)
    m[0, 1] = t
    m[2, 3] = F.neg(t)
    return m


def family_generators(family: str, F: FieldTable) -> list:
    g = F.generator
    gi = F.inv(g)
    basis = _field_basis(F)
    gens = []
    if family == GL2:
        for b in basis:
            gens.append(_elementary(F, 2, 0, 1, b))
            gens.append(_elementary(F, 2, 1, 0, b))
        gens.append(_diag(F, [g, 1]))
        gens.append(_diag(F, [1, g]))
    elif family in (SP4, GSP4):
        for b in basis:
            xa = _x_alpha(F, b)
            gens.append(xa)
            gens.append(xa.T.copy())
            gens.append(_elementary(F, 4, 1, 2, b))
            gens.append(_elementary(F, 4, 2, 1, b))
        # torus diag(a, b, l/b, l/a): the form pairs coordinates (0, 3) and (1, 2)
        gens.append(_diag(F, [g, 1, 1, gi]))
        gens.append(_diag(F, [1, g, gi, 1]))
        if family == GSP4:
            gens.append(_diag(F, [1, 1, g, g]))
    elif family in (PARAMODULAR_LEVI, GL2_PAIR):
        one = np.eye(2, dtype=np.int64)
        for b in basis:
            up = _elementary(F, 2, 0, 1, b)
            lo = _elementary(F, 2, 1, 0, b)
            for x in (up, lo):
                gens.append(_blockdiag(x, one))
                gens.append(_blockdiag(one, x))
        if family == PARAMODULAR_LEVI:
            gens.append(_diag(F, [g, gi, 1, 1]))
            gens.append(_diag(F, [1, 1, g, gi]))
            gens.append(_diag(F, [g, 1, g, 1]))
            gens.append(_diag(F, [g, 1, 1, g]))
        else:
            gens.append(_diag(F, [g, 1, 1, 1]))
            gens.append(_diag(F, [1, 1, g, 1]))
    else:
        raise ValueError(f"no generators for family {family!r}")
    return gens


def longest_weyl_element(family: str, F: FieldTable) -> np.ndarray:
    if family == GL2:
        return np.array([[0, 1], [1, 0]], dtype=np.int64)
    if family in (SP4, GSP4):
        return symplectic_form(F)
    w = np.array([[0, 1], [1, 0]], dtype=np.int64)
    return _blockdiag(w, w)


# closure ----------------------------------------------------------------------

def closure(F: FieldTable, gens, n: int, bound: int = DEFAULT_BOUND) -> np.ndarray:
    """Sorted packed keys of the group generated by ``gens``."""
    q = F.q
    ident = np.eye(n, dtype=np.int64)[None]
    gens = np.asarray(gens, dtype=np.int64).reshape(-1, n, n)
    known = np.sort(pack(ident, q))
    frontier = ident
    while len(frontier):
        prods = F.matmul(frontier[:, None], gens[None]).reshape(-1, n, n)
        keys, first = np.unique(pack(prods, q), return_index=True)
        fresh = ~np.isin(keys, known, assume_unique=True)
        frontier = prods[first[fresh]]
        known = np.union1d(known, keys[fresh])
        if len(known) > bound:
            raise StructureError(f"group order exceeds the bound {bound}")
    return known


# groups -------------------------------------------------------------------------

class EnumeratedGroup:
    """A finite matrix group with indexed elements and lazy class data."""

    def __init__(self, family: str, F: FieldTable, keys: np.ndarray,
                 generators=None, partitions=None, root_positions=None,
                 blocks=None, name=None, n=None):
        self.family = family
        self.field = F
        self.q = F.q
        self.n = n or _DIMENSION[family]
        self.keys = np.asarray(keys, dtype=np.int64)
        self.keys.setflags(write=False)
        self.mats = unpack(self.keys, F.q, self.n)
        self.mats.setflags(write=False)
        self.partitions = dict(partitions if partitions is not None else _PARTITIONS.get(family, {}))
        self.root_positions = tuple(root_positions if root_positions is not None
                                    else _ROOT_POSITIONS.get(family, ()))
        self.blocks = blocks if blocks is not None else (self.n,)
        self.name = name or f"{family}(q={F.q})"
        if generators is None:
            generators = generating_set(self)
        self.generators = np.asarray(generators, dtype=np.int64)
        self._class_override = None

    def __repr__(self):
        return f"<EnumeratedGroup {self.name} order={self.order}>"

    def __len__(self):
        return len(self.keys)

    @property
    def order(self) -> int:
        return len(self.keys)

    # element lookup -------------------------------------------------------------

    def locate_keys(self, keys, strict=True) -> np.ndarray:
        keys = np.asarray(keys, dtype=np.int64)
        pos = np.searchsorted(self.keys, keys)
        pos = np.minimum(pos, len(self.keys) - 1)
        found = self.keys[pos] == keys
        if strict and not found.all():
            raise KeyError(f"{int((~found).sum())} element(s) not in {self.name}")
        return np.where(found, pos, -1)

    def locate(self, mats, strict=True) -> np.ndarray:
        return self.locate_keys(pack(mats, self.q), strict=strict)

    def contains(self, mats) -> np.ndarray:
        return self.locate(mats, strict=False) >= 0

    @cached_property
    def identity(self) -> int:
        return int(self.locate(np.eye(self.n, dtype=np.int64)))

    def mul(self, i, j) -> np.ndarray:
        return self.locate(self.field.matmul(self.mats[i], self.mats[j]))

    @cached_property
    def inverse(self) -> np.ndarray:
        """inverse[i] is the index of the inverse of element i."""
        inv = self.locate(self.field.matinv(self.mats))
        inv.setflags(write=False)
        return inv

    def conjugate(self, s_mat, idx=None) -> np.ndarray:
        """Indices of s x s^-1 for x in idx (all elements by default)."""
        F = self.field
        X = self.mats if idx is None else self.mats[idx]
        s_inv = F.matinv(s_mat)
        return self.locate(F.matmul(F.matmul(s_mat, X), s_inv))

    # classes --------------------------------------------------------------------

    @cached_property
    def _class_data(self):
        if self._class_override is not None:
            class_of = np.asarray(self._class_override, dtype=np.int64)
        else:
            class_of = _orbit_classes(self)
        class_of.setflags(write=False)
        count = int(class_of.max()) + 1
        reps = np.full(count, len(self.keys), dtype=np.int64)
        np.minimum.at(reps, class_of, np.arange(len(self.keys)))
        sizes = np.bincount(class_of, minlength=count)
        return class_of, reps, sizes

    @property
    def class_of(self) -> np.ndarray:
        return self._class_data[0]

    @property
    def class_reps(self) -> np.ndarray:
        return self._class_data[1]

    @property
    def class_sizes(self) -> np.ndarray:
        return self._class_data[2]

    @property
    def num_classes(self) -> int:
        return len(self.class_reps)

    @cached_property
    def class_members(self) -> list:
        order = np.argsort(self.class_of, kind="stable")
        bounds = np.cumsum(self.class_sizes)[:-1]
        return np.split(order, bounds)

    @cached_property
    def centralizer_orders(self) -> np.ndarray:
        return self.order // self.class_sizes

    @cached_property
    def inverse_class(self) -> np.ndarray:
        return self.class_of[self.inverse[self.class_reps]]

    @cached_property
    def rep_orders(self) -> np.ndarray:
        """Element order of each class representative."""
        out = np.zeros(self.num_classes, dtype=np.int64)
        F = self.field
        ident = np.eye(self.n, dtype=np.int64)
        for c, r in enumerate(self.class_reps):
            g = self.mats[r]
            x, k = g, 1
            while not (x == ident).all():
                x = F.matmul(x, g)
                k += 1
            out[c] = k
        return out

    @cached_property
    def exponent(self) -> int:
        return int(np.lcm.reduce(self.rep_orders)) if self.num_classes else 1

    def power_classes(self, c: int) -> np.ndarray:
        """Classes of g^j, j = 0..ord(g)-1, for the representative g of class c."""
        F = self.field
        g = self.mats[self.class_reps[c]]
        o = int(self.rep_orders[c])
        pows = [np.eye(self.n, dtype=np.int64)]
        for _ in range(o - 1):
            pows.append(F.matmul(pows[-1], g))
        return self.class_of[self.locate(np.stack(pows))]

    # subgroups ------------------------------------------------------------------

    def subgroup(self, idx, name=None, blocks=None, partitions=None,
                 root_positions=None) -> "EnumeratedGroup":
        """The subgroup on the given element indices (validated for closure)."""
        idx = np.unique(np.asarray(idx, dtype=np.int64))
        keys = self.keys[idx]
        family = f"{self.family}:sub"
        H = EnumeratedGroup(family, self.field, keys, partitions=partitions or {},
                            root_positions=root_positions or (), blocks=blocks,
                            name=name or f"subgroup of {self.name}", n=self.n)
        return H

    @cached_property
    def subgroup_data(self) -> "SubgroupData":
        return subgroup_data(self)

    def parabolic(self, tag: str) -> "ParabolicRecord":
        for rec in self.subgroup_data.parabolics:
            if rec.tag == tag:
                return rec
        raise KeyError(f"{self.name} has no parabolic {tag!r}")


def generating_set(G: EnumeratedGroup) -> np.ndarray:
    """Greedy generating set: repeatedly add the first element outside the closure."""
    F, n = G.field, G.n
    gens = []
    current = np.sort(pack(np.eye(n, dtype=np.int64)[None], F.q))
    while len(current) < len(G.keys):
        outside = ~np.isin(G.keys, current, assume_unique=True)
        i = int(np.argmax(outside))
        gens.append(i)
        current = closure(F, G.mats[gens], n, bound=max(len(G.keys), 1) * 2)
        if len(current) > len(G.keys) or not np.isin(current, G.keys).all():
            raise StructureError(f"{G.name}: element set is not closed under products")
    return np.asarray(gens, dtype=np.int64)


def _orbit_classes(G: EnumeratedGroup) -> np.ndarray:
    """Conjugacy classes as connected components of the conjugation graph."""
    N = G.order
    rows, cols = [np.arange(N)], [np.arange(N)]
    for gi in G.generators:
        rows.append(np.arange(N))
        cols.append(G.conjugate(G.mats[gi]))
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(N, N)).tocsr()
    _, labels = connected_components(graph, directed=True, connection="weak")
    return _canonical_labels(labels, G.identity)


def _canonical_labels(labels, identity) -> np.ndarray:
    # class order: identity first, then by minimal element index (= minimal key)
    labels = np.asarray(labels)
    first = {}
    for i, lab in enumerate(labels):
        if lab not in first:
            first[lab] = i
    id_lab = labels[identity]
    ordered = [id_lab] + sorted((l for l in first if l != id_lab), key=first.get)
    remap = np.empty(max(first) + 1, dtype=np.int64)
    for new, old in enumerate(ordered):
        remap[old] = new
    return remap[labels]


# Borel and parabolic data ------------------------------------------------------

@dataclass
class ParabolicRecord:
    """A standard parabolic P = M N of a group G (all index sets refer to G)."""
    tag: str
    blocks: tuple
    group: EnumeratedGroup
    P: np.ndarray
    M: EnumeratedGroup
    M_in_G: np.ndarray
    N: np.ndarray
    w_o: int | None = None
    Q: np.ndarray | None = None

    @property
    def proper(self) -> bool:
        return len(self.blocks) > 1 and len(self.P) < self.group.order

    def __repr__(self):
        return (f"<ParabolicRecord {self.tag} of {self.group.name}: |P|={len(self.P)} "
                f"|M|={self.M.order} |N|={len(self.N)}>")


@dataclass
class SubgroupData:
    group: EnumeratedGroup
    B: np.ndarray
    T: np.ndarray
    U: np.ndarray
    Z: np.ndarray
    parabolics: list = dc_field(default_factory=list)
    w_o: int | None = None

    @property
    def rank(self) -> int:
        return len(self.group.root_positions)

    def coordinates(self, idx) -> np.ndarray:
        """Simple-root coordinates (array of shape (len(idx), r)) of elements of U."""
        mats = self.group.mats[np.asarray(idx)]
        if not self.group.root_positions:
            return np.zeros((len(mats), 0), dtype=np.int64)
        return np.stack([mats[:, i, j] for (i, j) in self.group.root_positions], axis=1)

    @cached_property
    def U_coordinates(self) -> np.ndarray:
        return self.coordinates(self.U)

    @cached_property
    def T_ad(self):
        """Cosets of Z in T: (coset label per element of T, number of cosets)."""
        G = self.group
        zset = self.Z
        labels = np.full(len(self.T), -1, dtype=np.int64)
        count = 0
        for a, t in enumerate(self.T):
            if labels[a] >= 0:
                continue
            coset = G.mul(np.full(len(zset), t), zset)
            labels[np.isin(self.T, coset)] = count
            count += 1
        return labels, count


def _block_masks(mats, blocks):
    n = mats.shape[-1]
    starts = np.cumsum((0,) + tuple(blocks))
    block_of = np.zeros(n, dtype=np.int64)
    for b in range(len(blocks)):
        block_of[starts[b]:starts[b + 1]] = b
    below = block_of[:, None] > block_of[None, :]
    above = block_of[:, None] < block_of[None, :]
    upper = (mats[:, below] == 0).all(axis=1)
    diag = upper & (mats[:, above] == 0).all(axis=1)
    return upper, diag, above


def block_diagonal_part(mats, blocks) -> np.ndarray:
    mats = np.array(mats, dtype=np.int64, copy=True)
    n = mats.shape[-1]
    starts = np.cumsum((0,) + tuple(blocks))
    mask = np.zeros((n, n), dtype=bool)
    for b in range(len(blocks)):
        mask[starts[b]:starts[b + 1], starts[b]:starts[b + 1]] = True
    mats[..., ~mask] = 0
    return mats


def _refines(fine, coarse) -> bool:
    cuts_f = set(np.cumsum(fine)[:-1].tolist())
    cuts_c = set(np.cumsum(coarse)[:-1].tolist())
    return cuts_c <= cuts_f


def center(G: EnumeratedGroup) -> np.ndarray:
    """Elements commuting with every generator (hence with all of G)."""
    F = G.field
    mask = np.ones(G.order, dtype=bool)
    for gi in G.generators:
        s = G.mats[gi]
        mask &= (F.matmul(G.mats, s) == F.matmul(s, G.mats)).all(axis=(-1, -2))
    return np.flatnonzero(mask)


def predicted_center(G: EnumeratedGroup) -> np.ndarray:
    """Scalar similitudes (or det-matched scalar pairs) in G, by formula."""
    F = G.field
    units = np.arange(1, F.q)
    if G.family in (GL2, SP4, GSP4):
        mats = np.array([np.eye(G.n, dtype=np.int64) * z for z in units])
    elif G.family == PARAMODULAR_LEVI:
        mats = np.array([_diag(F, [a, a, b, b]) for a in units for b in units
                         if F.mul(a, a) == F.mul(b, b)])
    elif G.family == GL2_PAIR:
        mats = np.array([_diag(F, [a, a, b, b]) for a in units for b in units])
    else:
        raise ValueError(f"no center formula for {G.family}")
    idx = G.locate(mats, strict=False)
    return np.unique(idx[idx >= 0])


def subgroup_data(G: EnumeratedGroup) -> SubgroupData:
    F = G.field
    mats = G.mats
    n = G.n
    strict_lower = np.tril(np.ones((n, n), dtype=bool), -1)
    off = ~np.eye(n, dtype=bool)
    upper = (mats[:, strict_lower] == 0).all(axis=1)
    diagonal = (mats[:, off] == 0).all(axis=1)
    unitri = upper & (mats[:, np.eye(n, dtype=bool)] == 1).all(axis=1)
    B = np.flatnonzero(upper)
    T = np.flatnonzero(diagonal)
    U = np.flatnonzero(unitri)
    Z = center(G)
    data = SubgroupData(G, B, T, U, Z)

    if len(B) != len(T) * len(U):
        raise StructureError(f"{G.name}: |B| = {len(B)} != |T||U| = {len(T) * len(U)}")
    if len(np.intersect1d(T, U)) != 1:
        raise StructureError(f"{G.name}: T and U meet nontrivially")

    if G.family in _DIMENSION:
        w = longest_weyl_element(G.family, F)
        w_idx = int(G.locate(w))
        data.w_o = w_idx
        conj_B = G.conjugate(w, B)
        if not np.array_equal(np.intersect1d(B, conj_B), T):
            raise StructureError(f"{G.name}: B and w_o B w_o^-1 do not meet in T")

    for blocks, tag in G.partitions.items():
        if not _refines(blocks, G.blocks):
            continue
        up, bd, above = _block_masks(mats, blocks)
        P = np.flatnonzero(up)
        M_idx = np.flatnonzero(bd)
        diag_part = block_diagonal_part(mats[P], blocks)
        n_mask = (diag_part == np.eye(n, dtype=np.int64)).all(axis=(-1, -2))
        N = P[n_mask]
        if len(P) != len(M_idx) * len(N):
            raise StructureError(f"{G.name}: |P| != |M||N| for the {tag} parabolic")
        if len(M_idx) == G.order:
            M = G
        else:
            sub_parts = {b: t for b, t in G.partitions.items() if _refines(b, blocks)}
            starts = np.cumsum((0,) + tuple(blocks))
            roots = tuple((i, j) for (i, j) in G.root_positions
                          if any(starts[b] <= i and j < starts[b + 1] for b in range(len(blocks))))
            M = G.subgroup(M_idx, name=f"{tag} Levi of {G.name}", blocks=blocks,
                           partitions=sub_parts, root_positions=roots)
        rec = ParabolicRecord(tag, blocks, G, P, M, M_idx, N)
        if data.w_o is not None:
            w = G.mats[data.w_o]
            U_conj = G.conjugate(w, U)
            rec.w_o = data.w_o
            rec.Q = np.intersect1d(M_idx, U_conj)
        data.parabolics.append(rec)
    data.parabolics.sort(key=lambda r: (-len(r.blocks), r.tag))
    return data


def levi_decompose(rec: ParabolicRecord, p_idx):
    """Split elements of P as p = m n; returns (indices in M, indices in G of n)."""
    G = rec.group
    p_idx = np.atleast_1d(np.asarray(p_idx, dtype=np.int64))
    if not np.isin(p_idx, rec.P).all():
        raise StructureError(f"element not in the {rec.tag} parabolic")
    F = G.field
    pm = G.mats[p_idx]
    m = block_diagonal_part(pm, rec.blocks)
    n_mat = F.matmul(F.matinv(m), pm)
    m_local = rec.M.locate(m)
    n_idx = G.locate(n_mat)
    if not np.isin(n_idx, rec.N).all():
        raise StructureError("unipotent part outside N")
    return m_local, n_idx


# construction ------------------------------------------------------------------

def build_group_uncached(family: str, F: FieldTable, bound: int = DEFAULT_BOUND) -> EnumeratedGroup:
    family = canonical_family(family)
    est = order_formula(family, F.q)
    if est > bound:
        raise StructureError(f"{family}(q={F.q}) has order {est} > bound {bound}")
    gens = family_generators(family, F)
    ok = satisfies_family(family, F, np.array(gens))
    if not ok.all():
        raise StructureError(f"generator {int(np.argmin(ok))} of {family} fails the defining equations")
    keys = closure(F, gens, _DIMENSION[family], bound=bound)
    G = EnumeratedGroup(family, F, keys, generators=np.zeros(0, dtype=np.int64))
    G.generators = G.locate(np.array(gens))
    log.debug("built %s with %d elements", G.name, G.order)
    return G


@lru_cache(maxsize=None)
def _build_cached(family: str, q: int, bound: int):
    from . import cache
    F = gf(q)
    return cache.load_or_build(family, F, bound)


def build_group(family: str, field, bound: int = DEFAULT_BOUND) -> EnumeratedGroup:
    """Enumerate a group family over F_q (memoized per process; optional disk cache)."""
    q = field if isinstance(field, int) else field.q
    return _build_cached(canonical_family(family), q, bound)


def conjugacy_classes(G: EnumeratedGroup) -> list:
    """Class member index arrays, identity class first, then by representative key."""
    return G.class_members


def clear_caches():
    _build_cached.cache_clear()
