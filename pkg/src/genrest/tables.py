"""Irreducible character tables: closed-form GL(2,q), Steinberg, Dixon-Schneider."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.optimize import linear_sum_assignment
from sympy import nextprime, primitive_root, sqrt_mod

from . import modp
from .classfun import ClassFunction, induce_values
from .errors import StructureError, VerificationError
from .field import FieldSpec, field_build, multiplicative_character
from .groups import GL2, GSP4, SP4, EnumeratedGroup, ParabolicRecord, build_group, symplectic_form
from .jsonfmt import complex_pair

log = logging.getLogger(__name__)

# seed for random class-sum combinations when single class sums fail to split
DIXON_SEED = 20240229
ORTHO_TOL = 1e-8


@dataclass
class IrreducibleTable:
    group: EnumeratedGroup
    rows: list
    labels: list = dc_field(default_factory=list)

    def __post_init__(self):
        if not self.labels:
            self.labels = [r.label or f"row-{i}" for i, r in enumerate(self.rows)]

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def __getitem__(self, i):
        return self.rows[i]

    @property
    def matrix(self) -> np.ndarray:
        return np.array([r.values for r in self.rows])

    @property
    def degrees(self) -> list:
        return [int(round(r.degree.real)) for r in self.rows]

    def row(self, label) -> ClassFunction:
        return self.rows[self.labels.index(label)]

    def orthogonality_error(self) -> float:
        """Max deviation from row orthonormality and column orthogonality."""
        G = self.group
        X = self.matrix
        rows = (X * G.class_sizes) @ X.conj().T / G.order
        cols = X.conj().T @ X
        err_rows = np.abs(rows - np.eye(len(X))).max(initial=0.0)
        err_cols = np.abs(cols - np.diag(G.centralizer_orders)).max(initial=0.0)
        return float(max(err_rows, err_cols))

    def match(self, other: "IrreducibleTable"):
        """Row permutation of ``other`` closest to this table, and the worst distance."""
        A, B = self.matrix, other.matrix
        if A.shape != B.shape:
            return None, math.inf
        dist = np.abs(A[:, None, :] - B[None, :, :]).max(axis=2)
        r, c = linear_sum_assignment(dist)
        return c, float(dist[r, c].max(initial=0.0))

    def to_json(self) -> dict:
        G = self.group
        keys = [str(int(k)) for k in G.keys[G.class_reps]]
        return {
            "group": G.name,
            "family": G.family,
            "q": G.q,
            "order": G.order,
            "classes": [{"key": k, "size": int(s)} for k, s in zip(keys, G.class_sizes)],
            "rows": [{"label": lab, "degree": deg,
                      "values": {k: complex_pair(v) for k, v in zip(keys, r.values)}}
                     for lab, deg, r in zip(self.labels, self.degrees, self.rows)],
        }


# GL(2, q) closed form ---------------------------------------------------------

def subfield_embedding(F, E) -> np.ndarray:
    """emb[x] = image in E = F_{q^2} of x in F_q, sending F's generator to the
    smallest-index root in E of its minimal polynomial."""
    p = F.p
    # minimal polynomial of F.generator over F_p is F's modulus (x - g when k = 1)
    mod = list(F.modulus) + [1]
    cands = np.arange(E.q)
    acc = np.zeros(E.q, dtype=np.int64)
    for c in reversed(mod):
        acc = E.add(E.mul(acc, cands), c % p)
    roots = [int(r) for r in np.flatnonzero(acc == 0) if E.power(int(r), F.q) == int(r)]
    if not roots:
        raise StructureError("no embedding of F_q into F_{q^2}")
    r = roots[0]
    emb = np.zeros(F.q, dtype=np.int64)
    emb[F.exp] = [E.power(r, i) for i in range(F.q - 1)]
    return emb


def _gl2_class_type(F, m):
    a, b, c, d = (int(x) for x in m.ravel())
    if b == 0 and c == 0 and a == d:
        return "central", (a,)
    t = F.add(a, d)
    det = F.sub(F.mul(a, d), F.mul(b, c))
    xs = np.arange(F.q)
    vals = F.add(F.sub(F.mul(xs, xs), F.mul(t, xs)), det)
    roots = np.flatnonzero(vals == 0).tolist()
    if len(roots) == 2:
        return "split", tuple(roots)
    if len(roots) == 1:
        return "unipotent", (roots[0],)
    return "elliptic", (t, det)


def gl2_table(G: EnumeratedGroup) -> IrreducibleTable:
    if G.family != GL2:
        raise ValueError(f"closed-form table needs GL2, got {G.family}")
    F = G.field
    q = F.q
    E = field_build(FieldSpec(F.p, 2 * F.k))
    emb = subfield_embedding(F, E)
    n1, n2 = q - 1, q * q - 1

    def alpha(j, x):
        return np.exp(2j * np.pi * j * int(F.log[x]) / n1)

    def theta(j, y):
        return np.exp(2j * np.pi * j * int(E.log[y]) / n2)

    info = []
    for r in G.class_reps:
        kind, data = _gl2_class_type(F, G.mats[r])
        if kind == "elliptic":
            t, det = data
            ys = np.arange(E.q)
            vals = E.add(E.sub(E.mul(ys, ys), E.mul(int(emb[t]), ys)), int(emb[det]))
            zeta = int(np.flatnonzero(vals == 0)[0])
            data = (zeta, E.power(zeta, q), det)
        info.append((kind, data))

    rows = []
    for j in range(n1):
        vals = []
        for kind, data in info:
            if kind == "central":
                vals.append(alpha(j, F.mul(data[0], data[0])))
            elif kind == "unipotent":
                vals.append(alpha(j, F.mul(data[0], data[0])))
            elif kind == "split":
                vals.append(alpha(j, F.mul(*data)))
            else:
                vals.append(alpha(j, data[2]))
        rows.append(ClassFunction(G, vals, label=f"det-twist({j})"))
    for j in range(n1):
        vals = []
        for kind, data in info:
            if kind == "central":
                vals.append(q * alpha(j, F.mul(data[0], data[0])))
            elif kind == "unipotent":
                vals.append(0)
            elif kind == "split":
                vals.append(alpha(j, F.mul(*data)))
            else:
                vals.append(-alpha(j, data[2]))
        rows.append(ClassFunction(G, vals, label=f"steinberg-twist({j})"))
    for i in range(n1):
        for j in range(i + 1, n1):
            vals = []
            for kind, data in info:
                if kind == "central":
                    a = data[0]
                    vals.append((q + 1) * alpha(i, a) * alpha(j, a))
                elif kind == "unipotent":
                    a = data[0]
                    vals.append(alpha(i, a) * alpha(j, a))
                elif kind == "split":
                    a, b = data
                    vals.append(alpha(i, a) * alpha(j, b) + alpha(i, b) * alpha(j, a))
                else:
                    vals.append(0)
            rows.append(ClassFunction(G, vals, label=f"principal-series({i},{j})"))
    seen = set()
    for j in range(n2):
        if j % (q + 1) == 0 or j in seen:
            continue
        seen.update({j, (j * q) % n2})
        vals = []
        for kind, data in info:
            if kind == "central":
                vals.append((q - 1) * theta(j, int(emb[data[0]])))
            elif kind == "unipotent":
                vals.append(-theta(j, int(emb[data[0]])))
            elif kind == "split":
                vals.append(0)
            else:
                zeta, zq, _ = data
                vals.append(-(theta(j, zeta) + theta(j, zq)))
        rows.append(ClassFunction(G, vals, label=f"cuspidal({j})"))
    return IrreducibleTable(G, rows)


# Steinberg ----------------------------------------------------------------------

def steinberg(G: EnumeratedGroup) -> ClassFunction:
    """Alternating sum over standard parabolics of Ind_P^G 1 (= Ind_B^G 1 - 1 in rank one)."""
    sd = G.subgroup_data
    total = ClassFunction.zero(G)
    for rec in sd.parabolics:
        ss_rank = len(rec.M.root_positions) if rec.M is not G else len(G.root_positions)
        ind = induce_values(G, rec.P, np.ones(len(rec.P)))
        total = total + ind if ss_rank % 2 == 0 else total - ind
    st = total.relabel("steinberg")
    if not st.is_irreducible():
        raise StructureError(f"{G.name}: Steinberg character is not irreducible; Borel data broken")
    return st


# Dixon-Schneider -------------------------------------------------------------

def dixon_prime(order: int, exponent: int) -> int:
    """Smallest prime l = 1 mod exponent with l > 2 sqrt(order)."""
    ell = math.isqrt(4 * order)
    while True:
        ell = int(nextprime(ell))
        if ell % exponent == 1:
            break
    if ell >= 2 ** 31:
        raise StructureError("no suitable Dixon prime below 2^31")
    return ell


def class_matrix(G: EnumeratedGroup, r: int) -> np.ndarray:
    """A[j, k] = #{x in C_r : x^-1 z_k in C_j} = #{(x, y) in C_r x C_j : x y = z_k}."""
    k = G.num_classes
    members = G.class_members[r]
    xinv = G.inverse[members]
    A = np.zeros((k, k), dtype=np.int64)
    for kk, z in enumerate(G.class_reps):
        ys = G.mul(xinv, np.full(len(xinv), z))
        A[:, kk] = np.bincount(G.class_of[ys], minlength=k)
    return A


def _split(basis, A, ell):
    """Split span(basis columns) into eigenspaces of A (assumed invariant)."""
    d = basis.shape[1]
    AB = modp.matmul(A, basis, ell)
    piv = _pivot_rows(basis, ell)
    X = modp.matmul(modp.inverse(basis[piv], ell), AB[piv], ell)
    if d == 1:
        return [basis]
    pieces = []
    for lam in modp.roots(modp.charpoly(X, ell), ell):
        Y = modp.nullspace((X - lam * np.eye(d, dtype=np.int64)) % ell, ell)
        pieces.append(modp.matmul(basis, Y, ell))
    if sum(p.shape[1] for p in pieces) != d:
        raise VerificationError("class-sum matrix is not diagonalizable over F_l")
    return pieces


def _pivot_rows(basis, ell):
    _, piv = modp.rref(basis.T, ell)
    return piv


def _eigenvectors(G: EnumeratedGroup, ell: int) -> list:
    k = G.num_classes
    spaces = [np.eye(k, dtype=np.int64)]
    order = sorted(range(1, k), key=lambda c: (G.class_sizes[c], c))
    for r in order:
        if all(s.shape[1] == 1 for s in spaces):
            break
        A = class_matrix(G, r) % ell
        spaces = [piece for s in spaces for piece in _split(s, A, ell)]
    rng = np.random.default_rng(DIXON_SEED)
    tries = 0
    while not all(s.shape[1] == 1 for s in spaces):
        tries += 1
        if tries > 10:
            raise VerificationError("eigenspace separation failed")
        coeffs = rng.integers(0, ell, size=k)
        A = np.zeros((k, k), dtype=np.int64)
        for r in range(k):
            A = (A + coeffs[r] * class_matrix(G, r)) % ell
        spaces = [piece for s in spaces for piece in _split(s, A, ell)]
    return [s[:, 0] for s in spaces]


def dixon_table(G: EnumeratedGroup) -> IrreducibleTable:
    return _dixon_cached(G)


_DIXON_CACHE: dict = {}


def _dixon_cached(G):
    key = id(G)
    hit = _DIXON_CACHE.get(key)
    if hit is not None and hit[0] is G:
        return hit[1]
    table = _dixon_compute(G)
    _DIXON_CACHE[key] = (G, table)
    return table


def _dixon_compute(G: EnumeratedGroup) -> IrreducibleTable:
    k = G.num_classes
    order = G.order
    if k == 1:
        return IrreducibleTable(G, [ClassFunction(G, [1.0], label="dixon-row-0")])
    e = G.exponent
    ell = dixon_prime(order, e)
    z = pow(int(primitive_root(ell)), (ell - 1) // e, ell)
    sizes = G.class_sizes
    inv_cls = G.inverse_class
    power_maps = [G.power_classes(c) for c in range(k)]
    rows = []
    for v in _eigenvectors(G, ell):
        v = v * pow(int(v[0]), -1, ell) % ell
        s = sum(int(v[i]) * int(v[inv_cls[i]]) * pow(int(sizes[i]), -1, ell) for i in range(k)) % ell
        deg_sq = order * pow(s, -1, ell) % ell
        cands = [d for d in sqrt_mod(deg_sq, ell, all_roots=True) if 0 < d < ell / 2]
        if len(cands) != 1:
            raise VerificationError("could not recover the character degree")
        deg = cands[0]
        theta = [deg * int(v[i]) * pow(int(sizes[i]), -1, ell) % ell for i in range(k)]
        values = []
        for c in range(k):
            pcs = power_maps[c]
            o = len(pcs)
            zo = pow(z, e // o, ell)
            inv_o = pow(o, -1, ell)
            total = 0j
            count = 0
            for t in range(o):
                m = sum(theta[pcs[j]] * pow(zo, (-j * t) % o, ell) for j in range(o)) * inv_o % ell
                if m > deg:
                    raise VerificationError("eigenvalue multiplicity out of range")
                count += m
                total += m * np.exp(2j * np.pi * t / o)
            if count != deg:
                raise VerificationError("eigenvalue multiplicities do not sum to the degree")
            values.append(total)
        rows.append(np.array(values))
    rows.sort(key=_row_sort_key)
    fns = [ClassFunction(G, r, label=f"dixon-row-{i}") for i, r in enumerate(rows)]
    table = IrreducibleTable(G, fns)
    if sum(d * d for d in table.degrees) != order:
        raise VerificationError("sum of squared degrees differs from the group order")
    return table


def _row_sort_key(r):
    return (round(r[0].real),) + tuple(
        v for x in r for v in (-round(x.real, 6) + 0.0, -round(x.imag, 6) + 0.0))


# Levi characters -----------------------------------------------------------------

def _torus_params(rec: ParabolicRecord):
    M = rec.M
    d = np.stack([M.mats[:, i, i] for i in range(M.n)], axis=1)
    fam = rec.group.family
    if fam == GL2:
        return d[:, [0, 1]]
    if fam == GSP4:
        lam = M.field.mul(d[:, 0], d[:, 3])
        return np.stack([d[:, 0], d[:, 1], lam], axis=1)
    if fam == SP4:
        return d[:, [0, 1]]
    return None


def levi_table(rec: ParabolicRecord) -> IrreducibleTable:
    """Irreducible characters of the Levi of ``rec``.

    For GL2 / GSP4 (and the SP4 torus and Siegel Levi) they are built as
    products of multiplicative characters and closed-form GL(2) rows; other
    Levis fall back to the Dixon table.
    """
    M = rec.M
    fam = rec.group.family
    F = M.field
    if rec.tag == "group":
        return dixon_table(M) if fam != GL2 else gl2_table(M)
    reps = M.class_reps
    if rec.tag == "torus" and fam in (GL2, GSP4, SP4):
        params = _torus_params(rec)[reps]
        r = params.shape[1]
        rows = []
        for js in np.ndindex(*([F.q - 1] * r)):
            vals = np.ones(len(reps), dtype=complex)
            for a, j in enumerate(js):
                vals = vals * multiplicative_character(F, j)(params[:, a])
            rows.append(ClassFunction(M, vals, label="torus" + str(tuple(int(j) for j in js))))
        return IrreducibleTable(M, rows)
    if rec.tag in ("siegel", "klingen") and (fam == GSP4 or (fam == SP4 and rec.tag == "siegel")):
        gl = build_group(GL2, F.q)
        gtab = gl2_table(gl)
        mats = M.mats[reps]
        if rec.tag == "siegel":
            block = mats[:, :2, :2]
            J = symplectic_form(F)
            sim = F.matmul(F.matmul(np.swapaxes(mats, -1, -2), J), mats)[:, 0, 3]
        else:
            block = mats[:, 1:3, 1:3]
            sim = mats[:, 0, 0]
        gcls = gl.class_of[gl.locate(block)]
        rows = []
        outer = range(F.q - 1) if fam == GSP4 or rec.tag == "klingen" else [0]
        factor = "sim" if rec.tag == "siegel" else "a"
        for lab, row in zip(gtab.labels, gtab.rows):
            for j in outer:
                vals = row.values[gcls] * multiplicative_character(F, j)(sim)
                rows.append(ClassFunction(M, vals, label=f"{lab}*{factor}^{j}"))
        return IrreducibleTable(M, rows)
    return dixon_table(M)

