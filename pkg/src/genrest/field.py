"""Arithmetic in F_q, q = p^k, plus additive and multiplicative characters.

Elements are integers in [0, q) holding the coefficients of the polynomial
basis representation base p (index = c_0 + c_1 p + ... + c_{k-1} p^{k-1}).
Index 0 is zero and index 1 is one.  Every arithmetic helper accepts python
ints or numpy integer arrays.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from sympy import isprime, primitive_root

MAX_ORDER = 2 ** 16

# a field element is its index in [0, q)
FieldElement = int


@dataclass(frozen=True)
class FieldSpec:
    p: int
    k: int = 1

    def __post_init__(self):
        if not isprime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")
        if self.k < 1:
            raise ValueError(f"degree must be positive, got {self.k}")
        if self.q > MAX_ORDER:
            raise ValueError(f"q = {self.q} exceeds the configured bound {MAX_ORDER}")

    @property
    def q(self) -> int:
        return self.p ** self.k

    @classmethod
    def from_order(cls, q: int) -> "FieldSpec":
        if q < 2:
            raise ValueError(f"q = {q} is not a prime power")
        for p in range(2, q + 1):
            if q % p == 0:
                k, r = 0, q
                while r % p == 0:
                    r //= p
                    k += 1
                if r != 1:
                    raise ValueError(f"q = {q} is not a prime power")
                return cls(p, k)
        raise AssertionError("unreachable")


def _poly_mulx(coeffs, modulus, p):
    # multiply by x modulo the monic modulus (coefficients low -> high)
    k = len(coeffs)
    top = coeffs[-1]
    shifted = [0] + list(coeffs[:-1])
    return [(shifted[i] - top * modulus[i]) % p for i in range(k)]


def _to_index(coeffs, p):
    return sum(c * p ** i for i, c in enumerate(coeffs))


def _multiplicative_order_of_x(modulus, p, k):
    q = p ** k
    one = [1] + [0] * (k - 1)
    cur = _poly_mulx(one, modulus, p)
    for n in range(1, q):
        if cur == one:
            return n
        if not any(cur):
            return None
        cur = _poly_mulx(cur, modulus, p)
    return None


def smallest_primitive_polynomial(p: int, k: int) -> tuple:
    """Monic primitive polynomial of degree k over F_p.

    Candidates x^k + c_{k-1} x^{k-1} + ... + c_0 are scanned in increasing
    lexicographic order of (c_{k-1}, ..., c_0); returns (c_0, ..., c_{k-1}).
    """
    q = p ** k
    for top_down in itertools.product(range(p), repeat=k):
        low = tuple(reversed(top_down))
        if low[0] == 0:
            continue
        if _multiplicative_order_of_x(low, p, k) == q - 1:
            return low
    raise ValueError(f"no primitive polynomial of degree {k} over F_{p}")


class FieldTable:
    """Immutable arithmetic tables for F_q."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        p, k, q = spec.p, spec.k, spec.q
        self.p, self.k, self.q = p, k, q
        exp = np.zeros(q - 1, dtype=np.int64)
        if k == 1:
            g = 1 if p == 2 else int(primitive_root(p))
            self.modulus = ((-g) % p,)
            self.generator = g
            x = 1
            for i in range(q - 1):
                exp[i] = x
                x = (x * g) % p
        else:
            self.modulus = smallest_primitive_polynomial(p, k)
            self.generator = p
            cur = [1] + [0] * (k - 1)
            for i in range(q - 1):
                exp[i] = _to_index(cur, p)
                cur = _poly_mulx(cur, self.modulus, p)
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        if (log[1:] < 0).any():
            raise AssertionError("exp table does not cover the multiplicative group")
        self.exp = exp
        self.log = log
        self._pows = p ** np.arange(k, dtype=np.int64)
        self.exp.setflags(write=False)
        self.log.setflags(write=False)
        trace = np.zeros(q, dtype=np.int64)
        xs = np.arange(q, dtype=np.int64)
        acc = np.zeros(q, dtype=np.int64)
        for i in range(k):
            acc = self.add(acc, self.power(xs, p ** i))
        trace[:] = acc
        if (trace >= p).any():
            raise AssertionError("trace left the prime field")
        self.trace = trace
        self.trace.setflags(write=False)

    def __repr__(self):
        return f"FieldTable(q={self.q})"

    # elementwise arithmetic -------------------------------------------------

    def add(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        p = self.p
        out = 0
        for w in self._pows:
            w = int(w)
            out = out + ((a // w % p + b // w % p) % p) * w
        return out

    def neg(self, a):
        if self.k == 1:
            return (-a) % self.p
        p = self.p
        out = 0
        for w in self._pows:
            w = int(w)
            out = out + ((-(a // w % p)) % p) * w
        return out

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.k == 1:
            return (a * b) % self.p
        a_arr, b_arr = np.asarray(a), np.asarray(b)
        n = self.q - 1
        s = (self.log[a_arr] + self.log[b_arr]) % n
        out = np.where((a_arr == 0) | (b_arr == 0), 0, self.exp[s])
        return int(out) if out.ndim == 0 else out

    def inv(self, a):
        a_arr = np.asarray(a)
        if (a_arr == 0).any():
            raise ZeroDivisionError("zero has no multiplicative inverse")
        out = self.exp[(-self.log[a_arr]) % (self.q - 1)]
        return int(out) if out.ndim == 0 else out

    def power(self, a, e: int):
        a_arr = np.asarray(a)
        safe = np.where(a_arr == 0, 1, a_arr)
        out = self.exp[(self.log[safe] * e) % (self.q - 1)]
        if e > 0:
            out = np.where(a_arr == 0, 0, out)
        elif (a_arr == 0).any():
            raise ZeroDivisionError("zero raised to a non-positive power")
        return int(out) if np.ndim(out) == 0 else out

    def tr(self, a):
        out = self.trace[np.asarray(a)]
        return int(out) if out.ndim == 0 else out

    def matmul(self, A, B):
        """Batched matrix product over F_q (broadcasts like ``np.matmul``)."""
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if self.k == 1:
            return np.matmul(A, B) % self.p
        n = A.shape[-1]
        terms = [self.mul(A[..., :, j:j + 1], B[..., j:j + 1, :]) for j in range(n)]
        out = terms[0]
        for t in terms[1:]:
            out = self.add(out, t)
        return out

    def det(self, A):
        """Batched determinant by cofactor expansion (n <= 4)."""
        A = np.asarray(A, dtype=np.int64)
        n = A.shape[-1]
        if n == 1:
            return A[..., 0, 0]
        out = np.zeros(A.shape[:-2], dtype=np.int64)
        for j in range(n):
            minor = np.delete(np.delete(A, 0, axis=-2), j, axis=-1)
            term = self.mul(A[..., 0, j], self.det(minor))
            out = self.add(out, term) if j % 2 == 0 else self.sub(out, term)
        return out

    def matinv(self, A):
        """Batched inverse via the adjugate."""
        A = np.asarray(A, dtype=np.int64)
        n = A.shape[-1]
        d = self.det(A)
        if (np.asarray(d) == 0).any():
            raise ZeroDivisionError("singular matrix")
        dinv = self.inv(d)
        out = np.zeros_like(A)
        if n == 1:
            out[..., 0, 0] = dinv
            return out
        for i in range(n):
            for j in range(n):
                minor = np.delete(np.delete(A, j, axis=-2), i, axis=-1)
                c = self.det(minor)
                if (i + j) % 2:
                    c = self.neg(c)
                out[..., i, j] = self.mul(c, dinv)
        return out


@lru_cache(maxsize=None)
def field_build(spec: FieldSpec) -> FieldTable:
    return FieldTable(spec)


def gf(q: int) -> FieldTable:
    """Shorthand: the cached field table of order q."""
    return field_build(FieldSpec.from_order(q))


def additive_character(tbl: FieldTable, a: int):
    """x -> exp(2 pi i Tr(a x) / p)."""
    p = tbl.p

    def psi(x):
        t = np.asarray(tbl.tr(tbl.mul(a, np.asarray(x))))
        out = np.exp(2j * np.pi * t / p)
        return complex(out) if out.ndim == 0 else out

    return psi


def multiplicative_character(tbl: FieldTable, j: int):
    """x -> exp(2 pi i j log(x) / (q - 1)) on nonzero x."""
    n = tbl.q - 1
    if not 0 <= j < n:
        raise ValueError(f"character index {j} outside [0, {n})")

    def chi(x):
        x = np.asarray(x)
        if (x == 0).any():
            raise ValueError("multiplicative character evaluated at 0")
        out = np.exp(2j * np.pi * ((j * tbl.log[x]) % n) / n)
        return complex(out) if out.ndim == 0 else out

    return chi


def root_of_unity(n: int, k: int = 1) -> complex:
    return cmath.exp(2j * cmath.pi * (k % n) / n)
