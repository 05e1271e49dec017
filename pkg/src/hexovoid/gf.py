"""Finite field arithmetic over GF(p^e) with vectorised table lookups.

Elements are dense integers 0..q-1 in the polynomial-coefficient encoding
``a = c_0 + c_1 p + ... + c_{e-1} p^{e-1}``, so the prime subfield is
``{0, ..., p-1}`` and for prime ``q`` the encoding is the residue itself.
All arithmetic methods accept Python ints or numpy integer arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

# low-to-high coefficient lists; fixed so coordinates are reproducible
DEFAULT_MODULI = {
    4: (1, 1, 1),
    8: (1, 1, 0, 1),
    9: (1, 0, 1),
    16: (1, 1, 0, 0, 1),
    25: (2, 1, 1),
    27: (1, 2, 0, 1),
    32: (1, 0, 1, 0, 0, 1),
    49: (1, 0, 1),
    64: (1, 1, 0, 0, 0, 0, 1),
}

_TABLE_LIMIT = 256


class FieldError(ValueError):
    pass


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q = p**e``; raise if ``q`` is not a prime power."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise FieldError(f"{q} is not a prime power")
    return p, e


def is_prime_power(q: int) -> bool:
    try:
        prime_power(q)
    except FieldError:
        return False
    return True


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _poly_mulmod(a, b, modulus, p):
    """Multiply coefficient lists modulo a monic ``modulus`` over GF(p)."""
    e = len(modulus) - 1
    prod = [0] * (2 * e - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k]
        if c:
            for j in range(e + 1):
                prod[k - e + j] = (prod[k - e + j] - c * modulus[j]) % p
    return prod[:e]


def _poly_has_factor(modulus, p) -> bool:
    """Trial division by every monic polynomial of degree <= e/2."""
    e = len(modulus) - 1
    for d in range(1, e // 2 + 1):
        for code in range(p**d):
            div = [(code // p**i) % p for i in range(d)] + [1]
            rem = list(modulus)
            for k in range(e, d - 1, -1):
                c = rem[k]
                if c:
                    for j in range(d + 1):
                        rem[k - d + j] = (rem[k - d + j] - c * div[j]) % p
            if not any(rem[:d]):
                return True
    return False


def is_irreducible(modulus, p: int) -> bool:
    if len(modulus) < 2 or modulus[-1] != 1:
        return False
    if len(modulus) == 2:
        return True
    return not _poly_has_factor(tuple(modulus), p)


def find_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree ``e`` over GF(p) in lexicographic order."""
    for code in range(p**e):
        poly = tuple((code // p**i) % p for i in range(e)) + (1,)
        if is_irreducible(poly, p):
            return poly
    raise FieldError(f"no irreducible polynomial of degree {e} over GF({p})")


class FiniteField:
    """GF(q) with discrete-log tables and a deterministic primitive element.

    ``omega`` is the smallest primitive element in the dense order;
    ``exp_table[k] = omega**k`` and ``log_table[a]`` inverts it (``log_table[0] = -1``).
    """

    def __init__(self, q: int, modulus=None):
        self.p, self.e = prime_power(q)
        self.q = q
        if self.e > 1 and q > 2**16:
            raise FieldError("fields with q > 2^16 are not supported")
        if modulus is None:
            modulus = (0, 1) if self.e == 1 else DEFAULT_MODULI.get(q) or find_irreducible(self.p, self.e)
        modulus = tuple(int(c) % self.p for c in modulus)
        if len(modulus) != self.e + 1 or not is_irreducible(modulus, self.p):
            raise FieldError(f"modulus {modulus} is not a monic irreducible of degree {self.e}")
        self.modulus = modulus
        self._build_tables()

    def __repr__(self):
        return f"FiniteField({self.q})"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.q, self.modulus) == (other.q, other.modulus)

    def __hash__(self):
        return hash((self.q, self.modulus))

    # -- construction -----------------------------------------------------

    def _digits(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.e)]

    def _encode(self, digits) -> int:
        return sum(int(c) * self.p**i for i, c in enumerate(digits))

    def _slow_mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        return self._encode(_poly_mulmod(self._digits(a), self._digits(b), self.modulus, self.p))

    def _slow_pow(self, a: int, k: int) -> int:
        r = 1
        while k:
            if k & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            k >>= 1
        return r

    def _build_tables(self):
        q = self.q
        factors = _prime_factors(q - 1)
        for g in range(1, q):
            if self._slow_pow(g, q - 1) == 1 and all(self._slow_pow(g, (q - 1) // r) != 1 for r in factors):
                break
        self.omega = g
        exp = np.empty(q - 1, dtype=np.int64)
        x = 1
        for k in range(q - 1):
            exp[k] = x
            x = self._slow_mul(x, g)
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        self.exp_table = exp
        self.log_table = log
        # addition by digit vectors
        idx = np.arange(q)
        self._digit_mat = np.stack([(idx // self.p**i) % self.p for i in range(self.e)], axis=-1)
        self._weights = self.p ** np.arange(self.e)
        self._neg = (((-self._digit_mat) % self.p) * self._weights).sum(-1)
        self.neg_table = self._neg
        self.inv_table = np.zeros(q, dtype=np.int64)
        self.inv_table[1:] = exp[(-log[1:]) % (q - 1)]
        if q <= _TABLE_LIMIT:
            a, b = np.meshgrid(idx, idx, indexing="ij")
            self.add_table = self._add_compute(a, b)
            self.mul_table = self._mul_compute(a, b)
        else:
            self.add_table = self.mul_table = None

    def _add_compute(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        da = self._digit_mat[a]
        db = self._digit_mat[b]
        return (((da + db) % self.p) * self._weights).sum(-1)

    def _mul_compute(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return a * b % self.p
        la = self.log_table[a]
        lb = self.log_table[b]
        out = self.exp_table[(la + lb) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    # -- elementwise arithmetic -------------------------------------------

    @staticmethod
    def _ret(x, scalar):
        return int(x) if scalar else x

    def add(self, a, b):
        scalar = np.isscalar(a) and np.isscalar(b)
        if self.add_table is not None:
            return self._ret(self.add_table[a, b], scalar)
        return self._ret(self._add_compute(a, b), scalar)

    def mul(self, a, b):
        scalar = np.isscalar(a) and np.isscalar(b)
        if self.mul_table is not None:
            return self._ret(self.mul_table[a, b], scalar)
        return self._ret(self._mul_compute(a, b), scalar)

    def neg(self, a):
        return self._ret(self._neg[a], np.isscalar(a))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("inverse of zero in GF(%d)" % self.q)
        return self._ret(self.inv_table[a], np.isscalar(a))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, k: int):
        """``a**k`` elementwise; ``0**0 = 1``."""
        a = np.asarray(a, dtype=np.int64)
        if k == 0:
            out = np.ones_like(a)
        else:
            la = self.log_table[a]
            out = np.where(a == 0, 0, self.exp_table[(la * k) % (self.q - 1)])
        return self._ret(out, out.ndim == 0)

    def element(self, n: int) -> int:
        """Image of the integer ``n`` in the prime subfield."""
        return n % self.p

    def omega_pow(self, k: int) -> int:
        return int(self.exp_table[k % (self.q - 1)])

    @cached_property
    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    # -- linear algebra helpers -------------------------------------------

    def dot(self, a, b):
        """Matrix product over GF(q) with numpy broadcasting (``a @ b``)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return (a @ b) % self.p
        if b.ndim == 1:
            return self.dot(a, b[:, None])[..., 0]
        if a.ndim == 1:
            return self.dot(a[None, :], b)[..., 0, :]
        acc = None
        for k in range(a.shape[-1]):
            term = self.mul(a[..., :, k, None], b[..., k, None, :])
            acc = term if acc is None else self.add(acc, term)
        return acc

    def det3(self, m):
        """Determinant of (batched) 3x3 matrices."""
        m = np.asarray(m, dtype=np.int64)
        mul, add, sub = self.mul, self.add, self.sub

        def minor(i, j, k, l):
            return sub(mul(m[..., 1, i], m[..., 2, j]), mul(m[..., 1, k], m[..., 2, l]))

        t0 = mul(m[..., 0, 0], minor(1, 2, 2, 1))
        t1 = mul(m[..., 0, 1], minor(0, 2, 2, 0))
        t2 = mul(m[..., 0, 2], minor(0, 1, 1, 0))
        return add(sub(t0, t1), t2)

    def mat_inv(self, m):
        """Inverse of a single square matrix by Gauss-Jordan elimination."""
        m = np.asarray(m, dtype=np.int64)
        n = m.shape[0]
        aug = np.concatenate([m, np.eye(n, dtype=np.int64)], axis=1)
        for col in range(n):
            piv = next((r for r in range(col, n) if aug[r, col]), None)
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            aug[[col, piv]] = aug[[piv, col]]
            aug[col] = self.mul(self.inv(int(aug[col, col])), aug[col])
            for r in range(n):
                if r != col and aug[r, col]:
                    aug[r] = self.sub(aug[r], self.mul(int(aug[r, col]), aug[col]))
        return aug[:, n:]

    def mat_pow(self, m, k: int):
        m = np.asarray(m, dtype=np.int64)
        out = np.eye(m.shape[0], dtype=np.int64)
        while k:
            if k & 1:
                out = self.dot(out, m)
            m = self.dot(m, m)
            k >>= 1
        return out

    # -- predicates -------------------------------------------------------

    def is_square(self, a) -> bool:
        a = int(a)
        if a == 0 or self.p == 2:
            return True
        return self.log_table[a] % 2 == 0

    def sqrt(self, a) -> int:
        """Square root with the smaller dense index; raise if none exists."""
        roots = np.flatnonzero(self.mul(self.elements, self.elements) == int(a))
        if roots.size == 0:
            raise FieldError(f"{a} is not a square in GF({self.q})")
        return int(roots[0])

    def frobenius(self, a):
        return self.power(a, self.p)

    def info(self) -> dict:
        """Parameters plus a cube/square census of the multiplicative group."""
        nz = self.elements[1:]
        cubes = sorted({int(x) for x in self.power(nz, 3)})
        squares = sorted({int(x) for x in self.mul(nz, nz)})
        return {
            "q": self.q,
            "p": self.p,
            "e": self.e,
            "modulus": list(self.modulus),
            "omega": self.omega,
            "nonzero_cubes": len(cubes),
            "nonzero_squares": len(squares),
        }


@dataclass(frozen=True)
class Cubic:
    """The depressed cubic ``x^3 + c x + d`` over ``field``."""

    field: FiniteField
    c: int
    d: int

    def __call__(self, x):
        f = self.field
        x3 = f.power(x, 3)
        return f.add(f.add(x3, f.mul(self.c, x)), self.d)


def embed_subfield(big: FiniteField, small: FiniteField) -> np.ndarray:
    """Field embedding ``small -> big`` as a lookup array.

    The polynomial generator of ``small`` is sent to the smallest root of
    its modulus inside ``big``; the map is then extended additively.
    """
    if big.p != small.p or big.e % small.e:
        raise FieldError(f"GF({small.q}) is not a subfield of GF({big.q})")
    p = small.p
    if small.e == 1:
        return np.arange(p, dtype=np.int64)
    # evaluate small.modulus at every element of big
    acc = np.zeros(big.q, dtype=np.int64)
    for coef in reversed(small.modulus):
        acc = big.add(big.mul(acc, big.elements), coef)
    beta = int(np.flatnonzero(acc == 0)[0])
    powers = [1]
    for _ in range(small.e - 1):
        powers.append(big.mul(powers[-1], beta))
    table = np.zeros(small.q, dtype=np.int64)
    for a in range(small.q):
        val = 0
        for i, c in enumerate(small._digits(a)):
            val = big.add(val, big.mul(c, powers[i]))
        table[a] = val
    return table


def rel_trace(x, big: FiniteField, small: FiniteField) -> int:
    """Relative trace ``Tr_{Q/q}(x) = x + x^q + ... + x^{q^{n-1}}`` into ``small``."""
    table = embed_subfield(big, small)
    n = big.e // small.e
    total, y = 0, int(x)
    for _ in range(n):
        total = big.add(total, y)
        y = big.power(y, small.q)
    hits = np.flatnonzero(table == total)
    if hits.size != 1:
        raise FieldError("trace landed outside the base field")
    return int(hits[0])


def abs_trace(a, field: FiniteField) -> int:
    """Absolute trace into the prime field (an integer 0..p-1)."""
    total, y = 0, int(a)
    for _ in range(field.e):
        total = field.add(total, y)
        y = field.power(y, field.p)
    return total


def is_cube(field: FiniteField, a) -> bool:
    a = int(a)
    if a == 0:
        raise FieldError("cube test is undefined for zero here")
    if (field.q - 1) % 3:
        return True
    return field.log_table[a] % 3 == 0


def sqrt_neg3(field: FiniteField) -> int:
    if field.p == 2 or (field.q - 1) % 3:
        raise FieldError(f"GF({field.q}) must have odd order q = 1 mod 3")
    return field.sqrt(field.neg(field.element(3)))


def discriminant(f: Cubic) -> int:
    """``-4c^3 - 27d^2``; equals ``d^2`` in characteristic 2."""
    F = f.field
    t1 = F.mul(F.element(-4), F.power(f.c, 3))
    t2 = F.mul(F.element(-27), F.mul(f.d, f.d))
    return F.add(t1, t2)


def cubic_root_count(f: Cubic) -> int:
    return int(np.count_nonzero(f(f.field.elements) == 0))


def cubic_has_no_root_criterion(f: Cubic) -> bool:
    """Sufficient condition for a depressed cubic to be rootless.

    Requires ``q = 1 (mod 3)`` and a nonzero discriminant. Odd ``q``: the
    discriminant must be ``81 b^2`` and ``(-d + a b)/2`` a non-cube, where
    ``a^2 = -3``; both signs of ``b`` are tried. Even ``q``: the trace
    condition on ``c^3/d^2`` plus both roots of ``t^2 + d t + c^3`` being
    non-cubes.
    """
    F = f.field
    if (F.q - 1) % 3:
        raise FieldError("criterion needs q = 1 mod 3")
    disc = discriminant(f)
    if disc == 0:
        raise FieldError("criterion needs a nonzero discriminant")
    if F.p != 2:
        beta_sq = F.div(disc, F.element(81))
        if not F.is_square(beta_sq):
            return False
        beta = F.sqrt(beta_sq)
        alpha = sqrt_neg3(F)
        half = F.inv(F.element(2))
        for b in (beta, F.neg(beta)):
            val = F.mul(half, F.add(F.neg(f.d), F.mul(alpha, b)))
            if val != 0 and not is_cube(F, val):
                return True
        return False
    if f.d == 0:
        raise FieldError("even-characteristic criterion needs d != 0")
    c3 = F.power(f.c, 3)
    if abs_trace(F.div(c3, F.mul(f.d, f.d)), F) != abs_trace(1, F):
        return False
    t = F.elements
    roots = np.flatnonzero(F.add(F.add(F.mul(t, t), F.mul(f.d, t)), c3) == 0)
    if roots.size == 0:
        return False
    return all(r != 0 and not is_cube(F, int(r)) for r in roots)


def xyz_form_anisotropic(field: FiniteField, theta) -> bool:
    """True iff ``x^3 + t y^3 + t^2 z^3 - 3 t x y z`` has only the trivial zero."""
    F = field
    theta = int(theta)
    if theta == 0 or is_cube(F, theta):
        raise FieldError(f"theta = {theta} must be a non-cube")
    x, y, z = np.meshgrid(F.elements, F.elements, F.elements, indexing="ij")
    val = F.add(F.power(x, 3), F.mul(theta, F.power(y, 3)))
    val = F.add(val, F.mul(F.mul(theta, theta), F.power(z, 3)))
    cross = F.mul(F.mul(F.element(-3), theta), F.mul(x, F.mul(y, z)))
    val = F.add(val, cross)
    return int(np.count_nonzero(val == 0)) == 1
