"""Arithmetic in finite fields GF(p^k), tuned for quadratic extensions.

Field elements are plain Python integers in ``range(p**k)``: the integer is
the little-endian base-p encoding of the coefficient vector of the element
in the polynomial basis, so ``0`` and ``1`` are the additive and
multiplicative identities and the residue field GF(p) occupies indices
``0..p-1``.  All operations go through a :class:`GF` context, which fixes
the modulus polynomial and carries the log/antilog tables.

The modulus is the lexicographically smallest monic irreducible polynomial
of degree k over GF(p), where "lexicographically smallest" means smallest
little-endian integer encoding of the non-leading coefficients.  That makes
contexts reproducible across runs and machines without storing tables.

Quadratic extensions GF(q^2) (k even, q = p^(k//2)) get the extra helpers
used by classical unital constructions: the involutory automorphism
x -> x^q, the norm x -> x^(q+1) onto GF(q), square testing inside GF(q),
and the absolute trace GF(q) -> F_2 in characteristic two.
"""

from __future__ import annotations

from functools import lru_cache

# Fields up to this order get full log/antilog tables; nothing in this
# package needs more, but the generic polynomial path keeps working above.
TABLE_LIMIT = 1 << 16

# Full addition tables are only worth the memory for small orders.
ADD_TABLE_LIMIT = 1 << 10


class FieldError(ValueError):
    """Bad field parameters or an operation outside its domain."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n, ascending. Trial division."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Write q = p^e with p prime, or raise FieldError."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if p * p > q:
            break
        if q % p:
            continue
        e = 0
        m = q
        while m % p == 0:
            m //= p
            e += 1
        if m != 1:
            raise FieldError(f"{q} is not a prime power")
        return p, e
    # q itself prime
    if not is_prime(q):
        raise FieldError(f"{q} is not a prime power")
    return q, 1


# ----------------------------------------------------------------------
# polynomial helpers over GF(p)
#
# Polynomials are tuples of coefficients, little-endian, no trailing
# zeros (the zero polynomial is the empty tuple).  Only used to set up a
# context; element-level arithmetic runs on tables.
# ----------------------------------------------------------------------


def _poly_trim(c: list[int]) -> tuple[int, ...]:
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return tuple(c[:n])


def _poly_mul(a: tuple[int, ...], b: tuple[int, ...], p: int) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a: tuple[int, ...], m: tuple[int, ...], p: int) -> tuple[int, ...]:
    # m is monic
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - dm
            for i, mi in enumerate(m):
                a[shift + i] = (a[shift + i] - lead * mi) % p
        a.pop()
    return _poly_trim(a)


def _index_to_poly(idx: int, p: int) -> tuple[int, ...]:
    c = []
    while idx:
        idx, r = divmod(idx, p)
        c.append(r)
    return tuple(c)


def _poly_to_index(c: tuple[int, ...], p: int) -> int:
    idx = 0
    for ci in reversed(c):
        idx = idx * p + ci
    return idx


def _is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    if poly[0] == 0:  # divisible by x
        return deg == 1
    for d in range(1, deg // 2 + 1):
        for low in range(p**d):
            tail = _index_to_poly(low, p)
            cand = tail + (0,) * (d - len(tail)) + (1,)
            if not _poly_mod(poly, cand, p):
                return False
    return True


def _smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree k over GF(p)."""
    if k == 1:
        return (0, 1)  # the polynomial x; any monic linear works, x is smallest
    for low in range(p**k):
        tail = _index_to_poly(low, p)
        poly = tail + (0,) * (k - len(tail)) + (1,)
        if _is_irreducible(poly, p):
            return poly
    raise FieldError(f"no irreducible polynomial of degree {k} over GF({p})")  # unreachable


class GF:
    """Context for GF(p^k) with table-based arithmetic.

    Parameters
    ----------
    p : int
        Characteristic, prime.
    k : int
        Extension degree over the prime field, >= 1.

    Elements are integers 0..p**k-1 encoding coefficient vectors in
    little-endian base p.  Construct instances through :func:`gf`, which
    caches one context per (p, k).
    """

    def __init__(self, p: int, k: int):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if k < 1:
            raise FieldError(f"extension degree {k} must be >= 1")
        self.p = p
        self.k = k
        self.order = p**k
        self.modulus = _smallest_irreducible(p, k)
        if not _is_irreducible(self.modulus, p):
            raise FieldError("modulus failed irreducibility recheck")

        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        self.generator: int | None = None
        if self.order <= TABLE_LIMIT:
            self._build_tables()

        self._add_table: list[list[int]] | None = None
        if self.order <= ADD_TABLE_LIMIT:
            self._add_table = [
                [self._add_slow(a, b) for b in range(self.order)] for a in range(self.order)
            ]

        self._frob: list[int] | None = None
        self._subfield: tuple[int, ...] | None = None

    # -- construction internals ------------------------------------------------

    def _mul_poly(self, a: int, b: int) -> int:
        pa = _index_to_poly(a, self.p)
        pb = _index_to_poly(b, self.p)
        return _poly_to_index(_poly_mod(_poly_mul(pa, pb, self.p), self.modulus, self.p), self.p)

    def _pow_poly(self, a: int, e: int) -> int:
        out = 1
        base = a
        while e:
            if e & 1:
                out = self._mul_poly(out, base)
            base = self._mul_poly(base, base)
            e >>= 1
        return out

    def _build_tables(self) -> None:
        n = self.order - 1
        factors = prime_factors(n)
        g = None
        for cand in range(2, self.order):
            if all(self._pow_poly(cand, n // f) != 1 for f in factors):
                g = cand
                break
        if g is None:  # order 2: the unit group is trivial
            g = 1
        # explicit order check, not just the factor test above
        if self._pow_poly(g, n) != 1:
            raise FieldError("generator candidate has wrong order")
        self.generator = g
        exp = [1] * (2 * n)
        acc = 1
        for i in range(1, n):
            acc = self._mul_poly(acc, g)
            exp[i] = acc
        if self._mul_poly(acc, g) != 1:
            raise FieldError("generator does not have full multiplicative order")
        for i in range(n, 2 * n):
            exp[i] = exp[i - n]
        log = [0] * self.order
        for i in range(n):
            log[exp[i]] = i
        self._exp = exp
        self._log = log

    def _add_slow(self, a: int, b: int) -> int:
        p = self.p
        out = 0
        mult = 1
        while a or b:
            a, ra = divmod(a, p)
            b, rb = divmod(b, p)
            out += ((ra + rb) % p) * mult
            mult *= p
        return out

    # -- element encoding --------------------------------------------------------

    def coeffs(self, a: int) -> tuple[int, ...]:
        """Little-endian coefficient vector of length k."""
        self._check(a)
        c = _index_to_poly(a, self.p)
        return c + (0,) * (self.k - len(c))

    def element(self, coeffs) -> int:
        c = list(coeffs)
        if len(c) > self.k:
            raise FieldError("too many coefficients")
        return _poly_to_index(_poly_trim([x % self.p for x in c]), self.p)

    def _check(self, a: int) -> None:
        if not 0 <= a < self.order:
            raise FieldError(f"{a} is not an element index of GF({self.p}^{self.k})")

    def elements(self):
        return range(self.order)

    # -- ring operations ----------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self._add_table is not None:
            return self._add_table[a][b]
        self._check(a)
        self._check(b)
        return self._add_slow(a, b)

    def neg(self, a: int) -> int:
        self._check(a)
        p = self.p
        out = 0
        mult = 1
        while a:
            a, r = divmod(a, p)
            out += ((p - r) % p) * mult
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            self._check(a)
            self._check(b)
            return 0
        if self._log is not None:
            self._check(a)
            self._check(b)
            return self._exp[self._log[a] + self._log[b]]
        return self._mul_poly(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldError("zero has no inverse")
        self._check(a)
        if self._log is not None:
            return self._exp[self.order - 1 - self._log[a]]
        return self._pow_poly(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        self._check(a)
        if a == 0:
            if e < 0:
                raise FieldError("zero has no inverse")
            return 1 if e == 0 else 0
        n = self.order - 1
        e %= n
        if self._log is not None:
            return self._exp[self._log[a] * e % n]
        return self._pow_poly(a, e)

    # -- quadratic-extension structure ---------------------------------------------

    @property
    def subfield_order(self) -> int:
        if self.k % 2:
            raise FieldError(f"GF({self.p}^{self.k}) is not a quadratic extension")
        return self.p ** (self.k // 2)

    def frobenius_q(self, a: int) -> int:
        """The involution a -> a^q of GF(q^2), q = p^(k/2)."""
        q = self.subfield_order
        if self._frob is None:
            self._frob = [self.pow(x, q) for x in range(self.order)]
            for x in range(self.order):  # involution check
                if self._frob[self._frob[x]] != x:
                    raise FieldError("frobenius table is not an involution")
        self._check(a)
        return self._frob[a]

    def in_subfield(self, a: int) -> bool:
        return self.frobenius_q(a) == a

    def subfield_elements(self) -> tuple[int, ...]:
        """Indices of GF(q) inside GF(q^2), ascending."""
        if self._subfield is None:
            q = self.subfield_order
            sub = tuple(a for a in range(self.order) if self.frobenius_q(a) == a)
            if len(sub) != q:
                raise FieldError("fixed field of x -> x^q has wrong size")
            self._subfield = sub
        return self._subfield

    def norm_to_subfield(self, a: int) -> int:
        """Norm GF(q^2) -> GF(q), a -> a^(q+1)."""
        n = self.pow(a, self.subfield_order + 1)
        if not self.in_subfield(n):
            raise FieldError("norm landed outside the subfield")
        return n

    # -- squares and traces ------------------------------------------------------------

    def is_square(self, a: int) -> bool:
        """Is a a square in this field? Odd order only; 0 counts as a square."""
        if self.p == 2:
            raise FieldError("square testing needs odd characteristic")
        self._check(a)
        if a == 0:
            return True
        return self.pow(a, (self.order - 1) // 2) == 1

    def subfield_is_square(self, a: int) -> bool:
        """Is a (an element of GF(q) inside GF(q^2)) a square in GF(q)?"""
        if self.p == 2:
            raise FieldError("square testing needs odd characteristic")
        if not self.in_subfield(a):
            raise FieldError(f"{a} is not in the subfield GF({self.subfield_order})")
        if a == 0:
            return True
        return self.pow(a, (self.subfield_order - 1) // 2) == 1

    def absolute_trace_bit(self, a: int) -> int:
        """Absolute trace of this characteristic-2 field down to F_2, as 0 or 1."""
        if self.p != 2:
            raise FieldError("binary trace needs characteristic 2")
        self._check(a)
        t = 0
        x = a
        for _ in range(self.k):
            t = self.add(t, x)
            x = self.mul(x, x)
        if t not in (0, 1):
            raise FieldError("trace landed outside F_2")
        return t

    def subfield_trace_bit(self, a: int) -> int:
        """Absolute trace GF(q) -> F_2 for a in the subfield of GF(q^2), q = 2^e."""
        if self.p != 2:
            raise FieldError("binary trace needs characteristic 2")
        if not self.in_subfield(a):
            raise FieldError(f"{a} is not in the subfield GF({self.subfield_order})")
        e = self.k // 2
        t = 0
        x = a
        for _ in range(e):
            t = self.add(t, x)
            x = self.mul(x, x)
        if t not in (0, 1):
            raise FieldError("trace landed outside F_2")
        return t

    # -- misc --------------------------------------------------------------------------

    def serialize(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k})"


@lru_cache(maxsize=None)
def gf(p: int, k: int) -> GF:
    """Cached GF(p^k) context."""
    return GF(p, k)


def gf_of_order(n: int) -> GF:
    """Cached context for the field with n elements."""
    p, k = prime_power(n)
    return gf(p, k)
