"""Arithmetic in small fields F_{p^k} through exp/log tables.

Elements are encoded as integers whose base-p digits are the coefficients
of a polynomial in the primitive element x (digit i multiplies x**i).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from .errors import PreconditionError

MAX_FIELD_SIZE = 10**7


def prime_factors(n: int) -> list:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and prime_factors(n) == [n]


def prime_power(q: int) -> tuple:
    """Split ``q = p**e``; raises if ``q`` is not a prime power."""
    if q < 2:
        raise PreconditionError(f"{q} is not a prime power")
    ps = prime_factors(q)
    if len(ps) != 1:
        raise PreconditionError(f"{q} is not a prime power")
    p, e = ps[0], 0
    while q > 1:
        q //= p
        e += 1
    return p, e


def _polymulmod(a: list, b: list, f: list, p: int) -> list:
    """Product of residues a, b modulo the monic f (coefficient lists, low first)."""
    k = len(f) - 1
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for i in range(len(prod) - 1, k - 1, -1):
        c = prod[i]
        if c:
            for j in range(k + 1):
                prod[i - k + j] = (prod[i - k + j] - c * f[j]) % p
    return prod[:k]


def _x_power(e: int, f: list, p: int) -> list:
    k = len(f) - 1
    result = [1] + [0] * (k - 1)
    base = ([0, 1] + [0] * (k - 2)) if k > 1 else [(-f[0]) % p]
    while e:
        if e & 1:
            result = _polymulmod(result, base, f, p)
        base = _polymulmod(base, base, f, p)
        e >>= 1
    return result


def is_primitive(f: list, p: int) -> bool:
    """True iff x generates the unit group of F_p[x]/(f), f monic of degree k."""
    k = len(f) - 1
    order = p**k - 1
    one = [1] + [0] * (k - 1)
    if _x_power(order, f, p) != one:
        return False
    return all(_x_power(order // r, f, p) != one for r in prime_factors(order))


@lru_cache(maxsize=None)
def primitive_polynomial(p: int, k: int) -> tuple:
    """Lexicographically smallest primitive monic polynomial of degree k over F_p.

    Returned as coefficients (c_0, ..., c_{k-1}, 1).
    """
    for tail in product(range(p), repeat=k):
        low = list(reversed(tail))  # lexicographic on (c_{k-1}, ..., c_0)
        if low[0] == 0:
            continue
        f = low + [1]
        if is_primitive(f, p):
            return tuple(f)
    raise AssertionError(f"no primitive polynomial of degree {k} over F_{p}")


class FiniteField:
    """F_{p^k} with a full discrete-log table."""

    def __init__(self, p: int, k: int = 1):
        if not is_prime(p):
            raise PreconditionError(f"characteristic {p} is not prime")
        if k < 1:
            raise PreconditionError("extension degree must be positive")
        self.p = p
        self.k = k
        self.size = p**k
        if self.size > MAX_FIELD_SIZE:
            raise PreconditionError(f"field of size {self.size} exceeds {MAX_FIELD_SIZE}")
        self.modulus = primitive_polynomial(p, k)
        self.order = self.size - 1
        self._build_tables()

    def _times_x(self, v: int) -> int:
        p, k = self.p, self.k
        top_unit = p ** (k - 1)
        top, rest = divmod(v, top_unit)
        shifted = rest * p
        if top == 0:
            return shifted
        # subtract top * (f - x^k) digitwise
        digits = self.digits(shifted)
        for j in range(k):
            digits[j] = (digits[j] - top * self.modulus[j]) % p
        return self.from_digits(digits)

    def _build_tables(self):
        exp = [0] * self.order
        log = [-1] * self.size
        v = 1
        for i in range(self.order):
            exp[i] = v
            log[v] = i
            v = self._times_x(v)
        if v != 1:
            raise AssertionError("modulus is not primitive")
        self.exp_table = exp
        self.log_table = log

    def digits(self, v: int) -> list:
        out = []
        for _ in range(self.k):
            v, d = divmod(v, self.p)
            out.append(d)
        return out

    def from_digits(self, digits) -> int:
        v = 0
        for d in reversed(digits):
            v = v * self.p + d
        return v

    def element(self, n: int) -> int:
        """Image of the integer ``n`` in the prime subfield."""
        return n % self.p

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        da, db = self.digits(a), self.digits(b)
        return self.from_digits([(x + y) % self.p for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        return self.from_digits([(-x) % self.p for x in self.digits(a)])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp_table[(self.log_table[a] + self.log_table[b]) % self.order]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("0 has no inverse")
            return 0
        return self.exp_table[(self.log_table[a] * e) % self.order]

    def inv(self, a: int) -> int:
        return self.pow(a, -1)

    def generator(self) -> int:
        return self.exp_table[1 % self.order]

    def is_square(self, a: int) -> bool:
        if a == 0 or self.p == 2:
            return True
        return self.log_table[a] % 2 == 0

    def roots_of_unity(self, e: int) -> list:
        """All solutions of z**e = 1; requires e | |F*|."""
        if self.order % e:
            raise PreconditionError(f"F_{self.size} has no primitive {e}-th root of unity")
        step = self.order // e
        return [self.exp_table[i * step] for i in range(e)]


@lru_cache(maxsize=32)
def field(p: int, k: int = 1) -> FiniteField:
    return FiniteField(p, k)
