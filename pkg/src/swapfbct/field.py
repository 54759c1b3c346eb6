"""Exact arithmetic in GF(p^n).

Elements are plain integers.  The code of an element is the integer
sum(c_i * p**i) where c_i are the coefficients of its polynomial
representative of degree < n in the basis 1, x, ..., x^(n-1).  Code 0 is the
additive identity, code 1 the multiplicative identity.  For p = 2 addition is
XOR of codes.

Fields up to 2**22 elements carry log/exp and inverse tables; larger fields
(up to 2**26) fall back to polynomial arithmetic.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_ORDER = 1 << 26
TABLE_LIMIT = 1 << 22
ADD_TABLE_LIMIT = 1 << 13


class FieldError(ValueError):
    pass


# -- integer helpers ---------------------------------------------------------

def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


def prime_factors(m: int) -> list[int]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


# -- polynomials over F_p, coefficient lists low-to-high ---------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_sub(a, b, p):
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _trim(out)


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % p
    return _trim(out)


def _poly_mod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(_trim(a)) - 1 >= dm:
        shift = len(a) - 1 - dm
        factor = a[-1] * inv_lead % p
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - factor * c) % p
    return a


def _poly_powmod(base, e, m, p):
    result = [1]
    base = _poly_mod(base, m, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), m, p)
        base = _poly_mod(_poly_mul(base, base, p), m, p)
        e >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial given low-to-high."""
    m = list(modulus)
    n = len(m) - 1
    if n < 1 or m[-1] != 1:
        return False
    if n == 1:
        return True
    if m[0] == 0:
        return False
    x = [0, 1]

    def frob(k):
        h = x
        for _ in range(k):
            h = _poly_powmod(h, p, m, p)
        return h

    if _trim(_poly_sub(frob(n), x, p)):
        return False
    for r in prime_factors(n):
        g = _poly_gcd(m, _poly_sub(frob(n // r), x, p), p)
        if len(g) != 1:
            return False
    return True


def _is_primitive(modulus: Sequence[int], p: int) -> bool:
    m = list(modulus)
    q = p ** (len(m) - 1)
    if not is_irreducible(m, p):
        return False
    if len(m) == 2:
        root = (-m[0]) % p
        return root != 0 and all(pow(root, (q - 1) // r, p) != 1 for r in prime_factors(q - 1))
    return all(_poly_powmod([0, 1], (q - 1) // r, m, p) != [1] for r in prime_factors(q - 1))


@functools.lru_cache(maxsize=None)
def default_modulus(p: int, n: int) -> tuple[int, ...]:
    """Pinned default modulus for GF(p^n).

    n = 1: x - g with g the least primitive root mod p.
    n > 1: the first primitive polynomial x^n + c(x) when the lower part c is
    enumerated by its code sum(c_i p^i) in increasing order.
    """
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if n == 1:
        if p == 2:
            return (1, 1)
        for g in range(2, p):
            if all(pow(g, (p - 1) // r, p) != 1 for r in prime_factors(p - 1)):
                return ((-g) % p, 1)
        return ((-1) % p, 1)  # p == 3 handled above; unreachable
    for code in range(1, p ** n):
        low = [(code // p ** i) % p for i in range(n)]
        if low[0] == 0:
            continue
        cand = low + [1]
        if _is_primitive(cand, p):
            return tuple(cand)
    raise FieldError(f"no primitive polynomial found for {p}^{n}")


# -- field ----------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    p: int
    n: int
    modulus: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.p ** self.n

    def __str__(self) -> str:
        return f"{self.p}^{self.n}:" + ",".join(str(c) for c in self.modulus)


def parse_field_string(text: str) -> FieldSpec:
    """Parse ``p^n[:c0,c1,...,cn]`` (or bare ``p``) into a FieldSpec."""
    text = text.strip()
    head, _, coeffs = text.partition(":")
    try:
        if "^" in head:
            ps, ns = head.split("^", 1)
            p, n = int(ps), int(ns)
        else:
            p, n = int(head), 1
    except ValueError:
        raise FieldError(f"malformed field string {text!r}") from None
    if not is_prime(p) or n < 1:
        raise FieldError(f"bad field parameters in {text!r}")
    if coeffs:
        try:
            modulus = tuple(int(c) for c in coeffs.split(","))
        except ValueError:
            raise FieldError(f"malformed modulus in {text!r}") from None
    else:
        if p ** n > MAX_ORDER:
            raise FieldError(f"field {p}^{n} exceeds the supported order 2^26")
        modulus = default_modulus(p, n)
    return FieldSpec(p, n, modulus)


class Field:
    """GF(p^n) with integer-coded elements.  Immutable after construction."""

    def __init__(self, p: int, n: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if n < 1:
            raise FieldError("extension degree must be >= 1")
        q = p ** n
        if q > MAX_ORDER:
            raise FieldError(f"field order {p}^{n} exceeds 2^26")
        if modulus is None:
            modulus = default_modulus(p, n)
        modulus = tuple(int(c) for c in modulus)
        if len(modulus) != n + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree n (n+1 coefficients, low-to-high)")
        if any(not 0 <= c < p for c in modulus):
            raise FieldError("modulus coefficients must lie in [0, p)")
        if not is_irreducible(modulus, p):
            raise FieldError(f"modulus {modulus} is reducible over F_{p}")

        self.spec = FieldSpec(p, n, modulus)
        self.p, self.n, self.q = p, n, q
        self.char2 = p == 2
        self._pow_p = [p ** i for i in range(n)]
        self._mod_int = sum(c << i for i, c in enumerate(modulus)) if self.char2 else 0
        self._add_table = None

        self.has_tables = q <= TABLE_LIMIT
        self.generator = self._find_generator()
        if self.has_tables:
            self._build_tables()
        self._trace_basis = [self._trace_slow(self._pow_p[i]) for i in range(n)]
        self._trace_mask = sum(t << i for i, t in enumerate(self._trace_basis)) if self.char2 else 0

    @classmethod
    def from_spec(cls, spec: FieldSpec) -> "Field":
        return cls(spec.p, spec.n, spec.modulus)

    @classmethod
    def from_string(cls, text: str) -> "Field":
        return cls.from_spec(parse_field_string(text))

    def __repr__(self):
        return f"Field({self.spec})"

    def __str__(self):
        return str(self.spec)

    def __eq__(self, other):
        return isinstance(other, Field) and other.spec == self.spec

    def __hash__(self):
        return hash(self.spec)

    def __len__(self):
        return self.q

    def elements(self) -> range:
        return range(self.q)

    def check(self, x: int) -> int:
        if not isinstance(x, (int, np.integer)) or not 0 <= x < self.q:
            raise FieldError(f"{x!r} is not an element code of {self.spec}")
        return int(x)

    # -- codes <-> coefficient vectors --

    def to_coeffs(self, x: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.n):
            x, r = divmod(x, p)
            out.append(r)
        return out

    def from_coeffs(self, coeffs: Iterable[int]) -> int:
        return sum((c % self.p) * w for c, w in zip(coeffs, self._pow_p))

    def from_int(self, k: int) -> int:
        """Embed an integer of the prime field (k mod p)."""
        return k % self.p

    # -- slow polynomial arithmetic (no tables) --

    def _mul_poly(self, x: int, y: int) -> int:
        if self.char2:
            r = 0
            while y:
                if y & 1:
                    r ^= x
                y >>= 1
                x <<= 1
                if x & self.q:
                    x ^= self._mod_int
            return r
        if self.n == 1:
            return x * y % self.p
        p, n = self.p, self.n
        prod = _poly_mul(self.to_coeffs(x), self.to_coeffs(y), p)
        prod = _poly_mod(prod, list(self.spec.modulus), p)
        return self.from_coeffs(prod + [0] * (n - len(prod)))

    def _pow_poly(self, x: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._mul_poly(r, x)
            x = self._mul_poly(x, x)
            e >>= 1
        return r

    def _find_generator(self) -> int:
        q = self.q
        if q == 2:
            return 1
        factors = prime_factors(q - 1)
        if self.n == 1:
            cand = (-self.spec.modulus[0]) % self.p
            first = [cand] + list(range(2, q))
        else:
            first = [self.p] + list(range(2, q))
        for g in first:
            if g and all(self._pow_poly(g, (q - 1) // r) != 1 for r in factors):
                return g
        raise FieldError("no generator found")  # pragma: no cover

    def _mul_const_vec(self, xs: np.ndarray, c: int) -> np.ndarray:
        # multiplication by a fixed element is F_p-linear in the coefficient vector
        p = self.p
        if self.char2:
            out = np.zeros_like(xs)
            for i in range(self.n):
                img = self._mul_poly(1 << i, c)
                out ^= np.where((xs >> i) & 1, img, 0)
            return out
        digits = [(xs // w) % p for w in self._pow_p]
        images = [self.to_coeffs(self._mul_poly(w, c)) for w in self._pow_p]
        out = np.zeros_like(xs)
        for j, w in enumerate(self._pow_p):
            acc = np.zeros_like(xs)
            for i in range(self.n):
                if images[i][j]:
                    acc += digits[i] * images[i][j]
            out += (acc % p) * w
        return out

    def _build_tables(self):
        q = self.q
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        exp[0] = 1
        k, gk = 1, self.generator
        while k < q - 1:
            m = min(k, q - 1 - k)
            exp[k:k + m] = self._mul_const_vec(exp[:m], gk)
            k += m
            gk = self._mul_poly(gk, gk)
        exp[q - 1:] = exp[:q - 1]
        log = np.zeros(q, dtype=np.int64)
        log[exp[:q - 1]] = np.arange(q - 1)
        if q > 2 and len(np.unique(exp[:q - 1])) != q - 1:
            raise FieldError("generator search failed")  # pragma: no cover
        inv = np.zeros(q, dtype=np.int64)
        if q > 1:
            nz = np.arange(1, q)
            inv[nz] = exp[(q - 1 - log[nz]) % (q - 1)]
        for arr in (exp, log, inv):
            arr.setflags(write=False)
        self.exp_table = exp
        self.log_table = log
        self.inv_table = inv
        self._exp = exp.tolist()
        self._log = log.tolist()
        self._inv = inv.tolist()

    # -- scalar arithmetic --

    def add(self, x: int, y: int) -> int:
        if self.char2:
            return x ^ y
        p = self.p
        if self.n == 1:
            return (x + y) % p
        r, w = 0, 1
        while x or y:
            x, dx = divmod(x, p)
            y, dy = divmod(y, p)
            r += ((dx + dy) % p) * w
            w *= p
        return r

    def neg(self, x: int) -> int:
        if self.char2:
            return x
        p = self.p
        if self.n == 1:
            return (-x) % p
        r, w = 0, 1
        while x:
            x, d = divmod(x, p)
            r += ((-d) % p) * w
            w *= p
        return r

    def sub(self, x: int, y: int) -> int:
        if self.char2:
            return x ^ y
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        if self.has_tables:
            return self._exp[self._log[x] + self._log[y]]
        return self._mul_poly(x, y)

    def inv(self, x: int) -> int:
        """x^(q-2): the multiplicative inverse, with inv(0) = 0."""
        if self.has_tables:
            return self._inv[x]
        if x == 0:
            return 0
        return self._pow_poly(x, self.q - 2)

    def div(self, x: int, y: int) -> int:
        if y == 0:
            raise ZeroDivisionError("division by zero in finite field")
        return self.mul(x, self.inv(y))

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            raise FieldError("negative exponent")
        if e == 0:
            return 1
        if x == 0:
            return 0
        if self.has_tables:
            return self._exp[self._log[x] * e % (self.q - 1)]
        return self._pow_poly(x, e)

    def frobenius(self, x: int, k: int = 1) -> int:
        return self.pow(x, self.p ** k)

    def _trace_slow(self, x: int) -> int:
        t, y = 0, x
        for _ in range(self.n):
            t = self.add(t, y)
            y = self._pow_poly(y, self.p)
        if t >= self.p:
            raise FieldError("trace left the prime field; modulus is broken")  # pragma: no cover
        return t

    def trace(self, x: int) -> int:
        """Absolute trace sum_{i<n} x^(p^i), returned as an integer in [0, p)."""
        if self.char2:
            return (x & self._trace_mask).bit_count() & 1
        t = 0
        for d, b in zip(self.to_coeffs(x), self._trace_basis):
            t += d * b
        return t % self.p

    def is_square(self, x: int) -> bool:
        if self.char2:
            raise FieldError("is_square is defined for odd characteristic only")
        return self.pow(x, (self.q - 1) // 2) in (0, 1)

    def is_cube(self, x: int) -> bool:
        if (self.q - 1) % 3:
            return True
        return self.pow(x, (self.q - 1) // 3) in (0, 1)

    def sqrt_gf2n(self, x: int) -> int:
        if not self.char2:
            raise FieldError("sqrt_gf2n requires p = 2")
        return self.pow(x, 1 << (self.n - 1)) if self.n > 1 else x

    def in_subfield(self, x: int, d: int) -> bool:
        """True iff x lies in GF(p^d) (intersected with this field)."""
        return self.pow(x, self.p ** d) == x

    # -- quadratics over GF(2^n) --

    def solve_quadratic_count_gf2n(self, a: int, b: int, c: int) -> int:
        """Number of roots of a x^2 + b x + c in GF(2^n), by the trace criterion."""
        if not self.char2:
            raise FieldError("solve_quadratic_count_gf2n requires p = 2")
        if a == 0:
            raise FieldError("leading coefficient must be nonzero")
        if b == 0:
            return 1
        theta = self.div(self.mul(a, c), self.mul(b, b))
        return 2 if self.trace(theta) == 0 else 0

    def half_trace(self, x: int) -> int:
        if not self.char2 or self.n % 2 == 0:
            raise FieldError("half trace needs p = 2 and n odd")
        h, y = 0, x
        for _ in range((self.n + 1) // 2):
            h ^= y
            y = self.pow(y, 4)
        return h

    def solve_artin_schreier(self, theta: int) -> int | None:
        """One root y of y^2 + y = theta, or None when tr(theta) = 1.

        The other root is y + 1.
        """
        if not self.char2:
            raise FieldError("requires p = 2")
        if self.trace(theta) != 0:
            return None
        if self.n % 2 == 1:
            return self.half_trace(theta)
        return self._solve_linear_as(theta)

    @functools.cached_property
    def _as_basis(self) -> list[tuple[int, int]]:
        # XOR basis of the images L(e_i) = e_i^2 + e_i, each tagged with its preimage
        basis: list[tuple[int, int]] = []
        for i in range(self.n):
            e = 1 << i
            v, combo = self.mul(e, e) ^ e, e
            for bv, bc in basis:
                if v ^ bv < v:
                    v, combo = v ^ bv, combo ^ bc
            if v:
                basis.append((v, combo))
                basis.sort(reverse=True)
        return basis

    def _solve_linear_as(self, theta: int) -> int | None:
        v, y = theta, 0
        for bv, bc in self._as_basis:
            if v ^ bv < v:
                v, y = v ^ bv, y ^ bc
        return y if v == 0 else None

    def quadratic_roots_gf2n(self, a: int, b: int, c: int) -> tuple[int, ...]:
        """Sorted roots of a x^2 + b x + c in GF(2^n)."""
        count = self.solve_quadratic_count_gf2n(a, b, c)
        if count == 1:
            return (self.sqrt_gf2n(self.div(c, a)),)
        if count == 0:
            return ()
        theta = self.div(self.mul(a, c), self.mul(b, b))
        y = self.solve_artin_schreier(theta)
        s = self.div(b, a)
        return tuple(sorted((self.mul(s, y), self.mul(s, y ^ 1))))

    # -- vectorised arithmetic on numpy code arrays --

    def _digit_op(self, xs, ys, sign):
        p = self.p
        out = np.zeros(np.broadcast(xs, ys).shape, dtype=np.int64)
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        for w in self._pow_p:
            out += ((xs // w) % p + sign * ((ys // w) % p)) % p * w
        return out

    def add_vec(self, xs, ys) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        if self.char2:
            return xs ^ ys
        if self.n == 1:
            return (xs + ys) % self.p
        return self._digit_op(xs, ys, 1)

    def neg_vec(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        if self.char2:
            return xs.copy()
        return self._digit_op(np.zeros_like(xs), xs, -1)

    def sub_vec(self, xs, ys) -> np.ndarray:
        if self.char2:
            return np.asarray(xs, dtype=np.int64) ^ np.asarray(ys, dtype=np.int64)
        if self.n == 1:
            return (np.asarray(xs, dtype=np.int64) - np.asarray(ys, dtype=np.int64)) % self.p
        return self._digit_op(xs, ys, -1)

    def mul_vec(self, xs, ys) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        if self.has_tables:
            xs, ys = np.broadcast_arrays(xs, ys)
            out = self.exp_table[self.log_table[xs] + self.log_table[ys]]
            return np.where((xs == 0) | (ys == 0), 0, out)
        return np.vectorize(self.mul, otypes=[np.int64])(xs, ys)

    def inv_vec(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        if self.has_tables:
            return self.inv_table[xs]
        return np.vectorize(self.inv, otypes=[np.int64])(xs)

    def trace_vec(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        if self.char2:
            v = xs & self._trace_mask
            bits = np.zeros_like(v)
            for i in range(self.n):
                bits ^= (v >> i) & 1
            return bits
        t = np.zeros_like(xs)
        for w, b in zip(self._pow_p, self._trace_basis):
            t += (xs // w) % self.p * b
        return t % self.p

    def add_const_view(self, a: int) -> np.ndarray:
        """Permutation array x -> x + a over all codes."""
        return self.add_vec(np.arange(self.q, dtype=np.int64), a)

    def neg_table(self) -> np.ndarray:
        return self.neg_vec(np.arange(self.q, dtype=np.int64))

    def addition_table(self) -> np.ndarray:
        """Full q x q addition table (odd p, q <= 2^13); built once and cached."""
        if self._add_table is None:
            if self.q > ADD_TABLE_LIMIT:
                raise FieldError("addition table is only built for q <= 2^13")
            xs = np.arange(self.q, dtype=np.int64)
            dtype = np.int16 if self.q <= np.iinfo(np.int16).max else np.int32
            tab = self.add_vec(xs[:, None], xs[None, :]).astype(dtype)
            tab.setflags(write=False)
            self._add_table = tab
        return self._add_table


@functools.lru_cache(maxsize=64)
def get_field(p: int, n: int = 1, modulus: tuple[int, ...] | None = None) -> Field:
    """Cached constructor; fields are immutable so sharing is safe."""
    return Field(p, n, modulus)


def field_from_string(text: str) -> Field:
    spec = parse_field_string(text)
    return get_field(spec.p, spec.n, spec.modulus)
