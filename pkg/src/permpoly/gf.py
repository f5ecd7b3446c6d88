"""Finite-field construction and arithmetic.

Builds descriptors for F_{p^m} (prime p, q = p^m), with a deterministic
irreducible modulus, a deterministic generator of the multiplicative group,
and the trial-division factorization of q - 1.  Field elements are dense
coefficient vectors over the prime field.  A vectorized exp/log table layer
(numpy) is attached lazily per field for bulk evaluation; it is a pure
optimization with behavior identical to the scalar operations.
"""

from __future__ import annotations

import random
import threading
import weakref
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

#: Hard cap on supported field order.  Factorization of q - 1 is by trial
#: division and tables are dense, so very large fields are out of scope.
ORDER_CAP = 1 << 20


# ---------------------------------------------------------------------------
# Integer helpers
# ---------------------------------------------------------------------------

def is_prime(n: int) -> bool:
    """Deterministic primality test by trial division (fine below 2^20)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n >= 1 as ((prime, exponent), ...) by trial division."""
    if n < 1:
        raise ValueError(f"cannot factorize {n}")
    out: list[tuple[int, int]] = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            e = 0
            while n % f == 0:
                n //= f
                e += 1
            out.append((f, e))
        f += 1 if f == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def divisors(n: int) -> list[int]:
    """All positive divisors of n, sorted ascending."""
    divs = [1]
    for prime, exp in factorize(n):
        divs = [d * prime**k for d in divs for k in range(exp + 1)]
    return sorted(divs)


# ---------------------------------------------------------------------------
# Polynomial arithmetic over F_p (little-endian int tuples, no trailing zeros)
# ---------------------------------------------------------------------------

def _ptrim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _padd(a: Sequence[int], b: Sequence[int], p: int) -> tuple[int, ...]:
    n = max(len(a), len(b))
    return _ptrim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p
                   for i in range(n)])


def _psub(a: Sequence[int], b: Sequence[int], p: int) -> tuple[int, ...]:
    n = max(len(a), len(b))
    return _ptrim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p
                   for i in range(n)])


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(a: Sequence[int], f: Sequence[int], p: int) -> tuple[int, ...]:
    """Remainder of a modulo monic f."""
    r = list(a)
    df = len(f) - 1
    for i in range(len(r) - 1, df - 1, -1):
        c = r[i] % p
        if c:
            for j in range(df + 1):
                r[i - df + j] = (r[i - df + j] - c * f[j]) % p
    return _ptrim(r[:df])


def _pgcd(a: Sequence[int], b: Sequence[int], p: int) -> tuple[int, ...]:
    """Monic gcd in F_p[x]."""
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        # reduce a mod b after making b monic
        lead = b[-1]
        if lead != 1:
            inv = pow(lead, p - 2, p)
            b = tuple((c * inv) % p for c in b)
        a, b = b, _pmod(a, b, p)
    if a and a[-1] != 1:
        inv = pow(a[-1], p - 2, p)
        a = tuple((c * inv) % p for c in a)
    return tuple(a)


def _ppow_mod(base: Sequence[int], e: int, f: Sequence[int], p: int) -> tuple[int, ...]:
    result: tuple[int, ...] = (1,)
    b = _pmod(base, f, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, b, p), f, p)
        b = _pmod(_pmul(b, b, p), f, p)
        e >>= 1
    return result


def _is_irreducible(f: Sequence[int], p: int) -> bool:
    """Irreducibility over F_p via iterated Frobenius (monic f required)."""
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    x = (0, 1)
    xr = _pmod(x, f, p)
    checkpoints = sorted({m // ell for ell, _ in factorize(m)})
    t = xr
    steps = 0
    for j in checkpoints:
        while steps < j:
            t = _ppow_mod(t, p, f, p)
            steps += 1
        g = _pgcd(_psub(t, xr, p), f, p)
        if len(g) != 1:  # gcd not a nonzero constant
            return False
    while steps < m:
        t = _ppow_mod(t, p, f, p)
        steps += 1
    return t == xr


# ---------------------------------------------------------------------------
# Field descriptor and elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True, repr=False)
class FieldDesc:
    """Immutable descriptor of F_{p^m}.

    modulus is the monic degree-m irreducible over F_p (little-endian,
    length m + 1); generator_code packs the coefficient vector of a fixed
    generator of the multiplicative group as sum(c_i * p^i); q1_factors is
    the prime factorization of q - 1.
    """

    p: int
    m: int
    q: int
    modulus: tuple[int, ...]
    generator_code: int
    q1_factors: tuple[tuple[int, int], ...]

    # -- code <-> coefficient-vector packing ------------------------------
    def code_to_coeffs(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            out.append(code % self.p)
            code //= self.p
        return tuple(out)

    def coeffs_to_code(self, coeffs: Sequence[int]) -> int:
        code = 0
        for c in reversed(coeffs[: self.m]):
            code = code * self.p + (c % self.p)
        return code

    # -- element constructors ---------------------------------------------
    def element(self, value: "int | Sequence[int] | FieldElement") -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, (tuple, list)):
            coeffs = tuple(c % self.p for c in value)
            if len(coeffs) > self.m:
                raise ValueError(f"coefficient vector longer than degree {self.m}")
            coeffs = coeffs + (0,) * (self.m - len(coeffs))
            return FieldElement(self, coeffs, self.coeffs_to_code(coeffs))
        code = int(value)
        if not 0 <= code < self.q:
            raise ValueError(f"element code {code} outside [0, {self.q})")
        return FieldElement(self, self.code_to_coeffs(code), code)

    def scalar(self, c: int) -> "FieldElement":
        """The prime-field constant c mod p as an element."""
        return self.element((c % self.p,))

    def zero(self) -> "FieldElement":
        return self.element(0)

    def one(self) -> "FieldElement":
        return self.element(1)

    def gen(self) -> "FieldElement":
        return self.element(self.generator_code)

    def __repr__(self) -> str:
        return f"FieldDesc(q={self.q}={self.p}^{self.m})"


class FieldElement:
    """Element of a specific FieldDesc: coefficient vector over F_p."""

    __slots__ = ("field", "coeffs", "code")

    def __init__(self, field: FieldDesc, coeffs: tuple[int, ...], code: int):
        self.field = field
        self.coeffs = coeffs
        self.code = code

    # -- helpers ------------------------------------------------------------
    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("mixed-field operands")
            return other
        if isinstance(other, int):
            return self.field.scalar(other)
        return NotImplemented  # type: ignore[return-value]

    def _wrap(self, trimmed: Sequence[int]) -> "FieldElement":
        f = self.field
        coeffs = tuple(trimmed) + (0,) * (f.m - len(trimmed))
        return FieldElement(f, coeffs, f.coeffs_to_code(coeffs))

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.field.p
        return self._wrap(_padd(self.coeffs, other.coeffs, p))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return self._wrap(tuple((-c) % p for c in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._wrap(_psub(self.coeffs, other.coeffs, self.field.p))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        f = self.field
        return self._wrap(_pmod(_pmul(self.coeffs, other.coeffs, f.p), f.modulus, f.p))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        f = self.field
        if self.code == 0:
            if e > 0:
                return f.zero()
            if e == 0:
                return f.one()  # 0^0 = 1 by convention
            raise ZeroDivisionError("negative power of zero")
        er = e % (f.q - 1) if f.q > 2 else 0
        if er == 0:
            return f.one()
        return self._wrap(_ppow_mod(self.coeffs, er, f.modulus, f.p))

    def inverse(self) -> "FieldElement":
        if self.code == 0:
            raise ZeroDivisionError("inversion of zero")
        return self ** (-1)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    # -- structure -----------------------------------------------------------
    def multiplicative_order(self) -> int:
        if self.code == 0:
            raise ValueError("zero has no multiplicative order")
        order = self.field.q - 1
        for prime, _ in self.field.q1_factors:
            while order % prime == 0 and (self ** (order // prime)).code == 1:
                order //= prime
        return order

    def __bool__(self) -> bool:
        return self.code != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.field.scalar(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.code == other.code

    def __hash__(self) -> int:
        return hash((self.field.q, self.field.modulus, self.code))

    def __repr__(self) -> str:
        return f"F{self.field.q}<{self.code}>"


# ---------------------------------------------------------------------------
# Field construction
# ---------------------------------------------------------------------------

def _lex_low_first_coeffs(index: int, p: int, m: int) -> tuple[int, ...]:
    """The index-th coefficient vector (c_0..c_{m-1}) in lexicographic order
    comparing low-degree coefficients first (c_0 is the most significant key)."""
    out = [0] * m
    for i in range(m - 1, -1, -1):
        out[i] = index % p
        index //= p
    return tuple(out)


def _find_modulus(p: int, m: int) -> tuple[int, ...]:
    if m == 1:
        return (0, 1)  # x itself: the lexicographically smallest monic linear
    for idx in range(p**m):
        coeffs = _lex_low_first_coeffs(idx, p, m)
        if coeffs[0] == 0:
            continue  # root at 0, reducible
        f = coeffs + (1,)
        if _is_irreducible(f, p):
            return f
    raise RuntimeError(f"no irreducible polynomial found for p={p}, m={m}")


def _find_generator(desc_p: int, m: int, q: int, modulus: tuple[int, ...],
                    q1_factors: tuple[tuple[int, int], ...]) -> int:
    if q == 2:
        return 1

    def is_primitive(coeffs: tuple[int, ...]) -> bool:
        for prime, _ in q1_factors:
            t = _ppow_mod(coeffs, (q - 1) // prime, modulus, desc_p)
            if t == (1,):
                return False
        return True

    # Prime-field constants 2, 3, ... first, then non-prime-field elements in
    # lexicographic order comparing low-degree coefficients first.
    for c in range(2, desc_p):
        if is_primitive((c,)):
            return c
    for idx in range(q):
        coeffs = _lex_low_first_coeffs(idx, desc_p, m)
        if all(c == 0 for c in coeffs[1:]):
            continue  # prime-field constant, already tried
        if is_primitive(_ptrim(list(coeffs))):
            code = 0
            for c in reversed(coeffs):
                code = code * desc_p + c
            return code
    raise RuntimeError("no generator found (impossible for a field)")


def build_field(p: int, m: int = 1, modulus: Sequence[int] | None = None) -> FieldDesc:
    """Construct the descriptor of F_{p^m}.

    When modulus is omitted, the lexicographically smallest monic irreducible
    of degree m is selected (coefficients compared low-degree-first), making
    construction reproducible.  The generator is the first primitive element
    in the order: prime-field constants 2, 3, ..., then remaining elements by
    the same coefficient order.
    """
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if m < 1:
        raise ValueError(f"extension degree m={m} must be >= 1")
    q = p**m
    if q > ORDER_CAP:
        raise ValueError(f"field order {q} exceeds the supported cap {ORDER_CAP}")
    if modulus is None:
        mod = _find_modulus(p, m)
    else:
        mod = tuple(int(c) % p for c in modulus)
        if len(mod) != m + 1 or mod[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {m}")
        if not _is_irreducible(mod, p):
            raise ValueError("supplied modulus is reducible over F_p")
    q1 = factorize(q - 1) if q > 2 else ()
    gen_code = _find_generator(p, m, q, mod, q1)
    desc = FieldDesc(p=p, m=m, q=q, modulus=mod, generator_code=gen_code, q1_factors=q1)
    return desc


def field_from_order(q: int) -> FieldDesc:
    """Build F_q from its order (q must be a prime power)."""
    fac = factorize(q)
    if len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    p, m = fac[0]
    return build_field(p, m)


def parse_field_spec(text: str) -> FieldDesc:
    """Parse a field spec string: either "p^m" or a prime-power order "q"."""
    text = text.strip()
    if "^" in text:
        left, _, right = text.partition("^")
        try:
            p, m = int(left), int(right)
        except ValueError as exc:
            raise ValueError(f"bad field spec {text!r}") from exc
        return build_field(p, m)
    try:
        q = int(text)
    except ValueError as exc:
        raise ValueError(f"bad field spec {text!r}") from exc
    return field_from_order(q)


# ---------------------------------------------------------------------------
# Vectorized table layer
# ---------------------------------------------------------------------------

_X_CHUNK = 8192     # evaluation-point chunk (bounds memory on big fields)
_TERM_CHUNK = 128   # polynomial-term chunk


class Tables:
    """Dense exp/log/digit tables for one field, enabling numpy-vectorized
    arithmetic on arrays of element codes.  Pure optimization layer: results
    are identical to scalar FieldElement arithmetic."""

    def __init__(self, field: FieldDesc):
        p, m, q = field.p, field.m, field.q
        M = q - 1
        self.field = field
        self.p, self.m, self.q, self.M = p, m, q, M
        self.ppow = np.array([p**i for i in range(m)], dtype=np.int64)
        codes = np.arange(q, dtype=np.int64)
        digits = np.empty((q, m), dtype=np.int64)
        t = codes.copy()
        for i in range(m):
            digits[:, i] = t % p
            t //= p
        self.digits = digits
        self.exp = self._build_exp(field)
        log = np.full(q, -1, dtype=np.int64)
        log[self.exp] = np.arange(M, dtype=np.int64)
        self.log = log

    def _build_exp(self, field: FieldDesc) -> np.ndarray:
        p, m, M = self.p, self.m, self.M
        exp = np.empty(max(M, 1), dtype=np.int64)
        if m == 1:
            cur, g = 1, field.generator_code
            for i in range(M):
                exp[i] = cur
                cur = cur * g % p
            return exp[:M]
        block = 4096
        g = field.gen()
        cur = field.one()
        head = min(M, block)
        for i in range(head):
            exp[i] = cur.code
            cur = cur * g
        if M > block:
            # Multiplication by g^block is F_p-linear; advance whole blocks
            # with one matrix product each.
            gb = g**block
            cols = []
            xpow = field.one()
            for _ in range(m):
                cols.append((gb * xpow).coeffs)
                xpow = xpow * field.element((0, 1))
            mg = np.array(cols, dtype=np.int64).T  # mg[i][j] = coeff i of gb*x^j
            prev = self.digits[exp[:block]]
            pos = block
            while pos < M:
                nxt = (prev @ mg.T) % p
                take = min(block, M - pos)
                exp[pos:pos + take] = (nxt @ self.ppow)[:take]
                prev = nxt
                pos += take
        return exp[:M]

    # -- elementwise ops on int64 code arrays -------------------------------
    def add(self, a, b):
        return (self.digits[a] + self.digits[b]) % self.p @ self.ppow

    def neg(self, a):
        return (self.p - self.digits[a]) % self.p @ self.ppow

    def sub(self, a, b):
        return (self.digits[a] - self.digits[b]) % self.p @ self.ppow

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        out = np.zeros(a.shape, dtype=np.int64)
        mask = (a != 0) & (b != 0)
        out[mask] = self.exp[(self.log[a[mask]] + self.log[b[mask]]) % self.M]
        return out

    def pow(self, a, e: int):
        """a**e elementwise; e == 0 yields 1 everywhere (0^0 = 1)."""
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones(a.shape, dtype=np.int64)
        out = np.zeros(a.shape, dtype=np.int64)
        mask = a != 0
        if e < 0 and not mask.all():
            raise ZeroDivisionError("negative power of zero")
        out[mask] = self.exp[(self.log[a[mask]] * (e % self.M)) % self.M]
        return out

    def inv(self, a):
        return self.pow(a, -1)

    def add1(self, a: int, b: int) -> int:
        return int(self.add(np.int64(a), np.int64(b)))

    def mul1(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(self.log[a] + self.log[b]) % self.M])

    def pow1(self, a: int, e: int) -> int:
        if a == 0:
            if e > 0:
                return 0
            if e == 0:
                return 1
            raise ZeroDivisionError("negative power of zero")
        return int(self.exp[(int(self.log[a]) * (e % self.M)) % self.M])

    def neg1(self, a: int) -> int:
        return int(self.neg(np.int64(a)))

    # -- subgroups -----------------------------------------------------------
    def mu_codes(self, d: int) -> np.ndarray:
        """Codes of the d-th roots of unity, in generator-power order."""
        if d < 1 or self.M % d != 0:
            raise ValueError(f"mu_{d} does not lie in F_{self.q} (d must divide q-1)")
        return self.exp[(self.M // d) * np.arange(d, dtype=np.int64)].copy()

    # -- bulk polynomial evaluation -------------------------------------------
    def _split_terms(self, terms: Iterable[tuple[int, int]]):
        const = 0
        exps: list[int] = []
        logs: list[int] = []
        for e, c in terms:
            if c == 0:
                continue
            if e < 0:
                raise ValueError("negative exponent in polynomial term")
            if e == 0:
                const = self.add1(const, c)
            else:
                exps.append((e - 1) % self.M + 1)
                logs.append(int(self.log[c]))
        return const, np.array(exps, dtype=np.int64), np.array(logs, dtype=np.int64)

    def _accumulate(self, ee: np.ndarray, lc: np.ndarray, lx: np.ndarray) -> np.ndarray:
        """Sum of c_j * x^{e_j} over terms j, for each nonzero point with log lx."""
        p, m, M = self.p, self.m, self.M
        out = np.empty(len(lx), dtype=np.int64)
        for lo in range(0, len(lx), _X_CHUNK):
            lxc = lx[lo:lo + _X_CHUNK]
            acc = np.zeros((len(lxc), m), dtype=np.int64)
            for tlo in range(0, len(ee), _TERM_CHUNK):
                idx = (ee[tlo:tlo + _TERM_CHUNK, None] * lxc[None, :]
                       + lc[tlo:tlo + _TERM_CHUNK, None]) % M
                acc += self.digits[self.exp[idx]].sum(axis=0)
            out[lo:lo + _X_CHUNK] = (acc % p) @ self.ppow
        return out

    def eval_terms_at_all(self, terms: Iterable[tuple[int, int]]) -> np.ndarray:
        """Evaluate sum of c*x^e at every field element; index = element code."""
        const, ee, lc = self._split_terms(terms)
        values = np.zeros(self.q, dtype=np.int64)
        if len(ee):
            values[1:] = self._accumulate(ee, lc, self.log[1:])
        if const:
            values = self.add(values, np.int64(const))
        return values

    def eval_terms_at(self, terms: Iterable[tuple[int, int]], xs: np.ndarray) -> np.ndarray:
        """Evaluate sum of c*x^e at each code in xs."""
        xs = np.asarray(xs, dtype=np.int64)
        const, ee, lc = self._split_terms(terms)
        values = np.zeros(xs.shape, dtype=np.int64)
        mask = xs != 0
        if len(ee) and mask.any():
            values[mask] = self._accumulate(ee, lc, self.log[xs[mask]])
        if const:
            values = self.add(values, np.int64(const))
        return values

    def eval_dense_at(self, coeffs: Sequence[int], xs: np.ndarray) -> np.ndarray:
        """Horner evaluation of a dense coefficient list (low degree first)."""
        xs = np.asarray(xs, dtype=np.int64)
        values = np.zeros(xs.shape, dtype=np.int64)
        for c in reversed(coeffs):
            values = self.mul(values, xs)
            if c:
                values = self.add(values, np.int64(c))
        return values

    def pow_all(self, e: int) -> np.ndarray:
        """x^e for every element code x (0^e = 0 for e > 0)."""
        if e == 0:
            return np.ones(self.q, dtype=np.int64)
        if e < 0:
            raise ZeroDivisionError("negative power of zero (0 is among all codes)")
        values = np.zeros(self.q, dtype=np.int64)
        values[1:] = self.exp[(self.log[1:] * (e % self.M)) % self.M]
        return values


_TABLES: "weakref.WeakKeyDictionary[FieldDesc, Tables]" = weakref.WeakKeyDictionary()
_TABLES_LOCK = threading.Lock()


def tables(field: FieldDesc) -> Tables:
    """The (lazily built, cached) vectorized table layer for a field."""
    t = _TABLES.get(field)
    if t is None:
        with _TABLES_LOCK:
            t = _TABLES.get(field)
            if t is None:
                t = Tables(field)
                _TABLES[field] = t
    return t


# ---------------------------------------------------------------------------
# Roots of unity and subfields
# ---------------------------------------------------------------------------

def mu(field: FieldDesc, d: int) -> list[FieldElement]:
    """The d-th roots of unity in F_q as elements (requires d | q-1)."""
    return [field.element(int(c)) for c in tables(field).mu_codes(d)]


@dataclass(frozen=True)
class SubfieldHandle:
    """The subfield F_{q0} of F_q, generated multiplicatively by beta."""

    field: FieldDesc
    q0: int
    m0: int
    beta_code: int

    def beta(self) -> FieldElement:
        return self.field.element(self.beta_code)

    def member_codes(self) -> np.ndarray:
        """Sorted codes of all q0 subfield elements ({0} plus beta powers)."""
        t = tables(self.field)
        if self.q0 == 2:
            nz = np.array([1], dtype=np.int64)
        else:
            step = t.M // (self.q0 - 1)
            nz = t.exp[step * np.arange(self.q0 - 1, dtype=np.int64)]
        return np.sort(np.concatenate([[np.int64(0)], nz]))

    def contains(self, z: FieldElement) -> bool:
        """Membership test z^{q0} = z."""
        return (z ** self.q0) == z


def subfield(field: FieldDesc, q0: int) -> SubfieldHandle:
    """Handle for the subfield of order q0 = p^{m0} with m0 | m.

    Validates beta's order and spot-checks additive closure of the subfield
    on 64 deterministically seeded random pairs.
    """
    fac = factorize(q0)
    if len(fac) != 1 or fac[0][0] != field.p:
        raise ValueError(f"{q0} is not a power of the characteristic {field.p}")
    m0 = fac[0][1]
    if field.m % m0 != 0:
        raise ValueError(f"F_{q0} is not a subfield of F_{field.q} ({m0} does not divide {field.m})")
    beta = field.gen() ** ((field.q - 1) // (q0 - 1))
    handle = SubfieldHandle(field=field, q0=q0, m0=m0, beta_code=beta.code)
    if beta.multiplicative_order() != q0 - 1:
        raise RuntimeError("subfield generator has wrong order")
    members = handle.member_codes()
    member_set = set(int(c) for c in members)
    rng = random.Random(f"subfield:{field.q}:{q0}")
    t = tables(field)
    for _ in range(64):
        a = int(members[rng.randrange(len(members))])
        b = int(members[rng.randrange(len(members))])
        if t.add1(a, b) not in member_set:
            raise RuntimeError("subfield additive closure spot-check failed")
    return handle


def in_subfield(field: FieldDesc, codes: np.ndarray, q0: int) -> np.ndarray:
    """Vectorized membership test z^{q0} = z for an array of element codes."""
    t = tables(field)
    codes = np.asarray(codes, dtype=np.int64)
    return t.pow(codes, q0) == codes
