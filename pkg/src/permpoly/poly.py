"""Dense polynomials over a finite field or over the integers.

Field polynomials store coefficient codes (low degree first); integer
polynomials (field=None) keep plain ints and are reduced into the prime
field on first use against a field.  Includes the special families used by
the permutation criteria: the all-ones geometric polynomial, inner-power
composition h(x^v), and reduction modulo x^d - 1 (which preserves values on
the d-th roots of unity).
"""

from __future__ import annotations

import re
from typing import Iterable, Optional, Sequence

import numpy as np

from .gf import FieldDesc, FieldElement, SubfieldHandle, tables

#: Degree of the zero polynomial — a distinguished marker, not an integer.
NEG_INFINITY = float("-inf")

#: Guard against runaway exponents in parsed/derived polynomials.
MAX_EXPONENT = 1 << 22

_DENSE_MUL_CUTOFF = 4096  # term-pair count above which field mul vectorizes


class Poly:
    """Immutable dense polynomial; coefficients are field-element codes when
    a field is attached, otherwise plain integers."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldDesc | None, coeffs: Sequence[int]):
        cs = [int(c) for c in coeffs]
        if field is not None:
            for c in cs:
                if not 0 <= c < field.q:
                    raise ValueError(f"coefficient code {c} outside [0, {field.q})")
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- basic structure -----------------------------------------------------
    @property
    def degree(self):
        """Integer degree, or the -infinity marker for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INFINITY

    def is_zero(self) -> bool:
        return not self.coeffs

    def terms(self) -> list[tuple[int, int]]:
        """Nonzero (exponent, coefficient) pairs, ascending exponent."""
        return [(e, c) for e, c in enumerate(self.coeffs) if c != 0]

    def to_field(self, field: FieldDesc) -> "Poly":
        """Attach a field: integer coefficients reduce into the prime field."""
        if self.field is not None:
            if self.field != field:
                raise ValueError("polynomial already belongs to a different field")
            return self
        return Poly(field, [field.scalar(c).code for c in self.coeffs])

    # -- arithmetic ------------------------------------------------------------
    def _match(self, other: "Poly") -> FieldDesc | None:
        if not isinstance(other, Poly):
            raise TypeError("expected a Poly")
        if self.field is None and other.field is None:
            return None
        if self.field is not None and other.field is not None:
            if self.field != other.field:
                raise ValueError("mixed-field polynomials")
            return self.field
        raise ValueError("cannot mix integer and field polynomials implicitly")

    def __add__(self, other: "Poly") -> "Poly":
        field = self._match(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        if field is None:
            return Poly(None, [x + y for x, y in zip(a, b)])
        t = tables(field)
        return Poly(field, [t.add1(x, y) for x, y in zip(a, b)])

    def __neg__(self) -> "Poly":
        if self.field is None:
            return Poly(None, [-c for c in self.coeffs])
        t = tables(self.field)
        return Poly(self.field, [t.neg1(c) for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        field = self._match(other)
        if self.is_zero() or other.is_zero():
            return Poly(field, [])
        ta, tb = self.terms(), other.terms()
        deg = ta[-1][0] + tb[-1][0]
        if deg > MAX_EXPONENT:
            raise ValueError(f"product degree {deg} exceeds cap {MAX_EXPONENT}")
        if field is None:
            out = [0] * (deg + 1)
            for ea, ca in ta:
                for eb, cb in tb:
                    out[ea + eb] += ca * cb
            return Poly(None, out)
        t = tables(field)
        if len(ta) * len(tb) > _DENSE_MUL_CUTOFF:
            ea = np.array([x[0] for x in ta], dtype=np.int64)
            la = t.log[np.array([x[1] for x in ta], dtype=np.int64)]
            eb = np.array([x[0] for x in tb], dtype=np.int64)
            lb = t.log[np.array([x[1] for x in tb], dtype=np.int64)]
            ee = (ea[:, None] + eb[None, :]).ravel()
            cc = t.exp[((la[:, None] + lb[None, :]) % t.M).ravel()]
            acc = np.zeros((deg + 1, t.m), dtype=np.int64)
            np.add.at(acc, ee, t.digits[cc])
            return Poly(field, (acc % t.p) @ t.ppow)
        out = [0] * (deg + 1)
        for ea, ca in ta:
            for eb, cb in tb:
                out[ea + eb] = t.add1(out[ea + eb], t.mul1(ca, cb))
        return Poly(field, out)

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative polynomial power")
        result = Poly(self.field, [1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base_needed = e > 1
            if base_needed:
                base = base * base
            e >>= 1
        return result

    def compose(self, inner: "Poly") -> "Poly":
        """Substitution self(inner(x)) by Horner."""
        field = self._match(inner)
        result = Poly(field, [])
        for c in reversed(self.coeffs):
            result = result * inner + Poly(field, [c])
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.field, self.coeffs))

    # -- evaluation -------------------------------------------------------------
    def __call__(self, z: FieldElement) -> FieldElement:
        """Horner evaluation at a field element (integer coefficients are
        mapped into the prime field first)."""
        field = z.field
        if self.field is not None and self.field != field:
            raise ValueError("mixed fields in evaluation")
        acc = field.zero()
        for c in reversed(self.coeffs):
            acc = acc * z + (field.scalar(c) if self.field is None else field.element(c))
        return acc

    def eval_at_codes(self, field: FieldDesc, xs: np.ndarray) -> np.ndarray:
        """Vectorized evaluation at an array of element codes."""
        p = self.to_field(field)
        return tables(field).eval_terms_at(p.terms(), xs)

    def eval_at_all(self, field: FieldDesc) -> np.ndarray:
        """Vectorized evaluation at every element of the field."""
        p = self.to_field(field)
        return tables(field).eval_terms_at_all(p.terms())

    def __repr__(self) -> str:
        tag = "Z" if self.field is None else f"F{self.field.q}"
        return f"Poly[{tag}]({format_poly(self)})"


def eval_poly(f: Poly, z: FieldElement) -> FieldElement:
    """Functional alias for Horner evaluation."""
    return f(z)


# ---------------------------------------------------------------------------
# Special families
# ---------------------------------------------------------------------------

def geom(k: int, field: FieldDesc | None = None) -> Poly:
    """The all-ones polynomial of degree k-1, so (x-1)*geom(k) = x^k - 1."""
    if k < 1:
        raise ValueError("geom(k) requires k >= 1")
    if field is None:
        return Poly(None, [1] * k)
    return Poly(field, [1] * k)


def compose_power(h: Poly, inner_exponent: int) -> Poly:
    """h(x^v): coefficient i of h moves to position i*v."""
    v = inner_exponent
    if v < 1:
        raise ValueError("inner exponent must be >= 1")
    if h.is_zero():
        return h
    deg = (len(h.coeffs) - 1) * v
    if deg > MAX_EXPONENT:
        raise ValueError(f"composed degree {deg} exceeds cap {MAX_EXPONENT}")
    out = [0] * (deg + 1)
    for e, c in enumerate(h.coeffs):
        out[e * v] = c
    return Poly(h.field, out)


def reduce_mod_cyclo(h: Poly, d: int) -> Poly:
    """Remainder of h modulo x^d - 1 (exponents fold mod d); agrees with h on
    every d-th root of unity."""
    if d < 1:
        raise ValueError("d must be >= 1")
    out = [0] * d
    if h.field is None:
        for e, c in enumerate(h.coeffs):
            out[e % d] += c
        return Poly(None, out)
    t = tables(h.field)
    for e, c in enumerate(h.coeffs):
        if c:
            out[e % d] = t.add1(out[e % d], c)
    return Poly(h.field, out)


def has_root_in_mu(h: Poly, d: int, field: FieldDesc) -> Optional[FieldElement]:
    """A witness root of h in mu_d (first in generator-power order), or None."""
    t = tables(field)
    zs = t.mu_codes(d)
    vals = h.eval_at_codes(field, zs)
    hits = np.flatnonzero(vals == 0)
    if len(hits):
        return field.element(int(zs[hits[0]]))
    return None


# ---------------------------------------------------------------------------
# String grammar (used by the CLI; bit-exact round-trip with format_poly)
# ---------------------------------------------------------------------------

_TERM_RE = re.compile(r"^(?:(B)?(\d+)(?:\*(?=x))?)?(?:(x)(?:\^(\d+))?)?$")


def parse_poly(text: str, field: FieldDesc,
               coeff_subfield: SubfieldHandle | None = None) -> Poly:
    """Parse `term+term+...` where term is `[c*]x[^e]` or `c`; c is a
    non-negative integer (reduced mod p) or `B<k>` meaning beta^k for the
    declared coefficient subfield (the full field's generator when no
    subfield is declared).  Whitespace is ignored; duplicate exponents sum;
    the `*` between a coefficient and `x` may be omitted.
    """
    squeezed = re.sub(r"\s+", "", text)
    if not squeezed:
        raise ValueError("empty polynomial string")
    beta = coeff_subfield.beta() if coeff_subfield is not None else field.gen()
    acc: dict[int, FieldElement] = {}
    for raw in squeezed.split("+"):
        m = _TERM_RE.match(raw)
        if not m or not raw:
            raise ValueError(f"bad polynomial term {raw!r}")
        b_flag, num, xpart, epart = m.groups()
        if num is None and xpart is None:
            raise ValueError(f"bad polynomial term {raw!r}")
        if num is None:
            coeff = field.one()
        elif b_flag:
            coeff = beta ** int(num)
        else:
            coeff = field.scalar(int(num))
        if xpart is None:
            e = 0
        elif epart is None:
            e = 1
        else:
            e = int(epart)
        if e > MAX_EXPONENT:
            raise ValueError(f"exponent {e} exceeds cap {MAX_EXPONENT}")
        acc[e] = acc.get(e, field.zero()) + coeff
    deg = max(acc)
    out = [0] * (deg + 1)
    for e, c in acc.items():
        out[e] = c.code
    return Poly(field, out)


def format_poly(f: Poly, coeff_subfield: SubfieldHandle | None = None) -> str:
    """Inverse of parse_poly: descending-exponent term list joined by '+'.
    Prime-field coefficients print as integers; others as B<k> powers of the
    declared subfield generator (field generator by default)."""
    if f.is_zero():
        return "0"
    field = f.field
    parts = []
    for e, c in reversed(f.terms()):
        if field is None:
            c_str = str(c)
            is_one = c == 1
        elif c < field.p:
            c_str = str(c)
            is_one = c == 1
        else:
            t = tables(field)
            k = int(t.log[c])
            if coeff_subfield is not None:
                step = (field.q - 1) // (coeff_subfield.q0 - 1)
                if k % step != 0:
                    raise ValueError("coefficient outside the declared subfield")
                k //= step
            c_str = f"B{k}"
            is_one = False
        if e == 0:
            parts.append(c_str)
        else:
            x_str = "x" if e == 1 else f"x^{e}"
            parts.append(x_str if is_one else f"{c_str}*{x_str}")
    return "+".join(parts)


def poly_from_elements(field: FieldDesc, coeffs: Iterable[FieldElement | int]) -> Poly:
    """Build a field polynomial from a mix of elements and integer constants."""
    codes = []
    for c in coeffs:
        if isinstance(c, FieldElement):
            if c.field != field:
                raise ValueError("mixed-field coefficient")
            codes.append(c.code)
        else:
            codes.append(field.scalar(int(c)).code)
    return Poly(field, codes)
