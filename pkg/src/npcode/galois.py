"""GF(2^m) arithmetic for protection-code coefficients.

Elements are integers in [0, 2^m) read as polynomials over GF(2): bit i
is the coefficient of x^i.  A FieldContext pins down the bit width m and
the degree-m irreducible reduction polynomial; a FieldElement couples a
value to its context so that values from different fields can never be
combined silently.

Contexts with m <= 8 precompute log/antilog tables over a multiplicative
generator, turning products into two table lookups; wider fields fall
back to shift-and-reduce multiplication.  Contexts are immutable after
construction and safe to share across threads; every operation is pure.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "DEFAULT_M",
    "DEFAULT_POLY",
    "FieldContext",
    "FieldElement",
    "FieldMismatchError",
    "default_polynomial",
]

# Minimum-weight irreducible polynomial per degree, bit i = coeff of x^i.
_IRREDUCIBLE = {
    1: 0x3,
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x89,
    8: 0x11B,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}

DEFAULT_M = 8
DEFAULT_POLY = _IRREDUCIBLE[DEFAULT_M]

_MAX_M = 16
_TABLE_MAX_M = 8


class FieldMismatchError(ValueError):
    """Raised when elements of two different field contexts are combined."""


def default_polynomial(m: int) -> int:
    """Return the built-in irreducible reduction polynomial of degree m."""
    if m not in _IRREDUCIBLE:
        raise ValueError(f"no built-in polynomial for m={m}; supported 1..{_MAX_M}")
    return _IRREDUCIBLE[m]


def _degree(p: int) -> int:
    return p.bit_length() - 1


def _poly_mod(a: int, p: int) -> int:
    dp = _degree(p)
    while a and _degree(a) >= dp:
        a ^= p << (_degree(a) - dp)
    return a


def _is_irreducible(p: int) -> bool:
    """Trial division by every polynomial of degree 1..deg(p)//2."""
    m = _degree(p)
    if m < 1:
        return False
    if m == 1:
        return True
    for d in range(2, 1 << (m // 2 + 1)):
        if _poly_mod(p, d) == 0:
            return False
    return True


class FieldContext:
    """The field GF(2^m) under a fixed reduction polynomial.

    Parameters
    ----------
    m : int
        Bit width of elements, 1 <= m <= 16.  The field has 2^m elements.
    reduction_poly : int or None
        Degree-m irreducible polynomial as an integer (bit m must be
        set).  None selects a built-in minimum-weight polynomial; the
        m=8 default is 0x11B.
    """

    def __init__(self, m: int = DEFAULT_M, reduction_poly: int | None = None):
        if not 1 <= m <= _MAX_M:
            raise ValueError(f"m must be in 1..{_MAX_M}, got {m}")
        if reduction_poly is None:
            reduction_poly = default_polynomial(m)
        if _degree(reduction_poly) != m:
            raise ValueError(
                f"reduction polynomial 0x{reduction_poly:X} does not have degree {m}"
            )
        if not _is_irreducible(reduction_poly):
            raise ValueError(
                f"reduction polynomial 0x{reduction_poly:X} is reducible over GF(2)"
            )
        self.m = m
        self.reduction_poly = reduction_poly
        self.order = 1 << m
        self._mask = self.order - 1
        self.exp_table: np.ndarray | None = None
        self.log_table: np.ndarray | None = None
        self._generator_value = self._find_generator()
        if m <= _TABLE_MAX_M:
            self._build_tables()

    # -- construction helpers -------------------------------------------------

    def _mul_shift_reduce(self, a: int, b: int) -> int:
        res = 0
        while b:
            if b & 1:
                res ^= a
            b >>= 1
            a <<= 1
            if a & self.order:
                a ^= self.reduction_poly
        return res

    def _find_generator(self) -> int:
        q = self.order
        if q == 2:
            return 1
        for g in range(2, q):
            x, steps = g, 1
            while x != 1:
                x = self._mul_shift_reduce(x, g)
                steps += 1
            if steps == q - 1:
                return g
        raise AssertionError("no generator found; polynomial is not irreducible")

    def _build_tables(self) -> None:
        q = self.order
        exp = np.zeros(2 * (q - 1) if q > 2 else 2, dtype=np.int32)
        log = np.zeros(q, dtype=np.int32)
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self._mul_shift_reduce(x, self._generator_value)
        exp[q - 1 :] = exp[: len(exp) - (q - 1)]
        self.exp_table = exp
        self.log_table = log

    @property
    def has_tables(self) -> bool:
        return self.exp_table is not None

    # -- element construction --------------------------------------------------

    def element(self, value: int) -> "FieldElement":
        return FieldElement(value, self)

    def elements(self, values) -> list["FieldElement"]:
        return [FieldElement(v, self) for v in values]

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    def generator(self) -> "FieldElement":
        """A multiplicative generator of the nonzero elements."""
        return FieldElement(self._generator_value, self)

    # -- integer-level arithmetic ----------------------------------------------

    def add_int(self, a: int, b: int) -> int:
        return a ^ b

    def mul_int(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.exp_table is not None:
            q1 = self.order - 1
            return int(self.exp_table[(int(self.log_table[a]) + int(self.log_table[b])) % q1])
        return self._mul_shift_reduce(a, b)

    def inv_int(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        if self.exp_table is not None:
            q1 = self.order - 1
            return int(self.exp_table[(q1 - int(self.log_table[a])) % q1])
        # a^(q-2) by square and multiply
        return self.pow_int(a, self.order - 2)

    def pow_int(self, a: int, e: int) -> int:
        if e < 0:
            raise ValueError("exponent must be non-negative")
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul_int(result, base)
            base = self.mul_int(base, base)
            e >>= 1
        return result

    # -- element-level operations ----------------------------------------------

    def _check(self, *elems: "FieldElement") -> None:
        for e in elems:
            if e.context != self:
                raise FieldMismatchError(
                    f"element of GF(2^{e.context.m})/0x{e.context.reduction_poly:X} "
                    f"used in GF(2^{self.m})/0x{self.reduction_poly:X}"
                )

    def add(self, a: "FieldElement", b: "FieldElement") -> "FieldElement":
        self._check(a, b)
        return FieldElement(a.value ^ b.value, self)

    def mul(self, a: "FieldElement", b: "FieldElement") -> "FieldElement":
        self._check(a, b)
        return FieldElement(self.mul_int(a.value, b.value), self)

    def inv(self, a: "FieldElement") -> "FieldElement":
        self._check(a)
        return FieldElement(self.inv_int(a.value), self)

    def pow(self, a: "FieldElement", e: int) -> "FieldElement":
        self._check(a)
        return FieldElement(self.pow_int(a.value, e), self)

    # -- identity ----------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldContext)
            and self.m == other.m
            and self.reduction_poly == other.reduction_poly
        )

    def __hash__(self) -> int:
        return hash((self.m, self.reduction_poly))

    def __repr__(self) -> str:
        return f"FieldContext(m={self.m}, reduction_poly=0x{self.reduction_poly:X})"


class FieldElement:
    """A value in [0, 2^m) bound to its FieldContext."""

    __slots__ = ("value", "context")

    def __init__(self, value: int, context: FieldContext):
        if not 0 <= value < context.order:
            raise ValueError(f"value {value} out of range for GF(2^{context.m})")
        self.value = int(value)
        self.context = context

    def __add__(self, other: "FieldElement") -> "FieldElement":
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.context.add(self, other)

    # subtraction equals addition in characteristic 2
    __sub__ = __add__

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.context.mul(self, other)

    def __pow__(self, e: int) -> "FieldElement":
        return self.context.pow(self, e)

    def inverse(self) -> "FieldElement":
        return self.context.inv(self)

    def __bool__(self) -> bool:
        return self.value != 0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldElement)
            and self.value == other.value
            and self.context == other.context
        )

    def __hash__(self) -> int:
        return hash((self.value, self.context))

    def __repr__(self) -> str:
        width = (self.context.m + 3) // 4
        return f"FieldElement(0x{self.value:0{width}X})"
