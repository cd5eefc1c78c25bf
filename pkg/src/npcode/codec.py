"""Systematic [k, k-t] MDS erasure codes spread over k working paths.

A code for k unit-capacity connections tolerating t failures keeps the
first k-t symbols as plain data and derives the last t as parity, using
the generator [I | P].  P comes from a Vandermonde matrix over distinct
field points systematized by Gaussian elimination, which makes every
choice of k-t generator columns invertible, so any t erased positions
can be solved back from the survivors.

Erasure positions are assumed known (detected failures).  Single blocks
use FieldElement math; bulk payloads go through the uint8 block kernels.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .galois import DEFAULT_M, FieldContext, FieldElement

__all__ = [
    "CapacityExceededError",
    "CodecError",
    "Codeword",
    "DataBlock",
    "InconsistentSymbolsError",
    "NpcCode",
    "build_code",
    "encode",
    "encode_blocks",
    "recover",
    "recover_blocks",
    "verify_mds",
]


class CodecError(ValueError):
    pass


class CapacityExceededError(CodecError):
    """More erasures than the code can tolerate: capacity exceeded."""


class InconsistentSymbolsError(CodecError):
    """Surviving symbols disagree with every codeword; corruption beyond erasures."""


@dataclass(frozen=True)
class DataBlock:
    """k-t raw data symbols."""

    symbols: tuple[FieldElement, ...]

    @classmethod
    def of(cls, field: FieldContext, values: Iterable[int]) -> "DataBlock":
        return cls(tuple(field.element(v) for v in values))

    def values(self) -> list[int]:
        return [s.value for s in self.symbols]

    def __len__(self) -> int:
        return len(self.symbols)


@dataclass(frozen=True)
class Codeword:
    """k transmitted symbols plus the set of known-erased positions (0-based)."""

    symbols: tuple[FieldElement, ...]
    erased: frozenset[int] = frozenset()

    @classmethod
    def of(cls, field: FieldContext, values: Iterable[int], erased: Iterable[int] = ()) -> "Codeword":
        return cls(tuple(field.element(v) for v in values), frozenset(erased))

    def with_erasures(self, positions: Iterable[int]) -> "Codeword":
        """Mark positions erased; their symbol values are zeroed as lost."""
        erased = self.erased | frozenset(positions)
        zero = self.symbols[0].context.zero
        syms = tuple(zero if i in erased else s for i, s in enumerate(self.symbols))
        return Codeword(syms, erased)

    def values(self) -> list[int]:
        return [s.value for s in self.symbols]

    def __len__(self) -> int:
        return len(self.symbols)


class NpcCode:
    """An immutable [k, k-t] systematic code over a FieldContext.

    parity is the (k-t) x t coefficient matrix: column j gives the
    weights of parity symbol j as a combination of the data symbols.
    The constructor checks shape only, so verify_mds can inspect
    arbitrary parities; build_code guarantees the MDS and field-order
    constraints for every code it produces.
    """

    def __init__(self, k: int, t: int, field: FieldContext, parity: Sequence[Sequence[FieldElement]]):
        if not 1 <= t < k:
            raise CodecError(f"need 1 <= t < k, got k={k}, t={t}")
        rows = tuple(tuple(row) for row in parity)
        if len(rows) != k - t or any(len(r) != t for r in rows):
            raise CodecError(f"parity must be {k - t}x{t}")
        self.k = k
        self.t = t
        self.field = field
        self.parity = rows
        self._parity_ints: np.ndarray | None = None
        self._generator_ints: np.ndarray | None = None

    @property
    def data_len(self) -> int:
        return self.k - self.t

    def generator_rows(self) -> list[list[FieldElement]]:
        """The full generator [I | P] as k-t rows of length k."""
        f = self.field
        rows = []
        for i in range(self.data_len):
            ident = [f.one if j == i else f.zero for j in range(self.data_len)]
            rows.append(ident + list(self.parity[i]))
        return rows

    def parity_int_matrix(self) -> np.ndarray:
        if self._parity_ints is None:
            self._parity_ints = np.array(
                [[e.value for e in row] for row in self.parity], dtype=np.uint8
            )
        return self._parity_ints

    def generator_int_matrix(self) -> np.ndarray:
        if self._generator_ints is None:
            self._generator_ints = np.array(
                [[e.value for e in row] for row in self.generator_rows()], dtype=np.uint8
            )
        return self._generator_ints

    def __repr__(self) -> str:
        return f"NpcCode(k={self.k}, t={self.t}, field=GF(2^{self.field.m}))"


# -- dense linear algebra over the field (small matrices) ----------------------


def _mat_inv(rows: list[list[FieldElement]], field: FieldContext) -> list[list[FieldElement]]:
    """Gauss-Jordan inverse; raises CodecError on a singular matrix."""
    n = len(rows)
    aug = [list(r) + [field.one if j == i else field.zero for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col].value != 0), None)
        if pivot is None:
            raise CodecError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv_p = aug[col][col].inverse()
        aug[col] = [x * inv_p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col].value != 0:
                factor = aug[r][col]
                aug[r] = [x + factor * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _mat_mul(a: list[list[FieldElement]], b: list[list[FieldElement]], field: FieldContext):
    out = []
    for row in a:
        out_row = []
        for j in range(len(b[0])):
            acc = field.zero
            for l, x in enumerate(row):
                acc = acc + x * b[l][j]
            out_row.append(acc)
        out.append(out_row)
    return out


def _rank(rows: list[list[FieldElement]]) -> int:
    work = [list(r) for r in rows]
    n_rows = len(work)
    n_cols = len(work[0]) if work else 0
    rank = 0
    for col in range(n_cols):
        pivot = next((r for r in range(rank, n_rows) if work[r][col].value != 0), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        inv_p = work[rank][col].inverse()
        work[rank] = [x * inv_p for x in work[rank]]
        for r in range(n_rows):
            if r != rank and work[r][col].value != 0:
                factor = work[r][col]
                work[r] = [x + factor * y for x, y in zip(work[r], work[rank])]
        rank += 1
    return rank


# -- code construction ----------------------------------------------------------


def build_code(k: int, t: int, field: FieldContext | None = None) -> NpcCode:
    """Build the [k, k-t] systematic code tolerating t erasures.

    The parity block is obtained by evaluating the data polynomial at k
    distinct points (0, 1, g, g^2, ... for a generator g) and reducing
    the evaluation matrix to systematic form, so the result is MDS.
    Requires field order >= k to have enough distinct points.
    """
    if field is None:
        field = FieldContext(DEFAULT_M)
    if t < 1:
        raise CodecError(f"t must be at least 1, got {t}")
    if t >= k:
        raise CodecError(f"t must be smaller than k, got k={k}, t={t}")
    if field.order < k:
        raise CodecError(
            f"field too small: order {field.order} < k = {k} distinct evaluation points needed"
        )
    d = k - t
    g = field.generator()
    points = [field.zero] + [g**i for i in range(k - 1)]
    rows = [[field.pow(x, i) for x in points] for i in range(d)]
    lead = [row[:d] for row in rows]
    lead_inv = _mat_inv(lead, field)
    sys_rows = _mat_mul(lead_inv, rows, field)
    for i in range(d):
        for j in range(d):
            expect = 1 if i == j else 0
            if sys_rows[i][j].value != expect:
                raise AssertionError("systematization failed")
    parity = [row[d:] for row in sys_rows]
    return NpcCode(k, t, field, parity)


def verify_mds(code: NpcCode) -> bool:
    """True iff every k-t generator columns are linearly independent."""
    rows = code.generator_rows()
    d = code.data_len
    for cols in combinations(range(code.k), d):
        sub = [[row[c] for c in cols] for row in rows]
        if _rank(sub) < d:
            return False
    return True


# -- single-block encode / recover ----------------------------------------------


def encode(code: NpcCode, data: DataBlock | Sequence[FieldElement]) -> Codeword:
    """Systematic encode: data symbols pass through, parity appended."""
    symbols = tuple(data.symbols if isinstance(data, DataBlock) else data)
    if len(symbols) != code.data_len:
        raise CodecError(f"expected {code.data_len} data symbols, got {len(symbols)}")
    f = code.field
    f._check(*symbols)
    parity = []
    for j in range(code.t):
        acc = f.zero
        for i, x in enumerate(symbols):
            acc = acc + code.parity[i][j] * x
        parity.append(acc)
    return Codeword(symbols + tuple(parity))


def recover(code: NpcCode, received: Codeword) -> DataBlock:
    """Solve the data back from any k-t surviving symbols.

    Raises CapacityExceededError past t erasures and
    InconsistentSymbolsError when the survivors fit no codeword.
    """
    if len(received.symbols) != code.k:
        raise CodecError(f"expected {code.k} symbols, got {len(received.symbols)}")
    erased = set(received.erased)
    if not erased <= set(range(code.k)):
        raise CodecError(f"erased positions out of range: {sorted(erased)}")
    if len(erased) > code.t:
        raise CapacityExceededError(
            f"capacity exceeded: {len(erased)} erasures > t = {code.t}"
        )
    survivors = [i for i in range(code.k) if i not in erased]
    d = code.data_len
    f = code.field
    use = survivors[:d]
    if use == list(range(d)):
        data = DataBlock(received.symbols[:d])
    else:
        rows = code.generator_rows()
        sub = [[rows[r][c] for c in use] for r in range(d)]
        sub_inv = _mat_inv(sub, f)
        received_use = [received.symbols[c] for c in use]
        solved = []
        for i in range(d):
            acc = f.zero
            for r in range(d):
                acc = acc + received_use[r] * sub_inv[r][i]
            solved.append(acc)
        data = DataBlock(tuple(solved))
    check = encode(code, data)
    for pos in survivors:
        if check.symbols[pos] != received.symbols[pos]:
            raise InconsistentSymbolsError(
                f"surviving symbol at position {pos} fits no codeword"
            )
    return data


# -- block (bulk) encode / recover ------------------------------------------------


def _require_block_field(code: NpcCode) -> None:
    if not code.field.has_tables:
        raise CodecError("block operations need a tables-backed field (m <= 8)")


def _as_symbol_matrix(arr: np.ndarray, cols: int, order: int) -> np.ndarray:
    a = np.asarray(arr, dtype=np.uint8)
    if a.ndim != 2 or a.shape[1] != cols:
        raise CodecError(f"expected shape (n, {cols}), got {a.shape}")
    if order < 256 and a.size and int(a.max()) >= order:
        raise CodecError(f"symbol value exceeds field order {order}")
    return a


def encode_blocks(code: NpcCode, data: np.ndarray) -> np.ndarray:
    """Encode n data blocks at once: (n, k-t) uint8 -> (n, k) uint8."""
    _require_block_field(code)
    a = _as_symbol_matrix(data, code.data_len, code.field.order)
    log, exp = code.field.log_table, code.field.exp_table
    parity = kernels.gf_matmul(a, code.parity_int_matrix(), log, exp)
    return np.hstack([a, parity])


def recover_blocks(code: NpcCode, received: np.ndarray, erased: Iterable[int]) -> np.ndarray:
    """Recover n blocks sharing one erasure pattern: (n, k) -> (n, k-t)."""
    _require_block_field(code)
    r = _as_symbol_matrix(received, code.k, code.field.order)
    erased = set(erased)
    if not erased <= set(range(code.k)):
        raise CodecError(f"erased positions out of range: {sorted(erased)}")
    if len(erased) > code.t:
        raise CapacityExceededError(
            f"capacity exceeded: {len(erased)} erasures > t = {code.t}"
        )
    survivors = [i for i in range(code.k) if i not in erased]
    d = code.data_len
    f = code.field
    log, exp = f.log_table, f.exp_table
    use = survivors[:d]
    if use == list(range(d)):
        data = r[:, :d].copy()
    else:
        rows = code.generator_rows()
        sub = [[rows[i][c] for c in use] for i in range(d)]
        sub_inv = _mat_inv(sub, f)
        solve = np.array([[e.value for e in row] for row in sub_inv], dtype=np.uint8)
        data = kernels.gf_matmul(r[:, use], solve, log, exp)
    full = kernels.gf_matmul(data, code.generator_int_matrix(), log, exp)
    if not np.array_equal(full[:, survivors], r[:, survivors]):
        raise InconsistentSymbolsError("surviving symbols fit no codeword")
    return data
