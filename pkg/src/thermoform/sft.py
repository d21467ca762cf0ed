"""Words, cylinders and finite-memory functions on the full shift.

A function of memory ``n`` on the full shift over ``m`` symbols is stored as
the table of its values on all words of length ``n``.  Words are encoded
big-endian (first symbol most significant), so the words sharing a prefix
form a contiguous block of codes and the code of ``s.w`` is
``s * m**len(w) + code(w)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import AlphabetMismatch, MemoryOverflow

#: Largest admissible table length ``m**n``; 2**12 allows memory 12 for m=2.
MAX_TABLE_SIZE = 2**12


class ShiftSpec(NamedTuple):
    """Full shift on the symbols ``0..m-1``."""

    m: int

    def check(self) -> "ShiftSpec":
        if int(self.m) < 2:
            raise ValueError(f"alphabet size must be >= 2, got {self.m}")
        return self


class Word(NamedTuple):
    m: int
    length: int
    code: int


def word_index(symbols: Sequence[int], m: int) -> Word:
    """Encode a list of symbols as a big-endian base-``m`` integer."""
    code = 0
    for s in symbols:
        s = int(s)
        if not 0 <= s < m:
            raise ValueError(f"symbol {s} out of range for alphabet size {m}")
        code = code * m + s
    return Word(m, len(symbols), code)


def word_symbols(w: Word) -> list[int]:
    """Decode a :class:`Word` back into its list of symbols."""
    if not 0 <= w.code < w.m**w.length:
        raise ValueError(f"code {w.code} out of range for length {w.length}")
    out = []
    code = w.code
    for _ in range(w.length):
        code, s = divmod(code, w.m)
        out.append(s)
    return out[::-1]


def check_table_size(m: int, n: int) -> None:
    if m**n > MAX_TABLE_SIZE:
        raise MemoryOverflow(
            f"table of memory {n} over {m} symbols has {m**n} entries "
            f"(limit {MAX_TABLE_SIZE})"
        )


@dataclass(frozen=True, eq=False)
class FnTable:
    """A real function depending on the first ``memory`` symbols.

    Used for potentials, observables and tangent vectors alike.  Arithmetic
    between tables of different memory lifts both operands to the larger one.
    """

    m: int
    memory: int
    values: np.ndarray

    def __post_init__(self):
        if self.m < 2:
            raise ValueError(f"alphabet size must be >= 2, got {self.m}")
        if self.memory < 1:
            raise ValueError(f"memory must be >= 1, got {self.memory}")
        check_table_size(self.m, self.memory)
        vals = np.array(self.values, dtype=float).reshape(-1)
        if vals.shape[0] != self.m**self.memory:
            raise ValueError(
                f"expected {self.m**self.memory} values, got {vals.shape[0]}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("table values must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    # construction helpers

    @classmethod
    def constant(cls, m: int, c: float, memory: int = 1) -> "FnTable":
        return cls(m, memory, np.full(m**memory, float(c)))

    @classmethod
    def indicator(cls, m: int, symbols: Sequence[int]) -> "FnTable":
        """Indicator of the cylinder of words starting with ``symbols``."""
        w = word_index(symbols, m)
        vals = np.zeros(m**w.length)
        vals[w.code] = 1.0
        return cls(m, w.length, vals)

    @classmethod
    def from_function(cls, m: int, memory: int, func) -> "FnTable":
        vals = [func(word_symbols(Word(m, memory, c))) for c in range(m**memory)]
        return cls(m, memory, np.array(vals, dtype=float))

    @classmethod
    def random(cls, m: int, memory: int, rng: np.random.Generator, scale=1.0):
        return cls(m, memory, scale * rng.standard_normal(m**memory))

    # structure

    @property
    def size(self) -> int:
        return self.values.shape[0]

    def __call__(self, symbols: Sequence[int]) -> float:
        """Evaluate on any word of length >= memory."""
        if len(symbols) < self.memory:
            raise ValueError("word shorter than the memory of the function")
        return float(self.values[word_index(symbols[: self.memory], self.m).code])

    def lift(self, memory: int) -> "FnTable":
        return lift_memory(self, memory)

    def compose_shift(self) -> "FnTable":
        """Return ``f o T``, a function of memory ``memory + 1``."""
        # (f o T)(s w) = f(w): ignore the leading symbol
        return FnTable(self.m, self.memory + 1, np.tile(self.values, self.m))

    def reduced(self, atol: float = 0.0) -> "FnTable":
        """Drop trailing coordinates the function does not depend on."""
        f = self
        while f.memory > 1:
            v = f.values.reshape(-1, f.m)
            if np.max(np.abs(v - v[:, :1])) > atol:
                break
            f = FnTable(f.m, f.memory - 1, v[:, 0])
        return f

    def _coerce(self, other) -> tuple[np.ndarray, np.ndarray, int]:
        if isinstance(other, FnTable):
            if other.m != self.m:
                raise AlphabetMismatch(f"alphabets differ: {self.m} vs {other.m}")
            n = max(self.memory, other.memory)
            return self.lift(n).values, other.lift(n).values, n
        return self.values, float(other), self.memory

    def __add__(self, other):
        a, b, n = self._coerce(other)
        return FnTable(self.m, n, a + b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b, n = self._coerce(other)
        return FnTable(self.m, n, a - b)

    def __rsub__(self, other):
        a, b, n = self._coerce(other)
        return FnTable(self.m, n, b - a)

    def __mul__(self, other):
        a, b, n = self._coerce(other)
        return FnTable(self.m, n, a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FnTable(self.m, self.memory, self.values / float(other))

    def __neg__(self):
        return FnTable(self.m, self.memory, -self.values)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def allclose(self, other: "FnTable", atol: float = 1e-12) -> bool:
        return (self - other).max_abs() <= atol

    def __repr__(self):
        return f"FnTable(m={self.m}, memory={self.memory}, values={self.values!r})"

    # serialization

    def to_dict(self) -> dict:
        return {"m": self.m, "memory": self.memory, "values": self.values.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "FnTable":
        return cls(int(d["m"]), int(d["memory"]), np.asarray(d["values"], float))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, s: str) -> "FnTable":
        return cls.from_dict(json.loads(s))


def lift_memory(f: FnTable, memory: int) -> FnTable:
    """View ``f`` as a function of the first ``memory`` symbols."""
    if memory < f.memory:
        raise ValueError(f"cannot lift memory {f.memory} down to {memory}")
    if memory == f.memory:
        return f
    return FnTable(f.m, memory, np.repeat(f.values, f.m ** (memory - f.memory)))


def add_coboundary(A: FnTable, g: FnTable, c: float = 0.0) -> FnTable:
    """Return ``A + g - g o T + c``."""
    if A.m != g.m:
        raise AlphabetMismatch(f"alphabets differ: {A.m} vs {g.m}")
    return A + g - g.compose_shift() + c


def common_memory(*fs: FnTable, minimum: int = 1) -> int:
    m = {f.m for f in fs}
    if len(m) > 1:
        raise AlphabetMismatch(f"alphabets differ: {sorted(m)}")
    return max([minimum] + [f.memory for f in fs])
