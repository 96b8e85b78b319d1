"""Dense small-matrix algebra over exact ring entries.

Entries may be Scalars, ScalarFractions, Weyl operators or Poisson elements;
any type with +, -, *, ``is_zero`` and ``zero_like`` works, and mixed
scalar/operator products promote through the operand's reflected operators.
A matrix optionally carries a shared commutative denominator so that
R-matrix identities can be verified as cleared polynomial statements.
"""

from __future__ import annotations

from typing import Callable, Sequence

from .ring import Scalar, ScalarFraction

__all__ = ["OpMatrix", "tensor_embed", "embed_two_leg"]


class OpMatrix:
    __slots__ = ("rows", "cols", "entries", "den")

    def __init__(self, entries: Sequence[Sequence], den: Scalar | None = None):
        self.entries = [list(row) for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        if any(len(r) != self.cols for r in self.entries):
            raise ValueError("ragged matrix")
        if den is not None and den.is_zero():
            raise ValueError("zero denominator")
        self.den = den

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, n: int, one) -> "OpMatrix":
        zero = one.zero_like()
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def filled(cls, rows: int, cols: int, zero) -> "OpMatrix":
        return cls([[zero for _ in range(cols)] for _ in range(rows)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    # -- arithmetic ----------------------------------------------------------

    def _den_or_one(self) -> Scalar | None:
        return self.den

    def __matmul__(self, other: "OpMatrix") -> "OpMatrix":
        return self.mul(other)

    def mul(self, other: "OpMatrix") -> "OpMatrix":
        if self.cols != other.rows:
            raise ValueError(f"dimension mismatch {self.rows}x{self.cols} @ "
                             f"{other.rows}x{other.cols}")
        out = [[None] * other.cols for _ in range(self.rows)]
        for i in range(self.rows):
            arow = self.entries[i]
            for k in range(self.cols):
                a = arow[k]
                if a.is_zero():
                    continue
                brow = other.entries[k]
                orow = out[i]
                for j in range(other.cols):
                    b = brow[j]
                    if b.is_zero():
                        continue
                    p = a * b
                    orow[j] = p if orow[j] is None else orow[j] + p
        zero = _first_zero(self, other)
        entries = [[e if e is not None else zero for e in row] for row in out]
        den = _den_mul(self.den, other.den)
        return OpMatrix(entries, den)

    def add(self, other: "OpMatrix") -> "OpMatrix":
        a, b = self._aligned(other)
        return OpMatrix([[x + y for x, y in zip(ra, rb)]
                         for ra, rb in zip(a.entries, b.entries)], a.den)

    def sub(self, other: "OpMatrix") -> "OpMatrix":
        a, b = self._aligned(other)
        return OpMatrix([[x - y for x, y in zip(ra, rb)]
                         for ra, rb in zip(a.entries, b.entries)], a.den)

    def _aligned(self, other: "OpMatrix") -> tuple["OpMatrix", "OpMatrix"]:
        """Bring both matrices over a common denominator before +/-."""
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")
        d1, d2 = self.den, other.den
        if _den_eq(d1, d2):
            return self, other
        a = self if d2 is None else self.scale(d2)
        b = other if d1 is None else other.scale(d1)
        return OpMatrix(a.entries, _den_mul(d1, d2)), OpMatrix(b.entries, _den_mul(d1, d2))

    def neg(self) -> "OpMatrix":
        return OpMatrix([[-x for x in row] for row in self.entries], self.den)

    def scale(self, c) -> "OpMatrix":
        return OpMatrix([[c * x for x in row] for row in self.entries], self.den)

    def map(self, fn: Callable) -> "OpMatrix":
        return OpMatrix([[fn(x) for x in row] for row in self.entries], self.den)

    def transpose(self) -> "OpMatrix":
        return OpMatrix([[self.entries[j][i] for j in range(self.rows)]
                         for i in range(self.cols)], self.den)

    # -- reductions ----------------------------------------------------------

    def trace(self):
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        total = self.entries[0][0]
        for i in range(1, self.rows):
            total = total + self.entries[i][i]
        if self.den is None or self.den.is_one():
            return total
        if isinstance(total, Scalar):
            return ScalarFraction(total, self.den)
        raise ValueError("nontrivial denominator on a noncommutative trace")

    def det(self):
        """Exact determinant by cofactor expansion; commutative entries only."""
        from .weyl import WeylOp
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        if any(isinstance(x, WeylOp) for row in self.entries for x in row):
            raise TypeError("determinant requires commutative entries")
        if self.den is not None and not self.den.is_one():
            raise ValueError("clear the denominator before taking determinants")
        return _det(self.entries)

    def residual(self, other: "OpMatrix") -> tuple["OpMatrix", bool]:
        """Entrywise difference after clearing denominators, plus all-zero flag."""
        diff = self.sub(other)
        flat = OpMatrix(diff.entries, None)
        return flat, all(x.is_zero() for row in flat.entries for x in row)

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.entries for x in row)

    def nonzero_entries(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.rows) for j in range(self.cols)
                if not self.entries[i][j].is_zero()]

    # -- structure maps -------------------------------------------------------

    def partial_transpose(self, leg: int) -> "OpMatrix":
        """Transpose one tensor leg of a 4x4 two-leg matrix."""
        if (self.rows, self.cols) != (4, 4):
            raise ValueError("partial transpose expects a 4x4 matrix")
        out = [[None] * 4 for _ in range(4)]
        for r in range(4):
            a, b = divmod(r, 2)
            for c in range(4):
                cc, d = divmod(c, 2)
                if leg == 1:
                    out[2 * cc + b][2 * a + d] = self.entries[r][c]
                elif leg == 2:
                    out[2 * a + d][2 * cc + b] = self.entries[r][c]
                else:
                    raise ValueError("leg must be 1 or 2")
        return OpMatrix(out, self.den)

    def inverse_comm(self) -> "OpMatrix":
        """Adjugate/determinant inverse over the fraction field."""
        n = self.rows
        if n != self.cols:
            raise ValueError("inverse of a non-square matrix")
        if self.den is not None and not self.den.is_one():
            raise ValueError("clear the denominator before inverting")
        entries = [[_as_fraction(x) for x in row] for row in self.entries]
        d = _det(entries)
        if d.is_zero():
            raise ZeroDivisionError("singular matrix")
        adj = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                minor = [[entries[r][c] for c in range(n) if c != j]
                         for r in range(n) if r != i]
                cof = _det(minor) if minor else _one_fraction(entries[0][0])
                if (i + j) % 2:
                    cof = -cof
                adj[j][i] = cof / d
        return OpMatrix(adj)

    def to_text(self) -> list[list[str]]:
        return [[x.to_text() for x in row] for row in self.entries]

    def __repr__(self):
        den = f" / ({self.den.to_text()})" if self.den is not None and not self.den.is_one() else ""
        return f"OpMatrix({self.rows}x{self.cols}){den}"


def _as_fraction(x):
    if isinstance(x, Scalar):
        return ScalarFraction(x)
    return x


def _one_fraction(sample):
    if isinstance(sample, ScalarFraction):
        return ScalarFraction(Scalar.const(1, sample.num.registry))
    return Scalar.const(1, sample.registry)


def _det(entries):
    n = len(entries)
    if n == 1:
        return entries[0][0]
    if n == 2:
        return entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0]
    total = None
    for j in range(n):
        a = entries[0][j]
        if a.is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in entries[1:]]
        term = a * _det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else entries[0][0].zero_like()


def _den_mul(d1: Scalar | None, d2: Scalar | None) -> Scalar | None:
    if d1 is None:
        return d2
    if d2 is None:
        return d1
    return d1 * d2


def _den_eq(d1: Scalar | None, d2: Scalar | None) -> bool:
    if d1 is None and d2 is None:
        return True
    if d1 is None or d2 is None:
        return (d1 or d2).is_one()
    return d1 == d2


def _first_zero(a: OpMatrix, b: OpMatrix):
    probe = a.entries[0][0] * b.entries[0][0]
    return probe.zero_like()


def tensor_embed(m: OpMatrix, leg: int) -> OpMatrix:
    """Embed a 2x2 matrix into C^2 (x) C^2 on the given leg (basis 11,12,21,22)."""
    if (m.rows, m.cols) != (2, 2):
        raise ValueError("tensor_embed expects a 2x2 matrix")
    zero = m.entries[0][0].zero_like()
    out = [[zero] * 4 for _ in range(4)]
    for a in range(2):
        for b in range(2):
            for c in range(2):
                for d in range(2):
                    if leg == 1 and b == d:
                        out[2 * a + b][2 * c + d] = m.entries[a][c]
                    elif leg == 2 and a == c:
                        out[2 * a + b][2 * c + d] = m.entries[b][d]
    if leg not in (1, 2):
        raise ValueError("leg must be 1 or 2")
    return OpMatrix(out, m.den)


def embed_two_leg(m: OpMatrix, legs: tuple[int, int], nlegs: int = 3) -> OpMatrix:
    """Embed a two-leg 4x4 matrix into an ``nlegs``-fold tensor product."""
    if (m.rows, m.cols) != (4, 4):
        raise ValueError("embed_two_leg expects a 4x4 matrix")
    l1, l2 = legs
    dim = 2 ** nlegs
    zero = m.entries[0][0].zero_like()
    out = [[zero] * dim for _ in range(dim)]
    for r in range(dim):
        rbits = [(r >> (nlegs - 1 - k)) & 1 for k in range(nlegs)]
        for c in range(dim):
            cbits = [(c >> (nlegs - 1 - k)) & 1 for k in range(nlegs)]
            ok = all(rbits[k] == cbits[k] for k in range(nlegs)
                     if k not in (l1 - 1, l2 - 1))
            if not ok:
                continue
            mr = 2 * rbits[l1 - 1] + rbits[l2 - 1]
            mc = 2 * cbits[l1 - 1] + cbits[l2 - 1]
            out[r][c] = m.entries[mr][mc]
    return OpMatrix(out, m.den)
