"""Sparse multivariate Laurent polynomials with exact rational coefficients.

Everything downstream (Weyl operators, Poisson elements, matrices) uses this
ring for its coefficients.  The deformation parameter is stored through the
variable ``s`` with q = s**2: reordering factors of the form q^(ab/2) with
half-integer exponents are then integer powers of s and never leave the ring.

A :class:`Scalar` is a dict from sparse exponent vectors to nonzero
``Fraction`` coefficients; two Scalars are equal iff their term maps are
identical, so the representation is canonical.  Variables live in an
append-only :class:`VarRegistry`; charts and model parameters register the
names they need on the fly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

__all__ = ["VarRegistry", "Scalar", "ScalarFraction", "RegistryMismatch", "DEFAULT_REGISTRY"]


class RegistryMismatch(ValueError):
    """Raised when two Scalars over different variable registries are combined."""


class VarRegistry:
    """Append-only name <-> index table for polynomial variables."""

    def __init__(self) -> None:
        self._names: list[str] = []
        self._index: dict[str, int] = {}

    def add(self, name: str) -> int:
        """Register ``name`` (idempotent) and return its index."""
        idx = self._index.get(name)
        if idx is None:
            idx = len(self._names)
            self._names.append(name)
            self._index[name] = idx
        return idx

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unregistered variable {name!r}") from None

    def name(self, idx: int) -> str:
        return self._names[idx]

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self._names)


DEFAULT_REGISTRY = VarRegistry()

# Exponent vectors are stored sparsely as tuples of (var_index, exponent),
# sorted by index, zeros omitted.  The empty tuple is the constant monomial.
_EMPTY: tuple = ()


def _key_mul(k1: tuple, k2: tuple) -> tuple:
    if not k1:
        return k2
    if not k2:
        return k1
    out = []
    i = j = 0
    n1, n2 = len(k1), len(k2)
    while i < n1 and j < n2:
        v1, e1 = k1[i]
        v2, e2 = k2[j]
        if v1 == v2:
            e = e1 + e2
            if e:
                out.append((v1, e))
            i += 1
            j += 1
        elif v1 < v2:
            out.append(k1[i])
            i += 1
        else:
            out.append(k2[j])
            j += 1
    out.extend(k1[i:])
    out.extend(k2[j:])
    return tuple(out)


def _key_pow(k: tuple, n: int) -> tuple:
    if n == 1:
        return k
    return tuple((v, e * n) for v, e in k)


class Scalar:
    """Immutable sparse Laurent polynomial over one :class:`VarRegistry`."""

    __slots__ = ("registry", "terms", "_hash")

    def __init__(self, terms: Mapping[tuple, Fraction], registry: VarRegistry = DEFAULT_REGISTRY):
        self.registry = registry
        self.terms = {k: c for k, c in terms.items() if c}
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def const(cls, value, registry: VarRegistry = DEFAULT_REGISTRY) -> "Scalar":
        c = Fraction(value)
        return cls({_EMPTY: c} if c else {}, registry)

    @classmethod
    def zero(cls, registry: VarRegistry = DEFAULT_REGISTRY) -> "Scalar":
        return cls({}, registry)

    @classmethod
    def var(cls, name: str, power: int = 1, coeff=1,
            registry: VarRegistry = DEFAULT_REGISTRY) -> "Scalar":
        idx = registry.add(name)
        c = Fraction(coeff)
        if not c:
            return cls({}, registry)
        key = ((idx, power),) if power else _EMPTY
        return cls({key: c}, registry)

    @classmethod
    def monomial(cls, powers: Mapping[str, int], coeff=1,
                 registry: VarRegistry = DEFAULT_REGISTRY) -> "Scalar":
        c = Fraction(coeff)
        if not c:
            return cls({}, registry)
        key = tuple(sorted((registry.add(n), e) for n, e in powers.items() if e))
        return cls({key: c}, registry)

    # -- ring structure ----------------------------------------------------

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.registry is not self.registry:
                raise RegistryMismatch("Scalars over different variable registries")
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar.const(other, self.registry)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        big, small = (self.terms, o.terms) if len(self.terms) >= len(o.terms) else (o.terms, self.terms)
        out = dict(big)
        for k, c in small.items():
            nc = out.get(k, 0) + c
            if nc:
                out[k] = nc
            else:
                out.pop(k, None)
        return Scalar(out, self.registry)

    __radd__ = __add__

    def __neg__(self):
        return Scalar({k: -c for k, c in self.terms.items()}, self.registry)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        out: dict[tuple, Fraction] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in o.terms.items():
                k = _key_mul(k1, k2)
                c = out.get(k, 0) + c1 * c2
                if c:
                    out[k] = c
                else:
                    out.pop(k, None)
        return Scalar(out, self.registry)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("Scalar powers must be integers")
        if n < 0:
            return self.monomial_inverse() ** (-n)
        result = Scalar.const(1, self.registry)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- predicates and canonical form --------------------------------------

    def zero_like(self) -> "Scalar":
        return Scalar({}, self.registry)

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {_EMPTY: Fraction(1)}

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def monomial_inverse(self) -> "Scalar":
        """Inverse of an invertible (single-term) Scalar."""
        if len(self.terms) != 1:
            raise ValueError("only monomials are invertible in the Laurent ring")
        (k, c), = self.terms.items()
        return Scalar({tuple((v, -e) for v, e in k): Fraction(1) / c}, self.registry)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.const(other, self.registry)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.registry is other.registry and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- substitution --------------------------------------------------------

    def substitute(self, bindings: Mapping[str, "Scalar | int | Fraction"]) -> "Scalar":
        """Apply the ring homomorphism sending each bound variable to its image.

        Variables occurring with negative exponents must be sent to invertible
        monomials; other variables may receive arbitrary Scalars.
        """
        images: dict[int, Scalar] = {}
        for name, img in bindings.items():
            idx = self.registry.index(name)
            images[idx] = img if isinstance(img, Scalar) else Scalar.const(img, self.registry)
        out = Scalar.zero(self.registry)
        for k, c in self.terms.items():
            fixed = []
            factor = Scalar.const(c, self.registry)
            for v, e in k:
                img = images.get(v)
                if img is None:
                    fixed.append((v, e))
                    continue
                if e < 0 and not img.is_monomial():
                    raise ValueError(
                        f"variable {self.registry.name(v)!r} occurs with negative power "
                        "but its image is not an invertible monomial")
                factor = factor * (img ** e)
            out = out + factor * Scalar({tuple(fixed): Fraction(1)}, self.registry)
        return out

    def coeff_of(self, name: str, power: int) -> "Scalar":
        """Collect the coefficient of ``name**power`` (the variable removed)."""
        idx = self.registry.index(name)
        out: dict[tuple, Fraction] = {}
        for k, c in self.terms.items():
            e = 0
            rest = []
            for v, ex in k:
                if v == idx:
                    e = ex
                else:
                    rest.append((v, ex))
            if e == power:
                out[tuple(rest)] = out.get(tuple(rest), 0) + c
        return Scalar(out, self.registry)

    def degree_of(self, name: str) -> int | None:
        """Largest exponent of ``name``; None on the zero polynomial."""
        if not self.terms:
            return None
        idx = self.registry.index(name)
        return max((dict(k).get(idx, 0) for k in self.terms), default=0)

    def variables(self) -> set[str]:
        return {self.registry.name(v) for k in self.terms for v, _ in k}

    def eval_rational(self, values: Mapping[str, Fraction]) -> Fraction:
        """Evaluate at rational points; every occurring variable needs a value."""
        total = Fraction(0)
        for k, c in self.terms.items():
            prod = c
            for v, e in k:
                name = self.registry.name(v)
                if name not in values:
                    raise KeyError(f"no value supplied for {name!r}")
                prod *= Fraction(values[name]) ** e
            total += prod
        return total

    # -- canonical text ------------------------------------------------------

    @classmethod
    def from_text(cls, text: str, registry: VarRegistry = DEFAULT_REGISTRY) -> "Scalar":
        """Parse the canonical text form produced by :meth:`to_text`."""
        text = text.strip()
        if text == "0":
            return cls.zero(registry)
        total = cls.zero(registry)
        for signed in text.replace(" - ", " + -").split(" + "):
            part = signed.strip()
            coeff = Fraction(1)
            if part.startswith("-"):
                coeff = -coeff
                part = part[1:]
            powers: dict[str, int] = {}
            for factor in part.split("*"):
                if "^" in factor:
                    name, exp = factor.split("^")
                    powers[name] = powers.get(name, 0) + int(exp)
                elif factor and (factor[0].isdigit() or factor[0] == "-" or "/" in factor):
                    coeff *= Fraction(factor)
                elif factor:
                    powers[factor] = powers.get(factor, 0) + 1
            total = total + cls.monomial(powers, coeff, registry)
        return total

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms):
            c = self.terms[k]
            mono = "*".join(
                f"{self.registry.name(v)}^{e}" if e != 1 else self.registry.name(v)
                for v, e in k)
            if mono:
                if c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append(f"-{mono}")
                else:
                    parts.append(f"{c}*{mono}")
            else:
                parts.append(str(c))
        text = parts[0]
        for p in parts[1:]:
            text += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return text

    def __repr__(self):
        return f"Scalar({self.to_text()})"


class ScalarFraction:
    """Unreduced quotient of two Scalars; equality by cross-multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num: Scalar, den: Scalar | None = None):
        if den is None:
            den = Scalar.const(1, num.registry)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num = num
        self.den = den

    @classmethod
    def from_scalar(cls, s: Scalar) -> "ScalarFraction":
        return cls(s)

    def _coerce(self, other) -> "ScalarFraction":
        if isinstance(other, ScalarFraction):
            return other
        if isinstance(other, Scalar):
            return ScalarFraction(other)
        if isinstance(other, (int, Fraction)):
            return ScalarFraction(Scalar.const(other, self.num.registry))
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den.terms == o.den.terms:
            return ScalarFraction(self.num + o.num, self.den)
        return ScalarFraction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return ScalarFraction(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ScalarFraction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero fraction")
        return ScalarFraction(self.num * o.den, self.den * o.num)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def zero_like(self) -> "ScalarFraction":
        return ScalarFraction(self.num.zero_like())

    def __eq__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            other = self._coerce(other)
        if not isinstance(other, ScalarFraction):
            return NotImplemented
        return (self.num * other.den) == (other.num * self.den)

    def __hash__(self):
        raise TypeError("unreduced fractions are not hashable")

    def to_text(self) -> str:
        if self.den.is_one():
            return self.num.to_text()
        return f"({self.num.to_text()}) / ({self.den.to_text()})"

    def __repr__(self):
        return f"ScalarFraction({self.to_text()})"


def sum_scalars(items: Iterable[Scalar], registry: VarRegistry = DEFAULT_REGISTRY) -> Scalar:
    total = Scalar.zero(registry)
    for it in items:
        total = total + it
    return total
