"""Multi-site q-Weyl algebra with canonical normal ordering.

Each lattice site n carries an invertible pair (U_n, V_n) obeying
U_n V_n = q^2 V_n U_n, while generators at distinct sites commute.  Exponents
may be half-integers and are stored doubled, so the reordering factor
U^a V^b -> q^(2ab) V^b U^a is the integer power s^(2a*2b) of s = q^(1/2).

The canonical (normal) form of a monomial is V_n^a U_n^b per site, sites in
ascending order.  A :class:`WeylOp` is a merged sum of such monomials with
:class:`~toda2.ring.Scalar` coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .ring import DEFAULT_REGISTRY, Scalar, VarRegistry

__all__ = ["Lattice", "WeylOp", "TermCapExceeded", "TERM_CAP"]

# Guard against runaway expansions in exchange/commutativity checks.
TERM_CAP = 10 ** 6


class TermCapExceeded(RuntimeError):
    pass


class Lattice(NamedTuple):
    size: int
    periodic: bool

    def site(self, n: int) -> int:
        """Reduce a 1-based site index; periodic lattices wrap mod size."""
        if self.periodic:
            return (n - 1) % self.size + 1
        if not 1 <= n <= self.size:
            raise IndexError(f"site {n} outside open lattice of size {self.size}")
        return n


def _doubled(power) -> int:
    """Validate a half-integer power and return 2*power as an int."""
    d = Fraction(power) * 2
    if d.denominator != 1:
        raise ValueError(f"power {power} is not a half-integer")
    return int(d)


# A term key is a tuple of (site, a2, b2): the normal-ordered factor
# V_site^(a2/2) U_site^(b2/2), with (0, 0) sites omitted, sites ascending.


def _key_merge(k1: tuple, k2: tuple) -> tuple[tuple, int]:
    """Merge two normal-ordered keys; return (key, s_exponent) of the product."""
    phase = 0
    if k1 and k2:
        sites2 = {site: a2 for site, a2, _ in k2}
        for site, _, b2 in k1:
            a2 = sites2.get(site)
            if a2:
                phase += b2 * a2
    out = []
    i = j = 0
    n1, n2 = len(k1), len(k2)
    while i < n1 and j < n2:
        s1, a1, b1 = k1[i]
        s2, a2, b2 = k2[j]
        if s1 == s2:
            a, b = a1 + a2, b1 + b2
            if a or b:
                out.append((s1, a, b))
            i += 1
            j += 1
        elif s1 < s2:
            out.append(k1[i])
            i += 1
        else:
            out.append(k2[j])
            j += 1
    out.extend(k1[i:])
    out.extend(k2[j:])
    return tuple(out), phase


class WeylOp:
    """Normal-ordered finite sum of multi-site Weyl monomials."""

    __slots__ = ("lattice", "terms", "registry")

    def __init__(self, lattice: Lattice, terms: dict[tuple, Scalar],
                 registry: VarRegistry = DEFAULT_REGISTRY):
        self.lattice = lattice
        self.registry = registry
        self.terms = {k: c for k, c in terms.items() if not c.is_zero()}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, lattice: Lattice, registry: VarRegistry = DEFAULT_REGISTRY) -> "WeylOp":
        return cls(lattice, {}, registry)

    @classmethod
    def scalar(cls, coeff, lattice: Lattice,
               registry: VarRegistry = DEFAULT_REGISTRY) -> "WeylOp":
        c = coeff if isinstance(coeff, Scalar) else Scalar.const(coeff, registry)
        return cls(lattice, {(): c}, c.registry)

    @classmethod
    def one(cls, lattice: Lattice, registry: VarRegistry = DEFAULT_REGISTRY) -> "WeylOp":
        return cls.scalar(1, lattice, registry)

    @classmethod
    def generator(cls, lattice: Lattice, site: int, kind: str, power=1,
                  registry: VarRegistry = DEFAULT_REGISTRY) -> "WeylOp":
        """A single U or V generator raised to a half-integer power."""
        return cls.word(lattice, [(site, kind, power)], registry=registry)

    @classmethod
    def word(cls, lattice: Lattice, factors: Sequence[tuple], coeff=1,
             registry: VarRegistry = DEFAULT_REGISTRY) -> "WeylOp":
        """Normal-order an ordered product of (site, 'U'|'V', power) factors.

        The factors multiply left to right; all reordering phases q^(2ab)
        are absorbed into the coefficient.
        """
        c = coeff if isinstance(coeff, Scalar) else Scalar.const(coeff, registry)
        key: tuple = ()
        s_exp = 0
        for site, kind, power in factors:
            n = lattice.site(site)
            d = _doubled(power)
            if not d:
                continue
            if kind == "V":
                fk = ((n, d, 0),)
            elif kind == "U":
                fk = ((n, 0, d),)
            else:
                raise ValueError(f"unknown generator kind {kind!r}")
            key, ph = _key_merge(key, fk)
            s_exp += ph
        if s_exp:
            c = c * Scalar.var("s", s_exp, registry=c.registry)
        return cls(lattice, {key: c}, c.registry)

    # -- linear structure ----------------------------------------------------

    def _check(self, other: "WeylOp") -> None:
        if self.lattice != other.lattice:
            raise ValueError(f"lattice mismatch: {self.lattice} vs {other.lattice}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = WeylOp.scalar(other, self.lattice, self.registry)
        if not isinstance(other, WeylOp):
            return NotImplemented
        self._check(other)
        big, small = (self.terms, other.terms) if len(self.terms) >= len(other.terms) \
            else (other.terms, self.terms)
        out = dict(big)
        for k, c in small.items():
            nc = out.get(k)
            nc = c if nc is None else nc + c
            if nc.is_zero():
                out.pop(k, None)
            else:
                out[k] = nc
        return WeylOp(self.lattice, out, self.registry)

    __radd__ = __add__

    def __neg__(self):
        return WeylOp(self.lattice, {k: -c for k, c in self.terms.items()}, self.registry)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = WeylOp.scalar(other, self.lattice, self.registry)
        if not isinstance(other, WeylOp):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            c = other if isinstance(other, Scalar) else Scalar.const(other, self.registry)
            return WeylOp(self.lattice, {k: co * c for k, co in self.terms.items()},
                          self.registry)
        if not isinstance(other, WeylOp):
            return NotImplemented
        self._check(other)
        out: dict[tuple, Scalar] = {}
        s = Scalar.var("s", registry=self.registry)
        phase_cache: dict[int, Scalar] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k, ph = _key_merge(k1, k2)
                c = c1 * c2
                if ph:
                    f = phase_cache.get(ph)
                    if f is None:
                        f = s ** ph if ph > 0 else s.monomial_inverse() ** (-ph)
                        phase_cache[ph] = f
                    c = c * f
                nc = out.get(k)
                nc = c if nc is None else nc + c
                if nc.is_zero():
                    out.pop(k, None)
                else:
                    out[k] = nc
                    if len(out) > TERM_CAP:
                        raise TermCapExceeded(f"product exceeds {TERM_CAP} terms")
        return WeylOp(self.lattice, out, self.registry)

    def __rmul__(self, other):
        # Only scalars reach here; they commute with everything.
        if isinstance(other, (int, Fraction, Scalar)):
            return self * other
        return NotImplemented

    def commutator(self, other: "WeylOp") -> "WeylOp":
        return self * other - other * self

    # -- algebra maps --------------------------------------------------------

    def substitute(self, bindings) -> "WeylOp":
        """Apply a coefficient-ring substitution to every term."""
        out: dict[tuple, Scalar] = {}
        for k, c in self.terms.items():
            nc = c.substitute(bindings)
            if not nc.is_zero():
                prev = out.get(k)
                out[k] = nc if prev is None else prev + nc
        return WeylOp(self.lattice, out, self.registry)

    def conjugate_v(self) -> "WeylOp":
        """Conjugation by the product over sites of the d2-twist operator.

        Acts as the algebra automorphism U_n -> d2^(-1) U_n, V_n -> d2 V_n.
        """
        out: dict[tuple, Scalar] = {}
        for k, c in self.terms.items():
            w = sum(a2 - b2 for _, a2, b2 in k)
            if w % 2:
                raise ValueError("conjugation would need a half-integer power of d2")
            if w:
                c = c * Scalar.var("d2", w // 2, registry=self.registry)
            out[k] = c
        return WeylOp(self.lattice, out, self.registry)

    def monomial_inverse(self) -> "WeylOp":
        """Inverse of a single-term operator with invertible coefficient."""
        if len(self.terms) != 1:
            raise ValueError("only monomial Weyl operators are invertible")
        (k, c), = self.terms.items()
        # (V^a U^b)^(-1) = q^(2ab) V^(-a) U^(-b) per site.
        phase = sum(a2 * b2 for _, a2, b2 in k)
        inv_c = c.monomial_inverse()
        if phase:
            inv_c = inv_c * Scalar.var("s", phase, registry=self.registry)
        return WeylOp(self.lattice, {tuple((n, -a2, -b2) for n, a2, b2 in k): inv_c},
                      self.registry)

    def map_coeffs(self, fn) -> "WeylOp":
        return WeylOp(self.lattice, {k: fn(c) for k, c in self.terms.items()}, self.registry)

    # -- inspection ----------------------------------------------------------

    def zero_like(self) -> "WeylOp":
        return WeylOp(self.lattice, {}, self.registry)

    def is_zero(self) -> bool:
        return not self.terms

    def term_count(self) -> int:
        return len(self.terms)

    def support(self) -> set[int]:
        return {site for k in self.terms for site, _, _ in k}

    def coeff_of_var(self, name: str, power: int) -> "WeylOp":
        """Weyl coefficient of ``name**power`` inside the Scalar coefficients."""
        out = {}
        for k, c in self.terms.items():
            nc = c.coeff_of(name, power)
            if not nc.is_zero():
                out[k] = nc
        return WeylOp(self.lattice, out, self.registry)

    def degree_of_var(self, name: str) -> int:
        degs = [c.degree_of(name) for c in self.terms.values()]
        return max((d for d in degs if d is not None), default=0)

    def s_exponents_all_even(self) -> bool:
        idx = self.registry.index("s") if "s" in self.registry else None
        if idx is None:
            return True
        for c in self.terms.values():
            for key in c.terms:
                if dict(key).get(idx, 0) % 2:
                    return False
        return True

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = WeylOp.scalar(other, self.lattice, self.registry)
        if not isinstance(other, WeylOp):
            return NotImplemented
        return self.lattice == other.lattice and self.terms == other.terms

    def __hash__(self):
        raise TypeError("WeylOp is not hashable")

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms):
            c = self.terms[k]
            factors = []
            for site, a2, b2 in k:
                if a2:
                    factors.append(f"V{site}^{_fmt_half(a2)}")
                if b2:
                    factors.append(f"U{site}^{_fmt_half(b2)}")
            mono = " ".join(factors) if factors else "1"
            parts.append(f"({c.to_text()}) {mono}")
        return "  +  ".join(parts)

    def __repr__(self):
        return f"WeylOp[{self.lattice.size}{'p' if self.lattice.periodic else 'o'}]({self.to_text()})"


def _fmt_half(doubled: int) -> str:
    return str(doubled // 2) if doubled % 2 == 0 else f"{doubled}/2"


def weyl_sum(items: Iterable[WeylOp], lattice: Lattice,
             registry: VarRegistry = DEFAULT_REGISTRY) -> WeylOp:
    total = WeylOp.zero(lattice, registry)
    for it in items:
        total = total + it
    return total
