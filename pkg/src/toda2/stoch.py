"""q-oscillator specialisation: Fock left actions and stochastic structure.

Left row states over N sites are finite combinations of occupation states
v^(k1..kN) with exact coefficients.  The deformed oscillator acts from the
right: v^(k) a = (1 - q^(-2k)) v^(k-1), v^(k) a* = v^(k+1),
v^(k) q^(2D) = q^(-2k) v^(k).  The geometric-like state built on levels
0..K is a truncated eigenstate of a with eigenvalue q^(-2); all identities
involving it hold exactly below the truncation level, and the defects are
confined to the top levels, which the checks inspect rather than discard.
"""

from __future__ import annotations

from fractions import Fraction
from .ring import DEFAULT_REGISTRY, Scalar, ScalarFraction, VarRegistry
from .weyl import Lattice, WeylOp

__all__ = ["FockVector", "fock_act", "build_state", "weyl_act",
           "osc_a", "osc_astar", "osc_qd"]


def _q(k: int, registry: VarRegistry) -> Scalar:
    return Scalar.var("s", 2 * k, registry=registry)


class FockVector:
    """Left row vector: map from level tuples to exact fraction coefficients."""

    __slots__ = ("sites", "trunc", "coeffs", "registry")

    def __init__(self, sites: int, trunc: int, coeffs: dict[tuple, ScalarFraction],
                 registry: VarRegistry = DEFAULT_REGISTRY):
        self.sites = sites
        self.trunc = trunc
        self.registry = registry
        self.coeffs = {k: c for k, c in coeffs.items() if not c.is_zero()}

    @classmethod
    def basis(cls, levels: tuple, trunc: int,
              registry: VarRegistry = DEFAULT_REGISTRY) -> "FockVector":
        one = ScalarFraction(Scalar.const(1, registry))
        return cls(len(levels), trunc, {tuple(levels): one}, registry)

    def __add__(self, other: "FockVector") -> "FockVector":
        if (self.sites, self.trunc) != (other.sites, other.trunc):
            raise ValueError("incompatible Fock spaces")
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            cur = out.get(k)
            out[k] = c if cur is None else cur + c
        return FockVector(self.sites, self.trunc, out, self.registry)

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + other.scale(Scalar.const(-1, self.registry))

    def scale(self, c) -> "FockVector":
        return FockVector(self.sites, self.trunc,
                          {k: v * c for k, v in self.coeffs.items()}, self.registry)

    def is_zero(self) -> bool:
        return not self.coeffs

    def support_levels(self) -> set[tuple]:
        return set(self.coeffs)

    def max_level(self) -> int:
        return max((max(k) for k in self.coeffs), default=-1)

    def interior_part(self) -> "FockVector":
        """Components with every site level strictly below the truncation."""
        return FockVector(self.sites, self.trunc,
                          {k: c for k, c in self.coeffs.items()
                           if all(x < self.trunc for x in k)}, self.registry)

    def boundary_part(self) -> "FockVector":
        return FockVector(self.sites, self.trunc,
                          {k: c for k, c in self.coeffs.items()
                           if any(x >= self.trunc for x in k)}, self.registry)

    def coefficient(self, levels: tuple) -> ScalarFraction:
        return self.coeffs.get(tuple(levels),
                               ScalarFraction(Scalar.zero(self.registry)))

    def to_text(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs):
            parts.append(f"({self.coeffs[k].to_text()}) v{list(k)}")
        return "  +  ".join(parts)

    def __repr__(self):
        return f"FockVector({self.to_text()})"


def fock_act(op: str, site: int, v: FockVector) -> FockVector:
    """Right action of a single oscillator generator on a left state.

    Raising past the truncation level is recorded, not dropped: the overflow
    component at level K+1 stays in the vector and the checks locate it.
    """
    reg = v.registry
    out: dict[tuple, ScalarFraction] = {}

    def add(levels: tuple, c: ScalarFraction) -> None:
        cur = out.get(levels)
        nc = c if cur is None else cur + c
        if nc.is_zero():
            out.pop(levels, None)
        else:
            out[levels] = nc

    i = site - 1
    for levels, c in v.coeffs.items():
        k = levels[i]
        if op == "a":
            if k > 0:
                coeff = Scalar.const(1, reg) - _q(-2 * k, reg)
                add(levels[:i] + (k - 1,) + levels[i + 1:], c * coeff)
        elif op == "astar":
            add(levels[:i] + (k + 1,) + levels[i + 1:], c)
        elif op == "qD":
            add(levels, c * _q(-2 * k, reg))
        else:
            raise ValueError(f"unknown oscillator generator {op!r}")
    return FockVector(v.sites, v.trunc, out, reg)


def build_state(kind: str, K: int, N: int = 1, k: int = 0,
                registry: VarRegistry = DEFAULT_REGISTRY) -> FockVector:
    """Named left states: a basis level, the single-site geometric state on
    levels <= K, or its N-fold tensor power."""
    if kind == "vk":
        return FockVector.basis((k,), K, registry)
    if kind == "omega":
        # common denominator prod_{j<=K}(1 - q^(-2j)) keeps additions aligned
        den = Scalar.const(1, registry)
        for j in range(1, K + 1):
            den = den * (Scalar.const(1, registry) - _q(-2 * j, registry))
        coeffs = {}
        for kk in range(K + 1):
            num = _q(-2 * kk, registry)
            for j in range(kk + 1, K + 1):
                num = num * (Scalar.const(1, registry) - _q(-2 * j, registry))
            coeffs[(kk,)] = ScalarFraction(num, den)
        return FockVector(1, K, coeffs, registry)
    if kind == "Omega":
        base = build_state("omega", K, registry=registry)
        coeffs = {(): ScalarFraction(Scalar.const(1, registry))}
        for _ in range(N):
            new = {}
            for levels, c in coeffs.items():
                for (kk,), c2 in base.coeffs.items():
                    new[levels + (kk,)] = c * c2
            coeffs = new
        return FockVector(N, K, coeffs, registry)
    raise ValueError(f"unknown state kind {kind!r}")


# -- Weyl realisation ------------------------------------------------------------


def osc_a(lattice: Lattice, n: int, registry: VarRegistry = DEFAULT_REGISTRY) -> WeylOp:
    """a_n = (1 - V_n^-1) U_n^-1."""
    return (WeylOp.word(lattice, [(n, "U", -1)], registry=registry)
            - WeylOp.word(lattice, [(n, "V", -1), (n, "U", -1)], registry=registry))


def osc_astar(lattice: Lattice, n: int, registry: VarRegistry = DEFAULT_REGISTRY) -> WeylOp:
    return WeylOp.word(lattice, [(n, "U", 1)], registry=registry)


def osc_qd(lattice: Lattice, n: int, registry: VarRegistry = DEFAULT_REGISTRY) -> WeylOp:
    return WeylOp.word(lattice, [(n, "V", -1)], registry=registry)


def weyl_act(v: FockVector, op: WeylOp) -> FockVector:
    """Right action of a Weyl operator: v^(k) V^a U^b = q^(2ka) v^(k+b).

    Levels pushed below zero annihilate the state; that matches the left
    oscillator action whenever the operator lies in the oscillator algebra.
    """
    reg = v.registry
    out: dict[tuple, ScalarFraction] = {}
    for key, scal in op.terms.items():
        site_exp = {site: (a2, b2) for site, a2, b2 in key}
        if any(a2 % 2 or b2 % 2 for a2, b2 in site_exp.values()):
            raise ValueError("half-integer exponents have no Fock action here")
        for levels, c in v.coeffs.items():
            new = list(levels)
            phase = 0
            dead = False
            for site, (a2, b2) in site_exp.items():
                k = levels[site - 1]
                phase += 2 * k * a2  # v^(k) V^a = q^(2ka) v^(k), a = a2/2
                new[site - 1] = k + b2 // 2
                if new[site - 1] < 0:
                    dead = True
                    break
            if dead:
                continue
            coeff = c * scal
            if phase:
                coeff = coeff * Scalar.var("s", phase, registry=reg)
            tkey = tuple(new)
            cur = out.get(tkey)
            nc = coeff if cur is None else cur + coeff
            if nc.is_zero():
                out.pop(tkey, None)
            else:
                out[tkey] = nc
    return FockVector(v.sites, v.trunc, out, reg)


def stochastic_hamiltonian(lattice: Lattice,
                           registry: VarRegistry = DEFAULT_REGISTRY) -> WeylOp:
    """H = sum_n { a_n a*_{n+1} + q^(2 D_n) } on the periodic chain."""
    total = WeylOp.zero(lattice, registry)
    for n in range(1, lattice.size + 1):
        total = total + osc_a(lattice, n, registry) * osc_astar(lattice, n + 1, registry)
        total = total + osc_qd(lattice, n, registry)
    return total


def sign_probe(N: int = 2, K: int = 4, q=Fraction(1, 2),
               registry: VarRegistry = DEFAULT_REGISTRY) -> dict:
    """Numeric sign pattern of the off-diagonal generator entries at rational q.

    Report-only: counts the signs of the off-diagonal matrix elements of
    H - N id in the level basis, with all levels below the truncation.
    """
    lattice = Lattice(N, True)
    H = stochastic_hamiltonian(lattice, registry)
    from itertools import product
    counts = {"positive": 0, "negative": 0, "zero": 0}
    for levels in product(range(K), repeat=N):
        v = FockVector.basis(levels, K, registry)
        image = weyl_act(v, H)
        for target, coeff in image.coeffs.items():
            if target == levels:
                continue
            if any(x >= K for x in target):
                continue
            val = _eval_q(coeff, q)
            if val > 0:
                counts["positive"] += 1
            elif val < 0:
                counts["negative"] += 1
            else:
                counts["zero"] += 1
    return counts


def _eval_q(c: ScalarFraction, q: Fraction) -> Fraction:
    """Evaluate a fraction whose only variable is s, at s^2 = q exactly."""
    def eval_scalar(x: Scalar) -> Fraction:
        total = Fraction(0)
        for key, coeff in x.terms.items():
            val = coeff
            for v, e in key:
                if x.registry.name(v) != "s":
                    raise ValueError("probe expressions must only involve the deformation")
                if e % 2:
                    raise ValueError("odd half-power survives the probe")
                val *= q ** (e // 2)
            total += val
        return total
    den = eval_scalar(c.den)
    if den == 0:
        raise ZeroDivisionError("denominator vanishes at the probe point")
    return eval_scalar(c.num) / den


# -- named checks ----------------------------------------------------------------


def check_stoch(check_id: str, K: int = 6, N: int = 2,
                registry: VarRegistry = DEFAULT_REGISTRY, mutate: bool = False):
    """Oscillator and stochastic-structure checks at truncation K."""
    from .quantum import ModelParams, build_lax
    from .reports import report_from_residuals

    if K < 3:
        raise ValueError("truncation too small to leave interior levels")
    run_params = {"K": K, "N": N}
    lat1 = Lattice(1, True)
    s4 = lambda k: Scalar.var("s", k, registry=registry)

    if check_id == "qosc_algebra":
        latN = Lattice(max(N, 2), True)
        items = []
        for n in (1, 2):
            a = osc_a(latN, n, registry)
            astar = osc_astar(latN, n, registry)
            qd = osc_qd(latN, n, registry)
            one = WeylOp.one(latN, registry)
            items += [
                (f"a a* (site {n})", a * astar - (one - qd)),
                (f"a* a (site {n})", astar * a - (one - qd * s4(-4))),
                (f"a qD (site {n})", a * qd - qd * a * s4(4)),
                (f"a* qD (site {n})", astar * qd - qd * astar * s4(-4)),
            ]
        items.append(("cross-site", osc_a(latN, 1, registry).commutator(
            osc_astar(latN, 2, registry))))
        return report_from_residuals(check_id, run_params, _SANCHORS[check_id], items)

    if check_id == "Lqosc_match":
        params = ModelParams.q_osc(registry)
        lam = Scalar.var("lam", registry=registry)
        lhs = build_lax("Lloc", 1, lam, params, lat1, registry)
        rhs = build_lax("Lqosc", 1, lam, params, lat1, registry)
        res, _ = lhs.residual(rhs)
        return report_from_residuals(check_id, run_params, _SANCHORS[check_id],
                                     [("preset substitution", res)])

    if check_id == "column_eigen":
        params = ModelParams.q_osc(registry)
        lam = Scalar.var("lam", registry=registry)
        om = build_state("omega", K, registry=registry)
        L = build_lax("Lqosc", 1, lam, params, lat1, registry)
        eigen = lam - Scalar.const(1, registry)
        if mutate:
            eigen = lam + Scalar.const(1, registry)
        items = []
        for col in (0, 1):
            colsum = L.entries[0][col] + L.entries[1][col]
            diff = (weyl_act(om, colsum) - om.scale(eigen)).interior_part()
            items.append((f"column {col + 1}", diff))
        return report_from_residuals(check_id, run_params, _SANCHORS[check_id], items)

    if check_id == "omega_identity":
        om = build_state("omega", K, registry=registry)
        lhs = fock_act("astar", 1, om).scale(-s4(-4))
        rhs = fock_act("qD", 1, om) - om
        diff = lhs - rhs
        bad = {lv for lv in diff.support_levels() if lv[0] <= K}
        items = [("interior part", diff.interior_part()),
                 ("defect below top level",
                  FockVector(1, K, {lv: diff.coeffs[lv] for lv in bad}, registry))]
        return report_from_residuals(check_id, run_params, _SANCHORS[check_id], items)

    if check_id in ("Omega_H1", "zero_column_sum"):
        latN = Lattice(N, True)
        Om = build_state("Omega", K, N=N, registry=registry)
        H = stochastic_hamiltonian(latN, registry)
        image = weyl_act(Om, H)
        target = Om.scale(Scalar.const(N, registry))
        diff = image - target
        if check_id == "Omega_H1":
            stray = FockVector(N, K, {lv: c for lv, c in diff.coeffs.items()
                                      if all(x < K for x in lv)}, registry)
            items = [("interior levels", stray)]
            return report_from_residuals(check_id, run_params, _SANCHORS[check_id], items)
        # per-column statement: interior columns of the truncated generator
        # have vanishing weighted sums
        items = []
        for lv in sorted(lv for lv in set(diff.coeffs) | set(target.coeffs)
                         if all(x < K for x in lv)):
            items.append((f"column {list(lv)}", diff.coefficient(lv)))
        items = items or [("no interior columns", diff.interior_part())]
        return report_from_residuals(check_id, run_params, _SANCHORS[check_id], items)

    if check_id == "realisation_consistency":
        items = []
        for k in range(0, K):
            v = build_state("vk", K, k=k, registry=registry)
            for name, wop in (("a", osc_a(lat1, 1, registry)),
                              ("a*", osc_astar(lat1, 1, registry)),
                              ("qD", osc_qd(lat1, 1, registry))):
                items.append((f"{name} on level {k}",
                              fock_act({"a": "a", "a*": "astar", "qD": "qD"}[name], 1, v)
                              - weyl_act(v, wop)))
        return report_from_residuals(check_id, run_params, _SANCHORS[check_id], items)

    raise ValueError(f"unknown stochastic check {check_id!r}")


_SANCHORS = {
    "qosc_algebra": "deformed oscillator algebra in the Weyl realisation",
    "Lqosc_match": "oscillator Lax equals the ultralocal Lax at the preset",
    "column_eigen": "column sums act on the geometric state with eigenvalue lam - 1",
    "omega_identity": "raising identity of the geometric state below truncation",
    "Omega_H1": "tensor geometric state is a left eigenstate of the chain charge",
    "zero_column_sum": "interior columns of the shifted generator sum to zero",
    "realisation_consistency": "Fock action agrees with the Weyl realisation",
}
