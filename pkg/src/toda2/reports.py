"""Verification outcome records shared by every check suite."""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["CheckReport", "report_from_residuals", "residual_size"]

PASS = "pass"
FAIL = "fail"
DEGENERATE = "degenerate"


@dataclass
class CheckReport:
    id: str
    params: dict
    status: str
    residual_terms: int
    witness: str
    anchor: str = ""
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def as_row(self) -> dict:
        return {
            "id": self.id,
            "params": self.params,
            "status": self.status,
            "residual_terms": self.residual_terms,
            "witness": self.witness,
            "anchor": self.anchor,
        }


def residual_size(obj) -> int:
    """Number of surviving terms in a residual of any supported kind."""
    from .matops import OpMatrix
    from .poisson import PoissonElem
    from .ring import Scalar, ScalarFraction
    from .stoch import FockVector
    from .weyl import WeylOp

    if isinstance(obj, OpMatrix):
        return sum(residual_size(x) for row in obj.entries for x in row)
    if isinstance(obj, WeylOp):
        return sum(len(c.terms) for c in obj.terms.values())
    if isinstance(obj, PoissonElem):
        return len(obj.value.num.terms)
    if isinstance(obj, ScalarFraction):
        return len(obj.num.terms)
    if isinstance(obj, Scalar):
        return len(obj.terms)
    if isinstance(obj, FockVector):
        return sum(len(c.num.terms) for c in obj.coeffs.values())
    raise TypeError(f"unsupported residual type {type(obj)!r}")


def _witness_text(obj) -> str:
    from .matops import OpMatrix

    if isinstance(obj, OpMatrix):
        for i, j in obj.nonzero_entries():
            return f"entry ({i + 1},{j + 1}): {_clip(obj.entries[i][j].to_text())}"
        return ""
    return _clip(obj.to_text())


def _clip(text: str, limit: int = 200) -> str:
    return text if len(text) <= limit else text[:limit] + " ..."


def report_from_residuals(check_id: str, params: dict, anchor: str,
                          items, degenerate: bool = False) -> CheckReport:
    """Summarise labelled residuals: pass iff every residual is zero."""
    total = 0
    witness = ""
    for label, res in items:
        n = residual_size(res)
        if n and not witness:
            witness = f"{label}: {_witness_text(res)}"
        total += n
    if total == 0:
        status = DEGENERATE if degenerate else PASS
    else:
        status = DEGENERATE if degenerate else FAIL
    if degenerate and total:
        witness = witness or "nonzero residual under degenerate wrap"
    return CheckReport(check_id, params, status, total, witness)
