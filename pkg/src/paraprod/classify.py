"""Boundedness verdicts for paraproduct expressions on A^p_alpha and H^p.

The verdict depends only on the grouped canonical form.  Writing the
operator as

    L = sum_{j<=n} S^j T P_j(T) + S P_{n+1}(S) + w P_{n+2}(u) d0

the decision is read off from which of the P's vanish and from the shape of
the top polynomial P_n.  Every verdict carries the list of facts it relies
on so that callers can audit it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from .algebra import Scalar
from .expr import Delta, Letter, OperatorExpr, Power, Product, ScalarMul, Sum, parse
from .rewrite import GroupedForm, group, normalize

__all__ = [
    "SpaceClass",
    "Classification",
    "classify",
    "classify_expr",
    "detect_poly_in_Tgm",
    "two_letter_table",
    "ZERO",
    "TRIVIAL",
    "HINFTY",
    "BLOCH",
    "BMOA",
    "BMOA_OPEN",
    "UNCOVERED",
]

ZERO = "zero"
TRIVIAL = "trivial_iff_g_power_in_space"
HINFTY = "iff_g_in_hinfty"
BLOCH = "iff_g_power_in_bloch"
BMOA = "iff_g_power_in_bmoa"
BMOA_OPEN = "sufficient_g_power_bmoa_necessity_open"
UNCOVERED = "uncovered"

# Facts the classifier relies on, stated in our own words.
FACTS = {
    "zero-operator": "The zero operator is bounded and compact on every space.",
    "trivial-operator-criterion": (
        "A trivial operator w*P(g - g(0))*d0 with P of degree d is bounded on A^p_alpha "
        "exactly when g^d lies in A^p_alpha."
    ),
    "hinfty-criterion": (
        "If some pure S-power survives in the canonical form, the operator is bounded "
        "exactly when g is a bounded analytic function."
    ),
    "bloch-power-criterion": (
        "With no pure S-powers and a nonzero constant top polynomial of S-level n, the "
        "operator is bounded exactly when T_(g^(n+1)) is, i.e. when g^(n+1) is in the Bloch "
        "space (Bergman case) or in BMOA (Hardy case)."
    ),
    "constant-rescaling": (
        "Boundedness is unchanged by multiplying the operator by a nonzero constant, so a "
        "nonzero constant top polynomial is treated like the constant 1."
    ),
    "bergman-nonconstant-top": (
        "On weighted Bergman spaces, with no pure S-powers and a top polynomial of S-level n "
        "that does not vanish at 0, the operator is bounded exactly when g^(n+1) is in the "
        "Bloch space."
    ),
    "polynomial-in-T lemma": (
        "If a polynomial without constant term in T_h is bounded then T_h itself is bounded; "
        "hence such a polynomial is bounded exactly when h is in the Bloch space (Bergman) "
        "or BMOA (Hardy)."
    ),
    "volterra-criterion": (
        "T_h is bounded on A^p_alpha exactly when h is in the Bloch space for alpha > -1 and "
        "in BMOA for Hardy spaces."
    ),
    "bmoa-power-nesting": (
        "If g^n is in BMOA then g^m is in BMOA for every m <= n, which together with the "
        "Bergman-case argument makes g^(n+1) in BMOA sufficient on Hardy spaces."
    ),
    "open-hardy-question": (
        "On Hardy spaces, when the top polynomial is non-constant with nonzero value at 0, "
        "it is not known whether g^(n+1) in BMOA is also necessary."
    ),
    "log-kernel-counterexample": (
        "When the top polynomial vanishes at 0 the symbol conditions do not decide "
        "boundedness: for g = log(e/(1-z)) the operator S_g T_g^2 is unbounded although "
        "g is in the Bloch space and in BMOA, while suitable real powers of g give "
        "compact operators of the same shape with g^(2 beta) outside the Bloch space."
    ),
    "compactness-note": (
        "Compactness is not computed. For reference, S_g and M_g are compact only for "
        "g identically 0, and the T-type criteria have little-Bloch / VMOA analogues."
    ),
}


@dataclass(frozen=True)
class SpaceClass:
    """A^p_alpha with alpha > -1 (Bergman) or alpha = -1 (Hardy H^p)."""

    kind: str = "bergman"
    alpha: float = 0.0
    p: float = 2.0

    def __post_init__(self):
        if self.kind not in ("bergman", "hardy"):
            raise ValueError("space kind must be 'bergman' or 'hardy'")
        if self.kind == "hardy" and self.alpha != -1:
            object.__setattr__(self, "alpha", -1.0)
        if self.kind == "bergman" and not self.alpha > -1:
            raise ValueError("Bergman spaces need alpha > -1")
        if not self.p > 0:
            raise ValueError("p must be positive")

    @classmethod
    def bergman(cls, alpha: float = 0.0, p: float = 2.0) -> "SpaceClass":
        return cls("bergman", alpha, p)

    @classmethod
    def hardy(cls, p: float = 2.0) -> "SpaceClass":
        return cls("hardy", -1.0, p)

    @classmethod
    def from_alpha(cls, alpha: float, p: float = 2.0) -> "SpaceClass":
        return cls.hardy(p) if alpha == -1 else cls.bergman(alpha, p)

    @property
    def is_hardy(self) -> bool:
        return self.kind == "hardy"


@dataclass(frozen=True)
class Classification:
    verdict: str
    space: SpaceClass
    power: Optional[int] = None
    provenance: Tuple[str, ...] = ()
    note: str = ""
    symbol: str = "g"

    def __post_init__(self):
        if not self.provenance:
            raise ValueError("a verdict needs provenance")

    @property
    def bounded_iff(self) -> str:
        """Human-readable condition."""
        s, m = self.symbol, self.power
        sym = s if m in (None, 1) else f"{s}^{m}"
        if self.verdict == ZERO:
            return "always bounded"
        if self.verdict == TRIVIAL:
            return "always bounded" if m == 0 else f"{sym} in the space"
        if self.verdict == HINFTY:
            return f"{s} in H^infinity"
        if self.verdict == BLOCH:
            return f"{sym} in the Bloch space"
        if self.verdict in (BMOA, BMOA_OPEN):
            return f"{sym} in BMOA" + (" (sufficient; necessity open)" if self.verdict == BMOA_OPEN else "")
        return "not decided by symbol conditions"

    def to_json(self) -> dict:
        out: Dict[str, object] = {"verdict": self.verdict}
        if self.power is not None:
            out["power"] = self.power
        out["space"] = self.space.kind
        out["condition"] = self.bounded_iff
        out["provenance"] = [{"theorem": t, "quote": FACTS[t]} for t in self.provenance]
        if self.note:
            out["note"] = self.note
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False)


def _poly_is_constant(p: Tuple[Scalar, ...]) -> bool:
    return len(p) == 1


def _t_type(sp: SpaceClass, power: int, facts: Tuple[str, ...], note="") -> Classification:
    verdict = BMOA if sp.is_hardy else BLOCH
    return Classification(verdict, sp, power, facts + ("compactness-note",), note)


def classify(gf: GroupedForm, sp: SpaceClass) -> Classification:
    """Verdict for a grouped canonical form."""
    if gf.n < 0 and not gf.Pn1:
        if not gf.delta:
            return Classification(ZERO, sp, None, ("zero-operator",))
        payload = gf.Pn2 if gf.Pn2 is not None else gf.delta
        note = "" if gf.Pn2 is not None else "delta part not divisible by w; degree of the raw payload used"
        return Classification(TRIVIAL, sp, payload.degree(), ("trivial-operator-criterion",), note)
    if gf.Pn1:
        return Classification(HINFTY, sp, None, ("hinfty-criterion", "compactness-note"))
    n = gf.n
    top = gf.P[n]
    if n == 0:
        return _t_type(sp, 1, ("polynomial-in-T lemma", "volterra-criterion"))
    if _poly_is_constant(top):
        return _t_type(sp, n + 1, ("bloch-power-criterion", "constant-rescaling"))
    if top[0]:
        if sp.is_hardy:
            return Classification(
                BMOA_OPEN,
                sp,
                n + 1,
                ("bmoa-power-nesting", "open-hardy-question", "compactness-note"),
                "necessity of the BMOA condition is an open problem; not claimed",
            )
        return _t_type(sp, n + 1, ("bergman-nonconstant-top",))
    return Classification(
        UNCOVERED,
        sp,
        None,
        ("log-kernel-counterexample",),
        "top polynomial vanishes at 0; see the log-kernel counterexample",
    )


@dataclass(frozen=True)
class PolyInT:
    """``Q(T(g^m))`` with ``Q[k]`` the coefficient of the k-th power."""

    m: int
    Q: Tuple[Scalar, ...] = field(default=())


def detect_poly_in_Tgm(e: Union[OperatorExpr, str]) -> Optional[PolyInT]:
    """Match ``e`` syntactically as a polynomial (no constant term) in one T(g^m)."""
    if isinstance(e, str):
        e = parse(e)
    atom: List[int] = []

    def add(a, b):
        out = dict(a)
        for k, v in b.items():
            out[k] = out.get(k, Scalar(0)) + v
        return {k: v for k, v in out.items() if v}

    def mul(a, b):
        out: Dict[int, Scalar] = {}
        for i, x in a.items():
            for j, y in b.items():
                out[i + j] = out.get(i + j, Scalar(0)) + x * y
        return {k: v for k, v in out.items() if v}

    def go(e):
        if isinstance(e, Letter):
            if e.name != "T" or (atom and atom[0] != e.m):
                return None
            atom[:] = [e.m]
            return {1: Scalar(1)}
        if isinstance(e, Delta):
            return None
        if isinstance(e, Sum):
            out = {}
            for t in e.terms:
                p = go(t)
                if p is None:
                    return None
                out = add(out, p)
            return out
        if isinstance(e, Product):
            out = {0: Scalar(1)}
            for f in e.factors:
                p = go(f)
                if p is None:
                    return None
                out = mul(out, p)
            return out
        if isinstance(e, Power):
            p = go(e.base)
            if p is None:
                return None
            out = {0: Scalar(1)}
            for _ in range(e.exponent):
                out = mul(out, p)
            return out
        if isinstance(e, ScalarMul):
            if not e.coef.is_constant():
                return None
            p = go(e.expr)
            if p is None:
                return None
            c = e.coef.constant_term()
            return {k: v * c for k, v in p.items() if v * c}
        return None

    p = go(e)
    if not p or not atom:
        return None
    deg = max(p)
    return PolyInT(atom[0], tuple(p.get(k, Scalar(0)) for k in range(deg + 1)))


def classify_expr(e: Union[OperatorExpr, str], sp: SpaceClass) -> Classification:
    """Normalize, group and classify; polynomials in one T(g^m) get the lemma shortcut."""
    if isinstance(e, str):
        e = parse(e)
    cl = classify(group(normalize(e)), sp)
    if cl.verdict == UNCOVERED:
        hit = detect_poly_in_Tgm(e)
        if hit is not None:
            return Classification(
                BMOA if sp.is_hardy else BLOCH,
                sp,
                hit.m,
                ("polynomial-in-T lemma", "volterra-criterion", "compactness-note"),
                f"expression is a polynomial in T(g^{hit.m})",
            )
    return cl


TWO_LETTER_WORDS = [f"{a}*{b}" for a in "TSM" for b in "TSM"]


def two_letter_table(sp: SpaceClass) -> Dict[str, Classification]:
    """Verdicts for the nine compositions of two letters; key ``"X*Y"`` is X after Y."""
    return {w: classify_expr(w, sp) for w in TWO_LETTER_WORDS}
