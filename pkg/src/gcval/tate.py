"""Tate's algorithm over Q_p: Kodaira type, local index c_v, minimal model.

The classical step structure is followed directly on the five-coefficient
form.  Every residue computation (singular point location, root finding,
splitting tests) is an explicit search over F_p, which keeps p = 2 and
p = 3 on the same code path as everything else; intended primes are small.

Two models are reported:

* ``minimal_model``   -- the p-minimal model reached from the input by a
  change whose u is a power of p (trivial when the input is minimal);
* ``normalized_model`` -- the exact model held when the algorithm decided
  the type, reached from the minimal model by translations only (u = 1).
  Division-polynomial valuations are insensitive to such changes, and the
  per-type coefficient valuations that the downstream formulas assume on
  this model.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .curve_core import (
    CoordinateChange,
    WeierstrassModel,
    apply_change,
    derive,
)
from .errors import InputError, InternalError, NonIntegralError
from .exact_numbers import Valuation, check_prime, val

_KODAIRA_FIXED = ("II", "III", "IV", "II*", "III*", "IV*")


@dataclass(frozen=True)
class KodairaType:
    series: str  # "I", "I*", "II", "III", "IV", "II*", "III*", "IV*"
    m: int = 0   # index for the I / I* series; 0 otherwise

    def __post_init__(self):
        if self.series in _KODAIRA_FIXED:
            if self.m:
                raise InputError(f"{self.series} takes no index")
        elif self.series not in ("I", "I*"):
            raise InputError(f"unknown Kodaira series {self.series!r}")
        elif self.m < 0:
            raise InputError("Kodaira index must be >= 0")

    def __str__(self):
        if self.series == "I":
            return f"I{self.m}"
        if self.series == "I*":
            return f"I{self.m}*"
        return self.series

    @classmethod
    def parse(cls, text: str) -> "KodairaType":
        text = text.strip()
        if text in _KODAIRA_FIXED:
            return cls(text)
        m = re.fullmatch(r"I(\d+)(\*?)", text)
        if not m:
            raise InputError(f"cannot parse Kodaira symbol {text!r}")
        return cls("I*" if m.group(2) else "I", int(m.group(1)))


@dataclass(frozen=True)
class TateResult:
    p: int
    input_model: WeierstrassModel
    minimal_model: WeierstrassModel
    normalized_model: WeierstrassModel
    to_minimal: CoordinateChange      # input -> minimal; u a power of p
    to_normalized: CoordinateChange   # minimal -> normalized; u = 1
    kodaira: KodairaType
    cv: int
    v_delta: int
    v_c4: Valuation
    v_j: Valuation
    reduction: str                    # "good" | "multiplicative" | "additive"
    split: bool | None                # defined for multiplicative reduction only


def _fp(q, p: int) -> int:
    """Reduce a p-integral rational mod p."""
    num, den = q.numerator, q.denominator
    if den % p == 0:
        raise InternalError("reducing a non-p-integral value")
    return num * pow(den, -1, p) % p


def _poly_value(coeffs, x, p):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def _roots_mod_p(coeffs, p):
    """Roots in F_p of a polynomial given by low-to-high coefficients."""
    return [x for x in range(p) if _poly_value(coeffs, x, p) == 0]


def _quad_separable(a, b, c, p) -> bool:
    """a Y^2 + b Y + c separable mod p (a a unit): disc = b^2 - 4ac != 0."""
    return (b * b - 4 * a * c) % p != 0


def _quad_double_root(a, b, c, p) -> int:
    roots = _roots_mod_p([c, b, a], p)
    if len(roots) != 1:
        raise InternalError("inseparable quadratic without a unique root mod p")
    return roots[0]


def _cubic_analysis(A, B, C, p):
    """For T^3 + A T^2 + B T + C mod p: ('separable', n_rational_roots) or
    ('double'|'triple', repeated_root)."""
    disc = (18 * A * B * C - 4 * A ** 3 * C + A * A * B * B - 4 * B ** 3 - 27 * C * C) % p
    if disc != 0:
        return "separable", len(_roots_mod_p([C, B, A, 1], p))
    # the repeated root of a cubic is Galois-stable, hence in F_p
    for alpha in range(p):
        if _poly_value([C, B, A, 1], alpha, p) != 0:
            continue
        # multiplicity via synthetic division
        coeffs = [1, A % p, B % p, C % p]
        mult = 0
        while True:
            out, rem = [], 0
            for c in coeffs:
                rem = (rem * alpha + c) % p
                out.append(rem)
            if out[-1] != 0:
                break
            mult += 1
            coeffs = out[:-1]
            if len(coeffs) == 1:
                break
        if mult >= 2:
            return ("triple" if mult >= 3 else "double"), alpha
    raise InternalError("cubic with zero discriminant but no repeated root found")


def _singular_point_mod_p(model: WeierstrassModel, p: int):
    """The unique singular point of the reduced curve, by exhaustive search."""
    a1, a2, a3, a4, a6 = (_fp(a, p) for a in model.coefficients())
    for x in range(p):
        for y in range(p):
            f = (y * y + a1 * x * y + a3 * y - x ** 3 - a2 * x * x - a4 * x - a6) % p
            if f:
                continue
            fx = (a1 * y - 3 * x * x - 2 * a2 * x - a4) % p
            fy = (2 * y + a1 * x + a3) % p
            if fx == 0 and fy == 0:
                return x, y
    raise InternalError("reduced curve has positive v(delta) but no singular point")


class _Restart(Exception):
    """Internal: the model is non-minimal at p; rescale by u = p and rerun.

    Carries the pass state: the u = p scaling applies to the *translated*
    model the pass ended with (its step-11 coefficient valuations are what
    make the rescaled model integral), so the accumulated translations must
    travel with the restart.
    """

    def __init__(self, state):
        super().__init__("non-minimal model")
        self.state = state


@dataclass
class _PassState:
    model: WeierstrassModel
    p: int
    translations: CoordinateChange

    def translate(self, r=0, s=0, t=0):
        step = CoordinateChange(1, r, s, t)
        self.model = apply_change(self.model, step)
        self.translations = self.translations.compose(step)

    def v(self, q) -> Valuation:
        return val(q, self.p)


def _tate_pass(model: WeierstrassModel, p: int):
    """One pass of the algorithm.  Returns (kodaira, cv, split, state) or
    raises _Restart when step 11 is reached."""
    st = _PassState(model, p, CoordinateChange.identity())
    d = derive(st.model)
    v_delta = st.v(d.delta)

    # Step 1: good reduction.
    if v_delta == 0:
        return KodairaType("I", 0), 1, None, st

    # Move the singular point of the reduction to (0, 0); afterwards
    # p | a3, a4, a6.
    x0, y0 = _singular_point_mod_p(st.model, p)
    if (x0, y0) != (0, 0):
        st.translate(r=x0, t=y0)
    m = st.model
    if min(st.v(m.a3), st.v(m.a4), st.v(m.a6)) < 1:
        raise InternalError("singular-point translation failed")
    d = derive(st.model)

    # Step 2: node (multiplicative reduction), type I_m with m = v(delta).
    if st.v(d.b2) == 0:
        mm = int(v_delta)
        a1, a2 = _fp(st.model.a1, p), _fp(st.model.a2, p)
        tangent_roots = _roots_mod_p([(-a2) % p, a1, 1], p)
        split = len(tangent_roots) == 2
        cv = mm if split else (2 if mm % 2 == 0 else 1)
        return KodairaType("I", mm), cv, split, st

    # Additive reduction from here on.
    # Step 3: type II.
    if st.v(st.model.a6) < 2:
        return KodairaType("II"), 1, None, st
    # Step 4: type III.
    if st.v(d.b8) < 3:
        return KodairaType("III"), 2, None, st
    # Step 5: type IV.
    if st.v(d.b6) < 3:
        a3_1 = _fp(st.model.a3 / p, p)
        a6_2 = _fp(st.model.a6 / p ** 2, p)
        roots = _roots_mod_p([(-a6_2) % p, a3_1, 1], p)
        cv = 3 if len(roots) == 2 else 1
        return KodairaType("IV"), cv, None, st

    # Step 6 entry: normalize so v(a1), v(a2) >= 1, v(a3) >= 2, v(a4) >= 2,
    # v(a6) >= 3.  First kill the (double) tangent direction with an s-shear,
    # then the double root of the Y-quadratic with a t-shift.
    a1, a2 = _fp(st.model.a1, p), _fp(st.model.a2, p)
    s0 = _quad_double_root(1, a1, (-a2) % p, p)
    if s0:
        st.translate(s=s0)
    a3_1 = _fp(st.model.a3 / p, p)
    a6_2 = _fp(st.model.a6 / p ** 2, p)
    y1 = _quad_double_root(1, a3_1, (-a6_2) % p, p)
    if y1:
        st.translate(t=p * y1)
    m = st.model
    if (st.v(m.a1) < 1 or st.v(m.a2) < 1 or st.v(m.a3) < 2
            or st.v(m.a4) < 2 or st.v(m.a6) < 3):
        raise InternalError("step-6 normalization failed")

    # Step 6: the residual cubic T^3 + (a2/p) T^2 + (a4/p^2) T + (a6/p^3).
    A = _fp(st.model.a2 / p, p)
    B = _fp(st.model.a4 / p ** 2, p)
    C = _fp(st.model.a6 / p ** 3, p)
    kind, info = _cubic_analysis(A, B, C, p)
    if kind == "separable":
        return KodairaType("I*", 0), 1 + info, None, st

    if kind == "double":
        if info:
            st.translate(r=p * info)
        return _istar_subloop(st, int(v_delta))

    # Triple root: steps 8-11.
    if info:
        st.translate(r=p * info)
    m = st.model
    if st.v(m.a2) < 2 or st.v(m.a4) < 3 or st.v(m.a6) < 4:
        raise InternalError("triple-root translation failed")
    # Step 8: type IV*.
    a3_2 = _fp(st.model.a3 / p ** 2, p)
    a6_4 = _fp(st.model.a6 / p ** 4, p)
    if _quad_separable(1, a3_2, (-a6_4) % p, p):
        roots = _roots_mod_p([(-a6_4) % p, a3_2, 1], p)
        cv = 3 if len(roots) == 2 else 1
        return KodairaType("IV*"), cv, None, st
    y2 = _quad_double_root(1, a3_2, (-a6_4) % p, p)
    if y2:
        st.translate(t=p * p * y2)
    m = st.model
    if st.v(m.a3) < 3 or st.v(m.a6) < 5:
        raise InternalError("step-9 translation failed")
    # Step 9: type III*.
    if st.v(st.model.a4) < 4:
        return KodairaType("III*"), 2, None, st
    # Step 10: type II*.
    if st.v(st.model.a6) < 6:
        return KodairaType("II*"), 1, None, st
    # Step 11: non-minimal.
    raise _Restart(st)


def _istar_subloop(st: _PassState, v_delta: int):
    """The I_m* sub-procedure, m >= 1.  On entry v(a1) >= 1, v(a2) = 1,
    v(a3) >= 2, v(a4) >= 3, v(a6) >= 4."""
    p = st.p
    m = st.model
    if st.v(m.a2) != 1 or st.v(m.a3) < 2 or st.v(m.a4) < 3 or st.v(m.a6) < 4:
        raise InternalError("I_m* sub-loop entered with wrong valuations")
    n = 1
    while n <= v_delta:
        model = st.model
        if n % 2:
            k = (n + 3) // 2
            # quadratic Y^2 + (a3/p^k) Y - a6/p^(n+3)
            bb = _fp(model.a3 / p ** k, p)
            cc = (-_fp(model.a6 / p ** (n + 3), p)) % p
            if _quad_separable(1, bb, cc, p):
                cv = 4 if len(_roots_mod_p([cc, bb, 1], p)) == 2 else 2
                return KodairaType("I*", n), cv, None, st
            root = _quad_double_root(1, bb, cc, p)
            if root:
                st.translate(t=p ** k * root)
        else:
            k = (n + 4) // 2
            # quadratic (a2/p) X^2 + (a4/p^k) X + a6/p^(n+3)
            aa = _fp(model.a2 / p, p)
            bb = _fp(model.a4 / p ** k, p)
            cc = _fp(model.a6 / p ** (n + 3), p)
            if _quad_separable(aa, bb, cc, p):
                cv = 4 if len(_roots_mod_p([cc, bb, aa], p)) == 2 else 2
                return KodairaType("I*", n), cv, None, st
            root = _quad_double_root(aa, bb, cc, p)
            if root:
                st.translate(r=p ** (n // 2 + 1) * root)
        n += 1
    raise InternalError("I_m* sub-loop failed to terminate within v(delta)")


def run_tate(model: WeierstrassModel, p: int) -> TateResult:
    """Full run: minimalization restarts, type, c_v, and both models."""
    check_prime(p)
    if any(val(a, p) < 0 for a in model.coefficients() if a != 0):
        raise NonIntegralError(
            f"model {model} is not {p}-integral; clear denominators first")

    to_minimal = CoordinateChange.identity()
    current = model
    # v(delta) drops by 12 per restart, so this bound is generous.
    max_passes = int(val(derive(current).delta, p)) // 12 + 2
    for _ in range(max_passes):
        try:
            kodaira, cv, split, st = _tate_pass(current, p)
        except _Restart as restart:
            step = CoordinateChange(u=p)
            current = apply_change(restart.state.model, step)
            to_minimal = to_minimal.compose(restart.state.translations).compose(step)
            continue
        d = derive(current)
        v_delta = int(val(d.delta, p))
        v_c4 = val(d.c4, p)
        v_j = val(d.j, p)
        if kodaira.series == "I" and kodaira.m == 0:
            reduction = "good"
        elif kodaira.series == "I":
            reduction = "multiplicative"
        else:
            reduction = "additive"
        result = TateResult(
            p=p,
            input_model=model,
            minimal_model=current,
            normalized_model=st.model,
            to_minimal=to_minimal,
            to_normalized=st.translations,
            kodaira=kodaira,
            cv=cv,
            v_delta=v_delta,
            v_c4=v_c4,
            v_j=v_j,
            reduction=reduction,
            split=split,
        )
        _check_result(result)
        return result
    raise InternalError("minimalization did not terminate")


def _check_result(res: TateResult) -> None:
    """Invariants that hold for every correct run; violations are bugs."""
    k = res.kodaira
    if k.series == "I" and k.m > 0:
        if res.v_c4 != 0 or res.v_j != -k.m or res.v_delta != k.m:
            raise InternalError(f"I_m invariants failed for {k}: "
                                f"v_c4={res.v_c4} v_j={res.v_j} v_delta={res.v_delta}")
        if res.split and res.cv != k.m:
            raise InternalError("split I_m must have c_v = m")
        if not res.split and res.cv not in (1, 2):
            raise InternalError("non-split I_m must have c_v in {1, 2}")
    if k.series == "I*" and k.m >= 1 and res.v_j < 0:
        # potential multiplicative reduction only: with v(j) >= 0 (possible
        # for p = 2 only) the relation below genuinely fails
        if res.v_delta != k.m + 4 + res.v_c4:
            raise InternalError(
                f"I_m* relation v(delta) = m + 4 + v(c4) failed for {k}")
    if res.reduction == "additive" and res.cv not in (1, 2, 3, 4):
        raise InternalError("additive c_v out of range")
    if not res.to_normalized.u == 1:
        raise InternalError("normalization must be a translation")
    for a in res.minimal_model.coefficients():
        if a != 0 and val(a, res.p) < 0:
            raise InternalError("minimal model is not p-integral")
