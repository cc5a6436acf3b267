"""Genus-one plane curve models and their exact function arithmetic.

Two chart parities are supported.  The even model is the affine curve
x^2 = Q(t) x + P(t) with deg Q <= 2, deg P <= 4; the odd model is
(t+c) x^2 = Q(t) x + P(t) with deg P <= 3.  In the odd parity the
combination z := (t+c) x satisfies z^2 = Q z + (t+c) P, so both parities
reduce to w^2 = R(t) for w := x - Q/2 (even) or w := z - Q/2 (odd),
where R := P + Q^2/4 resp. (t+c) P + Q^2/4.

Curve functions are kept in a unique normal form: alpha + beta * x in the
even parity and (alpha + beta * z) / (t+c)^m with m minimal in the odd
parity.  The module also provides the canonical derivation, the section
spaces used downstream, the two-variable kernel arithmetic behind the
algebraic Szego kernel, and the residue certificate for that kernel.

Curve coefficients may involve extra symbolic parameters (the `params`
tuple of the model); the series-based residue certificate and coordinate
extraction require a fully numeric curve.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .exact_core import (
    LaurentSeries,
    Poly,
    QuadExtElem,
    RationalLike,
    exact_div_linear,
    poly_div_linear_power,
    poly_divmod_linear,
    rat,
    rat_str,
)


class NotInSpace(ValueError):
    """An element does not lie in the requested section space."""


class DivisionByNonUnit(ArithmeticError):
    """A denominator other than a power of (t+c) was requested."""


class DegenerateDivisor(ValueError):
    """The divisor at infinity is not a pair of distinct points."""


class ResidueMismatch(ArithmeticError):
    """A residue certificate came out with unexpected values."""


PolyLike = Union[Poly, Sequence[RationalLike], RationalLike]


def _coerce_t_poly(value: PolyLike, tvars: Tuple[str, ...]) -> Poly:
    if isinstance(value, Poly):
        return value.with_context(tvars)
    if isinstance(value, (list, tuple)):
        return Poly.from_coeffs(value, tvars, "t")
    return Poly.const(tvars, rat(value))


class CurveModel:
    """One plane curve in either parity, with its derived data.

    `k_param` selects the default section space (dimension 2k even,
    2k+1 odd).  `params` lists extra symbolic coefficient variables.
    """

    def __init__(self, parity: str, k_param: int, Q: PolyLike, P: PolyLike,
                 c: Optional[RationalLike] = None, params: Sequence[str] = ()):
        if parity not in ("even", "odd"):
            raise ValueError(f"unknown parity {parity!r}")
        if k_param < 1:
            raise ValueError("k_param must be a positive integer")
        self.parity = parity
        self.k_param = int(k_param)
        self.params = tuple(params)
        self.tvars = ("t",) + self.params
        self.Q = _coerce_t_poly(Q, self.tvars)
        self.P = _coerce_t_poly(P, self.tvars)
        if self.Q.degree_in("t") > 2:
            raise ValueError("deg Q must be at most 2")
        pmax = 4 if parity == "even" else 3
        if self.P.degree_in("t") > pmax:
            raise ValueError(f"deg P must be at most {pmax} in the {parity} parity")
        if parity == "even":
            if c not in (None, 0):
                raise ValueError("the even parity has no pole parameter c")
            self.c = Fraction(0)
        else:
            self.c = rat(0 if c is None else c)
        quarter = Fraction(1, 4)
        if parity == "even":
            # z stands for x itself; z^2 = Q z + P
            self._zz = self.P
            self.R = self.P + self.Q * self.Q * quarter
        else:
            tau = self.tau_poly()
            self._zz = tau * self.P
            self.R = tau * self.P + self.Q * self.Q * quarter

    @classmethod
    def even(cls, k_param: int, Q: PolyLike, P: PolyLike, params: Sequence[str] = ()) -> "CurveModel":
        return cls("even", k_param, Q, P, params=params)

    @classmethod
    def odd(cls, k_param: int, c: RationalLike, Q: PolyLike, P: PolyLike,
            params: Sequence[str] = ()) -> "CurveModel":
        return cls("odd", k_param, Q, P, c=c, params=params)

    def tau_poly(self) -> Poly:
        """The linear factor t + c (odd parity pole locus)."""
        return Poly.var(self.tvars, "t") + Poly.const(self.tvars, self.c)

    def section_dim(self, k: Optional[int] = None) -> int:
        k = self.k_param if k is None else k
        return 2 * k if self.parity == "even" else 2 * k + 1

    def zero(self) -> "CurveElement":
        return CurveElement(self, 0)

    def one(self) -> "CurveElement":
        return CurveElement(self, 1)

    def t_elem(self, power: int = 1) -> "CurveElement":
        return CurveElement(self, Poly.var(self.tvars, "t", power))

    def x_elem(self) -> "CurveElement":
        if self.parity == "even":
            return CurveElement(self, 0, 1)
        return CurveElement(self, 0, 1, denom_power=1)

    def defining_poly(self) -> Poly:
        """F(t, x) with F = x^2 - Qx - P (even) or (t+c)x^2 - Qx - P (odd)."""
        ctx = ("t", "x") + self.params
        x = Poly.var(ctx, "x")
        Q = self.Q.with_context(ctx)
        P = self.P.with_context(ctx)
        if self.parity == "even":
            return x * x - Q * x - P
        tau = Poly.var(ctx, "t") + Poly.const(ctx, self.c)
        return tau * x * x - Q * x - P

    def _require_numeric(self, what: str) -> None:
        if self.params:
            raise ValueError(f"{what} requires a numeric curve, got parameters {self.params}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, CurveModel):
            return NotImplemented
        return (self.parity == other.parity and self.k_param == other.k_param
                and self.Q == other.Q and self.P == other.P and self.c == other.c)

    def __repr__(self) -> str:
        core = f"parity={self.parity}, k={self.k_param}, Q={self.Q}, P={self.P}"
        if self.parity == "odd":
            core += f", c={self.c}"
        return f"CurveModel({core})"

    def to_json(self) -> Dict[str, object]:
        self._require_numeric("serialization")
        pmax = 4 if self.parity == "even" else 3
        qs = self.Q.coeffs_univar("t") + [Fraction(0)] * 3
        ps = self.P.coeffs_univar("t") + [Fraction(0)] * (pmax + 1)
        out: Dict[str, object] = {
            "parity": self.parity,
            "k": self.k_param,
            "Q": [rat_str(q) for q in qs[:3]],
            "P": [rat_str(p) for p in ps[: pmax + 1]],
        }
        if self.parity == "odd":
            out["c"] = rat_str(self.c)
        return out


def _check_models(a: "CurveModel", b: "CurveModel") -> None:
    if a is not b and a != b:
        raise ValueError("elements belong to different curve models")


class CurveElement:
    """A curve function in normal form.

    Even: alpha + beta * x with denom_power = 0.  Odd: the fraction
    (alpha + beta * z) / (t+c)^m with z = (t+c) x and m minimal.
    """

    __slots__ = ("model", "alpha", "beta", "denom_power")

    def __init__(self, model: CurveModel, alpha: PolyLike, beta: PolyLike = 0, denom_power: int = 0):
        self.model = model
        alpha = _coerce_t_poly(alpha, model.tvars)
        beta = _coerce_t_poly(beta, model.tvars)
        if denom_power < 0:
            raise ValueError("denom_power must be nonnegative")
        if model.parity == "even" and denom_power:
            raise ValueError("even elements carry no (t+c) denominator")
        if alpha.is_zero and beta.is_zero:
            denom_power = 0
        root = -model.c
        while denom_power > 0:
            qa, ra = poly_divmod_linear(alpha, "t", root)
            qb, rb = poly_divmod_linear(beta, "t", root)
            if ra.is_zero and rb.is_zero:
                alpha, beta = qa, qb
                denom_power -= 1
            else:
                break
        self.alpha = alpha
        self.beta = beta
        self.denom_power = denom_power

    @property
    def is_zero(self) -> bool:
        return self.alpha.is_zero and self.beta.is_zero

    def _lift(self, m: int) -> Tuple[Poly, Poly]:
        """Numerator pair rescaled to denominator (t+c)^m."""
        d = m - self.denom_power
        if d < 0:
            raise ValueError("cannot lower a denominator")
        if d == 0:
            return self.alpha, self.beta
        tau = self.model.tau_poly() ** d
        return self.alpha * tau, self.beta * tau

    def _coerce(self, other) -> "CurveElement":
        if isinstance(other, CurveElement):
            _check_models(self.model, other.model)
            return other
        if isinstance(other, Poly):
            return CurveElement(self.model, other)
        if isinstance(other, (int, Fraction)):
            return CurveElement(self.model, rat(other))
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other) -> "CurveElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        m = max(self.denom_power, other.denom_power)
        a1, b1 = self._lift(m)
        a2, b2 = other._lift(m)
        return CurveElement(self.model, a1 + a2, b1 + b2, m)

    __radd__ = __add__

    def __neg__(self) -> "CurveElement":
        return CurveElement(self.model, -self.alpha, -self.beta, self.denom_power)

    def __sub__(self, other) -> "CurveElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "CurveElement":
        return (-self) + other

    def __mul__(self, other) -> "CurveElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a1, b1, a2, b2 = self.alpha, self.beta, other.alpha, other.beta
        # (a1 + b1 z)(a2 + b2 z) with z^2 = Q z + _zz
        const = a1 * a2 + b1 * b2 * self.model._zz
        lin = a1 * b2 + a2 * b1 + b1 * b2 * self.model.Q
        return CurveElement(self.model, const, lin, self.denom_power + other.denom_power)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "CurveElement":
        if n < 0:
            raise ValueError("negative power")
        out = self.model.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self.alpha == other.alpha and self.beta == other.beta
                and self.denom_power == other.denom_power)

    def w_parts(self) -> Tuple[Poly, Poly, int]:
        """(alpha_w, beta_w, m) with the numerator written as alpha_w + beta_w * w."""
        half = Fraction(1, 2)
        return self.alpha + self.beta * self.model.Q * half, self.beta, self.denom_power

    def x_parts(self) -> Tuple[Poly, Poly, int]:
        """(A, B, m) with the element equal to (A + B * x) / (t+c)^m."""
        if self.model.parity == "even":
            return self.alpha, self.beta, 0
        return self.alpha, self.beta * self.model.tau_poly(), self.denom_power

    def __str__(self) -> str:
        gen = "x" if self.model.parity == "even" else "z"
        if self.beta.is_zero:
            core = str(self.alpha)
        elif self.alpha.is_zero:
            core = f"({self.beta})*{gen}"
        else:
            core = f"({self.alpha}) + ({self.beta})*{gen}"
        if self.denom_power:
            tau = f"(t + {self.model.c})" if self.model.c else "t"
            return f"[{core}] / {tau}^{self.denom_power}"
        return core

    def __repr__(self) -> str:
        return f"CurveElement({self})"


def reduce(model: CurveModel, numerator: Union[Poly, RationalLike],
           denominator: Union[Poly, RationalLike, None] = None) -> CurveElement:
    """Normal form of a raw polynomial expression in t and x.

    The numerator may be a Poly over any variable tuple containing the
    variables it uses (t, x and the model parameters).  An optional
    denominator must be a nonzero rational multiple of a power of (t+c)
    in the odd parity, or a nonzero rational in the even parity;
    anything else raises DivisionByNonUnit.
    """
    ctx = ("t", "x") + model.params
    if isinstance(numerator, Poly):
        numerator = numerator.with_context(ctx)
    else:
        numerator = Poly.const(ctx, rat(numerator))
    buckets = numerator.as_univar("x")
    x = model.x_elem()
    out = model.zero()
    if buckets:
        # Horner in x over the t-coefficient ring
        for power in range(max(buckets), -1, -1):
            coeff = buckets.get(power)
            term = CurveElement(model, coeff.with_context(model.tvars)) if coeff else model.zero()
            out = out * x + term
    if denominator is None:
        return out
    if isinstance(denominator, Poly):
        den = denominator.with_context(model.tvars)
    else:
        den = Poly.const(model.tvars, rat(denominator))
    if den.is_zero:
        raise ZeroDivisionError("zero denominator")
    m = 0
    if model.parity == "odd":
        while den.degree_in("t") > 0:
            q, r = poly_divmod_linear(den, "t", -model.c)
            if not r.is_zero:
                raise DivisionByNonUnit(f"denominator {denominator} is not a power of (t + {model.c})")
            den = q
            m += 1
    if den.total_degree() > 0:
        raise DivisionByNonUnit(f"denominator {denominator} is not a unit times (t+c)^m")
    unit = den.constant_value()
    if not unit:
        raise DivisionByNonUnit("denominator has zero unit part")
    inv = Fraction(1) / unit
    return CurveElement(model, out.alpha * inv, out.beta * inv, out.denom_power + m)


def curve_derivation(e: CurveElement) -> CurveElement:
    """The canonical derivation, extended by Leibniz and the quotient rule.

    Generator rules: D(t) = 2x - Q and D(x) = P' + Q'x in the even
    parity; D(t) = 2(t+c)x - Q and D(x) = P' + Q'x - x^2 in the odd one.
    """
    model = e.model
    a, b, m = e.alpha, e.beta, e.denom_power
    Q, P = model.Q, model.P
    da = a.derivative("t")
    db = b.derivative("t")
    dQ = Q.derivative("t")
    dP = P.derivative("t")
    if model.parity == "even":
        const = -da * Q + 2 * db * P + b * dP
        lin = 2 * da + db * Q + b * dQ
        return CurveElement(model, const, lin)
    tau = model.tau_poly()
    const = tau * (2 * db * tau * P + b * P + b * tau * dP - da * Q) - m * (2 * b * tau * P - a * Q)
    lin = tau * (2 * da + db * Q + b * dQ) - m * (2 * a + b * Q)
    return CurveElement(model, const, lin, m + 1)


class SectionSpace:
    """Ordered basis of the level-k section space of a curve model.

    Even basis: 1, t, ..., t^k, x, t x, ..., t^(k-2) x (dimension 2k).
    Odd basis:  1, t, ..., t^k, x, t x, ..., t^(k-1) x (dimension 2k+1).
    """

    def __init__(self, model: CurveModel, k: Optional[int] = None):
        self.model = model
        self.k = model.k_param if k is None else k
        if self.k < 1:
            raise ValueError("section level k must be positive")
        self.x_deg_max = self.k - 2 if model.parity == "even" else self.k - 1
        self.dim = (self.k + 1) + (self.x_deg_max + 1)

    def labels(self) -> List[str]:
        out = ["1"] + [f"t^{i}" if i > 1 else "t" for i in range(1, self.k + 1)]
        for j in range(self.x_deg_max + 1):
            out.append("x" if j == 0 else ("t*x" if j == 1 else f"t^{j}*x"))
        return out

    def basis_elements(self) -> List[CurveElement]:
        model = self.model
        out = [CurveElement(model, Poly.var(model.tvars, "t", i) if i else 1) for i in range(self.k + 1)]
        x = model.x_elem()
        t = model.t_elem()
        cur = x
        for j in range(self.x_deg_max + 1):
            out.append(cur)
            cur = cur * t
        return out

    def element_from_coords(self, coords: Sequence[RationalLike]) -> CurveElement:
        if len(coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates")
        basis = self.basis_elements()
        out = self.model.zero()
        for c, e in zip(coords, basis):
            c = rat(c)
            if c:
                out = out + CurveElement(self.model, c) * e
        return out


def membership_extract(e: CurveElement, space: SectionSpace) -> List[Fraction]:
    """Coordinates of e in the section basis; NotInSpace when it fails.

    Works through the x-representation: the element must equal
    a(t) + b(t) x with deg a <= k and deg b <= k-2 (even) or k-1 (odd),
    after the (t+c)^m pole cancels exactly.
    """
    _check_models(e.model, space.model)
    model = e.model
    A, B, m = e.x_parts()
    if m:
        root = -model.c
        A, ra = poly_div_linear_power(A, "t", root, m)
        B, rb = poly_div_linear_power(B, "t", root, m)
        bad = [str(r) for r in (ra, rb) if not r.is_zero]
        if bad:
            raise NotInSpace(f"pole part does not cancel: remainder(s) {', '.join(bad)}")
    coords = [Fraction(0)] * space.dim
    for poly, offset, dmax, tag in ((A, 0, space.k, ""), (B, space.k + 1, space.x_deg_max, "*x")):
        if poly.is_zero:
            continue
        try:
            cs = poly.coeffs_univar("t")
        except ValueError:
            raise NotInSpace(f"coefficients of {poly} are not numeric in t")
        excess = [f"t^{i}{tag}" for i, cf in enumerate(cs) if cf and i > dmax]
        if excess:
            raise NotInSpace(f"terms outside the basis: {', '.join(excess)}")
        for i, cf in enumerate(cs):
            if cf:
                coords[offset + i] = cf
    return coords


class BiCurveElement:
    """Function on the product of the curve with itself, in the w-basis.

    Represents (c00 + c10 w1 + c01 w2 + c11 w1 w2) / ((t1+c)^m1 (t2+c)^m2)
    with the cij polynomials in (t1, t2) and w_i^2 = R(t_i).
    """

    __slots__ = ("model", "c00", "c10", "c01", "c11", "m1", "m2")

    def __init__(self, model: CurveModel, c00: Poly, c10: Poly, c01: Poly, c11: Poly,
                 m1: int = 0, m2: int = 0):
        self.model = model
        coeffs = [c00, c10, c01, c11]
        if model.parity == "even" and (m1 or m2):
            raise ValueError("even parity carries no pole orders")
        root = -model.c
        # minimal pole orders per slot
        for var, m_attr in (("t1", "m1"), ("t2", "m2")):
            m = m1 if var == "t1" else m2
            while m > 0:
                divided = []
                ok = True
                for p in coeffs:
                    q, r = poly_divmod_linear(p, var, root)
                    if not r.is_zero:
                        ok = False
                        break
                    divided.append(q)
                if not ok:
                    break
                coeffs = divided
                m -= 1
            if var == "t1":
                m1 = m
            else:
                m2 = m
        if all(p.is_zero for p in coeffs):
            m1 = m2 = 0
        self.c00, self.c10, self.c01, self.c11 = coeffs
        self.m1 = m1
        self.m2 = m2

    @property
    def bivars(self) -> Tuple[str, ...]:
        return ("t1", "t2") + self.model.params

    @classmethod
    def zero(cls, model: CurveModel) -> "BiCurveElement":
        z = Poly(("t1", "t2") + model.params)
        return cls(model, z, z, z, z)

    @classmethod
    def from_sections(cls, e1: CurveElement, e2: CurveElement) -> "BiCurveElement":
        """The product e1(slot 1) * e2(slot 2)."""
        _check_models(e1.model, e2.model)
        model = e1.model
        bivars = ("t1", "t2") + model.params
        a1, b1, m1 = e1.w_parts()
        a2, b2, m2 = e2.w_parts()
        s1 = {"t": Poly.var(bivars, "t1")}
        s2 = {"t": Poly.var(bivars, "t2")}
        A1, B1 = a1.substitute(s1), b1.substitute(s1)
        A2, B2 = a2.substitute(s2), b2.substitute(s2)
        return cls(model, A1 * A2, B1 * A2, A1 * B2, B1 * B2, m1, m2)

    def _slot_R(self, var: str) -> Poly:
        return self.model.R.substitute({"t": Poly.var(self.bivars, var)})

    def _slot_poly(self, p: Poly, var: str) -> Poly:
        return p.substitute({"t": Poly.var(self.bivars, var)})

    @property
    def is_zero(self) -> bool:
        return self.c00.is_zero and self.c10.is_zero and self.c01.is_zero and self.c11.is_zero

    def _lift(self, m1: int, m2: int) -> List[Poly]:
        d1, d2 = m1 - self.m1, m2 - self.m2
        if d1 < 0 or d2 < 0:
            raise ValueError("cannot lower pole orders")
        factor = Poly.const(self.bivars, 1)
        if d1:
            factor = factor * self._slot_poly(self.model.tau_poly(), "t1") ** d1
        if d2:
            factor = factor * self._slot_poly(self.model.tau_poly(), "t2") ** d2
        return [p * factor for p in (self.c00, self.c10, self.c01, self.c11)]

    def __add__(self, other: "BiCurveElement") -> "BiCurveElement":
        _check_models(self.model, other.model)
        m1 = max(self.m1, other.m1)
        m2 = max(self.m2, other.m2)
        p = self._lift(m1, m2)
        q = other._lift(m1, m2)
        return BiCurveElement(self.model, *(a + b for a, b in zip(p, q)), m1=m1, m2=m2)

    def __neg__(self) -> "BiCurveElement":
        return BiCurveElement(self.model, -self.c00, -self.c10, -self.c01, -self.c11, self.m1, self.m2)

    def __sub__(self, other: "BiCurveElement") -> "BiCurveElement":
        return self + (-other)

    def scale(self, factor: RationalLike) -> "BiCurveElement":
        f = rat(factor)
        return BiCurveElement(self.model, self.c00 * f, self.c10 * f, self.c01 * f,
                              self.c11 * f, self.m1, self.m2)

    def _items(self):
        yield (0, 0), self.c00
        yield (1, 0), self.c10
        yield (0, 1), self.c01
        yield (1, 1), self.c11

    def __mul__(self, other: "BiCurveElement") -> "BiCurveElement":
        _check_models(self.model, other.model)
        R1 = self._slot_R("t1")
        R2 = self._slot_R("t2")
        zero = Poly(self.bivars)
        acc = {(0, 0): zero, (1, 0): zero, (0, 1): zero, (1, 1): zero}
        for (u1, v1), p in self._items():
            if p.is_zero:
                continue
            for (u2, v2), q in other._items():
                if q.is_zero:
                    continue
                prod = p * q
                u, v = u1 + u2, v1 + v2
                if u == 2:
                    prod = prod * R1
                    u = 0
                if v == 2:
                    prod = prod * R2
                    v = 0
                acc[(u, v)] = acc[(u, v)] + prod
        return BiCurveElement(self.model, acc[(0, 0)], acc[(1, 0)], acc[(0, 1)], acc[(1, 1)],
                              self.m1 + other.m1, self.m2 + other.m2)

    def swap_slots(self) -> "BiCurveElement":
        sub = {"t1": Poly.var(self.bivars, "t2"), "t2": Poly.var(self.bivars, "t1")}
        return BiCurveElement(self.model, self.c00.substitute(sub), self.c01.substitute(sub),
                              self.c10.substitute(sub), self.c11.substitute(sub), self.m2, self.m1)

    def diagonal_restriction(self) -> CurveElement:
        """Restrict both slots to the same point; returns a curve element."""
        model = self.model
        t = Poly.var(model.tvars, "t")
        sub = {"t1": t, "t2": t}
        c00 = self.c00.substitute(sub)
        c10 = self.c10.substitute(sub)
        c01 = self.c01.substitute(sub)
        c11 = self.c11.substitute(sub)
        alpha_w = c00 + c11 * model.R
        beta_w = c10 + c01
        # back to the z-basis numerator
        alpha = alpha_w - beta_w * model.Q * Fraction(1, 2)
        return CurveElement(model, alpha, beta_w, self.m1 + self.m2)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiCurveElement):
            return NotImplemented
        return (self.model == other.model and self.m1 == other.m1 and self.m2 == other.m2
                and self.c00 == other.c00 and self.c10 == other.c10
                and self.c01 == other.c01 and self.c11 == other.c11)

    def __repr__(self) -> str:
        core = f"c00={self.c00}, c10={self.c10}, c01={self.c01}, c11={self.c11}"
        if self.m1 or self.m2:
            core += f", poles=({self.m1},{self.m2})"
        return f"BiCurveElement({core})"


def bicurve_x_blocks(bi: BiCurveElement) -> Tuple[Poly, Poly, Poly, Poly]:
    """Numerator blocks of bi in slotwise x-coordinates.

    Returns (A, B, C, D) with the element equal to
    (A + B x1 + C x2 + D x1 x2) / ((t1+c)^m1 (t2+c)^m2); the w -> x
    substitution w_i = (t_i+c) x_i - Q(t_i)/2 (odd) or x_i - Q(t_i)/2
    (even) is folded into the blocks.
    """
    model = bi.model
    half = Fraction(1, 2)
    Q1 = bi._slot_poly(model.Q, "t1")
    Q2 = bi._slot_poly(model.Q, "t2")
    if model.parity == "even":
        tau1 = Poly.const(bi.bivars, 1)
        tau2 = tau1
    else:
        tau1 = bi._slot_poly(model.tau_poly(), "t1")
        tau2 = bi._slot_poly(model.tau_poly(), "t2")
    A = bi.c00 - bi.c10 * Q1 * half - bi.c01 * Q2 * half + bi.c11 * Q1 * Q2 * Fraction(1, 4)
    B = (bi.c10 - bi.c11 * Q2 * half) * tau1
    C = (bi.c01 - bi.c11 * Q1 * half) * tau2
    D = bi.c11 * tau1 * tau2
    return A, B, C, D


@dataclass(frozen=True, eq=False)
class SzegoKernel:
    """Numerator of the algebraic Szego kernel plus its denominator marker.

    The kernel itself is numerator / (t1 - t2); the division is never
    performed here, only later against factors known to cancel it.
    """

    numerator: BiCurveElement
    denominator: str = "t1 - t2"


def szego_kernel(model: CurveModel) -> SzegoKernel:
    """S = (w1 + w2)/(t1 - t2) for the given curve, as numerator + marker."""
    bivars = ("t1", "t2") + model.params
    zero = Poly(bivars)
    one = Poly.const(bivars, 1)
    return SzegoKernel(BiCurveElement(model, zero, one, one, zero))


def mult_kernel_antisym(s1: CurveElement, s2: CurveElement) -> BiCurveElement:
    """S * (s1(1) s2(2) - s2(1) s1(2)) with the diagonal pole cancelled.

    Multiplies the Szego numerator w1 + w2 against the antisymmetrized
    product and divides each of the four w-basis coefficients exactly by
    (t1 - t2); divisibility holds because the whole expression vanishes
    on the diagonal, coefficient by coefficient.
    """
    _check_models(s1.model, s2.model)
    model = s1.model
    raw = BiCurveElement.from_sections(s1, s2) - BiCurveElement.from_sections(s2, s1)
    num = szego_kernel(model).numerator * raw
    parts = [exact_div_linear(p, "t1", "t2") for p in (num.c00, num.c10, num.c01, num.c11)]
    return BiCurveElement(model, *parts, m1=num.m1, m2=num.m2)


@dataclass(frozen=True)
class ResidueCertificate:
    """Outcome of the Szego kernel residue checks for one curve."""

    parity: str
    diagonal: Fraction
    at_infinity: Tuple[Fraction, Fraction]
    probes: Tuple[Fraction, ...]

    def to_json(self) -> Dict[str, object]:
        return {
            "parity": self.parity,
            "diagonal": rat_str(self.diagonal),
            "at_infinity": [rat_str(v) for v in self.at_infinity],
            "probes": [rat_str(v) for v in self.probes],
        }


_T2_PROBES = (Fraction(0), Fraction(1), Fraction(-2))
_SERIES_TRUNC = 12


def verify_szego_residues(model: CurveModel) -> ResidueCertificate:
    """Certify the normalization of the Szego kernel on one curve.

    Checks, all exactly: the residue along the diagonal equals 1, and the
    residues at the two points over t = infinity agree and equal 1/2.
    The infinity residues are computed as Laurent series in u = 1/t over
    the quadratic extension generated by the square root of the leading
    coefficient a of R; the part proportional to the second-slot w is
    certified to contribute nothing.  Requires deg R = 4 (two distinct
    points at infinity); otherwise DegenerateDivisor is raised.
    """
    model._require_numeric("residue certification")
    rc = model.R.coeffs_univar("t")
    rc = rc + [Fraction(0)] * (5 - len(rc))
    a = rc[4]
    if not a:
        raise DegenerateDivisor("t^4 coefficient of R vanishes; divisor at infinity degenerates")

    # diagonal: numerator restricted to t1 = t2 = t must be exactly 2w
    diag = szego_kernel(model).numerator.diagonal_restriction()
    aw, bw, m = diag.w_parts()
    if m or not aw.is_zero:
        raise DivisionByNonUnit(f"diagonal numerator {diag} is not a multiple of w")
    value = bw * Fraction(1, 2)
    if value.total_degree() > 0:
        raise ResidueMismatch(f"diagonal ratio {value} is not constant")
    diagonal = value.constant_value()
    if diagonal != 1:
        raise ResidueMismatch(f"diagonal residue {diagonal} is not 1")

    # infinity: w1 = s sqrt(a) h(u) / u^2 on the branch s, h monic
    r_series = LaurentSeries.from_terms(
        "u", {i: QuadExtElem(rc[4 - i], 0, a) for i in range(5)}, _SERIES_TRUNC, a)
    h = r_series.scale(Fraction(1) / a).sqrt()
    branch_values: List[Fraction] = []
    for s in (1, -1):
        w1 = h.scale(QuadExtElem(0, s, a)).shift(-2)
        inv_2w1 = w1.scale(2).invert()
        probe_values: List[Fraction] = []
        for t2 in _T2_PROBES:
            # 1/(t2 - t1) = -u/(1 - t2 u) at t1 = 1/u; dt1 = -du/u^2
            geo = LaurentSeries.from_terms(
                "u", {0: QuadExtElem(1, 0, a), 1: QuadExtElem(-t2, 0, a)}, _SERIES_TRUNC, a).invert()
            kernel_factor = geo.shift(1).scale(-1)
            measure = kernel_factor.shift(-2).scale(-1)
            res_w1 = (w1 * inv_2w1 * measure).coeff_at(-1)
            res_w2 = (inv_2w1 * measure).coeff_at(-1)
            if not res_w2.is_zero:
                raise ResidueMismatch(f"second-slot residue {res_w2} does not vanish at t2={t2}")
            if res_w1.radical_coeff:
                raise ResidueMismatch(f"irrational residue {res_w1}")
            probe_values.append(res_w1.base)
        if len(set(probe_values)) != 1:
            raise ResidueMismatch(f"probe disagreement on branch {s}: {probe_values}")
        branch_values.append(probe_values[0])
    if branch_values[0] != branch_values[1]:
        raise ResidueMismatch(f"branch residues differ: {branch_values}")
    if branch_values[0] != Fraction(1, 2):
        raise ResidueMismatch(f"infinity residue {branch_values[0]} is not 1/2")
    return ResidueCertificate(model.parity, diagonal, (branch_values[0], branch_values[1]), _T2_PROBES)
