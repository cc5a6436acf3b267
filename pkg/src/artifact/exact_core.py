"""Exact arithmetic kernel: rationals, sparse multivariate polynomials,
quadratic field extensions and truncated Laurent series.

Everything here is immutable after construction and exact; there is no
floating point in this module or anywhere downstream of it.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

Rational = Fraction

RationalLike = Union[Fraction, int, str]


class VariableContextMismatch(ValueError):
    """Arithmetic between polynomials over different variable tuples."""


class NonzeroRemainder(ArithmeticError):
    """An exact division left a remainder."""


class ZeroLeading(ArithmeticError):
    """Inversion of a series with no invertible leading coefficient."""


class SqrtNotRepresentable(ArithmeticError):
    """A square root does not exist inside the working extension."""


def rat(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to an exact rational."""
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


def rat_str(value: RationalLike) -> str:
    """Serialize a rational as "p/q" in lowest terms with q > 0."""
    q = rat(value)
    return f"{q.numerator}/{q.denominator}"


def rat_sqrt(value: RationalLike) -> Optional[Fraction]:
    """Exact square root of a rational, or None when it is not a square."""
    q = rat(value)
    if q < 0:
        return None
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def _grlex_key(expo: Tuple[int, ...]) -> Tuple:
    return (sum(expo), expo)


class Poly:
    """Sparse polynomial with rational coefficients over a fixed tuple of
    variables.

    Terms live in a dict mapping exponent tuples to nonzero coefficients;
    zero coefficients are never stored.  The variable tuple is part of the
    identity of the ring: mixing contexts raises VariableContextMismatch
    rather than guessing an embedding.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, variables: Sequence[str], terms: Optional[Dict[Tuple[int, ...], RationalLike]] = None):
        object.__setattr__(self, "vars", tuple(variables))
        clean: Dict[Tuple[int, ...], Fraction] = {}
        if terms:
            width = len(self.vars)
            for expo, coeff in terms.items():
                expo = tuple(expo)
                if len(expo) != width:
                    raise ValueError(f"exponent {expo} does not fit variables {self.vars}")
                c = rat(coeff)
                if c:
                    prev = clean.get(expo)
                    c = c + prev if prev is not None else c
                    if c:
                        clean[expo] = c
                    else:
                        clean.pop(expo, None)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def const(cls, variables: Sequence[str], value: RationalLike) -> "Poly":
        variables = tuple(variables)
        v = rat(value)
        if not v:
            return cls(variables)
        return cls(variables, {(0,) * len(variables): v})

    @classmethod
    def var(cls, variables: Sequence[str], name: str, power: int = 1) -> "Poly":
        variables = tuple(variables)
        expo = [0] * len(variables)
        expo[variables.index(name)] = power
        return cls(variables, {tuple(expo): Fraction(1)})

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[RationalLike], variables: Sequence[str], name: Optional[str] = None) -> "Poly":
        """Univariate polynomial from an ascending coefficient list."""
        variables = tuple(variables)
        name = name if name is not None else variables[0]
        slot = variables.index(name)
        terms = {}
        for power, c in enumerate(coeffs):
            expo = [0] * len(variables)
            expo[slot] = power
            terms[tuple(expo)] = rat(c)
        return cls(variables, terms)

    # -- basic queries ------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        if not self.terms:
            return -1
        slot = self.vars.index(name)
        return max(e[slot] for e in self.terms)

    def coeff(self, expo: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(expo), Fraction(0))

    def constant_value(self) -> Fraction:
        """Value of a constant polynomial (errors when not constant)."""
        if self.total_degree() > 0:
            raise ValueError(f"not a constant: {self}")
        return self.coeff((0,) * len(self.vars))

    def sorted_terms(self) -> List[Tuple[Tuple[int, ...], Fraction]]:
        """Terms in descending graded-lex order (canonical iteration order)."""
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def coeffs_univar(self, name: Optional[str] = None) -> List[Fraction]:
        """Ascending dense coefficient list; the polynomial must involve no
        variable other than `name`."""
        name = name if name is not None else self.vars[0]
        slot = self.vars.index(name)
        for expo in self.terms:
            if any(e and i != slot for i, e in enumerate(expo)):
                raise ValueError(f"{self} is not univariate in {name}")
        deg = self.degree_in(name)
        out = [Fraction(0)] * (deg + 1)
        for expo, c in self.terms.items():
            out[expo[slot]] = c
        return out if out else [Fraction(0)]

    def as_univar(self, name: str) -> Dict[int, "Poly"]:
        """View as a polynomial in `name` with Poly coefficients (same
        context, exponent of `name` cleared)."""
        slot = self.vars.index(name)
        buckets: Dict[int, Dict[Tuple[int, ...], Fraction]] = {}
        for expo, c in self.terms.items():
            power = expo[slot]
            reduced = expo[:slot] + (0,) + expo[slot + 1:]
            buckets.setdefault(power, {})[reduced] = c
        return {p: Poly(self.vars, t) for p, t in buckets.items()}

    # -- arithmetic ---------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.vars != self.vars:
                raise VariableContextMismatch(f"{self.vars} vs {other.vars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.vars, other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for expo, c in other.terms.items():
            s = terms.get(expo, Fraction(0)) + c
            if s:
                terms[expo] = s
            else:
                terms.pop(expo, None)
        out = Poly(self.vars)
        object.__setattr__(out, "terms", terms)
        return out

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        out = Poly(self.vars)
        object.__setattr__(out, "terms", {e: -c for e, c in self.terms.items()})
        return out

    def __sub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            c = rat(other)
            out = Poly(self.vars)
            if c:
                object.__setattr__(out, "terms", {e: k * c for e, k in self.terms.items()})
            return out
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms: Dict[Tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                expo = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(expo, Fraction(0)) + c1 * c2
                if s:
                    terms[expo] = s
                else:
                    terms.pop(expo, None)
        out = Poly(self.vars)
        object.__setattr__(out, "terms", terms)
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        result = Poly.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.vars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # -- calculus and substitution -------------------------------------

    def derivative(self, name: str) -> "Poly":
        slot = self.vars.index(name)
        terms = {}
        for expo, c in self.terms.items():
            p = expo[slot]
            if p:
                reduced = expo[:slot] + (p - 1,) + expo[slot + 1:]
                terms[reduced] = terms.get(reduced, Fraction(0)) + c * p
        return Poly(self.vars, terms)

    def substitute(self, assignments: Dict[str, Union["Poly", RationalLike]]) -> "Poly":
        """Substitute polynomials or scalars for variables (context of the
        result = context of the substituted values, which must agree; plain
        variables keep the original context)."""
        values: Dict[str, Poly] = {}
        ctx = self.vars
        for name, val in assignments.items():
            if name not in self.vars:
                raise ValueError(f"unknown variable {name}")
            if isinstance(val, Poly):
                ctx = val.vars
        for name, val in assignments.items():
            values[name] = val if isinstance(val, Poly) else Poly.const(ctx, val)
            if values[name].vars != ctx:
                raise VariableContextMismatch(f"{values[name].vars} vs {ctx}")
        result = Poly(ctx)
        for expo, c in self.terms.items():
            term = Poly.const(ctx, c)
            for slot, power in enumerate(expo):
                if not power:
                    continue
                name = self.vars[slot]
                if name in values:
                    term = term * values[name] ** power
                else:
                    if name not in ctx:
                        raise VariableContextMismatch(f"{name} missing from {ctx}")
                    term = term * Poly.var(ctx, name, power)
            result = result + term
        return result

    def eval_all(self, point: Dict[str, RationalLike]) -> Fraction:
        """Full evaluation at a rational point."""
        acc = Fraction(0)
        vals = {n: rat(v) for n, v in point.items()}
        for expo, c in self.terms.items():
            term = c
            for slot, power in enumerate(expo):
                if power:
                    term *= vals[self.vars[slot]] ** power
            acc += term
        return acc

    def with_context(self, variables: Sequence[str]) -> "Poly":
        """Re-embed into a different variable tuple containing all variables
        this polynomial actually uses."""
        variables = tuple(variables)
        positions = []
        for slot, name in enumerate(self.vars):
            if name in variables:
                positions.append(variables.index(name))
            else:
                if any(e[slot] for e in self.terms):
                    raise VariableContextMismatch(f"{name} not in {variables}")
                positions.append(None)
        terms = {}
        for expo, c in self.terms.items():
            new = [0] * len(variables)
            for slot, power in enumerate(expo):
                if power:
                    new[positions[slot]] = power
            terms[tuple(new)] = terms.get(tuple(new), Fraction(0)) + c
        return Poly(variables, terms)

    # -- display -------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for expo, c in self.sorted_terms():
            factors = []
            for slot, power in enumerate(expo):
                if power == 1:
                    factors.append(self.vars[slot])
                elif power > 1:
                    factors.append(f"{self.vars[slot]}^{power}")
            body = "*".join(factors)
            if not body:
                piece = str(c)
            elif c == 1:
                piece = body
            elif c == -1:
                piece = f"-{body}"
            else:
                piece = f"{c}*{body}"
            parts.append(piece)
        out = parts[0]
        for piece in parts[1:]:
            out += f" - {piece[1:]}" if piece.startswith("-") else f" + {piece}"
        return out

    def __repr__(self) -> str:
        return f"Poly({self})"


def poly_divmod_linear(p: Poly, name: str, root: RationalLike) -> Tuple[Poly, Poly]:
    """Divide by the monic linear factor (name - root) for a scalar root.

    Synthetic division on the `name`-coefficients (which may involve the
    other variables).  Returns (quotient, remainder); the remainder is free
    of `name`.
    """
    root = rat(root)
    buckets = p.as_univar(name)
    if not buckets:
        return Poly(p.vars), Poly(p.vars)
    top = max(buckets)
    zero = Poly(p.vars)
    acc = zero
    quotient_terms: Dict[int, Poly] = {}
    for power in range(top, 0, -1):
        acc = buckets.get(power, zero) + acc * root
        quotient_terms[power - 1] = acc
    remainder = buckets.get(0, zero) + acc * root
    q = zero
    for power, coeff_poly in quotient_terms.items():
        if coeff_poly.is_zero:
            continue
        q = q + coeff_poly * Poly.var(p.vars, name, power) if power else q + coeff_poly
    return q, remainder


def poly_div_linear_power(p: Poly, name: str, root: RationalLike, m: int) -> Tuple[Poly, Poly]:
    """Write p = Q * (name - root)^m + R with deg_name(R) < m.

    Returns (Q, R).  Used for extracting the polynomial part of
    p / (name - root)^m; R is the obstruction.
    """
    if m < 0:
        raise ValueError("negative power")
    root = rat(root)
    rem_total = Poly(p.vars)
    factor = Poly.const(p.vars, 1)
    linear = Poly.var(p.vars, name) - Poly.const(p.vars, root)
    q = p
    for _ in range(m):
        q, r = poly_divmod_linear(q, name, root)
        rem_total = rem_total + r * factor
        factor = factor * linear
    return q, rem_total


def exact_div_linear(p: Poly, name1: str, name2: str) -> Poly:
    """Exact division by (name1 - name2) for a polynomial vanishing on the
    diagonal name1 = name2.  Raises NonzeroRemainder otherwise.

    Synthetic division in name1 with the variable name2 as the root.
    """
    buckets = p.as_univar(name1)
    if not buckets:
        return Poly(p.vars)
    y = Poly.var(p.vars, name2)
    top = max(buckets)
    zero = Poly(p.vars)
    acc = zero
    quotient_parts: Dict[int, Poly] = {}
    for power in range(top, 0, -1):
        acc = buckets.get(power, zero) + acc * y
        quotient_parts[power - 1] = acc
    remainder = buckets.get(0, zero) + acc * y
    if not remainder.is_zero:
        raise NonzeroRemainder(f"not divisible by ({name1} - {name2}): remainder {remainder}")
    q = zero
    for power, coeff_poly in quotient_parts.items():
        if coeff_poly.is_zero:
            continue
        q = q + (coeff_poly * Poly.var(p.vars, name1, power) if power else coeff_poly)
    return q


class QuadExtElem:
    """Element base + radical_coeff * sqrt(radicand) of Q(sqrt(radicand)).

    The radicand is fixed per element and must agree between operands.  A
    perfect-square radicand is allowed; the representation simply stays
    componentwise in that degenerate case.
    """

    __slots__ = ("base", "radical_coeff", "radicand")

    def __init__(self, base: RationalLike, radical_coeff: RationalLike, radicand: RationalLike):
        object.__setattr__(self, "base", rat(base))
        object.__setattr__(self, "radical_coeff", rat(radical_coeff))
        object.__setattr__(self, "radicand", rat(radicand))

    def __setattr__(self, name, value):
        raise AttributeError("QuadExtElem is immutable")

    @classmethod
    def rational(cls, value: RationalLike, radicand: RationalLike) -> "QuadExtElem":
        return cls(value, 0, radicand)

    @property
    def is_zero(self) -> bool:
        return not self.base and not self.radical_coeff

    @property
    def is_rational(self) -> bool:
        return not self.radical_coeff

    def _check(self, other: "QuadExtElem") -> None:
        if self.radicand != other.radicand:
            raise VariableContextMismatch(f"radicand {self.radicand} vs {other.radicand}")

    def _wrap(self, other) -> "QuadExtElem":
        if isinstance(other, QuadExtElem):
            self._check(other)
            return other
        return QuadExtElem(rat(other), 0, self.radicand)

    def __add__(self, other) -> "QuadExtElem":
        other = self._wrap(other)
        return QuadExtElem(self.base + other.base, self.radical_coeff + other.radical_coeff, self.radicand)

    __radd__ = __add__

    def __neg__(self) -> "QuadExtElem":
        return QuadExtElem(-self.base, -self.radical_coeff, self.radicand)

    def __sub__(self, other) -> "QuadExtElem":
        return self + (-self._wrap(other))

    def __rsub__(self, other) -> "QuadExtElem":
        return (-self) + self._wrap(other)

    def __mul__(self, other) -> "QuadExtElem":
        other = self._wrap(other)
        return QuadExtElem(
            self.base * other.base + self.radical_coeff * other.radical_coeff * self.radicand,
            self.base * other.radical_coeff + self.radical_coeff * other.base,
            self.radicand,
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.base * self.base - self.radicand * self.radical_coeff * self.radical_coeff

    def __truediv__(self, other) -> "QuadExtElem":
        other = self._wrap(other)
        n = other.norm()
        if not n:
            raise ZeroDivisionError("division by an element of norm zero")
        conj = QuadExtElem(other.base, -other.radical_coeff, self.radicand)
        num = self * conj
        return QuadExtElem(num.base / n, num.radical_coeff / n, self.radicand)

    def __rtruediv__(self, other) -> "QuadExtElem":
        return self._wrap(other) / self

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QuadExtElem(other, 0, self.radicand)
        if not isinstance(other, QuadExtElem):
            return NotImplemented
        return (self.radicand == other.radicand and self.base == other.base
                and self.radical_coeff == other.radical_coeff)

    def __hash__(self):
        return hash((self.base, self.radical_coeff, self.radicand))

    def sqrt(self) -> "QuadExtElem":
        """Square root inside the same extension, if one exists.

        Solves (u + v*sqrt(r))^2 = self componentwise; raises
        SqrtNotRepresentable when no such element exists.
        """
        b, c, r = self.base, self.radical_coeff, self.radicand
        if not c:
            u = rat_sqrt(b)
            if u is not None:
                return QuadExtElem(u, 0, r)
            if r:
                v2 = b / r
                v = rat_sqrt(v2)
                if v is not None:
                    return QuadExtElem(0, v, r)
            raise SqrtNotRepresentable(f"sqrt of {b} not in Q(sqrt({r}))")
        # u^2 + v^2 r = b, 2uv = c: u^2 is a root of X^2 - bX + r c^2 / 4.
        disc = b * b - r * c * c
        rd = rat_sqrt(disc)
        if rd is None:
            raise SqrtNotRepresentable("norm is not a rational square")
        for u2 in ((b + rd) / 2, (b - rd) / 2):
            u = rat_sqrt(u2)
            if u is not None and u:
                return QuadExtElem(u, c / (2 * u), r)
        raise SqrtNotRepresentable("no rational component solution")

    def __str__(self) -> str:
        if self.is_rational:
            return str(self.base)
        return f"{self.base} + {self.radical_coeff}*sqrt({self.radicand})"

    def __repr__(self) -> str:
        return f"QuadExtElem({self})"

    def to_json(self) -> Dict[str, str]:
        return {
            "base": rat_str(self.base),
            "radical_coeff": rat_str(self.radical_coeff),
            "radicand": rat_str(self.radicand),
        }


class LaurentSeries:
    """Truncated Laurent series in one variable with QuadExtElem
    coefficients sharing one radicand.

    Stored data: the exponent `lead` of the first retained coefficient, the
    coefficient tuple, and `trunc`: coefficients at exponents >= trunc are
    unknown (not asserted zero).  Exact zero series keep coeffs = ().
    """

    __slots__ = ("var", "lead", "coeffs", "trunc", "radicand")

    def __init__(self, var: str, lead: int, coeffs: Sequence[QuadExtElem], trunc: int, radicand: RationalLike):
        radicand = rat(radicand)
        coeffs = [c if isinstance(c, QuadExtElem) else QuadExtElem(c, 0, radicand) for c in coeffs]
        for c in coeffs:
            if c.radicand != radicand:
                raise VariableContextMismatch("mixed radicands in series")
        # normalize: strip leading zeros, clamp to truncation order
        while coeffs and coeffs[0].is_zero:
            coeffs = coeffs[1:]
            lead += 1
        if lead + len(coeffs) > trunc:
            coeffs = coeffs[: max(0, trunc - lead)]
        while coeffs and coeffs[-1].is_zero:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "lead", lead if coeffs else trunc)
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "trunc", trunc)
        object.__setattr__(self, "radicand", radicand)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentSeries is immutable")

    @classmethod
    def from_terms(cls, var: str, terms: Dict[int, QuadExtElem], trunc: int, radicand: RationalLike) -> "LaurentSeries":
        if not terms:
            return cls(var, trunc, [], trunc, radicand)
        lead = min(terms)
        top = max(terms)
        coeffs = [terms.get(i, QuadExtElem(0, 0, radicand)) for i in range(lead, top + 1)]
        return cls(var, lead, coeffs, trunc, radicand)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff_at(self, n: int) -> QuadExtElem:
        """Coefficient of var^n; errors when n is beyond the truncation."""
        if n >= self.trunc:
            raise ValueError(f"coefficient at {n} is beyond truncation order {self.trunc}")
        if n < self.lead or n >= self.lead + len(self.coeffs):
            return QuadExtElem(0, 0, self.radicand)
        return self.coeffs[n - self.lead]

    def residue(self) -> QuadExtElem:
        return self.coeff_at(-1)

    def _check(self, other: "LaurentSeries") -> None:
        if self.var != other.var or self.radicand != other.radicand:
            raise VariableContextMismatch("series context mismatch")

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check(other)
        trunc = min(self.trunc, other.trunc)
        terms: Dict[int, QuadExtElem] = {}
        for s in (self, other):
            for i, c in enumerate(s.coeffs):
                n = s.lead + i
                if n >= trunc:
                    break
                terms[n] = terms.get(n, QuadExtElem(0, 0, self.radicand)) + c
        return LaurentSeries.from_terms(self.var, terms, trunc, self.radicand)

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(self.var, self.lead, [-c for c in self.coeffs], self.trunc, self.radicand)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def scale(self, c) -> "LaurentSeries":
        c = c if isinstance(c, QuadExtElem) else QuadExtElem(c, 0, self.radicand)
        return LaurentSeries(self.var, self.lead, [c * k for k in self.coeffs], self.trunc, self.radicand)

    def shift(self, n: int) -> "LaurentSeries":
        """Multiply by var^n."""
        return LaurentSeries(self.var, self.lead + n, self.coeffs, self.trunc + n, self.radicand)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check(other)
        if self.is_zero or other.is_zero:
            # product known to the best shared precision
            trunc = min(self.trunc + (other.lead if not other.is_zero else 0),
                        other.trunc + (self.lead if not self.is_zero else 0),
                        self.trunc, other.trunc)
            return LaurentSeries(self.var, trunc, [], trunc, self.radicand)
        trunc = min(self.trunc + other.lead, other.trunc + self.lead)
        terms: Dict[int, QuadExtElem] = {}
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                n = self.lead + i + other.lead + j
                if n >= trunc:
                    break
                if b.is_zero:
                    continue
                terms[n] = terms.get(n, QuadExtElem(0, 0, self.radicand)) + a * b
        return LaurentSeries.from_terms(self.var, terms, trunc, self.radicand)

    def invert(self) -> "LaurentSeries":
        """Multiplicative inverse to the available precision.

        Requires a nonzero leading coefficient of nonzero norm; raises
        ZeroLeading otherwise.
        """
        if self.is_zero:
            raise ZeroLeading("cannot invert a series with no known nonzero coefficient")
        c0 = self.coeffs[0]
        if not c0.norm():
            raise ZeroLeading("leading coefficient has norm zero")
        # write self = c0 x^lead (1 + h), invert the unit part iteratively
        rel = self.trunc - self.lead  # number of meaningful slots
        one = QuadExtElem(1, 0, self.radicand)
        unit = [c / c0 for c in self.coeffs]
        unit += [QuadExtElem(0, 0, self.radicand)] * (rel - len(unit))
        inv = [one] + [QuadExtElem(0, 0, self.radicand)] * (rel - 1)
        for n in range(1, rel):
            s = QuadExtElem(0, 0, self.radicand)
            for i in range(1, n + 1):
                if i < len(unit) and not unit[i].is_zero and not inv[n - i].is_zero:
                    s = s + unit[i] * inv[n - i]
            inv[n] = -s
        coeffs = [c / c0 for c in inv]
        return LaurentSeries(self.var, -self.lead, coeffs, -self.lead + rel, self.radicand)

    def sqrt(self) -> "LaurentSeries":
        """Square root with the same relative precision.

        The leading exponent must be even and the leading coefficient must
        have a square root inside the extension.
        """
        if self.is_zero:
            raise ZeroLeading("sqrt of a series with no known nonzero coefficient")
        if self.lead % 2:
            raise SqrtNotRepresentable(f"odd leading exponent {self.lead}")
        c0 = self.coeffs[0]
        root0 = c0.sqrt()
        rel = self.trunc - self.lead
        zero = QuadExtElem(0, 0, self.radicand)
        one = QuadExtElem(1, 0, self.radicand)
        unit = [c / c0 for c in self.coeffs]
        unit += [zero] * (rel - len(unit))
        # y with y^2 = unit, y0 = 1: 2 y_n = unit_n - sum_{i=1}^{n-1} y_i y_{n-i}
        y = [one] + [zero] * (rel - 1)
        for n in range(1, rel):
            s = unit[n] if n < len(unit) else zero
            for i in range(1, n):
                if not y[i].is_zero and not y[n - i].is_zero:
                    s = s - y[i] * y[n - i]
            y[n] = s / QuadExtElem(2, 0, self.radicand)
        coeffs = [root0 * c for c in y]
        return LaurentSeries(self.var, self.lead // 2, coeffs, self.lead // 2 + rel, self.radicand)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.var == other.var and self.radicand == other.radicand
                and self.lead == other.lead and self.coeffs == other.coeffs
                and self.trunc == other.trunc)

    def __str__(self) -> str:
        if self.is_zero:
            return f"O({self.var}^{self.trunc})"
        bits = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero:
                continue
            n = self.lead + i
            bits.append(f"({c})*{self.var}^{n}" if n else f"({c})")
        return " + ".join(bits) + f" + O({self.var}^{self.trunc})"

    def __repr__(self) -> str:
        return f"LaurentSeries({self})"
