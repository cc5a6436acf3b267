"""Certification of bracket tensors: chart descent, Jacobi, ranks.

All checks run over exact rationals.  The projective content of a tensor
lives in its affine charts, so the bracket is descended there first; the
Jacobi identity, compatibility of pairs, and linear independence are all
statements about the chart structure functions, and modifications of the
tensor along the radial direction (Euler terms) are invisible to them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exact_core import Poly, RationalLike, rat, rat_str
from .bracket_forge import BracketTensor, FamilyBasis, FormDict


class ZeroVector(ValueError):
    """A nonzero coordinate vector was required."""


def _chart_context(n: int, m: int) -> Tuple[str, ...]:
    return tuple(f"u{a}" for a in range(n) if a != m)


def _form_chart_poly(form: FormDict, m: int, ctx: Tuple[str, ...],
                     slot_of: Dict[int, int]) -> Poly:
    """The quadratic form with coordinate m set to 1, the rest to u's."""
    terms: Dict[Tuple[int, ...], Fraction] = {}
    for (u, v), val in form.items():
        expo = [0] * len(ctx)
        for idx in (u, v):
            if idx != m:
                expo[slot_of[idx]] += 1
        key = tuple(expo)
        terms[key] = terms.get(key, Fraction(0)) + val
    return Poly(ctx, terms)


@dataclass(frozen=True)
class ChartBracket:
    """Structure functions of a descended bracket on one affine chart."""

    m: int
    n: int
    vars: Tuple[str, ...]
    funcs: Dict[Tuple[int, int], Poly]

    def structure(self, a: int, b: int) -> Poly:
        """{u_a, u_b} as a chart polynomial, sign included."""
        if a == b:
            return Poly(self.vars)
        if a < b:
            return self.funcs.get((a, b), Poly(self.vars))
        return -self.funcs.get((b, a), Poly(self.vars))

    @property
    def indices(self) -> List[int]:
        return [a for a in range(self.n) if a != self.m]


@dataclass(frozen=True)
class Multivector:
    """Alternating table of polynomials indexed by sorted index tuples."""

    degree: int
    coefficients: Dict[Tuple[int, ...], Poly]

    @property
    def is_zero(self) -> bool:
        return all(p.is_zero for p in self.coefficients.values())

    def nonzero_keys(self) -> List[Tuple[int, ...]]:
        return sorted(key for key, p in self.coefficients.items() if not p.is_zero)


@dataclass(frozen=True)
class RankReport:
    """Outcome of a pointwise rank scan of one bracket tensor."""

    seed: int
    points: Tuple[Tuple[Fraction, ...], ...]
    ranks: Tuple[int, ...]
    histogram: Dict[int, int]
    generic_rank: int
    flagged: Tuple[int, ...]
    pencil_drops: Tuple[dict, ...]

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "samples": len(self.points),
            "histogram": {str(r): c for r, c in sorted(self.histogram.items())},
            "generic_rank": self.generic_rank,
            "flagged": list(self.flagged),
            "pencil_drops": list(self.pencil_drops),
        }

    def csv_rows(self) -> List[str]:
        rows = ["rank,count"]
        for r, c in sorted(self.histogram.items()):
            rows.append(f"{r},{c}")
        return rows


def descend_to_chart(T: BracketTensor, m: int) -> ChartBracket:
    """Bracket of the ratio coordinates u_a = x_a/x_m on chart m."""
    if not 0 <= m < T.n:
        raise ValueError(f"chart index {m} out of range")
    ctx = _chart_context(T.n, m)
    slot_of = {a: i for i, a in enumerate(idx for idx in range(T.n) if idx != m)}
    funcs: Dict[Tuple[int, int], Poly] = {}
    for a in range(T.n):
        if a == m:
            continue
        u_a = Poly.var(ctx, f"u{a}")
        for b in range(a + 1, T.n):
            if b == m:
                continue
            u_b = Poly.var(ctx, f"u{b}")
            poly = _form_chart_poly(T.form(a, b), m, ctx, slot_of)
            poly = poly - u_a * _form_chart_poly(T.form(m, b), m, ctx, slot_of)
            poly = poly + u_b * _form_chart_poly(T.form(m, a), m, ctx, slot_of)
            if not poly.is_zero:
                funcs[(a, b)] = poly
    return ChartBracket(m, T.n, ctx, funcs)


def _chart_bracket_of(cb: ChartBracket, i: int, F: Poly) -> Poly:
    """{u_i, F} by the Leibniz rule from the structure functions."""
    out = Poly(cb.vars)
    for j in cb.indices:
        if j == i:
            continue
        dF = F.derivative(f"u{j}")
        if dF.is_zero:
            continue
        out = out + dF * cb.structure(i, j)
    return out


def jacobiator(cb: ChartBracket) -> Multivector:
    """Full table of Jacobi obstructions J(u_a, u_b, u_c) on the chart."""
    idxs = cb.indices
    table: Dict[Tuple[int, ...], Poly] = {}
    for i, a in enumerate(idxs):
        for j in range(i + 1, len(idxs)):
            b = idxs[j]
            for l in range(j + 1, len(idxs)):
                c = idxs[l]
                J = _chart_bracket_of(cb, a, cb.structure(b, c))
                J = J + _chart_bracket_of(cb, b, cb.structure(c, a))
                J = J + _chart_bracket_of(cb, c, cb.structure(a, b))
                table[(a, b, c)] = J
    return Multivector(3, table)


def _first_jacobi_witness(T: BracketTensor) -> Optional[dict]:
    for m in range(T.n):
        J = jacobiator(descend_to_chart(T, m))
        for key in J.nonzero_keys():
            return {"chart": m, "triple": key, "obstruction": str(J.coefficients[key])}
    return None


def jacobi_check(T: BracketTensor) -> dict:
    """Chart-by-chart Jacobi verdict with the first failing witness."""
    witness = _first_jacobi_witness(T)
    return {"holds": witness is None, "witness": witness}


def compatibility_check(T1: BracketTensor, T2: BracketTensor) -> dict:
    """Jacobi check of T1 + T2 on every chart, with the mixed cross-term.

    The sum test is the operative one; the mixed obstruction (bilinear in
    the two tensors) is reported alongside as a redundancy.
    """
    if T1.n != T2.n:
        raise ValueError("tensor sizes differ")
    total = T1 + T2
    witness = _first_jacobi_witness(total)
    mixed_zero = True
    for m in range(T1.n):
        J12 = jacobiator(descend_to_chart(total, m))
        J1 = jacobiator(descend_to_chart(T1, m))
        J2 = jacobiator(descend_to_chart(T2, m))
        for key, poly in J12.coefficients.items():
            mixed = poly - J1.coefficients[key] - J2.coefficients[key]
            if not mixed.is_zero:
                mixed_zero = False
                break
        if not mixed_zero:
            break
    return {"compatible": witness is None, "witness": witness, "mixed_zero": mixed_zero}


def independence_rank(F: FamilyBasis) -> int:
    """Rank of the family as projective bivectors.

    Stacks every chart structure function of every member into a rational
    matrix (one row per member) and computes its exact rank.
    """
    rows: List[Dict[tuple, Fraction]] = []
    for T in F.tensors:
        vec: Dict[tuple, Fraction] = {}
        for m in range(T.n):
            cb = descend_to_chart(T, m)
            for (a, b), poly in cb.funcs.items():
                for expo, val in poly.terms.items():
                    vec[(m, a, b, expo)] = val
        rows.append(vec)
    keys = sorted({key for vec in rows for key in vec})
    matrix = [[vec.get(key, Fraction(0)) for key in keys] for vec in rows]
    return _matrix_rank(matrix)


def _matrix_rank(matrix: List[List[Fraction]]) -> int:
    work = [row[:] for row in matrix if any(row)]
    if not work:
        return 0
    cols = len(work[0])
    rank = 0
    col = 0
    while rank < len(work) and col < cols:
        pivot = next((r for r in range(rank, len(work)) if work[r][col]), None)
        if pivot is None:
            col += 1
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        lead = work[rank][col]
        for r in range(rank + 1, len(work)):
            if work[r][col]:
                factor = work[r][col] / lead
                work[r] = [x - factor * y for x, y in zip(work[r], work[rank])]
        rank += 1
        col += 1
    return rank


def _eval_form(form: FormDict, phi: Sequence[Fraction]) -> Fraction:
    acc = Fraction(0)
    for (u, v), val in form.items():
        acc += val * phi[u] * phi[v]
    return acc


def rank_at_point(T: BracketTensor, phi: Sequence[RationalLike]) -> int:
    """Rank of the bracket matrix at phi, restricted transverse to phi.

    Evaluates M_ab = pi_ab(phi), restricts the antisymmetric form to the
    hyperplane of vectors orthogonal to phi (in the pairing sense), and
    returns the exact rank there; radial directions never contribute.
    """
    point = [rat(x) for x in phi]
    if len(point) != T.n:
        raise ValueError("point size differs from the tensor size")
    if not any(point):
        raise ZeroVector("rank evaluation needs a nonzero point")
    n = T.n
    M = [[Fraction(0)] * n for _ in range(n)]
    for (a, b), form in T.pi.items():
        val = _eval_form(form, point)
        M[a][b] = val
        M[b][a] = -val
    p = next(i for i, x in enumerate(point) if x)
    others = [i for i in range(n) if i != p]
    restricted = []
    for i in others:
        row = []
        ci = point[i] / point[p]
        for j in others:
            cj = point[j] / point[p]
            row.append(M[i][j] - cj * M[i][p] - ci * M[p][j])
        restricted.append(row)
    return _matrix_rank(restricted)


def _random_point(rng: random.Random, n: int) -> Tuple[Fraction, ...]:
    while True:
        point = tuple(Fraction(rng.randint(-1000, 1000), rng.randint(1, 1000))
                      for _ in range(n))
        if any(point):
            return point


def rank_scan(T: BracketTensor, samples: int, seed: int) -> RankReport:
    """Deterministic random rank survey of one tensor.

    Samples rational points, tabulates ranks, flags samples that fall
    more than one even step below the observed generic value, and probes
    a few random pencils for rank drops.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = random.Random(seed)
    points = tuple(_random_point(rng, T.n) for _ in range(samples))
    ranks = tuple(rank_at_point(T, p) for p in points)
    histogram: Dict[int, int] = {}
    for r in ranks:
        histogram[r] = histogram.get(r, 0) + 1
    generic = max(ranks)
    flagged = tuple(i for i, r in enumerate(ranks) if r < generic - 2)
    drops: List[dict] = []
    for _ in range(3):
        base = _random_point(rng, T.n)
        direction = _random_point(rng, T.n)
        for step in range(7):
            s = Fraction(step, 1)
            probe = tuple(b + s * d for b, d in zip(base, direction))
            if not any(probe):
                continue
            r = rank_at_point(T, probe)
            if r < generic:
                drops.append({"s": rat_str(s), "rank": r,
                              "point": [rat_str(x) for x in probe]})
    return RankReport(seed, points, ranks, histogram, generic, flagged, tuple(drops))


def _phi_context(n: int) -> Tuple[str, ...]:
    return tuple(f"phi{i}" for i in range(n))


def _form_poly(form: FormDict, ctx: Tuple[str, ...]) -> Poly:
    terms: Dict[Tuple[int, ...], Fraction] = {}
    for (u, v), val in form.items():
        expo = [0] * len(ctx)
        expo[u] += 1
        expo[v] += 1
        key = tuple(expo)
        terms[key] = terms.get(key, Fraction(0)) + val
    return Poly(ctx, terms)


def _linear_poly(coeffs: Sequence[Fraction], ctx: Tuple[str, ...]) -> Poly:
    terms = {}
    for i, c in enumerate(coeffs):
        if c:
            expo = [0] * len(ctx)
            expo[i] = 1
            terms[tuple(expo)] = c
    return Poly(ctx, terms)


def _bracket_of_linear(T: BracketTensor, f: Sequence[Fraction],
                       g: Sequence[Fraction], ctx: Tuple[str, ...]) -> Poly:
    out = Poly(ctx)
    for (a, b), form in T.pi.items():
        factor = f[a] * g[b] - f[b] * g[a]
        if factor:
            out = out + _form_poly(form, ctx) * factor
    return out


def _divide_linear_form(p: Poly, coeffs: Sequence[Fraction],
                        ctx: Tuple[str, ...]) -> Optional[Poly]:
    """Exact quotient of p by the linear form, or None."""
    pivot = max(i for i, c in enumerate(coeffs) if c)
    name = ctx[pivot]
    divisor = _linear_poly(coeffs, ctx)
    lead = coeffs[pivot]
    quotient = Poly(ctx)
    rest = p
    while rest.degree_in(name) >= 1:
        top = rest.degree_in(name)
        bucket = rest.as_univar(name).get(top, Poly(ctx))
        term = bucket * Poly.var(ctx, name, top - 1) * (Fraction(1) / lead)
        quotient = quotient + term
        rest = rest - term * divisor
    if rest.is_zero:
        return quotient
    return None


@dataclass(frozen=True)
class RatioBracketValue:
    """Bracket of two ratio functions, as numerator over form powers.

    den_factors lists (linear form coefficients, power) with each form
    normalized to a monic leading coefficient; the numerator absorbs the
    rescaling and every removable factor is cancelled.
    """

    num: Poly
    den_factors: Tuple[Tuple[Tuple[Fraction, ...], int], ...]
    vars: Tuple[str, ...]

    def den_poly(self) -> Poly:
        out = Poly.const(self.vars, 1)
        for coeffs, power in self.den_factors:
            for _ in range(power):
                out = out * _linear_poly(coeffs, self.vars)
        return out

    def equals(self, other: "RatioBracketValue") -> bool:
        return (self.num * other.den_poly()) == (other.num * self.den_poly())

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __str__(self) -> str:
        if self.num.is_zero:
            return "0"
        dens = " * ".join(
            f"({_linear_poly(c, self.vars)})^{p}" if p > 1 else f"({_linear_poly(c, self.vars)})"
            for c, p in self.den_factors)
        return f"({self.num}) / ({dens})" if dens else str(self.num)


def ratio_bracket(T: BracketTensor, f_num: Sequence[RationalLike],
                  f_den: Sequence[RationalLike], g_num: Sequence[RationalLike],
                  g_den: Sequence[RationalLike]) -> RatioBracketValue:
    """Bracket of the degree-zero ratios f_num/f_den and g_num/g_den.

    Expands {f/h, g/e} = ({f,g} h e - g {f,e} h - f {h,g} e + f g {h,e})
    over h^2 e^2 and cancels removable linear factors; the result only
    depends on the projective bracket (Euler modifications drop out).
    """
    ctx = _phi_context(T.n)
    f = [rat(x) for x in f_num]
    h = [rat(x) for x in f_den]
    g = [rat(x) for x in g_num]
    e = [rat(x) for x in g_den]
    for vec, tag in ((h, "first"), (e, "second")):
        if len(vec) != T.n or not any(vec):
            raise ZeroVector(f"{tag} denominator must be a nonzero form")
    if len(f) != T.n or len(g) != T.n:
        raise ValueError("numerator forms must match the tensor size")
    fp = _linear_poly(f, ctx)
    hp = _linear_poly(h, ctx)
    gp = _linear_poly(g, ctx)
    ep = _linear_poly(e, ctx)
    num = (_bracket_of_linear(T, f, g, ctx) * hp * ep
           - _bracket_of_linear(T, f, e, ctx) * hp * gp
           - _bracket_of_linear(T, h, g, ctx) * ep * fp
           + _bracket_of_linear(T, h, e, ctx) * fp * gp)
    factors: List[Tuple[Tuple[Fraction, ...], int]] = []
    for coeffs in (h, e):
        pivot = max(i for i, c in enumerate(coeffs) if c)
        lead = coeffs[pivot]
        monic = tuple(c / lead for c in coeffs)
        num = num * (Fraction(1) / lead ** 2)
        merged = False
        for idx, (known, power) in enumerate(factors):
            if known == monic:
                factors[idx] = (known, power + 2)
                merged = True
                break
        if not merged:
            factors.append((monic, 2))
    if num.is_zero:
        return RatioBracketValue(num, (), ctx)
    reduced: List[Tuple[Tuple[Fraction, ...], int]] = []
    for coeffs, power in factors:
        while power > 0:
            candidate = _divide_linear_form(num, coeffs, ctx)
            if candidate is None:
                break
            num = candidate
            power -= 1
        if power:
            reduced.append((coeffs, power))
    return RatioBracketValue(num, tuple(reduced), ctx)


def euler_tensor(template: BracketTensor, matrix: Sequence[Sequence[RationalLike]]) -> BracketTensor:
    """Radial modification E ^ X for the linear field X_a = sum matrix[a][c] x_c.

    Produces a tensor of the template's shape whose chart descent vanishes;
    adding it to any tensor must leave every projective check unchanged.
    """
    n = template.n
    rows = [[rat(x) for x in row] for row in matrix]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError("matrix shape must match the tensor size")
    pi: Dict[Tuple[int, int], FormDict] = {}
    for a in range(n):
        for b in range(a + 1, n):
            form: FormDict = {}
            for c in range(n):
                if rows[b][c]:
                    key = (min(a, c), max(a, c))
                    form[key] = form.get(key, Fraction(0)) + rows[b][c]
                if rows[a][c]:
                    key = (min(b, c), max(b, c))
                    form[key] = form.get(key, Fraction(0)) - rows[a][c]
            form = {key: val for key, val in form.items() if val}
            if form:
                pi[(a, b)] = form
    prov = {"kind": "radial", "matrix": [[rat_str(x) for x in row] for row in rows]}
    return BracketTensor(template.parity, template.k, template.n, pi, prov)
