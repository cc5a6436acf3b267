"""Assembly of quadratic antisymmetric bracket tensors from curve data.

A bracket tensor on the dual of a section space stores, for every pair of
coordinates (a, b) with a < b, a symmetric quadratic form in the coordinates.
The forms come from a five-term combination of the multiplication kernel and
the canonical derivation; the combination is expanded back over the section
basis, slot by slot.

For even parity the five-term combination lands in the tensor square of the
section space exactly.  For odd parity the derivation picks up a double pole
at the distinguished point over the moved branch point, so the raw
combination does not land there; the builder drops the non-cancelling pole
parts and the out-of-range monomials and recenters the result with a fixed
curve-independent correction.  The recentred tensor agrees, after the chart
descent, with the closed-form chart brackets, and it is what every
downstream check certifies.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exact_core import Poly, RationalLike, rat, rat_str, poly_div_linear_power
from .curve_ring import (
    BiCurveElement,
    CurveElement,
    CurveModel,
    NotInSpace,
    SectionSpace,
    bicurve_x_blocks,
    curve_derivation,
    membership_extract,
    mult_kernel_antisym,
)

PairKey = Tuple[int, int]
FormDict = Dict[Tuple[int, int], Fraction]


class TensorNotInSectionSpace(ValueError):
    """The assembled pair tensor has a component outside the section basis."""

    def __init__(self, pair: str, details: Sequence[str]):
        self.pair = pair
        self.details = tuple(details)
        super().__init__(f"pair {pair}: " + "; ".join(self.details))


class BracketTensor:
    """Antisymmetric tensor of symmetric quadratic forms.

    pi maps (a, b) with a < b to {(u, v) with u <= v: coefficient}; the
    form for (b, a) is the negation.  Equality ignores provenance.
    """

    def __init__(self, parity: str, k: int, n: int,
                 pi: Dict[PairKey, FormDict], provenance: Optional[dict] = None):
        self.parity = parity
        self.k = k
        self.n = n
        self.pi = {pair: {mono: val for mono, val in form.items() if val}
                   for pair, form in pi.items()}
        self.pi = {pair: form for pair, form in self.pi.items() if form}
        self.provenance = dict(provenance or {})

    def form(self, a: int, b: int) -> FormDict:
        """Quadratic form of the (a, b) bracket entry, sign included."""
        if a == b:
            return {}
        if a < b:
            return dict(self.pi.get((a, b), {}))
        return {mono: -val for mono, val in self.pi.get((b, a), {}).items()}

    @property
    def is_zero(self) -> bool:
        return not self.pi

    def _combine(self, other: "BracketTensor", factor: Fraction) -> "BracketTensor":
        if not isinstance(other, BracketTensor):
            raise TypeError("expected a BracketTensor")
        if (self.parity, self.k, self.n) != (other.parity, other.k, other.n):
            raise ValueError("tensor shapes differ")
        pi: Dict[PairKey, FormDict] = {pair: dict(form) for pair, form in self.pi.items()}
        for pair, form in other.pi.items():
            target = pi.setdefault(pair, {})
            for mono, val in form.items():
                target[mono] = target.get(mono, Fraction(0)) + factor * val
        return BracketTensor(self.parity, self.k, self.n, pi,
                             {"combination": "linear"})

    def __add__(self, other: "BracketTensor") -> "BracketTensor":
        return self._combine(other, Fraction(1))

    def __sub__(self, other: "BracketTensor") -> "BracketTensor":
        return self._combine(other, Fraction(-1))

    def scale(self, factor: RationalLike) -> "BracketTensor":
        factor = rat(factor)
        pi = {pair: {mono: factor * val for mono, val in form.items()}
              for pair, form in self.pi.items()}
        return BracketTensor(self.parity, self.k, self.n, pi,
                             {"combination": "scaled"})

    def __eq__(self, other) -> bool:
        if not isinstance(other, BracketTensor):
            return NotImplemented
        return ((self.parity, self.k, self.n) == (other.parity, other.k, other.n)
                and self.pi == other.pi)

    def __repr__(self) -> str:
        return f"BracketTensor({self.parity}, k={self.k}, n={self.n}, pairs={len(self.pi)})"

    def to_json(self) -> dict:
        pairs = []
        for a, b in sorted(self.pi):
            q = [{"u": u, "v": v, "val": rat_str(val)}
                 for (u, v), val in sorted(self.pi[(a, b)].items())]
            pairs.append({"a": a, "b": b, "q": q})
        return {"parity": self.parity, "k": self.k, "n": self.n,
                "curve": self.provenance, "pi": pairs}

    @classmethod
    def from_json(cls, data: dict) -> "BracketTensor":
        pi: Dict[PairKey, FormDict] = {}
        for entry in data["pi"]:
            form = {(item["u"], item["v"]): Fraction(item["val"])
                    for item in entry["q"]}
            pi[(entry["a"], entry["b"])] = form
        return cls(data["parity"], data["k"], data["n"], pi, data.get("curve"))


@dataclass(frozen=True)
class CorrectionOperators:
    """First-order correction maps for the generic bracket assembly.

    images_a[i] and images_b[i] are the images of the i-th basis section
    under the two correction operators; they may live in a larger space
    than the sections themselves, recorded by the e_divisor tag.
    """

    images_a: Tuple[CurveElement, ...]
    images_b: Tuple[CurveElement, ...]
    e_divisor: str = ""

    @classmethod
    def zero(cls, space: SectionSpace) -> "CorrectionOperators":
        z = space.model.zero()
        images = (z,) * space.dim
        return cls(images, images, "zero correction")

    @classmethod
    def scaled_derivation(cls, space: SectionSpace, factor: RationalLike) -> "CorrectionOperators":
        scalar = CurveElement(space.model, rat(factor))
        images = tuple(scalar * curve_derivation(e) for e in space.basis_elements())
        return cls(images, images, "derivation image, one level up")


@dataclass(frozen=True)
class FamilyBasis:
    """The nine-member basis of an anticanonical bracket family."""

    parity: str
    k: int
    tensors: Tuple[BracketTensor, ...]
    labels: Tuple[str, ...]

    def to_json(self) -> dict:
        return {"parity": self.parity, "k": self.k,
                "basis": [t.to_json() for t in self.tensors],
                "labels": list(self.labels)}

    @classmethod
    def from_json(cls, data: dict) -> "FamilyBasis":
        tensors = tuple(BracketTensor.from_json(item) for item in data["basis"])
        return cls(data["parity"], data["k"], tensors, tuple(data["labels"]))


def _slot1_coords(a_poly: Poly, b_poly: Poly, m1: int, space: SectionSpace,
                  truncate: bool, problems: List[str], slot2_label: str):
    """Coordinates of (a_poly + b_poly*x)/(t+c)^m1 in the section basis."""
    model = space.model
    if truncate:
        if m1:
            root = -model.c
            a_poly, _ = poly_div_linear_power(a_poly, "t", root, m1)
            b_poly, _ = poly_div_linear_power(b_poly, "t", root, m1)
        coords = [Fraction(0)] * space.dim
        for poly, offset, dmax in ((a_poly, 0, space.k),
                                   (b_poly, space.k + 1, space.x_deg_max)):
            if poly.is_zero:
                continue
            for i, cf in enumerate(poly.coeffs_univar("t")):
                if cf and i <= dmax:
                    coords[offset + i] = cf
        return coords
    if model.parity == "odd":
        elem = CurveElement(model, a_poly * model.tau_poly(), b_poly, m1 + 1)
    else:
        elem = CurveElement(model, a_poly, b_poly)
    try:
        return membership_extract(elem, space)
    except NotInSpace as exc:
        problems.append(f"slot-2 {slot2_label}: {exc}")
        return None


def _pair_matrix(bi: BiCurveElement, space: SectionSpace, truncate: bool,
                 pair_label: str) -> Dict[PairKey, Fraction]:
    """Coefficient grid of bi over basis x basis; slot 2 expanded first."""
    model = bi.model
    blocks = list(bicurve_x_blocks(bi))
    problems: List[str] = []
    if bi.m2:
        root = -model.c
        for i, tag in enumerate(("1x1", "x1", "x2", "x1*x2")):
            q, r = poly_div_linear_power(blocks[i], "t2", root, bi.m2)
            if not (truncate or r.is_zero):
                problems.append(f"slot-2 pole remainder in {tag} block: {r}")
            blocks[i] = q
        if problems:
            raise TensorNotInSectionSpace(pair_label, problems)
    A, B, C, D = blocks
    t_var = Poly.var(model.tvars, "t")
    matrix: Dict[PairKey, Fraction] = {}
    groups = (((A, B), 0, space.k, "t^%d"),
              ((C, D), space.k + 1, space.x_deg_max, "t^%d*x"))
    for (t_blk, x_blk), offset, dmax, shape in groups:
        buckets_a = t_blk.as_univar("t2")
        buckets_b = x_blk.as_univar("t2")
        for j in sorted(set(buckets_a) | set(buckets_b)):
            a_j = buckets_a.get(j)
            b_j = buckets_b.get(j)
            if (a_j is None or a_j.is_zero) and (b_j is None or b_j.is_zero):
                continue
            label = shape % j
            if j > dmax:
                if truncate:
                    continue
                problems.append(f"slot-2 term {label} outside the basis")
                continue
            a_t = a_j.substitute({"t1": t_var}) if a_j is not None else Poly(model.tvars)
            b_t = b_j.substitute({"t1": t_var}) if b_j is not None else Poly(model.tvars)
            coords = _slot1_coords(a_t, b_t, bi.m1, space, truncate, problems, label)
            if coords is None:
                continue
            v = offset + j
            for u, val in enumerate(coords):
                if val:
                    matrix[(u, v)] = matrix.get((u, v), Fraction(0)) + val
    if problems:
        raise TensorNotInSectionSpace(pair_label, problems)
    return matrix


def _symmetrize(matrix: Dict[PairKey, Fraction]) -> FormDict:
    form: FormDict = {}
    for (u, v), val in matrix.items():
        key = (u, v) if u <= v else (v, u)
        form[key] = form.get(key, Fraction(0)) + val
    return {key: val for key, val in form.items() if val}


def _five_term_forms(model: CurveModel, space: SectionSpace,
                     truncate: bool) -> Dict[PairKey, FormDict]:
    basis = space.basis_elements()
    derivs = [curve_derivation(e) for e in basis]
    labels = space.labels()
    n = space.dim
    pi: Dict[PairKey, FormDict] = {}
    for a in range(n):
        for b in range(a + 1, n):
            T = mult_kernel_antisym(basis[a], basis[b]).scale(n)
            T = T + BiCurveElement.from_sections(basis[a], derivs[b])
            T = T + BiCurveElement.from_sections(derivs[b], basis[a])
            T = T - BiCurveElement.from_sections(basis[b], derivs[a])
            T = T - BiCurveElement.from_sections(derivs[a], basis[b])
            form = _symmetrize(_pair_matrix(T, space, truncate,
                                            f"({labels[a]}, {labels[b]})"))
            if form:
                pi[(a, b)] = form
    return pi


def _combine_forms(parts: Sequence[Tuple[Dict[PairKey, FormDict], Fraction]]) -> Dict[PairKey, FormDict]:
    out: Dict[PairKey, FormDict] = {}
    for forms, factor in parts:
        for pair, form in forms.items():
            target = out.setdefault(pair, {})
            for mono, val in form.items():
                target[mono] = target.get(mono, Fraction(0)) + factor * val
    return {pair: {m: v for m, v in form.items() if v}
            for pair, form in out.items() if any(form.values())}


_ODD_SHIFT_CACHE: Dict[int, Dict[PairKey, FormDict]] = {}


def _odd_shift_forms(k: int) -> Dict[PairKey, FormDict]:
    """Curve-independent recentering correction for the odd assembly.

    With W(c, Q, P) the truncated five-term forms, the correction is
    (2/(2k+1)) * (W(1,0,0) - 2 W(0,0,0)); adding it to W(c, Q, P) matches
    the closed-form chart brackets and restores the Jacobi identity.
    """
    if k not in _ODD_SHIFT_CACHE:
        m0 = CurveModel.odd(k, 0, 0, 0)
        m1 = CurveModel.odd(k, 1, 0, 0)
        w0 = _five_term_forms(m0, SectionSpace(m0, k), truncate=True)
        w1 = _five_term_forms(m1, SectionSpace(m1, k), truncate=True)
        factor = Fraction(2, 2 * k + 1)
        _ODD_SHIFT_CACHE[k] = _combine_forms([(w1, factor), (w0, -2 * factor)])
    return _ODD_SHIFT_CACHE[k]


def truncated_five_term(model: CurveModel, k: Optional[int] = None) -> BracketTensor:
    """Literal five-term assembly with pole parts and excess monomials dropped.

    This is the raw ingredient of the odd builder, exposed for dual-route
    consistency checks; it is not itself a Poisson tensor in general.
    """
    model._require_numeric("bracket construction")
    space = SectionSpace(model, k)
    forms = _five_term_forms(model, space, truncate=True)
    prov = dict(model.to_json())
    prov["assembly"] = "five-term, truncated"
    return BracketTensor(model.parity, space.k, space.dim, forms, prov)


def build_tensor(model: CurveModel, k: Optional[int] = None) -> BracketTensor:
    """Bracket tensor of the curve on the level-k coordinate space.

    Even parity: strict five-term assembly (every component must land in
    the section basis, otherwise TensorNotInSectionSpace).  Odd parity:
    truncated five-term assembly plus the fixed recentering correction.
    """
    model._require_numeric("bracket construction")
    space = SectionSpace(model, k)
    prov = dict(model.to_json())
    if model.parity == "even":
        forms = _five_term_forms(model, space, truncate=False)
        prov["assembly"] = "five-term"
    else:
        base = _five_term_forms(model, space, truncate=True)
        forms = _combine_forms([(base, Fraction(1)),
                                (_odd_shift_forms(space.k), Fraction(1))])
        prov["assembly"] = "five-term, pole-corrected"
    return BracketTensor(model.parity, space.k, space.dim, forms, prov)


def build_tensor_generic(model: CurveModel, ops: CorrectionOperators,
                         k: Optional[int] = None) -> BracketTensor:
    """Kernel bracket with user-supplied correction operators, strict mode.

    Assembles S*(s1^s2) + s1 (x) A(s2) - s2 (x) A(s1) + B(s2) (x) s1
    - B(s1) (x) s2 and expands it over the section basis; raises
    TensorNotInSectionSpace when a component falls outside.
    """
    model._require_numeric("bracket construction")
    space = SectionSpace(model, k)
    if len(ops.images_a) != space.dim or len(ops.images_b) != space.dim:
        raise ValueError("correction operator images do not match the basis size")
    basis = space.basis_elements()
    labels = space.labels()
    pi: Dict[PairKey, FormDict] = {}
    for a in range(space.dim):
        for b in range(a + 1, space.dim):
            T = mult_kernel_antisym(basis[a], basis[b])
            T = T + BiCurveElement.from_sections(basis[a], ops.images_a[b])
            T = T - BiCurveElement.from_sections(basis[b], ops.images_a[a])
            T = T + BiCurveElement.from_sections(ops.images_b[b], basis[a])
            T = T - BiCurveElement.from_sections(ops.images_b[a], basis[b])
            form = _symmetrize(_pair_matrix(T, space, False,
                                            f"({labels[a]}, {labels[b]})"))
            if form:
                pi[(a, b)] = form
    prov = dict(model.to_json())
    prov["assembly"] = "generic"
    prov["correction"] = ops.e_divisor
    return BracketTensor(model.parity, space.k, space.dim, pi, prov)


def _unit_coeffs(i: int, size: int) -> List[int]:
    out = [0] * size
    out[i] = 1
    return out


def build_family(parity: str, k: int) -> FamilyBasis:
    """Nine-tensor basis of the bracket family at level k.

    Index 0 is the tensor of the zero curve data; the rest are unit
    directions: for odd parity the moved-branch-point direction first,
    then the three Q monomials, then the P monomials (five even, four odd).
    """
    if parity == "even":
        b0 = build_tensor(CurveModel.even(k, 0, 0))
        tensors = [b0]
        labels = ["const"]
        for i in range(3):
            t = build_tensor(CurveModel.even(k, _unit_coeffs(i, 3), 0)) - b0
            tensors.append(t)
            labels.append(f"Q:t^{i}")
        for j in range(5):
            t = build_tensor(CurveModel.even(k, 0, _unit_coeffs(j, 5))) - b0
            tensors.append(t)
            labels.append(f"P:t^{j}")
    elif parity == "odd":
        b0 = build_tensor(CurveModel.odd(k, 0, 0, 0))
        tensors = [b0]
        labels = ["const"]
        t = build_tensor(CurveModel.odd(k, 1, 0, 0)) - b0
        tensors.append(t)
        labels.append("c")
        for i in range(3):
            t = build_tensor(CurveModel.odd(k, 0, _unit_coeffs(i, 3), 0)) - b0
            tensors.append(t)
            labels.append(f"Q:t^{i}")
        for j in range(4):
            t = build_tensor(CurveModel.odd(k, 0, 0, _unit_coeffs(j, 4))) - b0
            tensors.append(t)
            labels.append(f"P:t^{j}")
    else:
        raise ValueError(f"unknown parity {parity!r}")
    for tensor, label in zip(tensors, labels):
        tensor.provenance = {"family": parity, "k": k, "direction": label}
    return FamilyBasis(parity, k, tuple(tensors), tuple(labels))


def reconstruct_tensor(family: FamilyBasis, model: CurveModel) -> BracketTensor:
    """Family combination with the curve's own coefficients.

    Matches build_tensor wherever the assembly is linear in the curve data:
    everywhere for even parity, and for odd parity at c = 0 or with
    (Q, P) = (0, 0), since the truncation mixes c with (Q, P).
    """
    if model.parity != family.parity or model.k_param != family.k:
        raise ValueError("family and model shapes differ")
    model._require_numeric("family reconstruction")

    def padded(poly: Poly, size: int) -> List[Fraction]:
        cs = poly.coeffs_univar("t")
        return [cs[i] if i < len(cs) else Fraction(0) for i in range(size)]

    out = family.tensors[0].scale(1)
    idx = 1
    if family.parity == "odd":
        if model.c:
            out = out + family.tensors[1].scale(model.c)
        idx = 2
    for i, q in enumerate(padded(model.Q, 3)):
        if q:
            out = out + family.tensors[idx + i].scale(q)
    p_size = 5 if family.parity == "even" else 4
    for j, p in enumerate(padded(model.P, p_size)):
        if p:
            out = out + family.tensors[idx + 3 + j].scale(p)
    out.provenance = {"reconstructed": model.to_json()}
    return out
