"""Class functions, induced trivial characters and the theta maps on Sigma_A(W)."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .algebra import AlgebraPresentation, convolve_dense, sigma_module
from .coxeter import CoxeterGroup
from .descent import reflection_set
from .lattice import integer_kernel, solve_q


class ClassFunction:
    """Function on W constant on conjugacy classes; values indexed like ``g.conj_classes``.

    Values are Fractions, or field elements when built from a character table.
    """

    __slots__ = ("group", "values")

    def __init__(self, group: CoxeterGroup, values: Sequence):
        if len(values) != len(group.conj_classes):
            raise ValueError("one value per conjugacy class expected")
        self.group = group
        self.values = tuple(values)

    @classmethod
    def constant(cls, g: CoxeterGroup, c) -> "ClassFunction":
        return cls(g, [Fraction(c)] * len(g.conj_classes))

    @classmethod
    def from_element_values(cls, g: CoxeterGroup, f) -> "ClassFunction":
        vals = []
        for members in g.conj_classes:
            v = f(members[0])
            vals.append(v)
        return cls(g, vals)

    def __call__(self, w: int):
        return self.values[self.group.class_of[w]]

    def _zip(self, other, op):
        if isinstance(other, ClassFunction):
            return ClassFunction(self.group, [op(a, b) for a, b in zip(self.values, other.values)])
        return ClassFunction(self.group, [op(a, other) for a in self.values])

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __mul__(self, other):
        return self._zip(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __eq__(self, other):
        if not isinstance(other, ClassFunction):
            return NotImplemented
        return self.values == other.values

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def inner(self, other: "ClassFunction"):
        """(1/|W|) sum_w f(w) g(w^{-1}); classes of W are real, so no conjugation is needed."""
        g = self.group
        total = 0
        for members, a, b in zip(g.conj_classes, self.values, other.values):
            total = total + a * b * len(members)
        return total / g.order

    def __repr__(self):
        return f"ClassFunction({list(self.values)})"


def induced_trivial(g: CoxeterGroup, I) -> ClassFunction:
    """Ind_{W_I}^W 1, with value |{x : x^{-1} w x in W_I}| / |W_I| at w."""
    I = reflection_set(g, I)
    sub = g.reflection_subgroup(I.members)
    member = np.zeros(g.order, dtype=bool)
    member[sub.elements] = True
    tab = g.table
    vals = []
    for cls in g.conj_classes:
        w = cls[0]
        conj = tab[tab[g.inverse, w], np.arange(g.order)]
        v = Fraction(int(member[conj].sum()), sub.order)
        assert v.denominator == 1
        vals.append(v)
    return ClassFunction(g, vals)


def regular_character(g: CoxeterGroup) -> ClassFunction:
    return ClassFunction(g, [Fraction(g.order if c[0] == 0 else 0) for c in g.conj_classes])


def sign_character(g: CoxeterGroup) -> ClassFunction:
    return ClassFunction.from_element_values(g, lambda w: Fraction((-1) ** g.length(w)))


@dataclass
class ThetaMap:
    labels: list
    images: list  # ClassFunction per basis label
    kernel: list  # integer vectors in the x-basis
    status: str  # "morphism", "not_morphism" or "undefined"
    witness: Optional[tuple] = None
    reason: str = ""
    presentation: Optional[AlgebraPresentation] = None

    @property
    def is_morphism(self) -> bool:
        return self.status == "morphism"

    def apply(self, coords: Sequence) -> ClassFunction:
        out = None
        for c, img in zip(coords, self.images):
            if c:
                term = img * Fraction(c)
                out = term if out is None else out + term
        return out if out is not None else self.images[0] * 0

    def apply_vector(self, v: np.ndarray) -> ClassFunction:
        coords = self.presentation.coordinates(v)
        if coords is None:
            raise ValueError("vector is not in Sigma_A(W)")
        return self.apply(coords)


def theta_map(g: CoxeterGroup, A, sigma: Optional[AlgebraPresentation] = None) -> ThetaMap:
    """x_I -> Ind_{W_I}^W 1 on the basis {x_I : I in P_0(A)}."""
    A = reflection_set(g, A)
    if sigma is None:
        sigma = sigma_module(g, A)
    subsets = sigma.info["subsets"]
    images = [induced_trivial(g, I) for I in subsets]
    base = ThetaMap(sigma.labels, images, [], "undefined", presentation=sigma)
    if not sigma.info["x_basis"]:
        base.reason = "x_I not a basis"
        return base
    base.kernel = _kernel(images)
    if not sigma.closed:
        base.reason = "sigma not closed"
        return base
    for i in range(len(subsets)):
        for j in range(len(subsets)):
            prod = convolve_dense(g, sigma.basis[i], sigma.basis[j])
            coords = sigma.coordinates(prod)
            lhs = base.apply(coords)
            rhs = images[i] * images[j]
            if lhs != rhs:
                c = next(k for k, (a, b) in enumerate(zip(lhs.values, rhs.values)) if a != b)
                base.status = "not_morphism"
                base.witness = (sigma.labels[i], sigma.labels[j], g.conj_classes[c][0],
                                lhs.values[c], rhs.values[c])
                return base
    base.status = "morphism"
    return base


def _kernel(images: Sequence[ClassFunction]) -> list[list[int]]:
    # one common denominator for all rows keeps the kernel unchanged
    den = 1
    for img in images:
        for v in img.values:
            d = Fraction(v).denominator
            den = den * d // int(np.gcd(den, d))
    rows = [[int(Fraction(v) * den) for v in img.values] for img in images]
    return integer_kernel(rows)
