"""
Isometries of S²×ℝ, the (2, 2, q) mirror point groups, Frobenius congruences
and the space groups 4q.I.2.

An isometry is (S, eps, r): S orthogonal on the sphere, eps = ±1 on the line,
r the fiber translation. Points act on the right, x -> x @ S and
t -> eps*t + r, so apply(compose(a, b), p) == apply(b, apply(a, p)).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import permutations, product
import logging
import math
import re
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError
from .geometry import FiberedPoint
from .protocols import IsometryGroup

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)
FAMILY_4Q_I_2 = (Fraction(0), Fraction(0), HALF)
_LABEL = re.compile(r"(?P<word>1|(?:g\d)+)?(?:\*?T\^(?P<k>-?\d+))?")


@dataclass(frozen=True, eq=False)
class Isometry:
    S: np.ndarray
    eps: int = 1
    r: float = 0.0

    def __post_init__(self) -> None:
        if self.eps not in (1, -1):
            raise DomainError("Fiber direction flag must be +1 or -1.")

    def isclose(self, other: Isometry, atol: float = 1e-10) -> bool:
        return (
            self.eps == other.eps
            and abs(self.r - other.r) <= atol
            and bool(np.allclose(self.S, other.S, atol=atol, rtol=0.0))
        )

    def inverse(self) -> Isometry:
        return Isometry(self.S.T.copy(), self.eps, -self.r * self.eps)


IDENTITY = Isometry(np.eye(3))


def fiber_translation(r: float) -> Isometry:
    return Isometry(np.eye(3), 1, r)


def mirror(normal: Sequence[float]) -> np.ndarray:
    n = np.asarray(normal, dtype=float)
    n = n / np.linalg.norm(n)
    return np.eye(3) - 2.0 * np.outer(n, n)


def compose_isometry(a: Isometry, b: Isometry) -> Isometry:
    return Isometry(a.S @ b.S, a.eps * b.eps, a.r * b.eps + b.r)


def apply_isometry(g: Isometry, p: FiberedPoint) -> FiberedPoint:
    return FiberedPoint.from_unit_vector(p.unit_vector() @ g.S, g.eps * p.t + g.r)


@dataclass(frozen=True, eq=False)
class GroupElement:
    word: tuple[int, ...]
    isometry: Isometry

    @property
    def label(self) -> str:
        return "".join(f"g{i + 1}" for i in self.word) or "1"


def coxeter_exponents(q: int) -> dict[tuple[int, int], int]:
    """Exponents m_ij of the relations (g_i g_j)^m_ij for the (2, 2, q) group."""
    return {(0, 0): 1, (1, 1): 1, (2, 2): 1, (0, 1): q, (0, 2): 2, (1, 2): 2}


def relation_words(q: int) -> list[tuple[int, ...]]:
    words = []
    for (i, j), m in coxeter_exponents(q).items():
        words.append((i, j) * m)
    return words


@dataclass(frozen=True, eq=False)
class PointGroup:
    q: int
    generators: tuple[Isometry, Isometry, Isometry]
    elements: tuple[GroupElement, ...]

    @property
    def label(self) -> str:
        return f"(+, 0, [] {{(2, 2, {self.q})}})"

    @property
    def order(self) -> int:
        return len(self.elements)

    def word_isometry(self, word: Sequence[int]) -> Isometry:
        result = IDENTITY
        for i in word:
            result = compose_isometry(result, self.generators[i])
        return result


def triangle_vertices(q: int) -> tuple[FiberedPoint, FiberedPoint, FiberedPoint]:
    """A1, A2, A3 of the fundamental triangle with angles pi/q, pi/2, pi/2."""
    return (
        FiberedPoint(0.0, 0.0, 0.0),
        FiberedPoint(math.pi / q, 0.0, 0.0),
        FiberedPoint(0.0, math.pi / 2, 0.0),
    )


@lru_cache(maxsize=32)
def build_point_group(q: int, tol: float = 1e-10) -> PointGroup:
    if q < 2:
        raise DomainError(f"Point group parameter q must be at least 2, got {q}.")

    # g1 fixes the meridian A2A3, g2 the meridian A1A3, g3 the equator A1A2
    generators = (
        Isometry(mirror((-math.sin(math.pi / q), math.cos(math.pi / q), 0.0))),
        Isometry(mirror((0.0, 1.0, 0.0))),
        Isometry(mirror((0.0, 0.0, 1.0))),
    )

    found: list[GroupElement] = [GroupElement((), IDENTITY)]
    queue = deque(found)
    while queue:
        current = queue.popleft()
        for i, gen in enumerate(generators):
            candidate = compose_isometry(current.isometry, gen)
            if any(candidate.isclose(e.isometry, tol) for e in found):
                continue
            element = GroupElement(current.word + (i,), candidate)
            found.append(element)
            queue.append(element)
        if len(found) > 4 * q:
            raise DomainError(f"Word closure exceeded the expected order {4 * q}.")

    group = PointGroup(q, generators, tuple(found))
    for word in relation_words(q):
        if not group.word_isometry(word).isclose(IDENTITY, tol):
            raise DomainError(f"Relation {word} does not hold for q={q}.")
    logger.debug("point group q=%d has order %d", q, group.order)
    return group


def word_translation(word: Sequence[int], parts: Sequence[Fraction], eps: Sequence[int]) -> Fraction:
    """Accumulated translation part of a generator word, applied letter by letter."""
    total = Fraction(0)
    for i in word:
        total = total * eps[i] + parts[i]
    return total


@dataclass(frozen=True)
class FrobeniusClass:
    representative: tuple[Fraction, Fraction, Fraction]
    members: tuple[tuple[Fraction, Fraction, Fraction], ...]

    @property
    def is_4q_i_2(self) -> bool:
        return FAMILY_4Q_I_2 in self.members

    @property
    def label(self) -> Optional[str]:
        return "4q.I.2" if self.is_4q_i_2 else None


@dataclass(frozen=True)
class FrobeniusSolution:
    q: int
    raw: tuple[tuple[Fraction, Fraction, Fraction], ...]
    classes: tuple[FrobeniusClass, ...]


def generator_automorphisms(q: int) -> list[tuple[int, int, int]]:
    """Permutations of (g1, g2, g3) that preserve every relation exponent."""
    m = coxeter_exponents(q)

    def exponent(i: int, j: int) -> int:
        return m[(min(i, j), max(i, j))]

    return [
        perm
        for perm in permutations(range(3))
        if all(exponent(perm[i], perm[j]) == exponent(i, j) for i in range(3) for j in range(3))
    ]


def frobenius_solve(q: int) -> FrobeniusSolution:
    """
    Translation parts (tau1, tau2, tau3) mod 1 compatible with the relations.

    g_i² = 1 forces each tau_i into {0, 1/2}; the remaining relations are
    checked by direct word evaluation. Solutions are grouped under the
    generator permutations that preserve the presentation.
    """
    if q < 2:
        raise DomainError(f"Point group parameter q must be at least 2, got {q}.")
    eps = (1, 1, 1)
    words = relation_words(q)

    raw = tuple(
        parts
        for parts in product((Fraction(0), HALF), repeat=3)
        if all(word_translation(w, parts, eps).denominator == 1 for w in words)
    )

    autos = generator_automorphisms(q)
    seen: set[tuple[Fraction, ...]] = set()
    classes = []
    for parts in raw:
        if parts in seen:
            continue
        images = set()
        for perm in autos:
            image = [Fraction(0)] * 3
            for i in range(3):
                image[perm[i]] = parts[i]
            images.add(tuple(image))
        seen |= images
        members = tuple(sorted(images))
        classes.append(FrobeniusClass(members[0], members))

    classes.sort(key=lambda c: c.representative)
    logger.debug("q=%d: %d raw Frobenius solutions in %d classes", q, len(raw), len(classes))
    return FrobeniusSolution(q, raw, tuple(classes))


@dataclass(frozen=True, eq=False)
class SpaceGroup:
    point_group: PointGroup
    translation_parts: tuple[Fraction, Fraction, Fraction]
    fiber_period: float

    def __post_init__(self) -> None:
        if not self.fiber_period > 0:
            raise DomainError("Fiber period must be positive.")
        eps = tuple(g.eps for g in self.point_group.generators)
        for w in relation_words(self.point_group.q):
            if word_translation(w, self.translation_parts, eps).denominator != 1:
                raise DomainError(
                    f"Translation parts {self.translation_parts} violate the Frobenius congruence of {w}."
                )

    @property
    def q(self) -> int:
        return self.point_group.q

    @property
    def glide(self) -> float:
        return self.fiber_period / 2

    @cached_property
    def _elements(self) -> tuple[GroupElement, ...]:
        period = self.fiber_period
        eps = tuple(g.eps for g in self.point_group.generators)
        out = []
        for e in self.point_group.elements:
            shift = float(word_translation(e.word, self.translation_parts, eps) % 1) * period
            out.append(GroupElement(e.word, Isometry(e.isometry.S, e.isometry.eps, shift)))
        return tuple(out)

    def elements(self) -> Sequence[GroupElement]:
        return self._elements

    def isometry_for(self, label: str) -> Isometry:
        """Isometry named by an orbit label such as "1", "g1g3", "T^-1" or "g3*T^2"."""
        match = _LABEL.fullmatch(label.strip())
        if match is None or not (match["word"] or match["k"]):
            raise DomainError(f"Cannot parse group word {label!r}.")
        letters = match["word"] if match["word"] not in (None, "1") else ""
        word = tuple(int(d) - 1 for d in letters[1:].split("g")) if letters else ()
        if any(not 0 <= i < 3 for i in word):
            raise DomainError(f"Group word {label!r} uses an unknown generator.")
        k = int(match["k"]) if match["k"] else 0

        eps = tuple(g.eps for g in self.point_group.generators)
        base = self.point_group.word_isometry(word)
        shift = float(word_translation(word, self.translation_parts, eps) % 1) + k
        return Isometry(base.S, base.eps, shift * self.fiber_period)


@lru_cache(maxsize=256)
def space_group_4q_i_2(q: int, tau: float) -> SpaceGroup:
    """Space group 4q.I.2 with glide tau on g3; the fiber lattice is 2*tau*Z."""
    if not tau > 0:
        raise DomainError(f"Glide parameter tau must be positive, got {tau!r}.")
    return SpaceGroup(build_point_group(q), FAMILY_4Q_I_2, 2 * tau)


@dataclass(frozen=True, eq=False)
class OrbitPoint:
    label: str
    isometry: Isometry
    point: FiberedPoint


def _lattice_label(word: str, k: int) -> str:
    if k == 0:
        return word
    if word == "1":
        return f"T^{k}"
    return f"{word}*T^{k}"


def _point_key(p: FiberedPoint, digits: int) -> tuple[float, ...]:
    v = p.unit_vector()
    return tuple(round(float(c), digits) + 0.0 for c in (*v, p.t))


def orbit(G: IsometryGroup, K: FiberedPoint, fiber_window: float, tol: float = 1e-10) -> list[OrbitPoint]:
    """Distinct orbit points with |t| <= fiber_window, sorted by (t, label)."""
    if not fiber_window > 0:
        raise DomainError("Fiber window must be positive.")
    period = G.fiber_period
    digits = max(0, int(-math.log10(tol)) - 1)

    seen: dict[tuple[float, ...], OrbitPoint] = {}
    for element in G.elements():
        g = element.isometry
        base = g.eps * K.t + g.r
        if period:
            lo = math.ceil((-fiber_window - base) / period - 1e-12)
            hi = math.floor((fiber_window - base) / period + 1e-12)
            shifts = sorted(range(lo, hi + 1), key=lambda k: (abs(k), k))
        else:
            shifts = [0] if abs(base) <= fiber_window else []
        for k in shifts:
            moved = compose_isometry(g, fiber_translation(k * period)) if k else g
            image = apply_isometry(moved, K)
            if abs(image.t) > fiber_window + 1e-12:
                continue
            key = _point_key(image, digits)
            if key not in seen:
                seen[key] = OrbitPoint(_lattice_label(element.label, k), moved, image)
    return sorted(seen.values(), key=lambda o: (o.point.t, o.label))


def stabilizer_order(G: IsometryGroup, K: FiberedPoint, tol: float = 1e-10) -> int:
    """Number of group elements fixing K; at most one lattice shift per coset can."""
    v = K.unit_vector()
    period = G.fiber_period
    count = 0
    for element in G.elements():
        g = element.isometry
        if np.linalg.norm(v @ g.S - v) > tol:
            continue
        # need eps*t + r + k*period == t for an integer k
        gap = K.t - (g.eps * K.t + g.r)
        if period:
            k = round(gap / period)
            fixed = abs(gap - k * period) <= tol
        else:
            fixed = abs(gap) <= tol
        count += int(fixed)
    return count
