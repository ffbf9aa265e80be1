"""Exact rational linear algebra over finite curve-class lattices.

Everything here works with :class:`fractions.Fraction`; there is no floating
point anywhere in the package.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

Rational = Fraction

KINDS = ("fibre-component", "general-fibre", "exceptional", "strict-transform")


class LatticeError(KeyError):
    """Unknown curve class id."""


def rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused outright.
    """
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    m = _RAT_RE.match(text)
    if not m:
        raise ValueError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class CurveClass:
    id: str
    kind: str = "fibre-component"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown curve kind {self.kind!r}")


@dataclass(frozen=True)
class DivisorVec:
    """A finitely supported rational combination of curve class ids.

    Stored as a sorted tuple of ``(id, coefficient)`` with zero entries dropped,
    so equality and hashing are structural.
    """

    items: tuple[tuple[str, Fraction], ...] = ()

    def __init__(self, coefficients: Mapping[str, object] | Iterable[tuple[str, object]] = ()):
        if isinstance(coefficients, Mapping):
            pairs = coefficients.items()
        else:
            pairs = coefficients
        acc: dict[str, Fraction] = {}
        for k, v in pairs:
            acc[k] = acc.get(k, Fraction(0)) + rational(v)
        object.__setattr__(
            self, "items", tuple(sorted((k, v) for k, v in acc.items() if v != 0))
        )

    @classmethod
    def of(cls, name: str, coefficient=1) -> "DivisorVec":
        return cls({name: coefficient})

    # mapping-ish access
    def __getitem__(self, name: str) -> Fraction:
        for k, v in self.items:
            if k == name:
                return v
        return Fraction(0)

    def get(self, name: str, default=Fraction(0)) -> Fraction:
        for k, v in self.items:
            if k == name:
                return v
        return default

    def __iter__(self) -> Iterator[str]:
        return (k for k, _ in self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __bool__(self) -> bool:
        return bool(self.items)

    def support(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self.items)

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.items)

    def __add__(self, other: "DivisorVec") -> "DivisorVec":
        return DivisorVec(list(self.items) + list(other.items))

    def __neg__(self) -> "DivisorVec":
        return DivisorVec((k, -v) for k, v in self.items)

    def __sub__(self, other: "DivisorVec") -> "DivisorVec":
        return self + (-other)

    def __mul__(self, scalar) -> "DivisorVec":
        s = rational(scalar)
        return DivisorVec((k, s * v) for k, v in self.items)

    __rmul__ = __mul__

    def renamed(self, fn) -> "DivisorVec":
        return DivisorVec((fn(k), v) for k, v in self.items)

    def __str__(self) -> str:
        return format_divisor(self)

    def __repr__(self) -> str:
        return f"DivisorVec({format_divisor(self)!r})"


def format_divisor(d: DivisorVec) -> str:
    if not d.items:
        return "0"
    out = []
    for i, (k, v) in enumerate(d.items):
        sign = "-" if v < 0 else "+"
        mag = abs(v)
        term = k if mag == 1 else f"{format_rational(mag)}*{k}"
        if i == 0:
            out.append(term if sign == "+" else f"-{term}")
        else:
            out.append(f" {sign} {term}")
    return "".join(out)


_TERM_RE = re.compile(r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*\s*)?([A-Za-z_][\w,.:~'-]*)\s*")


def parse_divisor(text: str) -> DivisorVec:
    """Inverse of :func:`format_divisor`."""
    text = text.strip()
    if text == "0":
        return DivisorVec()
    pos = 0
    pairs = []
    first = True
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse divisor at {text[pos:]!r}")
        sign, coef, name = m.groups()
        if sign is None and not first:
            raise ValueError(f"missing sign before {name!r}")
        q = parse_rational(coef) if coef else Fraction(1)
        pairs.append((name, -q if sign == "-" else q))
        pos = m.end()
        first = False
    return DivisorVec(pairs)


@dataclass(frozen=True)
class Lattice:
    """Curve classes with a symmetric rational Gram matrix."""

    classes: tuple[CurveClass, ...]
    gram: tuple[tuple[Fraction, ...], ...]
    _index: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        n = len(self.classes)
        ids = [c.id for c in self.classes]
        if len(set(ids)) != n:
            raise ValueError("curve class ids must be unique")
        gram = tuple(tuple(rational(x) for x in row) for row in self.gram)
        if len(gram) != n or any(len(r) != n for r in gram):
            raise ValueError("gram dimension does not match class count")
        for i in range(n):
            for j in range(i):
                if gram[i][j] != gram[j][i]:
                    raise ValueError(f"gram not symmetric at ({ids[i]}, {ids[j]})")
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "_index", {c: i for i, c in enumerate(ids)})

    @classmethod
    def from_pairs(cls, classes: Sequence[CurveClass | str], pairs: Mapping[tuple[str, str], object]):
        """Build from a sparse ``{(a, b): value}`` table; missing entries are 0."""
        cc = tuple(c if isinstance(c, CurveClass) else CurveClass(c) for c in classes)
        idx = {c.id: i for i, c in enumerate(cc)}
        n = len(cc)
        g = [[Fraction(0)] * n for _ in range(n)]
        for (a, b), v in pairs.items():
            i, j = idx[a], idx[b]
            g[i][j] = g[j][i] = rational(v)
        return cls(cc, tuple(tuple(r) for r in g))

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.classes)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise LatticeError(f"unknown curve class {name!r}") from None

    def pair(self, a: str, b: str) -> Fraction:
        return self.gram[self.index(a)][self.index(b)]

    def restrict(self, ids: Iterable[str]) -> "Lattice":
        ids = list(ids)
        rows = [self.index(i) for i in ids]
        return Lattice(
            tuple(self.classes[r] for r in rows),
            tuple(tuple(self.gram[r][c] for c in rows) for r in rows),
        )

    def vector(self, d: DivisorVec) -> list[Fraction]:
        v = [Fraction(0)] * len(self.classes)
        for k, q in d.items:
            v[self.index(k)] = q
        return v

    def divisor(self, v: Sequence[Fraction]) -> DivisorVec:
        return DivisorVec(zip(self.ids, v))


def intersect(a: DivisorVec, b: DivisorVec, lat: Lattice) -> Fraction:
    total = Fraction(0)
    for ka, qa in a.items:
        i = lat.index(ka)
        for kb, qb in b.items:
            total += qa * qb * lat.gram[i][lat.index(kb)]
    return total


# ---------------------------------------------------------------------------
# matrix kernels


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    m = [r[:] for r in rows]
    pivots: list[int] = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def primitive(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale to a primitive integer vector whose first nonzero entry is positive."""
    lcm = 1
    for x in v:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        return tuple(ints)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def kernel_basis(matrix: Sequence[Sequence[Fraction]]) -> list[tuple[int, ...]]:
    """Rational nullspace as primitive integer vectors, one per free column."""
    rows = [list(map(rational, r)) for r in matrix]
    if not rows:
        return []
    n = len(rows[0])
    red, pivots = _rref(rows)
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        v = [Fraction(0)] * n
        v[free] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][free]
        basis.append(primitive(v))
    return basis


@dataclass(frozen=True)
class Definiteness:
    verdict: str  # "negative-definite" | "negative-semidefinite" | "indefinite"
    kernel: tuple[DivisorVec, ...] = ()

    @property
    def negative_definite(self) -> bool:
        return self.verdict == "negative-definite"


def _is_nsd(gram: Sequence[Sequence[Fraction]]) -> bool:
    # symmetric elimination on -G; a zero pivot with a nonzero row breaks PSD
    m = [[-x for x in row] for row in gram]
    n = len(m)
    alive = list(range(n))
    while alive:
        p = next((i for i in alive if m[i][i] > 0), None)
        if p is None:
            return all(m[i][j] == 0 for i in alive for j in alive)
        if any(m[i][i] < 0 for i in alive):
            return False
        piv = m[p][p]
        rest = [i for i in alive if i != p]
        for i in rest:
            f = m[i][p] / piv
            if f:
                for j in rest:
                    m[i][j] -= f * m[p][j]
        alive = rest
    return True


def definiteness(lat: Lattice) -> Definiteness:
    """Classify the Gram matrix as negative definite, semidefinite or neither.

    Anything that is not negative semidefinite is reported as ``indefinite``.
    """
    if not lat.classes:
        raise ValueError("definiteness of an empty lattice")
    if not _is_nsd(lat.gram):
        return Definiteness("indefinite")
    ker = kernel_basis(lat.gram)
    if not ker:
        return Definiteness("negative-definite")
    return Definiteness(
        "negative-semidefinite",
        tuple(lat.divisor([Fraction(x) for x in v]) for v in ker),
    )


NO_SOLUTION = "no solution"


def solve_linear(lat: Lattice, target: Mapping[str, object] | DivisorVec):
    """Solve ``G x = b`` on the lattice's Gram matrix.

    ``target`` gives the right-hand side per class id (missing entries are 0).
    Returns the solution as a :class:`DivisorVec`, or ``NO_SOLUTION`` when the
    system is inconsistent. Singular but consistent systems get the solution
    with free variables set to zero, pivots taken in class order.
    """
    b_map = target.as_dict() if isinstance(target, DivisorVec) else {k: rational(v) for k, v in target.items()}
    for k in b_map:
        lat.index(k)
    n = len(lat.classes)
    aug = [list(lat.gram[i]) + [b_map.get(lat.ids[i], Fraction(0))] for i in range(n)]
    red, pivots = _rref(aug)
    if n in pivots:
        return NO_SOLUTION
    x = [Fraction(0)] * n
    for r, pc in enumerate(pivots):
        x[pc] = red[r][n]
    return lat.divisor(x)
