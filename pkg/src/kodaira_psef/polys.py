"""Sparse multivariate polynomials over Q and a small Buchberger engine.

Polynomials are dicts ``{exponent tuple: Fraction}``. The monomial order is
degree-reverse-lexicographic throughout. Groebner completion is capped by
total degree; exceeding the cap raises :class:`DegreeCapExceeded` rather than
returning a possibly wrong answer.
"""

from __future__ import annotations

import os
import re
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

Monomial = tuple[int, ...]
Poly = dict  # Monomial -> Fraction

DEFAULT_DEGREE_CAP = 24
CAP_ENV = "KODAIRA_PSEF_DEGREE_CAP"


class DegreeCapExceeded(RuntimeError):
    pass


def degree_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return DEFAULT_DEGREE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError(f"{CAP_ENV} must be positive")
    return cap


def grevlex_key(m: Monomial):
    return (sum(m), tuple(-e for e in reversed(m)))


def lead(p: Poly) -> Monomial:
    return max(p, key=grevlex_key)


def deg(p: Poly) -> int:
    return max((sum(m) for m in p), default=-1)


def add(p: Poly, q: Poly) -> Poly:
    r = dict(p)
    for m, c in q.items():
        v = r.get(m, 0) + c
        if v:
            r[m] = v
        else:
            r.pop(m, None)
    return r


def scale(p: Poly, c: Fraction, shift: Monomial | None = None) -> Poly:
    if c == 0:
        return {}
    if shift is None:
        return {m: c * v for m, v in p.items()}
    return {tuple(a + b for a, b in zip(m, shift)): c * v for m, v in p.items()}


def mul(p: Poly, q: Poly) -> Poly:
    r: Poly = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            v = r.get(m, 0) + c1 * c2
            if v:
                r[m] = v
            else:
                r.pop(m, None)
    return r


def power(p: Poly, k: int, nvars: int) -> Poly:
    r: Poly = {(0,) * nvars: Fraction(1)}
    for _ in range(k):
        r = mul(r, p)
    return r


def monomial(exps: Sequence[int]) -> Poly:
    return {tuple(exps): Fraction(1)}


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def normal_form(f: Poly, basis: Sequence[Poly]) -> Poly:
    """Full reduction of ``f`` modulo ``basis``."""
    leads = [(lead(g), g) for g in basis if g]
    f = dict(f)
    rem: Poly = {}
    while f:
        m = lead(f)
        c = f[m]
        for lm, g in leads:
            if divides(lm, m):
                shift = tuple(a - b for a, b in zip(m, lm))
                f = add(f, scale(g, -c / g[lm], shift))
                break
        else:
            rem[m] = c
            del f[m]
    return rem


def _monic(p: Poly) -> Poly:
    c = p[lead(p)]
    return {m: v / c for m, v in p.items()}


def _spoly(f: Poly, g: Poly) -> Poly:
    lf, lg = lead(f), lead(g)
    l = tuple(max(a, b) for a, b in zip(lf, lg))
    sf = tuple(a - b for a, b in zip(l, lf))
    sg = tuple(a - b for a, b in zip(l, lg))
    return add(scale(f, 1 / f[lf], sf), scale(g, -1 / g[lg], sg))


def groebner(gens: Iterable[Poly], cap: int | None = None) -> list[Poly]:
    """Reduced Groebner basis (grevlex) by Buchberger with the coprime criterion."""
    cap = degree_cap() if cap is None else cap
    basis = [_monic(g) for g in gens if g]
    for g in basis:
        if deg(g) > cap:
            raise DegreeCapExceeded(f"generator of degree {deg(g)} exceeds cap {cap}")
    pairs = list(combinations(range(len(basis)), 2))
    while pairs:
        i, j = pairs.pop()
        li, lj = lead(basis[i]), lead(basis[j])
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue
        h = normal_form(_spoly(basis[i], basis[j]), basis)
        if h:
            if deg(h) > cap:
                raise DegreeCapExceeded(f"basis element of degree {deg(h)} exceeds cap {cap}")
            basis.append(_monic(h))
            k = len(basis) - 1
            pairs.extend((a, k) for a in range(k))
    # minimalize and interreduce
    basis.sort(key=lambda g: grevlex_key(lead(g)))
    minimal: list[Poly] = []
    for g in basis:
        if not any(divides(lead(h), lead(g)) for h in minimal):
            minimal.append(g)
    reduced = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        lg = lead(g)
        tail = normal_form({m: c for m, c in g.items() if m != lg}, others)
        reduced.append(add({lg: Fraction(1)}, tail))
    return sorted(reduced, key=lambda g: grevlex_key(lead(g)))


def standard_monomials(basis: Sequence[Poly], nvars: int) -> list[Monomial] | None:
    """Monomials outside the lead ideal, or None if there are infinitely many."""
    leads = [lead(g) for g in basis]
    if any(all(e == 0 for e in m) for m in leads):
        return []
    bounds = []
    for v in range(nvars):
        pure = [m[v] for m in leads if all(e == 0 for k, e in enumerate(m) if k != v)]
        if not pure:
            return None
        bounds.append(min(pure))
    out = []

    def rec(prefix: list[int]):
        if len(prefix) == nvars:
            m = tuple(prefix)
            if not any(divides(l, m) for l in leads):
                out.append(m)
            return
        for e in range(bounds[len(prefix)]):
            rec(prefix + [e])

    rec([])
    return out


# ---------------------------------------------------------------------------
# parsing and printing

_TOKEN = re.compile(r"\s*(\d+(?:/\d+)?|[A-Za-z_]\w*|\*\*|[-+*^()])")


def parse_poly(text: str, variables: Sequence[str]) -> Poly:
    """Parse expressions like ``y^2 - x^3`` or ``(y-x)*(y+x)``."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad polynomial syntax near {text[pos:]!r}")
        tok = m.group(1)
        tokens.append("^" if tok == "**" else tok)
        pos = m.end()
    n = len(variables)
    vidx = {v: i for i, v in enumerate(variables)}
    it = iter(tokens + [None])
    cur = [next(it)]

    def peek():
        return cur[0]

    def take():
        t = cur[0]
        cur[0] = next(it, None)
        return t

    def expr() -> Poly:
        sign = 1
        if peek() in "+-" if peek() else False:
            sign = -1 if take() == "-" else 1
        r = scale(term(), Fraction(sign))
        while peek() in ("+", "-"):
            op = take()
            t = term()
            r = add(r, t if op == "+" else scale(t, Fraction(-1)))
        return r

    def term() -> Poly:
        r = factor()
        while peek() == "*" or (peek() is not None and peek() not in "+-)^*"):
            if peek() == "*":
                take()
            r = mul(r, factor())
        return r

    def factor() -> Poly:
        base = atom()
        if peek() == "^":
            take()
            e = take()
            if e is None or not e.isdigit():
                raise ValueError("exponent must be a non-negative integer")
            base = power(base, int(e), n)
        return base

    def atom() -> Poly:
        t = take()
        if t is None:
            raise ValueError("unexpected end of polynomial")
        if t == "(":
            r = expr()
            if take() != ")":
                raise ValueError("unbalanced parentheses")
            return r
        if t == "-":
            return scale(factor(), Fraction(-1))
        if t[0].isdigit():
            c = Fraction(t)
            return {(0,) * n: c} if c else {}
        if t in vidx:
            e = [0] * n
            e[vidx[t]] = 1
            return monomial(e)
        raise ValueError(f"unknown variable {t!r}")

    r = expr()
    if peek() is not None:
        raise ValueError(f"trailing input in polynomial: {peek()!r}")
    return r


def format_poly(p: Poly, variables: Sequence[str]) -> str:
    if not p:
        return "0"
    parts = []
    for m in sorted(p, key=grevlex_key, reverse=True):
        c = p[m]
        mono = "*".join(
            v if e == 1 else f"{v}^{e}" for v, e in zip(variables, m) if e
        )
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return head + "".join(f" {s} {b}" for s, b in parts[1:])


def derivative(p: Poly, var: int) -> Poly:
    r: Poly = {}
    for m, c in p.items():
        if m[var]:
            e = list(m)
            e[var] -= 1
            r[tuple(e)] = c * m[var]
    return r


def substitute_shift(p: Poly, point: Sequence[Fraction]) -> Poly:
    """Rewrite ``p`` in coordinates centred at ``point`` (x_i -> x_i + point_i)."""
    n = len(point)
    r: Poly = {}
    for m, c in p.items():
        term: Poly = {(0,) * n: c}
        for v, e in enumerate(m):
            if e:
                lin = {tuple(1 if k == v else 0 for k in range(n)): Fraction(1)}
                if point[v]:
                    lin[(0,) * n] = Fraction(point[v])
                term = mul(term, power(lin, e, n))
        r = add(r, term)
    return r
