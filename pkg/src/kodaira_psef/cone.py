"""Exact feasibility of small systems of linear inequalities.

Every system is a list of :class:`Inequality` ``a . x + c >= 0``. Two solvers
are provided: Fourier-Motzkin elimination (default) and a phase-one simplex
with Bland's rule. Both return a feasible point or a Farkas certificate:
non-negative multipliers whose combination of the inequalities has zero
variable part and a negative constant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)


@dataclass(frozen=True)
class Inequality:
    coeffs: tuple[Fraction, ...]
    const: Fraction
    label: str = ""


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    point: tuple[Fraction, ...] | None = None
    # label -> multiplier; only for infeasible systems
    certificate: dict = field(default_factory=dict)


@dataclass
class _Row:
    a: list
    c: Fraction
    combo: dict


def _combine(p: _Row, wp: Fraction, q: _Row, wq: Fraction) -> _Row:
    a = [wp * x + wq * y for x, y in zip(p.a, q.a)]
    combo = {k: wp * v for k, v in p.combo.items()}
    for k, v in q.combo.items():
        combo[k] = combo.get(k, ZERO) + wq * v
    return _Row(a, wp * p.c + wq * q.c, combo)


def _dedup(rows: list[_Row]) -> list[_Row]:
    best: dict[tuple, _Row] = {}
    for r in rows:
        if all(x == 0 for x in r.a):
            key = ()
        else:
            # scale so the first nonzero coefficient has magnitude one
            lead = next(abs(x) for x in r.a if x)
            r = _Row([x / lead for x in r.a], r.c / lead, {k: v / lead for k, v in r.combo.items()})
            key = tuple(r.a)
        cur = best.get(key)
        if cur is None or r.c < cur.c:
            best[key] = r
    return list(best.values())


def fourier_motzkin(system: Sequence[Inequality], nvars: int) -> Feasibility:
    rows = [_Row(list(q.coeffs), q.const, {q.label or str(i): Fraction(1)}) for i, q in enumerate(system)]
    stages = []
    for k in range(nvars):
        stages.append(rows)
        pos = [r for r in rows if r.a[k] > 0]
        neg = [r for r in rows if r.a[k] < 0]
        nxt = [r for r in rows if r.a[k] == 0]
        for p in pos:
            for n in neg:
                nxt.append(_combine(p, 1 / p.a[k], n, -1 / n.a[k]))
        rows = _dedup(nxt)
    for r in rows:
        if r.c < 0:
            cert = {k: v for k, v in sorted(r.combo.items()) if v != 0}
            return Feasibility(False, None, cert)
    x = [ZERO] * nvars
    for k in reversed(range(nvars)):
        lo, hi = None, None
        for r in stages[k]:
            if r.a[k] == 0:
                continue
            rest = r.c + sum(r.a[j] * x[j] for j in range(k + 1, nvars))
            bound = -rest / r.a[k]
            if r.a[k] > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        if lo is not None:
            x[k] = lo
        elif hi is not None:
            x[k] = hi
    return Feasibility(True, tuple(x))


# ---------------------------------------------------------------------------
# phase-one simplex on A y = b, y >= 0


def _phase_one(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    m, n = len(A), len(A[0]) if A else 0
    A = [row[:] for row in A]
    b = b[:]
    for i in range(m):
        if b[i] < 0:
            A[i] = [-x for x in A[i]]
            b[i] = -b[i]
    # tableau with artificials n..n+m-1
    T = [A[i] + [Fraction(1) if j == i else ZERO for j in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    cost = [ZERO] * n + [Fraction(1)] * m
    ncols = n + m
    while True:
        # reduced costs
        red = []
        for j in range(ncols):
            z = sum(cost[basis[i]] * T[i][j] for i in range(m))
            red.append(cost[j] - z)
        enter = next((j for j in range(ncols) if red[j] < 0), None)
        if enter is None:
            break
        ratios = [(T[i][-1] / T[i][enter], basis[i], i) for i in range(m) if T[i][enter] > 0]
        if not ratios:  # pragma: no cover - phase one is bounded below
            break
        best = min(r[0] for r in ratios)
        leave = min((r for r in ratios if r[0] == best), key=lambda r: r[1])[2]
        piv = T[leave][enter]
        T[leave] = [x / piv for x in T[leave]]
        for i in range(m):
            if i != leave and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [x - f * y for x, y in zip(T[i], T[leave])]
        basis[leave] = enter
    value = sum(T[i][-1] for i in range(m) if basis[i] >= n)
    if value != 0:
        return None
    y = [ZERO] * n
    for i in range(m):
        if basis[i] < n:
            y[basis[i]] = T[i][-1]
    return y


def simplex(system: Sequence[Inequality], nvars: int) -> Feasibility:
    rows = list(system)
    # x = p - q, a.(p - q) - s = -c
    A = []
    b = []
    for i, q in enumerate(rows):
        row = list(q.coeffs) + [-x for x in q.coeffs] + [Fraction(-1) if j == i else ZERO for j in range(len(rows))]
        A.append(row)
        b.append(-q.const)
    if not rows:
        return Feasibility(True, tuple([ZERO] * nvars))
    y = _phase_one(A, b)
    if y is not None:
        return Feasibility(True, tuple(y[k] - y[nvars + k] for k in range(nvars)))
    # Farkas: w >= 0, sum w_i a_i = 0, sum w_i c_i = -1
    A2 = [[q.coeffs[k] for q in rows] for k in range(nvars)] + [[q.const for q in rows]]
    b2 = [ZERO] * nvars + [Fraction(-1)]
    w = _phase_one(A2, b2)
    if w is None:  # pragma: no cover - contradicts Farkas' lemma
        raise ArithmeticError("neither a point nor a Farkas certificate found")
    cert = {}
    for i, q in enumerate(rows):
        if w[i]:
            lab = q.label or str(i)
            cert[lab] = cert.get(lab, ZERO) + w[i]
    return Feasibility(False, None, dict(sorted(cert.items())))


def check_certificate(system: Sequence[Inequality], nvars: int, cert: dict) -> bool:
    """Verify a Farkas certificate against the (uniquely labelled) system."""
    by_label = {(q.label or str(i)): q for i, q in enumerate(system)}
    if any(v < 0 for v in cert.values()):
        return False
    total_a = [ZERO] * nvars
    total_c = ZERO
    for lab, w in cert.items():
        q = by_label[lab]
        total_a = [s + w * x for s, x in zip(total_a, q.coeffs)]
        total_c += w * q.const
    return all(x == 0 for x in total_a) and total_c < 0


def satisfies(system: Sequence[Inequality], point: Sequence[Fraction]) -> bool:
    return all(sum(a * x for a, x in zip(q.coeffs, point)) + q.const >= 0 for q in system)
