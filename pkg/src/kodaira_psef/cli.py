"""Command-line front end.

Exit codes: 0 success, 1 verification failure (or a decomposition that does
not exist), 2 input error. Every output is a pure function of the input.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, TextIO

from .blowup import (
    EmptyGammaError,
    NotIsotrivialType,
    blown_up_fibre,
    pullback_normalized_fibre,
    small_coefficient_witness,
    y_restriction_verdict,
)
from .invariants import NOT_PSEF, FibrationSpec, SpecError, report
from .kodaira import (
    DEFAULT_DB,
    FibreTypeError,
    KodairaDatabase,
    MultiplicityError,
    fibre_model,
    kodaira_type_from_json,
    normalised_fibre_data,
    KodairaType,
)
from .lattice import DivisorVec, format_rational, parse_rational
from .polys import DegreeCapExceeded
from .verify import verify_tables
from .zariski import (
    Configuration,
    Fibre,
    NotPseudoEffective,
    VerticalDivisor,
    lemma48_criterion,
    vertical_psef_oracle,
    zariski_decompose,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


class InputError(Exception):
    def __init__(self, code: str, message: str, where: str = ""):
        super().__init__(message)
        self.code = code
        self.where = where

    def render(self) -> str:
        loc = f" ({self.where})" if self.where else ""
        return f"error {self.code}{loc}: {self}"


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError("E_SYNTAX", f"cannot read file: {exc.strerror}", path) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError("E_SYNTAX", exc.msg, f"{path}: line {exc.lineno}, column {exc.colno}") from None


@dataclass
class SpecFile:
    path: str
    spec: FibrationSpec | None = None
    diagnostics: list[str] = field(default_factory=list)


def parse_spec(path: str, db: KodairaDatabase = DEFAULT_DB) -> FibrationSpec:
    obj = _load_json(path)
    try:
        spec = FibrationSpec.from_json(obj)
        spec.validate(db)
    except SpecError as exc:
        msg = str(exc).split(": ", 1)[1].rsplit(" [", 1)[0]
        raise InputError(exc.code, msg, f"{path}: {exc.where}" if exc.where else path) from None
    return spec


def load_spec_file(path: str, db: KodairaDatabase = DEFAULT_DB) -> SpecFile:
    sf = SpecFile(path)
    try:
        sf.spec = parse_spec(path, db)
    except InputError as exc:
        sf.diagnostics.append(exc.render())
    return sf


def _parse_type(entry, where: str) -> KodairaType:
    obj = {"type": entry} if isinstance(entry, str) else entry
    try:
        return kodaira_type_from_json(obj)
    except MultiplicityError as exc:
        raise InputError("E_MULT", str(exc), where) from None
    except FibreTypeError as exc:
        raise InputError("E_TYPE", str(exc), where) from None


def _rational(value, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise InputError("E_SYNTAX", "rationals must be integers or strings 'p/q'", where)
    try:
        return parse_rational(str(value))
    except (ValueError, ZeroDivisionError):
        raise InputError("E_SYNTAX", f"not a rational number: {value!r}", where) from None


def parse_divisor(obj, db: KodairaDatabase = DEFAULT_DB) -> tuple[VerticalDivisor, Configuration]:
    """Read ``{"fibres": {id: {"type": .., "coefficients": {..}}}, "F": "p/q"}``."""
    if not isinstance(obj, Mapping):
        raise InputError("E_SYNTAX", "top level must be a JSON object")
    fibres = obj.get("fibres", {})
    if not isinstance(fibres, Mapping):
        raise InputError("E_SYNTAX", "'fibres' must be an object", "fibres")
    config_fibres = []
    parts = {}
    for fid, entry in fibres.items():
        where = f"fibres.{fid}"
        if not isinstance(entry, Mapping):
            raise InputError("E_SYNTAX", "fibre entry must be an object", where)
        if not fid or "." in fid or fid == "F":
            raise InputError("E_SYNTAX", "fibre ids must be non-empty, without '.', and not 'F'", where)
        t = _parse_type({k: v for k, v in entry.items() if k in ("type", "b", "m")}, where + ".type")
        blown = entry.get("blown_up", False)
        if not isinstance(blown, bool):
            raise InputError("E_SYNTAX", "'blown_up' must be true or false", where + ".blown_up")
        if blown:
            try:
                f = blown_up_fibre(t, db).fibre(fid)
            except (EmptyGammaError, NotIsotrivialType) as exc:
                raise InputError("E_TYPE", str(exc), where + ".blown_up") from None
        else:
            f = Fibre.from_model(fid, fibre_model(t, db))
        coeffs = entry.get("coefficients", {})
        if not isinstance(coeffs, Mapping):
            raise InputError("E_SYNTAX", "'coefficients' must be an object", where + ".coefficients")
        vals = {}
        for cid, q in coeffs.items():
            if cid not in f.components:
                raise InputError("E_SYNTAX", f"{cid!r} is not a component of {t.name} "
                                 f"(components: {', '.join(f.components)})", f"{where}.coefficients")
            vals[cid] = _rational(q, f"{where}.coefficients.{cid}")
        config_fibres.append(f)
        parts[fid] = DivisorVec(vals)
    phi = _rational(obj.get("F", 0), "F")
    return VerticalDivisor(parts, phi), Configuration(tuple(config_fibres))


# ---------------------------------------------------------------------------
# rendering


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _divisor_text(d: VerticalDivisor) -> str:
    return str(d.to_global()) or "0"


def _table(rows: Sequence[Sequence[str]], header: Sequence[str]) -> list[str]:
    widths = [max(len(str(r[i])) for r in [header, *rows]) for i in range(len(header))]
    fmt = lambda r: "  ".join(str(x).ljust(w) for x, w in zip(r, widths)).rstrip()
    return [fmt(header), fmt(["-" * w for w in widths])] + [fmt(r) for r in rows]


def cmd_report(args, db, out: TextIO) -> int:
    spec = parse_spec(args.spec, db)
    rep = report(spec, db)
    if rep.tangent_psef == NOT_PSEF:
        rep = dataclasses.replace(rep, y_restriction=y_restriction_verdict(spec, db).to_json())
    out.write(rep.dumps() if args.json else rep.text())
    return EXIT_OK


def cmd_fibre(args, db, out: TextIO) -> int:
    t = _parse_type(args.type, "type")
    model = fibre_model(t, db)
    nf = normalised_fibre_data(t, db)
    if args.json:
        obj = model.to_json()
        obj["normalised_fibre"] = {c: format_rational(nf.divisor[c]) for c in model.ids}
        obj["formula_extrapolated"] = nf.formula_extrapolated
        out.write(_dump(obj))
        return EXIT_OK
    lines = [f"type {t.name}    Euler number {model.euler}"]
    rows = [[c.id, str(c.multiplicity), format_rational(c.self_intersection), str(c.genus),
             format_rational(nf.divisor[c.id])] for c in model.components]
    lines += _table(rows, ["component", "mult", "self", "genus", "normalised"])
    if nf.formula_extrapolated:
        lines.append("(normalised coefficients computed by the closed form)")
    if model.edges:
        lines.append("edges: " + ", ".join(f"{a}-{b}" + (f" ({k})" if k != 1 else "")
                                           for (a, b), k in model.edges))
    lat = model.lattice()
    lines.append("gram:")
    cells = [[format_rational(x) for x in row] for row in lat.gram]
    w = max(len(c) for row in cells for c in row)
    lines += ["  " + " ".join(c.rjust(w) for c in row) for row in cells]
    for p in model.points:
        lines.append(f"singular point on {'+'.join(p.incident)}: {p.equation} = 0, ideal {p.ideal}")
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_zariski(args, db, out: TextIO) -> int:
    d, config = parse_divisor(_load_json(args.divisor), db)
    try:
        z = zariski_decompose(d, config)
    except NotPseudoEffective as exc:
        if args.json:
            out.write(_dump({"error": "not pseudo-effective", "oracle": exc.oracle.to_json()}))
        else:
            cert = ", ".join(f"{k}: {format_rational(v)}" for k, v in exc.oracle.certificate.items())
            out.write(f"not pseudo-effective; Farkas certificate {{{cert}}}\n")
        return EXIT_FAIL
    if args.json:
        out.write(_dump(z.to_json()))
    else:
        lines = [f"D = {_divisor_text(d)}", f"P = {_divisor_text(z.positive)}", f"N = {_divisor_text(z.negative)}"]
        lines += [f"  {k}: {v}" for k, v in z.certificates.items()]
        out.write("\n".join(lines) + "\n")
    return EXIT_OK if z.valid else EXIT_FAIL


def cmd_psef_oracle(args, db, out: TextIO) -> int:
    d, config = parse_divisor(_load_json(args.divisor), db)
    res = vertical_psef_oracle(d, config, method=args.method)
    lemma = lemma48_criterion(d, config)
    if args.json:
        obj = res.to_json()
        obj["lemma48"] = lemma.to_json()
        out.write(_dump(obj))
        return EXIT_OK
    lines = [f"D = {_divisor_text(d)}"]
    if res.psef:
        lines.append(f"psef ({res.method}); effective witness {_divisor_text(res.witness)}")
    else:
        cert = ", ".join(f"{k}: {format_rational(v)}" for k, v in res.certificate.items())
        lines.append(f"not psef ({res.method}); Farkas certificate {{{cert}}}")
    lines.append(f"partial-fibre criterion: {lemma.verdict} ({lemma.reason})")
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_blowup(args, db, out: TextIO) -> int:
    t = _parse_type(args.type, "type")
    try:
        pb = pullback_normalized_fibre(t, db)
        y, q = small_coefficient_witness(t, db)
    except (EmptyGammaError, NotIsotrivialType) as exc:
        raise InputError("E_TYPE", str(exc), "type") from None
    if args.json:
        obj = pb.to_json()
        obj["witness"] = [y, format_rational(q)]
        out.write(_dump(obj))
        return EXIT_OK
    lines = [f"pullback of the normalised {t.name} fibre"]
    lines.append("strict:      " + " + ".join(f"{format_rational(v)}*{c}" for c, v in pb.strict.items))
    lines.append("exceptional: " + " + ".join(f"{format_rational(v)}*{c}" for c, v in pb.exceptional))
    lines.append(f"witness:     {y} with coefficient {format_rational(q)} <= 1/2")
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify_tables(args, db, out: TextIO) -> int:
    rep = verify_tables(db)
    out.write(_dump(rep.to_json()) if args.json else rep.text())
    return EXIT_OK if rep.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kodaira-psef",
                                description="Exact invariants and tables for elliptic fibrations.")
    fmt = argparse.ArgumentParser(add_help=False)
    g = fmt.add_mutually_exclusive_group()
    g.add_argument("--json", action="store_true", help="emit JSON")
    g.add_argument("--text", action="store_true", help="emit aligned text (default)")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("report", parents=[fmt], help="invariants and verdicts for a fibration spec")
    r.add_argument("spec")
    r.set_defaults(func=cmd_report)
    f = sub.add_parser("fibre", parents=[fmt], help="dual graph, Gram matrix and normalised fibre")
    f.add_argument("type")
    f.set_defaults(func=cmd_fibre)
    z = sub.add_parser("zariski", parents=[fmt], help="Zariski decomposition of a vertical divisor")
    z.add_argument("divisor")
    z.set_defaults(func=cmd_zariski)
    o = sub.add_parser("psef-oracle", parents=[fmt], help="decide pseudo-effectivity of a vertical divisor")
    o.add_argument("divisor")
    o.add_argument("--method", choices=("fm", "simplex"), default="fm")
    o.set_defaults(func=cmd_psef_oracle)
    b = sub.add_parser("blowup", parents=[fmt], help="pulled-back normalised fibre on the blow-up")
    b.add_argument("type")
    b.set_defaults(func=cmd_blowup)
    v = sub.add_parser("verify-tables", parents=[fmt], help="recompute all stored tables")
    v.set_defaults(func=cmd_verify_tables)
    return p


def main(argv: Sequence[str] | None = None, db: KodairaDatabase | None = None,
         stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args, db or DEFAULT_DB, out)
    except InputError as exc:
        err.write(exc.render() + "\n")
        return EXIT_INPUT
    except DegreeCapExceeded as exc:
        err.write(f"error E_CAP: {exc}\n")
        return EXIT_INPUT
    except (ValueError, KeyError) as exc:
        err.write(f"error E_SYNTAX: {exc}\n")
        return EXIT_INPUT


def main_entry() -> None:  # pragma: no cover
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()
