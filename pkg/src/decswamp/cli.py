"""Command-line front end.

    decswamp <subcommand> --input FILE [--delta1 p/q] [--delta2 p/q] [--n INT] [--seed INT] [--json]

Exit codes: 0 success, 2 unreadable or malformed document, 3 domain error,
4 selftest mismatch.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Callable

from . import gieseker, level, parabolic, selfcheck, swamp
from .document import (
    ParseError,
    config_doc,
    dumps,
    flag_doc,
    fmt,
    load,
    parse_config,
    parse_flags,
    parse_int,
    parse_level,
    parse_matrix,
    parse_parabolic,
    parse_rational,
    subspace_doc,
)
from .errors import DomainError, EmptyCandidates
from .flags import Subspace

EXIT_OK, EXIT_PARSE, EXIT_DOMAIN, EXIT_MISMATCH = 0, 2, 3, 4


# ------------------------------------------------------------------ helpers

def _plain(x: Any) -> Any:
    if isinstance(x, Fraction):
        return fmt(x)
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def render(report: dict, as_json: bool) -> str:
    report = _plain(report)
    if as_json:
        return json.dumps(report, indent=2) + "\n"
    lines: list[str] = []

    def walk(prefix: str, value: Any):
        if isinstance(value, dict):
            for k, v in value.items():
                walk(f"{prefix}.{k}" if prefix else k, v)
        elif isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
            for i, v in enumerate(value, start=1):
                walk(f"{prefix}[{i}]", v)
        else:
            text = value if isinstance(value, str) else json.dumps(value, separators=(", ", ": "))
            lines.append(f"{prefix}: {text}")

    walk("", report)
    return "\n".join(lines) + "\n"


def _delta(args, doc: dict, name: str, default: Fraction | None = Fraction(0)) -> Fraction:
    raw = getattr(args, name)
    if raw is not None:
        return parse_rational(raw, f"--{name}")
    if name in doc:
        return parse_rational(doc[name], name)
    if default is None:
        raise ParseError(f"{name} is required (document key or --{name})")
    return default


def _twist(args, doc: dict) -> int:
    if args.n is not None:
        return args.n
    if "n" in doc:
        return parse_int(doc["n"], "n")
    raise ParseError("the twist n is required (document key or --n)")


def _candidates(config: swamp.SwampConfig, doc: dict) -> tuple[list[swamp.NumericFlag], str]:
    flags = parse_flags(doc, config.r)
    if flags is not None:
        return flags, "supplied"
    max_length = doc.get("max_length")
    max_length = None if max_length is None else parse_int(max_length, "max_length")
    return swamp.enumerate_candidates(config, max_length), "enumerated"


def _flag_entry(flag: swamp.NumericFlag, **extra) -> dict:
    out = {"ranks": list(flag.ranks)}
    out.update(flag_doc(flag))
    out.update(extra)
    return out


def _report_doc(report: swamp.StabilityReport, relative: str | None = None) -> dict:
    out: dict[str, Any] = {"verdict": report.verdict}
    if relative is not None and relative != report.verdict:
        out["relative_verdict"] = relative
    out["scope"] = report.scope
    out["witness"] = _flag_entry(report.witness) if report.witness is not None else "none"
    out["candidates"] = [_flag_entry(f, value=v) for f, v in report.values]
    if report.non_coordinate:
        out["non_coordinate"] = report.non_coordinate
    if report.notes:
        out["notes"] = list(report.notes)
    return out


# ------------------------------------------------------------- subcommands

def cmd_mu(args, doc) -> dict:
    config = parse_config(doc)
    flags, scope = _candidates(config, doc)
    rows = []
    for f in flags:
        m, mu1, mu2 = swamp.functional_terms(config, f)
        rows.append(_flag_entry(f, M=m, mu1=mu1, mu2=mu2))
    return {"scope": scope, "flags": rows}


def cmd_stab(args, doc) -> dict:
    config = parse_config(doc)
    d1, d2 = _delta(args, doc, "delta1"), _delta(args, doc, "delta2")
    cands, scope = _candidates(config, doc)
    report = swamp.check_stability(config, cands, d1, d2, scope=scope, strict=True)
    relative, _ = swamp._verdict(report.values)
    return {"delta1": d1, "delta2": d2, **_report_doc(report, relative)}


def cmd_section_stab(args, doc) -> dict:
    config = parse_config(doc)
    d1, d2 = _delta(args, doc, "delta1"), _delta(args, doc, "delta2")
    n = _twist(args, doc)
    h1 = bool(doc.get("h1_vanishing", False))
    cands, scope = _candidates(config, doc)
    report = swamp.check_section_stability(config, cands, d1, d2, n, h1, scope)
    return {"delta1": d1, "delta2": d2, "n": n, "h1_vanishing": h1, **_report_doc(report)}


def cmd_walls(args, doc) -> dict:
    config = parse_config(doc)
    d1 = _delta(args, doc, "delta1")
    cands, scope = _candidates(config, doc)
    rng = doc.get("delta2_range")
    if rng is not None:
        lo, hi = rng
        rng = (None if lo is None else parse_rational(lo, "delta2_range"),
               None if hi is None else parse_rational(hi, "delta2_range"))
    walls = swamp.delta_walls(config, cands, d1, rng)
    return {"delta1": d1, "scope": scope, "walls": walls}


def cmd_df(args, doc) -> dict:
    config = parse_config(doc)
    flags = parse_flags(doc, config.r)
    if not flags:
        raise EmptyCandidates("df needs a flag in the document")
    pick = parse_int(doc.get("deform_flag", 1), "deform_flag")
    if not 1 <= pick <= len(flags):
        raise ParseError(f"deform_flag {pick} outside 1..{len(flags)}")
    flag = flags[pick - 1]
    out = config_doc(swamp.admissible_deformation(config, flag))
    out["flags"] = [flag_doc(flag)]
    return out


def cmd_gieseker(args, doc) -> dict:
    config = parse_config(doc)
    d1, d2 = _delta(args, doc, "delta1"), _delta(args, doc, "delta2")
    n = _twist(args, doc)
    p = gieseker.euler_p(n, config.d, config.r, config.g)
    lin = gieseker.make_linearization(p, d1, d2, config.a1, config.a2, config.r)
    out: dict[str, Any] = {"p": p, "z": lin.z, "eta": lin.eta, "theta1": lin.theta1, "theta2": lin.theta2}
    if config.split_degrees is None:
        out["flags"] = "none (the flag comparison needs split_degrees)"
        return out
    model = gieseker.SplitGiesekerModel(config, n)
    cands, scope = _candidates(config, doc)
    rows = []
    for f in cands:
        y = model.gamma(f)
        _, w_m, w_t1, w_t2 = model.weights(y, d1, d2)
        cmp = model.compare_gamma(f, d1, d2)
        rows.append(_flag_entry(f, y_dims=list(y.dims), y_weights=list(y.weights), wM=w_m, wT1=w_t1, wT2=w_t2,
                                total=gieseker.total_gies_weight(lin, w_m, w_t1, w_t2), normalized=cmp.gies,
                                section=cmp.section, holds=cmp.holds, equal=cmp.equal))
    out["scope"] = scope
    out["flags"] = rows
    return out


def cmd_parabolic(args, doc) -> dict:
    config_r = parse_int(doc.get("rank"), "rank")
    d = parse_int(doc.get("degree"), "degree")
    d2 = _delta(args, doc, "delta2", None)
    structure = parse_parabolic(doc, config_r, d2)
    flags = parse_flags(doc, config_r)
    scope = "supplied"
    if flags is None:
        span = parse_int(doc.get("degree_span", 2), "degree_span")
        flags = parabolic.coordinate_candidates(config_r, {k: range(d - span, d + span + 1) for k in range(1, config_r)})
        scope = "coordinate"
    report = parabolic.parabolic_stable(structure, d, flags)
    out: dict[str, Any] = {
        "delta2": d2,
        "parabolic_weights": list(structure.parabolic_weights),
        "a2": structure.a2,
        "admissible": structure.admissible,
        "pardeg_E": parabolic.pardeg(d, Subspace.full(config_r), structure),
    }
    out.update(_report_doc(report))
    out["scope"] = scope
    if structure.admissible:
        config = parabolic.decorated_config(structure, d)
        for row, f in zip(out["candidates"], flags):
            row["decorated"] = swamp.stability_functional(config, f, 0, d2)
        out["equivalent"] = parabolic.parabolic_equivalence_oracle(structure, d, flags)
    else:
        out["equivalent"] = "skipped (inadmissible weights)"
    return out


def cmd_level(args, doc) -> dict:
    r = parse_int(doc.get("rank"), "rank")
    d = parse_int(doc.get("degree"), "degree")
    d2 = _delta(args, doc, "delta2", None)
    out: dict[str, Any] = {"delta2": d2}
    flags = parse_flags(doc, r)
    if "seshadri" in doc:
        f = parse_matrix(doc["seshadri"].get("f"), r, "seshadri.f")
        if flags is None:
            raise EmptyCandidates("seshadri stability needs candidate flags")
        out["seshadri"] = _report_doc(level.seshadri_stable(r, d, f, d2, flags))
    if "level" in doc:
        point, dec, theta = parse_level(doc, r)
        stratum = level.omega_check(point)
        w, w_prime = level.extract_flags(point)
        block: dict[str, Any] = {
            "stratum": list(stratum), "l": list(point.l),
            "f": [[list(row) for row in m] for m in point.f],
            "w": [subspace_doc(s) for s in w], "w_prime": [subspace_doc(s) for s in w_prime],
            "q": [level.q_poly(s, theta, r) for s in range(r + 1)],
        }
        if flags is not None:
            report = level.level_stable(r, d, w, stratum, d2, theta, flags)
            block.update(_report_doc(report))
            for row, (f, value) in zip(block["candidates"], report.values):
                margin = level.ngo_dac_margin(f.degrees[0], f.x0[0], d, d2, theta, stratum, w)
                row["ngo_dac_margin"] = margin
                row["decorated"] = level.level_decorated_value(point, d, d2, theta, f)
                row["lemma_holds"] = level.lemma_identity_check(f.x0[0], f.ranks[0], w, stratum, theta)[2]
        out["level"] = block
    if len(out) == 1:
        raise ParseError("level needs a 'seshadri' or 'level' block")
    return out


def cmd_selftest(args, doc) -> tuple[dict, int]:
    seed = selfcheck.DEFAULT_SEED if args.seed is None else args.seed
    results = selfcheck.run_all(seed)
    out: dict[str, Any] = {"seed": seed}
    for res in results:
        out[res.name] = {"checked": res.checked, "failures": len(res.failures),
                         "status": "ok" if res.ok else "MISMATCH"}
        if res.failures:
            out[res.name]["first_failure"] = res.failures[0]
    ok = all(r.ok for r in results)
    out["result"] = "ok" if ok else "mismatch"
    return out, EXIT_OK if ok else EXIT_MISMATCH


COMMANDS: dict[str, Callable] = {
    "mu": cmd_mu,
    "stab": cmd_stab,
    "section-stab": cmd_section_stab,
    "walls": cmd_walls,
    "df": cmd_df,
    "gieseker": cmd_gieseker,
    "parabolic": cmd_parabolic,
    "level": cmd_level,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="decswamp", description="Exact stability checks for decorated swamps.")
    parser.add_argument("subcommand", choices=list(COMMANDS))
    parser.add_argument("--input", help="JSON configuration document")
    parser.add_argument("--delta1", help="override delta1 (p/q)")
    parser.add_argument("--delta2", help="override delta2 (p/q)")
    parser.add_argument("--n", type=int, help="twist for section stability and the Gieseker comparison")
    parser.add_argument("--seed", type=int, help="seed for selftest sweeps")
    parser.add_argument("--json", action="store_true", help="emit JSON instead of key-value lines")
    parser.add_argument("--output", help="df: write the deformed document here instead of stdout")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        if args.subcommand == "selftest":
            report, code = cmd_selftest(args, {})
            sys.stdout.write(render(report, args.json))
            return code
        if args.input is None:
            raise ParseError(f"{args.subcommand} needs --input")
        doc = load(args.input)
        report = COMMANDS[args.subcommand](args, doc)
        if args.subcommand == "df":
            text = dumps(_plain(report))
            if args.output:
                with open(args.output, "w", encoding="utf-8") as fh:
                    fh.write(text)
            else:
                sys.stdout.write(text)
            return EXIT_OK
        sys.stdout.write(render(report, args.json))
        return EXIT_OK
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except DomainError as exc:
        sys.stderr.write(f"domain error ({type(exc).__name__}): {exc}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
