"""Configuration parsing, report serialization and the command-line tool.

Config files are INI-like: ``[section]`` headers with ``key = value`` lines
and ``#`` comments.  Sections: field, model, metadata, limits.  Model
coefficients are comma-separated lists in t, lowest degree first; each entry
is an integer or a parenthesized vector ``(c0 c1 ...)`` over GF(p) for
extension fields.  Unknown sections or keys are rejected with their line
number.

Exit statuses: 0 success, 2 configuration error, 3 unsupported model,
4 at least one FAILed check.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from dataclasses import dataclass, field as dc_field

from .catalog import CATALOG, DIGESTS
from .errors import (
    BadField,
    CharTooSmall,
    EllsurfError,
    EulerNotTwelveDivisible,
    NotPrime,
    ParseError,
    PlaceBudgetExceeded,
    UnknownKey,
    UnsupportedModel,
)
from .ffield import field_make, places_enumerate
from .tatefiber import WeierstrassModel
from .verify import (
    CheckResult,
    Limits,
    Metadata,
    Report,
    compute_l,
    l_places_depth,
    run_verification,
)

SCHEMA_VERSION = "1"

_SECTIONS = {
    "field": {"p", "modulus"},
    "model": {"a1", "a2", "a3", "a4", "a6"},
    "metadata": {"mw_rank", "mw_torsion_order", "notes"},
    "limits": {"n_max", "place_degree_cap", "surplus_margin", "point_budget"},
}


@dataclass
class Config:
    p: int = None
    modulus: list | None = None
    a: dict = dc_field(default_factory=dict)  # "a1".."a6" -> list of coeffs
    mw_rank: int | None = None
    mw_torsion_order: int | None = None
    notes: str = ""
    n_max: int | None = None
    place_degree_cap: int = 8
    surplus_margin: int = 2
    point_budget: int = 25_000


def _parse_coeff(tok: str, lineno: int):
    tok = tok.strip()
    if tok.startswith("("):
        if not tok.endswith(")"):
            raise ParseError("unterminated coefficient vector", lineno)
        try:
            return [int(x) for x in tok[1:-1].split()]
        except ValueError:
            raise ParseError(f"bad coefficient vector {tok!r}", lineno)
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"bad coefficient {tok!r}", lineno)


def _split_top_level(value: str):
    out, depth, cur = [], 0, []
    for ch in value:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def parse_config(text: str) -> Config:
    cfg = Config()
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ParseError("malformed section header", lineno)
            section = line[1:-1].strip()
            if section not in _SECTIONS:
                raise UnknownKey(f"unknown section [{section}]", lineno)
            continue
        if "=" not in line:
            raise ParseError("expected key = value", lineno)
        if section is None:
            raise ParseError("key outside any section", lineno)
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _SECTIONS[section]:
            raise UnknownKey(f"unknown key {key!r} in [{section}]", lineno)
        if section == "field":
            if key == "p":
                cfg.p = _int_field(value, lineno)
            else:
                cfg.modulus = [
                    _int_field(x.strip(), lineno) for x in value.split(",")
                ]
        elif section == "model":
            cfg.a[key] = [_parse_coeff(tok, lineno) for tok in _split_top_level(value)]
        elif section == "metadata":
            if key == "notes":
                cfg.notes = value
            else:
                setattr(cfg, key, _int_field(value, lineno))
        else:
            setattr(cfg, key, _int_field(value, lineno))
    if cfg.p is None:
        raise BadField("missing field characteristic p", None)
    return cfg


def _int_field(value: str, lineno: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise BadField(f"expected an integer, got {value!r}", lineno)


def build_model(cfg: Config):
    try:
        fq = field_make(cfg.p, cfg.modulus)
    except (NotPrime, CharTooSmall) as exc:
        raise BadField(str(exc), None)

    def coeffs(key):
        entries = cfg.a.get(key, [0])
        out = []
        for e in entries:
            out.append(fq.elem(e) if isinstance(e, list) else fq.elem(e))
        return out

    model = WeierstrassModel(
        fq, coeffs("a1"), coeffs("a2"), coeffs("a3"), coeffs("a4"), coeffs("a6")
    )
    metadata = Metadata(cfg.mw_rank, cfg.mw_torsion_order, cfg.notes)
    limits = Limits(
        n_max=cfg.n_max,
        place_degree_cap=cfg.place_degree_cap,
        surplus_margin=cfg.surplus_margin,
        point_budget=cfg.point_budget,
    )
    return model, metadata, limits


# ---------------------------------------------------------------------------
# serialization


def _sv_json(sv):
    if sv is None:
        return None
    return {
        "sign": sv.sign,
        "num": str(sv.num),
        "den": str(sv.den),
        "log_power": sv.log_power,
        "order": sv.order,
    }


def _poly_json(poly):
    if poly is None:
        return None
    return [str(c) for c in poly.coeffs]


def _frac_json(x):
    if x is None:
        return None
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def report_to_dict(report: Report, cfg: Config, limits: Limits) -> dict:
    inv = report.invariants
    return {
        "schema_version": SCHEMA_VERSION,
        "q": report.q,
        "field": {"p": cfg.p, "modulus": cfg.modulus},
        "model": {k: report.model_coeffs[i] for i, k in enumerate(["a1", "a2", "a3", "a4", "a6"])},
        "flags": {
            "n_max": limits.n_max,
            "place_degree_cap": limits.place_degree_cap,
            "surplus_margin": limits.surplus_margin,
            "point_budget": limits.point_budget,
            "threads": limits.threads,
            "seed": limits.seed,
        },
        "invariants": {
            "e": inv.e,
            "chi": inv.chi,
            "b2": inv.b2,
            "deg_cond": inv.deg_cond,
            "deg_l": inv.deg_l,
            "m": inv.m,
            "alpha": inv.alpha,
            "chi_lie": inv.chi_lie,
        },
        "fibers": [
            {
                "place": f.place.label(),
                "degree": f.d_v,
                "kodaira": f.kodaira,
                "splitting": str(f.splitting),
                "m_v": f.m_v,
                "components": [[r, mu] for r, mu in f.components],
                "c_v": f.c_v,
                "f_v": f.f_v,
                "e_v": f.e_v,
                "a_v": f.a_v,
                "l_factor": _poly_json(f.l_factor),
            }
            for f in report.fibers
        ],
        "counts": [str(c) for c in (report.counts or ())],
        "p2_counts": _poly_json(report.p2_counts),
        "p2_product": _poly_json(report.p2_product),
        "l_poly": _poly_json(report.l_poly),
        "p2_star": _sv_json(report.p2_star),
        "l_star": _sv_json(report.l_star),
        "q2_star": _sv_json(report.q2_star),
        "m": report.m,
        "rho": report.rho,
        "rank": {"value": report.rank, "source": report.rank_source},
        "predicted_br": _frac_json(report.predicted_br),
        "predicted_sha": _frac_json(report.predicted_sha),
        "checks": [
            {
                "name": c.name,
                "status": c.status,
                "lhs": None if c.lhs is None else str(c.lhs),
                "rhs": None if c.rhs is None else str(c.rhs),
                "sign_agrees": c.sign_agrees,
                "details": c.details,
            }
            for c in report.checks
        ],
    }


def report_json(report: Report, cfg: Config, limits: Limits) -> str:
    return json.dumps(report_to_dict(report, cfg, limits), separators=(",", ":"))


def report_digest(json_text: str) -> str:
    return hashlib.sha256(json_text.encode()).hexdigest()


# ---------------------------------------------------------------------------
# commands


def _load_config(args) -> Config:
    if getattr(args, "catalog", None):
        if args.catalog not in CATALOG:
            raise ParseError(f"unknown catalog entry {args.catalog!r}", None)
        return parse_config(CATALOG[args.catalog].config_text)
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            return parse_config(fh.read())
    raise ParseError("need --config FILE or --catalog NAME", None)


def _apply_flags(cfg: Config, args) -> None:
    if getattr(args, "nmax", None) is not None:
        cfg.n_max = args.nmax
    if getattr(args, "place_cap", None) is not None:
        cfg.place_degree_cap = args.place_cap
    if getattr(args, "assume_rank", None) is not None:
        cfg.mw_rank = args.assume_rank


def _fiber_table(report: Report) -> str:
    lines = ["place            kodaira  split     m_v c_v f_v e_v  L_v"]
    for f in report.fibers:
        lines.append(
            f"{f.place.label():<16} {f.kodaira:<8} {str(f.splitting):<9} "
            f"{f.m_v:<3} {f.c_v:<3} {f.f_v:<3} {f.e_v:<4} {_poly_json(f.l_factor)}"
        )
    return "\n".join(lines)


def cmd_analyze(args) -> int:
    cfg = _load_config(args)
    _apply_flags(cfg, args)
    model, metadata, limits = build_model(cfg)
    limits.threads = args.threads
    limits.seed = args.seed
    report = run_verification(model, metadata, limits)
    inv = report.invariants
    print(f"q = {report.q}")
    print(
        f"e = {inv.e}  chi = {inv.chi}  b2 = {inv.b2}  deg cond = {inv.deg_cond}"
        f"  deg L = {inv.deg_l}  m = {inv.m}"
    )
    print(_fiber_table(report))
    print(f"counts: {list(report.counts)}")
    print(f"P2 (product route): {_poly_json(report.p2_product)}")
    print(f"L: {_poly_json(report.l_poly)}  rho = {report.rho}")
    return 0


def _run_full(args):
    cfg = _load_config(args)
    _apply_flags(cfg, args)
    model, metadata, limits = build_model(cfg)
    limits.threads = args.threads
    limits.seed = args.seed
    report = run_verification(model, metadata, limits)
    # place-order independence of the L-function under a seeded shuffle
    inv = report.invariants
    rng = random.Random(limits.seed)
    places = places_enumerate(model.field, l_places_depth(inv, limits))
    shuffled = places[:]
    rng.shuffle(shuffled)
    try:
        l_again = compute_l(model, report.fibers, inv, limits, shuffled)
        ok = l_again == report.l_poly
        report.checks.append(
            CheckResult(
                "l_function_order_independence",
                "PASS" if ok else "FAIL",
                _poly_json(report.l_poly),
                _poly_json(l_again),
                None,
                f"seed {limits.seed}",
            )
        )
    except EllsurfError as exc:
        report.checks.append(
            CheckResult("l_function_order_independence", "FAIL", details=str(exc))
        )
    return report, cfg, limits


def cmd_verify(args) -> int:
    report, cfg, limits = _run_full(args)
    if args.json:
        print(report_json(report, cfg, limits))
    else:
        for c in report.checks:
            extra = f"  [{c.details}]" if c.details else ""
            print(f"{c.status:<12} {c.name}{extra}")
        print(
            f"predicted orders: Br = {_frac_json(report.predicted_br)}, "
            f"Sha = {_frac_json(report.predicted_sha)}"
        )
    return 4 if report.has_failure() else 0


def cmd_report(args) -> int:
    report, cfg, limits = _run_full(args)
    print(report_json(report, cfg, limits))
    return 4 if report.has_failure() else 0


def cmd_catalog(_args) -> int:
    for name, entry in sorted(CATALOG.items()):
        print(f"{name}: {entry.summary}")
        for k, v in sorted(entry.expected.items()):
            print(f"    {k} = {v}")
        if name in DIGESTS:
            print(f"    digest = {DIGESTS[name]}")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ellsurf",
        description="Exact zeta and L-function special-value checks for "
        "elliptic fibrations over P^1 over a finite field",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in [
        ("analyze", cmd_analyze),
        ("verify", cmd_verify),
        ("report", cmd_report),
    ]:
        p = sub.add_parser(name)
        p.add_argument("--config", help="path to a config file")
        p.add_argument("--catalog", help="name of a built-in fixture")
        p.add_argument("--json", action="store_true", help="emit the JSON report")
        p.add_argument("--nmax", type=int, default=None, help="count points up to GF(q^n)")
        p.add_argument("--assume-rank", type=int, default=None, dest="assume_rank")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized cross-checks")
        p.add_argument("--place-cap", type=int, default=None, dest="place_cap")
        p.add_argument("--threads", type=int, default=0)
        p.set_defaults(fn=fn)
    pcat = sub.add_parser("catalog")
    pcat.set_defaults(fn=cmd_catalog)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, UnknownKey, BadField) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (
        UnsupportedModel,
        CharTooSmall,
        EulerNotTwelveDivisible,
        PlaceBudgetExceeded,
    ) as exc:
        print(f"unsupported model: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
