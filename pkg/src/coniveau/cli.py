"""Command-line front end: scenario loading, verification runs, tables.

Exit codes: 0 = all requested certificates verified / tables consistent,
1 = a mathematical check failed (uncertified verdict, rank mismatch, failed
regularity), 2 = input or configuration error.  Reports are deterministic:
identical inputs produce byte-identical output (no timestamps, stable field
order).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import certificates as certs
from . import motivic
from .fp import DegreeCapError, FpAlgebraError
from .milnor import QAction, validate_q_axioms
from .parser import ParseError, parse_presentation

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_MATH_FAIL = 1
EXIT_USAGE = 2

_FAMILY_PARAMS = {
    "elementary": ("p", "n"),
    "so": ("m",),
    "g2": (),
    "simply-connected": ("p",),
    "extraspecial-e": ("n",),
    "extraspecial-d": ("n",),
    "pgl": ("p",),
}


class UsageError(Exception):
    pass


def _resolve_scenario(args):
    sel = args.scenario
    if os.sep in sel or sel.endswith(".pres") or os.path.exists(sel):
        return _load_user_scenario(sel)
    if sel not in _FAMILY_PARAMS:
        raise UsageError(f"unknown scenario {sel!r} (see `coniveau list`)")
    params = {}
    for key in _FAMILY_PARAMS[sel]:
        value = getattr(args, key, None)
        if value is None:
            raise UsageError(f"scenario {sel!r} requires --{key}")
        params[key] = value
    if sel == "extraspecial-e" and getattr(args, "p", None):
        params["p"] = args.p
    try:
        return certs.get_scenario(sel, **params)
    except (certs.ScenarioError, ValueError) as exc:
        raise UsageError(str(exc))


def _load_user_scenario(path: str) -> certs.Scenario:
    search = [os.getcwd()] + os.environ.get("CONIVEAU_SCENARIO_PATH", "").split(os.pathsep)
    resolved = None
    for base in search:
        cand = os.path.join(base, path) if base else path
        if os.path.exists(cand):
            resolved = cand
            break
    if resolved is None:
        raise UsageError(f"scenario file not found: {path}")
    with open(resolved, "r", encoding="utf-8") as fh:
        text = fh.read()
    data = parse_presentation(text)
    pres = data.presentation
    action = None
    if data.max_q_index >= 0:
        table = {(i, g): v for (i, g), v in data.q_table.items()}
        action = QAction(pres, table=table, max_index=data.max_q_index)
        report = validate_q_axioms(action)
        if not report.ok:
            raise UsageError(
                f"operation table fails validation: {report.first_counterexample()}"
            )
    stable = None
    stable_top = 0
    if data.n1:
        stable = pres.quotient(list(data.n1.values()))
        stable_top = min(pres.degree_cap, 16)
    return certs.Scenario(
        name=os.path.basename(resolved),
        kind="user",
        group="user scenario",
        prime=pres.prime,
        presentation=pres,
        detect_pres=pres,
        q_action=action,
        aliases=data.aliases,
        chern_flags=data.chern,
        stable_pres=stable,
        stable_top=stable_top,
        stable_note="quotient by the declared coniveau classes",
        max_search_index=max(data.max_q_index, 0),
    )


def _scenario_header(s) -> dict:
    if isinstance(s, certs.QModuleScenario):
        return {"name": s.name, "prime": s.p, "hash": f"pgl-{s.p}"}
    return {
        "name": s.name,
        "group": s.group,
        "prime": s.prime,
        "cap": s.presentation.degree_cap,
        "hash": s.content_hash(),
    }


# -- commands -------------------------------------------------------------------


def _cmd_list(args) -> tuple[int, dict]:
    entries = []
    for key in certs.BUILTIN_DEFAULTS:
        s = certs.builtin_scenarios()[key]()
        entry = _scenario_header(s)
        entries.append(entry)
    body = {
        "scenarios": entries,
        "quadrics": [f"rost --n {n}" for n in (2, 3, 4)],
    }
    return EXIT_OK, body


def _cmd_verify(args) -> tuple[int, dict]:
    scenario = _resolve_scenario(args)
    sequence = _parse_indices(args.I) if args.I else None
    if isinstance(scenario, certs.QModuleScenario):
        cert = certs.pgl_detect(scenario)
    elif args.element:
        if sequence is None:
            raise UsageError("--element requires --I")
        cert = certs.detect(scenario, args.element, sequence)
    else:
        if not scenario.default_target[0]:
            raise UsageError("scenario has no default target; pass --element and --I")
        cert = certs.default_certificate(scenario, sequence)
    body = {"scenario": _scenario_header(scenario), "certificate": cert.to_dict()}
    ok = cert.verdict == certs.NOT_IN_STRONG_CONIVEAU
    return (EXIT_OK if ok else EXIT_MATH_FAIL), body


def _cmd_dh_table(args) -> tuple[int, dict]:
    scenario = _resolve_scenario(args)
    if isinstance(scenario, certs.QModuleScenario):
        cert = certs.pgl_detect(scenario)
        table = {
            "scenario": scenario.name,
            "bound_kind": "lower-bound",
            "rows": [
                {
                    "label": "Q0u2",
                    "degree": 3,
                    "witness": [1],
                    "certificate": cert.to_dict(),
                }
            ],
        }
        return EXIT_OK, {"scenario": _scenario_header(scenario), "dh_table": table}
    if not scenario.dh_candidates:
        raise UsageError(f"scenario {scenario.name} has no candidate family")
    table = certs.dh_table(scenario, cap=args.cap)
    return EXIT_OK, {"scenario": _scenario_header(scenario), "dh_table": table.to_dict()}


def _cmd_stable_quotient(args) -> tuple[int, dict]:
    scenario = _resolve_scenario(args)
    if isinstance(scenario, certs.QModuleScenario):
        raise UsageError("the label-module scenario has no stable quotient")
    try:
        sq = certs.stable_quotient(scenario)
    except certs.ScenarioError as exc:
        raise UsageError(str(exc))
    return EXIT_OK, {"scenario": _scenario_header(scenario), "stable_quotient": sq.to_dict()}


def _cmd_hilbert(args) -> tuple[int, dict]:
    scenario = _resolve_scenario(args)
    if isinstance(scenario, certs.QModuleScenario):
        raise UsageError("the label-module scenario has no graded presentation")
    pres = scenario.presentation
    cap = args.cap if args.cap is not None else min(pres.degree_cap, 12)
    if cap > pres.degree_cap:
        raise UsageError(f"cap {cap} exceeds the scenario maximum {pres.degree_cap}")
    series = pres.hilbert_series(cap)
    return EXIT_OK, {
        "scenario": _scenario_header(scenario),
        "hilbert": {"cap": cap, "dimensions": series},
    }


def _cmd_qop(args) -> tuple[int, dict]:
    scenario = _resolve_scenario(args)
    if isinstance(scenario, certs.QModuleScenario):
        raise UsageError("use `verify` for the label-module scenario")
    if scenario.q_action is None:
        raise UsageError("scenario carries no operation table")
    if not args.element or args.I is None:
        raise UsageError("qop requires --element and --I")
    sequence = _parse_indices(args.I)
    try:
        e = scenario.resolve(args.element)
        value, trail = scenario.q_action.apply_sequence(sequence, e)
    except DegreeCapError as exc:
        raise UsageError(str(exc))
    return EXIT_OK, {
        "scenario": _scenario_header(scenario),
        "qop": {
            "element": str(e),
            "sequence": list(sequence),
            "value": str(value),
            "intermediates": [str(t) for t in trail],
        },
    }


def _cmd_rost(args) -> tuple[int, dict]:
    n = args.n
    if n is None or n < 2:
        raise UsageError("rost requires --n >= 2")
    force = tuple(_parse_indices(args.force_n1)) if args.force_n1 else ()
    body = quadric_report(n, force)
    ok = body["dh_check"]["verdict"] == "DH=0" and body["rank_check"] == "ok"
    return (EXIT_OK if ok else EXIT_MATH_FAIL), body


def quadric_report(n: int, force=()) -> dict:
    rost = motivic.rost_etale_ring(n)
    quadric = motivic.quadric_etale_ring(n)  # validates ranks, raises on mismatch
    unram = motivic.unramified_quotient_quadric(n)
    check = motivic.dh_quadric_check(n, force_n1=force)
    degrees = list(range(0, quadric.max_degree() + 1, 2))
    return {
        "n": n,
        "rost_ring": _ring_dict(rost),
        "quadric_ring": _ring_dict(quadric),
        "rank_check": "ok",
        "rank_table": [
            {
                "degree": d,
                "free_rank": quadric.ranks(d)[0],
                "torsion_dim": quadric.ranks(d)[1],
                "flags": sorted(
                    name
                    for name, deg in quadric.free_basis + quadric.torsion_basis
                    if deg == d and name in quadric.algebraic
                ),
            }
            for d in degrees
        ],
        "unramified_quotient": {
            "free": [list(b) for b in unram.free_basis],
            "torsion": [list(b) for b in unram.torsion_basis],
        },
        "n1_checks": [
            {
                "degree": v.s,
                "in_n1": v.in_n1,
                "candidate": v.candidate,
                "obstruction": v.obstruction,
                "reason": v.reason,
            }
            for v in check.torsion_checks
        ],
        "dh_check": {"verdict": check.verdict, "detail": list(check.detail)},
    }


def _ring_dict(ring: motivic.EtaleRing) -> dict:
    return {
        "free": [list(b) for b in ring.free_basis],
        "torsion": [list(b) for b in ring.torsion_basis],
        "relations": list(ring.relations),
        "minimal_relations": list(ring.minimal_relations),
        "algebraic": sorted(ring.algebraic),
        "notes": list(ring.notes),
    }


def _cmd_report(args) -> tuple[int, dict]:
    if not args.all:
        raise UsageError("report currently supports --all only")
    failures = []
    sections = []
    for key in sorted(certs.BUILTIN_DEFAULTS):
        scenario = certs.builtin_scenarios()[key]()
        section = {"scenario": _scenario_header(scenario)}
        if isinstance(scenario, certs.QModuleScenario):
            cert = certs.pgl_detect(scenario)
            section["verify"] = cert.to_dict()
            if cert.verdict != certs.NOT_IN_STRONG_CONIVEAU:
                failures.append(f"{key}: flagship certificate not issued")
        else:
            cert = certs.default_certificate(scenario)
            section["verify"] = cert.to_dict()
            if cert.verdict != certs.NOT_IN_STRONG_CONIVEAU:
                failures.append(f"{key}: flagship certificate not issued")
            if scenario.dh_candidates:
                table = certs.dh_table(scenario)
                section["dh_table"] = table.to_dict()
            if scenario.stable_pres is not None:
                sq = certs.stable_quotient(scenario)
                section["stable_quotient"] = sq.to_dict()
                if sq.declared is not None:
                    flat = tuple(b for layer in sq.basis for b in layer)
                    if flat != sq.declared:
                        failures.append(f"{key}: stable quotient differs from declared basis")
            if scenario.restriction is None:
                hcap = min(scenario.presentation.degree_cap, 10)
                section["hilbert"] = scenario.presentation.hilbert_series(hcap)
        sections.append(section)

    regular, _, pair = certs.comparison_regular_pair(3, 40)
    if not regular.regular:
        failures.append("comparison kernel pair is not regular through degree 40")
    extraspecial = {
        "regular_pair": {
            "elements": [str(g) for g in pair],
            "verdict": regular.describe(),
            "quotient_series": list(regular.quotient_series),
        }
    }

    quadrics = []
    for n in (2, 3, 4):
        try:
            body = quadric_report(n)
        except motivic.RankMismatchError as exc:
            failures.append(str(exc))
            continue
        if body["dh_check"]["verdict"] != "DH=0":
            failures.append(f"quadric n={n}: {body['dh_check']['verdict']}")
        quadrics.append(body)

    body = {
        "sections": sections,
        "extraspecial_checks": extraspecial,
        "quadrics": quadrics,
        "failures": failures,
        "status": "ok" if not failures else "failed",
    }
    return (EXIT_OK if not failures else EXIT_MATH_FAIL), body


# -- rendering ---------------------------------------------------------------------


def _render(body: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(body, indent=2) + "\n"
    return _markdown(body)


def _item_title(x: dict) -> str:
    for key in ("label", "name", "element"):
        if isinstance(x.get(key), str):
            return x[key]
    scenario = x.get("scenario")
    if isinstance(scenario, dict) and isinstance(scenario.get("name"), str):
        return scenario["name"]
    if isinstance(x.get("n"), int):
        return f"n={x['n']}"
    return "entry"


def _markdown(body: dict, level: int = 1) -> str:
    lines: list[str] = []

    def emit(obj, title, depth):
        if isinstance(obj, dict):
            if title:
                lines.append("#" * min(depth, 6) + " " + title)
            for k, v in obj.items():
                emit(v, k, depth + 1)
        elif isinstance(obj, list):
            if title:
                lines.append("#" * min(depth, 6) + " " + title)
            if obj and all(isinstance(x, dict) for x in obj):
                keys = sorted({k for x in obj for k in x if not isinstance(x[k], (dict, list))})
                if keys:
                    lines.append("| " + " | ".join(keys) + " |")
                    lines.append("|" + "---|" * len(keys))
                    for x in obj:
                        lines.append(
                            "| " + " | ".join(str(x.get(k, "")) for k in keys) + " |"
                        )
                for x in obj:
                    nested = {k: v for k, v in x.items() if isinstance(v, (dict, list)) and v}
                    if nested:
                        emit(nested, _item_title(x), depth + 1)
            else:
                lines.append(", ".join(str(x) for x in obj) if obj else "(empty)")
        else:
            lines.append(f"- **{title}**: {obj}")

    emit(body, "report", level)
    return "\n".join(lines) + "\n"


# -- entry point --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "markdown"), default="json")
    common.add_argument("--output", help="write the report to a file instead of stdout")

    parser = argparse.ArgumentParser(
        prog="coniveau",
        description="exact mod-p coniveau / stable-rationality certificates",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list built-in scenarios", parents=[common])

    def scenario_args(p, with_element=False):
        p.add_argument("scenario", help="family name or presentation file")
        p.add_argument("--p", type=int, help="prime parameter")
        p.add_argument("--n", type=int, help="rank parameter")
        p.add_argument("--m", type=int, help="rank parameter (special orthogonal)")
        if with_element:
            p.add_argument("--I", help="comma-separated operation indices")
            p.add_argument("--element", help="class name or polynomial expression")

    scenario_args(
        sub.add_parser("verify", help="issue a certificate", parents=[common]),
        with_element=True,
    )
    p = sub.add_parser("dh-table", help="emit the candidate certificate table", parents=[common])
    scenario_args(p)
    p.add_argument("--cap", type=int, help="skip candidates above this degree")
    scenario_args(
        sub.add_parser("stable-quotient", help="declared coniveau quotient", parents=[common])
    )
    p = sub.add_parser("hilbert", help="graded dimensions of the scenario ring", parents=[common])
    scenario_args(p)
    p.add_argument("--cap", type=int)
    scenario_args(
        sub.add_parser("qop", help="apply an operation sequence", parents=[common]),
        with_element=True,
    )
    p = sub.add_parser("rost", help="quadric / motive reconstruction and checks", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--force-n1", dest="force_n1", help="testing hook: force membership")
    p = sub.add_parser("report", help="full reproduction run", parents=[common])
    p.add_argument("--all", action="store_true")
    return parser


_COMMANDS = {
    "list": _cmd_list,
    "verify": _cmd_verify,
    "dh-table": _cmd_dh_table,
    "stable-quotient": _cmd_stable_quotient,
    "hilbert": _cmd_hilbert,
    "qop": _cmd_qop,
    "rost": _cmd_rost,
    "report": _cmd_report,
}


def _parse_indices(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in str(text).split(",") if x != "")
    except ValueError:
        raise UsageError(f"bad index list {text!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    body = {"schema_version": SCHEMA_VERSION, "command": args.command}
    try:
        code, payload = _COMMANDS[args.command](args)
        body.update(payload)
    except UsageError as exc:
        body["error"] = str(exc)
        code = EXIT_USAGE
    except ParseError as exc:
        body["error"] = f"parse error: {exc}"
        code = EXIT_USAGE
    except motivic.RankMismatchError as exc:
        body["error"] = str(exc)
        code = EXIT_MATH_FAIL
    except (FpAlgebraError, motivic.MotivicError, ValueError) as exc:
        body["error"] = str(exc)
        code = EXIT_USAGE
    body["exit_code"] = code
    text = _render(body, args.format)
    if args.output:
        target = args.output
        outdir = os.environ.get("CONIVEAU_OUTPUT_DIR")
        if outdir and not os.path.isabs(target):
            target = os.path.join(outdir, target)
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
