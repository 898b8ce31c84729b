"""Command-line front end.

Input files are JSON::

    {"agenda": {"propositions": [{"name": "X", "truth": [1, 0]}, ...]},
     "agents": [{"name": "Amira", "credences": [0.5, 0.1], "weight": 0.4}, ...]}

Each ``truth`` vector lists the proposition's truth value at every world.
Exit codes: 0 ok, 1 input error, 2 solver error, 3 certification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import theoremlab
from .agenda import WEIGHT_TOL, Profile, validate_agenda
from .divergence import generator
from .errors import CredpoolError, GeneralNormalizationError, SolverError
from .fixing import fix_d1, fix_d2, fix_gkl, fix_sed, project_coherent_general
from .pooling import agg_d1, agg_d2, geometric_pool, geometric_pool_unnormalized, linear_pool
from .wcap import wcap_d1, wcap_d2, wcap_general

EXIT_OK, EXIT_INPUT, EXIT_SOLVER, EXIT_CERTIFY = 0, 1, 2, 3
DIRECTIONS = {"from": 1, "to": 2}


class InputError(Exception):
    pass


# -- number formatting -----------------------------------------------------------

def fmt(x: float) -> str:
    """17 significant digits: enough to re-read every double bit-exactly."""
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise SolverError(f"refusing to emit non-finite value {x}")
    if x == 0:
        return "0.0"
    s = format(x, ".17g")
    return s if any(ch in s for ch in ".en") else s + ".0"


def _dump(obj, indent=0) -> str:
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {_dump(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if all(isinstance(v, (float, int, np.floating, np.integer)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_scalar(v) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + _dump(v, indent + 1) for v in obj) + "\n" + pad + "]"
    return _scalar(obj)


def _scalar(v) -> str:
    if isinstance(v, (bool, np.bool_)) or v is None or isinstance(v, str):
        return json.dumps(v if not isinstance(v, np.bool_) else bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return fmt(v)


def dumps(obj) -> str:
    return _dump(obj) + "\n"


# -- input ----------------------------------------------------------------------

def _number(v, where):
    if isinstance(v, str) and v.strip().endswith("%"):
        raise InputError(f"{where}: percentages are not accepted ({v!r}); give a value in [0, 1]")
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InputError(f"{where}: expected a number, got {v!r}")
    return float(v)


def parse_profile(text: str, source: str = "<input>"):
    """Parse and validate an input document; returns the Profile and any warnings."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise InputError(f"{source}: top level must be an object")
    agenda = doc.get("agenda")
    if not isinstance(agenda, dict) or not isinstance(agenda.get("propositions"), list) or not agenda["propositions"]:
        raise InputError(f"{source}: agenda.propositions must be a nonempty list")
    names, rows = [], []
    for i, p in enumerate(agenda["propositions"]):
        where = f"agenda.propositions[{i}]"
        if not isinstance(p, dict) or "name" not in p or "truth" not in p:
            raise InputError(f"{where}: needs 'name' and 'truth'")
        if not isinstance(p["truth"], list):
            raise InputError(f"{where}.truth: expected a list of 0/1")
        row = []
        for t, v in enumerate(p["truth"]):
            if v not in (0, 1) or isinstance(v, float) and v not in (0.0, 1.0):
                raise InputError(f"{where}.truth[{t}]: expected 0 or 1, got {v!r}")
            row.append(int(v))
        names.append(str(p["name"]))
        rows.append(row)
    if len({len(r) for r in rows}) != 1:
        raise InputError(f"{source}: every truth vector must have the same number of worlds")
    try:
        ag = validate_agenda(rows, names)
    except CredpoolError as exc:
        raise InputError(f"agenda: {exc}") from None

    agents = doc.get("agents")
    if not isinstance(agents, list) or not agents:
        raise InputError(f"{source}: agents must be a nonempty list")
    C, w, labels = [], [], []
    for k, a in enumerate(agents):
        where = f"agents[{k}]"
        if not isinstance(a, dict) or not isinstance(a.get("credences"), list):
            raise InputError(f"{where}: needs a 'credences' list")
        cred = [_number(v, f"{where}.credences[{j}]") for j, v in enumerate(a["credences"])]
        if len(cred) != ag.m:
            raise InputError(f"{where}.credences: {len(cred)} values for {ag.m} propositions")
        for j, v in enumerate(cred):
            if not 0.0 <= v <= 1.0:
                raise InputError(f"{where}.credences[{j}]: {v!r} is outside [0, 1]")
        C.append(cred)
        w.append(_number(a.get("weight", 1.0), f"{where}.weight"))
        labels.append(str(a.get("name", f"agent{k + 1}")))
    return _profile(ag, C, w, labels)


def _profile(agenda, C, w, labels):
    warnings_out = []
    w = np.asarray(w, dtype=float)
    if np.any(w < 0) or not np.all(np.isfinite(w)) or w.sum() <= 0:
        raise InputError(f"weights must be finite, nonnegative and not all zero, got {w.tolist()}")
    total = float(w.sum())
    if abs(total - 1.0) > 1e-9:
        warnings_out.append(f"weights sum to {total!r}; normalizing")
    if abs(total - 1.0) > WEIGHT_TOL:
        w = w / total
    try:
        return Profile(agenda, tuple(labels), np.asarray(C, dtype=float), w), warnings_out
    except CredpoolError as exc:
        raise InputError(str(exc)) from None


def profile_document(profile: Profile) -> dict:
    V = profile.agenda.truth_table
    return {
        "agenda": {"propositions": [
            {"name": name, "truth": [int(v) for v in V[i]]} for i, name in enumerate(profile.agenda.propositions)
        ]},
        "agents": [
            {"name": name, "credences": [float(v) for v in c], "weight": float(a)}
            for name, c, a in zip(profile.names, profile.credences, profile.weights)
        ],
    }


def _override_weights(profile, spec, warn):
    try:
        w = [float(s) for s in spec.split(",")]
    except ValueError:
        raise InputError(f"--weights: cannot parse {spec!r}") from None
    if len(w) != profile.n:
        raise InputError(f"--weights: {len(w)} weights for {profile.n} agents")
    p, extra = _profile(profile.agenda, profile.credences, w, profile.names)
    warn.extend(extra)
    return p


# -- commands -------------------------------------------------------------------

def _fix_one(gen, agenda, c, direction):
    if not agenda.is_partition:
        return project_coherent_general(gen, agenda, c, direction).argmin
    if gen.kind == "SED":
        return fix_sed(agenda, c)
    if gen.kind == "GKL":
        return fix_gkl(agenda, c)
    return (fix_d1 if direction == 1 else fix_d2)(gen, agenda, c).argmin


def run_fix(profile, args):
    gen, direction = generator(args.divergence), DIRECTIONS[args.direction]
    rows = [_fix_one(gen, profile.agenda, c, direction) for c in profile.credences]
    return {
        "command": "fix",
        "divergence": gen.name,
        "direction": args.direction,
        "propositions": list(profile.agenda.propositions),
        "agents": [{"name": n, "credences": r.tolist()} for n, r in zip(profile.names, rows)],
    }


def run_wcap(profile, gen, direction, tol):
    if profile.agenda.is_partition:
        return (wcap_d1 if direction == 1 else wcap_d2)(gen, profile).argmin
    return wcap_general(gen, profile, direction, tol=tol).argmin


def run_pool(profile, args, method=None):
    method = method or args.method
    gen, direction = generator(args.divergence), DIRECTIONS[args.direction]
    if method == "lp":
        out = linear_pool(profile)
    elif method == "gp":
        if args.general_normalize or not profile.agenda.is_partition:
            raise GeneralNormalizationError()
        out = geometric_pool(profile)
    elif method == "gp-minus":
        out = geometric_pool_unnormalized(profile)
    elif method == "agg":
        out = (agg_d1 if direction == 1 else agg_d2)(gen, profile)
    elif method == "wcap":
        out = run_wcap(profile, gen, direction, args.tol)
    else:
        raise InputError(f"unknown method {method!r}")
    doc = {"command": "wcap" if method == "wcap" else "pool", "method": method}
    if method in ("agg", "wcap"):
        doc.update({"divergence": gen.name, "direction": args.direction})
    doc.update({"propositions": list(profile.agenda.propositions), "credences": out.tolist()})
    return doc


def to_csv(doc) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["agent"] + doc["propositions"])
    if "agents" in doc:
        for a in doc["agents"]:
            wr.writerow([a["name"]] + [fmt(v) for v in a["credences"]])
    else:
        wr.writerow([doc["method"]] + [fmt(v) for v in doc["credences"]])
    return buf.getvalue()


def _load(args):
    path = args.input
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    profile, warn = parse_profile(text, path)
    if getattr(args, "weights", None):
        profile = _override_weights(profile, args.weights, warn)
    return profile, warn


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="credpool", description="Fix incoherent credences and pool expert opinions.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, methods=False):
        p.add_argument("input", help="profile JSON file, or - for stdin")
        p.add_argument("--divergence", default="sed", help="sed, gkl or power:<p> (default sed)")
        p.add_argument("--direction", choices=sorted(DIRECTIONS), default="from",
                       help="minimize divergence from the agents (from) or to them (to)")
        p.add_argument("--weights", help="comma-separated weights overriding the file")
        p.add_argument("--tol", type=float, default=1e-9, help="solver tolerance for iterative methods")
        p.add_argument("--format", choices=["json", "csv"], default="json")
        if methods:
            p.add_argument("--method", choices=["lp", "gp", "gp-minus", "agg", "wcap"], default="lp")
            p.add_argument("--general-normalize", action="store_true",
                           help="request a normalized geometric pool on a general agenda")

    common(sub.add_parser("fix", help="fix each agent's credences"))
    common(sub.add_parser("pool", help="aggregate the agents"), methods=True)
    common(sub.add_parser("wcap", help="weighted coherent approximation"))

    c = sub.add_parser("certify", help="numerically certify the identities")
    c.add_argument("--claims", help="comma-separated claim ids (default: all)")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--report", default="certification.json", help="where to write the JSON report")

    s = sub.add_parser("sample", help="emit a seeded random profile as JSON")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--m", type=int, default=2)
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--coherent", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out, err = sys.stdout, sys.stderr
    try:
        if args.command == "certify":
            return _certify(args, out)
        if args.command == "sample":
            out.write(dumps(profile_document(theoremlab.random_profile(args.seed, args.m, args.n, args.coherent))))
            return EXIT_OK
        generator(args.divergence)
        profile, warn = _load(args)
        for msg in warn:
            print(f"warning: {msg}", file=err)
        if args.command == "fix":
            doc = run_fix(profile, args)
        elif args.command == "wcap":
            doc = run_pool(profile, args, "wcap")
        else:
            doc = run_pool(profile, args)
    except (InputError, ValueError, GeneralNormalizationError) as exc:
        if isinstance(exc, SolverError):
            print(f"solver error: {exc}", file=err)
            return EXIT_SOLVER
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    except SolverError as exc:
        print(f"solver error: {exc}", file=err)
        return EXIT_SOLVER
    out.write(to_csv(doc) if args.format == "csv" else dumps(doc))
    return EXIT_OK


def _certify(args, out) -> int:
    claims = [c.strip() for c in args.claims.split(",")] if args.claims else None
    try:
        report = theoremlab.certify(claims, args.seed)
    except KeyError as exc:
        raise InputError(exc.args[0]) from None
    Path(args.report).write_text(dumps(report.to_dict()))
    for r in report.results:
        status = "PASS" if r.passed else "FAIL"
        out.write(f"{status} {r.claim} gap={fmt(r.gap)} tol={fmt(r.tolerance)} cases={r.cases}\n")
    out.write(f"report written to {args.report}\n")
    return EXIT_OK if report.passed else EXIT_CERTIFY


if __name__ == "__main__":
    sys.exit(main())
