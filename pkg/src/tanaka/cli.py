"""Command-line front end.

Every command produces one report document.  The report header echoes the
command, its result-affecting options and the sha256 of each canonicalized
input document; ``--jobs``, ``--format`` and file paths are deliberately
left out so that reports are byte-identical across machines and settings.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

from . import __version__
from .algebra import GradedLieAlgebra, GradedSubspace, generation_depth, validate
from .documents import (
    SCHEMA_VERSION,
    DocumentError,
    canonical_hash,
    certificate_out,
    degree_table,
    load_json,
    named_span,
    parse_algebra,
    parse_g0,
    parse_hom,
    parse_multi_index,
    parse_subspace,
    prolongation_out,
)
from .errors import InternalInconsistency, InvalidAlgebra, TanakaError
from .ode_mixed import dimension_table, symbol_from_tableau, tableau, vanishing_conditions
from .prolongation import DEFAULT_MAX_DEGREE, ProlongConstraints, prolong
from .pseudo_product import (
    F_RULE_E,
    F_RULE_E_MINUS_1,
    UNKNOWN,
    escape_diagnostic,
    finiteness_certificate,
    freeman,
    make_symbol,
    osculation_filtration,
)
from .spencer import DEFAULT_MAX_K, INCONCLUSIVE, finite_type_verdict

CACHE_ENV = "TANAKA_CACHE_DIR"

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INDEFINITE = 2
EXIT_INTERNAL = 3

log = logging.getLogger("tanaka")


class _Inputs:
    """Loads input files and remembers their canonical hashes."""

    def __init__(self):
        self.hashes = {}

    def load(self, role: str, path):
        doc = load_json(path)
        self.hashes[role] = canonical_hash(doc)
        return doc


def _algebra(inputs, path, args, graded=True):
    g = parse_algebra(inputs.load("algebra", path))
    if graded and not isinstance(g, GradedLieAlgebra):
        raise DocumentError("algebra: this command needs 'degrees'")
    if not args.no_validate:
        rep = validate(g)
        if not rep.ok:
            raise InvalidAlgebra("algebra failed validation", rep)
    return g


# ---------------------------------------------------------------------------
# commands: each returns (options echo, result, definite)
# ---------------------------------------------------------------------------


def cmd_validate(args, inputs):
    g = parse_algebra(inputs.load("algebra", args.algebra))
    rep = validate(g)
    result = rep.to_dict(g.names)
    if rep.ok and isinstance(g, GradedLieAlgebra):
        result["dims_by_degree"] = degree_table(g.dims_by_degree())
        result["generation_depth"] = generation_depth(g)
    return {}, result, True


def cmd_prolong(args, inputs):
    g = _algebra(inputs, args.algebra, args)
    if args.sub and args.g0:
        raise DocumentError("--sub and --g0 are mutually exclusive")
    if args.g0:
        constraints = ProlongConstraints.prescribed_g0(parse_g0(inputs.load("g0", args.g0), g.dim))
    elif args.sub:
        subs = [
            parse_subspace(inputs.load(f"sub{n + 1}", p), g.dim, f"sub{n + 1}")
            for n, p in enumerate(args.sub)
        ]
        constraints = ProlongConstraints.subalgebra_list(subs)
    else:
        constraints = ProlongConstraints.universal()
    r = prolong(g, constraints, args.max_degree)
    opts = {"max_degree": args.max_degree, "with_basis": args.with_basis}
    return opts, prolongation_out(r, args.with_basis), r.terminated


def cmd_spencer(args, inputs):
    a = parse_hom(inputs.load("hom", args.hom))
    v = finite_type_verdict(a, args.max_k, args.rank1_trials, args.seed)
    p = v.prolongation
    result = {
        "dimV": a.dimV,
        "dimW": a.dimW,
        "dim_A": a.dim,
        "dims": [{"k": k, "dim": n} for k, n in enumerate(p.dims)],
        "status": p.status,
        "stop_k": p.stop_k,
        "max_k": p.max_k,
        "verdict": v.verdict,
        "rank_one_search": {
            "heuristic": True,
            "trials": args.rank1_trials,
            "seed": args.seed,
            "witness": v.witness.to_dict() if v.witness else None,
        },
    }
    opts = {"max_k": args.max_k, "rank1_trials": args.rank1_trials, "seed": args.seed}
    return opts, result, v.verdict != INCONCLUSIVE


def cmd_nondegen(args, inputs):
    g = _algebra(inputs, args.algebra, args)
    e = parse_subspace(inputs.load("e", args.e), g.dim, "e")
    f = parse_subspace(inputs.load("f", args.f), g.dim, "f")
    triple = make_symbol(g, [GradedSubspace(g, e), GradedSubspace(g, f)])
    cert = finiteness_certificate(triple, args.max_degree)
    esc = escape_diagnostic(triple)
    result = {
        "e": {"basis": named_span(g, e), "dims_by_degree": degree_table(triple.e.dims_by_degree())},
        "f": {"basis": named_span(g, f), "dims_by_degree": degree_table(triple.f.dims_by_degree())},
        "nondegenerate": cert.levi.nondegenerate,
        "escape_diagnostic": {
            "left": named_span(g, esc.left),
            "right": named_span(g, esc.right),
        },
        "certificate": certificate_out(cert),
    }
    return {"max_degree": args.max_degree}, result, cert.verdict != UNKNOWN


def _e_filtration(g, E1):
    terms = [E1]
    while True:
        nxt = terms[-1] + g.bracket_space(E1, terms[-1])
        if nxt == terms[-1]:
            return terms
        terms.append(nxt)


def cmd_freeman(args, inputs):
    g = _algebra(inputs, args.algebra, args, graded=False)
    E = [
        parse_subspace(inputs.load(f"E{n + 1}", p), g.dim, f"E^-{n + 1}")
        for n, p in enumerate(args.e_filtration)
    ]
    if len(E) == 1:
        E = _e_filtration(g, E[0])
    F = parse_subspace(inputs.load("F", args.f), g.dim, "F")
    state = freeman(g, E, F, args.f_rule)
    result = {
        "mu": state.mu,
        "E_dims": list(state.E_dims),
        "E0_zero": state.E0_zero,
        "F_dims": list(state.F_dims),
        "nu": state.nu,
    }
    definite = True
    if state.E0_zero and state.nu is not None:
        full, triple, D_terms = osculation_filtration(state)
        cert = finiteness_certificate(triple, args.max_degree)
        result["osculation"] = {
            "D_dims": [t.dim for t in D_terms],
            "filtration_dims": list(full.dims),
            "symbol": triple.m.to_document(),
            "e": named_span(triple.m, triple.e),
            "f": named_span(triple.m, triple.f),
            "certificate": certificate_out(cert),
        }
        definite = cert.verdict != UNKNOWN
    else:
        result["osculation"] = None
    return {"f_rule": args.f_rule, "max_degree": args.max_degree}, result, definite


def _tableau_rows(t):
    return [
        {"row": i + 1, "offset": t.offsets[i], "length": t.kappa[i], "degrees": [-c for c in t.columns(i)]}
        for i in range(t.n)
    ]


def cmd_ode(args, inputs):
    t = tableau(args.kappa, args.lam)
    sym = symbol_from_tableau(t)
    cert = finiteness_certificate(sym.triple, args.max_degree)
    m = sym.m
    result = {
        "kappa": list(t.kappa),
        "lambda": list(t.lam),
        "normalized_lambda": list(t.normalized_lambda),
        "flagged_single_row": t.flagged,
        "tableau": _tableau_rows(t),
        "complete_column": t.complete_column,
        "preserved_projection": list(t.preserved_projection),
        "symbol": {
            "dim": m.dim,
            "dims_by_degree": degree_table(m.dims_by_degree()),
            "generation_depth": generation_depth(m),
            "f": named_span(m, sym.triple.f),
        },
        "vanishing_conditions": [
            {"equation": i, "function": r, "order": s} for i, (r, s) in vanishing_conditions(t.kappa, t.lam)
        ],
        "certificate": certificate_out(cert),
    }
    opts = {"kappa": list(t.kappa), "lambda": list(t.lam), "max_degree": args.max_degree}
    return opts, result, cert.verdict != UNKNOWN


def cmd_ode_table(args, inputs):
    rows = dimension_table(args.kappa, args.max_degree, args.jobs)
    out = []
    for r in rows:
        p = r.certificate.prolongation
        out.append({
            "lambda": list(r.lam),
            "offsets": list(r.tableau.offsets),
            "preserved_projection": list(r.projection),
            "nonnegative_dims": list(p.nonnegative_dims),
            "total_dim": r.total_dim,
            "status": p.status,
            "verdict": r.certificate.verdict,
        })
    opts = {"kappa": list(args.kappa), "max_degree": args.max_degree}
    return opts, {"rows": out}, all(r.certificate.verdict != UNKNOWN for r in rows)


COMMANDS = {
    "validate": cmd_validate,
    "prolong": cmd_prolong,
    "spencer": cmd_spencer,
    "nondegen": cmd_nondegen,
    "freeman": cmd_freeman,
    "ode": cmd_ode,
    "ode-table": cmd_ode_table,
}


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _multi(where):
    def parse(text):
        try:
            return parse_multi_index(text, where)
        except DocumentError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None

    return parse


def _positive(text):
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--cache-dir", default=os.environ.get(CACHE_ENV), help=f"report cache (default ${CACHE_ENV})")
    common.add_argument("--jobs", type=_positive, default=1, help="worker processes for independent subproblems")
    common.add_argument("--no-validate", action="store_true", help="skip grading/Jacobi validation of inputs")
    common.add_argument("--require-verdict", action="store_true",
                        help="exit 2 unless the result is definite (Terminated / certified)")
    common.add_argument("--timing", action="store_true", help="print wall time to stderr")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="tanaka", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version",
                        version=f"tanaka {__version__} (report schema {SCHEMA_VERSION})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check grading and Jacobi identity")
    p.add_argument("algebra")

    p = sub.add_parser("prolong", parents=[common], help="universal or constrained Tanaka prolongation")
    p.add_argument("algebra")
    p.add_argument("--sub", action="append", default=[], metavar="FILE", help="graded subalgebra to preserve")
    p.add_argument("--g0", metavar="FILE", help="prescribed degree-0 derivations")
    p.add_argument("--max-degree", type=_positive, default=DEFAULT_MAX_DEGREE)
    p.add_argument("--with-basis", action="store_true", help="include basis maps of each component")

    p = sub.add_parser("spencer", parents=[common], help="Spencer prolongations and finite-type verdict")
    p.add_argument("hom")
    p.add_argument("--max-k", type=_positive, default=DEFAULT_MAX_K)
    p.add_argument("--rank1-trials", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("nondegen", parents=[common], help="Levi kernels and finiteness certificate")
    p.add_argument("algebra")
    p.add_argument("--e", required=True, metavar="FILE")
    p.add_argument("--f", required=True, metavar="FILE")
    p.add_argument("--max-degree", type=_positive, default=DEFAULT_MAX_DEGREE)

    p = sub.add_parser("freeman", parents=[common], help="Freeman filtrations and osculation symbol")
    p.add_argument("algebra")
    p.add_argument("--e-filtration", nargs="+", required=True, metavar="FILE",
                   help="E^-1, E^-2, ... (a single file is completed by brackets)")
    p.add_argument("--f", required=True, metavar="FILE")
    p.add_argument("--f-rule", choices=(F_RULE_E_MINUS_1, F_RULE_E), default=F_RULE_E_MINUS_1)
    p.add_argument("--max-degree", type=_positive, default=DEFAULT_MAX_DEGREE)

    p = sub.add_parser("ode", parents=[common], help="tableau, symbol and certificate for one (kappa, lambda)")
    p.add_argument("--kappa", type=_multi("--kappa"), required=True)
    p.add_argument("--lambda", dest="lam", type=_multi("--lambda"), required=True)
    p.add_argument("--max-degree", type=_positive, default=DEFAULT_MAX_DEGREE)

    p = sub.add_parser("ode-table", parents=[common], help="dimension table over all lambda for a kappa")
    p.add_argument("--kappa", type=_multi("--kappa"), required=True)
    p.add_argument("--max-degree", type=_positive, default=DEFAULT_MAX_DEGREE)
    return parser


# ---------------------------------------------------------------------------
# report assembly, cache, rendering
# ---------------------------------------------------------------------------


def _header(command, opts, inputs, no_validate):
    opts = dict(opts)
    if no_validate:
        opts["no_validate"] = True
    return {
        "schema_version": SCHEMA_VERSION,
        "command": {"name": command, "options": opts},
        "inputs": dict(sorted(inputs.hashes.items())),
    }


def _dumps(report) -> str:
    return json.dumps(report, indent=2) + "\n"


def _cache_path(cache_dir, header) -> Path:
    return Path(cache_dir) / f"{canonical_hash(header)}.json"


def _render_text(value, indent=0) -> list:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, dict) and _flat_dict(v):
                lines.append(pad + "- " + ", ".join(f"{k}={_scalar(x)}" for k, x in v.items()))
            elif isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines.extend(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(value))
    return lines


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _flat_dict(v) -> bool:
    return all(not isinstance(x, (dict, list)) or _flat(x) for x in v.values())


def _scalar(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def _tableau_drawing(result) -> list:
    rows = result.get("tableau")
    if not rows:
        return []
    out = ["tableau drawing (box = degree):"]
    for r in rows:
        cells = "    " * r["offset"] + "".join(f"{d:>3} " for d in r["degrees"])
        out.append("  " + cells.rstrip())
    return out


def render(report, fmt) -> str:
    if fmt == "json":
        return _dumps(report)
    lines = _render_text(report) + _tableau_drawing(report["result"])
    return "\n".join(lines) + "\n"


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; here 2 means an indefinite verdict
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    started = time.perf_counter()
    inputs = _Inputs()
    try:
        opts, result, definite = COMMANDS[args.command](args, inputs)
    except InvalidAlgebra as exc:
        if args.command != "validate":
            print(f"error: {exc}", file=stderr)
        report = {**_header(args.command, {}, inputs, args.no_validate), "definite": True,
                  "result": exc.report.to_dict()}
        stdout.write(render(report, args.format))
        return EXIT_INPUT
    except InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=stderr)
        return EXIT_INTERNAL
    except (DocumentError, TanakaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT

    header = _header(args.command, opts, inputs, args.no_validate)
    report = None
    if args.cache_dir:
        path = _cache_path(args.cache_dir, header)
        if path.exists():
            log.info("cache hit %s", path.name)
            report = json.loads(path.read_text(encoding="utf-8"))
    if report is None:
        report = {**header, "definite": definite, "result": result}
        if args.cache_dir:
            Path(args.cache_dir).mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(_dumps(report), encoding="utf-8")
            tmp.replace(path)
    stdout.write(render(report, args.format))
    if args.timing:
        print(f"elapsed {time.perf_counter() - started:.3f}s", file=stderr)

    if args.command == "validate" and not report["result"]["valid"]:
        return EXIT_INPUT
    if args.require_verdict and not report["definite"]:
        return EXIT_INDEFINITE
    return EXIT_OK


def main() -> None:
    sys.exit(run())
