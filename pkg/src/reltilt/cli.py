"""Command line front end: reltilt <command> <file.bqa> [options].

Exit codes: 0 when the property holds, 1 when it fails, 2 on errors.
"""

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from . import __version__
from . import classify as cl
from .bqa import is_kronecker, kronecker_j, kronecker_r, load
from .errors import NotAdmissible, ReltiltError
from .modules import DEFAULT_CAP, hom_basis, hom_dim, is_injective, is_projective, tau
from .quiver import ModuleMap, direct_sum, kernel

SCHEMA = "reltilt-report/1"
KRONECKER_DISCLAIMER = ("Only finite statements for n <= N are checked. The claim that "
                        "gen_F(R(1:1,1)) is not a preenveloping class quantifies over "
                        "infinitely many modules and is not decided by this tool.")
COMMANDS = ("catalog", "resolve", "presilt", "tilt", "genf", "torsion", "admissible",
            "verify-tilting", "verify-special", "kronecker-shard")


def _dims(m):
    return list(m.dims)


def _names(ws, indices):
    return ws.names(indices)


# -- commands ------------------------------------------------------------------------------

def cmd_catalog(ws, args):
    cat, ctx = ws.catalog, ws.ctx
    xs = set(ctx.x_indices())
    rows = []
    for k, e in enumerate(cat.entries):
        t = tau(e)
        rows.append({
            "name": cat.names[k], "dims": _dims(e),
            "projective": is_projective(e), "injective": is_injective(e),
            "in_generator": k in xs,
            "tau": None if t.dim == 0 else (ws.name_of(t) or _dims(t)),
        })
    return {"entries": rows}


def cmd_resolve(ws, args):
    m = ws.resolve(args.module)
    ctx = ws.ctx
    steps = ctx.resolution(m, args.length)
    terms = [{"degree": -k, "summands": [ctx.names[i] for i in s.indices], "dims": _dims(s.term),
              "syzygy_dims": _dims(s.syzygy)} for k, s in enumerate(steps)]
    done = (not steps) or steps[-1].syzygy.dim == 0
    return {"module": args.module, "terms": terms, "terminated": done,
            "pd_F": (len(steps) - 1 if steps else 0) if done else None}


def cmd_presilt(ws, args):
    v = cl.is_f_presilting(ws.ctx, ws.resolve(args.module))
    res = {"module": args.module, "via_prop_b": v.via_prop_b, "via_gamma": v.via_gamma,
           "via_homotopy": v.via_homotopy, "agreed": v.agreed}
    if not v.agreed:
        raise ArithmeticError(f"presilting oracles disagree on {args.module}: {tuple(v)}")
    res["holds"] = v.via_prop_b
    return res


def cmd_tilt(ws, args):
    v = cl.is_f_tilting(ws.ctx, ws.resolve(args.module))
    return {"module": args.module, "holds": v.holds, "pd_F_at_most_1": v.pd_ok,
            "self_orthogonal": v.ext_ok, "reason": v.reason,
            "coresolutions": [{"middle_dims": _dims(t.f.target), "cokernel_dims": _dims(t.g.target)}
                              for t in v.coresolutions]}


def cmd_genf(ws, args):
    idx = ws.ctx.gen_f_closure(ws.resolve(args.module))
    return {"module": args.module, "closure": _names(ws, idx)}


def _hasse(classes):
    sets = [frozenset(c) for c in classes]
    edges = []
    for i, a in enumerate(sets):
        for j, b in enumerate(sets):
            if a < b and not any(a < c < b for c in sets):
                edges.append([i, j])
    return edges


def cmd_torsion(ws, args):
    filters = tuple(args.filter or ["all"])
    classes = cl.enumerate_torsion_classes(ws.ctx, filters)
    return {"filters": list(filters), "count": len(classes),
            "classes": [_names(ws, c) for c in classes], "hasse_edges": _hasse(classes)}


def cmd_admissible(ws, args):
    v = cl.is_f_admissible(ws.ctx)
    return {"holds": v.holds, "counterexample": _names(ws, v.counterexample),
            "minimal_counterexamples": [_names(ws, c) for c in v.all_counterexamples]}


def _theorem(ws, rep):
    return {"left": [_names(ws, s) for s in rep.left],
            "right": [_names(ws, s) for s in rep.right],
            "mapping": [{"module": _names(ws, s), "gen_F": _names(ws, rep.mapping[s])}
                        for s in rep.left],
            "holds": rep.bijection_holds,
            "witnesses": [[str(x) for x in w] for w in rep.witnesses]}


def cmd_verify_tilting(ws, args):
    return _theorem(ws, cl.verify_theorem_tilting(ws.ctx))


def cmd_verify_special(ws, args):
    try:
        rep = cl.verify_theorem_special(ws.ctx)
    except NotAdmissible as exc:
        raise NotAdmissible(exc.counterexample,
                            "not F-admissible; counterexamples: " +
                            "; ".join("+".join(_names(ws, c)) for c in exc.counterexample)) from None
    return _theorem(ws, rep)


def kronecker_shard(ws, n_max):
    alg, ctx = ws.alg, ws.ctx
    if not is_kronecker(alg):
        raise ReltiltError("kronecker-shard needs the Kronecker quiver")
    r11 = kronecker_r(alg, 1, 1, 1)
    r10 = kronecker_r(alg, 1, 0, 1)
    s2 = alg.simple(alg.quiver.vertices[1])
    rows = []
    for n in range(n_max + 1):
        j = kronecker_j(alg, n)
        basis = hom_basis(r11, j)
        # n+1 copies of R(1:1,1); the Hom basis fills the first copies, the rest map by zero
        s = direct_sum([r11] * (n + 1), alg)
        g = ModuleMap.zero(s.module, j)
        for k, h in enumerate(basis[:n + 1]):
            g = g + (h @ s.projections[k])
        ker, incl = kernel(g)
        exact = ctx.is_f_exact(incl, g) is not None
        rows.append({
            "n": n, "J_dims": _dims(j), "dim_hom_R11_J": len(basis),
            "surjective": g.is_surjective(), "kernel_dims": _dims(ker),
            "kernel_is_S2": ker.dims == s2.dims,
            "f_exact": exact,
            "genF_R11_contains_J": ctx.gen_f_contains(r11, j),
        })
    hom0 = hom_dim(r10, r11)
    not_in = not ctx.gen_f_contains(r11, r10)
    holds = hom0 == 0 and not_in and all(r["f_exact"] and r["genF_R11_contains_J"] for r in rows)
    return {"n_max": n_max, "dim_hom_R10_R11": hom0, "genF_R11_excludes_R10": not_in,
            "sequences": rows, "holds": holds, "disclaimer": KRONECKER_DISCLAIMER}


def cmd_kronecker_shard(ws, args):
    return kronecker_shard(ws, args.n)


HANDLERS = {"catalog": cmd_catalog, "resolve": cmd_resolve, "presilt": cmd_presilt,
            "tilt": cmd_tilt, "genf": cmd_genf, "torsion": cmd_torsion,
            "admissible": cmd_admissible, "verify-tilting": cmd_verify_tilting,
            "verify-special": cmd_verify_special, "kronecker-shard": cmd_kronecker_shard}


# -- DOT ----------------------------------------------------------------------------------------

def _quote(s):
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(report, target):
    if target == "quiver":
        alg = report.get("algebra")
        if not alg:
            raise KeyError("report has no algebra section")
        lines = ["digraph quiver {"]
        lines += [f"  {_quote(v)};" for v in alg["vertices"]]
        lines += [f"  {_quote(s)} -> {_quote(t)} [label={_quote(n)}];" for n, s, t in alg["arrows"]]
        return "\n".join(lines + ["}"]) + "\n"
    if target == "torsion-lattice":
        res = report.get("result") or {}
        if "classes" not in res:
            raise KeyError("report has no torsion-class section")
        lines = ["digraph torsion_lattice {", "  rankdir=BT;"]
        for k, c in enumerate(res["classes"]):
            label = "{" + ",".join(c) + "}" if c else "0"
            lines.append(f"  c{k} [label={_quote(label)}];")
        lines += [f"  c{a} -> c{b};" for a, b in res["hasse_edges"]]
        return "\n".join(lines + ["}"]) + "\n"
    raise ValueError(f"unknown DOT target {target!r}")


# -- driver ---------------------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="reltilt", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("file", help=".bqa file, or @name for a shipped fixture")
    ap.add_argument("module", nargs="?", help="module expression (resolve, presilt, tilt, genf)")
    ap.add_argument("--length", type=int, default=None, help="resolution length for resolve")
    ap.add_argument("--filter", action="append", choices=cl.FILTERS, help="torsion filter")
    ap.add_argument("--n", type=int, default=3, help="largest n for kronecker-shard")
    ap.add_argument("--p", type=int, default=None, help="override the field characteristic")
    ap.add_argument("--dim-bound", default=None, help="catalog bound d1,d2,...")
    ap.add_argument("--max-res-len", type=int, default=4)
    ap.add_argument("--enum-cap", type=int, default=DEFAULT_CAP)
    ap.add_argument("--json", dest="json_out", default=None, help="write the report here")
    ap.add_argument("--dot", dest="dot_out", default=None, help="write a DOT diagram here")
    ap.add_argument("--dot-target", choices=("torsion-lattice", "quiver"), default=None)
    ap.add_argument("--timing", action="store_true", help="add wall-clock time to the report")
    return ap


def run(argv):
    args = build_parser().parse_args(argv)
    if args.command in ("resolve", "presilt", "tilt", "genf") and not args.module:
        return _finish(args, {"schema": SCHEMA, "command": args.command, "status": "error",
                              "error": {"type": "UsageError",
                                        "message": f"{args.command} needs a module argument"}}, 2)
    if args.length is None:
        args.length = args.max_res_len
    start = time.perf_counter()
    report = {"schema": SCHEMA, "version": __version__, "command": args.command}
    code = 0
    try:
        bound = tuple(int(x) for x in args.dim_bound.split(",")) if args.dim_bound else None
        ws = load(args.file, p=args.p, dim_bound=bound, cap=args.enum_cap)
        text = Path(ws.source).read_bytes()
        report["input"] = {"file": Path(ws.source).name,
                           "sha256": hashlib.sha256(text).hexdigest(),
                           "p": ws.p, "module": args.module}
        q = ws.alg.quiver
        report["algebra"] = {"vertices": list(q.vertices),
                             "arrows": [[a.name, a.source, a.target] for a in q.arrows],
                             "dim": ws.alg.dim}
        ctx = ws.ctx
        report["generator"] = {"summands": list(ctx.names), "rank": ctx.rank,
                               "gamma_dim": ctx.gamma.dim}
        cat = ws.catalog
        report["catalog"] = {"provenance": cat.provenance, "complete": cat.complete,
                             "certificate": cat.certificate,
                             "entries": [{"name": nm, "dims": list(e.dims)}
                                         for nm, e in zip(cat.names, cat.entries)]}
        result = HANDLERS[args.command](ws, args)
        report["result"] = result
        holds = result.get("holds", True)
        report["status"] = "ok" if holds else "false"
        code = 0 if holds else 1
    except (ReltiltError, KeyError, ValueError, ArithmeticError, OSError) as exc:
        report["status"] = "error"
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        report["error"] = {"type": type(exc).__name__, "message": str(msg)}
        code = 2
    if args.timing:
        report["seconds"] = round(time.perf_counter() - start, 3)
    return _finish(args, report, code)


def _finish(args, report, code):
    text = json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    if args.json_out:
        Path(args.json_out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.dot_out and report.get("status") != "error":
        target = args.dot_target or ("torsion-lattice" if args.command == "torsion" else "quiver")
        try:
            Path(args.dot_out).write_text(emit_dot(report, target))
        except KeyError as exc:
            sys.stderr.write(f"reltilt: {exc.args[0]}\n")
            return 2
    return code


def main(argv=None):
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
