"""``homdefo`` command line.

Exit codes: 0 success or property holds, 1 property fails (witnesses are
printed), 2 usage or parse error, 3 resource limit hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import constructions as con
from . import deform as dfm
from . import documents as docs
from . import exactlin as el
from . import extensions as ext
from .bimod import CompatibleBimodule, check_bimodule
from .cochain import (DEFAULT_LIMITS, CochainComplex, CompatibleCochain, Limits,
                      NotEquivariantError, ResourceLimitError, check_maurer_cartan_pair,
                      gerstenhaber_bracket)
from .exactlin import DimensionError
from .homalg import CheckReport, InvalidStructureError, MultilinearMap, check_compatible
from .homlie import CompatibleHomLieAlgebra, CompatibleHomLieRep, commutator

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    def __init__(self, message: str, issues=()):
        super().__init__(message)
        self.issues = list(issues)


@dataclass
class Outcome:
    code: int
    results: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)


# -- helpers ---------------------------------------------------------------------

def _load(path: str, expect: tuple) -> docs.InputDocument:
    res = docs.parse_document(path, expect)
    if not res.ok:
        raise UsageError(f"cannot parse {path}", res.issues)
    return res.document


def _inline_matrix(text: str, n: int, what: str):
    try:
        raw = json.loads(text)
    except ValueError as exc:
        raise UsageError(f"{what}: malformed JSON ({exc})")
    try:
        return docs._matrix(raw, n, n, what)
    except docs._Fail as f:
        raise UsageError(f"{what}: invalid matrix", [f.issue])


def _limits(args) -> Limits:
    kw = {}
    if args.max_degree is not None:
        kw["max_degree"] = args.max_degree
    if args.max_dim_product is not None:
        kw["max_dim_product"] = args.max_dim_product
    if args.max_cells is not None:
        kw["max_cells"] = args.max_cells
    return Limits(**kw) if kw else DEFAULT_LIMITS


def _report_outcome(rep: CheckReport, **extra) -> Outcome:
    return Outcome(EXIT_OK if rep.ok else EXIT_FAIL, {"ok": rep.ok, **extra, "notes": rep.notes},
                   [v.to_json() for v in rep.violations])


def _module(doc: docs.InputDocument, module_arg: str | None):
    """Resolve the coefficient bimodule for cohomology-type commands."""
    A = doc.payload["algebra"]
    if doc.kind == "bimodule":
        if module_arg is not None:
            raise UsageError("--module is not allowed when the input is already a bimodule")
        return A, doc.payload["bimodule"]
    if module_arg is None:
        raise UsageError("an algebra input needs --module adjoint or --module <bimodule file>")
    if module_arg == "adjoint":
        return A, CompatibleBimodule.adjoint(A)
    M = _load(module_arg, ("bimodule",)).payload["bimodule"]
    if not docs._same_algebra(M.algebra, A):
        raise UsageError("the bimodule file is over a different algebra")
    return A, M


def _structure_ok(A, M) -> CheckReport:
    reps = [check_compatible(A)]
    if M is not None:
        reps.append(check_bimodule(M))
    return CheckReport.merge(*reps)


def _deformation(doc, order: int | None) -> dfm.TruncatedDeformation:
    """Truncate (or zero-pad) the document's jets to ``order``."""
    p = doc.payload
    mu1, mu2, al = list(p["mu1"]), list(p["mu2"]), list(p["alpha"])
    if order is not None:
        if order < 0:
            raise UsageError("--order must be non-negative")
        n = p["base"].dim
        pad = max(0, order - len(mu1))
        zero = MultilinearMap.zero((n, n), n)
        mu1, mu2 = (mu1 + [zero] * pad)[:order], (mu2 + [zero] * pad)[:order]
        al = (al + [el.zeros(n, n)] * pad)[:order]
    return dfm.TruncatedDeformation(p["base"], mu1, mu2, al)


# -- commands --------------------------------------------------------------------

def cmd_verify(args) -> Outcome:
    doc = _load(args.file, ("algebra", "bimodule"))
    A = doc.payload["algebra"]
    alg = check_compatible(A)
    mc = check_maurer_cartan_pair(A.alpha, A.mu1, A.mu2)
    if doc.kind == "bimodule":
        rep = CheckReport.merge(alg, check_bimodule(doc.payload["bimodule"]))
        return _report_outcome(rep, kind="bimodule", algebra_ok=alg.ok)
    return _report_outcome(alg, kind="algebra", maurer_cartan_ok=mc.ok,
                           maurer_cartan_agrees=mc.ok == alg.ok)


def cmd_cohomology(args) -> Outcome:
    doc = _load(args.file, ("algebra", "bimodule"))
    A, M = _module(doc, args.module)
    rep = _structure_ok(A, M)
    if not rep.ok:
        return Outcome(EXIT_FAIL, {"ok": False, "reason": "input structure is invalid"},
                       [v.to_json() for v in rep.violations])
    cx = CochainComplex(A, M, _limits(args))
    degrees = [args.degree] if args.degree is not None else [1, 2]
    out = {}
    for n in degrees:
        if n < 1:
            raise UsageError("--degree must be at least 1")
        r = cx.cohomology(n)
        out[str(n)] = r.to_json()
    res = {"ok": True, "degrees": out}
    if args.degree is not None:
        res["dim_H"] = out[str(args.degree)]["dim_H"]
    return Outcome(EXIT_OK, res)


def _single_part(path, part):
    doc = _load(path, ("cochain",))
    c = doc.payload["cochain"]
    if not 1 <= part <= c.degree:
        raise UsageError(f"--part must be in 1..{c.degree}")
    return doc, c.parts[part - 1]


def cmd_bracket(args) -> Outcome:
    if (args.f is None) != (args.g is None):
        raise UsageError("--f and --g must be given together")
    if args.f is None:
        doc = _load(args.file, ("algebra",))
        A = doc.payload["algebra"]
        mc = check_maurer_cartan_pair(A.alpha, A.mu1, A.mu2)
        return _report_outcome(mc, axioms_agree=mc.ok == check_compatible(A).ok)
    doc = _load(args.file, ("algebra",))
    A = doc.payload["algebra"]
    _, f = _single_part(args.f, args.part)
    _, g = _single_part(args.g, args.part)
    for name, m in (("f", f), ("g", g)):
        if m.codomain_dim != A.dim or any(d != A.dim for d in m.domain_dims):
            raise UsageError(f"{name} is not a cochain on the algebra's space")
    try:
        b = gerstenhaber_bracket(A.alpha, f, g)
    except NotEquivariantError as exc:
        return Outcome(EXIT_FAIL, {"ok": False, "reason": str(exc)})
    return Outcome(EXIT_OK, {"ok": True, "arity": b.arity, "bracket": docs.map_json(b)})


CONSTRUCTIONS = ("yau", "derived", "nijenhuis", "rota-baxter", "semidirect", "f-twisted")


def cmd_construct(args) -> Outcome:
    op = args.operation
    if op == "semidirect":
        M = _load(args.file, ("bimodule",)).payload["bimodule"]
        out = con.semidirect_product(M)
    elif op == "f-twisted":
        doc = _load(args.file, ("cochain",))
        A, M, c = doc.payload["algebra"], doc.payload["bimodule"], doc.payload["cochain"]
        if c.degree != 2:
            raise UsageError("f-twisted needs a degree-2 cochain")
        which = args.which
        out = con.f_twisted_semidirect(A.single(which), M.single(which), c.parts[which - 1])
    else:
        A = _load(args.file, ("algebra",)).payload["algebra"]
        n = A.dim
        if op == "derived":
            if args.n is None:
                raise UsageError("derived needs --n")
            out = con.derived_algebra(A, args.n)
        else:
            if args.op is None:
                raise UsageError(f"{op} needs --op <matrix JSON>")
            X = _inline_matrix(args.op, n, "--op")
            if op == "yau":
                out = con.yau_twist(A, X)
            elif op == "nijenhuis":
                out = con.nijenhuis_pair(A.single(args.which), X)
            else:
                if args.op2 is None:
                    raise UsageError("rota-baxter needs --op2 <matrix JSON>")
                out = con.rb_pair_algebra(A.single(args.which), X, _inline_matrix(args.op2, n, "--op2"))
    rep = check_compatible(out)
    return Outcome(EXIT_OK if rep.ok else EXIT_FAIL,
                   {"ok": rep.ok, "construction": op, "algebra": docs.algebra_json(out)},
                   [v.to_json() for v in rep.violations])


def cmd_homlie(args) -> Outcome:
    doc = _load(args.file, ("algebra", "bimodule"))
    A = doc.payload["algebra"]
    lie = CompatibleHomLieAlgebra(commutator(A.mu1), commutator(A.mu2), A.alpha, check=False)
    reps = [lie.report()]
    res = {"lie_ok": reps[0].ok,
           "bracket1": docs.map_json(lie.bracket1), "bracket2": docs.map_json(lie.bracket2)}
    if doc.kind == "bimodule":
        M = doc.payload["bimodule"]
        rho = [M.l1 - M.r1.permute_inputs([1, 0]), M.l2 - M.r2.permute_inputs([1, 0])]
        V = CompatibleHomLieRep(lie, rho[0], rho[1], M.beta, check=False)
        reps.append(V.report())
        res["representation_ok"] = reps[1].ok
    return _report_outcome(CheckReport.merge(*reps), **res)


DEFORM_ACTIONS = ("verify", "infinitesimal", "extend", "obstruction", "reduce")


def _deform_action(action: str, args) -> Outcome:
    doc = _load(args.file, ("deformation",))
    d = _deformation(doc, args.order)
    base = d.base
    brep = check_compatible(base)
    if not brep.ok:
        return Outcome(EXIT_FAIL, {"ok": False, "reason": "base algebra is invalid"},
                       [v.to_json() for v in brep.violations])
    vrep = dfm.verify_deformation(d)
    if action == "verify":
        return Outcome(EXIT_OK if vrep.ok else EXIT_FAIL,
                       {"ok": vrep.ok, "order": d.order, "ok_per_order": vrep.ok_per_order},
                       vrep.to_json()["defects"])
    if not vrep.ok:
        return Outcome(EXIT_FAIL, {"ok": False, "reason": "input is not a deformation of the stated order"},
                       vrep.to_json()["defects"])
    cx = CochainComplex(base, None, _limits(args))
    if action == "infinitesimal":
        r = dfm.check_infinitesimal_cocycle(d, cx)
        res = r.to_json()
        res["indeterminate"] = r.ok is None
        return Outcome(EXIT_OK if r.ok else EXIT_FAIL, res)
    if action == "obstruction":
        ob = dfm.obstruction(d)
        vanishes = cx.is_coboundary(ob.cochain)
        return Outcome(EXIT_OK if vanishes else EXIT_FAIL,
                       {"ok": vanishes, "order": ob.order, "class_vanishes": vanishes,
                        "obstruction": docs.cochain_json(ob.cochain)})
    if action == "extend":
        sol = dfm.try_extend(d, cx)
        if sol is None:
            ob = dfm.obstruction(d)
            return Outcome(EXIT_FAIL, {"ok": False, "reason": "obstruction class is nonzero",
                                       "obstruction": docs.cochain_json(ob.cochain)})
        e = d.extended(*sol)
        check = dfm.verify_deformation(e)
        return Outcome(EXIT_OK if check.ok else EXIT_FAIL,
                       {"ok": check.ok, "order": e.order,
                        "jets": {"mu1": docs.map_json(sol[0]), "mu2": docs.map_json(sol[1])},
                        "deformation": docs.deformation_json(base, e.mu1_jets, e.mu2_jets, e.alpha_jets)},
                       check.to_json()["defects"])
    r = dfm.triviality_reduction(d, cx)
    return Outcome(EXIT_OK if r.trivial else EXIT_FAIL,
                   {"ok": r.trivial, "trivial": r.trivial, "index": r.index,
                    "steps": [{"order": k, "psi": docs.matrix_json(m)} for k, m in r.steps],
                    "reduced": docs.deformation_json(base, r.reduced.mu1_jets, r.reduced.mu2_jets,
                                                     r.reduced.alpha_jets)})


def cmd_deform(args) -> Outcome:
    return _deform_action(args.action, args)


def cmd_obstruction(args) -> Outcome:
    return _deform_action("obstruction", args)


def cmd_extend(args) -> Outcome:
    return _deform_action("extend", args)


def cmd_extension(args) -> Outcome:
    p = _load(args.file, ("extension",)).payload
    A, M, f = p["algebra"], p["bimodule"], p["cocycle"]
    rep = _structure_ok(A, M)
    if not rep.ok:
        return Outcome(EXIT_FAIL, {"ok": False, "reason": "input structure is invalid"},
                       [v.to_json() for v in rep.violations])
    try:
        e = ext.extension_from_cocycle(A, M, f)
    except ext.ExtensionError as exc:
        defect = getattr(exc, "defect", None)
        return Outcome(EXIT_FAIL, {"ok": False, "reason": str(exc)},
                       [] if defect is None else [docs.cochain_json(defect)])
    erep = e.report()
    back = ext.cocycle_from_extension(e)
    res = {"ok": erep.ok, "total": docs.algebra_json(e.total),
           "round_trip": all(a == b for a, b in zip(back.parts, f.parts))}
    ok = erep.ok and res["round_trip"]
    if "compare" in p:
        try:
            e2 = ext.extension_from_cocycle(A, M, p["compare"])
        except ext.ExtensionError as exc:
            return Outcome(EXIT_FAIL, {**res, "ok": False, "reason": f"compare: {exc}"})
        eq = ext.equivalent_extensions(e, e2)
        res["equivalent"] = eq.ok
        res["g"] = eq.to_json()["g"]
        ok = ok and eq.ok
    res["ok"] = ok
    return Outcome(EXIT_OK if ok else EXIT_FAIL, res, [v.to_json() for v in erep.violations])


def cmd_ext_classes(args) -> Outcome:
    doc = _load(args.file, ("algebra", "bimodule"))
    A, M = _module(doc, args.module)
    rep = _structure_ok(A, M)
    if not rep.ok:
        return Outcome(EXIT_FAIL, {"ok": False, "reason": "input structure is invalid"},
                       [v.to_json() for v in rep.violations])
    r = ext.ext_classes(A, M, _limits(args))
    exts = [ext.extension_from_cocycle(A, M, c) for c in r.representative_cocycles]
    split = ext.extension_from_cocycle(A, M, CompatibleCochain.zero(2, A.dim, M.dim))
    pairwise = all(not ext.equivalent_extensions(exts[i], exts[j]).ok
                   for i in range(len(exts)) for j in range(i + 1, len(exts)))
    nonsplit = all(not ext.equivalent_extensions(e, split).ok for e in exts)
    return Outcome(EXIT_OK, {"ok": True, "dim_H2c": r.dim_H2c,
                             "representatives": [docs.cochain_json(c) for c in r.representative_cocycles],
                             "pairwise_inequivalent": pairwise, "none_split": nonsplit})


# -- plumbing ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--max-degree", type=int, default=None)
    common.add_argument("--max-dim-product", type=int, default=None)
    common.add_argument("--max-cells", type=int, default=None,
                        help="cap on tensor cells per cochain space (env HOMDEFO_MAX_CELLS)")

    p = argparse.ArgumentParser(prog="homdefo", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify", parents=[common], help="check algebra or bimodule axioms")
    s.add_argument("file")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("cohomology", parents=[common], help="dimensions of H^{n,c}")
    s.add_argument("file")
    s.add_argument("--module", default=None, help="'adjoint' or a bimodule file")
    s.add_argument("--degree", type=int, default=None)
    s.set_defaults(func=cmd_cohomology)

    s = sub.add_parser("bracket", parents=[common], help="twisted Gerstenhaber bracket")
    s.add_argument("file", help="algebra document (supplies alpha)")
    s.add_argument("--f", default=None, help="cochain document")
    s.add_argument("--g", default=None, help="cochain document")
    s.add_argument("--part", type=int, default=1, help="which part of each compatible cochain")
    s.set_defaults(func=cmd_bracket)

    s = sub.add_parser("construct", parents=[common], help="build a compatible algebra")
    s.add_argument("operation", choices=CONSTRUCTIONS)
    s.add_argument("file")
    s.add_argument("--op", default=None, help="operator matrix as inline JSON")
    s.add_argument("--op2", default=None, help="second operator (rota-baxter)")
    s.add_argument("--n", type=int, default=None, help="power for derived")
    s.add_argument("--which", type=int, choices=(1, 2), default=1,
                   help="which product feeds single-product constructions")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("homlie-check", parents=[common], help="commutator Hom-Lie structure")
    s.add_argument("file")
    s.set_defaults(func=cmd_homlie)

    s = sub.add_parser("deform", parents=[common], help="truncated deformations")
    s.add_argument("action", choices=DEFORM_ACTIONS)
    s.add_argument("file")
    s.add_argument("--order", type=int, default=None)
    s.set_defaults(func=cmd_deform)

    for name, fn in (("obstruction", cmd_obstruction), ("extend", cmd_extend)):
        s = sub.add_parser(name, parents=[common], help=f"same as 'deform {name}'")
        s.add_argument("file")
        s.add_argument("--order", type=int, default=None)
        s.set_defaults(func=fn)

    s = sub.add_parser("extension", parents=[common], help="abelian extension from a cocycle")
    s.add_argument("file")
    s.set_defaults(func=cmd_extension)

    s = sub.add_parser("ext-classes", parents=[common], help="extension classes via H^{2,c}")
    s.add_argument("file")
    s.add_argument("--module", default=None)
    s.set_defaults(func=cmd_ext_classes)
    return p


def _inputs(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("func", "json", "command")}


def _emit(args, outcome: Outcome, out, err):
    if args.json:
        env = {"command": args.command, "inputs": _inputs(args),
               "results": docs.to_plain(outcome.results), "witnesses": docs.to_plain(outcome.witnesses),
               "exit_code": outcome.code}
        out.write(json.dumps(env, indent=2, sort_keys=True) + "\n")
        return
    if outcome.code in (EXIT_USAGE, EXIT_LIMIT):
        return
    for k, v in outcome.results.items():
        if isinstance(v, (dict, list)):
            v = json.dumps(docs.to_plain(v))
        out.write(f"{k}: {v}\n")
    if outcome.witnesses:
        out.write(f"witnesses ({len(outcome.witnesses)}):\n")
        for w in outcome.witnesses[:50]:
            out.write(f"  {json.dumps(docs.to_plain(w))}\n")
        if len(outcome.witnesses) > 50:
            out.write(f"  ... {len(outcome.witnesses) - 50} more\n")


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        outcome = args.func(args)
    except UsageError as exc:
        outcome = Outcome(EXIT_USAGE, {"ok": False, "error": str(exc),
                                       "issues": [i.to_json() for i in exc.issues]})
        err.write(f"error: {exc}\n")
        for i in exc.issues:
            err.write(f"  {i}\n")
    except ResourceLimitError as exc:
        outcome = Outcome(EXIT_LIMIT, {"ok": False, "error": f"resource limit: {exc}"})
        err.write(f"resource limit: {exc}\n")
    except dfm.UnsupportedModeError as exc:
        outcome = Outcome(EXIT_USAGE, {"ok": False, "error": str(exc)})
        err.write(f"error: {exc}\n")
    except (InvalidStructureError, NotEquivariantError, dfm.DeformationError,
            ext.ExtensionError) as exc:
        report = getattr(exc, "report", None)
        outcome = Outcome(EXIT_FAIL, {"ok": False, "error": str(exc)},
                          [] if report is None else [v.to_json() for v in report.violations])
    except (DimensionError, ValueError) as exc:
        outcome = Outcome(EXIT_USAGE, {"ok": False, "error": str(exc)})
        err.write(f"error: {exc}\n")
    _emit(args, outcome, out, err)
    return outcome.code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
