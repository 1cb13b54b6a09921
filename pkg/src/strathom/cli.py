"""Command-line front end.

    strathom profile <file> [--perversity K ...] [--ring Z|Q|Fp] [--engine E] [--json]
    strathom crosscheck <file>
    strathom bench-snf <file ...> | --random R C DENSITY | --builtin susp-rp3
    strathom validate <file>

Input files are JSON: either a constructor expression under "space" or a
raw filtered complex.  Reports are deterministic: identical inputs give
byte-identical JSON.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from typing import List, Optional, Tuple

from . import __version__
from .exact_algebra import (Coefficients, FGModule, GradedModule, IntMatrix,
                            random_sparse, smith)
from .stratified import (FilteredComplex, GMPerversity, Perversity,
                         StratifiedValidationError)
from .triangulations import has_triangulation, triangulation_of
from .chains import (RegularComplex, cohomology_via_uct, intersection_cohomology,
                     intersection_homology)
from .blowup import blowup_cohomology
from .spaces import (AtomSpace, DisjointUnion, IsolatedSing, MappingTorus,
                     OpenCone, SpaceExpr, Suspension, ThomCircle, atom,
                     atom_renamed, eval_expression, product_atom)
from .peripheral import DualityReport, verdicts


class InputError(ValueError):
    pass


# -- input parsing --------------------------------------------------------

def parse_space(data: dict) -> SpaceExpr:
    t = data.get("type")
    if t == "atom":
        return AtomSpace(atom(data["name"]))
    if t == "product":
        factors = []
        seen = set()
        for i, f in enumerate(data["factors"]):
            a = atom(f["name"]) if isinstance(f, dict) else atom(f)
            if a.name in seen:
                a = atom_renamed(a, chr(ord("b") + i))
            seen.add(a.name)
            factors.append(a)
        return AtomSpace(product_atom(*factors))
    if t == "cone":
        inner = parse_space(data["of"])
        if not isinstance(inner, AtomSpace):
            raise InputError("cone supports manifold links only")
        return OpenCone(inner)
    if t == "suspension":
        inner = parse_space(data["of"])
        if not isinstance(inner, AtomSpace):
            raise InputError("suspension supports manifold links only")
        return Suspension(inner)
    if t == "isolated":
        links = []
        for l in data["links"]:
            a = parse_space(l)
            if not isinstance(a, AtomSpace):
                raise InputError("isolated-singularity links must be manifolds")
            links.append(a.atom)
        return IsolatedSing(data["dimension"], tuple(links))
    if t == "mapping_torus":
        inner = parse_space(data["of"])
        action = tuple(sorted(
            (int(deg), tuple(tuple(int(v) for v in row) for row in mat))
            for deg, mat in data["action"].items()))
        return MappingTorus(inner, action)
    if t == "thom_circle":
        base = parse_space(data["base"])
        if not isinstance(base, AtomSpace):
            raise InputError("thom_circle base must be a manifold atom or product")
        euler = tuple(sorted((str(k), int(v)) for k, v in data["euler"].items()))
        return ThomCircle(base.atom, euler)
    if t == "disjoint_union":
        return DisjointUnion(tuple(parse_space(p) for p in data["parts"]))
    raise InputError(f"unknown space type {data.get('type')!r}")


def parse_complex(data: dict) -> FilteredComplex:
    # relabel to consecutive integers: keeps vertex ordering deterministic
    # and lets the constructors allocate fresh vertices
    ids = sorted({v["id"] for v in data["vertices"]}, key=str)
    relabel = {vid: i for i, vid in enumerate(ids)}
    levels = {relabel[v["id"]]: int(v["level"]) for v in data["vertices"]}
    simplices = [[relabel[v] for v in s] for s in data["simplices"]]
    return FilteredComplex(int(data["dimension"]), levels, simplices,
                           close=True, name=data.get("name", "complex"))


def load_job(path: str) -> dict:
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        data = json.loads(raw.decode("utf-8"))
    except json.JSONDecodeError as e:
        raise InputError(f"{path}:{e.lineno}:{e.colno}: {e.msg}")
    data["_digest"] = hashlib.sha256(raw).hexdigest()
    return data


# -- realization for the simplicial engine --------------------------------

def realize(data: dict) -> Optional[FilteredComplex]:
    t = data.get("type")
    if t == "complex":
        return parse_complex(data)
    if t == "atom":
        name = data["name"]
        return triangulation_of(name) if has_triangulation(name) else None
    if t in ("cone", "suspension"):
        inner = realize(data["of"])
        if inner is None:
            return None
        return inner.cone() if t == "cone" else inner.suspension()
    if t == "disjoint_union":
        parts = [realize(p) for p in data["parts"]]
        if any(p is None for p in parts):
            return None
        out = parts[0]
        for p in parts[1:]:
            out = out.disjoint_union(p)
        return out
    return None


def perversity_for(X: FilteredComplex, spec) -> Perversity:
    if isinstance(spec, int):
        return Perversity(X, {st.key: spec for st in X.strata() if not st.regular})
    if isinstance(spec, dict) and "codim" in spec:
        return Perversity.from_codim_values(
            X, {int(c): int(v) for c, v in spec["codim"].items()})
    if isinstance(spec, dict) and "gm" in spec:
        return Perversity.from_gm(X, GMPerversity([int(v) for v in spec["gm"]]))
    raise InputError(f"cannot parse perversity {spec!r}")


# -- serialization ---------------------------------------------------------

def graded_to_json(g: Optional[GradedModule]):
    if g is None:
        return None
    return {str(k): {"rank": g[k].rank, "torsion": list(g[k].torsion)}
            for k in g.support()}


def module_str(m: FGModule) -> str:
    return str(m)


def graded_str(g: Optional[GradedModule]) -> str:
    return "-" if g is None else str(g)


def report_to_json(rep: DualityReport, digest: str) -> dict:
    periph = {}
    for k, e in sorted(rep.peripheral.items()):
        entry = {"order": e.order(), "rank": e.rank,
                 "sub": {"rank": e.sub.rank, "torsion": list(e.sub.torsion)},
                 "quot": {"rank": e.quot.rank, "torsion": list(e.quot.torsion)}}
        if e.resolved is not None:
            entry["group"] = {"rank": e.resolved.rank,
                              "torsion": list(e.resolved.torsion)}
        else:
            entry["group"] = None
            entry["note"] = e.note
        periph[str(k)] = entry
    return {
        "tool": "strathom",
        "version": __version__,
        "input_digest": digest,
        "space": rep.space,
        "coefficients": rep.ring,
        "perversity": rep.perversity,
        "groups": graded_to_json(rep.gh_lower) or {},
        "dual_cohomology": graded_to_json(rep.gh_dual),
        "blowup_cohomology": graded_to_json(rep.h_blowup),
        "peripheral": periph,
        "components": {
            "F": graded_to_json(rep.comp_F),
            "T_K": graded_to_json(rep.comp_TK),
            "T_C": graded_to_json(rep.comp_TC),
        },
        "verdicts": {
            "torsion_free_pairing": rep.torsion_free_pairing,
            "torsion_pairing": rep.torsion_pairing,
            "poincare_duality": rep.poincare_duality,
            "locally_torsion_free": rep.locally_torsion_free,
        },
        "checks": [c.as_dict() for c in rep.checks],
        "annotations": rep.annotations,
    }


def print_report_text(rep: DualityReport, out):
    w = out.write
    w(f"space: {rep.space}   (n = {rep.n}, ring {rep.ring})\n")
    w(f"perversity: {rep.perversity}\n")
    if rep.gh_lower is not None:
        w(f"  GH_* : {graded_str(rep.gh_lower)}\n")
    if rep.gh_dual is not None:
        w(f"  GH^*_(Dp) : {graded_str(rep.gh_dual)}\n")
    if rep.h_blowup is not None:
        w(f"  H~^*_p : {graded_str(rep.h_blowup)}\n")
    if rep.peripheral:
        w("  peripheral R^*:\n")
        for k, e in sorted(rep.peripheral.items()):
            w(f"    [{k}] {e}\n")
    else:
        w("  peripheral R^* = 0\n")
    for nm, g in (("F", rep.comp_F), ("T_K", rep.comp_TK), ("T_C", rep.comp_TC)):
        if g is not None:
            w(f"  {nm}: {graded_str(g)}\n")
    w("verdicts:\n")
    w(f"  torsion-free pairing: {rep.torsion_free_pairing}\n")
    w(f"  torsion pairing:      {rep.torsion_pairing}\n")
    w(f"  poincare duality:     {rep.poincare_duality}\n")
    w(f"  locally torsion free: {rep.locally_torsion_free}\n")
    for r in rep.ltf_details:
        t = r.torsion if r.torsion is not None else f"order {r.torsion_order}"
        w(f"    {r.stratum}: T GH_{r.critical_degree} = {t}\n")
    w("checks:\n")
    for c in rep.checks:
        w(f"  [{c.status:>7}] {c.name}" + (f" -- {c.detail}" if c.detail else "") + "\n")
    for a in rep.annotations:
        w(f"note: {a}\n")


# -- engines ----------------------------------------------------------------

def symbolic_report(data: dict, k: int, ring: Coefficients) -> DualityReport:
    expr = parse_space(data)
    prof = eval_expression(expr, k, ring)
    dual_prof = None
    dk = prof.n - 2 - k
    if 0 <= dk <= prof.n - 2:
        try:
            dual_prof = eval_expression(expr, dk, ring)
        except ValueError:
            dual_prof = None
    return verdicts(prof, dual_prof)


def simplicial_report(X: FilteredComplex, pspec, ring: Coefficients,
                      space_name: str) -> DualityReport:
    p = perversity_for(X, pspec)
    gh = intersection_homology(X, p, ring)
    ghd = intersection_cohomology(X, p.complementary(), ring)
    hb = blowup_cohomology(X, p, ring)
    from .peripheral import CheckResult
    rep = DualityReport(
        space=space_name, n=X.n, ring=str(ring),
        perversity=str(pspec),
        gh_lower=gh, gh_dual=ghd, h_blowup=hb,
        comp_F=None, comp_TK=None, comp_TC=None,
        peripheral={},
        torsion_free_pairing="insufficient data",
        torsion_pairing="insufficient data",
        poincare_duality=None, locally_torsion_free=None,
        annotations=["simplicial engine: comparison-map data is symbolic-only"],
    )
    if ring.kind == "Z":
        uct = cohomology_via_uct(intersection_homology(X, p.complementary(), ring))
        status = "pass" if uct == ghd else "fail"
        rep.checks.append(CheckResult("universal coefficients on GH^*", status,
                                      "" if status == "pass" else
                                      f"{uct} != {ghd}"))
    return rep


def cmd_profile(args) -> int:
    try:
        data = load_job(args.file)
    except (InputError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    digest = data.pop("_digest")
    ring = Coefficients.parse(args.ring or data.get("ring", "Z"))
    engine = args.engine or data.get("engine", "symbolic")
    pspecs = [data.get("perversity", 0)]
    if args.perversity is not None:
        pspecs = [int(v) for v in str(args.perversity).split(",")]
    space_data = data.get("space", data)
    reports: List[Tuple[str, DualityReport]] = []
    try:
        for pspec in pspecs:
            per_perversity: List[Tuple[str, DualityReport]] = []
            if engine in ("symbolic", "both") and space_data.get("type") != "complex":
                per_perversity.append(
                    ("symbolic", symbolic_report(space_data, int(pspec), ring)))
            if engine in ("simplicial", "both") or space_data.get("type") == "complex":
                X = realize(space_data)
                if X is None:
                    if engine == "simplicial":
                        print("symbolic-only: no simplicial realization",
                              file=sys.stderr)
                        return 2
                else:
                    name = space_data.get("name", X.name)
                    per_perversity.append(
                        ("simplicial", simplicial_report(X, pspec, ring, name)))
            if len(per_perversity) == 2:
                _engine_agreement_check(per_perversity[0][1], per_perversity[1][1])
            reports.extend(per_perversity)
    except (InputError, StratifiedValidationError, KeyError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    failed = any(not rep.passed() for _, rep in reports)
    if args.json:
        payload = [dict(report_to_json(rep, digest), engine=eng)
                   for eng, rep in reports]
        out = payload[0] if len(payload) == 1 else payload
        print(json.dumps(out, indent=2, sort_keys=True))
    else:
        for eng, rep in reports:
            sys.stdout.write(f"== engine: {eng} ==\n")
            print_report_text(rep, sys.stdout)
    if failed and args.strict:
        return 3
    return 0


def _engine_agreement_check(sym: DualityReport, simp: DualityReport):
    from .peripheral import CheckResult
    problems = []
    for field, label in (("gh_lower", "GH_*"), ("gh_dual", "GH^*_(Dp)"),
                         ("h_blowup", "H~^*_p")):
        a, b = getattr(sym, field), getattr(simp, field)
        if a is not None and b is not None and a != b:
            problems.append(f"{label}: symbolic {a} vs simplicial {b}")
    status = "fail" if problems else "pass"
    simp.checks.append(CheckResult("engine agreement", status, "; ".join(problems)))


def cmd_validate(args) -> int:
    try:
        data = load_job(args.file)
    except (InputError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    data.pop("_digest")
    space_data = data.get("space", data)
    try:
        X = realize(space_data)
        if X is None:
            print("symbolic-only expression: nothing to validate simplicially")
            expr = parse_space(space_data)
            print(f"parsed: {expr.name}")
            return 0
        X.validate()
    except (StratifiedValidationError, InputError) as e:
        print(f"invalid: {e}", file=sys.stderr)
        return 2
    print(f"valid: {X.name}: n={X.n}, {len(X.levels)} vertices, "
          f"{len(X.simplices)} simplices")
    for st in X.strata():
        print(f"  {st}")
    return 0


def _crosscheck_one(data: dict, X: FilteredComplex, k: int, out_rows: list) -> bool:
    ok_all = True
    ring = Coefficients("Z")
    prof = eval_expression(parse_space(data), k, ring)
    p = perversity_for(X, k)
    pairs = [
        ("GH_*", prof.gh_lower, intersection_homology(X, p, ring)),
        ("GH^*", cohomology_via_uct(prof.gh_lower) if prof.gh_lower is not None
         else None, intersection_cohomology(X, p, ring)),
        ("H~^*", prof.h_blowup, blowup_cohomology(X, p, ring)),
    ]
    for name, sym, simp in pairs:
        if sym is None:
            out_rows.append((k, name, "skipped", "no symbolic prediction"))
            continue
        ok = sym == simp
        ok_all &= ok
        out_rows.append((k, name, "pass" if ok else "fail",
                         "" if ok else f"symbolic {sym} vs simplicial {simp}"))
    dp = perversity_for(X, X.n - 2 - k)
    for F in (Coefficients("Q"), Coefficients("Fp", 2), Coefficients("Fp", 3)):
        hb = blowup_cohomology(X, p, F)
        gh = intersection_cohomology(X, dp, F)
        ok = all(hb[j].rank == gh[j].rank
                 for j in set(hb.support()) | set(gh.support()))
        ok_all &= ok
        out_rows.append((k, f"dim H~^*_p(F)=dim GH^*_Dp(F), F={F}",
                         "pass" if ok else "fail",
                         "" if ok else f"{hb} vs {gh}"))
    return ok_all


def cmd_crosscheck(args) -> int:
    try:
        data = load_job(args.file)
    except (InputError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    data.pop("_digest")
    space_data = data.get("space", data)
    X = realize(space_data)
    if X is None:
        print("symbolic-only: expression has no simplicial realization")
        return 0
    ks = [int(v) for v in (args.perversity.split(",") if args.perversity else [])]
    if not ks:
        ks = list(range(0, max(X.n - 1, 1)))
    rows: list = []
    ok = True
    for k in ks:
        ok &= _crosscheck_one(space_data, X, k, rows)
    width = max(len(r[1]) for r in rows)
    for k, name, status, detail in rows:
        line = f"k={k}  {name:<{width}}  {status}"
        if detail:
            line += f"  {detail}"
        print(line)
    print("crosscheck:", "pass" if ok else "FAIL")
    return 0 if ok else 3


def cmd_bench_snf(args) -> int:
    jobs: List[Tuple[str, IntMatrix]] = []
    if args.random:
        r, c, dens = int(args.random[0]), int(args.random[1]), float(args.random[2])
        jobs.append((f"random {r}x{c} d={dens}",
                     random_sparse(r, c, dens, seed=args.seed)))
    if args.builtin:
        if args.builtin == "susp-rp3":
            X = triangulation_of("RP3").suspension()
            reg = RegularComplex(X)
            for k in sorted(reg.by_degree):
                if k:
                    jobs.append((f"susp(RP3) boundary d_{k}", reg.boundary_matrix(k)))
        else:
            print(f"unknown builtin {args.builtin!r}", file=sys.stderr)
            return 2
    for path in args.files or []:
        try:
            with open(path) as fh:
                jobs.append((path, IntMatrix.parse_triplets(fh.read())))
        except (OSError, ValueError) as e:
            print(f"error reading {path}: {e}", file=sys.stderr)
            return 2
    if not jobs:
        print("nothing to do: give files, --random, or --builtin", file=sys.stderr)
        return 2
    print(f"{'matrix':<28} {'shape':>12} {'nnz':>8} {'rank':>6} "
          f"{'factors>1':>10} {'peak bits':>10} {'time (s)':>9}")
    for name, m in jobs:
        t0 = time.perf_counter()
        sd = smith(m, need_U=True, need_V=True)
        dt = time.perf_counter() - t0
        for a, b in zip(sd.diagonal, sd.diagonal[1:]):
            assert b % a == 0, "divisibility chain violated"
        nontriv = [d for d in sd.diagonal if d > 1]
        print(f"{name:<28} {f'{m.rows}x{m.cols}':>12} {m.nnz():>8} "
              f"{sd.rank:>6} {len(nontriv):>10} {sd.peak_bits:>10} {dt:>9.3f}"
              + (f"   {nontriv}" if nontriv else ""))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="strathom",
        description="intersection (co)homology and Poincare-duality verdicts "
                    "for stratified pseudomanifolds, in exact arithmetic")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", help="full duality report for a space")
    p.add_argument("file")
    p.add_argument("--perversity", default=None,
                   help="apex perversity value(s), comma-separated "
                        "(overrides the input file)")
    p.add_argument("--ring", default=None, help="Z, Q, or Fp (e.g. F2)")
    p.add_argument("--engine", choices=["symbolic", "simplicial", "both"],
                   default=None)
    p.add_argument("--json", action="store_true")
    p.add_argument("--strict", action="store_true",
                   help="exit 3 when a consistency check fails")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("crosscheck",
                       help="compare symbolic and simplicial engines")
    p.add_argument("file")
    p.add_argument("--perversity", default=None,
                   help="comma-separated apex values (default: all admissible)")
    p.set_defaults(func=cmd_crosscheck)

    p = sub.add_parser("bench-snf", help="benchmark the Smith normal form kernel")
    p.add_argument("files", nargs="*")
    p.add_argument("--random", nargs=3, metavar=("ROWS", "COLS", "DENSITY"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--builtin", default=None, help="susp-rp3")
    p.set_defaults(func=cmd_bench_snf)

    p = sub.add_parser("validate", help="validate a filtered complex input")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
