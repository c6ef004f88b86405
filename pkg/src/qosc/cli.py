"""Command-line driver: every verification and computation as a subcommand.

Reports are JSON with a stable schema ("qosc/1"); the exit code is 0 iff
every check in the report passed, 2 on usage errors.  Wall-clock numbers
are only emitted under --timings so that default reports are byte-stable.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .algebraops import (
    check_monoidality,
    check_phi_relations,
    check_relations,
    check_truncation_equivariance,
    phi_words,
)
from .decomp import decompose, find_hw
from .fockmod import (
    RestrictedModule,
    TensorModule,
    TruncatedModule,
    W2Module,
    WModule,
    ket_str,
)
from .fundrep import (
    build_fundamental,
    check_fundamental_truncation,
    iso_between_k,
    verify_appendix_C,
    verify_EF_identities,
    verify_u_rs_highest,
)
from .lattice import EpsilonData, Weight
from .rmatrix import (
    AdmissibilityError,
    c_target_module,
    check_admissible,
    closed_rho_c,
    closed_rho_d,
    cyclicity_diagnostic,
    fuse,
    make_c_pair,
    make_d_pair,
    poles,
    rho_pole_multisets,
    sigma_component_partitions,
    solve_R,
)
from .decomp import hw_weight
from .scalars import parse_scalar

SCHEMA = "qosc/1"


def _emit(args, command, checks, extra=None):
    ok = all(c.get("pass", False) for c in checks)
    report = {
        "schema": SCHEMA,
        "command": command,
        "pass": ok,
        "checks": checks,
    }
    if extra:
        report.update(extra)
    if getattr(args, "timings", False):
        report["wall_clock_s"] = round(time.time() - args._t0, 2)
    text = json.dumps(report, indent=2, sort_keys=True, default=str)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if ok else 1


def _epsilon(args):
    return EpsilonData(tuple(int(b) for b in args.epsilon.split(",")))


def _module(args, eps):
    x = parse_scalar(args.x)
    if args.module == "W":
        return WModule(eps, x, args.cutoff)
    if args.module == "W2":
        return W2Module(eps, x, args.cutoff)
    raise SystemExit(2)


def cmd_verify_relations(args):
    eps = _epsilon(args)
    mod = _module(args, eps)
    reps = check_relations(mod)
    checks = [r.to_json() for r in reps]
    return _emit(args, "verify-relations", checks)


def cmd_verify_phi(args):
    eps = _epsilon(args)
    mod = _module(args, eps)
    tgt = phi_words(args.flavor, args.side, eps, eta=args.eta)
    reps = check_phi_relations(tgt, mod)
    checks = [r.to_json() for r in reps]
    return _emit(args, "verify-phi", checks, extra={"target": tgt.name})


def cmd_truncate(args):
    eps = _epsilon(args)
    mod = _module(args, eps)
    tgt = phi_words(args.flavor, args.side, eps, eta=args.eta)
    reps = check_truncation_equivariance(tgt, mod, maxdeg=args.cutoff - 2)
    checks = [r.to_json() for r in reps]
    if args.monoidal:
        wx = _module(args, eps)
        wy = type(mod)(eps, parse_scalar(args.y), args.cutoff)
        t_amb = TensorModule([wx, wy])
        t_tr = TensorModule([TruncatedModule(wx, tgt), TruncatedModule(wy, tgt)])
        reps = check_monoidality(tgt, t_amb, t_tr, maxdeg=max(0, args.cutoff - 3))
        checks.extend(r.to_json() for r in reps)
    return _emit(args, "truncate", checks, extra={"kept": list(tgt.kept)})


def _parity(ch):
    return {"+": 0, "-": 1}[ch]


def cmd_decompose(args):
    eps = _epsilon(args)
    factors = []
    tgt = None
    if args.level != "bold":
        tgt = phi_words(args.flavor, args.level, eps, eta=1)
    xs = args.x.split(";")
    for i, sig in enumerate(args.factors.split(",")):
        x = parse_scalar(xs[i % len(xs)])
        base = (
            WModule(eps, x, args.cutoff)
            if args.flavor == "c"
            else W2Module(eps, x, args.cutoff)
        )
        if tgt:
            base = TruncatedModule(base, tgt)
        if sig in "+-":
            base = RestrictedModule(base, _parity(sig))
        factors.append(base)
    mod = factors[0] if len(factors) == 1 else TensorModule(factors)
    ell = len(factors)
    res = decompose(mod, args.flavor, ell, args.cutoff)
    rows = [
        {"lambda": list(lam), "mult": d} for lam, d, _ in res if d or args.zeros
    ]
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("lambda,mult\n")
            for row in rows:
                fh.write('"%s",%d\n' % (" ".join(map(str, row["lambda"])), row["mult"]))
    checks = [{"id": "decompose", "pass": True, "table": rows}]
    return _emit(args, "decompose", checks)


def _parse_weight(text, eps):
    lam = 0
    delta = [0] * eps.n
    for part in text.replace("-", "+-").split("+"):
        part = part.strip()
        if not part:
            continue
        if "*" in part:
            c, name = part.split("*")
            c = int(c)
        elif part.startswith("-") and not part[1:].isdigit():
            c, name = -1, part[1:]
        else:
            c, name = 1, part
        name = name.strip()
        if name in ("L", "Lam", "Lambda"):
            lam += c
        elif name.startswith("d"):
            delta[int(name[1:]) - 1] += c
        else:
            raise SystemExit(2)
    return Weight(lam, tuple(delta))


def cmd_hwv(args):
    eps = _epsilon(args)
    factors = []
    xs = args.x.split(";")
    tgt = None
    if args.level != "bold":
        tgt = phi_words(args.flavor, args.level, eps, eta=1)
    for i, sig in enumerate(args.factors.split(",")):
        x = parse_scalar(xs[i % len(xs)])
        base = (
            WModule(eps, x, args.cutoff)
            if args.flavor == "c"
            else W2Module(eps, x, args.cutoff)
        )
        if tgt:
            base = TruncatedModule(base, tgt)
        if sig in "+-":
            base = RestrictedModule(base, _parity(sig))
        factors.append(base)
    mod = factors[0] if len(factors) == 1 else TensorModule(factors)
    wt = _parse_weight(args.weight, eps)
    rep = find_hw(mod, wt)
    basis = [
        {ket_str(l): c.to_str() if hasattr(c, "to_str") else str(c) for l, c in v.terms.items()}
        for v in rep.basis
    ]
    checks = [
        {
            "id": "hwv",
            "pass": True,
            "weight": wt.to_str(),
            "dimension": rep.dimension,
            "basis": basis,
        }
    ]
    return _emit(args, "hwv", checks)


def cmd_rmatrix(args):
    checks = []
    if args.flavor == "c":
        sigma = tuple(args.sigma.split(","))
        pair = make_c_pair(args.m, sigma, cutoff=args.cutoff, level=args.level)
        rho, dec = solve_R(pair)
        for key in sorted(rho):
            closed = closed_rho_c(sigma, key) if args.level != "underline" else None
            entry = {
                "id": "rho %s" % (key,),
                "component": list(key),
                "rho_num": rho[key].num_str(("z", "z2")),
                "rho_den": rho[key].den_str(("z", "z2")),
                "pass": True,
            }
            if args.level == "bold":
                entry["matches_closed_form"] = rho[key] == closed_rho_c(sigma, key)
                entry["pass"] = entry["matches_closed_form"]
            checks.append(entry)
        pm = rho_pole_multisets(rho, 4 * args.cutoff + 8)
        extra = {
            "poles": {str(k): v[0] for k, v in pm.items()},
            "declared_poles": poles("c", sigma, 4 * args.cutoff + 8),
        }
    else:
        l1, l2 = (int(t) for t in args.l.split(","))
        pair = make_d_pair(args.m, l1, l2, cutoff=args.cutoff, level=args.level)
        rho, dec = solve_R(pair)
        for key in sorted(rho):
            entry = {
                "id": "rho %s" % (key,),
                "component": list(key),
                "rho_num": rho[key].num_str(("z", "z2")),
                "rho_den": rho[key].den_str(("z", "z2")),
                "matches_closed_form": rho[key] == closed_rho_d(l1, l2, *key),
            }
            entry["pass"] = entry["matches_closed_form"]
            checks.append(entry)
        pm = rho_pole_multisets(rho, 4 * args.cutoff + 8)
        extra = {
            "poles": {str(k): v[0] for k, v in pm.items()},
            "declared_poles": poles("d", (l1, l2), 4 * args.cutoff + 8),
        }
    return _emit(args, "rmatrix", checks, extra=extra)


def cmd_fuse(args):
    checks = []
    cs = [parse_scalar(t) for t in args.c.split(",")]
    if len(cs) != 2:
        raise SystemExit(2)
    try:
        if args.flavor == "c":
            sigma = tuple(args.sigma.split(","))
            check_admissible("c", sigma, cs)
        else:
            ls = tuple(int(t) for t in args.l.split(","))
            check_admissible("d", ls, cs)
    except AdmissibilityError as e:
        checks.append(
            {"id": "admissibility", "pass": False, "offending": list(e.offending)}
        )
        return _emit(args, "fuse", checks)
    zc = cs[0] / cs[1]
    if args.flavor == "c":
        pair = make_c_pair(args.m, sigma, cutoff=args.cutoff, level=args.level)
        rho, dec = solve_R(pair, full_window=True)
        kept = None
        if args.level != "bold":
            kept = phi_words("c", args.level, pair.source.eps).kept
        cands = []
        for lam in sigma_component_partitions(sigma, args.cutoff):
            wt = hw_weight(pair.source.eps, lam, 2, "c", kept=kept)
            if wt is not None and wt.degree() <= args.cutoff:
                cands.append((lam, wt))
        image, dims, content, hw_vecs = fuse(
            pair, rho, dec, cs[0], cs[1], cands, maxdeg=args.cutoff
        )
        checks.append(
            {
                "id": "fused-image",
                "pass": image.dim() > 0,
                "nonzero": image.dim() > 0,
                "hw_content": {str(k): v for k, v in content.items() if v},
            }
        )
        if image.dim() and hw_vecs:
            top = max((k for k, v in content.items() if v), key=sum)
            target_c = c_target_module(args.m, sigma, args.cutoff, args.level, zc)
            diag = cyclicity_diagnostic(target_c, hw_vecs[top], image, guard=2)
            checks.append(
                {
                    "id": "cyclicity",
                    "pass": diag["pass"],
                    "note": "consistent with irreducibility"
                    if diag["pass"]
                    else "lowering closure mismatch",
                }
            )
        if args.check_truncation and args.level == "bold":
            from .rmatrix import compare_spans, truncate_image_span

            for side in ("underline", "overline"):
                tgt = phi_words("c", side, pair.source.eps)
                pair_l = make_c_pair(args.m, sigma, cutoff=args.cutoff, level=side)
                rho_l, dec_l = solve_R(pair_l, full_window=True)
                img_l, _, _, _ = fuse(
                    pair_l, rho_l, dec_l, cs[0], cs[1], [], maxdeg=args.cutoff
                )
                tr_img = truncate_image_span(image, tgt.kept, pair_l.target)
                cmp = compare_spans(tr_img, img_l)
                checks.append(
                    {"id": "truncation-%s" % side, "pass": cmp["pass"], **cmp}
                )
    else:
        ls = tuple(int(t) for t in args.l.split(","))
        pair = make_d_pair(args.m, ls[0], ls[1], cutoff=args.cutoff, level=args.level)
        rho, dec = solve_R(pair, full_window=True)
        image, dims, content, hw_vecs = fuse(
            pair, rho, dec, cs[0], cs[1], [], maxdeg=args.cutoff
        )
        checks.append(
            {"id": "fused-image", "pass": image.dim() > 0, "nonzero": image.dim() > 0}
        )
    return _emit(args, "fuse", checks)


def cmd_fundamental(args):
    epsp = EpsilonData(tuple(i % 2 for i in range(2 * args.m + 1)))
    mod = W2Module(epsp, parse_scalar(args.x), args.cutoff)
    rep = build_fundamental(mod, args.l, args.k, check_closure=True)
    checks = [
        {
            "id": "build",
            "pass": rep.e0_certificate
            and rep.e0_closed
            and rep.f0_closed
            and rep.raising_closed,
            "e0_certificate": rep.e0_certificate,
            "e0_closed": rep.e0_closed,
            "f0_closed": rep.f0_closed,
            "raising_closed": rep.raising_closed,
            "dimension_in_window": rep.span.dim(),
        }
    ]
    if args.verify in ("iso", "all") and args.k != args.k2:
        iso = iso_between_k(mod, args.l, args.k, args.k2)
        checks.append(
            {
                "id": "iso k=%d~k=%d" % (args.k, args.k2),
                "pass": iso["dims_match"] and not iso["residuals"],
                "dims_match": iso["dims_match"],
                "residuals": len(iso["residuals"]),
            }
        )
    if args.verify in ("truncation", "all"):
        res = check_fundamental_truncation(args.m, args.l, cutoff=args.cutoff)
        checks.append(
            {
                "id": "overline-truncation",
                "pass": res["ok"],
                "dim": res["dim"],
                "expected": res["expected"],
            }
        )
    return _emit(args, "fundamental", checks)


def cmd_appendix_check(args):
    l1, l2 = (int(t) for t in args.l.split(","))
    checks = []
    if args.which in ("B", "all"):
        res = verify_EF_identities(args.m, l1, l2, rmax=args.rmax, smax=args.smax)
        fails = [t[:5] for t in res if not t[-1]]
        checks.append(
            {
                "id": "ladder-identities",
                "pass": not fails,
                "checked": len(res),
                "failures": fails[:10],
            }
        )
        hw = verify_u_rs_highest(args.m, l1, l2, rmax=args.rmax, smax=args.smax)
        checks.append(
            {
                "id": "u_rs-highest-weight",
                "pass": all(ok for _, _, ok in hw),
                "checked": len(hw),
            }
        )
    if args.which in ("C", "all"):
        for r in range(0, args.rmax + 1):
            for s in range(0, min(l1, l2, args.smax) + 1):
                res = verify_appendix_C(args.m, l1, l2, r, s)
                keys = ["e2F", "C20", "C10", "C00_nonzero", "closing_identity"]
                checks.append(
                    {
                        "id": "coefficients r=%d s=%d" % (r, s),
                        "pass": all(bool(res.get(k, False)) for k in keys),
                        **{k: bool(res.get(k, False)) for k in keys},
                    }
                )
    return _emit(args, "appendix-check", checks)


def cmd_suite(args):
    from .acceptance import run_all

    def progress(line):
        print(line, file=sys.stderr)

    reports = run_all(progress=progress if not args.quiet else None)
    checks = []
    for rep in reports:
        entry = {"id": rep["id"], "pass": rep["pass"]}
        if not rep["pass"]:
            entry["failures"] = rep.get("failures")
        if getattr(args, "timings", False):
            entry["seconds"] = rep["seconds"]
        checks.append(entry)
    return _emit(args, "suite", checks)


def build_parser():
    p = argparse.ArgumentParser(
        prog="qosc",
        description="Exact verification suite for q-oscillator modules of "
        "generalized quantum groups of affine type D",
    )
    p.add_argument("--timings", action="store_true", help="include wall-clock times")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp, module=True):
        sp.add_argument("--cutoff", type=int, default=6)
        sp.add_argument("--out", help="write the JSON report to a file")
        if module:
            sp.add_argument("--epsilon", default="1,0,1,0,1")
            sp.add_argument("--module", choices=["W", "W2"], default="W")
            sp.add_argument("--x", default="1", help="spectral parameter expression")

    sp = sub.add_parser("verify-relations", help="defining relations on a module window")
    common(sp)
    sp.set_defaults(fn=cmd_verify_relations)

    sp = sub.add_parser("verify-phi", help="target-algebra relations through phi")
    common(sp)
    sp.add_argument("--flavor", choices=["c", "d"], required=True)
    sp.add_argument("--side", choices=["underline", "overline"], required=True)
    sp.add_argument("--eta", type=int, default=1, choices=[1, -1])
    sp.set_defaults(fn=cmd_verify_phi)

    sp = sub.add_parser("truncate", help="truncation equivariance and monoidality")
    common(sp)
    sp.add_argument("--flavor", choices=["c", "d"], required=True)
    sp.add_argument("--side", choices=["underline", "overline"], required=True)
    sp.add_argument("--eta", type=int, default=1, choices=[1, -1])
    sp.add_argument("--monoidal", action="store_true")
    sp.add_argument("--y", default="q^2", help="second spectral parameter")
    sp.set_defaults(fn=cmd_truncate)

    sp = sub.add_parser("decompose", help="highest-weight multiplicities")
    sp.add_argument("--cutoff", type=int, default=8)
    sp.add_argument("--out")
    sp.add_argument("--epsilon", default="1,0,1,0,1")
    sp.add_argument("--flavor", choices=["c", "d"], default="c")
    sp.add_argument("--level", choices=["bold", "underline", "overline"], default="bold")
    sp.add_argument("--factors", default="+,+", help="comma list of +, -, or W per factor")
    sp.add_argument("--x", default="q^2;q^-4", help="semicolon list of parameters")
    sp.add_argument("--zeros", action="store_true", help="include zero multiplicities")
    sp.add_argument("--csv", help="also write the multiplicity table as CSV")
    sp.set_defaults(fn=cmd_decompose)

    sp = sub.add_parser("hwv", help="exact highest-weight kernel at a weight")
    sp.add_argument("--cutoff", type=int, default=8)
    sp.add_argument("--out")
    sp.add_argument("--epsilon", default="1,0,1,0,1")
    sp.add_argument("--flavor", choices=["c", "d"], default="c")
    sp.add_argument("--level", choices=["bold", "underline", "overline"], default="bold")
    sp.add_argument("--factors", default="+,+")
    sp.add_argument("--x", default="q^2;q^-4")
    sp.add_argument("--weight", required=True, help="e.g. '2*L+1*d4+1*d5'")
    sp.set_defaults(fn=cmd_hwv)

    sp = sub.add_parser("rmatrix", help="solve the normalized R matrix")
    sp.add_argument("--cutoff", type=int, default=6)
    sp.add_argument("--out")
    sp.add_argument("--flavor", choices=["c", "d"], required=True)
    sp.add_argument("--sigma", default="+,+")
    sp.add_argument("--l", default="1,1")
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument(
        "--level", choices=["bold", "underline", "overline"], default="bold"
    )
    sp.set_defaults(fn=cmd_rmatrix)

    sp = sub.add_parser("fuse", help="fused image of a specialized R matrix")
    sp.add_argument("--cutoff", type=int, default=6)
    sp.add_argument("--out")
    sp.add_argument("--flavor", choices=["c", "d"], default="c")
    sp.add_argument("--sigma", default="+,+")
    sp.add_argument("--l", default="1,1")
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--level", choices=["bold", "underline"], default="bold")
    sp.add_argument("--c", required=True, help="comma list, e.g. q^-6,1")
    sp.add_argument("--check-truncation", action="store_true")
    sp.set_defaults(fn=cmd_fuse)

    sp = sub.add_parser("fundamental", help="build and verify W_{l,k}")
    sp.add_argument("--cutoff", type=int, default=10)
    sp.add_argument("--out")
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--k2", type=int, default=0)
    sp.add_argument("--x", default="1")
    sp.add_argument("--verify", choices=["build", "iso", "truncation", "all"], default="all")
    sp.set_defaults(fn=cmd_fundamental)

    sp = sub.add_parser("appendix-check", help="ladder and coefficient identities")
    sp.add_argument("--out")
    sp.add_argument("--which", choices=["B", "C", "all"], default="all")
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--l", default="1,1")
    sp.add_argument("--rmax", type=int, default=1)
    sp.add_argument("--smax", type=int, default=1)
    sp.set_defaults(fn=cmd_appendix_check)

    sp = sub.add_parser("suite", help="run the full acceptance battery")
    sp.add_argument("--out")
    sp.add_argument("--quiet", action="store_true")
    sp.set_defaults(fn=cmd_suite)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    args._t0 = time.time()
    if getattr(args, "k", "missing") is None:
        args.k = args.l
    try:
        return args.fn(args)
    except (ValueError, ArithmeticError) as exc:
        print(json.dumps({"schema": SCHEMA, "error": str(exc)}, indent=2))
        return 1


if __name__ == "__main__":
    sys.exit(main())
