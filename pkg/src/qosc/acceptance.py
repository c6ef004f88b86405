"""The acceptance battery: every headline claim as one machine check.

Each criterion function returns a dict with an "id", a boolean "pass" and
enough detail to audit a failure.  `run_all` executes the battery in
order; the CLI `suite` subcommand and tests/test_acceptance.py both call
into this module so the two entry points cannot drift apart.
"""

from __future__ import annotations

import time

from .algebraops import (
    check_monoidality,
    check_phi_relations,
    check_relation_on,
    check_relations,
    check_truncation_equivariance,
    phi_words,
    relation_suite,
    truncate_vector,
)
from .decomp import classical_dim, decompose, hw_weight
from .fockmod import (
    FockVector,
    RestrictedModule,
    TensorModule,
    TruncatedModule,
    W2Module,
    WModule,
    act,
)
from .fundrep import (
    check_fundamental_truncation,
    verify_appendix_C,
    verify_EF_identities,
    verify_u_rs_highest,
)
from .lattice import EpsilonData
from .rmatrix import (
    compatible_bold_rho,
    AdmissibilityError,
    c_target_module,
    check_admissible,
    closed_rho_c,
    closed_rho_d,
    compare_spans,
    cyclicity_diagnostic,
    fuse,
    make_c_pair,
    make_d_pair,
    pole_exponents_d,
    rho_d_product_part,
    rho_pole_multisets,
    solve_R,
    truncate_image_span,
    verify_truncated_operator,
)
from .scalars import ONE, Scalar, Z1, parse_scalar

BOLD5 = EpsilonData((1, 0, 1, 0, 1))
BOLD7 = EpsilonData((1, 0, 1, 0, 1, 0, 1))
BOLDP5 = EpsilonData((0, 1, 0, 1, 0))

SIGMAS = [("+", "+"), ("-", "-"), ("+", "-"), ("-", "+")]


def _report(rid, ok, **details):
    out = {"id": rid, "pass": bool(ok)}
    out.update(details)
    return out


# -- criterion 1: the defining relation suite ---------------------------------


def criterion_1():
    checks = []
    w5 = WModule(BOLD5, Z1, cutoff=8)
    reps = check_relations(w5)
    checks.append(("W(x) eps=(10101) N=8", [r for r in reps if not r.passed]))
    w7 = WModule(BOLD7, Z1, cutoff=8)
    reps = check_relations(w7)
    checks.append(("W(x) eps=(1010101) N=8", [r for r in reps if not r.passed]))
    w2 = W2Module(BOLDP5, Z1, cutoff=6)
    reps = check_relations(w2)
    checks.append(("W2(x) eps=(01010) N=6", [r for r in reps if not r.passed]))
    bad = {name: [r.relation for r in fails] for name, fails in checks if fails}
    return _report("1-relations", not bad, failures=bad)


# -- criterion 2: phi homomorphisms -------------------------------------------


def criterion_2():
    bad = {}
    for host, module in (
        (BOLD5, WModule(BOLD5, Scalar.from_int(1), cutoff=8)),
        (BOLD7, WModule(BOLD7, Scalar.from_int(1), cutoff=8)),
    ):
        for side in ("underline", "overline"):
            for eta in (1, -1):
                tgt = phi_words("c", side, host, eta=eta)
                reps = check_phi_relations(tgt, module)
                fails = [r.relation for r in reps if not r.passed]
                if fails:
                    bad["c/%s eta=%d n=%d" % (side, eta, host.n)] = fails
    w2 = W2Module(BOLDP5, Scalar.from_int(1), cutoff=6)
    for side in ("underline", "overline"):
        for eta in (1, -1):
            tgt = phi_words("d", side, BOLDP5, eta=eta)
            reps = check_phi_relations(tgt, w2)
            fails = [r.relation for r in reps if not r.passed]
            if fails:
                bad["d/%s eta=%d" % (side, eta)] = fails
    # the two explicitly displayed Serre identities at the type-c end node
    tgt = phi_words("c", "underline", BOLD5)
    w5 = WModule(BOLD5, Scalar.from_int(1), cutoff=8)
    from .words import WordExpr

    names = ["t-serre:e0,e1", "t-serre:e1,e0"]
    from .algebraops import target_relation_suite

    suite = dict(target_relation_suite(tgt))
    endnode = []
    for nm in names:
        expr = suite[nm].substituted(tgt.phi_e, tgt.phi_f, WordExpr.k)
        rep = check_relation_on(w5, nm, expr)
        endnode.append((nm, rep.passed))
        if not rep.passed:
            bad["end-node-serre:" + nm] = [nm]
    return _report("2-phi-homomorphisms", not bad, failures=bad, end_node_serre=endnode)


# -- criterion 3: truncation functor ------------------------------------------


def criterion_3():
    bad = {}
    w5 = WModule(BOLD5, Scalar.from_int(1), cutoff=8)
    for side in ("underline", "overline"):
        tgt = phi_words("c", side, BOLD5)
        reps = check_truncation_equivariance(tgt, w5, maxdeg=6)
        fails = [r.relation for r in reps if not r.passed]
        if fails:
            bad["equivariance c/%s" % side] = fails
        # idempotence of the projection
        for label in w5.enumerate_labels(4):
            b = FockVector.basis(label)
            t1 = truncate_vector(b, tgt.kept)
            if not (truncate_vector(t1, tgt.kept) - t1).is_zero():
                bad.setdefault("idempotence", []).append(label)
                break
    # monoidality on W(x) (x) W(y)
    tgt = phi_words("c", "underline", BOLD5)
    wx = WModule(BOLD5, parse_scalar("q^2"), cutoff=5)
    wy = WModule(BOLD5, parse_scalar("q^-4"), cutoff=5)
    t_amb = TensorModule([wx, wy])
    t_tr = TensorModule([TruncatedModule(wx, tgt), TruncatedModule(wy, tgt)])
    reps = check_monoidality(tgt, t_amb, t_tr, maxdeg=3)
    fails = [r.relation for r in reps if not r.passed]
    if fails:
        bad["monoidality c/underline"] = fails
    tgto = phi_words("c", "overline", BOLD5)
    t_tro = TensorModule([TruncatedModule(wx, tgto), TruncatedModule(wy, tgto)])
    reps = check_monoidality(tgto, t_amb, t_tro, maxdeg=3)
    fails = [r.relation for r in reps if not r.passed]
    if fails:
        bad["monoidality c/overline"] = fails
    # fundamental truncation dimensions (type d, m = 2): 5, 4, 1, 0
    dims = {}
    for l in range(0, 4):
        res = check_fundamental_truncation(2, l, cutoff=l + 7)
        dims[l] = (res["dim"], res["expected"])
        if not res["ok"]:
            bad["fundamental-truncation l=%d" % l] = [res]
    return _report("3-truncation", not bad, failures=bad, fundamental_dims=dims)


# -- criterion 4: classical decompositions ------------------------------------


def criterion_4():
    bad = {}
    N = 8
    par = {"+": 0, "-": 1}

    def levels(x):
        w = WModule(BOLD5, x, cutoff=N)
        yield "bold", w, None
        for side in ("underline", "overline"):
            tgt = phi_words("c", side, BOLD5)
            yield side, TruncatedModule(w, tgt), tgt

    expected_sets = {
        ("+", "+"): {(2 * k,) if k else () for k in range(0, 5)},
        ("-", "-"): {(1, 1)} | {(2 * k,) for k in range(1, 5)},
        ("+", "-"): {(2 * k + 1,) for k in range(0, 4)},
        ("-", "+"): {(2 * k + 1,) for k in range(0, 4)},
    }
    for sigma in SIGMAS:
        for (lvname, mx, tgt), (_, my, _) in zip(
            levels(parse_scalar("q^2")), levels(parse_scalar("q^-4"))
        ):
            T = TensorModule(
                [RestrictedModule(mx, par[sigma[0]]), RestrictedModule(my, par[sigma[1]])]
            )
            res = decompose(T, "c", 2, N)
            got = {lam: d for lam, d, _ in res if d}
            kept = tgt.kept if tgt else None
            want = {
                lam: 1
                for lam in expected_sets[sigma]
                if hw_weight(BOLD5, lam, 2, "c", kept=kept) is not None
            }
            if got != want:
                bad["sigma=%s level=%s" % ("".join(sigma), lvname)] = {
                    "got": sorted(got),
                    "want": sorted(want),
                }
    # type d: multiplicity l+1 on (l), l <= 4
    w2 = W2Module(BOLDP5, parse_scalar("q^2"), cutoff=6)
    res = decompose(w2, "d", 1, 5)
    got = {lam: d for lam, d, _ in res if d}
    want = {(l,) if l else (): l + 1 for l in range(0, 6)}
    if got != want:
        bad["W2 bold-prime"] = {"got": got, "want": want}
    tgtu = phi_words("d", "underline", BOLDP5)
    res = decompose(TruncatedModule(w2, tgtu), "d", 1, 5)
    got = {lam: d for lam, d, _ in res if d}
    if got != want:
        bad["W2 underline-prime"] = {"got": got, "want": want}
    tgto = phi_words("d", "overline", BOLDP5)
    res = decompose(TruncatedModule(w2, tgto), "d", 1, 5)
    got = {lam: d for lam, d, _ in res if d}
    want_over = {(l,) if l else (): l + 1 for l in range(0, 3)}  # (l) needs l <= m
    if got != want_over:
        bad["W2 overline-prime"] = {"got": got, "want": want_over}
    # cross-check the desk-scale classical dimensions against hw counts
    wfull_x = WModule(BOLD5, parse_scalar("q^2"), cutoff=6)
    wfull_y = WModule(BOLD5, parse_scalar("q^-4"), cutoff=6)
    res = decompose(TensorModule([wfull_x, wfull_y]), "c", 2, 6)
    for lam, d, _ in res:
        if d and d != classical_dim("O", 2, lam):
            bad["O2-dim %s" % (lam,)] = {"got": d}
    return _report("4-decomposition", not bad, failures=bad)


# -- criterion 5: spectral decomposition, type c ------------------------------


def criterion_5(cutoff=7):
    bad = {}
    details = {}
    for sigma in SIGMAS:
        pair_b = make_c_pair(2, sigma, cutoff=cutoff, level="bold")
        pair_u = make_c_pair(2, sigma, cutoff=cutoff, level="underline")
        pair_o = make_c_pair(2, sigma, cutoff=cutoff, level="overline")
        rho_u, dec_u = solve_R(pair_u)
        rho_o, dec_o = solve_R(pair_o)
        needed = sorted(
            set(dec_u.blocks) | set(dec_o.blocks),
            key=lambda w: (w.degree(), w.delta),
        )
        rho_b, dec_b = solve_R(pair_b, needed_weights=needed)
        mism = [k for k in rho_b if rho_b[k] != closed_rho_c(sigma, k)]
        if mism:
            bad["closed-form %s" % ("".join(sigma),)] = mism
        details["components %s" % "".join(sigma)] = sorted(rho_b)
        # operator-level truncation identity (convention-free)
        for lvname, dec_l, rho_l in (("underline", dec_u, rho_u), ("overline", dec_o, rho_o)):
            rep = verify_truncated_operator(dec_b, rho_b, dec_l, rho_l)
            if not rep["pass"]:
                bad["tr-operator %s %s" % ("".join(sigma), lvname)] = rep["failures"]
        # coefficient equality in truncation-compatible normalization
        for lvname, pair_l, rho_l in (("underline", pair_u, rho_u), ("overline", pair_o, rho_o)):
            expected, scales, c0 = compatible_bold_rho(pair_b, dec_b, pair_l, rho_b)
            for key, val in expected.items():
                if rho_l[key] != val:
                    bad["rho-equality %s %s %s" % ("".join(sigma), lvname, key)] = {
                        "scale": scales[key].to_str()
                    }
    return _report("5-spectral-type-c", not bad, failures=bad, **details)


# -- criterion 6: spectral decomposition, type d ------------------------------


def criterion_6():
    bad = {}
    details = {}
    for (l1, l2, N) in ((1, 1, 6), (1, 2, 7), (2, 2, 8)):
        pair = make_d_pair(2, l1, l2, cutoff=N, level="underline")
        rho, dec = solve_R(pair)
        mism = [k for k in rho if rho[k] != closed_rho_d(l1, l2, *k)]
        if mism:
            bad["closed-form (%d,%d)" % (l1, l2)] = mism
        details["components (%d,%d)" % (l1, l2)] = sorted(rho)
        # D constants are produced by the recursions and are z-free units
        for key, val in rho.items():
            D = val / rho_d_product_part(l1, l2, *key)
            if any(e[0] for e in D.num) or any(e[0] for e in D.den):
                bad["D-constant (%d,%d) %s" % (l1, l2, key)] = D.to_str()
        # pole exponents within the declared set
        declared = set(pole_exponents_d(l1, l2, 64))
        for key, (ks, leftover) in rho_pole_multisets(rho, 64).items():
            if not set(ks) <= declared or list(leftover) != [0]:
                bad["poles (%d,%d) %s" % (l1, l2, key)] = {
                    "exponents": ks,
                    "declared": sorted(declared),
                }
    # bold-prime level agrees as an operator (small window)
    pair_b = make_d_pair(2, 1, 1, cutoff=4, level="bold")
    rho_b, dec_b = solve_R(pair_b)
    mism = [k for k in rho_b if rho_b[k] != closed_rho_d(1, 1, *k)]
    if mism:
        bad["bold-prime closed-form (1,1)"] = mism
    return _report("6-spectral-type-d", not bad, failures=bad, **details)


# -- criterion 7: highest-weight formulas -------------------------------------


def criterion_7():
    bad = {}
    for (m, l1, l2) in ((2, 1, 1), (2, 2, 1), (3, 2, 3)):
        res = verify_u_rs_highest(m, l1, l2, rmax=2, smax=2)
        fails = [(r, s) for r, s, ok in res if not ok]
        if fails:
            bad["u_rs kernel m=%d (%d,%d)" % (m, l1, l2)] = fails
    for (m, l1, l2, rmax, smax) in ((2, 1, 1, 1, 1), (2, 2, 1, 1, 1), (3, 2, 3, 2, 2)):
        res = verify_EF_identities(m, l1, l2, rmax=rmax, smax=smax)
        fails = [t[:5] for t in res if not t[-1]]
        if fails:
            bad["EF m=%d (%d,%d)" % (m, l1, l2)] = fails[:5]
    coeffs = {}
    for (l1, l2, r, s) in ((1, 1, 1, 0), (2, 2, 1, 1), (1, 1, 0, 0)):
        res = verify_appendix_C(2, l1, l2, r, s)
        coeffs["(%d,%d,%d,%d)" % (l1, l2, r, s)] = res
        keys = ["e2F", "C20", "C10", "C00_nonzero", "closing_identity"]
        if not all(res.get(k, False) for k in keys):
            bad["coefficients (%d,%d,%d,%d)" % (l1, l2, r, s)] = res
    return _report("7-hw-formulas", not bad, failures=bad, coefficient_identities=coeffs)


# -- criterion 8: fusion --------------------------------------------------------


def criterion_8(cutoff=6):
    bad = {}
    details = {}
    host = BOLD5
    for l in (1, 2):
        sigma = ("+", "+") if l % 2 == 0 else ("+", "-")
        zc = parse_scalar("q^-%d" % (2 * l + 2))
        check_admissible("c", sigma, [zc, ONE])
        pair = make_c_pair(2, sigma, cutoff=cutoff, level="bold")
        rho, dec = solve_R(pair, full_window=True)
        cands = []
        from .rmatrix import sigma_component_partitions

        for lam in sigma_component_partitions(sigma, cutoff):
            wt = hw_weight(host, lam, 2, "c")
            if wt is not None and wt.degree() <= cutoff:
                cands.append((lam, wt))
        image, dims, content, hw_vecs = fuse(pair, rho, dec, zc, ONE, cands, maxdeg=cutoff)
        got = {k for k, v in content.items() if v}
        want = set()
        i = 0
        while l - 2 * i >= 0:
            lam = (l - 2 * i,) if l - 2 * i else ()
            if hw_weight(host, lam, 2, "c") is not None:
                want.add(lam)
            i += 1
        details["content l=%d" % l] = sorted(got)
        if image.dim() == 0 or got != want:
            bad["fused W_%d content" % l] = {"got": sorted(got), "want": sorted(want)}
            continue
        top = max(want, key=lambda t: sum(t))
        target_c = c_target_module(2, sigma, cutoff, "bold", zc)
        diag = cyclicity_diagnostic(target_c, hw_vecs[top], image, guard=2)
        if not diag["pass"]:
            bad["cyclicity W_%d" % l] = diag["mismatches"]
        # truncation compatibility: tr(image at bold) == image at level
        for side in ("underline", "overline"):
            tgt = phi_words("c", side, host)
            pair_l = make_c_pair(2, sigma, cutoff=cutoff, level=side)
            rho_l, dec_l = solve_R(pair_l, full_window=True)
            cands_l = [
                (lam, hw_weight(host, lam, 2, "c", kept=tgt.kept))
                for lam in sigma_component_partitions(sigma, cutoff)
            ]
            cands_l = [(a, b) for a, b in cands_l if b is not None and b.degree() <= cutoff]
            img_l, _, _, _ = fuse(pair_l, rho_l, dec_l, zc, ONE, cands_l, maxdeg=cutoff)
            tr_img = truncate_image_span(image, tgt.kept, pair_l.target)
            cmp = compare_spans(tr_img, img_l)
            if not cmp["pass"]:
                bad["fusion-truncation l=%d %s" % (l, side)] = cmp
    # a case where truncation kills the top component (zero branch of the
    # component census): l = 4, whose (4,) part dies at the overline level
    l, sigma = 4, ("+", "+")
    zc = parse_scalar("q^-10")
    pair = make_c_pair(2, sigma, cutoff=cutoff, level="bold")
    rho, dec = solve_R(pair, full_window=True)
    cands = [
        (lam, hw_weight(host, lam, 2, "c"))
        for lam in [(), (2,), (4,), (6,)]
    ]
    cands = [(a, b) for a, b in cands if b is not None and b.degree() <= cutoff]
    image, dims, content, hw_vecs = fuse(pair, rho, dec, zc, ONE, cands, maxdeg=cutoff)
    got = {k for k, v in content.items() if v}
    if got != {(), (2,), (4,)}:
        bad["fused W_4 content"] = sorted(got)
    tgt = phi_words("c", "overline", host)
    pair_o = make_c_pair(2, sigma, cutoff=cutoff, level="overline")
    rho_o, dec_o = solve_R(pair_o, full_window=True)
    cands_o = [
        (lam, hw_weight(host, lam, 2, "c", kept=tgt.kept)) for lam in [(), (2,)]
    ]
    cands_o = [(a, b) for a, b in cands_o if b is not None]
    img_o, _, content_o, _ = fuse(pair_o, rho_o, dec_o, zc, ONE, cands_o, maxdeg=cutoff)
    tr_img = truncate_image_span(image, tgt.kept, pair_o.target)
    cmp = compare_spans(tr_img, img_o)
    if not cmp["pass"]:
        bad["fusion-truncation l=4 overline"] = cmp
    # type d fusion truncation, l = (1,1), generic admissible c
    zc = parse_scalar("q^-3")
    check_admissible("d", (1, 1), [zc, ONE])
    pair_db = make_d_pair(2, 1, 1, cutoff=4, level="bold")
    rho_db, dec_db = solve_R(pair_db, full_window=True)
    img_db, _, _, _ = fuse(pair_db, rho_db, dec_db, zc, ONE, [], maxdeg=4)
    tgt_d = phi_words("d", "underline", BOLDP5)
    pair_du = make_d_pair(2, 1, 1, cutoff=4, level="underline")
    rho_du, dec_du = solve_R(pair_du, full_window=True)
    img_du, _, _, _ = fuse(pair_du, rho_du, dec_du, zc, ONE, [], maxdeg=4)
    tr_img = truncate_image_span(img_db, tgt_d.kept, pair_du.target)
    cmp = compare_spans(tr_img, img_du)
    if not cmp["pass"]:
        bad["fusion-truncation d (1,1)"] = cmp
    # inadmissible parameter must be rejected
    try:
        check_admissible("c", ("+", "+"), [parse_scalar("q^2"), ONE])
        bad["admissibility"] = "pole q^2 not rejected"
    except AdmissibilityError as e:
        details["rejected"] = e.offending
    return _report("8-fusion", not bad, failures=bad, **details)


# -- criterion 9: negative controls -------------------------------------------


class _CorruptedW:
    """W(x) with the sign of e_0 flipped; must fail the e-f relation."""

    def __init__(self, base):
        self.base = base
        self.eps = base.eps
        self.n = base.n
        self.cutoff = base.cutoff
        self.algebra = base.algebra
        self.lam_level = base.lam_level
        self.x = base.x

    def degree(self, label):
        return self.base.degree(label)

    def weight_of(self, label):
        return self.base.weight_of(label)

    def atom_shift(self, atom):
        return self.base.atom_shift(atom)

    def labels_by_delta(self, dvec):
        return self.base.labels_by_delta(dvec)

    def enumerate_labels(self, *a, **k):
        return self.base.enumerate_labels(*a, **k)

    def apply_gen(self, gen, label):
        out = self.base.apply_gen(gen, label)
        if gen == ("e", 0):
            return [(l, -c) for l, c in out]
        return out


def criterion_9():
    bad = {}
    w = _CorruptedW(WModule(BOLD5, Scalar.from_int(1), cutoff=6))
    suite = dict(relation_suite(BOLD5))
    rep = check_relation_on(w, "ef:0,0", suite["ef:0,0"])
    if rep.passed:
        bad["corrupted-action"] = "e0 sign flip not detected"
    counterexample = None if rep.passed else rep.to_json()["counterexample"]
    try:
        check_admissible("c", ("+", "+"), [parse_scalar("q^6"), ONE])
        bad["pole-gate"] = "q^6 accepted for (+,+)"
        offending = None
    except AdmissibilityError as e:
        offending = e.offending
    return _report(
        "9-negative-controls",
        not bad,
        failures=bad,
        counterexample=counterexample,
        rejected=offending,
    )


CRITERIA = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
]


def run_all(progress=None):
    out = []
    for fn in CRITERIA:
        t0 = time.time()
        rep = fn()
        rep["seconds"] = round(time.time() - t0, 1)
        out.append(rep)
        if progress:
            progress("%-22s %s  (%.1fs)" % (rep["id"], "PASS" if rep["pass"] else "FAIL", rep["seconds"]))
    return out
