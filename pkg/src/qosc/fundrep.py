"""Fundamental-type submodules of the rank-two Fock space (type d).

W_{l,k} is generated from |k e_n> (x) |(l-k) e_n> inside W^(x2)(x); the
explicit highest-weight vectors u_{r,s} of the tensor square of two
fundamentals, the ladder operator words, and their exact identities live
here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebraops import phi_words, truncate_vector
from .fockmod import (
    FockVector,
    TensorModule,
    TruncatedModule,
    W2Module,
    act,
    eval_word,
)
from .lattice import EpsilonData, Weight
from .linalg import RowBasis, solve_unique
from .scalars import (
    ONE,
    SZERO,
    Q,
    Scalar,
    SpectralScalar,
    Z1,
    Z2,
    q_power,
    qint,
)
from .words import WordExpr, divided_power


class Subspace:
    """A weight-graded span of FockVectors inside a module window."""

    def __init__(self, module):
        self.module = module
        self.blocks = {}  # Weight -> (RowBasis, [vectors])

    def _wt(self, vec):
        return self.module.weight_of(next(iter(vec.terms)))

    def add(self, vec: FockVector):
        if vec.is_zero():
            return False
        wt = self._wt(vec)
        basis, vecs = self.blocks.setdefault(wt, (RowBasis(), []))
        ok, _ = basis.add(vec.terms)
        if ok:
            vecs.append(vec)
        return ok

    def contains(self, vec: FockVector):
        if vec.is_zero():
            return True
        wt = self._wt(vec)
        blk = self.blocks.get(wt)
        return blk is not None and blk[0].contains(vec.terms)

    def express(self, vec: FockVector):
        """Coordinates over this block's stored vectors, or None."""
        if vec.is_zero():
            return {}
        wt = self._wt(vec)
        blk = self.blocks.get(wt)
        if blk is None:
            return None
        return blk[0].express(vec.terms)

    def block_vectors(self, wt):
        blk = self.blocks.get(wt)
        return blk[1] if blk else []

    def dims(self):
        return {wt: len(v) for wt, (b, v) in self.blocks.items()}

    def dim(self):
        return sum(len(v) for _, v in self.blocks.values())


def v_lk_label(l: int, k: int, n: int):
    en = tuple(0 if i < n - 1 else 1 for i in range(n))
    m = tuple(k * e for e in en)
    mp = tuple((l - k) * e for e in en)
    return (m, mp)


@dataclass
class FundamentalReport:
    l: int
    k: int
    span: Subspace
    e0_certificate: bool = True
    e0_closed: bool = True
    f0_closed: bool = True
    raising_closed: bool = True
    failures: list = field(default_factory=list)


def lowering_indices(algebra):
    return tuple(j for j in algebra.gen_indices if j != 0)


def e0_certificate_word(n: int) -> WordExpr:
    """The f-word equal to [l+1] * x^-1 e_0 on v_{l,k} (l+1 scaled later):
    (f_2..f_{n-2}) f_{n-1} (f_1..f_{n-2}) f_n - (f_2..f_{n-2}) f_n (f_1..f_{n-2}) f_{n-1}."""

    def prod(idx):
        w = WordExpr.unit()
        for i in idx:
            w = w * WordExpr.f(i)
        return w

    head = prod(range(2, n - 1))
    mid1 = prod(range(1, n - 1))
    t1 = head * WordExpr.f(n - 1) * mid1 * WordExpr.f(n)
    t2 = head * WordExpr.f(n) * mid1 * WordExpr.f(n - 1)
    return t1 - t2


def build_fundamental(module, l: int, k: int, check_closure=True):
    """BFS closure of v_{l,k} under the lowering operators of the finite
    subalgebra; verifies e_0/f_0 stability and the explicit e_0 identity."""
    n = module.n
    label = v_lk_label(l, k, n)
    v0 = FockVector.basis(label)
    span = Subspace(module)
    span.add(v0)
    lower = lowering_indices(module.algebra)
    queue = [v0]
    while queue:
        v = queue.pop(0)
        for j in lower:
            img = act(module, ("f", j), v)
            if img.is_zero() or img.overflow:
                continue
            if span.add(img):
                queue.append(img)
    report = FundamentalReport(l=l, k=k, span=span)
    if not check_closure:
        return report

    # eq-style certificate: x^-1 e_0 v_{l,k} equals the displayed f-word / [l+1]
    if module.algebra.gen_indices == module.eps.I:
        e0v = act(module, ("e", 0), v0)
        word = e0_certificate_word(n)
        rhs = eval_word(word, v0, module).scale(qint(l + 1).inverse())
        x = module.x if not hasattr(module, "base") else module.base.x
        lhs = e0v.scale(_inv(x))
        if not (lhs - rhs).is_zero():
            report.e0_certificate = False
            report.failures.append("e0-certificate")

    for wt, (basisrows, vecs) in sorted(
        span.blocks.items(), key=lambda kv: (kv[0].degree(), kv[0].delta)
    ):
        for v in vecs:
            deg = wt.degree()
            if deg + 2 <= module.cutoff:
                img = act(module, ("e", 0), v)
                if not img.overflow and not span.contains(img):
                    report.e0_closed = False
                    report.failures.append(("e0", wt))
            img = act(module, ("f", 0), v)
            if not img.overflow and not span.contains(img):
                report.f0_closed = False
                report.failures.append(("f0", wt))
            for j in lower:
                img = act(module, ("e", j), v)
                if not img.overflow and not span.contains(img):
                    report.raising_closed = False
                    report.failures.append(("e%d" % j, wt))
    return report


def _inv(x):
    if isinstance(x, (Scalar, SpectralScalar)):
        return x.inverse()
    raise TypeError("spectral parameter must be Scalar or SpectralScalar")


def iso_between_k(module, l: int, k1: int, k2: int):
    """Matched-word map W_{l,k1} -> W_{l,k2}; checks that it intertwines
    e_0 and f_0 and that block dimensions agree."""
    n = module.n
    v1 = FockVector.basis(v_lk_label(l, k1, n))
    v2 = FockVector.basis(v_lk_label(l, k2, n))
    span1 = Subspace(module)
    span1.add(v1)
    pairs = {0: (v1, v2)}
    order = [0]
    queue = [(v1, v2)]
    lower = lowering_indices(module.algebra)
    idx = 0
    while queue:
        a, b = queue.pop(0)
        for j in lower:
            ia = act(module, ("f", j), a)
            if ia.is_zero() or ia.overflow:
                continue
            if span1.add(ia):
                ib = act(module, ("f", j), b)
                idx += 1
                pairs[len(pairs)] = (ia, ib)
                queue.append((ia, ib))
    span2 = Subspace(module)
    for _, (a, b) in sorted(pairs.items()):
        span2.add(b)
    dims_ok = span1.dims() == span2.dims()

    def mapped(vec):
        if vec.is_zero():
            return FockVector()
        coords = span1.express(vec)
        if coords is None:
            return None
        # express() coordinates refer to block-local acceptance order;
        # rebuild through the stored per-block vectors
        wt = module.weight_of(next(iter(vec.terms)))
        vecs1 = span1.block_vectors(wt)
        out = FockVector()
        for i, c in coords.items():
            out = out + _partner(pairs, vecs1[i]).scale(c)
        return out

    def _partner(pairs, a_vec):
        for a, b in pairs.values():
            if a is a_vec:
                return b
        raise KeyError("unmatched basis vector")

    residuals = []
    for key in sorted(pairs):
        a, b = pairs[key]
        for gen in (("e", 0), ("f", 0)):
            ia = act(module, gen, a)
            ib = act(module, gen, b)
            if ia.overflow or ib.overflow:
                continue
            im = mapped(ia)
            if im is None or not (im - ib).is_zero():
                residuals.append((gen, key))
    return {"dims_match": dims_ok, "residuals": residuals, "pairs": len(pairs)}


# -- explicit highest-weight vectors u_{r,s} ---------------------------------


def fundamental_pair_modules(m: int, x1, x2, cutoff: int, level="underline"):
    """The tensor product W_{l1}(x1) (x) W_{l2}(x2) lives inside this pair of
    rank-two Fock modules; level 'underline' acts through type-d phi maps,
    'bold' through the ambient algebra."""
    n = 2 * m + 1
    epsp = EpsilonData(tuple(i % 2 for i in range(n)))
    A = W2Module(epsp, x1, cutoff)
    B = W2Module(epsp, x2, cutoff)
    if level == "bold":
        return TensorModule([A, B]), None
    tgt = phi_words("d", "underline", epsp)
    return TensorModule([TruncatedModule(A, tgt), TruncatedModule(B, tgt)]), tgt


def u_rs_component(tensor, m: int, l1: int, l2: int, r: int, s: int, i: int, j: int):
    """u^{i,j}_{r,s} = f_{m+1}^(i) f_m^(j) v_{l1}  (x)  f_{m+1}^(r-i) f_m^(s-j) v_{l2}.

    Zero exactly when one of the four divided-power exponents is negative;
    beyond that the natural formula vector is used (it may vanish on its
    own when a divided power overshoots).
    """
    if i < 0 or j < 0 or r - i < 0 or s - j < 0:
        return FockVector()
    n = tensor.n
    f1, f2 = tensor.factors
    w1 = FockVector.basis(v_lk_label(l1, l1, n))
    w2 = FockVector.basis(v_lk_label(l2, l2, n))
    word1 = divided_power("f", m + 1, i) * divided_power("f", m, j)
    word2 = divided_power("f", m + 1, r - i) * divided_power("f", m, s - j)
    a = eval_word(word1, w1, f1)
    b = eval_word(word2, w2, f2)
    out = FockVector()
    for la, ca in a.terms.items():
        for lb, cb in b.terms.items():
            out = out + FockVector({(la, lb): ONE}).scale(ca * cb)
    out.overflow = a.overflow or b.overflow
    return out


def u_rs(tensor, m: int, l1: int, l2: int, r: int, s: int):
    """The highest-weight vector of the (r, s) component, coefficient of
    u^{0,0}_{r,s} normalized to 1."""
    if r < 0 or not (0 <= s <= min(l1, l2)):
        return FockVector()
    out = FockVector()
    for i in range(r + 1):
        ai = _A_coeff(l1, l2, r, i)
        for j in range(s + 1):
            bj = _B_coeff(l1, l2, s, j)
            term = u_rs_component(tensor, m, l1, l2, r, s, i, j)
            out = out + term.scale(ai * bj)
    return out


def _A_coeff(l1, l2, r, i) -> Scalar:
    acc = ONE
    for k in range(1, i + 1):
        acc = (
            acc
            * q_power(2 * k - 2 - l2 - 2 * r)
            * qint(r + l2 - k + 2)
            * qint(l1 + k + 1).inverse()
        )
    return acc if i % 2 == 0 else -acc


def _B_coeff(l1, l2, s, j) -> Scalar:
    acc = ONE
    for k in range(1, j + 1):
        acc = (
            acc
            * q_power(2 * k + l2 - 2 * s)
            * qint(l2 - s + k)
            * qint(l1 - k + 1).inverse()
        )
    return acc if j % 2 == 0 else -acc


# -- ladder words -------------------------------------------------------------


def bold_word(which: str, m: int) -> WordExpr:
    """The four degree-lowering/raising words between adjacent components."""

    def eprod(idx):
        w = WordExpr.unit()
        for i in idx:
            w = w * WordExpr.e(i)
        return w

    def fprod(idx):
        w = WordExpr.unit()
        for i in idx:
            w = w * WordExpr.f(i)
        return w

    desc = list(range(m - 1, 0, -1))  # e_{m-1} ... e_1
    desc2 = list(range(m - 1, 1, -1))  # e_{m-1} ... e_2
    asc2 = list(range(2, m))  # f_2 ... f_{m-1}
    asc1 = list(range(1, m))  # f_1 ... f_{m-1}
    if which == "F_m":
        return eprod(desc) * WordExpr.e(m + 1) * eprod(desc2) * WordExpr.e(0)
    if which == "F_m+1":
        return eprod(desc) * WordExpr.e(m) * eprod(desc2) * WordExpr.e(0)
    if which == "E_m":
        return WordExpr.f(0) * fprod(asc2) * WordExpr.f(m + 1) * fprod(asc1)
    if which == "E_m+1":
        return WordExpr.f(0) * fprod(asc2) * WordExpr.f(m) * fprod(asc1)
    raise ValueError("which must be F_m, F_m+1, E_m or E_m+1")


def vanishing_word(m: int) -> WordExpr:
    """f_0 (f_2...f_{m-1}) (f_1...f_{m-1}), which kills every u^{i,j}_{r,s}."""
    w = WordExpr.f(0)
    for i in range(2, m):
        w = w * WordExpr.f(i)
    for i in range(1, m):
        w = w * WordExpr.f(i)
    return w


def verify_EF_identities(m: int, l1: int, l2: int, rmax: int, smax: int, cutoff=None):
    """Check the four ladder identities with symbolic spectral parameters.

    Returns a list of (name, r, s, i, j, ok) tuples; all identities use the
    out-of-range convention u = 0.
    """
    cutoff = cutoff or (l1 + l2 + 2 * (rmax + 1) + 2)
    tensor, _ = fundamental_pair_modules(m, Z1, Z2, cutoff)
    x1, x2 = Z1, Z2
    x1i, x2i = Z1.inverse(), Z2.inverse()
    U = lambda r, s, i, j: u_rs_component(tensor, m, l1, l2, r, s, i, j)
    out = []
    Fm = bold_word("F_m", m)
    Fm1 = bold_word("F_m+1", m)
    Em = bold_word("E_m", m)
    Em1 = bold_word("E_m+1", m)
    smax = min(smax, min(l1, l2))
    for s in range(smax + 1):
        for j in range(s + 1):
            u = U(0, s, 0, j)
            lhs = eval_word(Fm, u, tensor)
            rhs = (
                U(0, s + 1, 0, j + 1).scale(
                    x1 * q_power(l2 - 2 * s + 2 * j) * qint(j + 1)
                )
                + U(0, s + 1, 0, j).scale(x2 * qint(s - j + 1))
            )
            out.append(("F_m", 0, s, 0, j, (lhs - rhs).is_zero()))
            lhs = eval_word(Em, u, tensor)
            rhs = (
                U(0, s - 1, 0, j - 1).scale(x1i * qint(l1 - j + 1))
                + U(0, s - 1, 0, j).scale(
                    x2i * q_power(2 * j - l1) * qint(l2 - s + j + 1)
                )
            )
            out.append(("E_m", 0, s, 0, j, (lhs - rhs).is_zero()))
    for r in range(rmax + 1):
        for s in range(smax + 1):
            for i in range(r + 1):
                for j in range(s + 1):
                    u = U(r, s, i, j)
                    lhs = eval_word(Fm1, u, tensor)
                    rhs = (
                        U(r + 1, s, i + 1, j).scale(
                            x1 * q_power(2 * i - 2 * r - l2 - 2) * qint(i + 1)
                        )
                        + U(r + 1, s, i, j).scale(x2 * qint(r - i + 1))
                    )
                    out.append(("F_m+1", r, s, i, j, (lhs - rhs).is_zero()))
                    lhs = eval_word(Em1, u, tensor)
                    rhs = FockVector() - (
                        U(r - 1, s, i - 1, j).scale(x1i * qint(l1 + i + 1))
                        + U(r - 1, s, i, j).scale(
                            x2i * q_power(l1 + 2 * i + 2) * qint(l2 + r - i + 1)
                        )
                    )
                    out.append(("E_m+1", r, s, i, j, (lhs - rhs).is_zero()))
                    lhs = eval_word(vanishing_word(m), u, tensor)
                    out.append(("vanishing", r, s, i, j, lhs.is_zero()))
    return out


def verify_u_rs_highest(m: int, l1: int, l2: int, rmax: int, smax: int, cutoff=None):
    """u_{r,s} is killed by every raising operator of the finite subalgebra."""
    cutoff = cutoff or (l1 + l2 + 2 * rmax + 4)
    tensor, tgt = fundamental_pair_modules(m, Z1, Z2, cutoff)
    raising = [j for j in tensor.algebra.gen_indices if j != 0]
    out = []
    smax = min(smax, min(l1, l2))
    for r in range(rmax + 1):
        for s in range(smax + 1):
            u = u_rs(tensor, m, l1, l2, r, s)
            ok = not u.is_zero()
            for j in raising:
                if not act(tensor, ("e", j), u).is_zero():
                    ok = False
                    break
            out.append((r, s, ok))
    return out


# -- the expansion coefficients of F_{m+1} u_{r,s} ---------------------------


def verify_appendix_C(m: int, l1: int, l2: int, r: int, s: int, cutoff=None):
    """The exact ladder-coefficient identities with symbolic x1, x2.

    (i)  e_{m+1}^2 F_{m+1} u_{r,s} = [l2+r+1][2](x2 q^(-l2-2r) - x1 q^(l1+2)) u_{r-1,s}
    (ii) F_{m+1} u_{r,s} = C00 u_{r+1,s} + C10 f_{m+1} u_{r,s} + C20 f^(2)_{m+1} u_{r-1,s}
    with the closed forms of C20 and C10 and C00 != 0.
    """
    cutoff = cutoff or (l1 + l2 + 2 * (r + 2) + 2)
    tensor, _ = fundamental_pair_modules(m, Z1, Z2, cutoff)
    x1, x2 = Z1, Z2
    Fm1 = bold_word("F_m+1", m)
    u = u_rs(tensor, m, l1, l2, r, s)
    Fu = eval_word(Fm1, u, tensor)
    res = {}

    lhs = eval_word(WordExpr.e(m + 1) * WordExpr.e(m + 1), Fu, tensor)
    um1 = u_rs(tensor, m, l1, l2, r - 1, s)
    coeff = (
        SpectralScalar.from_scalar(qint(l2 + r + 1) * qint(2))
        * (x2 * q_power(-l2 - 2 * r) - x1 * q_power(l1 + 2))
    )
    res["e2F"] = (lhs - um1.scale(coeff)).is_zero()

    basis = {
        "C00": u_rs(tensor, m, l1, l2, r + 1, s),
        "C10": act(tensor, ("f", m + 1), u),
        "C20": eval_word(divided_power("f", m + 1, 2), um1, tensor),
    }
    unknowns = [k for k, v in basis.items() if not v.is_zero()]
    kets = set()
    for v in basis.values():
        kets.update(v.terms)
    kets.update(Fu.terms)
    eqs = []
    for ket in sorted(kets, key=lambda l: repr(l)):
        coeffs = {k: basis[k].terms.get(ket, SZERO) for k in unknowns}
        eqs.append((coeffs, Fu.terms.get(ket, SZERO)))
    sol, status = solve_unique(eqs, unknowns)
    res["expansion_status"] = status
    if status != "unique":
        res["C20"] = res["C10"] = res["C00_nonzero"] = False
        return res

    # The k_{m+1}-eigenvalue exponent on u_{a,s} is -(l1+l2+2a+4); the
    # resulting quantum brackets in the C20/C10 denominators come out two
    # steps above the printed ones.  Both variants are reported; the
    # derivation-consistent one is asserted.
    L = l1 + l2 + 2 * r
    xfac = x2 * q_power(-l2 - 2 * r) - x1 * q_power(l1 + 2)
    c20_closed = (
        SpectralScalar.from_scalar(
            qint(l2 + r + 1) * qint(2) / (qint(L + 2) * qint(L + 3))
        )
        * xfac
    )
    c20_printed = (
        SpectralScalar.from_scalar(
            qint(l2 + r + 1) * qint(2) / (qint(L) * qint(L + 1))
        )
        * xfac
    )
    c10_closed = (
        SpectralScalar.from_scalar(qint(l1 + 2)) * x1
        + SpectralScalar.from_scalar(qint(r + 1) * qint(l2 + r + 2)) * x2
        - SpectralScalar.from_scalar(Q * Q * qint(r) * qint(l2 + r + 1)) * x2
        - (x2 * q_power(-l1 - l2 - 2 * r - 2) - x1)
        * SpectralScalar.from_scalar(
            qint(2) * qint(l2 + r + 1) * qint(r) / qint(L + 2)
        )
    ) * SpectralScalar.from_scalar(qint(L + 4).inverse())
    if r >= 1:
        res["C20"] = sol.get("C20", SZERO) == c20_closed
        res["C20_printed_brackets"] = sol.get("C20", SZERO) == c20_printed
    else:
        res["C20"] = "C20" not in sol or sol["C20"].is_zero()
        res["r0_two_dimensional"] = "C20" not in unknowns
    res["C10"] = sol.get("C10", SZERO) == c10_closed
    c00 = sol.get("C00", SZERO)
    res["C00_nonzero"] = not c00.is_zero()
    # the closing identity comparing u^{0,0}_{r+1,s} coefficients
    lhs = x2 * SpectralScalar.from_scalar(qint(r + 1))
    rhs = (
        c00
        + sol.get("C10", SZERO)
        * SpectralScalar.from_scalar(q_power(-l1 - 2) * qint(r + 1))
        + sol.get("C20", SZERO)
        * SpectralScalar.from_scalar(
            q_power(-2 * l1 - 4) * qint(r) * qint(r + 1) / qint(2)
        )
    )
    res["closing_identity"] = lhs == rhs
    return res


def check_fundamental_truncation(m: int, l: int, cutoff=None):
    """Truncations of W_{l}: the overline image has the fundamental C_m
    dimension (dim V(varpi_{m-l}) for l < m, 1 at l = m, 0 beyond), and
    the underline image coincides block by block with the intrinsically
    built underline fundamental module."""
    from math import comb

    n = 2 * m + 1
    cutoff = cutoff or (l + 2 * m + 4)
    epsp = EpsilonData(tuple(i % 2 for i in range(n)))
    W2 = W2Module(epsp, Scalar.from_int(1), cutoff)
    rep = build_fundamental(W2, l, l, check_closure=False)
    tgt_over = phi_words("d", "overline", epsp)
    tspan = Subspace(W2)
    for wt, (b, vecs) in rep.span.blocks.items():
        for v in vecs:
            tv = truncate_vector(v, tgt_over.kept)
            if not tv.is_zero():
                tspan.add(tv)
    got = tspan.dim()
    if l > m:
        expected = 0
    elif l == m:
        expected = 1
    else:
        k = m - l
        expected = comb(2 * m, k) - (comb(2 * m, k - 2) if k >= 2 else 0)
    # underline: truncation of the span equals the intrinsic module
    tgt_under = phi_words("d", "underline", epsp)
    under = TruncatedModule(W2, tgt_under)
    rep_u = build_fundamental(under, l, l, check_closure=False)
    uspan = Subspace(W2)
    for wt, (b, vecs) in rep.span.blocks.items():
        for v in vecs:
            tv = truncate_vector(v, tgt_under.kept)
            if not tv.is_zero():
                uspan.add(tv)
    guard_deg = cutoff - 2
    dims_tr = {w: d for w, d in uspan.dims().items() if w.degree() <= guard_deg}
    dims_in = {w: d for w, d in rep_u.span.dims().items() if w.degree() <= guard_deg}
    under_ok = dims_tr == dims_in
    if under_ok:
        for wt, (b, vecs) in rep_u.span.blocks.items():
            if wt.degree() > guard_deg:
                continue
            for v in vecs:
                if not uspan.contains(v):
                    under_ok = False
                    break
    return {
        "dim": got,
        "expected": expected,
        "ok": got == expected and under_ok,
        "underline_matches": under_ok,
    }
