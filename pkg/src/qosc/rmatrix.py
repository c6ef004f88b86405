"""Normalized R matrices by exact intertwiner solving, with symbolic z.

The solver works on a tensor pair A(z) (x) B(1) -> B(1) (x) A(z).  The
finite-type orbit of each classical component is generated from matched
highest-weight vectors on both sides (the ring-U action never touches z),
giving an exact block decomposition; the eigenvalue functions rho(z) are
then the unique solution of the e_0-intertwining system, normalized to 1
on the top component.  Closed-form eigenvalues, poles, renormalization
and fusion images are checked against this solve.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .algebraops import phi_words, truncate_vector
from .decomp import hw_kernel_of_vectors, hw_weight
from .fockmod import (
    FockVector,
    RestrictedModule,
    TensorModule,
    TruncatedModule,
    W2Module,
    WModule,
    act,
    label_key,
    weight_block,
)
from .fundrep import Subspace, build_fundamental, u_rs
from .lattice import EpsilonData, Weight
from .linalg import RowBasis, solve_unique
from .scalars import (
    ONE,
    SONE,
    SZERO,
    Q,
    Scalar,
    SpectralScalar,
    Z1,
    as_q_power,
    factor_q_poles,
    q_power,
    qint,
)


def tensor_vector(va: FockVector, vb: FockVector) -> FockVector:
    out = FockVector()
    for la, ca in va.terms.items():
        for lb, cb in vb.terms.items():
            out.terms[(la, lb)] = ca * cb
    out.overflow = va.overflow or vb.overflow
    return out


# ---------------------------------------------------------------------------
# closed-form spectral data


def sigma_component_partitions(sigma, max_boxes):
    """S^sigma: the classical components of W^s1 (x) W^s2, by box count."""
    s1, s2 = sigma
    out = []
    if s1 == s2 == "+":
        out = [(2 * k,) if k else () for k in range(0, max_boxes // 2 + 1)]
    elif s1 == s2 == "-":
        out = [(1, 1)] + [(2 * k,) for k in range(1, max_boxes // 2 + 1)]
    else:
        out = [(2 * k + 1,) for k in range(0, (max_boxes - 1) // 2 + 1)]
    return [p for p in out if sum(p) <= max_boxes]


def sigma_lambda0(sigma):
    s1, s2 = sigma
    if s1 == s2 == "+":
        return ()
    if s1 == s2 == "-":
        return (1, 1)
    return (1,)


def closed_rho_c(sigma, lam) -> SpectralScalar:
    """The eigenvalue of the normalized R matrix on a type-c component."""
    z = Z1
    s1, s2 = sigma
    if s1 == s2:
        if lam == (1, 1) or lam == ():
            return SONE
        k = lam[0] // 2
        exps = [4 * j - 2 for j in range(1, k + 1)]
    else:
        k = (lam[0] - 1) // 2
        exps = [4 * j for j in range(1, k + 1)]
    acc = SONE
    for e in exps:
        qe = SpectralScalar.from_scalar(q_power(e))
        acc = acc * (SONE - qe * z) / (z - qe)
    return acc


def pole_exponents_c(sigma, bound):
    start = 2 if sigma[0] == sigma[1] else 4
    return [e for e in range(start, bound + 1, 4)]


def renormalize_diamond(sigma, m: int) -> SpectralScalar:
    """The finite prefactor that clears the truncation-level poles,
    turning the normalized R matrix into its renormalized companion."""
    z = Z1
    if sigma[0] == sigma[1]:
        d = (m + 1) // 2
        exps = [4 * i - 2 for i in range(1, d + 1)]
    else:
        d = m // 2
        exps = [4 * i for i in range(1, d + 1)]
    acc = SONE
    for e in exps:
        qe = SpectralScalar.from_scalar(q_power(e))
        acc = acc * (z - qe) / (SONE - qe)
    return acc


def rho_d_ratio_r(l1, l2, k) -> SpectralScalar:
    z = Z1
    qe = SpectralScalar.from_scalar(q_power(l1 + l2 + 2 * k + 2))
    pref = q_power(l1 - l2) * qint(l2 + k + 1) / qint(l1 + k + 1)
    return SpectralScalar.from_scalar(pref) * (SONE - z * qe) / (z - qe)


def rho_d_ratio_s(l1, l2, t) -> SpectralScalar:
    z = Z1
    qe = SpectralScalar.from_scalar(q_power(-l1 - l2 - 2 + 2 * t))
    pref = q_power(l2 - l1) * qint(l2 - t + 1) / qint(l1 - t + 1)
    return SpectralScalar.from_scalar(pref) * (SONE - z * qe) / (z - qe)


def closed_rho_d(l1, l2, r, s) -> SpectralScalar:
    """Type-d eigenvalue, unwound from the two recursions off rho_{0,min}=1."""
    if r < 0 or not (0 <= s <= min(l1, l2)):
        raise ValueError("rho_d parameter out of range")
    rho = SONE
    for t in range(min(l1, l2), s, -1):
        rho = rho / rho_d_ratio_s(l1, l2, t)
    for k in range(1, r + 1):
        rho = rho * rho_d_ratio_r(l1, l2, k)
    return rho


def rho_d_product_part(l1, l2, r, s) -> SpectralScalar:
    """The displayed product (without the constant), for D-extraction."""
    z = Z1
    acc = SONE
    for k in range(1, r + 1):
        qe = SpectralScalar.from_scalar(q_power(l1 + l2 + 2 * k + 2))
        acc = acc * (SONE - z * qe) / (z - qe)
    for k in range(1, min(l1, l2) - s + 1):
        qe = SpectralScalar.from_scalar(q_power(abs(l2 - l1) + 2 * k))
        acc = acc * (SONE - z * qe) / (z - qe)
    return acc


def pole_exponents_d(l1, l2, bound):
    out = set()
    k = 1
    while abs(l2 - l1) + 2 * k <= bound:
        out.add(abs(l2 - l1) + 2 * k)
        k += 1
    k = 1
    while l1 + l2 + 2 * k + 2 <= bound:
        out.add(l1 + l2 + 2 * k + 2)
        k += 1
    return sorted(out)


def poles(flavor, params, bound):
    """Declared pole exponent set, intersected with |exponent| <= bound."""
    if flavor == "c":
        return pole_exponents_c(params, bound)
    return pole_exponents_d(params[0], params[1], bound)


# ---------------------------------------------------------------------------
# pairs


@dataclass
class Component:
    key: object
    weight: Weight
    v_src: FockVector
    v_tgt: FockVector


@dataclass
class RPair:
    flavor: str
    level: str
    source: TensorModule
    target: TensorModule
    components: list
    lambda0: object
    exhaustive: bool
    meta: dict = field(default_factory=dict)


def _normalize_lex(v: FockVector) -> FockVector:
    lead = min(v.terms, key=label_key)
    return v.scale(v.terms[lead].inverse())


def _c_level_modules(m, cutoff, level, x):
    n = 2 * m + 1
    eps = EpsilonData(tuple((i + 1) % 2 for i in range(n)))
    W = WModule(eps, x, cutoff)
    if level == "bold":
        return W, None
    tgt = phi_words("c", "underline" if level == "underline" else "overline", eps)
    return TruncatedModule(W, tgt), tgt


def make_c_pair(m, sigma, cutoff, level="bold"):
    """The pair W^s1(z) (x) W^s2(1) at the requested truncation level."""
    par = {"+": 0, "-": 1}
    A, tgt = _c_level_modules(m, cutoff, level, Z1)
    B, _ = _c_level_modules(m, cutoff, level, Scalar.from_int(1))
    A1 = RestrictedModule(A, par[sigma[0]])
    B1 = RestrictedModule(B, par[sigma[1]])
    source = TensorModule([A1, B1])
    target = TensorModule([B1, A1])
    kept = tgt.kept if tgt else None
    comps = []
    for lam in sigma_component_partitions(sigma, cutoff):
        wt = hw_weight(source.eps, lam, 2, "c", kept=kept)
        if wt is None or wt.degree() > cutoff:
            continue
        vs = _hw_line(source, wt)
        vt = _hw_line(target, wt)
        comps.append(Component(lam, wt, _normalize_lex(vs), _normalize_lex(vt)))
    return RPair(
        flavor="c",
        level=level,
        source=source,
        target=target,
        components=comps,
        lambda0=sigma_lambda0(sigma),
        exhaustive=True,
        meta={"m": m, "sigma": sigma, "target_algebra": tgt},
    )


def _hw_line(module, wt):
    from .decomp import find_hw

    rep = find_hw(module, wt)
    if rep.dimension != 1:
        raise ArithmeticError(
            "highest-weight space at %s has dimension %d, expected 1"
            % (wt.to_str(), rep.dimension)
        )
    return rep.basis[0]


def d_component_keys(l1, l2, cutoff, level="bold", m=None):
    out = []
    r = 0
    while l1 + l2 + 2 * r <= cutoff:
        for s in range(0, min(l1, l2) + 1):
            lam1 = l1 + l2 + r - s
            if level == "overline" and lam1 > m:
                continue
            out.append((r, s))
        r += 1
    return out


def make_d_pair(m, l1, l2, cutoff, level="underline"):
    """The pair W_{l1}(z) (x) W_{l2}(1) of type-d fundamental modules."""
    n = 2 * m + 1
    epsp = EpsilonData(tuple(i % 2 for i in range(n)))
    A = W2Module(epsp, Z1, cutoff)
    B = W2Module(epsp, Scalar.from_int(1), cutoff)
    if level == "underline":
        tgt = phi_words("d", "underline", epsp)
        Af = TruncatedModule(A, tgt)
        Bf = TruncatedModule(B, tgt)
    elif level == "bold":
        tgt = None
        Af, Bf = A, B
    else:
        raise ValueError("make_d_pair supports levels 'bold' and 'underline'")
    source = TensorModule([Af, Bf])
    target = TensorModule([Bf, Af])
    comps = []
    if level == "underline":
        for (r, s) in d_component_keys(l1, l2, cutoff):
            vs = u_rs(source, m, l1, l2, r, s)
            vt = u_rs(target, m, l2, l1, r, s)
            wt = source.weight_of(next(iter(vs.terms)))
            comps.append(Component((r, s), wt, vs, vt))
    else:
        # components found inside the span of the two fundamental factors;
        # the highest weights are not kept-supported, so normalization is
        # intrinsic (leading coefficient 1) and cross-level statements are
        # made at the operator level
        spans_src = _fundamental_pair_span(source, l1, l2)
        spans_tgt = _fundamental_pair_span(target, l2, l1)
        for (r, s) in d_component_keys(l1, l2, cutoff):
            lam = (l1 + l2 + r - s, r + s)
            wt = hw_weight(epsp, lam, 2, "d")
            if wt is None or wt.degree() > cutoff:
                continue
            vs = _hw_in_span(source, spans_src, wt)
            vt = _hw_in_span(target, spans_tgt, wt)
            comps.append(
                Component((r, s), wt, _normalize_lex(vs), _normalize_lex(vt))
            )
    return RPair(
        flavor="d",
        level=level,
        source=source,
        target=target,
        components=comps,
        lambda0=(0, min(l1, l2)),
        exhaustive=False,
        meta={"m": m, "l": (l1, l2), "target_algebra": tgt},
    )


def c_target_module(m, sigma, cutoff, level, x):
    """The concrete-parameter target W^s2(1) (x) W^s1(x) for fused images."""
    par = {"+": 0, "-": 1}
    A, _ = _c_level_modules(m, cutoff, level, x)
    B, _ = _c_level_modules(m, cutoff, level, Scalar.from_int(1))
    return TensorModule(
        [RestrictedModule(B, par[sigma[1]]), RestrictedModule(A, par[sigma[0]])]
    )


def d_target_module(m, l1, l2, cutoff, level, x):
    n = 2 * m + 1
    epsp = EpsilonData(tuple(i % 2 for i in range(n)))
    A = W2Module(epsp, x, cutoff)
    B = W2Module(epsp, Scalar.from_int(1), cutoff)
    if level == "underline":
        tgt = phi_words("d", "underline", epsp)
        A = TruncatedModule(A, tgt)
        B = TruncatedModule(B, tgt)
    return TensorModule([B, A])


def _fundamental_pair_span(tensor, l1, l2):
    f1, f2 = tensor.factors
    rep1 = build_fundamental(f1, l1, l1, check_closure=False)
    rep2 = build_fundamental(f2, l2, l2, check_closure=False)
    return rep1.span, rep2.span


def _hw_in_span(tensor, spans, wt):
    span1, span2 = spans
    vecs = []
    for w1, (b1, vs1) in span1.blocks.items():
        w2 = wt - w1
        blk2 = span2.blocks.get(w2)
        if not blk2:
            continue
        for a in vs1:
            for b in blk2[1]:
                vecs.append(tensor_vector(a, b))
    basis = hw_kernel_of_vectors(vecs, tensor)
    if len(basis) != 1:
        raise ArithmeticError(
            "component at %s: kernel dimension %d" % (wt.to_str(), len(basis))
        )
    return basis[0]


# ---------------------------------------------------------------------------
# matched orbit decomposition


class _ConeTest:
    """Membership of delta-vectors in the Z_+-span of the lowering roots."""

    def __init__(self, roots):
        self.roots = [tuple(r.delta) for r in roots]
        self.cache = {}

    def member(self, dvec):
        dvec = tuple(dvec)
        hit = self.cache.get(dvec)
        if hit is not None:
            return hit
        cols = self.roots
        n = len(dvec)
        aug = [[Fraction(cols[j][i]) for j in range(len(cols))] + [Fraction(dvec[i])] for i in range(n)]
        r = 0
        piv = []
        for c in range(len(cols)):
            p = next((i for i in range(r, n) if aug[i][c] != 0), None)
            if p is None:
                continue
            aug[r], aug[p] = aug[p], aug[r]
            d = aug[r][c]
            aug[r] = [x / d for x in aug[r]]
            for i in range(n):
                if i != r and aug[i][c] != 0:
                    f = aug[i][c]
                    aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
            piv.append(c)
            r += 1
        ok = True
        coeffs = {}
        for i in range(r, n):
            if aug[i][-1] != 0:
                ok = False
        if ok:
            for i, c in enumerate(piv):
                val = aug[i][-1]
                if val.denominator != 1 or val < 0:
                    ok = False
                    break
                coeffs[c] = val
        self.cache[dvec] = ok
        return ok


class PairDecomposition:
    """Matched finite-type orbits of the components, block by block."""

    def __init__(self, pair: RPair, needed_weights=None):
        self.pair = pair
        self.blocks = {}  # Weight -> (RowBasis, [(ckey, v_src, v_tgt)])
        src = pair.source
        lowering = [j for j in src.algebra.gen_indices if j != 0]
        roots = [src.algebra.root(j) for j in lowering]
        cone = _ConeTest(roots) if needed_weights is not None else None
        needed = list(needed_weights) if needed_weights is not None else None

        def reachable(wt):
            if needed is None:
                return True
            for nu in needed:
                if nu.lam != wt.lam:
                    continue
                diff = tuple(a - b for a, b in zip(wt.delta, nu.delta))
                if cone.member(diff):
                    return True
            return False

        queue = deque()
        for comp in pair.components:
            if reachable(comp.weight):
                queue.append((comp.key, comp.v_src, comp.v_tgt))
        while queue:
            ckey, vs, vt = queue.popleft()
            wt = src.weight_of(next(iter(vs.terms)))
            basis, entries = self.blocks.setdefault(wt, (RowBasis(), []))
            ok, _ = basis.add(vs.terms)
            if not ok:
                continue
            entries.append((ckey, vs, vt))
            for j in lowering:
                img = act(src, ("f", j), vs)
                if img.is_zero() or img.overflow:
                    continue
                nwt = src.weight_of(next(iter(img.terms)))
                if nwt.degree() > src.cutoff or not reachable(nwt):
                    continue
                imgt = act(pair.target, ("f", j), vt)
                if imgt.overflow:
                    continue
                queue.append((ckey, img, imgt))

    def express(self, v: FockVector):
        """v = sum coords; returns list of (ckey, coeff, v_tgt) or None."""
        if v.is_zero():
            return []
        wt = self.pair.source.weight_of(next(iter(v.terms)))
        blk = self.blocks.get(wt)
        if blk is None:
            return None
        coords = blk[0].express(v.terms)
        if coords is None:
            return None
        return [(blk[1][i][0], c, blk[1][i][2]) for i, c in coords.items()]

    def apply_R(self, v: FockVector, rho):
        """R(v) = sum coords * rho_comp * matched target vector."""
        parts = self.express(v)
        if parts is None:
            return None
        out = FockVector()
        for ckey, c, vt in parts:
            out = out + vt.scale(rho[ckey] * c)
        return out

    def block_dims(self):
        return {wt: len(e) for wt, (b, e) in self.blocks.items()}


class SolverError(ArithmeticError):
    pass


def solve_R(pair: RPair, needed_weights=None, extra_checks=True, full_window=False):
    """Solve for the eigenvalue functions rho on every component.

    Builds the matched orbit decomposition restricted to the weights
    needed by the e_0-intertwining equations (plus any extra requested;
    full_window=True builds every block of the window, as fusion needs),
    assembles the linear system over Q(w)(z) and solves it exactly.
    Raises SolverError when the system is inconsistent or underdetermined.
    """
    src, tgt = pair.source, pair.target
    cutoff = src.cutoff
    alpha0 = src.algebra.root(0)
    eq_weights = []
    for comp in pair.components:
        if comp.weight.degree() + 2 <= cutoff:
            eq_weights.append(comp.weight + alpha0)
    if full_window:
        needed = None
    else:
        needed = list(eq_weights)
        if needed_weights:
            needed.extend(needed_weights)
    dec = PairDecomposition(pair, needed_weights=needed)

    unknowns = [comp.key for comp in pair.components]
    equations = []
    for comp in pair.components:
        if comp.weight.degree() + 2 > cutoff:
            continue
        u = act(src, ("e", 0), comp.v_src)
        ut = act(tgt, ("e", 0), comp.v_tgt)
        if u.overflow or ut.overflow:
            continue
        parts = dec.express(u)
        if parts is None:
            raise SolverError(
                "e_0 image of component %r leaves the built span" % (comp.key,)
            )
        lhs_by_ket = {}
        for ckey, c, vt in parts:
            for ket, x in vt.terms.items():
                d = lhs_by_ket.setdefault(ket, {})
                p = c * x
                s = d.get(ckey)
                d[ckey] = p if s is None else s + p
        kets = set(lhs_by_ket) | set(ut.terms)
        for ket in sorted(kets, key=label_key):
            coeffs = dict(lhs_by_ket.get(ket, {}))
            rterm = ut.terms.get(ket)
            if rterm is not None:
                s = coeffs.get(comp.key, SZERO)
                coeffs[comp.key] = s - rterm
            equations.append((coeffs, SZERO))
    equations.append(({pair.lambda0: SONE}, SONE))
    sol, status = solve_unique(equations, unknowns)
    if status != "unique":
        raise SolverError("e_0 intertwining system is %s" % status)
    rho = {k: _to_spectral(v) for k, v in sol.items()}
    if extra_checks and not rho[pair.lambda0].is_one():
        raise SolverError("normalization failed on the top component")
    return rho, dec


def _to_spectral(v):
    if isinstance(v, SpectralScalar):
        return v
    return SpectralScalar.from_scalar(v)


def rblocks(pair, dec, rho, weights):
    """RBlock data: per weight, (source labels/vectors, matrix of R images).

    For exhaustive pairs the source basis is the ket basis of the block;
    matrix columns are the R images expanded in target kets.
    """
    out = {}
    for wt in weights:
        if pair.exhaustive:
            labels = weight_block(pair.source, wt)
            vecs = [FockVector.basis(l) for l in labels]
        else:
            blk = dec.blocks.get(wt)
            vecs = [e[1] for e in blk[1]] if blk else []
            labels = list(range(len(vecs)))
        cols = []
        for v in vecs:
            img = dec.apply_R(v, rho)
            if img is None:
                raise SolverError("block at %s not covered" % wt.to_str())
            cols.append(img)
        out[wt] = (labels, vecs, cols)
    return out


def verify_spectral(pair, dec, rho, maxdeg, gens=None):
    """Entrywise intertwining of R = sum rho_l P_l on guard-safe blocks.

    Checks R(g v) = g R(v) for every generator g on every decomposition
    basis vector of degree <= maxdeg; returns a report dict.
    """
    src, tgt = pair.source, pair.target
    alg = src.algebra
    gens = gens or [(k, j) for j in alg.gen_indices for k in ("e", "f")]
    checked = 0
    failures = []
    for wt in sorted(dec.blocks, key=lambda w: (w.degree(), w.delta)):
        if wt.degree() > maxdeg:
            continue
        basis, entries = dec.blocks[wt]
        for ckey, vs, vt in entries:
            rimg = vt.scale(rho[ckey])
            for g in gens:
                u = act(src, g, vs)
                ut = act(tgt, g, rimg)
                if u.overflow or ut.overflow:
                    continue
                lhs = dec.apply_R(u, rho)
                if lhs is None:
                    continue
                if not (lhs - ut).is_zero():
                    failures.append((g, ckey, wt))
                checked += 1
    return {"checked": checked, "failures": failures, "pass": not failures}


def verify_completeness(pair, dec, maxdeg):
    """Every window ket of degree <= maxdeg lies in the built span
    (exhaustive pairs only)."""
    missing = []
    for wt in sorted(dec.blocks, key=lambda w: (w.degree(), w.delta)):
        if wt.degree() > maxdeg:
            continue
        for label in weight_block(pair.source, wt):
            if dec.express(FockVector.basis(label)) is None:
                missing.append(label)
    return {"pass": not missing, "missing": missing}


def verify_unitarity(pair, dec, rho, maxdeg):
    """R(1/z) o R(z) = id on blocks of degree <= maxdeg (equal-label pairs)."""
    zinv = Z1.inverse()
    rho_inv = {k: v.specialize(0, zinv) for k, v in rho.items()}
    failures = []
    for wt in sorted(dec.blocks, key=lambda w: (w.degree(), w.delta)):
        if wt.degree() > maxdeg:
            continue
        _, entries = dec.blocks[wt]
        for ckey, vs, vt in entries:
            out = dec.apply_R(vs, rho)
            # apply the flipped R: on equal-label pairs source = target
            back = dec.apply_R(out, rho_inv)
            if back is None or not (back - vs).is_zero():
                failures.append((ckey, wt))
    return {"pass": not failures, "failures": failures}


def verify_truncated_operator(dec_bold, rho_bold, dec_level, rho_level):
    """tr(R_bold) == R_level as operators, on every level block vector.

    Convention-free form of the coefficient-equality lemma: both sides are
    evaluated on the level decomposition's basis vectors (kept-supported,
    hence valid in both pairs) and compared entrywise.
    """
    failures = []
    checked = 0
    for wt in sorted(dec_level.blocks, key=lambda w: (w.degree(), w.delta)):
        _, entries = dec_level.blocks[wt]
        for ckey, vs, vt in entries:
            rb = dec_bold.apply_R(vs, rho_bold)
            rl = dec_level.apply_R(vs, rho_level)
            checked += 1
            if rb is None or rl is None or not (rb - rl).is_zero():
                failures.append((ckey, wt))
    return {"pass": not failures, "checked": checked, "failures": failures}


def compatibility_scale(dec_bold, comps_bold, comp_level):
    """The constant c with tr(Phi_bold(v_level)) = c * v'_level.

    In the truncation-compatible normalization of the level pair the
    eigenvalues satisfy rho_level = (c / c_{lambda0}) * rho_bold on this
    component, the lambda0 constant being the one of the top component."""
    ones = {c.key: SONE for c in comps_bold}
    phi = dec_bold.apply_R(comp_level.v_src, ones)
    if phi is None:
        raise SolverError("component vector not covered by the bold orbit")
    lead = min(comp_level.v_tgt.terms, key=label_key)
    c = phi.terms[lead] / comp_level.v_tgt.terms[lead]
    if not (phi - comp_level.v_tgt.scale(c)).is_zero():
        raise SolverError("truncated image is not proportional to the level hw")
    return c


def compatible_bold_rho(pair_bold, dec_bold, pair_level, rho_bold):
    """rho of the bold pair re-expressed in the level's normalization.

    Two normalized intertwiners of one irreducible pair differ by a single
    scalar; pinning the top component gives rho_level = rho_bold * c / c0.
    Returns ({key: expected level rho}, {key: c}, c0); the rescaled
    operator sum rho_bold/c0 equals the level R matrix after truncation.
    """
    scales = {}
    for comp in pair_level.components:
        scales[comp.key] = compatibility_scale(dec_bold, pair_bold.components, comp)
    c0 = scales[pair_level.lambda0]
    expected = {}
    for key, c in scales.items():
        fac = SpectralScalar.from_scalar(c * c0.inverse())
        expected[key] = rho_bold[key] * fac
    return expected, scales, c0


def truncate_image_span(image: Subspace, kept, level_module) -> Subspace:
    """Truncate every stored vector of an image span."""
    out = Subspace(level_module)
    for wt, (b, vecs) in image.blocks.items():
        for v in vecs:
            tv = truncate_vector(v, kept)
            if not tv.is_zero():
                out.add(tv)
    return out


def compare_spans(a: Subspace, b: Subspace):
    """Equal weight-block dimensions and mutual containment."""
    dims_a, dims_b = a.dims(), b.dims()
    if dims_a != dims_b:
        return {"pass": False, "reason": "dimension census differs",
                "only_a": {k.to_str(): v for k, v in dims_a.items() if dims_b.get(k) != v},
                "only_b": {k.to_str(): v for k, v in dims_b.items() if dims_a.get(k) != v}}
    for wt, (basis, vecs) in a.blocks.items():
        for v in vecs:
            if not b.contains(v):
                return {"pass": False, "reason": "containment a in b fails"}
    for wt, (basis, vecs) in b.blocks.items():
        for v in vecs:
            if not a.contains(v):
                return {"pass": False, "reason": "containment b in a fails"}
    return {"pass": True}


def rho_pole_multisets(rho, bound):
    """factor_q_poles applied to every denominator of the solved rho's."""
    out = {}
    for key, val in rho.items():
        den = val.den_poly_coeffs(0)
        ks, leftover = factor_q_poles(den, bound)
        out[key] = (ks, leftover)
    return out


# ---------------------------------------------------------------------------
# fusion


class AdmissibilityError(ValueError):
    def __init__(self, i, j, exponent):
        self.offending = (i, j, exponent)
        super().__init__(
            "spectral ratio c_%d/c_%d = q^%d lies in the pole set"
            % (i, j, exponent)
        )


def check_admissible(flavor, params, cs, bound=64):
    """(sigma, c) or (l, c) in P+; raises AdmissibilityError on a pole hit."""
    for i in range(len(cs)):
        for j in range(i + 1, len(cs)):
            ratio = cs[i] / cs[j]
            k = as_q_power(ratio)
            if k is None:
                continue
            if flavor == "c":
                pol = pole_exponents_c((params[i], params[j]), abs(k))
            else:
                pol = pole_exponents_d(params[i], params[j], abs(k))
            if k in pol:
                raise AdmissibilityError(i, j, k)
    return True


@dataclass
class FusionReport:
    nonzero: bool
    image_dims: dict
    hw_content: dict
    cyclic_consistent: bool
    details: dict = field(default_factory=dict)


def fuse(pair, rho, dec, c1, c2, content_candidates, maxdeg=None):
    """Image of the specialized R matrix applied to the window basis.

    Returns the image span (a Subspace over the target tensor), its
    weight-block dimensions, hw content and the cyclicity diagnostic.
    """
    zc = c1 / c2
    rho_c = {}
    for k, v in rho.items():
        rho_c[k] = v.specialize(0, zc)
    src = pair.source
    maxdeg = maxdeg if maxdeg is not None else src.cutoff
    image = Subspace(pair.target)
    if pair.exhaustive:
        weights = set()
        for label in src.enumerate_labels(maxdeg):
            weights.add(src.weight_of(label))
        basis_iter = [
            FockVector.basis(l) for l in src.enumerate_labels(maxdeg)
        ]
    else:
        basis_iter = [
            e[1]
            for wt, (b, ent) in dec.blocks.items()
            if wt.degree() <= maxdeg
            for e in ent
        ]
    for v in basis_iter:
        img = dec.apply_R(v, rho_c)
        if img is None:
            raise SolverError("fusion source vector outside decomposition")
        if not img.is_zero():
            image.add(_despectralize(img))
    dims = {wt: d for wt, d in image.dims().items()}
    # hw content of the image
    content = {}
    hw_vecs = {}
    for lam, wt in content_candidates:
        blk = image.blocks.get(wt)
        if blk is None:
            content[lam] = 0
            continue
        kern = hw_kernel_of_vectors(blk[1], pair.target)
        content[lam] = len(kern)
        if kern:
            hw_vecs[lam] = kern[0]
    return image, dims, content, hw_vecs


def _despectralize(vec: FockVector) -> FockVector:
    out = FockVector(overflow=vec.overflow)
    for l, c in vec.terms.items():
        if isinstance(c, SpectralScalar):
            c = c.as_scalar()
        out.terms[l] = c
    return out


def cyclicity_diagnostic(module, hw_vec, image: Subspace, guard=2):
    """Lowering-closure of one hw vector compared against the image span.

    Passing means: consistent with irreducibility (never a proof)."""
    span = Subspace(module)
    span.add(hw_vec)
    queue = [hw_vec]
    lowering = list(module.algebra.gen_indices)
    while queue:
        v = queue.pop(0)
        for j in lowering:
            img = act(module, ("f", j), v)
            if img.is_zero() or img.overflow:
                continue
            if span.add(img):
                queue.append(img)
    ok = True
    mismatches = []
    maxdeg = module.cutoff - guard
    for wt, d in image.dims().items():
        if wt.degree() > maxdeg:
            continue
        if span.dims().get(wt, 0) != d:
            ok = False
            mismatches.append((wt, span.dims().get(wt, 0), d))
    return {"pass": ok, "mismatches": mismatches}
