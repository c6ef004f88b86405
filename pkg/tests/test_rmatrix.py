import pytest

from qosc.decomp import hw_weight
from qosc.fockmod import FockVector
from qosc.rmatrix import (
    compatible_bold_rho,
    AdmissibilityError,
    SolverError,
    c_target_module,
    check_admissible,
    closed_rho_c,
    closed_rho_d,
    compare_spans,
    compatibility_scale,
    cyclicity_diagnostic,
    fuse,
    make_c_pair,
    make_d_pair,
    pole_exponents_c,
    pole_exponents_d,
    renormalize_diamond,
    rho_d_product_part,
    rho_pole_multisets,
    sigma_component_partitions,
    solve_R,
    truncate_image_span,
    verify_completeness,
    verify_spectral,
    verify_truncated_operator,
    verify_unitarity,
)
from qosc.algebraops import phi_words
from qosc.scalars import (
    ONE,
    SONE,
    Q,
    SpectralScalar,
    Z1,
    parse_scalar,
    q_power,
    qint,
)


def test_closed_rho_c_examples():
    z = Z1
    assert closed_rho_c(("+", "+"), ()) == SONE
    q4 = SpectralScalar.from_scalar(q_power(4))
    assert closed_rho_c(("+", "-"), (3,)) == (SONE - q4 * z) / (z - q4)
    q2 = SpectralScalar.from_scalar(q_power(2))
    q6 = SpectralScalar.from_scalar(q_power(6))
    want = (SONE - q2 * z) / (z - q2) * (SONE - q6 * z) / (z - q6)
    assert closed_rho_c(("-", "-"), (4,)) == want


def test_pole_sets():
    assert pole_exponents_c(("+", "+"), 12) == [2, 6, 10]
    assert pole_exponents_c(("+", "-"), 13) == [4, 8, 12]
    assert pole_exponents_d(1, 1, 9) == [2, 4, 6, 8]


def test_renormalize_diamond_examples():
    z = Z1
    q2 = SpectralScalar.from_scalar(q_power(2))
    q4 = SpectralScalar.from_scalar(q_power(4))
    q6 = SpectralScalar.from_scalar(q_power(6))
    assert renormalize_diamond(("+", "+"), 2) == (z - q2) / (SONE - q2)
    assert renormalize_diamond(("+", "-"), 2) == (z - q4) / (SONE - q4)
    assert renormalize_diamond(("-", "-"), 3) == (z - q2) / (SONE - q2) * (z - q6) / (SONE - q6)


def test_solve_c_small_window_matches_closed_forms():
    pair = make_c_pair(2, ("+", "+"), cutoff=5, level="bold")
    rho, dec = solve_R(pair, full_window=True)
    assert all(rho[k] == closed_rho_c(("+", "+"), k) for k in rho)
    # normalization on the hw line of the top component
    assert rho[()].is_one()
    # equal-parameter identity: rho(1) = 1
    assert all(rho[k].specialize(0, ONE).is_one() for k in rho)
    # full entrywise intertwining, completeness and unitarity on small blocks
    assert verify_spectral(pair, dec, rho, maxdeg=3)["pass"]
    assert verify_completeness(pair, dec, maxdeg=3)["pass"]
    assert verify_unitarity(pair, dec, rho, maxdeg=3)["pass"]


def test_projector_completeness_and_orthogonality():
    pair = make_c_pair(2, ("+", "+"), cutoff=5, level="bold")
    rho, dec = solve_R(pair, full_window=True)
    comp_keys = [c.key for c in pair.components]

    def project(lam, v):
        parts = dec.express(v)
        out = FockVector()
        for ckey, c, vt in parts:
            if ckey == lam:
                out = out + vt.scale(c)
        return out

    from qosc.fockmod import weight_block

    from qosc.fockmod import act

    for wt in list(dec.blocks):
        if wt.degree() > 3:
            continue
        for label in weight_block(pair.source, wt):
            b = FockVector.basis(label)
            total = FockVector()
            for lam in comp_keys:
                p = project(lam, b)
                total = total + p
                # idempotence through the matched bases (source = target here)
                assert (project(lam, p) - p).is_zero()
                for mu in comp_keys:
                    if mu != lam:
                        assert project(mu, p).is_zero()
            assert (total - b).is_zero()
            # the projectors intertwine the finite-type action
            for gen in (("e", 2), ("f", 3)):
                img = act(pair.source, gen, b)
                if img.overflow:
                    continue
                for lam in comp_keys:
                    lhs = project(lam, img)
                    rhs = act(pair.target, gen, project(lam, b))
                    if rhs.overflow:
                        continue
                    assert (lhs - rhs).is_zero()


def test_solve_inconsistency_is_detected():
    # a global rescale of one hw vector is gauge freedom and must be
    # absorbed into rho; a non-proportional distortion must be caught
    pair = make_c_pair(2, ("+", "+"), cutoff=5, level="bold")
    pair.components[1].v_tgt = pair.components[1].v_tgt.scale(Q)
    rho, _ = solve_R(pair)
    assert rho[(2,)] == closed_rho_c(("+", "+"), (2,)) * SpectralScalar.from_scalar(Q).inverse()

    pair = make_c_pair(2, ("+", "+"), cutoff=5, level="bold")
    vt = pair.components[1].v_tgt
    lab = sorted(vt.terms, key=repr)[0]
    vt.terms[lab] = vt.terms[lab] * Q  # breaks the highest-weight property
    with pytest.raises(SolverError):
        solve_R(pair)


def test_cross_level_operator_identity_and_scales():
    sigma = ("-", "+")
    pair_b = make_c_pair(2, sigma, cutoff=5, level="bold")
    pair_u = make_c_pair(2, sigma, cutoff=5, level="underline")
    rho_u, dec_u = solve_R(pair_u)
    rho_b, dec_b = solve_R(pair_b, needed_weights=list(dec_u.blocks))
    rep = verify_truncated_operator(dec_b, rho_b, dec_u, rho_u)
    assert rep["pass"] and rep["checked"] > 0
    for comp in pair_u.components:
        c = compatibility_scale(dec_b, pair_b.components, comp)
        assert rho_u[comp.key] == rho_b[comp.key] * SpectralScalar.from_scalar(c)


def test_solve_d_small_window():
    pair = make_d_pair(2, 1, 1, cutoff=4, level="underline")
    rho, dec = solve_R(pair)
    for key in rho:
        assert rho[key] == closed_rho_d(1, 1, *key)
        D = rho[key] / rho_d_product_part(1, 1, *key)
        assert not any(e[0] for e in D.num) and not any(e[0] for e in D.den)
    pm = rho_pole_multisets(rho, 40)
    declared = set(pole_exponents_d(1, 1, 40))
    for ks, leftover in pm.values():
        assert set(ks) <= declared and list(leftover) == [0]


def test_solve_d_bold_prime_level():
    # the untruncated pair: full entrywise intertwining holds; expressed
    # in the underline-compatible normalization the eigenvalues match the
    # underline ones exactly (the top compatibility constant is -[2] here,
    # so this genuinely exercises the rescaling)
    pair_b = make_d_pair(2, 1, 2, cutoff=5, level="bold")
    rho_b, dec_b = solve_R(pair_b)
    assert verify_spectral(pair_b, dec_b, rho_b, maxdeg=4)["pass"]
    pair_u = make_d_pair(2, 1, 2, cutoff=5, level="underline")
    rho_u, dec_u = solve_R(pair_u)
    rho_b2, dec_b2 = solve_R(pair_b, needed_weights=list(dec_u.blocks))
    expected, scales, c0 = compatible_bold_rho(pair_b, dec_b2, pair_u, rho_b2)
    assert not c0.is_one()
    for key, val in expected.items():
        assert rho_u[key] == val, key
        assert rho_u[key] == closed_rho_d(1, 2, *key)
    # operator identity after the overall rescale by 1/c0
    inv0 = SpectralScalar.from_scalar(c0.inverse())
    rho_scaled = {k: v * inv0 for k, v in rho_b2.items()}
    assert verify_truncated_operator(dec_b2, rho_scaled, dec_u, rho_u)["pass"]
    # symmetric labels need no constants at all
    pair11 = make_d_pair(2, 1, 1, cutoff=4, level="bold")
    rho11, _ = solve_R(pair11)
    assert all(rho11[k] == closed_rho_d(1, 1, *k) for k in rho11)


def test_d_unitarity_at_equal_labels():
    pair = make_d_pair(2, 1, 1, cutoff=4, level="underline")
    rho, dec = solve_R(pair)
    assert verify_unitarity(pair, dec, rho, maxdeg=4)["pass"]


def test_overline_level_full_entrywise_verification():
    # the truncated modules are finite dimensional, so the spectral
    # decomposition can be verified entrywise on every block
    for sigma in [("+", "+"), ("-", "-"), ("+", "-")]:
        pair = make_c_pair(2, sigma, cutoff=8, level="overline")
        rho, dec = solve_R(pair, full_window=True)
        assert verify_spectral(pair, dec, rho, maxdeg=8)["pass"], sigma
        assert verify_completeness(pair, dec, maxdeg=8)["pass"], sigma


def test_diamond_renormalization_clears_finite_level_poles():
    # multiplying by the diamond prefactor leaves every surviving
    # eigenvalue function a Laurent polynomial in z
    for sigma in [("+", "+"), ("-", "-"), ("+", "-")]:
        D = renormalize_diamond(sigma, 2)
        pair = make_c_pair(2, sigma, cutoff=8, level="overline")
        rho, _ = solve_R(pair)
        for k, v in rho.items():
            assert (D * v).den == {(0, 0): SONE.num[(0, 0)]}, (sigma, k)


def test_rank_three_host():
    # the solver is not tied to m = 2
    pair = make_c_pair(3, ("+", "+"), cutoff=5, level="bold")
    rho, _ = solve_R(pair)
    assert all(rho[k] == closed_rho_c(("+", "+"), k) for k in rho)


def test_c_pole_consistency():
    pair = make_c_pair(2, ("+", "+"), cutoff=6, level="bold")
    rho, _ = solve_R(pair)
    declared = set(pole_exponents_c(("+", "+"), 64))
    for ks, leftover in rho_pole_multisets(rho, 64).values():
        assert set(ks) <= declared and list(leftover) == [0]


def test_closed_rho_d_recursion_endpoints():
    # normalization and the stated ratio of consecutive coefficients
    assert closed_rho_d(2, 1, 0, 1) == SONE
    l1, l2, r, s = 2, 1, 2, 1
    lhs = closed_rho_d(l1, l2, r, s)
    prev = closed_rho_d(l1, l2, r - 1, s)
    qe = SpectralScalar.from_scalar(q_power(l1 + l2 + 2 * r + 2))
    ratio = (
        SpectralScalar.from_scalar(q_power(l1 - l2) * qint(l2 + r + 1) / qint(l1 + r + 1))
        * (SONE - Z1 * qe)
        / (Z1 - qe)
    )
    assert lhs == prev * ratio
    # the s-direction recursion off the normalization point
    l1, l2, s = 2, 1, 1
    qe = SpectralScalar.from_scalar(q_power(-l1 - l2 - 2 + 2 * s))
    ratio = (
        SpectralScalar.from_scalar(q_power(l2 - l1) * qint(l2 - s + 1) / qint(l1 - s + 1))
        * (SONE - Z1 * qe)
        / (Z1 - qe)
    )
    assert closed_rho_d(l1, l2, 0, s) == closed_rho_d(l1, l2, 0, s - 1) * ratio


def test_admissibility_gate():
    check_admissible("c", ("+", "+"), [parse_scalar("q^-6"), ONE])
    with pytest.raises(AdmissibilityError) as exc:
        check_admissible("c", ("+", "+"), [parse_scalar("q^2"), ONE])
    assert exc.value.offending == (0, 1, 2)
    with pytest.raises(AdmissibilityError):
        check_admissible("d", (1, 1), [parse_scalar("q^6"), ONE])
    check_admissible("d", (1, 1), [parse_scalar("q^-3"), ONE])


def test_fusion_w1_image():
    cutoff = 5
    sigma = ("+", "-")
    pair = make_c_pair(2, sigma, cutoff=cutoff, level="bold")
    rho, dec = solve_R(pair, full_window=True)
    zc = parse_scalar("q^-4")
    cands = []
    for lam in sigma_component_partitions(sigma, cutoff):
        wt = hw_weight(pair.source.eps, lam, 2, "c")
        if wt is not None and wt.degree() <= cutoff:
            cands.append((lam, wt))
    image, dims, content, hw_vecs = fuse(pair, rho, dec, zc, ONE, cands, maxdeg=cutoff)
    assert image.dim() > 0
    assert {k for k, v in content.items() if v} == {(1,)}
    target_c = c_target_module(2, sigma, cutoff, "bold", zc)
    assert cyclicity_diagnostic(target_c, hw_vecs[(1,)], image, guard=2)["pass"]


def test_fusion_truncation_compare():
    cutoff = 5
    sigma = ("+", "-")
    zc = parse_scalar("q^-4")
    host = make_c_pair(2, sigma, cutoff=cutoff, level="bold")
    rho, dec = solve_R(host, full_window=True)
    image, _, _, _ = fuse(host, rho, dec, zc, ONE, [], maxdeg=cutoff)
    tgt = phi_words("c", "underline", host.source.eps)
    pair_u = make_c_pair(2, sigma, cutoff=cutoff, level="underline")
    rho_u, dec_u = solve_R(pair_u, full_window=True)
    img_u, _, _, _ = fuse(pair_u, rho_u, dec_u, zc, ONE, [], maxdeg=cutoff)
    tr_img = truncate_image_span(image, tgt.kept, pair_u.target)
    assert compare_spans(tr_img, img_u)["pass"]
