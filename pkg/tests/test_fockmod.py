import pytest

from qosc.fockmod import (
    FockVector,
    RestrictedModule,
    TensorModule,
    W2Module,
    WModule,
    act,
    act_k,
    flat_label,
    parity_split,
    weight_block,
)
from qosc.lattice import EpsilonData, Weight, qpair, simple_root
from qosc.linalg import RowBasis
from qosc.scalars import ONE, Q, Scalar, Z1, W as Wsc, parse_scalar, qint

EPS = EpsilonData((1, 0, 1, 0, 1))
EPSP = EpsilonData((0, 1, 0, 1, 0))


def test_action_table_examples():
    mod = WModule(EPS, Z1, cutoff=6)
    zero = (0,) * 5
    v = FockVector.basis(zero)
    img = act(mod, ("e", 0), v)
    assert img.terms == {(1, 1, 0, 0, 0): Z1}
    assert act(mod, ("f", 0), v).is_zero()
    assert mod.weight_of(zero) == Weight(1, (0,) * 5)
    assert mod.weight_of((0, 0, 0, 0, 1)) == Weight(1, (0, 0, 0, 0, 1))


def test_printed_k_rows_match_qpair():
    mod = WModule(EPS, Scalar.from_int(1), cutoff=6)
    m = (1, 2, 0, 1, 0)
    kv = act_k(mod, simple_root(0, EPS), FockVector.basis(m))
    assert kv.terms[m] == EPS.qi(1) ** (m[0] - 1) * EPS.qi(2) ** m[1]
    kv = act_k(mod, simple_root(5, EPS), FockVector.basis(m))
    assert kv.terms[m] == EPS.qi(5) ** (1 - m[4]) * EPS.qi(4) ** (-m[3])
    kv = act_k(mod, EPS.Lam(), FockVector.basis(m))
    assert kv.terms[m] == Wsc ** sum(m)

    w2 = W2Module(EPSP, Scalar.from_int(1), cutoff=6)
    lab = ((1, 0, 2, 0, 0), (0, 1, 0, 0, 1))
    kv = act_k(w2, simple_root(0, EPSP), FockVector.basis(lab))
    want = EPSP.qi(1) ** 1 * EPSP.qi(2) ** 1 * Q**2
    assert kv.terms[lab] == want
    assert w2.weight_of(lab) == Weight(2, (1, 1, 2, 0, 1))


def test_kets_outside_cone_are_dropped():
    mod = WModule(EPS, Scalar.from_int(1), cutoff=6)
    # e_1 on m_1 = 1 would give m_1 = 0, fine; f_1 pushes into m_1 = 2: dropped
    v = FockVector.basis((1, 1, 0, 0, 0))
    img = act(mod, ("f", 1), v)
    assert img.is_zero()


def test_overflow_flag_is_sticky():
    mod = WModule(EPS, Scalar.from_int(1), cutoff=2)
    v = FockVector.basis((0, 1, 0, 1, 0))
    img = act(mod, ("f", 5), v)  # degree 4 > cutoff
    assert img.is_zero() and img.overflow


def test_generator_domain_error():
    mod = WModule(EPS, Scalar.from_int(1), cutoff=4)
    with pytest.raises(ValueError):
        act(mod, ("e", 9), FockVector.basis((0,) * 5))


def test_guard_violation_raises_window_error():
    from qosc.fockmod import WindowError, eval_word_guarded
    from qosc.words import WordExpr

    mod = WModule(EPS, Scalar.from_int(1), cutoff=4)
    expr = WordExpr.e(0) * WordExpr.f(5)  # raises degree by 4
    with pytest.raises(WindowError):
        eval_word_guarded(expr, FockVector.basis((0, 1, 0, 1, 0)), mod)


def test_weight_compatibility_and_degree_bookkeeping():
    mod = W2Module(EPSP, parse_scalar("q^2"), cutoff=4)
    for label in mod.enumerate_labels(2):
        wt = mod.weight_of(label)
        d = mod.degree(label)
        for i in EPSP.I:
            for kind, sign in (("e", 1), ("f", -1)):
                img = act(mod, (kind, i), FockVector.basis(label))
                root = simple_root(i, EPSP)
                shift = mod.atom_shift((kind, i))
                for l2 in img.terms:
                    assert mod.weight_of(l2) == (
                        wt + root if sign > 0 else wt - root
                    )
                    assert mod.degree(l2) == d + shift


def test_k_acts_by_qpair_eigenvalue():
    mod = WModule(EPS, Scalar.from_int(1), cutoff=5)
    mus = [EPS.Lam()] + [EPS.delta(a) for a in EPS.II]
    for label in mod.enumerate_labels(3):
        wt = mod.weight_of(label)
        for mu in mus:
            kv = act_k(mod, mu, FockVector.basis(label))
            assert kv.terms[label] == qpair(wt, mu, EPS)


def test_parity_split_and_stability():
    mod = WModule(EPS, Scalar.from_int(1), cutoff=6)
    even, odd = parity_split(mod)
    assert even((0,) * 5) and odd((0, 0, 0, 0, 1))
    for label in mod.enumerate_labels(4):
        p = mod.parity(label)
        for i in EPS.I:
            for kind in ("e", "f"):
                img = act(mod, (kind, i), FockVector.basis(label))
                for l2 in img.terms:
                    assert mod.parity(l2) == p


def test_weight_block_constrained_multiplicity():
    # at eps_n = 1 the pair (e_n, e_n) is the only split of 2 e_n
    wx = WModule(EPS, parse_scalar("q^2"), cutoff=6)
    wy = WModule(EPS, parse_scalar("q^-2"), cutoff=6)
    T = TensorModule([wx, wy])
    wt = Weight(2, (0, 0, 0, 0, 2))
    labels = weight_block(T, wt)
    assert labels == [((0, 0, 0, 0, 1), (0, 0, 0, 0, 1))]
    # with eps'_n = 0 the same weight has three splits
    w2x = W2Module(EPSP, parse_scalar("q^2"), cutoff=6)
    wt2 = Weight(2, (0, 0, 0, 0, 2))
    labels = w2x.labels_by_delta((0, 0, 0, 0, 2))
    assert len(labels) == 3


def test_coassociativity_of_iterated_coproducts():
    xs = [parse_scalar("q^2"), parse_scalar("q^-2"), parse_scalar("q^4")]
    mods = [WModule(EPS, x, cutoff=4) for x in xs]
    flat = TensorModule(mods)
    left = TensorModule([TensorModule(mods[:2]), mods[2]])
    right = TensorModule([mods[0], TensorModule(mods[1:])])

    def as_flat(vec):
        return {flat_label(l): c for l, c in vec.terms.items()}

    labels = [l for l in flat.enumerate_labels(2)]
    for lab in labels:
        lab_left = ((lab[0], lab[1]), lab[2])
        lab_right = (lab[0], (lab[1], lab[2]))
        for i in EPS.I:
            for kind in ("e", "f"):
                a = as_flat(act(flat, (kind, i), FockVector.basis(lab)))
                b = as_flat(act(left, (kind, i), FockVector.basis(lab_left)))
                c = as_flat(act(right, (kind, i), FockVector.basis(lab_right)))
                assert set(a) == set(b) == set(c)
                for k in a:
                    assert a[k] == b[k] == c[k]


def test_desk_scale_cyclicity_of_parity_submodules():
    # W^+ and W^- are generated by their top vectors within the window
    mod = WModule(EPS, parse_scalar("q^2"), cutoff=4)
    for parity, start in ((0, (0,) * 5), (1, (0, 0, 0, 0, 1))):
        sub = RestrictedModule(mod, parity)
        seen = {}
        queue = [FockVector.basis(start)]
        basis = {}
        while queue:
            v = queue.pop(0)
            lab = next(iter(v.terms))
            wt = sub.weight_of(lab)
            rb = basis.setdefault(wt, RowBasis())
            ok, _ = rb.add(v.terms)
            if not ok:
                continue
            for i in EPS.I:
                for kind in ("e", "f"):
                    img = act(sub, (kind, i), v)
                    if not img.is_zero() and not img.overflow:
                        queue.append(img)
        for label in sub.enumerate_labels(2):
            wt = sub.weight_of(label)
            assert basis[wt].contains({label: ONE}), (parity, label)
