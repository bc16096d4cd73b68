import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from genrest.errors import StructureError
from genrest.field import gf
from genrest.groups import (GL2, GL2_PAIR, GSP4, PARAMODULAR_LEVI, SP4, build_group,
                            build_group_uncached, canonical_family, center, levi_decompose,
                            order_formula, pack, predicted_center, satisfies_family, unpack)

FAMILIES = [GL2, SP4, GSP4, PARAMODULAR_LEVI]
SMALL = [(f, q) for f in FAMILIES for q in (2, 3)]


def test_aliases():
    assert canonical_family("gsp4") == GSP4
    assert canonical_family("paramodular-levi") == PARAMODULAR_LEVI
    with pytest.raises(ValueError):
        canonical_family("so5")


@pytest.mark.parametrize("family,q,order", [
    (GL2, 2, 6), (GL2, 3, 48), (GL2, 4, 180), (GL2, 5, 480),
    (SP4, 2, 720), (SP4, 3, 51840), (GSP4, 2, 720), (GSP4, 3, 103680),
    (PARAMODULAR_LEVI, 2, 36), (PARAMODULAR_LEVI, 3, 1152), (GL2_PAIR, 3, 2304),
])
def test_orders(family, q, order):
    G = build_group(family, q)
    assert G.order == order == order_formula(family, q)
    assert satisfies_family(family, G.field, G.mats).all()


def test_bound_enforced():
    with pytest.raises(StructureError):
        build_group_uncached(GSP4, gf(4), bound=10_000)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_pack_roundtrip(q):
    rng = np.random.default_rng(q)
    mats = rng.integers(0, q, size=(50, 4, 4))
    assert (unpack(pack(mats, q), q, 4) == mats).all()
    # first entry is most significant, so keys sort like row-major tuples
    keys = pack(mats, q)
    order = sorted(range(50), key=lambda i: tuple(mats[i].ravel()))
    assert list(np.argsort(keys, kind="stable")) == order


@pytest.mark.parametrize("family,q", SMALL)
def test_group_axioms(family, q):
    G = build_group(family, q)
    rng = np.random.default_rng(0)
    if G.order <= 10_000:
        # full Cayley table: closure of every product
        for i in range(0, G.order, 256):
            rows = np.arange(i, min(i + 256, G.order))
            prods = G.field.matmul(G.mats[rows][:, None], G.mats[None])
            assert (G.locate(prods.reshape(-1, G.n, G.n), strict=False) >= 0).all()
        a, b, c = rng.integers(0, G.order, size=(3, 20_000))
    else:
        a, b, c = rng.integers(0, G.order, size=(3, 100_000))
    ab = G.mul(a, b)
    assert (G.mul(ab, c) == G.mul(a, G.mul(b, c))).all()
    e = np.full_like(a, G.identity)
    assert (G.mul(a, e) == a).all()
    assert (G.mul(a, G.inverse[a]) == G.identity).all()


@pytest.mark.parametrize("family,q,expected", [
    (GL2, 2, 3), (GL2, 3, 8), (SP4, 2, 11), (SP4, 3, 34), (GSP4, 2, 11), (GSP4, 3, 38),
    (PARAMODULAR_LEVI, 2, 9), (PARAMODULAR_LEVI, 3, 38),
])
def test_class_counts(family, q, expected):
    G = build_group(family, q)
    assert G.num_classes == expected
    assert G.class_sizes.sum() == G.order
    assert G.class_reps[0] == G.identity and G.class_sizes[0] == 1
    assert (G.order % G.class_sizes == 0).all()
    assert (G.centralizer_orders * G.class_sizes == G.order).all()


def test_gl2_q2_class_sizes():
    G = build_group(GL2, 2)
    assert sorted(G.class_sizes.tolist()) == [1, 2, 3]


def test_gl2_classes_by_invariants():
    # over F_q, GL2 classes of non-scalars are determined by (trace, det); q - 1 scalars
    # plus q - 1 non-semisimple classes sharing invariants with the scalars
    q = 3
    G = build_group(GL2, q)
    F = G.field
    m = G.mats
    inv = F.add(m[:, 0, 0], m[:, 1, 1]) * q + F.det(m)
    scalar = (m[:, 0, 1] == 0) & (m[:, 1, 0] == 0) & (m[:, 0, 0] == m[:, 1, 1])
    for c in range(G.num_classes):
        members = G.class_of == c
        assert len(np.unique(inv[members])) == 1
        assert scalar[members].all() or not scalar[members].any()
    assert G.num_classes == q * q - 1


@pytest.mark.parametrize("family,q", SMALL)
def test_conjugation_preserves_classes(family, q):
    G = build_group(family, q)
    rng = np.random.default_rng(1)
    g = rng.integers(0, G.order, size=8)
    for s in g:
        x = G.conjugate(G.mats[s])
        assert (G.class_of[x] == G.class_of).all()


@pytest.mark.parametrize("family,q", SMALL + [(GL2_PAIR, 3)])
def test_borel_and_center(family, q):
    G = build_group(family, q)
    sd = G.subgroup_data
    assert len(sd.B) == len(sd.T) * len(sd.U)
    assert np.array_equal(np.sort(center(G)), np.sort(predicted_center(G)))
    assert np.array_equal(sd.Z, center(G))
    # center by brute force over all elements, not only generators
    F = G.field
    for z in sd.Z[:3]:
        s = G.mats[z]
        assert (F.matmul(G.mats, s) == F.matmul(s, G.mats)).all()


def test_subgroup_examples():
    assert len(build_group(GSP4, 3).subgroup_data.U) == 81
    assert len(build_group(GL2, 2).subgroup_data.T) == 1
    assert len(build_group(PARAMODULAR_LEVI, 3).subgroup_data.Z) == 4


@pytest.mark.parametrize("family,tags", [
    (GL2, ["torus", "group"]),
    (GSP4, ["torus", "klingen", "siegel", "group"]),
    (PARAMODULAR_LEVI, ["torus", "first-block", "second-block", "group"]),
])
def test_parabolic_tags(family, tags):
    G = build_group(family, 3)
    assert sorted(r.tag for r in G.subgroup_data.parabolics) == sorted(tags)


@pytest.mark.parametrize("family,q", SMALL)
def test_weyl_element_and_q(family, q):
    G = build_group(family, q)
    sd = G.subgroup_data
    w = G.mats[sd.w_o]
    assert np.array_equal(np.intersect1d(sd.B, G.conjugate(w, sd.B)), sd.T)
    for rec in sd.parabolics:
        assert len(rec.P) == rec.M.order * len(rec.N)
        # |Q| is the size of M's own maximal unipotent subgroup
        u_m = rec.M.subgroup_data.U if rec.M is not G else sd.U
        assert len(rec.Q) == len(u_m)
        assert np.isin(rec.Q, rec.M_in_G).all()


def test_gsp4_q3_parabolic_sizes():
    G = build_group(GSP4, 3)
    for tag in ("siegel", "klingen"):
        rec = G.parabolic(tag)
        assert (len(rec.P), rec.M.order, len(rec.N), len(rec.Q)) == (2592, 96, 27, 3)


def test_levi_decompose_examples():
    G = build_group(GSP4, 3)
    rec = G.parabolic("siegel")
    m_local, n = levi_decompose(rec, rec.M_in_G[:20])
    assert (m_local == np.arange(20)).all() and (n == G.identity).all()
    m_local, n = levi_decompose(rec, rec.N)
    assert (m_local == rec.M.identity).all() and (n == rec.N).all()
    m_local, n = levi_decompose(rec, rec.P)
    assert (G.mul(rec.M_in_G[m_local], n) == rec.P).all()
    with pytest.raises(StructureError):
        levi_decompose(rec, [G.subgroup_data.w_o])


@settings(max_examples=25, deadline=None)
@given(family=st.sampled_from([GL2, GSP4, PARAMODULAR_LEVI]), seed=st.integers(0, 2 ** 31))
def test_class_functions_of_powers(family, seed):
    # conjugate elements have conjugate powers
    G = build_group(family, 3)
    rng = np.random.default_rng(seed)
    x, s = rng.integers(0, G.order, size=2)
    y = int(G.conjugate(G.mats[s], [x])[0])
    assert G.class_of[G.mul(x, x)] == G.class_of[G.mul(y, y)]
