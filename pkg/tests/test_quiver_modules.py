from itertools import product

import numpy as np
import pytest

from reltilt import linalg as la
from reltilt import modules as md
from reltilt.quiver import (ModuleMap, Quiver, Representation, build_algebra, direct_sum,
                            dual, kernel, kernel_cokernel, nakayama_on_projectives, opposite)


def brute_hom_count(m, n):
    """Count intertwiners by enumerating every vertexwise linear map (tiny cases only)."""
    p = m.p
    q = m.alg.quiver
    shapes = [(n.dims[i], m.dims[i]) for i in range(len(q.vertices))]
    total = sum(r * c for r, c in shapes)
    count = 0
    for entries in product(range(p), repeat=total):
        mats, k = [], 0
        for r, c in shapes:
            mats.append(np.array(entries[k:k + r * c], dtype=np.int64).reshape(r, c))
            k += r * c
        if ModuleMap(m, n, mats, check=False).intertwines():
            count += 1
    return count


def elements(mats, p):
    for coeffs in product(range(p), repeat=len(mats)):
        yield sum(int(c) * x for c, x in zip(coeffs, mats)) % p


def is_nilpotent(x, p):
    return not la.power(x, x.shape[0], p).any()


def brute_radical_dim(mats, p):
    """x is radical iff a x is nilpotent for every a in the algebra."""
    all_elems = list(elements(mats, p))
    rad = [x for x in all_elems if all(is_nilpotent(la.mul(a, x, p), p) for a in all_elems)]
    d = 0
    while p ** d < len(rad):
        d += 1
    assert p ** d == len(rad)
    return d


# -- algebras and standard modules -------------------------------------------------------

def test_kronecker_path_basis(kron):
    assert kron.alg.dim == 4


def test_nofadm_algebra(nofadm):
    alg = nofadm.alg
    assert alg.dim == 5
    assert alg.projective("1").dims == (1, 2)
    assert alg.injective("2").dims == (2, 2)


def test_relation_validation():
    q = Quiver(["1", "2"], [("a", "1", "2")])
    with pytest.raises(ValueError):
        build_algebra(q, 1)
    with pytest.raises(ValueError):
        build_algebra(q, 2, [{("a",): 1}])
    with pytest.raises(ValueError):
        Quiver(["1"], [("a", "1", "2")])
    alg = build_algebra(q, 2)
    with pytest.raises(ValueError):
        Representation(alg, [1, 1], {"a": [[1, 1]]})


def test_relations_enforced(nofadm):
    alg = nofadm.alg
    with pytest.raises(ValueError, match="relation"):
        Representation(alg, [0, 2], {"b": [[0, 1], [1, 0]]})


def test_direct_sum_and_kernel(nofadm):
    p1, k = nofadm.resolve("P1"), nofadm.resolve("K")
    s = direct_sum([p1, k])
    assert s.module.dims == (2, 3)
    for inj, proj in zip(s.injections, s.projections):
        assert (proj @ inj).is_iso()
    epi = md.hom_basis(p1, k)[0]
    assert epi.is_surjective()
    ker, _ = kernel(epi)
    assert md.is_isomorphic(ker, nofadm.alg.simple("2")) is not None
    kc = kernel_cokernel(epi)
    assert kc.cokernel.dim == 0
    assert md.is_isomorphic(kc.image, k) is not None


def test_nakayama_on_projectives(ejem4):
    alg = ejem4.alg
    p2, p1 = alg.projective("2"), alg.projective("1")
    (f,) = md.hom_basis(p2, p1)
    nu, src, tgt = nakayama_on_projectives(f, ["2"], ["1"])
    assert md.is_isomorphic(src.module, alg.injective("2")) is not None
    assert md.is_isomorphic(tgt.module, alg.injective("1")) is not None
    assert not nu.is_zero()
    assert md.hom_dim(alg.injective("2"), alg.injective("1")) == 1


def test_duality_round_trip(nofadm):
    alg = nofadm.alg
    assert opposite(opposite(alg)) is alg
    i2 = alg.injective("2")
    assert md.is_projective(dual(i2))
    assert md.is_injective(i2)


# -- Hom, iso, decomposition ---------------------------------------------------------------

def test_hom_examples(kron, nofadm):
    r10, r11 = kron.resolve("R(1:0,1)"), kron.resolve("R(1:1,1)")
    assert md.hom_dim(r10, r11) == 0
    s2, k = nofadm.alg.simple("2"), nofadm.resolve("K")
    assert md.hom_dim(s2, k) == 1
    assert 5 ** md.hom_dim(s2, k) == brute_hom_count(s2, k)


@pytest.mark.parametrize("a,b", [("S2", "K"), ("K", "P1"), ("P2", "K"), ("S1", "K")])
def test_hom_dims_against_enumeration(nofadm, a, b):
    m, n = nofadm.resolve(a), nofadm.resolve(b)
    assert 5 ** md.hom_dim(m, n) == brute_hom_count(m, n)


def test_iso_tops_differ(nofadm):
    assert md.is_isomorphic(nofadm.resolve("P1"), nofadm.resolve("L")) is None
    m = nofadm.resolve("P1+K")
    n = nofadm.resolve("K+P1")
    iso = md.is_isomorphic(m, n)
    assert iso is not None and iso.is_iso()


def test_decompose_regular_module(ejem4):
    alg = ejem4.alg
    lam = direct_sum([alg.projective(v) for v in alg.quiver.vertices]).module
    dec = md.decompose(lam)
    assert dec.rk == 3
    assert dec.multiplicities == [1, 1, 1]
    found = sorted(ejem4.name_of(x) for x in dec.representatives())
    assert found == ["P1", "P2", "S3"]      # P3 is simple, catalogued as S3


def test_decompose_splitting_maps(nofadm):
    m = nofadm.resolve("2*K+S1+P1")
    dec = md.decompose(m)
    assert sorted(dec.multiplicities) == [1, 1, 2]
    total = ModuleMap.zero(m, m)
    for s in dec.summands:
        assert (s.projection @ s.inclusion).is_iso()
        total = total + (s.inclusion @ s.projection)
    assert np.array_equal(total.block(), la.identity(m.dim))


def small_algebra_p3():
    q = Quiver(["1", "2"], [("a", "1", "2"), ("b", "2", "2")])
    return build_algebra(q, 3, [{("b", "b"): 1}], p=3)


def test_end_radical_against_brute_force():
    alg = small_algebra_p3()
    for m in (alg.projective("1"), alg.projective("2"),
              direct_sum([alg.simple("2"), alg.projective("2")]).module):
        end = md.end_algebra(m)
        assert end.rad_dim == brute_radical_dim(end.mats, 3)


def brute_is_local(mats, p):
    # every element is nilpotent or invertible
    return all(is_nilpotent(x, p) or la.invert(x, p) is not None for x in elements(mats, p))


def test_indecomposable_against_brute_force():
    alg = small_algebra_p3()
    cases = [alg.projective("1"), alg.projective("2"), alg.injective("2"),
             direct_sum([alg.simple("1"), alg.simple("2")]).module]
    for m in cases:
        end = md.end_algebra(m)
        assert md.is_indecomposable(m) == brute_is_local(end.mats, 3)


def test_end_algebra_field_extension():
    # regular Kronecker module at a point of degree 2: End is F_25, a field
    q = Quiver(["1", "2"], [("alpha", "1", "2"), ("beta", "1", "2")])
    alg = build_algebra(q, 2, p=5)
    c = la.mat([[0, 3], [1, 0]], 5)       # x^2 - 3 is irreducible mod 5
    m = Representation(alg, [2, 2], {"alpha": la.identity(2), "beta": c})
    end = md.end_algebra(m)
    assert end.dim == 2
    assert end.rad_dim == 0
    assert md.is_indecomposable(m)
    assert brute_is_local(end.mats, 5)
    assert md.decompose(m).rk == 1


# -- catalogs ------------------------------------------------------------------------------

def test_catalogs(ejem4, nofadm):
    assert sorted(ejem4.catalog.names) == sorted(["S1", "S2", "S3", "P1", "P2"])
    assert ejem4.catalog.complete
    assert sorted(nofadm.catalog.names) == sorted(["S2", "K", "P2", "L", "P1", "I2", "S1"])
    assert nofadm.catalog.complete


def test_incomplete_catalog_detected(kron):
    ok, reason = md.certify_complete(kron.catalog)
    assert not ok and reason
    assert not kron.catalog.complete


def test_catalog_truncated_is_not_complete(ejem4):
    cat = md.enumerate_indecomposables(ejem4.alg, (1, 0, 1))
    ok, _ = md.certify_complete(cat)
    assert not ok


def test_locate_agrees_with_find(nofadm):
    cat = nofadm.catalog
    for k, e in enumerate(cat.entries):
        assert cat.find(e) == k
    m = nofadm.resolve("P1+2*K")
    assert sorted(cat.locate(m)) == sorted([cat.names.index("P1")] + [cat.names.index("K")] * 2)


# -- radical layers, presentations, τ, Ext --------------------------------------------------

def test_irreducible_map_nofadm(nofadm):
    p2, p1 = nofadm.resolve("P2"), nofadm.resolve("P1")
    space = md.hom_space(p2, p1)
    rad = md.rad_hom_space(p2, p1)
    rad2 = md.rad2_hom_space(p2, p1, nofadm.catalog.entries)
    assert rad.shape[1] == space.dim == 2
    assert rad2.shape[1] == 1
    # the map e2 -> a is irreducible, e2 -> b a is not
    irreducible = [f for f in space.basis if not md.in_span_of(space, rad2, f)]
    assert irreducible


def test_minimal_presentations(ejem4, nofadm):
    pres = md.minimal_presentation(ejem4.alg.simple("1"))
    assert (pres.p0_vertices, pres.p1_vertices) == (["1"], ["2"])
    pres = md.minimal_presentation(nofadm.resolve("K"))
    assert (pres.p0_vertices, pres.p1_vertices) == (["1"], ["2"])


def test_tau_ejem4(ejem4):
    alg = ejem4.alg
    assert md.is_isomorphic(md.tau(alg.simple("1")), alg.simple("2")) is not None
    assert md.is_isomorphic(md.tau(alg.simple("2")), alg.simple("3")) is not None
    assert md.tau(alg.projective("1")).dim == 0
    assert md.is_isomorphic(md.tau_inverse(alg.simple("3")), alg.simple("2")) is not None


def test_ext_ejem4(ejem4):
    alg = ejem4.alg
    assert md.ext1_dim(alg.simple("1"), alg.simple("2")) == 1
    assert md.ext1_dim(alg.simple("2"), alg.simple("1")) == 0
    assert md.ext_dim(alg.simple("1"), alg.simple("3"), 2) == 1


def test_ext_bounded_by_hom_into_tau(nofadm):
    # Ext^1(M, N) is a quotient of D Hom(N, τM)
    cat = nofadm.catalog
    for m in cat.entries:
        t = md.tau(m)
        for n in cat.entries:
            if md.ext1_dim(m, n) and t.dim:
                assert md.hom_dim(n, t) >= md.ext1_dim(m, n)


def test_non_split_extension_is_left_minimal(ejem4):
    alg = ejem4.alg
    (f,) = md.hom_basis(alg.simple("2"), alg.projective("1"))
    assert md.is_minimal(f, "left")
    split = direct_sum([alg.simple("2"), alg.simple("1")])
    assert not md.is_minimal(split.injections[0], "left")
    assert md.is_minimal(split.projections[1], "right") is False


def test_almost_split_sequence(nofadm):
    i2 = nofadm.resolve("I2")
    b, f, g = md.almost_split_sequence(i2)
    assert f.is_injective() and g.is_surjective() and (g @ f).is_zero()
    assert md.is_isomorphic(f.source, md.tau(i2)) is not None
    assert sorted(nofadm.name_of(x) for x in md.decompose(b).representatives()) == ["L", "P1"]
