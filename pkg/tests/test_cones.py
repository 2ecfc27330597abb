import random

import pytest

from builders import sphere
from pemb.algebra import CdgaMorphism, materialize_free_cdga
from pemb.cones import (ConeError, build_acyclic_truncation, check_shift_bounds,
                        semi_trivial_cone, truncated_cone, zero_ideal)
from pemb.fields import QQ
from pemb.graded import DegreeWindow, GradedLinearMap, cohomology
from pemb.linalg import Matrix, add_vec, scale_vec
from pemb.modules import (DgModuleMorphism, FreeGenerator, algebra_as_module,
                          free_module, restrict_scalars, shifted_dual,
                          solve_chain_maps)


def empty_cone():
    r = sphere(6)
    x, _ = free_module(r, [], {}, DegreeWindow(0, 7))
    f = DgModuleMorphism(x, algebra_as_module(r),
                         GradedLinearMap.zero_map(x.space, r.space, 0))
    return semi_trivial_cone(f)


def pipeline_cone():
    """R = H^*(S^6), D = s^{-6}#H^*(S^2) over R, psi the top-degree map."""
    r = sphere(6, hi=7)
    q = sphere(2, hi=7)
    phi = CdgaMorphism(r, q, GradedLinearMap(r.space, q.space, 0,
                                             {0: Matrix.identity(QQ, 1)}))
    d = restrict_scalars(shifted_dual(algebra_as_module(q), 6), phi)
    psi, _ = solve_chain_maps(
        d, algebra_as_module(r),
        [("class", 6, d.basis_vec(6, 0), r.basis_vec(6, 0))])
    return semi_trivial_cone(psi)


def test_cone_of_empty_module_is_base():
    cone = empty_cone()
    assert cone.leibniz.ok
    assert cone.space.dims == cone.base.space.dims
    bounds = check_shift_bounds(cone)
    assert bounds.found and bounds.hi is None
    alg, incl = cone.to_cdga()
    assert incl.map.block(6).rank() == 1


def test_pipeline_cone_passes_leibniz():
    cone = pipeline_cone()
    assert cone.space.dims == {0: 1, 3: 1, 5: 1, 6: 1}
    assert cohomology(cone.complex).dims == {0: 1, 3: 1}
    assert cone.leibniz.ok
    bounds = check_shift_bounds(cone)
    assert bounds.values() == [3]
    cone.to_cdga()


def witness_cone():
    """u^3-truncated polynomial base with two attached generators whose
    images multiply above the degree bounds: Leibniz genuinely fails."""
    r = materialize_free_cdga(QQ, [("u", 2)], {}, [{(0, 0, 0): 1}],
                              DegreeWindow(0, 8))
    x, _ = free_module(r, [FreeGenerator("a", 2, 0), FreeGenerator("b", 4, 1)],
                       {}, DegreeWindow(0, 8))
    u = r.basis_vec(2, 0)
    u2 = r.mul_vec(2, u, 2, u)
    blocks = {
        2: Matrix.from_cols(QQ, [u], 1),                  # f(a) = u
        4: Matrix.from_cols(QQ, [u2, u2], 1),             # f(u a) = f(b) = u^2
    }
    f = DgModuleMorphism(x, algebra_as_module(r),
                         GradedLinearMap(x.space, r.space, 0, blocks))
    return semi_trivial_cone(f)


def test_frozen_leibniz_failure_witness():
    cone = witness_cone()
    rep = cone.leibniz
    assert not rep.ok
    (d1, _, l1), (d2, _, l2) = rep.witness
    assert (d1, l1) == (1, "sa")
    assert (d2, l2) == (3, "sb")
    assert rep.defect_degree == 5
    # defect = s(u^2 a) - s(u b) in the ordered degree-5 basis
    assert rep.defect == (QQ.one, QQ.of(-1))
    assert not check_shift_bounds(cone).found
    with pytest.raises(ConeError):
        cone.to_cdga()


def test_acyclic_truncation_of_pipeline_cone():
    cone = pipeline_cone()
    ideal = build_acyclic_truncation(cone, 4)
    assert ideal.acyclic
    assert ideal.dims == {5: 1, 6: 1}
    # d maps the degree-5 suspended class onto e6
    tc = truncated_cone(cone, ideal, 3, 3)
    assert tc.algebra.space.dims == {0: 1, 3: 1}
    assert tc.algebra.mul_basis(3, 0, 3, 0) == ()
    assert tc.base_map.map.block(6).is_zero()
    assert tc.base_map.map.block(0).rank() == 1


def test_acyclic_truncation_rejects_visible_cohomology():
    cone = pipeline_cone()
    with pytest.raises(ConeError, match="connectivity hypothesis violated"):
        build_acyclic_truncation(cone, 3)


def test_truncated_cone_rejects_bad_bounds():
    cone = pipeline_cone()
    ideal = build_acyclic_truncation(cone, 4)
    with pytest.raises(ConeError, match="suspended part"):
        truncated_cone(cone, ideal, 4, 3)
    with pytest.raises(ConeError, match="not contained in the ideal"):
        truncated_cone(cone, zero_ideal(), 3, 3)


def test_zero_ideal_with_plain_bounds_reduces_to_cone():
    cone = pipeline_cone()
    ideal = build_acyclic_truncation(cone, 7)  # empty above the window top
    assert ideal.dims == {}
    tc = truncated_cone(cone, ideal, 3, 0)
    assert tc.algebra.space.dims == cone.space.dims


def random_bounded_cone(rng, k):
    """Random cone satisfying the concentration bounds by construction."""
    j = rng.choice([d for d in range(2, 2 * k + 1)])
    r = sphere(j, hi=2 * k)
    gdeg = rng.randint(k + 1, 2 * k + 1)
    gens = [FreeGenerator("g%d" % i, gdeg, i)
            for i in range(rng.randint(1, 2))]
    x, _ = free_module(r, gens, {}, DegreeWindow(0, 2 * k + 1))
    sol = solve_chain_maps(x, algebra_as_module(r))
    f, kernel = sol
    glm = f.map
    for g in kernel:
        if rng.random() < 0.6:
            glm = glm.add(g.map.scale(QQ.of(rng.randint(-2, 2))))
    return semi_trivial_cone(DgModuleMorphism(x, algebra_as_module(r), glm))


def test_bounded_cones_always_pass_leibniz():
    rng = random.Random(20240818)
    for _ in range(25):
        k = rng.randint(2, 4)
        cone = random_bounded_cone(rng, k)
        bounds = check_shift_bounds(cone)
        assert bounds.found and k in bounds.values(cap=10)
        assert cone.leibniz.ok
        cone.to_cdga()
