from fractions import Fraction

import pytest

from builders import (complex_projective, product_s2_s4, sphere, sullivan_cp2,
                      torus_s1_s7, wedge_s2_s4)
from pemb.algebra import (AlgebraError, Cdga, cohomology_algebra,
                          check_poincare_duality, direct_sum_cdga,
                          materialize_free_cdga, quotient_by_acyclic_ideal)
from pemb.fields import PrimeField, QQ
from pemb.graded import DegreeWindow, cohomology


def test_cp2_truncated_polynomial():
    a = complex_projective(2, hi=8)
    assert a.space.dims == {0: 1, 2: 1, 4: 1}
    # x * x = x^2
    assert a.mul_basis(2, 0, 2, 0) == (QQ.one,)
    assert a.mul_basis(2, 0, 4, 0) == ()  # x^3 = 0, degree 6 empty


def test_sphere_six():
    a = sphere(6)
    assert a.space.dims == {0: 1, 6: 1}
    assert cohomology(a.complex).dims == {0: 1, 6: 1}


def test_odd_sphere_exterior():
    a = sphere(3)
    assert a.space.dims == {0: 1, 3: 1}
    # odd generator squares to zero automatically
    assert a.mul_basis(3, 0, 3, 0) == ()


def test_torus_s1_s7_signs():
    a = torus_s1_s7()
    assert a.space.dims == {0: 1, 1: 1, 7: 1, 8: 1}
    ab = a.mul_basis(1, 0, 7, 0)
    ba = a.mul_basis(7, 0, 1, 0)
    assert ab == (QQ.one,)
    assert ba == (QQ.of(-1),)
    a.validate()


def test_sullivan_cp2_cohomology():
    a = sullivan_cp2()
    assert cohomology(a.complex).dims == {0: 1, 2: 1, 4: 1}
    h, _ = cohomology_algebra(a)
    # H must be Q[x]/x^3 with the same structure constants
    b = complex_projective(2, hi=8)
    assert h.space.dims == b.space.dims
    assert h.mul_basis(2, 0, 2, 0) == b.mul_basis(2, 0, 2, 0)


def test_cohomology_algebra_of_zero_differential_is_itself():
    a = product_s2_s4()
    h, _ = cohomology_algebra(a)
    assert h.space.dims == a.space.dims
    assert h.mul_basis(2, 0, 4, 0) == a.mul_basis(2, 0, 4, 0)


def acyclic_pair_cdga():
    """Unit plus a d-paired generator couple x1 -> y2, products truncated."""
    from pemb.graded import (CochainComplex, GradedLinearMap, GradedVectorSpace)
    from pemb.linalg import Matrix
    sp = GradedVectorSpace(QQ, DegreeWindow(0, 2), {0: 1, 1: 1, 2: 1})
    d = GradedLinearMap(sp, sp, 1, {1: Matrix(QQ, [[1]])})
    product = {(0, 0, 0, 0): (QQ.one,), (0, 0, 1, 0): (QQ.one,),
               (0, 0, 2, 0): (QQ.one,)}
    return Cdga(QQ, CochainComplex(sp, d), product, (QQ.one,))


def test_cohomology_algebra_acyclic():
    # (x2, y1 ; dy = x) on an odd window: cohomology is just Q
    a = materialize_free_cdga(QQ, [("x", 2), ("y", 1)], {"y": {(0,): 1}}, [],
                              DegreeWindow(0, 4))
    h, _ = cohomology_algebra(a)
    assert h.space.dims == {0: 1}


def test_pd_sphere():
    cert, fail = check_poincare_duality(sphere(6), 6)
    assert fail is None
    assert cert.n == 6
    assert cert.pairings[0].rank() == 1


def test_pd_cp2():
    cert, fail = check_poincare_duality(complex_projective(2, hi=8), 4)
    assert fail is None
    assert cert.pairings[2] .rank() == 1


def test_pd_wedge_fails():
    cert, fail = check_poincare_duality(wedge_s2_s4(hi=7), 6)
    assert cert is None
    assert fail.degree == 2
    assert "pairing" in fail.reason


def test_pd_product():
    cert, fail = check_poincare_duality(product_s2_s4(), 6)
    assert fail is None


def test_pd_wrong_dimension():
    cert, fail = check_poincare_duality(sphere(6, hi=8), 8)
    assert cert is None


def test_quotient_by_acyclic_ideal_identity_case():
    a = complex_projective(2, hi=8)
    q, proj = quotient_by_acyclic_ideal(a, 4)
    assert q.space.dims == a.space.dims


def test_quotient_by_acyclic_ideal_sullivan():
    a = sullivan_cp2(hi=8)
    q, proj = quotient_by_acyclic_ideal(a, 4)
    assert all(d <= 5 for d in q.space.dims)
    assert cohomology(q.complex).dims == {0: 1, 2: 1, 4: 1}


def test_quotient_by_acyclic_ideal_acyclic_algebra():
    a = acyclic_pair_cdga()
    q, proj = quotient_by_acyclic_ideal(a, 0)
    assert cohomology(q.complex).dims == {0: 1}
    assert q.space.dims == {0: 1}


def test_quotient_rejects_high_cohomology():
    a = sphere(6)
    with pytest.raises(AlgebraError):
        quotient_by_acyclic_ideal(a, 2)


def test_materialize_rejects_bad_differential():
    # d(x) = y^2 has degree 2 on a degree-1 generator: not homogeneous of x+1
    with pytest.raises(AlgebraError):
        materialize_free_cdga(QQ, [("x", 1), ("y", 1)], {"x": {(1, 1): 1}}, [],
                              DegreeWindow(0, 4))


def test_materialize_over_f2():
    f2 = PrimeField(2)
    a = sphere(6, field=f2)
    assert a.space.dims == {0: 1, 6: 1}
    a.validate()


def test_direct_sum():
    a = direct_sum_cdga([sphere(7, hi=16), sphere(7, hi=16)])
    assert a.space.dims == {0: 2, 7: 2}
    assert not a.is_connected()
    # units multiply componentwise
    assert a.mul_basis(0, 0, 7, 1) == (QQ.zero, QQ.zero)
    assert a.mul_basis(0, 0, 7, 0) == (QQ.one, QQ.zero)


def test_validation_catches_broken_commutativity():
    a = sphere(3)
    bad = dict(a.product)
    bad[(3, 0, 3, 0)] = ()  # fine, degree 6 outside window; break unit instead
    bad[(0, 0, 3, 0)] = (QQ.of(2),)
    with pytest.raises(AlgebraError):
        Cdga(a.field, a.complex, bad, a.unit)
