"""Shared constructions of small standard algebras for the test suite."""

from pemb.algebra import materialize_free_cdga
from pemb.fields import QQ
from pemb.graded import DegreeWindow


def sphere(n, hi=None, field=QQ):
    """Cohomology of the n-sphere as a one-generator presentation."""
    if hi is None:
        hi = n + 1
    rels = [{(0, 0): 1}] if n % 2 == 0 else []
    return materialize_free_cdga(field, [("e%d" % n, n)], {}, rels,
                                 DegreeWindow(0, hi))


def complex_projective(k, hi=None, field=QQ):
    if hi is None:
        hi = 2 * k + 1
    return materialize_free_cdga(field, [("x", 2)], {}, [{(0,) * (k + 1): 1}],
                                 DegreeWindow(0, hi))


def wedge_s2_s4(hi=9, field=QQ):
    """H^*(S^2 v S^4): two even classes with all positive products zero."""
    rels = [{(0, 0): 1}, {(0, 1): 1}, {(1, 1): 1}]
    return materialize_free_cdga(field, [("x2", 2), ("x4", 4)], {}, rels,
                                 DegreeWindow(0, hi))


def product_s2_s4(hi=7, field=QQ):
    """H^*(S^2 x S^4)."""
    rels = [{(0, 0): 1}, {(1, 1): 1}]
    return materialize_free_cdga(field, [("x2", 2), ("x4", 4)], {}, rels,
                                 DegreeWindow(0, hi))


def sullivan_cp2(hi=8, field=QQ):
    """(x2, y5 ; dy = x^3), a two-stage model with H = H^*(CP^2)."""
    return materialize_free_cdga(field, [("x", 2), ("y", 5)],
                                 {"y": {(0, 0, 0): 1}}, [], DegreeWindow(0, hi))


def torus_s1_s7(hi=16, field=QQ):
    """H^*(S^1 x S^7), exterior on degrees 1 and 7."""
    return materialize_free_cdga(field, [("a", 1), ("b", 7)], {}, [],
                                 DegreeWindow(0, hi))
