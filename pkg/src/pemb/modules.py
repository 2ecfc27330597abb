"""DG modules over a CDGA and the linear-algebra engine built on them.

All module maps are found or certified by solving explicit affine
systems over the ground field: linearity and chain-map conditions become
rows, homotopy and cohomology-class conditions add auxiliary columns.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graded import (CochainComplex, DegreeWindow, GradedLinearMap,
                     GradedVectorSpace, cohomology, dualize,
                     induced_on_cohomology, is_chain_map, mapping_cone, suspend)
from .linalg import (Matrix, add_vec, is_zero_vec, scale_vec,
                     span_complement_coords, unit_vec, zero_vec)


class ModuleError(ValueError):
    pass


class DgModule:
    """Left DG module over a CDGA, with sparse action constants.

    action maps (alg_deg, alg_idx, mod_deg, mod_idx) to the vector of
    a_{alg_deg,alg_idx} . m_{mod_deg,mod_idx} in degree alg_deg+mod_deg.
    """

    def __init__(self, algebra, complex_, action, validate=True):
        self.algebra = algebra
        self.complex = complex_
        self.space = complex_.space
        self.field = algebra.field
        self.action = {}
        for (da, ia, dm, jm), v in action.items():
            v = tuple(v)
            if len(v) != self.space.dim(da + dm):
                raise ModuleError("action (%d,%d) on (%d,%d) has wrong length"
                                  % (da, ia, dm, jm))
            if not is_zero_vec(v):
                self.action[(da, ia, dm, jm)] = v
        if validate:
            self.validate()

    def act_basis(self, da, ia, dm, jm):
        d = da + dm
        n = self.space.dim(d)
        if n == 0:
            return ()
        return self.action.get((da, ia, dm, jm), zero_vec(self.field, n))

    def act_vec(self, da, av, dm, mv):
        out = zero_vec(self.field, self.space.dim(da + dm))
        for ia, c1 in enumerate(av):
            if c1 == 0:
                continue
            for jm, c2 in enumerate(mv):
                if c2 == 0:
                    continue
                out = add_vec(out, scale_vec(c1 * c2, self.act_basis(da, ia, dm, jm)))
        return out

    def basis_vec(self, d, i):
        return unit_vec(self.field, self.space.dim(d), i)

    def d_vec(self, d, v):
        return self.complex.d.apply(d, v)

    def validate(self):
        a = self.algebra
        sp = self.space
        for dm in sp.degrees():
            for jm in range(sp.dim(dm)):
                m = self.basis_vec(dm, jm)
                if self.act_vec(0, a.unit, dm, m) != m:
                    raise ModuleError("unit does not act as identity on %s"
                                      % sp.label(dm, jm))
        degs_a = a.space.degrees()
        for da in degs_a:
            for db in degs_a:
                for dm in sp.degrees():
                    if da + db + dm > sp.window.hi:
                        continue
                    for ia in range(a.space.dim(da)):
                        av = a.basis_vec(da, ia)
                        for ib in range(a.space.dim(db)):
                            bv = a.basis_vec(db, ib)
                            ab = a.mul_vec(da, av, db, bv)
                            for jm in range(sp.dim(dm)):
                                m = self.basis_vec(dm, jm)
                                lhs = self.act_vec(da, av, db + dm,
                                                   self.act_vec(db, bv, dm, m))
                                rhs = self.act_vec(da + db, ab, dm, m)
                                if lhs != rhs:
                                    raise ModuleError(
                                        "action not associative on (%s, %s, %s)"
                                        % (a.space.label(da, ia),
                                           a.space.label(db, ib), sp.label(dm, jm)))
        for da in degs_a:
            sgn = self.field.sign(da)
            for dm in sp.degrees():
                if da + dm + 1 > sp.window.hi:
                    continue
                for ia in range(a.space.dim(da)):
                    av = a.basis_vec(da, ia)
                    dav = a.d_vec(da, av)
                    for jm in range(sp.dim(dm)):
                        m = self.basis_vec(dm, jm)
                        lhs = self.d_vec(da + dm, self.act_vec(da, av, dm, m))
                        rhs = add_vec(self.act_vec(da + 1, dav, dm, m),
                                      scale_vec(sgn, self.act_vec(da, av, dm + 1,
                                                                  self.d_vec(dm, m))))
                        if lhs != rhs:
                            raise ModuleError("action Leibniz fails on (%s, %s)"
                                              % (a.space.label(da, ia),
                                                 sp.label(dm, jm)))

    def __repr__(self):
        return "DgModule(dims=%s)" % (self.space.dims,)


def algebra_as_module(a):
    action = {k: v for k, v in a.product.items()}
    # make the action total on both orders (module actions are one-sided)
    full = {}
    for d1 in a.space.degrees():
        for d2 in a.space.degrees():
            if d1 + d2 > a.space.window.hi:
                continue
            for i1 in range(a.space.dim(d1)):
                for i2 in range(a.space.dim(d2)):
                    v = a.mul_basis(d1, i1, d2, i2)
                    if v and not is_zero_vec(v):
                        full[(d1, i1, d2, i2)] = v
    return DgModule(a, a.complex, full, validate=False)


class DgModuleMorphism:
    """Degree-0 linear chain map between modules over one algebra."""

    def __init__(self, source, target, glm, validate=True):
        self.source = source
        self.target = target
        self.map = glm
        if validate:
            self.validate()

    def apply(self, d, v):
        return self.map.apply(d, v)

    def validate(self):
        if self.map.shift != 0:
            raise ModuleError("module morphisms must have degree 0")
        if not is_chain_map(self.map, self.source.complex, self.target.complex):
            raise ModuleError("module morphism is not a chain map")
        a = self.source.algebra
        sp = self.source.space
        for da in a.space.degrees():
            for ia in range(a.space.dim(da)):
                av = a.basis_vec(da, ia)
                for dm in sp.degrees():
                    for jm in range(sp.dim(dm)):
                        m = self.source.basis_vec(dm, jm)
                        lhs = self.apply(da + dm, self.source.act_vec(da, av, dm, m))
                        rhs = self.target.act_vec(da, av, dm, self.apply(dm, m))
                        if lhs != rhs:
                            raise ModuleError("morphism not linear over (%s) at %s"
                                              % (a.space.label(da, ia),
                                                 sp.label(dm, jm)))

    def compose(self, other):
        return DgModuleMorphism(other.source, self.target,
                                self.map.compose(other.map), validate=False)

    def scale(self, c):
        return DgModuleMorphism(self.source, self.target, self.map.scale(c),
                                validate=False)


def restrict_scalars(m, phi):
    """View a module over the target of phi as a module over its source."""
    a = phi.source
    action = {}
    sp = m.space
    for da in a.space.degrees():
        for ia in range(a.space.dim(da)):
            img = phi.apply(da, a.basis_vec(da, ia))
            if is_zero_vec(img):
                continue
            for dm in sp.degrees():
                if da + dm > sp.window.hi or sp.dim(da + dm) == 0:
                    continue
                for jm in range(sp.dim(dm)):
                    v = m.act_vec(da, img, dm, m.basis_vec(dm, jm))
                    if not is_zero_vec(v):
                        action[(da, ia, dm, jm)] = v
    return DgModule(a, m.complex, action)


def suspend_module(m, k):
    """k-fold suspension: r.(s^k x) = (-1)^(|r| k) s^k(r.x)."""
    if k == 0:
        return m
    cx = suspend(m.complex, k)
    action = {}
    for (da, ia, dm, jm), v in m.action.items():
        sgn = m.field.sign(da * k)
        action[(da, ia, dm - k, jm)] = scale_vec(sgn, v)
    return DgModule(m.algebra, cx, action)


def dual_module(m):
    """Linear dual with the left action <x, a.f> = +-<x.a, f> converted
    through graded commutativity: (a.f)(x) = (-1)^(|a|(|a|+|f|)) f(a.x)."""
    cx = dualize(m.complex)
    sp = m.space
    field = m.field
    a = m.algebra
    action = {}
    for da in a.space.degrees():
        for ia in range(a.space.dim(da)):
            av = a.basis_vec(da, ia)
            for j in cx.space.degrees():
                # a . (dual of M^(-j)) lands in duals of M^(-j-da)
                src_deg = -j
                out_deg = -j - da
                if cx.space.dim(j + da) == 0 or sp.dim(src_deg) == 0:
                    continue
                sgn = field.sign(da * (da + j))
                for b in range(sp.dim(src_deg)):
                    out = [field.zero] * sp.dim(out_deg)
                    for c in range(sp.dim(out_deg)):
                        w = m.act_vec(da, av, out_deg, m.basis_vec(out_deg, c))
                        out[c] = sgn * w[b]
                    if not is_zero_vec(tuple(out)):
                        action[(da, ia, j, b)] = tuple(out)
    return DgModule(a, cx, action)


def shifted_dual(m, n):
    """s^(-n) # M, the module of Poincare-Lefschetz comparisons."""
    return suspend_module(dual_module(m), -n)


def module_mapping_cone(f):
    """Cone of a module morphism as a module: a.(y, sx) = (a.y, (-1)^|a| s(a.x))."""
    cone = mapping_cone(f.map, f.source.complex, f.target.complex)
    X, Y = f.source, f.target
    a = Y.algebra
    field = Y.field
    csp = cone.complex.space
    action = {}
    for da in a.space.degrees():
        sgn = field.sign(da)
        for ia in range(a.space.dim(da)):
            av = a.basis_vec(da, ia)
            for dm in csp.degrees():
                t = da + dm
                if csp.dim(t) == 0:
                    continue
                ny, ny_t = cone.y_dim(dm), cone.y_dim(t)
                nx = csp.dim(dm) - ny
                for jm in range(csp.dim(dm)):
                    out = [field.zero] * csp.dim(t)
                    if jm < ny:
                        w = Y.act_vec(da, av, dm, Y.basis_vec(dm, jm))
                        for c, val in enumerate(w):
                            out[c] = val
                    else:
                        w = X.act_vec(da, av, dm + 1,
                                      X.basis_vec(dm + 1, jm - ny))
                        for c, val in enumerate(w):
                            out[ny_t + c] = sgn * val
                    if not is_zero_vec(tuple(out)):
                        action[(da, ia, dm, jm)] = tuple(out)
    module = DgModule(a, cone.complex, action)
    return module, cone


# -- hom complexes and solvers ------------------------------------------


def _slots(P, N, i):
    out = []
    for d in P.space.degrees():
        for l in range(N.space.dim(d + i)):
            for j in range(P.space.dim(d)):
                out.append((d, l, j))
    return out


def _linearity_rows(P, N, i, slots):
    """Rows of the A-linearity system f(a.m) = (-1)^(i|a|) a.f(m)."""
    field = P.field
    idx = {s: t for t, s in enumerate(slots)}
    a = P.algebra
    rows = []
    for da in a.space.degrees():
        sgn = field.sign(i * da)
        for ia in range(a.space.dim(da)):
            av = a.basis_vec(da, ia)
            for dm in P.space.degrees():
                am_deg = da + dm
                out_deg = am_deg + i
                if N.space.dim(out_deg) == 0 and N.space.dim(dm + i) == 0:
                    continue
                for jm in range(P.space.dim(dm)):
                    w = P.act_vec(da, av, dm, P.basis_vec(dm, jm))
                    for t in range(N.space.dim(out_deg)):
                        row = [field.zero] * len(slots)
                        for j, c in enumerate(w):
                            if c != 0 and (am_deg, t, j) in idx:
                                row[idx[(am_deg, t, j)]] = row[idx[(am_deg, t, j)]] + c
                        # minus (-1)^(i da) (a . f(m))_t
                        for l in range(N.space.dim(dm + i)):
                            u = N.act_vec(da, av, dm + i, N.basis_vec(dm + i, l))
                            c = u[t]
                            if c != 0 and (dm, l, jm) in idx:
                                row[idx[(dm, l, jm)]] = row[idx[(dm, l, jm)]] - sgn * c
                        if any(x != 0 for x in row):
                            rows.append(row)
    return rows


def _glm_from_coords(P, N, i, slots, coords):
    field = P.field
    blocks = {}
    for d in P.space.degrees():
        nr, nc = N.space.dim(d + i), P.space.dim(d)
        if nr and nc:
            blocks[d] = Matrix.zero(field, nr, nc)
    entries = {}
    for (d, l, j), c in zip(slots, coords):
        if c != 0:
            entries.setdefault(d, {})[(l, j)] = c
    for d, es in entries.items():
        nr, nc = N.space.dim(d + i), P.space.dim(d)
        rows = [[es.get((l, j), field.zero) for j in range(nc)] for l in range(nr)]
        blocks[d] = Matrix(field, rows, ncols=nc)
    return GradedLinearMap(P.space, N.space, i, blocks)


def _coords_from_glm(slots, glm):
    return tuple(glm.block(d)[l, j] for (d, l, j) in slots)


class HomComplex:
    """hom^*_A(P, N) with basis maps per degree and the differential
    delta(f) = d f - (-1)^|f| f d, realized as an abstract complex."""

    def __init__(self, P, N):
        self.P = P
        self.N = N
        field = P.field
        lo = N.space.window.lo - P.space.window.hi
        hi = N.space.window.hi - P.space.window.lo
        self.window = DegreeWindow(lo, hi + 1)
        self.basis = {}
        self.slots = {}
        for i in range(lo, hi + 1):
            slots = _slots(P, N, i)
            self.slots[i] = slots
            if not slots:
                self.basis[i] = []
                continue
            rows = _linearity_rows(P, N, i, slots)
            if rows:
                kern = Matrix.from_rows(field, rows).kernel_basis()
            else:
                kern = [unit_vec(field, len(slots), t) for t in range(len(slots))]
            self.basis[i] = [_glm_from_coords(P, N, i, slots, v) for v in kern]
        dims = {i: len(b) for i, b in self.basis.items() if b}
        space = GradedVectorSpace(field, self.window, dims,
                                  {i: ["f%d_%d" % (i, t) for t in range(n)]
                                   for i, n in dims.items()})
        blocks = {}
        for i in sorted(dims):
            cols = []
            for F in self.basis[i]:
                G = self._delta(F, i)
                cols.append(self.express(i + 1, G))
            blocks[i] = Matrix.from_cols(field, cols, space.dim(i + 1))
        self.complex = CochainComplex(space, GradedLinearMap(space, space, 1, blocks))

    def _delta(self, F, i):
        dn = self.N.complex.d
        dp = self.P.complex.d
        sgn = self.P.field.sign(i)
        left = GradedLinearMap(self.P.space, self.N.space, i + 1,
                               {d: dn.block(d + i) @ F.block(d)
                                for d in self.P.space.degrees()})
        right = GradedLinearMap(self.P.space, self.N.space, i + 1,
                                {d: (F.block(d + 1) @ dp.block(d)).scale(sgn)
                                 for d in self.P.space.degrees()})
        return left.sub(right)

    def express(self, i, G):
        """Coordinates of an A-linear map G of shift i in the hom basis."""
        field = self.P.field
        basis = self.basis.get(i, [])
        if not basis:
            if not G.is_zero():
                raise ModuleError("map does not lie in the hom complex (degree %d)" % i)
            return ()
        slots = self.slots[i]
        m = Matrix.from_cols(field, [_coords_from_glm(slots, F) for F in basis],
                             len(slots))
        x = m.solve(_coords_from_glm(slots, G))
        if x is None:
            raise ModuleError("map does not lie in the hom complex (degree %d)" % i)
        return x

    def element(self, i, coords):
        out = GradedLinearMap.zero_map(self.P.space, self.N.space, i)
        for F, c in zip(self.basis[i], coords):
            if c != 0:
                out = out.add(F.scale(c))
        return out


def hom_complex(P, N):
    return HomComplex(P, N)


@dataclass
class HomotopyClassSpace:
    P: object
    N: object
    dimension: int
    representatives: list
    chain_level_only: bool


def homotopy_classes(P, N, semifree=True):
    """H^0 of the hom complex; labeled chain-level only when the source
    is not known to be semifree."""
    hc = hom_complex(P, N)
    coh = cohomology(hc.complex)
    reps = []
    for z in coh.reps.get(0, []):
        glm = hc.element(0, z)
        reps.append(DgModuleMorphism(P, N, glm))
    return HomotopyClassSpace(P, N, coh.dim(0), reps, not semifree)


def solve_chain_maps(P, N, constraints=()):
    """All degree-0 A-linear chain maps P -> N subject to extra affine
    constraints.

    Each constraint is either ("affine", row_dict, rhs) with row_dict
    mapping slots (deg, target_idx, source_idx) to coefficients, or
    ("class", deg, cocycle, target_vector) demanding [f(cocycle)] =
    [target_vector] in H^deg(N); the latter adds auxiliary coboundary
    unknowns.  Returns (particular, kernel) as lists of morphisms, or
    None when inconsistent.
    """
    field = P.field
    slots = _slots(P, N, 0)
    idx = {s: t for t, s in enumerate(slots)}
    nf = len(slots)
    aux_cols = 0
    class_constraints = []
    for c in constraints:
        if c[0] == "class":
            _, deg, z, w = c
            class_constraints.append((deg, z, w, nf + aux_cols))
            aux_cols += N.space.dim(deg - 1)
    total = nf + aux_cols
    rows, rhs = [], []

    def pad(row):
        return row + [field.zero] * (total - len(row))

    for row in _linearity_rows(P, N, 0, slots):
        rows.append(pad(row))
        rhs.append(field.zero)
    # chain-map rows: (d_N f - f d_P)(m) = 0
    for dm in P.space.degrees():
        for jm in range(P.space.dim(dm)):
            dpm = P.complex.d.apply(dm, P.basis_vec(dm, jm))
            for t in range(N.space.dim(dm + 1)):
                row = [field.zero] * total
                for l in range(N.space.dim(dm)):
                    c = N.complex.d.block(dm)[t, l]
                    if c != 0:
                        row[idx[(dm, l, jm)]] = row[idx[(dm, l, jm)]] + c
                for j, c in enumerate(dpm):
                    if c != 0 and (dm + 1, t, j) in idx:
                        row[idx[(dm + 1, t, j)]] = row[idx[(dm + 1, t, j)]] - c
                if any(x != 0 for x in row):
                    rows.append(row)
                    rhs.append(field.zero)
    for c in constraints:
        if c[0] == "affine":
            _, rd, b = c
            row = [field.zero] * total
            for s, coeff in rd.items():
                row[idx[s]] = coeff
            rows.append(row)
            rhs.append(b)
    for deg, z, w, off in class_constraints:
        # f(z)_t - d(u)_t = w_t for auxiliary u in N^(deg-1)
        nprev = N.space.dim(deg - 1)
        dblock = N.complex.d.block(deg - 1)
        for t in range(N.space.dim(deg)):
            row = [field.zero] * total
            for j, cz in enumerate(z):
                if cz != 0 and (deg, t, j) in idx:
                    row[idx[(deg, t, j)]] = row[idx[(deg, t, j)]] + cz
            for u in range(nprev):
                c = dblock[t, u]
                if c != 0:
                    row[off + u] = row[off + u] - c
            rows.append(row)
            rhs.append(w[t])

    if not rows:
        part = zero_vec(field, total)
        kern = [unit_vec(field, total, t) for t in range(total)]
    else:
        m = Matrix.from_rows(field, rows)
        part = m.solve(tuple(rhs))
        if part is None:
            return None
        kern = m.kernel_basis()
    particular = DgModuleMorphism(P, N, _glm_from_coords(P, N, 0, slots, part[:nf]))
    kernel = []
    for v in kern:
        glm = _glm_from_coords(P, N, 0, slots, v[:nf])
        if not glm.is_zero():
            kernel.append(DgModuleMorphism(P, N, glm, validate=False))
    return particular, kernel


def homotopy_between(f, g):
    """Degree -1 A-linear h with d h + h d = f - g, or None."""
    P, N = f.source, f.target
    field = P.field
    slots = _slots(P, N, -1)
    idx = {s: t for t, s in enumerate(slots)}
    rows, rhs = [], []
    for row in _linearity_rows(P, N, -1, slots):
        rows.append(row)
        rhs.append(field.zero)
    diff = f.map.sub(g.map)
    for dm in P.space.degrees():
        for jm in range(P.space.dim(dm)):
            dpm = P.complex.d.apply(dm, P.basis_vec(dm, jm))
            target_vec = diff.apply(dm, P.basis_vec(dm, jm))
            for t in range(N.space.dim(dm)):
                row = [field.zero] * len(slots)
                for l in range(N.space.dim(dm - 1)):
                    c = N.complex.d.block(dm - 1)[t, l]
                    if c != 0:
                        row[idx[(dm, l, jm)]] = row[idx[(dm, l, jm)]] + c
                for j, c in enumerate(dpm):
                    if c != 0 and (dm + 1, t, j) in idx:
                        row[idx[(dm + 1, t, j)]] = row[idx[(dm + 1, t, j)]] + c
                rows.append(row)
                rhs.append(target_vec[t])
    if not rows:
        return GradedLinearMap.zero_map(P.space, N.space, -1)
    sol = Matrix.from_rows(field, rows).solve(tuple(rhs))
    if sol is None:
        return None
    return _glm_from_coords(P, N, -1, slots, sol)


# -- free and semifree modules ------------------------------------------


@dataclass
class FreeGenerator:
    label: str
    degree: int
    stage: int


def free_module(algebra, gens, dvals=None, window=None):
    """Free module on generators, with an optional differential given by
    vectors dvals[g] (in module coordinates, degree deg(g)+1).

    Basis per degree: (generator, algebra basis element) pairs in
    generator order.  Returns (module, basis index table)."""
    a = algebra
    field = a.field
    if window is None:
        window = a.space.window
    index = {}      # (g, da, ia) -> (deg, pos)
    dims, labels = {}, {}
    for d in range(window.lo, window.hi + 1):
        pos = 0
        labs = []
        for gi, g in enumerate(gens):
            e = d - g.degree
            for ia in range(a.space.dim(e)):
                index[(gi, e, ia)] = (d, pos)
                lab = g.label if e == 0 and a.space.label(e, ia) == "1" \
                    else "%s*%s" % (a.space.label(e, ia), g.label)
                labs.append(lab)
                pos += 1
        if pos:
            dims[d] = pos
            labels[d] = labs
    space = GradedVectorSpace(field, window, dims, labels)

    def act_on_basis(da, ia, dm, jm):
        # find which (g, e, ib) sits at position jm of degree dm
        out = [field.zero] * space.dim(da + dm)
        gi, e, ib = _slot_of(index, dm, jm)
        prod = a.mul_vec(da, a.basis_vec(da, ia), e, a.basis_vec(e, ib))
        for ic, c in enumerate(prod):
            if c != 0:
                key = (gi, da + e, ic)
                if key in index:
                    _, p = index[key]
                    out[p] = out[p] + c
        return tuple(out)

    action = {}
    for da in a.space.degrees():
        for dm in dims:
            if da + dm > window.hi or space.dim(da + dm) == 0:
                continue
            for ia in range(a.space.dim(da)):
                for jm in range(dims[dm]):
                    v = act_on_basis(da, ia, dm, jm)
                    if not is_zero_vec(v):
                        action[(da, ia, dm, jm)] = v

    dvals = dvals or {}
    dblocks = {}

    # d(a x g) = d(a) x g + (-1)^|a| a . d(g); compute columns directly
    def d_col(dm, jm):
        gi, e, ib = _slot_of(index, dm, jm)
        out = [field.zero] * space.dim(dm + 1)
        dav = a.d_vec(e, a.basis_vec(e, ib))
        for ic, c in enumerate(dav):
            if c != 0:
                key = (gi, e + 1, ic)
                if key in index:
                    _, p = index[key]
                    out[p] = out[p] + c
        dg = dvals.get(gi)
        if dg is not None:
            # a . dg with the action above
            sgn = field.sign(e)
            gdeg = gens[gi].degree
            for jt, c in enumerate(dg):
                if c == 0:
                    continue
                w = act_on_basis_vec(e, ib, gdeg + 1, jt)
                for p, cc in enumerate(w):
                    out[p] = out[p] + sgn * c * cc
        return tuple(out)

    def act_on_basis_vec(e, ib, dm, jm):
        key = (e, ib, dm, jm)
        return action.get(key, zero_vec(field, space.dim(e + dm)))

    for dm in sorted(dims):
        if dm + 1 > window.hi:
            continue
        cols = [d_col(dm, jm) for jm in range(dims[dm])]
        dblocks[dm] = Matrix.from_cols(field, cols, space.dim(dm + 1))
    cx = CochainComplex(space, GradedLinearMap(space, space, 1, dblocks))
    module = DgModule(a, cx, action)
    return module, index


def _slot_of(index, dm, jm):
    for (gi, e, ib), (d, p) in index.items():
        if d == dm and p == jm:
            return gi, e, ib
    raise ModuleError("basis slot (%d, %d) not found" % (dm, jm))


@dataclass
class SemifreeModule:
    module: DgModule
    generators: list
    rho: DgModuleMorphism
    minimal: bool
    index: dict


def semifree_resolution(m, minimal=True, max_rounds=30, window=None):
    """Semifree quasi-isomorphism rho: (A x V, d) -> m, built degreewise.

    Generators are added in degree order: first cokernel generators
    (d = 0) hitting missed classes, then kernel-killing generators one
    degree below.  The minimal flag is checked on the result.  The
    window bounds the resolution itself and defaults to the target's.
    """
    a = m.algebra
    if not a.is_connected():
        raise ModuleError("semifree resolution needs a connected algebra")
    field = m.field
    if window is None:
        window = m.space.window
    gens = []
    dvals = {}
    rho_vals = {}

    def build():
        P, index = free_module(a, gens, dvals, window)
        blocks = {}
        for d in P.space.degrees():
            cols = []
            for jm in range(P.space.dim(d)):
                gi, e, ib = _slot_of(index, d, jm)
                g = gens[gi]
                cols.append(m.act_vec(e, a.basis_vec(e, ib), g.degree,
                                      rho_vals[gi]))
            blocks[d] = Matrix.from_cols(field, cols, m.space.dim(d))
        rho = GradedLinearMap(P.space, m.space, 0, blocks)
        return P, index, rho

    coh_m = cohomology(m.complex)
    for j in range(window.lo, window.hi + 1):
        for round_ in range(max_rounds):
            P, index, rho = build()
            coh_P = cohomology(P.complex)
            # induced map on H^j
            img_cols = [coh_m.reduce(j, rho.apply(j, z)) for z in coh_P.reps.get(j, [])]
            hm_dim = coh_m.dim(j)
            hmat = Matrix.from_cols(field, img_cols, hm_dim)
            # cokernel: classes of H^j(m) outside the column span
            missing = []
            for t in range(hm_dim):
                e_t = unit_vec(field, hm_dim, t)
                aug = Matrix.from_cols(field, img_cols + [e_t], hm_dim)
                if aug.rank() != hmat.rank():
                    missing.append(t)
                    img_cols = img_cols + [e_t]
                    hmat = aug
            if missing:
                for t in missing:
                    gi = len(gens)
                    gens.append(FreeGenerator("v%d_%d" % (j, gi), j, gi))
                    rho_vals[gi] = coh_m.reps[j][t]
                continue
            kern = hmat.kernel_basis() if coh_P.dim(j) else []
            kern = [v for v in kern]
            if not kern:
                break
            for v in kern:
                z = zero_vec(field, P.space.dim(j))
                for c, rep in zip(v, coh_P.reps[j]):
                    z = add_vec(z, scale_vec(c, rep))
                w = coh_m.write_coboundary(j, rho.apply(j, z))
                if w is None:
                    raise ModuleError("resolution internal error: class not exact")
                gi = len(gens)
                gens.append(FreeGenerator("u%d_%d" % (j, gi), j - 1, gi))
                dvals[gi] = z
                rho_vals[gi] = w
        else:
            raise ModuleError("semifree resolution did not stabilize in degree %d" % j)

    P, index, rho_glm = build()
    rho = DgModuleMorphism(P, m, rho_glm)
    coh_P = cohomology(P.complex)
    blocks = induced_on_cohomology(rho_glm, coh_P, coh_m)
    for dtest in set(coh_P.dims) | set(coh_m.dims):
        bm = blocks.get(dtest, Matrix.zero(field, coh_m.dim(dtest), coh_P.dim(dtest)))
        if coh_P.dim(dtest) != coh_m.dim(dtest) or bm.rank() != coh_m.dim(dtest):
            raise ModuleError("resolution is not a quasi-isomorphism (degree %d)"
                              % dtest)
    is_minimal = True
    for gi, z in dvals.items():
        deg = gens[gi].degree + 1
        for jm, c in enumerate(z):
            if c == 0:
                continue
            _, e, _ib = _slot_of(index, deg, jm)
            if e == 0:
                is_minimal = False
    if minimal and not is_minimal:
        raise ModuleError("resolution recipe produced a non-minimal differential")
    return SemifreeModule(P, gens, rho, is_minimal, index)


def random_semifree(a, rng, n_gens, max_degree, window=None):
    """Random semifree module: each new generator's differential is a
    random cocycle of the module built so far.  Always valid."""
    gens = []
    dvals = {}
    degrees = sorted(rng.randint(0, max_degree) for _ in range(n_gens))
    for gd in degrees:
        if gens:
            P, _ = free_module(a, gens, dvals, window)
            coh = cohomology(P.complex)
            cands = coh.cocycles.get(gd + 1, [])
        else:
            cands = []
        gi = len(gens)
        gens.append(FreeGenerator("g%d_%d" % (gd, gi), gd, gi))
        if cands and rng.random() < 0.7:
            z = zero_vec(a.field, len(cands[0]))
            for v in cands:
                z = add_vec(z, scale_vec(a.field.of(rng.randint(-2, 2)), v))
            if not is_zero_vec(z):
                dvals[gi] = z
    P, index = free_module(a, gens, dvals, window)
    return P


# -- sub/quotient machinery ---------------------------------------------


@dataclass
class ModuleTruncation:
    spans: dict
    quotient: DgModule
    projection: DgModuleMorphism
    sub_dims: dict
    sub_acyclic: bool


def quotient_module(m, spans):
    """Quotient by a graded subspace after checking it is a subDGmodule."""
    from .algebra import _Quotienter
    field = m.field
    sp = m.space
    reducers = {d: _Quotienter(field, spans.get(d, []), sp.dim(d))
                for d in sp.degrees()}
    a = m.algebra
    for d, vs in spans.items():
        red1 = reducers.get(d + 1)
        for v in vs:
            dv = m.d_vec(d, v)
            if red1 is None:
                if not is_zero_vec(dv):
                    raise ModuleError("subspace not d-closed at degree %d" % d)
            elif not red1.contains(dv):
                raise ModuleError("subspace not d-closed at degree %d" % d)
            for e in a.space.degrees():
                t = d + e
                if t > sp.window.hi:
                    continue
                red_t = reducers.get(t)
                for i in range(a.space.dim(e)):
                    w = m.act_vec(e, a.basis_vec(e, i), d, v)
                    if red_t is None:
                        if not is_zero_vec(w):
                            raise ModuleError("subspace not action-closed")
                    elif not red_t.contains(w):
                        raise ModuleError("subspace not action-closed (degree %d)" % t)
    qdims, qlabels = {}, {}
    for d, red in reducers.items():
        if red.keep:
            qdims[d] = len(red.keep)
            qlabels[d] = [sp.label(d, i) for i in red.keep]
    qspace = GradedVectorSpace(field, sp.window, qdims, qlabels)
    dblocks = {}
    for d in qspace.degrees():
        red, red1 = reducers[d], reducers.get(d + 1)
        cols = [red1.project(m.d_vec(d, red.lift(unit_vec(field, len(red.keep), i))))
                if red1 and red1.keep else ()
                for i in range(len(red.keep))]
        dblocks[d] = Matrix.from_cols(field, cols, qspace.dim(d + 1))
    qcx = CochainComplex(qspace, GradedLinearMap(qspace, qspace, 1, dblocks))
    action = {}
    for da in a.space.degrees():
        for ia in range(a.space.dim(da)):
            av = a.basis_vec(da, ia)
            for dm in qspace.degrees():
                t = da + dm
                if t > sp.window.hi or t not in reducers or not reducers[t].keep:
                    continue
                red, red_t = reducers[dm], reducers[t]
                for jm in range(len(red.keep)):
                    v = red.lift(unit_vec(field, len(red.keep), jm))
                    w = red_t.project(m.act_vec(da, av, dm, v))
                    if not is_zero_vec(w):
                        action[(da, ia, dm, jm)] = w
    q = DgModule(a, qcx, action)
    pblocks = {d: Matrix.from_cols(field,
                                   [reducers[d].project(unit_vec(field, sp.dim(d), i))
                                    for i in range(sp.dim(d))], qspace.dim(d))
               for d in sp.degrees()}
    proj = DgModuleMorphism(m, q, GradedLinearMap(sp, qspace, 0, pblocks))
    return q, proj, reducers


def sub_complex_dims_and_acyclicity(m, spans):
    """Cohomology dimensions of the subspace viewed as a complex."""
    field = m.field
    degrees = sorted(spans)
    bases = {d: [v for v in spans[d]] for d in degrees}
    dims = {d: len(vs) for d, vs in bases.items() if vs}
    h = {}
    for d in degrees:
        vs = bases.get(d, [])
        if not vs:
            continue
        nxt = bases.get(d + 1, [])
        if nxt:
            mat_next = Matrix.from_cols(field, nxt, m.space.dim(d + 1))
            img_cols = []
            for v in vs:
                x = mat_next.solve(m.d_vec(d, v))
                if x is None:
                    raise ModuleError("subspace not d-closed (internal)")
                img_cols.append(x)
            dmat = Matrix.from_cols(field, img_cols, len(nxt))
        else:
            for v in vs:
                if not is_zero_vec(m.d_vec(d, v)):
                    raise ModuleError("subspace not d-closed (internal)")
            dmat = Matrix.zero(field, 0, len(vs))
        prev = bases.get(d - 1, [])
        if prev:
            mat_here = Matrix.from_cols(field, vs, m.space.dim(d))
            prev_img = [mat_here.solve(m.d_vec(d - 1, v)) for v in prev]
            bmat = Matrix.from_cols(field, prev_img, len(vs))
            brank = bmat.rank()
        else:
            brank = 0
        zdim = len(dmat.kernel_basis())
        if zdim - brank:
            h[d] = zdim - brank
    return dims, h


def truncate_module(m, t):
    """Truncation subDGmodule above degree t: everything above t plus a
    complement of the cocycles in degree t; the quotient keeps H^(<=t)."""
    if not m.algebra.is_connected():
        raise ModuleError("truncation needs a connected algebra")
    field = m.field
    sp = m.space
    spans = {}
    if sp.dim(t):
        z = m.complex.d.block(t).kernel_basis()
        comp = span_complement_coords(field, [list(v) for v in z], sp.dim(t))
        vs = [unit_vec(field, sp.dim(t), i) for i in comp]
        if vs:
            spans[t] = vs
    for d in sp.degrees():
        if d > t:
            spans[d] = [unit_vec(field, sp.dim(d), i) for i in range(sp.dim(d))]
    q, proj, _ = quotient_module(m, spans)
    sub_dims, sub_h = sub_complex_dims_and_acyclicity(m, spans) if spans else ({}, {})
    return ModuleTruncation(spans, q, proj, sub_dims, not sub_h)


def direct_sum_modules(parts):
    """Direct sum of modules over one algebra."""
    if not parts:
        raise ModuleError("empty direct sum")
    a = parts[0].algebra
    field = parts[0].field
    lo = min(p.space.window.lo for p in parts)
    hi = max(p.space.window.hi for p in parts)
    window = DegreeWindow(lo, hi)
    dims, labels, offset = {}, {}, {}
    for pi, p in enumerate(parts):
        for d in p.space.degrees():
            offset[(pi, d)] = dims.get(d, 0)
            dims[d] = dims.get(d, 0) + p.space.dim(d)
            labels.setdefault(d, []).extend(
                "c%d.%s" % (pi, p.space.label(d, i)) for i in range(p.space.dim(d)))
    space = GradedVectorSpace(field, window, dims, labels)

    def embed(pi, d, v):
        out = [field.zero] * space.dim(d)
        off = offset.get((pi, d), 0)
        for i, c in enumerate(v):
            out[off + i] = c
        return tuple(out)

    dblocks = {}
    for d in space.degrees():
        cols = []
        for pi, p in enumerate(parts):
            for i in range(p.space.dim(d)):
                cols.append(embed(pi, d + 1, p.d_vec(d, p.basis_vec(d, i))))
        dblocks[d] = Matrix.from_cols(field, cols, space.dim(d + 1))
    cx = CochainComplex(space, GradedLinearMap(space, space, 1, dblocks))
    action = {}
    for pi, p in enumerate(parts):
        for (da, ia, dm, jm), v in p.action.items():
            action[(da, ia, dm, offset.get((pi, dm), 0) + jm)] = embed(pi, da + dm, v)
    mod = DgModule(a, cx, action)
    mod.summand_offsets = offset
    return mod, offset
