"""Line-oriented input language for algebras, morphisms, and problems.

A file declares a field, a degree window, some algebras (free
presentations or explicit basis tables), morphisms between them, and
one problem block.  Everything is validated while it is built, so a
file that parses is a file whose objects passed the library checks.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .algebra import (AlgebraError, Cdga, CdgaMorphism,
                      materialize_free_cdga)
from .fields import FieldError, PrimeField, QQ
from .graded import (CochainComplex, DegreeWindow, GradedLinearMap,
                     GradedVectorSpace)
from .linalg import Matrix, is_zero_vec
from .pipeline import EmbeddingProblem, PipelineError


class ParseError(ValueError):
    def __init__(self, lineno, message):
        self.lineno = lineno
        super().__init__("line %d: %s" % (lineno, message))


_TOKEN = re.compile(r"\s*(\d+/\d+|\d+|[A-Za-z_][A-Za-z_0-9]*|->|[{}=:^*+\-;])")


def _tokenize(text, lineno):
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ParseError(lineno, "unexpected character %r" % text[pos])
            break
        out.append(m.group(1))
        pos = m.end()
    return out


class _Lines:
    """Logical statements: comments stripped, ';' splits within a line."""

    def __init__(self, text):
        self.items = []
        for ln, raw in enumerate(text.splitlines(), 1):
            body = raw.split("#", 1)[0]
            for piece in body.split(";"):
                toks = _tokenize(piece, ln)
                cur = []
                for t in toks:
                    if t == "{":
                        cur.append(t)
                        self.items.append((ln, cur))
                        cur = []
                    elif t == "}":
                        if cur:
                            self.items.append((ln, cur))
                        self.items.append((ln, ["}"]))
                        cur = []
                    else:
                        cur.append(t)
                if cur:
                    self.items.append((ln, cur))
        self.pos = 0

    def peek(self):
        return self.items[self.pos] if self.pos < len(self.items) else None

    def take(self):
        item = self.peek()
        if item is None:
            raise ParseError(0, "unexpected end of file")
        self.pos += 1
        return item


def _parse_terms(toks, lineno):
    """[(coefficient, [(name, power), ...]), ...]; '0' gives []."""
    if toks == ["0"]:
        return []
    terms = []
    i = 0
    sign = 1
    coeff = None
    factors = []

    def flush():
        nonlocal coeff, factors, sign
        if coeff is None and not factors:
            raise ParseError(lineno, "empty term in expression")
        terms.append((Fraction(sign) * (coeff if coeff is not None else 1),
                      factors))
        coeff, factors, sign = None, [], 1

    while i < len(toks):
        t = toks[i]
        if t in ("+", "-"):
            if coeff is not None or factors:
                flush()
            if t == "-":
                sign = -sign
            i += 1
        elif t == "*":
            i += 1
        elif re.fullmatch(r"\d+/\d+|\d+", t):
            if coeff is not None:
                raise ParseError(lineno, "two coefficients in one term")
            coeff = Fraction(t)
            i += 1
        else:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", t):
                raise ParseError(lineno, "unexpected token %r" % t)
            power = 1
            if i + 2 < len(toks) and toks[i + 1] == "^":
                if not re.fullmatch(r"\d+", toks[i + 2]):
                    raise ParseError(lineno, "bad exponent after %s" % t)
                power = int(toks[i + 2])
                i += 2
            factors.append((t, power))
            i += 1
    if coeff is not None or factors:
        flush()
    return terms


def _sorted_mono(indices, degs, lineno):
    """Sort generator indices with the Koszul sign; None kills the term."""
    idx = list(indices)
    sign = 1
    for a in range(len(idx)):
        for b in range(len(idx) - 1 - a):
            if idx[b] > idx[b + 1]:
                if degs[idx[b]] % 2 == 1 and degs[idx[b + 1]] % 2 == 1:
                    sign = -sign
                idx[b], idx[b + 1] = idx[b + 1], idx[b]
    for a in range(len(idx) - 1):
        if idx[a] == idx[a + 1] and degs[idx[a]] % 2 == 1:
            return None, 0
    return tuple(idx), sign


def _terms_to_mono_poly(terms, gen_index, gen_degs, lineno):
    poly = {}
    for coeff, factors in terms:
        indices = []
        for name, power in factors:
            if name not in gen_index:
                raise ParseError(lineno, "unknown generator %r" % name)
            indices.extend([gen_index[name]] * power)
        mono, sign = _sorted_mono(indices, gen_degs, lineno)
        if mono is None:
            continue
        poly[mono] = poly.get(mono, Fraction(0)) + sign * coeff
    return {m: c for m, c in poly.items() if c != 0}


def _mono_poly_degree(poly, gen_degs, lineno, what):
    degs = {sum(gen_degs[g] for g in m) for m in poly}
    if len(degs) > 1:
        raise ParseError(lineno, "%s is not homogeneous" % what)
    return degs.pop() if degs else None


class ParsedAlgebra:
    def __init__(self, name, cdga, kind, gen_names=None, gen_degs=None,
                 basis_index=None):
        self.name = name
        self.cdga = cdga
        self.kind = kind                       # "free" or "explicit"
        self.gen_names = gen_names or []
        self.gen_degs = gen_degs or []
        self.basis_index = basis_index or {}   # label -> (deg, idx)


class ProblemFile:
    def __init__(self):
        self.field = None
        self.window = None
        self.algebras = {}
        self.morphisms = {}
        self.problem = None        # (ambient_name, n, [(emb_name, mor_name)])

    def embedding_problem(self, name=""):
        if self.problem is None:
            raise PipelineError("file declares no problem block")
        ambient, n, branches = self.problem
        return EmbeddingProblem(
            [self.morphisms[m] for _, m in branches], n, name=name)


def _expect(toks, lineno, *pattern):
    if len(toks) < len(pattern):
        raise ParseError(lineno, "incomplete statement")
    for i, p in enumerate(pattern):
        if p is None:
            continue
        if toks[i] != p:
            raise ParseError(lineno, "expected %r, found %r" % (p, toks[i]))


def _parse_free_cdga(name, lines, pf):
    gens, diffs, relations = [], {}, []
    body = []
    while True:
        lineno, toks = lines.take()
        if toks == ["}"]:
            break
        body.append((lineno, toks))
    for lineno, toks in body:
        if toks[0] == "generator":
            _expect(toks, lineno, "generator", None, "deg", None)
            if not re.fullmatch(r"\d+", toks[3]):
                raise ParseError(lineno, "degree must be an integer")
            gens.append((toks[1], int(toks[3])))
        elif toks[0] == "d":
            _expect(toks, lineno, "d", None, "=")
            diffs[toks[1]] = (lineno, _parse_terms(toks[3:], lineno))
        elif toks[0] == "relation":
            relations.append((lineno, _parse_terms(toks[1:], lineno)))
        else:
            raise ParseError(lineno, "unknown declaration %r in cdga block"
                             % toks[0])
    gen_index = {g: i for i, (g, _) in enumerate(gens)}
    gen_degs = [d for _, d in gens]
    diff_polys = {}
    for gname, (lineno, terms) in diffs.items():
        if gname not in gen_index:
            raise ParseError(lineno, "d given for unknown generator %r" % gname)
        poly = _terms_to_mono_poly(terms, gen_index, gen_degs, lineno)
        deg = _mono_poly_degree(poly, gen_degs, lineno, "d(%s)" % gname)
        if deg is not None and deg != gen_degs[gen_index[gname]] + 1:
            raise ParseError(lineno, "differential must raise degree by 1")
        diff_polys[gname] = poly
    rel_polys = []
    for lineno, terms in relations:
        poly = _terms_to_mono_poly(terms, gen_index, gen_degs, lineno)
        _mono_poly_degree(poly, gen_degs, lineno, "relation")
        if poly:
            rel_polys.append(poly)
    cdga = materialize_free_cdga(pf.field, gens, diff_polys, rel_polys,
                                 pf.window)
    return ParsedAlgebra(name, cdga, "free",
                         gen_names=[g for g, _ in gens], gen_degs=gen_degs)


def _lincomb_to_vec(terms, basis_index, field, lineno, expect_deg=None,
                    dims=None):
    deg = None
    entries = {}
    for coeff, factors in terms:
        if len(factors) != 1 or factors[0][1] != 1:
            raise ParseError(lineno, "expected a linear combination of "
                             "basis labels")
        label = factors[0][0]
        if label not in basis_index:
            raise ParseError(lineno, "unknown basis label %r" % label)
        d, i = basis_index[label]
        if deg is None:
            deg = d
        elif deg != d:
            raise ParseError(lineno, "combination mixes degrees %d and %d"
                             % (deg, d))
        entries[i] = entries.get(i, Fraction(0)) + coeff
    if expect_deg is not None and deg is not None and deg != expect_deg:
        raise ParseError(lineno, "combination has degree %d, expected %d"
                         % (deg, expect_deg))
    if deg is None:
        deg = expect_deg
    n = dims.get(deg, 0) if dims is not None else (
        max(entries) + 1 if entries else 0)
    vec = [field.zero] * n
    for i, c in entries.items():
        vec[i] = field.of(c)
    return deg, tuple(vec)


def _parse_explicit_cdga(name, lines, pf):
    basis, products, diffs = [], [], []
    while True:
        lineno, toks = lines.take()
        if toks == ["}"]:
            break
        if toks[0] == "basis":
            _expect(toks, lineno, "basis", None, "deg", None)
            if not re.fullmatch(r"\d+", toks[3]):
                raise ParseError(lineno, "degree must be an integer")
            basis.append((lineno, toks[1], int(toks[3])))
        elif toks[0] == "product":
            _expect(toks, lineno, "product", None, None, "=")
            products.append((lineno, toks[1], toks[2],
                             _parse_terms(toks[4:], lineno)))
        elif toks[0] == "d":
            _expect(toks, lineno, "d", None, "=")
            diffs.append((lineno, toks[1], _parse_terms(toks[3:], lineno)))
        else:
            raise ParseError(lineno, "unknown declaration %r in explicit "
                             "cdga block" % toks[0])
    field = pf.field
    dims, labels, index = {}, {}, {}
    for lineno, label, d in basis:
        if label in index:
            raise ParseError(lineno, "duplicate basis label %r" % label)
        if not pf.window.contains(d):
            raise ParseError(lineno, "degree %d outside the window" % d)
        index[label] = (d, dims.get(d, 0))
        dims[d] = dims.get(d, 0) + 1
        labels.setdefault(d, []).append(label)
    space = GradedVectorSpace(field, pf.window, dims, labels)
    dblocks = {}
    for lineno, label, terms in diffs:
        if label not in index:
            raise ParseError(lineno, "d given for unknown basis label %r" % label)
        d, i = index[label]
        tdeg, vec = _lincomb_to_vec(terms, index, field, lineno,
                                    expect_deg=d + 1, dims=dims)
        if terms and tdeg != d + 1:
            raise ParseError(lineno, "differential must raise degree by 1")
        if d not in dblocks:
            dblocks[d] = [[field.zero] * space.dim(d)
                          for _ in range(space.dim(d + 1))]
        for r, c in enumerate(vec):
            dblocks[d][r][i] = c
    glm_blocks = {d: Matrix(field, rows, ncols=space.dim(d))
                  for d, rows in dblocks.items()}
    cx = CochainComplex(space, GradedLinearMap(space, space, 1, glm_blocks))
    product = {}
    for lineno, l1, l2, terms in products:
        for lab in (l1, l2):
            if lab not in index:
                raise ParseError(lineno, "unknown basis label %r" % lab)
        d1, i1 = index[l1]
        d2, i2 = index[l2]
        _, vec = _lincomb_to_vec(terms, index, field, lineno,
                                 expect_deg=d1 + d2, dims=dims)
        if not is_zero_vec(vec):
            product[(d1, i1, d2, i2)] = vec
    unit = _solve_unit(field, space, product, dims)
    cdga = Cdga(field, cx, product, unit)
    return ParsedAlgebra(name, cdga, "explicit", basis_index=index)


def _solve_unit(field, space, product, dims):
    """The two-sided identity of the degree-0 part, from the table."""
    n0 = space.dim(0)
    if n0 == 0:
        raise AlgebraError("explicit algebra has no degree-0 basis")
    rows, rhs = [], []
    for d in space.degrees():
        for j in range(space.dim(d)):
            for t in range(space.dim(d)):
                row = []
                for i in range(n0):
                    # degree-0 elements commute, so either key order works
                    v = product.get((0, i, d, j))
                    if v is None:
                        v = product.get((d, j, 0, i))
                    row.append(v[t] if v is not None else field.zero)
                rows.append(row)
                rhs.append(field.one if t == j else field.zero)
    sol = Matrix(field, rows, ncols=n0).solve(tuple(rhs))
    if sol is None:
        raise AlgebraError("product table has no unit")
    return sol


def _poly_to_target_vec(terms, target, lineno):
    """Evaluate a parsed expression in the target algebra; returns
    (degree, vector) or (None, None) for the zero polynomial."""
    field = target.cdga.field
    if target.kind == "explicit":
        if not terms:
            return None, None
        deg, vec = _lincomb_to_vec(
            terms, target.basis_index, field, lineno,
            dims={d: target.cdga.space.dim(d)
                  for d in target.cdga.space.degrees()})
        return deg, vec
    gen_index = {g: i for i, g in enumerate(target.gen_names)}
    poly = _terms_to_mono_poly(terms, gen_index, target.gen_degs, lineno)
    if not poly:
        return None, None
    deg = _mono_poly_degree(poly, target.gen_degs, lineno, "image")
    pres = target.cdga.presentation
    monos = pres.monos_by_degree.get(deg)
    if monos is None:
        raise ParseError(lineno, "image degree %d outside the window" % deg)
    full = [field.zero] * len(monos)
    for mono, coeff in poly.items():
        if mono not in pres.mono_index:
            raise ParseError(lineno, "monomial outside the window in image")
        _, i = pres.mono_index[mono]
        full[i] = full[i] + field.of(coeff)
    return deg, pres.reducers[deg].project(tuple(full))


def _parse_morphism(name, src, tgt, lines, pf):
    entries = []
    while True:
        lineno, toks = lines.take()
        if toks == ["}"]:
            break
        if "->" not in toks:
            raise ParseError(lineno, "expected '<element> -> <expression>'")
        k = toks.index("->")
        if k != 1:
            raise ParseError(lineno, "left side of '->' must be one name")
        entries.append((lineno, toks[0], _parse_terms(toks[2:], lineno)))
    field = pf.field
    source, target = pf.algebras[src], pf.algebras[tgt]
    sa, ta = source.cdga, target.cdga
    images = {}
    for lineno, label, terms in entries:
        deg, vec = _poly_to_target_vec(terms, target, lineno)
        images[label] = (lineno, deg, vec)

    blocks = {d: [[field.zero] * sa.space.dim(d)
                  for _ in range(ta.space.dim(d))]
              for d in sa.space.degrees()}

    def put(d, i, vec):
        for r, c in enumerate(vec):
            blocks[d][r][i] = c

    if source.kind == "explicit":
        for label, (lineno, deg, vec) in images.items():
            if label not in source.basis_index:
                raise ParseError(lineno, "unknown basis label %r" % label)
            d, i = source.basis_index[label]
            if vec is not None:
                if deg != d:
                    raise ParseError(lineno, "image of %s has degree %d, "
                                     "expected %d" % (label, deg, d))
                put(d, i, vec)
        # unlisted degree-0 unit components go to the target unit
        for i, c in enumerate(sa.unit):
            label = sa.space.label(0, i)
            if c != 0 and label not in images:
                put(0, i, tuple(c * x for x in ta.unit))
    else:
        gen_imgs = {}
        for label, (lineno, deg, vec) in images.items():
            if label not in source.gen_names:
                raise ParseError(lineno, "unknown generator %r" % label)
            g = source.gen_names.index(label)
            if vec is not None and deg != source.gen_degs[g]:
                raise ParseError(lineno, "image of %s has degree %d, expected "
                                 "%d" % (label, deg, source.gen_degs[g]))
            gen_imgs[g] = vec       # None means zero

        def image_of_mono(mono):
            deg, vec = 0, ta.unit
            for g in mono:
                gd = source.gen_degs[g]
                gv = gen_imgs.get(g)
                if gv is None:
                    return None, None
                vec = ta.mul_vec(deg, vec, gd, gv)
                deg += gd
                if is_zero_vec(vec):
                    return None, None
            return deg, vec

        pres = sa.presentation
        for d in sa.space.degrees():
            red = pres.reducers[d]
            for i, k in enumerate(red.keep):
                deg, vec = image_of_mono(pres.monos_by_degree[d][k])
                if vec is not None:
                    put(d, i, vec)
    glm = GradedLinearMap(sa.space, ta.space, 0,
                          {d: Matrix(field, rows, ncols=sa.space.dim(d))
                           for d, rows in blocks.items()})
    return CdgaMorphism(sa, ta, glm)


def parse(text, field_override=None):
    """Parse and validate a problem file given as a string.

    field_override, when given, replaces the declared coefficient field
    (used for reruns of rational inputs over a prime field)."""
    pf = ProblemFile()
    lines = _Lines(text)
    while lines.peek() is not None:
        lineno, toks = lines.take()
        head = toks[0]
        if head == "field":
            if len(toks) == 2 and toks[1] == "rational":
                pf.field = QQ
            elif len(toks) == 3 and toks[1] == "prime":
                try:
                    pf.field = PrimeField(int(toks[2]))
                except (ValueError, FieldError) as e:
                    raise ParseError(lineno, str(e))
            else:
                raise ParseError(lineno, "expected 'field rational' or "
                                 "'field prime <p>'")
            if field_override is not None:
                pf.field = field_override
        elif head == "window":
            _expect(toks, lineno, "window", None, None)
            try:
                pf.window = DegreeWindow(int(toks[1]), int(toks[2]))
            except ValueError:
                raise ParseError(lineno, "window bounds must be integers")
            if pf.window.lo != 0:
                raise ParseError(lineno, "window must start at 0")
        elif head == "cdga":
            if pf.field is None or pf.window is None:
                raise ParseError(lineno, "field and window must come first")
            if len(toks) >= 3 and toks[-1] == "{" and toks[-2] == "explicit":
                name = toks[1]
                builder = _parse_explicit_cdga
            elif len(toks) == 3 and toks[-1] == "{":
                name = toks[1]
                builder = _parse_free_cdga
            else:
                raise ParseError(lineno, "expected 'cdga <Name> [explicit] {'")
            if name in pf.algebras:
                raise ParseError(lineno, "duplicate algebra name %r" % name)
            try:
                pf.algebras[name] = builder(name, lines, pf)
            except (AlgebraError, FieldError) as e:
                raise ParseError(lineno, str(e))
        elif head == "morphism":
            _expect(toks, lineno, "morphism", None, ":", None, "->", None, "{")
            mname, src, tgt = toks[1], toks[3], toks[5]
            for a in (src, tgt):
                if a not in pf.algebras:
                    raise ParseError(lineno, "unknown algebra %r" % a)
            if mname in pf.morphisms:
                raise ParseError(lineno, "duplicate morphism name %r" % mname)
            try:
                pf.morphisms[mname] = _parse_morphism(mname, src, tgt, lines, pf)
            except (AlgebraError, FieldError) as e:
                raise ParseError(lineno, str(e))
        elif head == "problem":
            _expect(toks, lineno, "problem", "{")
            ambient, n, branches = None, None, []
            while True:
                ln2, t2 = lines.take()
                if t2 == ["}"]:
                    break
                if t2[0] == "ambient":
                    _expect(t2, ln2, "ambient", None, "dim", None)
                    if t2[1] not in pf.algebras:
                        raise ParseError(ln2, "unknown algebra %r" % t2[1])
                    if not re.fullmatch(r"\d+", t2[3]):
                        raise ParseError(ln2, "dimension must be an integer")
                    ambient, n = t2[1], int(t2[3])
                elif t2[0] == "embedded":
                    _expect(t2, ln2, "embedded", None, "via", None)
                    if t2[1] not in pf.algebras:
                        raise ParseError(ln2, "unknown algebra %r" % t2[1])
                    if t2[3] not in pf.morphisms:
                        raise ParseError(ln2, "unknown morphism %r" % t2[3])
                    branches.append((t2[1], t2[3]))
                else:
                    raise ParseError(ln2, "unknown problem declaration %r"
                                     % t2[0])
            if ambient is None:
                raise ParseError(lineno, "problem block needs an ambient line")
            if not branches:
                raise ParseError(lineno, "problem block needs an embedded line")
            for emb, mor in branches:
                phi = pf.morphisms[mor]
                if phi.source is not pf.algebras[ambient].cdga:
                    raise ParseError(lineno, "morphism %r does not start at "
                                     "the ambient algebra" % mor)
                if phi.target is not pf.algebras[emb].cdga:
                    raise ParseError(lineno, "morphism %r does not land in %r"
                                     % (mor, emb))
            pf.problem = (ambient, n, branches)
        else:
            raise ParseError(lineno, "unknown declaration %r" % head)
    if pf.field is None:
        raise ParseError(0, "file declares no field")
    return pf


def parse_file(path, field_override=None):
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read(), field_override=field_override)


def emit_explicit(name, cdga):
    """Serialize a CDGA as an explicit presentation block that reparses
    to an equal algebra; labels are normalized to b<deg>_<idx>."""
    sp = cdga.space
    out = ["cdga %s explicit {" % name]
    for d in sp.degrees():
        for i in range(sp.dim(d)):
            out.append("  basis b%d_%d deg %d" % (d, i, d))
    for d in sp.degrees():
        blk = cdga.complex.d.block(d)
        for i in range(sp.dim(d)):
            col = [blk[r, i] for r in range(blk.nrows)]
            if any(c != 0 for c in col):
                out.append("  d b%d_%d = %s"
                           % (d, i, _comb_text(col, d + 1)))
    for (d1, i1, d2, i2) in sorted(cdga.product):
        v = cdga.product[(d1, i1, d2, i2)]
        if not is_zero_vec(v):
            out.append("  product b%d_%d b%d_%d = %s"
                       % (d1, i1, d2, i2, _comb_text(v, d1 + d2)))
    out.append("}")
    return "\n".join(out)


def _coeff_text(c):
    return str(c)


def _comb_text(vec, deg):
    parts = []
    for i, c in enumerate(vec):
        if c == 0:
            continue
        if c == 1:
            parts.append("b%d_%d" % (deg, i))
        else:
            parts.append("%s * b%d_%d" % (_coeff_text(c), deg, i))
    if not parts:
        return "0"
    return " + ".join(parts).replace("+ -", "- ")
