"""Hom spaces, radicals, decompositions, presentations, τ and Ext over Λ."""

from typing import NamedTuple

import numpy as np

from . import linalg as la
from .errors import CapExceeded
from .quiver import (ModuleMap, Representation, direct_sum, dual, kernel, map_from_block,
                     map_from_vector, nakayama_on_projectives, quotient, submodule)

DEFAULT_CAP = 10**6


def _cache(module):
    c = module.__dict__.get("_cache")
    if c is None:
        c = module.__dict__["_cache"] = {}
    return c


# -- Hom spaces ---------------------------------------------------------------

class HomSpace:
    """A basis of Hom(M, N) together with fast coordinate extraction."""

    def __init__(self, source, target, basis):
        self.source = source
        self.target = target
        self.basis = basis
        self.dim = len(basis)
        n = sum(s * t for s, t in zip(source.dims, target.dims))
        p = source.p
        if basis:
            self.matrix = np.stack([f.vector() for f in basis], axis=1)
            _, rows = la.rref(self.matrix.T, p)
            self._rows = rows
            self._inv = la.invert(self.matrix[rows], p)
        else:
            self.matrix = la.zeros(n, 0)
            self._rows = []
            self._inv = la.zeros(0, 0)

    def coords(self, f):
        v = f.vector()
        return la.mul(self._inv, v[self._rows], self.source.p)

    def coords_vector(self, v):
        return la.mul(self._inv, np.asarray(v)[self._rows], self.source.p)

    def element(self, coeffs):
        p = self.source.p
        if not self.basis:
            return ModuleMap.zero(self.source, self.target)
        vec = la.mul(self.matrix, np.asarray(coeffs, dtype=np.int64) % p, p)
        return map_from_vector(self.source, self.target, vec)

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return self.dim


def hom_space(m, n):
    key = ("hom", id(n))
    cache = _cache(m)
    hit = cache.get(key)
    if hit is not None and hit.target is n:
        return hit
    space = HomSpace(m, n, _hom_basis(m, n))
    cache[key] = space
    return space


def hom_basis(m, n):
    return hom_space(m, n).basis


def hom_dim(m, n):
    return hom_space(m, n).dim


def _hom_basis(m, n):
    alg = m.alg
    if n.alg is not alg and not n.alg.same_as(alg):
        raise ValueError("Hom between modules over different algebras")
    q, p = alg.quiver, alg.p
    sizes = [n.dims[i] * m.dims[i] for i in range(len(q.vertices))]
    offs = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    total = int(offs[-1])
    if total == 0:
        return []
    blocks = []
    for a in q.arrows:
        i, j = q.index(a.source), q.index(a.target)
        rows = n.dims[j] * m.dims[i]
        if rows == 0:
            continue
        eq = la.zeros(rows, total)
        # f_j M(a) - N(a) f_i = 0, row-major vectorisation
        if n.dims[j] and m.dims[j]:
            eq[:, offs[j]:offs[j + 1]] += np.kron(la.identity(n.dims[j]), m.maps[a.name].T)
        if n.dims[i] and m.dims[i]:
            eq[:, offs[i]:offs[i + 1]] -= np.kron(n.maps[a.name], la.identity(m.dims[i]))
        blocks.append(eq % p)
    if blocks:
        ker = la.kernel_basis(np.concatenate(blocks, axis=0), p)
    else:
        ker = la.identity(total)
    return [map_from_vector(m, n, ker[:, k]) for k in range(ker.shape[1])]


def compose_span(outer, inner, target_space):
    """Coordinates (columns) of all compositions g∘f in target_space."""
    cols = [target_space.coords(g @ f) for g in outer for f in inner]
    if not cols:
        return la.zeros(target_space.dim, 0)
    return np.stack(cols, axis=1)


# -- radicals of finite-dimensional matrix algebras ---------------------------

def algebra_radical(mats, p):
    """Jacobson radical of the F_p-algebra spanned by the n x n matrices `mats`.

    The span must be closed under multiplication.  Uses the generalized trace
    forms over Z/p^(i+1): I_{-1} = A and I_i = {x in I_{i-1} : g_i(xy) = 0 for all
    y in A} with g_i(z) = Tr(z~^(p^i)) / p^i mod p; the radical is I_l for
    l = floor(log_p n).  Returns the radical as coefficient columns.
    """
    h = len(mats)
    if h == 0:
        return la.zeros(0, 0)
    n = mats[0].shape[0]
    levels = 0
    while p ** (levels + 1) <= n:
        levels += 1
    current = la.identity(h)
    for i in range(levels + 1):
        if current.shape[1] == 0:
            break
        mod = p ** (i + 1)
        elems = [_combine(mats, current[:, k], p) for k in range(current.shape[1])]
        g = la.zeros(len(elems), h)
        for k, x in enumerate(elems):
            for j, y in enumerate(mats):
                z = la.mul(x, y, p)
                t = int(np.trace(la.power(z, p ** i, mod))) % mod
                if t % (p ** i):
                    raise ArithmeticError("trace form is not divisible as expected")
                g[k, j] = (t // p ** i) % p
        keep = la.left_kernel_basis(g, p)
        current = la.mul(current, keep.T, p)
    return current


def _combine(mats, coeffs, p):
    out = np.zeros_like(mats[0])
    for c, m in zip(coeffs, mats):
        if c:
            out = (out + int(c) * m) % p
    return out


def _min_poly(mat, p):
    """Minimal polynomial (low degree first, monic) of a square matrix."""
    n = mat.shape[0]
    powers = [la.identity(n).reshape(-1)]
    cur = la.identity(n)
    for _ in range(n):
        cur = la.mul(cur, mat, p)
        cand = np.stack(powers + [cur.reshape(-1)], axis=1)
        ker = la.kernel_basis(cand, p)
        if ker.shape[1]:
            v = ker[:, 0]
            inv = pow(int(v[-1]), -1, p)
            return [int(c * inv) % p for c in v]
        powers.append(cur.reshape(-1))
    raise ArithmeticError("minimal polynomial search failed")


class EndAlgebra:
    """End(M) with its radical, used for locality, splitting and minimality."""

    def __init__(self, module):
        self.module = module
        p = module.p
        self.space = hom_space(module, module)
        self.mats = [f.block() for f in self.space.basis]
        self.dim = self.space.dim
        self.radical = algebra_radical(self.mats, p) if self.mats else la.zeros(0, 0)
        self.rad_dim = self.radical.shape[1]
        self._quot = None

    @property
    def p(self):
        return self.module.p

    def quotient_map(self):
        """Matrix Q with kernel exactly the radical (coordinates of End/rad)."""
        if self._quot is None:
            self._quot = la.quotient_coordinates(self.radical, self.dim, self.p)
        return self._quot

    def in_radical(self, coords):
        q, _ = self.quotient_map()
        return not la.mul(q, np.asarray(coords).reshape(-1, 1), self.p).any()

    def coords_of_block(self, block):
        return self.space.coords(_block_to_map(self.module, block))

    def is_local(self):
        if self.dim == 0:
            return False
        d = self.dim - self.rad_dim
        if d == 1:
            return True
        q, s = self.quotient_map()
        comp = [la.mul(self.space.matrix, s[:, k], self.p) for k in range(d)]
        comp = [_vec_to_block(self.module, v) for v in comp]
        if not self._commutative(comp, q):
            return False
        return self._frobenius_fixed(comp, q).shape[1] == 1

    def _commutative(self, comp, q):
        p = self.p
        for i in range(len(comp)):
            for j in range(i + 1, len(comp)):
                c = (la.mul(comp[i], comp[j], p) - la.mul(comp[j], comp[i], p)) % p
                if la.mul(q, self.coords_of_block(c).reshape(-1, 1), p).any():
                    return False
        return True

    def _frobenius_fixed(self, comp, q):
        p = self.p
        cols = []
        for c in comp:
            cols.append(la.mul(q, self.coords_of_block(la.power(c, p, p)).reshape(-1, 1), p)[:, 0])
        frob = np.stack(cols, axis=1)
        return la.kernel_basis((frob - la.identity(len(comp))) % p, p)

    def splitting(self, rng_seed=0, tries=400):
        """Two complementary nonzero submodules (as inclusions), or None if local."""
        if self.is_local():
            return None
        p, n = self.p, self.module.dim
        q, s = self.quotient_map()
        d = self.dim - self.rad_dim
        comp = [_vec_to_block(self.module, la.mul(self.space.matrix, s[:, k], p))
                for k in range(d)]
        candidates = []
        if self._commutative(comp, q):
            fixed = self._frobenius_fixed(comp, q)
            for k in range(fixed.shape[1]):
                candidates.append(_combine(comp, fixed[:, k], p))
        candidates.extend(self.mats)
        rng = np.random.default_rng(rng_seed)
        for attempt in range(tries + len(candidates)):
            if attempt < len(candidates):
                x = candidates[attempt]
            else:
                x = _combine(self.mats, rng.integers(0, p, size=self.dim), p)
            split = self._split_with(x, n)
            if split is not None:
                return split
        raise ArithmeticError("no splitting endomorphism found for a non-local End")

    def _split_with(self, x, n):
        p = self.p
        # Berlekamp: fixed points of Frobenius in F_p[x] count its primary parts
        m = _min_poly(x, p)
        deg = len(m) - 1
        if deg <= 1:
            return None
        r = la.poly_powmod([0, 1], p, m, p)
        cols, cur = [], [1]
        for _ in range(deg):
            padded = cur + [0] * (deg - len(cur))
            cols.append(padded[:deg])
            cur = la.poly_divmod(la.poly_mul(cur, r, p), m, p)[1]
        frob = np.array(cols, dtype=np.int64).T
        fixed = la.kernel_basis((frob - la.identity(deg)) % p, p)
        if fixed.shape[1] <= 1:
            return None
        poly = None
        for k in range(fixed.shape[1]):
            if fixed[1:, k].any():
                poly = [int(c) for c in fixed[:, k]]
                break
        y = la.zeros(n, n)
        xp = la.identity(n)
        for c in poly:
            y = (y + c * xp) % p
            xp = la.mul(xp, x, p)
        roots = la.poly_roots(_min_poly(y, p), p)
        c = roots[0]
        phi = (y - c * la.identity(n)) % p
        return _fitting(self.module, phi)


def _block_to_map(module, block):
    return map_from_block(module, module, block)


def _vec_to_block(module, vec):
    return map_from_vector(module, module, vec).block()


def _fitting(module, phi):
    """Fitting decomposition M = im(phi^n) ⊕ ker(phi^n) for an endomorphism."""
    p, n = module.p, module.dim
    big = la.power(phi, n, p)
    f = _block_to_map(module, big)
    ker = [la.kernel_basis(m, p) for m in f.maps]
    im = [la.column_space(m, p) for m in f.maps]
    if sum(k.shape[1] for k in ker) == 0 or sum(i.shape[1] for i in im) == 0:
        return None
    a, ia = submodule(module, im)
    b, ib = submodule(module, ker)
    return (a, ia), (b, ib)


def end_algebra(module):
    cache = _cache(module)
    if "end" not in cache:
        cache["end"] = EndAlgebra(module)
    return cache["end"]


def is_indecomposable(module):
    if module.dim == 0:
        return False
    return end_algebra(module).is_local()


# -- decomposition -------------------------------------------------------------

class Summand(NamedTuple):
    module: Representation
    inclusion: ModuleMap
    projection: ModuleMap


class Decomposition(NamedTuple):
    module: Representation
    summands: list          # indecomposable summands with splitting maps
    classes: list           # list of lists of summand indices, one per iso class

    @property
    def rk(self):
        return len(self.classes)

    @property
    def multiplicities(self):
        return [len(c) for c in self.classes]

    def representatives(self):
        return [self.summands[c[0]].module for c in self.classes]

    def basic_part(self):
        reps = self.representatives()
        return direct_sum(reps, self.module.alg).module

    def is_basic(self):
        return all(len(c) == 1 for c in self.classes)


def decompose(module):
    cache = _cache(module)
    if "decomp" in cache:
        return cache["decomp"]
    if module.dim == 0:
        result = Decomposition(module, [], [])
        cache["decomp"] = result
        return result
    pieces = _split_all(module)
    classes = []
    for k, piece in enumerate(pieces):
        for cls in classes:
            if iso_indecomposable(pieces[cls[0]].module, piece.module) is not None:
                cls.append(k)
                break
        else:
            classes.append([k])
    result = Decomposition(module, pieces, classes)
    cache["decomp"] = result
    return result


def _split_all(module):
    end = end_algebra(module)
    split = end.splitting()
    if split is None:
        ident = ModuleMap.identity(module)
        return [Summand(module, ident, ident)]
    (a, ia), (b, ib) = split
    p = module.p
    s = direct_sum([a, b])
    joint = (ia @ s.projections[0]) + (ib @ s.projections[1])
    inv = la.invert(joint.block(), p)
    if inv is None:
        raise ArithmeticError("Fitting parts are not complementary")
    back = map_from_block(module, s.module, inv)
    out = []
    for part, incl, proj in ((a, ia, s.projections[0] @ back), (b, ib, s.projections[1] @ back)):
        for piece in _split_all(part):
            out.append(Summand(piece.module, incl @ piece.inclusion, piece.projection @ proj))
    return out


def rk(module):
    return decompose(module).rk


def basic_part(module):
    return decompose(module).basic_part()


# -- isomorphism ---------------------------------------------------------------

def iso_indecomposable(a, b):
    """An isomorphism a -> b for indecomposable a, or None."""
    if a.dims != b.dims:
        return None
    if a.dim == 0:
        return ModuleMap.identity(a)
    fwd = hom_basis(a, b)
    if not fwd:
        return None
    back = hom_basis(b, a)
    for f in fwd:
        if f.is_iso():
            return f
    for f in fwd:
        for g in back:
            if (g @ f).is_iso():
                return f
    # in a local ring the units are exactly the elements outside the radical,
    # and a sum of radical elements stays radical, so basis products decide
    return None


def is_isomorphic(m, n):
    """An isomorphism m -> n or None (exact, via Krull-Schmidt)."""
    if m.dims != n.dims:
        return None
    if m.dim == 0:
        return ModuleMap.identity(m)
    if is_indecomposable(m):
        return iso_indecomposable(m, n) if is_indecomposable(n) else None
    dm, dn = decompose(m), decompose(n)
    if sorted(dm.multiplicities) != sorted(dn.multiplicities) or dm.rk != dn.rk:
        return None
    matched = {}
    used = set()
    for ci, cls in enumerate(dm.classes):
        rep = dm.summands[cls[0]].module
        for cj, other in enumerate(dn.classes):
            if cj in used or len(other) != len(cls):
                continue
            if iso_indecomposable(rep, dn.summands[other[0]].module) is not None:
                matched[ci] = cj
                used.add(cj)
                break
        else:
            return None
    total = ModuleMap.zero(m, n)
    for ci, cls in enumerate(dm.classes):
        other = dn.classes[matched[ci]]
        for k, kk in zip(cls, other):
            src, dst = dm.summands[k], dn.summands[kk]
            iso = iso_indecomposable(src.module, dst.module)
            total = total + (dst.inclusion @ iso @ src.projection)
    return total


# -- Kelly radical ---------------------------------------------------------------

def rad_hom_space(m, n):
    """Coordinates (columns, in hom_space(m, n)) spanning rad(m, n)."""
    space = hom_space(m, n)
    if space.dim == 0:
        return la.zeros(0, 0)
    end = end_algebra(m)
    q, _ = end.quotient_map()
    back = hom_basis(n, m)
    rows = []
    for g in back:
        cols = [la.mul(q, end.space.coords(g @ f).reshape(-1, 1), m.p)[:, 0] for f in space.basis]
        rows.append(np.stack(cols, axis=1))
    if not rows or rows[0].shape[0] == 0:
        return la.identity(space.dim)
    return la.kernel_basis(np.concatenate(rows, axis=0), m.p)


def rad_hom_basis(m, n):
    space = hom_space(m, n)
    coords = rad_hom_space(m, n)
    return [space.element(coords[:, k]) for k in range(coords.shape[1])]


def rad2_hom_space(m, n, through):
    """Coordinates spanning Σ_Y rad(Y, n) ∘ rad(m, Y) over the modules Y in `through`."""
    space = hom_space(m, n)
    cols = []
    for y in through:
        first = rad_hom_basis(m, y)
        second = rad_hom_basis(y, n)
        if first and second:
            cols.append(compose_span(second, first, space))
    if not cols:
        return la.zeros(space.dim, 0)
    return la.column_space(np.concatenate(cols, axis=1), m.p)


def in_span_of(space, coords_cols, f):
    if coords_cols.shape[1] == 0:
        return f.is_zero()
    return la.in_span(coords_cols, space.coords(f), space.source.p)


# -- top, presentations, τ, Ext ------------------------------------------------

def radical_spaces(module):
    """Vertexwise span of the arrow images (rad M = arrow ideal · M)."""
    q, p = module.alg.quiver, module.p
    spaces = []
    for v in q.vertices:
        i = q.index(v)
        cols = [module.maps[a.name] for a in q.arrows if a.target == v]
        cols = [c for c in cols if c.size]
        if cols:
            spaces.append(la.column_space(np.concatenate(cols, axis=1), p))
        else:
            spaces.append(la.zeros(module.dims[i], 0))
    return spaces


def top(module):
    quo, proj, _ = quotient(module, radical_spaces(module))
    return quo, proj


def top_generators(module):
    """Pairs (vertex, vector) lifting a basis of the top of the module."""
    q, p = module.alg.quiver, module.p
    out = []
    for v, space in zip(q.vertices, radical_spaces(module)):
        n = module.dim_at(v)
        for c in la.complement_columns(space, n, p):
            e = np.zeros(n, dtype=np.int64)
            e[c] = 1
            out.append((v, e))
    return out


def map_from_projective(proj, vertex, module, vector):
    """The map P(vertex) -> module sending e_vertex to `vector`."""
    p = module.p
    q = module.alg.quiver
    mats = []
    for w in q.vertices:
        labels = proj.basis_labels[w]
        cols = [la.mul(module.path_matrix(lab[2], vertex), vector.reshape(-1, 1), p)[:, 0]
                for lab in labels]
        if cols:
            mats.append(np.stack(cols, axis=1))
        else:
            mats.append(la.zeros(module.dim_at(w), 0))
    return ModuleMap(proj, module, mats, check=False)


class ProjectiveCover(NamedTuple):
    vertices: list
    module: Representation
    map: ModuleMap


def projective_cover(module):
    alg = module.alg
    gens = top_generators(module)
    gens.sort(key=lambda g: alg.quiver.index(g[0]))
    vertices = [v for v, _ in gens]
    s = direct_sum([alg.projective(v) for v in vertices], alg)
    total = ModuleMap.zero(s.module, module)
    for k, (v, e) in enumerate(gens):
        total = total + (map_from_projective(alg.projective(v), v, module, e) @ s.projections[k])
    return ProjectiveCover(vertices, s.module, total)


class Presentation(NamedTuple):
    p1_vertices: list
    p0_vertices: list
    P1: Representation
    P0: Representation
    d: ModuleMap
    aug: ModuleMap
    omega: Representation
    omega_inclusion: ModuleMap


def minimal_presentation(module):
    cache = _cache(module)
    if "pres" in cache:
        return cache["pres"]
    cover0 = projective_cover(module)
    omega, incl = kernel(cover0.map)
    cover1 = projective_cover(omega)
    d = incl @ cover1.map
    pres = Presentation(cover1.vertices, cover0.vertices, cover1.module, cover0.module,
                        d, cover0.map, omega, incl)
    cache["pres"] = pres
    return pres


class ResolutionStep(NamedTuple):
    vertices: list
    term: Representation
    cover: ModuleMap        # term -> previous syzygy (or the module)
    syzygy: Representation  # kernel of cover
    inclusion: ModuleMap    # syzygy -> term


def projective_resolution(module, length):
    steps = []
    current = module
    for _ in range(length):
        cov = projective_cover(current)
        syz, incl = kernel(cov.map)
        steps.append(ResolutionStep(cov.vertices, cov.module, cov.map, syz, incl))
        current = syz
        if syz.dim == 0:
            break
    return steps


def tau(module):
    if module.dim == 0:
        return module
    pres = minimal_presentation(module)
    if not pres.p1_vertices:
        return module.alg.zero_module()
    nu, _, _ = nakayama_on_projectives(pres.d, pres.p1_vertices, pres.p0_vertices)
    ker, _ = kernel(nu)
    return ker


def is_projective(module):
    return minimal_presentation(module).omega.dim == 0


def _ext_from_steps(steps, target, i):
    """dim Ext^i via coker(Hom(P_{i-1}, N) -> Hom(Ω^i, N))."""
    if len(steps) < i:
        return 0, []
    step = steps[i - 1]
    omega, incl = step.syzygy, step.inclusion
    space = hom_space(omega, target)
    if space.dim == 0:
        return 0, []
    restricted = [space.coords(g @ incl) for g in hom_basis(step.term, target)]
    if restricted:
        image = la.column_space(np.stack(restricted, axis=1), target.p)
    else:
        image = la.zeros(space.dim, 0)
    comp = la.complement_columns(image, space.dim, target.p)
    reps = [space.element(la.identity(space.dim)[:, c]) for c in comp]
    return space.dim - image.shape[1], reps


def ext_class_coordinates(steps, target, i=1):
    """(space, Q, reps): Q sends Hom(Ω^i, N)-coordinates of a cocycle to its class."""
    step = steps[i - 1]
    space = hom_space(step.syzygy, target)
    restricted = [space.coords(g @ step.inclusion) for g in hom_basis(step.term, target)]
    image = (np.stack(restricted, axis=1) if restricted and space.dim
             else la.zeros(space.dim, 0))
    q, s = la.quotient_coordinates(image, space.dim, target.p)
    reps = [space.element(s[:, k]) for k in range(s.shape[1])]
    return space, q, reps


def pushout_middle(step, a, cocycle):
    """Pushout of 0 -> Ω -> P -> C -> 0 along cocycle: Ω -> a.

    Returns (B, f: a -> B, g: B -> C).
    """
    p = a.p
    s = direct_sum([step.term, a], a.alg)
    emb = (s.injections[0] @ step.inclusion) - (s.injections[1] @ cocycle)
    b, proj, sections = quotient(s.module, [la.column_space(m, p) for m in emb.maps])
    f = proj @ s.injections[1]
    piece = step.cover @ s.projections[0]
    g = ModuleMap(b, step.cover.target,
                  [la.mul(pm, sec, p) for pm, sec in zip(piece.maps, sections)], check=False)
    return b, f, g


def ext_dim(m, n, i=1):
    if i < 1:
        raise ValueError("Ext degree must be >= 1")
    steps = projective_resolution(m, i)
    return _ext_from_steps(steps, n, i)[0]


def ext1_dim(m, n):
    return ext_dim(m, n, 1)


# -- minimality ---------------------------------------------------------------------

def is_minimal(f, side):
    """Right minimal: no nonzero summand of the source lies in ker f.

    A one-sided ideal of End contains a nonzero idempotent exactly when it is
    not contained in the radical, so the idempotent search reduces to checking
    that the annihilating ideal lies in rad End.
    """
    p = f.p
    if side == "right":
        end = end_algebra(f.source)
        vecs = [(f @ e).vector() for e in end.space.basis]
    elif side == "left":
        end = end_algebra(f.target)
        vecs = [(e @ f).vector() for e in end.space.basis]
    else:
        raise ValueError("side must be 'left' or 'right'")
    if end.dim == 0:
        return True
    mat = np.stack(vecs, axis=1) if vecs and vecs[0].size else la.zeros(0, end.dim)
    ann = la.kernel_basis(mat, p)
    return all(end.in_radical(ann[:, k]) for k in range(ann.shape[1]))


# -- enumeration of indecomposables ---------------------------------------------------

class Catalog:
    """Pairwise non-isomorphic indecomposables in canonical order."""

    def __init__(self, alg, entries, names=None, provenance="user-supplied", bound=None,
                 complete=False):
        self.alg = alg
        self.entries = list(entries)
        self.names = list(names) if names else [f"M{k}" for k in range(len(self.entries))]
        self.provenance = provenance
        self.bound = tuple(bound) if bound is not None else None
        self.complete = complete

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, k):
        return self.entries[k]

    def find(self, module):
        """Index of the entry isomorphic to an indecomposable module, or None."""
        for k, e in enumerate(self.entries):
            if e.dims == module.dims and iso_indecomposable(e, module) is not None:
                return k
        return None

    def locate(self, module):
        """Catalog indices (with repetition) of the indecomposable summands."""
        if self.complete:
            fast = self._locate_by_hom_dims(module)
            if fast is not None:
                return fast
        out = []
        for piece in decompose(module).summands:
            k = self.find(piece.module)
            if k is None:
                return None
            out.append(k)
        return sorted(out)

    def _locate_by_hom_dims(self, module):
        # over a complete catalog a module is fixed by the numbers dim Hom(Z, -),
        # so its multiplicities solve a square integer system (checked exactly)
        if module.dim == 0:
            return []
        if getattr(self, "_hom_table", None) is None:
            self._hom_table = np.array([[hom_dim(z, y) for y in self.entries]
                                        for z in self.entries], dtype=np.int64)
        h = self._hom_table
        v = np.array([hom_dim(z, module) for z in self.entries], dtype=np.int64)
        try:
            m = np.rint(np.linalg.solve(h.astype(float), v.astype(float))).astype(np.int64)
        except np.linalg.LinAlgError:
            return None
        if (m < 0).any() or not np.array_equal(h @ m, v):
            return None
        return [k for k in range(len(m)) for _ in range(int(m[k]))]

    def name_of(self, k):
        return self.names[k]


def _dim_vectors(bound):
    vecs = [()]
    for b in bound:
        vecs = [v + (d,) for v in vecs for d in range(b + 1)]
    vecs = [v for v in vecs if any(v)]
    vecs.sort(key=lambda v: (sum(v), v))
    return vecs


def _normal_forms(r, c):
    for k in range(min(r, c) + 1):
        m = la.zeros(r, c)
        for i in range(k):
            m[i, i] = 1
        yield m


def candidate_count(alg, dims):
    q, p = alg.quiver, alg.p
    free = 0
    forms = 1
    pivot = _pivot_arrow(alg, dims)
    for a in q.arrows:
        size = dims[q.index(a.source)] * dims[q.index(a.target)]
        if a is pivot:
            forms = min(dims[q.index(a.source)], dims[q.index(a.target)]) + 1
        else:
            free += size
    return forms * p ** free


def _pivot_arrow(alg, dims):
    q = alg.quiver
    for a in q.arrows:
        if a.source != a.target and dims[q.index(a.source)] and dims[q.index(a.target)]:
            return a
    return None


def _candidates(alg, dims):
    q, p = alg.quiver, alg.p
    pivot = _pivot_arrow(alg, dims)
    free = [a for a in q.arrows if a is not pivot]
    shapes = [(dims[q.index(a.target)], dims[q.index(a.source)]) for a in free]
    sizes = [r * c for r, c in shapes]
    total = sum(sizes)
    if pivot is not None:
        forms = list(_normal_forms(dims[q.index(pivot.target)], dims[q.index(pivot.source)]))
    else:
        forms = [None]
    for form in forms:
        for flat in np.ndindex(*([p] * total)) if total else [()]:
            maps = {}
            k = 0
            for a, (r, c), s in zip(free, shapes, sizes):
                maps[a.name] = np.array(flat[k:k + s], dtype=np.int64).reshape(r, c)
                k += s
            if pivot is not None:
                maps[pivot.name] = form
            yield maps


def enumerate_indecomposables(alg, bound, cap=DEFAULT_CAP):
    """All indecomposables with dimension vector <= bound, up to isomorphism.

    Every orbit of a tuple of arrow matrices meets the slice where one
    non-loop arrow is in rank normal form, so only that slice is scanned.
    """
    bound = tuple(int(b) for b in bound)
    if len(bound) != len(alg.quiver.vertices):
        raise ValueError("bound must have one entry per vertex")
    found = []
    for dims in _dim_vectors(bound):
        count = candidate_count(alg, dims)
        if count > cap:
            raise CapExceeded(f"dimension vector {dims} needs {count} candidates (cap {cap})",
                              size=count, cap=cap, where=dims)
        here = []
        for maps in _candidates(alg, dims):
            rep = Representation(alg, dims, maps, check=False)
            if rep.relation_failures():
                continue
            if not _connected_support(rep):
                continue
            if not is_indecomposable(rep):
                continue
            if any(iso_indecomposable(e, rep) is not None for e in here):
                continue
            here.append(rep)
        found.extend(here)
    return Catalog(alg, found, provenance="enumerated", bound=bound, complete=False)


def _connected_support(rep):
    q = rep.alg.quiver
    support = [v for v in q.vertices if rep.dim_at(v)]
    if len(support) <= 1:
        return True
    seen = {support[0]}
    stack = [support[0]]
    while stack:
        v = stack.pop()
        for a in q.arrows:
            if rep.maps[a.name].any():
                for x, y in ((a.source, a.target), (a.target, a.source)):
                    if x == v and y not in seen:
                        seen.add(y)
                        stack.append(y)
    return seen.issuperset(support)


def name_standard(alg, catalog):
    """Give catalog entries the names P<v>, I<v>, S<v> where they match."""
    names = list(catalog.names)
    taken = set()
    for kind, prefix in (("simple", "S"), ("projective", "P"), ("injective", "I")):
        for v in alg.quiver.vertices:
            mod = {"simple": alg.simple, "projective": alg.projective,
                   "injective": alg.injective}[kind](v)
            k = catalog.find(mod)
            if k is not None and k not in taken:
                names[k] = f"{prefix}{v}"
                taken.add(k)
    catalog.names = names
    return catalog


# -- almost split sequences and completeness ---------------------------------------------

def tau_inverse(module):
    """τ⁻¹ M = D τ D M, computed over the opposite algebra."""
    if module.dim == 0:
        return module
    return dual(tau(dual(module)))


def is_injective(module):
    return is_projective(dual(module))


def almost_split_sequence(module):
    """0 -> τM -> E -> M -> 0 for an indecomposable non-projective M.

    The sequence spans the socle of Ext^1(M, τM) as a left End(τM)-module.
    """
    t = tau(module)
    if t.dim == 0:
        raise ValueError("projective modules have no almost split sequence ending at them")
    steps = projective_resolution(module, 1)
    space, q, reps = ext_class_coordinates(steps, t, 1)
    p = module.p
    end = end_algebra(t)
    blocks = []
    for k in range(end.rad_dim):
        r = end.space.element(end.radical[:, k])
        cols = [la.mul(q, space.coords(r @ e).reshape(-1, 1), p)[:, 0] for e in reps]
        blocks.append(np.stack(cols, axis=1))
    socle = (la.kernel_basis(np.concatenate(blocks, axis=0), p) if blocks
             else la.identity(len(reps)))
    if socle.shape[1] == 0:
        raise ArithmeticError("Ext^1(M, τM) has zero socle")
    eta = reps[0].scale(0)
    for c, e in zip(socle[:, 0], reps):
        if c:
            eta = eta + e.scale(int(c))
    return pushout_middle(steps[0], t, eta)


def socle_spaces(module):
    q, p = module.alg.quiver, module.p
    out = []
    for v in q.vertices:
        n = module.dim_at(v)
        mats = [module.maps[a.name] for a in q.arrows if a.source == v and module.maps[a.name].size]
        out.append(la.kernel_basis(np.concatenate(mats, axis=0), p) if mats else la.identity(n))
    return out


def certify_complete(catalog):
    """Check that the catalog is closed under τ, τ⁻¹ and irreducible maps.

    A finite set of indecomposables closed under these operations and
    containing every projective is a union of finite Auslander-Reiten
    components meeting every block, hence all of ind Λ.  Returns
    (True, "") or (False, reason).
    """
    alg = catalog.alg
    for v in alg.quiver.vertices:
        for kind, mod in (("projective", alg.projective(v)), ("injective", alg.injective(v))):
            if catalog.find(mod) is None:
                return False, f"{kind} at vertex {v} is missing"
    for k, x in enumerate(catalog.entries):
        name = catalog.names[k]
        if is_projective(x):
            rad, _ = submodule(x, radical_spaces(x))
            if rad.dim and catalog.locate(rad) is None:
                return False, f"radical of {name} has a summand outside the catalog"
        else:
            t = tau(x)
            if catalog.find(t) is None:
                return False, f"τ {name} is missing"
            e, _, _ = almost_split_sequence(x)
            if catalog.locate(e) is None:
                return False, f"almost split sequence ending at {name} leaves the catalog"
        if is_injective(x):
            quo, _, _ = quotient(x, socle_spaces(x))
            if quo.dim and catalog.locate(quo) is None:
                return False, f"{name}/soc has a summand outside the catalog"
        elif catalog.find(tau_inverse(x)) is None:
            return False, f"τ⁻¹ {name} is missing"
    return True, ""
