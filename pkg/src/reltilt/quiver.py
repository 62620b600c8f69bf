"""Quivers, bound quiver algebras and their finite-dimensional representations.

Paths are stored as tuples of arrow names in the order they are applied, so
the written path "b a" (apply a, then b) is stored as ("a", "b").  Its matrix
on a representation is M(b) @ M(a), acting on column vectors.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import linalg as la


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


class Quiver:
    def __init__(self, vertices, arrows):
        vertices = [str(v) for v in vertices]
        if len(set(vertices)) != len(vertices):
            raise ValueError("vertex ids must be unique")
        arrows = [a if isinstance(a, Arrow) else Arrow(str(a[0]), str(a[1]), str(a[2]))
                  for a in arrows]
        names = [a.name for a in arrows]
        if len(set(names)) != len(names):
            raise ValueError("arrow names must be unique")
        for a in arrows:
            if a.source not in vertices or a.target not in vertices:
                raise ValueError(f"arrow {a.name} uses an undeclared vertex")
        self.vertices = tuple(vertices)
        self.arrows = tuple(arrows)
        self._vindex = {v: i for i, v in enumerate(self.vertices)}
        self._arrow = {a.name: a for a in self.arrows}

    def index(self, v):
        try:
            return self._vindex[str(v)]
        except KeyError:
            raise ValueError(f"unknown vertex {v!r}") from None

    def arrow(self, name):
        try:
            return self._arrow[name]
        except KeyError:
            raise ValueError(f"unknown arrow {name!r}") from None

    def path_ends(self, path):
        """(source, target) of a path given in application order."""
        first = self.arrow(path[0])
        last = self.arrow(path[-1])
        for a, b in zip(path, path[1:]):
            if self.arrow(a).target != self.arrow(b).source:
                raise ValueError(f"arrows {a} and {b} are not composable")
        return first.source, last.target

    def paths(self, length):
        """All paths with exactly `length` arrows, as (source, target, arrows)."""
        if length == 0:
            return [(v, v, ()) for v in self.vertices]
        out = []
        frontier = [(a.source, a.target, (a.name,)) for a in self.arrows]
        for _ in range(length - 1):
            frontier = [(s, a.target, path + (a.name,))
                        for s, t, path in frontier for a in self.arrows if a.source == t]
        out.extend(frontier)
        return out

    def __eq__(self, other):
        return (isinstance(other, Quiver) and self.vertices == other.vertices
                and self.arrows == other.arrows)

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def __repr__(self):
        return f"Quiver({list(self.vertices)}, {[(a.name, a.source, a.target) for a in self.arrows]})"


def path_words(path):
    """Written form of a path: arrow names right to left."""
    return " ".join(reversed(path))


class BoundAlgebra:
    """kQ / I where I contains all paths of length >= L and the given relations.

    relations: list of dicts mapping a path (tuple of arrow names, application
    order) to a coefficient.
    """

    def __init__(self, quiver, nilpotency, relations=(), p=5):
        la.check_prime(p)
        if nilpotency is None or nilpotency < 2:
            raise ValueError("nilpotency degree L >= 2 is required")
        self.quiver = quiver
        self.p = p
        self.nilpotency = int(nilpotency)
        rels = []
        for rel in relations:
            rel = {tuple(k): int(c) % p for k, c in dict(rel).items() if int(c) % p}
            if not rel:
                continue
            ends = set()
            for path in rel:
                if len(path) < 2:
                    raise ValueError(f"relation path {path_words(path)!r} has length < 2")
                ends.add(quiver.path_ends(path))
            if len(ends) != 1:
                raise ValueError("relation paths must share source and target")
            rels.append(rel)
        self.relations = tuple(rels)
        self._arrow_pos = {a.name: i for i, a in enumerate(quiver.arrows)}
        self._build()

    def _build(self):
        q, p, L = self.quiver, self.p, self.nilpotency
        paths = []
        for n in range(L):
            level = q.paths(n)
            level.sort(key=lambda x: (q.index(x[0]), q.index(x[1]),
                                      tuple(self._arrow_pos[a] for a in x[2])))
            paths.extend(level)
        self.all_paths = paths
        pos = {pa[2] if pa[2] else ("@" + pa[0],): i for i, pa in enumerate(paths)}
        self._all_pos = pos
        n = len(paths)
        # ideal spanned by u g w, truncated below length L
        vecs = []
        for rel in self.relations:
            src, tgt = q.path_ends(next(iter(rel)))
            before = [pa for pa in paths if pa[1] == src]
            after = [pa for pa in paths if pa[0] == tgt]
            for w in before:
                for u in after:
                    v = np.zeros(n, dtype=np.int64)
                    for path, c in rel.items():
                        full = w[2] + path + u[2]
                        if len(full) < L:
                            v[pos[full]] = (v[pos[full]] + c) % p
                    if v.any():
                        vecs.append(v)
        # eliminate with longest paths first so that leading terms are long
        order = list(range(n))[::-1]
        self._pivot_paths = set()
        self._rewrite = {}
        if vecs:
            mat = np.array(vecs, dtype=np.int64)[:, order]
            r, pivots = la.rref(mat, p)
            for row, pc in enumerate(pivots):
                lead = order[pc]
                self._pivot_paths.add(lead)
                tail = {}
                for j in range(n):
                    col = n - 1 - j
                    if j != lead and r[row, col]:
                        tail[j] = (-r[row, col]) % p
                self._rewrite[lead] = tail
        self.basis = [pa for i, pa in enumerate(paths) if i not in self._pivot_paths]
        self._basis_pos = {}
        for k, pa in enumerate(self.basis):
            self._basis_pos[self._key(pa)] = k
        self.dim = len(self.basis)
        by_source = {v: [] for v in q.vertices}
        by_target = {v: [] for v in q.vertices}
        for k, (s, t, _) in enumerate(self.basis):
            by_source[s].append(k)
            by_target[t].append(k)
        self._by_source = by_source
        self._by_target = by_target
        self._projectives = {}
        self._injectives = {}

    @staticmethod
    def _key(path):
        s, _, arrows = path
        return arrows if arrows else ("@" + s,)

    # -- elements ---------------------------------------------------------
    def reduce(self, arrows, vertex=None):
        """Coordinates (length dim) of the residue class of a path."""
        out = np.zeros(self.dim, dtype=np.int64)
        if len(arrows) >= self.nilpotency:
            return out
        key = tuple(arrows) if arrows else ("@" + str(vertex),)
        i = self._all_pos[key]
        if i in self._pivot_paths:
            for j, c in self._rewrite[i].items():
                k = self._basis_pos[self._key(self.all_paths[j])]
                out[k] = (out[k] + c) % self.p
        else:
            out[self._basis_pos[key]] = 1
        return out

    def basis_index(self, path):
        return self._basis_pos[self._key(path)]

    def compose_paths(self, outer, inner):
        """Coordinates of outer ∘ inner (inner applied first), or zero."""
        if inner[1] != outer[0]:
            return np.zeros(self.dim, dtype=np.int64)
        return self.reduce(inner[2] + outer[2], inner[0])

    def multiply(self, x, y):
        """Product x·y of two elements in basis coordinates (y applied first)."""
        out = np.zeros(self.dim, dtype=np.int64)
        for i in np.nonzero(x)[0]:
            for j in np.nonzero(y)[0]:
                prod = self.compose_paths(self.basis[i], self.basis[j])
                out = (out + int(x[i]) * int(y[j]) * prod) % self.p
        return out

    def idempotent(self, v):
        return self.reduce((), v)

    def one(self):
        return sum(self.idempotent(v) for v in self.quiver.vertices) % self.p

    def paths_between(self, s, t):
        return [k for k in self._by_source[s] if self.basis[k][1] == t]

    def same_as(self, other):
        return (self.quiver == other.quiver and self.p == other.p
                and self.nilpotency == other.nilpotency
                and self.basis == other.basis and self.relations == other.relations)

    # -- standard modules -------------------------------------------------
    def projective(self, v):
        v = str(v)
        self.quiver.index(v)
        if v not in self._projectives:
            self._projectives[v] = _projective(self, v)
        return self._projectives[v]

    def injective(self, v):
        v = str(v)
        self.quiver.index(v)
        if v not in self._injectives:
            self._injectives[v] = _injective(self, v)
        return self._injectives[v]

    def simple(self, v):
        dims = [0] * len(self.quiver.vertices)
        dims[self.quiver.index(v)] = 1
        return Representation(self, dims, {})

    def zero_module(self):
        return Representation(self, [0] * len(self.quiver.vertices), {})

    def __repr__(self):
        return (f"BoundAlgebra(vertices={list(self.quiver.vertices)}, "
                f"arrows={len(self.quiver.arrows)}, dim={self.dim}, p={self.p})")


def build_algebra(quiver, nilpotency, relations=(), p=5):
    return BoundAlgebra(quiver, nilpotency, relations, p)


def standard_module(alg, kind, v):
    if kind == "simple":
        return alg.simple(v)
    if kind == "projective":
        return alg.projective(v)
    if kind == "injective":
        return alg.injective(v)
    raise ValueError(f"unknown standard module kind {kind!r}")


def _projective(alg, v):
    q = alg.quiver
    basis_at = {w: [k for k in alg._by_source[v] if alg.basis[k][1] == w] for w in q.vertices}
    dims = [len(basis_at[w]) for w in q.vertices]
    maps = {}
    for a in q.arrows:
        src, tgt = basis_at[a.source], basis_at[a.target]
        m = la.zeros(len(tgt), len(src))
        for j, k in enumerate(src):
            image = alg.reduce(alg.basis[k][2] + (a.name,), v)
            for i, kk in enumerate(tgt):
                m[i, j] = image[kk]
        maps[a.name] = m
    rep = Representation(alg, dims, maps, check=False)
    rep.basis_labels = {w: [alg.basis[k] for k in basis_at[w]] for w in q.vertices}
    return rep


def _injective(alg, v):
    q = alg.quiver
    basis_at = {w: [k for k in alg._by_target[v] if alg.basis[k][0] == w] for w in q.vertices}
    dims = [len(basis_at[w]) for w in q.vertices]
    maps = {}
    for a in q.arrows:
        src, tgt = basis_at[a.source], basis_at[a.target]
        m = la.zeros(len(tgt), len(src))
        for i, kq in enumerate(tgt):
            image = alg.reduce((a.name,) + alg.basis[kq][2])
            for j, kr in enumerate(src):
                m[i, j] = image[kr]
        maps[a.name] = m
    rep = Representation(alg, dims, maps, check=False)
    rep.basis_labels = {w: [alg.basis[k] for k in basis_at[w]] for w in q.vertices}
    return rep


class Representation:
    """A module over a bound quiver algebra: dimension vector and arrow matrices."""

    def __init__(self, alg, dims, maps, check=True):
        self.alg = alg
        q = alg.quiver
        if len(dims) != len(q.vertices):
            raise ValueError(f"dimension vector has {len(dims)} entries, expected {len(q.vertices)}")
        self.dims = tuple(int(d) for d in dims)
        if any(d < 0 for d in self.dims):
            raise ValueError("dimensions must be non-negative")
        full = {}
        for a in q.arrows:
            shape = (self.dims[q.index(a.target)], self.dims[q.index(a.source)])
            m = maps.get(a.name)
            if m is None:
                m = la.zeros(*shape)
            m = np.asarray(m, dtype=np.int64)
            if m.size == 0:
                m = m.reshape(shape)
            if m.shape != shape:
                raise ValueError(f"matrix for arrow {a.name} has shape {m.shape}, expected {shape}")
            full[a.name] = m % alg.p
        unknown = set(maps) - set(full)
        if unknown:
            raise ValueError(f"unknown arrow(s) {sorted(unknown)}")
        self.maps = full
        if check:
            bad = self.relation_failures()
            if bad:
                raise ValueError(f"representation violates relation(s): {bad}")

    @property
    def p(self):
        return self.alg.p

    @property
    def dim(self):
        return sum(self.dims)

    def is_zero(self):
        return self.dim == 0

    def dim_at(self, v):
        return self.dims[self.alg.quiver.index(v)]

    def path_matrix(self, arrows, vertex=None):
        if not arrows:
            return la.identity(self.dim_at(vertex))
        return la.mul_chain([self.maps[a] for a in reversed(arrows)], self.p)

    def element_matrix(self, coords, source, target):
        """Matrix of an element of e_target Λ e_source acting on this module."""
        out = la.zeros(self.dim_at(target), self.dim_at(source))
        for k in np.nonzero(coords)[0]:
            s, t, arrows = self.alg.basis[k]
            if s == source and t == target:
                out = (out + int(coords[k]) * self.path_matrix(arrows, s)) % self.p
        return out

    def relation_failures(self):
        bad = []
        q = self.alg.quiver
        for rel in self.alg.relations:
            s, t = q.path_ends(next(iter(rel)))
            acc = la.zeros(self.dim_at(t), self.dim_at(s))
            for path, c in rel.items():
                acc = (acc + c * self.path_matrix(path)) % self.p
            if acc.any():
                bad.append(" + ".join(f"{c}*{path_words(pa)}" for pa, c in rel.items()))
        for s, t, arrows in q.paths(self.alg.nilpotency):
            if self.dim_at(s) and self.dim_at(t) and self.path_matrix(arrows).any():
                bad.append(path_words(arrows))
        return bad

    def offsets(self):
        out, acc = [], 0
        for d in self.dims:
            out.append(acc)
            acc += d
        return out

    def same_as(self, other):
        return (self.dims == other.dims
                and all(np.array_equal(self.maps[a], other.maps[a]) for a in self.maps))

    def __repr__(self):
        return f"Representation(dims={self.dims})"


class ModuleMap:
    """A morphism of representations, one matrix per vertex."""

    def __init__(self, source, target, maps, check=True):
        self.source = source
        self.target = target
        q = source.alg.quiver
        mats = []
        for i, v in enumerate(q.vertices):
            m = np.asarray(maps[i], dtype=np.int64)
            shape = (target.dims[i], source.dims[i])
            if m.size == 0:
                m = m.reshape(shape)
            if m.shape != shape:
                raise ValueError(f"vertex {v}: map has shape {m.shape}, expected {shape}")
            mats.append(m % source.p)
        self.maps = tuple(mats)
        if check and not self.intertwines():
            raise ValueError("vertex maps do not commute with the arrow actions")

    @property
    def p(self):
        return self.source.p

    def intertwines(self):
        q = self.source.alg.quiver
        for a in q.arrows:
            i, j = q.index(a.source), q.index(a.target)
            lhs = la.mul(self.maps[j], self.source.maps[a.name], self.p)
            rhs = la.mul(self.target.maps[a.name], self.maps[i], self.p)
            if not np.array_equal(lhs, rhs):
                return False
        return True

    @classmethod
    def zero(cls, source, target):
        return cls(source, target, [la.zeros(t, s) for s, t in zip(source.dims, target.dims)],
                   check=False)

    @classmethod
    def identity(cls, module):
        return cls(module, module, [la.identity(d) for d in module.dims], check=False)

    def __matmul__(self, other):
        """self ∘ other."""
        if other.target.dims != self.source.dims:
            raise ValueError("maps are not composable")
        return ModuleMap(other.source, self.target,
                         [la.mul(a, b, self.p) for a, b in zip(self.maps, other.maps)],
                         check=False)

    def __add__(self, other):
        return ModuleMap(self.source, self.target,
                         [(a + b) % self.p for a, b in zip(self.maps, other.maps)], check=False)

    def __sub__(self, other):
        return ModuleMap(self.source, self.target,
                         [(a - b) % self.p for a, b in zip(self.maps, other.maps)], check=False)

    def scale(self, c):
        return ModuleMap(self.source, self.target, [(int(c) * a) % self.p for a in self.maps],
                         check=False)

    def is_zero(self):
        return not any(m.any() for m in self.maps)

    def rank(self):
        return sum(la.rank(m, self.p) for m in self.maps)

    def is_injective(self):
        return all(la.rank(m, self.p) == m.shape[1] for m in self.maps)

    def is_surjective(self):
        return all(la.rank(m, self.p) == m.shape[0] for m in self.maps)

    def is_iso(self):
        return self.source.dims == self.target.dims and self.is_injective()

    def vector(self):
        """All entries flattened (vertex by vertex, row-major)."""
        parts = [m.reshape(-1) for m in self.maps]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    def block(self):
        """The map as one block-diagonal matrix on total spaces."""
        out = la.zeros(self.target.dim, self.source.dim)
        so, to = self.source.offsets(), self.target.offsets()
        for i, m in enumerate(self.maps):
            out[to[i]:to[i] + m.shape[0], so[i]:so[i] + m.shape[1]] = m
        return out

    def __repr__(self):
        return f"ModuleMap({self.source.dims} -> {self.target.dims})"


def map_from_vector(source, target, vec):
    mats, k = [], 0
    for s, t in zip(source.dims, target.dims):
        mats.append(np.asarray(vec[k:k + s * t], dtype=np.int64).reshape(t, s))
        k += s * t
    return ModuleMap(source, target, mats, check=False)


def map_from_block(source, target, block):
    so, to = source.offsets(), target.offsets()
    mats = [block[to[i]:to[i] + t, so[i]:so[i] + s]
            for i, (s, t) in enumerate(zip(source.dims, target.dims))]
    return ModuleMap(source, target, mats, check=False)


class DirectSum(NamedTuple):
    module: Representation
    injections: list
    projections: list


def direct_sum(modules, alg=None):
    modules = list(modules)
    if not modules:
        if alg is None:
            raise ValueError("empty direct sum needs an algebra")
        z = alg.zero_module()
        return DirectSum(z, [], [])
    alg = modules[0].alg
    for m in modules[1:]:
        if m.alg is not alg and not m.alg.same_as(alg):
            raise ValueError("direct sum of modules over different algebras")
    q = alg.quiver
    dims = [sum(m.dims[i] for m in modules) for i in range(len(q.vertices))]
    maps = {}
    for a in q.arrows:
        blocks = [m.maps[a.name] for m in modules]
        maps[a.name] = _block_diag(blocks)
    total = Representation(alg, dims, maps, check=False)
    injections, projections = [], []
    offs = [0] * len(q.vertices)
    for m in modules:
        inj, proj = [], []
        for i, d in enumerate(m.dims):
            e = la.zeros(dims[i], d)
            e[offs[i]:offs[i] + d, :] = la.identity(d)
            inj.append(e)
            proj.append(e.T.copy())
            offs[i] += d
        injections.append(ModuleMap(m, total, inj, check=False))
        projections.append(ModuleMap(total, m, proj, check=False))
    return DirectSum(total, injections, projections)


def _block_diag(blocks):
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = la.zeros(rows, cols)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def map_between_sums(sources, targets, blocks, alg=None):
    """Assemble a map ⊕sources -> ⊕targets from blocks[j][i]: sources[i] -> targets[j]."""
    src = direct_sum(sources, alg)
    tgt = direct_sum(targets, alg)
    total = ModuleMap.zero(src.module, tgt.module)
    for j, row in enumerate(blocks):
        for i, f in enumerate(row):
            if f is not None:
                total = total + (tgt.injections[j] @ f @ src.projections[i])
    return total, src, tgt


def submodule(module, spaces):
    """The submodule spanned vertexwise by the columns of `spaces`.

    The spaces must be stable under the arrows.  Returns (sub, inclusion).
    """
    alg, p = module.alg, module.p
    q = alg.quiver
    bases = [la.column_space(s, p) if s.size else la.zeros(module.dims[i], 0)
             for i, s in enumerate(spaces)]
    maps = {}
    for a in q.arrows:
        i, j = q.index(a.source), q.index(a.target)
        image = la.mul(module.maps[a.name], bases[i], p)
        x = la.solve_many(bases[j], image, p)
        if x is None:
            raise ValueError(f"subspace is not stable under arrow {a.name}")
        maps[a.name] = x
    sub = Representation(alg, [b.shape[1] for b in bases], maps, check=False)
    return sub, ModuleMap(sub, module, bases, check=False)


def quotient(module, spaces):
    """module / (vertexwise span of `spaces`).  Returns (quotient, projection, sections)."""
    alg, p = module.alg, module.p
    q = alg.quiver
    qs, ss = [], []
    for i, s in enumerate(spaces):
        qm, sm = la.quotient_coordinates(s, module.dims[i], p)
        qs.append(qm)
        ss.append(sm)
    maps = {}
    for a in q.arrows:
        i, j = q.index(a.source), q.index(a.target)
        maps[a.name] = la.mul_chain([qs[j], module.maps[a.name], ss[i]], p)
    quo = Representation(alg, [m.shape[0] for m in qs], maps, check=False)
    return quo, ModuleMap(module, quo, qs, check=False), ss


class KernelCokernel(NamedTuple):
    kernel: Representation
    inclusion: ModuleMap
    image: Representation
    image_inclusion: ModuleMap
    corestriction: ModuleMap
    cokernel: Representation
    projection: ModuleMap


def kernel_cokernel(f):
    p = f.p
    kers = [la.kernel_basis(m, p) for m in f.maps]
    ker, incl = submodule(f.source, kers)
    ims = [la.column_space(m, p) for m in f.maps]
    im, im_incl = submodule(f.target, ims)
    core = [la.solve_many(b, m, p) for b, m in zip(im_incl.maps, f.maps)]
    corestriction = ModuleMap(f.source, im, core, check=False)
    cok, proj, _ = quotient(f.target, ims)
    return KernelCokernel(ker, incl, im, im_incl, corestriction, cok, proj)


def kernel(f):
    p = f.p
    return submodule(f.source, [la.kernel_basis(m, p) for m in f.maps])


def cokernel(f):
    cok, proj, _ = quotient(f.target, [la.column_space(m, f.p) for m in f.maps])
    return cok, proj


def standard_sum(alg, kind, vertices):
    mods = [standard_module(alg, kind, v) for v in vertices]
    return direct_sum(mods, alg)


def projective_map_elements(f, src_vertices, tgt_vertices):
    """Read a map between sums of standard projectives as algebra elements.

    Returns elems[j][i]: the coordinates of the image of e_{src[i]} in the
    j-th target summand, an element of e_{src[i]} Λ e_{tgt[j]} (paths from
    tgt[j] to src[i]).
    """
    alg, p = f.source.alg, f.p
    src = standard_sum(alg, "projective", src_vertices)
    tgt = standard_sum(alg, "projective", tgt_vertices)
    if not src.module.same_as(f.source) or not tgt.module.same_as(f.target):
        raise ValueError("map is not between the declared sums of standard projectives")
    elems = []
    for j, w in enumerate(tgt_vertices):
        row = []
        proj = tgt.projections[j]
        pw = alg.projective(w)
        for i, v in enumerate(src_vertices):
            comp = proj @ f @ src.injections[i]
            vi = alg.quiver.index(v)
            pv = alg.projective(v)
            e_pos = pv.basis_labels[v].index((v, v, ()))
            column = comp.maps[vi][:, e_pos]
            coords = np.zeros(alg.dim, dtype=np.int64)
            for r, label in enumerate(pw.basis_labels[v]):
                coords[alg.basis_index(label)] = column[r]
            row.append(coords % p)
        elems.append(row)
    return elems


def nakayama_on_projectives(f, src_vertices, tgt_vertices):
    """ν(f) for f: ⊕P(src) -> ⊕P(tgt); returns the map ⊕I(src) -> ⊕I(tgt)."""
    alg, p = f.source.alg, f.p
    elems = projective_map_elements(f, src_vertices, tgt_vertices)
    src = standard_sum(alg, "injective", src_vertices)
    tgt = standard_sum(alg, "injective", tgt_vertices)
    total = ModuleMap.zero(src.module, tgt.module)
    for j, w in enumerate(tgt_vertices):
        iw = alg.injective(w)
        for i, v in enumerate(src_vertices):
            x = elems[j][i]
            if not x.any():
                continue
            iv = alg.injective(v)
            mats = []
            for u in alg.quiver.vertices:
                rows, cols = iw.basis_labels[u], iv.basis_labels[u]
                m = la.zeros(len(rows), len(cols))
                for r, qpath in enumerate(rows):
                    # (ν f)(φ)(q) = φ(x ∘ q): first q, then x
                    image = np.zeros(alg.dim, dtype=np.int64)
                    for k in np.nonzero(x)[0]:
                        image = (image + int(x[k]) * alg.compose_paths(alg.basis[k], qpath)) % p
                    for c, rpath in enumerate(cols):
                        m[r, c] = image[alg.basis_index(rpath)]
                mats.append(m)
            block = ModuleMap(iv, iw, mats, check=False)
            total = total + (tgt.injections[j] @ block @ src.projections[i])
    return total, src, tgt


def arrow_entry_count(alg, dims):
    """Number of entries of the arrow matrices for a dimension vector."""
    q = alg.quiver
    return sum(dims[q.index(a.source)] * dims[q.index(a.target)] for a in q.arrows)



# -- duality ----------------------------------------------------------------------

def opposite(alg):
    """Λ^op on the reversed quiver; arrows keep their names."""
    hit = getattr(alg, "_opposite", None)
    if hit is not None:
        return hit
    q = alg.quiver
    rq = Quiver(q.vertices, [(a.name, a.target, a.source) for a in q.arrows])
    rels = [{tuple(reversed(path)): c for path, c in rel.items()} for rel in alg.relations]
    op = BoundAlgebra(rq, alg.nilpotency, rels, alg.p)
    op._opposite = alg
    alg._opposite = op
    return op


def dual(module):
    """D(M) = Hom_k(M, k) as a module over the opposite algebra."""
    op = opposite(module.alg)
    return Representation(op, module.dims, {n: m.T.copy() for n, m in module.maps.items()},
                          check=False)


def dual_map(f):
    """D(f): D(target) -> D(source)."""
    return ModuleMap(dual(f.target), dual(f.source), [m.T.copy() for m in f.maps], check=False)
