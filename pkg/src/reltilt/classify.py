"""F-presilting and F-tilting tests, pairs, torsion classes and the two
classification bijections, decided over a complete catalog."""

from itertools import combinations
from typing import NamedTuple

import numpy as np

from . import linalg as la
from .errors import (CapExceeded, HypothesisFailed, IncompleteCatalog, NotAdmissible,
                     NotTauRigid)
from .modules import (decompose, enumerate_indecomposables, ext1_dim, hom_basis, hom_dim,
                      iso_indecomposable, tau)
from .quiver import direct_sum, quotient
from .relative import TorsionOracle, homotopy_hom_vanishes, left_approximation

SUBSET_BOUND = 20


class PresiltingVerdict(NamedTuple):
    via_prop_b: bool
    via_gamma: bool
    via_homotopy: bool

    @property
    def agreed(self):
        return self.via_prop_b == self.via_gamma == self.via_homotopy

    @property
    def holds(self):
        if not self.agreed:
            raise ArithmeticError(f"presilting oracles disagree: {tuple(self)}")
        return self.via_prop_b


class TiltingVerdict(NamedTuple):
    holds: bool
    pd_ok: bool
    ext_ok: bool
    coresolutions: list      # one F-exact triple (or None) per generator summand
    reason: str


class PresiltingPair(NamedTuple):
    m: object
    x_part: object
    is_pair: bool
    is_support_silting: bool
    rk_m: int
    rk_x: int


class AdmissibilityVerdict(NamedTuple):
    holds: bool
    counterexample: tuple    # first basic counterexample in canonical order, or ()
    all_counterexamples: list  # every inclusion-minimal basic counterexample


class TheoremReport(NamedTuple):
    left: list               # catalog index tuples (basic modules)
    right: list              # catalog index tuples (classes)
    mapping: dict            # left tuple -> its gen_F closure
    bijection_holds: bool
    witnesses: list


# -- helpers ---------------------------------------------------------------------------------

def basic_pieces(m):
    """One indecomposable representative per isomorphism class of summands."""
    if m.dim == 0:
        return []
    return decompose(m).representatives()


def _sum(mods, alg):
    return direct_sum(list(mods), alg).module


def _subsets(n, nonempty=True):
    if n > SUBSET_BOUND:
        raise CapExceeded(f"catalog of size {n} exceeds the subset bound {SUBSET_BOUND}",
                          2 ** n, 2 ** SUBSET_BOUND, "subsets")
    for size in range(1 if nonempty else 0, n + 1):
        yield from combinations(range(n), size)


def second_differential(ctx, m):
    """π^{-2}_F(m): P^{-2}_F -> P^{-1}_F, or None when P^{-2}_F = 0."""
    steps = ctx.resolution(m, 3)
    if len(steps) < 3:
        return None
    return ctx.differential(steps, 2)


def hom_kills_second_differential(ctx, m, target=None):
    """Hom(π^{-2}_F(m), target) = 0, with target defaulting to m."""
    target = m if target is None else target
    d = second_differential(ctx, m)
    if d is None:
        return True
    return all((h @ d).is_zero() for h in hom_basis(d.target, target))


def pd_at_most_one(ctx, m):
    steps = ctx.resolution(m, 2)
    return len(steps) < 2 or steps[1].syzygy.dim == 0


def tau_rigid(n):
    if n.dim == 0:
        return True
    return hom_dim(n, tau(n)) == 0


# -- presilting --------------------------------------------------------------------------------

def is_f_presilting(ctx, m):
    if m.dim == 0:
        return PresiltingVerdict(True, True, True)
    prop_b = hom_kills_second_differential(ctx, m) and ctx.ext_f_dim(m, m) == 0
    via_gamma = tau_rigid(ctx.eval_module(m))
    pc = ctx.two_term(m)
    via_homotopy = homotopy_hom_vanishes(pc, pc)
    return PresiltingVerdict(prop_b, via_gamma, via_homotopy)


class Tables:
    """Pairwise invariants over the catalog; every subset-sum question reduces to them
    because Ext_F and the minimal F-resolution are additive."""

    def __init__(self, ctx):
        self.ctx = ctx
        self.cat = ctx.require_catalog(complete=True)
        n = len(self.cat)
        e = self.cat.entries
        self.ext1 = [[ctx.ext_f_dim(e[c], e[a], 1) for a in range(n)] for c in range(n)]
        self.ext2 = [[ctx.ext_f_dim(e[c], e[a], 2) for a in range(n)] for c in range(n)]
        self.pi2 = [[hom_kills_second_differential(ctx, e[c], e[a]) for a in range(n)]
                    for c in range(n)]
        self.pd_le1 = [pd_at_most_one(ctx, x) for x in e]
        self.oracle = TorsionOracle(ctx)
        self._closure = {}

    def presilting(self, subset):
        return all(self.ext1[c][a] == 0 and self.pi2[c][a] for c in subset for a in subset)

    def self_orthogonal(self, subset):
        return all(self.ext1[c][a] == 0 and self.ext2[c][a] == 0 for c in subset for a in subset)

    def closure(self, subset):
        key = tuple(sorted(subset))
        if key not in self._closure:
            self._closure[key] = self.oracle.gen_f(key)
        return self._closure[key]

    def module(self, subset):
        return _sum([self.cat[k] for k in subset], self.ctx.alg)


_TABLES = {}


def tables(ctx):
    hit = _TABLES.get(id(ctx))
    if hit is None or hit.ctx is not ctx:
        hit = Tables(ctx)
        _TABLES[id(ctx)] = hit
    return hit


# -- tilting ----------------------------------------------------------------------------------

def is_f_tilting(ctx, t):
    if t.dim == 0:
        return TiltingVerdict(False, False, False, [], "zero module")
    pd_ok = pd_at_most_one(ctx, t)
    if not pd_ok:
        return TiltingVerdict(False, False, False, [], "pd_F(T) > 1")
    ext_ok = ctx.ext_f_dim(t, t, 1) == 0 and ctx.ext_f_dim(t, t, 2) == 0
    if not ext_ok:
        return TiltingVerdict(False, True, False, [], "T is not self-F-orthogonal")
    pieces = basic_pieces(t)
    triples = []
    for i, x in enumerate(ctx.X):
        approx = left_approximation(x, pieces, minimal=True)
        f = approx.map
        cok, proj, _ = quotient(f.target, [la.column_space(mm, ctx.p) for mm in f.maps])
        triple = ctx.is_f_exact(f, proj)
        if triple is None:
            return TiltingVerdict(False, True, True, triples,
                                  f"approximation of {ctx.names[i]} is not F-monic")
        if not all(any(iso_indecomposable(c, q) is not None for q in pieces)
                   for c in basic_pieces(cok)):
            return TiltingVerdict(False, True, True, triples,
                                  f"cokernel for {ctx.names[i]} is not in add(T)")
        triples.append(triple)
    return TiltingVerdict(True, True, True, triples, "F-tilting")


# -- gen_F-minimal reduct -------------------------------------------------------------------

def gen_f_minimal_reduct(ctx, m):
    """Drop indecomposable summands lying in gen_F of the rest until none does."""
    pieces = basic_pieces(m)
    changed = True
    while changed and len(pieces) > 1:
        changed = False
        for k in range(len(pieces)):
            rest = pieces[:k] + pieces[k + 1:]
            if ctx.gen_f_contains(rest, pieces[k]):
                pieces = rest
                changed = True
                break
    return _sum(pieces, ctx.alg) if pieces else ctx.alg.zero_module()


def is_gen_f_minimal(ctx, m):
    pieces = basic_pieces(m)
    if len(pieces) != decompose(m).rk or sum(decompose(m).multiplicities) != len(pieces):
        return False
    return not any(ctx.gen_f_contains(pieces[:k] + pieces[k + 1:], pieces[k])
                   for k in range(len(pieces)) if len(pieces) > 1)


# -- pairs ------------------------------------------------------------------------------------

def pair_classify(ctx, m, x_part):
    for piece in basic_pieces(x_part):
        if not any(iso_indecomposable(piece, x) is not None for x in ctx.X):
            raise ValueError("second component of a pair must lie in add(X)")
    rk_m = decompose(m).rk if m.dim else 0
    rk_x = decompose(x_part).rk if x_part.dim else 0
    presilt = is_f_presilting(ctx, m).holds
    is_pair = presilt and (x_part.dim == 0 or m.dim == 0 or hom_dim(x_part, m) == 0)
    support = is_pair and ctx.rank == rk_m + rk_x
    return PresiltingPair(m, x_part, is_pair, support, rk_m, rk_x)


def enumerate_presilting_pairs(ctx):
    """All basic F-presilting pairs (M, X') as (catalog subset, generator summand subset)."""
    tab = tables(ctx)
    cat = tab.cat
    xs = ctx.x_indices()
    out = []
    for ms in _subsets(len(cat), nonempty=False):
        if not tab.presilting(ms):
            continue
        for xsub in _subsets(len(xs), nonempty=False):
            if all(hom_dim(ctx.X[i], cat[k]) == 0 for i in xsub for k in ms):
                rk_total = len(ms) + len(xsub)
                out.append((ms, xsub, rk_total == ctx.rank))
    return out


# -- Γ side -----------------------------------------------------------------------------------

def gamma_catalog(ctx, bound=None, cap=None):
    """Indecomposable Γ-modules up to a dimension bound.

    The default bound is the componentwise maximum over the evaluated Λ-catalog
    and the indecomposable projective and injective Γ-modules.
    """
    if getattr(ctx, "_gamma_catalog", None) is not None and bound is None:
        return ctx._gamma_catalog
    g = ctx.gamma
    if bound is None:
        vecs = [g.projective(v).dims for v in g.quiver.vertices]
        vecs += [g.injective(v).dims for v in g.quiver.vertices]
        if ctx.catalog is not None:
            vecs += [ctx.eval_module(e).dims for e in ctx.catalog.entries]
        bound = tuple(max(v[k] for v in vecs) for k in range(len(g.quiver.vertices)))
    cat = enumerate_indecomposables(g, bound, cap=cap or ctx.cap)
    cat.provenance = "enumerated"
    cat.names = [f"G{k}" for k in range(len(cat))]
    if bound is not None:
        ctx._gamma_catalog = cat
    return cat


def gen_contains(n, z):
    """z is a quotient of a sum of copies of n (images of Hom(n, z) span z)."""
    if z.dim == 0:
        return True
    p = z.p
    basis = hom_basis(n, z)
    for k in range(len(z.dims)):
        if z.dims[k] == 0:
            continue
        cols = [f.maps[k] for f in basis if f.maps[k].size]
        if not cols or la.rank(np.concatenate(cols, axis=1), p) < z.dims[k]:
            return False
    return True


def ext_projectives_of_gen(gcat, n):
    """Catalog indices of the Ext-projective indecomposables of gen(n) over Γ."""
    if n.dim == 0:
        return []
    if not tau_rigid(n):
        raise NotTauRigid("module is not τ-rigid")
    cls = [k for k, z in enumerate(gcat.entries) if gen_contains(n, z)]
    out = []
    for k in cls:
        if all(ext1_dim(gcat[k], gcat[j]) == 0 for j in cls):
            out.append(k)
    for piece in basic_pieces(n):
        if gcat.find(piece) is None:
            raise IncompleteCatalog("Γ-catalog misses a summand of the module")
    return out


def is_special_f_presilting(ctx, m, gcat=None):
    """Basic, F-presilting, and maximal against ℙ(gen(e_X m)).

    Divisibility of a sum forces divisibility of every summand, so only
    indecomposable catalog modules M' outside add(m) are tried.
    """
    if m.dim == 0:
        return False
    dec = decompose(m)
    if any(c != 1 for c in dec.multiplicities):
        return False
    if not is_f_presilting(ctx, m).holds:
        return False
    gcat = gcat or gamma_catalog(ctx)
    cat = ctx.require_catalog(complete=True)
    em = ctx.eval_module(m)
    ext_proj = ext_projectives_of_gen(gcat, em)
    pieces = basic_pieces(m)
    own = [cat.find(x) for x in pieces]
    for k, e in enumerate(cat.entries):
        if k in own:
            continue
        if gcat.find(ctx.eval_module(e)) in ext_proj:
            return False
    return True


# -- admissibility ----------------------------------------------------------------------------

def is_f_admissible(ctx):
    """Scan basic modules: Ext^1_F(M, M) = 0 should force Hom(π^{-2}_F, M) = 0.

    Both conditions split over pairs of indecomposable summands, so subsets of
    the catalog (smallest first) cover every module.
    """
    tab = tables(ctx)
    found = []
    for s in _subsets(len(tab.cat)):
        if any(set(f).issubset(s) for f in found):
            continue
        ext_zero = all(tab.ext1[c][a] == 0 for c in s for a in s)
        if ext_zero and not all(tab.pi2[c][a] for c in s for a in s):
            found.append(s)
    if found:
        return AdmissibilityVerdict(False, found[0], found)
    return AdmissibilityVerdict(True, (), [])


# -- torsion classes ---------------------------------------------------------------------------

FILTERS = ("all", "nonzero", "preenveloping", "f-preenveloping")


def enumerate_torsion_classes(ctx, filters=("all",)):
    """Catalog subsets that are F-torsion classes, restricted by the filters.

    Every additive subcategory of a representation-finite module category is
    functorially finite, so "preenveloping" keeps all classes.
    """
    for f in filters:
        if f not in FILTERS:
            raise ValueError(f"unknown filter {f!r}; expected one of {FILTERS}")
    tab = tables(ctx)
    _, inj = ctx.f_proj_inj()
    out = []
    for s in _subsets(len(tab.cat), nonempty=False):
        if "nonzero" in filters and not s:
            continue
        if "f-preenveloping" in filters and not set(inj).issubset(s):
            continue
        if tab.oracle.verdict(s).holds:
            out.append(s)
    return out


# -- theorems ---------------------------------------------------------------------------------

def _bijection(left, right, mapping):
    witnesses = []
    images = [mapping[x] for x in left]
    for x in left:
        if mapping[x] not in right:
            witnesses.append(("image not in right side", x, mapping[x]))
    seen = {}
    for x in left:
        if mapping[x] in seen:
            witnesses.append(("not injective", seen[mapping[x]], x))
        seen[mapping[x]] = x
    for r in right:
        if r not in images:
            witnesses.append(("not surjective", r))
    return not witnesses, witnesses


def tilting_subsets(ctx):
    tab = tables(ctx)
    out = []
    for s in _subsets(len(tab.cat)):
        if not all(tab.pd_le1[k] for k in s) or not tab.self_orthogonal(s):
            continue
        if is_f_tilting(ctx, tab.module(s)).holds:
            out.append(s)
    return out


def build_f_tilting_from_torsion(ctx, subset):
    """T = basic part of ⊕ (T̄_k ⊕ C̄_k) over the (S, F)-preenvelopes of the X_k."""
    cat = ctx.require_catalog(complete=True)
    s = tuple(sorted(subset))
    if not ctx.is_f_preenveloping(s):
        raise HypothesisFailed("class is not F-preenveloping")
    pieces = []
    for x in ctx.X:
        triple = ctx.construct_preenvelope(x, s)
        pieces.extend(basic_pieces(triple.f.target))
        pieces.extend(basic_pieces(triple.g.target))
    idx = sorted({cat.find(piece) for piece in pieces})
    if None in idx:
        raise IncompleteCatalog("preenvelope has a summand outside the catalog")
    t = _sum([cat[k] for k in idx], ctx.alg)
    if not is_f_tilting(ctx, t).holds:
        raise ArithmeticError("constructed module is not F-tilting")
    if tuple(ctx.gen_f_closure(t)) != s:
        raise ArithmeticError("constructed module has the wrong gen_F closure")
    return tuple(idx), t


def verify_theorem_tilting(ctx):
    tab = tables(ctx)
    left = tilting_subsets(ctx)
    right = enumerate_torsion_classes(ctx, ("f-preenveloping",))
    mapping = {s: tab.closure(s) for s in left}
    ok, witnesses = _bijection(left, right, mapping)
    for r in right:
        try:
            idx, _ = build_f_tilting_from_torsion(ctx, r)
        except (ArithmeticError, HypothesisFailed) as exc:
            witnesses.append(("construction failed", r, str(exc)))
            ok = False
            continue
        if idx not in left:
            witnesses.append(("constructed module not on left side", r, idx))
            ok = False
    return TheoremReport(left, right, mapping, ok, witnesses)


def verify_theorem_special(ctx, gcat=None):
    adm = is_f_admissible(ctx)
    if not adm.holds:
        raise NotAdmissible(adm.all_counterexamples)
    tab = tables(ctx)
    gcat = gcat or gamma_catalog(ctx)
    left = []
    for s in _subsets(len(tab.cat)):
        if not tab.presilting(s):
            continue
        if is_special_f_presilting(ctx, tab.module(s), gcat):
            left.append(s)
    right = enumerate_torsion_classes(ctx, ("nonzero", "preenveloping"))
    mapping = {s: tab.closure(s) for s in left}
    ok, witnesses = _bijection(left, right, mapping)
    return TheoremReport(left, right, mapping, ok, witnesses)
