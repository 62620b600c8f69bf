"""Reader and writer for .bqa algebra-description files.

    field 5
    quiver
      vertex 1
      vertex 2
      arrow a : 1 -> 2
    end
    relations
      nilpotency 2
      rel 1*b a + 4*c a        # paths are written right to left
    end
    module K
      dims 1 1
      matrix a = [[1]]
    end
    generator
      summand P1
      summand K
    end
    catalog bound 2 2          # or: catalog explicit S1 P1 ...

Module references accept the built-in names P<v>, I<v>, S<v>, the Kronecker
families J(n) and R(p0:p1,n), sums such as "P1+S1" and multiples "2*K".
"""

import json
import re
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

from . import linalg as la
from .errors import ParseError
from .modules import (DEFAULT_CAP, Catalog, certify_complete, enumerate_indecomposables,
                      is_indecomposable, iso_indecomposable, name_standard)
from .quiver import BoundAlgebra, Quiver, Representation, direct_sum

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*$")
_BUILTIN = re.compile(r"(?:[PIS](?P<v>\S+)|J\((?P<n>\d+)\)|"
                      r"R\((?P<p0>-?\d+):(?P<p1>-?\d+),(?P<rn>\d+)\))$")
FIXTURE_DIR = Path(__file__).parent / "fixtures"


@dataclass
class ModuleBlock:
    name: str
    dims: tuple
    matrices: dict            # arrow name -> nested list, row-major target x source
    line: int = 0


@dataclass
class AlgebraFile:
    p: int
    vertices: list
    arrows: list              # (name, source, target)
    nilpotency: int
    relations: list           # each a list of (coeff, written path words)
    modules: list = dc_field(default_factory=list)
    generator: list = dc_field(default_factory=list)
    catalog: tuple = None     # ("bound", dims) | ("explicit", names) | None

    def semantic(self):
        """Content compared by the round-trip property."""
        return (self.p, tuple(self.vertices), tuple(map(tuple, self.arrows)), self.nilpotency,
                tuple(tuple((c % self.p, tuple(w)) for c, w in r) for r in self.relations),
                tuple((m.name, tuple(m.dims),
                       tuple(sorted((a, json.dumps(x)) for a, x in m.matrices.items())))
                      for m in self.modules),
                tuple(self.generator),
                None if self.catalog is None else (self.catalog[0], tuple(self.catalog[1])))


# -- parsing --------------------------------------------------------------------------------

def _strip(line):
    return line.split("#", 1)[0].rstrip()


def _int(tok, lineno, col, what):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer {what}, got {tok!r}", lineno, col) from None


def _col(raw, tok):
    k = raw.find(tok)
    return k + 1 if k >= 0 else None


def _parse_term(text, lineno, col):
    text = text.strip()
    m = re.match(r"(-?\s*\d+)\s*\*\s*(.+)$", text)
    if m:
        coeff = int(m.group(1).replace(" ", ""))
        words = m.group(2).split()
    elif text.startswith("-"):
        coeff, words = -1, text[1:].split()
    else:
        coeff, words = 1, text.split()
    if not words:
        raise ParseError("empty path in relation", lineno, col)
    return coeff, tuple(words)


def _parse_relation(body, lineno, col):
    # split on + and - that separate terms (a leading sign belongs to the first term)
    terms, current = [], ""
    for ch in body:
        if ch in "+-" and current.strip() and not current.rstrip().endswith("*"):
            terms.append(current)
            current = "" if ch == "+" else "-"
        else:
            current += ch
    if current.strip():
        terms.append(current)
    if not terms:
        raise ParseError("empty relation", lineno, col)
    return [_parse_term(t, lineno, col) for t in terms]


def parse(text):
    lines = text.splitlines()
    p = None
    vertices, arrows, relations, modules, generator = [], [], [], [], []
    nilpotency = None
    catalog = None
    block, current = None, None
    seen_blocks = set()
    for lineno, raw in enumerate(lines, start=1):
        line = _strip(raw)
        if not line.strip():
            continue
        toks = line.split()
        head = toks[0]
        col = _col(raw, head)
        if block is None:
            if head == "field":
                if len(toks) != 2:
                    raise ParseError("usage: field <p>", lineno, col)
                p = _int(toks[1], lineno, _col(raw, toks[1]), "characteristic")
                try:
                    la.check_prime(p)
                except ValueError as exc:
                    raise ParseError(str(exc), lineno, _col(raw, toks[1])) from None
            elif head in ("quiver", "relations", "generator"):
                if len(toks) != 1:
                    raise ParseError(f"'{head}' takes no arguments", lineno, col)
                if head in seen_blocks:
                    raise ParseError(f"duplicate '{head}' block", lineno, col)
                seen_blocks.add(head)
                block = head
            elif head == "module":
                if len(toks) != 2 or not _NAME.match(toks[1]):
                    raise ParseError("usage: module <Name>", lineno, col)
                name = toks[1]
                if name[0] in "PIS" and name[1:] in vertices:
                    raise ParseError(f"module name {name} shadows a built-in", lineno,
                                     _col(raw, name))
                if any(m.name == name for m in modules):
                    raise ParseError(f"module {name} defined twice", lineno, _col(raw, name))
                current = ModuleBlock(name, None, {}, lineno)
                block = "module"
            elif head == "catalog":
                if len(toks) < 2 or toks[1] not in ("bound", "explicit"):
                    raise ParseError("usage: catalog bound d1 d2 ... | catalog explicit N ...",
                                     lineno, col)
                if catalog is not None:
                    raise ParseError("duplicate catalog line", lineno, col)
                if toks[1] == "bound":
                    dims = tuple(_int(t, lineno, _col(raw, t), "bound") for t in toks[2:])
                    catalog = ("bound", dims)
                else:
                    catalog = ("explicit", tuple(toks[2:]))
            else:
                raise ParseError(f"unexpected '{head}' at top level", lineno, col)
            continue
        if head == "end":
            if block == "module":
                if current.dims is None:
                    raise ParseError(f"module {current.name} has no dims line", lineno, col)
                modules.append(current)
                current = None
            block = None
            continue
        if block == "quiver":
            if head == "vertex" and len(toks) == 2:
                if toks[1] in vertices:
                    raise ParseError(f"vertex {toks[1]} declared twice", lineno, _col(raw, toks[1]))
                vertices.append(toks[1])
            elif head == "arrow":
                m = re.match(r"\s*arrow\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)\s*$", line)
                if not m:
                    raise ParseError("usage: arrow <name> : <src> -> <tgt>", lineno, col)
                name, s, t = m.groups()
                for v in (s, t):
                    if v not in vertices:
                        raise ParseError(f"unknown vertex {v}", lineno, _col(raw, v))
                if any(a[0] == name for a in arrows):
                    raise ParseError(f"arrow {name} declared twice", lineno, _col(raw, name))
                arrows.append((name, s, t))
            else:
                raise ParseError(f"unexpected '{head}' in quiver block", lineno, col)
        elif block == "relations":
            if head == "nilpotency":
                if len(toks) != 2:
                    raise ParseError("usage: nilpotency <L>", lineno, col)
                nilpotency = _int(toks[1], lineno, _col(raw, toks[1]), "nilpotency degree")
            elif head == "rel":
                body = line.split("rel", 1)[1]
                rel = _parse_relation(body, lineno, _col(raw, body.strip()[:1] or "rel"))
                names = {a[0] for a in arrows}
                for _, words in rel:
                    for w in words:
                        if w not in names:
                            raise ParseError(f"unknown arrow {w} in relation", lineno, _col(raw, w))
                relations.append(rel)
            else:
                raise ParseError(f"unexpected '{head}' in relations block", lineno, col)
        elif block == "module":
            if head == "dims":
                current.dims = tuple(_int(t, lineno, _col(raw, t), "dimension") for t in toks[1:])
                if len(current.dims) != len(vertices):
                    raise ParseError(f"dims has {len(current.dims)} entries, expected "
                                     f"{len(vertices)}", lineno, col)
            elif head == "matrix":
                m = re.match(r"\s*matrix\s+(\S+)\s*=\s*(.+)$", line)
                if not m:
                    raise ParseError("usage: matrix <arrow> = [[...], ...]", lineno, col)
                name, body = m.groups()
                if name not in {a[0] for a in arrows}:
                    raise ParseError(f"unknown arrow {name}", lineno, _col(raw, name))
                try:
                    rows = json.loads(body)
                except json.JSONDecodeError as exc:
                    raise ParseError(f"bad matrix literal: {exc.msg}", lineno,
                                     _col(raw, body) + exc.pos if _col(raw, body) else None) from None
                if not (isinstance(rows, list) and all(isinstance(r, list) for r in rows)
                        and all(isinstance(x, int) for r in rows for x in r)):
                    raise ParseError("matrix must be a list of integer rows", lineno,
                                     _col(raw, body))
                current.matrices[name] = rows
            else:
                raise ParseError(f"unexpected '{head}' in module block", lineno, col)
        elif block == "generator":
            if head == "summand" and len(toks) >= 2:
                generator.append(" ".join(toks[1:]).replace(" ", ""))
            else:
                raise ParseError("usage: summand <Name>", lineno, col)
    if block is not None:
        raise ParseError(f"unterminated '{block}' block", len(lines), None)
    if p is None:
        raise ParseError("missing 'field' line", 1, None)
    if not vertices:
        raise ParseError("missing quiver block", 1, None)
    if nilpotency is None:
        raise ParseError("missing 'nilpotency' in relations block", 1, None)
    if not generator:
        raise ParseError("missing generator block", 1, None)
    return AlgebraFile(p, vertices, arrows, nilpotency, relations, modules, generator, catalog)


def serialize(af):
    out = [f"field {af.p}", "quiver"]
    out += [f"  vertex {v}" for v in af.vertices]
    out += [f"  arrow {n} : {s} -> {t}" for n, s, t in af.arrows]
    out += ["end", "relations", f"  nilpotency {af.nilpotency}"]
    for rel in af.relations:
        out.append("  rel " + " + ".join(f"{c}*{' '.join(w)}" for c, w in rel))
    out.append("end")
    for m in af.modules:
        out += [f"module {m.name}", "  dims " + " ".join(str(d) for d in m.dims)]
        for a, rows in m.matrices.items():
            out.append(f"  matrix {a} = {json.dumps(rows)}")
        out.append("end")
    out.append("generator")
    out += [f"  summand {g}" for g in af.generator]
    out.append("end")
    if af.catalog is not None:
        kind, vals = af.catalog
        out.append(f"catalog {kind} " + " ".join(str(v) for v in vals))
    return "\n".join(out) + "\n"


# -- building -------------------------------------------------------------------------------

def build_algebra_from(af, p=None):
    p = af.p if p is None else la.check_prime(p)
    quiver = Quiver(af.vertices, af.arrows)
    rels = []
    for rel in af.relations:
        d = {}
        for c, words in rel:
            path = tuple(reversed(words))
            d[path] = (d.get(path, 0) + c) % p
        rels.append(d)
    try:
        return BoundAlgebra(quiver, af.nilpotency, rels, p)
    except ValueError as exc:
        raise ParseError(f"bad relations: {exc}") from None


def is_kronecker(alg):
    q = alg.quiver
    return (len(q.vertices) == 2 and len(q.arrows) == 2
            and all((a.source, a.target) == q.vertices for a in q.arrows))


def _jordan_nilpotent(n):
    m = la.zeros(n, n)
    for i in range(n - 1):
        m[i, i + 1] = 1
    return m


def kronecker_j(alg, n):
    """J_n: k^{n+1} => k^n with maps [I | 0] and [0 | I]."""
    a, b = (x.name for x in alg.quiver.arrows)
    eye = la.identity(n)
    first = np.concatenate([eye, la.zeros(n, 1)], axis=1)
    second = np.concatenate([la.zeros(n, 1), eye], axis=1)
    return Representation(alg, (n + 1, n), {a: first, b: second})


def kronecker_r(alg, p0, p1, n):
    """R_{(p0:p1),n}: k^n => k^n, a regular module at the point (p0:p1) of P^1."""
    p = alg.p
    p0, p1 = p0 % p, p1 % p
    if n < 1 or (p0 == 0 and p1 == 0):
        raise ValueError("R(p0:p1,n) needs n >= 1 and a point (p0:p1) of P^1")
    a, b = (x.name for x in alg.quiver.arrows)
    nil = _jordan_nilpotent(n)
    if p0:
        lam = (p1 * pow(p0, -1, p)) % p
        maps = {a: la.identity(n), b: (lam * la.identity(n) + nil) % p}
    else:
        maps = {a: nil, b: la.identity(n)}
    return Representation(alg, (n, n), maps)


class Workspace:
    """A parsed file turned into an algebra, named modules, a catalog and an FContext."""

    def __init__(self, af, p=None, dim_bound=None, cap=DEFAULT_CAP, source=None):
        self.file = af
        self.source = source
        self.cap = cap
        self.alg = build_algebra_from(af, p)
        self.p = self.alg.p
        self.named = {}
        for m in af.modules:
            self.named[m.name] = self._module_from_block(m)
        self.dim_bound = tuple(dim_bound) if dim_bound else None
        self._catalog = None
        self._ctx = None

    def _module_from_block(self, block):
        q = self.alg.quiver
        maps = {}
        for a in q.arrows:
            shape = (block.dims[q.index(a.target)], block.dims[q.index(a.source)])
            if a.name in block.matrices:
                rows = block.matrices[a.name]
                arr = np.array(rows, dtype=object).reshape(-1) if rows else np.zeros(0, dtype=object)
                if arr.size != shape[0] * shape[1] or (shape[0] and len(rows) != shape[0]):
                    raise ParseError(f"matrix {a.name} of module {block.name} should be "
                                     f"{shape[0]}x{shape[1]}", block.line)
                maps[a.name] = la.mat(arr, self.p, shape)
        try:
            return Representation(self.alg, block.dims, maps)
        except ValueError as exc:
            raise ParseError(f"module {block.name}: {exc}", block.line) from None

    # -- references ---------------------------------------------------------------------
    def resolve(self, expr):
        expr = expr.replace(" ", "")
        if expr in ("", "0"):
            return self.alg.zero_module()
        parts = [t for t in expr.split("+")]
        mods = []
        for part in parts:
            m = re.match(r"(\d+)\*(.+)$", part)
            count, name = (int(m.group(1)), m.group(2)) if m else (1, part)
            mods.extend([self._resolve_one(name)] * count)
        if len(mods) == 1:
            return mods[0]
        return direct_sum(mods, self.alg).module

    def _resolve_one(self, name):
        if name in self.named:
            return self.named[name]
        if self._catalog is not None and name in self._catalog.names:
            return self._catalog[self._catalog.names.index(name)]
        m = _BUILTIN.match(name)
        if m:
            if m.group("v") is not None and m.group("v") in self.alg.quiver.vertices:
                kind = {"P": self.alg.projective, "I": self.alg.injective,
                        "S": self.alg.simple}[name[0]]
                return kind(m.group("v"))
            if m.group("n") is not None or m.group("rn") is not None:
                if not is_kronecker(self.alg):
                    raise KeyError(f"{name} is only defined on the Kronecker quiver")
                if m.group("n") is not None:
                    return kronecker_j(self.alg, int(m.group("n")))
                return kronecker_r(self.alg, int(m.group("p0")), int(m.group("p1")),
                                   int(m.group("rn")))
        raise KeyError(f"unknown module name {name!r}")

    # -- catalog and context ---------------------------------------------------------------
    @property
    def catalog(self):
        if self._catalog is None:
            self._catalog = self._build_catalog()
        return self._catalog

    def _default_bound(self):
        vs = self.alg.quiver.vertices
        dims = [self.alg.projective(v).dims for v in vs] + [self.alg.injective(v).dims for v in vs]
        return tuple(max(d[k] for d in dims) for k in range(len(vs)))

    def _build_catalog(self):
        spec = self.file.catalog
        if spec is not None and spec[0] == "explicit" and self.dim_bound is None:
            entries, names = [], []
            for name in spec[1]:
                mod = self._resolve_one(name)
                if not is_indecomposable(mod):
                    raise ParseError(f"catalog entry {name} is not indecomposable")
                if any(iso_indecomposable(e, mod) is not None for e in entries):
                    raise ParseError(f"catalog entry {name} repeats an earlier entry")
                entries.append(mod)
                names.append(name)
            cat = Catalog(self.alg, entries, names, provenance="user-supplied")
        else:
            if self.dim_bound is not None:
                bound = self.dim_bound
            elif spec is not None and spec[0] == "bound":
                bound = spec[1]
            else:
                bound = self._default_bound()
            if len(bound) != len(self.alg.quiver.vertices):
                raise ParseError(f"catalog bound has {len(bound)} entries, expected "
                                 f"{len(self.alg.quiver.vertices)}")
            cat = enumerate_indecomposables(self.alg, bound, cap=self.cap)
            name_standard(self.alg, cat)
            standard = set(cat.names) - {f"M{k}" for k in range(len(cat))}
            labelled = dict(self.named)
            for g in self.file.generator:
                if "+" not in g and g not in labelled:
                    labelled[g] = self._resolve_one(g)
            for name, mod in labelled.items():
                k = cat.find(mod)
                if k is not None and cat.names[k] not in standard:
                    cat.names[k] = name
            cat.provenance = "enumerated"
        ok, reason = certify_complete(cat)
        cat.complete = ok
        cat.certificate = reason or "closed under τ, τ⁻¹ and almost split sequences"
        return cat

    @property
    def ctx(self):
        if self._ctx is None:
            from .relative import FContext
            mods = [self.resolve(g) for g in self.file.generator]
            self._ctx = FContext(self.alg, mods, names=list(self.file.generator),
                                 catalog=self.catalog, cap=self.cap)
        return self._ctx

    def name_of(self, module):
        k = self.catalog.find(module)
        return None if k is None else self.catalog.names[k]

    def names(self, indices):
        return [self.catalog.names[k] for k in indices]


def load(path, **kwargs):
    path = Path(path)
    if not path.exists() and str(path).startswith("@"):
        path = FIXTURE_DIR / f"{str(path)[1:]}.bqa"
    text = path.read_text()
    return Workspace(parse(text), source=str(path), **kwargs)


def fixture_path(name):
    return FIXTURE_DIR / f"{name}.bqa"
