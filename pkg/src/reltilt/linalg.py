"""Exact dense linear algebra over a prime field F_p.

Matrices are plain 2-D numpy arrays of dtype int64 with entries in [0, p).
Column vectors are 1-D arrays.  Every function takes the prime explicitly so
that values stay plain arrays and can be shared freely.
"""

import numpy as np

_INT64_LIMIT = 2**63 - 1


def is_prime(p):
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_prime(p):
    if not (2 <= p <= 2**31) or not is_prime(p):
        raise ValueError(f"field characteristic must be a prime in [2, 2^31], got {p}")
    return p


def mat(rows, p, shape=None):
    """Build a reduced int64 matrix from nested lists (or an array)."""
    a = np.array(rows, dtype=object)
    if shape is not None:
        a = a.reshape(shape)
    return (a % p).astype(np.int64)


def zeros(r, c):
    return np.zeros((r, c), dtype=np.int64)


def identity(n):
    return np.eye(n, dtype=np.int64)


def mul(a, b, p):
    """Matrix product mod p without int64 overflow."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    inner = a.shape[-1]
    if inner == 0:
        shape = a.shape[:-1] + b.shape[1:]
        return np.zeros(shape, dtype=np.int64)
    step = max(1, _INT64_LIMIT // ((p - 1) ** 2 + 1))
    if inner <= step:
        return np.mod(a @ b, p)
    out = None
    for k in range(0, inner, step):
        part = np.mod(a[..., k:k + step] @ b[k:k + step], p)
        out = part if out is None else np.mod(out + part, p)
    return out


def mul_chain(mats, p):
    out = mats[0]
    for m in mats[1:]:
        out = mul(out, m, p)
    return out


def power(a, e, p):
    n = a.shape[0]
    result = identity(n)
    base = np.asarray(a, dtype=np.int64) % p
    while e:
        if e & 1:
            result = mul(result, base, p)
        e >>= 1
        if e:
            base = mul(base, base, p)
    return result


def rref(a, p):
    """Reduced row echelon form.  Returns (R, pivot_columns)."""
    r = np.array(a, dtype=np.int64) % p
    rows, cols = r.shape
    pivots = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + nz[0]
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        inv = pow(int(r[row, col]), -1, p)
        r[row] = (r[row] * inv) % p
        column = r[:, col].copy()
        column[row] = 0
        hit = np.nonzero(column)[0]
        if hit.size:
            r[hit] = (r[hit] - np.outer(column[hit], r[row]) % p) % p
        pivots.append(col)
        row += 1
    return r, pivots


def rank(a, p):
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def kernel_basis(a, p):
    """Basis of {v : a v = 0} as the columns of an (n x k) matrix.

    One vector per free column of the reduced echelon form, in column order,
    with that free variable set to 1 and the other free variables 0.
    """
    a = np.asarray(a, dtype=np.int64)
    rows, cols = a.shape
    if rows == 0:
        return identity(cols)
    r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    k = zeros(cols, len(free))
    for j, f in enumerate(free):
        k[f, j] = 1
        for i, pc in enumerate(pivots):
            k[pc, j] = (-r[i, f]) % p
    return k


def left_kernel_basis(a, p):
    """Rows y with y a = 0, stacked as a (k x rows) matrix."""
    return kernel_basis(np.asarray(a).T, p).T


def solve(a, b, p):
    """Some x with a x = b, free variables set to 0; None if inconsistent."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    rows, cols = a.shape
    if b.shape[0] != rows:
        raise ValueError(f"right-hand side has length {b.shape[0]}, expected {rows}")
    if rows == 0:
        return np.zeros(cols, dtype=np.int64)
    aug = np.concatenate([a, b.reshape(-1, 1)], axis=1)
    r, pivots = rref(aug, p)
    if pivots and pivots[-1] == cols:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = r[i, cols]
    return x


def solve_many(a, b, p):
    """Solve a X = b column by column; None if any column is inconsistent."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    rows, cols = a.shape
    if b.shape[0] != rows:
        raise ValueError("dimension mismatch")
    if rows == 0:
        return zeros(cols, b.shape[1])
    aug = np.concatenate([a, b], axis=1)
    r, pivots = rref(aug, p)
    if any(pc >= cols for pc in pivots):
        return None
    x = zeros(cols, b.shape[1])
    for i, pc in enumerate(pivots):
        x[pc] = r[i, cols:]
    return x


def invert(a, p):
    a = np.asarray(a, dtype=np.int64)
    n, m = a.shape
    if n != m:
        raise ValueError(f"cannot invert a non-square {n}x{m} matrix")
    if n == 0:
        return zeros(0, 0)
    aug = np.concatenate([a % p, identity(n)], axis=1)
    r, pivots = rref(aug, p)
    if len(pivots) < n or pivots[n - 1] != n - 1:
        return None
    return r[:, n:].copy()


def column_space(a, p):
    """Basis of the column space as the pivot columns of a."""
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return zeros(a.shape[0], 0)
    _, pivots = rref(a, p)
    return a[:, pivots] % p


def row_basis(a, p):
    """Nonzero rows of the reduced echelon form (canonical row-space basis)."""
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return zeros(0, a.shape[1])
    r, pivots = rref(a, p)
    return r[:len(pivots)]


def complement_columns(sub, n, p):
    """Standard basis vectors completing the columns of sub to a basis of F_p^n.

    Returns the indices of the chosen coordinate vectors (greedy, in order).
    """
    sub = _as_columns(sub, n)
    aug = np.concatenate([sub, identity(n)], axis=1)
    _, pivots = rref(aug, p)
    k = sub.shape[1]
    return [c - k for c in pivots if c >= k]


def _as_columns(sub, n):
    sub = np.asarray(sub, dtype=np.int64)
    if n == 0:
        return zeros(0, sub.shape[1] if sub.ndim == 2 else 0)
    return sub.reshape(n, -1)


def in_span(basis_cols, v, p):
    return solve(basis_cols, v, p) is not None


def quotient_coordinates(sub, n, p):
    """A pair (Q, S) for the quotient of F_p^n by the column span of sub.

    Q is (c x n) with kernel exactly span(sub) and S is (n x c) with Q S = I,
    where S picks coordinate vectors complementary to sub.
    """
    sub = _as_columns(sub, n)
    comp = complement_columns(sub, n, p)
    basis = np.concatenate([column_space(sub, p), identity(n)[:, comp]], axis=1)
    inv = invert(basis, p)
    k = basis.shape[1] - len(comp)
    q = inv[k:, :]
    s = identity(n)[:, comp]
    return q, s


def poly_mul(f, g, p):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _trim(out)


def _trim(f):
    while len(f) > 1 and f[-1] == 0:
        f = f[:-1]
    return f


def poly_divmod(f, g, p):
    f = list(f)
    g = _trim(list(g))
    inv = pow(g[-1], -1, p)
    q = [0] * max(1, len(f) - len(g) + 1)
    while len(f) >= len(g) and any(f):
        c = (f[-1] * inv) % p
        shift = len(f) - len(g)
        q[shift] = c
        for i, b in enumerate(g):
            f[shift + i] = (f[shift + i] - c * b) % p
        f = _trim(f[:-1]) if len(f) > 1 else [0]
        if len(f) < len(g):
            break
    return _trim(q), _trim(f) if f else [0]


def poly_gcd(f, g, p):
    f, g = _trim(list(f)), _trim(list(g))
    while any(g):
        f, g = g, poly_divmod(f, g, p)[1]
    inv = pow(f[-1], -1, p)
    return [(c * inv) % p for c in f]


def poly_powmod(base, e, mod, p):
    result = [1]
    base = poly_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = poly_divmod(poly_mul(result, base, p), mod, p)[1]
        e >>= 1
        if e:
            base = poly_divmod(poly_mul(base, base, p), mod, p)[1]
    return result


def poly_roots(f, p, rng=None):
    """Distinct roots in F_p of a polynomial (coefficients low degree first)."""
    f = _trim([c % p for c in f])
    if len(f) == 1:
        return []
    if p <= 4096:
        return [c for c in range(p) if _eval(f, c, p) == 0]
    # restrict to the product of the linear factors, then split
    xp = poly_powmod([0, 1], p, f, p)
    g = poly_gcd(f, _trim(_sub(xp, [0, 1], p)), p)
    rng = rng or np.random.default_rng(0)
    return sorted(_split_linear(g, p, rng))


def _eval(f, x, p):
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def _sub(f, g, p):
    n = max(len(f), len(g))
    f = list(f) + [0] * (n - len(f))
    g = list(g) + [0] * (n - len(g))
    return [(a - b) % p for a, b in zip(f, g)]


def _split_linear(g, p, rng):
    deg = len(g) - 1
    if deg == 0:
        return []
    if deg == 1:
        return [(-g[0] * pow(g[1], -1, p)) % p]
    if p == 2:
        return [c for c in range(2) if _eval(g, c, 2) == 0]
    while True:
        a = int(rng.integers(0, p))
        h = poly_powmod([a, 1], (p - 1) // 2, g, p)
        d = poly_gcd(g, _sub(h, [1], p), p)
        if 0 < len(d) - 1 < deg:
            q = poly_divmod(g, d, p)[0]
            return _split_linear(d, p, rng) + _split_linear(q, p, rng)
