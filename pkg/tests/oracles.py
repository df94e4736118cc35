"""Independent reference implementations used to cross-check the library.

Everything in this module is computed from the raw definitions with a
different algorithm than the package uses: exhaustive set enumeration
instead of echelon forms, brute force over all subspaces instead of
structured searches, and explicit eigenvector chains instead of solver
output.  Agreement between the two is then meaningful evidence, not a
tautology.  Finite-field vectors travel as tuples of plain Python ints
modulo p so no package arithmetic is involved on the oracle side.
"""

from __future__ import annotations

import functools
import itertools

from tdpairs import Matrix


# ---- GF(p) linear algebra on int tuples ------------------------------------


def int_mat_apply(p, rows, v):
    n = len(rows)
    return tuple(sum(rows[i][j] * v[j] for j in range(len(v))) % p for i in range(n))


def int_span(p, vectors, n):
    """The set of all GF(p)-linear combinations, as int tuples."""
    span = {(0,) * n}
    for v in vectors:
        grown = set(span)
        for c in range(p):
            shift = tuple((c * x) % p for x in v)
            for w in span:
                grown.add(tuple((a + b) % p for a, b in zip(w, shift)))
        span = grown
    return span


@functools.lru_cache(maxsize=None)
def all_subspaces(p, n):
    """Every subspace of GF(p)^n, each as a frozenset of int tuples.

    Brute force: spans of all subsets of up to n nonzero vectors.  Only
    meant for tiny spaces (p <= 3, n <= 3).  Cached: the answer depends
    only on (p, n)."""
    nonzero = [v for v in itertools.product(range(p), repeat=n) if any(v)]
    out = {frozenset({(0,) * n})}
    for k in range(1, n + 1):
        for combo in itertools.combinations(nonzero, k):
            out.add(frozenset(int_span(p, combo, n)))
    return frozenset(out)


def brute_common_invariant(p, a_rows, astar_rows):
    """A proper nonzero subspace invariant under both int matrices, or
    None, found by checking every subspace of the space."""
    n = len(a_rows)
    full = p**n
    for s in sorted(all_subspaces(p, n), key=len):
        if len(s) == 1 or len(s) == full:
            continue
        if all(
            int_mat_apply(p, a_rows, v) in s and int_mat_apply(p, astar_rows, v) in s
            for v in s
        ):
            return s
    return None


def _int_parallel(p, x, y):
    """Whether int tuples x, y are GF(p)-proportional with y nonzero."""
    lead = next(i for i, yi in enumerate(y) if yi % p)
    c = (x[lead] * pow(y[lead], p - 2, p)) % p
    return all((xi - c * yi) % p == 0 for xi, yi in zip(x, y))


def brute_common_invariant_dim3(p, a_rows, astar_rows):
    """Like brute_common_invariant but specialised to 3-dimensional
    spaces over any small prime: every proper nonzero subspace is a line
    or a plane, so enumerate those projectively (O(p^2) cases) instead
    of spanning vector subsets.  A line span{v} is invariant iff both
    images of v are parallel to v; a plane ker(w) is invariant under M
    iff the row vector w.M is parallel to w."""
    lines = [
        (0,) * lead + (1,) + tail
        for lead in range(3)
        for tail in itertools.product(range(p), repeat=2 - lead)
    ]
    for v in lines:
        av = int_mat_apply(p, a_rows, v)
        sv = int_mat_apply(p, astar_rows, v)
        if (not any(av) or _int_parallel(p, av, v)) and (
            not any(sv) or _int_parallel(p, sv, v)
        ):
            return ("line", v)
    for w in lines:
        wa = tuple(sum(w[i] * a_rows[i][j] for i in range(3)) % p for j in range(3))
        ws = tuple(sum(w[i] * astar_rows[i][j] for i in range(3)) % p for j in range(3))
        if (not any(wa) or _int_parallel(p, wa, w)) and (
            not any(ws) or _int_parallel(p, ws, w)
        ):
            return ("plane", w)
    return None


def matrix_to_int_rows(m):
    return [[x.v for x in row] for row in m.rows]


def subspace_vector_set(s):
    """All vectors of a library Subspace over GF(p), as int tuples."""
    p = s.field.p
    return frozenset(
        int_span(p, [tuple(x.v for x in b) for b in s.basis], s.ambient_dim)
    )


# ---- rank over Q by naive elimination (different pivoting style) -----------


def ref_rank_q(rows):
    """Rank of a rational matrix by last-to-first column elimination."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in reversed(range(ncols)):
        pivot_row = None
        for r in range(rank, len(m)):
            if m[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        m[rank], m[pivot_row] = m[pivot_row], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                c = m[r][col] / m[rank][col]
                m[r] = [x - c * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


# ---- split-sequence oracle --------------------------------------------------


def _chain_coefficient(field, x, y):
    """The scalar c with x = c*y for vectors with y != 0; asserts exactness."""
    c = None
    for xi, yi in zip(x, y):
        if yi != field.zero:
            c = xi / yi
            break
    assert c is not None, "reference vector is zero"
    assert all(xi == c * yi for xi, yi in zip(x, y)), "vectors are not proportional"
    return c


def oracle_split_sequences(pair):
    """First and second split sequences of a Leonard pair, read directly
    off eigenvector chains.

    Starting from a basis vector u0 of the one-dimensional eigenspace of
    Astar for thetastar_0:

      u_i = (A - theta_{i-1} I) u_{i-1}   satisfies
      (Astar - thetastar_i I) u_i = varphi_i * u_{i-1},

    and with the A-eigenvalue order reversed,

      w_i = (A - theta_{d-i+1} I) w_{i-1}  satisfies
      (Astar - thetastar_i I) w_i = phi_i * w_{i-1}.

    Both proportionality constants are extracted and verified exactly.
    """
    field = pair.field
    d = pair.diameter
    n = pair.dim
    eye = Matrix.identity(field, n)
    u0 = pair.vstar(0).basis[0]

    varphi = []
    u_prev = u0
    for i in range(1, d + 1):
        u_i = (pair.a - eye.scale(pair.theta(i - 1))).apply(u_prev)
        lowered = (pair.astar - eye.scale(pair.thetastar(i))).apply(u_i)
        varphi.append(_chain_coefficient(field, lowered, u_prev))
        u_prev = u_i

    phi = []
    w_prev = u0
    for i in range(1, d + 1):
        w_i = (pair.a - eye.scale(pair.theta(d - i + 1))).apply(w_prev)
        lowered = (pair.astar - eye.scale(pair.thetastar(i))).apply(w_i)
        phi.append(_chain_coefficient(field, lowered, w_prev))
        w_prev = w_i

    return tuple(varphi), tuple(phi)


# ---- shape-(1,2,1) fixtures from products of diameter-1 pairs ---------------


def _kron(field, x, y):
    """Kronecker product of two library matrices over the same field."""
    rows = []
    for xr in x.rows:
        for yr in y.rows:
            rows.append([a * b for a in xr for b in yr])
    return Matrix(field, rows)


def _split_d1(field, t0, t1, ts0, ts1, varphi1):
    a = Matrix(field, [[t0, 0], [1, t1]])
    astar = Matrix(field, [[ts0, varphi1], [0, ts1]])
    return a, astar


def tensor_fixture(field, theta, mu, varphis):
    """A 4-dimensional candidate built as A1 (x) I + I (x) A2 from two
    diameter-1 split-form pairs with A-eigenvalues theta and mu and
    dual eigenvalues (0, 1) on both factors.

    When theta_0 - theta_1 = mu_0 - mu_1 the sums theta_i + mu_j take
    exactly three values with multiplicities (1, 2, 1), so a valid
    result is a tridiagonal pair of that shape (and never Leonard).
    """
    t = [field.scalar(x) for x in theta]
    m = [field.scalar(x) for x in mu]
    v1 = field.scalar(varphis[0])
    v2 = field.scalar(varphis[1])
    zero, one = field.zero, field.one
    a1, astar1 = _split_d1(field, t[0], t[1], zero, one, v1)
    a2, astar2 = _split_d1(field, m[0], m[1], zero, one, v2)
    eye = Matrix.identity(field, 2)
    a = _kron(field, a1, eye) + _kron(field, eye, a2)
    astar = _kron(field, astar1, eye) + _kron(field, eye, astar2)
    return a, astar


# canonical parameter choices known to produce valid shape-(1,2,1) pairs
TENSOR_PARAMS = {
    "Q": ((0, 1), (1, 2), (1, 2)),
    "gf5": ((0, 1), (0, 1), (1, 2)),
    "gf7": ((0, 1), (0, 1), (1, 2)),
}
