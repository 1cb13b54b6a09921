"""Sparse integer matrices and Smith normal form.

All arithmetic is exact (Python big integers).  The Smith normal form is
the workhorse behind every homology computation in the package: kernels,
cokernels, torsion factors and linear solves all reduce to it.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Optional


class IntMatrix:
    """Immutable sparse matrix over the integers.

    Entries are stored as a dict ``(row, col) -> value`` with no explicit
    zeros.  Construction validates bounds and drops zeros.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries=None):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix dimensions")
        self.rows = rows
        self.cols = cols
        clean = {}
        if entries:
            for (i, j), v in (entries.items() if isinstance(entries, dict) else entries):
                if not (0 <= i < rows and 0 <= j < cols):
                    raise ValueError(f"entry ({i},{j}) out of bounds for {rows}x{cols}")
                v = int(v)
                if v:
                    clean[(i, j)] = v
        self.entries = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def from_rows(cls, data: Iterable[Iterable[int]]) -> "IntMatrix":
        data = [list(r) for r in data]
        rows = len(data)
        cols = len(data[0]) if rows else 0
        ent = {}
        for i, r in enumerate(data):
            if len(r) != cols:
                raise ValueError("ragged rows")
            for j, v in enumerate(r):
                if v:
                    ent[(i, j)] = int(v)
        return cls(rows, cols, ent)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols)

    @classmethod
    def diagonal(cls, diag: Iterable[int], rows: int = None, cols: int = None) -> "IntMatrix":
        diag = list(diag)
        n = len(diag)
        rows = n if rows is None else rows
        cols = n if cols is None else cols
        return cls(rows, cols, {(i, i): d for i, d in enumerate(diag) if d})

    @classmethod
    def from_columns(cls, cols_data: Iterable[dict], rows: int) -> "IntMatrix":
        """Build from an iterable of sparse columns (dicts row -> value)."""
        cols_data = list(cols_data)
        ent = {}
        for j, col in enumerate(cols_data):
            for i, v in col.items():
                if v:
                    ent[(i, j)] = v
        return cls(rows, len(cols_data), ent)

    # -- basic access --------------------------------------------------

    def __getitem__(self, ij):
        return self.entries.get(ij, 0)

    def __eq__(self, other):
        return (isinstance(other, IntMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(sorted(self.entries.items()))))

    def nnz(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def to_dense(self):
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def column(self, j: int) -> dict:
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def row(self, i: int) -> dict:
        return {j: v for (ii, j), v in self.entries.items() if ii == i}

    def __repr__(self):
        if self.rows * self.cols <= 64:
            return f"IntMatrix({self.to_dense()})"
        return f"IntMatrix({self.rows}x{self.cols}, nnz={self.nnz()})"

    # -- arithmetic ----------------------------------------------------

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         {(j, i): v for (i, j), v in self.entries.items()})

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols,
                         {ij: -v for ij, v in self.entries.items()})

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in addition")
        ent = dict(self.entries)
        for ij, v in other.entries.items():
            w = ent.get(ij, 0) + v
            if w:
                ent[ij] = w
            else:
                ent.pop(ij, None)
        return IntMatrix(self.rows, self.cols, ent)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntMatrix(self.rows, self.cols,
                             {ij: v * other for ij, v in self.entries.items()})
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        by_row = {}
        for (i, k), v in self.entries.items():
            by_row.setdefault(i, {})[k] = v
        by_col_of_other = {}
        for (k, j), v in other.entries.items():
            by_col_of_other.setdefault(k, {})[j] = v
        ent = {}
        for i, rowv in by_row.items():
            acc = {}
            for k, v in rowv.items():
                rk = by_col_of_other.get(k)
                if not rk:
                    continue
                for j, w in rk.items():
                    acc[j] = acc.get(j, 0) + v * w
            for j, s in acc.items():
                if s:
                    ent[(i, j)] = s
        return IntMatrix(self.rows, other.cols, ent)

    __rmul__ = __mul__

    def apply(self, vec: dict) -> dict:
        """Apply to a sparse column vector (dict col-index -> value)."""
        out = {}
        for (i, j), v in self.entries.items():
            x = vec.get(j)
            if x:
                out[i] = out.get(i, 0) + v * x
        return {i: v for i, v in out.items() if v}

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch in hstack")
        ent = dict(self.entries)
        for (i, j), v in other.entries.items():
            ent[(i, j + self.cols)] = v
        return IntMatrix(self.rows, self.cols + other.cols, ent)

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise ValueError("col mismatch in vstack")
        ent = dict(self.entries)
        for (i, j), v in other.entries.items():
            ent[(i + self.rows, j)] = v
        return IntMatrix(self.rows + other.rows, self.cols, ent)

    def submatrix(self, row_idx, col_idx) -> "IntMatrix":
        rmap = {r: i for i, r in enumerate(row_idx)}
        cmap = {c: j for j, c in enumerate(col_idx)}
        ent = {}
        for (i, j), v in self.entries.items():
            if i in rmap and j in cmap:
                ent[(rmap[i], cmap[j])] = v
        return IntMatrix(len(rmap), len(cmap), ent)

    def max_abs(self) -> int:
        return max((abs(v) for v in self.entries.values()), default=0)

    def det(self) -> int:
        """Determinant by fraction-free Bareiss elimination (square only)."""
        if self.rows != self.cols:
            raise ValueError("determinant of non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [row[:] for row in self.to_dense()]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def serialize_triplets(self) -> str:
        """Text triplet format: one ``row col value`` per line."""
        lines = [f"{self.rows} {self.cols}"]
        for (i, j) in sorted(self.entries):
            lines.append(f"{i} {j} {self.entries[(i, j)]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse_triplets(cls, text: str) -> "IntMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not lines:
            raise ValueError("empty matrix file")
        r, c = map(int, lines[0].split())
        ent = {}
        for ln in lines[1:]:
            i, j, v = ln.split()
            ent[(int(i), int(j))] = int(v)
        return cls(r, c, ent)


@dataclass(frozen=True)
class SmithDecomposition:
    """U*A*V is diagonal with the invariant factors d1 | d2 | ... | dr."""
    source: IntMatrix
    diagonal: tuple
    U: Optional[IntMatrix]
    V: Optional[IntMatrix]
    peak_abs: int = 0

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    @property
    def peak_bits(self) -> int:
        return self.peak_abs.bit_length()


class _Work:
    """Mutable row/column-indexed sparse matrix used during reduction."""

    __slots__ = ("row", "colind", "peak")

    def __init__(self, m: IntMatrix):
        self.row = {}
        self.colind = {}
        for (i, j), v in m.entries.items():
            self.row.setdefault(i, {})[j] = v
            self.colind.setdefault(j, set()).add(i)
        self.peak = m.max_abs()

    def set(self, i, j, v):
        if v:
            self.row.setdefault(i, {})[j] = v
            self.colind.setdefault(j, set()).add(i)
            a = abs(v)
            if a > self.peak:
                self.peak = a
        else:
            r = self.row.get(i)
            if r and j in r:
                del r[j]
                if not r:
                    del self.row[i]
                s = self.colind[j]
                s.discard(i)
                if not s:
                    del self.colind[j]

    def get(self, i, j):
        return self.row.get(i, {}).get(j, 0)

    def add_multiple_of_row(self, target, source, factor):
        if not factor:
            return
        src = self.row.get(source, {})
        for j, v in list(src.items()):
            self.set(target, j, self.get(target, j) + factor * v)

    def add_multiple_of_col(self, target, source, factor):
        if not factor:
            return
        for i in list(self.colind.get(source, ())):
            self.set(i, target, self.get(i, target) + factor * self.get(i, source))

    def combine_rows(self, i1, i2, a, b, c, d):
        """(row i1, row i2) <- (a*r1 + b*r2, c*r1 + d*r2); ad-bc = +-1."""
        cols = set(self.row.get(i1, {})) | set(self.row.get(i2, {}))
        for j in cols:
            x, y = self.get(i1, j), self.get(i2, j)
            self.set(i1, j, a * x + b * y)
            self.set(i2, j, c * x + d * y)

    def combine_cols(self, j1, j2, a, b, c, d):
        rows = set(self.colind.get(j1, ())) | set(self.colind.get(j2, ()))
        for i in rows:
            x, y = self.get(i, j1), self.get(i, j2)
            self.set(i, j1, a * x + b * y)
            self.set(i, j2, c * x + d * y)


def _xgcd(a, b):
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def smith(A: IntMatrix, need_U: bool = True, need_V: bool = True) -> SmithDecomposition:
    """Smith normal form with unimodular transforms.

    Pivots are chosen to minimise ``(|entry| != 1, |entry|, fill-in)``,
    which keeps coefficient growth in check on the sparse boundary
    matrices this package produces.
    """
    w = _Work(A)
    U = _Work(IntMatrix.identity(A.rows)) if need_U else None
    V = _Work(IntMatrix.identity(A.cols)) if need_V else None
    diag = []
    live_rows = set(w.row.keys())

    def pivot():
        best = None
        best_key = None
        for i in live_rows:
            r = w.row.get(i)
            if not r:
                continue
            rl = len(r)
            for j, v in r.items():
                cl = len(w.colind[j])
                key = (abs(v) != 1, abs(v), (rl - 1) * (cl - 1))
                if best_key is None or key < best_key:
                    best_key = key
                    best = (i, j)
                    if key[:2] == (False, 1) and key[2] == 0:
                        return best
        return best

    while True:
        pv = pivot()
        if pv is None:
            break
        pi, pj = pv
        # clear row and column of the pivot; gcd steps may refill, so loop
        while True:
            col_others = [i for i in w.colind.get(pj, ()) if i != pi]
            row_others = [j for j in w.row.get(pi, {}) if j != pj]
            if not col_others and not row_others:
                break
            for i in col_others:
                a = w.get(pi, pj)
                b = w.get(i, pj)
                if b == 0:
                    continue
                if b % a == 0:
                    q = b // a
                    w.add_multiple_of_row(i, pi, -q)
                    if U is not None:
                        U.add_multiple_of_row(i, pi, -q)
                else:
                    g, s, t = _xgcd(a, b)
                    # unimodular: [[s, t], [-b/g, a/g]]
                    w.combine_rows(pi, i, s, t, -(b // g), a // g)
                    if U is not None:
                        U.combine_rows(pi, i, s, t, -(b // g), a // g)
            for j in [j for j in w.row.get(pi, {}) if j != pj]:
                a = w.get(pi, pj)
                b = w.get(pi, j)
                if b == 0:
                    continue
                if b % a == 0:
                    q = b // a
                    w.add_multiple_of_col(j, pj, -q)
                    if V is not None:
                        V.add_multiple_of_col(j, pj, -q)
                else:
                    g, s, t = _xgcd(a, b)
                    w.combine_cols(pj, j, s, t, -(b // g), a // g)
                    if V is not None:
                        V.combine_cols(pj, j, s, t, -(b // g), a // g)
        d = w.get(pi, pj)
        if d < 0:
            # flip sign via the row transform
            w.set(pi, pj, -d)
            if U is not None:
                U.add_multiple_of_row(pi, pi, -2)
            d = -d
        diag.append((d, pi, pj))
        live_rows.discard(pi)
        w.set(pi, pj, d)
        # remove pivot from further consideration
        del w.row[pi]
        w.colind[pj].discard(pi)
        if not w.colind[pj]:
            del w.colind[pj]

    # assemble: reorder pivots to the leading diagonal positions
    r = len(diag)
    drows = [pi for _, pi, _ in diag]
    dcols = [pj for _, _, pj in diag]
    other_rows = [i for i in range(A.rows) if i not in set(drows)]
    other_cols = [j for j in range(A.cols) if j not in set(dcols)]
    row_perm = drows + other_rows   # new row k = old row row_perm[k]
    col_perm = dcols + other_cols
    ds = [d for d, _, _ in diag]

    # Divisibility chain: whenever d_k does not divide d_{k+1}, redo the
    # 2x2 block diag(a, b) -> diag(gcd, lcm) with explicit unimodular ops
    # in original coordinates so U and V stay exact.
    def fix_pair(k, l):
        a, b = w.get(drows[k], dcols[k]), w.get(drows[l], dcols[l])
        # row_k += row_l gives the block [[a, b], [0, b]]
        w.add_multiple_of_row(drows[k], drows[l], 1)
        if U is not None:
            U.add_multiple_of_row(drows[k], drows[l], 1)
        g, s, t = _xgcd(a, b)
        # column op (c_k, c_l) <- (s*c_k + t*c_l, -(b/g)*c_k + (a/g)*c_l)
        w.combine_cols(dcols[k], dcols[l], s, t, -(b // g), a // g)
        if V is not None:
            V.combine_cols(dcols[k], dcols[l], s, t, -(b // g), a // g)
        # block is now [[g, 0], [t*b, a*b/g]]; clear the (l, k) slot
        x = w.get(drows[l], dcols[k])
        q = x // g
        w.add_multiple_of_row(drows[l], drows[k], -q)
        if U is not None:
            U.add_multiple_of_row(drows[l], drows[k], -q)
        # signs
        for idx in (k, l):
            v = w.get(drows[idx], dcols[idx])
            if v < 0:
                for jj in list(w.row.get(drows[idx], {})):
                    w.set(drows[idx], jj, -w.get(drows[idx], jj))
                if U is not None:
                    for jj in list(U.row.get(drows[idx], {})):
                        U.set(drows[idx], jj, -U.get(drows[idx], jj))

    # restore pivot entries into w for chain fixing
    for d, pi, pj in diag:
        w.row.setdefault(pi, {})[pj] = d
        w.colind.setdefault(pj, set()).add(pi)

    changed = True
    while changed:
        changed = False
        for k in range(r - 1):
            a = w.get(drows[k], dcols[k])
            b = w.get(drows[k + 1], dcols[k + 1])
            if a and b % a != 0:
                fix_pair(k, k + 1)
                changed = True

    ds = [w.get(drows[k], dcols[k]) for k in range(r)]

    def work_to_matrix(wk, rows, cols, row_order=None, col_order=None):
        ent = {}
        rmap = {old: new for new, old in enumerate(row_order)} if row_order else None
        cmap = {old: new for new, old in enumerate(col_order)} if col_order else None
        for i, rv in wk.row.items():
            for j, v in rv.items():
                ii = rmap[i] if rmap else i
                jj = cmap[j] if cmap else j
                ent[(ii, jj)] = v
        return IntMatrix(rows, cols, ent)

    Um = work_to_matrix(U, A.rows, A.rows, row_order=row_perm) if need_U else None
    Vm = work_to_matrix(V, A.cols, A.cols, col_order=col_perm) if need_V else None
    peak = max(w.peak, U.peak if U else 0, V.peak if V else 0)
    return SmithDecomposition(A, tuple(ds), Um, Vm, peak_abs=peak)


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Basis of the integer kernel lattice, as columns.

    The lattice is saturated: x with m*x in the kernel lies in it.
    """
    if A.cols == 0:
        return IntMatrix(0, 0)
    if A.rows == 0:
        return IntMatrix.identity(A.cols)
    sd = smith(A, need_U=False, need_V=True)
    r = sd.rank
    cols = [sd.V.column(j) for j in range(r, A.cols)]
    return IntMatrix.from_columns(cols, A.cols)


def solve(A: IntMatrix, B: IntMatrix) -> Optional[IntMatrix]:
    """Solve A X = B over the integers; None when no solution exists."""
    if A.rows != B.rows:
        raise ValueError("shape mismatch in solve")
    sd = smith(A, need_U=True, need_V=True)
    UB = sd.U * B
    r = sd.rank
    ent = {}
    for j in range(B.cols):
        for i in range(A.rows):
            v = UB[(i, j)]
            if i < r:
                d = sd.diagonal[i]
                if v % d != 0:
                    return None
                if v:
                    ent[(i, j)] = v // d
            elif v != 0:
                return None
    Z = IntMatrix(A.cols, B.cols, {ij: v for ij, v in ent.items() if ij[0] < A.cols})
    return sd.V * Z


def rank_mod_p(A: IntMatrix, p: int) -> int:
    """Rank over the prime field F_p, by sparse Gaussian elimination."""
    rows = {}
    for (i, j), v in A.entries.items():
        vv = v % p
        if vv:
            rows.setdefault(i, {})[j] = vv
    rank = 0
    pivots = {}   # col -> normalized row dict
    for i in sorted(rows):
        cur = dict(rows[i])
        while cur:
            j = min(cur)
            if j in pivots:
                f = cur[j]
                for jj, vv in pivots[j].items():
                    w = (cur.get(jj, 0) - f * vv) % p
                    if w:
                        cur[jj] = w
                    else:
                        cur.pop(jj, None)
            else:
                inv = pow(cur[j], p - 2, p)
                norm = {jj: (vv * inv) % p for jj, vv in cur.items()}
                pivots[j] = norm
                rank += 1
                break
    return rank


def kernel_basis_mod_p(A: IntMatrix, p: int) -> IntMatrix:
    """Kernel basis over F_p, entries reduced to 0..p-1, as columns."""
    n = A.cols
    rows = {}
    for (i, j), v in A.entries.items():
        vv = v % p
        if vv:
            rows.setdefault(i, {})[j] = vv
    pivots = {}
    for i in sorted(rows):
        cur = dict(rows[i])
        while cur:
            j = min(cur)
            if j in pivots:
                f = cur[j]
                for jj, vv in pivots[j].items():
                    w = (cur.get(jj, 0) - f * vv) % p
                    if w:
                        cur[jj] = w
                    else:
                        cur.pop(jj, None)
            else:
                inv = pow(cur[j], p - 2, p)
                pivots[j] = {jj: (vv * inv) % p for jj, vv in cur.items()}
                break
    # back-substitute to reduced row echelon form
    for j in sorted(pivots, reverse=True):
        row = pivots[j]
        for j2 in sorted(pivots):
            if j2 >= j:
                break
            r2 = pivots[j2]
            f = r2.get(j, 0)
            if f:
                for jj, vv in row.items():
                    w = (r2.get(jj, 0) - f * vv) % p
                    if w:
                        r2[jj] = w
                    else:
                        r2.pop(jj, None)
    free_cols = [j for j in range(n) if j not in pivots]
    cols = []
    for fc in free_cols:
        vec = {fc: 1}
        for pj, row in pivots.items():
            c = row.get(fc, 0)
            if c:
                vec[pj] = (-c) % p
        cols.append(vec)
    return IntMatrix.from_columns(cols, n)


def solve_mod_p(A: IntMatrix, B: IntMatrix, p: int) -> Optional[IntMatrix]:
    """Solve A X = B over F_p; None when inconsistent."""
    if A.rows != B.rows:
        raise ValueError("shape mismatch in solve_mod_p")
    aug = A.hstack(B)
    rows = {}
    for (i, j), v in aug.entries.items():
        vv = v % p
        if vv:
            rows.setdefault(i, {})[j] = vv
    pivots = {}
    for i in sorted(rows):
        cur = dict(rows[i])
        while cur:
            j = min(cur)
            if j in pivots:
                f = cur[j]
                for jj, vv in pivots[j].items():
                    w = (cur.get(jj, 0) - f * vv) % p
                    if w:
                        cur[jj] = w
                    else:
                        cur.pop(jj, None)
            else:
                inv = pow(cur[j], p - 2, p)
                pivots[j] = {jj: (vv * inv) % p for jj, vv in cur.items()}
                break
        else:
            continue
    if any(j >= A.cols for j in pivots):
        return None
    # back substitution
    for j in sorted(pivots, reverse=True):
        row = pivots[j]
        for j2 in sorted(pivots):
            if j2 >= j:
                break
            r2 = pivots[j2]
            f = r2.get(j, 0)
            if f:
                for jj, vv in row.items():
                    w = (r2.get(jj, 0) - f * vv) % p
                    if w:
                        r2[jj] = w
                    else:
                        r2.pop(jj, None)
    ent = {}
    for pj, row in pivots.items():
        for jj, vv in row.items():
            if jj >= A.cols and vv:
                ent[(pj, jj - A.cols)] = vv
    return IntMatrix(A.cols, B.cols, ent)


def random_sparse(rows: int, cols: int, density: float, seed: int = 0,
                  lo: int = -1, hi: int = 1) -> IntMatrix:
    rng = random.Random(seed)
    ent = {}
    for i in range(rows):
        for j in range(cols):
            if rng.random() < density:
                v = rng.randint(lo, hi)
                if v:
                    ent[(i, j)] = v
    return IntMatrix(rows, cols, ent)
