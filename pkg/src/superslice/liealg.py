"""Lie superalgebras by structure constants, gradings, sl2-triples.

An algebra is a basis (labels + parities), a sparse table of structure
constants over Q, and an optional even supersymmetric invariant bilinear
form.  Construction re-verifies super-antisymmetry, parity homogeneity,
the super Jacobi identity and, when a form is given, its invariance.

Vectors come in two flavors: dense lists of Fractions, and sparse dicts
mapping basis index -> SuperPolynomial for symbolic points.  The bracket
on polynomial vectors applies the Koszul rule
[a x, b y] = (-1)^{|x||b|} a b [x, y].
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from .linalg import (RationalMatrix, exact_rank, from_columns, nullspace,
                     rref, solve)
from .superpoly import PolyRing, SuperPolynomial, _as_fraction

ZERO = Fraction(0)
ONE = Fraction(1)

NumVector = list  # dense list of Fractions, one per basis element
PolyVector = dict  # basis index -> SuperPolynomial


class LieSuperalgebra:
    def __init__(self, labels: Sequence[str], parities: Sequence[int],
                 table: Mapping[tuple[int, int], Mapping[int, Fraction]],
                 form: Optional[RationalMatrix] = None,
                 meta: Optional[dict] = None, check: bool = True):
        self.labels = list(labels)
        self.parities = list(parities)
        self.dim = len(self.labels)
        if len(self.parities) != self.dim:
            raise ValueError("labels/parities length mismatch")
        if len(set(self.labels)) != self.dim:
            raise ValueError("duplicate basis labels")
        self.index = {l: i for i, l in enumerate(self.labels)}
        self.table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), row in table.items():
            cleaned = {k: _as_fraction(c) for k, c in row.items() if c}
            if cleaned:
                self.table[(i, j)] = cleaned
        self.form = form
        self.meta = dict(meta or {})
        if check:
            self._verify()

    # -- verification ------------------------------------------------------

    def validate(self) -> dict:
        """Re-run all structural checks (antisymmetry, parity, Jacobi,
        form); raises the first violation, returns a summary on success."""
        self._verify()
        ev = sum(1 for p in self.parities if p == 0)
        return {
            "dim_even": ev,
            "dim_odd": self.dim - ev,
            "structure_constants": sum(len(r) for r in self.table.values()),
            "has_form": self.form is not None,
        }

    def _verify(self):
        p = self.parities
        for (i, j), row in self.table.items():
            sgn = -ONE if not (p[i] and p[j]) else ONE
            mirror = self.table.get((j, i), {})
            keys = set(row) | set(mirror)
            for k in keys:
                if mirror.get(k, ZERO) != sgn * row.get(k, ZERO):
                    raise ValueError(
                        f"super-antisymmetry fails at ({self.labels[i]},"
                        f"{self.labels[j]},{self.labels[k]})")
                if (p[i] + p[j]) % 2 != p[k] and row.get(k, ZERO):
                    raise ValueError(
                        f"parity inhomogeneity in [{self.labels[i]},"
                        f"{self.labels[j]}]")
        n = self.dim
        for i in range(n):
            for j in range(n):
                pij = p[i] * p[j]
                for k in range(n):
                    # [x_i,[x_j,x_k]] = [[x_i,x_j],x_k] + (-1)^{ij}[x_j,[x_i,x_k]]
                    lhs = self._b(i, self._bb(j, k))
                    rhs = self._b2(self._bb(i, j), k)
                    t = self._b(j, self._bb(i, k))
                    for m, c in t.items():
                        rhs[m] = rhs.get(m, ZERO) + (-c if pij else c)
                    for m in set(lhs) | set(rhs):
                        if lhs.get(m, ZERO) != rhs.get(m, ZERO):
                            raise ValueError(
                                f"super Jacobi fails at ({self.labels[i]},"
                                f"{self.labels[j]},{self.labels[k]})")
        if self.form is not None:
            self._verify_form()

    def _verify_form(self):
        f = self.form
        if f.nrows != self.dim or f.ncols != self.dim:
            raise ValueError("form shape mismatch")
        p = self.parities
        for i in range(self.dim):
            for j in range(self.dim):
                if p[i] != p[j] and f[i, j]:
                    raise ValueError("form is not even")
                sgn = -ONE if p[i] and p[j] else ONE
                if f[i, j] != sgn * f[j, i]:
                    raise ValueError("form is not supersymmetric")
        # invariance ([x,y],z) = (x,[y,z]) on basis triples
        for i in range(self.dim):
            for j in range(self.dim):
                bij = self._bb(i, j)
                for k in range(self.dim):
                    lhs = sum((c * f[m, k] for m, c in bij.items()), ZERO)
                    rhs = sum((c * f[i, m] for m, c in self._bb(j, k).items()),
                              ZERO)
                    if lhs != rhs:
                        raise ValueError("form is not invariant")

    # -- basic bracket machinery --------------------------------------------

    def _bb(self, i: int, j: int) -> dict[int, Fraction]:
        return self.table.get((i, j), {})

    def _b(self, i: int, v: Mapping[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for j, c in v.items():
            for k, s in self._bb(i, j).items():
                t = out.get(k, ZERO) + c * s
                if t:
                    out[k] = t
                else:
                    out.pop(k, None)
        return out

    def _b2(self, v: Mapping[int, Fraction], k: int) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for i, c in v.items():
            for m, s in self._bb(i, k).items():
                t = out.get(m, ZERO) + c * s
                if t:
                    out[m] = t
                else:
                    out.pop(m, None)
        return out

    def basis_vector(self, i: Union[int, str]) -> list[Fraction]:
        if isinstance(i, str):
            i = self.index[i]
        v = [ZERO] * self.dim
        v[i] = ONE
        return v

    def bracket_num(self, x: Sequence, y: Sequence) -> list[Fraction]:
        out = [ZERO] * self.dim
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                for k, c in self._bb(i, j).items():
                    out[k] += a * b * c
        return out

    def bracket_poly(self, x: Mapping[int, SuperPolynomial],
                     y: Mapping[int, SuperPolynomial]) -> dict[int, SuperPolynomial]:
        """Bracket of polynomial-coefficient vectors with the Koszul rule."""
        out: dict[int, SuperPolynomial] = {}
        par = self.parities
        for i, a in x.items():
            if a.is_zero():
                continue
            for j, b in y.items():
                row = self._bb(i, j)
                if not row or b.is_zero():
                    continue
                if par[i]:
                    be, bo = b.parity_split()
                    eff = be - bo  # (-1)^{|x_i||b|} b
                else:
                    eff = b
                coeff = a * eff
                if coeff.is_zero():
                    continue
                for k, c in row.items():
                    cur = out.get(k)
                    add = coeff * c
                    out[k] = add if cur is None else cur + add
        return {k: v for k, v in out.items() if not v.is_zero()}

    def bracket(self, x, y):
        """Bracket dispatching on representation (dense scalar / sparse poly)."""
        if isinstance(x, dict) and isinstance(y, dict):
            return self.bracket_poly(x, y)
        if isinstance(x, dict) or isinstance(y, dict):
            raise TypeError("mixed vector representations; convert with "
                            "dense_to_poly first")
        return self.bracket_num(x, y)

    def ad_matrix(self, x: Sequence) -> RationalMatrix:
        """Matrix of ad_x = [x, .] in the basis (columns are images)."""
        cols = []
        for j in range(self.dim):
            img = [ZERO] * self.dim
            for i, a in enumerate(x):
                if not a:
                    continue
                for k, c in self._bb(i, j).items():
                    img[k] += a * c
            cols.append(img)
        return from_columns(cols)

    def form_value(self, x: Sequence, y: Sequence) -> Fraction:
        if self.form is None:
            raise ValueError("algebra carries no bilinear form")
        out = ZERO
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if b and self.form[i, j]:
                    out += a * self.form[i, j] * b
        return out

    # -- structure ----------------------------------------------------------

    def even_indices(self) -> list[int]:
        return [i for i in range(self.dim) if self.parities[i] == 0]

    def restrict_to(self, indices: Sequence[int],
                    keep_form: bool = False) -> "LieSuperalgebra":
        """Subalgebra on a subset of basis elements (must close)."""
        idx = list(indices)
        pos = {b: a for a, b in enumerate(idx)}
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for a, i in enumerate(idx):
            for b, j in enumerate(idx):
                row = self._bb(i, j)
                if not row:
                    continue
                out = {}
                for k, c in row.items():
                    if k not in pos:
                        raise ValueError(
                            f"subset does not close: [{self.labels[i]},"
                            f"{self.labels[j]}] leaves the span")
                    out[pos[k]] = c
                table[(a, b)] = out
        form = None
        if keep_form and self.form is not None:
            form = RationalMatrix([[self.form[i, j] for j in idx] for i in idx])
        return LieSuperalgebra([self.labels[i] for i in idx],
                               [self.parities[i] for i in idx], table,
                               form=form, check=False)

    def __repr__(self):
        ev = sum(1 for p in self.parities if p == 0)
        return f"<LieSuperalgebra dim {ev}|{self.dim - ev}>"


def dense_to_poly(alg: LieSuperalgebra, v: Sequence, ring: PolyRing) -> dict:
    out = {}
    for i, c in enumerate(v):
        c = _as_fraction(c)
        if c:
            out[i] = ring.const(c)
    return out


# -- subspaces ---------------------------------------------------------------

class SubspaceBasis:
    """Exact basis of a subspace of the algebra's underlying vector space."""

    def __init__(self, alg: LieSuperalgebra, vectors: Sequence[Sequence]):
        self.alg = alg
        self.vectors = [[_as_fraction(x) for x in v] for v in vectors]
        for v in self.vectors:
            if len(v) != alg.dim:
                raise ValueError("vector length mismatch")
        if self.vectors:
            if exact_rank(RationalMatrix(self.vectors)) != len(self.vectors):
                raise ValueError("vectors are not linearly independent")

    def __len__(self):
        return len(self.vectors)

    def parity_of(self, n: int) -> int:
        v = self.vectors[n]
        seen = {self.alg.parities[i] for i, c in enumerate(v) if c}
        if len(seen) != 1:
            raise ValueError("basis vector is not parity homogeneous")
        return seen.pop()

    def parity_counts(self) -> tuple[int, int]:
        ev = sum(1 for n in range(len(self)) if self.parity_of(n) == 0)
        return ev, len(self) - ev

    def contains(self, v: Sequence) -> bool:
        if not self.vectors:
            return all(not _as_fraction(x) for x in v)
        m = from_columns(self.vectors)
        return solve(m, [_as_fraction(x) for x in v]) is not None

    def coordinates_of(self, v: Sequence) -> Optional[list[Fraction]]:
        if not self.vectors:
            return None
        m = from_columns(self.vectors)
        return solve(m, [_as_fraction(x) for x in v])


# -- good gradings ------------------------------------------------------------

class GoodGrading:
    """Half-integer grading adapted to a nilpotent f.

    Weights are stored doubled (wt2), so g_{1/2} has wt2 = 1.  Checks at
    construction: bracket additivity, f in degree -1, ad_f injective in
    degrees >= 1/2 and surjective in degrees <= 1/2.
    """

    def __init__(self, alg: LieSuperalgebra, weights2: Sequence[int],
                 f: Sequence):
        self.alg = alg
        self.weights2 = [int(w) for w in weights2]
        if len(self.weights2) != alg.dim:
            raise ValueError("weights length mismatch")
        self.f = [_as_fraction(x) for x in f]
        self._validate()

    def _validate(self):
        alg, w2 = self.alg, self.weights2
        for (i, j), row in alg.table.items():
            for k, c in row.items():
                if c and w2[k] != w2[i] + w2[j]:
                    raise ValueError(
                        f"grading not additive on [{alg.labels[i]},"
                        f"{alg.labels[j]}]")
        for i, c in enumerate(self.f):
            if c and w2[i] != -2:
                raise ValueError("f has a component outside degree -1")
        if all(not c for c in self.f):
            raise ValueError("f is zero")
        adf = alg.ad_matrix(self.f)
        levels = sorted(set(w2))
        for lev in levels:
            dom = self.indices_at(lev)
            img_idx = self.indices_at(lev - 2)
            if dom and img_idx:
                cols = [[adf[r, c] for r in img_idx] for c in dom]
                r = exact_rank(from_columns(cols))
            else:
                r = 0
            if lev >= 1 and r != len(dom):
                raise ValueError(f"ad_f not injective from degree {lev}/2")
            if lev <= 1 and img_idx and r != len(img_idx):
                raise ValueError(f"ad_f not surjective onto degree {lev - 2}/2")

    def indices_at(self, wt2: int) -> list[int]:
        return [i for i, w in enumerate(self.weights2) if w == wt2]

    def indices_where(self, pred) -> list[int]:
        return [i for i, w in enumerate(self.weights2) if pred(w)]

    def positive_indices(self) -> list[int]:
        return self.indices_where(lambda w: w > 0)

    def levels(self) -> list[int]:
        return sorted(set(self.weights2))

    def max_wt2(self) -> int:
        return max(self.weights2)


def sl2_triple_for(alg: LieSuperalgebra, f: Sequence) -> "Sl2Triple":
    """Complete a nilpotent even f to an sl2-triple by exact linear solves.

    Solves ad_f^2 w = 2 f over the even part, sets h = [f, w], then solves
    the joint linear system [f, e] = -h, (ad_h - 2) e = 0.  Raises
    ValueError when no completion exists for the found h.
    """
    f = [_as_fraction(x) for x in f]
    even = alg.even_indices()
    for i, c in enumerate(f):
        if c and alg.parities[i]:
            raise ValueError("f must be even")
    adf = alg.ad_matrix(f)
    adf2 = adf @ adf
    cols = [[adf2[r, c] for r in range(alg.dim)] for c in even]
    target = [2 * c for c in f]
    w_even = solve(from_columns(cols), target)
    if w_even is None:
        raise ValueError("no h with [h,f] = -2f in the image of ad_f")
    w = [ZERO] * alg.dim
    for pos, i in enumerate(even):
        w[i] = w_even[pos]
    h = adf.mul_vector(w)
    adh = alg.ad_matrix(h)
    # rows: ad_f e = -h ; (ad_h - 2) e = 0, unknowns restricted to even part
    rows = []
    rhs = []
    for r in range(alg.dim):
        rows.append([adf[r, c] for c in even])
        rhs.append(-h[r])
    for r in range(alg.dim):
        row = [adh[r, c] for c in even]
        for pos, i in enumerate(even):
            if i == r:
                row[pos] -= 2
        rows.append(row)
        rhs.append(ZERO)
    e_even = solve(RationalMatrix(rows), rhs)
    if e_even is None:
        raise ValueError("found h does not extend to an sl2-triple")
    e = [ZERO] * alg.dim
    for pos, i in enumerate(even):
        e[i] = e_even[pos]
    return Sl2Triple(alg, e, h, f)


class Sl2Triple:
    def __init__(self, alg: LieSuperalgebra, e: Sequence, h: Sequence,
                 f: Sequence):
        self.alg = alg
        self.e = [_as_fraction(x) for x in e]
        self.h = [_as_fraction(x) for x in h]
        self.f = [_as_fraction(x) for x in f]
        b = alg.bracket_num
        checks = (
            (b(self.h, self.e), [2 * x for x in self.e], "[h,e] = 2e"),
            (b(self.h, self.f), [-2 * x for x in self.f], "[h,f] = -2f"),
            (b(self.e, self.f), self.h, "[e,f] = h"),
        )
        for got, want, name in checks:
            if got != want:
                raise ValueError(f"not an sl2-triple: {name} fails")
        for v in (self.e, self.h, self.f):
            for i, c in enumerate(v):
                if c and alg.parities[i]:
                    raise ValueError("triple vectors must be even")


def dynkin_grading(alg: LieSuperalgebra, triple: Sl2Triple) -> GoodGrading:
    """Grading by halved ad_h eigenvalues; requires an ad_h-diagonal basis."""
    adh = alg.ad_matrix(triple.h)
    w2 = []
    for j in range(alg.dim):
        lam = adh[j, j]
        for r in range(alg.dim):
            if r != j and adh[r, j]:
                raise ValueError(
                    f"basis vector {alg.labels[j]} is not an ad_h eigenvector")
        if lam.denominator != 1:
            raise ValueError("non-integral ad_h eigenvalue")
        w2.append(int(lam))
    return GoodGrading(alg, w2, triple.f)


def centralizer(alg: LieSuperalgebra, x: Sequence) -> SubspaceBasis:
    """Kernel of ad_x, canonical RREF basis."""
    return SubspaceBasis(alg, nullspace(alg.ad_matrix(x)))


def descending_central_series(alg: LieSuperalgebra) -> list[SubspaceBasis]:
    """g^0 = g, g^n = [g, g^{n-1}]; stops when stable.  Last entry is the
    first repeated (for nilpotent algebras: zero) term."""
    current = [alg.basis_vector(i) for i in range(alg.dim)]
    out = [SubspaceBasis(alg, current)]
    while True:
        spans = []
        for i in range(alg.dim):
            for v in current:
                w = alg.bracket_num(alg.basis_vector(i), v)
                if any(w):
                    spans.append(w)
        if spans:
            r, piv = rref(RationalMatrix(spans))
            new = [r.rows[n] for n in range(len(piv))]
        else:
            new = []
        out.append(SubspaceBasis(alg, new))
        if len(new) == len(current):
            break
        current = new
        if not new:
            break
    return out


def nilpotency_class(alg: LieSuperalgebra) -> int:
    series = descending_central_series(alg)
    for n, s in enumerate(series):
        if len(s) == 0:
            return n
    raise ValueError("algebra is not nilpotent")


class GradedPiece:
    """Degree-p data for the gauge recursion: g_p = g_p^e + [f, g_{p+1}]."""

    __slots__ = ("wt2", "row_indices", "e_basis", "lift_indices", "inverse")

    def __init__(self, wt2, row_indices, e_basis, lift_indices, inverse):
        self.wt2 = wt2
        self.row_indices = row_indices
        self.e_basis = e_basis
        self.lift_indices = lift_indices
        self.inverse = inverse


def graded_slice_decomposition(alg: LieSuperalgebra, grading: GoodGrading,
                               triple: Sl2Triple) -> dict[int, GradedPiece]:
    """For each degree p >= -1/2 the exact splitting g_p = g_p^e + [f,g_{p+1}]
    with the inverse of the combined basis matrix precomputed."""
    cent = centralizer(alg, triple.e)
    w2 = grading.weights2
    ge_by_level: dict[int, list[list[Fraction]]] = {}
    for n in range(len(cent)):
        v = cent.vectors[n]
        levels = {w2[i] for i, c in enumerate(v) if c}
        if len(levels) != 1:
            raise ValueError("centralizer vector not weight homogeneous")
        ge_by_level.setdefault(levels.pop(), []).append(v)
    out: dict[int, GradedPiece] = {}
    for lev in grading.levels():
        if lev < -1:
            continue
        rows = grading.indices_at(lev)
        if not rows:
            continue
        e_basis = ge_by_level.get(lev, [])
        lift = grading.indices_at(lev + 2)
        cols = [[v[r] for r in rows] for v in e_basis]
        for j in lift:
            img = alg.bracket_num(triple.f, alg.basis_vector(j))
            cols.append([img[r] for r in rows])
        if len(cols) != len(rows):
            raise ValueError(
                f"degree {lev}/2: direct sum dimension mismatch "
                f"({len(cols)} vs {len(rows)})")
        m = from_columns(cols) if cols else RationalMatrix.zeros(0, 0)
        inv = _invert(m) if cols else m
        out[lev] = GradedPiece(lev, rows, e_basis, lift, inv)
    return out


def _invert(m: RationalMatrix) -> RationalMatrix:
    n = m.nrows
    if m.ncols != n:
        raise ValueError("not square")
    aug = RationalMatrix([list(m.rows[i]) + list(RationalMatrix.identity(n).rows[i])
                          for i in range(n)])
    r, piv = rref(aug)
    if piv != list(range(n)):
        raise ValueError("matrix is singular")
    return RationalMatrix([r.rows[i][n:] for i in range(n)])


# -- catalogue ----------------------------------------------------------------

def _matrix_bracket(a, b, pa, pb, size):
    """Supercommutator of sparse matrices given as dict (r,c) -> Fraction."""
    out: dict[tuple[int, int], Fraction] = {}
    def acc(key, val):
        t = out.get(key, ZERO) + val
        if t:
            out[key] = t
        else:
            out.pop(key, None)
    for (r1, c1), x in a.items():
        for (r2, c2), y in b.items():
            if c1 == r2:
                acc((r1, c2), x * y)
    sgn = -ONE if (pa and pb) else ONE
    for (r1, c1), x in b.items():
        for (r2, c2), y in a.items():
            if c1 == r2:
                acc((r1, c2), -sgn * x * y)
    return out


def build_sl(m: int, n: int = 0) -> LieSuperalgebra:
    """sl(m|n) (or gl(n|n) with a warning in meta when m == n) with the
    supertrace form normalized on the even highest root."""
    if m < 1 or n < 0 or m + n < 2:
        raise ValueError("need m >= 1, n >= 0, m + n >= 2")
    size = m + n
    par = lambda i: 0 if i < m else 1

    labels: list[str] = []
    mats: list[dict] = []
    parities: list[int] = []
    for i in range(size):
        for j in range(size):
            if i != j:
                labels.append(f"e{i + 1}{j + 1}")
                mats.append({(i, j): ONE})
                parities.append((par(i) + par(j)) % 2)
    gl_center = (m == n)
    if gl_center:
        for i in range(size):
            labels.append(f"e{i + 1}{i + 1}")
            mats.append({(i, i): ONE})
            parities.append(0)
    else:
        for i in range(size - 1):
            sign = ONE if (par(i) != par(i + 1)) else -ONE
            labels.append(f"h{i + 1}")
            mats.append({(i, i): ONE, (i + 1, i + 1): sign})
            parities.append(0)

    diag_idx = [k for k, M in enumerate(mats) if all(r == c for r, c in M)]
    diag_cols = []
    for k in diag_idx:
        diag_cols.append([mats[k].get((i, i), ZERO) for i in range(size)])
    diag_matrix = from_columns(diag_cols)

    def decompose(M: dict) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        diag = [ZERO] * size
        for (r, c), v in M.items():
            if r == c:
                diag[r] = v
            else:
                out[labels.index(f"e{r + 1}{c + 1}")] = v
        if any(diag):
            sol = solve(diag_matrix, diag)
            if sol is None:
                raise ValueError("diagonal part outside the basis span")
            for pos, k in enumerate(diag_idx):
                if sol[pos]:
                    out[k] = sol[pos]
        return out

    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    dim = len(labels)
    for a in range(dim):
        for b in range(dim):
            br = _matrix_bracket(mats[a], mats[b], parities[a], parities[b], size)
            if br:
                table[(a, b)] = decompose(br)

    # supertrace form, scaled so the even highest root theta has (theta,theta)=2
    if m >= 2 or n == 0:
        scale = ONE
    elif n >= 2:
        scale = -ONE
    else:
        scale = ONE  # gl(1|1): no even roots, normalization vacuous
    form = RationalMatrix.zeros(dim, dim)
    for a in range(dim):
        for b in range(dim):
            v = ZERO
            for (r, c), x in mats[a].items():
                y = mats[b].get((c, r))
                if y:
                    v += x * y * (ONE if par(r) == 0 else -ONE)
            form[a, b] = scale * v

    meta = {"type": "gl" if gl_center else "sl", "m": m, "n": n}
    if gl_center:
        meta["warning"] = ("sl(n|n) is not basic; returning gl(n|n) "
                           "with its center")
    return LieSuperalgebra(labels, parities, table, form=form, meta=meta)


def build_osp_1_2() -> LieSuperalgebra:
    """osp(1|2): even sl2 {e,h,f} plus odd {vp,vm}.

    Convention: [h,vp] = vp, [h,vm] = -vm, [vp,vm] = h, [vp,vp] = 2e,
    [vm,vm] = -2f, [e,vm] = -vp, [f,vp] = -vm.  Realized by 3x3 matrices
    preserving a split form on C^{1|2}; the form is -supertrace, which
    gives kappa(h,h) = 2.
    """
    labels = ["e", "h", "f", "vp", "vm"]
    parities = [0, 0, 0, 1, 1]
    ix = {l: i for i, l in enumerate(labels)}
    raw = {
        ("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}, ("e", "f"): {"h": 1},
        ("h", "vp"): {"vp": 1}, ("h", "vm"): {"vm": -1},
        ("e", "vm"): {"vp": -1}, ("f", "vp"): {"vm": -1},
        ("vp", "vp"): {"e": 2}, ("vm", "vm"): {"f": -2},
        ("vp", "vm"): {"h": 1},
    }
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for (a, b), row in raw.items():
        i, j = ix[a], ix[b]
        r = {ix[k]: Fraction(c) for k, c in row.items()}
        table[(i, j)] = r
        if i != j:
            sgn = ONE if (parities[i] and parities[j]) else -ONE
            table[(j, i)] = {k: sgn * c for k, c in r.items()}
    form = RationalMatrix.zeros(5, 5)
    pairs = {("e", "f"): 1, ("f", "e"): 1, ("h", "h"): 2,
             ("vp", "vm"): 2, ("vm", "vp"): -2}
    for (a, b), v in pairs.items():
        form[ix[a], ix[b]] = Fraction(v)
    return LieSuperalgebra(labels, parities, table, form=form,
                           meta={"type": "osp12"})


def principal_nilpotent(alg: LieSuperalgebra) -> list[Fraction]:
    """Sum of the simple negative root vectors of the even part."""
    t = alg.meta.get("type")
    if t in ("sl", "gl"):
        m, n = alg.meta["m"], alg.meta["n"]
        f = [ZERO] * alg.dim
        for i in range(m + n - 1):
            if i + 1 == m:
                continue  # odd direction, not part of the even principal
            f[alg.index[f"e{i + 2}{i + 1}"]] = ONE
        if not any(f):
            raise ValueError("even part has no principal nilpotent")
        return f
    if t == "osp12":
        return alg.basis_vector("f")
    raise ValueError("principal nilpotent needs catalogue metadata")


def parse_nilpotent(alg: LieSuperalgebra, expr: str) -> list[Fraction]:
    """Parse 'e21+e32' / '2*e21 - 1/3*e31' / 'principal' into a vector."""
    expr = expr.strip()
    if expr == "principal":
        return principal_nilpotent(alg)
    out = [ZERO] * alg.dim
    token = expr.replace("-", "+-").replace(" ", "")
    for part in token.split("+"):
        if not part:
            continue
        sign = ONE
        if part.startswith("-"):
            sign = -ONE
            part = part[1:]
        if "*" in part:
            c, name = part.split("*", 1)
            coeff = Fraction(c)
        else:
            coeff, name = ONE, part
        if name not in alg.index:
            raise ValueError(f"unknown basis label {name!r}")
        out[alg.index[name]] += sign * coeff
    return out


# -- JSON interchange ---------------------------------------------------------

def algebra_to_json(alg: LieSuperalgebra) -> dict:
    brackets = []
    for (i, j), row in sorted(alg.table.items()):
        for k, c in sorted(row.items()):
            brackets.append({"i": i, "j": j, "k": k,
                             "c_num": c.numerator, "c_den": c.denominator})
    out = {
        "basis": [{"label": l, "parity": p}
                  for l, p in zip(alg.labels, alg.parities)],
        "brackets": brackets,
    }
    if alg.form is not None:
        out["form"] = [[str(alg.form[i, j]) for j in range(alg.dim)]
                       for i in range(alg.dim)]
    return out


def algebra_from_json(data: dict, check: bool = True) -> LieSuperalgebra:
    basis = data["basis"]
    labels = [b["label"] for b in basis]
    parities = [int(b["parity"]) for b in basis]
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for ent in data["brackets"]:
        i, j, k = int(ent["i"]), int(ent["j"]), int(ent["k"])
        c = Fraction(int(ent["c_num"]), int(ent["c_den"]))
        table.setdefault((i, j), {})[k] = table.get((i, j), {}).get(k, ZERO) + c
    form = None
    if data.get("form") is not None:
        form = RationalMatrix([[Fraction(x) for x in row]
                               for row in data["form"]])
    return LieSuperalgebra(labels, parities, table, form=form,
                           meta=data.get("meta") or {}, check=check)


def load_algebra_file(path: str, check: bool = True) -> LieSuperalgebra:
    with open(path) as fh:
        return algebra_from_json(json.load(fh), check=check)
