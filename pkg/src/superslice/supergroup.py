"""Nilpotent supergroup operations through exact Lie-algebra series.

Everything happens on even elements of g tensor a polynomial ring, where
coefficients carry the parity of their basis vector.  On those the
classical integrated Baker-Campbell-Hausdorff series (Dynkin form) and
the adjoint-orbit series apply verbatim; both terminate because the
relevant subalgebras are nilpotent.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .liealg import LieSuperalgebra, nilpotency_class
from .superpoly import PolyRing, SuperPolynomial, Variable

ZERO = Fraction(0)
ONE = Fraction(1)

PolyVector = Mapping[int, SuperPolynomial]


def _vec_add(a: PolyVector, b: PolyVector) -> dict:
    out = dict(a)
    for k, v in b.items():
        cur = out.get(k)
        s = v if cur is None else cur + v
        if s.is_zero():
            out.pop(k, None)
        else:
            out[k] = s
    return out


def _vec_scale(a: PolyVector, c: Fraction) -> dict:
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def vec_is_zero(a: PolyVector) -> bool:
    return all(v.is_zero() for v in a.values())


def adjoint_orbit_map(alg: LieSuperalgebra, w: PolyVector, y: PolyVector,
                      max_terms: int = 64) -> dict:
    """exp(-y) w exp(y) = sum_n (1/n!) [..[[w,y],y]..,y] (n brackets).

    Terminates when the iterated bracket vanishes; raises if it has not
    after max_terms steps (y not nilpotent enough).
    """
    out = {k: v for k, v in w.items() if not v.is_zero()}
    term = out
    n = 0
    while not vec_is_zero(term):
        n += 1
        if n > max_terms:
            raise ValueError("adjoint series did not terminate")
        term = _vec_scale(alg.bracket_poly(term, y), Fraction(1, n))
        out = _vec_add(out, term)
    return out


def _compositions(total: int):
    """All tuples ((p1,q1),...,(pn,qn)) with pi+qi >= 1 and sum == total."""
    def rec(remaining):
        if remaining == 0:
            yield ()
            return
        for p in range(remaining + 1):
            for q in range(remaining - p + 1):
                if p + q == 0:
                    continue
                for rest in rec(remaining - p - q):
                    yield ((p, q),) + rest
    yield from rec(total)


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def bch_product(alg: LieSuperalgebra, x: PolyVector, y: PolyVector,
                max_word_len: int) -> dict:
    """log(exp(x) exp(y)) by the integrated Dynkin series, truncated at
    word length max_word_len (exact when the span is nilpotent of class
    <= max_word_len)."""
    out: dict = {}
    for total in range(1, max_word_len + 1):
        for blocks in _compositions(total):
            n = len(blocks)
            denom = total
            for p, q in blocks:
                denom *= _factorial(p) * _factorial(q)
            coeff = Fraction((-1) ** (n - 1), n * denom)
            word: list = []
            for p, q in blocks:
                word.extend([x] * p)
                word.extend([y] * q)
            # right-nested bracketing [w1,[w2,[...,wk]]]
            term = word[-1]
            for v in reversed(word[:-1]):
                term = alg.bracket_poly(v, term)
                if vec_is_zero(term):
                    break
            else:
                out = _vec_add(out, _vec_scale(term, coeff))
    return out


def _scratch_parameter(ring: PolyRing, parity: int) -> int:
    name = "_todd" if parity else "_teven"
    if name in ring.index:
        return ring.index[name]
    return ring.add_variable(Variable(name, parity))


def _drop_terms_with(poly: SuperPolynomial, idx: int) -> SuperPolynomial:
    kept = {m: c for m, c in poly.terms.items()
            if all(v != idx for v, _ in m)}
    return SuperPolynomial(poly.ring, kept)


def regular_representation(alg: LieSuperalgebra, sub_indices: Sequence[int],
                           ring: PolyRing, coord_index: Sequence[int]):
    """Right regular action of a nilpotent subalgebra on its exponential
    coordinates.

    sub_indices spans the subalgebra n; coord_index[a] is the ring
    variable dual to basis vector sub_indices[a] (matching parity).
    Returns fields[a][b] = SuperPolynomial c with
    R(v_a) = sum_b c_b d/dx_b, coefficients written to the left.
    """
    sub_indices = list(sub_indices)
    sub = alg.restrict_to(sub_indices)  # validates closure
    nclass = nilpotency_class(sub)
    pos = {g: a for a, g in enumerate(sub_indices)}
    X = {g: ring.gen(coord_index[a]) for a, g in enumerate(sub_indices)}
    fields = []
    for a, g in enumerate(sub_indices):
        par = alg.parities[g]
        t = _scratch_parameter(ring, par)
        B = bch_product(alg, X, {g: ring.gen(t)}, nclass)
        row = [ring.zero() for _ in sub_indices]
        for i, comp in B.items():
            if i not in pos:
                raise ValueError("group law left the subalgebra")
            c = _drop_terms_with(comp.partial_derivative(t), t)
            row[pos[i]] = c
        fields.append(row)
    return fields


def apply_derivation(coeffs: Sequence[SuperPolynomial],
                     var_indices: Sequence[int],
                     f: SuperPolynomial) -> SuperPolynomial:
    """(sum_b c_b d/dx_b) f with left coefficients."""
    out = f.ring.zero()
    for c, v in zip(coeffs, var_indices):
        if not c.is_zero():
            out = out + c * f.partial_derivative(v)
    return out
