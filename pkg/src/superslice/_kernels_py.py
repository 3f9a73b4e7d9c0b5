"""Pure-Python hot kernels: sparse term-merge product and Bareiss rank.

The compiled twin lives in _speedups.pyx; _kernels picks one at import.
Both operate on plain containers so results are interchangeable.
"""

from __future__ import annotations

from fractions import Fraction


def mul_monomials(ma, mb, parities):
    """Merge two sorted (index, exp) monomials.

    Returns (monomial, sign) with sign in {1, -1}, or (None, 0) when an odd
    variable squares to zero.  The sign is the Koszul sign for interleaving
    the odd factors into index order.
    """
    if not ma:
        return mb, 1
    if not mb:
        return ma, 1
    # count inversions between odd factors of ma and mb
    odd_a = [i for i, e in ma if parities[i]]
    odd_b = [i for i, e in mb if parities[i]]
    sign = 1
    if odd_a and odd_b:
        seen_b = set(odd_b)
        for i in odd_a:
            if i in seen_b:
                return None, 0
        inv = 0
        for x in odd_a:
            for y in odd_b:
                if x > y:
                    inv += 1
        if inv & 1:
            sign = -1
    out = []
    ia = ib = 0
    na, nb = len(ma), len(mb)
    while ia < na and ib < nb:
        va, ea = ma[ia]
        vb, eb = mb[ib]
        if va < vb:
            out.append((va, ea))
            ia += 1
        elif vb < va:
            out.append((vb, eb))
            ib += 1
        else:
            if parities[va]:
                return None, 0  # odd variable squared
            out.append((va, ea + eb))
            ia += 1
            ib += 1
    out.extend(ma[ia:])
    out.extend(mb[ib:])
    return tuple(out), sign


def mul_terms(terms_a, terms_b, parities):
    """Sparse product of two term dicts; drops zero coefficients."""
    out = {}
    for ma, ca in terms_a.items():
        for mb, cb in terms_b.items():
            mono, sign = mul_monomials(ma, mb, parities)
            if sign == 0:
                continue
            c = ca * cb if sign == 1 else -(ca * cb)
            prev = out.get(mono)
            if prev is None:
                out[mono] = c
            else:
                s = prev + c
                if s:
                    out[mono] = s
                else:
                    del out[mono]
    return out


def bareiss_rank(rows):
    """Rank of an integer matrix (list of lists of int), fraction-free.

    Mutates a copy; exact over arbitrary-precision ints.
    """
    m = [list(r) for r in rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    rank = 0
    prev = 1
    row = 0
    for col in range(nc):
        # find pivot
        piv = -1
        for r in range(row, nr):
            if m[r][col]:
                piv = r
                break
        if piv < 0:
            continue
        if piv != row:
            m[row], m[piv] = m[piv], m[row]
        pv = m[row][col]
        for r in range(row + 1, nr):
            mr = m[r]
            mrc = mr[col]
            base = m[row]
            for c in range(col + 1, nc):
                mr[c] = (pv * mr[c] - mrc * base[c]) // prev
            mr[col] = 0
        prev = pv
        row += 1
        rank += 1
        if row == nr:
            break
    return rank


def clear_denominators(rows):
    """Scale each Fraction row to a primitive integer row (rank-preserving)."""
    out = []
    for r in rows:
        denom = 1
        for x in r:
            if isinstance(x, Fraction):
                d = x.denominator
                if d != 1:
                    g = _gcd(denom, d)
                    denom = denom // g * d
        out.append([int(x * denom) if isinstance(x, Fraction) else int(x) * denom
                    for x in r])
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a
