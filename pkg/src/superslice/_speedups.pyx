# cython: language_level=3

"""Compiled twins of the pure-Python kernels in _kernels_py.

Same containers in and out: term dicts keyed by monomial tuples with
Fraction coefficients, rows of Python ints for the rank.  All arithmetic
stays on Python objects (exactness is the whole point); the win is in
loop, tuple, and dict traffic.
"""


cdef inline object _mul_monomials(tuple ma, tuple mb, parities):
    """Merge two sorted (index, exp) monomials: (monomial, sign) with the
    Koszul sign, or (None, 0) when an odd variable squares to zero."""
    cdef Py_ssize_t na = len(ma)
    cdef Py_ssize_t nb = len(mb)
    cdef Py_ssize_t k, ia, ib, inv
    cdef int sign
    cdef list odd_a, odd_b, out
    cdef set seen_b
    cdef object item, x, y, va, ea, vb, eb
    if na == 0:
        return mb, 1
    if nb == 0:
        return ma, 1
    odd_a = []
    odd_b = []
    for k in range(na):
        item = ma[k]
        if parities[item[0]]:
            odd_a.append(item[0])
    for k in range(nb):
        item = mb[k]
        if parities[item[0]]:
            odd_b.append(item[0])
    sign = 1
    if odd_a and odd_b:
        seen_b = set(odd_b)
        for x in odd_a:
            if x in seen_b:
                return None, 0
        inv = 0
        for x in odd_a:
            for y in odd_b:
                if x > y:
                    inv += 1
        if inv & 1:
            sign = -1
    out = []
    ia = 0
    ib = 0
    while ia < na and ib < nb:
        va, ea = <tuple> ma[ia]
        vb, eb = <tuple> mb[ib]
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


def mul_terms(dict terms_a, dict terms_b, parities):
    """Sparse product of two term dicts; drops zero coefficients."""
    cdef dict out = {}
    cdef tuple ma, mb, pair
    cdef object ca, cb, mono, c, prev, s
    cdef int sign
    for ma, ca in terms_a.items():
        for mb, cb in terms_b.items():
            pair = _mul_monomials(ma, mb, parities)
            sign = pair[1]
            if sign == 0:
                continue
            mono = pair[0]
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
    """Rank of an integer matrix (list of lists of int), fraction-free."""
    # the copy loop must not reuse r: it is typed as an index below
    cdef list m = [list(entry) for entry in rows]
    cdef Py_ssize_t nr = len(m)
    cdef Py_ssize_t nc = len(<list> m[0]) if nr else 0
    cdef Py_ssize_t rank = 0
    cdef Py_ssize_t row = 0
    cdef Py_ssize_t col, r, c, piv
    cdef object prev = 1
    cdef object pv, mrc
    cdef list mr, base
    for col in range(nc):
        piv = -1
        for r in range(row, nr):
            if (<list> m[r])[col]:
                piv = r
                break
        if piv < 0:
            continue
        if piv != row:
            m[row], m[piv] = m[piv], m[row]
        base = <list> m[row]
        pv = base[col]
        for r in range(row + 1, nr):
            mr = <list> m[r]
            mrc = mr[col]
            for c in range(col + 1, nc):
                mr[c] = (pv * mr[c] - mrc * base[c]) // prev
            mr[col] = 0
        prev = pv
        row += 1
        rank += 1
        if row == nr:
            break
    return rank
