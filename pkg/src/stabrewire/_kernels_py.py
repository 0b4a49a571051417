"""Pure-Python search kernels; reference semantics for ``_kernels.pyx``.

Both kernels enumerate Pauli operators in a fixed order so the two
backends return identical results.

Pauli candidates are ``(x, z)`` int pairs on ``n`` qubits.  Letters per
qubit are tried in the order X, Y, Z.
"""

from itertools import combinations, product

# (x, z) bits for X, Y, Z
_XYZ = ((1, 0), (1, 1), (0, 1))


def _syndrome_table(n, cons_x, cons_z):
    table = []
    for q in range(n):
        row = []
        for lx, lz in _XYZ:
            s = 0
            for i in range(len(cons_x)):
                if ((lx & (cons_z[i] >> q)) ^ (lz & (cons_x[i] >> q))) & 1:
                    s |= 1 << i
            row.append(s)
        table.append(row)
    return table


def _in_span(vec, excl):
    for piv, row in excl:
        if vec >> piv & 1:
            vec ^= row
    return vec == 0


def weight_search(n, cons_x, cons_z, rhs, excl, max_weight, limit, min_weight=1):
    """Lowest-weight Paulis with a prescribed syndrome.

    Finds the smallest ``w`` in ``[min_weight, max_weight]`` for which some
    weight-``w`` Pauli ``p`` has ``symplectic(p, cons[i]) == rhs >> i & 1``
    for every constraint ``i`` and ``p`` is outside the span described by
    ``excl`` (echelon rows ``(pivot_bit, vector)`` of ``x | z << n``,
    highest pivot first).  Returns ``(w, solutions)`` with at most ``limit``
    solutions in enumeration order, or ``(-1, [])``.
    """
    table = _syndrome_table(n, cons_x, cons_z)
    for w in range(max(min_weight, 1), max_weight + 1):
        found = []
        for support in combinations(range(n), w):
            rows = [table[q] for q in support]
            for letters in product(range(3), repeat=w):
                s = 0
                for r, l in zip(rows, letters):
                    s ^= r[l]
                if s != rhs:
                    continue
                x = z = 0
                for q, l in zip(support, letters):
                    x |= _XYZ[l][0] << q
                    z |= _XYZ[l][1] << q
                if excl and _in_span(x | (z << n), excl):
                    continue
                found.append((x, z))
                if len(found) >= limit:
                    return w, found
        if found:
            return w, found
    return -1, []


def coset_min_weight(n, v0x, v0z, basis_x, basis_z, limit):
    """Minimum weight over the coset ``v0 + span(basis)`` by Gray-code walk.

    Returns ``(w, minimizers)``; minimizers appear in Gray-code order and are
    capped at ``limit``.
    """
    x, z = v0x, v0z
    best = (x | z).bit_count()
    hits = [(x, z)]
    d = len(basis_x)
    for k in range(1, 1 << d):
        j = (k & -k).bit_length() - 1
        x ^= basis_x[j]
        z ^= basis_z[j]
        w = (x | z).bit_count()
        if w < best:
            best = w
            hits = [(x, z)]
        elif w == best and len(hits) < limit:
            hits.append((x, z))
    return best, hits
