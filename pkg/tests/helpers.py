"""Independent oracles shared by the unit and acceptance suites.

Everything here recomputes expected values from first principles
(permutation census, direct member-by-member factoring, exact bivariate
expansion) so the library paths they check against stay independent.
"""

from itertools import permutations

from ffstat import polyring as pr, tables
from ffstat import statistics as st


def brute_cycle_type_counts(k):
    """Census of cycle types over all k! permutations."""
    counts = {}
    for perm in permutations(range(k)):
        seen = [False] * k
        parts = []
        for i in range(k):
            if not seen[i]:
                length = 0
                j = i
                while not seen[j]:
                    seen[j] = True
                    j = perm[j]
                    length += 1
                parts.append(length)
        parts.sort(reverse=True)
        key = tuple(parts)
        counts[key] = counts.get(key, 0) + 1
    return counts


def direct_interval_census(interval):
    """Type census by factoring every member, no table shortcuts."""
    counts = {}
    for g in interval.members():
        lam = pr.factorization_type(g)
        counts[lam] = counts.get(lam, 0) + 1
    return counts


def direct_nu(f, m):
    """Filtered von Mangoldt sum by factoring every member."""
    total = 0
    for g in st.IntervalSpec(f, m).canonical().members():
        if g.constant_index() != 0:
            total += st.von_mangoldt(g)
    return total


def expand_at_shift(f):
    """Exact bivariate expansion of f(t + u) as {(i, j): coeff index of t^i u^j}.

    Built by Horner over the two-variable polynomial t + u, so binomial
    coefficients arise from repeated addition in the field rather than
    from any derivative formula.
    """
    ft = tables.field_table(f.spec)
    q = ft.q
    add = ft.add
    acc = {}
    for c in reversed(f.ci):
        new = {}
        for (i, j), v in acc.items():
            for di, dj in ((1, 0), (0, 1)):
                key = (i + di, j + dj)
                new[key] = add[new.get(key, 0) * q + v]
        if c:
            new[(0, 0)] = add[new.get((0, 0), 0) * q + c]
        acc = {key: v for key, v in new.items() if v}
    return acc


def u_coefficient(expansion, j, spec):
    """The coefficient of u^j in an expand_at_shift result, as a Poly."""
    if expansion:
        top = max(i for (i, jj) in expansion if jj == j) if any(jj == j for (_, jj) in expansion) else -1
    else:
        top = -1
    ci = [0] * (top + 1)
    for (i, jj), v in expansion.items():
        if jj == j:
            ci[i] = v
    return pr.poly_from_indices(spec, ci)


def brute_totient(d_poly):
    """Count residues of degree < deg D coprime to D by direct gcd."""
    spec = d_poly.spec
    deg = d_poly.degree
    count = 0
    for code in range(spec.q**deg):
        digits = []
        c = code
        for _ in range(deg):
            digits.append(c % spec.q)
            c //= spec.q
        r = pr.poly_from_indices(spec, digits)
        if r.is_zero:
            continue
        if pr.poly_gcd(r, d_poly).degree == 0:
            count += 1
    if deg == 0:
        return 1
    return count
