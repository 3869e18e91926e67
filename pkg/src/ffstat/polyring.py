"""Polynomial arithmetic over F_q[t] with full factorization.

A `Poly` stores its field spec and a trimmed tuple of coefficient
*indices* (see `gf.element_index`), low-to-high; the `coeffs` property
materializes `FieldElement`s on demand.  The zero polynomial has degree
`NEG_DEGREE`, a marker ordered below every integer, so conditions like
"deg f' <= 1" hold for a vanishing derivative.

Factorization runs squarefree decomposition (with p-th root extraction
when the derivative vanishes, valid since F_q is perfect), then
distinct-degree splitting via gcd(f, t^{q^d} - t), then equal-degree
splitting derandomized by iterating candidates in canonical code order
so that output is bit-identical across runs.  A trial-division backend
over cached irreducible lists serves as an independent cross-check on
small domains.
"""

from __future__ import annotations

from dataclasses import dataclass

from ffstat import gf, tables
from ffstat.combinatorics import Partition
from ffstat.gf import FieldElement, FieldSpec

NEG_DEGREE = float("-inf")


class Poly:
    """Immutable dense polynomial over a fixed field."""

    __slots__ = ("spec", "ci")

    def __init__(self, spec: FieldSpec, ci: tuple[int, ...]):
        self.spec = spec
        self.ci = ci

    @property
    def degree(self):
        return len(self.ci) - 1 if self.ci else NEG_DEGREE

    @property
    def is_zero(self) -> bool:
        return not self.ci

    @property
    def is_monic(self) -> bool:
        return bool(self.ci) and self.ci[-1] == 1

    @property
    def coeffs(self) -> tuple[FieldElement, ...]:
        return tuple(gf.element_from_index(self.spec, i) for i in self.ci)

    def coeff_index(self, i: int) -> int:
        return self.ci[i] if 0 <= i < len(self.ci) else 0

    def constant_index(self) -> int:
        return self.ci[0] if self.ci else 0

    def leading(self) -> FieldElement:
        if not self.ci:
            raise ValueError("zero polynomial has no leading coefficient")
        return gf.element_from_index(self.spec, self.ci[-1])

    def __eq__(self, other):
        return isinstance(other, Poly) and self.spec == other.spec and self.ci == other.ci

    def __hash__(self):
        return hash((self.spec, self.ci))

    def __str__(self):
        return poly_text(self)

    def __repr__(self):
        return f"Poly(q={self.spec.q}, {poly_text(self)})"


# ---------------------------------------------------------------------------
# Construction and rendering
# ---------------------------------------------------------------------------

def _trim(ci: list[int]) -> tuple[int, ...]:
    while ci and ci[-1] == 0:
        ci.pop()
    return tuple(ci)


def poly_from_indices(spec: FieldSpec, indices) -> Poly:
    ci = list(indices)
    for i in ci:
        if not 0 <= i < spec.q:
            raise ValueError(f"coefficient index {i} out of range for q = {spec.q}")
    return Poly(spec, _trim(ci))


def poly_from_elements(spec: FieldSpec, elements) -> Poly:
    return Poly(spec, _trim([gf.element_index(spec, e) for e in elements]))


def zero_poly(spec: FieldSpec) -> Poly:
    return Poly(spec, ())


def one_poly(spec: FieldSpec) -> Poly:
    return Poly(spec, (1,))


def constant_poly(spec: FieldSpec, e: FieldElement) -> Poly:
    return Poly(spec, _trim([gf.element_index(spec, e)]))


def monomial(spec: FieldSpec, n: int) -> Poly:
    """t^n."""
    return Poly(spec, (0,) * n + (1,))


def monic_code(f: Poly) -> int:
    """Base-q integer of the lower deg(f) coefficients (requires monic input)."""
    if not f.is_monic:
        raise ValueError("monic polynomial required")
    return tables.coeffs_to_code(f.ci, f.spec.q)


def monic_from_code(spec: FieldSpec, d: int, code: int) -> Poly:
    return Poly(spec, tables.code_to_coeffs(code, d, spec.q))


def all_monic(spec: FieldSpec, d: int):
    """All monic degree-d polynomials in code order."""
    for code in range(spec.q**d):
        yield monic_from_code(spec, d, code)


def poly_text(f: Poly) -> str:
    """Comma-separated coefficients low-to-high in field-element text form."""
    spec = f.spec
    if f.is_zero:
        return gf.element_to_text(spec, gf.zero(spec))
    return ",".join(gf.element_to_text(spec, gf.element_from_index(spec, i)) for i in f.ci)


# ---------------------------------------------------------------------------
# Index-tuple kernels (private)
# ---------------------------------------------------------------------------

def _ft(spec: FieldSpec) -> tables.FieldTable:
    return tables.field_table(spec)


def _add_idx(ft, a, b):
    q = ft.q
    addT = ft.add
    if len(a) < len(b):
        a, b = b, a
    res = list(a)
    for i, x in enumerate(b):
        res[i] = addT[res[i] * q + x]
    while res and res[-1] == 0:
        res.pop()
    return tuple(res)


def _neg_idx(ft, a):
    negT = ft.neg
    return tuple(negT[x] for x in a)


def _sub_idx(ft, a, b):
    return _add_idx(ft, a, _neg_idx(ft, b))


def _mul_idx(ft, a, b):
    if not a or not b:
        return ()
    return tuple(tables.coeffs_mul(a, b, ft))


def _scale_idx(ft, a, s):
    if s == 0:
        return ()
    if s == 1:
        return a
    q = ft.q
    mulT = ft.mul
    return tuple(mulT[x * q + s] for x in a)


def _divrem_idx(ft, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = ft.q
    addT = ft.add
    mulT = ft.mul
    negT = ft.neg
    inv_lead = ft.inv[b[-1]]
    rem = list(a)
    db = len(b) - 1
    if len(rem) - 1 < db:
        return (), tuple(rem)
    quot = [0] * (len(rem) - db)
    for top in range(len(rem) - 1, db - 1, -1):
        c = rem[top]
        if c:
            factor = mulT[c * q + inv_lead]
            quot[top - db] = factor
            shift = top - db
            nf = negT[factor]
            for i, bi in enumerate(b):
                if bi:
                    rem[shift + i] = addT[rem[shift + i] * q + mulT[nf * q + bi]]
    while rem and rem[-1] == 0:
        rem.pop()
    while quot and quot[-1] == 0:
        quot.pop()
    return tuple(quot), tuple(rem)


def _mod_idx(ft, a, b):
    return _divrem_idx(ft, a, b)[1]


def _monic_idx(ft, a):
    if not a or a[-1] == 1:
        return a
    return _scale_idx(ft, a, ft.inv[a[-1]])


def _gcd_idx(ft, a, b):
    while b:
        a, b = b, _mod_idx(ft, a, b)
    return _monic_idx(ft, a)


def _mulmod_idx(ft, a, b, mod):
    return _mod_idx(ft, _mul_idx(ft, a, b), mod)


def _powmod_idx(ft, base, n, mod):
    result = (1,)
    base = _mod_idx(ft, base, mod)
    while n:
        if n & 1:
            result = _mulmod_idx(ft, result, base, mod)
        n >>= 1
        if n:
            base = _mulmod_idx(ft, base, base, mod)
    return result


def _derivative_idx(ft, spec, a):
    q = ft.q
    mulT = ft.mul
    p = spec.p
    res = [0] * max(len(a) - 1, 0)
    for n in range(1, len(a)):
        s = n % p
        if s and a[n]:
            res[n - 1] = mulT[a[n] * q + s]
    while res and res[-1] == 0:
        res.pop()
    return tuple(res)


# ---------------------------------------------------------------------------
# Public arithmetic
# ---------------------------------------------------------------------------

def _same_spec(a: Poly, b: Poly) -> FieldSpec:
    if a.spec != b.spec:
        raise ValueError("polynomials over different fields")
    return a.spec


def poly_add(a: Poly, b: Poly) -> Poly:
    spec = _same_spec(a, b)
    return Poly(spec, _add_idx(_ft(spec), a.ci, b.ci))


def poly_sub(a: Poly, b: Poly) -> Poly:
    spec = _same_spec(a, b)
    return Poly(spec, _sub_idx(_ft(spec), a.ci, b.ci))


def poly_neg(a: Poly) -> Poly:
    return Poly(a.spec, _neg_idx(_ft(a.spec), a.ci))


def poly_mul(a: Poly, b: Poly) -> Poly:
    spec = _same_spec(a, b)
    return Poly(spec, _mul_idx(_ft(spec), a.ci, b.ci))


def poly_pow(a: Poly, n: int) -> Poly:
    if n < 0:
        raise ValueError("negative exponent")
    spec = a.spec
    ft = _ft(spec)
    result = (1,)
    base = a.ci
    while n:
        if n & 1:
            result = _mul_idx(ft, result, base)
        n >>= 1
        if n:
            base = _mul_idx(ft, base, base)
    return Poly(spec, result)


def poly_divrem(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Exact division with remainder: a = q*b + r, deg r < deg b."""
    spec = _same_spec(a, b)
    q, r = _divrem_idx(_ft(spec), a.ci, b.ci)
    return Poly(spec, q), Poly(spec, r)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor; rejects gcd(0, 0)."""
    spec = _same_spec(a, b)
    if a.is_zero and b.is_zero:
        raise ValueError("gcd(0, 0) is undefined")
    return Poly(spec, _gcd_idx(_ft(spec), a.ci, b.ci))


def make_monic(f: Poly) -> tuple[Poly, FieldElement]:
    """Monic scaling of f together with the original leading coefficient."""
    if f.is_zero:
        raise ValueError("cannot normalize the zero polynomial")
    return Poly(f.spec, _monic_idx(_ft(f.spec), f.ci)), f.leading()


def poly_eval(f: Poly, x: FieldElement) -> FieldElement:
    """Horner evaluation."""
    spec = f.spec
    ft = _ft(spec)
    q = ft.q
    addT, mulT = ft.add, ft.mul
    xi = gf.element_index(spec, x)
    acc = 0
    for c in reversed(f.ci):
        acc = addT[mulT[acc * q + xi] * q + c]
    return gf.element_from_index(spec, acc)


def derivative(f: Poly) -> Poly:
    return Poly(f.spec, _derivative_idx(_ft(f.spec), f.spec, f.ci))


def hasse_derivatives(f: Poly) -> tuple[Poly, Poly]:
    """First and second Hasse-Schmidt derivatives.

    The n-th coefficient contributes n * c_n to degree n-1 and
    C(n, 2) * c_n to degree n-2, the binomials reduced mod p; in odd
    characteristic the second one equals half the second derivative.
    """
    spec = f.spec
    ft = _ft(spec)
    q = ft.q
    mulT = ft.mul
    p = spec.p
    first = _derivative_idx(ft, spec, f.ci)
    second = [0] * max(len(f.ci) - 2, 0)
    for n in range(2, len(f.ci)):
        s = (n * (n - 1) // 2) % p
        if s and f.ci[n]:
            second[n - 2] = mulT[f.ci[n] * q + s]
    while second and second[-1] == 0:
        second.pop()
    return Poly(spec, first), Poly(spec, tuple(second))


def rational_derivative_is_constant(f: Poly, d: Poly) -> bool:
    """Whether (f/D)' = (f'D - fD')/D^2 is an element of F_q (possibly 0)."""
    spec = _same_spec(f, d)
    if d.is_zero:
        raise ValueError("denominator must be nonzero")
    ft = _ft(spec)
    if len(_gcd_idx(ft, f.ci, d.ci)) > 1:
        raise ValueError("f and D must be coprime")
    num = _sub_idx(
        ft,
        _mul_idx(ft, _derivative_idx(ft, spec, f.ci), d.ci),
        _mul_idx(ft, f.ci, _derivative_idx(ft, spec, d.ci)),
    )
    if not num:
        return True
    d2 = _mul_idx(ft, d.ci, d.ci)
    quot, rem = _divrem_idx(ft, num, d2)
    return not rem and len(quot) == 1


# ---------------------------------------------------------------------------
# Factorization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Factorization:
    """unit * prod(P_i^{e_i}) with distinct monic irreducible P_i, sorted by (degree, code)."""

    unit: FieldElement
    factors: tuple[tuple[Poly, int], ...]

    def expand_over(self, spec: FieldSpec) -> Poly:
        """Multiply the factorization back out over the given field."""
        ft = _ft(spec)
        acc = (gf.element_index(spec, self.unit),)
        for poly, mult in self.factors:
            for _ in range(mult):
                acc = _mul_idx(ft, acc, poly.ci)
        return Poly(spec, acc)

    def expand(self) -> Poly:
        """Multiply back out; the field is inferred from the first factor."""
        if not self.factors:
            raise ValueError("constant factorization: use expand_over(spec)")
        return self.expand_over(self.factors[0][0].spec)


def _pth_root_idx(ft, spec, a):
    # a = b(t^p) with Frobenius-power coefficients; recover b
    p = spec.p
    root = ft.pth_root
    out = []
    for n in range(0, len(a), p):
        out.append(root[a[n]])
    return tuple(out)


def _squarefree_idx(ft, spec, m):
    """Squarefree decomposition of monic m: list of (squarefree part, multiplicity)."""
    if len(m) <= 1:
        return []
    deriv = _derivative_idx(ft, spec, m)
    if not deriv:
        inner = _pth_root_idx(ft, spec, m)
        return [(g, e * spec.p) for g, e in _squarefree_idx(ft, spec, inner)]
    out = []
    c = _monic_idx(ft, _gcd_idx(ft, m, deriv))
    w = _divrem_idx(ft, m, c)[0]
    i = 1
    while len(w) > 1:
        y = _gcd_idx(ft, w, c)
        fac = _divrem_idx(ft, w, y)[0]
        if len(fac) > 1:
            out.append((fac, i))
        w = y
        c = _divrem_idx(ft, c, y)[0]
        i += 1
    if len(c) > 1:
        inner = _pth_root_idx(ft, spec, c)
        out.extend((g, e * spec.p) for g, e in _squarefree_idx(ft, spec, inner))
    return out


def _distinct_degree_idx(ft, spec, g):
    """Split squarefree monic g into (product, d) pieces of equal factor degree d."""
    q = spec.q
    out = []
    cur = g
    xq = (0, 1)
    d = 0
    while len(cur) - 1 >= 2 * (d + 1):
        d += 1
        xq = _powmod_idx(ft, xq, q, cur)
        piece = _gcd_idx(ft, _sub_idx(ft, xq, (0, 1)), cur)
        if len(piece) > 1:
            out.append((piece, d))
            cur = _divrem_idx(ft, cur, piece)[0]
            xq = _mod_idx(ft, xq, cur)
    if len(cur) > 1:
        out.append((cur, len(cur) - 1))
    return out


def _candidate_idx(spec, n):
    # canonical candidate sequence: base-q digits of n as coefficients
    q = spec.q
    digits = []
    while n:
        digits.append(n % q)
        n //= q
    return tuple(digits)


def _equal_degree_idx(ft, spec, h, d):
    """Split monic h (product of distinct irreducibles of degree d) completely.

    Deterministic: splitting candidates are iterated in canonical code
    order, never sampled, so the factor list is identical across runs.
    """
    if len(h) - 1 == d:
        return [h]
    q = spec.q
    out = []
    stack = [h]
    n_candidate = q  # first non-constant polynomial
    odd = spec.p != 2
    exponent = (q**d - 1) // 2 if odd else 0
    trace_steps = spec.nu * d if not odd else 0
    while stack:
        cur = stack.pop()
        if len(cur) - 1 == d:
            out.append(cur)
            continue
        split = None
        while split is None:
            c = _candidate_idx(spec, n_candidate)
            n_candidate += 1
            if n_candidate > q ** (len(h) + 1):
                raise AssertionError("equal-degree splitting exhausted candidates")
            g0 = _gcd_idx(ft, c, cur)
            if 1 < len(g0) < len(cur):
                split = g0
                break
            if odd:
                u = _powmod_idx(ft, c, exponent, cur)
                s = _gcd_idx(ft, _sub_idx(ft, u, (1,)), cur)
            else:
                acc = _mod_idx(ft, c, cur)
                trace = acc
                for _ in range(trace_steps - 1):
                    acc = _mulmod_idx(ft, acc, acc, cur)
                    trace = _add_idx(ft, trace, acc)
                s = _gcd_idx(ft, trace, cur)
            if 1 < len(s) < len(cur):
                split = s
        other = _divrem_idx(ft, cur, split)[0]
        stack.append(split)
        stack.append(other)
    return out


def factor(f: Poly) -> Factorization:
    """Complete factorization into monic irreducibles with multiplicities."""
    if f.is_zero:
        raise ValueError("cannot factor the zero polynomial")
    spec = f.spec
    ft = _ft(spec)
    unit = f.leading()
    m = _monic_idx(ft, f.ci)
    found = []
    for sf, mult in _squarefree_idx(ft, spec, m):
        for piece, d in _distinct_degree_idx(ft, spec, sf):
            for prime in _equal_degree_idx(ft, spec, piece, d):
                found.append((prime, mult))
    found.sort(key=lambda pm: (len(pm[0]), tables.coeffs_to_code(pm[0], spec.q)))
    return Factorization(unit, tuple((Poly(spec, ci), e) for ci, e in found))


def factor_trial(f: Poly) -> Factorization:
    """Trial-division backend over cached irreducible lists (small domains only)."""
    if f.is_zero:
        raise ValueError("cannot factor the zero polynomial")
    spec = f.spec
    ft = _ft(spec)
    unit = f.leading()
    rem = _monic_idx(ft, f.ci)
    found = []
    d = 1
    while 2 * d <= len(rem) - 1:
        for cand in irreducibles(spec, d):
            mult = 0
            while True:
                quot, r = _divrem_idx(ft, rem, cand.ci)
                if r:
                    break
                rem = quot
                mult += 1
            if mult:
                found.append((cand.ci, mult))
            if len(rem) - 1 < 2 * d:
                break
        d += 1
    if len(rem) > 1:
        found.append((rem, 1))
    found.sort(key=lambda pm: (len(pm[0]), tables.coeffs_to_code(pm[0], spec.q)))
    return Factorization(unit, tuple((Poly(spec, ci), e) for ci, e in found))


def factorization_type(f: Poly) -> Partition:
    """Degrees of the irreducible factors with multiplicity, as a partition of deg f."""
    if f.is_zero or len(f.ci) == 1:
        raise ValueError("factorization type needs degree >= 1")
    fact = factor(f)
    parts = []
    for poly, mult in fact.factors:
        parts.extend([len(poly.ci) - 1] * mult)
    parts.sort(reverse=True)
    return Partition(tuple(parts))


def is_irreducible(f: Poly) -> bool:
    """Irreducibility over F_q (Rabin's iterated-Frobenius test)."""
    if f.is_zero or len(f.ci) == 1:
        raise ValueError("irreducibility needs degree >= 1")
    spec = f.spec
    ft = _ft(spec)
    n = len(f.ci) - 1
    if n == 1:
        return True
    m = _monic_idx(ft, f.ci)
    q = spec.q
    prime_divs = set()
    nn = n
    dd = 2
    while dd * dd <= nn:
        if nn % dd == 0:
            prime_divs.add(dd)
            while nn % dd == 0:
                nn //= dd
        dd += 1
    if nn > 1:
        prime_divs.add(nn)
    checkpoints = {n // r for r in prime_divs}
    x = (0, 1)
    cur = x
    for i in range(1, n + 1):
        cur = _powmod_idx(ft, cur, q, m)
        if i in checkpoints:
            g = _gcd_idx(ft, _sub_idx(ft, cur, x), m)
            if len(g) > 1:
                return False
    return _sub_idx(ft, cur, x) == ()


_IRR_CACHE: dict[tuple[FieldSpec, int], tuple[Poly, ...]] = {}


def irreducibles(spec: FieldSpec, d: int) -> tuple[Poly, ...]:
    """All monic irreducibles of degree d in code order (cached)."""
    key = (spec, d)
    cached = _IRR_CACHE.get(key)
    if cached is None:
        cached = tuple(f for f in all_monic(spec, d) if is_irreducible(f))
        _IRR_CACHE[key] = cached
    return cached
