"""Counting objects over F_q[t]: censuses, totient, von Mangoldt sums.

Short intervals I(f, m) = f + {polynomials of degree <= m} and residue
classes {f + D*g} are the two enumeration domains.  Census operations
factor every member directly unless type tables for the field are
already cached (`tables.poly_tables`), in which case members reduce to
table lookups; the two paths are interchangeable and cross-checked in
the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ffstat import gf, polyring as pr, tables
from ffstat.combinatorics import Partition, divisors, partitions_of
from ffstat.gf import FieldSpec
from ffstat.polyring import Poly
from ffstat.tables import DEFAULT_BUDGET, BudgetError


@dataclass(frozen=True)
class IntervalSpec:
    """The interval around a monic degree-k polynomial: all g with deg(f - g) <= m."""

    f: Poly
    m: int

    def __post_init__(self):
        if not self.f.is_monic:
            raise ValueError("interval center must be monic")
        k = self.f.degree
        if k < 1:
            raise ValueError("interval center must have degree >= 1")
        if not 0 <= self.m < k:
            raise ValueError(f"m = {self.m} out of range 0..{k - 1}")

    @property
    def spec(self) -> FieldSpec:
        return self.f.spec

    @property
    def k(self) -> int:
        return self.f.degree

    @property
    def size(self) -> int:
        return self.spec.q ** (self.m + 1)

    def canonical(self) -> "IntervalSpec":
        """Representative with coefficients 0..m zeroed; same member set."""
        ci = list(self.f.ci)
        for i in range(self.m + 1):
            ci[i] = 0
        return IntervalSpec(Poly(self.spec, tuple(ci)), self.m)

    def base_code(self) -> int:
        """Shared top-coefficient block index: member codes are base*size .. base*size+size-1."""
        return pr.monic_code(self.f) // self.size

    def members(self):
        """All q^{m+1} members in code order."""
        base = self.base_code() * self.size
        for j in range(self.size):
            yield pr.monic_from_code(self.spec, self.k, base + j)

    def contains(self, g: Poly) -> bool:
        if g.spec != self.spec or not g.is_monic or g.degree != self.k:
            return False
        return pr.monic_code(g) // self.size == self.base_code()


@dataclass(frozen=True)
class ProgressionSpec:
    """Monic degree-k members of the residue class f mod D."""

    D: Poly
    f: Poly
    k: int

    def __post_init__(self):
        if self.D.spec != self.f.spec:
            raise ValueError("modulus and residue over different fields")
        if not self.D.is_monic or self.D.degree < 1:
            raise ValueError("modulus must be monic of degree >= 1")
        if not self.f.degree < self.D.degree:
            raise ValueError("residue must satisfy deg f < deg D (reduce f mod D first)")
        if pr.poly_gcd(self.f, self.D).degree != 0:
            raise ValueError("residue must be coprime to the modulus")
        if not self.k > self.D.degree:
            raise ValueError("target degree must exceed deg D")

    @property
    def spec(self) -> FieldSpec:
        return self.D.spec

    @property
    def size(self) -> int:
        return self.spec.q ** (self.k - self.D.degree)

    def members(self):
        """All f + D*g with g monic of degree k - deg D, in g-code order."""
        r = self.k - self.D.degree
        for g in pr.all_monic(self.spec, r):
            yield pr.poly_add(self.f, pr.poly_mul(self.D, g))


@dataclass
class TypeCensus:
    """Counts per factorization type over an enumeration domain (zero counts omitted)."""

    k: int
    counts: dict[Partition, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def get(self, lam: Partition) -> int:
        return self.counts.get(lam, 0)

    def dense(self) -> list[tuple[Partition, int]]:
        """Every partition of k in canonical order, zeros included."""
        return [(lam, self.counts.get(lam, 0)) for lam in partitions_of(self.k)]


# ---------------------------------------------------------------------------
# Censuses
# ---------------------------------------------------------------------------

def _census_from_codes(spec: FieldSpec, k: int, codes, pt: tables.PolyTables) -> TypeCensus:
    counts: dict[Partition, int] = {}
    types = pt.types[k]
    parts = pt.partitions[k]
    for code in codes:
        lam = parts[int(types[code])]
        counts[lam] = counts.get(lam, 0) + 1
    return TypeCensus(k, counts)


def specialization_counts(f: Poly, g: Poly, m: int) -> TypeCensus:
    """Census of factorization types of f + g*h over all h with deg h <= m.

    The h of degree <= m run over the q^{m+1} coefficient vectors
    (a_0, ..., a_m); every specialization keeps degree deg f, so the
    census totals q^{m+1}.
    """
    spec = f.spec
    if g.spec != spec:
        raise ValueError("polynomials over different fields")
    if m < 0:
        raise ValueError("m must be >= 0")
    if f.is_zero or g.is_zero:
        raise ValueError("f and g must be nonzero")
    if pr.poly_gcd(f, g).degree != 0:
        raise ValueError("f and g must be coprime")
    k = f.degree
    if not k > g.degree + m:
        raise ValueError("need deg f > deg g + m")
    # scaling by the inverse leading coefficient changes neither gcds nor types
    if not f.is_monic:
        scale = pr.constant_poly(spec, gf.fe_inv(spec, f.leading()))
        f = pr.poly_mul(f, scale)
        g = pr.poly_mul(g, scale)
    q = spec.q
    pt = tables.cached_poly_tables(spec, k)
    counts: dict[Partition, int] = {}
    types = pt.types[k] if pt is not None else None
    parts = pt.partitions[k] if pt is not None else None
    for hcode in range(q ** (m + 1)):
        digits = []
        c = hcode
        for _ in range(m + 1):
            digits.append(c % q)
            c //= q
        h = pr.poly_from_indices(spec, digits)
        s = pr.poly_add(f, pr.poly_mul(g, h))
        if types is not None:
            lam = parts[int(types[pr.monic_code(s)])]
        else:
            lam = pr.factorization_type(s)
        counts[lam] = counts.get(lam, 0) + 1
    return TypeCensus(k, counts)


def interval_counts(interval: IntervalSpec) -> TypeCensus:
    """Census over a short interval; the entry at (k) is the prime count."""
    return specialization_counts(interval.f, pr.one_poly(interval.spec), interval.m)


def progression_counts(prog: ProgressionSpec) -> TypeCensus:
    """Census over the monic degree-k members of a residue class."""
    spec = prog.spec
    pt = tables.cached_poly_tables(spec, prog.k)
    if pt is not None:
        f_digits = list(prog.f.ci) + [0] * (prog.D.degree - len(prog.f.ci))
        codes = pt.progression_codes(prog.D.ci, f_digits, prog.k)
        return _census_from_codes(spec, prog.k, codes, pt)
    counts: dict[Partition, int] = {}
    for h in prog.members():
        lam = pr.factorization_type(h)
        counts[lam] = counts.get(lam, 0) + 1
    return TypeCensus(prog.k, counts)


# ---------------------------------------------------------------------------
# Totient and von Mangoldt
# ---------------------------------------------------------------------------

def poly_totient(d: Poly) -> int:
    """Number of units in F_q[t]/(d): q^{deg d} * prod_{P | d} (1 - q^{-deg P})."""
    if d.is_zero:
        raise ValueError("totient of the zero polynomial")
    q = d.spec.q
    result = 1
    for prime, mult in pr.factor(d).factors:
        deg = prime.degree
        result *= q ** (deg * (mult - 1)) * (q**deg - 1)
    return result


def von_mangoldt(g: Poly) -> int:
    """deg P when g is a unit times P^e (P irreducible, e >= 1); otherwise 0."""
    if g.is_zero:
        raise ValueError("von Mangoldt of the zero polynomial")
    if g.degree < 1:
        return 0
    fact = pr.factor(g)
    if len(fact.factors) != 1:
        return 0
    return fact.factors[0][0].degree


def nu(f: Poly, m: int) -> int:
    """Sum of the von Mangoldt function over interval members with nonzero constant term."""
    k = f.degree
    if not 1 <= m < k:
        raise ValueError(f"m = {m} out of range 1..{k - 1}")
    interval = IntervalSpec(f, m).canonical()
    spec = f.spec
    pt = tables.cached_poly_tables(spec, k)
    if pt is not None:
        base = interval.base_code()
        lam = pt.lambda_table(k)
        block = interval.size
        total = int(lam[base * block : (base + 1) * block].sum())
        # the only prime power with zero constant term is t^k (Lambda = 1)
        if base == 0:
            total -= 1
        return total
    total = 0
    for g in interval.members():
        if g.constant_index() != 0:
            total += von_mangoldt(g)
    return total


def mean_variance_nu(spec: FieldSpec, k: int, m: int, budget: int = DEFAULT_BUDGET) -> tuple[Fraction, Fraction]:
    """Exact mean and variance of nu(.; m) over all monic degree-k polynomials.

    One pass over M(k, q): members of a common interval share their nu
    value, so the q^k centers reduce to q^{k-m-1} interval sums each
    weighted by q^{m+1}.
    """
    if not 1 <= m < k:
        raise ValueError(f"m = {m} out of range 1..{k - 1}")
    if spec.q**k > budget:
        raise BudgetError(f"q^k = {spec.q**k} exceeds the enumeration budget {budget}")
    pt = tables.poly_tables(spec, k, budget)
    block = spec.q ** (m + 1)
    sums = pt.lambda_block_sums(k, block).tolist()
    sums[0] -= 1  # t^k lies in the base-0 interval and is filtered out
    n_blocks = len(sums)
    s1 = sum(sums)
    s2 = sum(s * s for s in sums)
    qk = spec.q**k
    mean = Fraction(block * s1, qk)
    var = (Fraction(s2) - 2 * mean * s1 + n_blocks * mean * mean) * Fraction(block, qk)
    return mean, var


# ---------------------------------------------------------------------------
# Radical sets and the nu decomposition
# ---------------------------------------------------------------------------

def radical_set(interval: IntervalSpec, d: int) -> list[Poly]:
    """All monic g of degree k/d with g^d in the interval, in code order."""
    k = interval.k
    if d <= 1 or k % d != 0:
        raise ValueError(f"d = {d} must be a divisor of k = {k} greater than 1")
    spec = interval.spec
    base = interval.base_code()
    size = interval.size
    out = []
    for g in pr.all_monic(spec, k // d):
        power = pr.poly_pow(g, d)
        if pr.monic_code(power) // size == base:
            out.append(g)
    return out


@dataclass(frozen=True)
class NuDecomposition:
    """nu(f; m) split into prime, proper prime-power and t^k contributions."""

    k_pi: int
    proper_terms: dict[int, int]
    epsilon: int
    reconstructed: int


def nu_decomposition(f: Poly, m: int) -> NuDecomposition:
    """Independent reconstruction of nu(f, m) from interval prime counts.

    reconstructed = k*pi(I) + sum over divisors 1 < d <= k of
    (k/d)*pi(I^{1/d}), minus epsilon = 1 when t^k lies in the interval:
    t^k is the unique prime power in a degree-k interval with vanishing
    constant term, so the constant-term filter in nu removes exactly
    epsilon.  (Verified against direct enumeration; the sign is pinned
    by the q=2, k=2, m=1 case where the filtered sum is 3 = 4 - 1.)
    """
    k = f.degree
    if not 1 <= m < k:
        raise ValueError(f"m = {m} out of range 1..{k - 1}")
    interval = IntervalSpec(f, m).canonical()
    k_pi = k * sum(1 for g in interval.members() if pr.is_irreducible(g))
    proper: dict[int, int] = {}
    for d in divisors(k):
        if d == 1:
            continue
        rad = radical_set(interval, d)
        pi_rad = sum(1 for g in rad if pr.is_irreducible(g))
        proper[d] = (k // d) * pi_rad
    epsilon = 1 if interval.base_code() == 0 else 0
    reconstructed = k_pi + sum(proper.values()) - epsilon
    return NuDecomposition(k_pi=k_pi, proper_terms=proper, epsilon=epsilon, reconstructed=reconstructed)
