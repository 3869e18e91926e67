"""Grid verification of interval and residue-class counting behavior.

Scans enumerate whole grids of intervals or residue classes, classify
each cell's hypothesis coverage, and record the maximum deviation of the
observed count from its expected value separately for covered and
excluded cells.  The deviation bound's constant is non-effective, so no
a-priori bound is asserted; instead the normalized empirical constant
|count - expected| / q^{m+1/2} is recorded and pinned by snapshot.

Reports are deterministic: cell work may be chunked across workers, but
chunks cover fixed contiguous ranges and merge by sums and maxima in
chunk order, so the assembled report is byte-identical for any worker
count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

from ffstat import gf, polyring as pr, tables
from ffstat import statistics as st
from ffstat.combinatorics import Partition, cycle_type_probability, exact_type_count
from ffstat.gf import FieldSpec
from ffstat.polyring import Poly
from ffstat.tables import DEFAULT_BUDGET, BudgetError


class CoverageStatus(str, Enum):
    COVERED = "Covered"
    EXCLUDED_SMALL_M = "ExcludedSmallM"
    EXCLUDED_CHAR_DIVIDES = "ExcludedCharDividesKKminus1"
    EXCLUDED_CHAR2_LOW_DERIVATIVE = "ExcludedChar2LowDerivative"
    EXCLUDED_CHAR2_CONSTANT_DERIVATIVE = "ExcludedChar2ConstantRationalDerivative"


@dataclass(frozen=True)
class Coverage:
    status: CoverageStatus
    detail: str

    @property
    def covered(self) -> bool:
        return self.status is CoverageStatus.COVERED


def check_hypotheses_interval(spec: FieldSpec, k: int, m: int, f: Poly) -> Coverage:
    """Classify an interval cell against the short-interval hypotheses.

    The supplied representative f is evaluated verbatim; for m <= 2 in
    characteristic 2 the derivative-degree condition does not depend on
    the choice of representative within the interval.
    """
    if not f.is_monic or f.degree != k:
        raise ValueError("representative must be monic of degree k")
    if m < 0 or m >= k:
        raise ValueError(f"m = {m} out of range")
    p = spec.p
    if m < 1:
        return Coverage(CoverageStatus.EXCLUDED_SMALL_M, f"m = {m} < 1 lies below the covered range")
    if (k * (k - 1)) % p == 0 and m < 2:
        return Coverage(
            CoverageStatus.EXCLUDED_CHAR_DIVIDES,
            f"p = {p} divides k(k-1) = {k * (k - 1)} and m = {m} < 2",
        )
    if p == 2 and m < 3:
        deriv = pr.derivative(f)
        if deriv.degree <= 1:
            return Coverage(
                CoverageStatus.EXCLUDED_CHAR2_LOW_DERIVATIVE,
                f"p = 2, deg f' = {deriv.degree} <= 1 and m = {m} < 3",
            )
    return Coverage(CoverageStatus.COVERED, "all hypotheses hold")


def check_hypotheses_progression(spec: FieldSpec, k: int, m: int, d_poly: Poly, f: Poly) -> Coverage:
    """Classify a residue-class cell against the progression hypotheses."""
    if not d_poly.is_monic or d_poly.degree != k - m - 1 or d_poly.degree < 1:
        raise ValueError("modulus degree must equal k - m - 1 >= 1")
    if pr.poly_gcd(f, d_poly).degree != 0:
        raise ValueError("residue must be coprime to the modulus")
    if m < 2:
        return Coverage(CoverageStatus.EXCLUDED_SMALL_M, f"m = {m} < 2")
    if spec.p == 2 and m == 2 and pr.rational_derivative_is_constant(f, d_poly):
        return Coverage(
            CoverageStatus.EXCLUDED_CHAR2_CONSTANT_DERIVATIVE,
            "p = m = 2 and (f/D)' is a constant",
        )
    return Coverage(CoverageStatus.COVERED, "all hypotheses hold")


# ---------------------------------------------------------------------------
# Deviation reports
# ---------------------------------------------------------------------------

@dataclass
class ScanOptions:
    workers: int = 1
    budget: int = DEFAULT_BUDGET
    per_cell: bool = False
    max_cells: Optional[int] = None


@dataclass(frozen=True)
class CellRecord:
    cell_id: int
    label: str
    count: int
    expected: Fraction
    abs_dev: Fraction
    status: CoverageStatus


@dataclass
class ExcludedAggregate:
    cells: int = 0
    min_count: Optional[int] = None
    max_count: Optional[int] = None


@dataclass
class DeviationReport:
    mode: str
    q: int
    k: int
    m: int
    lam: Partition
    cells: int
    covered_cells: int
    total_count: int
    expected: Optional[Fraction]
    max_abs_dev: Optional[Fraction]
    normalized_constant: Optional[str]
    excluded: dict[str, dict]
    truncated: bool = False
    per_cell: Optional[tuple[CellRecord, ...]] = None


def frac_str(fr: Fraction) -> str:
    return f"{fr.numerator}/{fr.denominator}"


def normalized_deviation(dev: Fraction, q: int, m: int) -> str:
    """|count - expected| / q^{m+1/2} rendered as a 12-significant-digit decimal."""
    value = float(dev) / (q**m * math.sqrt(q))
    return format(value, ".12g")


def report_to_dict(report: DeviationReport) -> dict:
    """JSON-ready dict; Fractions render as "num/den" strings."""
    out = {
        "mode": report.mode,
        "q": report.q,
        "k": report.k,
        "m": report.m,
        "lambda": str(report.lam),
        "cells": report.cells,
        "covered_cells": report.covered_cells,
        "total_count": report.total_count,
        "expected": frac_str(report.expected) if report.expected is not None else None,
        "max_abs_dev": frac_str(report.max_abs_dev) if report.max_abs_dev is not None else None,
        "normalized_constant": report.normalized_constant,
        "excluded": report.excluded,
        "truncated": report.truncated,
    }
    if report.per_cell is not None:
        out["per_cell"] = [
            {
                "cell_id": rec.cell_id,
                "label": rec.label,
                "count": rec.count,
                "expected": frac_str(rec.expected),
                "abs_dev": frac_str(rec.abs_dev),
                "status": rec.status.value,
            }
            for rec in report.per_cell
        ]
    return out


class _Aggregator:
    """Order-independent cell aggregation: sums, extreme counts per status."""

    def __init__(self):
        self.cells = 0
        self.covered_cells = 0
        self.total_count = 0
        self.covered_min: Optional[int] = None
        self.covered_max: Optional[int] = None
        self.excluded: dict[str, ExcludedAggregate] = {}
        self.rows: list[CellRecord] = []

    def add(self, count: int, coverage: Coverage, record: Optional[CellRecord]) -> None:
        self.cells += 1
        self.total_count += count
        if coverage.covered:
            self.covered_cells += 1
            if self.covered_min is None or count < self.covered_min:
                self.covered_min = count
            if self.covered_max is None or count > self.covered_max:
                self.covered_max = count
        else:
            agg = self.excluded.setdefault(coverage.status.value, ExcludedAggregate())
            agg.cells += 1
            if agg.min_count is None or count < agg.min_count:
                agg.min_count = count
            if agg.max_count is None or count > agg.max_count:
                agg.max_count = count
        if record is not None:
            self.rows.append(record)

    def merge(self, other: "_Aggregator") -> None:
        self.cells += other.cells
        self.covered_cells += other.covered_cells
        self.total_count += other.total_count
        for lo, hi in ((other.covered_min, other.covered_max),):
            if lo is not None:
                if self.covered_min is None or lo < self.covered_min:
                    self.covered_min = lo
                if self.covered_max is None or hi > self.covered_max:
                    self.covered_max = hi
        for status, agg in other.excluded.items():
            mine = self.excluded.setdefault(status, ExcludedAggregate())
            mine.cells += agg.cells
            if agg.min_count is not None:
                if mine.min_count is None or agg.min_count < mine.min_count:
                    mine.min_count = agg.min_count
                if mine.max_count is None or agg.max_count > mine.max_count:
                    mine.max_count = agg.max_count
        self.rows.extend(other.rows)


def _max_dev(min_count: Optional[int], max_count: Optional[int], expected: Fraction) -> Optional[Fraction]:
    if min_count is None:
        return None
    return max(abs(Fraction(min_count) - expected), abs(Fraction(max_count) - expected))


def _run_chunks(worker, n_chunks_hint: int, total: int):
    """Split [0, total) into contiguous chunks and merge results in chunk order."""
    workers = max(1, n_chunks_hint)
    bounds = []
    step = -(-total // workers) if total else 0
    lo = 0
    while lo < total:
        hi = min(lo + step, total)
        bounds.append((lo, hi))
        lo = hi
    if not bounds:
        bounds = [(0, 0)]
    if workers == 1 or len(bounds) == 1:
        results = [worker(lo, hi) for lo, hi in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda b: worker(*b), bounds))
    merged = results[0]
    for res in results[1:]:
        merged.merge(res)
    return merged


def _excluded_dict(agg: _Aggregator, expected: Fraction) -> dict[str, dict]:
    out = {}
    for status in sorted(agg.excluded):
        ex = agg.excluded[status]
        dev = _max_dev(ex.min_count, ex.max_count, expected)
        out[status] = {
            "cells": ex.cells,
            "max_abs_dev": frac_str(dev) if dev is not None else None,
        }
    return out


def scan_intervals(spec: FieldSpec, k: int, m: int, lam: Partition, options: Optional[ScanOptions] = None) -> DeviationReport:
    """Scan every distinct interval of M(k, q) for one factorization type.

    Iterates the q^{k-m-1} canonical representatives (low coefficients
    zeroed), classifies each against the hypotheses, and aggregates the
    deviation |count - P(lam) q^{m+1}| over covered cells; excluded
    cells are tallied per status, never merged into the covered figures.
    """
    opts = options or ScanOptions()
    if not 1 <= m < k:
        raise ValueError(f"m = {m} out of range 1..{k - 1}")
    if lam.k != k:
        raise ValueError(f"{lam} is not a partition of {k}")
    q = spec.q
    if q**k > opts.budget:
        raise BudgetError(
            f"projected enumeration of {q}^{k} = {q**k} polynomials "
            f"({q ** (k - m - 1)} cells) exceeds the budget {opts.budget}"
        )
    pt = tables.poly_tables(spec, k, opts.budget)
    pid = pt.pid_of(lam)
    block = q ** (m + 1)
    n_bases = q ** (k - m - 1)
    expected = cycle_type_probability(lam) * block

    def work(lo: int, hi: int) -> _Aggregator:
        agg = _Aggregator()
        if lo == hi:
            return agg
        counts = pt.block_counts(k, pid, block, lo, hi)
        for i, base in enumerate(range(lo, hi)):
            rep = pr.monic_from_code(spec, k, base * block)
            cov = check_hypotheses_interval(spec, k, m, rep)
            count = int(counts[i])
            record = None
            if opts.per_cell:
                dev = abs(Fraction(count) - expected)
                record = CellRecord(base, pr.poly_text(rep), count, expected, dev, cov.status)
            agg.add(count, cov, record)
        return agg

    agg = _run_chunks(work, opts.workers, n_bases)
    max_dev = _max_dev(agg.covered_min, agg.covered_max, expected)
    return DeviationReport(
        mode="interval",
        q=q,
        k=k,
        m=m,
        lam=lam,
        cells=agg.cells,
        covered_cells=agg.covered_cells,
        total_count=agg.total_count,
        expected=expected,
        max_abs_dev=max_dev,
        normalized_constant=normalized_deviation(max_dev, q, m) if max_dev is not None else None,
        excluded=_excluded_dict(agg, expected),
        per_cell=tuple(agg.rows) if opts.per_cell else None,
    )


def scan_progressions(spec: FieldSpec, k: int, m: int, lam: Partition, options: Optional[ScanOptions] = None) -> DeviationReport:
    """Scan residue classes f mod D over all monic D of degree k - m - 1.

    Cells are (D, f) pairs with f a coprime residue, in (D-code, f-code)
    order, optionally truncated after `max_cells` cells (deterministic
    prefix, never sampled).  Each cell's count is compared to the exact
    rational pi_q(k; lam) / phi(D).
    """
    opts = options or ScanOptions()
    delta = k - m - 1
    if delta < 1:
        raise ValueError(f"deg D = k - m - 1 = {delta} must be >= 1")
    if m < 0:
        raise ValueError("m must be >= 0")
    if lam.k != k:
        raise ValueError(f"{lam} is not a partition of {k}")
    q = spec.q
    block = q ** (m + 1)
    # cells are bounded by q^{2 delta}; enumeration touches block members per cell
    projected_cells = q ** (2 * delta) if opts.max_cells is None else min(q ** (2 * delta), opts.max_cells)
    if projected_cells * block > opts.budget:
        raise BudgetError(
            f"projected enumeration of {projected_cells} cells x {block} members "
            f"exceeds the budget {opts.budget}"
        )
    pt = tables.poly_tables(spec, k, opts.budget)
    pid = pt.pid_of(lam)
    pi_lam = exact_type_count(q, k, lam)
    types = pt.types[k]

    cells: list[tuple[int, Poly, Poly, Fraction]] = []
    truncated = False
    for dcode in range(q**delta):
        d_poly = pr.monic_from_code(spec, delta, dcode)
        phi: Optional[int] = None
        for fcode in range(q**delta):
            digits = []
            c = fcode
            for _ in range(delta):
                digits.append(c % q)
                c //= q
            f_poly = pr.poly_from_indices(spec, digits)
            if pr.poly_gcd(f_poly, d_poly).degree != 0:
                continue
            if phi is None:
                phi = st.poly_totient(d_poly)
            if opts.max_cells is not None and len(cells) >= opts.max_cells:
                truncated = True
                break
            cell_id = dcode * q**delta + fcode
            cells.append((cell_id, d_poly, f_poly, Fraction(pi_lam, phi)))
        if truncated:
            break

    # expected varies per cell (phi(D) differs), so deviations aggregate as per-cell maxima
    def work_exact(lo: int, hi: int):
        agg = _Aggregator()
        agg.cov_dev_max = None
        agg.excl_dev_max = {}
        for idx in range(lo, hi):
            cell_id, d_poly, f_poly, expected = cells[idx]
            f_digits = list(f_poly.ci) + [0] * (delta - len(f_poly.ci))
            codes = pt.progression_codes(d_poly.ci, f_digits, k)
            count = int((types[codes] == pid).sum())
            cov = check_hypotheses_progression(spec, k, m, d_poly, f_poly)
            dev = abs(Fraction(count) - expected)
            record = None
            if opts.per_cell:
                label = f"D={pr.poly_text(d_poly)};f={pr.poly_text(f_poly)}"
                record = CellRecord(cell_id, label, count, expected, dev, cov.status)
            agg.add(count, cov, record)
            if cov.covered:
                if agg.cov_dev_max is None or dev > agg.cov_dev_max:
                    agg.cov_dev_max = dev
            else:
                key = cov.status.value
                if key not in agg.excl_dev_max or dev > agg.excl_dev_max[key]:
                    agg.excl_dev_max[key] = dev
        return agg

    def merge_exact(a, b):
        a.merge(b)
        if b.cov_dev_max is not None and (a.cov_dev_max is None or b.cov_dev_max > a.cov_dev_max):
            a.cov_dev_max = b.cov_dev_max
        for key, dev in b.excl_dev_max.items():
            if key not in a.excl_dev_max or dev > a.excl_dev_max[key]:
                a.excl_dev_max[key] = dev
        return a

    total = len(cells)
    workers = max(1, opts.workers)
    bounds = []
    step = -(-total // workers) if total else 0
    lo = 0
    while lo < total:
        bounds.append((lo, min(lo + step, total)))
        lo = min(lo + step, total)
    if not bounds:
        bounds = [(0, 0)]
    if workers == 1 or len(bounds) == 1:
        results = [work_exact(lo, hi) for lo, hi in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda b: work_exact(*b), bounds))
    agg = results[0]
    for res in results[1:]:
        agg = merge_exact(agg, res)

    max_dev = agg.cov_dev_max
    excl = {}
    for status in sorted(agg.excluded):
        ex = agg.excluded[status]
        dev = agg.excl_dev_max.get(status)
        excl[status] = {"cells": ex.cells, "max_abs_dev": frac_str(dev) if dev is not None else None}
    return DeviationReport(
        mode="progression",
        q=q,
        k=k,
        m=m,
        lam=lam,
        cells=agg.cells,
        covered_cells=agg.covered_cells,
        total_count=agg.total_count,
        expected=None,
        max_abs_dev=max_dev,
        normalized_constant=normalized_deviation(max_dev, q, m) if max_dev is not None else None,
        excluded=excl,
        truncated=truncated,
        per_cell=tuple(agg.rows) if opts.per_cell else None,
    )


# ---------------------------------------------------------------------------
# Counterexamples and the variance trend
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CounterexampleReport:
    kind: str
    q: int
    k: int
    expected: Optional[int]
    actual: int
    agrees: Optional[bool]


def _int_totient(k: int) -> int:
    return sum(1 for i in range(1, k + 1) if math.gcd(i, k) == 1)


def counterexample_m0(spec: FieldSpec, k: int) -> CounterexampleReport:
    """Prime count in I(t^k, 0) versus the closed form.

    The q polynomials t^k + a contain no primes unless q = 1 mod k, in
    which case exactly phi(k)(q-1)/k of them are prime.
    """
    if k <= 1:
        raise ValueError("k must be > 1")
    q = spec.q
    if q % k == 1:
        expected = _int_totient(k) * (q - 1) // k
    else:
        expected = 0
    tk = pr.monomial(spec, k)
    actual = 0
    for idx in range(q):
        member = pr.poly_add(tk, pr.constant_poly(spec, gf.element_from_index(spec, idx)))
        if pr.is_irreducible(member):
            actual += 1
    return CounterexampleReport("m0", q, k, expected, actual, expected == actual)


def counterexample_m1(p: int, n: int, variant: str = "p2", budget: int = DEFAULT_BUDGET) -> CounterexampleReport:
    """Prime count in I(t^k, 1) over F_{p^{2n}} for k = p^2 (or the k = p^2 + 1 variant).

    For k = p^2 the count is provably zero and the report asserts it;
    the k = p^2 + 1 variant is recorded without an asserted expectation
    (only its analogue is stated, for a group on the projective line).
    """
    if variant not in ("p2", "p2+1"):
        raise ValueError("variant must be 'p2' or 'p2+1'")
    spec = gf.make_field(p, 2 * n)
    q = spec.q
    if q * q > budget:
        raise BudgetError(f"q^2 = {q * q} exceeds the enumeration budget {budget}")
    k = p * p if variant == "p2" else p * p + 1
    actual = 0
    for a_idx in range(q):
        for b_idx in range(q):
            ci = [b_idx, a_idx] + [0] * (k - 2) + [1]
            member = pr.poly_from_indices(spec, ci)
            if pr.is_irreducible(member):
                actual += 1
    expected = 0 if variant == "p2" else None
    agrees = (actual == expected) if expected is not None else None
    return CounterexampleReport("m1", q, k, expected, actual, agrees)


@dataclass(frozen=True)
class VarianceTrendReport:
    k: int
    m: int
    per_q: tuple[tuple[int, Fraction], ...]
    limit: int


def variance_trend(k: int, m: int, q_list, budget: int = DEFAULT_BUDGET) -> VarianceTrendReport:
    """Exact Var nu(.;m) / q^{m+1} for each q, with the large-q limit k - m - 2.

    Requires m < k - 3, the range where the limit statement applies.
    """
    if not 1 <= m < k - 3:
        raise ValueError(f"m = {m} outside the valid range 1 <= m < k - 3 = {k - 3}")
    per_q = []
    for q in q_list:
        p, nu_exp = gf.prime_power(q)
        spec = gf.make_field(p, nu_exp)
        _, var = st.mean_variance_nu(spec, k, m, budget)
        per_q.append((q, var / q ** (m + 1)))
    return VarianceTrendReport(k=k, m=m, per_q=tuple(per_q), limit=k - m - 2)
