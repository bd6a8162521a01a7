"""The tangent limit law as an atomic measure, and finite-size checks.

The limit distribution of the antisymmetric quadratic-form model is purely
atomic: mass 1/2 at zero and mass x^2/(4 - x^2) at the points +-x where
2/x = tan(1/x).  This module produces those atoms, the matching transform
evaluations, moment cross-checks between the atoms and the exact moment
series, convergence tables for finite models against the limit cumulants,
and the trace approximations of zeta values, tangent numbers and zigzag
numbers.  Atom data is binary64; everything upstream of it stays exact.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy

from .errors import (
    AtomProximityError,
    BracketError,
    DomainError,
    PoleProximityError,
)
from .matrices import (
    GaussianRational,
    HermitianMatrix,
    build_special,
    matrix_add,
    omega_moment,
    qf_cumulant_iid,
)
from .cumulants import CumulantSequence
from .series import (
    FormalSeries,
    elementary_series,
    limit_h_series,
    series_ratio,
    tangent_numbers,
    zigzag_numbers,
)

POLE_GUARD = 1e-6
ATOM_GUARD = 1e-9
_BRACKET_PAD = 1e-9
_BRACKET_WIDTH = 1e-13


@dataclass(frozen=True)
class AtomicMeasure:
    """A purely atomic measure: (location, mass) pairs sorted by location.

    Masses are positive, locations strictly increasing, and the total mass
    never exceeds 1 beyond binary64 slack.
    """

    atoms: tuple

    def __init__(self, atoms):
        pairs = tuple((float(loc), float(mass)) for loc, mass in atoms)
        if not pairs:
            raise DomainError("a measure needs at least one atom")
        for loc, mass in pairs:
            if not mass > 0:
                raise DomainError(f"atom at {loc} has nonpositive mass {mass}")
        locs = [loc for loc, _ in pairs]
        if sorted(locs) != locs or len(set(locs)) != len(locs):
            raise DomainError("atom locations must be strictly increasing")
        total = math.fsum(mass for _, mass in pairs)
        if total > 1 + 1e-12:
            raise DomainError(f"total mass {total} exceeds 1")
        object.__setattr__(self, "atoms", pairs)

    def total_mass(self) -> float:
        return math.fsum(mass for _, mass in self.atoms)

    def moment(self, m: int) -> float:
        """The m-th moment; exploits the +-x symmetry so that odd moments
        of a symmetric measure come out exactly zero."""
        if m < 0:
            raise DomainError(f"moment order must be nonnegative, got {m}")
        if m == 0:
            return self.total_mass()
        negatives = {-loc: mass for loc, mass in self.atoms if loc < 0}
        parts = []
        for loc, mass in self.atoms:
            if loc < 0:
                continue
            if loc == 0:
                continue  # zero location contributes nothing for m >= 1
            partner = negatives.pop(loc, None)
            if partner is None:
                parts.append(mass * loc**m)
            elif m % 2 == 0:
                parts.append((mass + partner) * loc**m)
            else:
                parts.append((mass - partner) * loc**m)
        for loc, mass in negatives.items():
            parts.append(mass * (-loc) ** m)
        return math.fsum(parts)


def _bisect(func, lo: float, hi: float) -> float:
    flo = func(lo)
    fhi = func(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise BracketError(
            f"no sign change over [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}"
        )
    while hi - lo >= _BRACKET_WIDTH:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # float resolution reached
        fmid = func(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0) == (fhi > 0):
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def _tangent_root(m: int) -> float:
    """The m-th positive root of tan(u) = 2u (m = 0 is the smallest)."""

    def g(u):
        return math.tan(u) - 2.0 * u

    if m == 0:
        lo, hi = math.pi / 4 + _BRACKET_PAD, math.pi / 2 - _BRACKET_PAD
    else:
        lo, hi = m * math.pi + _BRACKET_PAD, m * math.pi + math.pi / 2 - _BRACKET_PAD
    u = _bisect(g, lo, hi)
    # Newton polish toward the float-nearest root; g'(u) = tan(u)^2 - 1.
    for _ in range(3):
        t = math.tan(u)
        step = (t - 2.0 * u) / (t * t - 1.0)
        nxt = u - step
        if not lo <= nxt <= hi:
            break
        u = nxt
    return u


def tangent_atoms(pairs: int) -> AtomicMeasure:
    """The limit law truncated to its first `pairs` symmetric atom pairs.

    Each positive root u of tan(u) = 2u yields atoms at +-1/u with mass
    x^2/(4 - x^2) apiece; the atom (0, 1/2) is always present.
    """
    if pairs < 1:
        raise DomainError(f"need at least one atom pair, got {pairs}")
    entries = [(0.0, 0.5)]
    for m in range(pairs):
        u = _tangent_root(m)
        x = 1.0 / u
        mass = x * x / (4.0 - x * x)
        entries.append((x, mass))
        entries.append((-x, mass))
    entries.sort()
    return AtomicMeasure(entries)


def levy_atoms(terms: int) -> AtomicMeasure:
    """The first `terms` symmetric atom pairs of the jump measure.

    Atoms sit at +-2/(n pi) for odd n with mass x^4/(1 + x^2) each.
    """
    if terms < 1:
        raise DomainError(f"need at least one atom pair, got {terms}")
    entries = []
    for j in range(terms):
        n = 2 * j + 1
        x = 2.0 / (n * math.pi)
        mass = x**4 / (1.0 + x * x)
        entries.append((x, mass))
        entries.append((-x, mass))
    entries.sort()
    return AtomicMeasure(entries)


def self_energy_eval(z: float, pole_guard: float = POLE_GUARD) -> float:
    """The self-energy z^2 tan(1/z) - z; odd in z.

    Rejects z = 0 and points whose reciprocal falls within pole_guard of
    an odd multiple of pi/2, where tan blows up.
    """
    z = float(z)
    if z == 0.0:
        raise DomainError("self-energy is not defined at z = 0")
    w = 1.0 / z
    m = round(w / math.pi - 0.5)
    pole = (2 * m + 1) * math.pi / 2
    if abs(w - pole) < pole_guard:
        raise PoleProximityError(
            f"1/z = {w} is within {pole_guard} of the tan pole at {pole}"
        )
    return z * z * math.tan(w) - z


def levy_partial_sum(z: float, terms: int, atom_guard: float = ATOM_GUARD) -> float:
    """Partial sum of the jump-measure expansion of the self-energy.

    Sums 32 z / ((n^2 pi^2 z^2 - 4) n^2 pi^2) over odd n up to `terms`,
    smallest summands first.  Rejects z within atom_guard of any atom
    +-2/(n pi), where a summand blows up.  Odd in z, exactly so in
    binary64.
    """
    z = float(z)
    if terms < 1:
        raise DomainError(f"need at least one term, got {terms}")
    if z == 0.0:
        return 0.0
    near = 2.0 / (math.pi * abs(z))
    candidate = max(1, 2 * round((near - 1) / 2) + 1)
    for n in (candidate - 2, candidate, candidate + 2):
        if n >= 1 and abs(abs(z) - 2.0 / (n * math.pi)) < atom_guard:
            raise AtomProximityError(
                f"|z| = {abs(z)} is within {atom_guard} of the atom 2/({n} pi)"
            )
    top = terms if terms % 2 else terms - 1
    pi2 = math.pi * math.pi
    z2 = z * z
    acc = 0.0
    for n in range(top, 0, -2):
        n2 = float(n * n)
        acc += 32.0 * z / ((n2 * pi2 * z2 - 4.0) * n2 * pi2)
    return acc


@dataclass(frozen=True)
class MomentRow:
    """One moment-consistency line: atom sum vs exact series coefficient."""

    m: int
    atom_moment: float
    series_moment: float
    error: float


def moment_consistency(measure: AtomicMeasure, m_max: int) -> list:
    """Compare atom moments with the exact moment series through m_max.

    The moment series is 1/(2 - tan(z)/z); its coefficients are rational
    and get rounded to binary64 only for the comparison.
    """
    if m_max < 0:
        raise DomainError(f"moment order must be nonnegative, got {m_max}")
    tan = elementary_series("tan", m_max + 1)
    tan_over_z = FormalSeries(tan.coeffs[1:])
    one = FormalSeries((Fraction(1),) + (Fraction(0),) * m_max)
    series = series_ratio(one, 2 - tan_over_z, m_max)
    rows = []
    for m in range(m_max + 1):
        atom = measure.moment(m)
        exact = float(series.coefficient(m))
        rows.append(MomentRow(m, atom, exact, abs(atom - exact)))
    return rows


@dataclass(frozen=True)
class ConvergenceRow:
    """One finite-size-vs-limit line of a convergence table."""

    n: int
    r: int
    finite_value: float
    limit_value: float
    abs_error: float


def _system_matrix(a, b, n: int, exact: bool) -> HermitianMatrix:
    """The zero-diagonal weight matrix with (a + i b)/n above the diagonal."""
    if exact:
        re = Fraction(a) / n
        im = Fraction(b) / n
    else:
        re = float(a) / n
        im = float(b) / n
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(GaussianRational(re * 0, im * 0))
            elif i < j:
                row.append(GaussianRational(re, im))
            else:
                row.append(GaussianRational(re, -im))
        rows.append(row)
    return HermitianMatrix(rows)


def tangent_convergence(a, b, n_list, r_max: int) -> list:
    """Cumulants of the finite models against the limit law, per n and r.

    The underlying family has mean 1/sqrt(n) and variance 1 (higher
    cumulants zero; the zero-diagonal system matrix makes them
    unreachable anyway).  Perfect-square n run fully exact and are only
    rounded for the table; other n fall back to binary64 throughout.
    """
    if r_max < 1:
        raise DomainError(f"r_max must be positive, got {r_max}")
    limit = limit_h_series(a, b, r_max)
    rows = []
    for n in n_list:
        n = int(n)
        if n < 1:
            raise DomainError(f"model size must be positive, got {n}")
        root = math.isqrt(n)
        exact = root * root == n
        mean = Fraction(1, root) if exact else 1.0 / math.sqrt(n)
        one = Fraction(1) if exact else 1.0
        zero = Fraction(0) if exact else 0.0
        seq = CumulantSequence([mean, one] + [zero] * (2 * r_max - 2))
        system = _system_matrix(a, b, n, exact)
        for r in range(1, r_max + 1):
            finite = float(qf_cumulant_iid(system, seq, r).value)
            target = float(limit.coefficient(r))
            rows.append(ConvergenceRow(n, r, finite, target, abs(finite - target)))
    return rows


@lru_cache(maxsize=None)
def _p_series_target(exponent: int) -> float:
    """Direct p-series partial sum with terms above 1e-15, summed upward
    from the smallest."""
    bound = 10**15
    top = int(round(float(bound) ** (1.0 / exponent)))
    while (top + 1) ** exponent <= bound:
        top += 1
    while top**exponent > bound:
        top -= 1
    chunk = 1 << 22
    totals = []
    hi = top
    while hi >= 1:
        lo = max(1, hi - chunk + 1)
        block = numpy.arange(lo, hi + 1, dtype=numpy.float64)
        totals.append(float(numpy.sum(block ** float(-exponent))))
        hi = lo - 1
    return math.fsum(totals)


@dataclass(frozen=True)
class ApproxResult:
    """A trace approximation next to its target constant."""

    kind: str
    k: int
    n: int
    approx: float
    target: float
    rel_error: float


def zeta_zigzag_approx(kind: str, k: int, n: int) -> ApproxResult:
    """Finite-matrix trace approximations of classical constants.

    zeta:    pi^(2k+2) Tr(P B^(2k)) / (2 (2^(2k+2) - 1))  vs the p-series
             partial sum for exponent 2k+2 (k >= 0),
    tangent: (2k+1)! Tr(P B^(2k))  vs the tangent number (k >= 0),
    zigzag:  k! Tr(P (P+B)^(k-1)) / 2^(k-1)  vs the zigzag number (k >= 2).

    The traces are exact rationals; rounding happens only at the end.
    """
    if n < 1:
        raise DomainError(f"matrix size must be positive, got {n}")
    if k < 0:
        raise DomainError(f"k must be nonnegative, got {k}")
    if kind == "zeta":
        trace = omega_moment(build_special("B", n), 2 * k)
        approx = math.pi ** (2 * k + 2) * float(trace) / (2 * (2 ** (2 * k + 2) - 1))
        target = _p_series_target(2 * k + 2)
    elif kind == "tangent":
        trace = omega_moment(build_special("B", n), 2 * k)
        approx = float(math.factorial(2 * k + 1) * trace)
        target = float(tangent_numbers(k + 1)[k])
    elif kind == "zigzag":
        if k < 2:
            raise DomainError(f"zigzag approximation needs k >= 2, got {k}")
        summed = matrix_add(build_special("P", n), build_special("B", n))
        trace = omega_moment(summed, k - 1)
        approx = float(Fraction(math.factorial(k), 2 ** (k - 1)) * trace)
        target = float(zigzag_numbers(k)[k])
    else:
        raise DomainError(f"unknown kind {kind!r}, expected zeta, tangent or zigzag")
    rel = abs(approx - target) / abs(target)
    return ApproxResult(kind, k, n, approx, target, rel)
