"""Certificate layer: exact sextic sums, grouped upper bound, systems.

The object under test is the sextic interaction sum

    S = sum over D of sum over triple pairs (R1, R2) with sum D of
        p(R1) p(R2) fhat(R1) conj(fhat(R2)) I(R1 join R2),

where p counts permutations of a triple and I is the six-fold Bessel
product integral. ``compute_S_exact`` evaluates S literally on a finite
support. ``compute_S_upper_bound`` evaluates the eleven grouped sums
that dominate S after every cross term has been split by Cauchy-Schwarz,
a weighted AM-GM with one free weight b, and one free weight eps_D per
exception point. ``check_systems`` certifies, per exception shape, that
the grouped coefficients stay below the interaction margin 3F, which is
what makes the grouped bound at most I(0,0,0) times the cubed mass.
``verify_theorem`` compares both ends with a three-valued verdict.

Lower bounds for the ratio F come in two flavors: recorded analytic
window floors (strict inequalities, trusted as assumptions and
corroborated on finite windows by the integrals test suite) and direct
quadrature intervals computed on demand. Every verdict consumes
interval endpoints, so "holds" survives worst-case quadrature error.
"""

from __future__ import annotations

import functools
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Mapping

from .errors import CertificateError, RangeError, StructureViolation
from .integrals import (
    DEFAULT_R_MAX,
    DEFAULT_TOL,
    MAX_SEXTET_ORDER,
    IntegralValue,
    f_ratio,
    i_direct,
)
from .spectrum import (
    ClassifiedPoint,
    ExceptionKind,
    PointKind,
    SpectrumSet,
    TripleRep,
    classify_brute_force,
)

MAX_SUPPORT = 11        # sextet enumeration is O(support^6) grouped by D
IMAG_REL_TOL = 1.0e-9   # conjugate symmetry makes S real; larger is a bug
DEFAULT_B = 6.66

# Analytic window floors for F(a, b, c) = I(0,0,0) / I(a,b,c), recorded
# as assumptions. The integrals tests corroborate each on a finite
# window; none is re-derived here. "member" rows apply when every
# modulus belongs to the spectrum's lambda sequence.
F_FLOOR_SINGLE = 5.0           # (n,0,0), n >= 1; equality at n = 1
F_FLOOR_PAIR0 = 7.94           # (n,n,0), n >= 1
F_FLOOR_PAIR0_HIGH = 10.8      # (n,n,0), n >= 3
F_FLOOR_TRIPLE = 3.2           # (n,n,n), n >= 1
F_FLOOR_PAIR = 10.0            # (n,n,m), n != m >= 1, except {n,m} = {1,2}
F_FLOOR_PAIR_MEMBER = 13.2
F_FLOOR_DISTINCT = 18.0        # (n,m,k), n > m > k >= 0, except (3,2,0)
F_FLOOR_DISTINCT_MEMBER = 21.0


# ---------------------------------------------------------------------------
# coefficient vectors


@dataclass(frozen=True)
class CoefficientVector:
    """Finitely supported Fourier coefficients bound to a spectrum.

    ``entries`` keeps nonzero amplitudes only, sorted by frequency, so
    equal vectors compare equal regardless of construction order.
    """

    spectrum: SpectrumSet
    entries: tuple[tuple[int, complex], ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for n, z in self.entries:
            if n not in self.spectrum:
                raise RangeError(f"frequency {n} is not a spectrum element")
            if n in seen:
                raise RangeError(f"duplicate frequency {n}")
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise RangeError(f"amplitude at {n} is not finite")
            seen.add(n)

    @staticmethod
    def from_dict(spectrum: SpectrumSet, values: Mapping[int, complex]) -> "CoefficientVector":
        entries = tuple(
            (int(n), complex(z)) for n, z in sorted(values.items()) if complex(z) != 0
        )
        return CoefficientVector(spectrum, entries)

    @staticmethod
    def constant(spectrum: SpectrumSet, value: complex = 1.0) -> "CoefficientVector":
        return CoefficientVector.from_dict(spectrum, {n: value for n in spectrum.elements})

    @functools.cached_property
    def _map(self) -> dict[int, complex]:
        return dict(self.entries)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(n for n, _ in self.entries)

    def amp(self, n: int) -> complex:
        return self._map.get(n, 0.0 + 0.0j)

    def mass(self) -> float:
        return sum(abs(z) ** 2 for _, z in self.entries)


# ---------------------------------------------------------------------------
# interaction values, cached per (orders, quadrature knobs)


@functools.lru_cache(maxsize=16384)
def _interaction_pos(orders: tuple[int, ...], r_max: float, tol: float) -> IntegralValue:
    return i_direct(orders, r_max=r_max, tol=tol)


def _interaction(sextet: tuple[int, ...], r_max: float, tol: float) -> IntegralValue:
    # J_{-n} = (-1)^n J_n: cache on sorted moduli, reapply the parity
    parity = sum(abs(n) for n in sextet if n < 0) % 2
    base = _interaction_pos(tuple(sorted(abs(n) for n in sextet)), r_max, tol)
    if parity:
        return IntegralValue(-base.value, base.error_bound, base.method, base.guaranteed)
    return base


def _diag(m1: int, m2: int, m3: int, r_max: float, tol: float) -> IntegralValue:
    a, b, c = sorted((abs(m1), abs(m2), abs(m3)))
    return _interaction_pos((a, a, b, b, c, c), r_max, tol)


@functools.lru_cache(maxsize=64)
def _classified_map(spectrum: SpectrumSet) -> dict[int, ClassifiedPoint]:
    return {c.point: c for c in classify_brute_force(spectrum)}


# ---------------------------------------------------------------------------
# basic inequality and the window for its weight b


def check_basic_inequality(r: float, s: float, b: float) -> bool:
    """r^3 s <= b/(2b-2) r^4 + 1/(2b-2) s^4 + (b-3)/(2b-2) r^2 s^2.

    Evaluated in exact rational arithmetic (floats are dyadic), so the
    verdict is immune to cancellation near the r = s equality line.
    """
    if not b > 1:
        raise RangeError(f"weight b must exceed 1, got {b}")
    if r < 0 or s < 0:
        raise RangeError("r and s must be non-negative")
    rq, sq, bq = Fraction(r), Fraction(s), Fraction(b)
    lhs = rq**3 * sq
    rhs = (bq * rq**4 + sq**4 + (bq - 3) * rq**2 * sq**2) / (2 * bq - 2)
    return lhs <= rhs


@dataclass(frozen=True)
class BWindow:
    """Closed feasible interval for the weight b, with exact endpoints."""

    lo: float
    hi: float
    lo_exact: Fraction
    hi_exact: Fraction
    feasible: bool
    binding_lower: str
    binding_upper: str


def feasible_b_interval(f_pair_zero_lo: float = F_FLOOR_PAIR0) -> BWindow:
    """Intersect the two b-dependent global rows against 3*F(n,n,0).

    Row "9(b+1)/(b-1) + 9 <= 3F" forces b >= R/(R-18) and row
    "9(b-3)/(b-1) + 18 <= 3F" forces b <= (45-R)/(27-R), where
    R = 3*F(n,n,0) at its minimal verified floor. Solved exactly.
    """
    floor = Fraction(str(f_pair_zero_lo))
    if floor <= 0:
        raise RangeError(f"F floor must be positive, got {f_pair_zero_lo}")
    r3 = 3 * floor
    low_desc = f"9(b+1)/(b-1) + 9 <= {float(r3)}"
    high_desc = f"9(b-3)/(b-1) + 18 <= {float(r3)}"
    if r3 <= 18:
        # the quartic row already fails for every b > 1
        return BWindow(math.inf, -math.inf, Fraction(0), Fraction(0), False, low_desc, high_desc)
    lo = r3 / (r3 - 18)
    if r3 < 27:
        hi = (45 - r3) / (27 - r3)
    else:
        hi = Fraction(10**9)  # the cross row is vacuous for b > 1
    feasible = 1 < lo <= hi
    return BWindow(float(lo), float(hi), lo, hi, feasible, low_desc, high_desc)


# ---------------------------------------------------------------------------
# norm expansion


@dataclass(frozen=True)
class NormSixth:
    """(sum |fhat|^2)^3 next to its grouped nine-sum expansion."""

    mass_cubed: float
    grouped: float

    @property
    def value(self) -> float:
        return self.mass_cubed


def compute_norm6(f: CoefficientVector) -> NormSixth:
    """Cube of the squared l2 mass, plus the grouped expansion.

    The grouped form splits ordered frequency triples by modulus
    pattern; the two results must agree to 1e-12 relative (tested).
    """
    x = {n: abs(z) ** 2 for n, z in f.entries}
    supp = f.support
    mass = sum(x.values())
    x0 = x.get(0, 0.0)

    def xm(n: int) -> float:
        return x.get(n, 0.0)

    grouped = x0**3                                               # 0,0,0
    g_distinct = 0.0
    for u in supp:
        for v in supp:
            if abs(u) == abs(v):
                continue
            for w in supp:
                if abs(w) == abs(u) or abs(w) == abs(v):
                    continue
                g_distinct += x[u] * x[v] * x[w]
    grouped += g_distinct
    for u in supp:
        if u == 0:
            continue
        grouped += x[u] ** 3                                      # n,n,n
        grouped += 3.0 * x[u] ** 2 * x0                           # n,n,0
        grouped += 3.0 * x[u] * x[u] * xm(-u)                     # n,n,-n
        grouped += 3.0 * x[u] * xm(-u) * x0                       # n,-n,0
        grouped += 3.0 * x[u] * x0**2                             # n,0,0
        for v in supp:
            if v == 0 or abs(v) == abs(u):
                continue
            grouped += 3.0 * x[u] ** 2 * x[v]                     # n,n,m
            grouped += 3.0 * x[u] * x[v] * xm(-v)                 # n,m,-m
    return NormSixth(mass_cubed=mass**3, grouped=grouped)


# ---------------------------------------------------------------------------
# exact sextic sum


@dataclass(frozen=True)
class SextetSum:
    """The interaction sum with its error bound and its two-part split."""

    value: float
    error_bound: float
    p3_part: float
    exceptional_part: float


def _fprod(f: CoefficientVector, rep: TripleRep) -> complex:
    z = 1.0 + 0.0j
    for n in rep.entries:
        z *= f.amp(n)
    return z


def compute_S_exact(
    f: CoefficientVector,
    *,
    r_max: float = DEFAULT_R_MAX,
    tol: float = DEFAULT_TOL,
) -> SextetSum:
    """Evaluate S literally, grouped by the shared triple sum D.

    Each unordered support triple R carries weight p(R); a pair
    (R1, R2) with equal sums contributes p(R1) p(R2) fhat(R1)
    conj(fhat(R2)) I(R1 join R2). Diagonal pairs reduce to the squared
    triple integral; mixed pairs hit the direct quadrature, cached on
    sorted moduli. The split tallies D by its classification in the
    ambient spectrum.
    """
    supp = f.support
    if len(supp) > MAX_SUPPORT:
        raise RangeError(f"support size {len(supp)} exceeds cap {MAX_SUPPORT}")
    classified = _classified_map(f.spectrum)
    by_d: dict[int, list[TripleRep]] = defaultdict(list)
    for combo in combinations_with_replacement(sorted(supp), 3):
        by_d[combo[0] + combo[1] + combo[2]].append(TripleRep(combo))

    total = 0.0 + 0.0j
    part_p3 = 0.0 + 0.0j
    part_e = 0.0 + 0.0j
    err = 0.0
    for d in sorted(by_d):
        point = classified.get(d)
        is_exception = point is not None and point.kind is PointKind.EXCEPTION
        bucket = 0.0 + 0.0j
        reps = by_d[d]
        for r1 in reps:
            z1 = _fprod(f, r1)
            if z1 == 0:
                continue
            for r2 in reps:
                z2 = _fprod(f, r2)
                if z2 == 0:
                    continue
                weight = float(r1.perm_count * r2.perm_count)
                ival = _interaction(r1.entries + r2.entries, r_max, tol)
                term = weight * z1 * z2.conjugate()
                bucket += term * ival.value
                err += abs(term) * ival.error_bound
        total += bucket
        if is_exception:
            part_e += bucket
        else:
            part_p3 += bucket
    if abs(total.imag) > IMAG_REL_TOL * abs(total.real) + 1.0e-300:
        raise CertificateError(
            f"sextic sum has imaginary part {total.imag} against real {total.real}"
        )
    return SextetSum(
        value=total.real,
        error_bound=err,
        p3_part=part_p3.real,
        exceptional_part=part_e.real,
    )


# ---------------------------------------------------------------------------
# certificate parameters and the grouped upper bound


def default_a_exponent(spectrum: SpectrumSet, n1: int, n2: int) -> int:
    """Exponent on eps for the quartic cross sum at (n1, n2).

    Zero unless D = 2 n1 + n2 is twice a spectrum element; then +1 for
    the n2 = 0 writing and -1 for the other. The two writings of one D
    never both have n2 = 0, so the split is consistent.
    """
    if not spectrum.is_double(2 * n1 + n2):
        return 0
    return 1 if n2 == 0 else -1


@dataclass(frozen=True)
class CertificateParams:
    """Weights of the grouped bound: one b, one eps per exception."""

    b: float = DEFAULT_B
    eps: tuple[tuple[int, float], ...] = ()
    a_rule: Callable[[SpectrumSet, int, int], int] | None = None

    def __post_init__(self) -> None:
        if not self.b > 1:
            raise RangeError(f"weight b must exceed 1, got {self.b}")
        for d, e in self.eps:
            if not (e > 0 and math.isfinite(e)):
                raise RangeError(f"eps for exception {d} must be positive, got {e}")

    @staticmethod
    def from_mapping(b: float, eps: Mapping[int, float]) -> "CertificateParams":
        return CertificateParams(b=b, eps=tuple(sorted(eps.items())))

    @functools.cached_property
    def _eps_map(self) -> dict[int, float]:
        return dict(self.eps)

    def eps_for(self, d: int) -> float:
        try:
            return self._eps_map[d]
        except KeyError:
            raise CertificateError(f"no eps assigned for exception point {d}") from None

    def a_exponent(self, spectrum: SpectrumSet, n1: int, n2: int) -> int:
        rule = self.a_rule if self.a_rule is not None else default_a_exponent
        return rule(spectrum, n1, n2)


@dataclass(frozen=True)
class BoundValue:
    """A one-sided bound together with its propagated quadrature error."""

    value: float
    error_bound: float


def compute_S_upper_bound(
    f: CoefficientVector,
    params: CertificateParams,
    *,
    r_max: float = DEFAULT_R_MAX,
    tol: float = DEFAULT_TOL,
) -> BoundValue:
    """The eleven grouped sums dominating S, coefficients as printed.

    Indicator data (exception membership and its two subclasses) comes
    from the ambient spectrum's classification; eps weights are looked
    up per fired exception and a missing one is a hard error. The
    propagated error adds |coefficient| times each integral's bound.
    """
    A = f.spectrum
    classified = _classified_map(A)
    supp = f.support
    x = {n: abs(z) ** 2 for n, z in f.entries}
    b = params.b
    if not b > 1:
        raise RangeError(f"weight b must exceed 1, got {b}")

    def xm(n: int) -> float:
        return x.get(n, 0.0)

    def in_e2(d: int) -> bool:
        c = classified.get(d)
        return (
            c is not None
            and c.kind is PointKind.EXCEPTION
            and c.subtype is ExceptionKind.ONE_DISTINCT
        )

    def in_e1(d: int) -> bool:
        c = classified.get(d)
        return (
            c is not None
            and c.kind is PointKind.EXCEPTION
            and c.subtype is ExceptionKind.BOTH_REPEAT
        )

    total = 0.0
    err = 0.0

    def add(coeff: float, monomial: float, ival: IntegralValue) -> None:
        nonlocal total, err
        if monomial == 0.0:
            return
        total += coeff * monomial * ival.value
        err += abs(coeff) * monomial * ival.error_bound

    # distinct-moduli triples: 15, plus 6/eps when the sum is a
    # one-distinct exception
    for n1 in supp:
        for n2 in supp:
            if abs(n1) == abs(n2):
                continue
            for n3 in supp:
                if abs(n3) == abs(n1) or abs(n3) == abs(n2):
                    continue
                d = n1 + n2 + n3
                coeff = 15.0
                if in_e2(d):
                    coeff += 6.0 / params.eps_for(d)
                add(coeff, x[n1] * x[n2] * x[n3], _diag(n1, n2, n3, r_max, tol))

    for n1 in supp:
        if n1 == 0:
            continue
        # quartic cross sums over n2 with a different modulus
        for n2 in supp:
            if abs(n1) == abs(n2):
                continue
            d = 2 * n1 + n2
            mono = x[n1] ** 2 * x[n2]
            ival = _diag(n1, n1, n2, r_max, tol)
            coeff = 9.0 * (1.0 + (1.0 if n2 != 0 else 0.0))
            if in_e2(d):
                coeff += 9.0 * params.eps_for(d)
            add(coeff, mono, ival)
            if in_e1(d):
                if A.is_triple(d):
                    add(9.0 / params.eps_for(d), mono, ival)
                else:
                    a = params.a_exponent(A, n1, n2)
                    add(9.0 * params.eps_for(d) ** a if a else 9.0, mono, ival)
            # paired-conjugate cross sum, nonzero opposite modulus only
            if n2 != 0:
                add(9.0, x[n1] * xm(-n1) * x[n2], ival)
        # pure sixth powers: 1, plus eps when 3 n1 is an exception
        d3 = 3 * n1
        coeff = 1.0
        if in_e1(d3) or in_e2(d3):
            coeff += params.eps_for(d3)
        ival3 = _diag(n1, n1, n1, r_max, tol)
        add(coeff, x[n1] ** 3, ival3)
        add(9.0, x[n1] ** 2 * xm(-n1), ival3)
        # rows against the zero frequency
        ival0 = _diag(n1, n1, 0, r_max, tol)
        add(9.0 * (b + 1.0) / (b - 1.0), x[n1] ** 2 * x.get(0, 0.0), ival0)
        add(9.0 * (b - 3.0) / (b - 1.0), x[n1] * xm(-n1) * x.get(0, 0.0), ival0)
        add(6.0, x[n1] * x.get(0, 0.0) ** 2, _diag(n1, 0, 0, r_max, tol))
    # conjugate-pair square sums, any first modulus
    for n1 in supp:
        for n2 in supp:
            if abs(n1) == abs(n2):
                continue
            coeff = 18.0 - (9.0 if n2 == 0 else 0.0)
            add(coeff, x[n1] * x[n2] * xm(-n2), _diag(n1, n2, n2, r_max, tol))
    # the constant-mode cube
    add(1.0, x.get(0, 0.0) ** 3, _diag(0, 0, 0, r_max, tol))
    return BoundValue(value=total, error_bound=err)


# ---------------------------------------------------------------------------
# lower bounds for F


class FLowerBounds:
    """Best available lower bounds for F on modulus triples.

    Merges the recorded analytic floors with a numeric source; the
    larger wins. The default numeric source is the direct quadrature
    ratio interval, skipped above the order cap. Pass ``numeric=None``
    for floors only, or a callable ``(n, m, k) -> float | None`` on
    descending moduli to substitute (e.g. a precomputed sweep).
    """

    def __init__(
        self,
        spectrum: SpectrumSet,
        *,
        numeric: Callable[[int, int, int], float | None] | None | str = "direct",
        r_max: float = DEFAULT_R_MAX,
        tol: float = DEFAULT_TOL,
    ) -> None:
        self._moduli = frozenset(abs(v) for v in spectrum.lambdas)
        if numeric == "direct":
            def direct(n: int, m: int, k: int) -> float | None:
                if n > MAX_SEXTET_ORDER:
                    return None
                return f_ratio(n, m, k, r_max=r_max, tol=tol).lo
            self._numeric: Callable[[int, int, int], float | None] | None = direct
        else:
            self._numeric = numeric
        self._cache: dict[tuple[int, int, int], float] = {}

    def _floor(self, n: int, m: int, k: int) -> float | None:
        members = {n, m, k} <= self._moduli
        if n == 0:
            return 1.0
        if m == 0:                       # (n, 0, 0)
            return F_FLOOR_SINGLE
        if n == m == k:
            return F_FLOOR_TRIPLE
        if n == m and k == 0:
            return F_FLOOR_PAIR0_HIGH if n >= 3 else F_FLOOR_PAIR0
        if n == m or m == k:             # pair (p, p, q), q possibly > p
            p, q = (n, k) if n == m else (m, n)
            if {p, q} == {1, 2}:
                return None
            return F_FLOOR_PAIR_MEMBER if members else F_FLOOR_PAIR
        if (n, m, k) == (3, 2, 0):
            return None
        return F_FLOOR_DISTINCT_MEMBER if members else F_FLOOR_DISTINCT

    def lower(self, m1: int, m2: int, m3: int) -> float:
        n, m, k = sorted((abs(m1), abs(m2), abs(m3)), reverse=True)
        key = (n, m, k)
        if key in self._cache:
            return self._cache[key]
        best = self._floor(n, m, k)
        if self._numeric is not None:
            num = self._numeric(n, m, k)
            if num is not None and (best is None or num > best):
                best = num
        if best is None:
            raise CertificateError(f"no lower bound available for F{key}")
        self._cache[key] = best
        return best


# ---------------------------------------------------------------------------
# inequality systems


@dataclass(frozen=True)
class SystemInstance:
    """One checked inequality instance, with its eps window if any.

    Global rows and eps-free exception rows report the window (0, inf)
    and carry the inequality slack in ``margin``; eps rows report the
    window endpoints and its width.
    """

    system_id: str
    point: int | None
    description: str
    eps_lo: float
    eps_hi: float
    feasible: bool
    margin: float


@dataclass(frozen=True)
class SystemReport:
    system_id: str
    instances: tuple[SystemInstance, ...]
    passed: bool
    tightest_margin: float


def _shape(rep: TripleRep) -> tuple:
    a, b, c = rep.entries
    if a == b == c:
        return ("triple", a)
    if a == b:
        return ("pair", a, c)
    if b == c:
        return ("pair", b, a)
    return ("distinct", rep.entries)


def _free_instance(system_id: str, point: int | None, desc: str, slack: float) -> SystemInstance:
    return SystemInstance(
        system_id=system_id,
        point=point,
        description=desc,
        eps_lo=0.0,
        eps_hi=math.inf,
        feasible=slack >= 0.0,
        margin=slack,
    )


def _eps_instance(
    system_id: str, point: int, desc: str, eps_lo: float, eps_hi: float
) -> SystemInstance:
    return SystemInstance(
        system_id=system_id,
        point=point,
        description=desc,
        eps_lo=eps_lo,
        eps_hi=eps_hi,
        feasible=eps_lo <= eps_hi,
        margin=eps_hi - eps_lo,
    )


def _global_rows(spectrum: SpectrumSet, b: float, flb: FLowerBounds) -> list[SystemInstance]:
    rows: list[SystemInstance] = []
    pos = [v for v in spectrum.lambdas if v > 0]
    quartic = 9.0 * (b + 1.0) / (b - 1.0)
    cross = 9.0 * (b - 3.0) / (b - 1.0)
    for mu in pos:
        lo = 3.0 * flb.lower(mu, mu, mu)
        rows.append(_free_instance("trivial", None, f"9 <= 3F({mu},{mu},{mu})", lo - 9.0))
        lo = 3.0 * flb.lower(mu, 0, 0)
        rows.append(_free_instance("trivial", None, f"15 <= 3F({mu},0,0)", lo - 15.0))
        lo = 3.0 * flb.lower(mu, mu, 0)
        rows.append(
            _free_instance(
                "trivial", None, f"9(b-3)/(b-1) + 18 <= 3F({mu},{mu},0)", lo - (cross + 18.0)
            )
        )
        rows.append(
            _free_instance(
                "trivial", None, f"9(b+1)/(b-1) + 9 <= 3F({mu},{mu},0)", lo - (quartic + 9.0)
            )
        )
    for m1 in pos:
        for m2 in pos:
            if m1 == m2:
                continue
            lo = 3.0 * flb.lower(m1, m1, m2)
            rows.append(
                _free_instance("trivial", None, f"27 <= 3F({m1},{m1},{m2})", lo - 27.0)
            )
    lams = sorted(set(spectrum.lambdas))
    for i in range(len(lams)):
        for j in range(i + 1, len(lams)):
            for k in range(j + 1, len(lams)):
                n3, n2, n1 = lams[i], lams[j], lams[k]
                lo = flb.lower(n1, n2, n3)
                rows.append(
                    _free_instance("trivial", None, f"15 <= F({n1},{n2},{n3})", lo - 15.0)
                )
    return rows


def _dispatch_exception(
    point: ClassifiedPoint, spectrum: SpectrumSet, b: float, flb: FLowerBounds
) -> list[SystemInstance]:
    d = point.point
    shapes = sorted((_shape(r) for r in point.reps), key=lambda s: s[0])
    kinds = tuple(s[0] for s in shapes)
    quartic = 9.0 * (b + 1.0) / (b - 1.0)

    def dist_eps_lo(entries: tuple[int, int, int]) -> tuple[float, str]:
        f_lo = flb.lower(*entries)
        lo = 6.0 / (f_lo - 15.0) if f_lo > 15.0 else math.inf
        mods = tuple(sorted((abs(v) for v in entries), reverse=True))
        return lo, f"15 + 6/eps <= F{mods} [F_lo={f_lo:.4f}]"

    def pair_eps_lo(p: int, q: int) -> tuple[float, str]:
        f_lo = flb.lower(p, p, q)
        lo = 9.0 / (3.0 * f_lo - 18.0) if 3.0 * f_lo > 18.0 else math.inf
        return lo, f"9(2 + 1/eps) <= 3F({abs(p)},{abs(p)},{abs(q)}) [F_lo={f_lo:.4f}]"

    if kinds == ("distinct", "pair"):
        # one repeat-free writing against a squared one
        entries = shapes[0][1]
        _, m1, m2 = shapes[1]
        lo, lo_desc = dist_eps_lo(entries)
        f2 = flb.lower(m1, m1, m2)
        base = (quartic if m2 == 0 else 0.0) + 9.0 * (1.0 + (1.0 if m2 != 0 else 0.0))
        hi = (3.0 * f2 - base) / 9.0
        desc = (
            f"{lo_desc}; 9(..) + 9 eps <= 3F({abs(m1)},{abs(m1)},{abs(m2)}) "
            f"[F_lo={f2:.4f}]"
        )
        return [_eps_instance("S2", d, desc, lo, hi)]
    if kinds == ("distinct", "triple"):
        entries = shapes[0][1]
        m1 = shapes[1][1]
        if d != 3 * m1:
            raise StructureViolation(f"triple writing of {d} does not sum to it")
        lo, lo_desc = dist_eps_lo(entries)
        f2 = flb.lower(m1, m1, m1)
        hi = f2 - 1.0
        desc = f"{lo_desc}; 1 + eps <= F({abs(m1)},{abs(m1)},{abs(m1)}) [F_lo={f2:.4f}]"
        return [_eps_instance("S3", d, desc, lo, hi)]
    if kinds == ("pair", "triple"):
        _, p, q = shapes[0]
        m1 = shapes[1][1]
        if d != 3 * m1:
            raise StructureViolation(f"triple writing of {d} does not sum to it")
        lo, lo_desc = pair_eps_lo(p, q)
        f2 = flb.lower(m1, m1, m1)
        hi = f2 - 1.0
        desc = f"{lo_desc}; 1 + eps <= F({abs(m1)},{abs(m1)},{abs(m1)}) [F_lo={f2:.4f}]"
        return [_eps_instance("S5", d, desc, lo, hi)]
    if kinds == ("pair", "pair"):
        zero_side = [s for s in shapes if s[2] == 0]
        other_side = [s for s in shapes if s[2] != 0]
        if len(zero_side) == 1:
            n1 = zero_side[0][1]
            _, m1, m2 = other_side[0]
            if d != 2 * n1:
                raise StructureViolation(f"zero-paired writing of {d} does not sum to it")
            f1 = flb.lower(n1, n1, 0)
            hi = (3.0 * f1 - quartic - 9.0) / 9.0
            lo, lo_desc = pair_eps_lo(m1, m2)
            desc = (
                f"9(b+1)/(b-1) + 9(1+eps) <= 3F({abs(n1)},{abs(n1)},0) "
                f"[F_lo={f1:.4f}]; {lo_desc}"
            )
            return [_eps_instance("S4", d, desc, lo, hi)]
        if spectrum.is_double(d) or spectrum.is_triple(d):
            raise StructureViolation(
                f"exception {d} has two squared writings yet lies in 2A or 3A"
            )
        # no eps fires: each squared writing must clear the flat row
        out = []
        for _, p, q in shapes:
            f_lo = flb.lower(p, p, q)
            out.append(
                _free_instance(
                    "trivial",
                    d,
                    f"27 <= 3F({abs(p)},{abs(p)},{abs(q)}) [F_lo={f_lo:.4f}]",
                    3.0 * f_lo - 27.0,
                )
            )
        return out
    raise StructureViolation(f"exception {d} writings {kinds} match no known system")


def check_systems(
    A: SpectrumSet,
    b: float = DEFAULT_B,
    *,
    f_lower: FLowerBounds | None = None,
    r_max: float = DEFAULT_R_MAX,
    tol: float = DEFAULT_TOL,
) -> list[SystemReport]:
    """Check the global rows once and one system per exception point.

    Dispatch is by the pair of writing shapes (repeat-free, squared
    with or without the zero partner, cubed), the same dichotomies the
    eps-split uses; a shape pair outside the known families is a hard
    error. Feasibility of an eps window uses interval lower bounds for
    every F, so a reported window survives quadrature error.
    """
    if not b > 1:
        raise RangeError(f"weight b must exceed 1, got {b}")
    flb = f_lower if f_lower is not None else FLowerBounds(A, r_max=r_max, tol=tol)
    instances: dict[str, list[SystemInstance]] = {
        "trivial": [], "S2": [], "S3": [], "S4": [], "S5": []
    }
    instances["trivial"].extend(_global_rows(A, b, flb))
    for point in classify_brute_force(A):
        if point.kind is not PointKind.EXCEPTION:
            continue
        for inst in _dispatch_exception(point, A, b, flb):
            instances[inst.system_id].append(inst)
    reports = []
    for system_id in ("trivial", "S2", "S3", "S4", "S5"):
        rows = tuple(instances[system_id])
        passed = all(r.feasible for r in rows)
        tightest = min((r.margin for r in rows), default=math.inf)
        reports.append(SystemReport(system_id, rows, passed, tightest))
    return reports


def derive_params(
    A: SpectrumSet,
    b: float = DEFAULT_B,
    *,
    f_lower: FLowerBounds | None = None,
    r_max: float = DEFAULT_R_MAX,
    tol: float = DEFAULT_TOL,
) -> tuple[CertificateParams, tuple[SystemReport, ...]]:
    """Solve the systems and take each eps at its window midpoint."""
    reports = check_systems(A, b, f_lower=f_lower, r_max=r_max, tol=tol)
    eps: dict[int, float] = {}
    for report in reports:
        for inst in report.instances:
            if inst.point is None or inst.eps_hi == math.inf:
                continue
            if not inst.feasible:
                raise CertificateError(
                    f"system {inst.system_id} infeasible at exception {inst.point}: "
                    f"{inst.description}"
                )
            eps[inst.point] = 0.5 * (inst.eps_lo + inst.eps_hi)
    return CertificateParams.from_mapping(b, eps), tuple(reports)


# ---------------------------------------------------------------------------
# final comparison


@dataclass(frozen=True)
class TheoremVerdict:
    """Three-valued outcome of S <= I(0,0,0) * mass^3."""

    verdict: str            # "holds" | "fails" | "indeterminate"
    margin: float           # rhs - s_exact
    error_budget: float
    s_exact: float
    rhs: float
    equality_case: bool     # within budget of equality with support in {0}


def verify_theorem(
    f: CoefficientVector,
    *,
    r_max: float = DEFAULT_R_MAX,
    tol: float = DEFAULT_TOL,
) -> TheoremVerdict:
    """Compare the exact sextic sum against the constant-mode ceiling.

    Both sides use the same I(0,0,0) evaluation, so a vector supported
    on {0} lands within roundoff of equality and is reported as the
    equality case rather than an indeterminate verdict.
    """
    s = compute_S_exact(f, r_max=r_max, tol=tol)
    i000 = _interaction_pos((0, 0, 0, 0, 0, 0), r_max, tol)
    mass3 = f.mass() ** 3
    rhs = i000.value * mass3
    budget = s.error_bound + i000.error_bound * mass3
    margin = rhs - s.value
    on_zero = all(n == 0 for n in f.support)
    if margin > budget:
        verdict = "holds"
    elif margin < -budget:
        verdict = "fails"
    else:
        verdict = "indeterminate"
    return TheoremVerdict(
        verdict=verdict,
        margin=margin,
        error_budget=budget,
        s_exact=s.value,
        rhs=rhs,
        equality_case=(verdict != "fails" and abs(margin) <= budget and on_zero),
    )


# ---------------------------------------------------------------------------
# randomized trial vectors


def exception_frequencies(spectrum: SpectrumSet) -> tuple[int, ...]:
    """Elements participating in some exception writing, sorted."""
    out: set[int] = set()
    for point in classify_brute_force(spectrum):
        if point.kind is PointKind.EXCEPTION:
            for rep in point.reps:
                out.update(rep.entries)
    return tuple(sorted(out))


def random_vector(
    spectrum: SpectrumSet,
    rng,
    *,
    size: int | None = None,
    adversarial: bool = False,
) -> CoefficientVector:
    """Complex Gaussian amplitudes on a random support subset.

    Adversarial draws prefer frequencies that participate in exception
    writings, where the grouped bound is tightest.
    """
    elements = sorted(spectrum.elements)
    if size is None:
        size = min(len(elements), 9)
    if not 1 <= size <= min(len(elements), MAX_SUPPORT):
        raise RangeError(f"support size {size} out of range")
    if adversarial:
        preferred = [n for n in exception_frequencies(spectrum) if n in set(elements)]
        rest = [n for n in elements if n not in set(preferred)]
        pool = preferred + rest
        support = pool[:size] if len(preferred) >= size else (
            preferred + rng.sample(rest, size - len(preferred))
        )
    else:
        support = rng.sample(elements, size)
    values = {n: complex(rng.gauss(0.0, 1.0), rng.gauss(0.0, 1.0)) for n in support}
    return CoefficientVector.from_dict(spectrum, values)
