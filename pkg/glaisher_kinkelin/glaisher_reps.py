import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, List, Optional, Tuple, Union

import mpmath
import numpy as np
import pandas as pd

from .report_utils import merge_reports
from .special_functions import BigReal, PrecisionError, SeriesResult
from .zeta_apostol import QuadratureConfig, ZetaApostol

logging.basicConfig(
    level = logging.INFO,
    format = '%(asctime)s - %(levelname)s - %(message)s'
)


class Representation(Enum):
    R1_ZETA_PRIME_NEG1 = 'r1'
    R2_GLAISHER_PRODUCT = 'r2'
    R3_CI_SERIES = 'r3'
    R4_ZETA_PRIME_2 = 'r4'
    R5_HYPERFACTORIAL = 'r5'
    R6_HYPERGEOMETRIC_SERIES = 'r6'

    @property
    def tag(self) -> str:
        """Long form such as 'R3_ci_series'."""
        head, _, tail = self.name.partition('_')
        return f"{head}_{tail.lower()}"


class Series2Mode(Enum):
    PAPER = 'paper'
    RECONCILED = 'reconciled'


class IdentityName(Enum):
    """
    Identities checked by the harness.

    Values are the public names; the lower-cased member names
    ('ci_integral', 'si_integral', ...) are accepted as aliases.
    """
    CI_INTEGRAL = 'eq15_ci'
    SI_INTEGRAL = 'eq24_si'
    I3_SERIES = 'eq27_i3_series'
    HYP_LOG_INTEGRAL = 'eq29_hyp'
    ZETA2_ASSEMBLY = 'zeta2_assembly'

    @classmethod
    def _missing_(cls, value):
        if isinstance(value, str):
            member = cls.__members__.get(value.strip().upper())
            if member is not None:
                return member
            for member in cls:
                if member.value == value.strip().lower():
                    return member
        return None


class IdentityVariant(Enum):
    PRINTED = 'printed'
    CORRECTED = 'corrected'


@dataclass(frozen = True)
class IdentityReport:
    """
    One closed form compared against its numerical oracle.

    `verdict` is 'match' exactly when `rel_error` <= `threshold`.
    `oracle_bound` is the oracle's own error bound relative to `rhs`.
    """
    identity_name: str
    k_or_s: Union[int, float]
    lhs: BigReal
    rhs: BigReal
    rel_error: float
    threshold: float
    verdict: str
    notes: str
    variant: str = IdentityVariant.PRINTED.value
    oracle_bound: float = 0.0
    corrected_rel_error: Optional[float] = None

    def __post_init__(self):
        expected = 'match' if self.rel_error <= self.threshold else 'mismatch'
        if self.verdict != expected:
            raise ValueError(f"verdict {self.verdict!r} contradicts rel_error {self.rel_error} vs threshold {self.threshold}")

    def to_record(self) -> dict:
        return {
            'identity_name': self.identity_name,
            'k_or_s': self.k_or_s,
            'variant': self.variant,
            'lhs': self.lhs.to_decimal_string(),
            'rhs': self.rhs.to_decimal_string(),
            'rel_error': self.rel_error,
            'threshold': self.threshold,
            'verdict': self.verdict,
            'oracle_bound': self.oracle_bound,
            'corrected_rel_error': self.corrected_rel_error,
            'notes': self.notes,
        }


class GlaisherKinkelin(ZetaApostol):
    """
    ln A, the logarithm of the Glaisher-Kinkelin constant, through six routes.

    Route        Formula
    -----------  ---------------------------------------------------------------
    r1           1/12 - zeta'(-1), zeta' from the P3 integrals
    r2           ln 2/36 + ln(pi)/6 + (s - gamma/4)/3 (reference route)
    r3           (1/4)[1 + (2/pi^2) sum_k Ci(2 k pi)/k^2]
    r4           ln(2 pi)/12 + gamma/12 - zeta'(2)/(2 pi^2)
    r5           sum_{k<=n} k ln k - (n^2/2 + n/2 + 1/12) ln n + n^2/4
    r6           sum over k of sine and log-sine integrals through Si and pFq

    Results of the identity harness and of the series comparison are kept on
    the instance as DataFrames (`identity_reports_df`, `series2_terms_df`,
    `convergence_df`).
    """

    REFERENCE_MIN_BITS = 128
    REFERENCE_GUARD_BITS = 32
    MAX_SERIES2_K = 200
    SERIES2_DEFAULT_TERMS = 50
    IDENTITY_QUADRATURE = QuadratureConfig(intervals = 2000)
    ORACLE_TOLERANCE_FRACTION = 1e-3
    REFERENCE_CACHE_SIZE = 8

    SUSPECT_COEFFICIENTS = {
        IdentityName.CI_INTEGRAL: "closed form -2 pi k Ci(2 k pi)",
        IdentityName.SI_INTEGRAL: "prefactor 2 k pi of the (1 - 2 k^2 pi^2) part in (1/6){2 k pi (1 - 2 k^2 pi^2) + 2 k^4 pi^4 [pi - 2 Si(2 k pi)]}",
        IdentityName.I3_SERIES: "coefficient k of the k(1 - 2 k^2 pi^2) part of the I3(2) series",
        IdentityName.HYP_LOG_INTEGRAL: "closed form -(1/108){3 k^4 pi^5 [-25 + 12(gamma + ln 2 pi k)] + 32 k^3 pi^3 1F2 + 24 k^3 pi^3 2F3} read as the ln x weighted integral",
        IdentityName.ZETA2_ASSEMBLY: "constant +11/12 in zeta'(2) = 11/12 - 4 I3'(2) - (13/3) I3(2)",
    }

    def __init__(self,
                 precision_bits: int = ZetaApostol.DEFAULT_PRECISION_BITS,
                 max_precision_bits: Optional[int] = None):
        super().__init__(precision_bits, max_precision_bits)
        self.identity_reports_df = None
        self.series2_terms_df = None
        self.series2_report = None
        self.convergence_df = None
        self._reference_cache = {}

    # ------------------------------------------------------------------
    # r2: product formula and its auxiliary series

    def _s_closed_part(self) -> mpmath.mpf:
        # sum_{r>=2} (-1)^r (1 - 2^-r)/(r+1)
        ctx = self.ctx
        return 3 * ctx.ln2 - 2 * ctx.ln(3) + ctx.mpf(1) / 4

    def _s_series_terms(self, tol) -> Iterator[Tuple[int, mpmath.mpf]]:
        ctx = self.ctx
        r = 2
        while True:
            term = (1 - ctx.ldexp(1, -r)) * (self._zeta_int(r, tol) - 1) / (r + 1)
            yield r, (-term if r % 2 else term)
            r += 1

    def _s_series(self, precision_bits: int) -> Tuple[mpmath.mpf, int, mpmath.mpf]:
        ctx = self.ctx
        threshold = ctx.ldexp(1, -(precision_bits + 8))
        total = self._s_closed_part()
        for r, term in self._s_series_terms(ctx.ldexp(1, -(precision_bits + 16))):
            if abs(term) < threshold:
                # alternating, with term ratio below 1/2 in magnitude
                return total, r - 2, 2 * abs(term)
            total += term

    def _ln_a_from_s(self, s: mpmath.mpf) -> mpmath.mpf:
        ctx = self.ctx
        return ctx.ln2 / 36 + ctx.ln(self._pi()) / 6 + (s - self._euler() / 4) / 3

    def _reference_bits(self, precision_bits: Optional[int]) -> int:
        bits = self.precision_bits if precision_bits is None else precision_bits
        if not isinstance(bits, int) or bits < self.REFERENCE_MIN_BITS:
            raise ValueError(f"The reference route needs precision_bits >= {self.REFERENCE_MIN_BITS}, got {bits}")
        return bits

    def s_series(self, precision_bits: Optional[int] = None) -> SeriesResult:
        """
        Auxiliary series s = sum_{r>=2} (-1/2)^r (2^r - 1) zeta(r) / (r + 1).

        The terms decay only like 1/r, so zeta(r) is split as 1 + (zeta(r) - 1):
        the first part sums to 3 ln 2 - 2 ln 3 + 1/4 and the remainder
        alternates with ratio tending to -1/2. Summation stops once a term
        drops below 2^-(precision_bits + 8).
        """
        bits = self._reference_bits(precision_bits)
        with self.ctx.workprec(bits + self.REFERENCE_GUARD_BITS):
            total, terms, bound = self._s_series(bits)
            value = self._big(total, bits)
        return SeriesResult(value = value,
                            terms_used = terms,
                            tail_bound = self._bound(bound),
                            converged = True)

    def s_partial_sums(self, max_r: int) -> pd.DataFrame:
        """Partial sums S_R of the rearranged s-series for R = 2..max_r, with the next term."""
        if not isinstance(max_r, int) or max_r < 2:
            raise ValueError(f"max_r must be an integer >= 2, got {max_r}")
        ctx = self.ctx
        rows = []
        total = self._s_closed_part()
        terms = self._s_series_terms(ctx.ldexp(1, -(self.precision_bits - 8)))
        r, term = next(terms)
        while r <= max_r:
            total += term
            r, term = next(terms)
            rows.append({'r': r - 1, 'partial_sum': self._big(total), 'next_term': self._big(term)})
        return pd.DataFrame(rows)

    def ln_a_reference_result(self, precision_bits: Optional[int] = None) -> SeriesResult:
        bits = self._reference_bits(precision_bits)
        if bits in self._reference_cache:
            return self._reference_cache[bits]

        with self.ctx.workprec(bits + self.REFERENCE_GUARD_BITS):
            s, terms, bound = self._s_series(bits)
            value = self._big(self._ln_a_from_s(s), bits)
        result = SeriesResult(value = value,
                              terms_used = terms,
                              tail_bound = self._bound(bound / 3),
                              converged = True)
        if len(self._reference_cache) >= self.REFERENCE_CACHE_SIZE:
            self._reference_cache.pop(next(iter(self._reference_cache)))
        self._reference_cache[bits] = result
        logging.info(f"Successfully computed reference ln A at {bits} bits with {terms} s-series terms")
        return result

    def ln_a_reference(self, precision_bits: Optional[int] = None) -> BigReal:
        """
        ln A = ln 2/36 + ln(pi)/6 + (s - gamma/4)/3, the project's reference value.

        Parameters
        ----------
        precision_bits : int, optional
            At least 128; defaults to the instance precision

        Returns
        -------
        BigReal
        """
        return self.ln_a_reference_result(precision_bits).value

    # ------------------------------------------------------------------
    # r1

    def ln_a_r1_result(self, cfg: Optional[QuadratureConfig] = None) -> SeriesResult:
        cfg = cfg or QuadratureConfig()
        zp = self.zeta_prime_apostol_result(-1, cfg)
        value = self.ctx.mpf(1) / 12 - self._mpf(zp.value)
        logging.info(f"Successfully computed ln A via r1 with {cfg.intervals} intervals, tail bound {mpmath.nstr(zp.tail_bound, 3)}")
        return SeriesResult(value = self._big(value),
                            terms_used = zp.terms_used,
                            tail_bound = zp.tail_bound,
                            converged = zp.converged)

    def ln_a_r1(self, cfg: Optional[QuadratureConfig] = None) -> BigReal:
        """ln A = 1/12 - zeta'(-1) = 1/12 - (I3(-1) - 1)/6."""
        return self.ln_a_r1_result(cfg).value

    # ------------------------------------------------------------------
    # r3

    def _r3_partial_sums(self, K: int, tol) -> Iterator[Tuple[int, mpmath.mpf, mpmath.mpf]]:
        ctx = self.ctx
        scale = 2 * self._pi()**2
        total = ctx.mpf(0)
        for k in range(1, K + 1):
            term = self._ci_at_2kpi(k, tol / 2) / (k * k)
            total += term
            yield k, (1 + 2 * total / self._pi()**2) / 4, term / scale

    def ln_a_r3(self, K: int, tol: float = 1e-10) -> SeriesResult:
        """
        ln A = (1/4)[1 + (2/pi^2) sum_{k=1}^K Ci(2 k pi)/k^2].

        Parameters
        ----------
        K : int
            Number of terms, K >= 1
        tol : float
            Absolute tolerance for each Ci evaluation

        Returns
        -------
        SeriesResult
            tail_bound = 1/(12 pi^4 K^3) + tol/24, from |Ci(2 k pi)| <= 2/(2 k pi)^2
        """
        if not isinstance(K, int) or K < 1:
            raise ValueError(f"K must be a positive integer, got {K}")
        self._check_tolerance(tol)
        estimate = None
        for _, estimate, _ in self._r3_partial_sums(K, tol):
            pass
        tail = 1 / (12 * self._pi()**4 * K**3) + self.ctx.mpf(tol) / 24
        logging.info(f"Successfully computed ln A via r3 with {K} terms, tail bound {mpmath.nstr(tail, 3)}")
        return SeriesResult(value = self._big(estimate),
                            terms_used = K,
                            tail_bound = self._bound(tail),
                            converged = True)

    # ------------------------------------------------------------------
    # r4

    def _ln_a_from_zeta_prime_2(self, zeta_prime_2: mpmath.mpf) -> mpmath.mpf:
        return (self._ln_2pi() + self._euler()) / 12 - zeta_prime_2 / (2 * self._pi()**2)

    def ln_a_from_zeta_prime_2(self, zeta_prime_2: BigReal) -> BigReal:
        """ln A = ln(2 pi)/12 + gamma/12 - zeta'(2)/(2 pi^2) for any estimate of zeta'(2)."""
        return self._big(self._ln_a_from_zeta_prime_2(self._mpf(zeta_prime_2)))

    def ln_a_r4_result(self, tol: float = 1e-12) -> SeriesResult:
        self._check_tolerance(tol)
        pi_squared = float(self._pi())**2
        zp = self.zeta_prime_direct(2, tol * pi_squared)
        value = self._ln_a_from_zeta_prime_2(self._mpf(zp.value))
        bound = zp.tail_bound / (2 * pi_squared)
        logging.info(f"Successfully computed ln A via r4 with {zp.terms_used} terms, tail bound {mpmath.nstr(bound, 3)}")
        return SeriesResult(value = self._big(value),
                            terms_used = zp.terms_used,
                            tail_bound = bound,
                            converged = zp.converged)

    def ln_a_r4(self, tol: float = 1e-12) -> BigReal:
        """ln A from zeta'(2), with zeta'(2) summed directly to tol * pi^2."""
        return self.ln_a_r4_result(tol).value

    # ------------------------------------------------------------------
    # r5

    def _r5_estimates(self, n_end: int) -> Iterator[Tuple[int, mpmath.mpf, mpmath.mpf]]:
        ctx = self.ctx
        total = ctx.mpf(0)
        previous = None
        with ctx.extraprec(2 * n_end.bit_length() + 16):
            for n in range(1, n_end + 1):
                if n > 1:
                    total += n * ctx.ln(n)
                nn = ctx.mpf(n)
                estimate = total - ((nn * nn + nn) / 2 + ctx.mpf(1) / 12) * ctx.ln(nn) + nn * nn / 4
                increment = estimate - previous if previous is not None else estimate
                previous = estimate
                yield n, +estimate, +increment

    def ln_a_r5_result(self, n: int) -> SeriesResult:
        """
        Hyperfactorial route, computed in log space.

        The error behaves like 1/(720 n^2) - 1/(5040 n^4) + ..., reported as
        the bound (1 + 1/n^2)/(720 n^2).
        """
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"n must be a positive integer, got {n}")
        estimate = None
        for _, estimate, _ in self._r5_estimates(n):
            pass
        bound = (1 + self.ctx.mpf(1) / n**2) / (720 * self.ctx.mpf(n)**2)
        logging.info(f"Successfully computed ln A via r5 at n = {n}")
        return SeriesResult(value = self._big(estimate),
                            terms_used = n,
                            tail_bound = self._bound(bound),
                            converged = True)

    def ln_a_r5(self, n: int) -> BigReal:
        """ln A from sum_{k<=n} k ln k - (n^2/2 + n/2 + 1/12) ln n + n^2/4."""
        return self.ln_a_r5_result(n).value

    # ------------------------------------------------------------------
    # closed forms of the sine integrals, c = 2 k pi

    def _cancellation_bits(self, k: int, power: int) -> int:
        return int(math.ceil(power * math.log2(2 * math.pi * k))) + self.GUARD_BITS

    def _sine_fifth_closed(self, k: int, tol, variant: IdentityVariant = IdentityVariant.CORRECTED) -> mpmath.mpf:
        """
        int_1^inf sin(2 k pi x)/x^5 dx.

        Corrected: (c/12)(1 - c^2/2 + c^3 sigma/2) with sigma = pi/2 - Si(c),
        equal to (1/6){k pi (1 - 2 k^2 pi^2) + 2 k^4 pi^4 [pi - 2 Si(c)]}.
        Printed: the same with 2 k pi in front of (1 - 2 k^2 pi^2).
        """
        with self._escalate(self._cancellation_bits(k, 4)):
            pi = self._pi()
            c = 2 * k * pi
            sigma = self._si_complement_at_2kpi(k, tol / c**4)
            if variant is IdentityVariant.PRINTED:
                value = (2 * k * pi * (1 - 2 * k * k * pi * pi) + 2 * k**4 * pi**4 * (2 * sigma)) / 6
            else:
                value = c / 12 * (1 - c * c / 2 + c**3 * sigma / 2)
        return +value

    def _log_sine_seed(self, k: int, tol) -> mpmath.mpf:
        """int_1^inf sin(c x) ln x / x dx = T(c) - (pi/2)(gamma + ln c), T(c) = c 2F3(1/2,1/2; 3/2,3/2,3/2; -c^2/4)."""
        pi = self._pi()
        c = 2 * k * pi
        numerator, denominator = self.SERIES2_PARAMETER_SETS['log_sine']
        t = c * self._hyp_pfq(numerator, denominator, -c * c / 4, tol / c)
        return t - pi / 2 * (self._euler() + self.ctx.ln(c))

    def _log_sine_fifth_closed(self, k: int, tol) -> mpmath.mpf:
        # 7c/144 - 25c^3/288 + 25c^4 sigma/288 + c^4 L/24, by five integrations by parts
        with self._escalate(self._cancellation_bits(k, 4)):
            c = 2 * k * self._pi()
            inner_tol = tol / c**4
            sigma = self._si_complement_at_2kpi(k, inner_tol)
            seed = self._log_sine_seed(k, inner_tol)
            value = 7 * c / 144 - 25 * c**3 / 288 + 25 * c**4 * sigma / 288 + c**4 * seed / 24
        return +value

    def _log_sine_fifth_printed(self, k: int, tol) -> mpmath.mpf:
        with self._escalate(self._cancellation_bits(k, 5)):
            ctx = self.ctx
            pi = self._pi()
            y = -(k * pi)**2
            inner_tol = tol / (k * pi)**3 / 64
            f12 = self._hyp_pfq(*self.SERIES2_PARAMETER_SETS['1F2'], y, inner_tol)
            f23 = self._hyp_pfq(*self.SERIES2_PARAMETER_SETS['2F3'], y, inner_tol)
            log_part = 3 * k**4 * pi**5 * (-25 + 12 * (self._euler() + ctx.ln(2 * k * pi)))
            value = -(log_part + 32 * k**3 * pi**3 * f12 + 24 * k**3 * pi**3 * f23) / 108
        return +value

    # ------------------------------------------------------------------
    # r6

    def _check_series2_terms(self, K: int) -> None:
        if not isinstance(K, int) or K < 1:
            raise ValueError(f"K must be a positive integer, got {K}")
        if K > self.MAX_SERIES2_K:
            k = self.MAX_SERIES2_K + 1
            raise PrecisionError(f"Series term k = {k} is beyond the precision escalation cap of k = {self.MAX_SERIES2_K}",
                                 required_bits = self.precision_bits + self._cancellation_bits(k, 4) + int(2 * math.pi * k * math.log2(math.e)),
                                 k = k)

    def _zeta_prime_2_term(self, k: int, tol) -> mpmath.mpf:
        # zeta'(2) = -11/12 - 4 I3'(2) - (13/3) I3(2), each integral a sum over k of 3/(2 pi^3 k^3) times a sine integral
        pi_cubed_k_cubed = self._pi()**3 * k**3
        sine_fifth = self._sine_fifth_closed(k, tol / 4)
        log_sine_fifth = self._log_sine_fifth_closed(k, tol / 4)
        return 6 * log_sine_fifth / pi_cubed_k_cubed - 13 * sine_fifth / (2 * pi_cubed_k_cubed)

    def _series2_paper_term(self, k: int, tol) -> mpmath.mpf:
        ctx = self.ctx
        with self._escalate(self._cancellation_bits(k, 1)):
            pi = self._pi()
            y = -(k * pi)**2
            inner_tol = tol / (8 * k)
            f12 = self._hyp_pfq(*self.SERIES2_PARAMETER_SETS['1F2'], y, inner_tol)
            f23 = self._hyp_pfq(*self.SERIES2_PARAMETER_SETS['2F3'], y, inner_tol)
            si = pi / 2 - self._si_complement_at_2kpi(k, inner_tol)
            term = (k * (self._euler() - 1)
                    + 13 / (12 * pi**2) * (1 / (2 * pi**2 * k**2) - 1)
                    + 8 / (9 * pi**2) * (f12 + 3 * f23)
                    + k * ctx.ln(2 * k * pi)
                    - 13 * k / (6 * pi) * si)
        return +term

    def _series2_paper_base(self) -> mpmath.mpf:
        pi = self._pi()
        return (self._ln_2pi() + self._euler() + 11 / (2 * pi**2)) / 12

    def _zeta_prime_2_tail(self, K: int, tol) -> mpmath.mpf:
        # |sine integral| <= 1/(pi k) and |log-sine integral| <= 22/(2 pi k)^3 for k > 1
        pi = self._pi()
        return 13 / (6 * pi**4 * K**3) + 33 / (10 * pi**6 * K**5) + self.ctx.mpf(tol) / 4

    def _series2_partial_sums(self,
                              K: int,
                              mode: Series2Mode,
                              tol) -> Iterator[Tuple[int, mpmath.mpf, mpmath.mpf]]:
        """Yields (k, ln A estimate, term) for k = 1..K."""
        ctx = self.ctx
        two_pi_squared = 2 * self._pi()**2
        if mode is Series2Mode.PAPER:
            total = self._series2_paper_base()
            for k in range(1, K + 1):
                term = self._series2_paper_term(k, tol)
                total += term
                yield k, total, term
        else:
            zeta_prime_2 = ctx.mpf(-11) / 12
            for k in range(1, K + 1):
                contribution = self._zeta_prime_2_term(k, tol)
                zeta_prime_2 += contribution
                yield k, self._ln_a_from_zeta_prime_2(zeta_prime_2), -contribution / two_pi_squared

    def zeta_prime_2_reconciled(self, K: int = SERIES2_DEFAULT_TERMS, tol: float = 1e-10) -> SeriesResult:
        """
        zeta'(2) = -11/12 + sum_k [6 J_k - (13/2) S_k] / (pi^3 k^3).

        S_k is the sine integral of x^-5 and J_k its ln x weighted version,
        both in the integration-by-parts closed forms.
        """
        self._check_series2_terms(K)
        self._check_tolerance(tol)
        ctx = self.ctx
        value = ctx.mpf(-11) / 12
        for k in range(1, K + 1):
            value += self._zeta_prime_2_term(k, tol)
        return SeriesResult(value = self._big(value),
                            terms_used = K,
                            tail_bound = self._bound(self._zeta_prime_2_tail(K, tol)),
                            converged = True)

    @staticmethod
    def _stabilised(increments: List[mpmath.mpf], tol) -> bool:
        if len(increments) < 4:
            return False
        window = [abs(v) for v in increments[-max(2, len(increments) // 4):]]
        non_increasing = all(b <= a for a, b in zip(window, window[1:]))
        return non_increasing and window[-1] <= math.sqrt(float(tol))

    def ln_a_r6(self,
                K: int = SERIES2_DEFAULT_TERMS,
                mode: Union[Series2Mode, str] = Series2Mode.RECONCILED,
                tol: float = 1e-10) -> SeriesResult:
        """
        ln A from the series over k built on Si(2 k pi) and hypergeometric functions.

        Parameters
        ----------
        K : int
            Number of terms, 1 <= K <= 200
        mode : Series2Mode or str
            'paper' sums the boxed coefficients as printed; 'reconciled'
            assembles zeta'(2) = -11/12 - 4 I3'(2) - (13/3) I3(2) from the
            corrected sine and log-sine closed forms and feeds it to the r4
            formula
        tol : float
            Absolute tolerance per term

        Returns
        -------
        SeriesResult
            In paper mode the notes carry the comparison with the reconciled
            terms and `converged` reports whether the partial sums stabilise

        Notes
        -----
        Each term needs extra precision growing like 2 k pi log2 e bits, so
        K above 200 raises PrecisionError naming k.
        """
        mode = Series2Mode(mode)
        self._check_series2_terms(K)
        self._check_tolerance(tol)

        if mode is Series2Mode.RECONCILED:
            zp = self.zeta_prime_2_reconciled(K, tol)
            value = self._ln_a_from_zeta_prime_2(self._mpf(zp.value))
            bound = zp.tail_bound / (2 * float(self._pi())**2)
            logging.info(f"Successfully computed ln A via r6 (reconciled) with {K} terms, tail bound {mpmath.nstr(bound, 3)}")
            return SeriesResult(value = self._big(value),
                                terms_used = K,
                                tail_bound = bound,
                                converged = True,
                                notes = "zeta'(2) rebuilt with constant -11/12 and integration-by-parts closed forms")

        report = self.adjudicate_series2(K, tol)
        paper = self.series2_terms_df
        increments = [self._mpf(v) for v in paper['paper_term_exact']]
        estimate = self._series2_paper_base() + self.ctx.fsum(increments)
        converged = self._stabilised(increments, tol)
        if converged:
            bound = self._bound(increments[-1] * K / 2)
        else:
            bound = mpmath.inf
            logging.warning(f"Boxed series partial sums did not stabilise by K = {K}")
        return SeriesResult(value = self._big(estimate),
                            terms_used = K,
                            tail_bound = bound,
                            converged = converged,
                            notes = report.notes)

    def adjudicate_series2(self, K: int = SERIES2_DEFAULT_TERMS, tol: float = 1e-10) -> IdentityReport:
        """
        Compares the boxed series term by term with the reconciled terms.

        The per-term table is stored as `series2_terms_df` and the report as
        `series2_report`. Notes list the constant-part delta, the largest
        per-term deltas and the growth exponent of |delta_k| fitted in
        log-log space.
        """
        self._check_series2_terms(K)
        self._check_tolerance(tol)
        ctx = self.ctx

        paper_terms = [term for _, _, term in self._series2_partial_sums(K, Series2Mode.PAPER, tol)]
        reconciled_terms = [term for _, _, term in self._series2_partial_sums(K, Series2Mode.RECONCILED, tol)]
        deltas = [p - r for p, r in zip(paper_terms, reconciled_terms)]

        paper_base = self._series2_paper_base()
        reconciled_base = self._ln_a_from_zeta_prime_2(ctx.mpf(-11) / 12)
        paper_sum = paper_base + ctx.fsum(paper_terms)
        reference = self.ln_a_reference_result(max(self.precision_bits, self.REFERENCE_MIN_BITS))
        reference_value = self._mpf(reference.value)

        self.series2_terms_df = pd.DataFrame({
            'k': list(range(1, K + 1)),
            'paper_term': [float(v) for v in paper_terms],
            'reconciled_term': [float(v) for v in reconciled_terms],
            'delta': [float(v) for v in deltas],
            'paper_term_exact': [self._big(v) for v in paper_terms],
        })

        magnitudes = np.array([abs(float(v)) for v in deltas])
        ks = np.arange(1, K + 1)
        usable = magnitudes > 0
        if usable.sum() >= 2:
            slope = float(np.polyfit(np.log(ks[usable]), np.log(magnitudes[usable]), 1)[0])
            growth = f"per-term deltas scale like k^{slope:.2f}"
        else:
            growth = "per-term deltas vanish"
        largest = sorted(range(K), key = lambda i: -magnitudes[i])[:3]
        largest_text = ', '.join(f"k = {i + 1} ({float(deltas[i]):.3e})" for i in largest)

        rel_error = float(abs(paper_sum - reference_value) / abs(reference_value))
        threshold = float((self._zeta_prime_2_tail(K, tol) / (2 * self._pi()**2) + tol) / abs(reference_value))
        verdict = 'match' if rel_error <= threshold else 'mismatch'
        notes = (f"boxed series vs reconciled terms: constant part delta {float(paper_base - reconciled_base):.3e}; "
                 f"largest per-term deltas at {largest_text}; {growth}; "
                 f"partial sum at K = {K} is off the reference by {float(abs(paper_sum - reference_value)):.3e}")
        if verdict == 'mismatch':
            logging.warning(f"Boxed series disagrees with the reference at K = {K}: rel error {rel_error:.3e}")

        report = IdentityReport(identity_name = 'series2_boxed',
                                k_or_s = K,
                                lhs = self._big(paper_sum),
                                rhs = reference.value,
                                rel_error = rel_error,
                                threshold = threshold,
                                verdict = verdict,
                                notes = notes,
                                variant = IdentityVariant.PRINTED.value,
                                oracle_bound = float(reference.tail_bound) / abs(float(reference_value)))
        self.series2_report = report
        self._record_identity_report(report)
        return report

    # ------------------------------------------------------------------
    # identity harness

    def _record_identity_report(self, report: IdentityReport) -> None:
        frame = pd.DataFrame([report.to_record()])
        if self.identity_reports_df is None:
            self.identity_reports_df = frame
        else:
            self.identity_reports_df = merge_reports(self.identity_reports_df, frame, key = 'identity_name')

    def _identity_scale(self, name: IdentityName, k: int) -> float:
        # rough magnitude of each identity's value, used to turn relative tolerances into absolute ones
        c = 2 * math.pi * k
        if name in (IdentityName.CI_INTEGRAL, IdentityName.SI_INTEGRAL):
            return 1 / c
        if name is IdentityName.HYP_LOG_INTEGRAL:
            return 11 / c**3
        if name is IdentityName.I3_SERIES:
            return 1e-2
        return 1.0

    def _i3_series(self, K: int, tol, first_part_factor: int) -> mpmath.mpf:
        # I3(2) = (1/(4 pi^2)) sum_k {f k (1 - 2k^2 pi^2) + 2 k^4 pi^3 (pi - 2 Si(2 k pi))} / k^3
        ctx = self.ctx
        with self._escalate(self._cancellation_bits(K, 4)):
            pi = self._pi()
            total = ctx.mpf(0)
            for k in range(1, K + 1):
                sigma = self._si_complement_at_2kpi(k, tol / (8 * k * pi**3 * K))
                total += (first_part_factor * k * (1 - 2 * k * k * pi * pi) + 2 * k**4 * pi**3 * (2 * sigma)) / k**3
            value = total / (4 * pi**2)
        return +value

    def verify_identity(self,
                        name: Union[IdentityName, str],
                        k: int = 1,
                        tol: float = 1e-8,
                        variant: Union[IdentityVariant, str] = IdentityVariant.PRINTED,
                        cfg: Optional[QuadratureConfig] = None) -> IdentityReport:
        """
        Compares a closed form against a numerical oracle.

        Parameters
        ----------
        name : IdentityName or str
            eq15_ci, eq24_si, eq27_i3_series, eq29_hyp or zeta2_assembly;
            the aliases ci_integral, si_integral, i3_series and
            hyp_log_integral are accepted too
        k : int
            Frequency index; for eq27_i3_series the minimum number of series terms
        tol : float
            Relative threshold for a match
        variant : IdentityVariant or str
            'printed' evaluates the coefficients verbatim, 'corrected' the
            integration-by-parts forms
        cfg : QuadratureConfig, optional
            Quadrature for the I3 oracles

        Returns
        -------
        IdentityReport
            Never raises on a mismatch; the notes name the suspect coefficient
            and always give the corrected form's relative error

        Notes
        -----
        Oracles: half-period oscillatory quadrature for the sine integrals,
        i3(2) for the I3 series and zeta_prime_direct(2) for the assembly.
        """
        name = IdentityName(name)
        variant = IdentityVariant(variant)
        if not isinstance(k, int) or k < 1:
            raise ValueError(f"k must be a positive integer, got {k}")
        if not tol > 0:
            raise ValueError(f"tol must be positive, got {tol}")
        cfg = cfg or self.IDENTITY_QUADRATURE
        ctx = self.ctx
        abs_tol = tol * self._identity_scale(name, k) * self.ORACLE_TOLERANCE_FRACTION
        self._check_tolerance(abs_tol)
        extra_notes = ''
        k_or_s = k

        if name is IdentityName.CI_INTEGRAL:
            c = 2 * k * self._pi()
            printed = corrected = -c * self._ci_at_2kpi(k, abs_tol / float(c))
            oracle = self.oscillatory_sine_integral(k, 2, tol = abs_tol)
            oracle_value, oracle_bound = self._mpf(oracle.value), oracle.tail_bound
        elif name is IdentityName.SI_INTEGRAL:
            printed = self._sine_fifth_closed(k, abs_tol, IdentityVariant.PRINTED)
            corrected = self._sine_fifth_closed(k, abs_tol, IdentityVariant.CORRECTED)
            oracle = self.oscillatory_sine_integral(k, 5, tol = abs_tol)
            oracle_value, oracle_bound = self._mpf(oracle.value), oracle.tail_bound
        elif name is IdentityName.HYP_LOG_INTEGRAL:
            printed = self._log_sine_fifth_printed(k, abs_tol)
            corrected = self._log_sine_fifth_closed(k, abs_tol)
            oracle = self.oscillatory_sine_integral(k, 5, log_weight = True, tol = abs_tol)
            oracle_value, oracle_bound = self._mpf(oracle.value), oracle.tail_bound
            extra_notes = f"; printed minus oracle = {float(printed - oracle_value):.3e}"
        elif name is IdentityName.I3_SERIES:
            series_tol = tol * self._identity_scale(name, k) / 10
            # truncation after K terms is at most 1/(2 pi^4 K^3)
            needed = int(math.ceil((1 / (math.pi**4 * series_tol))**(1 / 3)))
            k_or_s = max(k, needed)
            printed = corrected = self._i3_series(k_or_s, series_tol / 2, first_part_factor = 1)
            doubled = self._i3_series(k_or_s, series_tol / 2, first_part_factor = 2)
            oracle = self.i3(2, cfg)
            oracle_value = self._mpf(oracle.value)
            oracle_bound = oracle.tail_bound + self._bound(1 / (2 * self._pi()**4 * k_or_s**3))
            extra_notes = f"; doubling the k(1 - 2 k^2 pi^2) part gives rel error {float(abs(doubled - oracle_value) / abs(oracle_value)):.3e}"
        else:
            i3 = self.i3(2, cfg)
            i3p = self.i3_prime(2, cfg)
            integrals = -4 * self._mpf(i3p.value) - 13 * self._mpf(i3.value) / 3
            printed = ctx.mpf(11) / 12 + integrals
            corrected = -ctx.mpf(11) / 12 + integrals
            oracle = self.zeta_prime_direct(2, abs_tol)
            oracle_value = self._mpf(oracle.value)
            oracle_bound = oracle.tail_bound + 4 * i3p.tail_bound + 13 * i3.tail_bound / 3
            k_or_s = 2
            extra_notes = f"; printed minus oracle = {float(printed - oracle_value):.3e}"

        lhs = printed if variant is IdentityVariant.PRINTED else corrected
        rel_error = float(abs(lhs - oracle_value) / abs(oracle_value))
        corrected_rel_error = float(abs(corrected - oracle_value) / abs(oracle_value))
        oracle_rel = float(oracle_bound) / abs(float(oracle_value))
        verdict = 'match' if rel_error <= tol else 'mismatch'

        if verdict == 'match':
            notes = f"{variant.value} form reproduces the oracle (rel error {rel_error:.3e})"
        else:
            notes = (f"{variant.value} form disagrees with the oracle (rel error {rel_error:.3e}); "
                     f"suspect: {self.SUSPECT_COEFFICIENTS[name]}")
            logging.warning(f"Identity {name.value} ({variant.value}) failed at k = {k_or_s}: rel error {rel_error:.3e}")
        notes += f"; corrected form rel error {corrected_rel_error:.3e}{extra_notes}"
        if oracle_rel > tol / 2:
            notes += f"; oracle bound {oracle_rel:.3e} exceeds half the threshold"

        report = IdentityReport(identity_name = name.value,
                                k_or_s = k_or_s,
                                lhs = self._big(lhs),
                                rhs = self._big(oracle_value),
                                rel_error = rel_error,
                                threshold = tol,
                                verdict = verdict,
                                notes = notes,
                                variant = variant.value,
                                oracle_bound = oracle_rel,
                                corrected_rel_error = corrected_rel_error)
        self._record_identity_report(report)
        logging.info(f"Successfully verified {name.value} at k = {k_or_s}: {verdict}")
        return report

    # ------------------------------------------------------------------
    # convergence traces

    def partial_sums(self,
                     representation: Union[Representation, str],
                     k_end: int,
                     tol: float = 1e-10,
                     mode: Union[Series2Mode, str] = Series2Mode.RECONCILED) -> Iterator[Tuple[int, BigReal, BigReal]]:
        """
        Yields (index, ln A estimate, |increment|) for the series routes.

        The index is r for r2 (from 2), k for r3 and r6, n for r5.
        """
        representation = Representation(representation)
        if not isinstance(k_end, int) or k_end < 1:
            raise ValueError(f"k_end must be a positive integer, got {k_end}")

        if representation is Representation.R2_GLAISHER_PRODUCT:
            total = self._s_closed_part()
            for r, term in self._s_series_terms(self.ctx.ldexp(1, -(self.precision_bits - 8))):
                if r > k_end:
                    return
                total += term
                yield r, self._big(self._ln_a_from_s(total)), self._big(abs(term) / 3)
        elif representation is Representation.R3_CI_SERIES:
            self._check_tolerance(tol)
            for k, estimate, increment in self._r3_partial_sums(k_end, tol):
                yield k, self._big(estimate), self._big(abs(increment))
        elif representation is Representation.R5_HYPERFACTORIAL:
            for n, estimate, increment in self._r5_estimates(k_end):
                yield n, self._big(estimate), self._big(abs(increment))
        elif representation is Representation.R6_HYPERGEOMETRIC_SERIES:
            self._check_series2_terms(k_end)
            self._check_tolerance(tol)
            for k, estimate, increment in self._series2_partial_sums(k_end, Series2Mode(mode), tol):
                yield k, self._big(estimate), self._big(abs(increment))
        else:
            raise ValueError(f"{representation.tag} has no term index to trace")

    def convergence_trace(self,
                          representation: Union[Representation, str],
                          k_start: int,
                          k_end: int,
                          tol: float = 1e-10,
                          mode: Union[Series2Mode, str] = Series2Mode.RECONCILED) -> pd.DataFrame:
        """
        Partial sums against the reference for indices k_start..k_end.

        Returns
        -------
        pd.DataFrame
            Columns k, partial_sum, increment_abs, error_vs_reference holding
            BigReal values; also stored as `convergence_df`
        """
        if k_start > k_end:
            raise ValueError(f"Empty range {k_start}:{k_end}")
        reference = self.ln_a_reference(max(self.precision_bits, self.REFERENCE_MIN_BITS))
        rows = []
        for k, estimate, increment in self.partial_sums(representation, k_end, tol, mode):
            if k < k_start:
                continue
            rows.append({'k': k,
                         'partial_sum': estimate,
                         'increment_abs': increment,
                         'error_vs_reference': abs(estimate - reference)})
        self.convergence_df = pd.DataFrame(rows, columns = ['k', 'partial_sum', 'increment_abs', 'error_vs_reference'])
        logging.info(f"Successfully traced {len(rows)} partial sums of {Representation(representation).tag}")
        return self.convergence_df
