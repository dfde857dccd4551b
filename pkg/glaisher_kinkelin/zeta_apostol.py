import itertools
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import mpmath
import numpy as np

from .special_functions import (
    BigReal,
    DomainError,
    Number,
    PoleError,
    SeriesResult,
    SpecialFunctions,
)

logging.basicConfig(
    level = logging.INFO,
    format = '%(asctime)s - %(levelname)s - %(message)s'
)


@dataclass(frozen = True)
class QuadratureConfig:
    """
    Piecewise Gauss quadrature over [1, N + 1] in N unit cells.

    Parameters
    ----------
    intervals : int
        Number of unit cells N, at least 16
    nodes_per_interval : int
        Gauss-Legendre order per cell, at least 8
    tail_exponent_floor : float
        Smallest s + 3 for which the analytic tail bound is reported
    """
    intervals: int = 10_000
    nodes_per_interval: int = 16
    tail_exponent_floor: float = 1.0

    def __post_init__(self):
        if not isinstance(self.intervals, int) or self.intervals < 16:
            raise ValueError(f"intervals must be an integer >= 16, got {self.intervals}")
        if not isinstance(self.nodes_per_interval, int) or self.nodes_per_interval < 8:
            raise ValueError(f"nodes_per_interval must be an integer >= 8, got {self.nodes_per_interval}")

    @property
    def tail_start(self) -> int:
        return self.intervals + 1


class ZetaApostol(SpecialFunctions):
    """
    zeta'(x) through integrals of the periodic Bernoulli function P3, plus
    the Dirichlet-series oracles zeta'(s) and zeta(r) for s, r > 1.

    For x > -2, x != 1:

        zeta'(x) = -1/(x-1)^2 + 1/12 - x(x+1)(x+2)/6 * I3'(x) - (3x^2+6x+2)/6 * I3(x)

    with I3(s) = int_1^inf P3(x) / x^(s+3) dx and I3'(s) its s-derivative.
    """

    EULER_MACLAURIN_MIN_ORDER = 2
    EULER_MACLAURIN_START_CUTOFF = 16
    DIRECT_SUM_LIMIT = 1000
    OSCILLATORY_START_CUTOFF = 8
    OSCILLATORY_NODES = 16
    OSCILLATORY_MAX_TAIL_TERMS = 24
    INTEGRAL_CACHE_SIZE = 32

    def __init__(self,
                 precision_bits: int = SpecialFunctions.DEFAULT_PRECISION_BITS,
                 max_precision_bits: Optional[int] = None):
        super().__init__(precision_bits, max_precision_bits)
        self._gauss_rules = {}
        self._integral_cache = {}

    # ------------------------------------------------------------------
    # Gauss-Legendre rules on [0, 1]

    def _legendre_with_derivative(self, n: int, u: mpmath.mpf) -> Tuple[mpmath.mpf, mpmath.mpf]:
        previous = self.ctx.mpf(1)
        current = +u
        for k in range(1, n):
            previous, current = current, ((2 * k + 1) * u * current - k * previous) / (k + 1)
        derivative = n * (u * current - previous) / (u * u - 1)
        return current, derivative

    def gauss_legendre_rule(self, n: int) -> Tuple[List[mpmath.mpf], List[mpmath.mpf]]:
        """
        Nodes and weights of the n-point Gauss-Legendre rule mapped to [0, 1].

        numpy's double-precision nodes seed a Newton refinement at the
        working precision. Rules are cached per (n, precision).
        """
        key = (n, self.ctx.prec)
        if key in self._gauss_rules:
            return self._gauss_rules[key]

        ctx = self.ctx
        seeds, _ = np.polynomial.legendre.leggauss(n)
        nodes, weights = [], []
        with ctx.extraprec(16):
            for seed in seeds:
                u = ctx.mpf(float(seed))
                for _ in range(64):
                    p, dp = self._legendre_with_derivative(n, u)
                    step = p / dp
                    u -= step
                    if step == 0 or ctx.mag(step) < -ctx.prec:
                        break
                _, dp = self._legendre_with_derivative(n, u)
                weight = 2 / ((1 - u * u) * dp * dp)
                nodes.append((u + 1) / 2)
                weights.append(weight / 2)
        rule = ([+t for t in nodes], [+w for w in weights])
        self._gauss_rules[key] = rule
        return rule

    # ------------------------------------------------------------------
    # I3 and I3'

    def _i3_integral(self, s: Number, cfg: QuadratureConfig, log_weight: bool) -> SeriesResult:
        ctx = self.ctx
        s = self._mpf(s)
        if s <= -2:
            raise DomainError(f"The P3 integrals diverge for s <= -2, got s = {s}")
        exponent = s + 3
        if exponent <= cfg.tail_exponent_floor:
            raise DomainError(f"s + 3 = {exponent} is below tail_exponent_floor = {cfg.tail_exponent_floor}")

        key = (s._mpf_, cfg, log_weight, ctx.prec)
        if key in self._integral_cache:
            return self._integral_cache[key]

        nodes, weights = self.gauss_legendre_rule(cfg.nodes_per_interval)
        # P3 is the same cubic on every unit cell, so its values at the nodes are shared
        weighted_p3 = [w * self._p3(1 + t) for t, w in zip(nodes, weights)]
        integer_exponent = int(exponent) if ctx.isint(exponent) else None

        guard = int(math.log2(cfg.intervals * cfg.nodes_per_interval)) + 8
        total = ctx.mpf(0)
        with ctx.extraprec(guard):
            for n in range(1, cfg.intervals + 1):
                cell = ctx.mpf(0)
                for t, wp in zip(nodes, weighted_p3):
                    x = n + t
                    if integer_exponent is not None:
                        integrand = wp / x**integer_exponent
                    else:
                        integrand = wp * ctx.power(x, -exponent)
                    if log_weight:
                        integrand *= ctx.ln(x)
                    cell += integrand
                total += cell
            if log_weight:
                total = -total
        total = +total

        # int_X^inf x^-(s+3) dx and, by parts, int_X^inf ln x x^-(s+3) dx = X^-(s+2)(ln X + 1/(s+2))/(s+2)
        start = ctx.mpf(cfg.tail_start)
        envelope = ctx.sqrt(3) / 36
        tail = envelope * ctx.power(start, -(s + 2)) / (s + 2)
        if log_weight:
            tail *= ctx.ln(start) + 1 / (s + 2)

        result = SeriesResult(value = self._big(total),
                              terms_used = cfg.intervals,
                              tail_bound = self._bound(tail),
                              converged = bool(ctx.isfinite(tail)))
        if len(self._integral_cache) >= self.INTEGRAL_CACHE_SIZE:
            # drop the oldest entry
            self._integral_cache.pop(next(iter(self._integral_cache)))
        self._integral_cache[key] = result
        return result

    def i3(self, s: Number, cfg: Optional[QuadratureConfig] = None) -> SeriesResult:
        """
        I3(s) = int_1^inf P3(x) / x^(s+3) dx.

        Parameters
        ----------
        s : real, s > -2
        cfg : QuadratureConfig, optional

        Returns
        -------
        SeriesResult
            tail_bound = (sqrt(3)/36) (N+1)^-(s+2) / (s+2), using max|B3| on [0, 1]
        """
        return self._i3_integral(s, cfg or QuadratureConfig(), log_weight = False)

    def i3_prime(self, s: Number, cfg: Optional[QuadratureConfig] = None) -> SeriesResult:
        """
        I3'(s) = -int_1^inf P3(x) ln x / x^(s+3) dx.

        The tail bound of i3 gains the factor ln(N+1) + 1/(s+2).
        """
        return self._i3_integral(s, cfg or QuadratureConfig(), log_weight = True)

    def zeta_prime_apostol_result(self, x: Number, cfg: Optional[QuadratureConfig] = None) -> SeriesResult:
        """
        zeta'(x) assembled from i3 and i3_prime, with the combined tail bound.

        At x = -1 the formula reduces to (I3(-1) - 1) / 6, and whenever the
        cubic prefactor x(x+1)(x+2)/6 is zero i3_prime is skipped.
        """
        cfg = cfg or QuadratureConfig()
        ctx = self.ctx
        x = self._mpf(x)
        if x == 1:
            raise PoleError("zeta'(x) has a pole at x = 1")
        if x <= -2:
            raise DomainError(f"The zeta' integral formula holds for x > -2, got x = {x}")

        i3 = self.i3(x, cfg)
        i3_value = self._mpf(i3.value)
        if x == -1:
            value = (i3_value - 1) / 6
            bound = i3.tail_bound / 6
            return SeriesResult(value = self._big(value),
                                terms_used = i3.terms_used,
                                tail_bound = bound,
                                converged = i3.converged)

        cubic = x * (x + 1) * (x + 2) / 6
        quadratic = (3 * x * x + 6 * x + 2) / 6
        value = -1 / (x - 1)**2 + ctx.mpf(1) / 12 - quadratic * i3_value
        bound = self._bound(quadratic) * i3.tail_bound
        terms = i3.terms_used
        converged = i3.converged
        if cubic != 0:
            i3p = self.i3_prime(x, cfg)
            value -= cubic * self._mpf(i3p.value)
            bound += self._bound(cubic) * i3p.tail_bound
            terms += i3p.terms_used
            converged = converged and i3p.converged

        return SeriesResult(value = self._big(value),
                            terms_used = terms,
                            tail_bound = bound,
                            converged = converged)

    def zeta_prime_apostol(self, x: Number, cfg: Optional[QuadratureConfig] = None) -> BigReal:
        return self.zeta_prime_apostol_result(x, cfg).value

    # ------------------------------------------------------------------
    # Euler-Maclaurin summation

    def _euler_maclaurin_tail(self,
                              derivative: Callable[[int], mpmath.mpf],
                              integral: mpmath.mpf,
                              tol) -> Tuple[mpmath.mpf, mpmath.mpf, int, bool]:
        """
        sum_{n >= M} f(n) = int_M^inf f + f(M)/2 - sum_j B_2j/(2j)! f^(2j-1)(M).

        Corrections through B4 are always applied; further ones until the
        next is below tol/4. Returns (tail, bound, corrections, ok), ok False
        when the corrections start growing before reaching tol.
        """
        ctx = self.ctx
        total = integral + derivative(0) / 2
        previous = ctx.inf
        for j in itertools.count(1):
            term = ctx.bernoulli(2 * j) / ctx.factorial(2 * j) * derivative(2 * j - 1)
            size = abs(term)
            if j > self.EULER_MACLAURIN_MIN_ORDER and size < tol / 4:
                return total, 2 * size, j - 1, True
            if size >= previous:
                return total, 2 * size, j - 1, False
            total -= term
            previous = size

    def _log_power_derivative(self, s: mpmath.mpf, point: mpmath.mpf) -> Callable[[int], mpmath.mpf]:
        # d^m/dx^m [ln x x^-s] = (-1)^m (s)_m x^-(s+m) [ln x - sum_{i<m} 1/(s+i)]
        ctx = self.ctx
        log_point = ctx.ln(point)

        def derivative(m: int) -> mpmath.mpf:
            harmonic = ctx.fsum(1 / (s + i) for i in range(m))
            value = ctx.rf(s, m) * ctx.power(point, -(s + m)) * (log_point - harmonic)
            return -value if m % 2 else value

        return derivative

    def _power_derivative(self, r: mpmath.mpf, point: mpmath.mpf) -> Callable[[int], mpmath.mpf]:
        ctx = self.ctx

        def derivative(m: int) -> mpmath.mpf:
            value = ctx.rf(r, m) * ctx.power(point, -(r + m))
            return -value if m % 2 else value

        return derivative

    def _zeta_prime_direct(self, s: mpmath.mpf, tol) -> Tuple[mpmath.mpf, mpmath.mpf, int]:
        ctx = self.ctx
        cutoff = self.EULER_MACLAURIN_START_CUTOFF
        with ctx.extraprec(self.GUARD_BITS):
            while True:
                point = ctx.mpf(cutoff)
                integral = ctx.power(point, 1 - s) * (ctx.ln(point) / (s - 1) + 1 / (s - 1)**2)
                tail, bound, corrections, ok = self._euler_maclaurin_tail(self._log_power_derivative(s, point), integral, tol)
                if ok:
                    break
                cutoff *= 2
            head = ctx.mpf(0)
            for n in range(2, cutoff):
                head += ctx.ln(n) * ctx.power(n, -s)
            value = -(head + tail)
        return +value, bound, (cutoff - 2) + corrections

    def zeta_prime_direct(self, s: Number, tol: float) -> SeriesResult:
        """
        zeta'(s) = -sum_{n >= 2} ln n / n^s for s > 1, with an Euler-Maclaurin tail.

        Parameters
        ----------
        s : real, s > 1
        tol : float
            Absolute tolerance

        Returns
        -------
        SeriesResult
            terms_used counts the directly summed terms plus the Bernoulli
            corrections
        """
        s = self._mpf(s)
        if s <= 1:
            raise DomainError(f"The Dirichlet series for zeta'(s) needs s > 1, got s = {s}")
        self._check_tolerance(tol)
        value, bound, terms = self._zeta_prime_direct(s, tol)
        return SeriesResult(value = self._big(value),
                            terms_used = terms,
                            tail_bound = self._bound(bound),
                            converged = bound <= tol)

    def _zeta_int(self, r: int, tol) -> mpmath.mpf:
        ctx = self.ctx
        with ctx.extraprec(self.GUARD_BITS):
            # plain partial sum when n^(1-r)/(r-1) drops below tol/2 early enough
            log_cutoff = -float(ctx.ln(ctx.mpf(tol) * (r - 1) / 2)) / (r - 1)
            if log_cutoff < math.log(self.DIRECT_SUM_LIMIT):
                cutoff = max(2, int(math.ceil(math.exp(log_cutoff))))
                total = ctx.mpf(0)
                for n in range(1, cutoff + 1):
                    total += ctx.mpf(1) / ctx.mpf(n)**r
                return +total

            rr = ctx.mpf(r)
            cutoff = self.EULER_MACLAURIN_START_CUTOFF
            while True:
                point = ctx.mpf(cutoff)
                integral = ctx.power(point, 1 - rr) / (rr - 1)
                tail, bound, _, ok = self._euler_maclaurin_tail(self._power_derivative(rr, point), integral, tol)
                if ok:
                    break
                cutoff *= 2
            total = ctx.mpf(0)
            for n in range(1, cutoff):
                total += ctx.mpf(1) / ctx.mpf(n)**r
            total += tail
        return +total

    def zeta_int(self, r: int, tol: float) -> BigReal:
        """
        zeta(r) for integer r >= 2 to absolute `tol`.

        Small-tolerance or small-r cases use Euler-Maclaurin from a cutoff
        of 16 (doubled as needed); large r sums directly until the tail
        n^(1-r)/(r-1) is below tol/2.
        """
        if not isinstance(r, int) or r < 2:
            raise DomainError(f"zeta_int needs an integer r >= 2, got {r}")
        self._check_tolerance(tol)
        return self._big(self._zeta_int(r, tol))

    # ------------------------------------------------------------------
    # oscillatory quadrature oracle

    def _weight_derivative(self, power: int, log_weight: bool, point: mpmath.mpf) -> Callable[[int], mpmath.mpf]:
        p = self.ctx.mpf(power)
        if log_weight:
            return self._log_power_derivative(p, point)
        return self._power_derivative(p, point)

    def _oscillatory_tail(self, k: int, power: int, log_weight: bool, cutoff: int, tol) -> Tuple[mpmath.mpf, mpmath.mpf]:
        # int_X^inf sin(cx) h(x) dx = h(X)/c - h''(X)/c^3 + ... at integer X, where sin(cX) = 0
        ctx = self.ctx
        c = 2 * k * self._pi()
        derivative = self._weight_derivative(power, log_weight, ctx.mpf(cutoff))
        total = ctx.mpf(0)
        previous = ctx.inf
        for j in range(self.OSCILLATORY_MAX_TAIL_TERMS):
            term = derivative(2 * j) / c**(2 * j + 1)
            size = abs(term)
            if size >= previous or size < tol / 8:
                return total, 2 * size
            total += -term if j % 2 else term
            previous = size
        return total, 2 * previous

    def oscillatory_sine_integral(self,
                                  k: int,
                                  power: int,
                                  log_weight: bool = False,
                                  tol: float = 1e-12) -> SeriesResult:
        """
        int_1^inf sin(2 k pi x) h(x) dx with h(x) = x^-power or ln x * x^-power.

        Parameters
        ----------
        k : int
            Frequency index, k >= 1
        power : int
            Decay exponent, power >= 1
        log_weight : bool
            Multiply the weight by ln x
        tol : float
            Absolute tolerance for the tail estimate

        Returns
        -------
        SeriesResult

        Notes
        -----
        [1, X] is cut at the zeros of sin(2 k pi x) into half-period cells of
        width 1/(2k), each integrated with a 16-point Gauss rule. On cell i
        the sine equals (-1)^i sin(pi t) for t in [0, 1]. The integral beyond
        the integer cutoff X comes from its integration-by-parts expansion;
        X doubles until twice the first omitted term is below tol/2.
        """
        if not isinstance(k, int) or k < 1:
            raise ValueError(f"k must be a positive integer, got {k}")
        if not isinstance(power, int) or power < 1:
            raise ValueError(f"power must be a positive integer, got {power}")
        self._check_tolerance(tol)
        ctx = self.ctx

        with ctx.extraprec(self.GUARD_BITS):
            cutoff = self.OSCILLATORY_START_CUTOFF
            while True:
                tail, bound = self._oscillatory_tail(k, power, log_weight, cutoff, tol)
                if bound <= tol / 2:
                    break
                cutoff *= 2

            nodes, weights = self.gauss_legendre_rule(self.OSCILLATORY_NODES)
            shaped = [w * ctx.sinpi(t) for t, w in zip(nodes, weights)]
            width = 2 * k
            cells = width * (cutoff - 1)
            total = ctx.mpf(0)
            for i in range(cells):
                cell = ctx.mpf(0)
                for t, ws in zip(nodes, shaped):
                    x = 1 + (i + t) / width
                    weight = 1 / x**power
                    if log_weight:
                        weight *= ctx.ln(x)
                    cell += ws * weight
                total += -cell if i % 2 else cell
            value = total / width + tail

        return SeriesResult(value = self._big(value),
                            terms_used = cells,
                            tail_bound = self._bound(bound),
                            converged = bound <= tol)
