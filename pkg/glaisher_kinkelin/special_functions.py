import functools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import ClassVar, Optional, Sequence, Tuple, Union

import mpmath
from mpmath.libmp import (
    fzero,
    from_int,
    from_str,
    mpf_abs,
    mpf_add,
    mpf_cmp,
    mpf_div,
    mpf_euler,
    mpf_log,
    mpf_mul,
    mpf_neg,
    mpf_pi,
    mpf_pos,
    mpf_shift,
    mpf_sub,
    round_nearest,
    to_float,
    to_str,
)

logging.basicConfig(
    level = logging.INFO,
    format = '%(asctime)s - %(levelname)s - %(message)s'
)

MIN_PRECISION_BITS = 64
LOG2_E = math.log2(math.e)
LOG10_2 = math.log10(2)

Number = Union[int, float, str, Fraction, 'BigReal', mpmath.mpf]


class DomainError(ValueError):
    """Argument outside the domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole."""


class PrecisionError(ArithmeticError):
    """
    A tolerance cannot be met at the available working precision.

    Attributes
    ----------
    required_bits : int or None
        Working precision that would have been needed
    peak_log10 : float or None
        log10 of the largest term of a cancelling series, when known
    k : int or None
        Series index at which the ceiling was hit, when known
    """

    def __init__(self,
                 message: str,
                 required_bits: Optional[int] = None,
                 peak_log10: Optional[float] = None,
                 k: Optional[int] = None):
        super().__init__(message)
        self.required_bits = required_bits
        self.peak_log10 = peak_log10
        self.k = k


def _truncate_significant(text: str, digits: int) -> str:
    # Cuts a decimal string after `digits` significant digits without rounding.
    mantissa, sep, exponent = text.partition('e')
    sign = ''
    if mantissa.startswith('-'):
        sign, mantissa = '-', mantissa[1:]
    kept = []
    significant = 0
    seen_point = False
    for ch in mantissa:
        if ch == '.':
            kept.append(ch)
            seen_point = True
            continue
        if significant >= digits:
            if seen_point:
                break
            kept.append('0')
            continue
        if ch != '0' or significant > 0:
            significant += 1
        kept.append(ch)
    out = ''.join(kept)
    if out.endswith('.'):
        out += '0'
    if '.' not in out:
        out += '.0'
    return sign + out + (sep + exponent if sep else '')


@dataclass(frozen = True)
class BigReal:
    """
    Arbitrary-precision real tagged with the precision it was computed at.

    Parameters
    ----------
    magnitude : mpmath.mpf
        The value; stored exactly as produced, never re-rounded
    precision_bits : int
        Working precision in bits, at least 64

    Notes
    -----
    Arithmetic between two BigReals runs at the larger of the two precisions
    and the result records that precision. Plain ints are promoted exactly.
    """
    magnitude: mpmath.mpf
    precision_bits: int

    def __post_init__(self):
        if not isinstance(self.precision_bits, int) or self.precision_bits < MIN_PRECISION_BITS:
            raise ValueError(f"precision_bits must be an integer >= {MIN_PRECISION_BITS}, got {self.precision_bits}")

    @classmethod
    def from_raw(cls, raw: tuple, precision_bits: int) -> 'BigReal':
        return cls(mpmath.mp.make_mpf(raw), precision_bits)

    @classmethod
    def from_value(cls, value: Number, precision_bits: int) -> 'BigReal':
        """Rounds int, float, decimal string, Fraction or mpf to `precision_bits`."""
        if isinstance(value, BigReal):
            raw = value.magnitude._mpf_
        elif isinstance(value, str):
            raw = from_str(value.strip(), precision_bits, round_nearest)
        elif isinstance(value, Fraction):
            raw = mpf_div(from_int(value.numerator), from_int(value.denominator), precision_bits, round_nearest)
        elif isinstance(value, int):
            raw = from_int(value)
        elif hasattr(value, '_mpf_'):
            raw = value._mpf_
        else:
            raw = mpmath.mpf(value)._mpf_
        return cls.from_raw(mpf_pos(raw, precision_bits, round_nearest), precision_bits)

    @property
    def raw(self) -> tuple:
        return self.magnitude._mpf_

    @property
    def digits_claimed(self) -> int:
        return max(1, int(math.floor(self.precision_bits * LOG10_2)) - 5)

    def _coerce(self, other) -> Optional['BigReal']:
        if isinstance(other, BigReal):
            return other
        if isinstance(other, int):
            return BigReal.from_raw(from_int(other), self.precision_bits)
        return None

    def _binary(self, other, op, reflected = False):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        prec = max(self.precision_bits, other.precision_bits)
        a, b = (other.raw, self.raw) if reflected else (self.raw, other.raw)
        return BigReal.from_raw(op(a, b, prec, round_nearest), prec)

    def __add__(self, other):
        return self._binary(other, mpf_add)

    def __radd__(self, other):
        return self._binary(other, mpf_add, reflected = True)

    def __sub__(self, other):
        return self._binary(other, mpf_sub)

    def __rsub__(self, other):
        return self._binary(other, mpf_sub, reflected = True)

    def __mul__(self, other):
        return self._binary(other, mpf_mul)

    def __rmul__(self, other):
        return self._binary(other, mpf_mul, reflected = True)

    def __truediv__(self, other):
        return self._binary(other, mpf_div)

    def __rtruediv__(self, other):
        return self._binary(other, mpf_div, reflected = True)

    def __neg__(self):
        return BigReal.from_raw(mpf_neg(self.raw), self.precision_bits)

    def __abs__(self):
        return BigReal.from_raw(mpf_abs(self.raw), self.precision_bits)

    def _compare(self, other) -> int:
        coerced = self._coerce(other)
        if coerced is None:
            return mpf_cmp(self.raw, mpmath.mpf(other)._mpf_)
        return mpf_cmp(self.raw, coerced.raw)

    def __eq__(self, other):
        if not isinstance(other, (BigReal, int, float)):
            return NotImplemented
        return self._compare(other) == 0

    def __hash__(self):
        return hash((self.raw, self.precision_bits))

    def __lt__(self, other):
        return self._compare(other) < 0

    def __le__(self, other):
        return self._compare(other) <= 0

    def __gt__(self, other):
        return self._compare(other) > 0

    def __ge__(self, other):
        return self._compare(other) >= 0

    def __float__(self):
        return to_float(self.raw)

    def to_decimal_string(self, digits: Optional[int] = None) -> str:
        """
        Decimal representation cut (not rounded) after `digits` significant digits.

        Parameters
        ----------
        digits : int, optional
            Significant digits to keep; defaults to digits_claimed

        Returns
        -------
        str
        """
        digits = self.digits_claimed if digits is None else digits
        if digits < 1:
            raise ValueError(f"digits must be positive, got {digits}")
        if self.raw == fzero:
            return '0.0'
        text = to_str(self.raw, digits + 3, strip_zeros = False)
        return _truncate_significant(text, digits)

    def __str__(self):
        return self.to_decimal_string()


@dataclass(frozen = True)
class SeriesResult:
    """
    Return shape of every summation and quadrature.

    `tail_bound` is absolute. `converged` implies `tail_bound` is within the
    tolerance the caller asked for, when a tolerance was asked for.
    """
    value: BigReal
    terms_used: int
    tail_bound: mpmath.mpf
    converged: bool
    notes: str = ''

    def __post_init__(self):
        if self.terms_used < 0:
            raise ValueError(f"terms_used must be non-negative, got {self.terms_used}")
        if self.tail_bound < 0:
            raise ValueError(f"tail_bound must be non-negative, got {self.tail_bound}")

    @property
    def digits_claimed(self) -> int:
        """Digits the value can stand behind, limited by both precision and tail bound."""
        digits = self.value.digits_claimed
        if self.tail_bound == 0 or self.value.raw == fzero:
            return digits
        if mpmath.isinf(self.tail_bound):
            return 1
        ratio = self.tail_bound / abs(self.value.magnitude)
        return max(1, min(digits, int(mpmath.floor(-mpmath.log10(ratio)))))


@dataclass(frozen = True)
class FundamentalConstants:
    """
    pi, Euler's gamma and ln(2 pi) rounded to one working precision.

    The three values come from stored decimal literals with more than 1000
    digits. Requests beyond the literal capacity are computed by mpmath's
    libmp routines instead and logged as a warning.
    """
    pi: BigReal
    euler_gamma: BigReal
    ln_2pi: BigReal

    PI_DIGITS: ClassVar[str] = (
        '3.14159265358979323846264338327950288419716939937510582097494459'
        '2307816406286208998628034825342117067982148086513282306647093844'
        '6095505822317253594081284811174502841027019385211055596446229489'
        '5493038196442881097566593344612847564823378678316527120190914564'
        '8566923460348610454326648213393607260249141273724587006606315588'
        '1748815209209628292540917153643678925903600113305305488204665213'
        '8414695194151160943305727036575959195309218611738193261179310511'
        '8548074462379962749567351885752724891227938183011949129833673362'
        '4406566430860213949463952247371907021798609437027705392171762931'
        '7675238467481846766940513200056812714526356082778577134275778960'
        '9173637178721468440901224953430146549585371050792279689258923542'
        '0199561121290219608640344181598136297747713099605187072113499999'
        '9837297804995105973173281609631859502445945534690830264252230825'
        '3344685035261931188171010003137838752886587533208381420617177669'
        '1473035982534904287554687311595628638823537875937519577818577805'
        '3217122680661300192787661119590921642019893809525720106548586327'
        '88659361'
    )

    EULER_GAMMA_DIGITS: ClassVar[str] = (
        '0.57721566490153286060651209008240243104215933593992359880576723'
        '4884867726777664670936947063291746749514631447249807082480960504'
        '0144865428362241739976449235362535003337429373377376739427925952'
        '5824709491600873520394816567085323315177661152862119950150798479'
        '3745085705740029921354786146694029604325421519058775535267331399'
        '2540129674205137541395491116851028079842348775872050384310939973'
        '6137255306088933126760017247953783675927135157722610273492913940'
        '7984301034177717780881549570661075010161916633401522789358679654'
        '9725203621287922655595366962817638879272680132431010476505963703'
        '9473949576389065729679296010090151251959509222435014093498712282'
        '4794974719564697631850667612906381105182419744486783638086174945'
        '5169892792301877391072945781554316005002182844096053772434203285'
        '4783670151773943987003023703395183286900015581939880427074115422'
        '2781971652301107356583396734871765049194181230004065469314299929'
        '7779569303100503086303418569803231083691640025892970890985486825'
        '7773642882539549258736295961332985747393023734388470703702844129'
        '20166417'
    )

    LN_2PI_DIGITS: ClassVar[str] = (
        '1.83787706640934548356065947281123527972279494727556682563430308'
        '0965531391854520795389486597271908395244011293249268674892733725'
        '7636815871443117518304453627872071214850947173380927918119827616'
        '1126032646974618925474925103650338990895482019171870278396322319'
        '6261148010695390772129917984462427911385548699942200567039196638'
        '9850627885412925913729488231249524260974736305689987586887646607'
        '9702589530931456386347597570617137884627256430794616720529505853'
        '0982980078711199999207412694370514404715243070068724759205431697'
        '5009722719076849626583582485399922753679280302789575459100202066'
        '4176839367123881595143325254117505076497245186050590421609903624'
        '0393610451960091761077149767065888227813615655553475444507626676'
        '5187901482804052386787426337408944137118915686982655208159082601'
        '5367960940350517749618771749114464650668778489385596557499370542'
        '2516175162331748750580176968966183507788152591908819896935796078'
        '3242618144657028735729075124759420708690852634755752923440722283'
        '4527535937679132380540148826095822827999769257612178127235740915'
        '48090088'
    )

    @classmethod
    def literal_capacity_bits(cls) -> int:
        """Largest precision the literals can round correctly to, with 16 bits to spare."""
        decimals = min(len(text.split('.')[1]) for text in (cls.PI_DIGITS, cls.EULER_GAMMA_DIGITS, cls.LN_2PI_DIGITS))
        return int(decimals / LOG10_2) - 16

    @classmethod
    def at_precision(cls, precision_bits: int) -> 'FundamentalConstants':
        if precision_bits < MIN_PRECISION_BITS:
            raise ValueError(f"precision_bits must be >= {MIN_PRECISION_BITS}, got {precision_bits}")
        return cls(pi = BigReal.from_raw(_constant_raw('pi', precision_bits), precision_bits),
                   euler_gamma = BigReal.from_raw(_constant_raw('euler_gamma', precision_bits), precision_bits),
                   ln_2pi = BigReal.from_raw(_constant_raw('ln_2pi', precision_bits), precision_bits))


@functools.lru_cache(maxsize = None)
def _constant_raw(name: str, precision_bits: int) -> tuple:
    if precision_bits <= FundamentalConstants.literal_capacity_bits():
        literal = {'pi': FundamentalConstants.PI_DIGITS,
                   'euler_gamma': FundamentalConstants.EULER_GAMMA_DIGITS,
                   'ln_2pi': FundamentalConstants.LN_2PI_DIGITS}[name]
        return from_str(literal, precision_bits, round_nearest)

    logging.warning(f"Precision {precision_bits} bits exceeds the stored {name} literal; computing it with mpmath")
    extra = precision_bits + 20
    if name == 'pi':
        return mpf_pi(precision_bits, round_nearest)
    if name == 'euler_gamma':
        return mpf_euler(precision_bits, round_nearest)
    if name == 'ln_2pi':
        return mpf_log(mpf_shift(mpf_pi(extra, round_nearest), 1), precision_bits, round_nearest)
    raise KeyError(f"Unknown constant {name}")


class SpecialFunctions:
    """
    Scalar building blocks at a fixed working precision.

    Every instance owns a private mpmath context, so instances never share
    mutable state. Precision escalation changes that context in place and
    results are cached on the instance, so an instance must not be shared
    between threads: build one per thread.

    Parameters
    ----------
    precision_bits : int
        Working precision, at least 64 bits
    max_precision_bits : int, optional
        Ceiling for automatic precision escalation; defaults to
        precision_bits + 2048
    """

    DEFAULT_PRECISION_BITS = 128
    PRECISION_HEADROOM_BITS = 2048
    CI_SI_CROSSOVER = 32
    GUARD_BITS = 32

    # (numerator params, denominator params) of the hypergeometric functions in use
    SERIES2_PARAMETER_SETS = {
        '1F2': ((Fraction(-1, 2),),
                (Fraction(1, 2), Fraction(5, 2))),
        '2F3': ((Fraction(-1, 2), Fraction(-1, 2)),
                (Fraction(1, 2), Fraction(1, 2), Fraction(5, 2))),
        'log_sine': ((Fraction(1, 2), Fraction(1, 2)),
                     (Fraction(3, 2), Fraction(3, 2), Fraction(3, 2))),
    }

    def __init__(self,
                 precision_bits: int = DEFAULT_PRECISION_BITS,
                 max_precision_bits: Optional[int] = None):
        if not isinstance(precision_bits, int) or precision_bits < MIN_PRECISION_BITS:
            raise ValueError(f"precision_bits must be an integer >= {MIN_PRECISION_BITS}, got {precision_bits}")
        if max_precision_bits is None:
            max_precision_bits = precision_bits + self.PRECISION_HEADROOM_BITS
        if max_precision_bits < precision_bits:
            raise ValueError(f"max_precision_bits ({max_precision_bits}) is below precision_bits ({precision_bits})")

        self.precision_bits = precision_bits
        self.max_precision_bits = max_precision_bits
        self.ctx = mpmath.MPContext()
        self.ctx.prec = precision_bits
        self.constants = FundamentalConstants.at_precision(precision_bits)

    # ------------------------------------------------------------------
    # conversions and precision bookkeeping

    def _mpf(self, value: Number) -> mpmath.mpf:
        if isinstance(value, BigReal):
            return self.ctx.make_mpf(value.raw)
        if isinstance(value, Fraction):
            return self.ctx.mpf(value.numerator) / value.denominator
        return self.ctx.mpf(value)

    def _big(self, value: mpmath.mpf, precision_bits: Optional[int] = None) -> BigReal:
        bits = self.precision_bits if precision_bits is None else precision_bits
        raw = value._mpf_ if hasattr(value, '_mpf_') else self.ctx.mpf(value)._mpf_
        return BigReal.from_raw(mpf_pos(raw, bits, round_nearest), bits)

    def _bound(self, value: mpmath.mpf) -> mpmath.mpf:
        # tail bounds leave the instance as global-context mpfs
        return mpmath.mp.make_mpf(abs(value)._mpf_)

    def _pi(self) -> mpmath.mpf:
        return self.ctx.make_mpf(_constant_raw('pi', self.ctx.prec))

    def _euler(self) -> mpmath.mpf:
        return self.ctx.make_mpf(_constant_raw('euler_gamma', self.ctx.prec))

    def _ln_2pi(self) -> mpmath.mpf:
        return self.ctx.make_mpf(_constant_raw('ln_2pi', self.ctx.prec))

    def _check_tolerance(self, tol) -> None:
        if not tol > 0:
            raise ValueError(f"tol must be positive, got {tol}")
        required = 8 - self.ctx.mag(self.ctx.mpf(tol))
        if required > self.ctx.prec:
            raise PrecisionError(f"Tolerance {mpmath.nstr(tol, 5)} needs {required} bits, working precision is {self.ctx.prec}",
                                 required_bits = required)

    def _escalate(self, extra_bits: int, peak_log10: Optional[float] = None):
        """Context manager raising the working precision by `extra_bits`, within the ceiling."""
        required = self.ctx.prec + extra_bits
        if required > self.max_precision_bits:
            raise PrecisionError(f"Precision escalation to {required} bits exceeds the ceiling of {self.max_precision_bits}",
                                 required_bits = required,
                                 peak_log10 = peak_log10)
        return self.ctx.extraprec(extra_bits)

    # ------------------------------------------------------------------
    # periodic Bernoulli function

    def _p3(self, x: mpmath.mpf) -> mpmath.mpf:
        t = x - self.ctx.floor(x)
        return ((t - 1.5) * t + 0.5) * t

    def p3_closed(self, x: Number) -> BigReal:
        """
        Periodic Bernoulli function P3(x) = B3({x}) = t^3 - 3t^2/2 + t/2, t = {x}.

        Parameters
        ----------
        x : real, x >= 1

        Returns
        -------
        BigReal
        """
        x = self._mpf(x)
        if x < 1:
            raise DomainError(f"p3_closed needs x >= 1, got {x}")
        return self._big(self._p3(x))

    def p3_fourier(self, x: Number, K: int) -> SeriesResult:
        """
        K-term sine series (3 / (2 pi^3)) sum_k sin(2 k pi x) / k^3.

        The tail beyond K is bounded by 3 / (4 pi^3 K^2).
        """
        if not isinstance(K, int) or K < 1:
            raise ValueError(f"K must be a positive integer, got {K}")
        ctx = self.ctx
        x = self._mpf(x)
        if x < 1:
            raise DomainError(f"p3_fourier needs x >= 1, got {x}")

        total = ctx.mpf(0)
        for k in range(1, K + 1):
            total += ctx.sinpi(2 * k * x) / k**3
        pi = self._pi()
        value = 3 * total / (2 * pi**3)
        tail = 3 / (4 * pi**3 * K**2)
        return SeriesResult(value = self._big(value),
                            terms_used = K,
                            tail_bound = self._bound(tail),
                            converged = True)

    # ------------------------------------------------------------------
    # cosine and sine integrals

    def _auxiliary_fg(self, z: mpmath.mpf, tol) -> Tuple[mpmath.mpf, mpmath.mpf, mpmath.mpf]:
        """
        Auxiliary functions f(z), g(z) from their divergent asymptotic series.

        f(z) ~ sum (-1)^n (2n)! / z^(2n+1), g(z) ~ sum (-1)^n (2n+1)! / z^(2n+2).
        Summation stops at the smallest term or once terms fall below tol/8;
        the returned bound is twice the first omitted term.
        """
        ctx = self.ctx
        inv = 1 / z
        term_f = inv
        f = ctx.mpf(0)
        g = ctx.mpf(0)
        previous = ctx.inf
        n = 0
        while True:
            term_g = term_f * (2 * n + 1) * inv
            size = max(term_f, term_g)
            if size >= previous or size < tol / 8:
                return f, g, 2 * size
            if n % 2:
                f -= term_f
                g -= term_g
            else:
                f += term_f
                g += term_g
            previous = size
            term_f = term_g * (2 * n + 2) * inv
            n += 1

    def _series_guard_bits(self, z: mpmath.mpf) -> int:
        return int(math.ceil(float(z) * LOG2_E)) + self.GUARD_BITS

    def _ci_series(self, z: mpmath.mpf, tol) -> mpmath.mpf:
        ctx = self.ctx
        with self._escalate(self._series_guard_bits(z)):
            zz = z * z
            term = ctx.mpf(1)
            total = ctx.mpf(0)
            k = 1
            while True:
                term = -term * zz / ((2 * k - 1) * (2 * k))
                contribution = term / (2 * k)
                total += contribution
                if 2 * k > z and abs(contribution) < tol / 4:
                    break
                k += 1
            value = self._euler() + ctx.ln(z) + total
        return +value

    def _si_series(self, z: mpmath.mpf, tol) -> mpmath.mpf:
        # (2n+1)^2 (2n)! = (2n+1)(2n+1)!, so both printed forms of the series agree
        ctx = self.ctx
        if z == 0:
            return ctx.mpf(0)
        with self._escalate(self._series_guard_bits(z)):
            zz = z * z
            term = +z
            total = +z
            n = 0
            while True:
                n += 1
                term = -term * zz / ((2 * n) * (2 * n + 1))
                contribution = term / (2 * n + 1)
                total += contribution
                if 2 * n > z and abs(contribution) < tol / 4:
                    break
        return +total

    def _ci(self, z: mpmath.mpf, tol) -> mpmath.mpf:
        if z > self.CI_SI_CROSSOVER:
            f, g, bound = self._auxiliary_fg(z, tol)
            if bound <= tol:
                return f * self.ctx.sin(z) - g * self.ctx.cos(z)
        return self._ci_series(z, tol)

    def _si_complement(self, z: mpmath.mpf, tol) -> mpmath.mpf:
        """pi/2 - Si(z), which keeps full relative accuracy for large z."""
        if z > self.CI_SI_CROSSOVER:
            f, g, bound = self._auxiliary_fg(z, tol)
            if bound <= tol:
                return f * self.ctx.cos(z) + g * self.ctx.sin(z)
        return self._pi() / 2 - self._si_series(z, tol)

    def _si(self, z: mpmath.mpf, tol) -> mpmath.mpf:
        if z > self.CI_SI_CROSSOVER:
            return self._pi() / 2 - self._si_complement(z, tol)
        return self._si_series(z, tol)

    def _ci_at_2kpi(self, k: int, tol) -> mpmath.mpf:
        z = 2 * k * self._pi()
        f, g, bound = self._auxiliary_fg(z, tol)
        if bound <= tol:
            return -g
        return self._ci(z, tol)

    def _si_complement_at_2kpi(self, k: int, tol) -> mpmath.mpf:
        z = 2 * k * self._pi()
        f, g, bound = self._auxiliary_fg(z, tol)
        if bound <= tol:
            return f
        return self._si_complement(z, tol)

    def ci(self, z: Number, tol: float) -> BigReal:
        """
        Cosine integral Ci(z) = -int_z^inf cos(t)/t dt to absolute `tol`.

        Parameters
        ----------
        z : real, z > 0
        tol : float
            Absolute tolerance

        Returns
        -------
        BigReal

        Notes
        -----
        Uses gamma + ln z + sum (-z^2)^k / (2k (2k)!) for z <= 32 and the
        auxiliary form f(z) sin z - g(z) cos z above, provided the smallest
        asymptotic term is within tol. Otherwise the power series runs with
        ceil(z log2 e) + 32 guard bits.
        """
        z = self._mpf(z)
        if z <= 0:
            raise DomainError(f"ci needs z > 0, got {z}")
        self._check_tolerance(tol)
        return self._big(self._ci(z, tol))

    def ci_at_2kpi(self, k: int, tol: float) -> BigReal:
        """Ci(2 k pi) = -g(2 k pi), falling back to ci() when the asymptotic series cannot reach tol."""
        if not isinstance(k, int) or k < 1:
            raise ValueError(f"k must be a positive integer, got {k}")
        self._check_tolerance(tol)
        return self._big(self._ci_at_2kpi(k, tol))

    def si(self, z: Number, tol: float) -> BigReal:
        """
        Sine integral Si(z) = int_0^z sin(t)/t dt to absolute `tol`.

        Large z uses Si(z) = pi/2 - f(z) cos z - g(z) sin z.
        """
        z = self._mpf(z)
        if z < 0:
            raise DomainError(f"si needs z >= 0, got {z}")
        self._check_tolerance(tol)
        return self._big(self._si(z, tol))

    # ------------------------------------------------------------------
    # generalized hypergeometric series

    def _hyp_pfq(self, a: Sequence[Fraction], b: Sequence[Fraction], x: mpmath.mpf, tol) -> mpmath.mpf:
        ctx = self.ctx
        if x == 0:
            return ctx.mpf(1)

        order = len(b) - len(a) + 1
        log_peak = order * float(abs(x)) ** (1.0 / order)
        extra = int(math.ceil(log_peak * LOG2_E)) + self.GUARD_BITS
        with self._escalate(extra, peak_log10 = log_peak / math.log(10)):
            term = ctx.mpf(1)
            total = ctx.mpf(1)
            xf = abs(float(x))
            n = 0
            while True:
                numerator = 1
                denominator = n + 1
                for alpha in a:
                    numerator *= alpha.numerator + n * alpha.denominator
                    denominator *= alpha.denominator
                for beta in b:
                    denominator *= beta.numerator + n * beta.denominator
                    numerator *= beta.denominator
                if numerator == 0:
                    break
                term = term * x * numerator / denominator
                total += term
                n += 1

                ratio = xf
                for alpha in a:
                    ratio *= abs(float(alpha) + n)
                for beta in b:
                    ratio /= abs(float(beta) + n)
                ratio /= n + 1
                if ratio < 0.5 and abs(term) < tol / 8:
                    break
        return +total

    def hyp_pfq(self,
                numerator_params: Sequence,
                denominator_params: Sequence,
                x: Number,
                tol: float) -> BigReal:
        """
        Generalized hypergeometric pFq(a; b; x) for p <= q, to absolute `tol`.

        Parameters
        ----------
        numerator_params, denominator_params : sequences of rationals
            Accepts ints, Fractions or strings such as '-1/2'
        x : real
        tol : float

        Returns
        -------
        BigReal

        Notes
        -----
        Terms of these series peak near exp((q - p + 1) |x|^(1/(q - p + 1)))
        before the alternating sum collapses, so the working precision is
        raised by that many bits plus 32 guard bits. At x = -k^2 pi^2 with
        q - p = 1 this is ceil(2 k pi log2 e) + 32 bits. Escalation above
        max_precision_bits raises PrecisionError.
        """
        a = [Fraction(v) for v in numerator_params]
        b = [Fraction(v) for v in denominator_params]
        if len(a) > len(b):
            raise DomainError(f"hyp_pfq needs p <= q, got p = {len(a)}, q = {len(b)}")
        for beta in b:
            if beta.denominator == 1 and beta <= 0:
                raise DomainError(f"Denominator parameter {beta} is a non-positive integer")
        x = self._mpf(x)
        self._check_tolerance(tol)
        return self._big(self._hyp_pfq(a, b, x, tol))
