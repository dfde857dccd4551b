import pytest

from glaisher_kinkelin import BigReal, GlaisherKinkelin, QuadratureConfig, Series2Mode

# Frozen from independent high-precision runs
LN_A = '0.2487544770337842625472529935761139760973'
ZETA_PRIME_2 = '-0.9375482543158437537025740945678649778978'
ZETA_PRIME_NEG1 = '-0.1654211437004509292139196602427806427640'
ZETA_3 = '1.2020569031595942853997381615114499907649862923404988817922'
SI_PI = '1.8519370519824661703610533701579913633458'
CI_TWO_PI = '-0.02256066174634607'


def close(value, expected, tol):
    """|value - expected| <= tol, with the difference taken at 192 bits."""
    difference = BigReal.from_value(value, 192) - BigReal.from_value(expected, 192)
    return float(abs(difference)) <= tol


@pytest.fixture(scope = 'session')
def literals():
    return {
        'ln_a': BigReal.from_value(LN_A, 192),
        'zeta_prime_2': BigReal.from_value(ZETA_PRIME_2, 192),
        'zeta_prime_neg1': BigReal.from_value(ZETA_PRIME_NEG1, 192),
        'zeta_3': BigReal.from_value(ZETA_3, 192),
        'si_pi': BigReal.from_value(SI_PI, 192),
        'ci_two_pi': BigReal.from_value(CI_TWO_PI, 192),
    }

@pytest.fixture(scope = 'session')
def gk():
    return GlaisherKinkelin(128)

@pytest.fixture(scope = 'session')
def reference(gk):
    return gk.ln_a_reference_result(128)

@pytest.fixture(scope = 'session')
def r1_result(gk):
    return gk.ln_a_r1_result(QuadratureConfig(intervals = 10_000))

@pytest.fixture(scope = 'session')
def r6_reconciled(gk):
    return gk.ln_a_r6(50, Series2Mode.RECONCILED, 1e-10)
