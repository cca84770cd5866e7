"""Cylinder-function layer: closed forms, identities, domain policing."""

import cmath
import math

import numpy as np
import pytest

from camscat.cylinder import (
    ABS_ARG_MAX,
    IM_ORDER_MAX,
    RE_ORDER_MAX,
    bessel_j,
    hankel,
    hankel_pair,
)
from camscat.errors import DomainError, NearIntegerOrderWarning
from camscat.verify import highprec_bessel_j, highprec_hankel

SPOT_ARGS = (0.7, 3.0, 25.0, 2.0 + 1.5j, 10.0 - 4.0j)


def closed_j_half(z):
    return cmath.sqrt(2.0 / (math.pi * z)) * cmath.sin(z)


def closed_h_half(kind, z):
    sign = 1.0 if kind == 1 else -1.0
    return -sign * 1j * cmath.sqrt(2.0 / (math.pi * z)) * cmath.exp(sign * 1j * z)


def closed_h1_3half(z):
    return -cmath.sqrt(2.0 / (math.pi * z)) * cmath.exp(1j * z) * (1.0 + 1j / z)


def test_half_integer_closed_forms():
    for z in map(complex, SPOT_ARGS):
        assert abs(bessel_j(0.5, z) - closed_j_half(z)) <= 1e-12 * abs(closed_j_half(z))
        for kind in (1, 2):
            ref = closed_h_half(kind, z)
            assert abs(hankel(kind, 0.5, z).value - ref) <= 1e-12 * abs(ref)
        ref = closed_h1_3half(z)
        assert abs(hankel(1, 1.5, z).value - ref) <= 1e-12 * abs(ref)


def test_wronskian_identity():
    for nu, z in ((2.3 + 0.7j, 5.0), (7.5, 3.0 - 2.0j), (-4.2 + 1.1j, 12.0),
                  (0.5, 0.9), (17.0 + 3.0j, 30.0)):
        h1, h2 = hankel_pair(nu, complex(z))
        w = h1.value * h2.deriv_arg - h1.deriv_arg * h2.value
        ref = -4j / (math.pi * complex(z))
        assert abs(w - ref) <= 1e-10 * abs(ref)


def test_reflection_identity():
    for nu, z in ((2.3 + 0.7j, 5.0), (7.5, 3.0 - 2.0j), (-4.2 + 1.1j, 12.0)):
        z = complex(z)
        h1 = hankel(1, nu, z).value
        h2 = hankel(2, nu, z).value
        assert abs(hankel(1, -nu, z).value - cmath.exp(1j * math.pi * nu) * h1) \
            <= 1e-10 * abs(h1)
        assert abs(hankel(2, -nu, z).value - cmath.exp(-1j * math.pi * nu) * h2) \
            <= 1e-10 * abs(h2)


def test_against_highprec_oracle_spots():
    rng = np.random.default_rng(7)
    for _ in range(12):
        nu = complex(rng.uniform(-12, 12), rng.uniform(-4, 4))
        z = complex(rng.uniform(0.4, 30), rng.uniform(-8, 8))
        assert abs(bessel_j(nu, z) - highprec_bessel_j(nu, z)) \
            <= 1e-10 * max(abs(highprec_bessel_j(nu, z)), 1e-300)
        for kind in (1, 2):
            ref = highprec_hankel(kind, nu, z)
            assert abs(hankel(kind, nu, z).value - ref) <= 1e-10 * abs(ref)


def test_argument_derivative_consistent():
    h = 1e-6
    for nu, z in ((3.3 + 0.4j, 7.0), (0.5, 2.0), (9.1, 14.0 - 3.0j)):
        z = complex(z)
        for kind in (1, 2):
            val = hankel(kind, nu, z)
            fd = (hankel(kind, nu, z + h).value - hankel(kind, nu, z - h).value) / (2 * h)
            assert abs(val.deriv_arg - fd) <= 1e-7 * abs(fd)


def test_near_integer_order_continuity():
    with pytest.warns(NearIntegerOrderWarning):
        base = hankel(1, 3.0, 2.5).value
        close = hankel(1, 3.0 + 1e-9, 2.5).value
    assert abs(close - base) <= 1e-6 * abs(base)
    # just outside the warning band: no warning, still continuous
    near = hankel(1, 3.0 + 1e-4, 2.5).value
    assert abs(near - base) <= 1e-3 * abs(base)


def test_domain_box_enforced():
    with pytest.raises(DomainError):
        hankel(1, RE_ORDER_MAX + 1.0, 2.0)
    with pytest.raises(DomainError):
        hankel(1, 1.0 + 1j * (IM_ORDER_MAX + 1.0), 2.0)
    with pytest.raises(DomainError):
        hankel(1, 1.0, ABS_ARG_MAX + 5.0)
    with pytest.raises(DomainError):
        hankel(1, 1.0, 0.0)
    with pytest.raises(DomainError):
        hankel(3, 1.0, 2.0)


def test_bessel_j_at_zero_argument():
    assert bessel_j(0.0, 0.0) == 1.0 + 0j
    assert bessel_j(2.5, 0.0) == 0.0 + 0j
    with pytest.raises(DomainError):
        bessel_j(-0.5, 0.0)
