"""Cylinder functions of complex order and complex argument.

Evaluates J_nu(z), H^(1)_nu(z), H^(2)_nu(z) and their argument derivatives for
orders in the box |Re nu| <= 50, |Im nu| <= 20 and arguments |z| <= 60 off the
negative real axis, to a target relative accuracy of 1e-10.

Routes:

* ascending series in float128-free complex arithmetic for |z| <= 10 (or when
  the order dominates the argument, where the series is benign),
* Miller downward recurrence seeded by the benign series at a shifted order
  for larger |z|,
* an arbitrary-precision rerun of the same series (raw mpmath arithmetic, not
  mpmath's own Bessel routines) whenever the realized cancellation puts the
  float result outside the accuracy budget.

Hankel functions come from the reflection formulas

    H1_nu = [J_{-nu} - e^{-i pi nu} J_nu] / (+i sin(pi nu)),
    H2_nu = [J_{-nu} - e^{+i pi nu} J_nu] / (-i sin(pi nu)),

with every evaluation validated against the Wronskian
W{J_nu, J_{-nu}} = -2 sin(pi nu)/(pi z).  Orders within 1e-3 of an integer are
routed to the widened-precision path (the reflection denominator amplifies
float rounding there); within 1e-8 of an integer the value is recovered from
symmetric order offsets +-1e-5 with one Richardson refinement and a
NearIntegerOrderWarning carrying the error estimate.

Magnitudes are returned unscaled: inside the stated box they stay within
float range (no exponential scaling is applied).
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import mpmath as mp
from scipy.special import loggamma

from .errors import (
    AccuracyLossError,
    DomainError,
    NearIntegerOrderWarning,
    ZeroDenominatorError,
)

_EPS = 2.2204460492503131e-16
# escalate to widened precision when the realized float error estimate exceeds this
_FLOAT_ERR_BUDGET = 1e-11
# |z| above which the direct series gives way to Miller recurrence
_SERIES_Z_CUT = 10.0
# order bands around integers: silent widened path / offset-averaged path
_NEAR_INT_BAND = 1e-3
_AT_INT_BAND = 1e-8
_OFFSET = 1e-5

RE_ORDER_MAX = 50.0
IM_ORDER_MAX = 20.0
ABS_ARG_MAX = 60.0


@dataclass(frozen=True)
class CylinderValue:
    """A cylinder-function value and its derivative with respect to the argument."""

    value: complex
    deriv_arg: complex


def _check_domain(order: complex, arg: complex, *, allow_zero_arg: bool = False) -> None:
    if not (math.isfinite(order.real) and math.isfinite(order.imag)
            and math.isfinite(arg.real) and math.isfinite(arg.imag)):
        raise DomainError("non-finite order or argument")
    if abs(order.real) > RE_ORDER_MAX or abs(order.imag) > IM_ORDER_MAX:
        raise DomainError(f"order {order} outside box |Re|<={RE_ORDER_MAX}, |Im|<={IM_ORDER_MAX}")
    if abs(arg) > ABS_ARG_MAX:
        raise DomainError(f"argument {arg} outside |z| <= {ABS_ARG_MAX}")
    if arg == 0:
        if not allow_zero_arg:
            raise DomainError("argument 0 not supported here")
        return
    if arg.real < 0 and abs(arg.imag) < 1e-12 * abs(arg):
        raise DomainError(f"argument {arg} on the negative-real branch cut")


def _series_one_float(nu: complex, z: complex) -> tuple[complex, float]:
    """J_nu(z) by the ascending series; returns (value, relative error estimate).

    The error estimate is the realized cancellation max|term| / |sum| times the
    rounding floor; callers escalate to the widened path when it is too large.
    """
    n = round(nu.real)
    if nu == n and n < 0:
        val, err = _series_one_float(complex(-n, 0.0), z)
        return ((-1) ** (-n)) * val, err
    lp = nu * cmath.log(z / 2) - loggamma(nu + 1)
    if lp.real > 690.0:
        # cannot happen inside the domain box; guard anyway
        raise AccuracyLossError(f"series prefactor overflow at order {nu}, arg {z}")
    pref = cmath.exp(lp)
    w = -(z * z) / 4.0
    term = 1.0 + 0j
    s = 1.0 + 0j
    comp = 0.0 + 0j  # Kahan compensation
    maxt = 1.0
    m = 0
    for m in range(1, 600):
        term *= w / (m * (nu + m))
        at = abs(term)
        if at > maxt:
            maxt = at
        y = term - comp
        t = s + y
        comp = (t - s) - y
        s = t
        if at == 0.0:
            break
        if m > 3 and at <= 1e-17 * abs(s):
            break
    mag = abs(s)
    if mag == 0.0:
        return 0.0 + 0j, 1.0
    canc = maxt / mag
    err = (8.0 * _EPS) * canc * (1.0 + 0.05 * math.sqrt(m)) + 4.0 * _EPS
    return pref * s, err


def _j_pair_float(nu: complex, z: complex) -> tuple[complex, complex, float]:
    """(J_nu, J_{nu-1}) with a relative error estimate for the worse of the two."""
    az = abs(z)
    if az <= _SERIES_Z_CUT or nu.real >= 2.0 * az:
        j, e1 = _series_one_float(nu, z)
        jm1, e2 = _series_one_float(nu - 1, z)
        return j, jm1, max(e1, e2)
    # Miller: descend from a benign seed order with Re >= 2|z|
    nsteps = max(0, int(math.ceil(2.0 * az - nu.real)))
    mu0 = nu + nsteps
    seed1, e1 = _series_one_float(mu0 + 1, z)
    seed0, e2 = _series_one_float(mu0, z)
    jp1, j = seed1, seed0
    maxrun = max(abs(jp1), abs(j))
    for i in range(nsteps + 1):
        mu = mu0 - i
        jm1 = (2.0 * mu / z) * j - jp1
        jp1, j = j, jm1
        a = abs(j)
        if a > maxrun:
            maxrun = a
    target, companion = jp1, j  # J_nu, J_{nu-1}
    base = max(e1, e2) + (nsteps + 4) * _EPS
    scale = min(abs(target), abs(companion))
    amp = maxrun / scale if scale > 0 else 1e18
    return target, companion, base * max(amp, 1.0)


def _miller_hidden_risk(nu: complex, z: complex) -> bool:
    """True when the Miller descent ends at Re nu < 0 while the order or
    the argument carries an imaginary part.

    There the two cylinder solutions ride different exponentials, so an
    admixture of the second solution can grow behind the larger exponential
    where the magnitude-based estimate of `_j_pair_float` cannot see it;
    only a realized identity check or widened precision is trustworthy.
    """
    if abs(z) <= _SERIES_Z_CUT or nu.real >= 2.0 * abs(z):
        return False  # series route: its cancellation estimate is realized
    return nu.real < 0.0 and (abs(nu.imag) > 1e-9 or abs(z.imag) > 1e-9)


def _series_one_mp(nu: complex, z: complex) -> tuple["mp.mpc", float, int]:
    """J_nu(z) at the current mp precision; returns (value, cancellation, terms)."""
    n = round(nu.real)
    if nu == n and n < 0:
        val, canc, m = _series_one_mp(complex(-n, 0.0), z)
        return ((-1) ** (-n)) * val, canc, m
    nuc = mp.mpc(nu)
    zc = mp.mpc(z)
    pref = mp.exp(nuc * mp.log(zc / 2) - mp.loggamma(nuc + 1))
    w = -(zc * zc) / 4
    term = mp.mpc(1)
    s = mp.mpc(1)
    maxt = mp.mpf(1)
    stop = mp.mpf(10) ** (-(mp.mp.dps + 4))
    m = 0
    for m in range(1, 3000):
        term *= w / (m * (nuc + m))
        at = abs(term)
        if at > maxt:
            maxt = at
        s += term
        if m > 3 and at <= stop * abs(s):
            break
    mag = abs(s)
    canc = float(maxt / mag) if mag > 0 else float("inf")
    return pref * s, canc, m


def _j_pair_mp(nu: complex, z: complex, dps: int,
               need_clean: float = 14.5) -> tuple["mp.mpc", "mp.mpc", float, int]:
    """High-precision (J_nu, J_{nu-1}); widens dps until the realized
    cancellation leaves at least `need_clean` clean digits.  Returns mpc
    values at the final precision, the achieved relative error, and that dps."""
    for _ in range(6):
        with mp.workdps(dps):
            j, c1, m1 = _series_one_mp(nu, z)
            jm1, c2, m2 = _series_one_mp(nu - 1, z)
            canc = max(c1, c2, 1.0)
            lost = math.log10(canc) + math.log10(max(m1, m2, 2))
            clean = dps - lost
            if clean >= need_clean:
                return j, jm1, 10.0 ** (-(clean - 0.5)), dps
        dps = int(lost + need_clean + 10)
    raise AccuracyLossError(f"widened series failed to converge at order {nu}, arg {z}")


_MP_DATA_FIELDS = ("jp", "jpm1", "jm", "jmm1")


@dataclass
class _JData:
    """J_{+-nu} and J_{+-nu - 1} plus derivative combinations and quality."""

    jp: complex
    jpm1: complex
    jm: complex
    jmm1: complex
    err: float

    def derivs(self, nu: complex, z: complex) -> tuple[complex, complex]:
        """(J'_nu, J'_{-nu}) from C'_mu = C_{mu-1} - (mu/z) C_mu."""
        jpd = self.jpm1 - (nu / z) * self.jp
        jmd = self.jmm1 + (nu / z) * self.jm
        return jpd, jmd


def _wronskian_residual(data: _JData, nu: complex, z: complex) -> float:
    jpd, jmd = data.derivs(nu, z)
    w = data.jp * jmd - jpd * data.jm
    wex = -2.0 * cmath.sin(cmath.pi * nu) / (cmath.pi * z)
    scale = abs(data.jp * jmd) + abs(jpd * data.jm) + abs(wex)
    if scale == 0.0:
        return 0.0
    return abs(w - wex) / scale


def _reflection_data(nu: complex, z: complex) -> _JData:
    """Float J data for both signs of the order, with a realized error estimate
    (pair estimates plus the Wronskian residual of the four values)."""
    jp, jpm1, e1 = _j_pair_float(nu, z)
    jm, jmm1, e2 = _j_pair_float(-nu, z)
    data = _JData(jp, jpm1, jm, jmm1, max(e1, e2))
    data.err = max(data.err, _wronskian_residual(data, nu, z))
    return data


def _assemble_hankel(kind: int, nu: complex, z: complex,
                     data: _JData) -> tuple[complex, complex, float]:
    """Reflection combination in float; returns (H, H', relative error estimate)."""
    s = cmath.sin(cmath.pi * nu)
    ph = cmath.exp(-1j * cmath.pi * nu) if kind == 1 else cmath.exp(1j * cmath.pi * nu)
    den = 1j * s if kind == 1 else -1j * s
    jpd, jmd = data.derivs(nu, z)
    num = data.jm - ph * data.jp
    nump = jmd - ph * jpd
    if den == 0:
        raise ZeroDenominatorError("reflection at integer order")
    h = num / den
    hp = nump / den
    c1 = (abs(data.jm) + abs(ph * data.jp)) / abs(num) if num != 0 else float("inf")
    c2 = (abs(jmd) + abs(ph * jpd)) / abs(nump) if nump != 0 else float("inf")
    canc = max(c1, c2, 1.0)
    return h, hp, (data.err + 6.0 * _EPS) * canc


def _hankel_mp_kinds(kinds: tuple[int, ...], nu: complex, z: complex,
                     dps: int) -> dict[int, tuple[complex, complex, float]]:
    """Reflection combinations carried out entirely in widened precision.

    The combination J_{-nu} - e^{-+ i pi nu} J_nu can cancel by an a-priori
    unknown number of digits (exponentially small H against exponentially
    large J); the realized cancellation is measured and the J pairs rerun
    with enough extra digits until every requested kind carries >= 13 clean
    digits.  The J pairs are shared between the kinds.
    """
    for _ in range(6):
        jp, jpm1, e1, dps1 = _j_pair_mp(nu, z, dps)
        jm, jmm1, e2, dps2 = _j_pair_mp(-nu, z, dps)
        work = max(dps1, dps2) + 10
        out: dict[int, tuple[complex, complex, float]] = {}
        err_worst = 0.0
        with mp.workdps(work):
            nuc = mp.mpc(nu)
            zc = mp.mpc(z)
            s = mp.sin(mp.pi * nuc)
            jpd = jpm1 - (nuc / zc) * jp
            jmd = jmm1 + (nuc / zc) * jm
            for kind in kinds:
                ph = mp.exp(-1j * mp.pi * nuc) if kind == 1 else mp.exp(1j * mp.pi * nuc)
                den = 1j * s if kind == 1 else -1j * s
                num = jm - ph * jp
                nump = jmd - ph * jpd
                if num == 0 or nump == 0 or den == 0:
                    raise ZeroDenominatorError("degenerate reflection combination")
                c1 = float((abs(jm) + abs(ph * jp)) / abs(num))
                c2 = float((abs(jmd) + abs(ph * jpd)) / abs(nump))
                err = max(e1, e2) * max(c1, c2, 1.0)
                out[kind] = (complex(num / den), complex(nump / den), err)
                err_worst = max(err_worst, err)
        if err_worst <= 1e-13:
            return out
        # rerun with the digits the realized combination cancellation consumed
        dps = max(dps1, dps2) + int(math.log10(err_worst / 1e-13)) + 6
    raise AccuracyLossError(f"widened reflection failed at order {nu}, arg {z}")


def _hankel_mp(kind: int, nu: complex, z: complex,
               dps: int) -> tuple[complex, complex, float]:
    return _hankel_mp_kinds((kind,), nu, z, dps)[kind]


def _escalation_dps(err: float) -> int:
    return int(26 + max(0.0, math.log10(err / 1e-16)))


def _hankel_core(kind: int, nu: complex, z: complex) -> tuple[complex, complex]:
    """H and H' for an order outside the near-integer band."""
    data = _reflection_data(nu, z)
    if data.err <= _FLOAT_ERR_BUDGET:
        h, hp, err = _assemble_hankel(kind, nu, z, data)
        if err <= _FLOAT_ERR_BUDGET:
            return h, hp
    else:
        err = data.err
    h, hp, _ = _hankel_mp(kind, nu, z, _escalation_dps(err))
    return h, hp


def _int_distance(nu: complex) -> tuple[int, float]:
    n = round(nu.real)
    return n, abs(nu - n)


def _hankel_near_integer(kind: int, nu: complex, z: complex) -> tuple[complex, complex]:
    """Offset-averaged evaluation for orders within 1e-8 of an integer.

    H(nu +- d) averages to H(nu) + O(d^2); one Richardson step with d and 2d
    removes the d^2 term.  All four corner evaluations run in widened
    precision (their reflection denominators are ~sin(pi d))."""
    dps = 26 + 6
    corners = {}
    for d in (_OFFSET, -_OFFSET, 2 * _OFFSET, -2 * _OFFSET):
        corners[d] = _hankel_mp(kind, nu + d, z, dps)
    a1 = [(corners[_OFFSET][i] + corners[-_OFFSET][i]) / 2 for i in (0, 1)]
    a2 = [(corners[2 * _OFFSET][i] + corners[-2 * _OFFSET][i]) / 2 for i in (0, 1)]
    h = (4 * a1[0] - a2[0]) / 3
    hp = (4 * a1[1] - a2[1]) / 3
    est = abs(a1[0] - a2[0]) / (3 * abs(h)) if h != 0 else float("nan")
    warnings.warn(
        f"order {nu} within {_AT_INT_BAND} of an integer: offset-averaged "
        f"reflection used, estimated relative error {est:.1e}",
        NearIntegerOrderWarning,
        stacklevel=3,
    )
    return h, hp


def bessel_j(order: complex, arg: complex) -> complex:
    """Bessel function J_order(arg) of the first kind."""
    order = complex(order)
    arg = complex(arg)
    _check_domain(order, arg, allow_zero_arg=True)
    if arg == 0:
        if order == 0:
            return 1.0 + 0j
        if order.real > 0:
            return 0.0 + 0j
        raise DomainError("J_order(0) diverges for Re order <= 0, order != 0")
    j, jm1, err = _j_pair_float(order, arg)
    if _miller_hidden_risk(order, arg):
        _, dist = _int_distance(order)
        if dist > _NEAR_INT_BAND:
            data = _reflection_data(order, arg)  # realized Wronskian check
            j, err = data.jp, data.err
        else:
            err = 1.0  # reflection check degenerates at integer orders
    if err > _FLOAT_ERR_BUDGET:
        dps = int(26 + max(0.0, math.log10(max(err / 1e-16, 1.0))))
        jmp_, _, _, _ = _j_pair_mp(order, arg, dps)
        return complex(jmp_)
    return j


def hankel(kind: int, order: complex, arg: complex) -> CylinderValue:
    """Hankel function H^(kind)_order(arg) with its argument derivative."""
    if kind not in (1, 2):
        raise DomainError(f"kind must be 1 or 2, got {kind!r}")
    order = complex(order)
    arg = complex(arg)
    _check_domain(order, arg)
    _, dist = _int_distance(order)
    if dist <= _AT_INT_BAND:
        h, hp = _hankel_near_integer(kind, order, arg)
    elif dist <= _NEAR_INT_BAND:
        dps = int(26 + max(0.0, -math.log10(dist)))
        h, hp, _ = _hankel_mp(kind, order, arg, dps)
    else:
        h, hp = _hankel_core(kind, order, arg)
    return CylinderValue(h, hp)


def hankel_pair(order: complex, arg: complex) -> tuple[CylinderValue, CylinderValue]:
    """(H^(1), H^(2)) at a shared order and argument.

    Shares the underlying J evaluations between the two kinds; this is the
    hot path of the S-matrix assembly.
    """
    order = complex(order)
    arg = complex(arg)
    _check_domain(order, arg)
    _, dist = _int_distance(order)
    if dist <= _AT_INT_BAND:
        h1 = _hankel_near_integer(1, order, arg)
        h2 = _hankel_near_integer(2, order, arg)
        return CylinderValue(*h1), CylinderValue(*h2)
    if dist <= _NEAR_INT_BAND:
        dps = int(26 + max(0.0, -math.log10(dist)))
        both = _hankel_mp_kinds((1, 2), order, arg, dps)
        return (CylinderValue(both[1][0], both[1][1]),
                CylinderValue(both[2][0], both[2][1]))
    data = _reflection_data(order, arg)
    if data.err <= _FLOAT_ERR_BUDGET:
        vals = {}
        err_worst = 0.0
        for kind in (1, 2):
            h, hp, err = _assemble_hankel(kind, order, arg, data)
            vals[kind] = CylinderValue(h, hp)
            err_worst = max(err_worst, err)
        if err_worst <= _FLOAT_ERR_BUDGET:
            return vals[1], vals[2]
    else:
        err_worst = data.err
    both = _hankel_mp_kinds((1, 2), order, arg, _escalation_dps(err_worst))
    return (CylinderValue(both[1][0], both[1][1]),
            CylinderValue(both[2][0], both[2][1]))


def bessel_and_h1(order: complex, arg: complex) -> tuple[CylinderValue, CylinderValue]:
    """(J, H^(1)) with argument derivatives at a shared order and argument.

    Sharing matters for interior-wave combinations of the form
    J(z1) H1(z2) - J(z2) H1(z1): building J from (H1+H2)/2 would cancel
    catastrophically where J is exponentially subdominant, so J comes straight
    from its own series/recurrence here.
    """
    order = complex(order)
    arg = complex(arg)
    _check_domain(order, arg)
    _, dist = _int_distance(order)
    if dist <= _NEAR_INT_BAND:
        # J is untroubled by integer orders; only H needs the special paths
        j, jm1, ej = _j_pair_float(order, arg)
        if _miller_hidden_risk(order, arg):
            ej = max(ej, 1.0)
        if ej > _FLOAT_ERR_BUDGET:
            jmp_, jm1mp, _, _ = _j_pair_mp(order, arg, _escalation_dps(ej))
            j, jm1 = complex(jmp_), complex(jm1mp)
        jd = jm1 - (order / arg) * j
        if dist <= _AT_INT_BAND:
            h, hp = _hankel_near_integer(1, order, arg)
        else:
            h, hp, _ = _hankel_mp(1, order, arg, int(26 + max(0.0, -math.log10(dist))))
        return CylinderValue(j, jd), CylinderValue(h, hp)
    data = _reflection_data(order, arg)
    if data.err <= _FLOAT_ERR_BUDGET:
        h, hp, err = _assemble_hankel(1, order, arg, data)
        if err <= _FLOAT_ERR_BUDGET:
            jd, _ = data.derivs(order, arg)
            return CylinderValue(data.jp, jd), CylinderValue(h, hp)
        err_worst = err
    else:
        err_worst = data.err
    dps = _escalation_dps(err_worst)
    jmp_, jm1mp, _, _ = _j_pair_mp(order, arg, dps)
    j, jm1 = complex(jmp_), complex(jm1mp)
    jd = jm1 - (order / arg) * j
    h, hp, _ = _hankel_mp(1, order, arg, dps)
    return CylinderValue(j, jd), CylinderValue(h, hp)


def log_deriv_hankel(kind: int, order: complex, wavenumber: complex, r: float) -> complex:
    """Radial logarithmic derivative  d/dr ln H^(kind)_order(wavenumber * r).

    Equals wavenumber * H'(z)/H(z) at z = wavenumber*r; the 1/(2r) term of the
    full sqrt(r)-weighted solution is deliberately not included (it cancels in
    every matching difference this package forms).
    """
    hv = hankel(kind, order, complex(wavenumber) * r)
    if abs(hv.value) < 1e-280 * (abs(hv.value) + abs(hv.deriv_arg)):
        raise ZeroDenominatorError("|H| below 1e-280 of its derivative scale")
    return complex(wavenumber) * hv.deriv_arg / hv.value
