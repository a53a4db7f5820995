"""Fixed-step integration of Hill's equation with winding bookkeeping.

The fundamental matrix solves Phi' = [[0, 1], [q, 0]] Phi, Phi(0) = I, whose
rows are (v1, v2) and (v1', v2'). Two angle quantities ride along as extra
ODE components rather than being unwrapped afterwards:

    theta' = 1 / (v1^2 + v2^2)                 first-row winding, increasing
    omega' = (q v2^2 - v2'^2) / (v2^2 + v2'^2) second-column winding

theta(2 pi) is the right Iwasawa angle of the monodromy; omega(2 pi) is the
winding that lifts Phi(2 pi) to the universal cover.

The integrator is the classical 4-stage Runge-Kutta scheme with a fixed
step. Because the matrix part is linear, every step is a transfer matrix
assembled from q at the nodes and midpoints; the sequence of fundamental
matrices is their running product, evaluated here with a doubling scan so
the whole path is produced by vectorized array passes. The stage states of
each step are recovered from the same transfer algebra, which makes the
theta and omega updates exactly the classical Runge-Kutta updates of the
augmented system.
"""

import math
from typing import NamedTuple

import numpy as np

from .cover import CoverElement, to_right_iwasawa, winding_exceeds
from .errors import DomainError, NumericalInvariantError

TAU = math.tau

DEFAULT_STEPS = 16384
MIN_STEPS = 16

# Consistency bound between the integrated first-row winding and the right
# Iwasawa angle recovered from the monodromy element.
THETA_CONSISTENCY_TOL = 1e-6

_EYE = np.eye(2)


class FundamentalPath:
    """Sampled fundamental matrix path with winding components.

    Attributes
    ----------
    t : (n+1,) node times over [0, 2 pi]
    mats : (n+1, 2, 2) fundamental matrices at the nodes
    theta : (n+1,) first-row winding, theta[0] = 0
    omega : (n+1,) second-column winding, omega[0] = 0
    """

    __slots__ = ("t", "mats", "theta", "omega")

    def __init__(self, t, mats, theta, omega):
        for arr in (t, mats, theta, omega):
            arr.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "mats", mats)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "omega", omega)

    def __setattr__(self, name, value):
        raise AttributeError("FundamentalPath is immutable")


class MonodromyResult(NamedTuple):
    element: CoverElement
    theta_r: float


def _sample_q(q, steps):
    tt = np.linspace(0.0, TAU, 2 * steps + 1)
    qq = np.asarray(q(tt), dtype=float)
    if qq.shape != tt.shape or not np.all(np.isfinite(qq)):
        raise DomainError("potential evaluation must give finite values")
    return qq


def _step_matrices(qa, qb, qd, h):
    """Transfer and stage matrices of one Runge-Kutta step, vectorized.

    Returns (T, S2f, S3f, S4f) of shape (n, 2, 2): the step transfer matrix
    and the factors mapping Phi_i to the stage-2/3/4 states.
    """
    n = qa.size
    zeros = np.zeros(n)
    ones = np.ones(n)

    def amat(q):
        return np.stack([np.stack([zeros, ones], -1),
                         np.stack([q, zeros], -1)], -2)

    K1 = amat(qa)
    Am = amat(qb)
    Ad = amat(qd)
    S2f = _EYE + 0.5 * h * K1
    K2 = Am @ S2f
    S3f = _EYE + 0.5 * h * K2
    K3 = Am @ S3f
    S4f = _EYE + h * K3
    K4 = Ad @ S4f
    T = _EYE + (h / 6.0) * (K1 + 2.0 * K2 + 2.0 * K3 + K4)
    return T, S2f, S3f, S4f


def _prefix_products(T):
    """Inclusive running products P[i] = T[i] @ ... @ T[0] by doubling."""
    P = T.copy()
    n = P.shape[0]
    d = 1
    while d < n:
        prev = P.copy()
        P[d:] = prev[d:] @ prev[:-d]
        d *= 2
    return P

def _stage_states(mats, S2f, S3f, S4f):
    phi = mats[:-1]
    return phi, S2f @ phi, S3f @ phi, S4f @ phi


def _row_winding_rates(states):
    rates = []
    for S in states:
        v1 = S[:, 0, 0]
        v2 = S[:, 0, 1]
        rates.append(1.0 / (v1 * v1 + v2 * v2))
    return rates


def _col_winding_rates(states, qa, qb, qd):
    qs = (qa, qb, qb, qd)
    rates = []
    for S, q in zip(states, qs):
        v2 = S[:, 0, 1]
        v2p = S[:, 1, 1]
        rates.append((q * v2 * v2 - v2p * v2p) / (v2 * v2 + v2p * v2p))
    return rates


def _rk4_sum(rates, h):
    k1, k2, k3, k4 = rates
    return (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(q, steps=DEFAULT_STEPS):
    """Fundamental path of -v'' + q v = 0 over [0, 2 pi].

    Parameters
    ----------
    q : callable
        Potential, evaluated vectorized on node and midpoint times.
    steps : int
        Number of fixed Runge-Kutta steps, at least 16.
    """
    steps = int(steps)
    if steps < MIN_STEPS:
        raise DomainError(f"steps must be >= {MIN_STEPS}")
    h = TAU / steps
    qq = _sample_q(q, steps)
    qa, qb, qd = qq[0:-1:2], qq[1::2], qq[2::2]
    T, S2f, S3f, S4f = _step_matrices(qa, qb, qd, h)
    mats = np.empty((steps + 1, 2, 2))
    mats[0] = _EYE
    mats[1:] = _prefix_products(T)
    states = _stage_states(mats, S2f, S3f, S4f)

    dtheta = _rk4_sum(_row_winding_rates(states), h)
    if not np.all(dtheta > 0.0):
        raise NumericalInvariantError("first-row winding is not increasing")
    theta = np.concatenate(([0.0], np.cumsum(dtheta)))
    domega = _rk4_sum(_col_winding_rates(states, qa, qb, qd), h)
    omega = np.concatenate(([0.0], np.cumsum(domega)))

    dets = mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]
    # Allowance grows with entry size: ad - bc itself rounds at |mat|^2 eps.
    allowed = np.maximum(1e-6, 16.0 * np.finfo(float).eps
                         * np.abs(mats).max(axis=(1, 2)) ** 2)
    worst = int(np.argmax(np.abs(dets - 1.0) - allowed))
    if abs(dets[worst] - 1.0) > allowed[worst]:
        raise NumericalInvariantError(
            f"Wronskian drift {abs(dets[worst] - 1.0):.3e}; increase steps")
    t = np.linspace(0.0, TAU, steps + 1)
    return FundamentalPath(t, mats, theta, omega)


def monodromy(q, steps=DEFAULT_STEPS):
    """Lifted monodromy of the potential together with its right angle.

    Returns a MonodromyResult (element, theta_r). The integrated first-row
    winding must agree with the right Iwasawa angle recovered from the
    element, and the element must land in the monodromy image (negative
    winding, positive right angle); both are verified.
    """
    path = integrate(q, steps)
    element = CoverElement(path.mats[-1], path.omega[-1])
    theta_r = float(path.theta[-1])
    recovered = to_right_iwasawa(element).theta
    if abs(recovered - theta_r) > THETA_CONSISTENCY_TOL:
        raise NumericalInvariantError(
            f"winding inconsistency {abs(recovered - theta_r):.3e} between "
            "integrated and recovered right angles; increase steps")
    if not (winding_exceeds(element, 0.0) and theta_r > 0.0):
        raise NumericalInvariantError("monodromy left the expected image set")
    return MonodromyResult(element, theta_r)


def solution_winding(q, phi0, steps=DEFAULT_STEPS):
    """Winding of (u, u') for the solution with (u, u')(0) on angle phi0.

    The initial condition is u(0) = cos(phi0), u'(0) = sin(phi0) and the
    returned value is the total variation of the counterclockwise argument
    of (u(t), u'(t)) over [0, 2 pi], integrated as an ODE component.
    """
    steps = int(steps)
    if steps < MIN_STEPS:
        raise DomainError(f"steps must be >= {MIN_STEPS}")
    h = TAU / steps
    qq = _sample_q(q, steps)
    qa, qb, qd = qq[0:-1:2], qq[1::2], qq[2::2]
    T, S2f, S3f, S4f = _step_matrices(qa, qb, qd, h)
    mats = np.empty((steps + 1, 2, 2))
    mats[0] = _EYE
    mats[1:] = _prefix_products(T)
    states = _stage_states(mats, S2f, S3f, S4f)
    u0 = np.array([math.cos(phi0), math.sin(phi0)])
    qs = (qa, qb, qb, qd)
    rates = []
    for S, qv in zip(states, qs):
        w = S @ u0
        u = w[:, 0]
        up = w[:, 1]
        rates.append((qv * u * u - up * up) / (u * u + up * up))
    return float(np.sum(_rk4_sum(rates, h)))
