"""Kepler-style correspondence between potentials, curves, and orbits.

A fundamental curve is the pair of rows (v, v') of the fundamental matrix of
-v'' + q v = 0: a plane curve of unit Wronskian starting at v(0) = (1, 0),
v'(0) = (0, 1). Writing v in polar form sqrt(rho) (cos theta, sin theta),
the Wronskian forces theta' = 1/|v|^2, i.e. the curve sweeps area at unit
rate, so re-parametrizing by the angle theta turns the curve into an orbit:
a positive radius-squared profile rho(theta) on [0, theta_max] with

    rho(0) = 1,   rho'(0) = 0,   integral of rho over [0, theta_max] = 2 pi.

The transforms here move between the three value types:

    potential -> curve      integrate the equation
    curve -> orbit          angle unwrapping and resampling of |v|^2
    orbit -> curve          invert the swept-time map t(theta)
    curve/orbit -> potential   q = v'' wedge v', or the curvature formula
                               q = (2 rho'' rho - 3 rho'^2 - 4 rho^2)/(4 rho^4)

Sampled orbits are interpolated shape-preservingly for values; derivative
data is taken from supplied samples or analytic callables when present and
otherwise estimated by differences or spline differentiation.
"""

import math

import numpy as np
from scipy.integrate import cumulative_simpson, simpson
from scipy.interpolate import CubicSpline, PchipInterpolator

from .errors import DomainError, NumericalInvariantError
from .integrate import DEFAULT_STEPS, integrate
from .potentials import Potential
from .serialize import fmt_float

TAU = math.tau

RHO_START_TOL = 1e-8
RHO_SLOPE_TOL = 1e-6
SWEEP_TOL = 1e-7
WRONSKIAN_TOL = 1e-7
ENDPOINT_TOL = 1e-10

CURVE_COLUMNS = ("t", "v1", "v2", "v1p", "v2p")


class FundamentalCurve:
    """Sampled curve (t, v, v') with unit Wronskian.

    v and vp have shape (n, 2). Validation enforces the initial conditions
    and the Wronskian at every node.
    """

    __slots__ = ("t", "v", "vp")

    def __init__(self, t, v, vp):
        t = np.array(t, dtype=float)
        v = np.array(v, dtype=float)
        vp = np.array(vp, dtype=float)
        if t.ndim != 1 or v.shape != (t.size, 2) or vp.shape != (t.size, 2):
            raise DomainError("curve arrays must be t:(n,), v:(n,2), vp:(n,2)")
        if t.size < 9 or not np.all(np.diff(t) > 0):
            raise DomainError("curve needs at least 9 strictly increasing times")
        if not (np.all(np.isfinite(v)) and np.all(np.isfinite(vp))):
            raise DomainError("curve values must be finite")
        if max(abs(v[0, 0] - 1.0), abs(v[0, 1]), abs(vp[0, 0]),
               abs(vp[0, 1] - 1.0)) > ENDPOINT_TOL:
            raise DomainError("curve must start at v=(1,0), v'=(0,1)")
        wr = v[:, 0] * vp[:, 1] - v[:, 1] * vp[:, 0]
        worst = np.abs(wr - 1.0).max()
        if worst > WRONSKIAN_TOL:
            raise DomainError(
                f"curve Wronskian deviates by {worst:.3e} (tolerance {WRONSKIAN_TOL})")
        if np.any(v[:, 0] ** 2 + v[:, 1] ** 2 == 0.0):
            raise DomainError("curve passes through the origin")
        for arr in (t, v, vp):
            arr.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "vp", vp)

    def __setattr__(self, name, value):
        raise AttributeError("FundamentalCurve is immutable")

    def __repr__(self):
        return f"FundamentalCurve(<{self.t.size} nodes over [0, {self.t[-1]:.6g}]>)"


class Orbit:
    """Radius-squared profile rho on a uniform grid over [0, theta_max].

    Optional derivative samples rho_prime, rho_second and analytic
    callables (value_fn, slope_fn, curvature_fn, third_fn) refine later
    transforms; the callables are not serialized.
    """

    __slots__ = ("theta_max", "rho", "rho_prime", "rho_second",
                 "value_fn", "slope_fn", "curvature_fn", "third_fn")

    def __init__(self, theta_max, rho, rho_prime=None, rho_second=None,
                 value_fn=None, slope_fn=None, curvature_fn=None, third_fn=None):
        theta_max = float(theta_max)
        rho = np.array(rho, dtype=float)
        if not (math.isfinite(theta_max) and theta_max > 0):
            raise DomainError("theta_max must be positive")
        if rho.ndim != 1 or rho.size < 9:
            raise DomainError("orbit needs at least 9 rho samples")
        if not np.all(np.isfinite(rho)) or np.any(rho <= 0):
            raise DomainError("rho must be finite and positive")
        extras = []
        for name, arr in (("rho_prime", rho_prime), ("rho_second", rho_second)):
            if arr is not None:
                arr = np.array(arr, dtype=float)
                if arr.shape != rho.shape or not np.all(np.isfinite(arr)):
                    raise DomainError(f"{name} must match rho and be finite")
            extras.append(arr)
        rho_prime, rho_second = extras
        if abs(rho[0] - 1.0) > RHO_START_TOL:
            raise DomainError(
                f"rho(0) = {rho[0]!r} but must be 1 within {RHO_START_TOL}")
        grid = np.linspace(0.0, theta_max, rho.size)
        if slope_fn is not None:
            slope0 = float(slope_fn(0.0))
        elif rho_prime is not None:
            slope0 = float(rho_prime[0])
        else:
            slope0 = _edge_slopes(rho, grid[1] - grid[0])[0]
        if abs(slope0) > RHO_SLOPE_TOL:
            raise DomainError(
                f"rho'(0) = {slope0!r} but must vanish within {RHO_SLOPE_TOL}")
        swept = simpson(rho, x=grid)
        if abs(swept - TAU) > SWEEP_TOL:
            raise DomainError(
                f"orbit sweeps {swept!r} instead of 2 pi within {SWEEP_TOL}")
        rho.setflags(write=False)
        for arr in (rho_prime, rho_second):
            if arr is not None:
                arr.setflags(write=False)
        object.__setattr__(self, "theta_max", theta_max)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "rho_prime", rho_prime)
        object.__setattr__(self, "rho_second", rho_second)
        object.__setattr__(self, "value_fn", value_fn)
        object.__setattr__(self, "slope_fn", slope_fn)
        object.__setattr__(self, "curvature_fn", curvature_fn)
        object.__setattr__(self, "third_fn", third_fn)

    def __setattr__(self, name, value):
        raise AttributeError("Orbit is immutable")

    @property
    def theta_grid(self):
        return np.linspace(0.0, self.theta_max, self.rho.size)

    def __repr__(self):
        return (f"Orbit(theta_max={self.theta_max:.6g}, "
                f"<{self.rho.size} rho samples>)")


# ---------------------------------------------------------------------------
# Derivative models for sampled and analytic orbits
# ---------------------------------------------------------------------------

def _value_model(orbit):
    if orbit.value_fn is not None:
        return orbit.value_fn
    return PchipInterpolator(orbit.theta_grid, orbit.rho)


def _edge_slopes(values, h):
    """Fourth-order one-sided slope estimates at both ends of a uniform grid."""
    f = values
    left = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h)
    right = (25 * f[-1] - 48 * f[-2] + 36 * f[-3] - 16 * f[-4] + 3 * f[-5]) / (12 * h)
    return left, right


def _slope_model(orbit, for_curvature=False):
    """rho' as a callable: analytic, supplied samples, or estimated.

    Estimation uses centered differences for curve reconstruction and the
    cubic spline derivative when curvature is also required, so rho'' stays
    continuous in the latter case.
    """
    if orbit.slope_fn is not None:
        return orbit.slope_fn
    grid = orbit.theta_grid
    if orbit.rho_prime is not None:
        return PchipInterpolator(grid, orbit.rho_prime)
    if for_curvature:
        return CubicSpline(grid, orbit.rho).derivative()
    slopes = np.gradient(orbit.rho, grid, edge_order=2)
    # np.gradient's three-point end rule leaves an O(h) artifact on
    # interpolated data; the four-point-order ends match the validation rule.
    slopes[0], slopes[-1] = _edge_slopes(orbit.rho, grid[1] - grid[0])
    return PchipInterpolator(grid, slopes)


def _curvature_model(orbit):
    if orbit.curvature_fn is not None:
        return orbit.curvature_fn
    grid = orbit.theta_grid
    if orbit.rho_second is not None:
        return PchipInterpolator(grid, orbit.rho_second)
    if orbit.rho_prime is not None:
        return CubicSpline(grid, orbit.rho_prime).derivative()
    return CubicSpline(grid, orbit.rho).derivative(2)


# ---------------------------------------------------------------------------
# Swept-time parametrization
# ---------------------------------------------------------------------------

def _time_table(orbit):
    table = cumulative_simpson(orbit.rho, x=orbit.theta_grid, initial=0.0)
    if abs(table[-1] - TAU) > 10 * SWEEP_TOL:
        raise NumericalInvariantError(
            f"swept time ends at {table[-1]!r}, expected 2 pi")
    return table


def _invert_times(orbit, value_fn, t_targets):
    """theta(t) for the swept-time map t(theta), by table lookup and Newton.

    The cumulative table gives the bracket; each target is refined with
    Newton steps whose residual uses a local Simpson correction from the
    bracketing node.
    """
    grid = orbit.theta_grid
    table = _time_table(orbit)
    t = np.asarray(t_targets, dtype=float)
    j = np.clip(np.searchsorted(table, t, side="right") - 1, 0, grid.size - 2)
    thj = grid[j]
    tj = table[j]
    rj = value_fn(thj)
    th = np.clip(thj + (t - tj) / rj, 0.0, orbit.theta_max)
    resid = None
    for _ in range(6):
        delta = th - thj
        mid = thj + 0.5 * delta
        resid = tj + (delta / 6.0) * (rj + 4.0 * value_fn(mid) + value_fn(th)) - t
        th = np.clip(th - resid / value_fn(th), 0.0, orbit.theta_max)
        if np.abs(resid).max() < 1e-13 * TAU:
            break
    if np.abs(resid).max() > 1e-9:
        raise NumericalInvariantError("swept-time inversion did not converge")
    return th


# ---------------------------------------------------------------------------
# Transforms
# ---------------------------------------------------------------------------

def curve_of(q, steps=DEFAULT_STEPS):
    """Fundamental curve of a potential over one period."""
    path = integrate(q, steps)
    return FundamentalCurve(path.t, path.mats[:, 0, :], path.mats[:, 1, :])


def orbit_of(curve, nodes=None):
    """Orbit swept by a fundamental curve.

    The angle is the unwrapped argument of v at the curve nodes (the exact
    discrete form of theta' = 1/|v|^2) and |v|^2 is resampled onto the
    uniform angle grid by shape-preserving cubic interpolation. The slope
    d rho/d theta = rho * 2 (v . v') is exact at the nodes, so its resampled
    values ride along; later transforms then never have to differentiate the
    interpolated profile.
    """
    theta_t = np.unwrap(np.arctan2(curve.v[:, 1], curve.v[:, 0]))
    theta_t -= theta_t[0]
    if not np.all(np.diff(theta_t) > 0):
        raise NumericalInvariantError("curve angle is not strictly increasing")
    rho_t = curve.v[:, 0] ** 2 + curve.v[:, 1] ** 2
    slope_t = rho_t * 2.0 * (curve.v[:, 0] * curve.vp[:, 0]
                             + curve.v[:, 1] * curve.vp[:, 1])
    n = curve.t.size if nodes is None else int(nodes)
    grid = np.linspace(0.0, theta_t[-1], n)
    rho = PchipInterpolator(theta_t, rho_t)(grid)
    rho_prime = PchipInterpolator(theta_t, slope_t)(grid)
    return Orbit(theta_t[-1], rho, rho_prime=rho_prime)


def curve_of_orbit(orbit, steps=DEFAULT_STEPS):
    """Curve reconstructed from an orbit on the uniform time grid.

    Uses v = sqrt(rho) (cos theta, sin theta) and
    v' = [(rho'/(2 sqrt(rho))) (cos, sin) + sqrt(rho) (-sin, cos)] / rho
    along theta(t).
    """
    value_fn = _value_model(orbit)
    slope_fn = _slope_model(orbit)
    t = np.linspace(0.0, TAU, int(steps) + 1)
    th = _invert_times(orbit, value_fn, t)
    rho = value_fn(th)
    drho = slope_fn(th)
    c, s = np.cos(th), np.sin(th)
    sq = np.sqrt(rho)
    v = np.stack([sq * c, sq * s], axis=-1)
    vp = np.stack([(0.5 * drho / sq * c - sq * s) / rho,
                   (0.5 * drho / sq * s + sq * c) / rho], axis=-1)
    return FundamentalCurve(t, v, vp)


def potential_of_curve(curve):
    """Potential recovered from a curve as q = v'' wedge v'.

    v'' comes from centered differences of v' (second-order one-sided at the
    ends); the curve times must be the uniform inclusive grid over [0, 2 pi].
    """
    t = curve.t
    expected = np.linspace(0.0, TAU, t.size)
    if np.abs(t - expected).max() > 1e-9:
        raise DomainError("potential recovery needs the uniform grid over [0, 2 pi]")
    vpp = np.gradient(curve.vp, t, axis=0, edge_order=2)
    q = vpp[:, 0] * curve.vp[:, 1] - vpp[:, 1] * curve.vp[:, 0]
    return Potential.sampled(q, "cubic")


def potential_of_orbit(orbit, steps=DEFAULT_STEPS):
    """Potential along the time grid from the orbit curvature formula."""
    value_fn = _value_model(orbit)
    slope_fn = _slope_model(orbit, for_curvature=True)
    curv_fn = _curvature_model(orbit)
    t = np.linspace(0.0, TAU, int(steps) + 1)
    th = _invert_times(orbit, value_fn, t)
    rho = value_fn(th)
    drho = slope_fn(th)
    d2rho = curv_fn(th)
    q = (2.0 * d2rho * rho - 3.0 * drho ** 2 - 4.0 * rho ** 2) / (4.0 * rho ** 4)
    return Potential.sampled(q, "cubic")


def potential_slope_of_orbit(orbit, steps=DEFAULT_STEPS):
    """Diagnostic: dq/dt along the time grid, needs a third derivative.

    Returns the sampled values of
    (rho''' rho^2 - 7 rho'' rho' rho + 6 rho'^3 + 4 rho' rho^2) / (2 rho^6)
    composed with theta(t). Only available when the orbit carries analytic
    derivative callables through third order.
    """
    if orbit.third_fn is None or orbit.slope_fn is None \
            or orbit.curvature_fn is None:
        raise DomainError("potential slope needs analytic derivatives")
    value_fn = _value_model(orbit)
    t = np.linspace(0.0, TAU, int(steps) + 1)
    th = _invert_times(orbit, value_fn, t)
    rho = value_fn(th)
    d1 = orbit.slope_fn(th)
    d2 = orbit.curvature_fn(th)
    d3 = orbit.third_fn(th)
    return (d3 * rho ** 2 - 7.0 * d2 * d1 * rho + 6.0 * d1 ** 3
            + 4.0 * d1 * rho ** 2) / (2.0 * rho ** 6)


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------

def save_curve_csv(curve, path):
    with open(path, "w") as fh:
        fh.write(",".join(CURVE_COLUMNS) + "\n")
        for i in range(curve.t.size):
            row = (curve.t[i], curve.v[i, 0], curve.v[i, 1],
                   curve.vp[i, 0], curve.vp[i, 1])
            fh.write(",".join(fmt_float(x) for x in row) + "\n")


def load_curve_csv(path):
    try:
        with open(path) as fh:
            header = fh.readline().strip().split(",")
            rows = [line.split(",") for line in fh if line.strip()]
    except OSError as exc:
        raise DomainError(f"cannot read curve file: {exc}") from None
    if [h.strip() for h in header] != list(CURVE_COLUMNS):
        raise DomainError(f"curve CSV must have columns {','.join(CURVE_COLUMNS)}")
    try:
        data = np.array([[float(x) for x in row] for row in rows])
    except ValueError as exc:
        raise DomainError(f"malformed curve CSV: {exc}") from None
    if data.ndim != 2 or data.shape[1] != 5:
        raise DomainError("curve CSV rows must have 5 columns")
    return FundamentalCurve(data[:, 0], data[:, 1:3], data[:, 3:5])


def orbit_to_dict(orbit):
    out = {"theta_max": orbit.theta_max, "rho": list(orbit.rho)}
    if orbit.rho_prime is not None:
        out["rho_prime"] = list(orbit.rho_prime)
    if orbit.rho_second is not None:
        out["rho_second"] = list(orbit.rho_second)
    return out


def orbit_from_dict(data):
    if not isinstance(data, dict):
        raise DomainError("orbit JSON must be an object")
    try:
        return Orbit(float(data["theta_max"]), data["rho"],
                     rho_prime=data.get("rho_prime"),
                     rho_second=data.get("rho_second"))
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed orbit JSON: {exc}") from None
