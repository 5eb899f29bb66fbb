"""Discrete variable-exponent Dirichlet energy on a 1D grid.

The energy of interior node values u (zero at both endpoints) against a
boundary datum phi is

    F(u) = sum_i h * |((u - phi)_{i+1} - (u - phi)_i) / h| ** p_i

with the exponent sampled at cell midpoints and restricted to p >= 2 so the
integrand is continuously differentiable at zero slope.  Minimization is
plain gradient descent with an Armijo backtracking line search; the energy
is convex, so the stationary point found is the global minimizer.  The
solve trace doubles as a desk-scale minimizing sequence: its gradient
modular distances to the final iterate are recorded alongside the energies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ExponentBelowTwoError, UnboundedExponentError
from .exponents import ExponentSpec, FunctionExponent

ARMIJO_C = 1e-4


@dataclass(frozen=True)
class EnergyProblem:
    n: int                 # number of cells; h * n = 1
    h: float
    nodes: np.ndarray      # n + 1 uniform nodes on [0, 1]
    exponents: np.ndarray  # p at cell midpoints, each >= 2
    phi: np.ndarray        # boundary datum sampled at nodes

    def full_field(self, u: np.ndarray) -> np.ndarray:
        w = np.zeros(self.n + 1)
        w[1:-1] = u
        return w


@dataclass
class SolveTrace:
    iterates: list          # (iteration, energy, grad_inf_norm, step)
    final: np.ndarray       # node values including the zero boundary
    modular_trace: list     # rho-distance of iterate gradients to the final one
    converged: bool
    message: str = ""

    def to_json(self):
        return {"iterations": len(self.iterates) - 1,
                "final_energy": self.iterates[-1][1],
                "final_grad_inf": self.iterates[-1][2],
                "converged": self.converged,
                "message": self.message}


def assemble_energy(n: int, p, phi) -> EnergyProblem:
    """Build the discrete problem: midpoint-sampled exponents, node-sampled
    boundary datum.

    ``p`` may be a number, a callable on (0, 1), or a function-exponent
    spec (bounded kinds only).  ``phi`` may be a callable or node values.
    """
    if n < 2:
        raise ValueError("need at least 2 cells")
    h = 1.0 / n
    nodes = np.linspace(0.0, 1.0, n + 1)
    mids = (nodes[:-1] + nodes[1:]) / 2.0
    if isinstance(p, ExponentSpec):
        if not isinstance(p, FunctionExponent):
            raise UnboundedExponentError("the energy needs a function exponent on (0,1)")
        if p.unbounded:
            raise UnboundedExponentError(
                "unbounded exponents are excluded from the solver; "
                "their modular/norm gap is demonstrated by the diagnostics instead")
        pv = np.array([p(x) for x in mids])
    elif callable(p):
        pv = np.array([float(p(x)) for x in mids])
    else:
        pv = np.full(n, float(p))
    if pv.min() < 2.0:
        raise ExponentBelowTwoError(f"exponent dips to {pv.min()} < 2")
    if callable(phi):
        ph = np.array([float(phi(x)) for x in nodes])
    else:
        ph = np.asarray(phi, dtype=float)
        if ph.shape != nodes.shape:
            raise ValueError(f"phi must give {n + 1} node values")
    return EnergyProblem(n, h, nodes, pv, ph)


def _slopes(prob: EnergyProblem, u: np.ndarray) -> np.ndarray:
    w = prob.full_field(u) - prob.phi
    return np.diff(w) / prob.h


def energy_value(prob: EnergyProblem, u: np.ndarray) -> float:
    """F(u), with each term computed in the log domain."""
    g = np.abs(_slopes(prob, u))
    out = np.zeros_like(g)
    mask = g > 0
    out[mask] = np.exp(prob.exponents[mask] * np.log(g[mask]))
    return float(prob.h * out.sum())


def energy_gradient(prob: EnergyProblem, u: np.ndarray) -> np.ndarray:
    """Exact gradient: node i collects p|g|^{p-2} g from its two cells."""
    g = _slopes(prob, u)
    p = prob.exponents
    flux = p * np.abs(g) ** (p - 2.0) * g  # p >= 2 keeps this finite at g = 0
    return flux[:-1] - flux[1:]


def gradient_modular_distance(prob: EnergyProblem, u: np.ndarray,
                              ref: np.ndarray) -> float:
    """sum_i h |g_i(u) - g_i(ref)|^{p_i}: the cellwise modular of the
    gradient gap, the §-free stand-in for modular convergence of iterates."""
    d = np.abs(_slopes(prob, u) - _slopes(prob, ref))
    out = np.zeros_like(d)
    mask = d > 0
    out[mask] = np.exp(prob.exponents[mask] * np.log(d[mask]))
    return float(prob.h * out.sum())


def minimize_energy(prob: EnergyProblem, tol: float = 1e-8,
                    max_iter: int = 500_000, u0=None) -> SolveTrace:
    """Gradient descent with Armijo backtracking (halving).

    The trial step is the spectral (secant) scale from the previous accepted
    step, then halved until the sufficient-decrease test passes, so every
    accepted step strictly lowers the energy.  Stops when the gradient
    sup-norm reaches ``tol``; hitting ``max_iter`` returns the best iterate
    flagged as unconverged.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    u = np.zeros(prob.n - 1) if u0 is None else np.asarray(u0, dtype=float).copy()
    f = energy_value(prob, u)
    grad = energy_gradient(prob, u)
    step = 1.0
    prev_u = None
    prev_grad = None
    iterates = [(0, f, float(np.abs(grad).max()), 0.0)]
    snapshots = [(0, u.copy())]
    snap_stride = 1
    converged = False
    message = ""
    for it in range(1, max_iter + 1):
        ginf = float(np.abs(grad).max())
        if ginf <= tol:
            converged = True
            break
        gg = float(grad @ grad)
        if prev_u is not None:
            s = u - prev_u
            y = grad - prev_grad
            sy = float(s @ y)
            if sy > 0:
                step = float(s @ s) / sy
        step = min(max(step, 1e-14), 1e12)
        accepted = False
        for _ in range(200):
            cand = u - step * grad
            fc = energy_value(prob, cand)
            if fc <= f - ARMIJO_C * step * gg:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            message = "line search stalled at the floating-point floor"
            break
        prev_u, prev_grad = u, grad
        u = cand
        f = fc
        grad = energy_gradient(prob, u)
        iterates.append((it, f, float(np.abs(grad).max()), step))
        if it % snap_stride == 0:
            snapshots.append((it, u.copy()))
            if len(snapshots) > 1024:  # thin the trace, keep memory flat
                snapshots = snapshots[::2]
                snap_stride *= 2
    else:
        message = "MaxIterExceeded: returning the best iterate"
    if snapshots[-1][0] != iterates[-1][0]:
        snapshots.append((iterates[-1][0], u.copy()))
    modular_trace = [gradient_modular_distance(prob, s, u) for _, s in snapshots]
    return SolveTrace(iterates, prob.full_field(u), modular_trace, converged, message)


def residual_check(prob: EnergyProblem, u_nodes: np.ndarray, tol: float):
    """Discrete weak residual of the divergence equation at a candidate.

    The residual is the gradient sup-norm rescaled by 1/h; at a true
    minimizer it vanishes with the solver tolerance.
    """
    interior = np.asarray(u_nodes, dtype=float)[1:-1]
    grad = energy_gradient(prob, interior)
    res = float(np.abs(grad).max()) / prob.h
    return {"max_residual": res, "pass": res <= tol}
