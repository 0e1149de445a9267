"""
Block-coordinate multiplicative updates for nonnegative Tucker
decomposition of a third-order tensor under the beta-divergence.

One outer loop updates the mode factors W, H, Q in order (each consuming
the freshest factors) and then the core, every update ending with an
elementwise maximum against a small constant so entries never reach zero.
All contractions go through mode products; Kronecker products are never
materialized.
"""

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .divergence import gamma_exponent, objective
from .errors import NumericalDomainError
from .tensor_ops import (
    clamp_min,
    contracted_unfolding,
    ew_power,
    matricize,
    multiway_product,
)

_TINY = np.finfo(np.float64).tiny


@dataclass
class SolverConfig:
    """Solver parameters: divergence shape, clamping constant, core
    dimensions, iteration budget, stopping threshold and RNG seed."""

    beta: float = 1.0
    epsilon: float = 1e-12
    core_dims: tuple = (8, 8, 8)
    max_iters: int = 500
    rel_tol: float = 1e-8
    seed: int = 0
    loss_eval_period: int = 1

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if len(self.core_dims) != 3 or any(int(d) < 1 for d in self.core_dims):
            raise ValueError(f"core_dims must be three positive integers, got {self.core_dims}")
        if self.max_iters < 0:
            raise ValueError(f"max_iters must be >= 0, got {self.max_iters}")
        if self.rel_tol < 0:
            raise ValueError(f"rel_tol must be >= 0, got {self.rel_tol}")
        if self.loss_eval_period < 1:
            raise ValueError(f"loss_eval_period must be >= 1, got {self.loss_eval_period}")
        self.core_dims = tuple(int(d) for d in self.core_dims)


@dataclass
class FactorSet:
    """One iterate: mode factors w (J x J'), h (K x K'), q (L x L') and
    core tensor (J' x K' x L')."""

    w: np.ndarray
    h: np.ndarray
    q: np.ndarray
    core: np.ndarray

    def copy(self):
        return FactorSet(self.w.copy(), self.h.copy(), self.q.copy(), self.core.copy())

    def approximation(self):
        return multiway_product(self.core, self.w, self.h, self.q)


@dataclass
class LossTrace:
    """Objective values (index 0 is the pre-iteration loss), per-iteration
    wall-clock times, and the iteration at which the stopping rule fired."""

    losses: list = field(default_factory=list)
    iter_times: list = field(default_factory=list)
    converged_at: int | None = None


def init_factors(data_dims, cfg):
    """Draw all factor and core entries i.i.d. uniform on [epsilon, 1),
    deterministically from cfg.seed."""
    j, k, l = (int(d) for d in data_dims)
    jc, kc, lc = cfg.core_dims
    rng = np.random.default_rng(cfg.seed)
    eps = cfg.epsilon
    return FactorSet(
        w=rng.uniform(eps, 1.0, (j, jc)),
        h=rng.uniform(eps, 1.0, (k, kc)),
        q=rng.uniform(eps, 1.0, (l, lc)),
        core=rng.uniform(eps, 1.0, (jc, kc, lc)),
    )


def _mu_ratio(u, v, m_x, beta):
    """Multiplicative-update ratio (numerator / denominator)^gamma for an
    NMF-shaped subproblem M ~ U V."""
    uv = u @ v
    if uv.min() <= 0:
        raise NumericalDomainError("nonpositive entry in factor-times-basis product")
    num = (ew_power(uv, beta - 2.0) * m_x) @ v.T
    den = ew_power(uv, beta - 1.0) @ v.T
    if den.min() <= 0:
        raise NumericalDomainError("nonpositive entry in update denominator")
    return ew_power(num / den, gamma_exponent(beta))


def update_mode_factor(x, f, mode, cfg):
    """One multiplicative update of the factor for `mode`, using the
    contracted unfolding of the core with the two other factors."""
    factors = (f.w, f.h, f.q)
    others = [m for m in (1, 2, 3) if m != mode]
    v = contracted_unfolding(
        f.core, factors[others[0] - 1], factors[others[1] - 1], mode
    )
    u = factors[mode - 1]
    ratio = _mu_ratio(u, v, matricize(x, mode), cfg.beta)
    return clamp_min(u * ratio, cfg.epsilon)


def update_core(x, f, cfg):
    """One multiplicative update of the core; products with the big
    Kronecker matrix and its transpose are realized as multiway products."""
    beta = cfg.beta
    approx = f.approximation()
    if approx.min() <= 0:
        raise NumericalDomainError("nonpositive entry in model approximation")
    num_t = ew_power(approx, beta - 2.0) * x
    den_t = ew_power(approx, beta - 1.0)
    num = multiway_product(num_t, f.w.T, f.h.T, f.q.T)
    den = multiway_product(den_t, f.w.T, f.h.T, f.q.T)
    if den.min() <= 0:
        raise NumericalDomainError("nonpositive entry in core update denominator")
    ratio = ew_power(num / den, gamma_exponent(beta))
    return clamp_min(f.core * ratio, cfg.epsilon)


def iterate(x, f, cfg):
    """One full outer loop: update W, H, Q in order, then the core."""
    w = update_mode_factor(x, f, 1, cfg)
    f = replace(f, w=w)
    h = update_mode_factor(x, f, 2, cfg)
    f = replace(f, h=h)
    q = update_mode_factor(x, f, 3, cfg)
    f = replace(f, q=q)
    core = update_core(x, f, cfg)
    return replace(f, core=core)


def solve(x, cfg, init=None, clamp_data=None):
    """
    Run multiplicative updates until the iteration budget is exhausted or
    the relative loss decrease over one evaluation period falls below
    cfg.rel_tol.

    Parameters
    ----------
    x : ndarray, shape (J, K, L)
        Nonnegative data tensor.
    cfg : SolverConfig
    init : FactorSet, optional
        Starting point; a fresh seeded draw when omitted.
    clamp_data : bool, optional
        Clamp the data to cfg.epsilon before solving. Defaults to True
        when beta <= 1 (where zero data entries make the divergence
        undefined or unbounded) and False otherwise.

    Returns
    -------
    (FactorSet, LossTrace)
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 3:
        raise ValueError(f"expected a third-order tensor, got ndim={x.ndim}")
    if np.any(x < 0):
        raise ValueError("data tensor must be nonnegative")
    if clamp_data is None:
        clamp_data = cfg.beta <= 1.0
    if clamp_data:
        x = clamp_min(x, cfg.epsilon)

    f = init.copy() if init is not None else init_factors(x.shape, cfg)
    trace = LossTrace()
    trace.losses.append(objective(x, f.approximation(), cfg.beta))

    last_eval = trace.losses[0]
    for it in range(1, cfg.max_iters + 1):
        t0 = time.perf_counter()
        f = iterate(x, f, cfg)
        trace.iter_times.append(time.perf_counter() - t0)
        if it % cfg.loss_eval_period == 0 or it == cfg.max_iters:
            loss = objective(x, f.approximation(), cfg.beta)
            if not np.isfinite(loss):
                raise NumericalDomainError(f"non-finite loss at iteration {it}")
            trace.losses.append(loss)
            if (last_eval - loss) / max(last_eval, _TINY) < cfg.rel_tol:
                trace.converged_at = it
                break
            last_eval = loss
    return f, trace
