"""
Naive reference updates that materialize Kronecker products explicitly.

Only for benchmarking comparisons and correctness checks on small
problems; the solver itself never forms a Kronecker product. Memory for
the core update grows with J*K*L*J'*K'*L', so callers must guard sizes.
"""

import numpy as np

from .divergence import gamma_exponent
from .errors import NumericalDomainError
from .solver import FactorSet
from .tensor_ops import clamp_min, ew_power, matricize


def kron_basis(f, mode):
    """Explicit Kronecker factor pairing for the mode-`mode` unfolding:
    kron(higher-mode factor, lower-mode factor)."""
    factors = (f.w, f.h, f.q)
    others = [m for m in (1, 2, 3) if m != mode]
    lower, higher = factors[others[0] - 1], factors[others[1] - 1]
    return np.kron(higher, lower)


def naive_update_mode_factor(x, f, mode, cfg):
    v = matricize(f.core, mode) @ kron_basis(f, mode).T
    u = (f.w, f.h, f.q)[mode - 1]
    uv = u @ v
    if uv.min() <= 0:
        raise NumericalDomainError("nonpositive entry in factor-times-basis product")
    beta = cfg.beta
    m_x = matricize(x, mode)
    num = (ew_power(uv, beta - 2.0) * m_x) @ v.T
    den = ew_power(uv, beta - 1.0) @ v.T
    return clamp_min(u * ew_power(num / den, gamma_exponent(beta)), cfg.epsilon)


def naive_update_core(x, f, cfg):
    beta = cfg.beta
    big = np.kron(f.w, np.kron(f.h, f.q))
    vec_core = f.core.reshape(-1)
    vec_approx = big @ vec_core
    if vec_approx.min() <= 0:
        raise NumericalDomainError("nonpositive entry in model approximation")
    vec_x = np.asarray(x, dtype=np.float64).reshape(-1)
    num = big.T @ (ew_power(vec_approx, beta - 2.0) * vec_x)
    den = big.T @ ew_power(vec_approx, beta - 1.0)
    ratio = ew_power(num / den, gamma_exponent(beta)).reshape(f.core.shape)
    return clamp_min(f.core * ratio, cfg.epsilon)


def naive_iterate(x, f, cfg):
    """Same update order as the efficient loop, via explicit Kronecker
    products."""
    w = naive_update_mode_factor(x, f, 1, cfg)
    f = FactorSet(w, f.h, f.q, f.core)
    h = naive_update_mode_factor(x, f, 2, cfg)
    f = FactorSet(f.w, h, f.q, f.core)
    q = naive_update_mode_factor(x, f, 3, cfg)
    f = FactorSet(f.w, f.h, q, f.core)
    core = naive_update_core(x, f, cfg)
    return FactorSet(f.w, f.h, f.q, core)
