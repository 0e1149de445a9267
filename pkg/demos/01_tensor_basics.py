"""Tour of the third-order tensor operations: unfolding, mode products,
and the contraction that stands in for Kronecker-product arithmetic."""

import numpy as np

from beta_ntd import contracted_unfolding, fold, matricize, mode_product, multiway_product

rng = np.random.default_rng(0)

# A small tensor and its three unfoldings. Rows of the mode-n unfolding
# index mode n; columns run over the other two modes, lower mode fastest.
t = np.arange(24.0).reshape(2, 3, 4)
for mode in (1, 2, 3):
    m = matricize(t, mode)
    print(f"mode-{mode} unfolding has shape {m.shape}")
    assert np.array_equal(fold(m, mode, t.shape), t)
print("fold(matricize(t)) round-trips exactly\n")

# Mode products contract one mode with a matrix.
w = rng.random((5, 2))
print("t x_1 W shape:", mode_product(t, w, 1).shape)

# The full Tucker-style product applies one matrix per mode.
g = rng.random((2, 2, 2))
w, h, q = rng.random((4, 2)), rng.random((5, 2)), rng.random((6, 2))
x = multiway_product(g, w, h, q)
print("core (2,2,2) expanded to data", x.shape)

# The solver needs the unfolded product (g x_2 h x_3 q)_(1). Done through
# an explicit Kronecker product, that would require a factor of size
# (rows_h * rows_q) x (cols_h * cols_q); the contraction route never
# builds it.
v = contracted_unfolding(g, h, q, 1)
v_kron = matricize(g, 1) @ np.kron(q, h).T  # what we avoid
print("contracted unfolding:", v.shape,
      "| max deviation from Kronecker route:", np.max(np.abs(v - v_kron)))
