"""Linear algebra of Minkowski 4-space with signature (-, +, +, +).

Vectors are plain length-4 numpy arrays; index 0 is the timelike axis.
"""

import numpy as np

METRIC = np.diag([-1.0, 1.0, 1.0, 1.0])

# Gram matrix of a Cartan frame in the order (L, N, W1, W2).
GRAM_TARGET = np.array(
    [
        [0.0, 1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
)
GRAM_TARGET.flags.writeable = False


def vec4(*components):
    if len(components) == 1:
        components = components[0]
    v = np.asarray(components, dtype=float)
    if v.shape != (4,):
        raise ValueError(f"expected 4 components, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector components must be finite")
    return v


def mink_dot(u, v):
    return -u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3]


def mink_norm_sq(v):
    return mink_dot(v, v)


def causal_character(v, tol=1e-12):
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    q = mink_dot(v, v)
    if q < -tol:
        return "timelike"
    if q > tol:
        return "spacelike"
    return "null"


def det4(u1, u2, u3, u4):
    """Determinant of the matrix whose rows are u1..u4 (standard coordinates)."""
    return float(np.linalg.det(np.array([u1, u2, u3, u4], dtype=float)))


def gram_matrix(*vectors):
    m = np.array(vectors, dtype=float)
    return m @ METRIC @ m.T


def gram_residual(L, N, W1, W2):
    """Largest entrywise deviation of the frame's Gram matrix from GRAM_TARGET."""
    return float(np.max(np.abs(gram_matrix(L, N, W1, W2) - GRAM_TARGET)))


def project_onto_spacelike_plane(v, e1, e2):
    """Minkowski-orthogonal projection of v onto span{e1, e2} (a spacelike plane)."""
    g = np.array([[mink_dot(e1, e1), mink_dot(e1, e2)], [mink_dot(e2, e1), mink_dot(e2, e2)]])
    rhs = np.array([mink_dot(v, e1), mink_dot(v, e2)])
    c1, c2 = np.linalg.solve(g, rhs)
    return c1 * np.asarray(e1) + c2 * np.asarray(e2)
