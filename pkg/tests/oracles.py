"""Independent reference computations used by several test modules."""
import numpy as np


def pencil_roots(C, D):
    """Roots of det(C - lam D) = 0, descending.

    2x2 uses the quadratic formula on the expanded determinant. Larger orders
    interpolate the characteristic polynomial from determinant samples, take
    its roots and polish them with Newton steps on the determinant itself.
    """
    n = C.shape[0]
    if n == 2:
        a = D[0, 0] * D[1, 1] - D[0, 1] * D[1, 0]
        b = -(C[0, 0] * D[1, 1] + C[1, 1] * D[0, 0] - C[0, 1] * D[1, 0] - C[1, 0] * D[0, 1])
        c = C[0, 0] * C[1, 1] - C[0, 1] * C[1, 0]
        disc = np.sqrt(max(b * b - 4 * a * c, 0.0))
        # numerically stable pair
        q = -0.5 * (b + np.copysign(disc, b))
        roots = np.array([q / a, c / q])
    else:
        scale = np.trace(C) / np.trace(D)
        nodes = scale * np.linspace(-1.0, 2.0, n + 1)
        values = [np.linalg.det(C - t * D) for t in nodes]
        coeffs = np.polyfit(nodes, values, n)
        roots = np.real(np.roots(coeffs))
        for _ in range(20):
            f = np.array([np.linalg.det(C - r * D) for r in roots])
            h = 1e-7 * np.maximum(np.abs(roots), scale)
            df = np.array([(np.linalg.det(C - (r + hh) * D) - np.linalg.det(C - (r - hh) * D)) / (2 * hh)
                           for r, hh in zip(roots, h)])
            step = np.where(df != 0, f / np.where(df == 0, 1, df), 0)
            roots = roots - step
    return np.sort(roots)[::-1]


def central_difference_gradient(f, W, step=1e-6):
    """Gradient of a row-wise vector function summed per row, by central differences.

    ``f(W)`` returns one value per row; row i of the result is d f_i / d W[i].
    """
    W = np.asarray(W, dtype=float)
    grad = np.zeros_like(W)
    for i in range(W.shape[0]):
        for j in range(W.shape[1]):
            plus, minus = W.copy(), W.copy()
            plus[i, j] += step
            minus[i, j] -= step
            grad[i, j] = (f(plus)[i] - f(minus)[i]) / (2 * step)
    return grad
