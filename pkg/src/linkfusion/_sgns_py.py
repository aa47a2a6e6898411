"""Pure-Python skip-gram negative-sampling kernel (fallback for the Cython core)."""

import math

import numpy as np

KERNEL_NAME = "python"

_CLAMP = 10.0


def _sigmoid(x):
    if x > _CLAMP:
        return 1.0
    if x < -_CLAMP:
        return 0.0
    return 1.0 / (1.0 + math.exp(-x))


def sgns_train(w_in, w_out, centers, contexts, negatives, lr):
    """One sequential SGD pass over the (center, context, negatives) triples.

    Mutates w_in and w_out in place. Arithmetic mirrors the compiled kernel:
    per pair, the positive target then each negative, with the center update
    applied after all targets.
    """
    dim = w_in.shape[1]
    n_neg = negatives.shape[1]
    grad_c = np.empty(dim)
    for idx in range(len(centers)):
        c = centers[idx]
        vc = w_in[c]
        grad_c[:] = 0.0
        for k in range(n_neg + 1):
            if k == 0:
                tgt = contexts[idx]
                label = 1.0
            else:
                tgt = negatives[idx, k - 1]
                if tgt == contexts[idx]:
                    continue
                label = 0.0
            u = w_out[tgt]
            x = 0.0
            for j in range(dim):
                x += vc[j] * u[j]
            g = lr * (_sigmoid(x) - label)
            for j in range(dim):
                grad_c[j] += g * u[j]
                u[j] -= g * vc[j]
        for j in range(dim):
            vc[j] -= grad_c[j]
