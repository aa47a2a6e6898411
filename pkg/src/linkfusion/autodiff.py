"""Minimal reverse-mode autodiff on dense float64 numpy arrays.

Only the operations the link-prediction model needs: matmul, broadcast
add/mul, relu, sigmoid, softmax, log, concat, row gather, reductions,
dropout, plus an Adam optimizer with an additive L2 term.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "Tensor",
    "tensor",
    "matmul",
    "add",
    "sub",
    "mul",
    "relu",
    "sigmoid",
    "softmax",
    "log",
    "concat",
    "gather_rows",
    "tensor_sum",
    "tensor_mean",
    "dropout",
    "Adam",
    "glorot_uniform",
]


class Tensor:
    """Dense n-d array with optional gradient tracking."""

    __slots__ = ("data", "requires_grad", "grad", "_parents", "_backward", "_done")

    def __init__(self, data, requires_grad=False, _parents=()):
        self.data = np.asarray(data, dtype=np.float64)
        self.requires_grad = bool(requires_grad)
        self.grad = None
        self._parents = _parents
        self._backward = None
        self._done = False

    @property
    def shape(self):
        return self.data.shape

    def __repr__(self):
        return f"Tensor(shape={self.data.shape}, requires_grad={self.requires_grad})"

    def _accumulate(self, grad):
        if self.grad is None:
            self.grad = np.zeros_like(self.data)
        self.grad += grad

    def backward(self):
        """Populate .grad of every tracked ancestor of this scalar tensor."""
        if self.data.size != 1:
            raise ValueError(f"backward requires a scalar loss, got shape {self.data.shape}")
        if self._done:
            raise RuntimeError("backward already called on this tensor; rebuild the graph")
        self._done = True

        order = []
        seen = set()

        def visit(node):
            if id(node) in seen:
                return
            seen.add(id(node))
            for p in node._parents:
                visit(p)
            order.append(node)

        visit(self)
        self._accumulate(np.ones_like(self.data))
        for node in reversed(order):
            if node._backward is not None and node.grad is not None:
                node._backward(node.grad)

    def item(self):
        return float(self.data.reshape(()))


def tensor(data, requires_grad=False):
    return Tensor(data, requires_grad=requires_grad)


def _as_tensor(x):
    return x if isinstance(x, Tensor) else Tensor(x)


def _unbroadcast(grad, shape):
    """Sum grad over axes that numpy broadcasting expanded to reach `shape`."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, dim in enumerate(shape):
        if dim == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad.reshape(shape)


def _needs_grad(*tensors):
    return any(t.requires_grad for t in tensors)


def matmul(a, b):
    a, b = _as_tensor(a), _as_tensor(b)
    if a.data.ndim != 2 or b.data.ndim != 2 or a.data.shape[1] != b.data.shape[0]:
        raise ValueError(f"matmul shape mismatch: {a.data.shape} x {b.data.shape}")
    out = Tensor(a.data @ b.data, _needs_grad(a, b), (a, b))
    if out.requires_grad:
        def bw(grad):
            if a.requires_grad:
                a._accumulate(grad @ b.data.T)
            if b.requires_grad:
                b._accumulate(a.data.T @ grad)
        out._backward = bw
    return out


def add(a, b):
    a, b = _as_tensor(a), _as_tensor(b)
    try:
        data = a.data + b.data
    except ValueError:
        raise ValueError(f"add shape mismatch: {a.data.shape} vs {b.data.shape}")
    out = Tensor(data, _needs_grad(a, b), (a, b))
    if out.requires_grad:
        def bw(grad):
            if a.requires_grad:
                a._accumulate(_unbroadcast(grad, a.data.shape))
            if b.requires_grad:
                b._accumulate(_unbroadcast(grad, b.data.shape))
        out._backward = bw
    return out


def sub(a, b):
    return add(a, mul(b, Tensor(-1.0)))


def mul(a, b):
    a, b = _as_tensor(a), _as_tensor(b)
    try:
        data = a.data * b.data
    except ValueError:
        raise ValueError(f"mul shape mismatch: {a.data.shape} vs {b.data.shape}")
    out = Tensor(data, _needs_grad(a, b), (a, b))
    if out.requires_grad:
        def bw(grad):
            if a.requires_grad:
                a._accumulate(_unbroadcast(grad * b.data, a.data.shape))
            if b.requires_grad:
                b._accumulate(_unbroadcast(grad * a.data, b.data.shape))
        out._backward = bw
    return out


def relu(x):
    x = _as_tensor(x)
    out = Tensor(np.maximum(x.data, 0.0), x.requires_grad, (x,))
    if out.requires_grad:
        def bw(grad):
            x._accumulate(grad * (x.data > 0.0))
        out._backward = bw
    return out


def sigmoid(x):
    x = _as_tensor(x)
    data = np.where(x.data >= 0, 1.0 / (1.0 + np.exp(-x.data)),
                    np.exp(x.data) / (1.0 + np.exp(x.data)))
    out = Tensor(data, x.requires_grad, (x,))
    if out.requires_grad:
        def bw(grad):
            x._accumulate(grad * data * (1.0 - data))
        out._backward = bw
    return out


def softmax(x, axis):
    x = _as_tensor(x)
    shifted = x.data - x.data.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    data = e / e.sum(axis=axis, keepdims=True)
    out = Tensor(data, x.requires_grad, (x,))
    if out.requires_grad:
        def bw(grad):
            dot = (grad * data).sum(axis=axis, keepdims=True)
            x._accumulate(data * (grad - dot))
        out._backward = bw
    return out


def log(x):
    x = _as_tensor(x)
    if np.any(x.data <= 0.0):
        raise ValueError("log requires strictly positive inputs")
    out = Tensor(np.log(x.data), x.requires_grad, (x,))
    if out.requires_grad:
        def bw(grad):
            x._accumulate(grad / x.data)
        out._backward = bw
    return out


def clamp(x, lo, hi):
    x = _as_tensor(x)
    data = np.clip(x.data, lo, hi)
    out = Tensor(data, x.requires_grad, (x,))
    if out.requires_grad:
        def bw(grad):
            inside = (x.data > lo) & (x.data < hi)
            x._accumulate(grad * inside)
        out._backward = bw
    return out


def reshape(x, shape):
    x = _as_tensor(x)
    out = Tensor(x.data.reshape(shape), x.requires_grad, (x,))
    if out.requires_grad:
        def bw(grad):
            x._accumulate(grad.reshape(x.data.shape))
        out._backward = bw
    return out


def concat(tensors, axis):
    tensors = [_as_tensor(t) for t in tensors]
    data = np.concatenate([t.data for t in tensors], axis=axis)
    out = Tensor(data, _needs_grad(*tensors), tuple(tensors))
    if out.requires_grad:
        sizes = [t.data.shape[axis] for t in tensors]
        splits = np.cumsum(sizes)[:-1]
        def bw(grad):
            for t, g in zip(tensors, np.split(grad, splits, axis=axis)):
                if t.requires_grad:
                    t._accumulate(g)
        out._backward = bw
    return out


def gather_rows(x, indices):
    """Select rows x[indices]; backward scatter-adds into the source rows."""
    x = _as_tensor(x)
    idx = np.asarray(indices, dtype=np.intp)
    out = Tensor(x.data[idx], x.requires_grad, (x,))
    if out.requires_grad:
        def bw(grad):
            acc = np.zeros_like(x.data)
            np.add.at(acc, idx, grad)
            x._accumulate(acc)
        out._backward = bw
    return out


def tensor_sum(x, axis=None):
    x = _as_tensor(x)
    out = Tensor(x.data.sum(axis=axis), x.requires_grad, (x,))
    if out.requires_grad:
        def bw(grad):
            if axis is None:
                x._accumulate(np.broadcast_to(grad, x.data.shape).copy())
            else:
                x._accumulate(np.broadcast_to(np.expand_dims(grad, axis), x.data.shape).copy())
        out._backward = bw
    return out


def tensor_mean(x, axis=None):
    x = _as_tensor(x)
    n = x.data.size if axis is None else x.data.shape[axis]
    return mul(tensor_sum(x, axis=axis), Tensor(1.0 / n))


def dropout(x, p, training, seed):
    """Inverted dropout: train-time masking with 1/(1-p) rescale, identity in eval."""
    if not 0.0 <= p < 1.0:
        raise ValueError(f"dropout probability must lie in [0, 1), got {p}")
    x = _as_tensor(x)
    if not training or p == 0.0:
        return x
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    mask = (rng.random(x.data.shape) >= p) / (1.0 - p)
    out = Tensor(x.data * mask, x.requires_grad, (x,))
    if out.requires_grad:
        def bw(grad):
            x._accumulate(grad * mask)
        out._backward = bw
    return out


def glorot_uniform(shape, rng, scale=1.0):
    """Uniform init in +-sqrt(6/(fan_in+fan_out))."""
    fan_in, fan_out = (shape[0], shape[-1]) if len(shape) > 1 else (shape[0], shape[0])
    limit = scale * np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


class Adam:
    """Adam with an additive L2 term folded into the gradient before the moments."""

    def __init__(self, params, lr=0.01, l2=0.0, beta1=0.9, beta2=0.999, eps=1e-8):
        self.params = list(params)
        for p in self.params:
            if not p.requires_grad:
                raise ValueError("Adam parameters must require gradients")
        self.lr = lr
        self.l2 = l2
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.step_count = 0
        self.m = [np.zeros_like(p.data) for p in self.params]
        self.v = [np.zeros_like(p.data) for p in self.params]

    def step(self):
        missing = [i for i, p in enumerate(self.params) if p.grad is None]
        if missing:
            raise RuntimeError(f"Adam.step with unpopulated gradients at indices {missing}")
        self.step_count += 1
        t = self.step_count
        for i, p in enumerate(self.params):
            g = p.grad + self.l2 * p.data
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * g
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * g * g
            m_hat = self.m[i] / (1.0 - self.beta1 ** t)
            v_hat = self.v[i] / (1.0 - self.beta2 ** t)
            p.data -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)
        self.zero_grad()

    def zero_grad(self):
        for p in self.params:
            p.grad = None
