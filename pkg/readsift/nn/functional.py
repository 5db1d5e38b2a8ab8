"""
Differentiable operations on batched tensors.

Layouts: dense inputs are ``[B, n]``; convolutional inputs are
``[B, C, L]``. Every op returns a new ``Tensor`` and, under an active
``Tape``, records how to map the output gradient onto its inputs.
"""

from typing import Any, Literal, Optional, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from readsift.core.errors import ShapeError
from readsift.nn.tensor import Tensor, as_tensor, result

Reduction = Literal["mean", "sum", "none"]

LOGVAR_CLAMP = (-10.0, 10.0)
_PROB_EPS = 1e-7


def _unbroadcast(grad: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    """Sum ``grad`` down to ``shape`` after numpy broadcasting."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


# ============================================================================
# Elementwise and structural ops
# ============================================================================


def add(a: Any, b: Any) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    return result(
        a.data + b.data,
        (a, b),
        lambda g: (_unbroadcast(g, a.shape), _unbroadcast(g, b.shape)),
    )


def sub(a: Any, b: Any) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    return result(
        a.data - b.data,
        (a, b),
        lambda g: (_unbroadcast(g, a.shape), _unbroadcast(-g, b.shape)),
    )


def mul(a: Any, b: Any) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    return result(
        a.data * b.data,
        (a, b),
        lambda g: (_unbroadcast(g * b.data, a.shape), _unbroadcast(g * a.data, b.shape)),
    )


def exp(x: Tensor) -> Tensor:
    out = np.exp(x.data)
    return result(out, (x,), lambda g: (g * out,))


def log(x: Tensor) -> Tensor:
    return result(np.log(x.data), (x,), lambda g: (g / x.data,))


def square(x: Tensor) -> Tensor:
    return result(x.data**2, (x,), lambda g: (2.0 * g * x.data,))


def clamp(x: Tensor, low: float, high: float) -> Tensor:
    """Clip to ``[low, high]``; the gradient is zero where clipping happened."""
    inside = (x.data >= low) & (x.data <= high)
    return result(np.clip(x.data, low, high), (x,), lambda g: (g * inside,))


def sum(x: Tensor, axis: Optional[int | tuple[int, ...]] = None, keepdims: bool = False) -> Tensor:  # noqa: A001
    def backward(g: np.ndarray) -> tuple[np.ndarray]:
        if axis is not None and not keepdims:
            g = np.expand_dims(g, axis)
        return (np.broadcast_to(g, x.shape).copy(),)

    return result(x.data.sum(axis=axis, keepdims=keepdims), (x,), backward)


def mean(x: Tensor, axis: Optional[int | tuple[int, ...]] = None, keepdims: bool = False) -> Tensor:
    count = x.size if axis is None else int(np.prod([x.shape[a] for a in np.atleast_1d(axis)]))
    return mul(sum(x, axis, keepdims), 1.0 / count)


def reshape(x: Tensor, shape: tuple[int, ...]) -> Tensor:
    return result(x.data.reshape(shape), (x,), lambda g: (g.reshape(x.shape),))


def flatten(x: Tensor) -> Tensor:
    """``[B, ...] -> [B, prod(...)]``."""
    return reshape(x, (x.shape[0], -1))


def concat(tensors: Sequence[Tensor], axis: int = -1) -> Tensor:
    tensors = tuple(as_tensor(t) for t in tensors)
    sizes = [t.shape[axis] for t in tensors]
    cuts = np.cumsum(sizes)[:-1]
    return result(
        np.concatenate([t.data for t in tensors], axis=axis),
        tensors,
        lambda g: tuple(np.split(g, cuts, axis=axis)),
    )


def slice_columns(x: Tensor, start: int, stop: int) -> Tensor:
    """``x[..., start:stop]``."""

    def backward(g: np.ndarray) -> tuple[np.ndarray]:
        full = np.zeros_like(x.data)
        full[..., start:stop] = g
        return (full,)

    return result(x.data[..., start:stop].copy(), (x,), backward)


# ============================================================================
# Activations
# ============================================================================


def relu(x: Tensor) -> Tensor:
    mask = x.data > 0
    return result(x.data * mask, (x,), lambda g: (g * mask,))


def leaky_relu(x: Tensor, slope: float = 0.2) -> Tensor:
    factor = np.where(x.data > 0, 1.0, slope)
    return result(x.data * factor, (x,), lambda g: (g * factor,))


def sigmoid(x: Tensor) -> Tensor:
    out = 0.5 * (1.0 + np.tanh(0.5 * x.data))
    return result(out, (x,), lambda g: (g * out * (1.0 - out),))


def _logsumexp(data: np.ndarray, axis: int) -> np.ndarray:
    peak = data.max(axis=axis, keepdims=True)
    return peak + np.log(np.exp(data - peak).sum(axis=axis, keepdims=True))


def softmax(x: Tensor, axis: int = -1) -> Tensor:
    out = np.exp(x.data - _logsumexp(x.data, axis))

    def backward(g: np.ndarray) -> tuple[np.ndarray]:
        return (out * (g - (g * out).sum(axis=axis, keepdims=True)),)

    return result(out, (x,), backward)


def log_softmax(x: Tensor, axis: int = -1) -> Tensor:
    out = x.data - _logsumexp(x.data, axis)

    def backward(g: np.ndarray) -> tuple[np.ndarray]:
        return (g - np.exp(out) * g.sum(axis=axis, keepdims=True),)

    return result(out, (x,), backward)


def logsumexp(x: Tensor, axis: int = -1, keepdims: bool = False) -> Tensor:
    lse = _logsumexp(x.data, axis)
    weights = np.exp(x.data - lse)

    def backward(g: np.ndarray) -> tuple[np.ndarray]:
        if not keepdims:
            g = np.expand_dims(g, axis)
        return (g * weights,)

    return result(lse if keepdims else np.squeeze(lse, axis=axis), (x,), backward)


# ============================================================================
# Layers as functions
# ============================================================================


def dense(x: Tensor, W: Tensor, b: Tensor) -> Tensor:
    """``x @ W.T + b`` for ``x [B, n]``, ``W [m, n]``, ``b [m]``."""
    if x.ndim != 2 or W.ndim != 2 or x.shape[1] != W.shape[1]:
        raise ShapeError("dense input does not match weight", (None, W.shape[1]), x.shape)
    if b.shape != (W.shape[0],):
        raise ShapeError("dense bias does not match weight", (W.shape[0],), b.shape)
    return result(
        x.data @ W.data.T + b.data,
        (x, W, b),
        lambda g: (g @ W.data, g.T @ x.data, g.sum(axis=0)),
    )


def _windows(x: np.ndarray, kernel: int) -> np.ndarray:
    """Zero-padded ("same") sliding windows, ``[B, C, L] -> [B, C, L, K]``."""
    pad = (kernel - 1) // 2
    padded = np.pad(x, ((0, 0), (0, 0), (pad, pad)))
    return sliding_window_view(padded, kernel, axis=2)


def _correlate(x: np.ndarray, W: np.ndarray) -> np.ndarray:
    # out[b, o, i] = sum_{c, k} W[o, c, k] * x_padded[b, c, i + k]
    return np.einsum("bclk,ock->bol", _windows(x, W.shape[2]), W, optimize=True)


def _correlate_adjoint(y: np.ndarray, W: np.ndarray) -> np.ndarray:
    # transpose of _correlate in its input: [B, O, L] -> [B, C, L]
    batch, _, length = y.shape
    kernel = W.shape[2]
    pad = (kernel - 1) // 2
    padded = np.zeros((batch, W.shape[1], length + kernel - 1))
    for k in range(kernel):
        padded[:, :, k : k + length] += np.einsum("bol,oc->bcl", y, W[:, :, k], optimize=True)
    return padded[:, :, pad : pad + length]


def _kernel_grad(x: np.ndarray, g: np.ndarray, kernel: int) -> np.ndarray:
    return np.einsum("bclk,bol->ock", _windows(x, kernel), g, optimize=True)


def _check_conv(x: Tensor, W: Tensor, b: Tensor, in_axis: int, out_axis: int) -> None:
    if W.ndim != 3 or W.shape[2] % 2 == 0:
        raise ShapeError("convolution kernel must be [*, *, K] with odd K", None, W.shape)
    if x.ndim != 3 or x.shape[1] != W.shape[in_axis]:
        raise ShapeError("convolution input channels do not match kernel", (None, W.shape[in_axis], None), x.shape)
    if b.shape != (W.shape[out_axis],):
        raise ShapeError("convolution bias does not match kernel", (W.shape[out_axis],), b.shape)


def conv1d(x: Tensor, W: Tensor, b: Tensor) -> Tensor:
    """
    Stride-1 cross-correlation with zero "same" padding.

    Args:
        x: ``[B, C_in, L]``
        W: ``[C_out, C_in, K]``, K odd
        b: ``[C_out]``

    Returns:
        ``[B, C_out, L]``
    """
    _check_conv(x, W, b, in_axis=1, out_axis=0)
    kernel = W.shape[2]
    return result(
        _correlate(x.data, W.data) + b.data[None, :, None],
        (x, W, b),
        lambda g: (_correlate_adjoint(g, W.data), _kernel_grad(x.data, g, kernel), g.sum(axis=(0, 2))),
    )


def conv_transpose1d(x: Tensor, W: Tensor, b: Tensor) -> Tensor:
    """
    Adjoint of ``conv1d`` plus a bias; the length is preserved.

    Args:
        x: ``[B, C_in, L]``
        W: ``[C_in, C_out, K]`` (the kernel of the convolution being inverted)
        b: ``[C_out]``
    """
    _check_conv(x, W, b, in_axis=0, out_axis=1)
    kernel = W.shape[2]
    return result(
        _correlate_adjoint(x.data, W.data) + b.data[None, :, None],
        (x, W, b),
        lambda g: (_correlate(g, W.data), _kernel_grad(g, x.data, kernel), g.sum(axis=(0, 2))),
    )


def max_pool(x: Tensor) -> tuple[Tensor, np.ndarray]:
    """
    Window-2 stride-2 max pooling over the last axis.

    An odd trailing element is dropped. Ties go to the first index.

    Returns:
        Pooled values ``[..., L // 2]`` and the absolute argmax positions
    """
    length = x.shape[-1]
    if length < 2:
        raise ShapeError("max_pool needs at least two positions", None, x.shape)
    half = length // 2
    pairs = x.data[..., : 2 * half].reshape(*x.shape[:-1], half, 2)
    indices = 2 * np.arange(half) + np.argmax(pairs, axis=-1)

    def backward(g: np.ndarray) -> tuple[np.ndarray]:
        full = np.zeros_like(x.data)
        np.put_along_axis(full, indices, g, axis=-1)
        return (full,)

    return result(np.take_along_axis(x.data, indices, axis=-1), (x,), backward), indices


def max_unpool(x: Tensor, indices: np.ndarray, length: int) -> Tensor:
    """Scatter pooled values back to ``indices``; every other position is zero."""
    if indices.shape != x.shape:
        raise ShapeError("unpool indices do not match values", x.shape, indices.shape)
    out = np.zeros((*x.shape[:-1], length))
    np.put_along_axis(out, indices, x.data, axis=-1)
    return result(out, (x,), lambda g: (np.take_along_axis(g, indices, axis=-1),))


def upsample_nearest(x: Tensor, factor: int = 2) -> Tensor:
    """Duplicate every position ``factor`` times: ``[3, 4] -> [3, 3, 4, 4]``."""

    def backward(g: np.ndarray) -> tuple[np.ndarray]:
        return (g.reshape(*x.shape, factor).sum(axis=-1),)

    return result(np.repeat(x.data, factor, axis=-1), (x,), backward)


def batch_norm(
    x: Tensor,
    gamma: Tensor,
    beta: Tensor,
    running_mean: np.ndarray,
    running_var: np.ndarray,
    training: bool,
    momentum: float = 0.9,
    eps: float = 1e-5,
) -> Tensor:
    """
    Per-channel normalization of ``[B, C, L]`` or per-feature of ``[B, F]``.

    In training mode batch statistics are used and the running buffers are
    updated in place (``running = momentum * running + (1 - momentum) * batch``).
    """
    if x.ndim not in (2, 3) or x.shape[1] != gamma.shape[0]:
        raise ShapeError("batch_norm input does not match its channel count", (None, gamma.shape[0]), x.shape)
    axes = (0,) if x.ndim == 2 else (0, 2)
    view = (1, -1) if x.ndim == 2 else (1, -1, 1)
    g_view, b_view = gamma.data.reshape(view), beta.data.reshape(view)

    if not training:
        inv_std = 1.0 / np.sqrt(running_var + eps)
        xhat = (x.data - running_mean.reshape(view)) * inv_std.reshape(view)
        return result(
            g_view * xhat + b_view,
            (x, gamma, beta),
            lambda g: (g * g_view * inv_std.reshape(view), (g * xhat).sum(axis=axes), g.sum(axis=axes)),
        )

    if x.shape[0] < 2:
        raise ShapeError("batch_norm in training mode needs a batch of at least 2", None, x.shape)
    batch_mean = x.data.mean(axis=axes)
    batch_var = x.data.var(axis=axes)
    running_mean *= momentum
    running_mean += (1.0 - momentum) * batch_mean
    running_var *= momentum
    running_var += (1.0 - momentum) * batch_var

    inv_std = (1.0 / np.sqrt(batch_var + eps)).reshape(view)
    xhat = (x.data - batch_mean.reshape(view)) * inv_std
    count = x.size // gamma.shape[0]

    def backward(g: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        gxhat = g * g_view
        gx = (
            inv_std
            / count
            * (
                count * gxhat
                - gxhat.sum(axis=axes, keepdims=True)
                - xhat * (gxhat * xhat).sum(axis=axes, keepdims=True)
            )
        )
        return gx, (g * xhat).sum(axis=axes), g.sum(axis=axes)

    return result(g_view * xhat + b_view, (x, gamma, beta), backward)


# ============================================================================
# Losses (per example, then reduced over the batch)
# ============================================================================


def _reduce(per_example: Tensor, reduction: Reduction) -> Tensor:
    if reduction == "none":
        return per_example
    if reduction == "sum":
        return sum(per_example)
    return mean(per_example)


def softmax_cross_entropy(logits: Tensor, targets: np.ndarray, reduction: Reduction = "mean") -> Tensor:
    """``-sum_k t_k log softmax(logits)_k``; ``targets`` are one-hot or soft rows."""
    targets = np.asarray(targets, dtype=np.float64)
    if targets.shape != logits.shape:
        raise ShapeError("cross-entropy targets do not match logits", logits.shape, targets.shape)
    return _reduce(mul(sum(mul(log_softmax(logits), Tensor(targets)), axis=-1), -1.0), reduction)


def bernoulli_nll(probs: Tensor, x: Any, reduction: Reduction = "mean") -> Tensor:
    """Bernoulli negative log-likelihood of ``x`` in [0, 1]; ``probs`` are clipped away from 0 and 1."""
    x = as_tensor(x)
    if x.shape != probs.shape:
        raise ShapeError("bernoulli_nll target does not match probabilities", probs.shape, x.shape)
    p = clamp(probs, _PROB_EPS, 1.0 - _PROB_EPS)
    ll = add(mul(x, log(p)), mul(sub(1.0, x), log(sub(1.0, p))))
    return _reduce(mul(sum(ll, axis=-1), -1.0), reduction)


def kl_diag_gaussian(mu: Tensor, logvar: Tensor, reduction: Reduction = "mean") -> Tensor:
    """``KL(N(mu, exp(logvar)) || N(0, I))`` summed over the latent dimension."""
    inner = sub(add(1.0, logvar), add(square(mu), exp(logvar)))
    return _reduce(mul(sum(inner, axis=-1), -0.5), reduction)


def gaussian_nll(mean_: Tensor, target: Any, reduction: Reduction = "mean") -> Tensor:
    """Unit-variance Gaussian negative log-likelihood: ``0.5 * ||t - m||^2 + 0.5 * D * log(2 pi)``."""
    target = as_tensor(target)
    if target.shape != mean_.shape:
        raise ShapeError("gaussian_nll target does not match mean", mean_.shape, target.shape)
    dims = mean_.shape[-1]
    per = add(mul(sum(square(sub(target, mean_)), axis=-1), 0.5), 0.5 * dims * np.log(2.0 * np.pi))
    return _reduce(per, reduction)


def sample_gaussian(mu: Tensor, logvar: Tensor, rng: np.random.Generator) -> Tensor:
    """Reparameterized draw ``mu + exp(logvar / 2) * eps`` with ``logvar`` clamped to [-10, 10]."""
    eps = rng.standard_normal(mu.shape)
    std = exp(mul(clamp(logvar, *LOGVAR_CLAMP), 0.5))
    return add(mu, mul(std, eps))
