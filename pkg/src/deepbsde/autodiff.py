"""Reverse-mode automatic differentiation over numpy arrays.

A :class:`Tape` records every primitive produced while it is active, in
creation order (which is already a topological order).  Replaying the
recorded closures in reverse accumulates adjoints into every tensor that
participated in the forward pass; leaves that were never touched keep a
zero gradient.  Only the primitives needed by the unrolled trajectory
models are provided -- this is deliberately not a general autodiff
system.

Tapes are throwaway objects: one per training step, never shared between
threads.  With no tape active the same operations just compute values,
which is the inference path.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .errors import EmptyTapeError, ShapeError

_TAPE_STACK: list["Tape"] = []


def _active_tape():
    return _TAPE_STACK[-1] if _TAPE_STACK else None


class Tape:
    """Recorder for one forward computation."""

    def __init__(self):
        self._nodes: list[Tensor] = []

    def __enter__(self):
        _TAPE_STACK.append(self)
        return self

    def __exit__(self, exc_type, exc, tb):
        _TAPE_STACK.pop()
        return False

    def __len__(self):
        return len(self._nodes)

    def record(self, node: "Tensor"):
        self._nodes.append(node)

    def backward(self, loss: "Tensor"):
        """Seed d(loss)/d(loss) = 1 and run every recorded closure in reverse."""
        if not self._nodes:
            raise EmptyTapeError("backward requested before any forward computation was recorded")
        if loss.data.size != 1:
            raise ShapeError(f"loss must be a scalar node, got shape {loss.data.shape}")
        for node in self._nodes:
            node.grad = None
        loss.grad = np.ones_like(loss.data)
        for node in reversed(self._nodes):
            if node.grad is not None and node._backward is not None:
                node._backward(node.grad)


class Tensor:
    """Array value that can carry an adjoint.

    Leaves (parameters, constants) are built directly; interior nodes are
    produced by the operations below and registered on the active tape.
    """

    __slots__ = ("data", "grad", "name", "_backward")

    def __init__(self, data, name: str | None = None):
        self.data = np.asarray(data, dtype=np.float64)
        self.grad: np.ndarray | None = None
        self.name = name
        self._backward: Callable[[np.ndarray], None] | None = None

    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    def item(self) -> float:
        return float(self.data.reshape(-1)[0])

    def accumulate(self, g: np.ndarray):
        self.grad = g if self.grad is None else self.grad + g

    def __repr__(self):
        tag = f" name={self.name!r}" if self.name else ""
        return f"Tensor(shape={self.data.shape}{tag})"

    # arithmetic ------------------------------------------------------
    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __mul__(self, other):
        return mul(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return mul(self, -1.0)

    def __sub__(self, other):
        return add(self, _negated(other))

    def __rsub__(self, other):
        return add(_negated(self), other)

    def __truediv__(self, other):
        if isinstance(other, Tensor):
            return mul(self, power(other, -1.0))
        return mul(self, 1.0 / np.asarray(other, dtype=np.float64))

    def __pow__(self, exponent):
        return power(self, exponent)

    def __matmul__(self, other):
        return matmul(self, other)

    def sum(self, axis=None, keepdims=False):
        return tsum(self, axis=axis, keepdims=keepdims)

    def mean(self):
        return tmean(self)

    def reshape(self, *shape):
        return reshape(self, shape if len(shape) > 1 else shape[0])


def _negated(v):
    if isinstance(v, Tensor):
        return mul(v, -1.0)
    return -np.asarray(v, dtype=np.float64)


def _const(v) -> np.ndarray:
    return v.data if isinstance(v, Tensor) else np.asarray(v, dtype=np.float64)


def make_node(data: np.ndarray, backward: Callable[[np.ndarray], None]) -> Tensor:
    """Create an interior node; records it only if a tape is active."""
    out = Tensor(data)
    tape = _active_tape()
    if tape is not None:
        out._backward = backward
        tape.record(out)
    return out


def _unbroadcast(grad: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    """Sum an upstream gradient down to the shape it was broadcast from."""
    if grad.shape == shape:
        return grad
    extra = grad.ndim - len(shape)
    if extra:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, s in enumerate(shape) if s == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad


# -- primitives -------------------------------------------------------

def add(a, b) -> Tensor:
    at, bt = isinstance(a, Tensor), isinstance(b, Tensor)
    data = _const(a) + _const(b)

    def backward(g):
        if at:
            a.accumulate(_unbroadcast(g, a.data.shape))
        if bt:
            b.accumulate(_unbroadcast(g, b.data.shape))

    return make_node(data, backward)


def mul(a, b) -> Tensor:
    at, bt = isinstance(a, Tensor), isinstance(b, Tensor)
    av, bv = _const(a), _const(b)
    data = av * bv

    def backward(g):
        if at:
            a.accumulate(_unbroadcast(g * bv, a.data.shape))
        if bt:
            b.accumulate(_unbroadcast(g * av, b.data.shape))

    return make_node(data, backward)


def power(a: Tensor, exponent) -> Tensor:
    p = float(exponent)
    av = a.data
    data = av ** p

    def backward(g):
        a.accumulate(g * p * av ** (p - 1.0))

    return make_node(data, backward)


def exp(a):
    """Elementwise exponential; accepts a Tensor or a plain array."""
    if not isinstance(a, Tensor):
        return np.exp(a)
    data = np.exp(a.data)

    def backward(g):
        a.accumulate(g * data)

    return make_node(data, backward)


def log(a):
    if not isinstance(a, Tensor):
        return np.log(a)
    av = a.data
    data = np.log(av)

    def backward(g):
        a.accumulate(g / av)

    return make_node(data, backward)


def relu(a):
    """max(0, x) elementwise; the subgradient at exactly zero is zero."""
    if not isinstance(a, Tensor):
        return np.maximum(a, 0.0)
    av = a.data
    data = np.maximum(av, 0.0)

    def backward(g):
        a.accumulate(g * (av > 0.0))

    return make_node(data, backward)


def matmul(a, b) -> Tensor:
    at, bt = isinstance(a, Tensor), isinstance(b, Tensor)
    av, bv = _const(a), _const(b)
    data = av @ bv

    def backward(g):
        if at:
            a.accumulate(g @ bv.T)
        if bt:
            b.accumulate(av.T @ g)

    return make_node(data, backward)


def tsum(a: Tensor, axis=None, keepdims=False) -> Tensor:
    av = a.data
    data = av.sum(axis=axis, keepdims=keepdims)

    def backward(g):
        if axis is not None and not keepdims:
            g = np.expand_dims(g, axis)
        a.accumulate(np.broadcast_to(g, av.shape).copy())

    return make_node(data, backward)


def tmean(a: Tensor) -> Tensor:
    av = a.data
    data = np.asarray(av.mean())

    def backward(g):
        a.accumulate(np.broadcast_to(g / av.size, av.shape).copy())

    return make_node(data, backward)


def reshape(a: Tensor, shape) -> Tensor:
    av = a.data
    data = av.reshape(shape)

    def backward(g):
        a.accumulate(g.reshape(av.shape))

    return make_node(data, backward)


def sum_rows(a):
    """Sum over the last axis keeping it, i.e. (batch, k) -> (batch, 1)."""
    if not isinstance(a, Tensor):
        return np.asarray(a).sum(axis=-1, keepdims=True)
    return tsum(a, axis=-1, keepdims=True)


def backward_gradients(tape: Tape, loss: Tensor, params: Sequence[Tensor]) -> list[np.ndarray]:
    """Reverse accumulation of d(loss)/d(p) for every parameter.

    Clears old parameter gradients first, runs the tape backward, and
    returns one gradient array per parameter (exact zeros for parameters
    that were never on a path to the loss).  The gradients are also left
    on ``p.grad`` for the optimizer.
    """
    for p in params:
        p.grad = None
    tape.backward(loss)
    grads = []
    for p in params:
        if p.grad is None:
            p.grad = np.zeros_like(p.data)
        grads.append(p.grad)
    return grads
