"""Dense feedforward networks: ReLU on hidden layers, affine output.

The standard sub-network used throughout the solvers has four layers,
``[d, d+10, d+10, out]``; that convention lives with the model builders,
not here.  Weights follow the batch-row orientation ``x @ W + b`` with
``W`` of shape (fan_in, fan_out).
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .autodiff import Tensor, make_node
from .errors import ArchitectureError, ShapeError


class MlpNetwork:
    """A plain multilayer perceptron with identity activation on the last layer."""

    def __init__(self, widths: Sequence[int], weights, biases, name: str = ""):
        widths = [int(w) for w in widths]
        _check_widths(widths)
        if len(weights) != len(widths) - 1 or len(biases) != len(widths) - 1:
            raise ArchitectureError(
                f"{name or 'net'}: expected {len(widths) - 1} weight/bias pairs, "
                f"got {len(weights)}/{len(biases)}"
            )
        self.widths = widths
        self.name = name
        self.weights: list[Tensor] = []
        self.biases: list[Tensor] = []
        for i, (w, b) in enumerate(zip(weights, biases)):
            w = np.asarray(w, dtype=np.float64)
            b = np.asarray(b, dtype=np.float64)
            if w.shape != (widths[i], widths[i + 1]) or b.shape != (widths[i + 1],):
                raise ArchitectureError(
                    f"{name or 'net'}: layer {i} has shape {w.shape}/{b.shape}, "
                    f"expected {(widths[i], widths[i + 1])}/{(widths[i + 1],)}"
                )
            self.weights.append(Tensor(w, name=f"{name}.W{i}" if name else f"W{i}"))
            self.biases.append(Tensor(b, name=f"{name}.b{i}" if name else f"b{i}"))

    @property
    def in_dim(self) -> int:
        return self.widths[0]

    @property
    def out_dim(self) -> int:
        return self.widths[-1]

    @property
    def n_params(self) -> int:
        return sum(w.data.size + b.data.size for w, b in zip(self.weights, self.biases))

    def parameters(self) -> list[Tensor]:
        out = []
        for w, b in zip(self.weights, self.biases):
            out.append(w)
            out.append(b)
        return out

    def forward(self, x: np.ndarray) -> np.ndarray:
        """Pure numpy evaluation; accepts a vector (d,) or a batch (n, d)."""
        x = np.asarray(x, dtype=np.float64)
        single = x.ndim == 1
        h = x[None, :] if single else x
        if h.ndim != 2 or h.shape[1] != self.in_dim:
            raise ShapeError(
                f"{self.name or 'net'}: input shape {x.shape} does not match input width {self.in_dim}"
            )
        last = len(self.weights) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            h = h @ w.data + b.data
            if i < last:
                h = np.maximum(h, 0.0)
        return h[0] if single else h

    def apply(self, x: np.ndarray) -> Tensor:
        """Taped evaluation of a batch (n, d) for training.

        Recorded as one fused node: the backward closure runs the layer
        chain in reverse and accumulates into this network's parameters.
        The input is treated as a constant (trajectories are data).
        """
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.in_dim:
            raise ShapeError(
                f"{self.name or 'net'}: batch shape {x.shape} does not match input width {self.in_dim}"
            )
        weights, biases = self.weights, self.biases
        last = len(weights) - 1
        acts = [x]           # post-activation input of each layer
        pres = []            # pre-activation of each hidden layer
        h = x
        for i, (w, b) in enumerate(zip(weights, biases)):
            z = h @ w.data + b.data
            if i < last:
                pres.append(z)
                h = np.maximum(z, 0.0)
                acts.append(h)
            else:
                h = z

        def backward(g):
            delta = g
            for i in range(last, -1, -1):
                weights[i].accumulate(acts[i].T @ delta)
                biases[i].accumulate(delta.sum(axis=0))
                if i > 0:
                    delta = (delta @ weights[i].data.T) * (pres[i - 1] > 0.0)

        return make_node(h, backward)

    def copy(self) -> "MlpNetwork":
        return MlpNetwork(
            self.widths,
            [w.data.copy() for w in self.weights],
            [b.data.copy() for b in self.biases],
            name=self.name,
        )


def _check_widths(widths):
    if len(widths) < 2:
        raise ArchitectureError(f"need at least input and output widths, got {widths!r}")
    if any(w < 1 for w in widths):
        raise ArchitectureError(f"all layer widths must be >= 1, got {widths!r}")


def mlp_init(widths: Sequence[int], rng: np.random.Generator, name: str = "") -> MlpNetwork:
    """Build a network with every weight and bias i.i.d. uniform on [-1, 1]."""
    widths = [int(w) for w in widths]
    _check_widths(widths)
    weights = [rng.uniform(-1.0, 1.0, size=(widths[i], widths[i + 1])) for i in range(len(widths) - 1)]
    biases = [rng.uniform(-1.0, 1.0, size=(widths[i + 1],)) for i in range(len(widths) - 1)]
    return MlpNetwork(widths, weights, biases, name=name)


def mlp_forward(net: MlpNetwork, x: np.ndarray) -> np.ndarray:
    return net.forward(x)
