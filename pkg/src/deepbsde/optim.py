"""ADAM optimizer with the usual bias correction."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .autodiff import Tensor
from .errors import NonFiniteGradientError


@dataclass
class AdamState:
    """First/second moment estimates, one pair per parameter, plus the step counter."""

    first_moment: list[np.ndarray]
    second_moment: list[np.ndarray]
    step_count: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def for_params(cls, params: Sequence[Tensor], beta1: float = 0.9,
                   beta2: float = 0.999, eps: float = 1e-8) -> "AdamState":
        return cls(
            first_moment=[np.zeros_like(p.data) for p in params],
            second_moment=[np.zeros_like(p.data) for p in params],
            beta1=beta1, beta2=beta2, eps=eps,
        )


def adam_step(params: Sequence[Tensor], state: AdamState, lr: float) -> None:
    """Apply one in-place ADAM update using the gradients on ``p.grad``.

    Parameters with ``grad is None`` are treated as having zero gradient
    (their moments decay, the values stay put).
    """
    if lr <= 0:
        raise ValueError(f"learning rate must be positive, got {lr}")
    if len(params) != len(state.first_moment):
        raise ValueError(
            f"optimizer state holds {len(state.first_moment)} moments for {len(params)} parameters"
        )
    t = state.step_count + 1
    b1, b2 = state.beta1, state.beta2
    c1 = 1.0 - b1 ** t
    c2 = 1.0 - b2 ** t
    for i, p in enumerate(params):
        g = p.grad
        if g is None:
            g = 0.0
        elif not np.all(np.isfinite(g)):
            raise NonFiniteGradientError(
                f"non-finite gradient for parameter {p.name or i} at optimizer step {t}"
            )
        m = state.first_moment[i]
        v = state.second_moment[i]
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * np.square(g)
        p.data -= lr * (m / c1) / (np.sqrt(v / c2) + state.eps)
    state.step_count = t
