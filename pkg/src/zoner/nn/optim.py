"""Root-mean-square gradient scaling optimizer."""

import numpy as np

from ..errors import NumericError


class RmsProp:
    def __init__(self, params, lr=0.001, rho=0.9, epsilon=1e-7):
        self.params = list(params)
        self.lr = lr
        self.rho = rho
        self.epsilon = epsilon
        self.state = [np.zeros_like(p.value) for p in self.params]

    def step(self):
        for p, s in zip(self.params, self.state):
            g = p.grad
            if not np.isfinite(g).all():
                raise NumericError(f"non-finite gradient for parameter {p.name}")
            s *= self.rho
            s += (1.0 - self.rho) * g * g
            p.value -= self.lr * g / (np.sqrt(s) + self.epsilon)

    def zero_grads(self):
        for p in self.params:
            p.zero_grad()
