"""Finite-difference gradient check for the whole network."""
from __future__ import annotations

import torch

from .data import collate
from .train import batch_nll


def finite_difference_check(model, instances, eps: float = 1e-5) -> dict[str, float]:
    """Relative error between autograd and central differences, per parameter tensor.

    The error of a tensor is ``|g_a - g_n| / max(|g_a| + |g_n|, 1e-12)`` with
    Euclidean norms over all its entries. Run on a float64 model.
    """
    if model.dtype != torch.float64:
        raise ValueError("gradient check needs a float64 model")
    batch = collate(instances)
    model.zero_grad()
    batch_nll(model, batch).backward()
    errors = {}
    with torch.no_grad():
        for name, p in model.named_parameters():
            analytic = p.grad.detach().clone()
            numeric = torch.zeros_like(p)
            flat, num = p.view(-1), numeric.view(-1)
            for i in range(flat.numel()):
                orig = float(flat[i])
                flat[i] = orig + eps
                up = float(batch_nll(model, batch))
                flat[i] = orig - eps
                down = float(batch_nll(model, batch))
                flat[i] = orig
                num[i] = (up - down) / (2 * eps)
            diff = float(torch.linalg.norm(analytic - numeric))
            scale = float(torch.linalg.norm(analytic) + torch.linalg.norm(numeric))
            errors[name] = diff / max(scale, 1e-12)
    return errors
