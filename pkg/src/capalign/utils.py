"""Shared helpers: stable seed derivation and autograd graph introspection."""

from __future__ import annotations

import hashlib

import torch


def derive_seed(*parts) -> int:
    """Derive a 63-bit seed from a tuple of ints/strings.

    Stable across processes and Python versions (unlike builtin hash), so every
    stochastic choice in the pipeline can be a pure function of (run seed, tag,
    step index).
    """
    key = "\x1f".join(str(p) for p in parts)
    digest = hashlib.blake2b(key.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little") & 0x7FFF_FFFF_FFFF_FFFF


def make_generator(*parts) -> torch.Generator:
    gen = torch.Generator()
    gen.manual_seed(derive_seed(*parts))
    return gen


def graph_node_count(tensor: torch.Tensor) -> int:
    """Number of distinct autograd nodes reachable from ``tensor``.

    Proxy for backward-pass memory: the recorded computation graph behind a
    sampled image should scale with the number of gradient-enabled steps, not
    with the total step count.
    """
    if tensor.grad_fn is None:
        return 0
    seen = set()
    stack = [tensor.grad_fn]
    while stack:
        node = stack.pop()
        if node is None or id(node) in seen:
            continue
        seen.add(id(node))
        for nxt, _ in node.next_functions:
            if nxt is not None and id(nxt) not in seen:
                stack.append(nxt)
    return len(seen)
