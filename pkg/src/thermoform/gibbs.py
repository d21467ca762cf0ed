"""Gibbs measures of finite-memory potentials as finite-order Markov measures.

A Markov measure of order ``k`` is described by the law ``pi`` of the first
``k`` symbols and by the backward kernel ``trans``: ``trans[v, u]`` is the
probability of prepending a symbol ``s`` to a point whose first ``k`` symbols
are ``u``, where ``v`` is the first ``k`` symbols of ``s.u``.  The mass of a
cylinder ``[w]`` with ``len(w) >= k`` is therefore

    pi(last k symbols of w) * product of the prepending probabilities.

Realizations of the chain are random reverse orbits of the shift.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .sft import FnTable, Word
from .transfer import log_lambda, normalize, stationary_vector, transfer_matrix


@dataclass(frozen=True, eq=False)
class MarkovMeasure:
    m: int
    order: int
    pi: np.ndarray
    trans: np.ndarray

    def __post_init__(self):
        d = self.m**self.order
        pi = np.array(self.pi, dtype=float)
        trans = np.array(self.trans, dtype=float)
        if pi.shape != (d,) or trans.shape != (d, d):
            raise ValueError(f"expected pi of length {d} and a {d}x{d} kernel")
        if np.any(pi < -1e-15) or abs(pi.sum() - 1.0) > 1e-9:
            raise ValueError("pi must be a probability vector")
        if np.any(trans < 0) or np.max(np.abs(trans.sum(axis=0) - 1.0)) > 1e-9:
            raise ValueError("kernel columns must be probability vectors")
        codes = np.arange(d * self.m)
        support = np.zeros((d, d), dtype=bool)
        support[codes // self.m, codes % d] = True
        if np.any(trans[~support] != 0):
            raise ValueError("kernel has mass outside the shift's transitions")
        pi.flags.writeable = False
        trans.flags.writeable = False
        object.__setattr__(self, "pi", pi)
        object.__setattr__(self, "trans", trans)

    @classmethod
    def from_kernel(cls, m: int, trans: np.ndarray) -> "MarkovMeasure":
        """Build the stationary measure of a backward kernel."""
        trans = np.asarray(trans, dtype=float)
        order = int(round(np.log(trans.shape[0]) / np.log(m)))
        return cls(m, order, stationary_vector(trans), trans)

    @property
    def dim(self) -> int:
        return self.pi.shape[0]

    def prepend_probs(self) -> np.ndarray:
        """``p[s, u]``: probability of prepending ``s`` to block ``u``."""
        d = self.dim
        codes = np.arange(self.m * d)
        return self.trans[codes // self.m, codes % d].reshape(self.m, d)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "order": self.order,
            "pi": self.pi.tolist(),
            "trans": self.trans.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MarkovMeasure":
        return cls(int(d["m"]), int(d["order"]), np.asarray(d["pi"]), np.asarray(d["trans"]))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, s: str) -> "MarkovMeasure":
        return cls.from_dict(json.loads(s))


def gibbs_measure(A: FnTable) -> MarkovMeasure:
    """The Gibbs measure of ``A``, read off its normalized potential."""
    N = normalize(A)
    trans = transfer_matrix(N).matrix
    return MarkovMeasure(N.m, N.memory - 1, stationary_vector(trans), trans)


def word_masses(mu: MarkovMeasure, length: int) -> np.ndarray:
    """Masses of all cylinders of the given length, indexed by word code."""
    m, k = mu.m, mu.order
    if length <= k:
        return mu.pi.reshape(m**length, -1).sum(axis=1)
    p = mu.prepend_probs()
    masses = mu.pi
    for ell in range(k, length):
        # leading k symbols of each current word select the prepending column
        lead = np.arange(m**ell) // m ** (ell - k)
        masses = (p[:, lead] * masses[None, :]).reshape(-1)
    return masses


def cylinder_mass(mu: MarkovMeasure, w: Word) -> float:
    if w.m != mu.m:
        raise ValueError("word and measure use different alphabets")
    if w.length == 0:
        return 1.0
    m, k = mu.m, mu.order
    if w.length <= k:
        span = m ** (k - w.length)
        return float(mu.pi[w.code * span : (w.code + 1) * span].sum())
    p = mu.prepend_probs()
    code, ell = w.code, w.length
    mass = mu.pi[code % m**k]
    # walk from the end of the word, prepending one symbol at a time
    for j in range(ell - k - 1, -1, -1):
        suffix = code % m ** (ell - j)
        s, rest = divmod(suffix, m ** (ell - j - 1))
        mass *= p[s, rest // m ** (ell - j - 1 - k)]
    return float(mass)


def integrate(mu: MarkovMeasure, phi: FnTable) -> float:
    if phi.m != mu.m:
        raise ValueError(f"alphabets differ: {phi.m} vs {mu.m}")
    length = max(phi.memory, mu.order)
    return float(word_masses(mu, length) @ phi.lift(length).values)


def center(zeta: FnTable, mu: MarkovMeasure) -> FnTable:
    """``zeta - int zeta dmu``."""
    return zeta - integrate(mu, zeta)


def entropy(mu: MarkovMeasure) -> float:
    """Kolmogorov-Sinai entropy of the Markov measure."""
    p = mu.prepend_probs()
    with np.errstate(divide="ignore", invalid="ignore"):
        plogp = np.where(p > 0, p * np.log(p), 0.0)
    return float(-(plogp * mu.pi[None, :]).sum())


def pressure(B: FnTable) -> float:
    return log_lambda(B)


def p_functional(B: FnTable, mu: MarkovMeasure) -> float:
    """Entropy plus energy, ``h(mu) + int B dmu``."""
    return entropy(mu) + integrate(mu, B)


def legendre_gap(nu: MarkovMeasure, A: FnTable) -> float:
    """``log lam_A - int A dnu - h(nu)``; nonnegative, zero iff ``nu = mu_A``."""
    return log_lambda(A) - integrate(nu, A) - entropy(nu)


def sample_path(mu: MarkovMeasure, length: int, seed: int) -> np.ndarray:
    """Draw the first ``length`` symbols of a ``mu``-typical point.

    The tail block is drawn from ``pi`` and earlier symbols are prepended one
    at a time with the backward kernel.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    rng = np.random.default_rng(seed)
    m, k, d = mu.m, mu.order, mu.dim
    pi = np.clip(mu.pi, 0.0, None)
    u = int(rng.choice(d, p=pi / pi.sum()))
    block = [(u // m ** (k - 1 - j)) % m for j in range(k)]
    if length <= k:
        return np.array(block[:length], dtype=np.int64)
    n_new = length - k
    p = mu.prepend_probs()
    # one uniform per step, read through the kernel column of the current block
    cum = np.cumsum(p, axis=0)
    r = rng.random(n_new)
    choices = [
        bytes(np.minimum(np.searchsorted(cum[:, v], r, side="right"), m - 1).astype(np.uint8))
        for v in range(d)
    ]
    out = bytearray(length)
    out[n_new:] = bytes(block)
    top = m ** (k - 1)
    for i in range(n_new - 1, -1, -1):
        s = choices[u][i]
        out[i] = s
        u = s * top + u // m
    return np.frombuffer(bytes(out), dtype=np.uint8).astype(np.int64)
