"""First-order linear-chain CRF in log space.

A sentence's score lattice holds per-position emission scores S [n,k],
transition scores T [k,k] and boundary scores start/end [k]. The score of a
label sequence y is start[y_0] + sum_i S[i,y_i] + sum_i T[y_{i-1},y_i] +
end[y_{n-1}]. The forward algorithm yields log Z, forward-backward the
marginals for the NLL gradient, and Viterbi the argmax sequence, optionally
restricted to structurally valid BIES transitions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .labels import LabelSpace
from .nnops import logsumexp

NEG_INF = -np.inf


@dataclass
class ScoreLattice:
    s: np.ndarray             # [n, k] emission scores
    t: np.ndarray             # [k, k] transition scores
    start: np.ndarray         # [k]
    end: np.ndarray           # [k]
    mask: np.ndarray | None = field(default=None)  # [n] bool, None = all valid

    def __post_init__(self):
        n, k = self.s.shape
        if n < 1 or k < 1:
            raise ValueError("lattice needs n >= 1, k >= 1")
        if self.t.shape != (k, k) or self.start.shape != (k,) or self.end.shape != (k,):
            raise ValueError("inconsistent lattice shapes")
        if self.mask is not None:
            self.s = self.s[self.mask]
            self.mask = None
            if self.s.shape[0] < 1:
                raise ValueError("lattice fully masked")

    @property
    def n(self) -> int:
        return self.s.shape[0]

    @property
    def k(self) -> int:
        return self.s.shape[1]


def sequence_score(lat: ScoreLattice, labels: list[int]) -> float:
    score = lat.start[labels[0]] + lat.end[labels[-1]] + lat.s[np.arange(lat.n), labels].sum()
    for a, b in zip(labels, labels[1:]):
        score += lat.t[a, b]
    return float(score)


def log_partition(lat: ScoreLattice) -> float:
    """log sum over all k^n label sequences of exp(sequence score)."""
    alpha = lat.start + lat.s[0]
    for i in range(1, lat.n):
        alpha = logsumexp(alpha[:, None] + lat.t, axis=0) + lat.s[i]
    return float(logsumexp(alpha + lat.end, axis=0))


def _forward_backward(lat: ScoreLattice):
    n, k = lat.n, lat.k
    alpha = np.empty((n, k))
    alpha[0] = lat.start + lat.s[0]
    for i in range(1, n):
        alpha[i] = logsumexp(alpha[i - 1][:, None] + lat.t, axis=0) + lat.s[i]
    beta = np.empty((n, k))
    beta[n - 1] = lat.end
    for i in range(n - 2, -1, -1):
        beta[i] = logsumexp(lat.t + (lat.s[i + 1] + beta[i + 1])[None, :], axis=1)
    log_z = float(logsumexp(alpha[n - 1] + lat.end, axis=0))
    return alpha, beta, log_z


def nll_and_grad(lat: ScoreLattice, gold: list[int]):
    """Negative log-likelihood of the gold sequence and its gradients.

    Returns (loss, dS, dT, dstart, dend) where the gradients are expected
    label counts minus gold counts (unary and pairwise marginals from
    forward-backward).
    """
    n, k = lat.n, lat.k
    if len(gold) != n:
        raise ValueError("gold length mismatch")
    gold = list(gold)
    if any(not 0 <= g < k for g in gold):
        raise ValueError("gold label index out of range")
    alpha, beta, log_z = _forward_backward(lat)
    loss = log_z - sequence_score(lat, gold)

    ds = np.exp(alpha + beta - log_z)
    ds[np.arange(n), gold] -= 1.0
    dt = np.zeros((k, k))
    for i in range(n - 1):
        pair = alpha[i][:, None] + lat.t + (lat.s[i + 1] + beta[i + 1])[None, :] - log_z
        dt += np.exp(pair)
        dt[gold[i], gold[i + 1]] -= 1.0
    dstart = np.exp(lat.start + lat.s[0] + beta[0] - log_z)
    dstart[gold[0]] -= 1.0
    dend = np.exp(alpha[n - 1] + lat.end - log_z)
    dend[gold[-1]] -= 1.0
    return float(loss), ds, dt, dstart, dend


def viterbi(lat: ScoreLattice, space: LabelSpace | None = None) -> list[int]:
    """Highest-scoring label sequence; ties break toward lower label indices.

    With a label space, transitions that would break BIES well-formedness
    score -inf, as do invalid start/end labels, so the output always decodes
    to words without repair. Without one, the raw lattice is decoded.
    """
    n, k = lat.n, lat.k
    t = lat.t
    start, end = lat.start, lat.end
    if space is not None:
        if space.k != k:
            raise ValueError(f"label space size {space.k} != lattice k {k}")
        trans_ok, start_ok, end_ok = space.transition_masks()
        t = np.where(trans_ok, t, NEG_INF)
        start = np.where(start_ok, start, NEG_INF)
        end = np.where(end_ok, end, NEG_INF)
    delta = start + lat.s[0]
    back = np.empty((n, k), dtype=np.int64)
    for i in range(1, n):
        cand = delta[:, None] + t
        back[i] = np.argmax(cand, axis=0)  # first max = lowest index
        delta = cand[back[i], np.arange(k)] + lat.s[i]
    delta = delta + end
    best = int(np.argmax(delta))
    path = [best]
    for i in range(n - 1, 0, -1):
        best = int(back[i, best])
        path.append(best)
    path.reverse()
    return path


def average_lattices(lattices: list[ScoreLattice]) -> ScoreLattice:
    """Ensemble lattice: element-wise mean of S, T, start and end."""
    if not lattices:
        raise ValueError("no lattices to average")
    first = lattices[0]
    for lat in lattices[1:]:
        if lat.s.shape != first.s.shape or lat.k != first.k:
            raise ValueError("mismatched lattice shapes in ensemble")
    m = len(lattices)
    return ScoreLattice(
        s=sum(lat.s for lat in lattices) / m,
        t=sum(lat.t for lat in lattices) / m,
        start=sum(lat.start for lat in lattices) / m,
        end=sum(lat.end for lat in lattices) / m,
    )


def emissions(h: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Linear projection of encoder outputs to per-label scores: H @ W + b."""
    if h.shape[-1] != w.shape[0]:
        raise ValueError(f"shape mismatch: H {h.shape} vs W {w.shape}")
    return h @ w + b
