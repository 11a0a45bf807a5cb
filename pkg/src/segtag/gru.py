"""Bidirectional GRU encoder with hand-written backpropagation.

Standard GRU cell: z = sigma(W_z x + U_z h + b_z), r = sigma(W_r x + U_r h + b_r),
c = tanh(W_c x + U_c (r*h) + b_c), h' = (1-z)*h + z*c. Both directions start
from a zero state. Inverted dropout is applied to each direction's outputs at
train time, then the directions are concatenated per position.

Weights are packed for fewer matmuls: w [D,3H] and b [3H] hold the z/r/c input
projections, u [H,2H] the z/r recurrent projections, uc [H,H] the candidate
recurrent projection. The input projection X @ w is hoisted out of the time
loop, so each step costs two recurrent matmuls.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .nnops import dropout_mask, sigmoid

FWD = "gru_f"
BWD = "gru_b"


@dataclass
class GruParams:
    """View over one direction's weight arrays (no copies)."""

    w: np.ndarray   # [D, 3H]
    u: np.ndarray   # [H, 2H]
    uc: np.ndarray  # [H, H]
    b: np.ndarray   # [3H]

    @property
    def state_size(self) -> int:
        return self.uc.shape[0]

    @classmethod
    def from_dict(cls, params: dict, prefix: str) -> "GruParams":
        return cls(params[f"{prefix}_w"], params[f"{prefix}_u"],
                   params[f"{prefix}_uc"], params[f"{prefix}_b"])

    @staticmethod
    def shapes(d_in: int, h: int) -> dict[str, tuple]:
        return {"w": (d_in, 3 * h), "u": (h, 2 * h), "uc": (h, h), "b": (3 * h,)}


def gru_step(x: np.ndarray, h_prev: np.ndarray, p: GruParams) -> np.ndarray:
    """One GRU cell update for a single position."""
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(h_prev))):
        raise ValueError("non-finite GRU input")
    h = p.state_size
    pre = x @ p.w + p.b
    a = h_prev @ p.u
    z = sigmoid(pre[:h] + a[:h])
    r = sigmoid(pre[h:2 * h] + a[h:])
    c = np.tanh(pre[2 * h:] + (r * h_prev) @ p.uc)
    return (1.0 - z) * h_prev + z * c


def gru_run_batch(x: np.ndarray, mask: np.ndarray, p: GruParams, reverse: bool):
    """Run one direction over a padded batch.

    x: [B,L,D]; mask: [B,L] with 1 at real positions. At masked positions the
    state is carried through unchanged, so the right-to-left pass still starts
    from a zero state at each sentence's last real character.
    Returns (hidden [B,L,H], cache).
    """
    bsz, length, _ = x.shape
    h_size = p.state_size
    xw = x.reshape(bsz * length, -1) @ p.w
    xw = (xw + p.b).reshape(bsz, length, 3 * h_size)
    hs = np.zeros((bsz, length, h_size))
    zs = np.empty_like(hs)
    rs = np.empty_like(hs)
    cs = np.empty_like(hs)
    hprevs = np.empty_like(hs)
    h = np.zeros((bsz, h_size))
    order = range(length - 1, -1, -1) if reverse else range(length)
    for t in order:
        a = h @ p.u
        z = sigmoid(xw[:, t, :h_size] + a[:, :h_size])
        r = sigmoid(xw[:, t, h_size:2 * h_size] + a[:, h_size:])
        c = np.tanh(xw[:, t, 2 * h_size:] + (r * h) @ p.uc)
        h_new = (1.0 - z) * h + z * c
        m = mask[:, t, None]
        hprevs[:, t] = h
        zs[:, t], rs[:, t], cs[:, t] = z, r, c
        h = m * h_new + (1.0 - m) * h
        hs[:, t] = h
    cache = (x, mask, zs, rs, cs, hprevs, reverse)
    return hs, cache


def gru_backward_batch(dh_out: np.ndarray, cache, p: GruParams):
    """Gradients for gru_run_batch: returns (dx, {w,u,uc,b} grads)."""
    x, mask, zs, rs, cs, hprevs, reverse = cache
    bsz, length, h_size = dh_out.shape
    dxw = np.zeros((bsz, length, 3 * h_size))
    du = np.zeros_like(p.u)
    duc = np.zeros_like(p.uc)
    dh = np.zeros((bsz, h_size))
    order = range(length) if reverse else range(length - 1, -1, -1)
    for t in order:
        dh_total = dh + dh_out[:, t]
        m = mask[:, t, None]
        dh_new = dh_total * m
        dh_prev = dh_total * (1.0 - m)
        z, r, c, hp = zs[:, t], rs[:, t], cs[:, t], hprevs[:, t]
        dz = dh_new * (c - hp)
        dc = dh_new * z
        dh_prev += dh_new * (1.0 - z)
        dpc = dc * (1.0 - c * c)
        drh = dpc @ p.uc.T
        duc += (r * hp).T @ dpc
        dh_prev += drh * r
        dr = drh * hp
        dpz = dz * z * (1.0 - z)
        dpr = dr * r * (1.0 - r)
        da = np.concatenate([dpz, dpr], axis=1)
        dh_prev += da @ p.u.T
        du += hp.T @ da
        dxw[:, t, :h_size] = dpz
        dxw[:, t, h_size:2 * h_size] = dpr
        dxw[:, t, 2 * h_size:] = dpc
        dh = dh_prev
    dxw2 = dxw.reshape(bsz * length, -1)
    grads = {
        "w": x.reshape(bsz * length, -1).T @ dxw2,
        "u": du,
        "uc": duc,
        "b": dxw2.sum(axis=0),
    }
    dx = (dxw2 @ p.w.T).reshape(x.shape)
    return dx, grads


def bigru_forward_batch(x: np.ndarray, mask: np.ndarray, fwd: GruParams,
                        bwd: GruParams, dropout: float, training: bool,
                        rng: np.random.Generator | None):
    """Padded-batch BiGRU: returns (H [B,L,2h], cache).

    Rows at masked positions are zeroed; dropout (inverted) is applied per
    direction before concatenation when training.
    """
    h_f, cache_f = gru_run_batch(x, mask, fwd, reverse=False)
    h_b, cache_b = gru_run_batch(x, mask, bwd, reverse=True)
    drop_f = drop_b = None
    if training and dropout > 0.0:
        drop_f = dropout_mask(h_f.shape, dropout, rng)
        drop_b = dropout_mask(h_b.shape, dropout, rng)
        h_f = h_f * drop_f
        h_b = h_b * drop_b
    out = np.concatenate([h_f, h_b], axis=2) * mask[:, :, None]
    return out, (cache_f, cache_b, drop_f, drop_b, mask)


def bigru_backward_batch(dout: np.ndarray, cache, fwd: GruParams, bwd: GruParams):
    """Returns (dx, grads) with grads keyed gru_f_* / gru_b_*."""
    cache_f, cache_b, drop_f, drop_b, mask = cache
    h_size = fwd.state_size
    dout = dout * mask[:, :, None]
    dh_f = dout[:, :, :h_size]
    dh_b = dout[:, :, h_size:]
    if drop_f is not None:
        dh_f = dh_f * drop_f
        dh_b = dh_b * drop_b
    dx_f, gf = gru_backward_batch(dh_f, cache_f, fwd)
    dx_b, gb = gru_backward_batch(dh_b, cache_b, bwd)
    grads = {f"{FWD}_{k}": v for k, v in gf.items()}
    grads.update({f"{BWD}_{k}": v for k, v in gb.items()})
    return dx_f + dx_b, grads


def bigru_forward(x: np.ndarray, fwd: GruParams, bwd: GruParams,
                  dropout: float = 0.0, training: bool = False,
                  rng: np.random.Generator | None = None) -> np.ndarray:
    """Single-sentence encoder: [n, D] -> [n, 2h]."""
    if x.ndim != 2 or x.shape[0] == 0:
        raise ValueError("input must be a non-empty [n, d_in] matrix")
    mask = np.ones((1, x.shape[0]))
    out, _ = bigru_forward_batch(x[None], mask, fwd, bwd, dropout, training, rng)
    return out[0]
