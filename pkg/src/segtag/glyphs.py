"""Glyph bitmaps and the CNN that turns them into orthographic features.

Bitmaps are a preprocessing input (30x30 grayscale in [0,1], one record per
character), not rendered in-process: font rendering is platform-dependent,
so the file format below keeps runs reproducible. The CNN is
conv(5x5, 32, same padding, ReLU) -> maxpool(2x2, ceil) twice, then a dense
layer to 100 units with ReLU; dropout on the dense output at train time.
Shapes: 30x30x1 -> 30x30x32 -> 15x15x32 -> 15x15x32 -> 8x8x32 -> 2048 -> 100.

Bitmap file format: one record per line, ``U+XXXX`` followed by 900
space-separated floats in [0,1], row-major.
"""

from __future__ import annotations

import numpy as np

from .nnops import dropout_mask, relu

BITMAP_SIZE = 30
KERNEL = 5
FILTERS = 32
POOL = 2
FC_SIZE = 100
# 30 -> 15 -> 8 under ceil-division pooling
FLAT_SIZE = 8 * 8 * FILTERS

GLYPH_PARAM_SHAPES = {
    "glyph_conv1_w": (KERNEL * KERNEL * 1, FILTERS),
    "glyph_conv1_b": (FILTERS,),
    "glyph_conv2_w": (KERNEL * KERNEL * FILTERS, FILTERS),
    "glyph_conv2_b": (FILTERS,),
    "glyph_fc_w": (FLAT_SIZE, FC_SIZE),
    "glyph_fc_b": (FC_SIZE,),
}


def _im2col(x: np.ndarray) -> np.ndarray:
    """[B,H,W,C] -> [B,H,W,K*K*C] patches for same-padded 5x5 convolution."""
    b, h, w, c = x.shape
    pad = KERNEL // 2
    xp = np.pad(x, ((0, 0), (pad, pad), (pad, pad), (0, 0)))
    cols = np.empty((b, h, w, KERNEL * KERNEL, c), dtype=x.dtype)
    for dy in range(KERNEL):
        for dx in range(KERNEL):
            cols[:, :, :, dy * KERNEL + dx, :] = xp[:, dy:dy + h, dx:dx + w, :]
    return cols.reshape(b, h, w, KERNEL * KERNEL * c)


def _col2im(dcols: np.ndarray, h: int, w: int, c: int) -> np.ndarray:
    """Adjoint of _im2col: scatter-add patch gradients back to the image."""
    b = dcols.shape[0]
    pad = KERNEL // 2
    dcols = dcols.reshape(b, h, w, KERNEL * KERNEL, c)
    dxp = np.zeros((b, h + 2 * pad, w + 2 * pad, c), dtype=dcols.dtype)
    for dy in range(KERNEL):
        for dx in range(KERNEL):
            dxp[:, dy:dy + h, dx:dx + w, :] += dcols[:, :, :, dy * KERNEL + dx, :]
    return dxp[:, pad:pad + h, pad:pad + w, :]


def _conv_relu_forward(x, w, b):
    cols = _im2col(x)
    bsz, h, wd, _ = x.shape
    pre = cols.reshape(-1, cols.shape[-1]) @ w + b
    out = relu(pre).reshape(bsz, h, wd, w.shape[1])
    return out, (cols, pre)


def _conv_relu_backward(dout, cache, w, x_channels):
    cols, pre = cache
    bsz, h, wd, cout = dout.shape
    dpre = dout.reshape(-1, cout) * (pre > 0)
    dw = cols.reshape(-1, cols.shape[-1]).T @ dpre
    db = dpre.sum(axis=0)
    dcols = (dpre @ w.T).reshape(bsz, h, wd, -1)
    dx = _col2im(dcols, h, wd, x_channels)
    return dx, dw, db


def _maxpool_forward(x):
    """2x2/stride-2 max pooling with ceil division on odd extents."""
    b, h, w, c = x.shape
    h2, w2 = h + h % 2, w + w % 2
    xp = np.full((b, h2, w2, c), -np.inf, dtype=x.dtype)
    xp[:, :h, :w, :] = x
    win = xp.reshape(b, h2 // 2, 2, w2 // 2, 2, c)
    win = win.transpose(0, 1, 3, 2, 4, 5).reshape(b, h2 // 2, w2 // 2, 4, c)
    idx = np.argmax(win, axis=3)
    out = np.take_along_axis(win, idx[:, :, :, None, :], axis=3)[:, :, :, 0, :]
    return out, (idx, (b, h, w, c))


def _maxpool_backward(dout, cache):
    idx, (b, h, w, c) = cache
    h2, w2 = h + h % 2, w + w % 2
    dwin = np.zeros((b, h2 // 2, w2 // 2, 4, c), dtype=dout.dtype)
    np.put_along_axis(dwin, idx[:, :, :, None, :], dout[:, :, :, None, :], axis=3)
    dxp = dwin.reshape(b, h2 // 2, w2 // 2, 2, 2, c).transpose(0, 1, 3, 2, 4, 5)
    dxp = dxp.reshape(b, h2, w2, c)
    return dxp[:, :h, :w, :]


def glyph_forward_batch(bitmaps: np.ndarray, params: dict, training: bool,
                        rate: float, rng: np.random.Generator | None):
    """CNN features for a stack of bitmaps [B,30,30] -> ([B,100], cache)."""
    if bitmaps.ndim != 3 or bitmaps.shape[1:] != (BITMAP_SIZE, BITMAP_SIZE):
        raise ValueError(f"expected [B,{BITMAP_SIZE},{BITMAP_SIZE}] bitmaps, got {bitmaps.shape}")
    x = bitmaps[..., None].astype(np.float64)
    a1, c1 = _conv_relu_forward(x, params["glyph_conv1_w"], params["glyph_conv1_b"])
    p1, m1 = _maxpool_forward(a1)
    a2, c2 = _conv_relu_forward(p1, params["glyph_conv2_w"], params["glyph_conv2_b"])
    p2, m2 = _maxpool_forward(a2)
    flat = p2.reshape(p2.shape[0], -1)
    pre = flat @ params["glyph_fc_w"] + params["glyph_fc_b"]
    out = relu(pre)
    drop = None
    if training and rate > 0.0:
        drop = dropout_mask(out.shape, rate, rng)
        out = out * drop
    cache = (c1, m1, c2, m2, flat, pre, drop, p2.shape)
    return out, cache


def glyph_backward_batch(dout: np.ndarray, cache, params: dict) -> dict:
    """Parameter gradients for glyph_forward_batch (inputs are not trained)."""
    c1, m1, c2, m2, flat, pre, drop, p2_shape = cache
    if drop is not None:
        dout = dout * drop
    dpre = dout * (pre > 0)
    grads = {
        "glyph_fc_w": flat.T @ dpre,
        "glyph_fc_b": dpre.sum(axis=0),
    }
    dflat = dpre @ params["glyph_fc_w"].T
    dp2 = dflat.reshape(p2_shape)
    da2 = _maxpool_backward(dp2, m2)
    dp1, grads["glyph_conv2_w"], grads["glyph_conv2_b"] = _conv_relu_backward(
        da2, c2, params["glyph_conv2_w"], FILTERS)
    da1 = _maxpool_backward(dp1, m1)
    _, grads["glyph_conv1_w"], grads["glyph_conv1_b"] = _conv_relu_backward(
        da1, c1, params["glyph_conv1_w"], 1)
    return grads


def glyph_forward(bitmap: np.ndarray, params: dict, training: bool = False,
                  rate: float = 0.5, rng: np.random.Generator | None = None) -> np.ndarray:
    """Feature vector (dim 100) for a single 30x30 bitmap."""
    bitmap = np.asarray(bitmap, dtype=np.float64)
    if bitmap.shape != (BITMAP_SIZE, BITMAP_SIZE):
        raise ValueError(f"expected {BITMAP_SIZE}x{BITMAP_SIZE} bitmap, got {bitmap.shape}")
    out, _ = glyph_forward_batch(bitmap[None], params, training, rate, rng)
    return out[0]


class GlyphSet:
    """codepoint -> bitmap store; characters without a bitmap get zeros."""

    def __init__(self, bitmaps: dict[int, np.ndarray] | None = None):
        self.bitmaps = bitmaps or {}

    def get(self, ch: str) -> np.ndarray:
        return self.bitmaps.get(ord(ch), _ZERO_BITMAP)

    def __len__(self):
        return len(self.bitmaps)


_ZERO_BITMAP = np.zeros((BITMAP_SIZE, BITMAP_SIZE))


def load_glyphs(path: str) -> GlyphSet:
    bitmaps = {}
    n_px = BITMAP_SIZE * BITMAP_SIZE
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line:
                continue
            fields = line.split()
            try:
                cp = int(fields[0][2:], 16)
                values = np.array([float(v) for v in fields[1:]])
            except (ValueError, IndexError) as exc:
                raise ValueError(f"bad glyph record at line {lineno}") from exc
            if values.size != n_px:
                raise ValueError(
                    f"glyph record at line {lineno} has {values.size} pixels, expected {n_px}")
            if values.min() < 0.0 or values.max() > 1.0:
                raise ValueError(f"glyph pixels outside [0,1] at line {lineno}")
            bitmaps[cp] = values.reshape(BITMAP_SIZE, BITMAP_SIZE)
    return GlyphSet(bitmaps)


def save_glyphs(path: str, glyphs: GlyphSet) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for cp in sorted(glyphs.bitmaps):
            px = " ".join(repr(v) for v in glyphs.bitmaps[cp].ravel())
            f.write(f"U+{cp:04X} {px}\n")


def synthetic_glyphs(chars: str) -> GlyphSet:
    """Deterministic pseudo-random bitmaps keyed by codepoint (for tests)."""
    bitmaps = {}
    for ch in set(chars):
        rng = np.random.default_rng(ord(ch))
        bitmaps[ord(ch)] = rng.random((BITMAP_SIZE, BITMAP_SIZE))
    return GlyphSet(bitmaps)
