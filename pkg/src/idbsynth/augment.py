"""Seeded probabilistic augmentations with annotation transforms.

Canonical op order: noise -> gaussian blur -> motion blur -> color ->
rotate -> scale -> perspective (photometric before resampling so synthetic
noise is never interpolated twice). Every applied op lands in an
AugmentTrace with its exact sampled parameters; replaying a trace on the
original sample reproduces the augmented image bit-exactly.

Images are uint8 RGB throughout; each op computes in float64 and rounds
once (np.rint, half-to-even) with channel clamping. Resampling fills
out-of-frame pixels with white, matching document-scan backgrounds.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import accel
from .compositor import DatasetSample
from .errors import DegenerateBox
from .seeding import STREAM_AUGMENT, STREAM_NOISE, derive

# Hard caps from the policy contract; defaults may narrow but never widen.
BOUNDS = {
    "noise_sigma": (0.0, 25.0),
    "gauss_radius": (0.5, 2.0),
    "motion_length": (3, 15),
    "motion_angle": (0.0, 180.0),
    "color_delta": (-0.3, 0.3),
    "hue_deg": (-18.0, 18.0),
    "rotate_deg": (-15.0, 15.0),
    "scale_factor": (0.85, 1.15),
    "perspective_frac": (0.0, 0.05),
}


@dataclass(frozen=True)
class AugmentPolicy:
    noise_prob: float = 0.5
    noise_sigma: tuple[float, float] = (2.0, 25.0)
    gauss_blur_prob: float = 0.30
    gauss_radius: tuple[float, float] = (0.5, 1.3)
    motion_blur_prob: float = 0.10
    motion_length: tuple[int, int] = (3, 7)
    motion_angle: tuple[float, float] = (0.0, 180.0)
    color_prob: float = 0.6
    brightness: tuple[float, float] = (-0.3, 0.3)
    contrast: tuple[float, float] = (-0.3, 0.3)
    saturation: tuple[float, float] = (-0.3, 0.3)
    hue: tuple[float, float] = (-18.0, 18.0)
    rotate_prob: float = 0.25
    rotate_deg: tuple[float, float] = (-15.0, 15.0)
    scale_prob: float = 0.25
    scale_factor: tuple[float, float] = (0.85, 1.15)
    perspective_prob: float = 0.15
    perspective_frac: float = 0.03

    def __post_init__(self):
        def check(rng, bound, label):
            lo, hi = bound
            if not (lo <= rng[0] <= rng[1] <= hi):
                raise ValueError(f"{label} range {rng} outside bounds {bound}")
        for name in ("noise_prob", "gauss_blur_prob", "motion_blur_prob",
                     "color_prob", "rotate_prob", "scale_prob", "perspective_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name}={p} outside [0, 1]")
        check(self.noise_sigma, BOUNDS["noise_sigma"], "noise_sigma")
        check(self.gauss_radius, BOUNDS["gauss_radius"], "gauss_radius")
        check(self.motion_length, BOUNDS["motion_length"], "motion_length")
        check(self.motion_angle, BOUNDS["motion_angle"], "motion_angle")
        for name in ("brightness", "contrast", "saturation"):
            check(getattr(self, name), BOUNDS["color_delta"], name)
        check(self.hue, BOUNDS["hue_deg"], "hue")
        check(self.rotate_deg, BOUNDS["rotate_deg"], "rotate_deg")
        check(self.scale_factor, BOUNDS["scale_factor"], "scale_factor")
        if not 0.0 <= self.perspective_frac <= BOUNDS["perspective_frac"][1]:
            raise ValueError(f"perspective_frac {self.perspective_frac} > 5%")

    @classmethod
    def from_json(cls, path: str | Path) -> "AugmentPolicy":
        data = json.loads(Path(path).read_text())
        kwargs = {}
        for key, value in data.items():
            kwargs[key] = tuple(value) if isinstance(value, list) else value
        return cls(**kwargs)

    def to_json(self, path: str | Path) -> None:
        data = {k: (list(v) if isinstance(v, tuple) else v)
                for k, v in self.__dict__.items()}
        Path(path).write_text(json.dumps(data, indent=2) + "\n")


AugmentTrace = list  # of (op_name, params_dict), JSON-serializable


def _finish(img: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(img), 0, 255).astype(np.uint8)


def add_gaussian_noise(image: np.ndarray, sigma: float, seed: int) -> np.ndarray:
    """Per-pixel i.i.d. normal noise, clamped; deterministic per seed."""
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    if sigma == 0:
        return image.copy()
    rng = np.random.Generator(np.random.PCG64(seed))
    noise = rng.normal(0.0, sigma, size=image.shape)
    return _finish(image.astype(np.float64) + noise)


def _gaussian_kernel(radius: float) -> np.ndarray:
    half = math.ceil(3.0 * radius)
    xs = np.arange(-half, half + 1, dtype=np.float64)
    k = np.exp(-(xs ** 2) / (2.0 * radius * radius))
    return k / k.sum()


def gaussian_blur(image: np.ndarray, radius: float) -> np.ndarray:
    """Separable Gaussian, kernel truncated at 3 sigma."""
    if radius <= 0:
        return image.copy()
    kernel = _gaussian_kernel(radius)
    buf = image.astype(np.float64)
    buf = accel.correlate1d_sym(buf, kernel, 0)
    buf = accel.correlate1d_sym(buf, kernel, 1)
    return _finish(buf)


def _motion_kernel(length: int, angle_deg: float) -> np.ndarray:
    kernel = np.zeros((length, length), dtype=np.float64)
    theta = math.radians(angle_deg)
    dx, dy = math.cos(theta), -math.sin(theta)
    c = (length - 1) / 2.0
    for t in range(length):
        offset = t - c
        x = int(round(c + offset * dx))
        y = int(round(c + offset * dy))
        kernel[y, x] = 1.0
    return kernel / kernel.sum()


def motion_blur(image: np.ndarray, length: int, angle_deg: float) -> np.ndarray:
    """Unit-line kernel at the given angle (0 = horizontal)."""
    if length < 1:
        raise ValueError("length must be >= 1")
    if length == 1:
        return image.copy()
    kernel = _motion_kernel(length, angle_deg)
    return _finish(accel.convolve2d_sym(image.astype(np.float64), kernel))


def _rgb_to_hsv(rgb: np.ndarray) -> np.ndarray:
    mx = rgb.max(axis=-1)
    mn = rgb.min(axis=-1)
    diff = mx - mn
    h = np.zeros_like(mx)
    safe = diff > 0
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    rc = np.where(safe, (mx - r) / np.where(safe, diff, 1.0), 0.0)
    gc = np.where(safe, (mx - g) / np.where(safe, diff, 1.0), 0.0)
    bc = np.where(safe, (mx - b) / np.where(safe, diff, 1.0), 0.0)
    h = np.where(mx == r, bc - gc, h)
    h = np.where((mx == g) & (g != r), 2.0 + rc - bc, h)
    h = np.where((mx == b) & (b != r) & (b != g), 4.0 + gc - rc, h)
    h = (h / 6.0) % 1.0
    s = np.where(mx > 0, diff / np.where(mx > 0, mx, 1.0), 0.0)
    return np.stack([h, s, mx], axis=-1)


def _hsv_to_rgb(hsv: np.ndarray) -> np.ndarray:
    h, s, v = hsv[..., 0], hsv[..., 1], hsv[..., 2]
    i = np.floor(h * 6.0)
    f = h * 6.0 - i
    p = v * (1.0 - s)
    q = v * (1.0 - s * f)
    t = v * (1.0 - s * (1.0 - f))
    i = i.astype(np.int64) % 6
    r = np.choose(i, [v, q, p, p, t, v])
    g = np.choose(i, [t, v, v, q, p, p])
    b = np.choose(i, [p, p, t, v, v, q])
    return np.stack([r, g, b], axis=-1)


def adjust_color(image: np.ndarray, brightness: float, contrast: float,
                 saturation: float, hue_deg: float) -> np.ndarray:
    """Fixed order brightness -> contrast -> saturation -> hue; one rounding."""
    if brightness == contrast == saturation == hue_deg == 0:
        return image.copy()
    buf = image.astype(np.float64)
    if brightness:
        buf = buf + brightness * 255.0
    if contrast:
        buf = (buf - 127.5) * (1.0 + contrast) + 127.5
    if saturation or hue_deg:
        hsv = _rgb_to_hsv(np.clip(buf, 0.0, 255.0) / 255.0)
        if saturation:
            hsv[..., 1] = np.clip(hsv[..., 1] * (1.0 + saturation), 0.0, 1.0)
        if hue_deg:
            hsv[..., 0] = (hsv[..., 0] + hue_deg / 360.0) % 1.0
        buf = _hsv_to_rgb(hsv) * 255.0
    return _finish(buf)


# ---------------------------------------------------------------------------
# geometric ops
# ---------------------------------------------------------------------------

# Transforms live in the continuous frame [0,W]x[0,H] (pixel i spans
# [i, i+1), image center at (W/2, H/2)) so bbox symmetry is exact; the
# half-pixel shift to sampling coordinates is folded into the matrix.
_SHIFT_PLUS = np.array([[1.0, 0, 0.5], [0, 1.0, 0.5], [0, 0, 1.0]])
_SHIFT_MINUS = np.array([[1.0, 0, -0.5], [0, 1.0, -0.5], [0, 0, 1.0]])


def _warp(image: np.ndarray, forward: np.ndarray,
          bbox: tuple[float, float, float, float]):
    h, w = image.shape[:2]
    hinv = _SHIFT_MINUS @ np.linalg.inv(forward) @ _SHIFT_PLUS
    out = accel.warp_bilinear(image.astype(np.float64), hinv, h, w, 255.0)

    cx, cy, bw, bh = bbox
    x0 = (cx - bw / 2) * w
    x1 = (cx + bw / 2) * w
    y0 = (cy - bh / 2) * h
    y1 = (cy + bh / 2) * h
    corners = np.array([[x0, y0, 1.0], [x1, y0, 1.0], [x1, y1, 1.0], [x0, y1, 1.0]])
    moved = corners @ forward.T
    moved = moved[:, :2] / moved[:, 2:3]
    nx0 = max(0.0, float(moved[:, 0].min()))
    nx1 = min(float(w), float(moved[:, 0].max()))
    ny0 = max(0.0, float(moved[:, 1].min()))
    ny1 = min(float(h), float(moved[:, 1].max()))
    if nx1 - nx0 < 1.0 or ny1 - ny0 < 1.0 or (nx1 - nx0) * (ny1 - ny0) < 1.0:
        raise DegenerateBox(f"transformed box collapsed to {nx1-nx0}x{ny1-ny0} px")
    new_bbox = ((nx0 + nx1) / 2 / w, (ny0 + ny1) / 2 / h,
                (nx1 - nx0) / w, (ny1 - ny0) / h)
    return _finish(out), new_bbox


def _center_matrix(w: int, h: int, inner: np.ndarray) -> np.ndarray:
    cx, cy = w / 2.0, h / 2.0
    pre = np.array([[1, 0, -cx], [0, 1, -cy], [0, 0, 1]], dtype=np.float64)
    post = np.array([[1, 0, cx], [0, 1, cy], [0, 0, 1]], dtype=np.float64)
    return post @ inner @ pre


def rotate(image: np.ndarray, bbox, degrees: float):
    """Rotate about the image center; bbox becomes the hull of its corners."""
    if degrees == 0:
        return image.copy(), tuple(bbox)
    theta = math.radians(degrees)
    inner = np.array([[math.cos(theta), -math.sin(theta), 0],
                      [math.sin(theta), math.cos(theta), 0],
                      [0, 0, 1]], dtype=np.float64)
    h, w = image.shape[:2]
    return _warp(image, _center_matrix(w, h, inner), bbox)


def scale(image: np.ndarray, bbox, factor: float):
    """Scale about the image center, keeping the canvas size."""
    if factor == 1.0:
        return image.copy(), tuple(bbox)
    if factor <= 0:
        raise ValueError("scale factor must be positive")
    inner = np.diag([factor, factor, 1.0]).astype(np.float64)
    h, w = image.shape[:2]
    return _warp(image, _center_matrix(w, h, inner), bbox)


def perspective(image: np.ndarray, bbox, corner_offsets):
    """Displace the four image corners (TL, TR, BR, BL) by (dx, dy) pixels."""
    offsets = np.asarray(corner_offsets, dtype=np.float64)
    if offsets.shape != (4, 2):
        raise ValueError("corner_offsets must be 4 (dx, dy) pairs")
    if not offsets.any():
        return image.copy(), tuple(bbox)
    h, w = image.shape[:2]
    src = np.array([[0, 0], [w, 0], [w, h], [0, h]], dtype=np.float64)
    dst = src + offsets
    # Direct linear transform for the homography mapping src -> dst.
    rows = []
    rhs = []
    for (sx, sy), (dx, dy) in zip(src, dst):
        rows.append([sx, sy, 1, 0, 0, 0, -dx * sx, -dx * sy])
        rhs.append(dx)
        rows.append([0, 0, 0, sx, sy, 1, -dy * sx, -dy * sy])
        rhs.append(dy)
    coeffs = np.linalg.solve(np.asarray(rows), np.asarray(rhs))
    forward = np.append(coeffs, 1.0).reshape(3, 3)
    return _warp(image, forward, bbox)


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------

_OP_ORDER = ("noise", "gauss_blur", "motion_blur", "color",
             "rotate", "scale", "perspective")


def augment_sample(sample: DatasetSample, policy: AugmentPolicy,
                   seed: int) -> tuple[DatasetSample, AugmentTrace]:
    """Apply each op independently with its policy probability."""
    rng = random.Random(derive(seed, STREAM_AUGMENT))
    image = sample.image
    bbox = sample.annotation[1:]
    trace: AugmentTrace = []

    for op in _OP_ORDER:
        roll = rng.random()
        if op == "noise":
            if roll < policy.noise_prob:
                sigma = rng.uniform(*policy.noise_sigma)
                noise_seed = derive(seed, STREAM_NOISE)
                image = add_gaussian_noise(image, sigma, noise_seed)
                trace.append(("noise", {"sigma": sigma, "seed": noise_seed}))
        elif op == "gauss_blur":
            if roll < policy.gauss_blur_prob:
                radius = rng.uniform(*policy.gauss_radius)
                image = gaussian_blur(image, radius)
                trace.append(("gauss_blur", {"radius": radius}))
        elif op == "motion_blur":
            if roll < policy.motion_blur_prob:
                length = rng.randint(*policy.motion_length)
                angle = rng.uniform(*policy.motion_angle)
                image = motion_blur(image, length, angle)
                trace.append(("motion_blur", {"length": length, "angle": angle}))
        elif op == "color":
            if roll < policy.color_prob:
                params = {
                    "brightness": rng.uniform(*policy.brightness),
                    "contrast": rng.uniform(*policy.contrast),
                    "saturation": rng.uniform(*policy.saturation),
                    "hue_deg": rng.uniform(*policy.hue),
                }
                image = adjust_color(image, **params)
                trace.append(("color", params))
        elif op == "rotate":
            if roll < policy.rotate_prob:
                degrees = rng.uniform(*policy.rotate_deg)
                image, bbox = rotate(image, bbox, degrees)
                trace.append(("rotate", {"degrees": degrees}))
        elif op == "scale":
            if roll < policy.scale_prob:
                factor = rng.uniform(*policy.scale_factor)
                image, bbox = scale(image, bbox, factor)
                trace.append(("scale", {"factor": factor}))
        elif op == "perspective":
            if roll < policy.perspective_prob:
                limit = policy.perspective_frac * min(image.shape[:2])
                offsets = [[rng.uniform(-limit, limit), rng.uniform(-limit, limit)]
                           for _ in range(4)]
                image, bbox = perspective(image, bbox, offsets)
                trace.append(("perspective", {"offsets": offsets}))

    out = DatasetSample(
        image=image if trace else sample.image.copy(),
        annotation=(sample.annotation[0],) + tuple(bbox),
        meta={**sample.meta, "augmentations": trace})
    return out, trace


def apply_trace(image: np.ndarray, bbox, trace: AugmentTrace):
    """Replay a recorded trace; bit-exact against the original application."""
    for op, params in trace:
        if op == "noise":
            image = add_gaussian_noise(image, params["sigma"], params["seed"])
        elif op == "gauss_blur":
            image = gaussian_blur(image, params["radius"])
        elif op == "motion_blur":
            image = motion_blur(image, params["length"], params["angle"])
        elif op == "color":
            image = adjust_color(image, params["brightness"], params["contrast"],
                                 params["saturation"], params["hue_deg"])
        elif op == "rotate":
            image, bbox = rotate(image, bbox, params["degrees"])
        elif op == "scale":
            image, bbox = scale(image, bbox, params["factor"])
        elif op == "perspective":
            image, bbox = perspective(image, bbox, params["offsets"])
        else:
            raise ValueError(f"unknown trace op {op!r}")
    return image, tuple(bbox)


def inverse_geometry(trace: AugmentTrace, image_shape) -> np.ndarray | None:
    """Combined forward matrix of the trace's geometric ops, or None.

    Verification inverts this to undo rotation/scale/perspective before
    re-extracting modules.
    """
    h, w = image_shape[:2]
    forward = None
    for op, params in trace:
        if op == "rotate":
            theta = math.radians(params["degrees"])
            inner = np.array([[math.cos(theta), -math.sin(theta), 0],
                              [math.sin(theta), math.cos(theta), 0],
                              [0, 0, 1]])
            m = _center_matrix(w, h, inner)
        elif op == "scale":
            m = _center_matrix(w, h, np.diag([params["factor"], params["factor"], 1.0]))
        elif op == "perspective":
            offsets = np.asarray(params["offsets"], dtype=np.float64)
            src = np.array([[0, 0], [w, 0], [w, h], [0, h]], dtype=np.float64)
            dst = src + offsets
            rows, rhs = [], []
            for (sx, sy), (dx, dy) in zip(src, dst):
                rows.append([sx, sy, 1, 0, 0, 0, -dx * sx, -dx * sy])
                rhs.append(dx)
                rows.append([0, 0, 0, sx, sy, 1, -dy * sx, -dy * sy])
                rhs.append(dy)
            m = np.append(np.linalg.solve(np.asarray(rows), np.asarray(rhs)),
                          1.0).reshape(3, 3)
        else:
            continue
        forward = m if forward is None else m @ forward
    return forward


def undo_geometry(image: np.ndarray, forward: np.ndarray) -> np.ndarray:
    """Resample the image through the inverse of a recorded forward matrix."""
    h, w = image.shape[:2]
    matrix = _SHIFT_MINUS @ forward @ _SHIFT_PLUS
    out = accel.warp_bilinear(image.astype(np.float64), matrix, h, w, 255.0)
    return _finish(out)
