"""Destination processing: slot stacking, MMSE/ML detection, bit recovery.

The default detector performs exhaustive maximum-likelihood search over all
M symbol hypotheses, minimizing the noise-whitened residual of the stacked
two-slot observation; this subsumes MMSE-then-slice and is exact for the
linear model. detector="mmse" selects the literal MMSE-estimate-then-
nearest-point variant for comparison.

Under ibf the stacked model is

    [y_d1]   [a_r ||h_d||    a_i h_d.hr_perp] [s_R ]   [n_d1 ]
    [y_d2] = [  g2               0          ] [j s_I] + [n_d2~]

with g2 = sqrt(gamma) g_d g_r (AF) or sqrt(p_r) g_d (DF); the (2,2) entry is
exactly zero because the relay never carries the imaginary component. The
AF effective noise n_d2~ = sqrt(gamma) g_d Re{n_r} + n_d2 has variance
gamma |g_d|^2 n0/2 + n0, which is what the default covariance uses;
literal_eq11=True substitutes diag(2 n0, 2 p_r |g_d|^2 + 2 n0) instead.
"""

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization
from .constellation import Constellation
from .numerics import mmse_solve
from .relaynode import RelayObservation, RelayOutput
from .txschemes import SchemeConfig, SlotOneOutput

DETECTORS = ("ml", "mmse")


@dataclass
class BitErrorCounter:
    """Running (bits, errors) totals; merged across workers by summation."""

    bits: int = 0
    errors: int = 0

    @property
    def ber(self) -> float:
        return self.errors / self.bits if self.bits else 0.0

    def merge(self, other: "BitErrorCounter") -> "BitErrorCounter":
        return BitErrorCounter(self.bits + other.bits, self.errors + other.errors)


def count_bit_errors(detected: np.ndarray, true: np.ndarray,
                     counter: BitErrorCounter) -> BitErrorCounter:
    """Accumulate Hamming distance; shapes must match exactly."""
    detected = np.asarray(detected)
    true = np.asarray(true)
    if detected.shape != true.shape:
        raise ValueError(f"bit shape mismatch: {detected.shape} vs {true.shape}")
    counter.errors += int((detected != true).sum())
    counter.bits += int(true.size)
    return counter


@dataclass(frozen=True)
class DetectionResult:
    index: np.ndarray                 # (...,) detected point index
    bits: np.ndarray                  # (..., q) recovered label
    s_t_hat: np.ndarray | None = None  # (..., 2) MMSE estimate when detector="mmse"


def _result(c: Constellation, index: np.ndarray, s_t_hat=None) -> DetectionResult:
    return DetectionResult(index=index, bits=c.labels[index], s_t_hat=s_t_hat)


def _ibf_channel_rows(ch: ChannelRealization, slot: SlotOneOutput, g2: np.ndarray):
    """Entries of the stacked 2x2 channel for the [s_R, j s_I] signal vector."""
    h00 = slot.amp_r * np.linalg.norm(ch.h_d, axis=-1).astype(complex)
    h01 = slot.amp_i * np.einsum("...n,...n->...", ch.h_d, slot.hr_perp)
    h10 = np.asarray(g2, dtype=complex)
    h11 = np.zeros_like(h10)
    return h00, h01, h10, h11


def _ml_detect_ibf(c, y1, y2, rows, rn1, rn2):
    h00, h01, h10, h11 = rows
    best = np.full(np.shape(y1), np.inf)
    idx = np.zeros(np.shape(y1), dtype=int)
    for i, p in enumerate(c.points):
        sr, jsi = p.real, 1j * p.imag
        m = (np.abs(y1 - h00 * sr - h01 * jsi) ** 2 / rn1
             + np.abs(y2 - h10 * sr - h11 * jsi) ** 2 / rn2)
        take = m < best
        best = np.where(take, m, best)
        idx = np.where(take, i, idx)
    return idx


def _mmse_detect_ibf(c, y1, y2, rows, rn1, rn2):
    h00, h01, h10, h11 = rows
    shape = np.broadcast_shapes(np.shape(y1), np.shape(h00))
    he = np.zeros(shape + (2, 2), dtype=complex)
    he[..., 0, 0], he[..., 0, 1] = h00, h01
    he[..., 1, 0], he[..., 1, 1] = h10, h11
    rn = np.zeros(shape + (2, 2), dtype=complex)
    rn[..., 0, 0] = rn1
    rn[..., 1, 1] = rn2
    rs = np.zeros(shape + (2, 2), dtype=complex)
    rs[..., 0, 0] = np.mean(c.points.real ** 2)
    rs[..., 1, 1] = np.mean(c.points.imag ** 2)
    y = np.stack(np.broadcast_arrays(y1, y2), axis=-1)
    est = mmse_solve(he, rn, rs, y)
    point_est = est[..., 0] + est[..., 1]
    idx = np.argmin(np.abs(point_est[..., None] - c.points), axis=-1)
    return idx, est


def receive_ibf_af(ch, cfg: SchemeConfig, c: Constellation, obs: RelayObservation,
                   rly: RelayOutput, slot: SlotOneOutput, y_d1, y_d2, n0: float,
                   detector: str = "ml", literal_eq11: bool = False) -> DetectionResult:
    """Two-slot detection with the relay forwarding sqrt(gamma) Re{y_r}."""
    g2 = np.sqrt(rly.gamma) * ch.g_d * obs.g_r
    if literal_eq11:
        rn1 = 2.0 * n0 * np.ones(np.shape(ch.g_d))
        rn2 = 2.0 * cfg.p_r * np.abs(ch.g_d) ** 2 + 2.0 * n0
    else:
        rn1 = n0 * np.ones(np.shape(ch.g_d))
        rn2 = rly.gamma * np.abs(ch.g_d) ** 2 * n0 / 2.0 + n0
    rows = _ibf_channel_rows(ch, slot, g2)
    if detector == "mmse":
        idx, est = _mmse_detect_ibf(c, y_d1, y_d2, rows, rn1, rn2)
        return _result(c, idx, est)
    return _result(c, _ml_detect_ibf(c, y_d1, y_d2, rows, rn1, rn2))


def receive_ibf_df(ch, cfg: SchemeConfig, c: Constellation, slot: SlotOneOutput,
                   y_d1, y_d2, n0: float, detector: str = "ml") -> DetectionResult:
    """Two-slot detection assuming the relay re-modulated s_R correctly.

    Relay decision errors are not averaged into the combiner; they simply
    corrupt y_d2.
    """
    g2 = np.sqrt(cfg.p_r) * ch.g_d
    rn1 = n0 * np.ones(np.shape(ch.g_d))
    rn2 = n0 * np.ones(np.shape(ch.g_d))
    rows = _ibf_channel_rows(ch, slot, g2)
    if detector == "mmse":
        idx, est = _mmse_detect_ibf(c, y_d1, y_d2, rows, rn1, rn2)
        return _result(c, idx, est)
    return _result(c, _ml_detect_ibf(c, y_d1, y_d2, rows, rn1, rn2))


def detect_slot1_ibf(ch, c: Constellation, slot: SlotOneOutput, y_d1,
                     n0: float) -> DetectionResult:
    """Direct-link-only reference detector (ignores the relay slot)."""
    h00 = slot.amp_r * np.linalg.norm(ch.h_d, axis=-1)
    h01 = slot.amp_i * np.einsum("...n,...n->...", ch.h_d, slot.hr_perp)
    best = np.full(np.shape(y_d1), np.inf)
    idx = np.zeros(np.shape(y_d1), dtype=int)
    for i, p in enumerate(c.points):
        m = np.abs(y_d1 - h00 * p.real - h01 * (1j * p.imag)) ** 2
        take = m < best
        best = np.where(take, m, best)
        idx = np.where(take, i, idx)
    return _result(c, idx)


def _scalar_detect(c: Constellation, y, c_eff, rng=None) -> np.ndarray:
    """Nearest point through a scalar channel; a dead channel is a random guess."""
    y = np.asarray(y, dtype=complex)
    c_eff = np.asarray(c_eff, dtype=complex)
    idx = np.argmin(np.abs(y[..., None] - c_eff[..., None] * c.points) ** 2, axis=-1)
    dead = c_eff == 0
    if np.any(dead):
        guess = (rng.integers(0, c.m, size=idx.shape) if rng is not None
                 else np.zeros_like(idx))
        idx = np.where(dead, guess, idx)
    return idx


def receive_gebf(ch, cfg: SchemeConfig, c: Constellation, slot: SlotOneOutput,
                 y_d1, rng=None) -> DetectionResult:
    """Slot-1-only matched detection; the relay stays silent under gebf."""
    c_eff = slot.amp_r * np.einsum("...n,...n->...", ch.h_d, slot.psi)
    return _result(c, _scalar_detect(c, y_d1, c_eff, rng))


def _ml_detect_scalar_two_obs(c, y1, y2, h0, h1, rn1, rn2):
    best = np.full(np.shape(y1), np.inf)
    idx = np.zeros(np.shape(y1), dtype=int)
    for i, p in enumerate(c.points):
        m = np.abs(y1 - h0 * p) ** 2 / rn1 + np.abs(y2 - h1 * p) ** 2 / rn2
        take = m < best
        best = np.where(take, m, best)
        idx = np.where(take, i, idx)
    return idx


def receive_an_af(ch, cfg: SchemeConfig, c: Constellation, obs: RelayObservation,
                  rly: RelayOutput, slot: SlotOneOutput, y_d1, y_d2,
                  n0: float) -> DetectionResult:
    """Slot 1 is noise-free of AN (nullspace); slot 2 carries forwarded data,
    forwarded AN, and forwarded noise, all with CSI-computable variance."""
    h0 = (slot.amp_r * np.linalg.norm(ch.h_d, axis=-1)).astype(complex)
    h1 = np.sqrt(rly.gamma) * ch.g_d * obs.eff_channel
    rn1 = n0
    rn2 = rly.gamma * np.abs(ch.g_d) ** 2 * (obs.interference_var + n0) + n0
    return _result(c, _ml_detect_scalar_two_obs(c, y_d1, y_d2, h0, h1, rn1, rn2))


def receive_an_df(ch, cfg: SchemeConfig, c: Constellation, slot: SlotOneOutput,
                  y_d1, y_d2, n0: float) -> DetectionResult:
    """Both slots combined, trusting the relay's re-modulated decision."""
    h0 = (slot.amp_r * np.linalg.norm(ch.h_d, axis=-1)).astype(complex)
    h1 = np.sqrt(cfg.p_r) * ch.g_d
    return _result(c, _ml_detect_scalar_two_obs(c, y_d1, y_d2, h0, h1, n0, n0))


def receive_dj_af(ch, cfg: SchemeConfig, c: Constellation, obs: RelayObservation,
                  rly: RelayOutput, jam_signal, y_d2, n0: float) -> DetectionResult:
    """Cancel the destination's own forwarded jamming exactly, then detect.

    The destination received nothing in slot 1 (it was transmitting), so
    detection rides on the cleaned slot-2 sample alone.
    """
    scale = np.sqrt(rly.gamma) * ch.g_d
    cleaned = np.asarray(y_d2) - scale * ch.f_r * jam_signal
    c_eff = scale * obs.eff_channel
    return _result(c, _scalar_detect(c, cleaned, c_eff))


def receive_dj_df(ch, cfg: SchemeConfig, c: Constellation, y_d2,
                  n0: float) -> DetectionResult:
    """The relay already decided; no jamming reaches the destination slot."""
    c_eff = np.sqrt(cfg.p_r) * ch.g_d
    return _result(c, _scalar_detect(c, y_d2, c_eff))
