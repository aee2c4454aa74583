"""Untrusted relay: worst-case bitwise eavesdropping and AF/DF forwarding.

The relay knows all channels, the constellation labeling, and the variance
of any interference hitting it, and runs the BER-minimizing bitwise
demodulator on what it receives. Under ibf it observes only the real
symbol component, so the demodulator degenerates to 1D PAM soft decisions;
under the other schemes it sees the full symbol through a complex scalar
channel plus (for an/dj) Gaussian-modeled interference.

Exact zero log-likelihood ratios are broken by a fair coin from the caller's
seeded generator. Under ibf with a balanced labeling every bit LLR is
identically zero, which is precisely what pins the relay BER at 1/2.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .channel import ChannelRealization
from .constellation import BitSubsets, Constellation, RealProjection
from .txschemes import SchemeConfig, SlotOneOutput


@dataclass(frozen=True)
class RelayObservation:
    """Received slot-1 sample plus the receiver-model quantities."""

    scheme: str
    y_r: np.ndarray                      # (...,) complex
    n0: float
    g_r: np.ndarray | None = None        # (...,) real gain on s_R (ibf only)
    eff_channel: np.ndarray | None = None  # (...,) complex gain on s (non-ibf)
    interference_var: np.ndarray | None = None  # (...,) an/jam variance at relay

    @property
    def y_r_real(self) -> np.ndarray:
        return self.y_r.real


@dataclass(frozen=True)
class RelayOutput:
    """Relay slot-2 transmission."""

    x_r: np.ndarray                     # (...,) complex (real-valued under ibf)
    gamma: np.ndarray | None = None     # AF gain
    s_hat: np.ndarray | None = None     # DF decision (s_R estimate under ibf)


def relay_observe(ch: ChannelRealization, cfg: SchemeConfig, slot: SlotOneOutput,
                  y_r: np.ndarray, n0: float) -> RelayObservation:
    """Attach the relay's model of its own observation to the received sample."""
    if cfg.scheme == "ibf":
        g_r = slot.amp_r * np.einsum("...n,...n->...", ch.h_r, slot.mrt).real
        return RelayObservation("ibf", y_r, n0, g_r=g_r)
    if cfg.scheme == "gebf":
        eff = slot.amp_r * np.einsum("...n,...n->...", ch.h_r, slot.psi)
        ivar = np.zeros(np.shape(eff))
    elif cfg.scheme == "an":
        eff = slot.amp_r * np.einsum("...n,...n->...", ch.h_r, slot.mrt)
        leak = np.einsum("...n,...n->...", ch.h_r, slot.an_beam)
        ivar = slot.amp_i ** 2 * np.abs(leak) ** 2
    elif cfg.scheme == "dj":
        eff = slot.amp_r * np.einsum("...n,...n->...", ch.h_r, slot.mrt)
        ivar = cfg.jam_power * np.abs(ch.f_r) ** 2
    else:
        raise ValueError(f"unknown scheme {cfg.scheme!r}")
    return RelayObservation(cfg.scheme, y_r, n0, eff_channel=eff,
                            interference_var=ivar)


def _hard_bits(llr: np.ndarray, rng: np.random.Generator | None) -> np.ndarray:
    if rng is None:
        coin = np.zeros(llr.shape, dtype=np.uint8)
    else:
        coin = rng.integers(0, 2, size=llr.shape, dtype=np.uint8)
    return np.where(llr > 0, np.uint8(1), np.where(llr < 0, np.uint8(0), coin))


def eavesdrop_llr_1d(y_tilde, g_r, n0: float, proj: RealProjection,
                     subsets: BitSubsets, rng: np.random.Generator | None = None):
    """Bitwise LLRs of Re{y_r} over the real alphabet, with multiplicities.

    L_j = log sum_{c} m_{j,1,c} exp(-(y - g s_c)^2 / n0)
        - log sum_{c} m_{j,0,c} exp(-(y - g s_c)^2 / n0)

    where m_{j,k,c} counts the labels at real coordinate c whose bit j is k.
    The exponent uses the real-dimension noise variance n0/2, i.e. the
    familiar -(.)^2/n0. Returns (llr, hard_bits), both (..., q).
    """
    y = np.asarray(y_tilde, dtype=float)
    g = np.asarray(g_r, dtype=float)
    q = subsets.real_counts.shape[0]
    expo = -((y[..., None] - g[..., None] * proj.s_r) ** 2) / n0
    llr = np.empty(y.shape + (q,))
    for j in range(q):
        top = logsumexp(expo, b=subsets.real_counts[j, 1].astype(float), axis=-1)
        bot = logsumexp(expo, b=subsets.real_counts[j, 0].astype(float), axis=-1)
        llr[..., j] = top - bot
    return llr, _hard_bits(llr, rng)


def eavesdrop_llr_2d(y_r, eff_channel, total_noise_var, c: Constellation,
                     subsets: BitSubsets, rng: np.random.Generator | None = None):
    """Bitwise LLRs over the full 2D constellation with a complex scalar channel.

    Interference is folded into total_noise_var = n0 + interference variance
    (the relay knows it from CSI). Returns (llr, hard_bits).
    """
    y = np.asarray(y_r, dtype=complex)
    eff = np.asarray(eff_channel, dtype=complex)
    var = np.asarray(total_noise_var, dtype=float)
    expo = -(np.abs(y[..., None] - eff[..., None] * c.points) ** 2) / var[..., None]
    llr = np.empty(y.shape + (c.q,))
    for j in range(c.q):
        top = logsumexp(expo, b=subsets.point_masks[j, 1].astype(float), axis=-1)
        bot = logsumexp(expo, b=subsets.point_masks[j, 0].astype(float), axis=-1)
        llr[..., j] = top - bot
    return llr, _hard_bits(llr, rng)


def forward_af(obs: RelayObservation, p_r: float, sym_power: float) -> RelayOutput:
    """Amplify-and-forward with the statistical power normalization.

    Under ibf the relay forwards the real part: x_r = sqrt(gamma) Re{y_r}
    with gamma = p_r / (g_r^2 E[s_R^2] + n0/2), computed per channel
    realization. Otherwise the full complex sample is forwarded with the
    matching normalization including interference power.
    """
    if obs.scheme == "ibf":
        gamma = p_r / (obs.g_r ** 2 * sym_power + obs.n0 / 2)
        x_r = np.sqrt(gamma) * obs.y_r.real
    else:
        total = np.abs(obs.eff_channel) ** 2 * sym_power + obs.interference_var + obs.n0
        gamma = p_r / total
        x_r = np.sqrt(gamma) * obs.y_r
    return RelayOutput(x_r=x_r, gamma=gamma)


def forward_df(obs: RelayObservation, p_r: float, proj: RealProjection | None = None,
               c: Constellation | None = None) -> RelayOutput:
    """Decode-and-forward: minimum-distance detect, retransmit at sqrt(p_r).

    ibf: 1D PAM detection of s_R over the real alphabet, x_r = sqrt(p_r) s_R_hat.
    an/dj: 2D nearest-point detection of the full symbol treating
    interference as Gaussian, x_r = sqrt(p_r) s_hat.
    """
    if obs.scheme == "ibf":
        if proj is None:
            raise ValueError("ibf decode-and-forward needs the real projection")
        dist = (obs.y_r.real[..., None] - obs.g_r[..., None] * proj.s_r) ** 2
        s_hat = proj.s_r[np.argmin(dist, axis=-1)]
    else:
        if c is None:
            raise ValueError("2D decode-and-forward needs the constellation")
        dist = np.abs(obs.y_r[..., None] - obs.eff_channel[..., None] * c.points) ** 2
        s_hat = c.points[np.argmin(dist, axis=-1)]
    return RelayOutput(x_r=np.sqrt(p_r) * s_hat, s_hat=s_hat)
