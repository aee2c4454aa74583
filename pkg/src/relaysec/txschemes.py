"""Slot-1 transmit vector construction for the four schemes.

ibf   - real symbol component on the destination-MRT beam, imaginary
        component on a relay-nullspace beam; the relay receives no trace of
        the imaginary part.
gebf  - rank-one beamforming along the dominant generalized eigenvector of
        the two-link SNR pencil; relay unused. Both pencil orientations are
        implemented (see SchemeConfig.gebf_pencil) because the two baselines
        behave very differently; the default "relay_over_dest" reproduces
        the reference BER curves.
an    - data on the MRT beam plus Gaussian artificial noise in the
        destination nullspace.
dj    - full-power MRT while the destination jams the relay and forfeits
        slot-1 reception.

Average transmit power: p_t/2 for ibf (the literal power split; see
ibf_full_power), p_t for the others.
"""

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, crandn
from .numerics import max_generalized_eigvec, nullspace_basis

SCHEMES = ("ibf", "gebf", "an", "dj")
PROTOCOLS = ("af", "df", "none")
PENCILS = ("relay_over_dest", "dest_over_relay")
HR_PERP_RULES = ("best", "first")


@dataclass(frozen=True)
class SchemeConfig:
    """Scheme identity, power budgets, and split parameters."""

    scheme: str
    p_t: float
    p_r: float
    alpha: float        # ibf real/imag power split, 0 < alpha <= p_t
    beta: float         # an data/noise split, 0 <= beta <= p_t
    jam_power: float    # dj destination jamming power
    ibf_full_power: bool = False       # rescale ibf by sqrt(2) to spend all of p_t
    hr_perp_rule: str = "best"         # nullspace column choice: best for h_d, or first
    gebf_pencil: str = "relay_over_dest"

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.p_t <= 0 or self.p_r <= 0:
            raise ValueError("power budgets must be positive")
        if not 0 < self.alpha <= self.p_t:
            raise ValueError("alpha must satisfy 0 < alpha <= p_t")
        if not 0 <= self.beta <= self.p_t:
            raise ValueError("beta must satisfy 0 <= beta <= p_t")
        if self.jam_power < 0:
            raise ValueError("jam power must be nonnegative")
        if self.hr_perp_rule not in HR_PERP_RULES:
            raise ValueError(f"unknown nullspace column rule {self.hr_perp_rule!r}")
        if self.gebf_pencil not in PENCILS:
            raise ValueError(f"unknown pencil orientation {self.gebf_pencil!r}")


def scheme_config(scheme, p_t, p_r, alpha_frac=0.5, beta_frac=0.7, jam_frac=0.5,
                  **flags) -> SchemeConfig:
    """SchemeConfig with splits given as fractions of p_t (defaults 0.5/0.7/0.5)."""
    return SchemeConfig(scheme=scheme, p_t=p_t, p_r=p_r, alpha=alpha_frac * p_t,
                        beta=beta_frac * p_t, jam_power=jam_frac * p_t, **flags)


@dataclass(frozen=True)
class SlotOneOutput:
    """Transmit vector plus the beams and amplitudes receivers condition on."""

    x_t: np.ndarray             # (..., N)
    amp_r: float                # amplitude on the data beam
    amp_i: float = 0.0          # amplitude on the secondary beam (ibf imag / an)
    w: np.ndarray | None = None            # AN or jam symbol drawn this slot
    mrt: np.ndarray | None = None          # (..., N) destination-MRT beam
    hr_perp: np.ndarray | None = None      # (..., N) relay-nullspace beam (ibf)
    an_beam: np.ndarray | None = None      # (..., N) destination-nullspace beam (an)
    psi: np.ndarray | None = None          # (..., N) eigenbeam (gebf)


def mrt_beam(h_d: np.ndarray) -> np.ndarray:
    """Unit transmit beam h_d^H / ||h_d|| as an (..., N) vector."""
    return h_d.conj() / np.linalg.norm(h_d, axis=-1, keepdims=True)


def pick_hr_perp(ch: ChannelRealization, rule: str = "best") -> np.ndarray:
    """One unit column of the h_r nullspace basis.

    "best" picks the column with the largest |h_d . z| to aid destination
    reception; "first" takes the basis as computed.
    """
    z = nullspace_basis(ch.h_r)
    if rule == "first":
        return z[..., :, 0]
    proj = np.abs(np.einsum("...n,...nk->...k", ch.h_d, z))
    best = np.argmax(proj, axis=-1)
    return np.take_along_axis(z, best[..., None, None], axis=-1)[..., 0]


def ibf_transmit(s_r, s_i, ch: ChannelRealization, cfg: SchemeConfig) -> SlotOneOutput:
    """x_t = a_r * mrt * s_r + j a_i * hr_perp * s_i with h_r . hr_perp = 0."""
    if ch.n < 2:
        raise ValueError("ibf needs at least 2 antennas to null the relay")
    scale = np.sqrt(2.0) if cfg.ibf_full_power else 1.0
    amp_r = scale * np.sqrt(cfg.alpha)
    amp_i = scale * np.sqrt(cfg.p_t - cfg.alpha)
    mrt = mrt_beam(ch.h_d)
    perp = pick_hr_perp(ch, cfg.hr_perp_rule)
    s_r = np.asarray(s_r)
    s_i = np.asarray(s_i)
    x_t = amp_r * mrt * s_r[..., None] + 1j * amp_i * perp * s_i[..., None]
    return SlotOneOutput(x_t=x_t, amp_r=amp_r, amp_i=amp_i, mrt=mrt, hr_perp=perp)


def gebf_pencil_matrices(ch: ChannelRealization, cfg: SchemeConfig):
    """The (A, B) pencil whose top generalized eigenvector is the beam."""
    eye = np.eye(ch.n)
    outer_r = ch.h_r[..., :, None].conj() * ch.h_r[..., None, :]
    outer_d = ch.h_d[..., :, None].conj() * ch.h_d[..., None, :]
    m_r = eye + cfg.p_t * outer_r
    m_d = eye + cfg.p_t * outer_d
    if cfg.gebf_pencil == "relay_over_dest":
        return m_r, m_d
    return m_d, m_r


def gebf_transmit(s, ch: ChannelRealization, cfg: SchemeConfig) -> SlotOneOutput:
    """x_t = sqrt(p_t) * psi_max * s; the relay stays silent under gebf."""
    a, b = gebf_pencil_matrices(ch, cfg)
    psi, _ = max_generalized_eigvec(a, b)
    amp = np.sqrt(cfg.p_t)
    x_t = amp * psi * np.asarray(s)[..., None]
    return SlotOneOutput(x_t=x_t, amp_r=amp, psi=psi)


def an_transmit(s, ch: ChannelRealization, cfg: SchemeConfig,
                rng: np.random.Generator) -> SlotOneOutput:
    """Data on the MRT beam, unit-variance Gaussian noise in null(h_d).

    With more than two antennas the nullspace has several dimensions; one
    uniformly random unit direction is drawn per symbol.
    """
    if ch.n < 2:
        raise ValueError("an needs at least 2 antennas for a destination nullspace")
    amp_data = np.sqrt(cfg.beta)
    amp_an = np.sqrt(cfg.p_t - cfg.beta)
    mrt = mrt_beam(ch.h_d)
    z = nullspace_basis(ch.h_d)
    coeff = crandn(rng, z.shape[:-2] + (ch.n - 1,))
    coeff /= np.linalg.norm(coeff, axis=-1, keepdims=True)
    beam = np.einsum("...nk,...k->...n", z, coeff)
    w = crandn(rng, np.asarray(s).shape)
    x_t = amp_data * mrt * np.asarray(s)[..., None] + amp_an * beam * w[..., None]
    return SlotOneOutput(x_t=x_t, amp_r=amp_data, amp_i=amp_an, w=w,
                         mrt=mrt, an_beam=beam)


def dj_transmit(s, ch: ChannelRealization, cfg: SchemeConfig) -> SlotOneOutput:
    """Full-power MRT; the destination jams separately (dj_jam)."""
    amp = np.sqrt(cfg.p_t)
    mrt = mrt_beam(ch.h_d)
    return SlotOneOutput(x_t=amp * mrt * np.asarray(s)[..., None], amp_r=amp, mrt=mrt)


def dj_jam(cfg: SchemeConfig, rng: np.random.Generator, size=()) -> np.ndarray:
    """Jamming signal sqrt(jam_power) * w transmitted by the destination."""
    return np.sqrt(cfg.jam_power) * crandn(rng, size)
