"""
Why the relay is stuck at BER 0.5
=================================

Walks one batch of 16-QAM symbols through the imbalanced-beamforming link
and inspects what the relay actually receives:

  1. the imaginary symbol component is zero-forced at the relay (nullspace
     beam), so the relay observes a 1D PAM signal;
  2. with a balanced labeling, the relay's optimal bitwise log-likelihood
     ratios are IDENTICALLY zero - not merely small - so its best move is a
     coin flip per bit;
  3. with Gray labels instead, the same receiver extracts plenty.
"""
import numpy as np

from relaysec import (
    bit_subsets, build_constellation, draw_channel, awgn, eavesdrop_llr_1d,
    label_lut, make_rng, project, relay_observe, scheme_config, ibf_transmit,
)

N_SYM = 20_000
P_T = 40.0
rng = make_rng(7)

for mapping in ("emap", "gray"):
    c = build_constellation("qam16", mapping)
    proj = project(c)
    subs = bit_subsets(c, proj)
    lut = label_lut(c)
    cfg = scheme_config("ibf", P_T, 40.0)

    bits = rng.integers(0, 2, (N_SYM, c.q), dtype=np.uint8)
    idx = lut[(bits.astype(int) * (1 << np.arange(c.q - 1, -1, -1))).sum(1)]
    s = c.points[idx]
    ch = draw_channel(4, rng, size=N_SYM)
    slot = ibf_transmit(s.real, s.imag, ch, cfg)

    if mapping == "emap":
        leak = np.abs(slot.amp_i * np.einsum("bn,bn->b", ch.h_r, slot.hr_perp))
        print(f"zero-forcing: max |s_I coefficient at relay| = {leak.max():.2e}")
        print()

    y_r = np.einsum("bn,bn->b", ch.h_r, slot.x_t) + awgn(N_SYM, 1.0, rng)
    obs = relay_observe(ch, cfg, slot, y_r, 1.0)
    llr, hard = eavesdrop_llr_1d(obs.y_r_real, obs.g_r, 1.0, proj, subs, rng)

    ber = np.mean(hard != bits)
    print(f"{mapping:4s} labels: relay LLRs identically zero for "
          f"{np.mean(llr == 0.0) * 100:5.1f}% of bits, relay BER = {ber:.4f}")

print()
print("The balanced labeling leaves the optimal eavesdropper with literally")
print("no evidence per bit; Gray labels leak most bits once the real")
print("coordinate is known.")
