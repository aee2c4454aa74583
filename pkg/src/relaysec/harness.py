"""Monte Carlo BER engine: experiment configuration, sweeps, CSV output.

A sweep point simulates `symbols` independent q-bit messages through one
scheme pipeline and accumulates relay-eavesdropper and destination bit
error counters. Everything is a deterministic function of (config, seed,
workers): symbols are split into per-worker chunks, each driven by an
independent substream keyed on (seed, sweep value, antenna count, worker),
and counters merge by summation, so scheduling order cannot change results.

CSV schema (one row per sweep point and node, no timestamps):

    scheme,protocol,constellation,mapping,N,P_t,P_r,N0,node,symbols,bits,
    errors,ber,ci99,seed,flags

The flags column records the convention switches that affect numbers
(pencil orientation, detector, nullspace column rule, power variants) plus
a short hash of the full config.
"""

import hashlib
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict

import numpy as np
from scipy.stats import norm as _norm

from . import constellation as cn
from . import destination as dn
from . import relaynode as rn
from . import txschemes as tx
from .channel import awgn, draw_channel, substream

CSV_HEADER = ("scheme,protocol,constellation,mapping,N,P_t,P_r,N0,node,"
              "symbols,bits,errors,ber,ci99,seed,flags")

_BATCH = 16384


class ConfigError(Exception):
    """Invalid experiment configuration or config file."""


@dataclass(frozen=True)
class ExperimentConfig:
    scheme: str
    protocol: str                  # af | df | none
    constellation: str
    mapping: str                   # emap | gray
    n: int                         # antennas (fixed value when sweeping P_t)
    p_r: float
    pt_sweep: tuple = ()           # exactly one sweep axis must be set
    n_sweep: tuple = ()
    p_t: float | None = None       # fixed P_t when sweeping N
    n0: float = 1.0
    alpha_frac: float = 0.5
    beta_frac: float = 0.7
    jam_frac: float = 0.5
    symbols: int = 100_000
    seed: int = 20240901
    workers: int = 1
    symbols_per_channel: int = 1
    detector: str = "ml"
    literal_eq11: bool = False
    ibf_full_power: bool = False
    hr_perp_rule: str = "best"
    gebf_pencil: str = "relay_over_dest"

    def validate(self) -> None:
        if self.scheme not in tx.SCHEMES:
            raise ConfigError(f"unknown scheme {self.scheme!r}")
        if self.protocol not in tx.PROTOCOLS:
            raise ConfigError(f"unknown protocol {self.protocol!r}")
        if self.scheme == "gebf" and self.protocol != "none":
            raise ConfigError("gebf keeps the relay silent; use protocol = none")
        if self.scheme != "gebf" and self.protocol == "none":
            raise ConfigError(f"{self.scheme} needs a relay protocol (af or df)")
        if self.constellation not in cn.KINDS:
            raise ConfigError(f"unknown constellation {self.constellation!r}")
        if self.mapping not in cn.MAPPINGS:
            raise ConfigError(f"unknown mapping {self.mapping!r}")
        if bool(self.pt_sweep) == bool(self.n_sweep):
            raise ConfigError("exactly one sweep axis (pt_sweep or n_sweep) required")
        if self.n_sweep and self.p_t is None:
            raise ConfigError("an antenna sweep needs a fixed p_t")
        if self.detector not in dn.DETECTORS:
            raise ConfigError(f"unknown detector {self.detector!r}")
        if self.hr_perp_rule not in tx.HR_PERP_RULES:
            raise ConfigError(f"unknown hr_perp_rule {self.hr_perp_rule!r}")
        if self.gebf_pencil not in tx.PENCILS:
            raise ConfigError(f"unknown gebf_pencil {self.gebf_pencil!r}")
        if self.symbols < 1 or self.workers < 1 or self.symbols_per_channel < 1:
            raise ConfigError("symbols, workers, symbols_per_channel must be >= 1")
        if self.n0 <= 0 or self.p_r <= 0:
            raise ConfigError("n0 and p_r must be positive")
        min_n = 2 if self.scheme in ("ibf", "an") else 1
        for n_ant in (self.n_sweep or (self.n,)):
            if n_ant < min_n:
                raise ConfigError(f"{self.scheme} needs at least {min_n} antennas")
        for p_t in (self.pt_sweep or (self.p_t,)):
            if p_t is None or p_t <= 0:
                raise ConfigError("transmit powers must be positive")

    @property
    def sweep_axis(self) -> str:
        return "P_t" if self.pt_sweep else "N"

    @property
    def sweep_values(self) -> tuple:
        return self.pt_sweep if self.pt_sweep else self.n_sweep


@dataclass(frozen=True)
class BerRecord:
    """One CSV row: accumulated counters for one node at one sweep point."""

    scheme: str
    protocol: str
    constellation: str
    mapping: str
    n: int
    p_t: float
    p_r: float
    n0: float
    node: str                      # relay | destination
    symbols: int
    bits: int
    errors: int
    ber: float
    ci99: float
    seed: int
    flags: str

    def csv_row(self) -> str:
        return ",".join([
            self.scheme, self.protocol, self.constellation, self.mapping,
            str(self.n), repr(float(self.p_t)), repr(float(self.p_r)),
            repr(float(self.n0)), self.node, str(self.symbols), str(self.bits),
            str(self.errors), repr(self.ber), repr(self.ci99), str(self.seed),
            self.flags,
        ])


def ci_halfwidth(errors: int, bits: int, level: float = 0.99) -> float:
    """Normal-approximation binomial half-width z sqrt(p(1-p)/bits)."""
    if bits <= 0:
        raise ValueError("bits must be positive")
    z = _norm.ppf(0.5 + level / 2.0)
    p = errors / bits
    return float(z * math.sqrt(p * (1.0 - p) / bits))


def config_hash(cfg: ExperimentConfig) -> str:
    blob = json.dumps(asdict(cfg), sort_keys=True, default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:8]


def config_flags(cfg: ExperimentConfig) -> str:
    return (f"cfg={config_hash(cfg)};pencil={cfg.gebf_pencil};"
            f"detector={cfg.detector};hrperp={cfg.hr_perp_rule};"
            f"ifp={int(cfg.ibf_full_power)};le11={int(cfg.literal_eq11)};"
            f"spc={cfg.symbols_per_channel};workers={cfg.workers};gebfpow=full")


def _point_params(cfg: ExperimentConfig, sweep_value):
    if cfg.sweep_axis == "P_t":
        return float(sweep_value), cfg.n
    return float(cfg.p_t), int(sweep_value)


def _simulate_chunk(cfg: ExperimentConfig, p_t: float, n_ant: int,
                    worker: int, n_symbols: int):
    """Counters for one worker's share of a sweep point.

    The substream key makes the chunk independent of scheduling; rng draws
    follow a fixed order (bits, channel, scheme randomness, relay noise,
    slot noises, tie coins) so results are reproducible bit for bit.
    """
    const = cn.build_constellation(cfg.constellation, cfg.mapping)
    proj = cn.project(const)
    subsets = cn.bit_subsets(const, proj)
    lut = cn.label_lut(const)
    weights = 1 << np.arange(const.q - 1, -1, -1)
    sr2 = float(np.mean(const.points.real ** 2))
    scfg = tx.scheme_config(cfg.scheme, p_t, cfg.p_r, cfg.alpha_frac,
                            cfg.beta_frac, cfg.jam_frac,
                            ibf_full_power=cfg.ibf_full_power,
                            hr_perp_rule=cfg.hr_perp_rule,
                            gebf_pencil=cfg.gebf_pencil)
    rng = substream(cfg.seed, int(np.float64(p_t).view(np.uint64)), n_ant, worker)
    n0 = cfg.n0
    spc = cfg.symbols_per_channel
    relay_ctr = dn.BitErrorCounter()
    dest_ctr = dn.BitErrorCounter()

    remaining = n_symbols
    while remaining > 0:
        b = min(_BATCH, remaining)
        remaining -= b
        bits = rng.integers(0, 2, size=(b, const.q), dtype=np.uint8)
        pidx = lut[(bits.astype(int) * weights).sum(axis=1)]
        s = const.points[pidx]
        chd = draw_channel(n_ant, rng, size=-(-b // spc))
        if spc > 1:
            chd = type(chd)(h_r=np.repeat(chd.h_r, spc, axis=0)[:b],
                            h_d=np.repeat(chd.h_d, spc, axis=0)[:b],
                            g_d=np.repeat(chd.g_d, spc)[:b],
                            f_r=np.repeat(chd.f_r, spc)[:b])

        jam = None
        if cfg.scheme == "ibf":
            slot = tx.ibf_transmit(s.real, s.imag, chd, scfg)
        elif cfg.scheme == "gebf":
            slot = tx.gebf_transmit(s, chd, scfg)
        elif cfg.scheme == "an":
            slot = tx.an_transmit(s, chd, scfg, rng)
        else:
            slot = tx.dj_transmit(s, chd, scfg)
            jam = tx.dj_jam(scfg, rng, b)

        y_r = np.einsum("bn,bn->b", chd.h_r, slot.x_t) + awgn(b, n0, rng)
        if cfg.scheme == "dj":
            y_r = y_r + chd.f_r * jam
        obs = rn.relay_observe(chd, scfg, slot, y_r, n0)

        if cfg.scheme == "ibf":
            _, relay_bits = rn.eavesdrop_llr_1d(obs.y_r_real, obs.g_r, n0,
                                                proj, subsets, rng)
        else:
            _, relay_bits = rn.eavesdrop_llr_2d(y_r, obs.eff_channel,
                                                obs.interference_var + n0,
                                                const, subsets, rng)
        dn.count_bit_errors(relay_bits, bits, relay_ctr)

        if cfg.protocol == "none":
            y_d1 = np.einsum("bn,bn->b", chd.h_d, slot.x_t) + awgn(b, n0, rng)
            det = dn.receive_gebf(chd, scfg, const, slot, y_d1, rng)
        else:
            if cfg.protocol == "af":
                rly = rn.forward_af(obs, cfg.p_r, sr2 if cfg.scheme == "ibf" else 1.0)
            elif cfg.scheme == "ibf":
                rly = rn.forward_df(obs, cfg.p_r, proj)
            else:
                rly = rn.forward_df(obs, cfg.p_r, c=const)
            if cfg.scheme == "dj":
                y_d1 = np.zeros(b, dtype=complex)
            else:
                y_d1 = np.einsum("bn,bn->b", chd.h_d, slot.x_t) + awgn(b, n0, rng)
            y_d2 = chd.g_d * rly.x_r + awgn(b, n0, rng)
            if cfg.scheme == "ibf" and cfg.protocol == "af":
                det = dn.receive_ibf_af(chd, scfg, const, obs, rly, slot, y_d1,
                                        y_d2, n0, cfg.detector, cfg.literal_eq11)
            elif cfg.scheme == "ibf":
                det = dn.receive_ibf_df(chd, scfg, const, slot, y_d1, y_d2,
                                        n0, cfg.detector)
            elif cfg.scheme == "an" and cfg.protocol == "af":
                det = dn.receive_an_af(chd, scfg, const, obs, rly, slot,
                                       y_d1, y_d2, n0)
            elif cfg.scheme == "an":
                det = dn.receive_an_df(chd, scfg, const, slot, y_d1, y_d2, n0)
            elif cfg.protocol == "af":
                det = dn.receive_dj_af(chd, scfg, const, obs, rly, jam, y_d2, n0)
            else:
                det = dn.receive_dj_df(chd, scfg, const, y_d2, n0)
        dn.count_bit_errors(det.bits, bits, dest_ctr)

    return relay_ctr.bits, relay_ctr.errors, dest_ctr.bits, dest_ctr.errors


def _worker_shares(symbols: int, workers: int):
    base, extra = divmod(symbols, workers)
    return [base + (1 if w < extra else 0) for w in range(workers)]


def run_point(cfg: ExperimentConfig, sweep_value):
    """Simulate one sweep point; returns (relay record, destination record)."""
    cfg.validate()
    p_t, n_ant = _point_params(cfg, sweep_value)
    shares = [s for s in _worker_shares(cfg.symbols, cfg.workers) if s > 0]
    if len(shares) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(_simulate_chunk, [cfg] * len(shares),
                                  [p_t] * len(shares), [n_ant] * len(shares),
                                  range(len(shares)), shares))
    else:
        parts = [_simulate_chunk(cfg, p_t, n_ant, 0, shares[0])]
    rb = sum(p[0] for p in parts)
    re = sum(p[1] for p in parts)
    db = sum(p[2] for p in parts)
    de = sum(p[3] for p in parts)
    flags = config_flags(cfg)

    def record(node, bits, errors):
        return BerRecord(scheme=cfg.scheme, protocol=cfg.protocol,
                         constellation=cfg.constellation, mapping=cfg.mapping,
                         n=n_ant, p_t=p_t, p_r=cfg.p_r, n0=cfg.n0, node=node,
                         symbols=cfg.symbols, bits=bits, errors=errors,
                         ber=errors / bits, ci99=ci_halfwidth(errors, bits),
                         seed=cfg.seed, flags=flags)

    return record("relay", rb, re), record("destination", db, de)


def append_records(path: str, records) -> None:
    """Append CSV rows in one write; create the header for a fresh file."""
    fresh = not os.path.exists(path) or os.path.getsize(path) == 0
    blob = "".join(r.csv_row() + "\n" for r in records)
    if fresh:
        blob = CSV_HEADER + "\n" + blob
    with open(path, "a", encoding="utf-8", newline="\n") as handle:
        handle.write(blob)
        handle.flush()


def run_sweep(cfg: ExperimentConfig, csv_path: str | None = None,
              progress: bool = True):
    """run_point over the configured axis; appends to csv_path when given."""
    cfg.validate()
    records = []
    for value in cfg.sweep_values:
        relay, dest = run_point(cfg, value)
        records.extend([relay, dest])
        if progress:
            print(f"[{cfg.scheme}/{cfg.protocol}] {cfg.sweep_axis}={value}: "
                  f"relay ber={relay.ber:.4f} dest ber={dest.ber:.4g}",
                  file=sys.stderr)
        if csv_path is not None:
            append_records(csv_path, [relay, dest])
    return records


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------

# 2 dB-ish steps from 0 to 16 dB over n0 = 1, ending exactly at 40
FIG2_PT_GRID = (1.0, 1.6, 2.5, 4.0, 6.3, 10.0, 16.0, 25.0, 40.0)
FIG3_N_GRID = (2, 3, 4, 5, 6, 7, 8)


def preset_configs(name: str, seed: int = 20240901, symbols: int = 100_000,
                   workers: int = 1):
    """The two shipped experiment presets, one config per scheme.

    fig2: 16-QAM balanced labels, N=4, decode-and-forward, P_r=40, P_t swept.
    fig3: 8-PSK balanced labels, P_t=P_r=100, amplify-and-forward, N swept.
    """
    common = dict(mapping="emap", seed=seed, symbols=symbols, workers=workers)
    if name == "fig2":
        return [ExperimentConfig(scheme=s, protocol="none" if s == "gebf" else "df",
                                 constellation="qam16", n=4, p_r=40.0,
                                 pt_sweep=FIG2_PT_GRID, **common)
                for s in tx.SCHEMES]
    if name == "fig3":
        return [ExperimentConfig(scheme=s, protocol="none" if s == "gebf" else "af",
                                 constellation="psk8", n=2, p_r=100.0, p_t=100.0,
                                 n_sweep=FIG3_N_GRID, **common)
                for s in tx.SCHEMES]
    raise ConfigError(f"unknown preset {name!r}")


# ---------------------------------------------------------------------------
# config file parsing (flat key = value text, unknown keys are hard errors)
# ---------------------------------------------------------------------------

_STR_KEYS = {"scheme", "protocol", "constellation", "mapping", "detector",
             "hr_perp_rule", "gebf_pencil"}
_INT_KEYS = {"n", "symbols", "seed", "workers", "symbols_per_channel"}
_FLOAT_KEYS = {"p_t", "p_r", "n0", "alpha_frac", "beta_frac", "jam_frac"}
_BOOL_KEYS = {"literal_eq11", "ibf_full_power"}
_LIST_KEYS = {"pt_sweep", "n_sweep"}


def parse_config(text: str) -> ExperimentConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        try:
            if key in _STR_KEYS:
                values[key] = val
            elif key in _INT_KEYS:
                values[key] = int(val)
            elif key in _FLOAT_KEYS:
                values[key] = float(val)
            elif key in _BOOL_KEYS:
                if val.lower() not in ("true", "false"):
                    raise ValueError(val)
                values[key] = val.lower() == "true"
            elif key in _LIST_KEYS:
                parts = [p for p in val.split(",") if p.strip()]
                caster = float if key == "pt_sweep" else int
                values[key] = tuple(caster(p) for p in parts)
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        except ConfigError:
            raise
        except ValueError as err:
            raise ConfigError(f"line {lineno}: bad value for {key}: {err}") from err
    required = {"scheme", "protocol", "constellation", "mapping", "n", "p_r"}
    missing = required - values.keys()
    if missing:
        raise ConfigError(f"missing required keys: {sorted(missing)}")
    cfg = ExperimentConfig(**values)
    cfg.validate()
    return cfg


def load_config(path: str) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_config(handle.read())
