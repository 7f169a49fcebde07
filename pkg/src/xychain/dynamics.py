"""Exact reduced dynamics of the probe spin.

Two independent routes to the same number:

* ``pz_closed_form`` / ``pz_trajectory``: the O(N) free-fermion closed
  form, half of p0z times the sum of squared sector averages of
  cos(E_q t) and (eps_q/E_q) sin(E_q t).
* ``pz_config_sum``: brute-force double sum over fermionic occupation
  configurations using the analytic matrix elements of the probe sz
  between many-body eigenstates.  Exponential in N, capped, and kept as
  an independently coded oracle for the closed form.

Both act on an infinite-temperature ring; the probe starts with
longitudinal polarization p0z.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .chain import ChainParams, MomentumSector, Parity, SpectralTable, build_sectors, spectral_table
from .errors import CapExceededError, ConfigError, XYChainError

_KNOWN_METHODS = frozenset({"closed_form", "config_sum", "niemeijer", "ed_oracle"})

# Cap the time-axis chunk so the (nt, N) phase matrices stay ~32 MB.
_CHUNK_ELEMENTS = 1 << 22


@dataclass(frozen=True)
class ABSums:
    """Sector averages entering the closed form at a single time."""

    t: float
    A_odd: float
    A_even: float
    B_odd: float
    B_even: float

    @property
    def sum_of_squares(self) -> float:
        return self.A_odd**2 + self.A_even**2 + self.B_odd**2 + self.B_even**2


@dataclass
class Trajectory:
    """Time grid plus per-time polarization samples.

    samples is (n,) for pz-only records or (n, 3) for full Bloch vectors.
    """

    grid: np.ndarray
    samples: np.ndarray
    params: ChainParams
    method: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=np.float64)
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.grid.ndim != 1:
            raise ConfigError("grid must be one-dimensional")
        if not np.all(np.isfinite(self.grid)) or not np.all(np.isfinite(self.samples)):
            raise ConfigError("trajectory contains non-finite values")
        if np.any(np.diff(self.grid) <= 0):
            raise ConfigError("grid must be strictly increasing")
        if self.samples.shape[0] != self.grid.size:
            raise ConfigError("samples and grid length mismatch")
        if self.samples.ndim == 2:
            if self.samples.shape[1] != 3:
                raise ConfigError("vector samples must have three components")
            mag = np.sqrt((self.samples**2).sum(axis=1))
        elif self.samples.ndim == 1:
            mag = np.abs(self.samples)
        else:
            raise ConfigError("samples must be (n,) or (n, 3)")
        if mag.size and mag.max() > 1.0 + 1e-9:
            raise ConfigError(f"polarization left the Bloch ball: |p| = {mag.max()}")
        if self.method not in _KNOWN_METHODS:
            raise ConfigError(f"unknown method tag {self.method!r}")

    @property
    def n_samples(self) -> int:
        return int(self.grid.size)

    @property
    def is_vector(self) -> bool:
        return self.samples.ndim == 2


def _check_table_pair(table_odd: SpectralTable, table_even: SpectralTable) -> None:
    if table_odd.sector.parity is not Parity.ODD or table_even.sector.parity is not Parity.EVEN:
        raise ConfigError("tables must be (odd, even) in that order")
    if table_odd.params != table_even.params:
        raise ConfigError("tables built from different parameters")


def _ab_arrays(table_odd: SpectralTable, table_even: SpectralTable, grid: np.ndarray):
    """Vectorized sector averages over a time grid, chunked along time.

    Chunking never changes results: each time row is reduced
    independently, so outputs are bit-identical to a single-call layout.
    """
    N = table_odd.params.N
    nt = grid.size
    out = []
    step = max(1, _CHUNK_ELEMENTS // max(N, 1))
    for tab in (table_odd, table_even):
        A = np.empty(nt)
        B = np.empty(nt)
        for lo in range(0, nt, step):
            hi = min(lo + step, nt)
            phases = np.outer(grid[lo:hi], tab.E)
            A[lo:hi] = np.cos(phases).sum(axis=-1)
            np.sin(phases, out=phases)
            B[lo:hi] = (tab.cos_theta * phases).sum(axis=-1)
        out.append(A / N)
        out.append(B / N)
    return out[0], out[2], out[1], out[3]  # A_odd, A_even, B_odd, B_even


def ab_sums(table_odd: SpectralTable, table_even: SpectralTable, t: float) -> ABSums:
    """Sector averages at one time; exact (1, 1, 0, 0) at t = 0."""
    _check_table_pair(table_odd, table_even)
    grid = np.asarray([float(t)])
    Ao, Ae, Bo, Be = _ab_arrays(table_odd, table_even, grid)
    return ABSums(float(t), float(Ao[0]), float(Ae[0]), float(Bo[0]), float(Be[0]))


def pz_closed_form(params: ChainParams, p0z: float, t: float) -> float:
    """Probe pz at time t for the infinite-temperature ring."""
    odd, even = build_sectors(params)
    s = ab_sums(spectral_table(params, odd), spectral_table(params, even), t)
    return 0.5 * p0z * s.sum_of_squares


def pz_trajectory(params: ChainParams, p0z: float, grid) -> Trajectory:
    """Closed-form pz over a grid; pointwise bit-identical to pz_closed_form."""
    grid = np.asarray(grid, dtype=np.float64)
    odd, even = build_sectors(params)
    Ao, Ae, Bo, Be = _ab_arrays(spectral_table(params, odd), spectral_table(params, even), grid)
    pz = 0.5 * p0z * (Ao * Ao + Ae * Ae + Bo * Bo + Be * Be)
    meta = {"bath": "infinite_T", "p0z": float(p0z)}
    return Trajectory(grid, pz, params, "closed_form", meta)


@dataclass(frozen=True)
class FermionConfig:
    """A set of occupied momenta (as q2 ints) in one parity sector.

    Odd occupation numbers live in the odd sector and vice versa; the
    constructor enforces that and the int-parity convention of q2.
    """

    parity: Parity
    occupied_q2: tuple[int, ...]

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.occupied_q2, self.occupied_q2[1:])):
            raise ConfigError("occupied momenta must be strictly increasing")
        want = Parity.ODD if len(self.occupied_q2) % 2 else Parity.EVEN
        if want is not self.parity:
            raise ConfigError(
                f"{len(self.occupied_q2)} occupied modes cannot live in the {self.parity.value} sector"
            )
        q2_should_be_odd = self.parity is Parity.EVEN
        if any((v % 2 == 1) != q2_should_be_odd for v in self.occupied_q2):
            raise ConfigError("occupied q2 values do not match the sector's momentum grid")

    @classmethod
    def from_momenta(cls, momenta) -> "FermionConfig":
        from .chain import _as_q2

        q2 = tuple(sorted(_as_q2(m) for m in momenta))
        parity = Parity.ODD if len(q2) % 2 else Parity.EVEN
        return cls(parity, q2)

    @property
    def M(self) -> int:
        return len(self.occupied_q2)


class MatElemKind(Enum):
    SWAP = "swap"
    PAIR_CREATE = "pair_create"


def _occupied_indices(config: FermionConfig, sector: MomentumSector) -> np.ndarray:
    if config.parity is not sector.parity:
        raise ConfigError("configuration and table belong to different parity sectors")
    pos = {q2: i for i, q2 in enumerate(sector.q2)}
    try:
        return np.array([pos[v] for v in config.occupied_q2], dtype=np.intp)
    except KeyError as bad:
        raise ConfigError(f"momentum {bad.args[0]}/2 not in sector (N={sector.N})") from None


def matelem_diagonal(config: FermionConfig, table: SpectralTable) -> float:
    """Probe sz expectation in one many-body eigenstate.

    (1/N) * [sum over occupied cos(theta) - sum over empty cos(theta)].
    """
    occ = _occupied_indices(config, table.sector)
    c = np.cos(table.theta)
    return float((2.0 * c[occ].sum() - c.sum()) / table.params.N)


def matelem_offdiag(kind: MatElemKind, q, qtilde, table: SpectralTable) -> float:
    """|probe-sz matrix element| between eigenstates differing in two slots.

    SWAP: one occupied momentum moved from q to qtilde (same sector);
    PAIR_CREATE: momenta q and qtilde both added (or both removed).
    """
    i = table.sector.index_of(q)
    j = table.sector.index_of(qtilde)
    if i == j:
        raise ConfigError("off-diagonal element needs two distinct momenta")
    N = table.params.N
    ti, tj = table.theta[i], table.theta[j]
    if kind is MatElemKind.SWAP:
        return abs((2.0 / N) * np.cos(0.5 * (ti + tj)))
    if kind is MatElemKind.PAIR_CREATE:
        return abs((2.0 / N) * np.sin(0.5 * (ti - tj)))
    raise ConfigError(f"unknown matrix-element kind {kind!r}")


DEFAULT_CONFIG_SUM_CAP = 10


def pz_config_sum(params: ChainParams, p0z: float, t: float, cap: int = DEFAULT_CONFIG_SUM_CAP) -> float:
    """Probe pz by explicit sum over all pairs of occupation configurations.

    2^-N p0z sum_{Q,Qt} |<Qt|sz|Q>|^2 exp(-i(E_Q - E_Qt) t), with the
    selection rules baked in: within a parity sector only the diagonal,
    single swaps, and pair add/remove contribute.  Cost ~ 2^N * N^2.
    """
    N = params.N
    if N > cap:
        raise CapExceededError(f"config sum at N={N} exceeds cap {cap} (2^{N} configurations)")
    total = 0.0 + 0.0j
    for sector in build_sectors(params):
        tab = spectral_table(params, sector)
        cos_th = np.cos(tab.theta)
        cos_all = cos_th.sum()
        half_sum = 0.5 * (tab.theta[:, None] + tab.theta[None, :])
        half_diff = 0.5 * (tab.theta[:, None] - tab.theta[None, :])
        swap_sq = ((2.0 / N) * np.cos(half_sum)) ** 2
        pair_sq = ((2.0 / N) * np.sin(half_diff)) ** 2
        u = np.exp(-1j * tab.E * float(t))
        swap_phase = np.outer(u, u.conj())  # exp(-i(E_a - E_b) t)
        pair_phase = np.outer(u, u)         # exp(-i(E_a + E_b) t)
        keep_odd = sector.parity is Parity.ODD
        idx = np.arange(N)
        for mask in range(1 << N):
            bits = (mask >> idx) & 1
            if bool(bits.sum() % 2) != keep_odd:
                continue
            occ = idx[bits == 1]
            emp = idx[bits == 0]
            diag = (2.0 * cos_th[occ].sum() - cos_all) / N
            total += diag * diag
            if occ.size and emp.size:
                block = np.ix_(occ, emp)
                total += (swap_sq[block] * swap_phase[block]).sum()
            if occ.size > 1:
                block = np.ix_(occ, occ)
                total += 0.5 * (pair_sq[block] * pair_phase[block]).sum()
            if emp.size > 1:
                block = np.ix_(emp, emp)
                total += 0.5 * (pair_sq[block] * pair_phase[block].conj()).sum()
    if abs(total.imag) > 1e-10:
        raise XYChainError(f"configuration sum left an imaginary residue {total.imag:.3e}")
    return float(p0z * total.real / 2.0**N)
