"""Fourier analysis of a sweep record: spectra, peaks, oracle matching.

The transform is the plain sum f(nu) = sum_n (P_n - 1/2) exp(-i 2*pi*nu*tau_n)
evaluated on an arbitrary frequency grid (dense grids act like zero padding).
A constant offset away from 1/2 survives the subtraction and piles up near
nu = 0; that region is excluded from peak picking but always reported.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .oracle import GapTable
from .protocol import RamseySeries, SweepGrid

_DFT_CHUNK = 512


@dataclass(frozen=True)
class Spectrum:
    """Complex transform values on a strictly ascending frequency grid (GHz)."""

    nu_grid: np.ndarray
    values: np.ndarray
    source_grid: SweepGrid

    def __post_init__(self):
        nu = np.asarray(self.nu_grid, dtype=float)
        vals = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "nu_grid", nu)
        object.__setattr__(self, "values", vals)
        if nu.ndim != 1 or nu.size == 0:
            raise ValueError("frequency grid must be a non-empty vector")
        if nu.size >= 2 and not np.all(np.diff(nu) > 0):
            raise ValueError("frequency grid must be strictly ascending")
        if vals.shape != nu.shape:
            raise ValueError("values and nu_grid must have equal length")
        nu.setflags(write=False)
        vals.setflags(write=False)

    def resolution(self) -> float:
        """Rayleigh resolution of the underlying sweep, 1/(t_max - t_min)."""
        return 1.0 / (self.source_grid.t_max_ns - self.source_grid.t_min_ns)


@dataclass(frozen=True)
class Peak:
    """One spectral peak; refined_nu_ghz falls back to nu_ghz when the
    three-point refinement is unavailable (boundary or degenerate)."""

    nu_ghz: float
    magnitude: float
    refined_nu_ghz: float
    refined: bool
    grid_index: int


@dataclass(frozen=True)
class GapMatch:
    """Nearest oracle gap for a peak; `shared` marks a gap claimed by
    more than one peak."""

    level_pair: tuple[int, int]
    gap_ghz: float
    delta_ghz: float
    shared: bool = False


@dataclass(frozen=True)
class PeakReport:
    """Detected peaks (descending magnitude), their oracle matches, and the
    excluded DC region's maximum (never silently dropped)."""

    peaks: tuple[Peak, ...]
    oracle_matches: tuple[GapMatch | None, ...]
    dc_exclusion_ghz: float
    dc_max_magnitude: float
    dc_max_nu_ghz: float


def _uniform_spacing(taus: np.ndarray) -> float | None:
    spacing = np.diff(taus)
    step = spacing[0]
    return float(step) if np.max(np.abs(spacing - step)) <= 1e-6 * step else None


def dft(series: RamseySeries, nu_grid: np.ndarray) -> Spectrum:
    """Evaluate the offset-subtracted transform on every grid frequency."""
    nu = np.asarray(nu_grid, dtype=float)
    if nu.size == 0:
        raise ValueError("frequency grid is empty")
    if series.taus.size < 2:
        raise ValueError("need at least two sweep records")
    centered = series.probabilities - 0.5
    step = _uniform_spacing(series.taus)
    if step is not None:
        # uniform grid: Horner evaluation of sum_n p_n z^n with
        # z = exp(-i 2 pi nu d_tau), avoiding the dense phase matrix
        z = np.exp(-1j * 2 * np.pi * nu * step)
        values = np.zeros(nu.size, dtype=complex)
        for p in centered[::-1]:
            values *= z
            values += p
        values *= np.exp(-1j * 2 * np.pi * nu * series.taus[0])
    else:
        values = np.empty(nu.size, dtype=complex)
        for start in range(0, nu.size, _DFT_CHUNK):
            block = nu[start : start + _DFT_CHUNK]
            kernel = np.exp(-1j * 2 * np.pi * np.outer(block, series.taus))
            values[start : start + _DFT_CHUNK] = kernel @ centered
    source = SweepGrid(series.taus[0], series.taus[-1], series.taus.size)
    return Spectrum(nu, values, source)


def find_peaks(
    spectrum: Spectrum,
    dc_exclusion: float,
    threshold_rel: float,
    min_separation: float | None = None,
) -> PeakReport:
    """Local maxima of |f| above dc_exclusion and threshold_rel * band max.

    Maxima closer than `min_separation` (default 5x the sweep resolution) are
    clustered and only the largest survives; a finite-window cosine otherwise
    reports its own sidelobes as spurious peaks.
    """
    if dc_exclusion < 0:
        raise ValueError("dc_exclusion must be >= 0")
    if not 0 < threshold_rel <= 1:
        raise ValueError("threshold_rel must lie in (0, 1]")
    if min_separation is None:
        min_separation = 5.0 * spectrum.resolution()

    mag = np.abs(spectrum.values)
    nu = spectrum.nu_grid
    included = nu > dc_exclusion

    dc_mask = ~included
    if np.any(dc_mask):
        dc_idx = int(np.argmax(np.where(dc_mask, mag, -np.inf)))
        dc_max, dc_nu = float(mag[dc_idx]), float(nu[dc_idx])
    else:
        dc_max, dc_nu = 0.0, 0.0

    peaks: list[Peak] = []
    if np.any(included):
        band_max = float(mag[included].max())
        threshold = threshold_rel * band_max
        interior = np.zeros_like(included)
        interior[1:-1] = (mag[1:-1] > mag[:-2]) & (mag[1:-1] >= mag[2:])
        candidates = np.flatnonzero(interior & included & (mag >= threshold))
        kept: list[int] = []
        for idx in sorted(candidates, key=lambda i: -mag[i]):
            if all(abs(nu[idx] - nu[j]) >= min_separation for j in kept):
                kept.append(idx)
        peaks = [
            Peak(float(nu[i]), float(mag[i]), float(nu[i]), False, int(i)) for i in kept
        ]

    return PeakReport(
        peaks=tuple(peaks),
        oracle_matches=tuple(None for _ in peaks),
        dc_exclusion_ghz=float(dc_exclusion),
        dc_max_magnitude=dc_max,
        dc_max_nu_ghz=dc_nu,
    )


def refine_peak(spectrum: Spectrum, grid_index: int) -> tuple[float, bool]:
    """Three-point parabolic interpolation of |f| around a grid maximum.

    Returns (refined_nu, True), or (raw_nu, False) for boundary or degenerate
    (flat) neighbourhoods.
    """
    mag = np.abs(spectrum.values)
    nu = spectrum.nu_grid
    i = grid_index
    if i <= 0 or i >= nu.size - 1:
        return float(nu[i]), False
    y0, y1, y2 = mag[i - 1], mag[i], mag[i + 1]
    denom = y0 - 2 * y1 + y2
    if denom == 0:
        return float(nu[i]), False
    shift = 0.5 * (y0 - y2) / denom
    shift = float(np.clip(shift, -1.0, 1.0))  # stay within one grid step
    step = (nu[i + 1] - nu[i - 1]) / 2
    return float(nu[i] + shift * step), True


def refine_report(spectrum: Spectrum, report: PeakReport) -> PeakReport:
    """Apply refine_peak to every detected peak."""
    refined = []
    for peak in report.peaks:
        value, ok = refine_peak(spectrum, peak.grid_index)
        refined.append(replace(peak, refined_nu_ghz=value, refined=ok))
    return replace(report, peaks=tuple(refined))


def match_to_oracle(report: PeakReport, gap_table: GapTable, tolerance: float) -> PeakReport:
    """Attach the nearest oracle gap within `tolerance` to each peak.

    Peaks with no gap in range stay unmatched (None); a gap claimed by several
    peaks is flagged `shared` on every claimant.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be > 0")
    matches: list[GapMatch | None] = []
    for peak in report.peaks:
        best: GapMatch | None = None
        for i, j, value in gap_table.entries:
            delta = abs(peak.refined_nu_ghz - value)
            if delta <= tolerance and (best is None or delta < best.delta_ghz):
                best = GapMatch((i, j), value, delta)
        matches.append(best)
    claimed: dict[tuple[int, int], int] = {}
    for match in matches:
        if match is not None:
            claimed[match.level_pair] = claimed.get(match.level_pair, 0) + 1
    matches = [
        replace(m, shared=claimed[m.level_pair] > 1) if m is not None else None
        for m in matches
    ]
    return replace(report, oracle_matches=tuple(matches))
