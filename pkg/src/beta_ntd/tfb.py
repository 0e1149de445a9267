"""
Barwise tensorization of spectrograms.

A feature x time spectrogram plus a grid of bar boundary times becomes a
third-order tensor with modes (feature, in-bar time, bar): each bar is
sampled at a fixed number of equally spaced positions and the nearest
spectrogram frame is taken at each, so tensor entries are always a subset
of spectrogram entries.

Also provides a triangular Mel filterbank and the nonnegative log
compression log(x + 1).
"""

from dataclasses import dataclass

import numpy as np

from .errors import ParseError


@dataclass
class Spectrogram:
    """Nonnegative bands x frames matrix with a uniform hop in seconds;
    frame f sits at time f * hop_seconds."""

    data: np.ndarray
    hop_seconds: float

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float64)
        if self.data.ndim != 2:
            raise ValueError(f"spectrogram data must be 2D, got ndim={self.data.ndim}")
        if np.any(self.data < 0):
            raise ValueError("spectrogram data must be nonnegative")
        if self.hop_seconds <= 0:
            raise ValueError(f"hop_seconds must be positive, got {self.hop_seconds}")

    @property
    def bands(self):
        return self.data.shape[0]

    @property
    def frames(self):
        return self.data.shape[1]


@dataclass
class BarGrid:
    """Strictly increasing bar boundary times in seconds; n boundaries
    delimit n - 1 bars."""

    boundaries: np.ndarray

    def __post_init__(self):
        self.boundaries = np.asarray(self.boundaries, dtype=np.float64)
        if self.boundaries.ndim != 1 or self.boundaries.size < 2:
            raise ValueError("bar grid needs at least 2 boundary times")
        if self.boundaries[0] < 0:
            raise ValueError("bar boundaries must start at time >= 0")
        if np.any(np.diff(self.boundaries) <= 0):
            raise ValueError("bar boundaries must be strictly increasing")

    @property
    def bar_count(self):
        return self.boundaries.size - 1


@dataclass
class MelBank:
    """Triangular filterbank: n_filters x (n_fft/2 + 1) nonnegative weights."""

    weights: np.ndarray
    f_min: float
    f_max: float
    sample_rate: float
    n_fft: int

    @property
    def n_filters(self):
        return self.weights.shape[0]


def hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


def mel_filterbank(n_filters, f_min, f_max, sample_rate, n_fft):
    """
    Triangular filters with centers equally spaced on the Mel scale
    between f_min and f_max, peak height 1 (no area normalization).

    Each row rises linearly from one neighboring center to its own and
    falls to the next, evaluated at the FFT bin frequencies
    ``i * sample_rate / n_fft`` for i = 0 .. n_fft/2.
    """
    if n_filters < 1:
        raise ValueError(f"n_filters must be >= 1, got {n_filters}")
    if not (0 <= f_min < f_max <= sample_rate / 2):
        raise ValueError(
            f"need 0 <= f_min < f_max <= sample_rate/2, got "
            f"f_min={f_min}, f_max={f_max}, sample_rate={sample_rate}"
        )
    edges_hz = mel_to_hz(np.linspace(hz_to_mel(f_min), hz_to_mel(f_max), n_filters + 2))
    bin_freqs = np.arange(n_fft // 2 + 1) * (sample_rate / n_fft)
    lo = edges_hz[:-2, None]
    center = edges_hz[1:-1, None]
    hi = edges_hz[2:, None]
    rising = (bin_freqs[None, :] - lo) / (center - lo)
    falling = (hi - bin_freqs[None, :]) / (hi - center)
    weights = np.clip(np.minimum(rising, falling), 0.0, None)
    return MelBank(weights, float(f_min), float(f_max), float(sample_rate), int(n_fft))


def apply_mel(spec, bank):
    """Aggregate spectrogram bands through the filterbank; the time axis
    is unchanged."""
    expected = bank.n_fft // 2 + 1
    if spec.bands != expected:
        raise ValueError(
            f"spectrogram has {spec.bands} bands, filterbank expects {expected}"
        )
    return Spectrogram(bank.weights @ spec.data, spec.hop_seconds)


def nnlms(spec):
    """Entrywise log(x + 1); nonnegative and order-preserving."""
    if np.any(spec.data < 0):
        raise ValueError("nnlms requires nonnegative input")
    return Spectrogram(np.log1p(spec.data), spec.hop_seconds)


def build_tfb(spec, bars, frames_per_bar=96):
    """
    Build the (feature, in-bar time, bar) tensor.

    For bar b spanning [t_b, t_{b+1}) the sample positions are
    ``t_b + (i + 0.5) * (t_{b+1} - t_b) / frames_per_bar``; each position
    takes the nearest spectrogram frame, ties broken toward the earlier
    frame so hop-aligned bars reproduce their frames exactly.
    """
    if frames_per_bar < 1:
        raise ValueError(f"frames_per_bar must be >= 1, got {frames_per_bar}")
    hop = spec.hop_seconds
    span = spec.frames * hop
    tol = 1e-9 * max(span, 1.0)
    out = np.empty((spec.bands, frames_per_bar, bars.bar_count))
    offsets = (np.arange(frames_per_bar) + 0.5) / frames_per_bar
    for b in range(bars.bar_count):
        t0, t1 = bars.boundaries[b], bars.boundaries[b + 1]
        if t0 < -tol or t1 > span + tol:
            raise ValueError(
                f"bar {b} [{t0}, {t1}] lies outside the spectrogram span "
                f"[0, {span}]"
            )
        if t1 - t0 < hop:
            raise ValueError(f"bar {b} spans less than one hop")
        positions = t0 + offsets * (t1 - t0)
        # ceil(p - 0.5) rounds to nearest with ties toward the earlier
        # frame; the slack absorbs float error in hop-aligned positions
        idx = np.ceil(positions / hop - 0.5 - 1e-9).astype(int)
        idx = np.clip(idx, 0, spec.frames - 1)
        out[:, :, b] = spec.data[:, idx]
    return out


# ---------------------------------------------------------------------------
# File formats


def write_spectrogram(path, spec):
    """Header ``ntd-spec v1 <bands> <frames> <hop_seconds>`` then row-major
    values, one band per line."""
    with open(path, "w") as fh:
        fh.write(f"ntd-spec v1 {spec.bands} {spec.frames} {spec.hop_seconds:.17g}\n")
        for row in spec.data:
            fh.write(" ".join(f"{v:.17g}" for v in row) + "\n")


def read_spectrogram(path):
    with open(path) as fh:
        parts = fh.readline().split()
        if len(parts) != 5 or parts[0] != "ntd-spec" or parts[1] != "v1":
            raise ParseError(
                f"{path}:1: expected header 'ntd-spec v1 <bands> <frames> <hop_seconds>'"
            )
        try:
            bands, frames = int(parts[2]), int(parts[3])
            hop = float(parts[4])
        except ValueError:
            raise ParseError(f"{path}:1: malformed header fields") from None
        try:
            data = np.array(fh.read().split(), dtype=np.float64)
        except ValueError:
            raise ParseError(f"{path}: malformed numeric data") from None
    if data.size != bands * frames:
        raise ParseError(f"{path}: expected {bands * frames} values, found {data.size}")
    if not np.all(np.isfinite(data)) or np.any(data < 0):
        raise ParseError(f"{path}: values must be finite and nonnegative")
    return Spectrogram(data.reshape(bands, frames), hop)


def read_bars(path):
    """One boundary time (seconds) per line, strictly increasing."""
    times = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                t = float(line)
            except ValueError:
                raise ParseError(f"{path}:{lineno}: not a number: {line!r}") from None
            if times and t <= times[-1]:
                raise ParseError(
                    f"{path}:{lineno}: boundary {t} not strictly increasing"
                )
            times.append(t)
    if len(times) < 2:
        raise ParseError(f"{path}: need at least 2 boundary times")
    return BarGrid(np.array(times))


def write_bars(path, bars):
    with open(path, "w") as fh:
        for t in bars.boundaries:
            fh.write(f"{t:.17g}\n")
