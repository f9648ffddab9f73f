"""
Spectral service - Fourier multipliers on the periodic grid

Business logic for:
- Applying symbols (full transform, or real transform for even symbols)
- The averaging symbol sinc(eta z / 2) and the cutoff indicator |z| <= 2/eps
- Parity projection, inner products and norms
- Spectral derivatives and antiderivatives
"""

from typing import NamedTuple, Union

import numpy as np
from scipy import fft as sfft

from config import Config, ConsistencyError
from models import Field2, Multiplier, PeriodicGrid

ArrayOrField = Union[np.ndarray, Field2]


class FieldNorms(NamedTuple):
    l2: float
    linf: float
    h2: float


def _values(u: ArrayOrField) -> np.ndarray:
    return u.values if isinstance(u, Field2) else np.asarray(u, dtype=float)


class SpectralService:
    """Service for transform-based operators on a PeriodicGrid"""

    @staticmethod
    def apply_multiplier(field: Field2, multiplier: Multiplier, workers: int = 1,
                         tolerance: float = Config.REAL_TOLERANCE) -> Field2:
        """
        Transform, multiply by the symbol, transform back

        Args:
            field: input field
            multiplier: symbol samples on the same grid
            workers: FFT worker threads
            tolerance: allowed imaginary residue relative to the output size

        Returns:
            Real field; even symbols keep the input parity

        Raises:
            GridMismatchError: If the grids differ
            ConsistencyError: If the result is not real to tolerance
        """
        field.require_same_grid(multiplier)
        spectrum = sfft.fft(field.values, axis=-1, workers=workers)
        out = sfft.ifft(spectrum * multiplier.symbol, axis=-1, workers=workers)
        scale = max(1.0, float(np.max(np.abs(out.real), initial=0.0)))
        residue = float(np.max(np.abs(out.imag), initial=0.0))
        if residue > tolerance * scale:
            raise ConsistencyError(
                f"multiplier output has imaginary part {residue:.3e}; the symbol is not "
                f"real-valued on real input", residue / scale)
        parity = field.parity if multiplier.even else "none"
        return field.with_values(np.ascontiguousarray(out.real), parity)

    @staticmethod
    def apply_even_symbol(values: np.ndarray, half_symbol: np.ndarray, workers: int = 1) -> np.ndarray:
        """
        Apply an even real symbol sampled on the non-negative frequencies

        ``values`` may carry leading axes; ``half_symbol`` broadcasts against the
        transformed array (shape (..., N/2 + 1)).
        """
        values = np.asarray(values, dtype=float)
        n = values.shape[-1]
        spectrum = sfft.rfft(values, axis=-1, workers=workers)
        return sfft.irfft(spectrum * half_symbol, n=n, axis=-1, workers=workers)

    @staticmethod
    def avg_symbol(eta: float, grid: PeriodicGrid) -> Multiplier:
        """
        Symbol sinc(eta z / 2) of the window average over [xi - eta/2, xi + eta/2]

        eta = 0 gives the identity.
        """
        if eta < 0:
            raise ValueError("eta must be non-negative")
        return Multiplier(grid, sinc_half(eta, grid.frequencies), even=True)

    @staticmethod
    def cutoff_symbol(eps: float, grid: PeriodicGrid) -> Multiplier:
        """Indicator of |z| <= 2/eps"""
        if not eps > 0:
            raise ValueError("eps must be positive")
        return Multiplier(grid, (np.abs(grid.frequencies) <= 2.0 / eps).astype(float), even=True)

    @staticmethod
    def even_project(u: ArrayOrField) -> ArrayOrField:
        """(u(xi) + u(-xi)) / 2 through exact grid reflection"""
        if isinstance(u, Field2):
            v = u.values
            return u.with_values(0.5 * (v + v[:, u.grid.reflection]), "even")
        v = np.asarray(u, dtype=float)
        n = v.shape[-1]
        return 0.5 * (v + v[..., (-np.arange(n)) % n])

    @staticmethod
    def odd_part(u: ArrayOrField) -> np.ndarray:
        v = _values(u)
        n = v.shape[-1]
        return 0.5 * (v - v[..., (-np.arange(n)) % n])

    @staticmethod
    def inner(u: ArrayOrField, v: ArrayOrField, grid: PeriodicGrid) -> float:
        """Grid inner product h * sum u v over every component"""
        return float(grid.spacing * np.sum(_values(u) * _values(v)))

    @staticmethod
    def l2_norm(u: ArrayOrField, grid: PeriodicGrid) -> float:
        a = _values(u)
        return float(np.sqrt(grid.spacing * np.sum(a * a)))

    @staticmethod
    def norms(u: ArrayOrField, grid: PeriodicGrid = None) -> FieldNorms:
        """
        L2 (quadrature weight h), sup and H2 norms

        H2 uses the frequency weight (1 + z^2 + z^4)^(1/2).

        Args:
            u: Field2 or array (..., N)
            grid: required for plain arrays

        Returns:
            FieldNorms
        """
        grid = grid or u.grid
        a = _values(u)
        spectrum = sfft.fft(a, axis=-1)
        z = grid.frequencies
        weight = 1.0 + z ** 2 + z ** 4
        h2 = np.sqrt(grid.spacing / grid.size * np.sum(weight * np.abs(spectrum) ** 2))
        return FieldNorms(l2=SpectralService.l2_norm(a, grid),
                          linf=float(np.max(np.abs(a), initial=0.0)), h2=float(h2))

    @staticmethod
    def derivative(u: ArrayOrField, grid: PeriodicGrid = None, order: int = 1, workers: int = 1):
        """
        Spectral derivative of the given order

        The Nyquist mode is dropped for odd orders so the result stays real.
        """
        grid = grid or u.grid
        a = _values(u)
        z = grid.half_frequencies
        symbol = (1j * z) ** order
        if order % 2:
            symbol[-1] = 0.0
        out = sfft.irfft(sfft.rfft(a, axis=-1, workers=workers) * symbol, n=grid.size,
                         axis=-1, workers=workers)
        if isinstance(u, Field2):
            parity = {"even": "odd", "odd": "even"}.get(u.parity, "none") if order % 2 else u.parity
            return u.with_values(out, parity)
        return out

    @staticmethod
    def antiderivative(values: np.ndarray, grid: PeriodicGrid, workers: int = 1) -> np.ndarray:
        """
        Antiderivative vanishing at xi = 0

        Spectral antiderivative of the mean-zero part plus the ramp mean * xi, so
        the result grows linearly when the mean is non-zero.
        """
        a = np.asarray(values, dtype=float)
        spectrum = sfft.rfft(a, axis=-1, workers=workers)
        mean = spectrum[..., :1].real / grid.size
        z = grid.half_frequencies
        inverse = np.zeros_like(z, dtype=complex)
        inverse[1:-1] = 1.0 / (1j * z[1:-1])
        periodic = sfft.irfft(spectrum * inverse, n=grid.size, axis=-1, workers=workers)
        out = periodic + mean * grid.nodes
        center = grid.size // 2
        return out - out[..., center:center + 1]


def sinc_half(eta: float, z) -> np.ndarray:
    """sinc(eta z / 2) with sinc(0) = 1"""
    return np.sinc(eta * np.asarray(z, dtype=float) / (2.0 * np.pi))
