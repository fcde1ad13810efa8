"""Learning symmetric juntas and exact checks of their Fourier structure."""
from .boolfn import (
    Assignment,
    BooleanFunction,
    FourierSpectrum,
    SymmetricFunction,
    fourier_transform,
    level_coefficient,
    min_nonzero_order,
)

__version__ = "0.1.0"
