from ._core import (
    ExponentMap,
    InputError,
    NumericError,
    PhiSpec,
    TgvWeights,
    UnsupportedFamilyError,
    affine_projection,
    anisotropic_variation,
    denoise,
    load_pgm,
    luxemburg_norm,
    make_pmap,
    modular,
    save_pgm,
    tgv2,
    tgv2_dual,
)

__all__ = [
    "ExponentMap",
    "InputError",
    "NumericError",
    "PhiSpec",
    "TgvWeights",
    "UnsupportedFamilyError",
    "affine_projection",
    "anisotropic_variation",
    "denoise",
    "load_pgm",
    "luxemburg_norm",
    "make_pmap",
    "modular",
    "save_pgm",
    "tgv2",
    "tgv2_dual",
]
