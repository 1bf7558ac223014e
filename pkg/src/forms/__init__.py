"""Quadratic forms in characteristic 2: construction, isotropy and Witt decomposition."""

from src.forms.isotropy import (
    Found,
    IsotropyResult,
    ProvablyAnisotropic,
    SearchBudget,
    Unknown,
    isotropic_vector,
    represent,
)
from src.forms.pfister_moves import PfisterCertificate, PfisterMove, verify_pfister_certificate
from src.forms.quadform import (
    BinaryBlock,
    PfisterDesc,
    QuadForm,
    ScaledBlock,
    arf,
    evaluate,
    expand_pfister,
    sigma_S,
)
from src.forms.residue import AnisoCert, find_residue_cert, residue_anisotropy_cert, validate
from src.forms.roots import solve_quadratic, wp_preimage
from src.forms.witt import (
    WittDecomposition,
    is_hyperbolic,
    is_isometric,
    split_off_hyperbolic,
    witt_decompose,
    witt_equivalent,
)

__all__ = [
    "AnisoCert",
    "BinaryBlock",
    "Found",
    "IsotropyResult",
    "PfisterCertificate",
    "PfisterDesc",
    "PfisterMove",
    "ProvablyAnisotropic",
    "QuadForm",
    "ScaledBlock",
    "SearchBudget",
    "Unknown",
    "WittDecomposition",
    "arf",
    "evaluate",
    "expand_pfister",
    "find_residue_cert",
    "is_hyperbolic",
    "is_isometric",
    "isotropic_vector",
    "represent",
    "residue_anisotropy_cert",
    "sigma_S",
    "solve_quadratic",
    "split_off_hyperbolic",
    "validate",
    "verify_pfister_certificate",
    "witt_decompose",
    "witt_equivalent",
    "wp_preimage",
]
