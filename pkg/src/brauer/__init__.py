"""Quaternion symbol calculus in characteristic 2."""

from src.brauer.linkage import inseparably_linked, linked_quad_to_triple, sigma_criterion
from src.brauer.slots import common_left_slot, linked_presentation
from src.brauer.splitting import (
    Division,
    Split,
    is_isomorphic,
    norm_preimage,
    recover_split_witness,
    split_test,
    split_to_trivial,
)
from src.brauer.symbols import (
    Certificate,
    ProductSplitCertificate,
    QSymbol,
    RewriteMove,
    apply_move,
    norm_form,
    verify_certificate,
    verify_product_split,
)

__all__ = [
    "Certificate",
    "Division",
    "ProductSplitCertificate",
    "QSymbol",
    "RewriteMove",
    "Split",
    "apply_move",
    "common_left_slot",
    "inseparably_linked",
    "is_isomorphic",
    "linked_presentation",
    "linked_quad_to_triple",
    "norm_form",
    "norm_preimage",
    "recover_split_witness",
    "sigma_criterion",
    "split_test",
    "split_to_trivial",
    "verify_certificate",
    "verify_product_split",
]
