"""Independent re-check of descent reports.

Nothing computed by the descent is trusted: certificates are replayed, the
extension of every descended object is recomputed through the generator map,
and the defining property over L is re-established by exact identities.
"""

import logging
from typing import Optional

from src.brauer.symbols import EACH, PRODUCT, verify_certificate, verify_product_split
from src.config import settings
from src.descent.base import DescentReport, LinkedTriple, Original, QuadInstance
from src.exceptions import PfisterError
from src.forms.pfister_moves import verify_pfister_certificate
from src.forms.quadform import expand_pfister, is_zero_vector
from src.forms.residue import validate

logger = logging.getLogger(__name__)


def _generator_problems(report: DescentReport, limit: int) -> list[str]:
    problems = []
    L = report.descended_field
    if L is None:
        return ["report has no descent field"]
    if L.k != report.field.k:
        problems.append(f"descent field {L} has another constant field than {report.field}")
    if len(L.variables) != len(report.generators):
        problems.append(f"{len(L.variables)} variables in L but {len(report.generators)} generators")
    if len(report.generators) > limit:
        problems.append(f"{len(report.generators)} generators exceed the bound {limit}")
    seen = []
    for g in report.generators:
        if g.field != report.field:
            problems.append(f"generator {g} is not in {report.field}")
        elif g.is_constant():
            problems.append(f"generator {g} is a constant")
        elif g in seen:
            problems.append(f"generator {g} is repeated")
        seen.append(g)
    return problems


def _triple_problems(report: DescentReport, triple: LinkedTriple) -> list[str]:
    problems = _generator_problems(report, triple.n + 1)
    if problems:
        return problems
    F, L, images = report.field, report.descended_field, report.images()
    forms = triple.forms()
    if len(report.descended) != 3 or len(report.certificates) != 3:
        return ["a triple report needs three descended forms and three certificates"]

    for i, (phi, psi, cert) in enumerate(zip(forms, report.descended, report.certificates)):
        if psi.field != L:
            problems.append(f"psi_{i + 1} is not defined over L")
            continue
        if cert.start != phi:
            problems.append(f"certificate {i + 1} does not start at phi_{i + 1}")
        if not verify_pfister_certificate(cert):
            problems.append(f"certificate {i + 1} does not replay")
        if cert.end != psi.map_entries(F, images):
            problems.append(f"certificate {i + 1} does not end at the extension of psi_{i + 1}")

    first, second, third = report.descended
    if problems:
        return problems
    for psi in (second, third):
        if psi.bilinear_slots[1:] != first.bilinear_slots[1:] or psi.as_slot != first.as_slot:
            problems.append("descended forms do not share pi")
    if len(first.bilinear_slots) != triple.n - 1:
        problems.append("descended forms have the wrong fold")
    elif third.bilinear_slots[0] != first.bilinear_slots[0] * second.bilinear_slots[0]:
        problems.append("third descended form is not the product of the first two")

    if report.rho != triple.rho:
        problems.append("recorded Witt class representative differs from <<b1, b2; pi]]")
    rho_form = expand_pfister(triple.rho)
    if report.rho_certificate is not None:
        if report.rho_certificate.form != rho_form or not validate(report.rho_certificate):
            problems.append("anisotropy certificate of rho does not replay")
    elif report.rho_vector is not None:
        v = report.rho_vector
        if len(v) != rho_form.dim or is_zero_vector(v) or not rho_form.evaluate(v).is_zero():
            problems.append("recorded vector is not isotropic for rho")
        if len(report.generators) > triple.n:
            problems.append("rho is isotropic but more than n generators were used")
    else:
        problems.append("no evidence on the isotropy of rho")
    return problems


def _quad_problems(report: DescentReport, instance: QuadInstance) -> list[str]:
    problems = _generator_problems(report, settings.MAX_QUAD_GENERATORS)
    if problems:
        return problems
    F, L, images = report.field, report.descended_field, report.images()
    if len(report.descended) != 4 or len(report.certificates) != 4:
        return ["a quad report needs four descended symbols and four certificates"]

    for i, (q, h, cert) in enumerate(zip(instance.symbols, report.descended, report.certificates)):
        if h.field != L:
            problems.append(f"H_{i + 1} is not defined over L")
            continue
        if cert.preserves != EACH:
            problems.append(f"certificate {i + 1} is not per-symbol")
        if cert.start != (q,):
            problems.append(f"certificate {i + 1} does not start at Q_{i + 1}")
        if not verify_certificate(cert):
            problems.append(f"certificate {i + 1} does not replay")
        if cert.end != (h.map_entries(F, images),):
            problems.append(f"certificate {i + 1} does not end at the extension of H_{i + 1}")

    product = report.product_certificate
    if product is None:
        problems.append("no certificate that the product over L is split")
    else:
        if product.certificate.preserves != PRODUCT or product.certificate.start != tuple(report.descended):
            problems.append("product certificate does not start at the descended symbols")
        if not verify_product_split(product):
            problems.append("product certificate does not replay")
    return problems


def descent_problems(report: DescentReport, original: Original) -> list[str]:
    """Human-readable reasons why a report does not certify a descent of `original`."""
    if not report.succeeded:
        return [f"status is {report.status}"]
    try:
        if report.kind == "triple" and isinstance(original, LinkedTriple):
            if original.field != report.field:
                return ["report and instance live in different fields"]
            return _triple_problems(report, original)
        if report.kind == "quad" and isinstance(original, QuadInstance):
            if original.field != report.field:
                return ["report and instance live in different fields"]
            return _quad_problems(report, original)
    except (PfisterError, ArithmeticError) as e:
        return [f"re-check failed: {e}"]
    return [f"a {report.kind} report cannot describe a {type(original).__name__}"]


def verify_descent(report: DescentReport, original: Optional[Original]) -> bool:
    """
    Replay a descent report against the instance it claims to descend.

    Args:
        report: Output of triple_descend or quad_descend (possibly read back from JSON)
        original: The LinkedTriple or QuadInstance

    Returns:
        True iff every check passes
    """
    if original is None:
        logger.info("Descent verification: no instance given")
        return False
    problems = descent_problems(report, original)
    for problem in problems:
        logger.info(f"Descent verification: {problem}")
    return not problems
