"""Certified descent of linked Pfister triples and split quaternion quadruples."""

from src.descent.base import BUDGET_EXHAUSTED, SUCCESS, DescentReport, LinkedTriple, QuadInstance
from src.descent.fixtures import FIXTURES, build_fixture
from src.descent.generators import GeneratorPool
from src.descent.quad import quad_descend
from src.descent.triple import triple_descend
from src.descent.verify import descent_problems, verify_descent

__all__ = [
    "BUDGET_EXHAUSTED",
    "FIXTURES",
    "SUCCESS",
    "DescentReport",
    "GeneratorPool",
    "LinkedTriple",
    "QuadInstance",
    "build_fixture",
    "descent_problems",
    "quad_descend",
    "triple_descend",
    "verify_descent",
]
