from .classify import classify_rank5
from .cyclotomic import CyclotomicNumber, RootOfUnity
from .fusion import FusionRing
from .premodular import PremodularDatum, check_datum, muger_center
from .schema import CaseNode, ClassificationReport

__all__ = [
    "CaseNode",
    "ClassificationReport",
    "CyclotomicNumber",
    "FusionRing",
    "PremodularDatum",
    "RootOfUnity",
    "check_datum",
    "classify_rank5",
    "muger_center",
]

__version__ = "0.1.0"
