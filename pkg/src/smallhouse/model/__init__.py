"""Define the cyclotomic integers and the computations done on them."""

from .cyclotomic import CyclotomicInt, RootOfUnity
from .exhaust import ExhaustJob, ExhaustReport, Verdict
from .fixtures import TableFixtures
from .measures import EquivalenceKey, FamilyForm, FormTag

__all__ = [
    "CyclotomicInt",
    "EquivalenceKey",
    "ExhaustJob",
    "ExhaustReport",
    "FamilyForm",
    "FormTag",
    "RootOfUnity",
    "TableFixtures",
    "Verdict",
]
