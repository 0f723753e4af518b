"""Define the package importable objects."""

from .model.cyclotomic import CyclotomicInt, RootOfUnity, from_sparse

__all__ = ["CyclotomicInt", "RootOfUnity", "from_sparse"]
