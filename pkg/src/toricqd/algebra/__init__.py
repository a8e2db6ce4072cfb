from toricqd.algebra.groebner import IdealNormalizer, groebner_basis, reduce, standard_monomial_basis
from toricqd.algebra.polynomial import Polynomial

__all__ = ["IdealNormalizer", "Polynomial", "groebner_basis", "reduce", "standard_monomial_basis"]
