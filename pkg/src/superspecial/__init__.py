"""Quaternionic hermitian class sets, Brandt matrices, and superspecial isogeny graphs."""

from .quat import (
    Quaternion,
    QuaternionAlgebra,
    MaximalOrder,
    Rational,
    algebra_for_prime,
    maximal_order,
    order_for_prime,
)

__version__ = "0.1.0"
