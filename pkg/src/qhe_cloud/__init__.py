"""Additively homomorphic encryption schemes with an offloaded addition service.

Three schemes share one client/cloud protocol:

* ``chen``  -- McEliece-style scheme over Hamming(7,4) codes (XOR homomorphic)
* ``gsw``   -- Gentry-Sahai-Waters LWE scheme (additive mod q)
* ``qotp``  -- quantum one-time pad on basis-state registers (CNOT parity)

In all three the client precomputes whatever the cloud cannot (the carry for
the XOR schemes), ships ciphertexts to ``POST /process`` and decrypts the
combined result locally.
"""

__version__ = "0.1.0"

SCHEMES = ("chen", "gsw", "qotp")


class HEError(Exception):
    """Base class for errors raised by this package."""


class ShapeError(HEError, ValueError):
    """Operand dimensions, moduli or lengths do not line up."""


class ProtocolError(HEError):
    """The addition service could not be reached or answered with an error."""

    def __init__(self, message, status=None):
        super().__init__(message)
        self.status = status
