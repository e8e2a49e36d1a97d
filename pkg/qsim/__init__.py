"""qsim - batch amplitude simulation of quantum circuits by partial bucket elimination."""

__version__ = "0.1.0"
