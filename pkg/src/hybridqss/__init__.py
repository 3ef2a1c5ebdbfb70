"""Secret sharing of a qudit over classical and quantum shares, with exact entropic audits."""

__version__ = "0.1.0"
