"""idbsynth: synthetic identity-document barcode dataset toolkit."""

__version__ = "0.1.0"
