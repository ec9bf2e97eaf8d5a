"""Cross-layer RSA / RNS / lifting / convolutional-cipher link simulator."""

__version__ = "0.1.0"
