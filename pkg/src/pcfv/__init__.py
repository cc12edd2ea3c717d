"""Fine-grained call-by-value PCF with exact finite sheaf-model semantics."""

__version__ = "0.1.0"
