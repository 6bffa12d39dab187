"""Exact computations for the Polishchuk operator, surface gluing, trivalent graphs and FZ relations."""

__version__ = "0.1.0"
