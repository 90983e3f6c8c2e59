"""Exact engines: integer lattices, fans, divisor classes and Cox rings."""
