"""modassert: module-level assertion generation and desk-scale validation
for Verilog RTL designs."""

__version__ = "0.1.0"
