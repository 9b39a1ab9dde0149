"""Zig-zag witnesses on posets with involution and a checkable sector calculus."""

__version__ = "0.1.0"
