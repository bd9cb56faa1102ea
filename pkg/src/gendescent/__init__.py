"""Generalized descent algebras of finite Coxeter groups."""

__version__ = "0.1.0"
