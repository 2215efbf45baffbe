"""Exact desk-scale models of Beilinson-Parshin adeles on semilocal curves and small posets."""

__version__ = "0.1.0"

from .errors import AdeliaError  # noqa: E402

__all__ = ["AdeliaError", "__version__"]
