"""Data files of the built-in model catalog (see :mod:`stlf.models.catalog`)."""
