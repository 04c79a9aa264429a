"""lvtlab: densities and local virial theorems for fermions in local potentials."""

__version__ = "0.1.0"
