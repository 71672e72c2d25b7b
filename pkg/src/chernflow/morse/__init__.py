"""Morse, twisted, bulk-deformed and interpolating complexes built from count tables."""
from .bulk import (IdentityReport, assemble_by_clusters, assemble_by_interleavings, assemblers_agree,
                   build_bulk_complex, contracted_bulk_table, morse_complex, required_entries,
                   validate_boundary_identity)
from .interpolate import InterpolationResult, build_interpolating_complex, interpolating_ells
from .simplex import simplex_from_twisted_data
from .tables import CountTables, FloerSkeleton, MorseModel
from .twisted import build_ch_bulk_complex, build_twisted_complex, ch_integral_table, stokes_check

__all__ = [
    "CountTables", "FloerSkeleton", "IdentityReport", "InterpolationResult", "MorseModel",
    "assemble_by_clusters", "assemble_by_interleavings", "assemblers_agree", "build_bulk_complex",
    "build_ch_bulk_complex", "build_interpolating_complex", "build_twisted_complex",
    "ch_integral_table", "contracted_bulk_table", "interpolating_ells", "morse_complex",
    "required_entries", "simplex_from_twisted_data", "stokes_check", "validate_boundary_identity",
]
