"""Explicit spurious instances and the descent-curve falsifier."""

from services.gallery.src.instances import (
    GALLERY,
    GalleryInstance,
    GalleryReport,
    descent_curve_value,
    scroll22_example,
    scroll22_generators,
    scroll_spurious,
    scroll_spurious_generators,
    verify_instance,
    veronese_quartic_spurious,
    veronese_surface_example,
    veronese_surface_family,
)

__all__ = [
    "GALLERY",
    "GalleryInstance",
    "GalleryReport",
    "descent_curve_value",
    "scroll22_example",
    "scroll22_generators",
    "scroll_spurious",
    "scroll_spurious_generators",
    "verify_instance",
    "veronese_quartic_spurious",
    "veronese_surface_example",
    "veronese_surface_family",
]
