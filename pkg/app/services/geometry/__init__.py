from .assembly import rasterize, rotate_points, voxel_centers
from .layouts import available_layouts, load_layout, load_layout_file, spec_from_mapping

__all__ = [
    "rasterize",
    "rotate_points",
    "voxel_centers",
    "available_layouts",
    "load_layout",
    "load_layout_file",
    "spec_from_mapping",
]
