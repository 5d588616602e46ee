"""Equivariant motion planners on spheres and products, with verification."""

from ppsbounds.planner.spheres import (
    Path,
    PlannerRule,
    SpherePlanner,
    even_sphere_planner,
    odd_sphere_planner,
    pairing_field,
    tc_g_sphere,
)
from ppsbounds.planner.product import (
    ProductPlanner,
    product_planner,
    tc_g_product_bound,
    tc_g_sphere_product,
    tc_upper_borel,
)
from ppsbounds.planner.verify import VerificationReport, verify_planner

__all__ = [
    "Path",
    "PlannerRule",
    "SpherePlanner",
    "ProductPlanner",
    "VerificationReport",
    "even_sphere_planner",
    "odd_sphere_planner",
    "pairing_field",
    "product_planner",
    "tc_g_sphere",
    "tc_g_sphere_product",
    "tc_g_product_bound",
    "tc_upper_borel",
    "verify_planner",
]
