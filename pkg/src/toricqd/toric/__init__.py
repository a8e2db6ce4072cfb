from toricqd.toric.bundle import BundleSpec, ProjectiveBundle, bundle_fan
from toricqd.toric.fan import Fan, FanError, FanReport, validate_fan
from toricqd.toric.variety import (
    NotEffectiveError,
    ToricError,
    ToricVariety,
    enumerate_effective,
    hirzebruch_fan,
    is_ample,
    is_nef,
    product_fan,
    projective_space,
    projective_space_fan,
    wall_curve_classes,
)

__all__ = [
    "BundleSpec",
    "Fan",
    "FanError",
    "FanReport",
    "NotEffectiveError",
    "ProjectiveBundle",
    "ToricError",
    "ToricVariety",
    "bundle_fan",
    "enumerate_effective",
    "hirzebruch_fan",
    "is_ample",
    "is_nef",
    "product_fan",
    "projective_space",
    "projective_space_fan",
    "validate_fan",
    "wall_curve_classes",
]
