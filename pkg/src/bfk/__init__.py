"""Exact Burnside-module and section-limit computations for small odd
p-groups, with batch verification campaigns over a group catalog."""

from .campaigns import (
    RunConfig,
    VerificationReport,
    cached_inverse_limit,
    catalog_groups,
    emit_csv,
    emit_json,
    exit_code,
    recheck,
    run_campaign,
)
from .claims import CAMPAIGNS, CLAIMS, Claim, claim, claims_for
from .groups import (
    FiniteGroup,
    analysis,
    classify_group,
    cyclic_group,
    direct_product,
    elementary_abelian_group,
    extraspecial_group,
    group_from_spec,
    parse_descriptor,
    sections_in_class,
)
from .limits import (
    CoefficientSystem,
    InverseLimit,
    SectionFamily,
    coefficient_system,
    comparison_report,
    counit_kernel_report,
    inverse_limit,
    section_family,
)

__all__ = [
    "CAMPAIGNS",
    "CLAIMS",
    "Claim",
    "CoefficientSystem",
    "FiniteGroup",
    "InverseLimit",
    "RunConfig",
    "SectionFamily",
    "VerificationReport",
    "analysis",
    "cached_inverse_limit",
    "catalog_groups",
    "claim",
    "claims_for",
    "classify_group",
    "coefficient_system",
    "comparison_report",
    "counit_kernel_report",
    "cyclic_group",
    "direct_product",
    "elementary_abelian_group",
    "emit_csv",
    "emit_json",
    "exit_code",
    "extraspecial_group",
    "group_from_spec",
    "inverse_limit",
    "parse_descriptor",
    "recheck",
    "run_campaign",
    "section_family",
    "sections_in_class",
]
