from ._core import (
    CertificationReport,
    DiniVerdict,
    DomainSpec,
    EllipticityPair,
    GrowthReport,
    Modulus,
    ak_sequence,
    dini_integral,
    flat_c1alpha_check,
    flat_hopf_check,
    growth_product,
    pucci_minus,
    pucci_plus,
    rescale_to_small,
    run_scenario,
    solve_dirichlet,
    tabulated_modulus,
)

__all__ = [
    "CertificationReport",
    "DiniVerdict",
    "DomainSpec",
    "EllipticityPair",
    "GrowthReport",
    "Modulus",
    "ak_sequence",
    "dini_integral",
    "flat_c1alpha_check",
    "flat_hopf_check",
    "growth_product",
    "pucci_minus",
    "pucci_plus",
    "rescale_to_small",
    "run_scenario",
    "solve_dirichlet",
    "tabulated_modulus",
]
