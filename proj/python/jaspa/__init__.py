"""Joint AP selection and power allocation."""

from ._core import (
    DomainError,
    Error,
    IoError,
    ParseError,
    ResourceError,
    Scenario,
    UsageError,
    ValidationError,
    a_iwf,
    closest_ap,
    exhaustive,
    generate_scenario,
    j_jaspa,
    jaspa,
    load_scenario,
    run_experiment,
    se_jaspa,
    si_jaspa,
    sum_rate,
    verify_jep,
    virtual_ap_bound,
    water_fill,
)

__all__ = [
    "DomainError",
    "Error",
    "IoError",
    "ParseError",
    "ResourceError",
    "Scenario",
    "UsageError",
    "ValidationError",
    "a_iwf",
    "closest_ap",
    "exhaustive",
    "generate_scenario",
    "j_jaspa",
    "jaspa",
    "load_scenario",
    "run_experiment",
    "se_jaspa",
    "si_jaspa",
    "sum_rate",
    "verify_jep",
    "virtual_ap_bound",
    "water_fill",
]
