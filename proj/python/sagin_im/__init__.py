"""UAV-RIS interference management: schemes, DoF evaluators, channel models."""

from ._sagin import (
    SystemConfig,
    classify_csi,
    dof_t1,
    dof_t2,
    dof_t3,
    figure_data,
    run_scheme,
    sample_nakagami,
    sample_shadowed_rician,
    select_scheme,
    validate,
)

__all__ = [
    "SystemConfig",
    "classify_csi",
    "dof_t1",
    "dof_t2",
    "dof_t3",
    "figure_data",
    "run_scheme",
    "sample_nakagami",
    "sample_shadowed_rician",
    "select_scheme",
    "validate",
]
