"""Exact capacities of finitely generated modules over Dedekind domains
and quotient rings Z/n: how many copies of a target module a source can
surject onto, split off, or absorb as a submodule.

Everything is integer arithmetic end to end; answers come with local
data, decisive conditions, and machine-verified matrix witnesses.
"""

from .globalcap import (
    KINDS,
    CapacityReport,
    bound_report,
    bound_violations,
    capacity,
    clause_holds,
    product_capacity,
    sur_zero_reason,
    tightest_slack,
    witness,
)
from .glq import GLQInstance, GLQResult, build_glq, parse_lambda_spec, verify_glq
from .local import inj_local, local_capacity, spl_local, sur_local
from .modules import (
    INFINITY,
    FGModule,
    LocalModule,
    direct_sum,
    from_elementary_divisors,
    iso_check,
    localize,
    module_from_json,
    module_power,
    module_to_json,
    to_elementary_divisors,
    z_module,
    zero_module,
    zmod_module,
)
from .oracle import (
    FiniteModule,
    InstanceProfile,
    definitional_capacity,
    finite_module,
    oracle_capacity,
    random_instance,
)
from .rings import (
    AbstractRing,
    QuadraticRing,
    ZModRing,
    ZRing,
    class_group_table,
    ring_from_json,
    ring_to_json,
)
# note: the `snf` function itself is not re-exported — the name must keep
# pointing at the `caplab.snf` submodule (use `caplab.snf.snf` or
# `from caplab.snf import snf`)
from .snf import SNFResult, mat

__all__ = [
    "AbstractRing",
    "CapacityReport",
    "FGModule",
    "FiniteModule",
    "GLQInstance",
    "GLQResult",
    "INFINITY",
    "InstanceProfile",
    "KINDS",
    "LocalModule",
    "QuadraticRing",
    "SNFResult",
    "ZModRing",
    "ZRing",
    "bound_report",
    "bound_violations",
    "build_glq",
    "capacity",
    "class_group_table",
    "clause_holds",
    "definitional_capacity",
    "direct_sum",
    "finite_module",
    "from_elementary_divisors",
    "inj_local",
    "iso_check",
    "local_capacity",
    "localize",
    "mat",
    "module_from_json",
    "module_power",
    "module_to_json",
    "oracle_capacity",
    "parse_lambda_spec",
    "product_capacity",
    "random_instance",
    "ring_from_json",
    "ring_to_json",
    "spl_local",
    "sur_local",
    "sur_zero_reason",
    "tightest_slack",
    "to_elementary_divisors",
    "verify_glq",
    "witness",
    "z_module",
    "zero_module",
    "zmod_module",
]
