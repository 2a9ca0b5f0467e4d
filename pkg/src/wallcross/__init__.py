"""Exact arithmetic for wall-crossing transformations on Laurent-polynomial
mirror charts: gluing and consistency checks for scattering diagrams,
polyvector fields with the Schouten bracket, and Cech cochains carrying a
deformation ledger and the master equation.
"""

from .novikov import INF, NovikovScalar, ParameterTable, as_fraction
from .laurent import (
    InexactPullbackError,
    LaurentPoly,
    Substitution,
    compose,
    format_poly,
    log_derivative,
    pullback,
)
from .polyvector import (
    FloerClass,
    PolyVectorField,
    correspondence,
    floer_from_polyvector,
    format_floer,
    format_polyvector,
    hf_bracket,
    interior_dW,
    iota_gamma,
    schouten,
    wedge,
)
from .parser import ParseError, parse_expression, parse_floer, parse_polyvector, parse_rational
from .scattering import (
    Cell,
    DefectReport,
    DiagramError,
    NoDefectError,
    ScatteringDiagram,
    Symmetry,
    Wall,
    check_cell,
    check_gluing,
    check_symmetry,
    compose_path,
    defect_as_field,
    set_parameter_to_zero,
)
from .cech import (
    CechCochain,
    DegreeOverflowWarning,
    Nerve,
    assemble_master_cochain,
    cech_delta,
    check_hochschild_ledger,
    check_master,
    check_weak_unobstructed,
    cup_bracket,
    twisted_differential,
)
from .catalog import (
    Chamber,
    DiscClass,
    Example,
    Ledger,
    assemble_superpotential,
    build_compact_example,
    build_main_example,
    build_open_mirror,
    enumerate_classes,
    maslov_index,
    maslov_lower_bound,
    satisfies_contact_bounds,
)
from .scenario import (
    Report,
    Scenario,
    ScenarioError,
    dumps_scenario,
    emit_report,
    export_scenario,
    load_scenario,
    loads_scenario,
    run_scenario,
)

__all__ = [
    "InexactPullbackError",
    "LaurentPoly",
    "Substitution",
    "compose",
    "format_poly",
    "log_derivative",
    "pullback",
    "FloerClass",
    "PolyVectorField",
    "correspondence",
    "floer_from_polyvector",
    "format_floer",
    "format_polyvector",
    "hf_bracket",
    "interior_dW",
    "iota_gamma",
    "schouten",
    "wedge",
    "Cell",
    "DefectReport",
    "DiagramError",
    "NoDefectError",
    "ScatteringDiagram",
    "Symmetry",
    "Wall",
    "check_cell",
    "check_gluing",
    "check_symmetry",
    "compose_path",
    "defect_as_field",
    "set_parameter_to_zero",
    "CechCochain",
    "DegreeOverflowWarning",
    "Nerve",
    "assemble_master_cochain",
    "cech_delta",
    "check_hochschild_ledger",
    "check_master",
    "check_weak_unobstructed",
    "cup_bracket",
    "twisted_differential",
    "Chamber",
    "DiscClass",
    "Example",
    "Ledger",
    "assemble_superpotential",
    "build_compact_example",
    "build_main_example",
    "build_open_mirror",
    "enumerate_classes",
    "maslov_index",
    "maslov_lower_bound",
    "satisfies_contact_bounds",
    "Report",
    "Scenario",
    "ScenarioError",
    "dumps_scenario",
    "emit_report",
    "export_scenario",
    "load_scenario",
    "loads_scenario",
    "run_scenario",
    "INF",
    "NovikovScalar",
    "ParameterTable",
    "as_fraction",
    "ParseError",
    "parse_expression",
    "parse_floer",
    "parse_polyvector",
    "parse_rational",
]

__version__ = "0.1.0"
