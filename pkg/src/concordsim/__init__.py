"""Exact classical simulation of concordant quantum circuits.

The state of a concordant computation is diagonal in a product of local bases
after every gate, so it can be tracked as a probability distribution over dit
strings plus the local bases themselves. Everything on a result path uses exact
Gaussian-rational arithmetic.
"""
from .circuit import (
    Circuit, Gate, InitialState, LocalBasis, PermutationGate, QuditRegister, dump_circuit, load_circuit,
)
from .errors import (
    NotAnEigenprojector, NotQuantumClassical, ParseError, PromiseViolation, ResourceLimit, ValidationError,
)
from .frase import DenseState, Frase, frase_decompose, sove_of
from .lbf import Incompatible, LbfConfig, LbfInput, LbfSuccess, run_lbf
from .measure import MeasurementSpec, parse_measure_spec
from .simulator import (
    HeraldedFailure, SampleReport, SimulatorConfig, UpdateRule, build_update_rule, exact_marginals, run_shots,
)

__all__ = [
    "Circuit", "Gate", "InitialState", "LocalBasis", "PermutationGate", "QuditRegister", "dump_circuit",
    "load_circuit", "NotAnEigenprojector", "NotQuantumClassical", "ParseError", "PromiseViolation",
    "ResourceLimit", "ValidationError", "DenseState", "Frase", "frase_decompose", "sove_of", "Incompatible",
    "LbfConfig", "LbfInput", "LbfSuccess", "run_lbf", "MeasurementSpec", "parse_measure_spec", "HeraldedFailure",
    "SampleReport", "SimulatorConfig", "UpdateRule", "build_update_rule", "exact_marginals", "run_shots",
]
