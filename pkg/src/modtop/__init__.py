"""Certified numerics for variable-exponent sequence and function spaces:
modular evaluation with finite/infinite/indeterminate verdicts, Luxemburg
norms, doubling diagnostics with constructive witnesses, counterexample
scenarios, and a 1D variable-exponent Dirichlet energy minimizer."""

from .config import DEFAULT_CONFIG, EvalConfig
from .diagnostics import (ConvergenceReport, Delta2Verdict, DualityReport,
                          LinfVerdict, RightContinuityReport, WitnessRecord,
                          check_delta2, check_linf_isomorphism,
                          classify_convergence, delta2_failure_witness,
                          functional_probe, right_continuity_probe,
                          truncation_density_check)
from .dirichlet import (EnergyProblem, SolveTrace, assemble_energy,
                        energy_gradient, energy_value, minimize_energy,
                        residual_check)
from .errors import (ConfigError, DomainMismatchError, EmptySetError,
                     ExponentBelowTwoError, IncompatibleTailError,
                     InvalidExponentError, ModtopError, NormUncertainError,
                     NotFiniteModularError, NotInModularSpaceError,
                     NotUnboundedError, UnboundedExponentError,
                     UndeclaredGrowthError, UnknownScenarioError)
from .exponents import (AffineExponent, CustomExponent, ExponentSpec,
                        PiecewiseConstExponent, ReciprocalExponent,
                        TableExponent, parse_exponent)
from .functions import (CatalogVTail, PiecewiseConstFunction, catalog_v,
                        catalog_v_beyond, catalog_v_truncated, step_height)
from .luxemburg import (NormModularReport, NormResult, luxemburg_norm,
                        minkowski_functional, verify_norm_modular_relations)
from .modular import (AnalyticComparisonCertificate, ModularValue,
                      NondecreasingTermsCertificate, OverflowCertificate,
                      eval_fun_modular, eval_seq_modular, modular_diameter,
                      modular_distance, scaled_modular)
from .scenarios import (BALL_SCENARIOS, PROPERTY_SUITES, REGISTRY,
                        ScenarioReport, ball_interior_witness,
                        run_counterexample)
from .sequences import SequenceVec

__version__ = "0.1.0"
