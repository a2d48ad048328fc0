"""Desk-scale workbench for list decoding near the generalized Singleton bound.

The pieces fit together as follows: :mod:`listlab.model` defines codes and
distances, :mod:`listlab.bounds` evaluates the closed-form quantities,
:mod:`listlab.verifier` decides list-decodability exactly,
:mod:`listlab.construct` builds codes and set families, and
:mod:`listlab.attack` searches for explicit, independently verifiable
bad-list-decoding certificates.
"""

from .bounds import (BoundParams, binary_entropy, binomial_entropy_bounds,
                     capacity_check, chernoff_tail, generalized_singleton_radius,
                     q_ary_entropy, theorem_bound_table)
from .construct import (RandomCodeSpec, SetFamily, avg_radius_expurgate,
                        build_set_family, expurgate_violations,
                        greedy_distance_subcode, load_family,
                        neighborhood_bound_check, pairwise_family_warmup2,
                        random_code, save_family, verify_set_family)
from .errors import (ConstructionFailure, InputError, InternalCheckError,
                     ListLabError, ParameterizationError, ParseError,
                     ResourceError)
from .model import (Code, CodeStats, agreement_set, code_stats, hamming_distance,
                    load_code, min_distance, restrict, save_code)
from .verifier import (RadiusQuery, Violation, avg_center, exact_radius,
                       is_list_decodable, minmax_center, neighborhood_count,
                       verify_violation)
from .attack import (AttackParams, AttackReport, Certificate, DistanceWitness,
                     build_center_general, derive_params, find_popular_codeword,
                     pigeonhole_I0, run_general_attack, run_warmup1, run_warmup2,
                     select_distinct, singleton_witness, verify_certificate)

__version__ = "0.1.0"
