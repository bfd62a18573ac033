"""blockseq: block-avoiding point sequencings of combinatorial designs."""

from .designs import (Block, BlockSystem, Kind, ValidationReport, build_system,
                      completions, validate_system)
from .goodness import (Sequencing, Violation, first_violation, forbidden_next,
                       forbidden_prev, max_good_ell, window_is_good)
from .constructions import (boolean_sqs, circle_one_factorization, hamming_sts,
                            natural_sequencing, okeefe_pairs, skolem_sts,
                            sqs_quadruple)
from .sequencer import (PropertyConstants, constants_for, cyclic_staged_greedy,
                        naive_greedy, staged_greedy, threshold_cyclic,
                        threshold_general, threshold_psts)
from .formats import parse_design, parse_seq, write_design, write_seq

__version__ = "0.1.0"
