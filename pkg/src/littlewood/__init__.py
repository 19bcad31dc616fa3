"""Exact-arithmetic toolkit for Littlewood-type products.

Continued fractions, continuants, subword complexity, pseudo-absolute
values, Lagrange constants of multiples, and certified congruence
witnesses, all over arbitrary-precision integers.
"""

from .config import get_digit_cap, set_digit_cap
from .errors import (DegenerateQ, DigitCapExceeded, HorizonTooSmall,
                     LittlewoodError, NotEnoughReturns, PAdicDenominator,
                     PerfectSquare, StreamExhausted, TieAtHalf,
                     VerificationFailed, ZeroDenominator)
from .numbers import (DyadicInterval, QuadraticSurd, Rational, exp_enclosure,
                      interval_refine, surd_canonicalize, surd_compare,
                      surd_floor)
from .words import (Classification, ComplexityProfile, ExplicitStream,
                    PeriodicStream, ShiftedStream, SturmianStream,
                    ThueMorseStream, Word, WordStream, complexity,
                    complexity_profile, linear_recurrence_constant,
                    morse_hedlund_classify, palindrome_prefixes,
                    prefix_return_times, stream_from_json)
from .cf import (CFExpansion, Convergent, NormProduct, cf_of_rational,
                 cf_of_surd, continuant, convergent_iter, convergents,
                 purely_periodic_value, q_norm_product)
from .dvalue import (Constant, ESequence, Explicit, Periodic, PseudoValuation,
                     doubly_exponential, padic_abs, padic_order,
                     valuation_from_json)
from .conjecture import (GLPPoint, GridScanResult, LagrangeEstimate,
                         MultipleRow, ProductValue, ScanRecord, ScanResult,
                         WitnessRecord, convergent_multiple_scan,
                         denominator_recurrence, glp_point, glp_product,
                         glp_scan, infimum_scan, lagrange_constant,
                         lagrange_upper_bound, littlewood_product,
                         multiples_profile, quadratic_witness,
                         recurrence_period_mod, recurrent_word_witness,
                         small_vector_probe)

__version__ = "0.1.0"
