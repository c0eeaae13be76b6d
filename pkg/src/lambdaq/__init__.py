"""An interpreter for the λ, λᵖ and λᑫ calculi with exact observation."""

from .errors import (
    BudgetExceeded,
    CalculusViolation,
    FormatError,
    FuelExhausted,
    HeadUnsigned,
    InternalError,
    LambdaQError,
    NoRedex,
    NotAConfiguration,
    NotAnInteger,
    NotANumeral,
    ParseError,
    StuckTerm,
    Unobservable,
)
from .observation import (
    Distribution,
    RngState,
    Sampler,
    delta,
    distribution_of,
    exact_distribution,
    observe,
    theta,
    xi,
)
from .reduction import Evaluator, Fuel, beta_step, evaluate, gamma_normal_form, gamma_steps, normalize
from .stdlib import (
    build,
    build_R,
    build_remove_f,
    build_W,
    church,
    church_int,
    decode_bool,
    decode_int,
    decode_nat,
    describe,
    link,
    load_prelude,
    prim_rec,
)
from .substitution import apply_sign, subst
from .syntax import Calculus, format_term, parse, parse_program
from .terms import Abs, App, Coll, Sign, Term, Var, alpha_eq, canonical_key, collection, to_counts

__version__ = "0.1.0"
