"""Gröbner–Shirshov bases for associative conformal algebras and their modules."""

from .words import (
    AlphabetError, D, L, Letter, OrderSpec, P, R, ShapeError, Token, X,
    compare, compare_module_words, concat, parse_word, render_word,
)
from .poly import (
    EmptyPolynomialError, NoMatchError, Polynomial, RewriteRule, RuleSet, Step,
    leading, make_monic, normal_form, reduce_once, replay,
)
from .schema import Caps, InadmissibleAssignment, RelationSchema, SchemaError, instantiate
from .engine import (
    Composition, CompletionResult, complete, find_compositions, in_cap_rules, is_trivial,
)
from .module import (
    ModulePresentation, module_gsb_check, oracle_dimensions, reduced_module_words,
    split_null_extension,
)
from .conformal import (
    CapExceeded, ConformalAlgebra, LocalityFunction, NormalWord, build_AX, build_MXN,
    conformal_gsb_check, conformal_product, enumerate_normal_words, sigma_XN,
)
from .lie import (
    LieConformalPresentation, build_ALX, build_envelope, decide_speciality, envelope,
    heisenberg_virasoro, hv_order, lambda_to_coeffs, virasoro, virasoro_order,
)

__version__ = "0.1.0"
