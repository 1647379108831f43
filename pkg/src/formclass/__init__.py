"""Form class groups over totally real fields and ray class arithmetic of
CM-fields, with the imaginary quadratic Siegel specialization."""

from .errors import (
    DomainError,
    IncompleteEnumeration,
    InconclusiveSearch,
    NotAnIdealError,
    UnsupportedGaloisData,
)
from .number_ring import (
    BaseField,
    Mat2,
    RATIONALS,
    RingElem,
    bezout,
    canonical_associate,
    divmod_nearest,
    gcd_of,
    is_totally_positive,
    parse_field,
    sqrt_in_field,
    units_mod,
)
from .cm_field import (
    CMElem,
    CMField,
    EmbeddingSet,
    build_cm_field,
    cm_type,
    conj,
    embed,
    norm_rel,
    regular_rep,
    trace_rel,
    verify_relative_basis,
)
from .ideals import (
    FracIdeal,
    RayModulus,
    conj_ideal,
    factor_level,
    inv,
    is_coprime_to,
    mul,
    mult_congruent_one,
    principal_generator_mod,
    principal_ideal,
    ray_equal,
    reduce,
    unit_ideal,
    valuation,
    valuation_elem,
)
from .forms import (
    GammaMatrix,
    QuadForm,
    act,
    cm_point,
    equivalence_certificate,
    equivalent,
    form_from_point,
    ideal_of,
    membership,
    omega_of,
    principal_form,
    totally_positive_rep,
)
from .class_groups import (
    FormClass,
    GroupTable,
    RayClass,
    RayClassGroup,
    class_inverse,
    class_number,
    compose,
    decompose_det,
    enumerate_ray_classes,
    form_class_of,
    ideals_of_norm,
    lift_sl2,
    ray_class_number,
    ray_class_of,
    verify_isomorphism,
)
from .reflex import (
    GaloisData,
    GaloisRealization,
    ReflexData,
    build_galois_data,
    galois_realization,
    norm_preserves_congruence,
    reflex_norm_elem,
    reflex_norm_ideal,
    reflex_norm_on_ray_class,
    reflex_of,
)
from .analytic import (
    InvariantSetup,
    class_polynomial,
    coherence_holds,
    invariant_setup,
    invariant_setup_from_form,
    siegel_g,
    siegel_ramachandra,
    siegel_values,
)
