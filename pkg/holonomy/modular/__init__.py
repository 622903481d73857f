from holonomy.modular.catalog import SingularityCatalog, load_catalog
from holonomy.modular.classify import classify, extra_singularities, list_polynomial, nickelian, nickelian_order
from holonomy.modular.elliptic import (
    VariableFrame,
    canonical_tau,
    heegner_check,
    j_of_k,
    j_of_tau,
    j_values_of_k_polynomial,
    j_values_of_w_polynomial,
    k_polynomial_of_w,
    kw_image,
    landen,
    landen_fixed_points,
    modular_curve_residual,
    nome_tau,
    tau_equivalent,
)
from holonomy.modular.schemas import ClassifiedRoot, Direction, NickelianResult, NomeResult, RootClass
