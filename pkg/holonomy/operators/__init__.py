from holonomy.operators.diffop import (
    DiffOp,
    DivRem,
    ParamDiffOp,
    annihilates,
    apply,
    compose,
    gcrd,
    lclm,
    right_divrem,
)
from holonomy.operators.intertwiners import Intertwiner, search_intertwiner, verify_intertwiner
from holonomy.operators.local import (
    INFINITY,
    at_infinity,
    check_apparent,
    frobenius,
    indicial,
    is_apparent,
    singular_points,
    singularity_exponents,
)
from holonomy.operators.ratsols import FactorChain, factor_first_order_chain, rational_solutions
from holonomy.operators.schemas import FrobeniusBasis, IndicialData, SingularPointReport
from holonomy.operators.serialization import load_operator, save_operator
from holonomy.operators.sympower import image_operator, sym_power
