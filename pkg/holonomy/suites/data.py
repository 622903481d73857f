"""
'suites/data.py': Operators printed in closed form for the diagonal form factors.

Lattice operators are ParamDiffOp in t with nu = N^2; scaled operators are
DiffOp in x. Every entry is built on first use and cached.
"""
from functools import lru_cache

from holonomy.operators.diffop import DiffOp, ParamDiffOp


# -- lattice family -----------------------------------------------------------------------
@lru_cache(maxsize=None)
def L1() -> ParamDiffOp:
    return ParamDiffOp.from_strings(["0", "1"])


@lru_cache(maxsize=None)
def L2() -> ParamDiffOp:
    """Annihilates f^(1)_{N,N}."""
    return ParamDiffOp.from_strings([
        "-1/(4*t) + 1/(4*(t-1)) - N**2/(4*t**2)",
        "(2*t-1)/((t-1)*t)",
        "1",
    ])


@lru_cache(maxsize=None)
def L3() -> ParamDiffOp:
    return ParamDiffOp.from_strings([
        "(8*t**2-15*t+5)/(2*(t-1)**3*t**2) - N**2/t**3",
        "(2-15*t+14*t**2)/((t-1)**2*t**2) - N**2/t**2",
        "4*(2*t-1)/((t-1)*t)",
        "1",
    ])


@lru_cache(maxsize=None)
def L4() -> ParamDiffOp:
    """L_{4,0} - N^2 L_{4,2} + (9/16) N^4 / t^4."""
    return ParamDiffOp.from_strings([
        "81*(5*t-1)*(5*t-4)/(16*t**3*(t-1)**3) + 9*N**2*(8-17*t)/(8*(t-1)*t**4) + 9*N**4/(16*t**4)",
        "(2*t-1)*(122*t**2-122*t+9)/((t-1)**3*t**3) + N**2*(23-32*t)/(2*(t-1)*t**3)",
        "(241*t**2-241*t+46)/(2*(t-1)**2*t**2) - 5*N**2/(2*t**2)",
        "10*(2*t-1)/((t-1)*t)",
        "1",
    ])


@lru_cache(maxsize=None)
def sym2_L2() -> ParamDiffOp:
    """Symmetric square of L_2(N) as printed (the N^2 D term carries 1/t^2)."""
    return ParamDiffOp.from_strings([
        "-(1-2*t)/(2*(t-1)**2*t**2) - N**2/((t-1)*t**2)",
        "(1-7*t+7*t**2)/((t-1)**2*t**2) - N**2/t**2",
        "3*(2*t-1)/((t-1)*t)",
        "1",
    ])


@lru_cache(maxsize=None)
def U3() -> ParamDiffOp:
    return ParamDiffOp.from_strings(["1 + (1-t)*N**2/t", "3*t-1", "(t-1)*t"])


@lru_cache(maxsize=None)
def V3() -> ParamDiffOp:
    return ParamDiffOp.from_strings(["(5*t-1)*(5*t-4)/((t-1)*t) - (t-1)*N**2/t", "11*t-5", "(t-1)*t"])


@lru_cache(maxsize=None)
def A4() -> ParamDiffOp:
    return ParamDiffOp.from_strings([
        "9*(2*t-1)/(8*(t-1)*t) - 9*(2*t-1)*N**2/(8*t**2)",
        "(41*t**2-41*t+6)/(4*(t-1)*t) - 9*(t-1)*N**2/(4*t)",
        "7*(2*t-1)/2",
        "(t-1)*t",
    ])


@lru_cache(maxsize=None)
def B4() -> ParamDiffOp:
    return ParamDiffOp.from_strings([
        "9*(2*t-1)*(125*t**2-125*t+16)/(8*(t-1)**2*t**2) - 9*(10*t-9)*N**2/(8*t**2)",
        "21*(6-29*t+29*t**2)/(4*(t-1)*t) - 9*(t-1)*N**2/(4*t)",
        "23*(2*t-1)/2",
        "(t-1)*t",
    ])


_Q = {
    0: ["t - 1/2", "(t-1)*t"],
    1: [
        "3*(2*t**2-2*t+1)/(4*t)",
        "12*t**3-28*t**2+41*t/2-9/2",
        "3*(3-7*t+4*t**2)*(t-1)*t",
        "2*(t-1)**3*t**2",
    ],
    2: [
        "-(12*t**5+14*t**4-260*t**3+497*t**2-314*t+24)/(16*t**2)",
        "-(18*t**5-12*t**4-97*t**3+577*t**2-738*t+252)/(24*t)",
        "(15-t-35*t**2+15*t**3+6*t**4)*(t-1)/2",
        "(t-1)**3*(3+8*t+3*t**2)*t/3",
    ],
}


def Q(N: int) -> DiffOp:
    """Map from the symmetric cube of L_2(N) onto the M_4(N) summand, printed for N = 0, 1, 2."""
    if N not in _Q:
        raise KeyError(f"Q({N}) is not tabulated; available: {sorted(_Q)}")
    return DiffOp.from_strings(_Q[N])


@lru_cache(maxsize=None)
def L_E() -> DiffOp:
    """Operator of the complete elliptic integral E."""
    return DiffOp.from_strings(["-1/(t-1)", "4", "4*t"])


@lru_cache(maxsize=None)
def L_K() -> DiffOp:
    """Hypergeometric operator of K."""
    return DiffOp.from_strings(["-1/4", "1-2*t", "(1-t)*t"])


@lru_cache(maxsize=None)
def apery() -> DiffOp:
    return DiffOp.from_strings(["t-5", "7*t**2-112*t+1", "(6*t**2-153*t+3)*t", "(t**2-34*t+1)*t**2"])


# -- scaled family ------------------------------------------------------------------------
@lru_cache(maxsize=None)
def bessel() -> DiffOp:
    """B = D^2 + D/x - 1/4, the operator of K_0(x/2) and I_0(x/2)."""
    return DiffOp.from_strings(["-1/4", "1/x", "1"], "x")


@lru_cache(maxsize=None)
def scaled(j: int) -> DiffOp:
    """L_j^scal for j = 1..5."""
    table = {
        1: ["0", "1"],
        2: ["-x", "4", "4*x"],
        3: ["-2", "-2*(x-1)*(x+1)*x", "8*x**2", "2*x**3"],
        4: ["9*x**4-8*x**2+16", "8*(x**2-2)*x", "40*(2-x**2)*x**2", "96*x**3", "16*x**4"],
        5: [
            "-10+8*x**2-24*x**4",
            "2*(5-12*x**2+4*x**4)*x",
            "2*(-16+13*x**2)*x**2",
            "-2*x**3*(7+5*x**2)",
            "10*x**4",
            "2*x**5",
        ],
    }
    if j not in table:
        raise KeyError(f"L_{j}^scal is not tabulated; available: {sorted(table)}")
    return DiffOp.from_strings(table[j], "x")


@lru_cache(maxsize=None)
def scaled_witness():
    """(U, V) with L_3^scal U = V Sym^2(B), Sym^2(B) monic."""
    U = DiffOp.from_strings(["-x", "2", "x"], "x")
    V = DiffOp.from_strings(["-2*x**4+8*x**2", "12*x**3", "2*x**4"], "x")
    return U, V


def lattice_family():
    """The printed lattice operators keyed by their index j (L_j has order j)."""
    return {1: L1(), 2: L2(), 3: L3(), 4: L4()}
