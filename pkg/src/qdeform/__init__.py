"""q-deformed oscillator algebras su_q(1,1) and su_q(2) on a truncated Fock space.

Submodules: ``qcore`` (q-numbers, q-exponentials), ``laurent`` (exact
arithmetic), ``qcalc`` (q-derivatives, Jackson integrals), ``fock``,
``oscillators``, ``algebra`` (realizations and their checks), ``coherent``
(coherent states and measures) and ``cli``.
"""

__version__ = "0.1.0"

from .exceptions import (  # noqa: E402
    ConfigError,
    QDeformError,
    QDivergenceError,
    QDomainError,
    QParameterError,
    QPrecisionError,
)
from .laurent import LaurentPoly, QFraction, as_exact  # noqa: E402
from .qcore import (  # noqa: E402
    q_binomial,
    q_brace,
    q_bracket,
    q_bracket_poly,
    q_brace_poly,
    q_deformed_binom,
    q_exp_E,
    q_exp_E_product,
    q_exp_e,
    q_exp_e_neg_lattice,
    q_factorial,
)
from .qcalc import JacksonRule, jackson_integral, q_derivative  # noqa: E402
from .fock import FockOperator, NormTable, adjoint_wrt, raw_ladder, to_unit_basis  # noqa: E402
from .oscillators import anyon_pair, biedenharn, macfarlane  # noqa: E402
from .algebra import (  # noqa: E402
    SU11_REALIZATIONS,
    SU2_REALIZATIONS,
    RealizationSpec,
    build,
    classical_limit_scan,
    verify_algebra,
)
from .coherent import (  # noqa: E402
    CoherentFamily,
    MeasureSpec,
    coherent_vector,
    resolve_unity,
)
