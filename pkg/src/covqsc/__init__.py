"""Group covariant quantum string commitment: binding and concealing analysis."""

from .analysis import ProtocolReport, classify, orthogonality_check
from .binding import (
    AttackStrategy,
    BindingReport,
    binding_bound,
    evaluate_strategy,
    me_attack,
    renyi_bound,
    strategy_search,
)
from .concealing import (
    ConcealingReport,
    Povm,
    concealing_bits,
    covariant_povm,
    davies_value,
    maximize_accessible_info,
    mutual_info_povm,
)
from .grouprep import (
    OrbitTable,
    ProjectiveRep,
    builtin_rep,
    close_group,
    is_irreducible,
    is_projective_rep,
    orbit,
    tensor_power,
)
from .protocol import (
    LockcomSpec,
    QscProtocol,
    build_protocol,
    commitment_state,
    from_lockcom,
    honest_run,
)

__version__ = "0.1.0"
