from .operator import QuantumOperator, QuantumVector, SchmidtForm, SubsystemLayout
from .witness import QuestionEnsemble, QuestionItem, Witness, WitnessKind
from .game import Game
from .strategy import (
    FilteredStrategy,
    FilterResult,
    MatchedOneWayStrategy,
    ProductStrategy,
    Strategy,
    strategy_adapter,
)
from .reports import EstimateReport, OptimizeOptions, PayoffReport, SLambdaVerdict
from .requests import (
    BulletRequest,
    EvaluateRequest,
    GameRequest,
    MemberRequest,
    NptRequest,
    OptimizeRequest,
    SimulationRequest,
    StateRequest,
    UpperBoundRequest,
    WitnessRequest,
)
