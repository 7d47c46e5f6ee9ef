"""Perfect sampling for Metropolis-Hastings chains on mixed discrete/continuous targets."""

from .core import ClassId, CouplingResult, HorizonExceededError, MixedState, accept
from .coupler import (
    CouplerModel,
    TwoStageState,
    couple_single_atom,
    couple_two_class,
    forward_run,
    run_from,
)
from .distributions import AtomMixturePrior, InvGammaParams, NormalParams
from .driver import run_draws
from .estimator import RunSummary, atom_probability, bct_summary, histogram, summarize
from .imh import ImhTarget, discrete_target, imh_accept_ratio, imh_backward_sample
from .models import (
    CommonVariance,
    DegenerateDataError,
    KnownVariances,
    SeparateVariances,
    SingleMeanModel,
    TwoSampleModel,
    mle_two_sample,
)
from .replay import ContractError, DeviateRecipe, DeviateRecord, DeviateStore

__version__ = "0.1.0"
