"""
Default caps and budgets.

Every operation takes its cap as a keyword argument whose default is
one of the constants below; the CLI overrides them through
:class:`Caps`.
"""
import dataclasses

#: Largest normalization window the exact integer oracles will search.
CAP_WINDOW = 40
#: Largest enumeration (tensor powers, typical sets, triple sweeps).
CAP_ENUM = 10**6
#: Largest constructed set.
CAP_SIZE = 10**6
#: Sampling budget for the Las-Vegas compression steps.
RETRIES = 64
#: Sampling budget for the wrap-to-F_p shift search.
RETRIES_WRAP = 256
#: Period bound for an exact interval sweep in the Erdos-Selfridge module.
ES_EXACT_PERIOD = 10**9
#: Number of random shifts tried when the period is too long to sweep.
ES_SAMPLES = 10**6
#: Largest ambient dimension the pipeline will build.
PIPELINE_MAX_DIM = 12
#: Largest p^n for which f_{k,n}(p) is searched exactly.
CAP_FP = 25


@dataclasses.dataclass(frozen=True)
class Caps:
    '''
    The caps a run is allowed to use.

    Args:
        window (int): Normalization window cap for the integer oracles.
        enum (int): Enumeration cap.
        size (int): Constructed-set cap.
        retries (int): Sampling budget of the randomized steps.
        time_budget (float): Seconds an oracle search may run before it
            falls back to its incumbent.  `None` means unbounded.
    '''
    window: int = CAP_WINDOW
    enum: int = CAP_ENUM
    size: int = CAP_SIZE
    retries: int = RETRIES
    time_budget: float = None


DEFAULT_CAPS = Caps()
