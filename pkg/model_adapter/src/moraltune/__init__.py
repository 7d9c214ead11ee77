"""Training/prediction adapter for the moral-sentiment audit toolkit.

Talks to the audit tooling only through its two wire formats: canonical
dataset TSVs in, prediction TSVs out.
"""

__version__ = "0.1.0"

from .config import TrainConfig, EncoderSize  # noqa: F401
from .errors import AdapterError  # noqa: F401
