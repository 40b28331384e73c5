"""Mean-variance investment and catastrophe insurance with rough volatility and power-law Hawkes claims."""
from .params import ClaimParams, HawkesParams, MarketParams
from .volterra import TimeGrid

__all__ = ["ClaimParams", "HawkesParams", "MarketParams", "TimeGrid"]
__version__ = "0.1.0"
