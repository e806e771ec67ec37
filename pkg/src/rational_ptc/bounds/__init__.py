# Bound routes for TC_r

from .dimension import DimensionRoute, svarc_bound
from .extension import ExtensionRoute, tc_extension_bound
from .formal import FormalTnczRoute
from .odd_fiber import OddFiberRoute, tc_odd_fiber

__all__ = [
    "DimensionRoute",
    "ExtensionRoute",
    "FormalTnczRoute",
    "OddFiberRoute",
    "svarc_bound",
    "tc_extension_bound",
    "tc_odd_fiber",
]
