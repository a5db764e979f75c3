"""Industrial-mathematics case-study toolkit.

C++ engines for pipe-weld seam geometry, Radon-transform trip-wire
detection, Gaussian plume dispersion, emission-source inversion, and the
finite-volume validation oracle, exposed through pybind11.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc  # noqa: F401
