"""POD-accelerated reconstruction of parabolic PDE source terms.

The heavy lifting lives in the compiled extension ``podinv._core``; this
package re-exports its public surface.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
