"""Complex-valued wrappers around scipy.integrate.quad."""
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad

EPSABS = 1e-15
EPSREL = 1e-12


def complex_quad(f: Callable[[float], complex], a: float, b: float, limit: int = 200,
                 weight: Optional[str] = None, wvar: Optional[float] = None) -> complex:
    """Integrate a complex integrand of a real variable by splitting real and imaginary parts.

    Args:
        f: Integrand
        a: Lower limit
        b: Upper limit (np.inf allowed; with a cos/sin weight this selects QAWF)
        limit: Subinterval budget
        weight: Optional quad weight ("cos" or "sin")
        wvar: Angular frequency for the weight

    Returns:
        The complex integral
    """
    options = {"limit": limit, "epsabs": EPSABS, "epsrel": EPSREL}
    if weight is not None:
        options.update(weight=weight, wvar=wvar)
        if np.isinf(b):
            # QAWF takes its own cycle budget and ignores epsrel
            options = {"weight": weight, "wvar": wvar, "limlst": max(50, limit // 4),
                       "epsabs": 1e-13}
    re, _ = quad(lambda x: complex(f(x)).real, a, b, **options)
    im, _ = quad(lambda x: complex(f(x)).imag, a, b, **options)
    return complex(re, im)
