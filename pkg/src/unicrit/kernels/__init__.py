"""Hot-kernel dispatch: compiled extension when built, numpy fallback else.

Set UNICRIT_FORCE_FALLBACK=1 to force the pure-Python backend (used by the
parity tests and the benchmark).
"""

import os

from . import _fallback

if os.environ.get("UNICRIT_FORCE_FALLBACK"):
    impl = _fallback
else:
    try:
        from . import _core as impl  # type: ignore[no-redef]
    except ImportError:
        impl = _fallback

BACKEND = impl.NAME

escape_big = impl.escape_big
green_point = impl.green_point
green_many = impl.green_many
escape_grid = impl.escape_grid
newton_map_point = impl.newton_map_point
newton_param_point = impl.newton_param_point
pullback_polyline = impl.pullback_polyline
real_orbit = impl.real_orbit
ce_log_derivatives = impl.ce_log_derivatives
sor_solve = impl.sor_solve
dirichlet_energy = impl.dirichlet_energy
