"""Consistency and convergence measurements.

Two complementary probes:

* one-step truncation defect: feed exact samples of a known solution
  into one discrete step and compare with the exact state a step later
  (corrected by the sampled function's own PDE residual, so the probe
  also works for manufactured functions that solve nothing);
* self-convergence: run to a fixed time on refined grids and fit the
  observed order from the errors against the finest run.

The lagged-coefficient Crank-Nicolson scheme is first order in time
(the advective coefficient lags half a step) and second order in space.
"""

from kdvlab import Grid1D, SchemeParams, observed_order, truncation_error
from kdvlab.model import traveling_wave_callable

wave = traveling_wave_callable(0.5, "verified")

print("one-step defect, dx fixed at 0.02, dt halving:")
window = Grid1D(-41.0, 41.0, 4101)
for dt in (0.02, 0.01, 0.005):
    d = truncation_error("cn-lagged", wave, SchemeParams(dx=window.dx, dt=dt), window)
    print(f"  dt = {dt:<6} defect = {d:.4e}")

print("one-step defect, dt fixed at 1e-4, dx halving:")
errors = []
for nx in (411, 821, 1641):
    w = Grid1D(-41.0, 41.0, nx)
    d = truncation_error("cn-lagged", wave, SchemeParams(dx=w.dx, dt=1e-4), w)
    errors.append((w.dx, d))
    print(f"  dx = {w.dx:<6.3f} defect = {d:.4e}")
print(f"spatial order from the defects: {observed_order(errors):.3f}")

print()
print("A full refinement study (errors vs the finest run, observed order)")
print("is available from the command line:")
print("  kdvlab converge --refine time  --nx 1801 --dt 0.04 --t_end 2 \\")
print("      --ic 'traveling 1.0' --levels 3 --output_dir out")
