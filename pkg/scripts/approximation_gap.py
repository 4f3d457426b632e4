"""Where the exponential approximation departs from the exact CDF of S."""

from pathlib import Path

import numpy as np

from nlos_bias.analytic import ExpApproxParams, cdf_S, exp_approx_cdf
from nlos_bias.harness import load_config

cfg = load_config(Path(__file__).resolve().parents[1] / "configs" / "fig5.json")
model = cfg.model()
approx = ExpApproxParams.from_model(model)
bias = np.linspace(0.0, 2000.0, 20_001)
gap = cdf_S(model, cfg.d + bias) - exp_approx_cdf(approx, cfg.d + bias)
i = int(np.argmax(np.abs(gap)))
print(f"rate 2*lambda*E[W] = {approx.rate:.4g} /m")
print(f"max |gap| = {abs(gap[i]):.4f} at bias {bias[i]:.1f} m")
for b in (50, 100, 250, 500, 1000, 1500, 2000):
    print(f"bias {b:5d} m: exact {cdf_S(model, cfg.d + b):.4f}  approx {exp_approx_cdf(approx, cfg.d + b):.4f}")
