"""Term insurance with income, consumption and a risky asset.

Shows the five-branch solution of the wealth-proportional model (I): the
dead zone where ruin is certain, the invest-only region, the insure-the-
gap region, the flat plateau, and the run at the ideal value, plus the
optimal investment's two no-trade zones.  Then the constant-flow model
(II) and its high-consumption buy-everywhere regime.

Run from the repository root:  python3 demos/stochastic_models.py
Writes stoch_model1_curve.csv and stoch_model1.png.
"""

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from goalreach import StochScenario, action_stoch, criticals, solve, value_stoch
from goalreach.scenario_io import write_csv
from goalreach.stoch import build_value, invest_amount, purchase_amount

print("=" * 70)
print("Model I: income and consumption proportional to wealth")
print("=" * 70)
scn = StochScenario(r=0.03, lam=0.05, mu=0.08, sigma=0.2, a=0.02, l=0.5,
                    c=0.01, premium_rate=0.04, f=100.0, n=10.0)
sol = solve(scn)
b = sol.bps
print(f"exponents      : p = {sol.exps.p:.6f}, q = {sol.exps.q:.6f}")
print(f"dead zone      : [0, {b.lower:.3f})          value 0, certain ruin")
print(f"invest only    : [{b.lower:.3f}, {b.buy:.3f})   no insurance yet")
print(f"insure the gap : [{b.buy:.3f}, {b.mid_low:.3f})  coverage f - w")
print(f"plateau        : [{b.mid_low:.3f}, {b.mid_high:.3f})  value 1 - e^-lam n")
print(f"final climb    : [{b.mid_high:.3f}, {b.ideal:.3f}]  coverage f - quasi")
print(f"quasi/ideal    : {b.quasi:.3f} / {b.ideal:.3f}")

print("\n wealth   value     coverage   risky investment")
for w in np.linspace(0.0, b.ideal, 12):
    a = action_stoch(scn, float(w), sol)
    print(f"  {w:7.2f}  {value_stoch(scn, float(w), sol):8.5f}  {a.purchase:8.2f}   {a.invest:10.4f}")

pv = build_value(scn, sol)
grid = np.linspace(0.0, b.ideal, 600)
rows = [(float(w), float(pv.value(w)), float(purchase_amount(scn, w, sol)),
         float(invest_amount(scn, w, sol))) for w in grid]
write_csv("stoch_model1_curve.csv", ["wealth", "value", "purchase", "invest"], rows)

fig, axes = plt.subplots(1, 2, figsize=(11, 4))
axes[0].plot(grid, pv.value(grid))
for x in (b.lower, b.buy, b.mid_low, b.mid_high):
    axes[0].axvline(x, ls=":", color="gray")
axes[0].set_xlabel("wealth")
axes[0].set_ylabel("max P(reach goal)")
axes[0].set_title("value function")
axes[1].plot(grid, [invest_amount(scn, w, sol) for w in grid])
axes[1].set_xlabel("wealth")
axes[1].set_title("optimal risky investment (note the two no-trade zones)")
fig.tight_layout()
fig.savefig("stoch_model1.png", dpi=120)

print("\n" + "=" * 70)
print("Model II: constant income flow a and consumption flow c")
print("=" * 70)
kw = dict(r=0.03, lam=0.05, mu=0.08, sigma=0.2, a=0.02, l=0.5,
          premium_rate=0.04, f=100.0, n=10.0)
same = StochScenario(model="II", c=0.02, **kw)
print("a = c reproduces model I with a - c = 0 exactly:")
print(f"  model II breakpoints: {solve(same).bps}")

crit = criticals(same)
print(f"\ncritical consumption C0 = {crit.c0:.4f} (ceiling), "
      f"C1 + a = {crit.c1 + same.a:.4f} (buy-everywhere floor, l = 0)")
print(f"largest premium rate with a non-empty window: H~ = {crit.h_tilde:.4f}")
print(f"(H = {same.premium_rate} exceeds H~, so this scenario never buys "
      "everywhere)")

print("\nBuy-everywhere regime (l = 0, premium below H~, high consumption):")
h_small = 0.8 * crit.h_tilde
base = dict(kw, l=0.0, premium_rate=h_small)
probe = StochScenario(model="II", c=base["a"] + 1e-9, **base)
cr = criticals(probe)
c_high = cr.c1 + probe.a + 0.25 * (cr.c0 - cr.c1 - probe.a)
be = StochScenario(model="II", c=c_high, **base)
sol_be = solve(be)
print(f"  consumption c = {c_high:.4f} in [{cr.c1 + probe.a:.4f}, {cr.c0:.4f}]")
print(f"  family: {sol_be.family}; insure f - w at every wealth below "
      f"w9 = {sol_be.bps.quasi:.4f}")
for w in np.linspace(0.0, sol_be.bps.ideal, 6):
    a = action_stoch(be, float(w), sol_be)
    print(f"    w = {w:7.3f}: value {value_stoch(be, float(w), sol_be):.5f}, "
          f"coverage {a.purchase:7.3f}, invest {a.invest:8.4f}")

print("\nwrote stoch_model1_curve.csv, stoch_model1.png")
