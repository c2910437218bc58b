"""Deferred term life insurance in a risk-free account.

Walks through both premium modes: where the quasi-ideal and ideal values
sit, what the maximum goal-reaching probability looks like, and how the
patient (lam <= r) and impatient (lam > r) regimes differ under
continuous premiums.

Run from the repository root:  python3 demos/deterministic_life.py
Writes value curves to det_life_single.csv / det_life_continuous.csv and
a figure to det_life_curves.png.
"""

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from goalreach import (
    CoverageWindow,
    DetLifeScenario,
    ForceParams,
    action_continuous,
    action_single,
    thresholds_continuous,
    thresholds_single,
    value_continuous,
    value_single,
)
from goalreach.det_life import build_value
from goalreach.scenario_io import write_csv

print("=" * 70)
print("Single premium: 5-year deferred, 10-year term, goal 100, owned 20")
print("=" * 70)

scn = DetLifeScenario(ForceParams(r=0.04, lam=0.02, theta=0.1),
                      CoverageWindow(m=5.0, n=10.0), f=100.0, d=20.0)
th = thresholds_single(scn)
print(f"premium K per $1 of benefit : {scn.premium.value:.6f}")
print(f"quasi-ideal value K*        : {th.quasi_ideal:.4f}   "
      "(all-in purchase affordable here)")
print(f"mid threshold w0            : {th.mid:.4f}")
print(f"ideal value w*              : {th.ideal:.4f}   (goal certain here)")

ws = np.linspace(0.0, 1.1 * th.ideal, 23)
print("\n wealth   P(reach goal)  action")
for w in ws[::2]:
    act = action_single(scn, float(w))
    label = "wait" if act.kind == "none" else f"buy {act.buy_amount:.1f}"
    print(f"  {w:7.2f}   {value_single(scn, float(w)):11.6f}   {label}")

_, pv = build_value(scn)
grid = np.linspace(0.0, th.ideal, 400)
write_csv("det_life_single.csv", ["wealth", "value", "branch"],
          [(float(w), float(pv.value(w)), pv.branch(float(w))) for w in grid])

print("\n" + "=" * 70)
print("Continuous premium: the two time regimes")
print("=" * 70)

patient = DetLifeScenario(ForceParams(r=0.05, lam=0.04), CoverageWindow(2.0, 15.0),
                          f=100.0, mode="continuous")
impatient = DetLifeScenario(ForceParams(r=0.05, lam=0.06), CoverageWindow(2.0, 15.0),
                            f=100.0, mode="continuous")

for name, s in [("patient (lam <= r)", patient), ("impatient (lam > r)", impatient)]:
    t = thresholds_continuous(s)
    print(f"\n{name}: rate H = {s.premium.value:.5f}, "
          f"H* = {t.quasi_ideal:.3f}, w* = {t.ideal:.3f}")
    if t.free_boundary is None:
        print("  no free boundary: wait all the way to the ideal value")
    else:
        print(f"  free boundary w0 = {t.free_boundary:.4f}: below it, insure "
              "the whole gap f - w immediately")
        for w in (0.5 * t.free_boundary, 2.0 * t.free_boundary):
            act = action_continuous(s, w)
            print(f"    at w = {w:8.4f}: {act.kind} ({act.buy_amount:.2f})")

fig, axes = plt.subplots(1, 2, figsize=(11, 4))
axes[0].plot(grid, pv.value(grid))
for x, label in [(th.quasi_ideal, "K*"), (th.mid, "w0"), (th.ideal, "w*")]:
    axes[0].axvline(x, ls=":", color="gray")
    axes[0].annotate(label, (x, 0.02))
axes[0].set_title("single premium")
axes[0].set_xlabel("wealth")
axes[0].set_ylabel("max P(reach goal)")
for s, label in [(patient, "lam <= r"), (impatient, "lam > r")]:
    t = thresholds_continuous(s)
    g = np.linspace(0.0, t.ideal, 400)
    axes[1].plot(g, value_continuous(s, g), label=label)
axes[1].set_title("continuous premium")
axes[1].set_xlabel("wealth")
axes[1].legend()
fig.tight_layout()
fig.savefig("det_life_curves.png", dpi=120)

t = thresholds_continuous(impatient)
g = np.linspace(0.0, t.ideal, 400)
write_csv("det_life_continuous.csv", ["wealth", "value"],
          [(float(w), float(v)) for w, v in zip(g, value_continuous(impatient, g))])
print("\nwrote det_life_single.csv, det_life_continuous.csv, det_life_curves.png")
