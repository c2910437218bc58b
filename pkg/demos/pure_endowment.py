"""Hedging longevity instead of death: deferred pure endowments.

The endowment problem mirrors the life problem with the survival weights
swapped; this script shows the mirror explicitly and the effect of the
deferral period on the premium and the value curve.

Run from the repository root:  python3 demos/pure_endowment.py
"""

import numpy as np

from goalreach import (
    CoverageWindow,
    DetLifeScenario,
    EndowScenario,
    ForceParams,
    action_single_endow,
    thresholds_single_endow,
    value_single,
    value_single_endow,
)

fp = ForceParams(r=0.04, lam=0.05, theta=0.1)
cw = CoverageWindow(m=3.0, n=12.0)

print("=" * 70)
print("Single-premium pure endowment: retire rich after m+n = 15 years")
print("=" * 70)
scn = EndowScenario(fp, cw, f=100.0, d=10.0)
th = thresholds_single_endow(scn)
print(f"premium R per $1 of benefit : {scn.premium.value:.6f}")
print(f"quasi-ideal R*              : {th.quasi_ideal:.4f}")
print(f"ideal value w*              : {th.ideal:.4f}")

print("\n wealth   P(reach goal)  action")
for w in np.linspace(0.0, 1.05 * th.ideal, 10):
    act = action_single_endow(scn, float(w))
    label = "wait" if act.kind == "none" else f"buy {act.buy_amount:.1f}"
    print(f"  {w:7.2f}   {value_single_endow(scn, float(w)):11.6f}   {label}")

print("\n" + "=" * 70)
print("The life/endowment mirror")
print("=" * 70)
print("""
Same forces, same window, same premium number: the life value weights the
window mass e^{-lam m} - e^{-lam(m+n)} where the endowment value weights
the survival mass e^{-lam(m+n)}, and vice versa.  Supplying the endowment
premium to the life scenario and swapping which branch we read makes the
first-branch values trade places:""")

life = DetLifeScenario(fp, cw, f=100.0, d=10.0,
                       premium_override=scn.premium.value)
w = 0.5 * th.quasi_ideal
v_life = value_single(life, w)
v_endow = value_single_endow(scn, w)
win_mass = life.window_weight
surv_mass = scn.window_weight
print(f"\n  at w = {w:.3f}:")
print(f"  life value   = {v_life:.6f} = reach-quasi prob * {win_mass:.6f}")
print(f"  endow value  = {v_endow:.6f} = reach-quasi prob * {surv_mass:.6f}")
print(f"  ratio check  : {v_life / v_endow:.6f} vs weight ratio "
      f"{win_mass / surv_mass:.6f}")

print("\n" + "=" * 70)
print("Deferral makes endowments cheap")
print("=" * 70)
print("\n  m      premium R   quasi-ideal  ideal")
for m in (0.0, 2.0, 5.0, 10.0):
    s = EndowScenario(ForceParams(0.04, 0.05, 0.1), CoverageWindow(m, 12.0), f=100.0)
    t = thresholds_single_endow(s)
    print(f"  {m:4.1f}   {s.premium.value:.6f}    {t.quasi_ideal:8.4f}   {t.ideal:8.3f}")
