"""What adjusting for a 'whole' does to the effect of a 'part'.

Total energy intake is the sum of three macronutrient intakes, each of which
affects the outcome.  The whole is a collider of its parts: conditioning on
it makes the unconditioned parts trade off against each other, turning a
total effect into a relative (substitution) effect.  Dividing a part by the
whole is worse still: the ratio mixes the part's effect with the inverse of
every component's.
"""

from detdag import (
    classify_estimand,
    det_closure,
    fixture_source,
    is_D_separated,
    load_fixture,
    parse,
    partial_correlation,
    simulate,
)

fig3 = load_fixture("fig3")

print("closure of {X1,X2,X3}: ", det_closure(fig3, ["X1", "X2", "X3"]))
print("closure of {X,X1,X2}:  ", det_closure(fig3, ["X", "X1", "X2"]))

for adjust in ([], ["X"], ["X", "X2"]):
    rep = classify_estimand(fig3, "X1", "Y", adjust)
    extra = f" substituting {list(rep.substituting)}" if rep.substituting else ""
    print(f"adjust={adjust!s:12} -> {rep.kind}{extra}")

verdict = is_D_separated(fig3, "X1", "X2", ["X"])
print(f"\nX1 vs X2 given X: {verdict.status} via {verdict.witness.pretty()}")
ds = simulate(fig3, n=100_000, seed=42)
print(f"empirically: corr(X1, X2)          = {partial_correlation(ds, 'X1', 'X2'):+.4f}")
print(f"             corr(X1, X2 | X)      = {partial_correlation(ds, 'X1', 'X2', ['X']):+.4f}")

ratio_graph = parse(fixture_source("fig3").rstrip()[:-1] + "  Z1 := ratio(X1, X)\n}\n")
rep = classify_estimand(ratio_graph, "Z1", "Y", [])
print(f"\npart/whole ratio as exposure -> {rep.kind}")
print(f"  numerator components:   {list(rep.numerator_base)}")
print(f"  denominator components: {list(rep.denominator_base)}")
for w in rep.warnings:
    print(f"  [{w.code}] {w.text}")
