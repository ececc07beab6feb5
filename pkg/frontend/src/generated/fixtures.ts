// Generated by scripts/record_contract_fixtures.py; do not edit.
export const FIXTURES: Record<string, string> = {
  "fig1a": "# A binary screening flag fully determined by dichotomising a measurement.\ndag \"fig1a\" {\n  node B [label=\"birthweight (g)\", mean=3500, sd=450]\n  M := threshold(B, 4000) [label=\"macrosomia\"]\n  node Y [label=\"neonatal outcome\"]\n  B -> Y\n}\n",
  "fig1b": "# A 'whole' variable fully determined by summing its 'part' variables.\ndag \"fig1b\" {\n  node Y1 [label=\"fat mass\"]\n  node Y2 [label=\"fat-free mass\"]\n  Y := sum(Y1, Y2) [label=\"total mass\"]\n}\n",
  "fig1c": "# A composite index fully determined by dividing one measurement by another.\ndag \"fig1c\" {\n  node Z1 [label=\"waist circumference\"]\n  node Z2 [label=\"hip circumference\"]\n  Z := ratio(Z1, Z2) [label=\"waist-to-hip ratio\"]\n}\n",
  "fig2a": "# Two per-capita indices share a denominator, so they correlate even though\n# the numerators are simulated as entirely unrelated.\ndag \"fig2a\" {\n  node N [label=\"population size\"]\n  node X [label=\"GDP\"]\n  node Y [label=\"CO2 emissions\"]\n  Z1 := ratio(X, N) [label=\"GDP per capita\"]\n  Z2 := ratio(Y, N) [label=\"CO2 per capita\"]\n}\n",
  "fig2b": "# A change score and the baseline it was computed from.\ndag \"fig2b\" {\n  node X0 [label=\"baseline measure\", time=0]\n  node X1 [label=\"follow-up measure\", time=1]\n  X := diff(X1, X0) [label=\"change score\", time=1]\n  X0 -> X1\n}\n",
  "fig2c": "# Individual measurements aggregated within areas: the area mean and the\n# area prevalence are built from the same individual-level sources.\ndag \"fig2c\" {\n  node X1_i [label=\"systolic blood pressure\", mean=120, sd=15]\n  X_i := threshold(X1_i, 140) [label=\"hypertension\"]\n  node N_j [label=\"area\"]\n  X1_j := aggmean(X1_i, N_j) [label=\"area mean blood pressure\"]\n  X_j := aggprev(X1_i, 140, N_j) [label=\"area prevalence of hypertension\"]\n}\n",
  "fig3": "# Macronutrient intakes sum to total energy intake; each intake affects the\n# outcome with its own strength (equal strengths would make the outcome depend\n# on the parts only through their sum, hiding the graph's structure from data).\ndag \"fig3\" {\n  node X1 [label=\"carbohydrate intake\"]\n  node X2 [label=\"protein intake\"]\n  node X3 [label=\"fat intake\"]\n  X := sum(X1, X2, X3) [label=\"total energy intake\"]\n  node Y [label=\"diabetes risk\"]\n  X1 -> Y [coef=0.4]\n  X2 -> Y [coef=0.6]\n  X3 -> Y [coef=0.9]\n}\n",
  "fig4a": "# A body-size index built from two measurements, with a downstream outcome.\ndag \"fig4a\" {\n  node height [time=1, mean=1.7, sd=0.07]\n  node weight [time=2, mean=75, sd=12]\n  BMI := ratio(weight, height) [label=\"body mass index\", time=2]\n  node CVD [label=\"cardiovascular disease\", time=3]\n  BMI -> CVD\n}\n",
  "fig5b": "# An early-life cause that precedes both components of a composite exposure.\ndag \"fig5b\" {\n  node C [label=\"breastfeeding duration\", time=0]\n  node X1 [label=\"adult height\", time=1]\n  node X2 [label=\"adult weight\", time=2]\n  X := ratio(X2, X1) [label=\"body mass index\", time=2]\n  node Y [label=\"cardiovascular disease\", time=3]\n  C -> X1\n  C -> X2\n  C -> Y\n  X -> Y\n}\n",
  "fig5c": "# A cause with a much stronger effect on one component than the other.\ndag \"fig5c\" {\n  node C [label=\"adolescent sugar intake\", time=1]\n  node X1 [label=\"adult height\", time=2]\n  node X2 [label=\"adult weight\", time=3]\n  X := ratio(X2, X1) [label=\"body mass index\", time=3]\n  node Y [label=\"cardiovascular disease\", time=4]\n  C -> X1 [coef=0.1]\n  C -> X2 [coef=0.8]\n  C -> Y\n  X -> Y\n}\n",
  "fig5d": "# A variable caused by one component of a composite exposure but causing the\n# other: a confounder for one parent, a mediator for the other.\ndag \"fig5d\" {\n  node X1 [label=\"adult height\", time=1]\n  node C [label=\"marital status\", time=2]\n  node X2 [label=\"adult weight\", time=3]\n  X := ratio(X2, X1) [label=\"body mass index\", time=3]\n  node Y [label=\"cardiovascular disease\", time=4]\n  X1 -> C\n  C -> X2\n  C -> Y\n  X -> Y\n}\n",
};
