"""Check whether triplets satisfy the smoothness and moment class conditions."""

from spectral_levy import ClassParams, JumpDensity, LevyTriplet, check_class_membership

params = ClassParams(beta=1.0, L=10.0, Lambda=2.0, K=10.0, Sigma=2.0, Gamma=2.0, C=10.0)
for triplet in (
    LevyTriplet(1.0, 1.0, 1.0, JumpDensity.gaussian(0.0, 1.0)),
    LevyTriplet(1.0, 1.0, 3.0, JumpDensity.gaussian(0.0, 1.0)),
    LevyTriplet(0.0, 0.5, 1.0, JumpDensity.uniform_sym(1.0)),
):
    report = check_class_membership(triplet, params)
    print(triplet.jump_density.family, f"lambda={triplet.lam}", "->", "inside" if report.passed else "outside")
    for c in report.conditions:
        print(f"    {c.name:7s} {c.value:10.4g} <= {c.bound:<8g} {'ok' if c.passed else 'FAIL'}")
