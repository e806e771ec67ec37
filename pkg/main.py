#!/usr/bin/env python3
"""
Example usage of rational-ptc.

This walks through the bundled models: validation, cohomology, the
zero-divisor cup-length, HTC witnesses and the TC_r sandwich.
"""

from rational_ptc import (
    create_config,
    get_bound_report,
    htc_witness,
    load_model,
    series,
    zcl,
)
from rational_ptc.cdga import betti_numbers
from rational_ptc.interfaces import Strategy
from rational_ptc.model_parser import bundled_models


def main():
    """Demonstrate the engine on the bundled models."""
    print("🧮 rational-ptc - Bundled Models Demo")
    print("=" * 60)

    print("\n📂 Bundled models:")
    print("-" * 30)
    for name in bundled_models():
        print(f"   • {name}")

    print("\n📐 Cohomology of the KY space Λ(x, y, z; dz = xy):")
    print("-" * 40)
    ky = load_model("ky")
    betti = betti_numbers(ky.total, 11)
    print(f"   ✅ Betti numbers through degree 11: {betti}")
    print(f"   ✅ zcl_2 = {zcl(ky, 2, 22).value}")

    print("\n🔍 HTC witness for the truncated hyperbolic example:")
    print("-" * 40)
    hyperbolic = load_model("hyperbolic_truncated")
    witness = htc_witness(hyperbolic, 2, 2, 14)
    if witness is not None:
        print(f"   ✅ HTC_2 >= {witness.bound} in degree {witness.degree}")
        print(f"   ✅ Cocycle: {witness.element}")

    print("\n🥪 TC_2 of the Stiefel bundle V_2(R^6) -> V_3(R^7) -> S^6:")
    print("-" * 40)
    config = create_config(strategy=Strategy.AUTO)
    report = get_bound_report("stiefel_n2", r=2, keep=["x", "z"], max_degree=40, config=config)
    print(f"   ✅ {report.lower} <= TC_2 <= {report.upper} ({report.status.value})")
    for assertion in report.assertions_used:
        print(f"   ⚠️  assuming {assertion}")

    print("\n📈 Generating function of S^4:")
    print("-" * 40)
    sphere = series(load_model("s4_point"), 3, 16)
    print(f"   ✅ TC_2, TC_3, TC_4 = {sphere.values}")
    print(f"   ✅ P(z) = {sphere.fit}")

    print("\n🎉 Demo completed!")


if __name__ == "__main__":
    main()
