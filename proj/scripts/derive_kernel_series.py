#!/usr/bin/env python3
"""Derive the small-angle series of the trigonometric kernels and emit
include/mvc/detail/kernel_series.hpp.

Every kernel is even in x, so only the coefficients of x^0, x^2, ... are
stored.  eq1' and eq2' are odd; their series are stored divided by x.

Usage: python3 scripts/derive_kernel_series.py > include/mvc/detail/kernel_series.hpp
"""
import sympy as sp

TERMS = 14

x = sp.symbols("x")
s, c = sp.sin(x), sp.cos(x)
eq1 = (c * s - x) / s**3
eq2 = x / s
deq1 = sp.diff(eq1, x)
deq2 = sp.diff(eq2, x)

KERNELS = [
    ("eq1", eq1),
    ("eq2", eq2),
    ("eq3", (c - 1) / s**2),
    ("eq4", (2 * c * s**3 + 3 * (s * c - x)) / s**5),
    ("eq5", (c * s**2 * (1 - 2 * c) - 2 * c**2 + 2 * c) / s**4),
    ("eq6", deq1 * c / s),
    ("eq7", deq1 * s),
    ("eq8", deq2 * c / s),
    ("eq9", deq2 * s),
    ("deq1_over_x", deq1 / x),
    ("deq2_over_x", deq2 / x),
]


def coefficients(expr):
    ser = sp.series(expr, x, 0, 2 * TERMS).removeO()
    out = []
    for n in range(TERMS):
        assert ser.coeff(x, 2 * n + 1) == 0
        out.append(sp.nsimplify(ser.coeff(x, 2 * n)))
    return out


def main():
    print("// Generated by scripts/derive_kernel_series.py; do not edit.")
    print("#pragma once")
    print()
    print("#include <array>")
    print()
    print("namespace mvc::detail {")
    print()
    print(f"inline constexpr int kSeriesTerms = {TERMS};")
    print()
    for name, expr in KERNELS:
        cs = coefficients(expr)
        print(f"// {name}(x) = sum_k c_k x^(2k)")
        print(f"inline constexpr std::array<double, kSeriesTerms> k_{name}_series = {{")
        for q in cs:
            print(f"    {float(q)!r},  // {q}")
        print("};")
        print()
    print("}  // namespace mvc::detail")


if __name__ == "__main__":
    main()
