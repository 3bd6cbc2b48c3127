#!/usr/bin/env python3
"""Scalar refinement chains: how the dyadic correction tightens classical bounds.

For a convex f and a point outside [a, b], the secant extrapolation
(1+nu) f(a) - nu f(b) sits below f((1+nu) a - nu b). Adding dyadic midpoint
gaps closes part of that distance, and more levels never hurt.
"""

from matmeans import (
    convex_refined_chain,
    kantorovich_chain,
    harmonic_geometric_chain,
    harmonic_reverse_chain,
    young_reverse_chain,
)

f = lambda t: t * t
a, b, nu = 0.0, 1.0, 2.5

print(f"f(t) = t^2, a={a}, b={b}, nu={nu}")
print(f"target f((1+nu)a - nu b) = {f((1 + nu) * a - nu * b):.6f}")
print()
print("depth   secant bound   refined bound   remaining gap")
for depth in range(1, 9):
    chain = convex_refined_chain(f, a, b, nu, depth)
    secant = chain.value("secant")
    refined = chain.value("refined")
    target = chain.value("target")
    print(f"{depth:>5d}   {secant:>12.6f}   {refined:>13.6f}   {target - refined:>13.6f}")

print()
print("Reverse Young chain at (x, y, nu) = (4, 1, 1):")
chain = young_reverse_chain(4.0, 1.0, 1.0, 1)
for label, value in zip(chain.labels, chain.values):
    print(f"  {label:<8s} {value:.6f}")

print()
print("Harmonic-family chains on 0 < x < y = (1, 2), nu = 1.5:")
for name, chain in [
    ("arith -> harm", harmonic_reverse_chain(1.0, 2.0, 1.5, 3)),
    ("geom  -> harm", harmonic_geometric_chain(1.0, 2.0, 1.5, 3)),
    ("Kantorovich  ", kantorovich_chain(1.0, 2.0, 1.5)),
]:
    values = "  <=  ".join(f"{v:.6f}" for v in chain.values)
    print(f"  {name}: {values}")

print()
print("The depth-1 geometric-harmonic middle term is exactly the Kantorovich bound:")
mid = harmonic_geometric_chain(1.0, 2.0, 1.5, 1).value("refined")
kan = kantorovich_chain(1.0, 2.0, 1.5).values[0]
print(f"  {mid:.12f} vs {kan:.12f}  (difference {abs(mid - kan):.2e})")
