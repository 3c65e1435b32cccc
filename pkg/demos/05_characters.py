"""Characters, the eta function and the nuclearity probe.

The partition generating function is evaluated through eta, cross-checked by
the modular law, and then multiplied by a damping factor to see whether the
product dies as beta goes to 0.
"""
import math

from derivcft.characters import eta, modular_check, nuclearity_probe, partition_sum_direct, reduced_character

print("reduced character n=1:", reduced_character(1, 10).coefficients)
print("eta(i/2pi) =", eta(1).value)
print("direct partition sum at beta=1:", partition_sum_direct(1, 300)[0])
for beta in (0.5, 1, 2, math.pi):
    print(f"modular residual at beta={beta:.4g}: {float(modular_check(beta)):.1e}")

for beta0 in (1.70, 1.60):
    r = nuclearity_probe(beta0, 1)
    print(f"beta0={beta0}: {r.verdict}, fitted growth {r.growth_constant:.6f} (pi^2/6 = {math.pi ** 2 / 6:.6f})")
    for note in r.notes:
        print("   note:", note)
