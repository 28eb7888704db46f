"""From the Yang-Lee module to kappa = 40, in exact arithmetic.

The identity module of M(5, 2) has null states at levels 1 and 4.  Once they
are quotiented out, the grade-2 drift vector vanishes for exactly one kappa.
"""

from fractions import Fraction

from slelab.algebra import PBWVector, VermaParams, find_singular_vectors, partitions, submodule_reduce
from slelab.bridge import CandidateSpec, candidate_vector, obstruction_L1, solve_kappa_null

params = VermaParams(Fraction(-22, 5), 0)
(v4,) = find_singular_vectors(4, params)
print("level-4 singular vector:")
for parts, cf in zip(partitions(4), v4.coefficients()):
    word = " ".join(f"L_-{k}" for k in parts)
    print(f"   {str(cf):>9}  {word}")

gens = [PBWVector(1, {(1,): 1}, params), v4]
null = PBWVector(4, {(4,): 1, (2, 2): Fraction(-5, 3)}, params)
print("(L_-4 - 5/3 L_-2^2)|0> reduces to:", submodule_reduce(null, gens))

# The drift vector is never singular in the full Verma module at grade 2 ...
print("L_1 of the grade-2 drift:", obstruction_L1(CandidateSpec(2, 2)))

# ... but it is null in the quotient for one value of kappa.
res = solve_kappa_null(2, 2, 5, 2, 1, 1)
print("kappa with a null drift:", [str(k) for k in res.roots])
print("residue before fixing kappa:", res.residue)
print("drift at kappa = 40:", candidate_vector(CandidateSpec(2, 2, 40), params))
print("opposite sign choice:", solve_kappa_null(2, 1, 5, 2, 1, 1).to_dict()["note"])
