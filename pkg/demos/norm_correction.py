"""Why the finite-dimensional norm carries a factor nM.

Run with ``python3 demos/norm_correction.py``.
"""

import gmpy2

from hemiring.norms import StructureConstants, build_finite_dim_pseudonorm, raw_sum_norm

mpq = gmpy2.mpq

# Q[j] with j^2 = 5: basis products 1*1 = 1, 1*j = j, j*j = 5
sc = StructureConstants.build([[[1, 0], [0, 1]], [[0, 1], [5, 0]]])
raw = raw_sum_norm(sc)
built = build_finite_dim_pseudonorm(sc)
A = built.source
j = (mpq(0), mpq(1))
jj = A.mul(j, j)

print(f"j*j = {tuple(map(str, jj))}")
print(f"raw sum norm:  |jj| = {raw(jj)}  but |j||j| = {raw(j) * raw(j)}")
print(f"with nM = {built.params['nM']}:  |jj| = {built(jj)}  <=  |j||j| = {built(j) * built(j)}")
