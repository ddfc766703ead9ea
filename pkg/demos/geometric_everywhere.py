"""Sum the same geometric series in three ordered structures and see where it breaks.

Run with ``python3 demos/geometric_everywhere.py``.
"""

from hemiring import get_structure
from hemiring.errors import HemiringError
from hemiring.sequences import ConstantIndex, ConvergenceCertificate, FromExpression, validate, validate_convergence
from hemiring.theorems import geometric_sum

for sid, r in [("rational", "1/2"), ("z1p:2", "3/4"), ("zx", "1/X"), ("zx", "1/2")]:
    try:
        res = geometric_sum(r, sid)
    except HemiringError as exc:
        print(f"{sid:>9}  r = {r:<4}  no certificate: {type(exc).__name__}: {exc}")
        continue
    ok = validate(res.certificate).passed
    print(f"{sid:>9}  r = {r:<4}  sum = {get_structure(sid).render(res.sum):<10} validates: {ok}")

# In Z(X) the constant 1/2 sits above every 1/X^k, so (1/2)^n never gets below 1/X.
ZX = get_structure("zx")
claim = ConvergenceCertificate(FromExpression("(1/2)^n", ZX), ZX.zero, ConstantIndex(100))
report = validate_convergence(claim, [ZX.parse("1/X")], 8)
print(f"\n(1/2)^n -> 0 in Z(X)? violations at n = {[v.n for v in report.violations]}")
