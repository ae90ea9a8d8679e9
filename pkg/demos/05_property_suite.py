"""Run the structural check suite, then prove it can catch a saboteur.

Every claimed property (thresholds, periods, recurrences, payoff bounds)
is an executable check over seeded random games.  Injecting a deliberate
bug into the period detector must make the registered checks fail; if a
mutant survived, the suite would be too weak to trust.
"""

from hedgeplay import analysis as an

results = an.run_suite(depth="fast")
summary = an.suite_summary(results)
print(f"clean run: {summary['passed']}/{summary['total']} checks pass")

mutant = "period-double"
mutated = an.run_suite(depth="fast", mutant=mutant)
failed = sorted({r.check_id for r in mutated if not r.passed})
print(f"\nwith mutant {mutant!r} injected: {len(failed)} checks fail")
for cid in failed:
    flag = "registered kill" if cid in an.MUTANT_KILLS[mutant] else "collateral"
    print(f"  {cid}  ({flag})")

again = an.suite_summary(an.run_suite(depth="fast"))
print(f"\nmutant removed: {again['passed']}/{again['total']} pass again")
