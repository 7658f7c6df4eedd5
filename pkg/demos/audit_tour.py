"""A small tour of the theorem audit.

Enumerates every semiflow on at most three points with at most two
generators, up to relabelling, and checks each catalog entry on it. Entries
whose hypothesis never fires are reported as unsatisfiable rather than as
passes.

    python3 demos/audit_tour.py
"""

from semiflows.audit import atlas, format_report, run_audit

instances = atlas(3, 2, "metric-cycle")
print(len(instances), "instances on the separated cycle profile")

results = run_audit(instances)
print(format_report(results, {"mode": "exhaustive n<=3 g<=2", "instances": len(instances)}))

busiest = max(results, key=lambda r: r.hypotheses_met)
print(f"most exercised entry: {busiest.theorem_id} "
      f"({busiest.hypotheses_met} of {busiest.instances_total} instances meet its hypothesis)")
