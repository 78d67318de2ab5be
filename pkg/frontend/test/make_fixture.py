"""Emit a replay fixture for the web client conformance test: the engine's
own headless session trace plus the report it should reproduce over the wire.
"""

import json
import sys

from sonigame.bot import report_to_json, run_headless_detailed
from sonigame.configio import default_config_document

duration = float(sys.argv[1]) if len(sys.argv) > 1 else 6.0
doc = default_config_document()
report, records = run_headless_detailed(doc.game, duration)
print(json.dumps({
    "duration_s": duration,
    "expected_report": json.loads(report_to_json(report)),
    "trace": [{"t": r.t, "x": r.x, "y": r.y} for r in records],
    "estimates": [{"t": r.t, "x": r.estimate[0], "y": r.estimate[1]} for r in records],
}))
