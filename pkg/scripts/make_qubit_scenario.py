#!/usr/bin/env python3
"""Write the reference transport scenarios to ./scenarios/.

Produces qubit.json (identity trivialization) and qubit_gauged.json
(rotating frame), both consumable by `clifbundle transport --scenario`.
"""

import json
from pathlib import Path

from clifbundle.transport import qubit_scenario_dict


def main():
    out = Path("scenarios")
    out.mkdir(exist_ok=True)
    (out / "qubit.json").write_text(json.dumps(qubit_scenario_dict(), indent=2) + "\n")
    (out / "qubit_gauged.json").write_text(
        json.dumps(qubit_scenario_dict(with_gauge=True), indent=2) + "\n"
    )
    print(f"wrote {out / 'qubit.json'} and {out / 'qubit_gauged.json'}")


if __name__ == "__main__":
    main()
