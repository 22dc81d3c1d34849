"""Write catalog entries as CLI input documents (a starting point for hand-written inputs).

    python3 scripts/export_inputs.py inputs/ jacobi(1) ex318
"""

import sys
from pathlib import Path

from liecones import catalog, cli


def main(argv):
    if not argv:
        print(__doc__.strip())
        return 2
    out = Path(argv[0])
    out.mkdir(parents=True, exist_ok=True)
    names = argv[1:] or catalog.standard_entries()
    for name in names:
        entry = catalog.get(name)
        fname = name.replace("(", "_").replace(")", "") + ".json"
        (out / fname).write_text(cli.dumps(cli.entry_to_json(entry)) + "\n")
        print(out / fname)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
