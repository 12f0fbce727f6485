"""plot <preset> --in <dir> --out <dir>

Reads <in>/<preset>.csv (schema-checked) and writes <out>/<preset>.png.
Exit codes: 0 success, 2 unknown preset, 3 bad/missing input, 4 cannot
write output.
"""
import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .render import RENDERERS  # noqa: E402
from .tables import SCHEMAS, SchemaError, load_table  # noqa: E402


def render_preset(preset, in_dir, out_dir, dpi=200):
    cols = load_table(Path(in_dir) / f"{preset}.csv", SCHEMAS[preset])
    Path(out_dir).mkdir(parents=True, exist_ok=True)
    fig = plt.figure(figsize=(4.2, 3.2), constrained_layout=True)
    try:
        RENDERERS[preset](cols, fig)
        out = Path(out_dir) / f"{preset}.png"
        fig.savefig(out, dpi=dpi)
    finally:
        plt.close(fig)
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(prog="plot", description=__doc__)
    ap.add_argument("preset")
    ap.add_argument("--in", dest="in_dir", required=True)
    ap.add_argument("--out", dest="out_dir", default=".")
    ap.add_argument("--dpi", type=int, default=200)
    args = ap.parse_args(argv)
    if args.preset not in RENDERERS:
        print(f"error: unknown preset {args.preset!r}; choose from "
              f"{', '.join(sorted(RENDERERS))}", file=sys.stderr)
        return 2
    try:
        Path(args.out_dir).mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create output dir: {exc}", file=sys.stderr)
        return 4
    try:
        out = render_preset(args.preset, args.in_dir, args.out_dir,
                            dpi=args.dpi)
    except SchemaError as exc:
        print(f"error: input: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: output: {exc}", file=sys.stderr)
        return 4
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
