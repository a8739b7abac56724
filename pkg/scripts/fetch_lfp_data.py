#!/usr/bin/env python3
"""Pointer to the public battery cycling dataset behind the lfp-like stand-in.

The real data (124 commercial LFP/graphite cells cycled to end of life under
varied fast-charging protocols) is publicly hosted and is NOT vendored in this
repository; the built-in ``lfp-like`` dataset is a synthetic stand-in with the
same structure. This script just documents the source and, on request,
downloads the archive next to itself.

Source portal: https://data.matr.io/1/
Project page:  https://data.matr.io/1/projects/5c48dd2bc625d700019f3204
"""

import sys
import urllib.request

PORTAL = "https://data.matr.io/1/"
PROJECT = "https://data.matr.io/1/projects/5c48dd2bc625d700019f3204"


def main() -> int:
    if "--download" not in sys.argv:
        print("The raw cycling data is not distributed with this package.")
        print(f"Browse and download it from: {PROJECT}")
        print("Re-run with --download to fetch the project page for the file listing.")
        return 0
    with urllib.request.urlopen(PROJECT, timeout=60) as resp:
        body = resp.read()
    out = "lfp_project_page.html"
    with open(out, "wb") as fh:
        fh.write(body)
    print(f"wrote {out}; follow the batch links there for the .mat archives")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
