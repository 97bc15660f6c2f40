#!/usr/bin/env python3
"""Validates METS and ALTO files against the schemas next to this script.

Usage: validate.py FILE... | validate.py --tree DIR
Prints one line per invalid file and exits 1 if any file fails.
"""
import pathlib
import sys

import xmlschema

HERE = pathlib.Path(__file__).resolve().parent
METS_NS = "http://www.loc.gov/METS/"
ALTO_NS = "http://www.loc.gov/standards/alto/ns-v2#"


def collect(args):
    if len(args) == 2 and args[0] == "--tree":
        root = pathlib.Path(args[1])
        return sorted(list(root.rglob("mets.xml")) + list(root.rglob("alto/*.xml")))
    return [pathlib.Path(a) for a in args]


def main(argv):
    files = collect(argv)
    if not files:
        print("no files to validate")
        return 1
    schemas = {
        METS_NS: xmlschema.XMLSchema(str(HERE / "mets.xsd")),
        ALTO_NS: xmlschema.XMLSchema(str(HERE / "alto-v2-subset.xsd")),
    }
    failures = 0
    for f in files:
        text = f.read_text(encoding="utf-8")
        schema = schemas[METS_NS] if "<mets:mets" in text else schemas[ALTO_NS]
        errors = list(schema.iter_errors(str(f)))
        if errors:
            failures += 1
            print(f"{f}: {errors[0].reason}")
    print(f"validated {len(files)} files, {failures} invalid")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
