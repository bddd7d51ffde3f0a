#!/usr/bin/env python3
"""Regenerate src/ldpc_base_graphs.cpp from semicolon-separated copies of the
TS 38.212 base-graph shift tables (columns: row;col;shift for i_ls 0..7).

usage: gen_base_graphs.py BG1.csv BG2.csv > src/ldpc_base_graphs.cpp
"""
import sys

HEADER = open(__file__.replace("gen_base_graphs.py", "license_header.txt")).read()


def load(path):
    rows, r = [], None
    with open(path) as fh:
        for i, line in enumerate(fh):
            if i < 2:
                continue
            f = line.strip().split(";")
            if f[0] != "":
                r = int(f[0])
            rows.append((r, int(f[1]), [int(x) for x in f[2:10]]))
    return rows


def main():
    out = [HEADER]
    out.append("\n// Base graph shift tables of TS 38.212 Table 5.3.2-2 (BG1) and Table 5.3.2-3 (BG2).\n"
               "// One entry per nonzero base-graph position; shift[i_ls] for lifting set index 0..7.\n"
               "// Generated by scripts/gen_base_graphs.py, do not edit.\n\n"
               "#include \"ldpc_base_graphs.hpp\"\n\nnamespace uavnr::ldpc::detail {\n")
    for name, path in (("BG1", sys.argv[1]), ("BG2", sys.argv[2])):
        rows = load(path)
        out.append(f"\nconst std::array<BaseGraphEntry, {len(rows)}> k{name}Entries = {{{{\n")
        for r, c, v in rows:
            out.append(f"    {{{r}, {c}, {{{', '.join(map(str, v))}}}}},\n")
        out.append("}};\n")
    out.append("\n}  // namespace uavnr::ldpc::detail\n")
    sys.stdout.write("".join(out))


if __name__ == "__main__":
    main()
