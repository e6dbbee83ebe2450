instruct_text = r'''
▶ Transform
pn2sc transform NET.json -o CHART.json     Petri net to statechart
pn2sc transform NETS/ -o CHARTS/           Every *.json in a folder
    exit 0 on success, 2 if the net is irreducible

▶ Validate
pn2sc validate ACTUAL.json EXPECTED.json   Counts, hierarchy and next links
pn2sc validate ACTUAL.json EXPECTED.json --counts-only
pn2sc validate ACTUAL.json                 Structure of a single statechart
    exit 0 if passed, 1 otherwise

▶ Generate
pn2sc generate --places N --seed S -o NET.json
    --branch-factor-max K   widest parallel block (default 4)
    --parallel-prob F       chance of a parallel block, e.g. 1/2 or 0.3
    -o may be omitted (sp<N>_<S>.json) or name a folder

▶ Bench
pn2sc bench --sizes 5000,10000,40000 --reps 3 --seed 0
    table on stderr, JSON on stdout

▶ Global
-v / -q:   more / less logging
--version: print the version
    exit 64 on usage errors, 65 on unreadable or malformed files
'''
