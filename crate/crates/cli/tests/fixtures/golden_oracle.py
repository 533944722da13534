"""Independent oracle for the golden fixture.

Recomputes every golden table from golden_corpus.jsonl by direct counting.
Diversity is computed from the number of distinct tree nodes per level
(3 per extra broad field, 2 per extra field, 1 per extra subfield), not by
greedy insertion. Writes golden/<command>.csv.

Settings must match GOLDEN_ARGS in tests/cli.rs and tests/acceptance.rs.
"""
import json
import os
import re
from collections import defaultdict

HERE = os.path.dirname(os.path.abspath(__file__))
WINDOWS = [(2000, 2002), (2002, 2004), (2004, 2006)]
COHORTS = [(2000, 2003), (2003, 2006)]
PERIOD = (2000, 2006)
HORIZON = 2
GROUPS = [("G1", 0, 1), ("G2", 2, 3), ("G3", 4, 8), ("G4", 9, None)]
BANDS = [("low", 0, 2), ("medium", 3, 5), ("high", 6, None)]
CODE = re.compile(r"^(\d)(\d)\.(\d)(\d)")


def rng(r):
    return f"{r[0]}-{r[1]}"


def inr(r, y):
    return r[0] <= y < r[1]


def diversity(codes):
    if not codes:
        return 0
    n1 = len({c[0] for c in codes})
    n2 = len({c[:2] for c in codes})
    n3 = len(codes)
    return 3 * (n1 - 1) + 2 * (n2 - n1) + (n3 - n2)


def group_of(d, scheme):
    for label, lo, hi in scheme:
        if d >= lo and (hi is None or d <= hi):
            return label
    raise AssertionError


def f6(x):
    return f"{x:.6f}"


papers = []
malformed = 0
with open(os.path.join(HERE, "golden_corpus.jsonl")) as fh:
    for line in fh:
        r = json.loads(line)
        codes = set()
        for raw in r["pacs"]:
            m = CODE.match(raw.strip())
            if m:
                codes.add("%s%s.%s%s" % m.groups())
            else:
                malformed += 1
        authors = []
        for a in r["authors"]:
            n = " ".join(a.split()).lower()
            if n not in authors:
                authors.append(n)
        papers.append(dict(doi=r["doi"], year=int(r["date"][:4]), authors=authors,
                           codes=codes, refs=r["refs"]))
by_doi = {p["doi"]: p for p in papers}

# citation ages per cited doi (non-negative only)
ages = defaultdict(list)
negative = dangling = in_corpus = refs_total = 0
for p in papers:
    for t in p["refs"]:
        refs_total += 1
        if t not in by_doi:
            dangling += 1
            continue
        in_corpus += 1
        age = p["year"] - by_doi[t]["year"]
        if age < 0:
            negative += 1
        else:
            ages[t].append(age)

out = {}


def csv(rows):
    return "".join(",".join(str(c) for c in row) + "\n" for row in rows)


# summary
pp = [p for p in papers if inr(PERIOD, p["year"])]
coded = [p for p in pp if p["codes"]]
unions, admitted = defaultdict(set), defaultdict(bool)
for p in pp:
    for a in p["authors"]:
        unions[a] |= p["codes"]
        admitted[a] |= bool(p["codes"])
coded_authors = [a for a in unions if admitted[a]]
authorships = sum(len(p["authors"]) for p in pp)
out["summary"] = csv([
    ["metric", "value"],
    ["period", rng(PERIOD)],
    ["authors", len(unions)],
    ["papers", len(pp)],
    ["avg_papers_per_author", f6(authorships / len(unions))],
    ["avg_authors_per_paper", f6(authorships / len(pp))],
    ["avg_pacs_per_author", f6(sum(len(unions[a]) for a in coded_authors) / len(coded_authors))],
    ["avg_pacs_per_paper", f6(sum(len(p["codes"]) for p in coded) / len(coded))],
    ["avg_author_diversity", f6(sum(diversity(unions[a]) for a in coded_authors) / len(coded_authors))],
    ["avg_paper_diversity", f6(sum(diversity(p["codes"]) for p in coded) / len(coded))],
    ["avg_citations_per_paper", f6(sum(len(ages[p["doi"]]) for p in pp) / len(pp))],
])

# pacs-coverage
rows = [["year", "papers", "with_pacs", "fraction"]]
for y in sorted({p["year"] for p in papers}):
    ys = [p for p in papers if p["year"] == y]
    w = sum(1 for p in ys if p["codes"])
    rows.append([y, len(ys), w, f6(w / len(ys))])
out["pacs-coverage"] = csv(rows)


def hist_rows(pop, values):
    h = defaultdict(int)
    for v in values:
        h[v] += 1
    return [[pop, v, h[v], f6(h[v] / len(values))] for v in sorted(h)]


# pacs-counts and diversity-dist over the period, coded papers only
period_unions = defaultdict(set)
for p in coded:
    for a in p["authors"]:
        period_unions[a] |= p["codes"]
names = sorted(period_unions)
out["pacs-counts"] = csv([["population", "codes", "count", "fraction"]]
                         + hist_rows("author", [len(period_unions[a]) for a in names])
                         + hist_rows("paper", [len(p["codes"]) for p in coded]))
out["diversity-dist"] = csv([["population", "diversity", "count", "fraction"]]
                            + hist_rows("author", [diversity(period_unions[a]) for a in names])
                            + hist_rows("paper", [diversity(p["codes"]) for p in coded]))


def window_groups(w):
    u = defaultdict(set)
    for p in papers:
        if p["codes"] and inr(w, p["year"]):
            for a in p["authors"]:
                u[a] |= p["codes"]
    return {a: group_of(diversity(c), GROUPS) for a, c in u.items()}


labels = [g[0] for g in GROUPS]
rows = [["window", "active_authors"] + labels]
for w in WINDOWS:
    g = window_groups(w)
    rows.append([rng(w), len(g)] + [f6(sum(1 for v in g.values() if v == l) / len(g)) for l in labels])
out["groups"] = csv(rows)

rows = [["from_window", "to_window", "from_group", "to_group", "authors"]]
for a_w, b_w in zip(WINDOWS, WINDOWS[1:]):
    A, B = window_groups(a_w), window_groups(b_w)
    head = [rng(a_w), rng(b_w)]
    for x in labels:
        for y in labels:
            rows.append(head + [x, y, sum(1 for k in A if A[k] == x and B.get(k) == y)])
    for y in labels:
        rows.append(head + ["(entrant)", y, sum(1 for k in B if B[k] == y and k not in A)])
    for x in labels:
        rows.append(head + [x, "(leaver)", sum(1 for k in A if A[k] == x and k not in B)])
out["flows"] = csv(rows)


def series_rows(prefix, members):
    rows, cum = [], 0.0
    for t in range(HORIZON + 1):
        total = sum(ages[p["doi"]].count(t) for p in members)
        avg = total / len(members)
        cum += avg
        rows.append(prefix + [t, len(members), total, f6(avg), f6(cum)])
    return rows


rows = [["cohort", "age", "papers", "citations", "average", "cumulative"]]
for c in COHORTS:
    rows += series_rows([rng(c)], [p for p in papers if inr(c, p["year"])])
out["citation-age"] = csv(rows)


def per_div_key(d, top):
    return (top, f"{top}+") if d >= top else (d, str(d))


def band_key(d):
    for i, (label, lo, hi) in enumerate(BANDS):
        if d >= lo and (hi is None or d <= hi):
            return (i, label)


rows = [["cohort", "keying", "key", "age", "papers", "citations", "average", "cumulative"]]
for c in COHORTS:
    members = [p for p in papers if inr(c, p["year"]) and p["codes"]]
    for keying, keyfn in [("diversity", lambda d: per_div_key(d, 8)), ("band", band_key)]:
        groups = defaultdict(list)
        for p in members:
            groups[keyfn(diversity(p["codes"]))].append(p)
        for k in sorted(groups):
            rows += series_rows([rng(c), keying, k[1]], groups[k])
out["diversity-citations"] = csv(rows)

rows = [["cohort", "key", "citations", "papers", "fraction"]]
for c in COHORTS:
    members = [p for p in papers if inr(c, p["year"]) and p["codes"]]
    groups = defaultdict(list)
    for p in members:
        groups[per_div_key(diversity(p["codes"]), 8)].append(p)
    for k in sorted(groups):
        cites = [sum(1 for a in ages[p["doi"]] if a <= HORIZON) for p in groups[k]]
        for n in range(max(cites) + 1):
            cnt = cites.count(n)
            rows.append([rng(c), k[1], n, cnt, f6(cnt / len(cites))])
out["citation-dist"] = csv(rows)

rows = [["diversity"] + [rng(c) for c in COHORTS]]
cols = []
for c in COHORTS:
    ds = [diversity(p["codes"]) for p in papers if inr(c, p["year"]) and p["codes"]]
    cols.append(ds)
for i in range(10):
    label = str(i) if i < 9 else "9+"
    row = [label]
    for ds in cols:
        n = sum(1 for d in ds if (d == i if i < 9 else d >= 9))
        row.append(f6(100.0 * n / len(ds)))
    rows.append(row)
out["share"] = csv(rows)

authors = {a for p in papers for a in p["authors"]}
out["validate"] = csv([
    ["metric", "value"],
    ["lines_read", len(papers)],
    ["records_accepted", len(papers)],
    ["lines_dropped", 0],
    ["malformed_codes", malformed],
    ["unknown_codes", 0],
    ["empty_author_names", 0],
    ["authors", len(authors)],
    ["reference_entries", refs_total],
    ["in_corpus_citations", in_corpus],
    ["dangling_references", dangling],
    ["negative_age_citations", negative],
])

os.makedirs(os.path.join(HERE, "golden"), exist_ok=True)
for name, text in out.items():
    with open(os.path.join(HERE, "golden", f"{name}.csv"), "w") as fh:
        fh.write(text)
