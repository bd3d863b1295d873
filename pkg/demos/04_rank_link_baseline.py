# %% [markdown]
# # Ranking candidates, linking to CVEs, and the CVE-id baseline

# %%
import datetime as dt
import functools

from ctinovelty import (
    CveEntry,
    Document,
    build_link_index,
    cve_baseline,
    filter_by_date,
    fit,
    link,
    load_stopwords,
    metrics,
    normalize,
    top_k,
)
from ctinovelty.synth import baseline_corpus

tok = functools.partial(normalize, stopwords=load_stopwords())
cves = [
    CveEntry("CVE-2017-0144", "SMBv1 server remote code execution via crafted packets", dt.date(2017, 3, 17)),
    CveEntry("CVE-2017-11882", "Microsoft Office memory corruption in Equation Editor", dt.date(2017, 11, 15)),
    CveEntry("CVE-2017-5638", "Apache Struts Jakarta multipart parser remote command injection", dt.date(2017, 3, 11)),
    CveEntry("CVE-2018-0101", "Cisco ASA SSL VPN double free remote code execution", dt.date(2018, 1, 29)),
    CveEntry("CVE-2014-0160", "OpenSSL heartbeat extension memory disclosure", dt.date(2014, 4, 7)),
]
tweets = [
    Document("a", "Struts multipart parser bug lets attackers inject commands remotely"),
    Document("b", "Lovely sunset over the bay tonight"),
    Document("c", "Cisco VPN appliances hit by double free, patch now"),
]

# %% [markdown]
# Relevance weights favour terms that occur in many training descriptions.

# %%
vocab = fit([tok(e.description) for e in cves])
for doc, w in top_k(tweets, vocab, 3, tok):
    print(f"{w:7.3f}  {doc.text}")

# %% [markdown]
# Linking compares against CVEs from a date window with its own vocabulary.

# %%
index = build_link_index(filter_by_date(cves, dt.date(2015, 1, 1), dt.date(2019, 4, 30)), tok)
for doc in tweets:
    print(doc.id, link(doc, index, k=2).matches)

# %% [markdown]
# The baseline keeps only documents citing a CVE identifier: precise, but
# it misses most threat talk.

# %%
conf = cve_baseline(baseline_corpus(seed=0))
print(conf, "P/R/F1 = %.3f / %.3f / %.3f" % metrics(conf))
