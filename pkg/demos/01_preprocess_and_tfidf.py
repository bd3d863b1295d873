# %% [markdown]
# # From raw tweets to TF-IDF vectors
#
# Tweets are noisy: links, mentions, hashtags, version numbers. Normalization
# keeps only lowercase alphabetic terms that are not stopwords.

# %%
from ctinovelty import embed, fit, load_stopwords, normalize

sw = load_stopwords()
tweets = [
    "@alice says #XSS is bad http://x.co",
    "Apple releases iOS 12.1.4!!! Update now",
    "Cisco ASA SSL VPN double free (CVE-2018-0101) under active attack",
]
for t in tweets:
    print(normalize(t, sw))

# %% [markdown]
# CVE identifiers do not survive normalization ("CVE-2018-0101" becomes
# "cve"), so anything that needs them reads the raw text first.

# %%
from ctinovelty import extract_cve_ids

print(extract_cve_ids(tweets[2]))

# %% [markdown]
# A vocabulary is fitted on the training corpus. Weights are
# term count times ln(N / document frequency); a term present in every
# training document gets weight zero and is dropped from the vector.

# %%
corpus = [["buffer", "overflow"], ["buffer", "overflow", "attack"], ["sql", "injection"]]
vocab = fit(corpus)
print(vocab.terms, vocab.doc_freq.tolist(), vocab.corpus_size)
for doc in corpus:
    print(doc, [(vocab.terms[i], round(w, 6)) for i, w in embed(doc, vocab).pairs()])
