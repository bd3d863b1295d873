import string

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctinovelty.errors import FormatError
from ctinovelty.textprep import bundled_stopwords_text, load_stopwords, normalize


@pytest.mark.parametrize(
    "text, expected",
    [
        ("", []),
        ("The THE the", []),
        ("@alice says #XSS is bad http://x.co", ["says", "xss", "bad"]),
        ("Apple releases iOS 12.1.4!!!", ["apple", "releases", "ios"]),
        ("see https://a.b/c and www.example.com now", ["see"]),
        ("HTTPS://EXAMPLE.COM exploit", ["exploit"]),
        ("CVE-2018-0101 in Cisco ASA", ["cve", "cisco", "asa"]),
        ("don't panic", ["panic"]),
    ],
)
def test_normalize_examples(stopwords, text, expected):
    assert normalize(text, stopwords) == expected


def test_hashtag_can_be_dropped_whole(stopwords):
    assert normalize("#XSS found in #WordPress plugin", stopwords, keep_hashtag_words=False) == [
        "found",
        "plugin",
    ]


def test_no_stemming(stopwords):
    assert normalize("exploits exploited exploiting", stopwords) == ["exploits", "exploited", "exploiting"]


def test_unicode_letters_kept_and_lowercased(stopwords):
    assert normalize("Überlauf im Kernel", stopwords) == ["überlauf", "im", "kernel"]


def test_bundled_stopwords():
    sw = load_stopwords()
    assert sw.source == "bundled-default"
    assert len(sw) == 179
    assert {"the", "is", "and", "don't"} <= sw.words
    assert all(w == w.lower() for w in sw.words)
    assert bundled_stopwords_text().splitlines()[0] == "i"


def test_load_stopwords_file(tmp_path):
    p = tmp_path / "sw.txt"
    p.write_text("foo\nBAR\nfoo\n\n", encoding="utf-8")
    sw = load_stopwords(p)
    assert sw.words == {"foo", "bar"}
    assert sw.source == str(p)


def test_load_stopwords_rejects_whitespace(tmp_path):
    p = tmp_path / "sw.txt"
    p.write_text("two words\n", encoding="utf-8")
    with pytest.raises(FormatError, match="line 1"):
        load_stopwords(p)


def test_load_stopwords_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_stopwords(tmp_path / "nope.txt")


tweetish = st.text(
    alphabet=st.sampled_from(string.ascii_letters + string.digits + string.punctuation + " \t\n@#"),
    max_size=200,
)


@settings(max_examples=300, deadline=None)
@given(tweetish)
def test_ascii_output_alphabet(text):
    sw = load_stopwords()
    for tok in normalize(text, sw):
        assert tok and set(tok) <= set(string.ascii_lowercase)
        assert tok not in sw


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=200))
def test_idempotent_and_deterministic(text):
    sw = load_stopwords()
    out = normalize(text, sw)
    assert normalize(" ".join(out), sw) == out
    assert normalize(text, sw) == out
    for tok in out:
        assert tok.isalpha() and tok == tok.lower() and tok not in sw
