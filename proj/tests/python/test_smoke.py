"""End-to-end smoke checks for the vulnwatch Python bindings.

Runs with a plain interpreter (no pytest needed): python3 test_smoke.py
The repository root must be the working directory so fixture paths resolve.
"""
import math
import sys

import vulnwatch as vw


def check(cond, message):
    if not cond:
        raise AssertionError(message)


def main():
    check(vw.__version__ == "0.1.0", "version mismatch")

    # --- tokenization ----------------------------------------------------
    tokens = vw.tokenize("Patch CVE-2020-0688 now! https://example.com/x")
    check(tokens == ["patch", "cve-2020-0688", "now"], f"tokenize gave {tokens}")
    check(len(vw.STOPWORD_LIST) > 100, "stopword list too small")

    # --- corpus ----------------------------------------------------------
    tweets, malformed, duplicates = vw.read_corpus("tests/data/six_tweets.jsonl")
    check(len(tweets) == 6, f"expected 6 tweets, got {len(tweets)}")
    check(malformed == 0 and duplicates == 0, "fixture should be clean")
    check(tweets[0].id == "1", "tweet order not preserved")

    stats = vw.compute_stats(tweets)
    check(stats.tweet_count == 6, "stats tweet_count wrong")
    check(abs(stats.pct_english - 100.0) < 1e-9, "fixture is all English")

    kept = vw.keyword_filter(tweets, "vulnerability")
    check([t.id for t in kept] == ["1", "2", "4", "6"], "keyword filter wrong")

    # --- cve mining -------------------------------------------------------
    ids = vw.extract_cves("cve-2020-0688 and CVE-2020-0688 and CVE-2021-44228")
    check(ids == ["CVE-2020-0688", "CVE-2021-44228"], f"extract_cves gave {ids}")
    check(vw.is_canonical_cve("CVE-2020-0688"), "canonical id rejected")
    check(not vw.is_canonical_cve("cve-2020-0688"), "lowercase accepted")
    check(vw.pearson([1.0, 2.0, 3.0], [3.0, 2.0, 1.0]) == -1.0, "pearson wrong")

    rows = vw.count_mentions(tweets, tweets[0].created_at, tweets[-1].created_at)
    check(rows[0].cve_id == "CVE-2020-0688" and rows[0].tweet_count == 2,
          "count_mentions ranking wrong")

    # --- features and clustering -------------------------------------------
    docs = [["cve", "cve", "patch"], ["patch", "update"]]
    terms, entries = vw.tfidf_vectors(docs)
    check(terms == ["cve", "patch", "update"], f"vocabulary wrong: {terms}")
    for vector in entries:
        norm = math.sqrt(sum(w * w for _, w in vector))
        check(abs(norm - 1.0) < 1e-9, f"tf-idf vector norm {norm} != 1")

    points = [[0.0, 0.0], [0.1, 0.0], [10.0, 10.0], [10.1, 10.0]]
    model = vw.kmeans(points, 2, seed=3)
    check(model.assignments[0] == model.assignments[1], "close points split")
    check(model.assignments[0] != model.assignments[2], "far points merged")
    check(model.sse == vw.kmeans(points, 2, seed=3).sse, "kmeans not deterministic")

    curve = vw.sse_curve(points, [1, 2, 3], seed=0)
    check(vw.elbow_select(curve) == 2, "elbow should pick the planted k")

    # --- relevance ---------------------------------------------------------
    verdicts, failed = vw.zero_shot(tweets)
    check(failed == 0, "mock scorer cannot fail")
    relevant, retention = vw.filter_relevant(verdicts, tweets)
    check([t.id for t in relevant] == ["1", "2", "4", "6"], "zero-shot kept wrong set")
    check(abs(retention - 4.0 / 6.0) < 1e-12, f"retention {retention} != 4/6")

    cluster_verdicts = vw.cluster_relevance(tweets, k=2, seed=0)
    check(len(cluster_verdicts) == 6, "cluster verdict per tweet")
    check(all(v.cluster_id is not None for v in cluster_verdicts),
          "kmeans verdicts carry cluster ids")

    # --- embeddings and topics ----------------------------------------------
    corpus = [["cve", "patch", "server"], ["patch", "cve", "fix"],
              ["banana", "beach", "sun"], ["beach", "banana", "sun"]] * 30
    emb = vw.train_word2vec(corpus, dim=8, min_count=1, epochs=4, seed=1)
    check(len(emb) == 7, f"vocabulary size {len(emb)} != 7")
    check(emb.find("cve") is not None, "cve missing from vocabulary")
    sims = vw.cosine_similarity(emb, "cve", "patch")
    check(-1.0 <= sims <= 1.0, "cosine out of range")

    topics = vw.mine_topics(tweets, emb, k=2, seed=0)
    check(topics.k == 2, "topic count wrong")
    check(topics.clustered_tweets + topics.dropped_all_oov == 6, "topic accounting")

    # --- evaluation ----------------------------------------------------------
    metrics = vw.score_predictions([True, True, True, False, False],
                                   [True, True, False, True, False])
    check(abs(metrics.accuracy - 60.0) < 1e-9, "accuracy wrong")
    check(abs(metrics.f1 - 200.0 / 3.0) < 1e-9, "f1 wrong")

    # --- report ---------------------------------------------------------------
    overrides = {
        "keyword": "", "scorer_url": "mock", "topic_k": "2", "embed_dim": "8",
        "embed_epochs": "20", "embed_min_count": "1", "nvd_url": "",
        "cvss_cache": "tests/data/cvss_cache.tsv", "seed": "7", "format": "json",
    }
    first = vw.report_json("tests/data/six_tweets.jsonl", overrides)
    second = vw.report_json("tests/data/six_tweets.jsonl", overrides)
    check(first == second, "report not byte-stable")
    with open("tests/data/golden_report.json", "rb") as f:
        golden = f.read().decode()
    check(first == golden, "report diverged from the frozen fixture")

    markdown = vw.report_markdown("tests/data/six_tweets.jsonl", overrides)
    check("# VulnWatch Report" in markdown, "markdown header missing")

    check("keyword" in vw.config_keys(), "config keys not exposed")

    print("python smoke: all checks passed")


if __name__ == "__main__":
    try:
        main()
    except AssertionError as err:
        print(f"python smoke: FAILED: {err}", file=sys.stderr)
        sys.exit(1)
