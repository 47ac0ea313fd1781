#!/usr/bin/env python3
"""Regenerate data/sample_urls.csv, the small synthetic labeled URL corpus used by the tests.

The rows imitate the shape of public malicious-URL corpora (url,type with the
labels benign, phishing, defacement, malware). Output is deterministic.
"""

import csv
import random
import sys

SEED = 20231016

WORDS = [
    "news", "sports", "music", "video", "wiki", "docs", "shop", "travel", "blog",
    "forum", "games", "photos", "support", "help", "about", "contact", "store",
    "weather", "health", "science", "history", "movies", "books", "recipes",
]
TLDS = ["com", "org", "net", "edu", "co.uk", "de", "info", "io"]
BRANDS = ["paypal", "apple", "amazon", "chase", "wellsfargo", "netflix", "microsoft", "dropbox"]
PHISH_WORDS = ["login", "secure", "account", "verify", "update", "signin", "bank", "confirm", "free"]


def word(rng):
    return rng.choice(WORDS)


def benign(rng):
    host = f"{rng.choice(['', 'www.', 'en.', 'm.'])}{word(rng)}{rng.choice(['', word(rng)])}.{rng.choice(TLDS)}"
    kind = rng.randrange(4)
    if kind == 0:
        path = f"/wiki/{word(rng).capitalize()}_{word(rng)}"
    elif kind == 1:
        path = f"/{word(rng)}/{word(rng)}-{word(rng)}"
    elif kind == 2:
        path = f"/watch?v={''.join(rng.choice('abcdefghijkLMNOP') for _ in range(8))}"
    else:
        path = f"/{word(rng)}/"
    scheme = rng.choice(["", "", "", "https://"])
    return scheme + host + path


def phishing(rng):
    brand = rng.choice(BRANDS)
    w1, w2 = rng.sample(PHISH_WORDS, 2)
    host = rng.choice([
        f"{brand}-{w1}-{w2}.{rng.choice(['com', 'net', 'info', 'xyz'])}",
        f"{w1}.{brand}.{word(rng)}-{w2}.{rng.choice(['tk', 'ml', 'ga', 'com'])}",
        f"{brand}{rng.randrange(10, 999)}.{rng.choice(['000webhostapp.com', 'weebly.com', 'xyz'])}",
    ])
    path = rng.choice([
        f"/{w1}/{w2}.php?id={rng.randrange(100000, 999999)}&session={rng.randrange(10**7, 10**8)}",
        f"/{brand}/{w1}/index.html",
        f"/~{word(rng)}/{w2}/{w1}.htm",
        f"/wp-includes/{w1}/{brand}/{w2}/",
    ])
    scheme = rng.choice(["", "http://", "https://"])
    return scheme + host + path


def defacement(rng):
    host = f"www.{word(rng)}{word(rng)}.{rng.choice(['com', 'org', 'it', 'de', 'nl', 'com.br'])}"
    article = rng.randrange(1, 900)
    path = rng.choice([
        f"/index.php?option=com_content&view=article&id={article}:{word(rng)}-{word(rng)}&catid={rng.randrange(1, 60)}&Itemid={rng.randrange(1, 200)}",
        f"/index.php?option=com_k2&view=item&id={article}:{word(rng)}&Itemid={rng.randrange(1, 200)}",
        f"/index.php/{word(rng)}/{article}-{word(rng)}-{word(rng)}",
    ])
    return "http://" + host + path


def malware(rng):
    ip = ".".join(str(rng.randrange(1, 255)) for _ in range(4))
    return rng.choice([
        f"http://{ip}:{rng.randrange(1024, 65535)}/Mozi.{rng.choice(['m', 'a'])}",
        f"http://{ip}/bins/{rng.choice(['x86', 'arm7', 'mips', 'sh4'])}",
        f"http://{ip}/{word(rng)}.exe",
        f"{word(rng)}{rng.randrange(100, 9999)}.{rng.choice(['ru', 'cn', 'top'])}/{rng.randrange(10**5, 10**6)}/{word(rng)}.exe",
    ])


def main(out_path):
    rng = random.Random(SEED)
    rows = []
    for label, gen, count in [
        ("benign", benign, 520),
        ("phishing", phishing, 200),
        ("defacement", defacement, 150),
        ("malware", malware, 130),
    ]:
        rows.extend((gen(rng), label) for _ in range(count))
    rng.shuffle(rows)
    # Cleaning fixtures: two exact duplicates, one empty url, one url with an embedded comma.
    rows.insert(10, rows[3])
    rows.insert(50, rows[40])
    rows.insert(77, ("", "benign"))
    rows.insert(90, ("http://example.org/search?q=a,b&lang=en", "benign"))
    with open(out_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["url", "type"])
        writer.writerows(rows)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/sample_urls.csv")
