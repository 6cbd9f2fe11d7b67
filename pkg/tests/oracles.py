"""Independent naive evaluators and random-record generation.

These deliberately avoid the production code paths: counts are literal
loops, h-style metrics are exhaustive searches over every candidate k, and
the reference correlation comes from numpy. They are the ground truth the
fast implementations are checked against.
"""
from __future__ import annotations

import random

import numpy as np

from capmetrics.windows import WindowItem, WindowedRecord


def naive_cap(record: WindowedRecord) -> int:
    p = 0
    for _ in record.items:
        p += 1
    count = 0
    for item in record.items:
        if item.citations - item.author_count - p >= 0:
            count += 1
    return count


def naive_cp(record: WindowedRecord) -> int:
    p = 0
    for _ in record.items:
        p += 1
    count = 0
    for item in record.items:
        if item.citations - p >= 0:
            count += 1
    return count


def naive_h(record: WindowedRecord) -> int:
    best = 0
    for k in range(len(record.items) + 1):
        n = 0
        for item in record.items:
            if item.citations >= k:
                n += 1
        if n >= k:
            best = k
    return best


def naive_h_frac(record: WindowedRecord) -> int:
    best = 0
    for k in range(len(record.items) + 1):
        n = 0
        for item in record.items:
            if item.citations >= k * item.author_count:
                n += 1
        if n >= k:
            best = k
    return best


def naive_pearson(xs, ys) -> float:
    return float(np.corrcoef(np.asarray(xs, float), np.asarray(ys, float))[0, 1])


def random_items(rng: random.Random, size: int) -> tuple[WindowItem, ...]:
    items = []
    for i in range(size):
        roll = rng.random()
        if roll < 0.15:
            citations = 0
        elif roll < 0.9:
            citations = rng.randint(0, 2 * size + 20)
        else:
            citations = rng.randint(0, 5000)
        if rng.random() < 0.9:
            authors = rng.randint(1, 10)
        else:
            authors = rng.randint(11, 200)
        items.append(WindowItem(f"p{i:04d}", citations, authors))
    return tuple(items)


def random_record(rng: random.Random, max_size: int = 200) -> WindowedRecord:
    # mostly small records keep the exhaustive oracles affordable
    roll = rng.random()
    if roll < 0.8:
        size = rng.randint(0, min(30, max_size))
    elif roll < 0.95:
        size = rng.randint(0, min(100, max_size))
    else:
        size = rng.randint(0, max_size)
    return WindowedRecord("author", 2020, random_items(rng, size))
