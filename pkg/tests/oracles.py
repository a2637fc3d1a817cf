"""Independent brute-force oracles.

These deliberately re-derive everything from scratch with plain Python data
structures so they share no code path with the implementations they check.
"""

from __future__ import annotations

import math
from collections import Counter

import numpy as np


# --- BPE: full recount each iteration -------------------------------------

def oracle_learn_bpe(sentences, num_merges, min_frequency=2):
    """Re-count the full pair table from scratch before every merge."""
    word_freqs = Counter()
    for sentence in sentences:
        word_freqs.update(sentence.split())
    words = [(tuple(word) + ("</w>",), freq) for word, freq in word_freqs.items()]

    merges = []
    for _ in range(num_merges):
        counts = Counter()
        for symbols, freq in words:
            for i in range(len(symbols) - 1):
                counts[(symbols[i], symbols[i + 1])] += freq
        if not counts:
            break
        best_count = max(counts.values())
        if best_count < min_frequency:
            break
        best = min(pair for pair, count in counts.items() if count == best_count)
        merges.append(best)
        merged = best[0] + best[1]
        next_words = []
        for symbols, freq in words:
            out = []
            i = 0
            while i < len(symbols):
                if (
                    i < len(symbols) - 1
                    and symbols[i] == best[0]
                    and symbols[i + 1] == best[1]
                ):
                    out.append(merged)
                    i += 2
                else:
                    out.append(symbols[i])
                    i += 1
            next_words.append((tuple(out), freq))
        words = next_words
    return merges


# --- Naive Bayes: from-scratch counting, smoothing, posteriors ------------

class OracleBayes:
    """Brute-force multinomial Bayes over character n-grams.

    Log likelihoods are quantized to 32-bit floats, matching the storage
    precision the model format specifies; counting, vocabulary selection and
    scoring are all re-derived here.
    """

    def __init__(self, pairs, n_min=1, n_max=4, max_features=500_000, min_df=2,
                 alpha=0.1, start="^", end="$"):
        self.n_min, self.n_max = n_min, n_max
        self.start, self.end = start, end

        doc_freq = Counter()
        total_freq = Counter()
        label_counts = {}
        label_sentences = Counter()
        for lang, text in pairs:
            grams = self.extract(text)
            doc_freq.update(set(grams))
            total_freq.update(grams)
            label_counts.setdefault(lang, Counter()).update(grams)
            label_sentences[lang] += 1

        vocab = [g for g in total_freq if doc_freq[g] >= min_df]
        vocab.sort(key=lambda g: (-total_freq[g], g))
        self.vocab = set(vocab[:max_features])

        total = sum(label_sentences.values())
        self.labels = sorted(label_counts)
        self.log_prior = {
            lang: math.log(label_sentences[lang] / total) for lang in self.labels
        }
        self.log_likelihood = {}
        v = len(self.vocab)
        for lang in self.labels:
            counts = label_counts[lang]
            n = sum(count for gram, count in counts.items() if gram in self.vocab)
            denominator = n + alpha * v
            row = {}
            for gram in self.vocab:
                row[gram] = float(np.float32(math.log((counts[gram] + alpha) / denominator)))
            self.log_likelihood[lang] = row

    def extract(self, text):
        if not text:
            return Counter()
        marked = self.start + text + self.end
        grams = Counter()
        for n in range(self.n_min, self.n_max + 1):
            if n == 1:
                grams.update(text)
            else:
                for i in range(len(marked) - n + 1):
                    grams[marked[i : i + n]] += 1
        return grams

    def posteriors(self, text):
        grams = self.extract(text)
        scores = {}
        for lang in self.labels:
            score = self.log_prior[lang]
            row = self.log_likelihood[lang]
            for gram, count in grams.items():
                if gram in self.vocab:
                    score += count * row[gram]
            scores[lang] = score
        peak = max(scores.values())
        raw = {lang: math.exp(score - peak) for lang, score in scores.items()}
        total = sum(raw.values())
        return {lang: value / total for lang, value in raw.items()}

    def top(self, text):
        post = self.posteriors(text)
        lang = min(post, key=lambda label: (-post[label], label))
        return lang, post[lang]


# --- Span F1: set intersection over independently extracted spans ---------

def oracle_bio_spans(tags):
    """Naive state machine: (start, end, label) triples from BIO tags."""
    spans = []
    i = 0
    while i < len(tags):
        tag = tags[i]
        if tag == "O":
            i += 1
            continue
        label = tag[2:]
        j = i + 1
        while j < len(tags) and tags[j] == f"I-{label}":
            j += 1
        spans.append((i, j, label))
        i = j
    return spans


def oracle_span_counts(gold_tags, pred_tags):
    gold = set(oracle_bio_spans(gold_tags))
    pred = set(oracle_bio_spans(pred_tags))
    tp = len(gold & pred)
    return tp, len(pred) - tp, len(gold) - tp
