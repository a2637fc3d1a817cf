import pytest
from hypothesis import given, settings, strategies as st

from corpuskit.corpus import Corpus, LanguageTag, Sentence
from corpuskit.errors import FormatError, InsufficientSentences
from corpuskit.splits import (
    SplitAssignment,
    SplitSpec,
    format_split_assignment,
    make_splits,
    read_split_assignment,
    select_pairs,
    write_split_assignment,
)


def corpus_of(counts: dict[str, int]) -> Corpus:
    sentences = []
    for code, count in counts.items():
        for i in range(count):
            sentences.append(Sentence(f"s{i} of {code}", LanguageTag(code)))
    return Corpus.from_sentences(sentences)


class TestSplitSpec:
    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            SplitSpec(-1, 0, 5, seed=0)

    def test_rejects_all_zero(self):
        with pytest.raises(ValueError):
            SplitSpec(0, 0, 0, seed=0)


class TestMakeSplits:
    def test_reference_regime_sizes(self):
        # 5,150 per language and (5000, 50, 100) leaves nothing over
        corpus = corpus_of({"aaa": 5150})
        assignment = make_splits(corpus, SplitSpec(5000, 50, 100, seed=7))
        train, dev, test = assignment.by_lang[LanguageTag("aaa")]
        assert (len(train), len(dev), len(test)) == (5000, 50, 100)
        assert len(set(train) | set(dev) | set(test)) == 5150

    def test_all_test_assignment(self):
        corpus = corpus_of({"aaa": 12})
        assignment = make_splits(corpus, SplitSpec(0, 0, 9, seed=1))
        assert assignment.train(LanguageTag("aaa")) == ()
        assert assignment.dev(LanguageTag("aaa")) == ()
        assert len(assignment.test(LanguageTag("aaa"))) == 9

    def test_strict_insufficient(self):
        corpus = corpus_of({"aaa": 100})
        with pytest.raises(InsufficientSentences) as err:
            make_splits(corpus, SplitSpec(5000, 50, 100, seed=1))
        assert err.value.have == 100
        assert err.value.need == 5150

    def test_proportional_scales_down(self):
        corpus = corpus_of({"aaa": 100})
        assignment = make_splits(
            corpus, SplitSpec(5000, 50, 100, seed=1), proportional=True
        )
        train, dev, test = assignment.by_lang[LanguageTag("aaa")]
        # floor(n * 100 / 5150) with the >=1 test floor
        assert (len(train), len(dev), len(test)) == (97, 0, 1)

    def test_proportional_keeps_full_sizes_when_enough(self):
        corpus = corpus_of({"aaa": 30})
        assignment = make_splits(corpus, SplitSpec(10, 5, 5, seed=1), proportional=True)
        train, dev, test = assignment.by_lang[LanguageTag("aaa")]
        assert (len(train), len(dev), len(test)) == (10, 5, 5)

    def test_proportional_no_test_requested(self):
        corpus = corpus_of({"aaa": 3})
        assignment = make_splits(corpus, SplitSpec(10, 0, 0, seed=1), proportional=True)
        train, dev, test = assignment.by_lang[LanguageTag("aaa")]
        assert len(test) == 0
        assert len(train) == 3

    def test_determinism_byte_identical(self):
        corpus = corpus_of({"aaa": 40, "bbb": 40})
        spec = SplitSpec(20, 5, 5, seed=123)
        first = format_split_assignment(make_splits(corpus, spec))
        second = format_split_assignment(make_splits(corpus, spec))
        assert first == second

    def test_seed_changes_assignment(self):
        corpus = corpus_of({"aaa": 40})
        base = make_splits(corpus, SplitSpec(20, 5, 5, seed=1))
        changed = [
            make_splits(corpus, SplitSpec(20, 5, 5, seed=seed)) for seed in (2, 3, 4)
        ]
        assert any(c.by_lang != base.by_lang for c in changed)

    def test_language_independence(self):
        # adding a language never reshuffles an existing one
        spec = SplitSpec(20, 5, 5, seed=9)
        small = make_splits(corpus_of({"aaa": 40}), spec)
        big = make_splits(corpus_of({"aaa": 40, "bbb": 35}), spec)
        assert small.by_lang[LanguageTag("aaa")] == big.by_lang[LanguageTag("aaa")]

    @settings(max_examples=40, deadline=None)
    @given(
        counts=st.dictionaries(
            st.sampled_from(["aaa", "bbb", "ccc", "ddd"]),
            st.integers(min_value=1, max_value=60),
            min_size=1,
        ),
        train_n=st.integers(min_value=0, max_value=30),
        dev_n=st.integers(min_value=0, max_value=10),
        test_n=st.integers(min_value=0, max_value=10),
        seed=st.integers(min_value=0, max_value=2**64 - 1),
    )
    def test_disjointness_and_coverage(self, counts, train_n, dev_n, test_n, seed):
        if train_n + dev_n + test_n < 1:
            return
        corpus = corpus_of(counts)
        spec = SplitSpec(train_n, dev_n, test_n, seed=seed)
        assignment = make_splits(corpus, spec, proportional=True)
        for lang in corpus.languages:
            train, dev, test = assignment.by_lang[lang]
            train_set, dev_set, test_set = set(train), set(dev), set(test)
            assert len(train_set) == len(train)
            assert not (train_set & dev_set or train_set & test_set or dev_set & test_set)
            union = train_set | dev_set | test_set
            assert len(union) == len(train) + len(dev) + len(test)
            assert all(0 <= i < corpus.count(lang) for i in union)
            assert len(union) <= corpus.count(lang)


class TestSerialization:
    def test_roundtrip(self, tmp_path):
        corpus = corpus_of({"aaa": 15, "bbb": 10})
        assignment = make_splits(corpus, SplitSpec(5, 2, 3, seed=77))
        path = tmp_path / "splits.txt"
        write_split_assignment(assignment, path)
        loaded = read_split_assignment(path)
        assert dict(loaded.by_lang) == dict(assignment.by_lang)
        write_split_assignment(loaded, tmp_path / "again.txt")
        assert path.read_bytes() == (tmp_path / "again.txt").read_bytes()

    def test_languages_lexicographic(self):
        corpus = corpus_of({"zzz": 5, "aaa": 5})
        assignment = make_splits(corpus, SplitSpec(2, 1, 1, seed=0))
        rendered = format_split_assignment(assignment)
        assert rendered.index("lang: aaa") < rendered.index("lang: zzz")

    def test_empty_sections_parse(self, tmp_path):
        corpus = corpus_of({"aaa": 5})
        assignment = make_splits(corpus, SplitSpec(0, 0, 5, seed=0))
        path = tmp_path / "splits.txt"
        write_split_assignment(assignment, path)
        loaded = read_split_assignment(path)
        assert loaded.train(LanguageTag("aaa")) == ()

    def test_malformed_rejected(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("train: 1 2\n", encoding="utf-8")
        with pytest.raises(FormatError):
            read_split_assignment(path)

    def test_select_pairs(self):
        corpus = corpus_of({"aaa": 10})
        assignment = make_splits(corpus, SplitSpec(4, 3, 3, seed=5))
        pairs = select_pairs(corpus, assignment, "dev")
        assert len(pairs) == 3
        texts = corpus.texts(LanguageTag("aaa"))
        assert [t for _, t in pairs] == [
            texts[i] for i in assignment.dev(LanguageTag("aaa"))
        ]
