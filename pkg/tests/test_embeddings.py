import numpy as np
import pytest

from cuisineshift import corpus, embeddings
from cuisineshift.embeddings import EmbeddingConfig, EmbeddingSpace
from cuisineshift.errors import DataError, NumericalError, UnknownTokenError


def _toy_corpus():
    # a,b always together; c always alone with d; countries x,y
    rows = [
        corpus.make_recipe(0, ["a", "b"], "x"),
        corpus.make_recipe(1, ["a", "b"], "x"),
        corpus.make_recipe(2, ["a", "b"], "x"),
        corpus.make_recipe(3, ["c", "d"], "y"),
        corpus.make_recipe(4, ["c", "d"], "y"),
    ]
    return rows, corpus.build_vocabulary(rows)


def test_pair_stream_enumerates_all_ordered_pairs_plus_country():
    rows, vocab = _toy_corpus()
    pairs = list(embeddings.pair_stream(rows[:1], vocab))
    a, b = vocab.ingredient_id("a"), vocab.ingredient_id("b")
    x = vocab.num_ingredients + vocab.country_id("x")
    assert (a, b) in pairs and (b, a) in pairs
    assert (x, a) in pairs and (a, x) in pairs
    assert (x, b) in pairs and (b, x) in pairs
    # n(n-1) ordered ingredient pairs + 2n country pairs, n=2 -> 2 + 4
    assert len(pairs) == 6


def test_corpus_pair_count_matches_enumeration(tiny_recipes, tiny_vocab):
    sample = tiny_recipes[:60]
    counted = sum(1 for _ in embeddings.pair_stream(sample, tiny_vocab))
    assert embeddings.corpus_pair_count(sample, tiny_vocab) == counted


def test_corpus_pair_count_closed_form():
    rows, vocab = _toy_corpus()
    # every recipe has n=2 known ingredients: 2*1 + 2*2 = 6 pairs each
    assert embeddings.corpus_pair_count(rows, vocab) == 6 * len(rows)


def test_noise_table_distribution_follows_counts_to_the_power():
    counts = np.array([100.0, 10.0, 1.0, 0.0])
    table = embeddings.build_noise_table(counts, 0.75, size=200_000)
    assert table.dtype == np.int32
    assert table.shape == (200_000,)
    freq = np.bincount(table, minlength=4) / table.size
    want = counts ** 0.75
    want /= want.sum()
    np.testing.assert_allclose(freq, want, atol=2e-3)
    assert freq[3] == 0.0  # zero-count tokens never sampled


def test_noise_table_is_deterministic():
    counts = np.array([5.0, 3.0, 2.0])
    a = embeddings.build_noise_table(counts, 0.75, size=1000)
    b = embeddings.build_noise_table(counts, 0.75, size=1000)
    np.testing.assert_array_equal(a, b)


def test_kernel_matches_numpy_reference_bitwise():
    rng = np.random.default_rng(42)
    T, D = 12, 8
    vin = (rng.random((T, D), dtype=np.float64) - 0.5).astype(np.float32)
    vout = np.zeros((T, D), dtype=np.float32)
    centers = rng.integers(0, T, size=300).astype(np.int64)
    contexts = rng.integers(0, T, size=300).astype(np.int64)
    negatives = rng.integers(0, T, size=(300, 5)).astype(np.int32)
    vin_k, vout_k = vin.copy(), vout.copy()
    embeddings._sgd_pairs(vin_k, vout_k, centers, contexts, negatives,
                          0.025, 1e-4, 0, 300)
    vin_r, vout_r = vin.copy(), vout.copy()
    for i in range(300):
        frac = max(1.0 - i / 300.0, 1e-4)
        embeddings.reference_pair_step(vin_r, vout_r, int(centers[i]),
                                       int(contexts[i]), negatives[i],
                                       np.float32(0.025 * frac))
    np.testing.assert_array_equal(vin_k, vin_r)
    np.testing.assert_array_equal(vout_k, vout_r)


def test_pair_objective_gradients_match_finite_differences():
    rng = np.random.default_rng(7)
    d = 6
    v_c = rng.normal(size=d)
    v_o = rng.normal(size=d)
    v_n = rng.normal(size=(3, d))
    obj, g_c, g_o, g_n = embeddings.pair_objective_and_grads(v_c, v_o, v_n)
    eps = 1e-6

    def f(vc, vo, vn):
        return embeddings.pair_objective_and_grads(vc, vo, vn)[0]

    for i in range(d):
        e = np.zeros(d)
        e[i] = eps
        num = (f(v_c + e, v_o, v_n) - f(v_c - e, v_o, v_n)) / (2 * eps)
        assert abs(num - g_c[i]) / max(abs(num) + abs(g_c[i]), 1e-8) < 1e-4
        num = (f(v_c, v_o + e, v_n) - f(v_c, v_o - e, v_n)) / (2 * eps)
        assert abs(num - g_o[i]) / max(abs(num) + abs(g_o[i]), 1e-8) < 1e-4
    for j in range(3):
        for i in range(d):
            en = np.zeros((3, d))
            en[j, i] = eps
            num = (f(v_c, v_o, v_n + en) - f(v_c, v_o, v_n - en)) / (2 * eps)
            assert abs(num - g_n[j, i]) / max(abs(num) + abs(g_n[j, i]), 1e-8) < 1e-4


def test_sgd_step_increases_local_objective():
    # one positive pair with fixed negatives: a small step must improve
    # the pair's own objective
    rng = np.random.default_rng(3)
    T, D = 8, 6
    vin = (rng.random((T, D)) - 0.5).astype(np.float32)
    vout = (rng.random((T, D)) * 0.2 - 0.1).astype(np.float32)
    negs = np.array([4, 5, 6], dtype=np.int32)
    before = embeddings.pair_objective_and_grads(
        vin[0].astype(np.float64), vout[1].astype(np.float64),
        vout[negs].astype(np.float64))[0]
    embeddings.reference_pair_step(vin, vout, 0, 1, negs, np.float32(0.01))
    after = embeddings.pair_objective_and_grads(
        vin[0].astype(np.float64), vout[1].astype(np.float64),
        vout[negs].astype(np.float64))[0]
    assert after > before


def _full_softmax_oracle(rows, vocab, dim=8, epochs=400, lr=0.1, seed=0):
    """Brute-force skip-gram with an exact softmax over all tokens."""
    T = vocab.num_ingredients + vocab.num_countries
    rng = np.random.default_rng(seed)
    vin = rng.uniform(-0.5 / dim, 0.5 / dim, size=(T, dim))
    vout = np.zeros((T, dim))
    pairs = list(embeddings.pair_stream(rows, vocab))
    for _ in range(epochs):
        for c, o in pairs:
            z = vout @ vin[c]
            z -= z.max()
            p = np.exp(z)
            p /= p.sum()
            # d/dvin log softmax_o = vout[o] - sum_t p_t vout[t]
            gin = vout[o] - p @ vout
            gout = -p[:, None] * vin[c][None, :]
            gout[o] += vin[c]
            vin[c] += lr * gin
            vout += lr * gout
    return vin


def test_negative_sampling_matches_full_softmax_cooccurrence_ordering():
    rows, vocab = _toy_corpus()
    oracle_vin = _full_softmax_oracle(rows, vocab)

    def cos(u, v):
        return float(u @ v / (np.linalg.norm(u) * np.linalg.norm(v)))

    a, b, c = (vocab.ingredient_id(t) for t in "abc")
    assert cos(oracle_vin[a], oracle_vin[b]) > cos(oracle_vin[a], oracle_vin[c])

    space = embeddings.train_embeddings(
        rows, vocab, EmbeddingConfig(dim=8, epochs=400, step_size=0.05,
                                     negative_samples=2, seed=0))
    assert embeddings.similarity(space, "a", "b") > embeddings.similarity(space, "a", "c")


def test_training_is_seed_deterministic(tiny_recipes, tiny_vocab):
    config = EmbeddingConfig(dim=12, epochs=2, seed=9)
    s1 = embeddings.train_embeddings(tiny_recipes, tiny_vocab, config)
    s2 = embeddings.train_embeddings(tiny_recipes, tiny_vocab, config)
    np.testing.assert_array_equal(s1.input_vectors, s2.input_vectors)
    np.testing.assert_array_equal(s1.output_vectors, s2.output_vectors)
    s3 = embeddings.train_embeddings(tiny_recipes, tiny_vocab,
                                     EmbeddingConfig(dim=12, epochs=2, seed=10))
    assert not np.array_equal(s1.input_vectors, s3.input_vectors)


def test_training_blowup_raises_numerical_error():
    rows, vocab = _toy_corpus()
    config = EmbeddingConfig(dim=4, epochs=60, step_size=1e18, seed=0)
    with pytest.raises(NumericalError):
        embeddings.train_embeddings(rows, vocab, config)


def _handmade_space():
    """2-D space with a frozen, hand-computed similarity ranking."""
    vocab = corpus.Vocabulary(ingredients=("a", "b", "d", "e"), countries=("c1", "c2"))
    vecs = np.array([
        [0.9, 0.1],    # a
        [1.0, 1.0],    # b
        [1.0, -1.0],   # d
        [-1.0, 0.3],   # e
        [0.0, 1.0],    # c1
        [0.0, -1.0],   # c2
    ], dtype=np.float32)
    config = EmbeddingConfig(dim=2)
    return EmbeddingSpace(vocab, vecs, np.zeros_like(vecs), config)


def test_nearest_frozen_ranking_and_exclusions():
    space = _handmade_space()
    # query b - c1 + c2 = (1, -1); cosines frozen from a hand calculation:
    # d 1.0, c2 0.7071, a 0.62469504..., b 0.0, c1 -0.7071, e -0.8805
    got = embeddings.analogy(space, "b", "c1", "c2", k=4)
    assert [t for t, _ in got] == ["d", "a", "e"]
    np.testing.assert_allclose(got[0][1], 1.0, atol=1e-6)
    np.testing.assert_allclose(got[1][1], 0.6246950475544242, atol=1e-9)


def test_nearest_excludes_query_and_respects_kind():
    space = _handmade_space()
    names = [t for t, _ in embeddings.nearest(space, "b", k=10)]
    assert "b" not in names
    only_countries = embeddings.nearest(space, "b", k=10, kind="country")
    assert {t for t, _ in only_countries} <= {"c1", "c2"}
    only_ingredients = embeddings.nearest(space, "c1", k=10, kind="ingredient")
    assert {t for t, _ in only_ingredients} <= {"a", "b", "d", "e"}


def test_nearest_k_zero_and_unknown_token():
    space = _handmade_space()
    assert embeddings.nearest(space, "a", k=0) == []
    with pytest.raises(UnknownTokenError):
        embeddings.nearest(space, "zz", k=3)


def test_nearest_tie_break_by_token_order():
    vocab = corpus.Vocabulary(ingredients=("p", "q", "r"), countries=("c",))
    vecs = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 1.0], [0.0, -1.0]],
                    dtype=np.float32)
    space = EmbeddingSpace(vocab, vecs, np.zeros_like(vecs),
                           EmbeddingConfig(dim=2))
    got = embeddings.nearest(space, "p", k=3, kind="ingredient")
    # q and r tie exactly; q comes first in the vocabulary
    assert [t for t, _ in got][:2] == ["q", "r"]


def test_nearest_skips_zero_norm_rows():
    vocab = corpus.Vocabulary(ingredients=("p", "q", "r"), countries=("c",))
    vecs = np.array([[1.0, 0.0], [0.0, 0.0], [0.5, 0.5], [0.2, -0.2]],
                    dtype=np.float32)
    space = EmbeddingSpace(vocab, vecs, np.zeros_like(vecs),
                           EmbeddingConfig(dim=2))
    names = [t for t, _ in embeddings.nearest(space, "p", k=5)]
    assert "q" not in names


def test_authentic_ingredients_are_country_neighbors(tiny_space):
    top = embeddings.authentic_ingredients(tiny_space, "japanese", k=5)
    assert len(top) == 5
    ingredient_names = set(tiny_space.vocab.ingredients)
    assert all(t in ingredient_names for t, _ in top)
    mirrored = embeddings.nearest(tiny_space, "japanese", k=5, kind="ingredient")
    assert [t for t, _ in top] == [t for t, _ in mirrored]


def test_analogy_excludes_its_own_query_tokens(tiny_space):
    got = embeddings.analogy(tiny_space, "mirin", "japanese", "french", k=15)
    names = {t for t, _ in got}
    assert "mirin" not in names
    assert "japanese" not in names and "french" not in names
    assert len(got) == 15


def test_country_token_resolution_prefers_country(tiny_space):
    cid = tiny_space.token_id("japanese")
    assert tiny_space.is_country(cid)


def test_save_load_roundtrip_bitwise(tmp_path, tiny_space):
    p1 = tmp_path / "e1.bin"
    p2 = tmp_path / "e2.bin"
    embeddings.save_embeddings(tiny_space, p1)
    back = embeddings.load_embeddings(p1)
    embeddings.save_embeddings(back, p2)
    assert p1.read_bytes() == p2.read_bytes()
    np.testing.assert_array_equal(back.input_vectors, tiny_space.input_vectors)
    assert back.vocab == tiny_space.vocab
    assert back.config == tiny_space.config


def test_load_embeddings_rejects_wrong_kind(tmp_path, tiny_model):
    from cuisineshift import classifier
    path = tmp_path / "not_embeddings.bin"
    classifier.save_model(tiny_model, path)
    with pytest.raises(DataError):
        embeddings.load_embeddings(path)


def test_export_text_lists_every_token(tmp_path, tiny_space):
    path = tmp_path / "vectors.txt"
    embeddings.export_text(tiny_space, path)
    lines = path.read_text().strip().splitlines()
    assert len(lines) == tiny_space.num_tokens + 1  # header line
    head = lines[0].split()
    assert int(head[0]) == tiny_space.num_tokens
    assert int(head[1]) == tiny_space.config.dim
