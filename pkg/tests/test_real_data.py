import numpy as np
import pytest

from linrs.environments import (
    JesterEnvironment,
    MushroomEnvironment,
    jester_round,
    load_jester,
    load_mushroom,
    mushroom_counts,
    mushroom_round,
)
from linrs.environments.mushroom import ATTRIBUTES, EAT, N_FEATURES, NO_EAT, encode_attributes
from linrs.exceptions import DataError

ROWS = [
    "p,x,s,n,t,p,f,c,n,k,e,e,s,s,w,w,p,w,o,p,k,s,u",
    "e,x,s,y,t,a,f,c,b,k,e,c,s,s,w,w,p,w,o,p,n,n,g",
    "e,b,s,w,t,l,f,c,b,n,e,c,s,s,w,w,p,w,o,p,n,n,m",
]


def one_hot_by_hand(symbols):
    # column offsets of the 22 attribute groups, written out
    sizes = [6, 4, 10, 2, 9, 2, 2, 2, 12, 2, 5, 4, 4, 9, 9, 1, 4, 3, 5, 9, 6, 7]
    vocab = ["bcxfks", "fgys", "nbcgrpuewy", "tf", "alcyfmnps", "af", "cw", "bn",
             "knbhgropuewy", "et", "bcer?", "fyks", "fyks", "nbcgopewy", "nbcgopewy",
             "p", "nowy", "not", "eflnp", "knbhrouwy", "acnsvy", "glmpuwd"]
    x = np.zeros(sum(sizes))
    offset = 0
    for size, letters, sym in zip(sizes, vocab, symbols):
        x[offset + letters.index(sym)] = 1
        offset += size
    return x


@pytest.fixture
def mushroom_file(tmp_path):
    path = tmp_path / "agaricus-lepiota.data"
    path.write_text("\n".join(ROWS) + "\n")
    return path


def test_vocabulary_dimension():
    assert N_FEATURES == 117
    assert len(ATTRIBUTES) == 22


def test_mushroom_fixture_encoding(mushroom_file):
    rows = load_mushroom(mushroom_file)
    assert [r.edible for r in rows] == [False, True, True]
    for row, line in zip(rows, ROWS):
        np.testing.assert_array_equal(row.context, one_hot_by_hand(line.split(",")[1:]))
        assert row.context.sum() == 22
    assert mushroom_counts(rows) == (3, 2, 1)


def test_mushroom_missing_value_symbol_is_a_category():
    symbols = ROWS[0].split(",")[1:]
    symbols[10] = "?"
    x = encode_attributes(symbols)
    assert x.sum() == 22 and x.shape == (117,)


def test_mushroom_empty_file(tmp_path):
    path = tmp_path / "empty.data"
    path.write_text("")
    rows = load_mushroom(path)
    assert rows == [] and mushroom_counts(rows) == (0, 0, 0)
    with pytest.raises(DataError):
        MushroomEnvironment(rows)


def test_mushroom_bad_symbol_names_location(tmp_path):
    path = tmp_path / "bad.data"
    path.write_text(ROWS[0] + "\n" + ROWS[1].replace(",y,t,", ",q,t,", 1) + "\n")
    with pytest.raises(DataError, match="row 2, column 3"):
        load_mushroom(path)


def test_mushroom_wrong_width(tmp_path):
    path = tmp_path / "bad.data"
    path.write_text("e,x,s\n")
    with pytest.raises(DataError, match="row 1"):
        load_mushroom(path)


def test_mushroom_rewards(mushroom_file):
    poison, edible, _ = load_mushroom(mushroom_file)
    rng = np.random.default_rng(0)
    rnd = mushroom_round(edible, rng)
    assert rnd.reward_sampler(EAT) == 5.0 and rnd.reward_sampler(NO_EAT) == 0.0
    np.testing.assert_array_equal(rnd.true_means, [5.0, 0.0])
    assert rnd.regret(NO_EAT) == 5.0
    rnd = mushroom_round(poison, rng)
    np.testing.assert_array_equal(rnd.true_means, [-15.0, 0.0])
    assert rnd.regret(EAT) == 15.0
    draws = np.array([rnd.reward_sampler(EAT) for _ in range(20_000)])
    assert set(np.unique(draws)) == {-35.0, 5.0}
    assert abs(draws.mean() + 15.0) < 0.5
    assert rnd.reward_sampler(NO_EAT) == 0.0
    np.testing.assert_array_equal(rnd.contexts[0], rnd.contexts[1])


def test_mushroom_order_is_seeded(mushroom_file):
    env = MushroomEnvironment(load_mushroom(mushroom_file) * 5)
    env.reset(np.random.default_rng(4))
    a = env.order.copy()
    env.reset(np.random.default_rng(4))
    np.testing.assert_array_equal(a, env.order)
    assert env.default_aleph == 4.0 and env.default_w == env.default_eta == 0.1
    assert env.default_horizon == 8000


def jester_line(values):
    return ",".join(str(v) for v in values)


@pytest.fixture
def jester_file(tmp_path):
    rng = np.random.default_rng(0)
    a = np.round(rng.uniform(-10, 10, 40), 2)
    b = np.round(rng.uniform(-10, 10, 40), 2)
    c = a.copy()
    c[5] = 99
    d = list(b)
    d[39] = ""
    path = tmp_path / "jester.csv"
    path.write_text("\n".join([jester_line(a), jester_line(c), jester_line(b), jester_line(d)]))
    return path, a, b


def test_jester_split_by_hand(jester_file):
    path, a, b = jester_file
    rows = load_jester(path)
    assert len(rows) == 2
    for row, ref in zip(rows, (a, b)):
        np.testing.assert_array_equal(row.features, ref[:32])
        np.testing.assert_array_equal(row.actions, ref[32:])


def test_jester_custom_columns(tmp_path):
    values = np.arange(45) / 10 - 2
    path = tmp_path / "j.csv"
    path.write_text(jester_line(values))
    rows = load_jester(path, columns=range(5, 45), feature_columns=range(8, 40),
                       action_columns=range(8))
    np.testing.assert_array_equal(rows[0].actions, values[5:13])
    np.testing.assert_array_equal(rows[0].features, values[13:45])


def test_jester_rejects_out_of_range(tmp_path):
    path = tmp_path / "j.csv"
    path.write_text(jester_line([0.0] * 10 + [10.5] + [0.0] * 29))
    with pytest.raises(DataError, match="column 10"):
        load_jester(path)


def test_jester_clamps_rounding_noise(tmp_path):
    path = tmp_path / "j.csv"
    path.write_text(jester_line([10.0000001] + [0.0] * 39))
    assert load_jester(path)[0].ratings[0] == 10.0


def test_jester_short_row(tmp_path):
    path = tmp_path / "j.csv"
    path.write_text(jester_line([0.0] * 39))
    with pytest.raises(DataError):
        load_jester(path)


def test_jester_round_regret():
    ratings = np.zeros(40)
    ratings[32:] = [1.0, -2.0, 3.0, 9.9, 0.0, 0.5, -9.0, 2.0]
    from linrs.environments import JesterRow
    row = JesterRow(ratings, ratings[:32], ratings[32:])
    rnd = jester_round(row)
    assert rnd.optimal_arm == 3 and rnd.regret(3) == 0.0
    for arm in range(8):
        assert rnd.regret(arm) == pytest.approx(9.9 - ratings[32 + arm])
        assert rnd.reward_sampler(arm) == ratings[32 + arm]
    assert rnd.contexts.shape == (8, 32)


def test_jester_all_equal_actions():
    from linrs.environments import JesterRow
    ratings = np.full(40, 2.5)
    rnd = jester_round(JesterRow(ratings, ratings[:32], ratings[32:]))
    assert all(rnd.regret(a) == 0.0 for a in range(8))


def test_jester_environment(jester_file):
    env = JesterEnvironment(load_jester(jester_file[0]))
    assert env.n_arms == 8 and env.n_features == 32
    assert env.default_aleph == 2.0 and env.default_w == env.default_eta == 0.01
    assert env.default_horizon == 10_000
