from chh.oracle import ExactCounts


def test_empty_query():
    rep = ExactCounts().query(0.1, 0.1)
    assert rep.primaries == [] and rep.chhs == []


def test_small_stream():
    ec = ExactCounts()
    for x, y in [("a", "x"), ("a", "x"), ("a", "y"), ("b", "x")]:
        ec.ingest(x, y)
    assert ec.n == 4
    assert ec.fx["a"] == 3
    assert ec.fxy[("a", "x")] == 2
    rep = ec.query(0.4, 0.5)
    assert rep.primaries == [("a", 3)]
    assert rep.chhs == [("a", "x", 2)]


def test_strict_thresholds():
    ec = ExactCounts()
    ec.ingest_many(["a", "a", "b", "b"], ["x", "x", "y", "y"])
    # f_a = 2 = 0.5*4: strict ">" excludes it
    rep = ec.query(0.5, 0.5)
    assert rep.primaries == []
    rep = ec.query(0.49, 0.5)
    assert rep.primary_set() == {"a", "b"}
    # f_ax = 2 = 1.0*2 fails the strict tuple test at phi2=1.0
    assert ec.query(0.49, 1.0).chhs == []


def test_ingest_many_matches_ingest():
    xs = [1, 2, 1, 1, 3, 2]
    ys = [7, 7, 8, 7, 9, 7]
    a = ExactCounts()
    a.ingest_many(xs, ys)
    b = ExactCounts()
    for x, y in zip(xs, ys):
        b.ingest(x, y)
    assert a.n == b.n and a.fx == b.fx and a.fxy == b.fxy


def test_sorted_output():
    ec = ExactCounts()
    ec.ingest_many([3, 1, 2, 3, 1, 2], [2, 1, 1, 1, 2, 2])
    rep = ec.query(0.01, 0.01)
    assert rep.primaries == sorted(rep.primaries)
    assert rep.chhs == sorted(rep.chhs)
