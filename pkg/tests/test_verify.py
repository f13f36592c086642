from synchro.automaton import Automaton
from synchro.generate import cerny
from synchro.verify import (
    lemma_suite,
    random_st_batch,
    suite_bounds,
    suite_cerny,
    suite_enumerate,
    suite_lemmas,
    worker_count,
)


class TestLemmaSuite:
    def test_family_instances_pass(self):
        for n in (2, 3, 4, 5, 6):
            inst = lemma_suite(cerny(n), label=f"c{n}")
            assert inst.ok, inst.failures

    def test_nontransitive_instance_marks_na_without_failing(self):
        perm = (2, 3, 4, 5, 0, 1)
        merge = (1, 1, 2, 3, 4, 5)
        aut = Automaton(("a", "b"), (perm, merge))
        inst = lemma_suite(aut)
        assert inst.ok
        statuses = {c.name: c.status for c in inst.checks}
        assert statuses["negation_closure_of_limit_cone"] == "n/a"
        assert statuses["escape_length_within_codimension"] == "n/a"
        assert statuses["preimage_growth_identity"] == "pass"

    def test_permutation_only_instance(self):
        aut = Automaton(("a",), ((1, 0),))
        inst = lemma_suite(aut)
        assert inst.ok
        statuses = {c.name: c.status for c in inst.checks}
        assert statuses["limit_generators_sum_zero"] == "n/a"

    def test_defect_two_instance_skips_digraph_bridge(self):
        aut = Automaton(("a", "b", "c"), ((1, 2, 0), (0, 0, 0), (0, 0, 2)))
        inst = lemma_suite(aut)
        assert inst.ok, inst.failures
        statuses = {c.name: c.status for c in inst.checks}
        assert statuses["cone_digraph_bridge"] == "n/a"

    def test_sampled_mode_on_small_instance(self):
        inst = lemma_suite(cerny(4), subset_limit=4, sample_size=64)
        assert inst.ok, inst.failures


class TestBatches:
    def test_batch_is_deterministic(self):
        a = random_st_batch(5, (4, 5), 7)
        b = random_st_batch(5, (4, 5), 7)
        assert [label for label, _ in a] == [label for label, _ in b]
        assert [aut for _, aut in a] == [aut for _, aut in b]

    def test_batch_round_robins_sizes(self):
        batch = random_st_batch(4, (4, 6), 0)
        assert [aut.n for _, aut in batch] == [4, 6, 4, 6]


class TestSuites:
    def test_cerny_suite(self):
        report = suite_cerny(6)
        assert report.ok
        assert report.checked == 5

    def test_enumerate_suite_small(self):
        report = suite_enumerate(3)
        assert report.ok
        assert report.checked == 729
        assert report.details["synchronizing"] == 549

    def test_bounds_suite_small(self):
        report = suite_bounds(count=6, ns=(5, 6), seed=3)
        assert report.ok, report.failures
        assert report.checked == 6
        assert report.seed == 3

    def test_lemmas_suite_small(self):
        report = suite_lemmas(count=4, ns=(5,), seed=3, exhaustive_n_max=2)
        assert report.ok, report.failures
        assert report.checked > 4
        assert report.details["total_checks"] > 0

    def test_threaded_run_matches_serial(self):
        serial = suite_bounds(count=4, ns=(5,), seed=9, workers=1)
        threaded = suite_bounds(count=4, ns=(5,), seed=9, workers=4)
        assert serial.failures == threaded.failures
        assert serial.checked == threaded.checked


class TestWorkerCount:
    def test_default_is_one(self, monkeypatch):
        monkeypatch.delenv("SYNCHRO_THREADS", raising=False)
        assert worker_count() == 1

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("SYNCHRO_THREADS", "3")
        assert worker_count() == 3

    def test_explicit_request_wins(self, monkeypatch):
        monkeypatch.setenv("SYNCHRO_THREADS", "3")
        assert worker_count(2) == 2

    def test_garbage_env_ignored(self, monkeypatch):
        monkeypatch.setenv("SYNCHRO_THREADS", "many")
        assert worker_count() == 1
