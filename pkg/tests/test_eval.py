import numpy as np
import pytest

from zoner.corpus import Corpus
from zoner.errors import InputError
from zoner.evaluation import ConfusionMatrix, confusion, error_export, metrics
from zoner.zones import ZONES, Zone

from conftest import make_doc


# independent direct-formula recomputation used as the oracle
def _metrics_by_hand(counts):
    n = len(ZONES)
    per = {}
    for i in range(n):
        col = counts[:, i].sum()
        row = counts[i, :].sum()
        p = counts[i, i] / col if col else 0.0
        r = counts[i, i] / row if row else 0.0
        f = 2 * p * r / (p + r) if (p + r) else 0.0
        per[i] = (p, r, f)
    macro = tuple(sum(per[i][k] for i in range(n)) / n for k in range(3))
    micro = np.trace(counts) / counts.sum()
    return per, macro, micro


class TestConfusion:
    def test_single_misclassification(self):
        m = confusion([Zone.PI], [Zone.BS])
        assert m.counts[Zone.PI.index, Zone.BS.index] == 1
        assert m.counts.sum() == 1

    def test_perfect_is_diagonal(self):
        gold = [Zone.PI, Zone.FI, Zone.O]
        m = confusion(gold, gold)
        assert m.trace == 3
        assert m.total == 3

    def test_order_invariance(self):
        gold = [Zone.PI, Zone.BS, Zone.FA, Zone.PI]
        pred = [Zone.BS, Zone.BS, Zone.FA, Zone.PI]
        m1 = confusion(gold, pred)
        m2 = confusion(gold[::-1], pred[::-1])
        assert np.array_equal(m1.counts, m2.counts)

    def test_length_mismatch(self):
        with pytest.raises(InputError):
            confusion([Zone.PI], [])


class TestMetrics:
    def test_perfect_diagonal(self):
        counts = np.diag(np.arange(1, 9))
        report = metrics(ConfusionMatrix(counts))
        for z in ZONES:
            assert report.precision[z] == 1.0
            assert report.recall[z] == 1.0
            assert report.f1[z] == 1.0
        assert report.macro_f1 == 1.0
        assert report.micro_f1 == 1.0

    def test_never_predicted_class_is_zero(self):
        counts = np.diag([5] * 8)
        t = Zone.T.index
        counts[t, t] = 0
        counts[t, Zone.O.index] = 3  # gold T predicted as O
        report = metrics(ConfusionMatrix(counts))
        assert report.precision[Zone.T] == 0.0
        assert report.recall[Zone.T] == 0.0
        assert report.f1[Zone.T] == 0.0

    def test_random_matrices_match_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            counts = rng.integers(0, 20, size=(8, 8))
            if counts.sum() == 0:
                continue
            report = metrics(ConfusionMatrix(counts))
            per, macro, micro = _metrics_by_hand(counts)
            for i, z in enumerate(ZONES):
                assert abs(report.precision[z] - per[i][0]) < 1e-12
                assert abs(report.recall[z] - per[i][1]) < 1e-12
                assert abs(report.f1[z] - per[i][2]) < 1e-12
            assert abs(report.macro_f1 - macro[2]) < 1e-12
            assert report.micro_f1 == micro

    def test_micro_f1_is_accuracy(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            counts = rng.integers(0, 50, size=(8, 8))
            if counts.sum() == 0:
                continue
            m = ConfusionMatrix(counts)
            assert metrics(m).micro_f1 == m.trace / m.total

    def test_macro_f1_bounded_by_per_class(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            counts = rng.integers(0, 30, size=(8, 8))
            if counts.sum() == 0:
                continue
            report = metrics(ConfusionMatrix(counts))
            values = list(report.f1.values())
            assert min(values) <= report.macro_f1 <= max(values)

    def test_permutation_invariance(self):
        rng = np.random.default_rng(10)
        counts = rng.integers(0, 30, size=(8, 8))
        perm = rng.permutation(8)
        base = metrics(ConfusionMatrix(counts))
        permuted = metrics(ConfusionMatrix(counts[np.ix_(perm, perm)]))
        base_f1 = sorted(base.f1.values())
        perm_f1 = sorted(permuted.f1.values())
        assert base_f1 == pytest.approx(perm_f1, abs=1e-12)
        assert base.micro_f1 == permuted.micro_f1

    def test_empty_matrix_raises(self):
        with pytest.raises(InputError):
            metrics(ConfusionMatrix(np.zeros((8, 8), dtype=int)))


class TestErrorExport:
    def _corpus(self):
        return Corpus(
            [make_doc("d", [("First one.", Zone.PI), ("Second one.", Zone.FI)])]
        )

    def test_zero_errors_header_only(self):
        corpus = self._corpus()
        tsv = error_export(corpus, {"d": [Zone.PI, Zone.FI]})
        lines = tsv.strip().splitlines()
        assert len(lines) == 1
        assert lines[0].split("\t") == [
            "doc_id", "sentence_idx", "gold", "pred", "text", "error_type",
        ]

    def test_single_misclassification_row(self):
        corpus = self._corpus()
        tsv = error_export(corpus, {"d": [Zone.PI, Zone.O]})
        lines = tsv.rstrip("\n").splitlines()
        assert len(lines) == 2
        fields = lines[1].split("\t")
        assert fields[:4] == ["d", "1", "FI", "O"]
        assert fields[4] == "Second one."
        assert fields[5] == ""

    def test_row_count_equals_offdiagonal_mass(self):
        corpus = self._corpus()
        predictions = {"d": [Zone.O, Zone.O]}
        gold = [s.gold for s in corpus.by_id("d").sentences]
        matrix = confusion(gold, predictions["d"])
        tsv = error_export(corpus, predictions)
        n_rows = len(tsv.strip().splitlines()) - 1
        assert n_rows == matrix.total - matrix.trace
