import math

import pytest

from obstruct.beta import BetaSystem
from obstruct.decomposition import min_gluing_time
from obstruct.errors import EnumerationCapError, InputError
from obstruct.factors import (
    BlockCode,
    FactorSystem,
    apply_code,
    build_pair_automaton,
    factor_entropy_positive,
    factor_language,
    factor_suffix_entropy,
    induced_decomposition,
    nonexpansive_growth,
)
from obstruct.words import word

LOG_PHI = math.log((1 + math.sqrt(5)) / 2)


@pytest.fixture(scope="module")
def wide():
    # expansion (21) repeated: growth 1 + sqrt(3), alphabet {0, 1, 2}
    return BetaSystem.from_expansion((2, 1), period=2)


class TestApply:
    def test_identity(self, golden):
        code = BlockCode.identity(2)
        assert apply_code(code, word("010")) == word("010")

    def test_xor(self):
        assert apply_code(BlockCode.xor(), word("0110")) == word("101")

    def test_merge(self):
        code = BlockCode.merge_all(2)
        assert apply_code(code, word("010")) == (0, 0, 0)

    def test_short_word_rejected(self):
        with pytest.raises(InputError):
            apply_code(BlockCode.xor(), word("1"))

    def test_rule_validation(self, golden):
        partial = BlockCode(2, {(0, 0): 0, (0, 1): 1}, 2)
        with pytest.raises(InputError):
            partial.validate(golden)


class TestFactorLanguage:
    def test_xor_image_is_full(self, full2):
        for n in range(1, 11):
            assert len(factor_language(full2, BlockCode.xor(), n)) == 2 ** n

    def test_merge_single_word_per_length(self, golden):
        for n in range(1, 8):
            assert factor_language(golden, BlockCode.merge_all(2), n) == [(0,) * n]

    def test_identity_counts(self, golden):
        assert len(factor_language(golden, BlockCode.identity(2), 3)) == 5

    def test_cap(self, golden):
        with pytest.raises(EnumerationCapError):
            factor_language(golden, BlockCode.xor(), 24)

    def test_image_language_closure(self, golden, full2):
        for system, code in [
            (golden, BlockCode.identity(2)),
            (full2, BlockCode.xor()),
        ]:
            for n in range(1, 10):
                level = set(factor_language(system, code, n))
                above = factor_language(system, code, n + 1)
                sub = {w[i : i + n] for w in above for i in range(2)}
                assert sub == level

    def test_presentation_matches_brute_force(self, golden, full2, wide):
        cases = [
            (golden, BlockCode.identity(2)),
            (full2, BlockCode.xor()),
            (golden, BlockCode.merge_all(2)),
            (wide, BlockCode(1, {(0,): 0, (1,): 1, (2,): 1}, 2)),
        ]
        for system, code in cases:
            image = FactorSystem(system, code)
            for n in range(1, 9):
                brute = factor_language(system, code, n)
                assert image.enumerate_language(n) == brute
                assert image.count_language(n) == len(brute)


class TestInduced:
    def test_identity_matches_source(self, golden, golden_scheme):
        ind = induced_decomposition(golden, BlockCode.identity(2), golden_scheme)
        for n in range(0, 11):
            for v in golden.enumerate_language(n):
                assert ind.split(v) == golden_scheme.split(v)

    def test_xor_suffix_ray(self, full2, full2_scheme):
        ind = induced_decomposition(full2, BlockCode.xor(), full2_scheme)
        for n in range(1, 9):
            assert ind.suffix_word(n) == (0,) * n
            assert ind.in_suffixes((0,) * n)

    def test_totality_on_images(self, golden, full2, golden_scheme, full2_scheme):
        cases = [
            (golden, BlockCode.identity(2), golden_scheme),
            (full2, BlockCode.xor(), full2_scheme),
            (golden, BlockCode.merge_all(2), golden_scheme),
        ]
        for system, code, scheme in cases:
            ind = induced_decomposition(system, code, scheme)
            for n in range(0, 11 - code.window):
                for y in ind.factor.enumerate_language(n):
                    p, g, s = ind.split(y)
                    assert p + g + s == n
                    assert ind.in_prefixes(y[:p])
                    assert ind.in_cores(y[p : p + g])
                    assert ind.in_suffixes(y[p + g :])

    def test_one_block_core_images_stay_cores(self, golden, golden_scheme):
        for code in (BlockCode.identity(2), BlockCode.merge_all(2)):
            ind = induced_decomposition(golden, code, golden_scheme)
            for n in range(1, 11):
                for v in golden.enumerate_language(n):
                    if golden_scheme.in_cores(v):
                        assert ind.in_cores(apply_code(code, v))

    def test_preimages(self, full2):
        image = FactorSystem(full2, BlockCode.xor())
        pre = image.preimages(word("10"))
        assert pre == [(0, 1, 1), (1, 0, 0)]
        for u in pre:
            assert apply_code(BlockCode.xor(), u) == word("10")

    def test_scheme_system_mismatch(self, golden, full2_scheme):
        with pytest.raises(InputError):
            induced_decomposition(golden, BlockCode.identity(2), full2_scheme)


class TestSuffixEntropy:
    def test_rate_zero_everywhere(self, golden, full2):
        cases = [
            (golden, BlockCode.identity(2)),
            (full2, BlockCode.xor()),
            (golden, BlockCode.merge_all(2)),
        ]
        for system, code in cases:
            est = factor_suffix_entropy(system, code, 20)
            assert est.rate == 0.0

    def test_one_suffix_word_per_length(self, golden, golden_scheme):
        ind = induced_decomposition(golden, BlockCode.identity(2), golden_scheme)
        for n in range(1, 12):
            assert len(ind.suffixes().at(n)) == 1


class TestEntropyPositive:
    def test_identity_on_golden(self, golden):
        report = factor_entropy_positive(golden, BlockCode.identity(2), j=0)
        assert report.positive
        v1, v2, n = report.witness
        assert report.rate_bound == pytest.approx(math.log(2) / n)
        assert report.separated_count_verified == 8

    def test_xor_rate_bound(self, full2):
        report = factor_entropy_positive(full2, BlockCode.xor(), j=0)
        assert report.positive
        assert report.rate_bound >= math.log(2) / 2 - 1e-12
        assert report.separated_count_verified == 8

    def test_merge_single_point(self, golden):
        report = factor_entropy_positive(golden, BlockCode.merge_all(2), j=0)
        assert report.verdict == "single-point-at-scale"

    def test_inconclusive_on_budget(self, golden):
        # lengths past the enumeration cap cannot be searched
        report = factor_entropy_positive(
            golden, BlockCode.identity(2), j=0, lengths=range(30, 32)
        )
        assert report.verdict == "inconclusive"

    def test_depth_one(self, golden):
        report = factor_entropy_positive(golden, BlockCode.identity(2), j=1)
        assert report.positive


class TestNonexpansive:
    def test_identity_expansive(self, golden):
        report = nonexpansive_growth(golden, BlockCode.identity(2))
        assert report.expansive
        assert report.growth_bound is None

    def test_merge_all_full_entropy(self, golden):
        report = nonexpansive_growth(golden, BlockCode.merge_all(2))
        assert not report.expansive
        assert report.growth_bound == pytest.approx(LOG_PHI, abs=1e-6)

    def test_xor_two_to_one_zero_growth(self, full2):
        report = nonexpansive_growth(full2, BlockCode.xor())
        assert not report.expansive
        assert report.growth_bound == pytest.approx(0.0, abs=1e-9)

    def test_partial_merge_strictly_between(self, wide):
        code = BlockCode(1, {(0,): 0, (1,): 1, (2,): 1}, 2)
        report = nonexpansive_growth(wide, code)
        assert not report.expansive
        log_beta = wide.log_beta()
        assert 1e-6 < report.growth_bound < log_beta - 1e-6

    def test_pair_counts_match_brute_force(self, golden, full2, wide):
        cases = [
            (golden, BlockCode.identity(2), 8),
            (golden, BlockCode.merge_all(2), 8),
            (full2, BlockCode.xor(), 8),
            (wide, BlockCode(1, {(0,): 0, (1,): 1, (2,): 1}, 2), 5),
        ]
        for system, code, top in cases:
            pair = build_pair_automaton(system, code)
            counts = pair.pair_counts(top)
            for n in range(code.window, top + 1):
                images = [apply_code(code, u) for u in system.enumerate_language(n)]
                grouped: dict = {}
                for y in images:
                    grouped[y] = grouped.get(y, 0) + 1
                brute = sum(c * c for c in grouped.values())
                assert counts[n] == brute

    def test_pair_dump(self, golden, tmp_path):
        pair = build_pair_automaton(golden, BlockCode.merge_all(2))
        path = tmp_path / "pairs.csv"
        pair.dump_edges_csv(path)
        rows = path.read_text().strip().split("\n")
        assert all(len(r.split(",")) == 5 for r in rows)


class TestInducedGluing:
    def test_image_gluing_bounded_by_window_and_source(
        self, golden, full2, golden_scheme, full2_scheme
    ):
        cases = [
            (golden, BlockCode.identity(2), golden_scheme),
            (full2, BlockCode.xor(), full2_scheme),
        ]
        for system, code, scheme in cases:
            ind = induced_decomposition(system, code, scheme)
            for j in (0, 1):
                tau_src = min_gluing_time(
                    system, scheme.cores(), j=j, tau_max=4, lengths=range(1, 5)
                ).tau
                tau_img = min_gluing_time(
                    ind.factor, ind.cores(), j=j, tau_max=6, lengths=range(1, 5)
                ).tau
                assert tau_img is not None
                assert tau_img <= (code.window - 1) + j + tau_src


def test_code_file_roundtrip(tmp_path):
    code = BlockCode.xor()
    path = tmp_path / "xor.code"
    code.to_file(path)
    back = BlockCode.from_file(path)
    assert back.window == 2 and back.rule == code.rule


def test_code_file_errors(tmp_path):
    bad = tmp_path / "bad.code"
    bad.write_text("0 0\n")
    with pytest.raises(InputError):
        BlockCode.from_file(bad)
    empty = tmp_path / "empty.code"
    empty.write_text("# nothing\n")
    with pytest.raises(InputError):
        BlockCode.from_file(empty)
