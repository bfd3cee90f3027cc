import numpy as np
import pytest

from srslbp import InvalidInputError, RadialConfig, build_mapping
from srslbp.descriptor import (
    PageDescriptor,
    build_baseline_descriptor,
    build_descriptor,
    pool_histogram,
)
from srslbp.lbp import CodeImage

from conftest import random_image


def make_code_image(codes, radius=1, samples=8):
    return CodeImage(np.asarray(codes, dtype=np.int32), radius, samples)


class TestPoolHistogram:
    def test_all_zero_codes_give_zero_vector(self):
        h = pool_histogram(make_code_image([[0, 0], [0, 0]]))
        assert h.shape == (256,)
        assert np.all(h == 0)

    def test_simple_normalization(self):
        h = pool_histogram(make_code_image([[1, 1], [1, 2]]))
        assert h[1] == 0.75 and h[2] == 0.25
        assert h.sum() == 1.0

    def test_zero_pattern_discarded_before_normalizing(self):
        codes = np.zeros((10, 10), dtype=np.int32)
        codes[:2, :2] = 5  # 4 occurrences of code 5 among 96 zeros
        h = pool_histogram(make_code_image(codes))
        assert h[0] == 0.0
        assert h[5] == 1.0

    def test_mapped_pooling_discards_mapped_zero_bin(self):
        mapping = build_mapping(8, "riu2")
        codes = np.array([[0, 0, 3]], dtype=np.int32)  # code 3 is uniform, popcount 2
        h = pool_histogram(make_code_image(codes), mapping)
        assert h.shape == (10,)
        assert h[int(mapping.table[0])] == 0.0
        assert h[2] == 1.0

    def test_mapping_sample_count_mismatch(self):
        mapping = build_mapping(16, "u2")
        with pytest.raises(InvalidInputError):
            pool_histogram(make_code_image([[1]]), mapping)


class TestBuildDescriptor:
    def test_default_dimension_is_3072(self):
        rng = np.random.default_rng(40)
        img = random_image(rng, 30, 30)
        d = build_descriptor(img, RadialConfig(), "page-1")
        assert d.dim == 3072  # 256 x 12
        assert d.sample_id == "page-1"
        assert d.radii == tuple(range(1, 13))

    def test_single_radius_dimension(self):
        rng = np.random.default_rng(41)
        img = random_image(rng, 16, 16)
        assert build_descriptor(img, RadialConfig(radii=(4,))).dim == 256

    def test_constant_image_gives_zero_descriptor(self):
        img = np.full((30, 30), 100, dtype=np.uint8)
        d = build_descriptor(img, RadialConfig(radii=(1, 2, 3)))
        assert np.all(d.values == 0)

    def test_block_invariants_on_random_images(self):
        rng = np.random.default_rng(42)
        for _ in range(10):
            img = random_image(rng, 28, 28)
            d = build_descriptor(img, RadialConfig(radii=(1, 2, 5)))
            assert np.all(d.values >= 0)
            for block in d.values.reshape(-1, 256):
                assert block[0] == 0.0
                norm = block.sum()
                assert abs(norm - 1.0) < 1e-9 or norm == 0.0

    def test_block_locality(self):
        """Block k of a multi-radius descriptor equals the single-radius one."""
        rng = np.random.default_rng(43)
        img = random_image(rng, 26, 26)
        multi = build_descriptor(img, RadialConfig(radii=(1, 3, 6)))
        for k, r in enumerate((1, 3, 6)):
            solo = build_descriptor(img, RadialConfig(radii=(r,)))
            assert np.array_equal(multi.values[256 * k : 256 * (k + 1)], solo.values)

    def test_intensity_offset_invariance(self):
        rng = np.random.default_rng(44)
        img = random_image(rng, 24, 24, high=200)
        shifted = (img + 50).astype(np.uint8)
        cfg = RadialConfig(radii=(1, 4))
        a = build_descriptor(img, cfg)
        b = build_descriptor(shifted, cfg)
        assert np.array_equal(a.values, b.values)

    def test_rejects_non_default_sample_count(self):
        img = np.zeros((20, 20), dtype=np.uint8)
        with pytest.raises(InvalidInputError):
            build_descriptor(img, RadialConfig(samples=16, radii=(1,)))

    def test_descriptor_length_invariant_enforced(self):
        with pytest.raises(InvalidInputError):
            PageDescriptor(np.zeros(100), "x", (1,))


class TestBaselineDescriptors:
    @pytest.mark.parametrize(
        "variant,compression,dim",
        [
            ("lbp3x3", "none", 256),
            ("lbp8-1", "none", 256),
            ("lbp8-1", "u2", 59),
            ("lbp16-2", "u2", 243),
            ("lbp16-2", "riu2", 18),
            ("concat8-1_16-2", "none", 256 + 65536),
            ("concat8-1_16-2", "riu2", 10 + 18),
        ],
    )
    def test_dimensions(self, variant, compression, dim):
        rng = np.random.default_rng(45)
        img = random_image(rng, 16, 16)
        d = build_baseline_descriptor(img, variant, compression)
        assert d.dim == dim

    def test_unknown_variant(self):
        img = np.zeros((8, 8), dtype=np.uint8)
        with pytest.raises(InvalidInputError, match="baseline"):
            build_baseline_descriptor(img, "lbp5-3")

    def test_blocks_normalized(self):
        rng = np.random.default_rng(46)
        img = random_image(rng, 16, 16)
        d = build_baseline_descriptor(img, "concat8-1_16-2", "u2")
        first, second = d.values[:59], d.values[59:]
        assert abs(first.sum() - 1.0) < 1e-9 or first.sum() == 0.0
        assert abs(second.sum() - 1.0) < 1e-9 or second.sum() == 0.0
