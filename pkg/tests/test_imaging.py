import numpy as np
import pytest
from PIL import Image

from srslbp import DecodeError, InvalidInputError, load_image, rotate_image, sample_bilinear

from conftest import random_image
from oracles import bilinear_reference


class TestLoadImage:
    def test_white_rgb_pixel(self, write_png):
        path = write_png("white.png", np.full((1, 1, 3), 255, dtype=np.uint8))
        img = load_image(path)
        assert img.shape == (1, 1) and img.dtype == np.uint8
        assert img[0, 0] == 255

    def test_gray_rgb_is_luma_fixed_point(self, write_png):
        path = write_png("gray.png", np.full((1, 1, 3), 100, dtype=np.uint8))
        assert load_image(path)[0, 0] == 100

    def test_pure_red_luma(self, write_png):
        arr = np.zeros((1, 1, 3), dtype=np.uint8)
        arr[0, 0, 0] = 255
        path = write_png("red.png", arr)
        # round(0.299 * 255) = 76
        assert load_image(path)[0, 0] == 76

    def test_luma_rounding_on_random_colors(self, write_png):
        rng = np.random.default_rng(7)
        arr = rng.integers(0, 256, size=(5, 7, 3), dtype=np.uint8)
        path = write_png("rand.png", arr)
        img = load_image(path)
        r, g, b = (arr[..., i].astype(np.float64) for i in range(3))
        want = np.rint(0.299 * r + 0.587 * g + 0.114 * b).astype(np.uint8)
        assert np.array_equal(img, want)

    def test_grayscale_passthrough(self, write_png):
        rng = np.random.default_rng(8)
        arr = random_image(rng, 6, 4)
        path = write_png("gray8.png", arr, mode="L")
        assert np.array_equal(load_image(path), arr)

    def test_bilevel_maps_to_0_255(self, write_png):
        pil = Image.new("1", (3, 2))
        pil.putpixel((1, 0), 1)
        path = write_png("bw.png", pil)
        img = load_image(path)
        assert set(np.unique(img)) <= {0, 255}
        assert img[0, 1] == 255 and img[0, 0] == 0

    def test_tiff_and_jpeg_decode(self, tmp_path):
        rng = np.random.default_rng(9)
        arr = random_image(rng, 10, 12)
        tiff = tmp_path / "img.tiff"
        Image.fromarray(arr, mode="L").save(tiff)
        assert np.array_equal(load_image(tiff), arr)
        jpeg = tmp_path / "img.jpg"
        Image.fromarray(arr, mode="L").save(jpeg)
        decoded = load_image(jpeg)  # lossy, so only shape/type guaranteed
        assert decoded.shape == (10, 12) and decoded.dtype == np.uint8

    def test_missing_file(self, tmp_path):
        with pytest.raises(DecodeError, match="no-such-file"):
            load_image(tmp_path / "no-such-file.png")

    def test_undecodable_file(self, tmp_path):
        path = tmp_path / "junk.png"
        path.write_bytes(b"this is not a png at all")
        with pytest.raises(DecodeError, match="junk.png"):
            load_image(path)


class TestSampleBilinear:
    # rows: [[0, 100], [50, 150]] so (row 0, col 1) = 100
    CORNERS = np.array([[0, 100], [50, 150]], dtype=np.uint8)

    def test_center_is_mean_of_corners(self):
        assert sample_bilinear(self.CORNERS, 0.5, 0.5) == 75.0

    def test_lattice_point_identity(self):
        assert sample_bilinear(self.CORNERS, 1.0, 0.0) == 100.0

    def test_fractional_weights(self):
        # 0.75 * 0 + 0.25 * 100
        assert sample_bilinear(self.CORNERS, 0.25, 0.0) == 25.0

    def test_every_lattice_point_exact(self):
        rng = np.random.default_rng(21)
        for _ in range(5):
            img = random_image(rng, 5, 6)
            for r in range(5):
                for c in range(6):
                    assert sample_bilinear(img, float(c), float(r)) == float(img[r, c])

    def test_output_within_neighbor_range(self):
        rng = np.random.default_rng(22)
        img = random_image(rng, 8, 8)
        for _ in range(200):
            x = rng.uniform(0, 7)
            y = rng.uniform(0, 7)
            val = sample_bilinear(img, x, y)
            x0, y0 = int(x), int(y)
            block = img[y0 : min(y0 + 2, 8), x0 : min(x0 + 2, 8)]
            assert block.min() - 1e-9 <= val <= block.max() + 1e-9

    def test_matches_reference_sampler(self):
        rng = np.random.default_rng(23)
        img = random_image(rng, 6, 9)
        pixels = img.astype(np.float64).tolist()
        for _ in range(300):
            x = rng.uniform(0, 8)
            y = rng.uniform(0, 5)
            assert sample_bilinear(img, x, y) == bilinear_reference(pixels, x, y)

    def test_out_of_range_is_contract_violation(self):
        with pytest.raises(AssertionError):
            sample_bilinear(self.CORNERS, -0.01, 0.0)
        with pytest.raises(AssertionError):
            sample_bilinear(self.CORNERS, 0.0, 1.01)

    def test_single_pixel_image(self):
        img = np.array([[42]], dtype=np.uint8)
        assert sample_bilinear(img, 0.0, 0.0) == 42.0


class TestRotateImage:
    def test_angle_zero_is_bitwise_identity(self):
        rng = np.random.default_rng(31)
        img = random_image(rng, 9, 7)
        out = rotate_image(img, 0.0)
        assert np.array_equal(out, img)
        assert out is not img

    def test_center_pixel_is_fixed_point(self):
        img = np.full((5, 5), 255, dtype=np.uint8)
        img[2, 2] = 0
        out = rotate_image(img, 90.0)
        assert out[2, 2] == 0

    def test_quarter_turn_direction(self):
        """Counter-clockwise: (row 2, col 4) moves to (row 0, col 2) in a 5x5."""
        img = np.full((5, 5), 255, dtype=np.uint8)
        img[2, 4] = 0
        out = rotate_image(img, 90.0)
        assert out[0, 2] == 0
        assert out[2, 4] == 255

    def test_uncovered_corners_filled_with_background(self):
        img = np.zeros((9, 9), dtype=np.uint8)
        out = rotate_image(img, 45.0)
        assert out[0, 0] == 255 and out[8, 8] == 255
        assert out[4, 4] == 0

    def test_white_round_trip_stays_white(self):
        img = np.full((12, 12), 255, dtype=np.uint8)
        out = rotate_image(rotate_image(img, 17.0), -17.0)
        assert np.array_equal(out, img)

    def test_dimensions_preserved(self):
        rng = np.random.default_rng(33)
        img = random_image(rng, 10, 14)
        assert rotate_image(img, -20.0).shape == (10, 14)

    def test_angle_out_of_range(self):
        img = np.zeros((4, 4), dtype=np.uint8)
        with pytest.raises(InvalidInputError):
            rotate_image(img, 181.0)
