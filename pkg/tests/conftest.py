import numpy as np
import pytest
from PIL import Image


@pytest.fixture
def write_png(tmp_path):
    """Write an array (or PIL image) to a PNG under tmp_path, return the path."""

    def _write(name, data, mode=None):
        path = tmp_path / name
        if isinstance(data, Image.Image):
            data.save(path)
        else:
            Image.fromarray(np.asarray(data), mode=mode).save(path)
        return path

    return _write


def random_image(rng, height, width, low=0, high=256):
    return rng.integers(low, high, size=(height, width), dtype=np.uint8)
