import numpy as np
import pytest

from tempembed.matrix_io import (
    dumps_embedding,
    dumps_transform,
    loads_embedding,
    loads_transform,
    read_embedding,
    read_transform,
    write_embedding,
    write_transform,
)


class TestEmbedding:
    def test_round_trip_exact(self, rng, tmp_path):
        phi = rng.standard_normal((7, 3)) * 10.0 ** rng.integers(-30, 30, (7, 3))
        write_embedding(tmp_path / "e.txt", phi)
        assert np.array_equal(read_embedding(tmp_path / "e.txt"), phi)

    def test_header(self):
        assert dumps_embedding(np.zeros((2, 3))).splitlines()[0] == "2 3"

    def test_single_column(self):
        phi = np.array([[1.5], [-2.0]])
        assert np.array_equal(loads_embedding(dumps_embedding(phi)), phi)

    @pytest.mark.parametrize("text", ["", "2 2\n1 2\n", "2 2\n1 2\n3\n", "1 2\n1 nan\n", "3\n1 2 3\n"])
    def test_rejects_malformed(self, text):
        with pytest.raises(ValueError):
            loads_embedding(text)

    def test_rejects_non_finite_output(self):
        with pytest.raises(ValueError):
            dumps_embedding(np.array([[np.inf]]))


class TestTransform:
    def test_round_trip_exact(self, rng, tmp_path):
        w = rng.standard_normal((4, 4))
        write_transform(tmp_path / "w.txt", w)
        assert np.array_equal(read_transform(tmp_path / "w.txt"), w)
        assert dumps_transform(w).splitlines()[0] == "4"

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            dumps_transform(np.zeros((2, 3)))
        with pytest.raises(ValueError):
            loads_transform("2\n1 2 3\n4 5 6\n")
