import io

import numpy as np
import pytest

from litgraph.embedding import (
    BINARY_MAGIC,
    EmbeddingModel,
    load_binary,
    load_text,
    save_binary,
    save_text,
)
from litgraph.errors import ConceptNotFoundError, ConfigError


def model_fixture():
    rng = np.random.default_rng(5)
    return EmbeddingModel(["alpha", "beta", "gamma"], rng.normal(size=(3, 4)),
                          seed=42)


class TestModel:
    def test_vector_lookup(self):
        m = model_fixture()
        assert np.array_equal(m.vector("beta"), m.matrix[1])
        assert "beta" in m
        assert len(m) == 3
        assert m.dimension == 4

    def test_unknown_concept(self):
        with pytest.raises(ConceptNotFoundError):
            model_fixture().vector("nope")

    def test_unit_matrix_normalizes_rows(self):
        m = model_fixture()
        norms = np.linalg.norm(m.unit_matrix(), axis=1)
        assert np.allclose(norms, 1.0)

    def test_unit_matrix_keeps_zero_rows(self):
        m = EmbeddingModel(["z", "a"], np.array([[0.0, 0.0], [3.0, 4.0]]), 0)
        unit = m.unit_matrix()
        assert np.array_equal(unit[0], [0.0, 0.0])
        assert np.allclose(unit[1], [0.6, 0.8])

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ConfigError):
            EmbeddingModel(["a"], np.zeros((2, 3)), 0)


class TestTextFormat:
    def test_header_and_rows(self):
        buf = io.StringIO()
        save_text(model_fixture(), buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "3 4 42"
        assert len(lines) == 4
        assert lines[1].split()[0] == "alpha"

    def test_round_trip_identity_after_first_load(self):
        """9 significant digits may round the initial floats once, but a
        second save/load cycle reproduces the text exactly."""
        buf = io.StringIO()
        save_text(model_fixture(), buf)
        first = buf.getvalue()
        loaded = load_text(io.StringIO(first))
        buf2 = io.StringIO()
        save_text(loaded, buf2)
        assert buf2.getvalue() == first
        again = load_text(io.StringIO(buf2.getvalue()))
        assert np.array_equal(again.matrix, loaded.matrix)
        assert again.names == loaded.names
        assert again.seed == 42

    def test_bad_header(self):
        with pytest.raises(ConfigError):
            load_text(io.StringIO("3 4\n"))

    def test_short_row(self):
        with pytest.raises(ConfigError):
            load_text(io.StringIO("1 3 0\na 0.5 0.5\n"))


class TestBinaryFormat:
    def test_round_trip_is_lossless(self):
        m = model_fixture()
        buf = io.BytesIO()
        save_binary(m, buf)
        loaded = load_binary(io.BytesIO(buf.getvalue()))
        assert loaded.names == m.names
        assert loaded.seed == m.seed
        assert loaded.matrix.tobytes() == m.matrix.tobytes()

    def test_bytes_are_deterministic(self):
        m = model_fixture()
        b1, b2 = io.BytesIO(), io.BytesIO()
        save_binary(m, b1)
        save_binary(m, b2)
        assert b1.getvalue() == b2.getvalue()

    def test_magic_checked(self):
        with pytest.raises(ConfigError):
            load_binary(io.BytesIO(b"WRONG" + b"\x00" * 40))

    def test_truncation_detected(self):
        buf = io.BytesIO()
        save_binary(model_fixture(), buf)
        clipped = buf.getvalue()[:-5]
        with pytest.raises(ConfigError):
            load_binary(io.BytesIO(clipped))

    def test_unicode_names_survive(self):
        m = EmbeddingModel(["café", "naïve"], np.zeros((2, 2)), 1)
        buf = io.BytesIO()
        save_binary(m, buf)
        assert load_binary(io.BytesIO(buf.getvalue())).names == m.names

    def test_header_layout(self):
        buf = io.BytesIO()
        save_binary(model_fixture(), buf)
        raw = buf.getvalue()
        assert raw.startswith(BINARY_MAGIC)
        # n=3, d=4 little-endian right after the magic.
        assert int.from_bytes(raw[5:13], "little") == 3
        assert int.from_bytes(raw[13:21], "little") == 4
