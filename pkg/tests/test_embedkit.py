import json
import random
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import numpy as np
import pytest

from rrs.corpus import FunctionPair
from rrs.embedkit import (
    EmbeddingVector,
    FileStoreProvider,
    HttpServiceProvider,
    MockProvider,
    cosine,
    distance_family,
    get_pair_embeddings,
    precompute_store,
    write_store,
)
from rrs.errors import (
    DimensionMismatchError,
    MissingVectorError,
    ProviderServiceError,
    UndefinedSimilarityError,
)


def _vec(model, values):
    return EmbeddingVector(model_id=model, values=np.array(values, dtype=np.float64))


def _pair(pid="p1", vuln="int f(){}", benign="int g(){}"):
    return FunctionPair(pair_id=pid, vuln_source=vuln, benign_source=benign)


# -- cosine / distance family ------------------------------------------------


def test_cosine_self_similarity():
    v = _vec("m", [1.0, 2.0, 3.0])
    assert cosine(v, v) == pytest.approx(1.0, abs=1e-9)


def test_cosine_orthogonal():
    assert cosine(_vec("m", [1, 0]), _vec("m", [0, 1])) == 0.0


def test_cosine_scale_invariance():
    assert cosine(_vec("m", [1, 1]), _vec("m", [2, 2])) == pytest.approx(1.0, abs=1e-9)


def test_cosine_zero_norm_error():
    with pytest.raises(UndefinedSimilarityError):
        cosine(_vec("m", [0.0, 0.0]), _vec("m", [1.0, 0.0]))


def test_cosine_dim_mismatch():
    with pytest.raises(DimensionMismatchError):
        cosine(_vec("m", [1, 2]), _vec("m", [1, 2, 3]))


def test_distance_family_identity():
    v = _vec("m", [1.5, -2.0, 4.0])
    sim = distance_family(v, v)
    assert sim.l1 == 0.0 and sim.l2 == 0.0 and sim.linf == 0.0
    assert sim.cosine == pytest.approx(1.0, abs=1e-9)


def test_distance_family_hand_case():
    # independent scalar re-check of (3,0) vs (0,4)
    x, y = [3.0, 0.0], [0.0, 4.0]
    l1 = sum(abs(a - b) for a, b in zip(x, y))
    l2 = (sum((a - b) ** 2 for a, b in zip(x, y))) ** 0.5
    linf = max(abs(a - b) for a, b in zip(x, y))
    dot = sum(a * b for a, b in zip(x, y))
    assert (l1, l2, linf, dot) == (7.0, 5.0, 4.0, 0.0)
    sim = distance_family(_vec("m", x), _vec("m", y))
    assert (sim.l1, sim.l2, sim.linf, sim.dot) == (7.0, 5.0, 4.0, 0.0)
    assert sim.cosine == 0.0


def test_metric_inequalities_on_seeded_vectors():
    rng = random.Random(31337)
    for _ in range(300):
        dim = rng.randint(1, 16)
        x = _vec("m", [rng.uniform(-5, 5) for _ in range(dim)])
        y = _vec("m", [rng.uniform(-5, 5) for _ in range(dim)])
        sim = distance_family(x, y)
        assert sim.l2 <= sim.l1 + 1e-12
        assert sim.linf <= sim.l2 + 1e-12
        assert sim.l1 <= dim * sim.linf + 1e-12


def test_non_finite_vector_rejected():
    with pytest.raises(ValueError):
        _vec("m", [1.0, float("nan")])


# -- mock provider --------------------------------------------------------------


def test_mock_identical_sources_identical_vectors():
    provider = MockProvider()
    pair = _pair(vuln="int f(){return 0;}", benign="int f(){return 0;}")
    x, y = get_pair_embeddings(provider, pair, "model-a")
    assert np.array_equal(x.values, y.values)
    assert cosine(x, y) == pytest.approx(1.0, abs=1e-9)


def test_mock_deterministic_across_instances():
    a = MockProvider(seed=3)
    b = MockProvider(seed=3)
    pair = _pair()
    xa, _ = get_pair_embeddings(a, pair, "model-a")
    xb, _ = get_pair_embeddings(b, pair, "model-a")
    assert np.array_equal(xa.values, xb.values)


def test_mock_unit_norm():
    provider = MockProvider(dim=32)
    x, y = get_pair_embeddings(provider, _pair(), "model-b")
    assert np.linalg.norm(x.values) == pytest.approx(1.0, abs=1e-12)


def test_unknown_model_rejected():
    with pytest.raises(MissingVectorError):
        get_pair_embeddings(MockProvider(), _pair(), "nope")


# -- file store -------------------------------------------------------------------


def test_file_store_round_trip_bit_exact(tmp_path):
    path = tmp_path / "store.jsonl"
    vector = [0.1, -0.25, 1.0 / 3.0, 7.25]
    write_store(path, [("p1", "m1", "vuln", vector), ("p1", "m1", "benign", vector)])
    provider = FileStoreProvider(path)
    x, y = get_pair_embeddings(provider, _pair(), "m1")
    assert x.values.tolist() == vector
    assert y.values.tolist() == vector


def test_file_store_missing_vector(tmp_path):
    path = tmp_path / "store.jsonl"
    write_store(path, [("p1", "m1", "vuln", [1.0])])
    provider = FileStoreProvider(path)
    with pytest.raises(MissingVectorError):
        get_pair_embeddings(provider, _pair(), "m1")


def test_file_store_repeated_queries_identical(tmp_path):
    path = tmp_path / "store.jsonl"
    write_store(path, [("p1", "m1", "vuln", [1.0, 2.0]),
                       ("p1", "m1", "benign", [2.0, 1.0])])
    provider = FileStoreProvider(path)
    first = get_pair_embeddings(provider, _pair(), "m1")
    second = get_pair_embeddings(provider, _pair(), "m1")
    assert np.array_equal(first[0].values, second[0].values)
    assert np.array_equal(first[1].values, second[1].values)


def test_precompute_store_round_trip(tmp_path):
    out = tmp_path / "store.jsonl"
    provider = MockProvider(model_ids=["m1", "m2"], dim=8)
    pairs = [_pair("a"), _pair("b", vuln="x1", benign="x2")]
    rows = precompute_store(provider, pairs, ["m1", "m2"], out)
    assert rows == 2 * 2 * 2
    store = FileStoreProvider(out)
    for pair in pairs:
        for model in ("m1", "m2"):
            direct = get_pair_embeddings(provider, pair, model)
            stored = get_pair_embeddings(store, pair, model)
            assert np.array_equal(direct[0].values, stored[0].values)


# -- http provider -----------------------------------------------------------------


class _EmbedHandler(BaseHTTPRequestHandler):
    dims = {"m-ok": 4}
    mismatch = False

    def do_POST(self):
        length = int(self.headers["Content-Length"])
        body = json.loads(self.rfile.read(length))
        model = body["model_id"]
        if model not in self.dims:
            self.send_response(404)
            self.end_headers()
            return
        dim = self.dims[model]
        vectors = []
        for i, _text in enumerate(body["texts"]):
            d = dim if (not self.mismatch or i == 0) else dim + 2
            vectors.append([1.0] * d)
        payload = json.dumps({"model_id": model, "dim": dim, "vectors": vectors})
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.end_headers()
        self.wfile.write(payload.encode())

    def log_message(self, *args):
        pass


@pytest.fixture
def embed_server():
    server = HTTPServer(("127.0.0.1", 0), _EmbedHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_port}"
    server.shutdown()


def test_http_provider_round_trip(embed_server):
    _EmbedHandler.mismatch = False
    provider = HttpServiceProvider(embed_server, ["m-ok"])
    x, y = get_pair_embeddings(provider, _pair(), "m-ok")
    assert x.dim == y.dim == 4


def test_http_provider_dim_mismatch(embed_server):
    _EmbedHandler.mismatch = True
    provider = HttpServiceProvider(embed_server, ["m-ok"])
    try:
        with pytest.raises(DimensionMismatchError):
            get_pair_embeddings(provider, _pair(), "m-ok")
    finally:
        _EmbedHandler.mismatch = False


def test_http_provider_unreachable():
    provider = HttpServiceProvider("http://127.0.0.1:9", ["m-ok"],
                                   retries=1, backoff=0.01, timeout=0.5)
    with pytest.raises(ProviderServiceError):
        get_pair_embeddings(provider, _pair(), "m-ok")


def test_http_provider_error_status(embed_server):
    provider = HttpServiceProvider(embed_server, ["m-missing"],
                                   retries=0, backoff=0.01)
    provider.model_ids = ["m-missing"]
    with pytest.raises(ProviderServiceError):
        get_pair_embeddings(provider, _pair(), "m-missing")
