"""Acceptance suite: one criterion per group of tests, reported by conftest."""

import copy
import json
import os
import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

import oracles
from commgraph.autfree import Word, gersten_condition, nielsen, nielsen_pairs, parse_nielsen_label, reduce
from commgraph.catalog import SHIPPED, autfree_set, heisenberg_set, nielsen_path, run_case, shared_letter_pairs, sl_set, validate_path
from commgraph.certify import (
    CONCLUSIONS,
    check_main_theorem,
    check_thompson_variant,
    thompson_generators,
    verify_certificate,
)
from commgraph.cli import dumps, run
from commgraph.engine import canonical_key, commutator, commutes, element_from_key, power, relation_search
from commgraph.graph import build, components, edge_witness, remove_vertices
from commgraph.matrix import IntMatrix, RatMatrix, elementary, heisenberg_generators, independent_logs, matrix_exp, unipotent_log
from commgraph.probe import ball, ends_probe
from commgraph.thompson import X0X1INV_LABEL, generator_x, slope_hom, x0_x1inv

GERSTEN = "Gersten relation exhaustive on the 80 Nielsen maps of F_5"
NIELSEN_PATHS = "Aut+(F_5) commutativity graph connected, explicit paths validated"
SL5 = "SL(5,Z) elementary generators: connected graph and certificate"
HEIS = "Heisenberg: edge set, bound-5 search, certificate"
THOMPSON = "Thompson S'_10: isolation, connectivity, slope witness, relations, variant certificate"
CROSS = "witness cross-validation: logs vs relation search, exp/log round trip"
LAWS = "engine law suites, 1000 random cases per law"
MUTATION = "1000 fact-changing certificate mutations all rejected"
PROBE = "Heisenberg ball probe"
DETERMINISM = "byte-identical catalog artifacts across runs"


# -- Gersten relation -----------------------------------------------------------


@pytest.mark.criterion(GERSTEN)
def test_gersten_relation_exhaustive():
    start = time.perf_counter()
    maps = {(a, b): nielsen(a, b, 5) for a, b in nielsen_pairs(5)}
    assert len(maps) == 80
    checked = 0
    for (a, b), f in maps.items():
        for (c, d), g in maps.items():
            if gersten_condition(a, b, c, d):
                assert commutator(f, g).is_identity(), (a, b, c, d)
                checked += 1
    assert checked > 0
    assert not commutes(nielsen(1, 2, 5), nielsen(2, 3, 5))
    assert time.perf_counter() - start < 60


@pytest.mark.criterion(GERSTEN)
def test_gersten_relation_against_oracle():
    for a, b in oracles.all_nielsen(5):
        for c, d in oracles.all_nielsen(5):
            if not gersten_condition(a, b, c, d):
                continue
            f, g = oracles.nielsen_images(a, b, 5), oracles.nielsen_images(c, d, 5)
            assert oracles.compose_images(f, g) == oracles.compose_images(g, f)


# -- Aut+(F_5) ------------------------------------------------------------------


@pytest.mark.criterion(NIELSEN_PATHS)
def test_autfree5_connected():
    gens = autfree_set(5)
    assert len(gens) == 80
    parts, _ = components(build(gens))
    assert len(parts) == 1


@pytest.mark.criterion(NIELSEN_PATHS)
def test_explicit_paths():
    pairs = shared_letter_pairs(5)
    assert len(pairs) >= 100
    for e1, e2 in pairs:
        p = nielsen_path(e1, e2, 5)
        assert p.method == "explicit"
        assert len(p.vertices) <= 4
        assert validate_path(p.vertices, 5)
    # Independent re-check of every edge by composing images.
    for e1, e2 in pairs[:120]:
        path = nielsen_path(e1, e2, 5).vertices
        for u, v in zip(path, path[1:]):
            f = oracles.nielsen_images(*parse_nielsen_label(u), 5)
            g = oracles.nielsen_images(*parse_nielsen_label(v), 5)
            assert oracles.compose_images(f, g) == oracles.compose_images(g, f)


# -- SL(5,Z) --------------------------------------------------------------------


@pytest.mark.criterion(SL5)
def test_sl5():
    gens = sl_set(5)
    expected = {elementary(5, i, j, s) for i in range(1, 6) for j in range(1, 6) if i != j for s in (1, -1)}
    assert {g for _, g in gens.items} == expected
    assert len(components(build(gens))[0]) == 1
    cert = check_main_theorem(gens)
    assert cert["conclusions"] == CONCLUSIONS
    assert verify_certificate(cert).ok


# -- Heisenberg -----------------------------------------------------------------


@pytest.mark.criterion(HEIS)
def test_heisenberg():
    g = build(heisenberg_set())
    assert {frozenset((u, v)) for u, v, _ in g.edge_list()} == {frozenset("ac"), frozenset("bc")}
    a, b, c = heisenberg_generators()
    assert edge_witness(a, b, 5) is None
    # Brute-force oracle over the full signed box.
    A, B = oracles.heisenberg()[:2]
    Ai, Bi = oracles.inv_unitriangular(A), oracles.inv_unitriangular(B)
    for p in range(-5, 6):
        for q in range(-5, 6):
            if p and q:
                ap = _mpow(A if p > 0 else Ai, abs(p))
                bq = _mpow(B if q > 0 else Bi, abs(q))
                assert oracles.matmul(ap, bq) != oracles.matmul(bq, ap)
    cert = check_main_theorem(heisenberg_set())
    assert cert["conclusions"] == ["NOT_STRONGLY_RELATIVELY_HYPERBOLIC", "ONE_END"]
    assert verify_certificate(cert).ok


def _mpow(m, k):
    out = oracles.ident(len(m))
    for _ in range(k):
        out = oracles.matmul(out, m)
    return out


# -- Thompson -------------------------------------------------------------------


@pytest.mark.criterion(THOMPSON)
def test_thompson_m10():
    gens = thompson_generators(10)
    g = build(gens)
    assert g.degree("x0") == 0 and g.degree("x1") == 0
    assert remove_vertices(g, {"x0", "x1"}).is_connected()
    cert = check_thompson_variant(10)
    r2 = cert["rank2"]
    assert set(r2["edge"]) == {X0X1INV_LABEL, "x2"}
    assert r2["payload"]["homomorphism"] == "endpoint-slopes"
    (a, b), (c, d) = slope_hom(x0_x1inv()), slope_hom(generator_x(2))
    assert a * d - b * c != 0
    for i in range(10):
        for j in range(i + 1, 10):
            xi = generator_x(i)
            assert xi * generator_x(j) * xi.inverse() == generator_x(j + 1)
    assert cert["proof_pattern"] == "thompson-variant"
    assert cert["conclusions"] == CONCLUSIONS
    assert any(cv["code"] == "TRUNCATION" and cv["m"] == 10 for cv in cert["caveats"])
    assert verify_certificate(cert).ok


@pytest.mark.criterion(THOMPSON)
def test_thompson_generators_against_point_oracle():
    x0inv = oracles.invert_points(oracles.X0_POINTS)
    for k in range(65):
        t = Fraction(k, 64)
        assert generator_x(0)(t) == oracles.pl_eval(oracles.X0_POINTS, t)
        assert generator_x(1)(t) == oracles.pl_eval(oracles.X1_POINTS, t)
        # x0x1^-1 applies x1^-1 first, then x0.
        want = oracles.pl_eval(oracles.X0_POINTS, oracles.pl_eval(oracles.invert_points(oracles.X1_POINTS), t))
        assert x0_x1inv()(t) == want
        assert generator_x(2)(t) == oracles.pl_eval(
            x0inv, oracles.pl_eval(oracles.X1_POINTS, oracles.pl_eval(oracles.X0_POINTS, t))
        )


# -- cross-validation -----------------------------------------------------------


def _random_unitriangular(rng, n):
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            rows[i][j] = rng.randint(-4, 4)
    return IntMatrix(rows)


def _commuting_pairs(rng):
    pairs = []
    for k in range(20):
        n = 3 + k % 2
        kind = k % 4
        if kind == 0:
            u = _random_unitriangular(rng, n)
            p, q = rng.choice([1, 2, 3, -2]), rng.choice([1, 2, -1, 3])
            pairs.append((power(u, p), power(u, q)))
        elif kind == 1 and n == 3:
            pairs.append((elementary(3, 1, 2, rng.randint(1, 4)), elementary(3, 1, 3, rng.randint(1, 4))))
        else:
            # Block matrices [[I, X], [0, I]] commute; in dimension 3 use the top-right corner.
            def block():
                rows = [[int(i == j) for j in range(n)] for i in range(n)]
                if n == 4:
                    for i in (0, 1):
                        for j in (2, 3):
                            rows[i][j] = rng.randint(-3, 3)
                else:
                    rows[0][2] = rng.randint(1, 3)
                    rows[0][1] = 0
                return IntMatrix(rows)

            x = block()
            y = block() if rng.random() < 0.6 else power(x, rng.choice([2, -3]))
            if x.is_identity() or y.is_identity():
                x, y = elementary(n, 1, n, 1), elementary(n, 1, n, 2)
            pairs.append((x, y))
    return pairs


@pytest.mark.criterion(CROSS)
def test_logs_agree_with_relation_search():
    rng = random.Random(2024)
    pairs = _commuting_pairs(rng)
    assert len(pairs) == 20
    outcomes = set()
    for x, y in pairs:
        assert commutes(x, y)
        indep = independent_logs(x, y)
        assert indep == (relation_search(x, y, 5) == [])
        outcomes.add(indep)
    assert outcomes == {True, False}


@pytest.mark.criterion(CROSS)
def test_exp_log_round_trip():
    rng = random.Random(99)
    for k in range(100):
        n = 2 + k % 4
        u = _random_unitriangular(rng, n)
        # Conjugate by a random unimodular matrix to leave the triangular form.
        c = IntMatrix.identity_of(n)
        for _ in range(3):
            i, j = rng.sample(range(1, n + 1), 2)
            c = c * elementary(n, i, j, rng.choice([-1, 1]))
        m = c * u * c.inverse()
        assert matrix_exp(unipotent_log(m)) == RatMatrix(m.rows)


@pytest.mark.criterion(CROSS)
def test_relation_search_matches_brute_force():
    a, b, c = heisenberg_generators()
    for x, y in [(a, c), (a**2, a**-3), (c**2, c**4), (b, b.inverse())]:
        brute = [
            (p, q)
            for p in range(-5, 6)
            for q in range(-5, 6)
            if (p or q) and (power(x, p) * power(y, q)).is_identity()
        ]
        assert relation_search(x, y, 5) == brute


# -- engine laws ----------------------------------------------------------------

LAW = settings(
    max_examples=1000,
    deadline=None,
    derandomize=True,
    database=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)

word_letters = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=14)
words = word_letters.map(lambda w: Word(w, 3))
automorphisms = st.lists(st.sampled_from(nielsen_pairs(3)), min_size=1, max_size=4).map(
    lambda ps: _product([nielsen(a, b, 3) for a, b in ps])
)
matrices = st.lists(
    st.tuples(st.sampled_from([(i, j) for i in (1, 2, 3) for j in (1, 2, 3) if i != j]), st.sampled_from([-2, -1, 1, 2])),
    min_size=1,
    max_size=6,
).map(lambda es: _product([elementary(3, i, j, s) for (i, j), s in es]))
pl_maps = st.lists(st.tuples(st.integers(0, 3), st.booleans()), min_size=1, max_size=4).map(
    lambda gs: _product([generator_x(j) if pos else generator_x(j).inverse() for j, pos in gs])
)
ENGINES = {"word": words, "automorphism": automorphisms, "matrix": matrices, "thompson": pl_maps}


def _product(items):
    out = items[0]
    for g in items[1:]:
        out = out * g
    return out


@pytest.mark.criterion(LAWS)
@pytest.mark.parametrize("engine", ENGINES)
def test_associativity(engine):
    s = ENGINES[engine]

    @LAW
    @given(s, s, s)
    def law(f, g, h):
        assert (f * g) * h == f * (g * h)

    law()


@pytest.mark.criterion(LAWS)
@pytest.mark.parametrize("engine", ENGINES)
def test_inverses(engine):
    @LAW
    @given(ENGINES[engine])
    def law(g):
        assert (g * g.inverse()).is_identity() and (g.inverse() * g).is_identity()
        assert element_from_key(canonical_key(g)) == g

    law()


@pytest.mark.criterion(LAWS)
@pytest.mark.parametrize("engine", ENGINES)
def test_power_additivity(engine):
    @LAW
    @given(ENGINES[engine], st.integers(-4, 4), st.integers(-4, 4))
    def law(g, m, n):
        assert power(g, m) * power(g, n) == power(g, m + n)

    law()


@pytest.mark.criterion(LAWS)
def test_free_reduction_idempotent():
    @LAW
    @given(word_letters)
    def law(w):
        r = reduce(w)
        assert reduce(r) == r
        assert all(x != -y for x, y in zip(r, r[1:]))
        assert list(r) == oracles.free_reduce(w)

    law()


dyadic_points = st.tuples(st.integers(0, 2**10), st.integers(0, 10)).map(lambda t: Fraction(min(t[0], 2 ** t[1]), 2 ** t[1]))


@pytest.mark.criterion(LAWS)
def test_pl_composition_matches_evaluation():
    @LAW
    @given(pl_maps, pl_maps, dyadic_points)
    def law(f, g, t):
        assert (f * g)(t) == g(f(t))
        assert f.inverse()(f(t)) == t

    law()


# -- mutations ------------------------------------------------------------------


def _nodes(obj, path=()):
    yield path, obj
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _nodes(obj[k], path + (k,))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _nodes(v, path + (i,))


def _get(obj, path):
    for p in path:
        obj = obj[p]
    return obj


def _set(obj, path, value):
    _get(obj, path[:-1])[path[-1]] = value


def _mutate_value(v, path, rng):
    if isinstance(v, bool):
        return not v
    if isinstance(v, int):
        return v + rng.choice([-2, -1, 1, 2])
    if v is None:
        return rng.choice([0, "x", [], {}])
    if isinstance(v, str):
        if path and path[-1] == "key" and v:
            i = rng.randrange(len(v))
            return v[:i] + rng.choice([h for h in "0123456789abcdef" if h != v[i]]) + v[i + 1 :]
        op = rng.randrange(3)
        if op == 0 or not v:
            return v + rng.choice("xz1-")
        if op == 1:
            return v[:-1]
        return rng.choice(["x2", "a", "c", "x0x1^-1", "0", "1"])
    if isinstance(v, list):
        if not v:
            return [0]
        out = list(v)
        op = rng.randrange(3)
        if op == 0:
            del out[rng.randrange(len(out))]
        elif op == 1:
            out.insert(rng.randrange(len(out) + 1), copy.deepcopy(rng.choice(out)))
        else:
            out.reverse()
        return out
    if isinstance(v, dict):
        out = dict(v)
        if out and rng.random() < 0.7:
            del out[rng.choice(sorted(out))]
        else:
            out["extra"] = 1
        return out
    raise TypeError(type(v))


def _mutate(cert, rng):
    nodes = [p for p, _ in _nodes(cert) if p]
    path = rng.choice(nodes)
    new = copy.deepcopy(cert)
    _set(new, path, _mutate_value(_get(cert, path), path, rng))
    return new, path


def _least_edges(cert, bound):
    """Edge list the generators of cert would have at another power bound."""
    items = [(g["label"], element_from_key(bytes.fromhex(g["key"]))) for g in cert["generators"]]
    out = []
    for i, (ls, s) in enumerate(items):
        for lt, t in items[i + 1 :]:
            hit = next(
                ([p, q] for p in range(1, bound + 1) for q in range(1, bound + 1) if commutes(power(s, p), power(t, q))),
                None,
            )
            if hit:
                out.append({"u": ls, "v": lt, "powers": hit})
    return out


def _changes_a_fact(orig, new, path):
    if new == orig or path[0] == "tool_version":
        return False
    if path == ("power_bound",):
        b = new["power_bound"]
        if orig["proof_pattern"] != "main-theorem" or not isinstance(b, int) or b < 1:
            return True
        return _least_edges(orig, b) != orig["graph"]["edges"]
    return True


@pytest.mark.criterion(MUTATION)
def test_mutation_soundness():
    certs = [
        check_main_theorem(heisenberg_set()),
        check_thompson_variant(4),
        check_main_theorem(thompson_generators(4)),
    ]
    for c in certs:
        assert verify_certificate(c).ok
    rng = random.Random(31337)
    counted, accepted, benign = 0, [], 0
    while counted < 1000:
        orig = certs[counted % len(certs)]
        new, path = _mutate(orig, rng)
        if not _changes_a_fact(orig, new, path):
            # Changes that leave every checked fact intact must still verify.
            benign += 1
            assert verify_certificate(new).ok, path
            continue
        counted += 1
        if verify_certificate(new).ok:
            accepted.append(path)
    assert accepted == []


# -- probe ----------------------------------------------------------------------


@pytest.mark.criterion(PROBE)
def test_heisenberg_probe():
    start = time.perf_counter()
    b = ball(heisenberg_set(), 6)
    growth = b.growth()
    assert all(x <= y for x, y in zip(growth, growth[1:]))
    gens = list(oracles.heisenberg())
    gens += [oracles.inv_unitriangular(g) for g in gens]
    assert growth[2] == oracles.ball_size_by_words(gens, 2) == 29
    report = ends_probe(heisenberg_set(), 2, 6)
    assert report.component_count == 1
    assert time.perf_counter() - start < 30


# -- determinism ----------------------------------------------------------------


@pytest.mark.criterion(DETERMINISM)
@pytest.mark.parametrize("name", SHIPPED)
def test_catalog_artifacts_are_byte_identical(name, tmp_path):
    blobs = []
    for k in range(2):
        j, d = tmp_path / f"{k}.json", tmp_path / f"{k}.dot"
        assert run(["catalog", "run", name, "--json", str(j), "--dot", str(d)], _Sink(), _Sink()) == 0
        blobs.append((j.read_bytes(), d.read_bytes()))
    assert blobs[0] == blobs[1]


@pytest.mark.criterion(DETERMINISM)
@pytest.mark.parametrize("name", ["heisenberg", "thompson4"])
def test_artifacts_independent_of_hash_seed(name, tmp_path):
    blobs = []
    for seed in ("1", "777"):
        j, d = tmp_path / f"{seed}.json", tmp_path / f"{seed}.dot"
        env = dict(os.environ, PYTHONHASHSEED=seed)
        subprocess.run(
            [sys.executable, "-m", "commgraph", "catalog", "run", name, "--json", str(j), "--dot", str(d)],
            check=True,
            env=env,
            capture_output=True,
        )
        blobs.append((j.read_bytes(), d.read_bytes()))
    assert blobs[0] == blobs[1]
    assert json.loads(blobs[0][0]) == json.loads(dumps(run_case(name).certificate))


class _Sink:
    def write(self, _):
        pass
