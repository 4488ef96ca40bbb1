import json
from fractions import Fraction as F
from math import pi

import numpy as np
import pytest

from conftest import rand_polygon
from mutation import mutants
from quantsel.errors import InvalidInput, Unsupported
from quantsel.geometry import ConvexBody, box, intersect_bodies, polytope_volume
from quantsel.harness import certify, generate, mc_volume, render_svg, stream, verify
from quantsel.harness.cli import main
from quantsel.harness.io import Certificate, Instance, load_certificate, load_instance, rat, write_json
from quantsel.tverberg import Segment


# ---------------------------------------------------------------- io

def test_rationals_are_strings_only():
    assert rat("3/7") == F(3, 7) and rat("-2") == -2 and rat(5) == 5
    for bad in (0.5, "x", "1/0", None):
        with pytest.raises(InvalidInput):
            rat(bad)


@pytest.mark.parametrize("kind,params", [("randomSquares", {"n": 5}), ("unitSegments", {"families": 2, "per": 3}),
                                         ("clusteredIntervals", {}), ("randomSquares", {"families": 3, "n": 2})])
def test_instance_json_roundtrip(kind, params):
    inst = generate(kind, seed=3, **params)
    text = json.dumps(inst.to_json())
    back = Instance.from_json(json.loads(text))
    assert back.to_json() == inst.to_json()
    assert back.digest() == inst.digest()
    for v in json.loads(text)["families"][0][0]["vertices"][0]:
        assert isinstance(v, str)


def test_hash_ignores_metadata_but_not_coordinates():
    inst = generate("randomSquares", seed=1, n=3)
    j = inst.to_json()
    j2 = dict(j, metadata={"note": "x"}, seed=99)
    assert Instance.from_json(j2).digest() == inst.digest()
    j3 = json.loads(json.dumps(j))
    j3["families"][0][0]["vertices"][0][0] = "1/3"
    assert Instance.from_json(j3).digest() != inst.digest()


def test_malformed_instances_rejected():
    with pytest.raises(InvalidInput):
        Instance.from_json({"dimension": 2, "kind": "blobs", "families": []})
    with pytest.raises(InvalidInput):
        Instance.from_json({"dimension": 2, "kind": "bodies", "families": [[{"vertices": [["0"], ["1"]]}]]})
    with pytest.raises(InvalidInput):
        Instance.from_json({"dimension": 2, "kind": "segments",
                            "families": [[{"vertices": [["0", "0"], ["1", "0"], ["0", "1"]]}]]})
    with pytest.raises(InvalidInput):
        Instance.from_json({"kind": "bodies"})


def test_file_roundtrip(tmp_path):
    inst = generate("randomSquares", seed=2, n=4)
    write_json(tmp_path / "i.json", inst.to_json())
    assert load_instance(tmp_path / "i.json").digest() == inst.digest()
    cert = certify.john(inst)
    write_json(tmp_path / "c.json", cert.to_json())
    assert load_certificate(tmp_path / "c.json") == cert
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".tmp")]


# ---------------------------------------------------------------- generators

def test_stream_is_keyed_by_seed_and_label():
    a = stream(5, "x").integers(0, 2**62, 4)
    assert (a == stream(5, "x").integers(0, 2**62, 4)).all()
    assert not (a == stream(5, "y").integers(0, 2**62, 4)).all()
    assert not (a == stream(6, "x").integers(0, 2**62, 4)).all()


def test_slabs_byte_identical():
    texts = {json.dumps(generate("slabs", seed=7, d=2, eps=F(1, 4), n=16).to_json(), sort_keys=True)
             for _ in range(3)}
    assert len(texts) == 1
    inst = generate("slabs", seed=7, d=2, eps=F(1, 4), n=16)
    groups = [min(v[1] for v in b.vertices) // 3 for b in inst.members]
    assert len(inst.members) == 16 and sorted(groups) == [g for g in range(4) for _ in range(4)]
    assert all(b.volume == 1 for b in inst.members)


def test_unit_segments_exact_length():
    inst = generate("unitSegments", seed=1, d=2, families=4, per=8)
    assert [len(f) for f in inst.families] == [8, 8, 8, 8]
    for s in inst.members:
        assert sum((x - y) ** 2 for x, y in zip(s.a, s.b)) == 1
        assert all(isinstance(x, F) for x in s.a + s.b)


def test_identical_bodies():
    inst = generate("identicalBodies", n=8)
    assert len(inst.members) == 8
    assert all(set(b.extreme_vertices) == {(0, 0), (1, 0), (0, 1), (1, 1)} for b in inst.members)


@pytest.mark.parametrize("kind", ["randomSquares", "clusteredIntervals", "unitSegments", "identicalBodies"])
def test_generators_reproducible(kind):
    a = generate(kind, seed=11).to_json()
    assert a == generate(kind, seed=11).to_json()
    if kind != "identicalBodies":
        assert a["families"] != generate(kind, seed=12).to_json()["families"]


def test_generator_bad_params():
    with pytest.raises(InvalidInput):
        generate("slabs", eps=F(1, 3), n=16)
    with pytest.raises(InvalidInput):
        generate("randomSquares", colour=3)
    with pytest.raises(InvalidInput):
        generate("nope")


# ---------------------------------------------------------------- Monte Carlo oracle

def test_mc_unit_square():
    est = mc_volume(box((0, 0), (1, 1)), samples=10**6)
    assert est.contains(1)


def test_mc_polygon_64():
    # exact rational points on the unit circle
    pts = []
    for k in range(64):
        t = F(np.tan(pi * k / 64 - pi / 2 + 1e-9)).limit_denominator(10**4) if k else None
        pts.append((F(-1), F(0)) if t is None else ((1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)))
    body = ConvexBody(tuple(pts))
    exact = polytope_volume(body)
    assert abs(float(exact) - pi) < 0.01
    assert mc_volume(body, samples=10**6, seed=3).contains(exact)


def test_mc_empty_intersection():
    est = mc_volume([box((0, 0), (1, 1)), box((2, 2), (3, 3))], samples=10**4)
    assert est.estimate == 0


@pytest.mark.parametrize("block", range(5))
def test_mc_agrees_with_exact_volumes(block):
    # 50 instances over 5 blocks: random polygon pairs with a full-dimensional intersection
    rng = np.random.default_rng(1000 + block)
    done = 0
    while done < 10:
        a = ConvexBody(tuple(rand_polygon(rng, int(rng.integers(3, 9)))))
        b = ConvexBody(tuple(rand_polygon(rng, int(rng.integers(3, 9)))))
        inter = intersect_bodies([a, b])
        if inter is None:
            continue
        est = mc_volume([a, b], samples=2 * 10**5, seed=done + 10 * block)
        assert est.contains(inter.volume), (float(inter.volume), est)
        done += 1


# ---------------------------------------------------------------- rendering

def test_render_selection_certificate():
    inst = generate("randomSquares", seed=1, n=8)
    svg = render_svg(inst, certify.selection(inst, "simplex"))
    assert svg.count("<polygon") == 8 and svg.count("<ellipse") == 1
    assert svg == render_svg(inst, certify.selection(inst, "simplex"))


def test_render_diameter_certificate(tmp_path):
    inst = generate("unitSegments", seed=1, families=4, per=4)
    cert = certify.tverberg_diameter(inst, 2)
    svg = render_svg(inst, cert, tmp_path / "d.svg")
    assert svg.count("<line") == 16 + 1
    assert (tmp_path / "d.svg").read_text() == svg


def test_render_rejects_d3():
    with pytest.raises(Unsupported):
        render_svg(generate("randomSquares", d=3, n=2))


# ---------------------------------------------------------------- CLI

def _run(*argv):
    return main([str(a) for a in argv])


def test_cli_select_identical(tmp_path):
    i, c = tmp_path / "inst.json", tmp_path / "cert.json"
    assert _run("gen", "--kind", "identicalBodies", "--n", 8, "--out", i) == 0
    assert _run("select", "--variant", "simplex", "--in", i, "--out", c) == 0
    assert rat(json.loads(c.read_text())["achievedBounds"]["fraction"]) == 1
    assert _run("verify", "--in", i, "--cert", c) == 0


def test_cli_tampered_center_fails(tmp_path):
    i, c = tmp_path / "inst.json", tmp_path / "cert.json"
    _run("gen", "--kind", "randomSquares", "--seed", 4, "--out", i)
    assert _run("select", "--variant", "quadratic", "--in", i, "--out", c) == 0
    cert = json.loads(c.read_text())
    w = cert["payload"]["witness"]["ellipsoid"]
    w["center"][0] = str(rat(w["center"][0]) + 10)
    c.write_text(json.dumps(cert))
    assert _run("verify", "--in", i, "--cert", c) == 3


def test_cli_epsnet_slabs(tmp_path):
    i, c = tmp_path / "inst.json", tmp_path / "cert.json"
    _run("gen", "--kind", "slabs", "--d", 2, "--eps", "1/4", "--n", 16, "--out", i)
    assert _run("epsnet", "--eps", "1/4", "--variant", "quadratic", "--in", i, "--out", c) == 0
    assert json.loads(c.read_text())["achievedBounds"]["size"] >= 4
    assert _run("verify", "--in", i, "--cert", c) == 0


def test_cli_every_command_verifies(tmp_path):
    sq, cf, seg, iv = (tmp_path / n for n in ("sq.json", "cf.json", "seg.json", "iv.json"))
    _run("gen", "--kind", "randomSquares", "--n", 7, "--seed", 2, "--out", sq)
    _run("gen", "--kind", "randomSquares", "--n", 3, "--families", 3, "--spread", 3, "--seed", 3, "--out", cf)
    _run("gen", "--kind", "unitSegments", "--families", 4, "--per", 4, "--seed", 1, "--out", seg)
    _run("gen", "--kind", "clusteredIntervals", "--seed", 1, "--out", iv)
    jobs = [("john", sq), ("select", sq, "--variant", "steinitz"), ("select", sq, "--mode", "diameter",
            "--variant", "quadratic"), ("tverberg", sq, "--r", 2), ("tverberg", cf, "--r", 2),
            ("tverberg-diam", seg), ("sametype", cf), ("homsel", iv)]
    for k, (cmd, inp, *extra) in enumerate(jobs):
        out = tmp_path / f"c{k}.json"
        assert _run(cmd, "--in", inp, "--out", out, *extra) == 0, cmd
        assert _run("verify", "--in", inp, "--cert", out) == 0, cmd
    assert _run("render", "--in", seg, "--cert", tmp_path / "c5.json", "--out", tmp_path / "r.svg") == 0


def test_cli_invalid_input_and_not_found(tmp_path, capsys):
    i = tmp_path / "inst.json"
    i.write_text("{not json")
    assert _run("john", "--in", i, "--out", tmp_path / "o.json") == 4
    assert _run("john", "--in", tmp_path / "missing.json", "--out", tmp_path / "o.json") == 4
    assert _run("select", "--variant", "cubic", "--in", i, "--out", tmp_path / "o.json") == 4
    assert _run("epsnet", "--eps", "a/b", "--in", i, "--out", tmp_path / "o.json") == 4
    write_json(i, generate("randomSquares", n=3).to_json())
    assert _run("homsel", "--in", i, "--out", tmp_path / "o.json") == 4  # needs colour families
    assert _run("render", "--in", i, "--out", tmp_path / "o.svg", "--cert", tmp_path / "missing.json") == 4
    seg = Instance(2, "segments", [[Segment((0, 0), (1, 0))], [Segment((5, 5), (5, 6))]])
    write_json(i, seg.to_json())
    assert _run("tverberg-diam", "--in", i, "--r", 2, "--out", tmp_path / "o.json") in (2, 4)


def test_cli_not_found_exit_code(tmp_path):
    # transversal hulls [0, 3] and [10, 21] are disjoint, so whole families admit no common piece
    inst = Instance(1, "colorFamilies", [[box((0,), (1,)), box((10,), (11,))], [box((2,), (3,)), box((20,), (21,))]])
    i = tmp_path / "inst.json"
    write_json(i, inst.to_json())
    assert _run("homsel", "--target", "1", "--in", i, "--out", tmp_path / "o.json") == 2


# ---------------------------------------------------------------- verifier independence

def _cases():
    return [
        ("john", generate("randomSquares", seed=1, n=4), lambda i: certify.john(i)),
        ("quadratic", generate("randomSquares", seed=1, n=8), lambda i: certify.selection(i, "quadratic")),
        ("simplex", generate("randomSquares", seed=1, n=8), lambda i: certify.selection(i, "simplex")),
        ("diameterSelection", generate("randomSquares", seed=1, n=8),
         lambda i: certify.selection(i, "quadratic", "diameter")),
        ("epsnet", generate("slabs", n=8, eps=F(1, 2)), lambda i: certify.epsnet(i, F(1, 2))),
        ("tverberg", generate("randomSquares", seed=2, n=7), lambda i: certify.tverberg(i, 2)),
        ("colorful", generate("randomSquares", seed=2, n=3, families=6), lambda i: certify.tverberg(i, 2)),
        ("diameter", generate("unitSegments", seed=1, families=4, per=4), lambda i: certify.tverberg_diameter(i, 2)),
        ("sametype", generate("randomSquares", seed=3, n=3, families=3, spread=3), lambda i: certify.sametype(i)),
        ("homogeneous", generate("clusteredIntervals", seed=1), lambda i: certify.homogeneous(i)),
    ]


def _accepted(inst, obj):
    try:
        return bool(verify(inst, Certificate.from_json(obj)))
    except (InvalidInput, ValueError, TypeError, KeyError, IndexError, ZeroDivisionError, ArithmeticError):
        return False


@pytest.mark.parametrize("name,inst,make", _cases(), ids=[c[0] for c in _cases()])
def test_every_single_field_mutation_rejected(name, inst, make):
    cert = make(inst).to_json()
    assert _accepted(inst, cert)
    survivors = [(p, a) for p, a, m in mutants(cert) if _accepted(inst, m)]
    assert survivors == []


def test_certificate_for_other_instance_rejected():
    a, b = generate("randomSquares", seed=1, n=4), generate("randomSquares", seed=2, n=4)
    assert not verify(b, certify.john(a))
