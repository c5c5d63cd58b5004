import json
from fractions import Fraction

import pytest

from bsl.errors import ParseError, ValidationError
from bsl.moebius import INF, RealMoebius, classify
from bsl.polygon import (
    LabelledPolygon, group_from_dict, group_to_dict, load_group, preset_modular,
    save_group, validate,
)


def test_modular_preset_validates(modular):
    report = validate(modular)
    assert report.ok, str(report)
    assert modular.exact
    assert modular.d == 2


def test_modular_arcs_and_vertices(modular):
    assert modular.letters == ("a", "b", "B", "A")
    assert modular.arc("a") == (INF, 1)
    assert modular.arc("b") == (1, 0)
    assert modular.arc("B") == (0, -1)
    assert modular.arc("A") == (-1, INF)
    assert modular.letter_of(Fraction(1, 2)) == "b"
    assert modular.letter_of(1) == "b"        # arcs are right-open
    assert modular.letter_of(INF) == "a"


def test_modular_cusp_data(modular):
    assert modular.mu == 1
    assert modular.cusp(1).point is INF
    assert modular.cusp(1).parabolic() == RealMoebius(1, 1, 0, 1)


def test_swapped_generator_breaks_pairing(modular):
    gens = dict(modular.generators)
    gens["a"] = gens["A"]
    bad = LabelledPolygon("bad", modular.letters, modular.inverse_of, gens, modular.cusps,
                          modular.precision, modular.ambient_generators, exact=True)
    report = validate(bad)
    assert not report.ok
    assert "pairing" in [c.name for c in report.failures()]


def test_vertex_cycles_are_parabolic(modular, hexagon):
    for P in (modular, hexagon):
        tol = 10 * P.precision.tolerance
        for a in P.letters:
            word = [a]
            while True:
                nxt = P.letter_at(P.o(P.hat(word[-1])) - 1)
                if nxt == a:
                    break
                word.append(nxt)
            assert classify(P.word_map(word), tol) == "parabolic"


def test_hexagon_validates(hexagon):
    report = validate(hexagon)
    assert report.ok, str(report)
    assert not hexagon.exact
    assert len(hexagon.cusps) == 4


def test_hexagon_is_not_arithmetic(hexagon):
    """Traces of products are not integers, so the group is not commensurable
    with the modular group."""
    tol = 10 * hexagon.precision.tolerance
    G = hexagon.generators
    assert abs(G["A"].trace() - 2) <= tol or abs(G["A"].trace() + 2) <= tol
    t1 = (G["A"] @ G["B"]).trace()
    t2 = (G["B"] @ G["C"]).trace()
    assert abs(abs(t1) - Fraction(15, 2)) <= tol
    assert abs(abs(t2) - Fraction(11, 2)) <= tol


def test_cusp_widths_generate_stabilisers(hexagon):
    tol = 10 * hexagon.precision.tolerance
    for c in hexagon.cusps:
        assert c.mu > 0
        assert classify(c.parabolic(), tol) == "parabolic"


def test_round_trip_exact(tmp_path, modular):
    path = tmp_path / "mod.json"
    save_group(modular, path)
    back = load_group(path)
    assert back.exact
    assert back.letters == modular.letters
    assert all(back.generators[a] == modular.generators[a] for a in modular.letters)


def test_round_trip_mp(tmp_path, hexagon):
    path = tmp_path / "hex.json"
    save_group(hexagon, path)
    back = load_group(path)
    tol = hexagon.precision.tolerance
    for a in hexagon.letters:
        assert back.generators[a].close_to(hexagon.generators[a], tol)
    assert abs(back.mu - hexagon.mu) <= tol


def test_parse_error_names_line(tmp_path, modular):
    data = group_to_dict(modular)
    del data["letters"][1]["inverse"]
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(data, indent=2))
    with pytest.raises(ParseError) as info:
        load_group(path)
    assert info.value.field == "letters[1].inverse"
    assert info.value.line is not None


def test_malformed_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"letters": [\n 1, 2,\n')
    with pytest.raises(ParseError) as info:
        load_group(path)
    assert info.value.line is not None


@pytest.mark.parametrize("mutate, field", [
    (lambda d: d.pop("cusps"), "cusps"),
    (lambda d: d.update(d=3), "d"),
    (lambda d: d.update(arithmetic="fuzzy"), "arithmetic"),
    (lambda d: d["letters"][0].update(inverse="a"), "letters[0].inverse"),
])
def test_schema_errors(modular, mutate, field):
    data = group_to_dict(modular)
    mutate(data)
    with pytest.raises(ParseError) as info:
        group_from_dict(data)
    assert info.value.field == field


def test_invalid_polygon_rejected_on_load(tmp_path, modular):
    data = group_to_dict(modular)
    data["letters"][0]["generator_halfplane"] = ["1", "3", "0", "1"]
    data["letters"][3]["generator_halfplane"] = ["1", "-3", "0", "1"]
    path = tmp_path / "wide.json"
    path.write_text(json.dumps(data))
    with pytest.raises(ValidationError):
        load_group(path)


def test_with_precision_rebuilds(hexagon):
    high = hexagon.with_precision(hexagon.precision.doubled())
    assert high.precision.bits == 512
    assert validate(high).ok


def test_preset_precision_argument():
    from bsl.moebius import get_precision
    P = preset_modular(get_precision(128))
    assert P.precision.bits == 128
    assert P.exact
