import copy
import json

import pytest

from conftest import BUNDLE
from paralab.bundle import BundleError, load_bundle, load_bundle_json
from paralab.errors import InputError
from paralab.paranat import check_paranatural

RAW = json.loads(BUNDLE.read_text())


def test_fixture_bundle_loads():
    b = load_bundle(BUNDLE)
    s = b.summary()
    assert s["categories"] == ["idem", "one", "two"]
    assert s["transformations"] == ["badPresheafMap", "constE", "idHom"]
    phi = b.transformations["constE"]
    assert check_paranatural(phi.source, phi.target, phi).ok
    assert len(b.fragments["F12"].objects) == 2


def _broken(edit):
    j = copy.deepcopy(RAW)
    edit(j)
    with pytest.raises(BundleError) as e:
        load_bundle_json(j)
    return e.value


def test_unknown_fixture():
    e = _broken(lambda j: j["categories"]["two"].update(fixture="arrows"))
    assert e.pointer == "/categories/two/fixture"


def test_unknown_base():
    e = _broken(lambda j: j["difunctors"]["hom2"].update(base="three"))
    assert e.pointer == "/difunctors/hom2/base"


def test_component_outside_diagonal():
    e = _broken(lambda j: j["transformations"]["idHom"]["components"]["0"].update(id0="u"))
    assert e.pointer == "/transformations/idHom/components/0/id0"


def test_presheaf_violating_functoriality():
    def edit(j):
        j["difunctors"]["P"]["expr"]["maps"]["u"] = {"z": "w"}
    assert _broken(edit).pointer == "/difunctors/P"


def test_coalgebra_structure_outside_functor():
    e = _broken(lambda j: j["coalgebras"]["P"]["structure"].update(p=["2", "p"]))
    assert e.pointer == "/coalgebras/P/structure/p"


def test_relation_outside_carrier():
    e = _broken(lambda j: j["relations"]["PQ"]["pairs"].append(["p", "q7"]))
    assert e.pointer.startswith("/relations/PQ/pairs/")


def test_unknown_section_and_schema():
    assert _broken(lambda j: j.update(extras={})).pointer == "/extras"
    assert _broken(lambda j: j.update(schema="other/2")).pointer == "/schema"


def test_missing_file():
    with pytest.raises(InputError):
        load_bundle("/nonexistent/bundle.json")


def test_pointer_escaping():
    def edit(j):
        j["categories"]["a/b"] = {"fixture": "nope"}
    assert _broken(edit).pointer == "/categories/a~1b/fixture"
