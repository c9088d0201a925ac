"""Smoke tests for the Python surface of the adaptation runtime."""

import os

import pytest

import acas


def data(name):
    return os.path.join(acas.data_dir(), name)


def test_geo_conversions():
    assert acas.dms_to_dd(31, 37, 46.2, "N") == pytest.approx(31.6295, abs=1e-9)
    assert acas.dms_to_dd(0, 0, 0, "N") == 0.0
    dms = acas.dd_to_dms(-7.9811, axis="lon")
    assert dms["hemisphere"] == "W"
    assert acas.dms_to_dd(
        dms["degrees"], dms["minutes"], dms["seconds"], dms["hemisphere"]
    ) == pytest.approx(-7.9811, abs=1e-9)
    with pytest.raises(acas.AcasError):
        acas.dms_to_dd(10, 75, 0, "N")


def test_haversine():
    assert acas.great_circle_distance_km(0, 0, 1, 0) == pytest.approx(111.195, abs=0.01)
    assert acas.great_circle_distance_km(31.6, -7.98, 31.6, -7.98) == 0.0


def test_condition_language():
    cond = acas.Condition("device.hardware.battery.level < 20 or device.connexionMode == '2G'")
    assert cond.evaluate({"device.hardware.battery.level": 15, "device.connexionMode": "4G"})
    assert not cond.evaluate({"device.hardware.battery.level": 80, "device.connexionMode": "4G"})
    assert cond.pretty() == "device.hardware.battery.level < 20 or device.connexionMode == '2G'"
    with pytest.raises(acas.AcasError):
        acas.Condition("user.language == ")


def test_document_canonicalization_round_trip():
    with open(data("restaurants-cas.xml"), encoding="utf-8") as f:
        source = f.read()
    assert acas.canonicalize_document(source) == source


def test_demo_world_optimization_flip():
    world = acas.DemoWorld(data("restaurants-cas.xml"), data("restaurants.json"))
    world.set("device.hardware.battery.level", 80)
    healthy = world.call("search", {"page": 1})
    assert "photoRef" in healthy["items"][0]
    assert "optimized" not in healthy

    world.set("device.hardware.battery.level", 15)
    low = world.call("search", {"page": 1})
    assert low["optimized"] is True
    assert len(low["items"]) <= 5
    assert all("photoRef" not in item for item in low["items"])
    assert any("BatteryStateAS" in line for line in world.last_trace())


def test_demo_world_async_cache():
    world = acas.DemoWorld(data("restaurants-cas.xml"), data("restaurants.json"))
    world.set("user.language", "fr")
    world.call("search", {}, mode="async")
    assert not world.last_cache_hit()
    world.call("search", {}, mode="async")
    assert world.last_cache_hit()
    stats = world.cache_stats()
    assert stats["hits"] == 1 and stats["misses"] == 1


def test_scenario_files_pass():
    result = acas.run_scenario_files(
        data("restaurants-cas.xml"),
        data("scenario-full.txt"),
        data("restaurants.json"),
    )
    assert result["exit_code"] == 0, result["failures"]
    assert ">> call 1:" in result["transcript"]


def test_scenario_script_inline():
    world = acas.DemoWorld(data("restaurants-cas.xml"), data("restaurants.json"))
    # The User view needs language AND preferences before UserAS is pertinent.
    script = "\n".join(
        [
            'set user.language "fr"',
            'set user.preferences {"cuisines": [], "maxPriceTier": 4}',
            "call RestaurantsSearching.search {}",
            'expect /items/0/name "Le Tajine Royal"',
            "expect /items/0/names absent",
        ]
    )
    result = world.run_script(script)
    assert result["exit_code"] == 0, result["failures"]
