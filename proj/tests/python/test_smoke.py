import json
import math

import numpy as np
import pytest

import tgcut


def circle(cx, cy, r, k=24):
    return [[cx + r * math.cos(2 * math.pi * i / k), cy + r * math.sin(2 * math.pi * i / k)] for i in range(k)]


@pytest.fixture(scope="module")
def phantom():
    spec = {"sizes": [64, 64, 8], "drift": {"amplitude_x": 3}, "radius": {"profile": "cone", "r0": 8, "r1": 11}}
    return tgcut.generate_phantom(json.dumps(spec))


def test_phantom_arrays(phantom):
    vol, truth = phantom
    assert vol.sizes == [64, 64, 8]
    assert vol.values.shape == (8, 64, 64)
    assert set(np.unique(vol.values)) == {50.0, 200.0}
    assert np.array_equal(vol.values == 200.0, truth.values == 1)
    voxels, cm3 = tgcut.volume_stats(truth)
    assert voxels == int(truth.values.sum())
    assert cm3 == pytest.approx(voxels * 3 / 1000)


def test_nrrd_round_trip(phantom):
    vol, truth = phantom
    back = tgcut.read_nrrd(vol.to_nrrd())
    assert np.array_equal(back.values, vol.values)
    assert back.pixel_type == "int16"
    assert tgcut.to_mask(tgcut.read_nrrd(truth.to_nrrd())) == truth


def test_segment_one_slice(phantom):
    vol, _ = phantom
    cut = tgcut.segment_one_slice(vol, 0, circle(32, 32, 13), [32, 32])
    assert len(cut["boundary"]) == 40
    assert len(cut["contour"]) == 40
    assert cut["cut_cost"] == pytest.approx(cut["flow_value"])
    radii = [math.hypot(x - 32, y - 32) for x, y in cut["contour"]]
    assert all(7 <= r <= 10 for r in radii)


def test_session_and_replay(phantom):
    vol, truth = phantom
    s = tgcut.Session.start(vol, 0, circle(32, 32, 12), [32, 32])
    for _ in range(7):
        s.accept_and_advance(1, 1)
    report = s.finalize()
    assert report["z_range"] == (0, 7)
    assert s.status == "finalized"
    assert tgcut.dsc(s.voxelize(), truth) >= 90.0
    contours, mask = s.export()
    again = tgcut.replay(vol, s.event_log_json)
    assert again.export() == (contours, mask)
    assert tgcut.event_log(s)["events"][0]["type"] == "start"


def test_errors_carry_reasons(phantom):
    vol, _ = phantom
    with pytest.raises(tgcut.TgcutError) as err:
        tgcut.Session.start(vol, 0, circle(32, 32, 12), [60, 60])
    assert err.value.args[0] == "seed-outside-template"
    with pytest.raises(tgcut.TgcutError):
        tgcut.GraphParams(delta=3)
    with pytest.raises(ValueError):
        tgcut.summarize([1.0])


def test_metrics_and_summary():
    a = tgcut.Mask(np.array([[[1, 1, 0, 0]]], dtype=np.uint8))
    b = tgcut.Mask(np.array([[[0, 1, 1, 0]]], dtype=np.uint8))
    assert tgcut.dsc(a, b) == 50.0
    assert tgcut.hausdorff(a, b) == 1.0
    s = tgcut.summarize([88.43, 80.88, 79.04, 80.17, 84.78, 89.54, 84.14])
    assert s["mean"] == pytest.approx(83.85, abs=0.01)
    assert s["std"] == pytest.approx(4.08, abs=0.01)
