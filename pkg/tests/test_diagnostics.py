from bubbleflow import (DiagnosticsFile, DiagnosticsTracker, StepDiagnostics, make_double_bubble_2d,
                        make_drop_on_substrate, region_volumes, relative_volume_error, surface_energy)
import csv
import numpy as np
import pytest


def test_relative_volume_error():
    assert relative_volume_error([1., 2.], [1., 2.]) == 0.
    assert np.isclose(relative_volume_error([1.1, 2.], [1., 2.]), 0.1)
    assert relative_volume_error([], []) == 0.
    with pytest.raises(ValueError):
        relative_volume_error([1.], [0.])
    with pytest.raises(ValueError):
        relative_volume_error([1., 2.], [1.])


def test_surface_energy_is_total_length():
    c = make_double_bubble_2d(60)
    lengths = sum(np.sum(p.geometry().measure) for p in c.patches)
    assert np.isclose(surface_energy(c), lengths)


def test_double_bubble_volumes():
    volumes = region_volumes(make_double_bubble_2d(400))
    # each half of a 2:1 ellipse has area pi / 4
    assert np.allclose(volumes, np.pi / 4, rtol=1e-3)


def test_drop_volume():
    volumes = region_volumes(make_drop_on_substrate(3, 2000))
    assert np.allclose(volumes, 2. * np.pi / 3, rtol=1e-2)


def test_header():
    assert StepDiagnostics.header(2) == ['t', 'energy_surface', 'energy_contact', 'energy_total', 'vol_1', 'vol_2',
                                         'v_delta', 'mesh_ratio', 'picard_iters']


def test_row_format():
    diag = StepDiagnostics(0.1, 1. / 3, -0.25, [1., 2.], 1e-12, 1.5, picard_iters=4)
    row = diag.row()
    assert row[0] == '0.10000000000000001'
    assert float(row[1]) == 1. / 3
    assert float(row[3]) == 1. / 3 - 0.25
    assert row[-1] == '4'


def test_tracker_contact_energy():
    c = make_drop_on_substrate(2, 33, rho=0.5)
    tracker = DiagnosticsTracker(c)
    initial = tracker.initial(c)
    assert initial.contact_energy == 0.
    X = c.positions()
    Y = X.copy()
    for bl in c.boundaries:
        v = c.offsets[bl.surface] + bl.chain[0]
        Y[v, 0] *= 1.1
    new = c.with_positions(Y)
    diag = tracker.update(c, new, 0.1, 0.1, picard_iters=3)
    assert np.allclose(np.abs(diag.contact_areas), 0.1)
    assert np.isclose(diag.contact_energy, -0.5 * np.sum(diag.contact_areas))
    assert np.isclose(diag.max_speed, 1.)


def test_diagnostics_file(tmpdir):
    filepath = tmpdir.join("diagnostics.csv")
    c = make_double_bubble_2d(60)
    tracker = DiagnosticsTracker(c)
    with DiagnosticsFile(filepath, len(c.regions)) as f:
        f.write(tracker.initial(c))
        with pytest.raises(ValueError):
            f.write(StepDiagnostics(0., 1., 0., [1.], 0., 1.))
    with open(str(filepath), 'rb') as f:
        raw = f.read()
    assert b'\r' not in raw
    rows = list(csv.reader(raw.decode().splitlines()))
    assert rows[0] == StepDiagnostics.header(2)
    assert len(rows) == 2
    assert float(rows[1][1]) == surface_energy(c)
