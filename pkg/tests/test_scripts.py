from bubbleflow import UnsupportedConfigurationError, main, make_drop_on_substrate, write_cluster
from bubbleflow.scripts import run_cluster
import json
import pytest


def write_config(tmpdir, **kwargs):
    d = {'scenario': {'name': 'double_bubble_2d', 'K': 60}, 'dt': 1e-2, 'T_final': 0.02,
         'output': {'directory': 'out', 'frames': [0., 0.02]}}
    d.update(kwargs)
    filepath = tmpdir.join("config.json")
    with open(str(filepath), 'w') as f:
        json.dump(d, f)
    return str(filepath)


def test_scenarios_command(capsys):
    assert main(['scenarios']) == 0
    out = capsys.readouterr()[0]
    assert 'double_bubble_2d' in out
    assert 'Presets:' in out


def test_no_command():
    assert main([]) == 1


def test_unknown_flag():
    with pytest.raises(SystemExit) as e:
        main(['run', '--no-such-flag'])
    assert e.value.code == 1


def test_validate(tmpdir, capsys):
    c = make_drop_on_substrate(3, 100)
    good = tmpdir.join("good.json")
    write_cluster(c, good)
    assert main(['validate', str(good)]) == 0
    assert 'pass' in capsys.readouterr()[0]

    X = c.positions()
    X[c.offsets[0] + c.boundaries[0].chain[0], 2] = 0.1
    bad = tmpdir.join("bad.json")
    write_cluster(c.with_positions(X), bad)
    assert main(['validate', str(bad)]) == 1
    assert 'off-plane boundary vertex' in capsys.readouterr()[0]


def test_validate_missing_file(tmpdir):
    assert main(['validate', str(tmpdir.join("missing.json"))]) == 1


def test_run_config(tmpdir):
    assert main(['run', '--quiet', '--config', write_config(tmpdir)]) == 0
    lines = tmpdir.join('out', 'diagnostics.csv').read().splitlines()
    assert lines[0].startswith('t,energy_surface,energy_contact,energy_total,vol_1,vol_2,v_delta')
    assert len(lines) == 4
    assert tmpdir.join('out', 'frame_0.000000.csv').check()
    assert tmpdir.join('out', 'frame_0.020000.csv').check()


def test_run_netcdf_output(tmpdir):
    config = write_config(tmpdir, output={'directory': 'out', 'netcdf': 'trajectory'})
    assert main(['run', '--quiet', '--config', config]) == 0
    assert tmpdir.join('out', 'trajectory.nc').check()


def test_run_overrides(tmpdir):
    config = write_config(tmpdir)
    assert main(['run', '--quiet', '--config', config, '--T-final', '0.01', '--output', 'short']) == 0
    assert len(tmpdir.join('short', 'diagnostics.csv').read().splitlines()) == 3


def test_run_is_deterministic(tmpdir):
    config = write_config(tmpdir)
    assert main(['run', '--quiet', '--config', config, '--output', 'first']) == 0
    assert main(['run', '--quiet', '--config', config, '--output', 'second']) == 0
    assert tmpdir.join('first', 'diagnostics.csv').read() == tmpdir.join('second', 'diagnostics.csv').read()


@pytest.mark.parametrize('kwargs', [{'dt': -1.}, {'T_final': 0.015}, {'mode': 'explicit'},
                                    {'scenario': {'name': 'soap_film'}}])
def test_run_config_errors(kwargs, tmpdir):
    assert main(['run', '--quiet', '--config', write_config(tmpdir, **kwargs)]) == 1


def test_run_needs_one_source(tmpdir):
    assert main(['run', '--quiet']) == 1
    assert main(['run', '--quiet', '--config', write_config(tmpdir), '--preset', 'double_bubble_2d']) == 1


def test_run_solver_failure(tmpdir):
    config = write_config(tmpdir, picard={'tol': 1e-300, 'max': 2})
    assert main(['run', '--quiet', '--config', config]) == 2


def test_run_preset(tmpdir):
    assert main(['run', '--quiet', '--preset', 'double_bubble_2d', '--T-final', '0.01',
                 '--output', str(tmpdir)]) == 0
    assert tmpdir.join('diagnostics.csv').check()


def test_run_unsupported_configuration(tmpdir, monkeypatch):
    def refuse(*args, **kwargs):
        raise UnsupportedConfigurationError("Node 3 lies on a triple junction and on an external plane")

    monkeypatch.setattr(run_cluster, 'run', refuse)
    assert main(['run', '--quiet', '--config', write_config(tmpdir)]) == 2
