import json

import numpy as np
import pytest

from exceptions import RepositoryError
from repositories import CsvSampleLogRepository, JsonReportRepository, ReportRepository


def test_json_report_is_written_as_plain_json(tmp_path):
    repo = JsonReportRepository(str(tmp_path / 'out'), version='1.0.0')
    report = {'count': np.int64(3), 'values': np.array([0.5, 1.5])}
    path = repo.save('intersect_rp-rp_n2_seed0', report, {'n': 2}, {'started': 'now'})

    assert path.name == 'intersect_rp-rp_n2_seed0.json'
    written = json.loads(path.read_text())
    assert set(written) == {'report', 'config', 'version', 'metadata'}
    assert written['report'] == {'count': 3, 'values': [0.5, 1.5]}
    assert written['version'] == '1.0.0'


def test_report_repositories_only_write(tmp_path):
    assert ReportRepository.__abstractmethods__ == frozenset({'save'})
    assert not hasattr(JsonReportRepository(str(tmp_path)), 'load')


def test_json_reports_have_sorted_keys(tmp_path):
    repo = JsonReportRepository(str(tmp_path))
    repo.save('r', {'b': 1, 'a': 2}, {}, {})
    text = (tmp_path / 'r.json').read_text()
    assert text.index('"a"') < text.index('"b"')
    assert text.endswith('\n')


def test_unserializable_report_fails(tmp_path):
    repo = JsonReportRepository(str(tmp_path))
    with pytest.raises(RepositoryError):
        repo.save('bad', {'value': object()}, {}, {})


def test_json_save_into_a_file_path_fails(tmp_path):
    blocker = tmp_path / 'blocker'
    blocker.write_text('')
    with pytest.raises(RepositoryError):
        JsonReportRepository(str(blocker)).save('r', {}, {}, {})


def test_sample_log_rows(tmp_path):
    log = CsvSampleLogRepository(str(tmp_path))
    path = log.open('crofton_clifford-clifford_n2_seed0_samples')
    log.append(0, 4, 0.125, 'clean', 0.5)
    log.append(1, 0, None, 'failed', 1.25)
    log.close()

    lines = path.read_text().splitlines()
    assert lines == [
        'sample_index,count,min_sigma,flag,seconds',
        '0,4,0.125,clean,0.500000',
        '1,0,,failed,1.250000'
    ]
    assert json.loads('[' + lines[1].split(',')[2] + ']') == [0.125]


def test_sample_log_requires_an_open_file(tmp_path):
    log = CsvSampleLogRepository(str(tmp_path))
    with pytest.raises(RepositoryError):
        log.append(0, 2, 0.5, 'clean', 0.1)
    log.open('once')
    log.close()
    with pytest.raises(RepositoryError):
        log.append(0, 2, 0.5, 'clean', 0.1)
