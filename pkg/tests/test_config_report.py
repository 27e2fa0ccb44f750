import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perptail.config import config_from_dict, geometric_grid
from perptail.errors import ConfigError
from perptail.report import COLUMNS, TailReport, merge_reports


def test_defaults():
    cfg = config_from_dict({"family": "gamma_exp", "q": 2})
    assert cfg.xs[0] == 4.0 and cfg.xs[-1] == 100.0 and len(cfg.xs) == 12
    assert (cfg.n_samples, cfg.seed, cfg.workers, cfg.out) == (100_000, 0, 1, None)
    assert cfg.resolved()["family"] == "gamma_exp"


def test_grid_endpoints_exact():
    g = geometric_grid(1.3, 77.7, 9)
    assert g[0] == 1.3 and g[-1] == 77.7
    assert all(b > a for a, b in zip(g, g[1:]))


@pytest.mark.parametrize("raw, field", [
    ({"family": "gamma_exp", "q": 1, "xs": [1], "grid": {}}, "xs"),
    ({"family": "gamma_exp", "q": 1, "grid": {"x_min": 5, "x_max": 2}}, "grid"),
    ({"family": "gamma_exp", "q": 1, "seed": -1}, "seed"),
    ({"family": "gamma_exp", "q": 1, "seed": 1.5}, "seed"),
    ({"family": "gamma_exp", "q": 1, "workers": 0}, "workers"),
    ({"family": "gamma_exp", "q": 1, "n_samples": True}, "n_samples"),
    ({"family": "gamma_exp", "q": "1"}, "q"),
    ({"family": "power_uniform", "alpha": 0, "q": 1}, "alpha"),
])
def test_field_errors(raw, field):
    with pytest.raises(ConfigError) as exc:
        config_from_dict(raw)
    assert exc.value.field == field
    assert str(exc.value).startswith(field + ": ")


cells = st.one_of(st.none(), st.floats(-1e300, 1e300))  # 10 digits can round DBL_MAX up to inf


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.floats(0.1, 1e4), st.lists(cells, min_size=len(COLUMNS) - 1,
                                                     max_size=len(COLUMNS) - 1), max_size=6))
def test_csv_round_trip(data):
    rep = TailReport()
    for x, vals in data.items():
        rep.set(x, **dict(zip(COLUMNS[1:], vals)))
    text = rep.to_csv()
    again = TailReport.from_csv(text)
    assert again.to_csv() == text


def test_from_csv_rejects_foreign_header():
    with pytest.raises(ValueError):
        TailReport.from_csv("a,b\r\n1,2\r\n")


def test_merge_fills_gaps():
    a, b = TailReport(), TailReport()
    a.set(2.0, ln_predicted=-4.0)
    b.set(2.0, ln_predicted=-4.0, p_hat=0.1)
    b.set(1.0, p_hat=0.5)
    m = merge_reports([a, b])
    assert m.xs() == [1.0, 2.0]
    assert m.rows[2.0]["p_hat"] == 0.1 and m.rows[2.0]["ln_predicted"] == -4.0
