import json

import pytest

from src.errors import SchemaError
from src.settings import Settings, load_settings


def test_defaults_file_matches_model_defaults():
    assert load_settings() == Settings()
    assert load_settings() is load_settings()


def test_merge_skips_missing_values():
    s = Settings()
    merged = s.merged(max_ext=1, budget=None, order_policy="search")
    assert merged.max_ext == 1
    assert merged.budget == s.budget
    assert merged.order_policy == "search"
    assert s.merged() is s


def test_later_merges_win():
    s = Settings().merged(max_ext=1, workers=3).merged(max_ext=2)
    assert (s.max_ext, s.workers) == (2, 3)


def test_invalid_overrides():
    with pytest.raises(SchemaError) as exc:
        Settings().merged(max_ext=0)
    assert exc.value.pointer == "/max_ext"
    with pytest.raises(SchemaError):
        Settings().merged(order_policy="random")


def test_config_files(tmp_path):
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"budget": 1000, "workers": 1}))
    s = load_settings(good)
    assert s.budget == 1000 and s.max_ext == 2

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": "blue"}))
    with pytest.raises(SchemaError):
        load_settings(bad)

    broken = tmp_path / "broken.json"
    broken.write_text("{")
    with pytest.raises(SchemaError):
        load_settings(broken)

    with pytest.raises(SchemaError):
        load_settings(tmp_path / "missing.json")

