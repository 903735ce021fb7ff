"""Shared fixtures: the bundled reference scene and its day-course results.

The day course over the full schedule with both engines is the expensive
part of the suite, so it runs once per session and every test that needs
maps or report figures reads from it.
"""

import pytest

import helioflux as hf


@pytest.fixture(scope="session")
def table1_config():
    return hf.load_config(hf.table1_scene_path())


@pytest.fixture(scope="session")
def table1_run(table1_config):
    """(report, maps) for the bundled scene, both engines, both cases."""
    report, maps = hf.day_course(table1_config, collect_maps=True)
    return report, maps


@pytest.fixture(scope="session")
def reference_sun(table1_config):
    return table1_config.reference


@pytest.fixture(scope="session")
def noon_maps(table1_run):
    """Convenience access to the noon maps keyed (variant, case, engine)."""
    _, maps = table1_run
    return {(variant, case, engine): maps[("12h00", variant, case, engine)]
            for variant in ("spherical", "off_axis")
            for case in ("single", "symmetric_pair")
            for engine in ("grt", "conv")}
