"""Concentration ratios, day-course simulation and variant comparison.

The concentration ratio of a map is its peak flux density over DNI, i.e.
the peak cell value of a map in suns.  A day course re-aims the heliostats
for every scheduled sun position while keeping each canting set frozen at
the one computed for the reference sun; the off-axis optimization is a
one-time re-alignment, not a per-time adjustment.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .flux import convolve_flux, map_add, trace_flux_grt
from .heliostat import (module_centres, off_axis_canting, off_axis_context,
                        realize_modules, spherical_canting)

VARIANTS = ("spherical", "off_axis")
CASES = ("single", "symmetric_pair")


def concentration_ratio(flux_map):
    """Peak concentration in suns (peak cell value of the DNI-normalized map)."""
    if flux_map.values.size == 0:
        raise ValueError("empty flux map")
    return float(flux_map.values.max())


def intercepted_power(flux_map, diameter):
    """Fraction of the on-grid power inside the centred disc of ``diameter``."""
    if diameter <= 0.0:
        raise ValueError("aperture diameter must be positive")
    grid = flux_map.grid
    yy = grid.centres_y()[:, None]
    zz = grid.centres_z()[None, :]
    inside = yy * yy + zz * zz <= (0.5 * diameter) ** 2
    total = flux_map.values.sum()
    if total == 0.0:
        return 0.0
    return float(flux_map.values[inside].sum() / total)


@dataclass
class ConcentrationReport:
    """Per-time concentration figures for every variant and case.

    ``peak[(case, variant)]`` and ``intercepted[(case, variant)]`` are
    arrays over the schedule; ``gain[case]`` is C_offaxis / C_spherical - 1
    per time (negative entries mean the off-axis canting loses at that
    hour, which does happen far from the reference sun).  ``cantings``
    keeps the frozen canting set per heliostat and variant, ``engine_rms``
    the cross-engine RMS/peak figures when both engines ran.
    """

    labels: tuple
    cases: tuple
    variants: tuple
    engine: str
    peak: dict = field(default_factory=dict)
    intercepted: dict = field(default_factory=dict)
    gain: dict = field(default_factory=dict)
    cantings: dict = field(default_factory=dict)
    engine_rms: dict = field(default_factory=dict)


def _case_heliostats(scene, case):
    if case == "single":
        return list(scene.heliostats)
    if case == "symmetric_pair":
        out = list(scene.heliostats)
        out.extend(h.mirrored() for h in scene.heliostats)
        return out
    raise ValueError(f"unknown case {case!r}")


def _engine_list(engine):
    if engine == "both":
        return ("grt", "conv")
    if engine in ("grt", "conv"):
        return (engine,)
    raise ValueError(f"unknown engine {engine!r}")


def day_course(scene, schedule=None, variants=VARIANTS, cases=None, engine=None,
               collect_maps=False):
    """Simulate the schedule for every variant and case.

    Canting sets are computed once per (heliostat, variant) from the scene
    reference sun and reused across all times.  Per-heliostat maps are
    computed once per (time, variant, engine) and composed into cases by
    cell-wise addition, so a pair map is exactly the sum of its singles.

    ``schedule``, ``cases`` and ``engine`` default to the scene settings.
    When the engine is "both", the reported numbers come from the
    convolution engine and the GRT maps feed the cross-engine RMS record.
    Returns the report, and the map dictionary keyed
    (label, variant, case, engine) when ``collect_maps`` is set.
    """
    if schedule is None:
        schedule = scene.schedule
    if len(schedule) == 0:
        raise ValueError("empty schedule")
    if cases is None:
        cases = getattr(scene, "cases", CASES)
    engine = engine or scene.engine
    engines = _engine_list(engine)
    report_engine = "conv" if engine == "both" else engine

    all_heliostats = {}
    for case in cases:
        for h in _case_heliostats(scene, case):
            all_heliostats[h.name] = h

    report = ConcentrationReport(labels=tuple(e.label for e in schedule),
                                 cases=tuple(cases), variants=tuple(variants),
                                 engine=report_engine)

    layouts = {}
    for name, h in all_heliostats.items():
        layouts[name] = module_centres(h)
        for variant in variants:
            if variant == "spherical":
                canting = spherical_canting(h, layouts[name], h.slant_distance)
            elif variant == "off_axis":
                ctx = off_axis_context(h, scene.reference)
                canting = off_axis_canting(h, layouts[name], ctx, h.slant_distance)
            else:
                raise ValueError(f"unknown variant {variant!r}")
            report.cantings[(name, variant)] = canting

    maps = {}
    for (case, variant) in ((c, v) for c in cases for v in variants):
        report.peak[(case, variant)] = np.zeros(len(schedule))
        report.intercepted[(case, variant)] = np.zeros(len(schedule))

    for it, entry in enumerate(schedule):
        sun = entry.position
        single = {}  # (name, variant, engine) -> FluxMap
        for name, h in all_heliostats.items():
            for variant in variants:
                facets = realize_modules(h, layouts[name],
                                         report.cantings[(name, variant)], sun)
                for eng in engines:
                    if eng == "grt":
                        m = trace_flux_grt(facets, sun, scene.sunshape, scene.receiver,
                                           dni=scene.dni,
                                           surface_samples=scene.surface_samples,
                                           radial_nodes=scene.radial_nodes,
                                           azimuth_nodes=scene.azimuth_nodes,
                                           heliostat_ids=(name,))
                    else:
                        m = convolve_flux(facets, sun, scene.sunshape, scene.receiver,
                                          dni=scene.dni,
                                          surface_samples=scene.surface_samples,
                                          heliostat_ids=(name,))
                    single[(name, variant, eng)] = m

        for case in cases:
            names = [h.name for h in _case_heliostats(scene, case)]
            for variant in variants:
                case_maps = {}
                for eng in engines:
                    combined = single[(names[0], variant, eng)]
                    for extra in names[1:]:
                        combined = map_add(combined, single[(extra, variant, eng)])
                    case_maps[eng] = combined
                    if collect_maps:
                        maps[(entry.label, variant, case, eng)] = combined
                if len(engines) == 2:
                    ref = case_maps["grt"]
                    diff = case_maps["conv"].values - ref.values
                    rms = math.sqrt(float((diff * diff).mean()))
                    report.engine_rms[(entry.label, variant, case)] = \
                        rms / float(ref.values.max())
                chosen = case_maps[report_engine]
                report.peak[(case, variant)][it] = concentration_ratio(chosen)
                report.intercepted[(case, variant)][it] = intercepted_power(
                    chosen, scene.receiver.diameter)

    for case in cases:
        if "spherical" in variants and "off_axis" in variants:
            sph = report.peak[(case, "spherical")]
            oa = report.peak[(case, "off_axis")]
            report.gain[case] = oa / sph - 1.0

    if collect_maps:
        return report, maps
    return report
