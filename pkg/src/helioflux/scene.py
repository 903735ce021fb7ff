"""Scene configuration: a flat INI-style text format.

Grammar (all angles in degrees, lengths in meters):

    [site]                       # optional, defaults shown
    latitude = 45.37
    longitude = 0.0

    [sunshape]                   # optional
    kind = limb_darkened         # or pillbox
    half_angle_deg = 0.26643     # 4.65 mrad default
    limb_coefficient = 0.5138

    [receiver]                   # required
    diameter = 1.2
    grid_extent = 4.0
    grid_cells = 256

    [heliostat NAME]             # required, one section per heliostat
    position = 86.6, 50.0, 0.0
    width = 3.4
    height = 3.0
    modules_across = 4
    modules_up = 2
    module_width = 0.7
    module_height = 1.4
    focal_length = 100.0
    reflectivity = 1.0

    [schedule]                   # required; exactly one of hours/angles/times
    hours = 9.0, 10.5, 12.0      # ideal equinox path at the site latitude
    # angles = -54.5 29.8; 0 44.63; 54.5 29.8
    # times = 2022-09-23T09:00; 2022-09-23T12:00   (UTC, uses the ephemeris)
    # labels = morning, noon, afternoon

    [reference]                  # optional
    sun = equinox-noon           # or "<azimuth> <elevation>"

    [run]                        # optional
    engine = both                # grt | conv | both
    cases = single, symmetric_pair
    dni = 1.0
    out = out
    surface_samples = 32
    radial_nodes = 24
    azimuth_nodes = 48

Unknown sections or keys are errors; every default that applies is
recorded in the config echo.
"""

import configparser
import math
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from importlib import resources

from .errors import ConfigError
from .heliostat import HeliostatSpec
from .receiver import GridSpec, ReceiverSpec
from .sun import (LIMB_COEFFICIENT, SOLAR_HALF_ANGLE, ScheduleEntry, SiteSpec,
                  SunPosition, SunshapeModel, ephemeris, hour_label,
                  ideal_equinox_position)

_SECTION_KEYS = {
    "site": {"latitude", "longitude"},
    "sunshape": {"kind", "half_angle_deg", "limb_coefficient"},
    "receiver": {"diameter", "grid_extent", "grid_cells"},
    "heliostat": {"position", "width", "height", "modules_across", "modules_up",
                  "module_width", "module_height", "focal_length", "reflectivity"},
    "schedule": {"hours", "angles", "times", "labels"},
    "reference": {"sun"},
    "run": {"engine", "cases", "dni", "out", "surface_samples", "radial_nodes",
            "azimuth_nodes"},
}


@dataclass(frozen=True)
class SceneConfig:
    """Fully resolved scene: every field is populated, defaults included."""

    site: SiteSpec
    sunshape: SunshapeModel
    receiver: ReceiverSpec
    heliostats: tuple
    schedule: tuple
    reference: SunPosition
    engine: str = "both"
    cases: tuple = ("single", "symmetric_pair")
    dni: float = 1.0
    out_dir: str = "out"
    surface_samples: int = 32
    radial_nodes: int = 24
    azimuth_nodes: int = 48

    def echo(self):
        """Every effective parameter as '<section>.<key> = <value>' lines."""
        lines = [
            f"site.latitude = {self.site.latitude!r}",
            f"site.longitude = {self.site.longitude!r}",
            f"sunshape.kind = {self.sunshape.kind}",
            f"sunshape.half_angle_deg = {math.degrees(self.sunshape.half_angle)!r}",
            f"sunshape.limb_coefficient = {self.sunshape.limb_coefficient!r}",
            f"receiver.diameter = {self.receiver.diameter!r}",
            f"receiver.grid_extent = {self.receiver.grid.extent_y!r}",
            f"receiver.grid_cells = {self.receiver.grid.cells_y!r}",
        ]
        for h in self.heliostats:
            p = f"heliostat.{h.name}"
            lines += [
                f"{p}.position = {h.position[0]!r}, {h.position[1]!r}, {h.position[2]!r}",
                f"{p}.width = {h.width!r}",
                f"{p}.height = {h.height!r}",
                f"{p}.modules_across = {h.modules_across}",
                f"{p}.modules_up = {h.modules_up}",
                f"{p}.module_width = {h.module_width!r}",
                f"{p}.module_height = {h.module_height!r}",
                f"{p}.focal_length = {h.focal_length!r}",
                f"{p}.reflectivity = {h.reflectivity!r}",
            ]
        for entry in self.schedule:
            lines.append(f"schedule.{entry.label} = azimuth {entry.position.azimuth!r}, "
                         f"elevation {entry.position.elevation!r}")
        lines += [
            f"reference.sun = azimuth {self.reference.azimuth!r}, "
            f"elevation {self.reference.elevation!r}",
            f"run.engine = {self.engine}",
            f"run.cases = {', '.join(self.cases)}",
            f"run.dni = {self.dni!r}",
            f"run.out = {self.out_dir}",
            f"run.surface_samples = {self.surface_samples}",
            f"run.radial_nodes = {self.radial_nodes}",
            f"run.azimuth_nodes = {self.azimuth_nodes}",
        ]
        return lines


def table1_scene_path():
    """Path of the bundled single-heliostat reference scene."""
    return str(resources.files("helioflux").joinpath("data/table1.scene"))


def _get_float(section, key, raw, minimum=None, maximum=None):
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: {raw!r} is not a number") from None
    if minimum is not None and value < minimum:
        raise ConfigError(f"[{section}] {key}: {value} below minimum {minimum}")
    if maximum is not None and value > maximum:
        raise ConfigError(f"[{section}] {key}: {value} above maximum {maximum}")
    return value


def _get_int(section, key, raw, minimum=None):
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: {raw!r} is not an integer") from None
    if minimum is not None and value < minimum:
        raise ConfigError(f"[{section}] {key}: {value} below minimum {minimum}")
    return value


def _split_list(raw):
    return [item.strip() for item in raw.split(",") if item.strip()]


def _parse_heliostat(name, items):
    known = _SECTION_KEYS["heliostat"]
    for key in items:
        if key not in known:
            raise ConfigError(f"[heliostat {name}] unknown key {key!r}")
    if "position" not in items:
        raise ConfigError(f"[heliostat {name}] missing required key 'position'")
    coords = _split_list(items["position"])
    if len(coords) != 3:
        raise ConfigError(f"[heliostat {name}] position needs three coordinates")
    position = tuple(_get_float(f"heliostat {name}", "position", c) for c in coords)
    if position[0] <= 0.0:
        raise ConfigError(f"[heliostat {name}] position: X' must be positive so the "
                          "receiver front face sees the heliostat")
    sec = f"heliostat {name}"
    focal = _get_float(sec, "focal_length", items.get("focal_length", "100.0"),
                       minimum=80.0, maximum=120.0)
    try:
        return HeliostatSpec(
            position=position,
            width=_get_float(sec, "width", items.get("width", "3.4"), minimum=0.0),
            height=_get_float(sec, "height", items.get("height", "3.0"), minimum=0.0),
            modules_across=_get_int(sec, "modules_across",
                                    items.get("modules_across", "4"), minimum=1),
            modules_up=_get_int(sec, "modules_up", items.get("modules_up", "2"),
                                minimum=1),
            module_width=_get_float(sec, "module_width",
                                    items.get("module_width", "0.7"), minimum=0.0),
            module_height=_get_float(sec, "module_height",
                                     items.get("module_height", "1.4"), minimum=0.0),
            focal_length=focal,
            reflectivity=_get_float(sec, "reflectivity",
                                    items.get("reflectivity", "1.0"),
                                    minimum=0.0, maximum=1.0),
            name=name,
        )
    except ValueError as exc:
        raise ConfigError(f"[heliostat {name}] {exc}") from None


def _parse_schedule(items, site):
    modes = [k for k in ("hours", "angles", "times") if k in items]
    if len(modes) != 1:
        raise ConfigError("[schedule] needs exactly one of 'hours', 'angles' or 'times'")
    labels = _split_list(items["labels"]) if "labels" in items else None
    entries = []

    if modes[0] == "hours":
        hours = [_get_float("schedule", "hours", h, minimum=0.0, maximum=24.0)
                 for h in _split_list(items["hours"])]
        for k, hour in enumerate(hours):
            pos = ideal_equinox_position(site.latitude, hour)
            label = labels[k] if labels else hour_label(hour)
            entries.append((label, pos))
    elif modes[0] == "angles":
        pairs = [p.strip() for p in items["angles"].split(";") if p.strip()]
        for k, pair in enumerate(pairs):
            parts = pair.split()
            if len(parts) != 2:
                raise ConfigError(f"[schedule] angles: entry {k}: expected "
                                  f"'<azimuth> <elevation>', got {pair!r}")
            az = _get_float("schedule", "angles", parts[0])
            el = _get_float("schedule", "angles", parts[1])
            label = labels[k] if labels else f"t{k:02d}"
            entries.append((label, SunPosition(azimuth=az, elevation=el)))
    else:
        stamps = [p.strip() for p in items["times"].split(";") if p.strip()]
        for k, stamp in enumerate(stamps):
            try:
                t = datetime.fromisoformat(stamp.replace("Z", "+00:00"))
            except ValueError:
                raise ConfigError(f"[schedule] times: entry {k}: {stamp!r} is not an "
                                  "ISO datetime") from None
            if t.tzinfo is None:
                t = t.replace(tzinfo=timezone.utc)
            pos = ephemeris(site, t)
            label = labels[k] if labels else t.strftime("%Hh%M")
            entries.append((label, pos))

    if labels and len(labels) != len(entries):
        raise ConfigError("[schedule] labels: count does not match the schedule length")
    if not entries:
        raise ConfigError("[schedule] the schedule is empty")
    for k, (label, pos) in enumerate(entries):
        if pos.elevation <= 0.0:
            raise ConfigError(f"[schedule] entry {k} ({label}): sun elevation "
                              f"{pos.elevation:.2f} deg is not above the horizon")
    seen = set()
    for label, _ in entries:
        if label in seen:
            raise ConfigError(f"[schedule] duplicate label {label!r}")
        seen.add(label)
    return tuple(ScheduleEntry(label=label, position=pos) for label, pos in entries)


def _parse_reference(items, site):
    raw = items.get("sun", "equinox-noon").strip()
    if raw == "equinox-noon":
        if not 0.0 < site.latitude < 90.0:
            raise ConfigError("[reference] equinox-noon needs a site latitude in "
                              "(0, 90) degrees")
        return SunPosition(azimuth=0.0, elevation=90.0 - site.latitude)
    parts = raw.split()
    if len(parts) != 2:
        raise ConfigError("[reference] sun: expected 'equinox-noon' or "
                          "'<azimuth> <elevation>'")
    az = _get_float("reference", "sun", parts[0])
    el = _get_float("reference", "sun", parts[1])
    if el <= 0.0:
        raise ConfigError(f"[reference] sun elevation {el} deg is not above the horizon")
    return SunPosition(azimuth=az, elevation=el)


def load_config(path):
    """Parse and validate a scene file into a fully resolved SceneConfig."""
    parser = configparser.ConfigParser(delimiters=("=",), comment_prefixes=("#",),
                                       inline_comment_prefixes=("#",), strict=True,
                                       interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh, source=str(path))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    except configparser.Error as exc:
        raise ConfigError(f"parse error in {path}: {exc}") from None

    sections = dict(parser.items())
    sections.pop("DEFAULT", None)

    heliostat_sections = {}
    for section in list(sections):
        if section.startswith("heliostat"):
            parts = section.split(None, 1)
            name = parts[1].strip() if len(parts) == 2 else ""
            if not name:
                raise ConfigError(f"[{section}] heliostat sections need a name: "
                                  "[heliostat NAME]")
            if name in heliostat_sections:
                raise ConfigError(f"duplicate heliostat name {name!r}")
            heliostat_sections[name] = dict(sections.pop(section))
        elif section not in _SECTION_KEYS:
            raise ConfigError(f"unknown section [{section}]")

    missing = []
    if "receiver" not in sections:
        missing.append("[receiver]")
    if not heliostat_sections:
        missing.append("[heliostat <name>]")
    if "schedule" not in sections:
        missing.append("[schedule]")
    if missing:
        raise ConfigError(f"missing required sections: {', '.join(missing)}")

    for section in ("site", "sunshape", "receiver", "schedule", "reference", "run"):
        for key in sections.get(section, {}):
            if key not in _SECTION_KEYS[section]:
                raise ConfigError(f"[{section}] unknown key {key!r}")

    site_items = sections.get("site", {})
    site = SiteSpec(
        latitude=_get_float("site", "latitude", site_items.get("latitude", "45.37"),
                            minimum=-90.0, maximum=90.0),
        longitude=_get_float("site", "longitude", site_items.get("longitude", "0.0"),
                             minimum=-180.0, maximum=180.0),
    )

    shape_items = sections.get("sunshape", {})
    kind = shape_items.get("kind", "limb_darkened").strip()
    if "half_angle_deg" in shape_items:
        half_angle = math.radians(_get_float("sunshape", "half_angle_deg",
                                             shape_items["half_angle_deg"]))
    else:
        half_angle = SOLAR_HALF_ANGLE
    try:
        sunshape = SunshapeModel(
            kind=kind, half_angle=half_angle,
            limb_coefficient=_get_float("sunshape", "limb_coefficient",
                                        shape_items.get("limb_coefficient",
                                                        str(LIMB_COEFFICIENT))))
    except ValueError as exc:
        raise ConfigError(f"[sunshape] {exc}") from None

    recv_items = sections["receiver"]
    if "diameter" not in recv_items:
        raise ConfigError("[receiver] missing required key 'diameter'")
    try:
        grid = GridSpec(
            extent_y=_get_float("receiver", "grid_extent",
                                recv_items.get("grid_extent", "4.0"), minimum=0.1),
            extent_z=_get_float("receiver", "grid_extent",
                                recv_items.get("grid_extent", "4.0"), minimum=0.1),
            cells_y=_get_int("receiver", "grid_cells",
                             recv_items.get("grid_cells", "256"), minimum=16),
            cells_z=_get_int("receiver", "grid_cells",
                             recv_items.get("grid_cells", "256"), minimum=16),
        )
        receiver = ReceiverSpec(
            diameter=_get_float("receiver", "diameter", recv_items["diameter"],
                                minimum=0.0),
            grid=grid)
    except ValueError as exc:
        raise ConfigError(f"[receiver] {exc}") from None

    heliostats = tuple(_parse_heliostat(name, items)
                       for name, items in heliostat_sections.items())
    schedule = _parse_schedule(sections["schedule"], site)
    reference = _parse_reference(sections.get("reference", {}), site)

    run_items = sections.get("run", {})
    engine = run_items.get("engine", "both").strip()
    if engine not in ("grt", "conv", "both"):
        raise ConfigError(f"[run] engine: {engine!r} is not one of grt, conv, both")
    cases = tuple(_split_list(run_items.get("cases", "single, symmetric_pair")))
    for case in cases:
        if case not in ("single", "symmetric_pair"):
            raise ConfigError(f"[run] cases: unknown case {case!r}")
    if not cases:
        raise ConfigError("[run] cases: at least one case is required")

    return SceneConfig(
        site=site, sunshape=sunshape, receiver=receiver, heliostats=heliostats,
        schedule=schedule, reference=reference, engine=engine, cases=cases,
        dni=_get_float("run", "dni", run_items.get("dni", "1.0"), minimum=0.0),
        out_dir=run_items.get("out", "out").strip(),
        surface_samples=_get_int("run", "surface_samples",
                                 run_items.get("surface_samples", "32"), minimum=2),
        radial_nodes=_get_int("run", "radial_nodes",
                              run_items.get("radial_nodes", "24"), minimum=1),
        azimuth_nodes=_get_int("run", "azimuth_nodes",
                               run_items.get("azimuth_nodes", "48"), minimum=4),
    )


def with_overrides(config, engine=None, out_dir=None, grid_cells=None,
                   surface_samples=None):
    """Apply command-line overrides, returning a new SceneConfig."""
    if engine is not None:
        config = replace(config, engine=engine)
    if out_dir is not None:
        config = replace(config, out_dir=out_dir)
    if grid_cells is not None:
        grid = GridSpec(extent_y=config.receiver.grid.extent_y,
                        extent_z=config.receiver.grid.extent_z,
                        cells_y=grid_cells, cells_z=grid_cells)
        config = replace(config, receiver=replace(config.receiver, grid=grid))
    if surface_samples is not None:
        config = replace(config, surface_samples=surface_samples)
    return config
